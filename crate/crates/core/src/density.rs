//! Compactly supported piecewise-linear probability densities on the line.
//!
//! A density is stored as breakpoints `b₀ < … < bₙ` and one linear piece
//! `c0 + c1·t` per half-open interval `[b_{i−1}, b_i)`. Canonical form merges
//! adjacent equal pieces and trims zero pieces at both ends, so two densities
//! are equal (almost everywhere) exactly when their canonical forms are equal.
//!
//! All operations here map degree-≤1 pieces to degree-≤1 pieces, which keeps
//! nonnegativity and uniformity checks down to endpoint evaluations.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::scalar::{default_tolerance, Scalar, DEFAULT_PRECISION_BITS};
use crate::segments::{self, Segment};

/// `t ↦ c0 + c1·t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear {
    pub c0: Scalar,
    pub c1: Scalar,
}

impl Linear {
    pub fn new(c0: Scalar, c1: Scalar) -> Linear {
        Linear { c0, c1 }
    }

    pub fn zero() -> Linear {
        Linear::constant(Scalar::zero())
    }

    pub fn constant(c: Scalar) -> Linear {
        Linear { c0: c, c1: Scalar::zero() }
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        &self.c0 + &(&self.c1 * t)
    }

    pub fn is_exact(&self) -> bool {
        self.c0.is_exact() && self.c1.is_exact()
    }

    /// Identically zero, or possibly so for interval coefficients.
    pub fn may_be_zero(&self) -> bool {
        self.c0.may_be_zero() && self.c1.may_be_zero()
    }

    pub fn coincides(&self, other: &Linear) -> bool {
        self.c0.coincides(&other.c0) && self.c1.coincides(&other.c1)
    }

    pub(crate) fn hull(&self, other: &Linear) -> Linear {
        Linear { c0: self.c0.hull(&other.c0), c1: self.c1.hull(&other.c1) }
    }

    pub fn scale(&self, k: &Scalar) -> Linear {
        Linear { c0: &self.c0 * k, c1: &self.c1 * k }
    }

    /// `t ↦ f(t − γ)`.
    pub fn shift(&self, gamma: &Scalar) -> Linear {
        Linear { c0: &self.c0 - &(&self.c1 * gamma), c1: self.c1.clone() }
    }

    /// `∫_a^b f`.
    pub fn integral(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let half = Scalar::ratio(1, 2);
        let width = b - a;
        let sq = &(b * b) - &(a * a);
        &(&self.c0 * &width) + &(&(&self.c1 * &sq) * &half)
    }
}

impl<'a> std::ops::Add<&'a Linear> for &'a Linear {
    type Output = Linear;

    fn add(self, rhs: &Linear) -> Linear {
        Linear { c0: &self.c0 + &rhs.c0, c1: &self.c1 + &rhs.c1 }
    }
}

/// `x ↦ βx + α` with `β ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    alpha: Scalar,
    beta: Scalar,
}

impl AffineMap {
    pub fn new(alpha: Scalar, beta: Scalar) -> Result<AffineMap> {
        if beta.may_be_zero() {
            return Err(Error::ZeroSlope);
        }
        Ok(AffineMap { alpha, beta })
    }

    /// `x ↦ βx`.
    pub fn linear(beta: Scalar) -> Result<AffineMap> {
        AffineMap::new(Scalar::zero(), beta)
    }

    /// `x ↦ x + γ`.
    pub fn translation(gamma: Scalar) -> AffineMap {
        AffineMap { alpha: gamma, beta: Scalar::one() }
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn apply(&self, x: &Scalar) -> Scalar {
        &(&self.beta * x) + &self.alpha
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.beta.recip().expect("slope is nonzero");
        AffineMap { alpha: -(&self.alpha * &inv), beta: inv }
    }

    pub fn is_orientation_reversing(&self) -> bool {
        // decided at construction: the interval excludes zero
        self.beta.upper().is_negative()
    }
}

/// Compactly supported piecewise-linear probability density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseDensity {
    breakpoints: Vec<Scalar>,
    pieces: Vec<Linear>,
}

impl PiecewiseDensity {
    /// Builds and validates a density: strictly increasing breakpoints,
    /// nonnegative pieces, unit mass. The result is in canonical form.
    pub fn new(breakpoints: Vec<Scalar>, pieces: Vec<Linear>) -> Result<PiecewiseDensity> {
        if breakpoints.len() != pieces.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints for {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        segments::check_increasing(&breakpoints)?;
        let d = PiecewiseDensity::canonical(breakpoints, pieces);
        d.validate()?;
        Ok(d)
    }

    /// Density `Σ fᵢ·1[loᵢ, hiᵢ)` for possibly overlapping segments; empty
    /// segments are ignored.
    pub fn from_segments(segs: Vec<(Scalar, Scalar, Linear)>) -> Result<PiecewiseDensity> {
        let mut bag = Vec::with_capacity(segs.len());
        for (lo, hi, f) in segs {
            match lo.compare(&hi)? {
                Ordering::Less => bag.push(Segment { lo, hi, f }),
                Ordering::Equal => {}
                Ordering::Greater => return Err(Error::UnsortedBreakpoints),
            }
        }
        let (b, p) = segments::superpose(&bag);
        let d = PiecewiseDensity::canonical(b, p);
        d.validate()?;
        Ok(d)
    }

    /// Uniform density on `[a, b)`.
    pub fn uniform(a: Scalar, b: Scalar) -> Result<PiecewiseDensity> {
        let h = (&b - &a).recip()?;
        PiecewiseDensity::new(vec![a, b], vec![Linear::constant(h)])
    }

    /// Piecewise-constant density from cell boundaries and cell values.
    pub fn step(breakpoints: Vec<Scalar>, values: Vec<Scalar>) -> Result<PiecewiseDensity> {
        PiecewiseDensity::new(breakpoints, values.into_iter().map(Linear::constant).collect())
    }

    fn canonical(b: Vec<Scalar>, p: Vec<Linear>) -> PiecewiseDensity {
        let (b, p) = segments::merge_adjacent(b, p);
        let (breakpoints, pieces) = segments::trim_zeros(b, p);
        PiecewiseDensity { breakpoints, pieces }
    }

    fn validate(&self) -> Result<()> {
        for (i, f) in self.pieces.iter().enumerate() {
            for t in [&self.breakpoints[i], &self.breakpoints[i + 1]] {
                if f.eval(t).upper().is_negative() {
                    return Err(Error::NegativeDensity(t.to_decimal(12)));
                }
            }
        }
        let mass = self.mass();
        match &mass {
            Scalar::Exact(m) if m.is_one() => Ok(()),
            Scalar::Exact(_) => Err(Error::MassNotOne(mass.to_string())),
            Scalar::Approx(_) => {
                let bits = mass.precision_bits().unwrap_or(DEFAULT_PRECISION_BITS);
                let slack = default_tolerance(bits).midpoint();
                let one = BigRational::one();
                let gap_below = &one - mass.upper();
                let gap_above = mass.lower() - &one;
                if gap_below > slack || gap_above > slack {
                    Err(Error::MassNotOne(mass.to_decimal(12)))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Linear] {
        &self.pieces
    }

    pub fn is_exact(&self) -> bool {
        self.breakpoints.iter().all(Scalar::is_exact) && self.pieces.iter().all(Linear::is_exact)
    }

    /// Every coefficient is constant.
    pub fn is_piecewise_constant(&self) -> bool {
        self.pieces.iter().all(|f| f.c1.is_zero())
    }

    /// Pieces with their interval endpoints.
    pub fn intervals(&self) -> impl Iterator<Item = (&Scalar, &Scalar, &Linear)> {
        self.pieces.iter().enumerate().map(|(i, f)| (&self.breakpoints[i], &self.breakpoints[i + 1], f))
    }

    pub(crate) fn segments(&self) -> Vec<Segment> {
        self.intervals().map(|(a, b, f)| Segment { lo: a.clone(), hi: b.clone(), f: f.clone() }).collect()
    }

    pub fn support_min(&self) -> &Scalar {
        &self.breakpoints[0]
    }

    pub fn support_max(&self) -> &Scalar {
        self.breakpoints.last().expect("nonempty density")
    }

    pub fn mass(&self) -> Scalar {
        self.intervals().map(|(a, b, f)| f.integral(a, b)).sum()
    }

    /// Density value with the half-open piece convention.
    pub fn eval(&self, t: &Scalar) -> Result<Scalar> {
        for (a, b, f) in self.intervals() {
            if a.le(t)? && t.lt(b)? {
                return Ok(f.eval(t));
            }
        }
        Ok(Scalar::zero())
    }

    /// `t ↦ ρ(t − γ)`.
    pub fn translate(&self, gamma: &Scalar) -> PiecewiseDensity {
        PiecewiseDensity {
            breakpoints: self.breakpoints.iter().map(|b| b + gamma).collect(),
            pieces: self.pieces.iter().map(|f| f.shift(gamma)).collect(),
        }
    }

    /// `t ↦ ρ(−t)`.
    pub fn reflect(&self) -> PiecewiseDensity {
        PiecewiseDensity {
            breakpoints: self.breakpoints.iter().rev().map(|b| -b).collect(),
            pieces: self.pieces.iter().rev().map(|f| Linear { c0: f.c0.clone(), c1: -&f.c1 }).collect(),
        }
    }

    /// Density of the image measure `μ∘T⁻¹`: `t ↦ ρ((t − α)/β)/|β|`.
    pub fn pushforward(&self, map: &AffineMap) -> PiecewiseDensity {
        let beta = map.beta();
        let alpha = map.alpha();
        let inv = beta.recip().expect("slope is nonzero");
        let inv_abs = inv.abs();
        // ρ((t−α)/β)/|β| = (c0 − c1·α/β)/|β| + (c1/(β|β|))·t
        let map_piece = |f: &Linear| {
            let c1 = &(&f.c1 * &inv) * &inv_abs;
            let c0 = &(&f.c0 - &(&(&f.c1 * alpha) * &inv)) * &inv_abs;
            Linear { c0, c1 }
        };
        let mut breakpoints: Vec<Scalar> = self.breakpoints.iter().map(|b| map.apply(b)).collect();
        let mut pieces: Vec<Linear> = self.pieces.iter().map(map_piece).collect();
        if map.is_orientation_reversing() {
            breakpoints.reverse();
            pieces.reverse();
        }
        PiecewiseDensity { breakpoints, pieces }
    }

    /// Convex combination `Σ wᵢ ρᵢ`.
    pub fn mix(weights: &[Scalar], measures: &[PiecewiseDensity]) -> Result<PiecewiseDensity> {
        if weights.is_empty() || weights.len() != measures.len() {
            return Err(Error::WeightsNotProbability);
        }
        if weights.iter().any(|w| w.upper().is_negative() || (w.is_exact() && w.lower().is_negative())) {
            return Err(Error::WeightsNotProbability);
        }
        let total: Scalar = weights.iter().cloned().sum();
        if !total.coincides(&Scalar::one()) {
            return Err(Error::WeightsNotProbability);
        }
        let mut bag = Vec::new();
        for (w, m) in weights.iter().zip(measures) {
            if w.is_zero() {
                continue;
            }
            bag.extend(m.segments().into_iter().map(|s| Segment { f: s.f.scale(w), ..s }));
        }
        let (b, p) = segments::superpose(&bag);
        let d = PiecewiseDensity::canonical(b, p);
        d.validate()?;
        Ok(d)
    }

    /// `(diameter, lebesgue)` of the support.
    pub fn support_metrics(&self) -> (Scalar, Scalar) {
        let diameter = self.support_max() - self.support_min();
        let lebesgue = self.intervals().filter(|(_, _, f)| !f.may_be_zero()).map(|(a, b, _)| b - a).sum();
        (diameter, lebesgue)
    }

    /// `F(t) = μ((−∞, t])`.
    pub fn cdf_eval(&self, t: &Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        // F is continuous, so a t indistinguishable from a breakpoint may
        // be integrated up to on either side.
        for (a, b, f) in self.intervals() {
            if t.coincides(a) || t.le(a)? {
                break;
            }
            if t.coincides(b) || t.lt(b)? {
                return Ok(&acc + &f.integral(a, t));
            }
            acc = &acc + &f.integral(a, b);
        }
        Ok(acc)
    }

    /// Smallest `t` with `F(t) = u`; plateaus resolve to their left end.
    ///
    /// Piecewise-linear densities give piecewise-quadratic CDFs, so inside a
    /// sloped piece the answer may be a surd; it is returned as an interval
    /// at `bits` precision unless the discriminant is an exact square.
    pub fn cdf_invert(&self, u: &Scalar, bits: u32) -> Result<Scalar> {
        if u.upper().is_negative() || u.lower() > BigRational::one() {
            return Err(Error::InvalidArgument(format!("quantile level {u} outside [0, 1]")));
        }
        let mut acc = Scalar::zero();
        for (a, b, f) in self.intervals() {
            if u.le(&acc)? {
                return Ok(a.clone());
            }
            let m = f.integral(a, b);
            let next = &acc + &m;
            if u.le(&next)? {
                let r = u - &acc;
                return solve_partial_mass(f, a, &r, bits);
            }
            acc = next;
        }
        Ok(self.support_max().clone())
    }

    /// Reflection about the midpoint of the support.
    pub fn reflect_about_center(&self) -> PiecewiseDensity {
        let shift = self.support_min() + self.support_max();
        self.reflect().translate(&shift)
    }
}

/// Solves `∫_a^t f = r` for `t ≥ a` on a piece where `f ≥ 0`.
fn solve_partial_mass(f: &Linear, a: &Scalar, r: &Scalar, bits: u32) -> Result<Scalar> {
    let fa = f.eval(a);
    if f.c1.is_zero() {
        return Ok(a + &r.checked_div(&fa)?);
    }
    // (c1/2)(t−a)² + f(a)(t−a) − r = 0, take the nonnegative root in the
    // cancellation-free form 2r / (f(a) + √(f(a)² + 2·c1·r)).
    let disc = &(&fa * &fa) + &(&(&Scalar::int(2) * &f.c1) * r);
    let root = disc.sqrt(bits)?;
    let denom = &fa + &root;
    if denom.is_zero() {
        return Ok(a.clone());
    }
    Ok(a + &(&Scalar::int(2) * r).checked_div(&denom)?)
}
