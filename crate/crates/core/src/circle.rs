//! Projection onto the circle `[0, 1)` and the CIUPM predicate.
//!
//! Wrapping sums integer translates of a density,
//! `ρ_wrapped(t) = Σ_k ρ(t + k)`, which for compact support is a finite sum
//! over the integers meeting the support. A measure is a CIUPM for `T` when
//! both its wrap and the wrap of its image under `T` are identically one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::density::{AffineMap, Linear, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::segments::{self, Segment};

/// Piecewise-linear density on the circle, breakpoints running from 0 to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleDensity {
    breakpoints: Vec<Scalar>,
    pieces: Vec<Linear>,
}

impl CircleDensity {
    pub fn constant_one() -> CircleDensity {
        CircleDensity {
            breakpoints: vec![Scalar::zero(), Scalar::one()],
            pieces: vec![Linear::constant(Scalar::one())],
        }
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Linear] {
        &self.pieces
    }

    pub fn intervals(&self) -> impl Iterator<Item = (&Scalar, &Scalar, &Linear)> {
        self.pieces.iter().enumerate().map(|(i, f)| (&self.breakpoints[i], &self.breakpoints[i + 1], f))
    }

    pub fn mass(&self) -> Scalar {
        self.intervals().map(|(a, b, f)| f.integral(a, b)).sum()
    }

    pub fn eval(&self, t: &Scalar) -> Result<Scalar> {
        let t = t.frac()?;
        for (a, b, f) in self.intervals() {
            if a.le(&t)? && t.lt(b)? {
                return Ok(f.eval(&t));
            }
        }
        Ok(Scalar::zero())
    }

    /// Rotation by `θ`: `t ↦ ρ(t − θ)` read mod 1.
    pub fn rotate(&self, theta: &Scalar) -> Result<CircleDensity> {
        let shift = theta.frac()?;
        let segs: Vec<Segment> =
            self.intervals().map(|(a, b, f)| Segment { lo: a + &shift, hi: b + &shift, f: f.shift(&shift) }).collect();
        wrap_segments(&segs)
    }

    /// Circle densities from the line-density JSON representation.
    pub fn from_parts(breakpoints: Vec<Scalar>, pieces: Vec<Linear>) -> Result<CircleDensity> {
        if breakpoints.len() != pieces.len() + 1 {
            return Err(Error::InvalidArgument("breakpoint/piece count mismatch".into()));
        }
        let segs: Vec<Segment> = pieces
            .into_iter()
            .enumerate()
            .map(|(i, f)| Segment { lo: breakpoints[i].clone(), hi: breakpoints[i + 1].clone(), f })
            .collect();
        for s in &segs {
            if s.lo.lt(&Scalar::zero())? || Scalar::one().lt(&s.hi)? || !s.lo.lt(&s.hi)? {
                return Err(Error::InvalidArgument("circle breakpoints must increase within [0, 1]".into()));
            }
        }
        wrap_segments(&segs)
    }
}

/// An interval endpoint straddling an integer is taken to be that integer,
/// consistent with how coincident breakpoints are grouped.
fn snap_integer(x: &Scalar) -> Scalar {
    match x {
        Scalar::Exact(_) => x.clone(),
        Scalar::Approx(_) => {
            let k = x.upper().floor();
            let lo = x.lower();
            // exactly one integer inside
            if k >= lo && &k - BigRational::one() < lo {
                Scalar::Exact(k)
            } else {
                x.clone()
            }
        }
    }
}

/// Splits every segment at the integers it crosses and folds the pieces onto
/// `[0, 1)`.
pub(crate) fn wrap_segments(segs: &[Segment]) -> Result<CircleDensity> {
    let mut folded = vec![Segment { lo: Scalar::zero(), hi: Scalar::one(), f: Linear::zero() }];
    for s in segs {
        let s = &Segment { lo: snap_integer(&s.lo), hi: snap_integer(&s.hi), f: s.f.clone() };
        let first = s.lo.floor()?;
        let mut k = first.clone();
        loop {
            let ks = Scalar::from_big(k.clone());
            if !ks.lt(&s.hi)? {
                break;
            }
            let next = Scalar::from_big(&k + BigInt::one());
            let lo = if k == first { s.lo.clone() } else { ks.clone() };
            let hi = if next.lt(&s.hi)? { next } else { s.hi.clone() };
            // ρ(t + k) on [lo − k, hi − k)
            let neg = -&ks;
            let piece = Segment { lo: &lo - &ks, hi: &hi - &ks, f: s.f.shift(&neg) };
            folded.push(piece);
            k += 1;
        }
    }
    let (b, p) = segments::superpose(&folded);
    let (breakpoints, pieces) = segments::merge_adjacent(b, p);
    Ok(CircleDensity { breakpoints, pieces })
}

/// Wrap of a density on the line onto the circle.
pub fn wrap(mu: &PiecewiseDensity) -> Result<CircleDensity> {
    wrap_segments(&mu.segments())
}

/// Distribution function of the wrapped measure through the line CDF:
/// `F(t) = Σ_k [F_μ(t + k) − F_μ(k)]` for `t ∈ [0, 1)`.
pub fn wrapped_cdf(mu: &PiecewiseDensity, t: &Scalar) -> Result<Scalar> {
    let lo = mu.support_min().floor()?;
    let hi = mu.support_max().floor()?;
    let mut acc = Scalar::zero();
    let mut k = lo;
    while k <= hi {
        let ks = Scalar::from_big(k.clone());
        acc = &acc + &(&mu.cdf_eval(&(t + &ks))? - &mu.cdf_eval(&ks)?);
        k += 1;
    }
    Ok(acc)
}

/// `sup_t |ρ(t) − 1|` over the circle, from piece endpoints.
pub fn uniformity_deviation(cd: &CircleDensity) -> Scalar {
    let one = Scalar::one();
    let mut dev = Scalar::zero();
    for (a, b, f) in cd.intervals() {
        for t in [a, b] {
            dev = dev.max_sound(&(&f.eval(t) - &one).abs());
        }
    }
    dev
}

/// Result of the CIUPM check: both deviations and the verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CiupmCheck {
    pub ok: bool,
    pub dev_mu: Scalar,
    pub dev_push: Scalar,
}

/// Whether `mu` wraps to the uniform law and so does its image under `map`,
/// each within `tol`.
pub fn is_ciupm(mu: &PiecewiseDensity, map: &AffineMap, tol: &Scalar) -> Result<CiupmCheck> {
    if tol.upper() < num_rational::BigRational::from_integer(0.into()) {
        return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
    }
    let dev_mu = uniformity_deviation(&wrap(mu)?);
    let dev_push = uniformity_deviation(&wrap(&mu.pushforward(map))?);
    let within = |d: &Scalar| -> Option<bool> {
        match d.compare(tol) {
            Ok(o) => Some(o != std::cmp::Ordering::Greater),
            Err(_) => None,
        }
    };
    let ok = match (within(&dev_mu), within(&dev_push)) {
        (Some(false), _) | (_, Some(false)) => false,
        (Some(true), Some(true)) => true,
        _ => {
            return Err(Error::AmbiguousComparison(format!(
                "deviations {} / {} against tolerance {}",
                dev_mu.to_decimal(6),
                dev_push.to_decimal(6),
                tol
            )))
        }
    };
    Ok(CiupmCheck { ok, dev_mu, dev_push })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn sv(xs: &[&str]) -> Vec<Scalar> {
        xs.iter().map(|x| s(x)).collect()
    }

    fn example2() -> PiecewiseDensity {
        PiecewiseDensity::step(sv(&["0", "1/3", "1", "4/3"]), sv(&["1/2", "1", "1/2"])).unwrap()
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap(&example2()).unwrap(), CircleDensity::constant_one());
        let u = PiecewiseDensity::uniform(s("1/4"), s("5/4")).unwrap();
        assert_eq!(wrap(&u).unwrap(), CircleDensity::constant_one());
        let wide = PiecewiseDensity::uniform(s("0"), s("3/2")).unwrap();
        let w = wrap(&wide).unwrap();
        assert_eq!(w.breakpoints(), sv(&["0", "1/2", "1"]).as_slice());
        assert_eq!(w.pieces(), &[Linear::constant(s("4/3")), Linear::constant(s("2/3"))]);
    }

    #[test]
    fn wrap_matches_grid_oracle() {
        // Oracle: sum ρ(t + k) pointwise at cell midpoints.
        let mu = PiecewiseDensity::new(
            sv(&["-3/4", "1/2", "2"]),
            vec![Linear::new(s("3/5"), s("2/5")), Linear::constant(s("5/24"))],
        )
        .unwrap();
        let w = wrap(&mu).unwrap();
        for i in 0..50 {
            let t = Scalar::ratio(2 * i + 1, 100);
            let mut sum = Scalar::zero();
            for k in -2..=3 {
                sum = &sum + &mu.eval(&(&t + &Scalar::int(k))).unwrap();
            }
            assert_eq!(w.eval(&t).unwrap(), sum);
        }
        assert_eq!(w.mass(), s("1"));
    }

    #[test]
    fn wrapped_cdf_agrees_with_wrap() {
        let mu = example2().translate(&s("-2/7"));
        let w = wrap(&mu).unwrap();
        for i in 0..=10 {
            let t = Scalar::ratio(i, 10);
            let direct: Scalar = w
                .intervals()
                .map(|(a, b, f)| {
                    if t.le(a).unwrap() {
                        Scalar::zero()
                    } else if t.lt(b).unwrap() {
                        f.integral(a, &t)
                    } else {
                        f.integral(a, b)
                    }
                })
                .sum();
            assert_eq!(wrapped_cdf(&mu, &t).unwrap(), direct);
        }
    }

    #[test]
    fn deviation_examples() {
        assert_eq!(uniformity_deviation(&CircleDensity::constant_one()), s("0"));
        assert_eq!(uniformity_deviation(&wrap(&example2()).unwrap()), s("0"));
        let wide = PiecewiseDensity::uniform(s("0"), s("3/2")).unwrap();
        assert_eq!(uniformity_deviation(&wrap(&wide).unwrap()), s("1/3"));
    }

    #[test]
    fn is_ciupm_examples() {
        let t = AffineMap::linear(s("3/2")).unwrap();
        let c = is_ciupm(&example2(), &t, &s("0")).unwrap();
        assert_eq!(c, CiupmCheck { ok: true, dev_mu: s("0"), dev_push: s("0") });
        let u = PiecewiseDensity::uniform(s("0"), s("1")).unwrap();
        let c = is_ciupm(&u, &t, &s("0")).unwrap();
        assert_eq!(c, CiupmCheck { ok: false, dev_mu: s("0"), dev_push: s("1/3") });
    }

    #[test]
    fn rotation_equivariance() {
        let mu = example2();
        for g in ["1/5", "-7/3", "5/2"] {
            let g = s(g);
            let lhs = wrap(&mu.translate(&g)).unwrap();
            let rhs = wrap(&mu).unwrap().rotate(&g).unwrap();
            assert_eq!(lhs, rhs);
        }
        let wide = PiecewiseDensity::uniform(s("0"), s("3/2")).unwrap();
        let lhs = wrap(&wide.translate(&s("1/4"))).unwrap();
        let rhs = wrap(&wide).unwrap().rotate(&s("1/4")).unwrap();
        assert_eq!(lhs, rhs);
    }
}
