//! Slope classification, the diameter threshold `c_β`, and the explicit
//! CIUPM families.
//!
//! Rationality is decided by representation: exact scalars are rational,
//! interval scalars (surds) are irrational. Slopes in `(0, 1)` and negative
//! slopes are obtained from the `β ≥ 1` formulas by rescaling
//! (`ρ_β(t) = β·ρ_{1/β}(βt)`) and by sign symmetry (`ρ_β = ρ_{−β}`).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::density::{AffineMap, Linear, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeKind {
    /// `|β| = k`.
    Integer {
        k: BigInt,
    },
    /// `|β| = p/q` in lowest terms with `q ≥ 2`, and `s = q·⟨|β|⟩`.
    RationalNonInteger {
        p: BigInt,
        q: BigInt,
        s: BigInt,
    },
    Irrational {
        beta_abs: Scalar,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeClass {
    /// `+1` or `−1`.
    pub sign: i8,
    pub kind: SlopeKind,
}

impl SlopeClass {
    /// `(p, q)` for rational slopes; integers have `q = 1`.
    pub fn p_q(&self) -> Option<(BigInt, BigInt)> {
        match &self.kind {
            SlopeKind::Integer { k } => Some((k.clone(), BigInt::one())),
            SlopeKind::RationalNonInteger { p, q, .. } => Some((p.clone(), q.clone())),
            SlopeKind::Irrational { .. } => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self.kind, SlopeKind::Irrational { .. })
    }
}

pub fn classify_slope(beta: &Scalar) -> Result<SlopeClass> {
    match beta {
        Scalar::Exact(b) => {
            if b.is_zero() {
                return Err(Error::ZeroSlope);
            }
            let sign = if b.is_negative() { -1 } else { 1 };
            let a = b.abs();
            let (p, q) = (a.numer().clone(), a.denom().clone());
            let kind = if q.is_one() {
                SlopeKind::Integer { k: p }
            } else {
                let s = p.mod_floor(&q);
                SlopeKind::RationalNonInteger { p, q, s }
            };
            Ok(SlopeClass { sign, kind })
        }
        Scalar::Approx(_) => {
            if beta.may_be_zero() {
                return Err(Error::ZeroSlope);
            }
            let sign = if beta.upper().is_negative() { -1 } else { 1 };
            Ok(SlopeClass { sign, kind: SlopeKind::Irrational { beta_abs: beta.abs() } })
        }
    }
}

/// `c_β = 1 + 1/|β| − 1/p_β` for rational slopes, `1 + 1/|β|` otherwise.
pub fn threshold_c(beta: &Scalar) -> Result<Scalar> {
    let class = classify_slope(beta)?;
    let inv = beta.abs().recip()?;
    let base = &Scalar::one() + &inv;
    Ok(match class.p_q() {
        Some((p, _)) => &base - &Scalar::Exact(BigRational::new(BigInt::one(), p)),
        None => base,
    })
}

fn exact(n: &BigInt, d: &BigInt) -> Scalar {
    Scalar::Exact(BigRational::new(n.clone(), d.clone()))
}

fn seg(lo: Scalar, hi: Scalar, f: Linear) -> (Scalar, Scalar, Linear) {
    (lo, hi, f)
}

/// Staircase block of the rational minimal density, shifted by `offset`:
/// value `j/q` on `[(j−1)/p, j/p)` and on `[1 + (q−j−1)/p, 1 + (q−j)/p)`.
fn staircase(p: &BigInt, q: &BigInt, offset: &Scalar) -> Vec<(Scalar, Scalar, Linear)> {
    let mut out = Vec::new();
    let one = BigInt::one();
    let mut j = BigInt::one();
    while &j < q {
        let v = Linear::constant(exact(&j, q));
        let a = offset + &exact(&(&j - &one), p);
        let b = offset + &exact(&j, p);
        out.push(seg(a, b, v.clone()));
        let c = offset + &(&Scalar::one() + &exact(&(q - &j - &one), p));
        let d = offset + &(&Scalar::one() + &exact(&(q - &j), p));
        out.push(seg(c, d, v));
        j += 1;
    }
    out
}

/// Unit plateau `[(q−1)/p, 1)` shifted by `offset`.
fn plateau(p: &BigInt, q: &BigInt, offset: &Scalar) -> (Scalar, Scalar, Linear) {
    let a = offset + &exact(&(q - BigInt::one()), p);
    let b = offset + &Scalar::one();
    seg(a, b, Linear::constant(Scalar::one()))
}

/// Ramp-plateau-ramp profile on `[0, 1 + 1/β]`: `βt`, then `1`, then
/// `1 + β − βt`.
fn ramp_profile(beta: &Scalar) -> Result<PiecewiseDensity> {
    let inv = beta.recip()?;
    let one = Scalar::one();
    PiecewiseDensity::from_segments(vec![
        seg(Scalar::zero(), inv.clone(), Linear::new(Scalar::zero(), beta.clone())),
        seg(inv.clone(), one.clone(), Linear::constant(one.clone())),
        seg(one.clone(), &one + &inv, Linear::new(&one + beta, -beta)),
    ])
}

/// The minimal-diameter CIUPM `μ_β`, supported on `[0, c_β]`.
pub fn minimal_ciupm(beta: &Scalar) -> Result<PiecewiseDensity> {
    let class = classify_slope(beta)?;
    let abs = beta.abs();
    if class.sign < 0 {
        return minimal_ciupm(&abs);
    }
    if abs.compare(&Scalar::one())? == Ordering::Less {
        let inv = abs.recip()?;
        return Ok(minimal_ciupm(&inv)?.pushforward(&AffineMap::linear(inv)?));
    }
    match class.p_q() {
        Some((p, q)) => {
            let zero = Scalar::zero();
            let mut segs = staircase(&p, &q, &zero);
            segs.push(plateau(&p, &q, &zero));
            PiecewiseDensity::from_segments(segs)
        }
        None => ramp_profile(&abs),
    }
}

fn rational_at_least_one(beta: &Scalar, what: &str) -> Result<(BigInt, BigInt)> {
    let class = classify_slope(beta)?;
    let out_of_range = || Error::SlopeOutOfRange(format!("{what} needs a rational slope ≥ 1, got {beta}"));
    if class.sign < 0 {
        return Err(out_of_range());
    }
    let (p, q) = class.p_q().ok_or_else(out_of_range)?;
    if p < q {
        return Err(out_of_range());
    }
    Ok((p, q))
}

/// Tent density on `[0, 1 + 1/β]` for rational `β ≥ 1`: a CIUPM whose
/// diameter exceeds `c_β` unless `β` is an integer.
pub fn tent_ciupm(beta: &Scalar) -> Result<PiecewiseDensity> {
    rational_at_least_one(beta, "tent density")?;
    ramp_profile(beta)
}

/// `Σ wᵢ · μ_β(· − oᵢ(c − c_β))`: a CIUPM of diameter exactly `c` built from
/// translates of the minimal one.
pub fn fat_family(beta: &Scalar, c: &Scalar, weights: &[Scalar], offsets: &[Scalar]) -> Result<PiecewiseDensity> {
    let threshold = threshold_c(beta)?;
    if c.lt(&threshold)? {
        return Err(Error::DiameterBelowThreshold { c: c.to_string(), threshold: threshold.to_string() });
    }
    if weights.is_empty() || weights.len() != offsets.len() {
        return Err(Error::InvalidArgument("need one offset per weight".into()));
    }
    if weights.iter().any(|w| !w.lower().is_positive()) {
        return Err(Error::WeightsNotProbability);
    }
    let (zero, one) = (Scalar::zero(), Scalar::one());
    if offsets.len() == 1 {
        if offsets[0].lt(&zero)? || one.lt(&offsets[0])? {
            return Err(Error::InvalidArgument("offset must lie in [0, 1]".into()));
        }
    } else {
        if offsets[0] != zero || offsets[offsets.len() - 1] != one {
            return Err(Error::InvalidArgument("offsets must start at 0 and end at 1".into()));
        }
        for w in offsets.windows(2) {
            if !w[0].lt(&w[1])? {
                return Err(Error::InvalidArgument("offsets must be strictly increasing".into()));
            }
        }
    }
    let base = minimal_ciupm(beta)?;
    let slack = c - &threshold;
    let parts: Vec<PiecewiseDensity> = offsets.iter().map(|o| base.translate(&(o * &slack))).collect();
    PiecewiseDensity::mix(weights, &parts)
}

/// CIUPM with staircase block at `m·q` and unit plateau at `n·q`; its
/// support has Lebesgue measure `c_β` and is an interval iff `m = n`.
pub fn disconnected_ciupm(beta: &Scalar, m: i64, n: i64) -> Result<PiecewiseDensity> {
    let (p, q) = rational_at_least_one(beta, "disconnected family")?;
    let qs = Scalar::from_big(q.clone());
    let m_off = &Scalar::int(m) * &qs;
    let n_off = &Scalar::int(n) * &qs;
    let mut segs = staircase(&p, &q, &m_off);
    segs.push(plateau(&p, &q, &n_off));
    PiecewiseDensity::from_segments(segs)
}

/// `λ|[0,1/2] + λ|[3/2,2]`, a CIUPM for every integer slope, with support
/// of Lebesgue measure 1 and diameter 2.
pub fn split_integer_ciupm() -> PiecewiseDensity {
    let one = Linear::constant(Scalar::one());
    PiecewiseDensity::from_segments(vec![
        seg(Scalar::zero(), Scalar::ratio(1, 2), one.clone()),
        seg(Scalar::ratio(3, 2), Scalar::int(2), one),
    ])
    .expect("valid density")
}

/// Cell values of a density that is constant on the cells of width `h`
/// covering `[0, n·h)`; `None` if some cell is not constant.
pub fn grid_values(mu: &PiecewiseDensity, h: &BigRational, cells: usize) -> Result<Option<Vec<BigRational>>> {
    let mut out = Vec::with_capacity(cells);
    let hs = Scalar::Exact(h.clone());
    for i in 0..cells {
        let a = &Scalar::int(i as i64) * &hs;
        let b = &a + &hs;
        let mid = &(&a + &b) * &Scalar::ratio(1, 2);
        let va = mu.eval(&a)?;
        let vm = mu.eval(&mid)?;
        // a constant cell has mass h·value
        let mass = &mu.cdf_eval(&b)? - &mu.cdf_eval(&a)?;
        if va != vm || mass != &vm * &hs {
            return Ok(None);
        }
        match vm {
            Scalar::Exact(v) => out.push(v),
            Scalar::Approx(_) => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Small helper for reports: `|β|` as `p/q` text when rational.
pub fn describe_slope(class: &SlopeClass) -> String {
    match &class.kind {
        SlopeKind::Integer { k } => format!("integer k={k}"),
        SlopeKind::RationalNonInteger { p, q, s } => format!("rational p={p} q={q} s={s}"),
        SlopeKind::Irrational { beta_abs } => {
            format!("irrational |β|≈{}", beta_abs.to_f64())
        }
    }
}
