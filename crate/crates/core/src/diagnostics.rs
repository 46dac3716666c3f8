//! Sampling from densities and uniform-distribution-mod-1 statistics.
//!
//! Points are drawn by inverse-CDF transform of a driver sequence in
//! `[0, 1)`. Statistics work on exact fractional parts: interval samples
//! (from sloped pieces or irrational parameters) are read at their midpoint,
//! since these are diagnostics, not certificates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circle::is_ciupm;
use crate::density::{AffineMap, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::scalar::{default_tolerance, Scalar, DEFAULT_PRECISION_BITS};

type Q = BigRational;

pub const DEFAULT_WEYL_H: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Driver {
    /// ChaCha8 seeded from a 64-bit value; 53-bit dyadic outputs.
    Pseudorandom { seed: u64 },
    /// Radical inverse of `0, 1, 2, …` in the given base.
    VanDerCorput { base: u32 },
    /// `⟨i·step⟩` for `i = 1, 2, …`.
    Kronecker { step: Scalar },
}

impl Driver {
    pub fn describe(&self) -> String {
        match self {
            Driver::Pseudorandom { seed } => format!("pseudorandom(seed={seed})"),
            Driver::VanDerCorput { base } => format!("van-der-corput(base={base})"),
            Driver::Kronecker { step } => format!("kronecker(step={step})"),
        }
    }

    /// The first `n` driver values, all exact dyadic or rational in `[0, 1)`.
    pub fn values(&self, n: usize) -> Result<Vec<Q>> {
        match self {
            Driver::Pseudorandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let denom = BigInt::from(1u64 << 53);
                Ok((0..n).map(|_| Q::new(BigInt::from(rng.next_u64() >> 11), denom.clone())).collect())
            }
            Driver::VanDerCorput { base } => {
                if *base < 2 {
                    return Err(Error::InvalidArgument("van der Corput base must be at least 2".into()));
                }
                Ok((0..n as u64).map(|i| radical_inverse(i, *base)).collect())
            }
            Driver::Kronecker { step } => {
                Ok((1..=n as i64).map(|i| frac_q(&(&Scalar::int(i) * step).midpoint())).collect())
            }
        }
    }
}

pub fn radical_inverse(mut i: u64, base: u32) -> Q {
    let b = BigInt::from(base);
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    while i > 0 {
        let digit = i % base as u64;
        num = num * &b + digit;
        den *= &b;
        i /= base as u64;
    }
    Q::new(num, den)
}

fn frac_q(x: &Q) -> Q {
    x - x.floor()
}

#[derive(Clone, Debug)]
pub struct SamplePlan {
    pub source: PiecewiseDensity,
    pub n: usize,
    pub driver: Driver,
    /// Precision for surd quantiles on sloped pieces.
    pub bits: u32,
}

impl SamplePlan {
    pub fn new(source: PiecewiseDensity, n: usize, driver: Driver) -> SamplePlan {
        SamplePlan { source, n, driver, bits: DEFAULT_PRECISION_BITS }
    }
}

/// `x_i = F⁻¹(u_i)`; the inversion runs in parallel, order preserved.
pub fn sample(plan: &SamplePlan) -> Result<Vec<Scalar>> {
    if plan.n == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let us = plan.driver.values(plan.n)?;
    us.into_par_iter().map(|u| plan.source.cdf_invert(&Scalar::Exact(u), plan.bits)).collect()
}

fn sorted_fracs(points: &[Scalar]) -> Vec<Q> {
    let mut xs: Vec<Q> = points.par_iter().map(|p| frac_q(&p.midpoint())).collect();
    xs.par_sort();
    xs
}

/// Exact `sup_t |F_emp(t) − t|` for the fractional parts of `points`.
pub fn ks_mod1(points: &[Scalar]) -> Result<Scalar> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("KS statistic needs at least one point".into()));
    }
    let xs = sorted_fracs(points);
    Ok(Scalar::Exact(ks_sorted(&xs)))
}

fn ks_sorted(xs: &[Q]) -> Q {
    let n = BigInt::from(xs.len());
    let mut best = Q::zero();
    for (i, x) in xs.iter().enumerate() {
        let above = Q::new(BigInt::from(i + 1), n.clone()) - x;
        let below = x - Q::new(BigInt::from(i), n.clone());
        if above > best {
            best = above;
        }
        if below > best {
            best = below;
        }
    }
    best
}

/// `|S_h| = |(1/n) Σ_j e^{2πi h x_j}|` for `h = 1..=H`, in `f64`, with a
/// bound on the accumulated rounding error of each entry.
pub fn weyl_sums(points: &[Scalar], h_max: usize) -> Result<(Vec<f64>, f64)> {
    if points.is_empty() || h_max == 0 {
        return Err(Error::InvalidArgument("Weyl sums need points and H ≥ 1".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| frac_q(&p.midpoint()).to_f64().unwrap_or(0.0)).collect();
    let n = xs.len() as f64;
    let tau = std::f64::consts::TAU;
    let sums = (1..=h_max)
        .map(|h| {
            let (re, im) = xs.iter().fold((0.0f64, 0.0f64), |(re, im), x| {
                let a = tau * (h as f64) * x;
                (re + a.cos(), im + a.sin())
            });
            (re / n).hypot(im / n).min(1.0)
        })
        .collect();
    // argument rounding grows with h, summation rounding with n
    let bound = (tau * h_max as f64 + n + 8.0) * f64::EPSILON;
    Ok((sums, bound))
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub driver: String,
    pub ks_raw: Scalar,
    pub ks_image: Scalar,
    pub weyl_raw: Vec<f64>,
    pub weyl_image: Vec<f64>,
    pub weyl_error_bound: f64,
}

/// KS and Weyl statistics for a sample and its image under `βx + α`, after
/// checking that the source is a CIUPM for that map.
pub fn ud_report(beta: &Scalar, alpha: &Scalar, plan: &SamplePlan, h_max: usize) -> Result<DiscrepancyReport> {
    let map = AffineMap::new(alpha.clone(), beta.clone())?;
    let tol = if plan.source.is_exact() && beta.is_exact() && alpha.is_exact() {
        Scalar::zero()
    } else {
        default_tolerance(plan.bits)
    };
    let check = is_ciupm(&plan.source, &map, &tol)?;
    if !check.ok {
        return Err(Error::NotACiupm { dev_mu: check.dev_mu.to_string(), dev_push: check.dev_push.to_string() });
    }
    let xs = sample(plan)?;
    let images: Vec<Scalar> = xs.par_iter().map(|x| map.apply(x)).collect();
    let (weyl_raw, bound) = weyl_sums(&xs, h_max)?;
    let (weyl_image, _) = weyl_sums(&images, h_max)?;
    Ok(DiscrepancyReport {
        n: plan.n,
        driver: plan.driver.describe(),
        ks_raw: ks_mod1(&xs)?,
        ks_image: ks_mod1(&images)?,
        weyl_raw,
        weyl_image,
        weyl_error_bound: bound,
    })
}
