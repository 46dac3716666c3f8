//! Grid feasibility oracle for the threshold `c_β` at rational slopes.
//!
//! A density supported in `[0, c]` and constant on cells of width
//! `h = 1/(pK)` is a CIUPM for `x ↦ βx` iff its cell values satisfy four
//! families of linear rows: the wrap of `μ` is one on the `t`-cells of
//! `[0, ⟨c⟩)` and `[⟨c⟩, 1)`, and the wrap of the image is one on the cells
//! of width `1/(qK)` in `[0, ⟨βc⟩)` and `[⟨βc⟩, 1)`. The image density is
//! `(1/β)ρ(x/β)`, so the image rows pick cells `r + j·qK` with weight `q/p`.
//!
//! Only cell-constant densities are searched. An infeasible grid is
//! consistency evidence for the threshold theorem, not a continuum proof; a
//! feasible grid lifts to a genuine CIUPM, which is re-checked exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::circle::is_ciupm;
use crate::construct::{classify_slope, grid_values, minimal_ciupm, threshold_c, SlopeKind};
use crate::density::{AffineMap, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::lp::{self, Phase1};
use crate::scalar::Scalar;

type Q = BigRational;

/// Which wrap equation a row comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowFamily {
    /// `μ` rows on `[0, ⟨c⟩)`, `⌊c⌋ + 1` terms.
    WrapHead,
    /// `μ` rows on `[⟨c⟩, 1)`, `⌊c⌋` terms.
    WrapTail,
    /// Image rows on `[0, ⟨βc⟩)`.
    ImageHead,
    /// Image rows on `[⟨βc⟩, 1)`.
    ImageTail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub family: RowFamily,
    /// Sparse `(variable, coefficient)` pairs, increasing in the variable.
    pub coeffs: Vec<(usize, Q)>,
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilitySystem {
    pub p: BigInt,
    pub q: BigInt,
    pub c: Q,
    pub k: u32,
    pub h: Q,
    pub n_vars: usize,
    pub rows: Vec<Row>,
}

impl FeasibilitySystem {
    pub fn beta(&self) -> Q {
        Q::new(self.p.clone(), self.q.clone())
    }

    fn dense(&self) -> (Vec<Vec<Q>>, Vec<Q>) {
        let mut a = vec![vec![Q::zero(); self.n_vars]; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in &row.coeffs {
                a[i][*j] += x;
            }
        }
        (a, self.rows.iter().map(|r| r.rhs.clone()).collect())
    }
}

fn to_usize(n: &BigInt, what: &str) -> Result<usize> {
    n.to_usize()
        .filter(|&v| v <= 1 << 20)
        .ok_or_else(|| Error::ResourceLimit(format!("{what} = {n} is too large for a dense grid")))
}

/// Rows for slope `β = p/q > 1` (non-integer), diameter bound `c`, refinement `K`.
pub fn build_system(beta: &Scalar, c: &Scalar, k: u32) -> Result<FeasibilitySystem> {
    let class = classify_slope(beta)?;
    let (p, q) = match class.kind {
        SlopeKind::Irrational { .. } => return Err(Error::SlopeNotRational),
        SlopeKind::Integer { .. } => {
            return Err(Error::SlopeOutOfRange(format!("grid oracle needs a non-integer slope, got {beta}")))
        }
        SlopeKind::RationalNonInteger { p, q, .. } => (p, q),
    };
    if class.sign < 0 || p < q {
        return Err(Error::SlopeOutOfRange(format!("grid oracle needs β > 1, got {beta}")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("refinement K must be at least 1".into()));
    }
    let c = c.as_exact().cloned().ok_or_else(|| Error::InvalidArgument("diameter bound must be exact".into()))?;
    if !c.is_positive() {
        return Err(Error::InvalidArgument(format!("diameter bound must be positive, got {c}")));
    }
    let pk = &p * BigInt::from(k);
    let qk = &q * BigInt::from(k);
    let h = Q::new(BigInt::one(), pk.clone());
    let cells = &c * Q::from_integer(pk.clone());
    if !cells.is_integer() {
        return Err(Error::GridMisaligned { c: c.to_string(), h: h.to_string() });
    }
    let n_big = cells.to_integer();
    let n = to_usize(&n_big, "cell count")?;
    let pku = to_usize(&pk, "pK")?;
    let qku = to_usize(&qk, "qK")?;
    let one = Q::one();
    let w = Q::new(q.clone(), p.clone());

    let mut rows = Vec::with_capacity(pku + qku);
    let (whole, part) = n.div_rem(&pku);
    for r in 0..pku {
        let (family, terms) = if r < part { (RowFamily::WrapHead, whole + 1) } else { (RowFamily::WrapTail, whole) };
        let coeffs = (0..terms).map(|t| (r + t * pku, one.clone())).collect();
        rows.push(Row { family, coeffs, rhs: one.clone() });
    }
    let (whole, part) = n.div_rem(&qku);
    for r in 0..qku {
        let (family, terms) = if r < part { (RowFamily::ImageHead, whole + 1) } else { (RowFamily::ImageTail, whole) };
        let coeffs = (0..terms).map(|t| (r + t * qku, w.clone())).collect();
        rows.push(Row { family, coeffs, rhs: one.clone() });
    }
    Ok(FeasibilitySystem { p, q, c, k, h, n_vars: n, rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityOutcome {
    Feasible { witness: Vec<Q> },
    Infeasible { certificate: Vec<Q> },
}

impl FeasibilityOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityOutcome::Feasible { .. })
    }
}

pub fn solve_feasibility(sys: &FeasibilitySystem) -> Result<FeasibilityOutcome> {
    let (a, b) = sys.dense();
    match lp::phase1(&a, &b, lp::DEFAULT_PIVOT_LIMIT)? {
        Phase1::Feasible(fb) => Ok(FeasibilityOutcome::Feasible { witness: fb.point() }),
        Phase1::Infeasible(y) => Ok(FeasibilityOutcome::Infeasible { certificate: y }),
    }
}

/// Row-by-row check of a witness, independent of the solver.
pub fn verify_witness(sys: &FeasibilitySystem, v: &[Q]) -> bool {
    v.len() == sys.n_vars
        && v.iter().all(|x| !x.is_negative())
        && sys.rows.iter().all(|row| {
            let lhs: Q = row.coeffs.iter().map(|(j, x)| x * &v[*j]).sum();
            lhs == row.rhs
        })
}

/// Farkas check: `yᵀA ≤ 0` componentwise and `yᵀb > 0`.
pub fn verify_certificate(sys: &FeasibilitySystem, y: &[Q]) -> bool {
    if y.len() != sys.rows.len() {
        return false;
    }
    let mut col = vec![Q::zero(); sys.n_vars];
    let mut yb = Q::zero();
    for (row, yi) in sys.rows.iter().zip(y) {
        for (j, x) in &row.coeffs {
            col[*j] += x * yi;
        }
        yb += &row.rhs * yi;
    }
    yb.is_positive() && col.iter().all(|s| !s.is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    Unique(Vec<Q>),
    NonUnique { index: usize, min: Q, max: Q },
}

/// Per-variable min/max over the feasible set. `None` when infeasible.
pub fn uniqueness_probe(sys: &FeasibilitySystem) -> Result<Option<Uniqueness>> {
    let (a, b) = sys.dense();
    let fb = match lp::phase1(&a, &b, lp::DEFAULT_PIVOT_LIMIT)? {
        Phase1::Feasible(fb) => fb,
        Phase1::Infeasible(_) => return Ok(None),
    };
    let mut values = Vec::with_capacity(sys.n_vars);
    for i in 0..sys.n_vars {
        let mut e = vec![Q::zero(); sys.n_vars];
        e[i] = Q::one();
        let (lo, _) = fb.optimize(&e, false)?;
        let (hi, _) = fb.optimize(&e, true)?;
        if lo != hi {
            return Ok(Some(Uniqueness::NonUnique { index: i, min: lo, max: hi }));
        }
        values.push(lo);
    }
    Ok(Some(Uniqueness::Unique(values)))
}

/// Cell values as a step density on `[0, c]`.
pub fn lift_witness(sys: &FeasibilitySystem, v: &[Q]) -> Result<PiecewiseDensity> {
    let h = Scalar::Exact(sys.h.clone());
    let breaks = (0..=v.len()).map(|i| &Scalar::int(i as i64) * &h).collect();
    PiecewiseDensity::step(breaks, v.iter().cloned().map(Scalar::Exact).collect())
}

/// Reduces any non-integer rational slope to `β' > 1`, rescaling `c`:
/// negative slopes share thresholds with `|β|`, and `β < 1` maps to `1/β`
/// with `c' = βc`.
pub fn reduce_slope(beta: &Scalar, c: &Scalar) -> Result<(Scalar, Scalar)> {
    let class = classify_slope(beta)?;
    if !class.is_rational() {
        return Err(Error::SlopeNotRational);
    }
    let abs = beta.abs();
    if abs.compare(&Scalar::one())? == Ordering::Less {
        let c2 = &abs * c;
        return Ok((abs.recip()?, c2));
    }
    Ok((abs, c.clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScanStatus {
    Feasible,
    Infeasible,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub c: Scalar,
    /// `(β', c')` actually solved after slope reduction.
    pub reduced_beta: Option<Scalar>,
    pub reduced_c: Option<Scalar>,
    pub status: ScanStatus,
    pub unique: Option<bool>,
    pub evidence: String,
    /// Exact witness or Farkas vector, as decimal-free rational strings.
    pub certificate: Vec<String>,
    pub certificate_ok: bool,
    pub certificate_hash: String,
    /// Whether this entry agrees with the predicted threshold pattern.
    pub pattern_ok: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub beta: Scalar,
    pub k: u32,
    pub threshold: Scalar,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn pattern_ok(&self) -> bool {
        self.entries.iter().all(|e| e.pattern_ok)
    }

    pub fn label(e: &ScanEntry) -> &'static str {
        match (e.status, e.unique) {
            (ScanStatus::Feasible, Some(true)) => "Feasible+Unique",
            (ScanStatus::Feasible, Some(false)) => "Feasible+NonUnique",
            (ScanStatus::Feasible, None) => "Feasible",
            (ScanStatus::Infeasible, _) => "Infeasible",
            (ScanStatus::Error, _) => "Error",
        }
    }
}

pub fn certificate_hash(values: &[String]) -> String {
    let mut hasher = Sha256::new();
    for v in values {
        hasher.update(v.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

fn scan_one(beta: &Scalar, k: u32, threshold: &Scalar, c: &Scalar) -> ScanEntry {
    let mut entry = ScanEntry {
        c: c.clone(),
        reduced_beta: None,
        reduced_c: None,
        status: ScanStatus::Error,
        unique: None,
        evidence: String::new(),
        certificate: Vec::new(),
        certificate_ok: false,
        certificate_hash: String::new(),
        pattern_ok: false,
        error: None,
    };
    match scan_inner(beta, k, threshold, c, &mut entry) {
        Ok(()) => {}
        Err(e) => {
            entry.status = ScanStatus::Error;
            entry.evidence = format!("error: {}", e.kind());
            entry.error = Some(e.to_string());
        }
    }
    entry
}

fn scan_inner(beta: &Scalar, k: u32, threshold: &Scalar, c: &Scalar, entry: &mut ScanEntry) -> Result<()> {
    let (b2, c2) = reduce_slope(beta, c)?;
    entry.reduced_beta = Some(b2.clone());
    entry.reduced_c = Some(c2.clone());
    let sys = build_system(&b2, &c2, k)?;
    let below = c.lt(threshold)?;
    let at = c == threshold;
    match solve_feasibility(&sys)? {
        FeasibilityOutcome::Infeasible { certificate } => {
            entry.status = ScanStatus::Infeasible;
            entry.certificate_ok = verify_certificate(&sys, &certificate);
            entry.certificate = certificate.iter().map(Q::to_string).collect();
            entry.evidence = "grid-restricted Farkas certificate (consistency evidence)".into();
            entry.pattern_ok = below && entry.certificate_ok;
        }
        FeasibilityOutcome::Feasible { witness } => {
            entry.status = ScanStatus::Feasible;
            let lifted = lift_witness(&sys, &witness)?;
            let map = AffineMap::linear(b2.clone())?;
            let witness_ok = verify_witness(&sys, &witness) && is_ciupm(&lifted, &map, &Scalar::zero())?.ok;
            entry.certificate_ok = witness_ok;
            entry.certificate = witness.iter().map(Q::to_string).collect();
            entry.evidence = if witness_ok {
                "lifted witness is an exact CIUPM".into()
            } else {
                "witness failed re-verification".into()
            };
            let unique = match uniqueness_probe(&sys)? {
                Some(Uniqueness::Unique(values)) => {
                    // At the threshold the only grid solution is μ_β itself.
                    if at {
                        let mu = minimal_ciupm(&b2)?;
                        if grid_values(&mu, &sys.h, sys.n_vars)?.as_deref() != Some(values.as_slice()) {
                            entry.evidence.push_str("; unique values differ from the minimal density");
                            entry.certificate_ok = false;
                        }
                    }
                    true
                }
                Some(Uniqueness::NonUnique { .. }) => false,
                None => return Err(Error::InvalidArgument("solver disagreement on feasibility".into())),
            };
            entry.unique = Some(unique);
            entry.pattern_ok = !below && unique == at && entry.certificate_ok;
        }
    }
    entry.certificate_hash = certificate_hash(&entry.certificate);
    Ok(())
}

/// Solves every `c` in parallel; per-entry failures are recorded, not fatal.
pub fn threshold_scan(beta: &Scalar, k: u32, c_list: &[Scalar]) -> Result<ScanReport> {
    let threshold = threshold_c(beta)?;
    let entries = c_list.par_iter().map(|c| scan_one(beta, k, &threshold, c)).collect();
    Ok(ScanReport { beta: beta.clone(), k, threshold, entries })
}

/// Smallest `K ≤ k_max` at which `c_β` is grid-aligned and the scan at
/// `c_β` comes out Feasible+Unique.
pub fn minimal_unique_k(beta: &Scalar, k_max: u32) -> Result<Option<u32>> {
    let threshold = threshold_c(beta)?;
    for k in 1..=k_max {
        let e = scan_one(beta, k, &threshold, &threshold);
        if e.status == ScanStatus::Feasible && e.unique == Some(true) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
