//! Exact toolkit for circularly invariant uniformizable probability measures
//! (CIUPMs) of affine maps `T(x) = βx + α`.
//!
//! A probability measure `μ` on the line is a CIUPM for `T` when both `μ` and
//! its image under `T` become the uniform distribution once wrapped onto the
//! circle `[0, 1)`. This crate builds the known families of such measures,
//! checks the defining property with exact rational arithmetic (or certified
//! intervals for irrational slopes), and certifies the minimal-diameter
//! threshold on rational grids through exact linear feasibility.
//!
//! Module map:
//!
//! * [`scalar`]: exact rationals and certified intervals.
//! * [`density`]: piecewise-linear densities on the line and their algebra.
//! * [`circle`]: the mod-1 wrap and the CIUPM predicate.
//! * [`construct`]: slope classification, the threshold `c_β`, constructions.
//! * [`oracle`]: grid feasibility systems, Farkas certificates, scans.
//! * [`diagnostics`]: sampling and uniform-distribution statistics.
//! * [`io`] and [`cli`]: serialization formats and the command-line surface.

pub mod circle;
pub mod cli;
pub mod construct;
pub mod density;
pub mod diagnostics;
pub mod error;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod scalar;
mod segments;

pub use circle::{is_ciupm, uniformity_deviation, wrap, CircleDensity, CiupmCheck};
pub use construct::{
    classify_slope, disconnected_ciupm, fat_family, minimal_ciupm, split_integer_ciupm, tent_ciupm, threshold_c,
    SlopeClass, SlopeKind,
};
pub use density::{AffineMap, Linear, PiecewiseDensity};
pub use diagnostics::{ks_mod1, sample, ud_report, weyl_sums, DiscrepancyReport, Driver, SamplePlan};
pub use error::{Error, Result};
pub use oracle::{
    build_system, solve_feasibility, threshold_scan, uniqueness_probe, FeasibilityOutcome, FeasibilitySystem,
    ScanReport, Uniqueness,
};
pub use scalar::Scalar;
