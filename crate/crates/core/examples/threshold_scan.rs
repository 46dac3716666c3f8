// The threshold `c_β` and its grid certification: below `c_β` the cell
// equations are infeasible (with a Farkas vector), at `c_β` the solution is
// unique and equals the minimal density, above it solutions multiply.

use std::error::Error;

use ciupm::oracle::{build_system, certificate_hash, minimal_unique_k, verify_certificate};
use ciupm::{solve_feasibility, threshold_c, threshold_scan, FeasibilityOutcome, Scalar, ScanReport};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for b in ["3/2", "5/3", "7/3", "2", "-3/2", "2/3", "sqrt:3"] {
        let c = threshold_c(&b.parse()?)?;
        let shown = if c.is_exact() { c.to_string() } else { c.to_decimal(12) };
        println!("c_{b} = {shown}");
    }

    let sys = build_system(&"3/2".parse()?, &Scalar::int(1), 1)?;
    if let FeasibilityOutcome::Infeasible { certificate } = solve_feasibility(&sys)? {
        let y: Vec<String> = certificate.iter().map(|v| v.to_string()).collect();
        println!("c = 1: Farkas y = {y:?}, verifies: {}", verify_certificate(&sys, &certificate));
        println!("       sha256 {}", certificate_hash(&y));
    }

    let cs = ["1", "7/6", "4/3", "3/2", "5/3"].iter().map(|c| c.parse()).collect::<Result<Vec<Scalar>, _>>()?;
    let report = threshold_scan(&"3/2".parse()?, 2, &cs)?;
    for e in &report.entries {
        println!("c = {:<4} {:<20} {}", e.c.to_string(), ScanReport::label(e), e.evidence);
    }
    println!("pattern consistent: {}", report.pattern_ok());

    for b in ["3/2", "5/3", "7/3", "2/5"] {
        println!("β = {b}: smallest K with a unique grid solution at c_β: {:?}", minimal_unique_k(&b.parse()?, 3)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
