// `β = √2`: ramp, plateau, ramp. Breakpoints are surds, carried as
// certified intervals; the CIUPM check runs against a tiny tolerance.

use std::error::Error;

use ciupm::{is_ciupm, minimal_ciupm, threshold_c, AffineMap, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let beta = Scalar::parse_with_precision("sqrt:2", 128)?;
    let mu = minimal_ciupm(&beta)?;
    for (a, b, f) in mu.intervals() {
        println!("[{}, {}): {} + {}·t", a.to_decimal(8), b.to_decimal(8), f.c0.to_decimal(8), f.c1.to_decimal(8));
    }
    let c = threshold_c(&beta)?;
    println!("c_√2 ∈ [{}, {}]", Scalar::Exact(c.lower()).to_decimal(35), Scalar::Exact(c.upper()).to_decimal(35));

    let tol: Scalar = "1e-9".parse()?;
    let check = is_ciupm(&mu, &AffineMap::linear(beta.clone())?, &tol)?;
    println!("is_ciupm at 1e-9: {} (dev {:.3e})", check.ok, check.dev_push.to_f64());

    // the ramp carries mass β t²/2 up to t = 1/β
    let inv = beta.recip()?;
    println!("F(1/√2) = {}  (1/(2√2) = {})", mu.cdf_eval(&inv)?.to_decimal(20), (0.5 / 2f64.sqrt()));
    println!("median = {}", mu.cdf_invert(&Scalar::ratio(1, 2), 128)?.to_decimal(20));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
