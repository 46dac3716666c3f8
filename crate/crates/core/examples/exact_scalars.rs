// Exact rationals, certified intervals and precision escalation.

use std::error::Error;

use ciupm::scalar::{with_precision_retry, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let x: Scalar = "-7/3".parse()?;
    let (k, frac) = x.floor_frac()?;
    println!("⌊{x}⌋ = {k}, ⟨{x}⟩ = {frac}");

    let r2: Scalar = "sqrt:2".parse()?;
    let inv = r2.recip()?;
    println!("1/√2 ≈ {} (radius {})", inv.to_decimal(30), inv.radius());
    println!("√(9/4) = {}", Scalar::ratio(9, 4).sqrt(64)?);

    // 1/√2 + 1/√2 − √2 is zero but an interval cannot prove it
    let zeroish = &(&inv + &inv) - &r2;
    match zeroish.compare(&Scalar::zero()) {
        Err(e) => println!("comparison refused: {e}"),
        Ok(o) => println!("unexpectedly decided: {o:?}"),
    }

    // √2 > 1.41421356 needs more than 16 bits; the retry helper escalates.
    let bound: Scalar = "1.41421356".parse()?;
    let bits_used = with_precision_retry(8, 4096, |bits| {
        let r = Scalar::parse_with_precision("sqrt:2", bits)?;
        r.compare(&bound).map(|_| bits)
    })?;
    println!("√2 vs 1.41421356 decided at {bits_used} bits");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
