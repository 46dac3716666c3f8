// Sampling a CIUPM with low-discrepancy and pseudorandom drivers: the
// samples and their images under `T` are both uniform mod 1.

use std::error::Error;

use ciupm::diagnostics::DEFAULT_WEYL_H;
use ciupm::{minimal_ciupm, split_integer_ciupm, ud_report, Driver, PiecewiseDensity, SamplePlan, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let beta: Scalar = "3/2".parse()?;
    let mu = minimal_ciupm(&beta)?;
    for n in [100, 1_000, 10_000] {
        let plan = SamplePlan::new(mu.clone(), n, Driver::VanDerCorput { base: 2 });
        let rep = ud_report(&beta, &Scalar::zero(), &plan, DEFAULT_WEYL_H)?;
        println!(
            "vdc n = {n:<6} KS raw {:.5}  KS image {:.5}  |S_1| image {:.2e}",
            rep.ks_raw.to_f64(),
            rep.ks_image.to_f64(),
            rep.weyl_image[0]
        );
    }

    let plan = SamplePlan::new(split_integer_ciupm(), 20_000, Driver::Pseudorandom { seed: 42 });
    let rep = ud_report(&Scalar::int(2), &Scalar::zero(), &plan, DEFAULT_WEYL_H)?;
    println!("split, β = 2, pseudorandom: KS {:.4} / {:.4}", rep.ks_raw.to_f64(), rep.ks_image.to_f64());

    let step = Scalar::parse_with_precision("sqrt:5", 128)?;
    let plan = SamplePlan::new(mu.clone(), 5_000, Driver::Kronecker { step });
    let rep = ud_report(&beta, &Scalar::zero(), &plan, DEFAULT_WEYL_H)?;
    println!("kronecker ⟨i√5⟩: KS {:.4} / {:.4}", rep.ks_raw.to_f64(), rep.ks_image.to_f64());

    let uniform = PiecewiseDensity::uniform(Scalar::zero(), Scalar::one())?;
    let plan = SamplePlan::new(uniform, 1_000, Driver::VanDerCorput { base: 3 });
    match ud_report(&beta, &Scalar::zero(), &plan, DEFAULT_WEYL_H) {
        Err(e) => println!("uniform[0,1] rejected: {e}"),
        Ok(_) => println!("uniform[0,1] unexpectedly accepted"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
