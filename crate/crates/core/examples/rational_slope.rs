// The minimal CIUPM of `x ↦ 3x/2`: a three-step density on `[0, 4/3]`
// whose wrap and whose image's wrap are both exactly uniform.

use std::error::Error;

use ciupm::{is_ciupm, minimal_ciupm, threshold_c, wrap, AffineMap, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let beta: Scalar = "3/2".parse()?;
    let mu = minimal_ciupm(&beta)?;
    for (a, b, f) in mu.intervals() {
        println!("ρ = {} on [{a}, {b})", f.c0);
    }
    let (diameter, lebesgue) = mu.support_metrics();
    println!("c_β = {}, diameter = {diameter}, lebesgue = {lebesgue}", threshold_c(&beta)?);

    let map = AffineMap::linear(beta.clone())?;
    let image = mu.pushforward(&map);
    println!("image support [{}, {}]", image.support_min(), image.support_max());
    println!("wrap(μ) pieces: {}", wrap(&mu)?.pieces().len());
    let check = is_ciupm(&mu, &map, &Scalar::zero())?;
    println!("is_ciupm: {} (dev {} / {})", check.ok, check.dev_mu, check.dev_push);

    // any translate works too, and so does any affine map with the same slope
    let shifted = mu.translate(&"-5/7".parse()?);
    let t = AffineMap::new("1/9".parse()?, beta)?;
    println!("translated, with α = 1/9: {}", is_ciupm(&shifted, &t, &Scalar::zero())?.ok);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
