// Beyond the minimal density: the tent, wider mixtures of translates,
// disconnected supports, and a split measure that works for every
// integer slope.

use std::error::Error;

use ciupm::{
    disconnected_ciupm, fat_family, is_ciupm, split_integer_ciupm, tent_ciupm, AffineMap, PiecewiseDensity, Scalar,
};

fn report(name: &str, mu: &PiecewiseDensity, beta: &str) -> Result<(), Box<dyn Error>> {
    let map = AffineMap::linear(beta.parse()?)?;
    let ok = is_ciupm(mu, &map, &Scalar::zero())?.ok;
    let (d, l) = mu.support_metrics();
    println!("{name:<28} β = {beta:<4} CIUPM: {ok:<5} diameter {d:<4} lebesgue {l}");
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let beta: Scalar = "3/2".parse()?;
    report("tent", &tent_ciupm(&beta)?, "3/2")?;

    let thirds = vec![Scalar::ratio(1, 3); 3];
    let offsets = ["0", "1/2", "1"].iter().map(|o| o.parse()).collect::<Result<Vec<Scalar>, _>>()?;
    report("fat, c = 2, three translates", &fat_family(&beta, &Scalar::int(2), &thirds, &offsets)?, "3/2")?;

    report("disconnected (0, 1)", &disconnected_ciupm(&beta, 0, 1)?, "3/2")?;
    report("disconnected (2, -1)", &disconnected_ciupm(&"5/3".parse()?, 2, -1)?, "5/3")?;

    let split = split_integer_ciupm();
    for k in ["2", "3", "-4"] {
        report("split", &split, k)?;
    }
    report("split (not integer)", &split, "3/2")?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
