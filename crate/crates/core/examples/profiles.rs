// Plot data: `(t, ρ(t))` CSV for the minimal densities at a rational and an
// irrational slope, their wraps, and a JSON round trip of a density file.

use std::error::Error;

use ciupm::io::{circle_profile_csv, density_from_json, density_to_json, profile_csv};
use ciupm::{minimal_ciupm, tent_ciupm, wrap, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join("ciupm-profiles");
    std::fs::create_dir_all(&dir)?;
    let panels = [
        ("minimal_3_2", minimal_ciupm(&"3/2".parse()?)?),
        ("tent_3_2", tent_ciupm(&"3/2".parse()?)?),
        ("minimal_sqrt2", minimal_ciupm(&Scalar::parse_with_precision("sqrt:2", 128)?)?),
    ];
    for (name, mu) in &panels {
        let line = profile_csv(mu, 6)?;
        let circle = circle_profile_csv(&wrap(mu)?, 6)?;
        std::fs::write(dir.join(format!("{name}.csv")), &line)?;
        std::fs::write(dir.join(format!("{name}_wrapped.csv")), &circle)?;
        println!("{name}: {} profile rows, wrap has {} rows", line.lines().count() - 1, circle.lines().count() - 1);
    }
    println!("{}", profile_csv(&panels[0].1, 4)?);

    let json = density_to_json(&panels[0].1);
    let back = density_from_json(&json, 128)?;
    println!("JSON round trip identical: {}", back == panels[0].1);
    println!("written to {}", dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
