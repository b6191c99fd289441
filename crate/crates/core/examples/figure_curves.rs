// Worst-case success probability of three phase choices, each run for its
// own iteration count, and a short slice of the curve data.

use std::f64::consts::{FRAC_PI_2, PI};

use fixphase::commands;
use fixphase::optimizer::{min_envelope_with, FractionGrid, IterationRule};
use fixphase::{Result, PHI_STAR};

pub fn run() -> Result<()> {
    let grid = FractionGrid::default();
    for (label, phi) in [("phi*", PHI_STAR), ("pi", PI), ("pi/2", FRAC_PI_2)] {
        let e = min_envelope_with(phi, &grid, IterationRule::for_phase(phi))?;
        println!("{label:>5}: min {:.5} at M/N = {}", e.min_prob, e.argmin_fraction);
    }

    let small = FractionGrid::integer_matches(10)?;
    let rows = commands::curve_rows(&[PHI_STAR, PI, FRAC_PI_2], &small)?;
    println!();
    commands::write_curves(&rows, std::io::stdout().lock()).expect("stdout");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
