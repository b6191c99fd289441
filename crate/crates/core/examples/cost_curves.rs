// Expected iterations for an unknown match count, Grover's operator against
// the fixed phase, as CSV on stdout.

use fixphase::commands;
use fixphase::optimizer::FractionGrid;
use fixphase::unknown::DEFAULT_LAMBDA;
use fixphase::{PhaseConfig, Result};

pub fn run() -> Result<()> {
    let grid = FractionGrid::new((1..=20).map(|k| k as f64 / 20.0).collect())?;
    let rows = commands::cost_curve_rows(&grid, DEFAULT_LAMBDA, PhaseConfig::FIXED)?;
    commands::write_cost_curves(&rows, std::io::stdout().lock()).expect("stdout");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
