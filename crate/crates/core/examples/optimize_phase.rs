// Max-min search for the phase over the match fractions M/1000.

use fixphase::optimizer::{self, EnvelopeSpec};
use fixphase::{Result, PHI_STAR};

pub fn run() -> Result<()> {
    let result = optimizer::optimize_phase(&EnvelopeSpec::default())?;
    println!("phi*      {:.15} ({:.5} pi)", result.phi_star, result.phi_star / std::f64::consts::PI);
    println!("reference {PHI_STAR:.15}");
    println!("floor     {:.7} at M/N = {}", result.min_prob, result.argmin_fraction);
    for (round, floor) in result.history.iter().enumerate() {
        println!("  round {round}: floor {floor:.10}");
    }
    println!("{} envelope evaluations", result.evaluations);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
