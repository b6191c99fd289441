// Full statevector simulation of the search operator compared with the
// two-dimensional closed form.

use fixphase::{Geometry, PhaseConfig, Result, SearchInstance, Statevector, PHI_STAR};

pub fn run() -> Result<()> {
    let inst = SearchInstance::new(10, [3, 99, 512, 700, 1001, 1002, 1023])?;
    let phase = PhaseConfig::new(PHI_STAR)?;
    let g = Geometry::from_fraction(inst.fraction(), phase)?;
    let schedule = g.fixed_phase_schedule().0;

    let mut state = Statevector::uniform(inst.qubits())?;
    let mut worst: f64 = 0.0;
    for q in 0..=2 * schedule {
        let simulated = state.marked_probability(&inst)?;
        worst = worst.max((simulated - g.success_prob(q)).abs());
        if q == schedule {
            println!("after {q} iterations: simulated {simulated:.12}, closed form {:.12}", g.success_prob(q));
        }
        state.apply_d(&inst, phase.phi())?;
    }
    println!("N = {}, M = {}: max difference over q <= {} is {worst:.2e}", inst.size(), inst.marked_count(), 2 * schedule);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
