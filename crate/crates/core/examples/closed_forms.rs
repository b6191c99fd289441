// Success probability of the fixed-phase operator for a few match fractions,
// next to Grover's operator run for its own iteration count.

use fixphase::{Geometry, PhaseConfig, Result};

pub fn run() -> Result<()> {
    println!("{:>10} {:>6} {:>10} {:>6} {:>10}", "M/N", "q", "P fixed", "q_G", "P grover");
    for fraction in [1.0 / 1024.0, 0.01, 0.1, 0.3, 0.5, 0.8, 1.0] {
        let fixed = Geometry::from_fraction(fraction, PhaseConfig::FIXED)?;
        let grover = Geometry::from_fraction(fraction, PhaseConfig::GROVER)?;
        let q = fixed.fixed_phase_schedule().0;
        let qg = grover.grover_schedule().0;
        println!(
            "{fraction:>10.6} {q:>6} {:>10.6} {qg:>6} {:>10.6}",
            fixed.success_prob(q),
            grover.success_prob(qg)
        );
    }

    let g = Geometry::from_fraction(0.448, PhaseConfig::FIXED)?;
    println!("\nM/N = 0.448, the worst case of the fixed phase:");
    for q in 0..=10 {
        let st = g.amplitudes(q);
        println!("  q {q:>2}  |a|^2 {:.6}  |b|^2 {:.6}", st.success(), st.failure());
    }
    println!("  lower bound {:.6}", g.success_lower_bound());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
