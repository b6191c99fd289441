// Randomized search when the number of matches is unknown: Monte-Carlo cost
// against the `7 / sin(delta)` model.

use fixphase::unknown::{self, UnknownMConfig};
use fixphase::{PhaseConfig, Result, SearchInstance};

pub fn run() -> Result<()> {
    let config = UnknownMConfig {
        seed: 42,
        ..Default::default()
    };
    println!("{:>3} {:>5} {:>10} {:>8} {:>10}", "n", "M", "mean", "stderr", "7 m_q");
    for (n, m) in [(8u32, 1usize), (10, 1), (10, 16), (12, 1), (12, 3000)] {
        let inst = SearchInstance::with_count(n, m)?;
        let s = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &config, 2000)?;
        let model = unknown::expected_cost_fixed(inst.fraction().sqrt().asin(), PhaseConfig::FIXED, config.lambda)?;
        println!("{n:>3} {m:>5} {:>10.1} {:>8.1} {model:>10.1}", s.mean, s.stderr);
    }

    let run = unknown::run_unknown_m(&SearchInstance::with_count(10, 1)?, PhaseConfig::FIXED, &config)?;
    println!("\none run, seed 42: {} rounds, {} iterations", run.rounds.len(), run.total_iterations);
    for r in run.rounds.iter().rev().take(3).rev() {
        println!("  m {:>7.3}  j {:>3}  measured {:>4}  hit {}", r.m, r.j, r.measured, r.hit);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
