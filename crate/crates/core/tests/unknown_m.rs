use fixphase::unknown::{self, Backend, MCap, UnknownMConfig};
use fixphase::{PhaseConfig, SearchInstance, PHI_STAR};

fn config(seed: u64, backend: Backend) -> UnknownMConfig {
    UnknownMConfig {
        seed,
        backend,
        ..Default::default()
    }
}

#[test]
fn backends_agree_statistically() {
    for (n, marked) in [(6u32, vec![5usize]), (7, vec![3, 40, 99]), (8, (0..64).map(|i| i * 4).collect())] {
        let inst = SearchInstance::new(n, marked).unwrap();
        let closed = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &config(11, Backend::ClosedForm), 4000).unwrap();
        let sv = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &config(12, Backend::Statevector), 4000).unwrap();
        let spread = (closed.stderr.powi(2) + sv.stderr.powi(2)).sqrt();
        assert!(
            (closed.mean - sv.mean).abs() <= 5.0 * spread,
            "n {n}: {} vs {} (5 sigma {})",
            closed.mean,
            sv.mean,
            5.0 * spread
        );
        assert_eq!(closed.success_rate, 1.0);
        assert_eq!(sv.success_rate, 1.0);
    }
}

/// Exact expected cost of the driver for `q ~ U{0..ceil(m)-1}` with the
/// sqrt(N) cap, summed over the survival probabilities of each round.
fn exact_expected_cost(inst: &SearchInstance, lambda: f64, rounds: usize) -> f64 {
    let g = fixphase::Geometry::from_fraction(inst.fraction(), PhaseConfig::FIXED).unwrap();
    let cap = (inst.size() as f64).sqrt();
    let (mut m, mut survive, mut total) = (1.0f64, 1.0f64, 0.0f64);
    for _ in 0..rounds {
        let range = m.ceil() as u64;
        let mean_j = (range - 1) as f64 / 2.0;
        let hit = (0..range).map(|j| g.success_prob(j)).sum::<f64>() / range as f64;
        total += survive * mean_j;
        survive *= 1.0 - hit;
        m = (lambda * m).min(cap);
    }
    total
}

#[test]
fn monte_carlo_mean_matches_exact_expectation() {
    let inst = SearchInstance::new(10, [321]).unwrap();
    let exact = exact_expected_cost(&inst, unknown::DEFAULT_LAMBDA, 20_000);
    let s = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &config(5, Backend::ClosedForm), 20_000).unwrap();
    assert!((s.mean - exact).abs() <= 4.0 * s.stderr, "mean {} exact {exact} stderr {}", s.mean, s.stderr);
}

#[test]
fn runs_are_reproducible_and_seed_sensitive() {
    let inst = SearchInstance::new(9, [17, 400]).unwrap();
    let a = unknown::run_unknown_m(&inst, PhaseConfig::FIXED, &config(3, Backend::ClosedForm)).unwrap();
    let b = unknown::run_unknown_m(&inst, PhaseConfig::FIXED, &config(3, Backend::ClosedForm)).unwrap();
    assert_eq!(a, b);
    let batch1 = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &config(9, Backend::ClosedForm), 300).unwrap();
    let batch2 = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &config(9, Backend::ClosedForm), 300).unwrap();
    assert_eq!(batch1, batch2);
    let other = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &config(10, Backend::ClosedForm), 300).unwrap();
    assert_ne!(batch1.mean, other.mean);
}

#[test]
fn found_items_are_marked_and_rounds_add_up() {
    let inst = SearchInstance::new(8, [2, 77, 200]).unwrap();
    for seed in 0..50 {
        for backend in [Backend::ClosedForm, Backend::Statevector] {
            let run = unknown::run_unknown_m(&inst, PhaseConfig::new(PHI_STAR).unwrap(), &config(seed, backend)).unwrap();
            let found = run.found.expect("a marked item");
            assert!(inst.is_marked(found));
            assert_eq!(run.total_iterations, run.rounds.iter().map(|r| r.j).sum::<u64>());
            assert!(run.rounds.iter().all(|r| (r.j as f64) < r.m.ceil().max(1.0)));
            assert!(run.rounds.last().unwrap().hit);
            assert!(run.rounds[..run.rounds.len() - 1].iter().all(|r| !r.hit && !inst.is_marked(r.measured)));
        }
    }
}

#[test]
fn unbounded_cap_reaches_the_critical_stage() {
    let inst = SearchInstance::new(10, [0]).unwrap();
    let cfg = UnknownMConfig {
        cap: MCap::Unbounded,
        ..config(1, Backend::ClosedForm)
    };
    let s = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &cfg, 3000).unwrap();
    let model = unknown::expected_cost_fixed((1.0f64 / 1024.0).sqrt().asin(), PhaseConfig::FIXED, cfg.lambda).unwrap();
    assert_eq!(s.capped, 0);
    assert!(s.mean < model, "{} vs {model}", s.mean);
}

#[test]
fn tiny_round_limit_reports_capped_runs() {
    let inst = SearchInstance::new(10, [0]).unwrap();
    let cfg = UnknownMConfig {
        max_rounds: Some(2),
        ..config(0, Backend::ClosedForm)
    };
    let s = unknown::monte_carlo_cost(&inst, PhaseConfig::FIXED, &cfg, 200).unwrap();
    assert!(s.capped > 0);
    assert!(s.success_rate < 1.0);
}
