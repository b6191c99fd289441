//! Invariant suite behind `fixphase validate`.
//!
//! Every check takes the phase under test as a parameter so that a perturbed
//! constant makes the suite fail.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amplitude::{chebyshev_u, chebyshev_u_recurrence, Geometry, PhaseConfig};
use crate::optimizer::{self, EnvelopeSpec, FractionGrid, IterationRule};
use crate::statevector::{SearchInstance, Statevector};
use crate::unknown::{self, UnknownMConfig, DEFAULT_LAMBDA};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn(f64) -> Result<(bool, String)>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("geometry", geometry),
    ("chebyshev-recurrence", chebyshev_recurrence),
    ("normalization", normalization),
    ("closed-form-agreement", closed_form_agreement),
    ("grover-reduction", grover_reduction),
    ("statevector-equivalence", statevector_equivalence),
    ("subspace-closure", subspace_closure),
    ("lower-bound-chain", lower_bound_chain),
    ("fixed-phase-floor", fixed_phase_floor),
    ("baseline-floors", baseline_floors),
    ("optimal-phase", optimal_phase),
    ("no-certainty", no_certainty),
    ("trig-sums", trig_sums),
    ("average-success", average_success),
    ("average-floor", average_floor),
    ("unknown-m-cost", unknown_m_cost),
    ("full-range", full_range),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every check against `phi`; pass [`crate::PHI_STAR`] for the real suite.
pub fn run_checks(phi: f64) -> Vec<Check> {
    CHECKS
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = match f(phi) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            Check { name, passed, detail }
        })
        .collect()
}

pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{mark}  {:width$}  {}\n", c.name, c.detail));
    }
    out
}

fn theta_grid(points: usize) -> impl Iterator<Item = f64> {
    (1..=points).map(move |k| k as f64 * FRAC_PI_2 / points as f64)
}

fn phase_grid(points: usize) -> impl Iterator<Item = PhaseConfig> {
    (0..points).map(move |k| PhaseConfig::new((k as f64 * TAU / (points - 1) as f64).min(TAU)).expect("in range"))
}

const SWEEP_Q: &[u64] = &[0, 1, 2, 3, 5, 8, 13, 50, 192, 500, 1000, 5000, 10_000];

fn geometry(phi: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for phase in phase_grid(50).chain([PhaseConfig::new(phi)?]) {
        for theta in theta_grid(500) {
            let g = Geometry::new(theta, phase)?;
            worst = worst
                .max((g.sin_theta.powi(2) - g.fraction).abs())
                .max((g.delta.cos() - (g.c * g.fraction - 1.0)).abs());
            if !(0.0..=PI).contains(&g.delta) {
                return Ok((false, format!("delta {} outside [0, pi]", g.delta)));
            }
        }
    }
    Ok((worst < 1e-14, format!("max residual {worst:.2e}")))
}

fn chebyshev_recurrence(_phi: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for k in 1..200 {
        let delta = k as f64 * PI / 200.0;
        for &q in &[0i64, 1, 2, 7, 100, 1000, 10_000] {
            let r = chebyshev_u_recurrence(q, delta.cos());
            let s = chebyshev_u(q, delta);
            worst = worst.max((r - s).abs() / s.abs().max(1.0));
        }
    }
    Ok((worst < 1e-9, format!("max relative error {worst:.2e}")))
}

fn normalization(phi: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for phase in phase_grid(20).chain([PhaseConfig::new(phi)?]) {
        for theta in theta_grid(200) {
            let g = Geometry::new(theta, phase)?;
            for &q in SWEEP_Q {
                worst = worst.max((g.amplitudes(q).norm_sqr() - 1.0).abs());
            }
        }
    }
    Ok((worst < 1e-10, format!("max |norm - 1| {worst:.2e}")))
}

fn closed_form_agreement(phi: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for phase in phase_grid(20).chain([PhaseConfig::new(phi)?]) {
        for theta in theta_grid(200) {
            let g = Geometry::new(theta, phase)?;
            for &q in SWEEP_Q {
                worst = worst.max((g.success_prob(q) - g.amplitudes(q).success()).abs());
            }
        }
    }
    Ok((worst < 1e-12, format!("max |P - |a|^2| {worst:.2e}")))
}

fn grover_reduction(_phi: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for theta in theta_grid(200) {
        let g = Geometry::new(theta, PhaseConfig::GROVER)?;
        for q in 0..50u64 {
            let expected = ((2 * q + 1) as f64 * theta).sin().powi(2);
            worst = worst.max((g.success_prob(q) - expected).abs());
        }
    }
    Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
}

fn sample_marked(n: u32, m: usize, seed: u64) -> Result<SearchInstance> {
    let size = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items: Vec<usize> = (0..size).collect();
    for i in 0..m.min(size) {
        let j = rng.gen_range(i..size);
        items.swap(i, j);
    }
    SearchInstance::new(n, items[..m].iter().copied())
}

fn statevector_equivalence(phi: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in [2u32, 5, 8] {
        let size = 1usize << n;
        for m in [1, size / 4, size / 2, size - 1, size] {
            let inst = sample_marked(n, m.max(1), n as u64 * 1000 + m as u64)?;
            for p in [FRAC_PI_2, PI, phi] {
                let phase = PhaseConfig::new(p)?;
                let g = Geometry::from_fraction(inst.fraction(), phase)?;
                let mut s = Statevector::uniform(n)?;
                for q in 0..=100 {
                    if q > 0 {
                        s.apply_d(&inst, p)?;
                    }
                    worst = worst.max((s.marked_probability(&inst)? - g.success_prob(q)).abs());
                }
            }
        }
    }
    Ok((worst < 1e-10, format!("max difference {worst:.2e}")))
}

fn subspace_closure(phi: f64) -> Result<(bool, String)> {
    let inst = sample_marked(7, 9, 11)?;
    let mut s = Statevector::uniform(7)?;
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        s.apply_d(&inst, phi)?;
        let amps = s.amplitudes();
        let marked_ref = amps[inst.marked()[0]];
        let unmarked_ref = amps[inst.unmarked_nth(0)];
        for (i, a) in amps.iter().enumerate() {
            let r = if inst.is_marked(i) { marked_ref } else { unmarked_ref };
            worst = worst.max((a - r).norm());
        }
    }
    Ok((worst < 1e-10, format!("max spread {worst:.2e}")))
}

/// The bound holds wherever `(y + cos(phi)) (cos((2q+1) delta) + y) <= 0`.
fn lower_bound_chain(phi: f64) -> Result<(bool, String)> {
    let phase = PhaseConfig::new(phi)?;
    let mut worst: f64 = 0.0;
    let mut covered = 0;
    for theta in theta_grid(2000) {
        let g = Geometry::new(theta, phase)?;
        if g.is_degenerate() {
            continue;
        }
        let q = g.fixed_phase_schedule().0;
        let c = ((2 * q + 1) as f64 * g.delta).cos();
        if (g.y + (1.0 - g.c)) * (c + g.y) <= 0.0 {
            covered += 1;
            worst = worst.max(g.success_lower_bound() - g.success_prob(q));
        }
    }
    Ok((
        worst <= 1e-9,
        format!("{covered} points satisfy the side condition, max shortfall {worst:.2e}"),
    ))
}

fn fixed_phase_floor(phi: f64) -> Result<(bool, String)> {
    let e = optimizer::min_envelope(phi, &FractionGrid::default())?;
    Ok((
        e.min_prob >= 0.9958,
        format!("min {:.6} at M/N = {}", e.min_prob, e.argmin_fraction),
    ))
}

fn baseline_floors(_phi: f64) -> Result<(bool, String)> {
    let grid = FractionGrid::default();
    let grover = optimizer::min_envelope_with(PI, &grid, IterationRule::Grover)?.min_prob;
    let half = optimizer::min_envelope_with(FRAC_PI_2, &grid, IterationRule::Peak)?.min_prob;
    Ok((
        (grover - 0.5).abs() <= 0.01 && (half - 0.8788).abs() <= 0.005,
        format!("pi: {grover:.4}, pi/2: {half:.4}"),
    ))
}

fn optimal_phase(phi: f64) -> Result<(bool, String)> {
    let r = optimizer::optimize_phase(&EnvelopeSpec::default())?;
    Ok((
        (r.phi_star - phi).abs() <= 1e-6 && r.min_prob >= 0.9955,
        format!("recovered {:.15} (min {:.6})", r.phi_star, r.min_prob),
    ))
}

fn no_certainty(phi: f64) -> Result<(bool, String)> {
    let phase = PhaseConfig::new(phi)?;
    let mut below = 0;
    let mut total = 0;
    for theta in theta_grid(1000) {
        if theta == FRAC_PI_2 {
            continue; // M = N is certain at q = 0.
        }
        total += 1;
        let g = Geometry::new(theta, phase)?;
        let limit = 4 * g.fixed_phase_schedule().0;
        let best = (0..=limit).map(|q| g.success_prob(q)).fold(0.0, f64::max);
        if best < 1.0 - 1e-9 {
            below += 1;
        }
    }
    Ok((
        below as f64 >= 0.99 * total as f64,
        format!("{below}/{total} grid points stay below 1 - 1e-9"),
    ))
}

fn trig_sums(_phi: f64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let m = rng.gen_range(1..=1000u64);
        let delta = rng.gen_range(1e-3..PI - 1e-3);
        worst = worst
            .max((unknown::lemma1_sum(m, delta) - unknown::lemma1_closed(m, delta)).abs())
            .max((unknown::lemma2_sum(m, delta) - unknown::lemma2_closed(m, delta)).abs());
    }
    Ok((worst < 1e-9, format!("max difference {worst:.2e}")))
}

fn average_success(phi: f64) -> Result<(bool, String)> {
    let phase = PhaseConfig::new(phi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let m = rng.gen_range(1..=1000u64);
        let theta = rng.gen_range(1e-3..FRAC_PI_2);
        let closed = unknown::avg_success_prob(m, theta, phase)?;
        let direct = unknown::avg_success_prob_direct(m, theta, phase)?;
        worst = worst.max((closed - direct).abs());
    }
    Ok((worst < 1e-9, format!("max difference {worst:.2e}")))
}

fn average_floor(phi: f64) -> Result<(bool, String)> {
    let phase = PhaseConfig::new(phi)?;
    let mut min = f64::INFINITY;
    for k in 0..=100 {
        let fraction = 10f64.powf(-6.0 + 4.0 * k as f64 / 100.0);
        let theta = crate::amplitude::theta_of(fraction)?;
        let start = unknown::critical_m(theta, phase)?.ceil() as u64;
        for m in (start..=10 * start).step_by((start as usize / 50).max(1)) {
            min = min.min(unknown::avg_success_prob(m, theta, phase)?);
        }
    }
    Ok((min >= 0.25, format!("min P_m {min:.6}")))
}

fn unknown_m_cost(phi: f64) -> Result<(bool, String)> {
    let phase = PhaseConfig::new(phi)?;
    let inst = SearchInstance::with_count(10, 1)?;
    let cfg = UnknownMConfig {
        seed: 2024,
        ..Default::default()
    };
    let s = unknown::monte_carlo_cost(&inst, phase, &cfg, 1000)?;
    let theta = crate::amplitude::theta_of(inst.fraction())?;
    let model = unknown::expected_cost_fixed(theta, phase, DEFAULT_LAMBDA)?;
    let ok = s.mean <= model * 1.05 + 3.0 * s.stderr && s.capped == 0 && s.success_rate == 1.0;
    Ok((
        ok,
        format!("mean {:.1} +- {:.1}, 7 m_q = {model:.1}, capped {}", s.mean, s.stderr, s.capped),
    ))
}

fn full_range(phi: f64) -> Result<(bool, String)> {
    let phase = PhaseConfig::new(phi)?;
    let size = 1024;
    let mut failures = 0;
    for m in [1, size / 4, size / 2, 3 * size / 4, size] {
        let inst = SearchInstance::with_count(10, m)?;
        let cfg = UnknownMConfig {
            seed: 77 + m as u64,
            ..Default::default()
        };
        let s = unknown::monte_carlo_cost(&inst, phase, &cfg, 100)?;
        failures += s.capped;
    }
    Ok((failures == 0, format!("{failures} capped runs over 5 x 100 seeds")))
}
