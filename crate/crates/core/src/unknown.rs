//! Search when the number of matches is unknown.
//!
//! The driver keeps a real-valued range `m`, starting at 1. Each round draws
//! `j` uniformly from `{0, ..., ceil(m) - 1}`, runs `j` iterations of `D` on a
//! fresh uniform state, measures, and stops if the outcome is marked.
//! Otherwise `m` grows to `min(lambda m, sqrt(N))`.
//!
//! Randomness: every run uses `rand_chacha::ChaCha8Rng::seed_from_u64(seed)`
//! with stream 0. Trial `t` of a Monte-Carlo batch uses the same key with
//! stream `t`, so batches are reproducible and independent of thread count.
//! `j` comes from `gen_range(0..ceil(m))`, uniforms from `gen::<f64>()`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitude::{Geometry, PhaseConfig};
use crate::statevector::{MeasurementSampler, SearchInstance, Statevector};
use crate::{Error, Result};

pub const DEFAULT_LAMBDA: f64 = 8.0 / 7.0;

/// Amplitude budget for cached measurement distributions in the statevector
/// backend.
const CDF_CACHE_BUDGET: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MCap {
    /// `m <- min(lambda m, sqrt(N))`.
    SqrtN,
    /// `m <- lambda m`.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// A measurement is marked with probability `P_s^j`; the concrete item is
    /// drawn uniformly from the marked or unmarked set.
    ClosedForm,
    /// Full simulation of `D^j` on all `N` amplitudes.
    Statevector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnknownMConfig {
    pub lambda: f64,
    pub cap: MCap,
    /// Defaults to `4 ceil(log_lambda sqrt(N)) + 2048`.
    pub max_rounds: Option<u64>,
    pub seed: u64,
    pub backend: Backend,
}

impl Default for UnknownMConfig {
    fn default() -> Self {
        UnknownMConfig {
            lambda: DEFAULT_LAMBDA,
            cap: MCap::SqrtN,
            max_rounds: None,
            seed: 0,
            backend: Backend::ClosedForm,
        }
    }
}

impl UnknownMConfig {
    pub fn validate(&self) -> Result<()> {
        check_lambda(self.lambda)?;
        if self.max_rounds == Some(0) {
            return Err(Error::Config("max_rounds must be positive".into()));
        }
        Ok(())
    }

    pub fn round_limit(&self, items: usize) -> u64 {
        self.max_rounds.unwrap_or_else(|| {
            let growth = (items as f64).sqrt().ln() / self.lambda.ln();
            4 * growth.ceil().max(0.0) as u64 + 2048
        })
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 1.0 && lambda < 4.0 / 3.0 {
        Ok(())
    } else {
        Err(Error::Lambda(lambda))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Round {
    pub m: f64,
    pub j: u64,
    pub measured: usize,
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub rounds: Vec<Round>,
    /// Sum of `j` over all rounds; the classical check of `f` is not counted.
    pub total_iterations: u64,
    pub found: Option<usize>,
    /// The round limit was reached before a marked item was measured.
    pub capped: bool,
}

/// Source of measurement outcomes after `j` iterations.
enum Measurer<'a> {
    ClosedForm {
        instance: &'a SearchInstance,
        geometry: Geometry,
    },
    Statevector(StatevectorMeasurer<'a>),
}

impl<'a> Measurer<'a> {
    fn new(instance: &'a SearchInstance, phase: PhaseConfig, config: &UnknownMConfig) -> Result<Self> {
        match config.backend {
            Backend::ClosedForm => Ok(Measurer::ClosedForm {
                instance,
                geometry: Geometry::from_fraction(instance.fraction(), phase)?,
            }),
            Backend::Statevector => {
                let max_j = match config.cap {
                    MCap::SqrtN => (instance.size() as f64).sqrt().ceil() as u64,
                    MCap::Unbounded => 0,
                };
                StatevectorMeasurer::new(instance, phase.phi(), max_j).map(Measurer::Statevector)
            }
        }
    }

    fn measure(&self, j: u64, rng: &mut ChaCha8Rng) -> Result<usize> {
        match self {
            Measurer::ClosedForm { instance, geometry } => {
                let hit = rng.gen::<f64>() < geometry.success_prob(j);
                let marked = instance.marked();
                let unmarked = instance.size() - marked.len();
                if hit || unmarked == 0 {
                    Ok(marked[rng.gen_range(0..marked.len())])
                } else {
                    Ok(instance.unmarked_nth(rng.gen_range(0..unmarked)))
                }
            }
            Measurer::Statevector(sv) => sv.measure(j, rng),
        }
    }
}

/// Measurement distributions of `D^j |psi_0>`, cached for small `j`.
struct StatevectorMeasurer<'a> {
    instance: &'a SearchInstance,
    phi: f64,
    cache: Vec<MeasurementSampler>,
    last: Statevector,
}

impl<'a> StatevectorMeasurer<'a> {
    fn new(instance: &'a SearchInstance, phi: f64, max_j: u64) -> Result<Self> {
        let per_state = instance.size();
        let cached = (max_j as usize + 1).min((CDF_CACHE_BUDGET / per_state).max(1));
        let mut state = Statevector::uniform(instance.qubits())?;
        let mut cache = Vec::with_capacity(cached);
        for k in 0..cached {
            if k > 0 {
                state.apply_d(instance, phi)?;
            }
            cache.push(state.sampler());
        }
        Ok(StatevectorMeasurer {
            instance,
            phi,
            cache,
            last: state,
        })
    }

    fn measure(&self, j: u64, rng: &mut ChaCha8Rng) -> Result<usize> {
        if let Some(sampler) = self.cache.get(j as usize) {
            return Ok(sampler.sample(rng));
        }
        let mut state = self.last.clone();
        let done = self.cache.len() as u64 - 1;
        state.apply_d_times(self.instance, self.phi, j - done)?;
        Ok(state.measure_sample(rng))
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn drive(
    instance: &SearchInstance,
    config: &UnknownMConfig,
    measurer: &Measurer<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<RunRecord> {
    let root_n = (instance.size() as f64).sqrt();
    let limit = config.round_limit(instance.size());
    let mut m = 1.0f64;
    let mut rounds = Vec::new();
    let mut total = 0u64;
    for _ in 0..limit {
        let range = m.ceil().max(1.0) as u64;
        let j = rng.gen_range(0..range);
        let measured = measurer.measure(j, rng)?;
        let hit = instance.is_marked(measured);
        total += j;
        rounds.push(Round { m, j, measured, hit });
        if hit {
            return Ok(RunRecord {
                rounds,
                total_iterations: total,
                found: Some(measured),
                capped: false,
            });
        }
        m = match config.cap {
            MCap::SqrtN => (config.lambda * m).min(root_n),
            MCap::Unbounded => config.lambda * m,
        };
    }
    Ok(RunRecord {
        rounds,
        total_iterations: total,
        found: None,
        capped: true,
    })
}

/// One run of the randomized driver; deterministic given `config.seed`.
pub fn run_unknown_m(
    instance: &SearchInstance,
    phase: PhaseConfig,
    config: &UnknownMConfig,
) -> Result<RunRecord> {
    config.validate()?;
    let measurer = Measurer::new(instance, phase, config)?;
    drive(instance, config, &measurer, &mut trial_rng(config.seed, 0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostSummary {
    pub trials: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub stderr: f64,
    pub max: u64,
    pub success_rate: f64,
    pub capped: u64,
}

/// Runs `trials` independent searches; trial `t` uses stream `t` of `config.seed`.
pub fn monte_carlo_cost(
    instance: &SearchInstance,
    phase: PhaseConfig,
    config: &UnknownMConfig,
    trials: u64,
) -> Result<CostSummary> {
    if trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    config.validate()?;
    let measurer = Measurer::new(instance, phase, config)?;
    let records = (0..trials)
        .into_par_iter()
        .map(|t| drive(instance, config, &measurer, &mut trial_rng(config.seed, t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(&records))
}

fn summarize(records: &[RunRecord]) -> CostSummary {
    let n = records.len() as f64;
    let costs: Vec<f64> = records.iter().map(|r| r.total_iterations as f64).collect();
    let mean = costs.iter().sum::<f64>() / n;
    let var = if records.len() > 1 {
        costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std_dev = var.sqrt();
    CostSummary {
        trials: records.len() as u64,
        mean,
        std_dev,
        stderr: std_dev / n.sqrt(),
        max: records.iter().map(|r| r.total_iterations).max().unwrap_or(0),
        success_rate: records.iter().filter(|r| r.found.is_some()).count() as f64 / n,
        capped: records.iter().filter(|r| r.capped).count() as u64,
    }
}

// Trigonometric sums behind the average-case analysis.

/// `sum_{q=0}^{m-1} sin^2((q+1) delta) + sin^2(q delta)`.
pub fn lemma1_sum(m: u64, delta: f64) -> f64 {
    (0..m)
        .map(|q| {
            let a = ((q + 1) as f64 * delta).sin();
            let b = (q as f64 * delta).sin();
            a * a + b * b
        })
        .sum()
}

/// `m - cos(delta) sin(2 m delta) / (2 sin(delta))`.
pub fn lemma1_closed(m: u64, delta: f64) -> f64 {
    m as f64 - delta.cos() * sin_ratio(2 * m, delta) / 2.0
}

/// `sum_{q=0}^{m-1} sin((q+1) delta) sin(q delta)`.
pub fn lemma2_sum(m: u64, delta: f64) -> f64 {
    (0..m)
        .map(|q| ((q + 1) as f64 * delta).sin() * (q as f64 * delta).sin())
        .sum()
}

/// `(m/2) cos(delta) - sin(2 m delta) / (4 sin(delta))`.
pub fn lemma2_closed(m: u64, delta: f64) -> f64 {
    m as f64 / 2.0 * delta.cos() - sin_ratio(2 * m, delta) / 4.0
}

/// `sin(k delta) / sin(delta)`, continuous at `sin(delta) = 0`.
fn sin_ratio(k: u64, delta: f64) -> f64 {
    crate::amplitude::chebyshev_u(k as i64 - 1, delta)
}

/// Average success probability when `q` is uniform in `{0, ..., m-1}`:
///
/// ```text
/// P_m = (1 + cos(delta) cos(phi) - (cos(delta) + cos(phi)) sin(2 m delta) / (2 m sin(delta)))
///       / (c (1 - cos(delta)))
/// ```
///
/// Falls back to direct averaging when `sin(delta)` or `c` vanishes.
pub fn avg_success_prob(m: u64, theta: f64, phase: PhaseConfig) -> Result<f64> {
    if m == 0 {
        return Err(Error::Config("m must be positive".into()));
    }
    let g = Geometry::new(theta, phase)?;
    if g.is_degenerate() || g.c == 0.0 {
        return avg_success_prob_direct(m, theta, phase);
    }
    let cos_phi = 1.0 - g.c;
    let ratio = g.chebyshev(2 * m as i64 - 1) / (2.0 * m as f64);
    let p = (1.0 + g.y * cos_phi - (g.y + cos_phi) * ratio) / (g.c * (2.0 - g.c * g.fraction));
    Ok(p.clamp(0.0, 1.0))
}

/// `(1/m) sum_{q=0}^{m-1} P_s^q`.
pub fn avg_success_prob_direct(m: u64, theta: f64, phase: PhaseConfig) -> Result<f64> {
    if m == 0 {
        return Err(Error::Config("m must be positive".into()));
    }
    let g = Geometry::new(theta, phase)?;
    Ok((0..m).map(|q| g.success_prob(q)).sum::<f64>() / m as f64)
}

/// `m_q = 1 / sin(delta)`; an error when `sin(delta)` is below the degeneracy threshold.
pub fn critical_m(theta: f64, phase: PhaseConfig) -> Result<f64> {
    let g = Geometry::new(theta, phase)?;
    if g.is_degenerate() {
        return Err(Error::DegenerateDelta);
    }
    Ok(1.0 / g.sin_delta)
}

/// `1/(2(lambda - 1)) + 1/(2(1 - 0.75 lambda))`, which is 7 at `lambda = 8/7`.
pub fn fixed_cost_coefficient(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(1.0 / (2.0 * (lambda - 1.0)) + 1.0 / (2.0 * (1.0 - 0.75 * lambda)))
}

/// Grover accounting keeps the extra factor `lambda^{v} <= lambda m`, giving
/// `lambda` times the fixed-phase coefficient: 8 at `lambda = 8/7`.
pub fn grover_cost_coefficient(lambda: f64) -> Result<f64> {
    Ok(lambda * fixed_cost_coefficient(lambda)?)
}

/// Expected total iterations of the driver with the fixed-phase operator,
/// `coefficient(lambda) / sin(delta)`.
pub fn expected_cost_fixed(theta: f64, phase: PhaseConfig, lambda: f64) -> Result<f64> {
    Ok(fixed_cost_coefficient(lambda)? * critical_m(theta, phase)?)
}

/// Expected total iterations with Grover's operator, `8 / sin(2 theta)` at
/// `lambda = 8/7`. Only valid for `M <= 3N/4`.
pub fn expected_cost_grover(theta: f64, lambda: f64) -> Result<f64> {
    let g = Geometry::new(theta, PhaseConfig::GROVER)?;
    if g.fraction > 0.75 + 1e-12 {
        return Err(Error::GroverDomain(g.fraction));
    }
    let sin_2theta = 2.0 * g.sin_theta * g.cos_theta;
    Ok(grover_cost_coefficient(lambda)? / sin_2theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostModel {
    pub m_q: f64,
    /// `ceil(log_lambda m_q)`.
    pub v_q: u64,
    pub expected_total: f64,
}

pub fn cost_model(theta: f64, phase: PhaseConfig, lambda: f64) -> Result<CostModel> {
    let m_q = critical_m(theta, phase)?;
    Ok(CostModel {
        m_q,
        v_q: (m_q.ln() / lambda.ln()).ceil().max(0.0) as u64,
        expected_total: fixed_cost_coefficient(lambda)? * m_q,
    })
}
