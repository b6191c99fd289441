//! Max-min direct search for the phase.
//!
//! For each candidate `phi` the envelope is the worst success probability over
//! a grid of match fractions, each run for its scheduled number of iterations.
//! The search maximizes that envelope by repeated grid refinement; the
//! objective has kinks wherever `floor(phi / sin(theta))` jumps, so no
//! derivatives are used.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::amplitude::{Geometry, PhaseConfig, Schedule};
use crate::{Error, Result};

/// Sorted, de-duplicated match fractions in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionGrid(Vec<f64>);

impl FractionGrid {
    pub fn new(mut fractions: Vec<f64>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::Envelope("fraction grid is empty".into()));
        }
        if let Some(&bad) = fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return Err(Error::Fraction(bad));
        }
        fractions.sort_by(f64::total_cmp);
        fractions.dedup();
        Ok(FractionGrid(fractions))
    }

    /// `{M/N : M = 1..=N}`. With `N = 1000` this is the grid the optimal phase
    /// is defined on.
    pub fn integer_matches(items: usize) -> Result<Self> {
        if items == 0 {
            return Err(Error::Envelope("grid needs at least one item".into()));
        }
        Self::new((1..=items).map(|m| m as f64 / items as f64).collect())
    }

    /// Geometric spacing from `2^-max_log2` to 1 over `points` points, plus the
    /// dyadic fractions `M/1024`.
    pub fn geometric_dyadic(max_log2: u32, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Envelope("geometric grid needs two points".into()));
        }
        let lo = -(max_log2 as f64) * std::f64::consts::LN_2;
        let mut v: Vec<f64> = (0..points)
            .map(|i| (lo * (1.0 - i as f64 / (points - 1) as f64)).exp().min(1.0))
            .collect();
        v.extend((1..=1024).map(|m| m as f64 / 1024.0));
        Self::new(v)
    }

    pub fn fractions(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for FractionGrid {
    fn default() -> Self {
        FractionGrid::integer_matches(1000).expect("non-empty")
    }
}

/// How many iterations an algorithm runs for a given match fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationRule {
    /// `floor(phi / sin(theta))`.
    FixedPhase,
    /// `floor(pi / (4 theta))`.
    Grover,
    /// First maximizer of the success probability.
    Peak,
}

impl IterationRule {
    pub fn schedule(self, geometry: &Geometry) -> Schedule {
        match self {
            IterationRule::FixedPhase => geometry.fixed_phase_schedule(),
            IterationRule::Grover => geometry.grover_schedule(),
            IterationRule::Peak => geometry.peak_schedule(),
        }
    }

    /// The rule each compared algorithm uses: Grover's at `pi`, the peak at
    /// `pi/2`, the fixed-phase schedule otherwise.
    pub fn for_phase(phi: f64) -> Self {
        if (phi - PI).abs() < 1e-12 {
            IterationRule::Grover
        } else if (phi - FRAC_PI_2).abs() < 1e-12 {
            IterationRule::Peak
        } else {
            IterationRule::FixedPhase
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub min_prob: f64,
    pub argmin_fraction: f64,
}

/// Worst success probability over `grid` under the fixed-phase schedule.
pub fn min_envelope(phi: f64, grid: &FractionGrid) -> Result<Envelope> {
    min_envelope_with(phi, grid, IterationRule::FixedPhase)
}

/// Worst success probability over `grid`; ties go to the smallest fraction.
pub fn min_envelope_with(phi: f64, grid: &FractionGrid, rule: IterationRule) -> Result<Envelope> {
    let phase = PhaseConfig::new(phi)?;
    let mut env = Envelope {
        min_prob: f64::INFINITY,
        argmin_fraction: f64::NAN,
    };
    for &f in grid.fractions() {
        let g = Geometry::from_fraction(f, phase)?;
        let p = g.success_prob(rule.schedule(&g).0);
        if p < env.min_prob {
            env = Envelope {
                min_prob: p,
                argmin_fraction: f,
            };
        }
    }
    Ok(env)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSpec {
    pub grid: FractionGrid,
    pub phi_lo: f64,
    pub phi_hi: f64,
    /// Total number of refinement rounds, the first one included.
    pub refinement_rounds: u32,
    pub points_per_round: usize,
    /// Schedule applied to every fraction; the optimal phase is defined under
    /// [`IterationRule::FixedPhase`].
    pub rule: IterationRule,
}

impl Default for EnvelopeSpec {
    /// `[0, 2pi]` on the `M/1000` grid, refined to a spacing below `1e-12`.
    fn default() -> Self {
        EnvelopeSpec {
            grid: FractionGrid::default(),
            phi_lo: 0.0,
            phi_hi: TAU,
            refinement_rounds: 5,
            points_per_round: 2001,
            rule: IterationRule::FixedPhase,
        }
    }
}

impl EnvelopeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=TAU).contains(&self.phi_lo) || !(0.0..=TAU).contains(&self.phi_hi) {
            return Err(Error::Envelope(format!(
                "bracket [{}, {}] outside [0, 2pi]",
                self.phi_lo, self.phi_hi
            )));
        }
        if self.phi_lo >= self.phi_hi {
            return Err(Error::Envelope("phi_lo must be below phi_hi".into()));
        }
        if self.points_per_round < 5 {
            return Err(Error::Envelope("need at least 5 points per round".into()));
        }
        if self.refinement_rounds == 0 {
            return Err(Error::Envelope("need at least one round".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::Envelope("fraction grid is empty".into()));
        }
        Ok(())
    }

    /// Grid spacing of the final round.
    pub fn final_spacing(&self) -> f64 {
        let steps = (self.points_per_round - 1) as f64;
        let mut width = self.phi_hi - self.phi_lo;
        for _ in 1..self.refinement_rounds {
            width = 4.0 * width / steps;
        }
        width / steps
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub phi_star: f64,
    pub min_prob: f64,
    pub argmin_fraction: f64,
    /// Number of candidate phases whose envelope was evaluated.
    pub evaluations: u64,
    /// Best envelope value after each round.
    #[serde(skip)]
    pub history: Vec<f64>,
}

pub fn optimize_phase(spec: &EnvelopeSpec) -> Result<OptimizationResult> {
    spec.validate()?;
    let steps = spec.points_per_round - 1;
    let (mut lo, mut hi) = (spec.phi_lo, spec.phi_hi);
    let mut best: Option<(f64, Envelope)> = None;
    let mut history = Vec::with_capacity(spec.refinement_rounds as usize);
    let mut evaluations = 0u64;

    for _ in 0..spec.refinement_rounds {
        let h = (hi - lo) / steps as f64;
        let candidates: Vec<f64> = (0..=steps)
            .map(|i| if i == steps { hi } else { lo + i as f64 * h })
            .collect();
        let envelopes = candidates
            .par_iter()
            .map(|&phi| min_envelope_with(phi, &spec.grid, spec.rule).map(|e| (phi, e)))
            .collect::<Result<Vec<_>>>()?;
        evaluations += envelopes.len() as u64;

        // First maximum in phi order, so the result is independent of scheduling.
        let round_best = envelopes
            .into_iter()
            .reduce(|a, b| if b.1.min_prob > a.1.min_prob { b } else { a })
            .expect("at least one candidate");
        best = match best {
            Some(prev) if prev.1.min_prob >= round_best.1.min_prob => Some(prev),
            _ => Some(round_best),
        };
        let (center, env) = best.expect("set above");
        history.push(env.min_prob);
        lo = (center - 2.0 * h).max(spec.phi_lo);
        hi = (center + 2.0 * h).min(spec.phi_hi);
        if hi <= lo {
            break;
        }
    }

    let (phi_star, env) = best.expect("at least one round");
    Ok(OptimizationResult {
        phi_star,
        min_prob: env.min_prob,
        argmin_fraction: env.argmin_fraction,
        evaluations,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::PHI_STAR;

    #[test]
    fn grid_validation() {
        assert!(FractionGrid::new(vec![]).is_err());
        assert!(FractionGrid::new(vec![0.0, 0.5]).is_err());
        assert!(FractionGrid::new(vec![0.5, 1.1]).is_err());
        let g = FractionGrid::new(vec![0.5, 0.25, 0.5]).unwrap();
        assert_eq!(g.fractions(), &[0.25, 0.5]);
        let g = FractionGrid::integer_matches(1000).unwrap();
        assert_eq!(g.len(), 1000);
        assert_eq!(g.fractions()[0], 0.001);
        assert_eq!(*g.fractions().last().unwrap(), 1.0);
        let g = FractionGrid::geometric_dyadic(20, 1000).unwrap();
        assert!(g.len() >= 1000);
        assert!((g.fractions()[0] - 2f64.powi(-20)).abs() < 1e-18);
        assert!(g.fractions().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rule_for_phase() {
        assert_eq!(IterationRule::for_phase(PI), IterationRule::Grover);
        assert_eq!(IterationRule::for_phase(FRAC_PI_2), IterationRule::Peak);
        assert_eq!(IterationRule::for_phase(PHI_STAR), IterationRule::FixedPhase);
    }

    #[test]
    fn envelope_floors_on_standard_grid() {
        let grid = FractionGrid::default();
        let fixed = min_envelope(PHI_STAR, &grid).unwrap();
        assert!(fixed.min_prob >= 0.9958, "{fixed:?}");
        let grover = min_envelope_with(PI, &grid, IterationRule::Grover).unwrap();
        assert!((grover.min_prob - 0.5).abs() < 0.01, "{grover:?}");
        let half = min_envelope_with(FRAC_PI_2, &grid, IterationRule::Peak).unwrap();
        assert!((half.min_prob - 0.8788).abs() < 0.005, "{half:?}");
    }

    #[test]
    fn envelope_ties_pick_smallest_fraction() {
        // Both fractions are certain under Grover's schedule.
        let grid = FractionGrid::new(vec![0.25, 1.0]).unwrap();
        let e = min_envelope_with(PI, &grid, IterationRule::Grover).unwrap();
        assert!((e.min_prob - 1.0).abs() < 1e-12);
        assert_eq!(e.argmin_fraction, 0.25);
    }

    #[test]
    fn spec_validation() {
        let bad = EnvelopeSpec {
            phi_lo: 1.0,
            phi_hi: 0.5,
            ..EnvelopeSpec::default()
        };
        assert!(optimize_phase(&bad).is_err());
        let bad = EnvelopeSpec {
            phi_hi: 7.0,
            ..EnvelopeSpec::default()
        };
        assert!(optimize_phase(&bad).is_err());
        assert!(EnvelopeSpec::default().final_spacing() < 1e-12);
    }

    #[test]
    fn grover_bracket() {
        let spec = EnvelopeSpec {
            grid: FractionGrid::default(),
            phi_lo: PI - 1e-6,
            phi_hi: PI + 1e-6,
            refinement_rounds: 3,
            points_per_round: 101,
            rule: IterationRule::Grover,
        };
        let r = optimize_phase(&spec).unwrap();
        assert!(r.phi_star >= spec.phi_lo && r.phi_star <= spec.phi_hi);
        assert!((r.min_prob - 0.5).abs() < 0.01, "{r:?}");
    }

    #[test]
    fn single_fraction_certainty() {
        let spec = EnvelopeSpec {
            grid: FractionGrid::new(vec![0.25]).unwrap(),
            phi_lo: PI - 0.1,
            phi_hi: PI + 0.1,
            refinement_rounds: 6,
            points_per_round: 201,
            rule: IterationRule::Grover,
        };
        let r = optimize_phase(&spec).unwrap();
        assert!((r.min_prob - 1.0).abs() < 1e-6, "{r:?}");
        assert!((r.phi_star - PI).abs() < 1e-3, "{r:?}");
        assert!(r.history.windows(2).all(|w| w[1] >= w[0]));
    }
}
