//! Library side of the `fixphase` subcommands: figure data as CSV, optimizer
//! and simulation reports. The binary only parses flags and picks exit codes.
//!
//! Every floating-point CSV field is written with 17 significant digits so a
//! parse round-trips to the same `f64`.

use std::io::Write;

use serde::Serialize;

use crate::amplitude::{Geometry, PhaseConfig};
use crate::optimizer::{FractionGrid, IterationRule, OptimizationResult};
use crate::statevector::{SearchInstance, Statevector};
use crate::unknown::{self, Backend, CostSummary, UnknownMConfig};
use crate::Result;

/// Exit codes of the binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CAPPED_RUNS: i32 = 3;
}

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub fraction: f64,
    pub phi: f64,
    pub q: u64,
    pub prob: f64,
}

/// Success probability over `grid` for each phase after the number of
/// iterations that phase's algorithm runs, sorted by `(phi, fraction)`.
pub fn curve_rows(phis: &[f64], grid: &FractionGrid) -> Result<Vec<CurveRow>> {
    let mut phis = phis.to_vec();
    phis.sort_by(f64::total_cmp);
    phis.dedup();
    let mut rows = Vec::with_capacity(phis.len() * grid.len());
    for phi in phis {
        let phase = PhaseConfig::new(phi)?;
        let rule = IterationRule::for_phase(phi);
        for &fraction in grid.fractions() {
            let g = Geometry::from_fraction(fraction, phase)?;
            let q = rule.schedule(&g).0;
            rows.push(CurveRow {
                fraction,
                phi,
                q,
                prob: g.success_prob(q),
            });
        }
    }
    Ok(rows)
}

pub fn write_curves<W: Write>(rows: &[CurveRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["fraction", "phi", "q", "prob"])?;
    for r in rows {
        w.write_record([fmt_f64(r.fraction), fmt_f64(r.phi), r.q.to_string(), fmt_f64(r.prob)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostRow {
    pub fraction: f64,
    /// Absent where `M > 3N/4`.
    pub cost_grover: Option<u64>,
    pub cost_fixed: u64,
}

/// Floored expected iteration counts for Grover's and the fixed-phase driver.
pub fn cost_curve_rows(grid: &FractionGrid, lambda: f64, phase: PhaseConfig) -> Result<Vec<CostRow>> {
    grid.fractions()
        .iter()
        .map(|&fraction| {
            let theta = crate::amplitude::theta_of(fraction)?;
            let cost_grover = if fraction <= 0.75 {
                Some(unknown::expected_cost_grover(theta, lambda)?.floor() as u64)
            } else {
                None
            };
            let cost_fixed = unknown::expected_cost_fixed(theta, phase, lambda)?.floor() as u64;
            Ok(CostRow {
                fraction,
                cost_grover,
                cost_fixed,
            })
        })
        .collect()
}

pub fn write_cost_curves<W: Write>(rows: &[CostRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["fraction", "cost_grover", "cost_fixed"])?;
    for r in rows {
        w.write_record([
            fmt_f64(r.fraction),
            r.cost_grover.map(|c| c.to_string()).unwrap_or_default(),
            r.cost_fixed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn render_optimization(r: &OptimizationResult) -> String {
    format!(
        "phi_star        {}\nphi_star / pi   {}\nmin_prob        {}\nargmin_fraction {}\nevaluations     {}\n",
        fmt_f64(r.phi_star),
        fmt_f64(r.phi_star / std::f64::consts::PI),
        fmt_f64(r.min_prob),
        fmt_f64(r.argmin_fraction),
        r.evaluations
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub n: u32,
    pub marked: usize,
    pub phi: f64,
    pub q: u64,
    pub simulated: f64,
    pub predicted: f64,
    pub difference: f64,
}

/// Runs `q` iterations of `D` on the full statevector (the fixed-phase
/// schedule when `q` is `None`) and compares with the closed form.
pub fn simulate(instance: &SearchInstance, phase: PhaseConfig, q: Option<u64>) -> Result<SimulationReport> {
    let g = Geometry::from_fraction(instance.fraction(), phase)?;
    let q = q.unwrap_or_else(|| g.fixed_phase_schedule().0);
    let mut state = Statevector::uniform(instance.qubits())?;
    state.apply_d_times(instance, phase.phi(), q)?;
    let simulated = state.marked_probability(instance)?;
    let predicted = g.success_prob(q);
    Ok(SimulationReport {
        n: instance.qubits(),
        marked: instance.marked_count(),
        phi: phase.phi(),
        q,
        simulated,
        predicted,
        difference: simulated - predicted,
    })
}

pub fn render_simulation(r: &SimulationReport) -> String {
    format!(
        "n {}  N {}  M {}  phi {}  q {}\nstatevector  {}\nclosed form  {}\ndifference   {:e}\n",
        r.n,
        1u64 << r.n,
        r.marked,
        fmt_f64(r.phi),
        r.q,
        fmt_f64(r.simulated),
        fmt_f64(r.predicted),
        r.difference
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnknownMReport {
    pub n: u32,
    pub marked: usize,
    pub phi: f64,
    pub lambda: f64,
    pub backend: Backend,
    #[serde(flatten)]
    pub summary: CostSummary,
    /// `coefficient(lambda) / sin(delta)`, i.e. `7 m_q` at `lambda = 8/7`.
    pub model: Option<f64>,
}

pub fn unknown_m(
    instance: &SearchInstance,
    phase: PhaseConfig,
    config: &UnknownMConfig,
    trials: u64,
) -> Result<UnknownMReport> {
    let summary = unknown::monte_carlo_cost(instance, phase, config, trials)?;
    let theta = crate::amplitude::theta_of(instance.fraction())?;
    Ok(UnknownMReport {
        n: instance.qubits(),
        marked: instance.marked_count(),
        phi: phase.phi(),
        lambda: config.lambda,
        backend: config.backend,
        summary,
        model: unknown::expected_cost_fixed(theta, phase, config.lambda).ok(),
    })
}

pub fn render_unknown_m(r: &UnknownMReport) -> String {
    let s = &r.summary;
    let model = r.model.map(fmt_f64).unwrap_or_else(|| "n/a".into());
    format!(
        "n {}  M {}  phi {}  lambda {}  backend {:?}\n\
         trials        {}\n\
         mean          {}\n\
         std dev       {}\n\
         stderr        {}\n\
         max           {}\n\
         success rate  {}\n\
         capped runs   {}\n\
         model 7 m_q   {}\n",
        r.n,
        r.marked,
        fmt_f64(r.phi),
        fmt_f64(r.lambda),
        r.backend,
        s.trials,
        fmt_f64(s.mean),
        fmt_f64(s.std_dev),
        fmt_f64(s.stderr),
        s.max,
        fmt_f64(s.success_rate),
        s.capped,
        model
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::PHI_STAR;
    use std::f64::consts::PI;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [PHI_STAR, 1.0 / 3.0, 1e-300, 0.9958, 1.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn grover_curve_hits_certainty_at_quarter() {
        let grid = FractionGrid::integer_matches(8).unwrap();
        let rows = curve_rows(&[PI], &grid).unwrap();
        let quarter = rows.iter().find(|r| r.fraction == 0.25).unwrap();
        assert_eq!(quarter.q, 1);
        assert!((quarter.prob - 1.0).abs() < 1e-9);
    }

    #[test]
    fn curves_sorted_by_phase_then_fraction() {
        let grid = FractionGrid::integer_matches(10).unwrap();
        let rows = curve_rows(&[PHI_STAR, PI / 2.0, PI], &grid).unwrap();
        assert_eq!(rows.len(), 30);
        assert!(rows
            .windows(2)
            .all(|w| (w[0].phi, w[0].fraction) < (w[1].phi, w[1].fraction)));
    }

    #[test]
    fn cost_rows() {
        let grid = FractionGrid::new(vec![0.5, 0.75, 0.8, 1.0]).unwrap();
        let rows = cost_curve_rows(&grid, 8.0 / 7.0, PhaseConfig::FIXED).unwrap();
        assert_eq!(rows[0].cost_grover, Some(8));
        assert!(rows[1].cost_grover.is_some());
        assert_eq!(rows[2].cost_grover, None);
        assert_eq!(rows[3].cost_grover, None);
        for r in &rows {
            let g = Geometry::from_fraction(r.fraction, PhaseConfig::FIXED).unwrap();
            assert_eq!(r.cost_fixed, (7.0 / g.sin_delta).floor() as u64);
        }
        let mut buf = Vec::new();
        write_cost_curves(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("fraction,cost_grover,cost_fixed"));
        assert!(lines.nth(2).unwrap().contains(",,"));
    }

    #[test]
    fn simulate_examples() {
        let inst = SearchInstance::new(2, [3]).unwrap();
        let r = simulate(&inst, PhaseConfig::GROVER, Some(1)).unwrap();
        assert!((r.simulated - 1.0).abs() < 1e-12 && r.difference.abs() < 1e-12);
        let inst = SearchInstance::with_count(6, 5).unwrap();
        let r = simulate(&inst, PhaseConfig::FIXED, Some(0)).unwrap();
        assert!((r.simulated - 5.0 / 64.0).abs() < 1e-15);
    }
}
