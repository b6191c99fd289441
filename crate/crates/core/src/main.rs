use std::f64::consts::TAU;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fixphase::commands::{self, exit};
use fixphase::optimizer::{self, EnvelopeSpec, FractionGrid, IterationRule};
use fixphase::unknown::{Backend, UnknownMConfig, DEFAULT_LAMBDA};
use fixphase::{validate, MarkedSpec, PhaseConfig, PHI_STAR};

#[derive(Parser)]
#[command(name = "fixphase", version, about = "Fixed-phase quantum search: curves, optimizer, simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    ClosedForm,
    Statevector,
}

const MARKED_HELP: &str = "Marked items: `count:M` marks 0..M-1, `set:i1,i2,...` lists indices";

#[derive(Subcommand)]
enum Command {
    /// Success probability after each algorithm's iteration count (CSV: fraction,phi,q,prob).
    ///
    /// phi = pi uses Grover's floor(pi/(4 theta)), phi = pi/2 the first peak,
    /// any other phase floor(phi / sin theta).
    Curves {
        /// Phases to tabulate; defaults to phi*, pi and pi/2.
        #[arg(long, value_delimiter = ',')]
        phi: Vec<f64>,
        /// Fraction grid M/G for M = 1..=G.
        #[arg(long, default_value_t = 1000)]
        grid_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Floored expected iterations for an unknown match count (CSV: fraction,cost_grover,cost_fixed).
    CostCurves {
        #[arg(long, default_value_t = 1000)]
        grid_points: usize,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value_t = PHI_STAR)]
        phi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Max-min search for the phase.
    Optimize {
        #[arg(long, default_value_t = 1000)]
        grid_points: usize,
        /// Explicit fraction grid; overrides --grid-points.
        #[arg(long, value_delimiter = ',')]
        fractions: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        phi_lo: f64,
        #[arg(long, default_value_t = TAU)]
        phi_hi: f64,
        #[arg(long, default_value_t = 5)]
        rounds: u32,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        /// Use Grover's schedule instead of floor(phi / sin theta).
        #[arg(long)]
        grover_schedule: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Statevector simulation of q iterations compared with the closed form.
    Simulate {
        #[arg(long)]
        n: u32,
        #[arg(long, help = MARKED_HELP)]
        marked: String,
        #[arg(long, default_value_t = PHI_STAR)]
        phi: f64,
        /// Iterations; defaults to floor(phi / sin theta).
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Monte-Carlo cost of the randomized driver for an unknown match count.
    UnknownM {
        #[arg(long)]
        n: u32,
        #[arg(long, help = MARKED_HELP)]
        marked: String,
        #[arg(long, default_value_t = PHI_STAR)]
        phi: f64,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "closed-form")]
        backend: BackendArg,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the invariant suite; exit 1 if any check fails.
    Validate {
        /// Phase constant under test.
        #[arg(long, default_value_t = PHI_STAR)]
        phi: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(exit::USAGE as u8)
        }
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, String> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn run(command: Command) -> Result<i32, String> {
    let s = |e: fixphase::Error| e.to_string();
    match command {
        Command::Curves { phi, grid_points, out } => {
            let phis = if phi.is_empty() {
                vec![PHI_STAR, std::f64::consts::PI, std::f64::consts::FRAC_PI_2]
            } else {
                phi
            };
            let grid = FractionGrid::integer_matches(grid_points).map_err(s)?;
            let rows = commands::curve_rows(&phis, &grid).map_err(s)?;
            commands::write_curves(&rows, output(&out)?).map_err(|e| e.to_string())?;
        }
        Command::CostCurves { grid_points, lambda, phi, out } => {
            let grid = FractionGrid::integer_matches(grid_points).map_err(s)?;
            let phase = PhaseConfig::new(phi).map_err(s)?;
            let rows = commands::cost_curve_rows(&grid, lambda, phase).map_err(s)?;
            commands::write_cost_curves(&rows, output(&out)?).map_err(|e| e.to_string())?;
        }
        Command::Optimize {
            grid_points,
            fractions,
            phi_lo,
            phi_hi,
            rounds,
            points,
            grover_schedule,
            format,
            out,
        } => {
            let grid = if fractions.is_empty() {
                FractionGrid::integer_matches(grid_points)
            } else {
                FractionGrid::new(fractions)
            }
            .map_err(s)?;
            let spec = EnvelopeSpec {
                grid,
                phi_lo,
                phi_hi,
                refinement_rounds: rounds,
                points_per_round: points,
                rule: if grover_schedule {
                    IterationRule::Grover
                } else {
                    IterationRule::FixedPhase
                },
            };
            let result = optimizer::optimize_phase(&spec).map_err(s)?;
            let text = match format {
                Some(Format::Json) => serde_json::to_string_pretty(&result).map_err(|e| e.to_string())? + "\n",
                Some(Format::Csv) => format!(
                    "phi_star,min_prob,argmin_fraction,evaluations\n{},{},{},{}\n",
                    commands::fmt_f64(result.phi_star),
                    commands::fmt_f64(result.min_prob),
                    commands::fmt_f64(result.argmin_fraction),
                    result.evaluations
                ),
                None => commands::render_optimization(&result),
            };
            output(&out)?.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
        }
        Command::Simulate { n, marked, phi, q, format } => {
            let spec: MarkedSpec = marked.parse().map_err(s)?;
            let instance = spec.instance(n).map_err(s)?;
            let phase = PhaseConfig::new(phi).map_err(s)?;
            let report = commands::simulate(&instance, phase, q).map_err(s)?;
            match format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?),
                _ => print!("{}", commands::render_simulation(&report)),
            }
        }
        Command::UnknownM {
            n,
            marked,
            phi,
            lambda,
            trials,
            seed,
            backend,
            format,
        } => {
            let spec: MarkedSpec = marked.parse().map_err(s)?;
            let instance = spec.instance(n).map_err(s)?;
            let phase = PhaseConfig::new(phi).map_err(s)?;
            let backend = match backend {
                BackendArg::ClosedForm => Backend::ClosedForm,
                BackendArg::Statevector => {
                    if n > 20 {
                        return Err("statevector backend supports n <= 20".into());
                    }
                    Backend::Statevector
                }
            };
            let config = UnknownMConfig {
                lambda,
                seed,
                backend,
                ..Default::default()
            };
            let report = commands::unknown_m(&instance, phase, &config, trials).map_err(s)?;
            match format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?),
                _ => print!("{}", commands::render_unknown_m(&report)),
            }
            if report.summary.capped > 0 {
                eprintln!("{} runs reached the round limit", report.summary.capped);
                return Ok(exit::CAPPED_RUNS);
            }
        }
        Command::Validate { phi } => {
            let checks = validate::run_checks(phi);
            print!("{}", validate::render_table(&checks));
            let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            if !failed.is_empty() {
                eprintln!("failed: {}", failed.join(", "));
                return Ok(exit::VALIDATION_FAILED);
            }
        }
    }
    Ok(exit::OK)
}
