//! Batch CLI over the finchain library: structural analysis, stationary
//! solving, convergence curves, and seeded Metropolis–Hastings / Ising Gibbs
//! runs with file I/O.
//!
//! Exit codes are a stable contract: 0 success, 2 input error (unparseable
//! or invariant-violating files, bad flags), 3 structural precondition
//! failure (kernel not irreducible / not aperiodic). State numbers on the
//! command line and in CSV output are 1-based.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use finchain::convergence::convergence_curve;
use finchain::io::{self, FunctionSpec};
use finchain::sampler::{ergodic_average_scalar, mh_kernel, run_mh_chain};
use finchain::stationary::solve_stationary;
use finchain::structure::analyze;
use finchain::targets::{enumerate_expectation, ising_sweep_in_place, ising_weights, IsingModel};
use finchain::{Error, RandomStream};

#[derive(Parser)]
#[command(
    name = "finchain",
    version,
    about = "Finite-state Markov chain analysis, diagnostics, and samplers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the primary result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Report irreducibility, aperiodicity, period, and the positivity
    /// certificate of a kernel as JSON.
    Analyze {
        /// Kernel JSON file.
        kernel: PathBuf,
    },
    /// Solve for the invariant distribution of an irreducible kernel.
    Stationary {
        /// Kernel JSON file.
        kernel: PathBuf,
    },
    /// Emit the total-variation convergence curve `n,tv,bound` as CSV.
    Converge {
        /// Kernel JSON file.
        kernel: PathBuf,
        /// Number of steps to tabulate.
        #[arg(long, value_name = "N")]
        n_max: usize,
    },
    /// Run a seeded Metropolis-Hastings chain and report an ergodic
    /// estimate next to its exact enumerated value.
    Mh {
        /// Target weights JSON file (mass need not be normalized).
        #[arg(long, value_name = "FILE")]
        weights: PathBuf,
        /// Proposal kernel JSON file.
        #[arg(long, value_name = "FILE")]
        proposal: PathBuf,
        /// Start state, 1-based.
        #[arg(long, value_name = "STATE")]
        start: usize,
        /// Number of transitions to simulate.
        #[arg(long, value_name = "N")]
        steps: usize,
        /// States discarded before averaging.
        #[arg(long, default_value_t = 0, value_name = "N")]
        burn_in: usize,
        /// Stream seed; identical seeds reproduce runs bit for bit.
        #[arg(long, value_name = "U64")]
        seed: u64,
        /// Estimand: `identity` or `indicator:<state>` (1-based).
        #[arg(long, value_name = "SPEC")]
        f: String,
        /// Also write the realized trace as CSV.
        #[arg(long, value_name = "PATH")]
        trace_out: Option<PathBuf>,
        /// Also write the derived Metropolis-Hastings kernel as JSON.
        #[arg(long, value_name = "PATH")]
        kernel_out: Option<PathBuf>,
    },
    /// Run a seeded Gibbs sweep chain on an Ising grid and compare the
    /// magnetization estimate against exact enumeration.
    #[command(alias = "gibbs")]
    Ising {
        /// Grid dimensions as `<width>x<height>`, at most 20 sites.
        #[arg(long, value_name = "WxH")]
        grid: String,
        /// Inverse-temperature coupling.
        #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
        beta: f64,
        /// Number of full sweeps to simulate.
        #[arg(long, value_name = "N")]
        steps: usize,
        /// Sweeps discarded before averaging.
        #[arg(long, default_value_t = 0, value_name = "N")]
        burn_in: usize,
        /// Stream seed; identical seeds reproduce runs bit for bit.
        #[arg(long, value_name = "U64")]
        seed: u64,
        /// Also write the per-sweep magnetization trace as CSV.
        #[arg(long, value_name = "PATH")]
        trace_out: Option<PathBuf>,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NotIrreducible | Error::NotAperiodic => 3,
            _ => 2,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|err| CliError::input(format!("cannot read {}: {err}", path.display())))
}

fn write_file(path: &PathBuf, content: &str) -> Result<(), CliError> {
    fs::write(path, content)
        .map_err(|err| CliError::input(format!("cannot write {}: {err}", path.display())))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct StationaryOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    mass: Vec<f64>,
    residual: f64,
    unique: bool,
}

#[derive(Serialize)]
struct EstimateOutput {
    estimate: f64,
    exact: f64,
    abs_error: f64,
    /// Final chain state (1-based), for last-sample extraction.
    last_state: usize,
}

#[derive(Serialize)]
struct MagnetizationOutput {
    mean_magnetization: f64,
    exact_mean_magnetization: f64,
    abs_error_mean: f64,
    mean_abs_magnetization: f64,
    exact_mean_abs_magnetization: f64,
    abs_error_abs: f64,
    /// Post-burn-in fraction of sweeps each site spent at +1; spin-flip
    /// symmetry makes the exact value 1/2 for every site and coupling.
    site_up_frequency: Vec<f64>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { kernel } => {
            let k = io::parse_kernel_json(&read_file(&kernel)?)?;
            let report = analyze(&k);
            let json = serde_json::to_string(&report).expect("report serializes");
            emit(&cli.out, &format!("{json}\n"))
        }
        Command::Stationary { kernel } => {
            let k = io::parse_kernel_json(&read_file(&kernel)?)?;
            let result = solve_stationary(&k)?;
            let output = StationaryOutput {
                labels: k.space().labels().map(|l| l.to_vec()),
                mass: result.pi.mass().to_vec(),
                residual: result.residual,
                unique: result.unique,
            };
            let json = serde_json::to_string(&output).expect("output serializes");
            emit(&cli.out, &format!("{json}\n"))
        }
        Command::Converge { kernel, n_max } => {
            if n_max == 0 {
                return Err(CliError::input("--n-max must be at least 1"));
            }
            let k = io::parse_kernel_json(&read_file(&kernel)?)?;
            let curve = convergence_curve(&k, n_max)?;
            emit(&cli.out, &curve.to_csv())
        }
        Command::Mh {
            weights,
            proposal,
            start,
            steps,
            burn_in,
            seed,
            f,
            trace_out,
            kernel_out,
        } => {
            if steps == 0 {
                return Err(CliError::input("--steps must be at least 1"));
            }
            if burn_in >= steps {
                return Err(CliError::input(format!(
                    "--burn-in {burn_in} must be smaller than --steps {steps}"
                )));
            }
            let w = io::parse_weights_json(&read_file(&weights)?)?;
            let q = io::parse_kernel_json(&read_file(&proposal)?)?;
            let k = w.len();
            if start == 0 || start > k {
                return Err(CliError::input(format!(
                    "--start {start} out of range 1..={k}"
                )));
            }
            let spec = FunctionSpec::parse(&f)?;
            spec.validate(k)?;
            let trace = run_mh_chain(&w, &q, start - 1, steps, RandomStream::new(seed))?;
            if let Some(path) = &trace_out {
                write_file(path, &trace.to_csv())?;
            }
            if let Some(path) = &kernel_out {
                let derived = mh_kernel(&w, &q)?;
                write_file(path, &io::kernel_to_json(&derived))?;
            }
            let estimate = ergodic_average_scalar(&trace, |s| spec.eval(s), burn_in)?;
            let exact = enumerate_expectation(&w, |s| spec.eval(s));
            let output = EstimateOutput {
                estimate,
                exact,
                abs_error: (estimate - exact).abs(),
                last_state: trace.states[trace.len() - 1] + 1,
            };
            let json = serde_json::to_string(&output).expect("output serializes");
            emit(&cli.out, &format!("{json}\n"))
        }
        Command::Ising {
            grid,
            beta,
            steps,
            burn_in,
            seed,
            trace_out,
        } => {
            if steps == 0 {
                return Err(CliError::input("--steps must be at least 1"));
            }
            if burn_in >= steps {
                return Err(CliError::input(format!(
                    "--burn-in {burn_in} must be smaller than --steps {steps}"
                )));
            }
            let (width, height) = io::parse_grid(&grid)?;
            let model = IsingModel::new(width, height, beta)?;
            let mut rng = RandomStream::new(seed);
            let mut spins = vec![1i8; model.sites()];
            let mut magnetization = Vec::with_capacity(steps);
            let mut up_counts = vec![0u64; model.sites()];
            for sweep in 0..steps {
                ising_sweep_in_place(&model, &mut spins, &mut rng);
                magnetization.push(model.magnetization(&spins));
                if sweep >= burn_in {
                    for (count, &spin) in up_counts.iter_mut().zip(&spins) {
                        if spin > 0 {
                            *count += 1;
                        }
                    }
                }
            }
            if let Some(path) = &trace_out {
                let mut csv = format!("# seed={seed}\nsweep,magnetization\n");
                for (sweep, &m) in magnetization.iter().enumerate() {
                    csv.push_str(&format!("{},{}\n", sweep + 1, m));
                }
                write_file(path, &csv)?;
            }
            let kept = &magnetization[burn_in..];
            let count = kept.len() as f64;
            let mean: f64 = kept.iter().sum::<f64>() / count;
            let mean_abs: f64 = kept.iter().map(|m| m.abs()).sum::<f64>() / count;
            let table = ising_weights(&model);
            let exact_mean = enumerate_expectation(&table, |s| {
                model.magnetization(&model.decode_spins(s))
            });
            let exact_mean_abs = enumerate_expectation(&table, |s| {
                model.magnetization(&model.decode_spins(s)).abs()
            });
            let output = MagnetizationOutput {
                mean_magnetization: mean,
                exact_mean_magnetization: exact_mean,
                abs_error_mean: (mean - exact_mean).abs(),
                mean_abs_magnetization: mean_abs,
                exact_mean_abs_magnetization: exact_mean_abs,
                abs_error_abs: (mean_abs - exact_mean_abs).abs(),
                site_up_frequency: up_counts
                    .iter()
                    .map(|&c| c as f64 / count)
                    .collect(),
            };
            let json = serde_json::to_string(&output).expect("output serializes");
            emit(&cli.out, &format!("{json}\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
