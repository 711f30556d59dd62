use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rcsim_core::complex::{sample_growth_order, sample_ynp};
use rcsim_core::harness::{
    parse_grid, run_experiment, run_oracle_check_with, trial_growth_order, trial_rng, window_probability,
    ExperimentConfig, ExperimentReport, Mode, Window,
};
use rcsim_core::process::{run_process, write_trace_csv, ProcessOptions};
use rcsim_core::Error;

#[derive(Parser)]
#[command(name = "rcsim", version, about = "Random simplicial complex experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distribution of the top cohomology dimension in Y_k(n, p).
    Betti {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        window: WindowArgs,
        /// Write complexes whose Betti number differs from the isolated count here.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
    /// Distribution of the isolated (k-1)-face count.
    Isolated {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Hitting times M1 <= M2 <= M3 of the growth process.
    Hitting {
        #[command(flatten)]
        common: Common,
        /// Write a per-insertion trace CSV for every trial into this directory.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Vanishing frequency across a grid of window offsets.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// start:end:step
        #[arg(long, allow_hyphen_values = true)]
        c_grid: String,
    },
    /// Exact cross-checks against brute-force enumeration on small complexes.
    OracleCheck {
        #[command(flatten)]
        common: Common,
        /// Smallest vertex count; defaults to k + 2.
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: usize,
        /// Coset-minimal cocycle records as JSON lines.
        #[arg(long)]
        survey_out: Option<PathBuf>,
    },
    /// Sample one complex (or growth order) and write it as JSON.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trial index under the seed, matching the numbering of `betti` runs.
        #[arg(long, default_value_t = 0)]
        trial: usize,
        /// Write a growth order instead of a complex.
        #[arg(long)]
        growth_order: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Number of vertices.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-trial CSV path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Include wall time in the JSON report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct WindowArgs {
    /// Window offset c in p = (k ln n + c) / n.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "p")]
    c: Option<f64>,
    /// Explicit face probability.
    #[arg(long)]
    p: Option<f64>,
}

impl WindowArgs {
    fn window(&self) -> Window {
        match (self.p, self.c) {
            (Some(p), _) => Window::P(p),
            (None, c) => Window::C(c.unwrap_or(0.0)),
        }
    }
}

fn config(mode: Mode, common: &Common) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(mode, common.n, common.k, common.trials, common.seed);
    cfg.threads = common.threads;
    cfg
}

fn create(path: &Path) -> rcsim_core::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn emit(report: &ExperimentReport, common: &Common) -> rcsim_core::Result<()> {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let json = report.to_json(common.timing)?;
    match &common.out {
        Some(path) => {
            let mut f = create(path)?;
            f.write_all(json.as_bytes())?;
            f.write_all(b"\n")?;
            f.flush()?;
        }
        None => println!("{json}"),
    }
    if let Some(path) = &common.csv {
        let mut f = create(path)?;
        report.write_trials_csv(&mut f)?;
        f.flush()?;
    }
    Ok(())
}

fn run(cli: Cli) -> rcsim_core::Result<()> {
    match cli.command {
        Command::Betti {
            common,
            window,
            dump_dir,
        } => {
            let mut cfg = config(Mode::BettiDist, &common);
            cfg.window = window.window();
            cfg.dump_dir = dump_dir;
            let report = run_experiment(&cfg)?;
            if let Some(b) = &report.betti {
                eprintln!(
                    "vanish {:.4} (limit {:.4}), beta = isolated in {:.4} of trials",
                    b.vanish_frequency, b.predicted_vanish_probability, b.beta_equals_isolated_frequency
                );
            }
            emit(&report, &common)
        }
        Command::Isolated { common, window } => {
            let mut cfg = config(Mode::IsolatedDist, &common);
            cfg.window = window.window();
            let report = run_experiment(&cfg)?;
            if let Some(i) = &report.isolated {
                eprintln!(
                    "mean {:.4}, exact {:.4}, limit {:.4}",
                    i.distribution.mean, i.lambda_exact, i.lambda_limit
                );
            }
            emit(&report, &common)
        }
        Command::Hitting { common, trace } => {
            let cfg = config(Mode::Hitting, &common);
            let report = run_experiment(&cfg)?;
            if let Some(h) = &report.hitting {
                eprintln!("freq12 {:.4}, freq123 {:.4}", h.freq12, h.freq123);
            }
            if let Some(dir) = trace {
                fs::create_dir_all(&dir)?;
                for i in 0..cfg.trials {
                    let order = trial_growth_order(&cfg, i)?;
                    let run = run_process(&order, ProcessOptions { early_exit: false, trace: true })?;
                    let mut f = create(&dir.join(format!("trace-{i:06}.csv")))?;
                    write_trace_csv(run.trace.as_deref().unwrap_or_default(), &mut f)?;
                    f.flush()?;
                }
            }
            emit(&report, &common)
        }
        Command::Sweep { common, c_grid } => {
            let mut cfg = config(Mode::VanishSweep, &common);
            cfg.c_grid = parse_grid(&c_grid)?;
            let report = run_experiment(&cfg)?;
            emit(&report, &common)
        }
        Command::OracleCheck {
            common,
            n_min,
            n_max,
            survey_out,
        } => {
            let mut cfg = config(Mode::OracleCheck, &common);
            cfg.n = n_min.unwrap_or(common.k + 2);
            cfg.n_max = Some(n_max);
            let report = match &survey_out {
                Some(path) => {
                    let mut f = create(path)?;
                    let report = run_oracle_check_with(&cfg, Some(&mut f))?;
                    f.flush()?;
                    report
                }
                None => run_oracle_check_with(&cfg, None)?,
            };
            if let Some(o) = &report.oracle {
                eprintln!(
                    "{} complexes: {} betti mismatches, {} connectivity violations, {} structure violations",
                    o.complexes,
                    o.betti_mismatches.len(),
                    o.connectivity_violations.len(),
                    o.structure.violations.len()
                );
            }
            emit(&report, &common)
        }
        Command::Generate {
            n,
            k,
            window,
            seed,
            trial,
            growth_order,
            out,
        } => {
            let mut rng = trial_rng(seed, trial);
            let json = if growth_order {
                sample_growth_order(n, k, &mut rng)?.to_json()?
            } else {
                let p = match window.window() {
                    Window::P(p) => p,
                    Window::C(c) => {
                        let (p, clamped) = window_probability(n, k, c);
                        if clamped {
                            eprintln!("warning: p clamped to {p}");
                        }
                        p
                    }
                };
                sample_ynp(n, k, p, &mut rng)?.to_json()?
            };
            match out {
                Some(path) => {
                    let mut f = create(&path)?;
                    f.write_all(json.as_bytes())?;
                    f.write_all(b"\n")?;
                    f.flush()?;
                }
                None => println!("{json}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::InvalidInput(_) => 2,
                Error::Capacity { .. } => 3,
                _ => 1,
            })
        }
    }
}
