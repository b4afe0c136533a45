use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use refuel_cli::config::check_n_range;
use refuel_cli::output::{emit, render_compare, render_critical, render_optimize, render_sweep};
use refuel_cli::study::{self, SweepPlan};
use refuel_cli::{load_config, CliError, Format, Pair};

#[derive(Debug, Parser)]
#[command(
    name = "refuel",
    version,
    about = "Compare cooperative and non-cooperative refueling campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Study file (JSON).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every architecture at one mass ratio.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Servicer dry mass over target mass; defaults to the config's.
        #[arg(long)]
        mass_ratio: Option<f64>,
    },
    /// Crossover mass ratio for the first n targets.
    CriticalRatio {
        #[command(flatten)]
        common: Common,
        /// Architectures to compare, e.g. A-D.
        #[arg(long, default_value = "A-D")]
        pair: String,
        /// Inclusive target counts, e.g. 1..12.
        #[arg(long)]
        n_range: Option<String>,
    },
    /// Cartesian sweep over the config's axes.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_range: Option<String>,
    },
    /// Search for the lightest rendezvous plan.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mass_ratio: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        starts: Option<usize>,
    },
    /// Load and check a config.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_n_range(s: &str, n: usize) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("n-range {s:?} must look like A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    check_n_range(a, b, n).map_err(|e| CliError::Usage(e.to_string()))
}

fn ratio_arg(r: Option<f64>, default: f64) -> Result<f64, CliError> {
    let r = r.unwrap_or(default);
    if !(r.is_finite() && r > 0.0) {
        return Err(CliError::Usage(format!(
            "mass ratio must be positive, got {r}"
        )));
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compare { common, mass_ratio } => {
            let s = load_config(&common.config)?;
            let ratio = ratio_arg(mass_ratio, s.params.mass_ratio())?;
            let opt = s.config.optimizer_enabled.then_some(&s.config.optimizer);
            let report = study::compare(&s.constellation, &s.params, ratio, opt)?;
            let bytes = render_compare(&report, common.format.unwrap_or(Format::Csv))?;
            emit(&bytes, common.out.as_deref())
        }
        Command::CriticalRatio {
            common,
            pair,
            n_range,
        } => {
            let s = load_config(&common.config)?;
            let pair = Pair::parse(&pair)?;
            let range = match n_range {
                Some(r) => parse_n_range(&r, s.constellation.len())?,
                None => s.config.sweeps.n_range,
            };
            let rows = study::critical_ratio(&s.constellation, &s.params, pair, range)?;
            let bytes = render_critical(&rows, common.format.unwrap_or(Format::Csv))?;
            emit(&bytes, common.out.as_deref())?;
            let missing: Vec<String> = rows
                .iter()
                .filter(|r| r.critical_ratio.is_none())
                .map(|r| format!("n = {}", r.target_count))
                .collect();
            if missing.is_empty() {
                Ok(())
            } else {
                Err(CliError::NoCrossover(format!(
                    "{} at {}",
                    pair.label(),
                    missing.join(", ")
                )))
            }
        }
        Command::Sweep { common, n_range } => {
            let s = load_config(&common.config)?;
            let axes = &s.config.sweeps;
            let n_range = match n_range {
                Some(r) => parse_n_range(&r, s.constellation.len())?,
                None => axes.n_range,
            };
            let plan = SweepPlan {
                constellation: &s.constellation,
                params: &s.params,
                mass_ratios: &axes.mass_ratios,
                n_range,
                isp_pairs: &axes.isp_pairs,
                target_sets: &axes.target_sets,
                optimizer: s.config.optimizer_enabled.then_some(&s.config.optimizer),
            };
            let rows = study::sweep(&plan)?;
            let bytes = render_sweep(&rows, common.format.unwrap_or(Format::Csv))?;
            emit(&bytes, common.out.as_deref())
        }
        Command::Optimize {
            common,
            mass_ratio,
            seed,
            starts,
        } => {
            let s = load_config(&common.config)?;
            let ratio = ratio_arg(mass_ratio, s.params.mass_ratio())?;
            let mut cfg = s.config.optimizer.clone();
            if let Some(seed) = seed {
                cfg.rng_seed = seed;
            }
            if let Some(n) = starts {
                if n == 0 {
                    return Err(CliError::Usage("--starts must be at least 1".into()));
                }
                cfg.num_starts = n;
            }
            let out = study::optimize(&s.constellation, &s.params, ratio, &cfg)?;
            let bytes = render_optimize(&out, common.format.unwrap_or(Format::Json))?;
            emit(&bytes, common.out.as_deref())
        }
        Command::Validate { common } => {
            let s = load_config(&common.config)?;
            let c = &s.constellation;
            let msg = format!(
                "ok: {} targets at {} km, mass ratio {}, {} sweep points\n",
                c.len(),
                c.servicer.altitude,
                s.params.mass_ratio(),
                s.config.sweeps.mass_ratios.len()
                    * s.config.sweeps.isp_pairs.len()
                    * s.config.sweeps.target_sets.len()
                    * (s.config.sweeps.n_range.1 - s.config.sweeps.n_range.0 + 1),
            );
            emit(msg.as_bytes(), common.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("refuel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
