//! Command-line front end: bias sweeps to CSV, resonance location,
//! single-point eigendecomposition dumps, and the built-in invariant
//! suite.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dipolariton::config::{default_config, load_config, Config};
use dipolariton::model::{build_effective, build_hermitian};
use dipolariton::output::{emit_csv, fmt_value};
use dipolariton::polariton::{BranchLabel, Observables, PolaritonBranch};
use dipolariton::spectral::eig3;
use dipolariton::sweep::{find_resonance, run_sweep, Labeling};
use dipolariton::units::Quantity;
use dipolariton::validate::run_all;
use dipolariton::Error;

#[derive(Parser)]
#[command(
    name = "dipolariton",
    version,
    about = "Polariton spectra of a biased double quantum dot in a microcavity",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Configuration file; omitted means the built-in defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ModeArg {
    /// Closed-system matrix: real spectrum, no decay (the default).
    #[arg(long, conflicts_with = "effective")]
    hermitian: bool,
    /// Open-system effective matrix: populates decay rates and lifetimes.
    #[arg(long)]
    effective: bool,
}

impl ModeArg {
    fn effective(&self) -> bool {
        self.effective
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a bias-field sweep and write the observables to CSV.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        mode: ModeArg,
        /// Output file (default: the config `out` key, else sweep.csv).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Branch labelling policy to emit.
        #[arg(long, value_name = "energy|tracked|both")]
        labeling: Option<String>,
    },
    /// Print the tunneling resonance field (closed form and numeric).
    Resonance {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Full diagnostic dump of one field value.
    Eigen {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        mode: ModeArg,
        /// Bias field in kV/cm.
        #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
        f: f64,
        /// Rung index (default: the config value).
        #[arg(long, value_name = "N")]
        n: Option<u32>,
    },
    /// Run the built-in invariant suite against the configuration.
    Validate {
        #[command(flatten)]
        config: ConfigArg,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap's own exit code conventions differ; usage problems are 1
            // here, but --help/--version remain success
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NumericalFailure { .. }
        | Error::EigensolverAt { .. }
        | Error::ModelViolation(_)
        | Error::NonFiniteInput => 2,
        _ => 1,
    }
}

fn read_config(arg: &ConfigArg) -> Result<Config, Error> {
    match &arg.config {
        Some(path) => load_config(path),
        None => Ok(default_config()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Sweep {
            config,
            mode,
            out,
            labeling,
        } => {
            let mut cfg = read_config(&config)?;
            if let Some(policy) = labeling {
                cfg.sweep.labeling = match policy.as_str() {
                    "energy" => Labeling::EnergyOrdered,
                    "tracked" => Labeling::Tracked,
                    "both" => Labeling::Both,
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "labeling must be energy, tracked or both, got `{other}`"
                        )))
                    }
                };
            }
            let effective = mode.effective();
            let rows = run_sweep(&cfg.params, &cfg.sweep, effective, &cfg.thresholds)?;
            let path = out
                .or_else(|| cfg.out.clone())
                .unwrap_or_else(|| PathBuf::from("sweep.csv"));
            emit_csv(&rows, &cfg, effective, &path)?;
            println!(
                "wrote {} rows ({} mode, {} labeling) to {}",
                rows.len(),
                if effective { "effective" } else { "hermitian" },
                cfg.sweep.labeling.as_str(),
                path.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Resonance { config } => {
            let cfg = read_config(&config)?;
            let r = find_resonance(&cfg.params, cfg.sweep.n)?;
            println!("closed form: F* = {} kV/cm", fmt_value(r.closed_form_kvcm));
            println!(
                "numeric:     F* = {} kV/cm (min gap {} meV{})",
                fmt_value(r.numeric_kvcm),
                fmt_value(r.numeric_gap_mev),
                if r.at_boundary {
                    ", warning: minimum on window boundary"
                } else {
                    ""
                }
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Eigen {
            config,
            mode,
            f,
            n,
        } => {
            let cfg = read_config(&config)?;
            let n = n.unwrap_or(cfg.sweep.n);
            let effective = mode.effective();
            let fq = Quantity::field_kvcm(f);
            let h = if effective {
                build_effective(&cfg.params, n, fq)?
            } else {
                build_hermitian(&cfg.params, n, fq)?
            };
            println!(
                "F = {} kV/cm, rung n = {n}, {} matrix",
                fmt_value(f),
                if effective { "effective" } else { "hermitian" }
            );
            println!("matrix (meV), basis IX / DX / photon:");
            for row in &h.entries().e {
                println!(
                    "  [{}]",
                    row.iter()
                        .map(|z| format!("{} {:+}i", fmt_value(z.re), z.im))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            let pairs = eig3(&h)?;
            for (label, pair) in [BranchLabel::Lp, BranchLabel::Mp, BranchLabel::Up]
                .into_iter()
                .zip(pairs)
            {
                let branch = PolaritonBranch::from_eigenpair(label, &pair);
                let obs = Observables::compute(&branch, cfg.params.d(), &cfg.thresholds)?;
                println!("{}:", label.as_str());
                println!(
                    "  E = {} meV, Im E = {} meV",
                    fmt_value(pair.value.re),
                    fmt_value(pair.value.im)
                );
                println!(
                    "  fractions (IX, DX, photon) = ({}, {}, {})",
                    fmt_value(obs.fractions[0]),
                    fmt_value(obs.fractions[1]),
                    fmt_value(obs.fractions[2])
                );
                println!(
                    "  bpd = {}, edm = {} nm, gamma = {} GHz, tau = {} ps, regime = {}",
                    fmt_value(obs.bpd),
                    fmt_value(obs.edm_nm),
                    fmt_value(obs.gamma_ghz),
                    fmt_value(obs.tau_ps),
                    obs.regime.as_str()
                );
                println!(
                    "  residual = {} (bound {}){}",
                    fmt_value(pair.residual),
                    fmt_value(dipolariton::spectral::RESIDUAL_TOL * pair.hnorm),
                    if pair.near_defective {
                        ", near-defective"
                    } else {
                        ""
                    }
                );
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Validate { config } => {
            let cfg = read_config(&config)?;
            let results = run_all(&cfg);
            let mut failures = 0;
            for check in &results {
                println!(
                    "{} {:<24} {}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                );
                if !check.passed {
                    failures += 1;
                }
            }
            if failures == 0 {
                println!("all {} checks passed", results.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("{failures} of {} checks failed", results.len());
                Ok(ExitCode::from(2))
            }
        }
    }
}
