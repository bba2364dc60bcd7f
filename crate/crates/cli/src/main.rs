//! `triqr`: sampling, shifted-QR iteration traces, eigensolving, rate
//! reports, phase portraits, and the verification suites, from the command
//! line.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or validation error,
//! 3 non-convergence.

mod config;
mod portrait;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::{OutputFormat, RunConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use triqr::dynamics::{iterate, rate_exponents, IterateOptions, StopReason};
use triqr::shift::ShiftStrategy;
use triqr::spectrum::sturm_eigenvalues;
use triqr::tridiag::SymTridiagonal;
use triqr::verify::{run_all, VerifyConfig};
use triqr::{deflate_and_recurse, sample_isospectral, Error as CoreError};

#[derive(Parser)]
#[command(name = "triqr", version, about = "Shifted QR iteration on symmetric tridiagonal matrices")]
struct Cli {
    /// key=value file overriding built-in defaults (flags override both)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Comma-separated strictly increasing eigenvalues
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    spectrum: Option<Vec<f64>>,

    /// Master seed for all randomness
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// rayleigh | wilkinson | mixed:<eps> | exact:<i>
    #[arg(long, global = true)]
    strategy: Option<String>,

    #[arg(long = "max-steps", global = true)]
    max_steps: Option<usize>,

    /// Relative deflation threshold (scaled by the input norm)
    #[arg(long = "deflate-tol", global = true)]
    deflate_tol: Option<f64>,

    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// json | csv
    #[arg(long, global = true)]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a matrix with the given spectrum and write it in text form
    Sample,
    /// Run the strategy iteration on a matrix file and write the trace
    Iterate {
        /// Matrix file in the text format produced by `sample`
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Compute all eigenvalues by deflate-and-recurse
    Eig {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Convergence-exponent report for one iteration trace
    Rates {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Moment-map trajectory data for 3×3 spectra (CSV)
    Portrait {
        /// Number of interior trajectory starts
        #[arg(long, default_value_t = 12)]
        grid: usize,
        /// Steps per trajectory
        #[arg(long, default_value_t = 40)]
        steps: usize,
    },
    /// Run the named property suites and write a JSON report
    Verify {
        /// Only run checks whose name contains this substring
        #[arg(long)]
        only: Option<String>,
        /// Sample count for the statistical suites
        #[arg(long)]
        samples: Option<usize>,
        /// Run count for the trace suites
        #[arg(long)]
        runs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    if let Some(s) = cli.spectrum {
        cfg.spectrum = Some(s);
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(s) = cli.strategy {
        cfg.strategy = s;
    }
    if let Some(s) = cli.max_steps {
        cfg.max_steps = s;
    }
    if let Some(s) = cli.deflate_tol {
        cfg.deflate_tol_rel = s;
    }
    if let Some(s) = cli.out {
        cfg.out = Some(s);
    }
    if let Some(s) = cli.format {
        cfg.format = s.parse()?;
    }

    match cli.command {
        Command::Sample => cmd_sample(&cfg),
        Command::Iterate { matrix } => cmd_iterate(&cfg, &matrix),
        Command::Eig { matrix } => cmd_eig(&cfg, &matrix),
        Command::Rates { matrix } => cmd_rates(&cfg, &matrix),
        Command::Portrait { grid, steps } => cmd_portrait(&cfg, grid, steps),
        Command::Verify { only, samples, runs } => cmd_verify(&cfg, only.as_deref(), samples, runs),
    }
}

fn write_output(cfg: &RunConfig, content: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_matrix(path: &Path) -> Result<SymTridiagonal> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading matrix file {}", path.display()))?;
    Ok(SymTridiagonal::from_text(&text)?)
}

/// Strategy from the config string; the spectrum (needed by `exact:<i>`)
/// comes from the matrix itself via the Sturm oracle when not configured.
fn resolve_strategy(cfg: &RunConfig, t: Option<&SymTridiagonal>) -> Result<ShiftStrategy> {
    let spec = match (&cfg.spectrum, t) {
        (Some(_), _) => Some(cfg.spectrum()?),
        (None, Some(t)) => Some(sturm_eigenvalues(t, 1e-13 * t.norm().max(1.0))?),
        (None, None) => None,
    };
    // Resolve the gap-scaled default for `mixed` written without an
    // argument.
    if cfg.strategy.trim() == "mixed" {
        let spec = spec
            .as_ref()
            .context("`mixed` without an explicit threshold needs a spectrum")?;
        let eps = cfg.epsilons(spec)?.mixed_eps;
        return Ok(ShiftStrategy::mixed(eps)?);
    }
    Ok(ShiftStrategy::parse(&cfg.strategy, spec.as_ref())?)
}

fn cmd_sample(cfg: &RunConfig) -> Result<ExitCode> {
    let spec = cfg.spectrum()?;
    let t = sample_isospectral(&spec, cfg.seed, None)?;
    write_output(cfg, &t.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_iterate(cfg: &RunConfig, matrix: &Path) -> Result<ExitCode> {
    let t0 = read_matrix(matrix)?;
    let strategy = resolve_strategy(cfg, Some(&t0))?;
    let opts = IterateOptions {
        max_steps: cfg.max_steps,
        deflate_tol: cfg.deflate_tol_rel * t0.norm(),
        seed: cfg.seed,
        height: None,
    };
    let trace = iterate(&t0, &strategy, &opts)?;
    let rendered = match cfg.format {
        OutputFormat::Json => serde_json::to_string_pretty(&trace)? + "\n",
        OutputFormat::Csv => trace.to_csv(),
    };
    write_output(cfg, &rendered)?;
    Ok(match trace.stop_reason {
        StopReason::Deflated => ExitCode::SUCCESS,
        _ => ExitCode::from(3),
    })
}

fn cmd_eig(cfg: &RunConfig, matrix: &Path) -> Result<ExitCode> {
    let t0 = read_matrix(matrix)?;
    let strategy = resolve_strategy(cfg, Some(&t0))?;
    let tol = cfg.deflate_tol_rel * t0.norm();
    match deflate_and_recurse(&t0, &strategy, tol, cfg.max_steps.max(500)) {
        Ok(vals) => {
            let lines: String = vals.iter().map(|v| format!("{v:.16e}\n")).collect();
            write_output(cfg, &lines)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(CoreError::MaxStepsExceeded { partial, expected }) => {
            eprintln!(
                "non-convergence: {} of {expected} eigenvalues found within the step budget",
                partial.len()
            );
            for v in partial {
                eprintln!("  {v:.16e}");
            }
            Ok(ExitCode::from(3))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_rates(cfg: &RunConfig, matrix: &Path) -> Result<ExitCode> {
    let t0 = read_matrix(matrix)?;
    let strategy = resolve_strategy(cfg, Some(&t0))?;
    let spec = sturm_eigenvalues(&t0, 1e-13 * t0.norm().max(1.0))?;
    let opts = IterateOptions {
        max_steps: cfg.max_steps,
        deflate_tol: 0.0, // run into the tail; the estimator drops underflow
        seed: cfg.seed,
        height: None,
    };
    let trace = iterate(&t0, &strategy, &opts)?;
    let report = rate_exponents(&trace, spec.gap())?;
    let rendered = match cfg.format {
        OutputFormat::Json => {
            let full = serde_json::json!({
                "spectrum": spec.lambdas(),
                "strategy": trace.strategy,
                "seed": trace.seed,
                "exponents": report.exponents,
                "summary": report.summary,
                "class": report.class,
            });
            serde_json::to_string_pretty(&full)? + "\n"
        }
        OutputFormat::Csv => {
            let mut out = String::from("k,exponent\n");
            for (k, p) in &report.exponents {
                out.push_str(&format!("{k},{p:.6}\n"));
            }
            out
        }
    };
    write_output(cfg, &rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_portrait(cfg: &RunConfig, grid: usize, steps: usize) -> Result<ExitCode> {
    let spec = cfg.spectrum()?;
    let strategy = resolve_strategy(cfg, None)?;
    let params = portrait::PortraitParams { grid, steps, seed: cfg.seed };
    let csv = portrait::portrait_csv(&spec, &strategy, &params)?;
    write_output(cfg, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    cfg: &RunConfig,
    only: Option<&str>,
    samples: Option<usize>,
    runs: Option<usize>,
) -> Result<ExitCode> {
    let vc = VerifyConfig {
        seed: cfg.seed,
        samples: samples.unwrap_or(1000),
        runs: runs.unwrap_or(100),
    };
    let reports = run_all(&vc, only)?;
    let all_passed = reports.iter().all(|r| r.passed);
    let doc = serde_json::json!({
        "timestamp": unix_timestamp(),
        "seed": vc.seed,
        "samples": vc.samples,
        "runs": vc.runs,
        "passed": all_passed,
        "checks": reports,
    });
    write_output(cfg, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    for r in &reports {
        eprintln!("[{}] {} — {}", if r.passed { "ok" } else { "FAIL" }, r.name, r.details);
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
