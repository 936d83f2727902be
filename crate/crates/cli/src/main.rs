use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use frictionlab::oracles::classify_sphere_incline;
use frictionlab::scenario::{
    compare_roll_models, critical_mass_curve, fmt_f64, phase_map, simulate, write_critical_csv, write_phase_csv,
    ScenarioConfig, ScenarioKind,
};
use frictionlab::{Error, Result};
use log::{info, warn};

/// Contact-friction scenarios with slide, roll and spin history tracking.
#[derive(Debug, Parser)]
#[command(name = "frictionlab", version)]
struct Cli {
    /// Scenario file (TOML). Keys not given fall back to the scenario preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Preset to use when no config file is given.
    #[arg(long, global = true)]
    scenario: Option<ScenarioKind>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps; all cores when omitted.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Accepted for scripting symmetry. Every run is deterministic.
    #[arg(long, global = true)]
    seedless: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scenario and write its time series as CSV.
    Run,
    /// Sweep a parameter grid: phase map for sphere_incline, critical top
    /// mass for stacking.
    Sweep,
    /// Run a disk or sphere under the history and the legacy roll model.
    CompareRollModels,
    /// Closed-form steady state of a sphere on an incline.
    Oracle {
        /// Incline angle in degrees.
        #[arg(long)]
        alpha_deg: Option<f64>,
        #[arg(long)]
        eta_r: Option<f64>,
        #[arg(long)]
        mu_s: Option<f64>,
        #[arg(long)]
        mu_k: Option<f64>,
        /// Classify the whole sweep grid and write CSV.
        #[arg(long)]
        grid: bool,
    },
}

fn load(cli: &Cli, default: ScenarioKind) -> Result<ScenarioConfig> {
    match (&cli.config, cli.scenario) {
        (Some(_), Some(_)) => Err(Error::Config("give either --config or --scenario, not both".into())),
        (Some(path), None) => ScenarioConfig::load(path),
        (None, kind) => {
            let cfg = ScenarioConfig::preset(kind.unwrap_or(default));
            cfg.validate()?;
            Ok(cfg)
        }
    }
}

fn require(cli: &Cli) -> Result<ScenarioConfig> {
    if cli.config.is_none() && cli.scenario.is_none() {
        return Err(Error::Config(
            "no scenario: pass --config <file> or --scenario <name>".into(),
        ));
    }
    load(cli, ScenarioKind::SphereIncline)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(cli: &Cli) -> Result<()> {
    if cli.workers == Some(0) {
        return Err(Error::Config("--workers must be at least 1".into()));
    }
    let out = cli.out.as_deref();
    let clock = Instant::now();
    match &cli.command {
        Command::Run => {
            let cfg = require(cli)?;
            info!("running {} for {} steps", cfg.scenario, cfg.steps());
            let tr = simulate::<f64>(&cfg)?;
            tr.write_csv(output(out)?)?;
            info!("{} samples in {:.2} s", tr.samples.len(), clock.elapsed().as_secs_f64());
        }
        Command::Sweep => {
            let cfg = require(cli)?;
            match cfg.scenario {
                ScenarioKind::SphereIncline => {
                    let cells = phase_map(&cfg, cli.workers)?;
                    let judged: Vec<_> = cells.iter().filter(|c| !c.boundary).collect();
                    let agree = judged.iter().filter(|c| c.agrees()).count();
                    info!("{agree}/{} non-boundary cells agree with the oracle", judged.len());
                    write_phase_csv(&cells, output(out)?)?;
                }
                ScenarioKind::Stacking => {
                    let rows = critical_mass_curve(&cfg, cli.workers)?;
                    if rows.iter().any(|(_, c)| c.is_none()) {
                        warn!("some eta_r values have no transition inside sweep.mass_range");
                    }
                    write_critical_csv(&rows, output(out)?)?;
                }
                other => {
                    return Err(Error::Config(format!(
                        "sweep supports sphere_incline and stacking, not {other}"
                    )));
                }
            }
            info!("sweep finished in {:.2} s", clock.elapsed().as_secs_f64());
        }
        Command::CompareRollModels => {
            let cfg = load(cli, ScenarioKind::DiskRolling)?;
            compare_roll_models(&cfg)?.write_csv(output(out)?)?;
        }
        Command::Oracle {
            alpha_deg,
            eta_r,
            mu_s,
            mu_k,
            grid,
        } => {
            let cfg = load(cli, ScenarioKind::SphereIncline)?;
            let mu_s = mu_s.unwrap_or(cfg.friction.mu_s);
            let mu_k = mu_k.unwrap_or(cfg.friction.mu_k);
            let mut w = output(out)?;
            if *grid {
                writeln!(w, "alpha_deg,eta_r,oracle")?;
                for a in cfg.sweep.alphas_deg() {
                    for e in cfg.sweep.etas() {
                        let s = classify_sphere_incline(a.to_radians(), mu_s, mu_k, e)?;
                        writeln!(w, "{},{},{s}", fmt_f64(a), fmt_f64(e))?;
                    }
                }
            } else {
                let alpha = match alpha_deg {
                    Some(a) => a.to_radians(),
                    None => cfg.incline.radians()?,
                };
                let eta = eta_r.unwrap_or(cfg.friction.eta_r);
                let s = classify_sphere_incline(alpha, mu_s, mu_k, eta)?;
                writeln!(
                    w,
                    "alpha_deg={} eta_r={eta} mu_s={mu_s} mu_k={mu_k} state={s}",
                    alpha.to_degrees()
                )?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// A reader that closed the pipe early is not a failure.
fn broken_pipe(e: &Error) -> bool {
    matches!(e, Error::Io(io) if io.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FRICTIONLAB_LOG", "warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
