//! `boostlab`: rapidity sweeps of boosted two-particle spin states.

mod config;
mod error;
mod output;

use boostlab::scenarios::{preset_names, rotation_type, twr_sample_momenta, twr_samples, twr_surface};
use boostlab::verification::{self, Level, VerifyOptions};
use boostlab::{orbit, preset, BellState, ScenarioError, Schedule};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::Overrides;
use error::CliError;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "boostlab", version, about = "Spin entanglement of boosted two-particle wavepackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a scenario over rapidity and write orbit.csv, manifest.json and plot scripts.
    Orbit(OrbitArgs),
    /// Tabulate Thomas-Wigner rotation angles.
    Twr(TwrArgs),
    /// Run the acceptance criteria and report measured against expected values.
    Verify(VerifyArgs),
    /// List the built-in scenarios.
    Presets,
}

#[derive(Args)]
struct OrbitArgs {
    /// Preset name or path to a key = value config file.
    scenario: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Momentum width in units of the mass.
    #[arg(long)]
    sigma: Option<f64>,
    /// Quadrature nodes per momentum axis.
    #[arg(long)]
    nodes: Option<usize>,
    /// Grid half-width in units of sigma.
    #[arg(long)]
    truncation: Option<f64>,
    #[arg(long)]
    xi_max: Option<f64>,
    #[arg(long)]
    xi_samples: Option<usize>,
    /// Initial spin state: phi+, phi-, psi+ or psi-.
    #[arg(long)]
    spin: Option<BellState>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TwrMode {
    /// Angle between two equal-rapidity boosts over a rapidity by angle grid.
    Surface,
    /// Spin rotation of the fixed sample momenta under a z boost.
    Samples,
}

#[derive(Args)]
struct TwrArgs {
    #[arg(long, value_enum, default_value_t = TwrMode::Surface)]
    mode: TwrMode,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    xi_min: f64,
    #[arg(long, default_value_t = 4.0)]
    xi_max: f64,
    #[arg(long, default_value_t = 81)]
    xi_count: usize,
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = PI)]
    theta_max: f64,
    #[arg(long, default_value_t = 61)]
    theta_count: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "fast")]
    level: Level,
    /// Quadrature nodes per axis for the scenario runs.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    truncation: Option<f64>,
    /// Run only these criteria instead of a whole level.
    #[arg(long = "only", value_delimiter = ',')]
    only: Vec<u32>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BOOSTLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("BOOSTLAB_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size the worker pool: {e}")))
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn cmd_orbit(args: &OrbitArgs) -> Result<(), CliError> {
    let overrides = Overrides {
        sigma: args.sigma,
        nodes: args.nodes,
        truncation: args.truncation,
        xi_max: args.xi_max,
        xi_samples: args.xi_samples,
        spin: args.spin,
    };
    let cfg = config::resolve(&args.scenario, &overrides)?;
    prepare_dir(&args.out)?;
    let start = Instant::now();
    let points = orbit(&cfg)?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut manifest = output::RunManifest::new("orbit", &cfg.name, config::canonical_text(&cfg));
    manifest.grid = Some(cfg.grid);
    manifest.schedule = cfg.schedule;
    manifest.wall_time_seconds = elapsed;

    output::write_orbit_csv(&args.out.join("orbit.csv"), &points)?;
    output::write_text(&args.out.join("concurrence.plt"), &output::concurrence_script(&cfg.name))?;
    manifest.outputs.extend(["orbit.csv".to_string(), "concurrence.plt".to_string()]);
    let off_diagonal = points.iter().filter(|p| !p.bell_diagonal).count();
    if off_diagonal == 0 {
        output::write_text(&args.out.join("orbit.plt"), &output::orbit_script(&cfg.name))?;
        manifest.outputs.push("orbit.plt".into());
    } else {
        let note = format!(
            "orbit.plt not written: {off_diagonal} of {} states are not Bell-diagonal, so t alone does not describe them",
            points.len()
        );
        eprintln!("note: {note}");
        manifest.notes.push(note);
    }
    if let Some(limit) = cfg.validated_xi_max {
        if points.iter().any(|p| p.beyond_validation) {
            manifest.notes.push(format!("points beyond xi = {limit} are outside the validated range"));
        }
    }
    manifest.notes.push(format!("rotation type {}", rotation_type(&cfg)));
    manifest.outputs.push("manifest.json".into());
    manifest.write(&args.out)?;

    let peak = points.iter().map(|p| p.concurrence).fold(0.0, f64::max);
    println!(
        "{}: {} points, xi in [{}, {}], max concurrence {peak:.4}, {elapsed:.2} s -> {}",
        cfg.name,
        points.len(),
        cfg.schedule.min,
        cfg.schedule.max,
        args.out.display()
    );
    Ok(())
}

fn cmd_twr(args: &TwrArgs) -> Result<(), CliError> {
    let xi = Schedule::new(args.xi_min, args.xi_max, args.xi_count);
    let start = Instant::now();
    let (file, config, theta_schedule) = match args.mode {
        TwrMode::Surface => {
            let theta = Schedule::new(args.theta_min, args.theta_max, args.theta_count);
            let table = twr_surface(&xi, &theta)?;
            prepare_dir(&args.out)?;
            output::write_twr_surface_csv(&args.out.join("twr_surface.csv"), &table)?;
            let config = format!(
                "mode = surface\nxi = {} {} {}\ntheta = {} {} {}\n",
                xi.min, xi.max, xi.count, theta.min, theta.max, theta.count
            );
            ("twr_surface.csv", config, Some(theta))
        }
        TwrMode::Samples => {
            if xi.min < 0.0 {
                return Err(ScenarioError::InvalidConfig(format!("rapidities must be non-negative, got {}", xi.min)).into());
            }
            let momenta = twr_sample_momenta();
            let curves = twr_samples(&momenta, &xi)?;
            prepare_dir(&args.out)?;
            output::write_twr_samples_csv(&args.out.join("twr_samples.csv"), &curves)?;
            let labels: Vec<_> = momenta.iter().map(|(l, _)| l.as_str()).collect();
            let config = format!(
                "mode = samples\nxi = {} {} {}\nmomenta = {}\n",
                xi.min,
                xi.max,
                xi.count,
                labels.join(" ")
            );
            ("twr_samples.csv", config, None)
        }
    };
    let mut manifest = output::RunManifest::new("twr", file.trim_end_matches(".csv"), config);
    manifest.schedule = xi;
    manifest.theta_schedule = theta_schedule;
    manifest.wall_time_seconds = start.elapsed().as_secs_f64();
    manifest.outputs = vec![file.to_string(), "manifest.json".to_string()];
    manifest.write(&args.out)?;
    println!("wrote {}", args.out.join(file).display());
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let mut opts = VerifyOptions::default();
    if let Some(n) = args.nodes {
        opts.nodes = n;
    }
    if let Some(t) = args.truncation {
        opts.truncation = t;
    }
    let ids: Vec<u32> = if args.only.is_empty() {
        match args.level {
            Level::Fast => verification::FAST_CRITERIA.to_vec(),
            Level::Full => verification::ALL_CRITERIA.to_vec(),
        }
    } else {
        args.only.clone()
    };
    if let Some(bad) = ids.iter().find(|id| !verification::ALL_CRITERIA.contains(id)) {
        return Err(CliError::Config(format!("no criterion {bad}; criteria are 1 to 10")));
    }
    let mut failed = 0;
    for id in &ids {
        let start = Instant::now();
        let report = verification::criterion(*id, &opts);
        print!("{report}");
        println!("    ({:.1} s)", start.elapsed().as_secs_f64());
        if !report.passed() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", ids.len() - failed, ids.len());
    Ok(failed == 0)
}

fn cmd_presets() {
    for (name, summary) in preset_names() {
        let sigmas = preset(name)
            .map(|c| c.sigmas.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "))
            .unwrap_or_default();
        println!("{name:<16} {summary} (sigma/m: {sigmas})");
    }
}

fn report(e: &CliError) {
    eprintln!("error: {e}");
    if matches!(e, CliError::Scenario(ScenarioError::UnknownPreset { .. })) {
        eprintln!("presets:");
        for (name, summary) in preset_names() {
            eprintln!("  {name:<16} {summary}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Orbit(a) => cmd_orbit(a).map(|()| true),
        Command::Twr(a) => cmd_twr(a).map(|()| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Presets => {
            cmd_presets();
            Ok(true)
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code())
        }
    }
}
