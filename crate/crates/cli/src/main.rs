use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gi_core::config::{OutputFormat, RunConfig};
use gi_core::manifest::{InputDigest, Manifest};
use gi_core::panel::{parse_panel_csv, IndicatorRegistry, Panel};
use gi_core::pipeline::{run_pipeline, scenario_tables, RunOutput};
use gi_core::report::write_tables;
use gi_core::scenario::{build_scenario_paths, GiMode, ScenarioPaths, ScenarioSettings};
use gi_core::Error;

#[derive(Parser)]
#[command(name = "gi", version, about = "Composite resilience index: pillars, GI, decomposition and scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pillar, GI and component tables plus figure series
    Compute(Common),
    /// Log-change contributions of each pillar to GI
    Decompose(Common),
    /// Scenario pathways from configured endpoints
    Scenario(Common),
    /// Regional means over configured member lists
    Region(Common),
    /// Run manifest with input digest and config echo
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// Long-format panel CSV
    #[arg(long)]
    input: Option<PathBuf>,
    /// TOML run configuration; defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// csv, json or both
    #[arg(long)]
    format: Option<OutputFormat>,
    #[arg(long)]
    cutoff: Option<i32>,
    /// recompute_gi or table_replication
    #[arg(long)]
    mode: Option<GiMode>,
    /// Full precision in summary CSV tables
    #[arg(long)]
    raw_precision: bool,
}

struct Input {
    path: PathBuf,
    bytes: Vec<u8>,
    panel: Panel,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(f) = self.format {
            config.format = f;
        }
        if let Some(c) = self.cutoff {
            config.cutoff = c;
        }
        if let Some(m) = self.mode {
            config.scenario.mode = m;
        }
        config.raw_precision |= self.raw_precision;
        config.validate()?;
        Ok(config)
    }

    fn input(&self) -> Result<Option<Input>, Error> {
        let Some(path) = &self.input else { return Ok(None) };
        let bytes = std::fs::read(path)
            .map_err(|e| Error::Lookup(format!("cannot read input {}: {e}", path.display())))?;
        let panel = parse_panel_csv(bytes.as_slice(), &IndicatorRegistry::default())?;
        Ok(Some(Input { path: path.clone(), bytes, panel }))
    }

    fn require_input(&self) -> Result<Input, Error> {
        self.input()?.ok_or_else(|| Error::Lookup("--input is required for this command".into()))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::Invariant(_) | Error::Json(_) | Error::SingularDesign { .. } | Error::SampleSize { .. } => 3,
        Error::Parse { .. } | Error::Conflict { .. } | Error::Lookup(_) | Error::Domain(_) | Error::Io(_) | Error::Csv(_) => 1,
    }
}

fn compute(args: &Common) -> Result<(), Error> {
    let config = args.config()?;
    let input = args.require_input()?;
    let run = run_pipeline(&input.panel, &config)?;
    write(&run.compute_tables(&config), &args.out, &config)
}

fn decompose(args: &Common) -> Result<(), Error> {
    let config = args.config()?;
    let input = args.require_input()?;
    let run = run_pipeline(&input.panel, &config)?;
    write(&[run.decompose_table()], &args.out, &config)
}

fn scenario_paths(config: &RunConfig) -> Result<Option<ScenarioPaths>, Error> {
    let endpoints = config.scenario_endpoints()?;
    if endpoints.is_empty() {
        return Ok(None);
    }
    let settings = ScenarioSettings {
        horizon: config.scenario.horizon,
        specs: &config.scenario.specs,
        mode: config.scenario.mode,
        weights: config.weights.gi,
        epsilon_floor: config.weights.epsilon_floor,
    };
    build_scenario_paths(&endpoints, &settings).map(Some)
}

fn scenario(args: &Common) -> Result<(), Error> {
    let config = args.config()?;
    let paths = scenario_paths(&config)?
        .ok_or_else(|| Error::Config("no scenario endpoints (set scenario.endpoints_file or scenario.endpoints)".into()))?;
    for s in &paths.skipped {
        eprintln!("skipped {}: {}", s.country, s.reason);
    }
    write(&scenario_tables(&paths), &args.out, &config)
}

fn region(args: &Common) -> Result<(), Error> {
    let config = args.config()?;
    if config.regions.is_empty() {
        return Err(Error::Config("no regions configured".into()));
    }
    let input = args.require_input()?;
    let run = run_pipeline(&input.panel, &config)?;
    write(&[run.region_table(&config.regions)], &args.out, &config)
}

fn report(args: &Common) -> Result<(), Error> {
    let config = args.config()?;
    let input = args.input()?;
    let digest = input.as_ref().map(|i| InputDigest::of(&i.path.display().to_string(), &i.bytes));
    let mut manifest = Manifest::new(&config, digest);
    if let Some(input) = &input {
        let run: RunOutput = run_pipeline(&input.panel, &config)?;
        manifest = manifest.with_run(&run);
    }
    if let Some(paths) = scenario_paths(&config)? {
        manifest = manifest.with_scenario_skips(&paths.skipped);
    }
    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join("manifest.json");
    std::fs::write(&path, manifest.to_json()?)?;
    announce(&[path]);
    Ok(())
}

fn write(tables: &[gi_core::report::Table], out: &Path, config: &RunConfig) -> Result<(), Error> {
    let written = write_tables(tables, out, config.format, config.raw_precision)?;
    announce(&written);
    Ok(())
}

fn announce(paths: &[PathBuf]) {
    let mut out = std::io::stdout().lock();
    for p in paths {
        if writeln!(out, "{}", p.display()).is_err() {
            break;
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Decompose(a) => decompose(a),
        Command::Scenario(a) => scenario(a),
        Command::Region(a) => region(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
