use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use braggsim::output::{self, Bundle};
use braggsim::{config, scenario, CliError, Format, ScenarioConfig};
use braggsim_core::Execution;
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "braggsim", version, about = "Bragg waveguide filter and pair-source simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario configuration (JSON).
    #[arg(long, global = true, default_value = "configs/paper.json")]
    config: PathBuf,
    /// Output directory; defaults to `<output.dir>/<subcommand>`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Overrides the point count of the subcommand's main sweep or grid.
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Replace existing output files.
    #[arg(long, global = true)]
    force: bool,
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy, PartialEq)]
enum Command {
    /// Linear transmission spectrum and stopband metrics.
    Spectrum,
    /// Period count for a target rejection.
    Design {
        #[arg(long)]
        rejection_db: Option<f64>,
    },
    /// Stimulated idler against pump wavelength.
    StimSweep,
    /// Spontaneous rate inferred from the stimulated idler.
    SpontRate,
    /// Pair rate against index contrast at fixed rejection.
    ContrastSweep,
    /// Joint spectral densities and Schmidt analysis.
    Jsd,
    /// Every scenario above, one subdirectory each.
    Report,
    /// Print the JSON schema of the configuration file.
    Schema,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Design { .. } => "design",
            Command::StimSweep => "stim-sweep",
            Command::SpontRate => "spont-rate",
            Command::ContrastSweep => "contrast-sweep",
            Command::Jsd => "jsd",
            Command::Report => "report",
            Command::Schema => "schema",
        }
    }
}

fn execution() -> Result<(Execution, usize), CliError> {
    let threads = match std::env::var("BRAGGSIM_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("BRAGGSIM_THREADS must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    if threads > 0 {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let n = rayon::current_num_threads();
    let exec = if n == 1 { Execution::Sequential } else { Execution::Parallel };
    Ok((exec, n))
}

fn run_one(cmd: Command, cfg: &ScenarioConfig, format: Format, points: Option<usize>, exec: Execution) -> Result<Bundle, CliError> {
    Ok(match cmd {
        Command::Spectrum => output::spectrum(&scenario::spectrum(cfg, points, exec)?, format),
        Command::Design { rejection_db } => output::design(&scenario::design(cfg, rejection_db)?),
        Command::StimSweep => output::stim_sweep(&scenario::stim_sweep(cfg, points, exec)?, format),
        Command::SpontRate => output::spont_rate(&scenario::spont_rate(cfg, exec)?),
        Command::ContrastSweep => output::contrast(&scenario::contrast(cfg, points, exec)?, format),
        Command::Jsd => output::jsd(&scenario::jsd(cfg, points, exec)?, format),
        Command::Report => {
            let mut all = Bundle::default();
            for sub in [
                Command::Spectrum,
                Command::Design { rejection_db: None },
                Command::StimSweep,
                Command::SpontRate,
                Command::ContrastSweep,
                Command::Jsd,
            ] {
                // --points is ambiguous across scenarios, so the report uses the config
                all.extend(run_one(sub, cfg, format, None, exec)?.nest(sub.name()));
            }
            all
        }
        Command::Schema => unreachable!("handled before loading a config"),
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if cli.command == Command::Schema {
        print!("{}", config::schema());
        return Ok(());
    }
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let cfg = config::load(&cli.config)?;
    let (exec, threads) = execution()?;
    let format = cli.format.unwrap_or(cfg.output.format);
    let name = cli.command.name();
    let dir = cli.out.clone().unwrap_or_else(|| Path::new(&cfg.output.dir).join(name));

    let mut bundle = run_one(cli.command, &cfg, format, cli.points, exec)?;
    let sidecar = json!({
        "tool": "braggsim",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": name,
        "config": cli.config.display().to_string(),
        "format": format,
        "points": cli.points,
        "threads": threads,
        "started_unix_s": started,
        "elapsed_s": clock.elapsed().as_secs_f64(),
        "files": bundle.files.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
    });
    bundle.files.push(("run.json".into(), serde_json::to_string_pretty(&sidecar).expect("sidecar serializes") + "\n"));
    let written = output::write(&dir, &bundle, cli.force)?;
    if !cli.quiet {
        for line in &bundle.lines {
            println!("{line}");
        }
        println!("wrote {} files to {}", written.len(), dir.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("braggsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
