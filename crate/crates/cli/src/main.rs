use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use schrodobs_cli::output::to_json_pretty;
use schrodobs_cli::{presets, run_experiment, CliError, CommandName, ExperimentConfig, RunOptions};

#[derive(Parser)]
#[command(name = "schrodobs", version, about = "Batch experiments on Schrödinger observability and control")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON experiment config.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named built-in config (see `schrodobs presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory for the bundle.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for parallel scans.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed for random states and random observation sets.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    ModelInfo(RunArgs),
    ObsConstant(RunArgs),
    ObsScan(RunArgs),
    FilteredScan(RunArgs),
    WeakCert(RunArgs),
    AlphaScan(RunArgs),
    Counterexample(RunArgs),
    Cantor(RunArgs),
    Density(RunArgs),
    Egorov(RunArgs),
    Hum(RunArgs),
    Verify(RunArgs),
    /// List presets, or write each one as `<name>.json` into `--out`.
    Presets {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn split(command: Command) -> Result<(CommandName, RunArgs), Option<PathBuf>> {
    use Command as C;
    Ok(match command {
        C::ModelInfo(a) => (CommandName::ModelInfo, a),
        C::ObsConstant(a) => (CommandName::ObsConstant, a),
        C::ObsScan(a) => (CommandName::ObsScan, a),
        C::FilteredScan(a) => (CommandName::FilteredScan, a),
        C::WeakCert(a) => (CommandName::WeakCert, a),
        C::AlphaScan(a) => (CommandName::AlphaScan, a),
        C::Counterexample(a) => (CommandName::Counterexample, a),
        C::Cantor(a) => (CommandName::Cantor, a),
        C::Density(a) => (CommandName::Density, a),
        C::Egorov(a) => (CommandName::Egorov, a),
        C::Hum(a) => (CommandName::Hum, a),
        C::Verify(a) => (CommandName::Verify, a),
        C::Presets { out } => return Err(out),
    })
}

fn list_presets(out: Option<PathBuf>) -> Result<i32, CliError> {
    let all = presets::all();
    match out {
        None => {
            for p in &all {
                println!("{:<22} {:<15} {}", p.name, p.config.command.as_str(), p.description);
            }
        }
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            for p in &all {
                let path = dir.join(format!("{}.json", p.name));
                std::fs::write(&path, to_json_pretty(&p.config))
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
        }
    }
    Ok(0)
}

fn run(name: CommandName, args: RunArgs) -> Result<i32, CliError> {
    if let Some(n) = args.workers {
        if n == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let config = match (&args.config, &args.preset) {
        (Some(path), None) => ExperimentConfig::load(path)?,
        (None, Some(p)) => {
            presets::find(p)
                .ok_or_else(|| CliError::Config(format!("unknown preset {p:?}")))?
                .config
        }
        _ => return Err(CliError::Config("exactly one of --config or --preset is required".into())),
    };
    if config.command != name {
        return Err(CliError::Config(format!(
            "config is for {:?}, not {:?}",
            config.command.as_str(),
            name.as_str()
        )));
    }
    let opts = RunOptions {
        out: args.out,
        seed: args.seed,
    };
    let report = run_experiment(&config, &opts)?;
    println!(
        "{}",
        serde_json::json!({
            "status": report.status,
            "exit_code": report.exit_code,
            "out": report.out_dir.display().to_string(),
        })
    );
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            eprintln!("{}", CliError::Config(first.to_string()).to_line());
            return ExitCode::from(2);
        }
    };
    let result = match split(cli.command) {
        Ok((name, args)) => run(name, args),
        Err(out) => list_presets(out),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
