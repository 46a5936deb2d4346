use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use karoubi::cli::{emit_report, load_config, Format, Session, TaskSpec};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Checks extriangulated structures and their idempotent completions over GF(p).
#[derive(Parser)]
#[command(name = "karoubi", version)]
struct Args {
    /// Session config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run only this task; repeatable. Tasks missing from the config run with defaults.
    #[arg(long)]
    task: Vec<String>,
    /// Worker threads for instance checks.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

fn run(args: Args) -> Result<bool, String> {
    let config = load_config(&args.config).map_err(|e| e.to_string())?;
    let mut session = Session::new(config).map_err(|e| e.to_string())?;
    if let Some(seed) = args.seed {
        session = session.with_seed(seed);
    }
    if args.parallel == 0 {
        return Err("--parallel: must be at least 1".into());
    }
    if args.parallel > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(args.parallel).build_global().map_err(|e| e.to_string())?;
        session = session.with_parallel(true);
    }
    let tasks = if args.task.is_empty() {
        None
    } else {
        let mut v = Vec::new();
        for name in &args.task {
            let t = match session.config.tasks.iter().find(|t| t.name() == name) {
                Some(t) => t.clone(),
                None => TaskSpec::from_name(name).map_err(|e| e.to_string())?,
            };
            session.validate_task(&t).map_err(|e| e.to_string())?;
            v.push(t);
        }
        Some(v)
    };
    let report = session.run(tasks.as_deref());
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let text = emit_report(&report, format);
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
