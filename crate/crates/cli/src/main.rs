use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qlift_cli::{list_text, parse_param, run, RunConfig, DEFAULT_OUT_DIR, OUT_DIR_ENV};

/// Runs state-testing experiments and verification sweeps.
///
/// Exit status: 0 when every verdict passes, 1 when any fails, 2 on a
/// configuration or usage error.
#[derive(Parser, Debug)]
#[command(name = "qlift", version)]
struct Cli {
    /// Experiment id (see `list`).
    #[arg(long, short = 'e', value_name = "ID")]
    experiment: Option<String>,

    /// Experiment id given positionally instead of with --experiment.
    #[arg(value_name = "ID", conflicts_with = "experiment")]
    id: Option<String>,

    /// Master seed; every trial derives its own stream from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Trials per tester instance.
    #[arg(long, default_value_t = 2000)]
    trials: usize,

    /// Output directory for `<id>.txt` records and `summary.csv`.
    #[arg(long, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    out: PathBuf,

    /// Restrict verify_all to these rows (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,

    /// Experiment parameter as key=value (repeatable); numbers accept `1/32` and `2pi`.
    #[arg(long = "param", short = 'p', value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, String)>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(experiment) = cli.experiment.or(cli.id) else {
        eprintln!("error: no experiment given; use --experiment <ID> (try `list`)");
        return ExitCode::from(2);
    };
    let mut params = BTreeMap::new();
    for (k, v) in cli.params {
        if params.insert(k.clone(), v).is_some() {
            eprintln!("error: parameter {k:?} given twice");
            return ExitCode::from(2);
        }
    }
    let cfg = RunConfig { experiment, params, seed: cli.seed, trials: cli.trials, out: cli.out, only: cli.only };
    if cfg.experiment == "list" {
        print!("{}", list_text());
        return ExitCode::SUCCESS;
    }
    match run(&cfg) {
        Ok(summary) => {
            for r in &summary.records {
                println!("{:<13} {}", r.id, if r.pass { "pass" } else { "FAIL" });
            }
            for p in &summary.written {
                println!("wrote {}", p.display());
            }
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
