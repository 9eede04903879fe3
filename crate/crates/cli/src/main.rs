mod args;
mod commands;
mod report;

use clap::Parser;
use std::process::ExitCode;

const THREADS_ENV: &str = "BARRON_PDE_THREADS";

/// clap keeps the last of repeated `--seed` flags; say so.
fn warn_repeated_seed(argv: &[String]) {
    let n = argv.iter().filter(|a| *a == "--seed" || a.starts_with("--seed=")).count();
    if n > 1 {
        eprintln!("warning: --seed given {n} times; using the last value");
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, String> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| format!("{THREADS_ENV}={v:?} is not a thread count"))?),
            Err(_) => None,
        },
    };
    match n {
        Some(0) => Err("thread count must be at least 1".into()),
        n => Ok(n),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match args::Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    warn_repeated_seed(&argv);
    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
