use std::fs;
use std::process::ExitCode;

use clap::Parser;
use hermite_core::exec::ExecMode;
use hermite_core::verify::{run, Config};

/// Runs the registered verification checks and prints a report.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Args {
    /// Check id, or "all"; an empty string runs nothing
    selector: String,
    /// f2-rational or gf2:<n>:<modulus bits>
    #[arg(long, default_value = "f2-rational")]
    field: String,
    /// Parameter u (defaults to u for f2-rational, w for GF(2^n))
    #[arg(long)]
    u: Option<String>,
    /// Degree bound for random samples
    #[arg(long, default_value_t = hermite_core::sample::DEFAULT_DEGREE)]
    degree: u32,
    #[arg(long, default_value_t = hermite_core::verify::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = hermite_core::sample::DEFAULT_SEED)]
    seed: u64,
    /// Write the JSON report here
    #[arg(long)]
    json: Option<String>,
    /// Record wall-clock milliseconds per check
    #[arg(long)]
    timings: bool,
    /// Run checks one after another
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut config = match Config::parse(&args.field, args.u.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    config.degree = args.degree;
    config.trials = args.trials;
    config.seed = args.seed;
    config.timings = args.timings;
    if args.sequential {
        config.mode = ExecMode::Sequential;
    }
    let report = match run(&args.selector, &config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", report.to_text());
    if let Some(path) = &args.json {
        if let Err(e) = fs::write(path, report.to_json() + "\n") {
            eprintln!("verify: io error: {path}: {e}");
            return ExitCode::from(2);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
