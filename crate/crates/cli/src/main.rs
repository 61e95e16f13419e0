use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use norden_core::main_class::Cor32Reading;

mod scenario;

use scenario::{Output, Overrides, ToleranceOverride};

#[derive(Parser)]
#[command(
    name = "norden",
    version,
    about = "Verify curvature identities of Norden hypersurfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario document read from a file, or from standard input with `-`.
    Run { input: PathBuf },
    /// Run the seeded property suite.
    Suite,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Values of n, comma separated.
    #[arg(long = "n", global = true, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Perturb one tensor per battery by 1e-3.
    #[arg(long, global = true)]
    fault_inject: bool,
    #[arg(long, global = true, value_enum)]
    cor32_reading: Option<Reading>,
    /// Also write the text report to standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    Literal,
    Squared,
}

impl From<Reading> for Cor32Reading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Literal => Cor32Reading::Literal,
            Reading::Squared => Cor32Reading::Squared,
        }
    }
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            tolerance: ToleranceOverride {
                abs_tol: self.abs_tol,
                rel_tol: self.rel_tol,
            },
            seed: self.seed,
            trials: self.trials,
            n_values: self.n_values.clone(),
            fault_inject: self.fault_inject,
            cor32_reading: self.cor32_reading.map(Into::into),
        }
    }
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn emit(out: &Output, common: &Common) -> ExitCode {
    let text = out.report.to_text();
    if common.json {
        println!(
            "{}",
            serde_json::to_string_pretty(out).expect("report serializes")
        );
    } else {
        print!("{text}");
    }
    if common.verbose {
        eprint!("{text}");
    }
    if out.report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = cli.common.overrides();
    let result = match &cli.command {
        Command::Run { input } => {
            let text = match read_input(input) {
                Ok(t) => t,
                Err(e) => return input_error(format!("{}: {e}", input.display())),
            };
            scenario::parse(&text).and_then(|s| scenario::run(&s, &overrides))
        }
        Command::Suite => {
            if overrides.trials == Some(0) {
                return input_error("--trials must be at least 1");
            }
            scenario::suite_config(&overrides).map(scenario::run_suite)
        }
    };
    match result {
        Ok(out) => emit(&out, &cli.common),
        Err(e) => input_error(e),
    }
}
