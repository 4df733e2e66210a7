use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rcqm::scenario::run_config_file;
use rcqm::suites::describe;

#[derive(Parser)]
#[command(name = "rcqm", version, about = "Free spin-1/2 doublet: verification suites and reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites listed in a scenario config and write reports.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the suite catalog.
    Describe,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Describe => {
            print!("{}", describe());
            ExitCode::SUCCESS
        }
        Command::Run { config } => match run_config_file(&config) {
            Ok(report) => {
                for (suite, check) in report.failed_checks() {
                    eprintln!(
                        "FAIL {}: {} (residual {:e}, tolerance {:e})",
                        suite.name(),
                        check.name,
                        check.residual,
                        check.tolerance
                    );
                }
                if report.pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
