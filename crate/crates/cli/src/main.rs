use clap::{Parser, Subcommand};
use moyal_lab::error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

/// Phase-space quantum dynamics: figure regeneration, uncertainty traces,
/// verification suites and canonical reductions.
#[derive(Parser)]
#[command(name = "moyal-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regenerate figure data (fig1a, fig1b, fig1c, fig1d, fig2) as CSV.
    Figure {
        /// Figure name.
        name: String,
        /// Output path (defaults to <name>.csv).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate an uncertainty trace from a scenario configuration.
    Simulate {
        /// Scenario configuration file (key = value lines).
        #[arg(short, long)]
        config: PathBuf,
        /// Output path (defaults to trace.csv).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Append independent oracle columns and a discrepancy summary.
        #[arg(long)]
        oracle: bool,
    },
    /// Run a verification suite (all, star, quadratic, quartic, oracle).
    Verify {
        /// Suite name; defaults to all.
        suite: Option<String>,
    },
    /// Classify a quadratic Hamiltonian and print its canonical reductions.
    Reduce { omega: f64, alpha: f64, beta: f64 },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Figure { name, output } => {
            let path = output.unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
            moyal_lab::cmd_figure(&name, &path)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Simulate { config, output, oracle } => {
            let path = output.unwrap_or_else(|| PathBuf::from("trace.csv"));
            let warnings = moyal_lab::cmd_simulate(&config, &path, oracle)?;
            for w in warnings {
                eprintln!("{w}");
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Verify { suite } => {
            let suite = moyal_lab::parse_suite(suite.as_deref().unwrap_or("all"))?;
            let (lines, status) = moyal_lab::cmd_verify(suite);
            for line in lines {
                println!("{line}");
            }
            status
        }
        Command::Reduce { omega, alpha, beta } => {
            print!("{}", moyal_lab::cmd_reduce(omega, alpha, beta)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
