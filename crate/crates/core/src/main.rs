use branchlab::scenario::{self, RunOptions};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Scenario runner for the branching-multiverse laboratory.
#[derive(Parser)]
#[command(name = "branchlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its reports.
    Run(RunArgs),
    /// List the bundled scenarios.
    List,
    /// Print the parameter schema of an experiment kind.
    Describe { kind: String },
}

#[derive(Args)]
struct RunArgs {
    /// Path to a scenario JSON file.
    file: PathBuf,
    /// Override every seed in the scenario.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory to resolve output paths against.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Exact evaluation (the default).
    #[arg(long, conflicts_with = "float_report")]
    exact: bool,
    /// Floating-point census evaluation, for press counts beyond exact
    /// reach; reporting only.
    #[arg(long)]
    float_report: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let options = RunOptions {
                seed: args.seed,
                out_dir: args.out_dir,
                float_report: args.float_report,
            };
            match scenario::run_scenario_file(&args.file, &options) {
                Ok(output) => {
                    if output.files.is_empty() {
                        print!("{}", output.report_json);
                    } else {
                        for file in &output.files {
                            println!("{}", file.display());
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(err.exit_code() as u8)
                }
            }
        }
        Command::List => {
            for s in scenario::list_scenarios() {
                match &s.description {
                    Some(d) => println!("{:<32} {:<18} {}", s.name, s.experiment, d),
                    None => println!("{:<32} {}", s.name, s.experiment),
                }
            }
            ExitCode::SUCCESS
        }
        Command::Describe { kind } => match scenario::describe(&kind) {
            Ok(text) => {
                println!("{text}");
                ExitCode::SUCCESS
            }
            Err(err) => {
                eprintln!("error: {err}");
                ExitCode::from(2)
            }
        },
    }
}
