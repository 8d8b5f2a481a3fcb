use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isoperim_cli::report::Format;
use isoperim_cli::{check_file, emit, exit, selftest, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "isoperim", version, about = "Numerical checks of isoperimetric inequalities on the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file.
    Check {
        file: String,
        /// Output path, `-` for stdout.
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        grid_nr: Option<usize>,
        #[arg(long)]
        grid_ntheta: Option<usize>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in radial metrics.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Run the built-in equality-anchor suite.
    Selftest {
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

const PRESETS: [(&str, &str); 4] = [
    ("bubble", "u = log(4β²/(1+β²r²)²), curvature 1; parameter beta (default 1)"),
    ("flat", "u = 0, curvature 0"),
    ("sphere", "bubble with beta = 1"),
    ("hyperbolic", "u = log(4/(1-s²r²)²), curvature -1 on r < 1/s; parameter scale s (default 1)"),
];

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check { file, out, format, grid_nr, grid_ntheta, levels, tol, seed } => {
            let opts = RunOptions { grid_nr, grid_ntheta, levels, tol, seed };
            check_file(&file, &out, format, &opts)
        }
        Command::Presets { action: PresetAction::List } => {
            let text: String = PRESETS.iter().map(|(n, d)| format!("{n:<12}{d}\n")).collect();
            emit(&text, "-")?;
            Ok(exit::PASS)
        }
        Command::Selftest { out, seed } => {
            let doc = selftest::run(seed)?;
            emit(&doc.to_json(), &out)?;
            Ok(if doc.pass { exit::PASS } else { exit::INEQUALITY_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("isoperim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
