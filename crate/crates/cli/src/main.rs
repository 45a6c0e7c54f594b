mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use preresolve_core::Result;

use report::RunReport;

#[derive(Parser)]
#[command(name = "preresolve", version, about = "Conflation structures, resolutions and replacements over finitely generated abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the full JSON report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Print per-stage diagrams.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the axioms R0–R3+ for a registered conflation structure.
    CheckAxioms {
        /// fgab, killed-by:N, isbell:p, free, add-ring:N, add:..., broken-demo
        structure: String,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Resolve an object by members of a subcategory.
    Resolve {
        #[arg(long)]
        sub: String,
        /// JSON, a JSON file, or notation such as Z/4+Z.
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Resolution dimension with its justification.
    Resdim {
        #[arg(long)]
        sub: String,
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Absolute and (with --sub) relative acyclicity of a complex.
    Acyclic {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        sub: Option<String>,
        /// Structure used for the absolute check; defaults to the ambient of --sub.
        #[arg(long)]
        structure: Option<String>,
    },
    /// Replace a complex by one with member terms.
    Replace {
        #[arg(long)]
        sub: String,
        #[arg(long)]
        complex: String,
        /// Use the bounded-above procedure with this depth limit.
        #[arg(long)]
        max_len: Option<usize>,
        /// Window `a,b` for unbounded (periodic) input.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
    /// Scripted scenarios: isbell, periodic-counterexample, domination, padding.
    Demo {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Input complex for the padding demo (default: the zero complex).
        #[arg(long)]
        complex: Option<String>,
        /// Subcategory for the padding demo.
        #[arg(long, default_value = "isbell:2")]
        sub: String,
    },
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

fn run(cmd: &Command, trace: bool) -> Result<(RunReport, String)> {
    Ok(match cmd {
        Command::CheckAxioms { structure, budget, seed } => (commands::check_axioms_cmd(structure, *budget, *seed)?, String::new()),
        Command::Resolve { sub, object, max_len } => commands::resolve_cmd(sub, &input::object(object)?, *max_len, trace)?,
        Command::Resdim { sub, object, bound } => (commands::resdim_cmd(sub, &input::object(object)?, *bound)?, String::new()),
        Command::Acyclic { complex, sub, structure } => {
            (commands::acyclic_cmd(&input::complex(complex)?, sub.as_deref(), structure.as_deref())?, String::new())
        }
        Command::Replace { sub, complex, max_len, window } => {
            commands::replace_cmd(sub, &input::complex(complex)?, *max_len, *window)?
        }
        Command::Demo { name, seed, complex, sub } => {
            let c = complex.as_deref().map(input::complex).transpose()?;
            (commands::demo_cmd(name, *seed, c.as_ref(), sub)?, String::new())
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (mut report, trace) = match run(&cli.command, cli.trace) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    report.wall_time_ms = start.elapsed().as_millis();
    print!("{}", report.render());
    if cli.trace && !trace.is_empty() {
        print!("{trace}");
    }
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.all_hold() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
