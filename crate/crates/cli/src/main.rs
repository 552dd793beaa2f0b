mod config;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kasha::{chain, render, spectral, StealingOperator};
use serde_json::{json, Value};

use crate::config::{initial_state, parse_tolerance, GraphSpec};

/// Max gap allowed between numeric and closed-form spectra.
const SPECTRUM_TOLERANCE: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "kasha", version, about = "Exact neighbor-averaging dynamics on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the dynamics exactly and print every state.
    Simulate {
        /// cube, cycle:<n> or file:<path> (edge list)
        #[arg(long)]
        graph: GraphSpec,
        /// Comma-separated rationals, or a file holding them (default: 1 at node 0)
        #[arg(long)]
        init: Option<String>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the spectrum of the stealing operator.
    Spectrum {
        #[arg(long)]
        graph: GraphSpec,
        /// Also print the closed form (cube and cycles) and the largest discrepancy.
        #[arg(long)]
        closed_form: bool,
    },
    /// Classify the long-run behavior and predict the limit (JSON).
    Analyze {
        #[arg(long)]
        graph: GraphSpec,
        #[arg(long)]
        init: Option<String>,
    },
    /// Simulate and compare against the predicted limit (JSON); exit 1 on failure.
    Verify {
        #[arg(long)]
        graph: GraphSpec,
        #[arg(long)]
        init: Option<String>,
        #[arg(long, default_value_t = 40)]
        steps: usize,
        #[arg(long, value_parser = parse_tolerance, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

enum Outcome {
    Success,
    Failure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout; a reader that hangs up early is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(value: &Value) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Simulate { graph, init, steps, format } => {
            let g = graph.build()?;
            let init = initial_state(init.as_deref(), &g)?;
            let trajectory = chain::simulate(&g, &init, steps)?;
            match format {
                Format::Csv => emit(&render::trajectory_csv(&trajectory))?,
                Format::Json => {
                    let mut doc = render::trajectory_json(&trajectory);
                    doc["graph"] = json!(graph.to_string());
                    print_json(&doc)?;
                }
            }
            Ok(Outcome::Success)
        }
        Command::Spectrum { graph, closed_form } => spectrum(&graph, closed_form),
        Command::Analyze { graph, init } => {
            let g = graph.build()?;
            let init = initial_state(init.as_deref(), &g)?;
            let mut doc = render::analysis_json(&g, &init)?;
            doc["graph"] = json!(graph.to_string());
            print_json(&doc)?;
            Ok(Outcome::Success)
        }
        Command::Verify { graph, init, steps, tol } => verify(&graph, init.as_deref(), steps, tol),
    }
}

fn spectrum(spec: &GraphSpec, closed_form: bool) -> Result<Outcome> {
    let g = spec.build()?;
    let numeric = spectral::spectrum_numeric(&StealingOperator::new(&g)?);
    if !closed_form {
        emit(&numeric.to_string())?;
        return Ok(Outcome::Success);
    }
    let exact = match spec {
        GraphSpec::Cube => spectral::cube_spectrum_closed_form(),
        GraphSpec::Cycle(n) => spectral::cycle_spectrum_closed_form(*n)?,
        GraphSpec::File(_) => {
            bail!("--closed-form: closed forms exist only for cube and cycle:<n>, not {spec}")
        }
    };
    let discrepancy = numeric.max_discrepancy(&exact).unwrap_or(f64::INFINITY);
    emit(&format!(
        "# numeric\n{numeric}# closed-form\n{exact}# max-discrepancy {discrepancy:.11e}\n"
    ))?;
    Ok(if discrepancy <= SPECTRUM_TOLERANCE { Outcome::Success } else { Outcome::Failure })
}

fn verify(spec: &GraphSpec, init: Option<&str>, steps: usize, tol: f64) -> Result<Outcome> {
    if steps == 0 {
        bail!("--steps: verification needs at least one step");
    }
    let g = spec.build()?;
    let init = initial_state(init, &g)?;
    let check = chain::verify_convergence(&g, &init, steps, tol)?;
    let mut passed = check.passed;
    let elementary = if *spec == GraphSpec::Cube && steps >= 2 {
        match chain::cube_elementary_check(&init, steps) {
            Ok(log) => render::contraction_json(&log),
            Err(e) => {
                passed = false;
                json!({ "passed": false, "error": e.to_string() })
            }
        }
    } else {
        Value::Null
    };
    print_json(&json!({
        "graph": spec.to_string(),
        "convergence": render::convergence_json(&check),
        "elementary_check": elementary,
        "passed": passed,
    }))?;
    Ok(if passed { Outcome::Success } else { Outcome::Failure })
}

