//! bcm: exact computations with rank 1 and rank 2 Cohen-Macaulay modules
//! over the boundary algebra of the Grassmannian Gr(k, n).
//!
//! Every subcommand prints one JSON document on standard output (render
//! prints the figure itself). Failures print {"error":{...}} on the
//! error stream and exit with 1 for bad input, 2 for an internal bug.

mod error;
mod input;
mod poly;

use std::path::PathBuf;

use boundary_cm::classify::{classify, decompose, enumerate_decomposables, DecompositionResult};
use boundary_cm::cmmod::{build_rank1, RelationReport};
use boundary_cm::combinat::{interlacing_number, is_tight, Rim};
use boundary_cm::oracle::decompose_exhaustive;
use boundary_cm::render::{render_ascii, render_svg};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{difference_listing, module_input, pair_input, parse_labels, ModuleArgs, PairArgs};

#[derive(Parser)]
#[command(
    name = "bcm",
    version,
    about = "Rank 1 and rank 2 Cohen-Macaulay modules over the boundary algebra of Gr(k, n), computed exactly over Q[t]/(t^N)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report how two rims interlace
    Interlace(PairArgs),
    /// Build a module and check the algebra relations on it
    Construct(ModuleArgs),
    /// Decide indecomposability from the divisibility pattern
    Classify(ModuleArgs),
    /// Split a module into rank-1 summands when the pattern allows it
    Decompose {
        #[command(flatten)]
        module: ModuleArgs,
        /// Include the idempotent and its eigenvector chains in the output
        #[arg(long)]
        with_witness: bool,
    },
    /// List every splittable pattern of a tight pair, with sample parameters
    Enumerate(PairArgs),
    /// Cross-check the pattern verdict against a brute-force summand search
    OracleCheck(ModuleArgs),
    /// Draw the lattice diagram of a pair of rims
    Render {
        #[command(flatten)]
        pair: PairArgs,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Write the figure to a file instead of standard output
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

fn main() {
    std::panic::set_hook(Box::new(|info| {
        let message = if let Some(s) = info.payload().downcast_ref::<&str>() {
            (*s).to_string()
        } else if let Some(s) = info.payload().downcast_ref::<String>() {
            s.clone()
        } else {
            "unexpected panic".to_string()
        };
        eprintln!(
            "{}",
            json!({ "error": { "kind": "internal", "message": message } })
        );
    }));
    let code = match std::panic::catch_unwind(run) {
        Ok(Ok(())) => 0,
        Ok(Err(err)) => {
            eprintln!("{}", err.to_json());
            1
        }
        Err(_) => 2,
    };
    std::process::exit(code);
}

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            write_stdout(&err.render().to_string());
            return Ok(());
        }
        Err(err) => return Err(CliError::usage(err.render().to_string())),
    };
    match cli.command {
        Command::Interlace(args) => cmd_interlace(&args),
        Command::Construct(args) => cmd_construct(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Decompose {
            module,
            with_witness,
        } => cmd_decompose(&module, with_witness),
        Command::Enumerate(args) => cmd_enumerate(&args),
        Command::OracleCheck(args) => cmd_oracle_check(&args),
        Command::Render { pair, format, out } => cmd_render(&pair, format, out.as_deref()),
    }
}

/// Write to standard output, treating a closed pipe as a normal way for
/// the consumer to say "enough" rather than as a failure.
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(err) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!(
            "{}",
            CliError::io(format!("cannot write to stdout: {err}")).to_json()
        );
        std::process::exit(1);
    }
}

fn emit(value: &Value) {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_stdout(&text);
}

fn cmd_interlace(args: &PairArgs) -> Result<(), CliError> {
    let pair = pair_input(args)?;
    let r = interlacing_number(&pair.i, &pair.j)?;
    let tight = is_tight(&pair.i, &pair.j)?;
    let (i_positions, j_positions) = difference_listing(&pair.i, &pair.j);
    emit(&json!({
        "r": r,
        "tight": tight,
        "i_positions": i_positions,
        "j_positions": j_positions,
    }));
    Ok(())
}

fn relations_value(report: &RelationReport) -> Result<Value, CliError> {
    let mut value = serde_json::to_value(report).map_err(|err| CliError::json(err.to_string()))?;
    value["valid"] = json!(report.is_valid());
    Ok(value)
}

fn cmd_construct(args: &ModuleArgs) -> Result<(), CliError> {
    let rank1_requested = args.b.is_none() && args.pair.spec.is_none() && args.pair.j.is_none();
    let rep = if rank1_requested {
        let (Some(i_text), Some(n)) = (&args.pair.i, args.pair.n) else {
            return Err(CliError::usage(
                "construct needs --spec FILE, or --I/--J/--n/--b, or --I/--n for a rank-1 module",
            ));
        };
        let ring = boundary_cm::SeriesRing::new(input::resolve_order(args.pair.truncation, None)?)?;
        let rim = Rim::new(n, parse_labels(i_text)?)?;
        build_rank1(ring, &rim)
    } else {
        module_input(args)?.rep().clone()
    };
    let report = rep.verify_relations();
    emit(&json!({
        "module": serde_json::to_value(&rep).map_err(|err| CliError::json(err.to_string()))?,
        "relations": relations_value(&report)?,
    }));
    Ok(())
}

fn cmd_classify(args: &ModuleArgs) -> Result<(), CliError> {
    let module = module_input(args)?;
    let classification = classify(&module);
    let mut value =
        serde_json::to_value(&classification).map_err(|err| CliError::json(err.to_string()))?;
    value["verdict"] = json!(if classification.is_indecomposable() {
        "indecomposable"
    } else {
        "split"
    });
    emit(&value);
    Ok(())
}

fn cmd_decompose(args: &ModuleArgs, with_witness: bool) -> Result<(), CliError> {
    let module = module_input(args)?;
    let result = decompose(&module);
    let mut value = serde_json::to_value(&result).map_err(|err| CliError::json(err.to_string()))?;
    if !with_witness {
        if let Some(map) = value.as_object_mut() {
            map.remove("witness");
        }
    }
    emit(&value);
    Ok(())
}

fn cmd_enumerate(args: &PairArgs) -> Result<(), CliError> {
    let pair = pair_input(args)?;
    let entries = enumerate_decomposables(pair.ring()?, &pair.i, &pair.j)?;
    let value = serde_json::to_value(&entries).map_err(|err| CliError::json(err.to_string()))?;
    emit(&value);
    Ok(())
}

fn cmd_oracle_check(args: &ModuleArgs) -> Result<(), CliError> {
    let module = module_input(args)?;
    let theorem = decompose(&module);
    let found = decompose_exhaustive(module.rep(), module.i_rim().k())?;
    let agree = match &theorem {
        DecompositionResult::Split { x, y, .. } => {
            let mut expected = [x.clone(), y.clone()];
            expected.sort();
            let mut got = found.clone();
            got.sort();
            got == expected
        }
        DecompositionResult::Indecomposable { .. } => found.is_empty(),
    };
    let mut theorem_value =
        serde_json::to_value(&theorem).map_err(|err| CliError::json(err.to_string()))?;
    if let Some(map) = theorem_value.as_object_mut() {
        map.remove("witness");
    }
    let oracle_verdict = if found.is_empty() {
        "indecomposable"
    } else {
        "split"
    };
    emit(&json!({
        "theorem": theorem_value,
        "oracle": { "verdict": oracle_verdict, "summands": found },
        "agree": agree,
    }));
    Ok(())
}

fn cmd_render(args: &PairArgs, format: Format, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let pair = pair_input(args)?;
    let figure = match format {
        Format::Ascii => render_ascii(&pair.i, &pair.j)?,
        Format::Svg => render_svg(&pair.i, &pair.j)?,
    };
    match out {
        Some(path) => std::fs::write(path, figure)
            .map_err(|err| CliError::io(format!("cannot write {}: {err}", path.display())))?,
        None => write_stdout(&figure),
    }
    Ok(())
}
