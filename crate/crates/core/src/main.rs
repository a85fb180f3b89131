use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use parabolic_nf::harness::{invariance_check, roundtrip_check};
use parabolic_nf::interp::{classify_linear_part, interpolate, CaseTag};
use parabolic_nf::nf::{normalize_with, Strategy};
use parabolic_nf::psf::{self, PsfDocument};
use parabolic_nf::{Error, Result};

#[derive(Parser)]
#[command(name = "pnf", version, about = "Exact normal forms of area-preserving maps at a parabolic fixed point")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Auto,
    #[value(name = "jordan+")]
    JordanPlus,
    #[value(name = "jordan-")]
    JordanMinus,
    #[value(name = "diag+")]
    DiagPlus,
    #[value(name = "diag-")]
    DiagMinus,
    Reversing,
}

impl CaseArg {
    fn tag(self) -> Option<CaseTag> {
        match self {
            CaseArg::Auto => None,
            CaseArg::JordanPlus => Some(CaseTag::JordanPlus),
            CaseArg::JordanMinus => Some(CaseTag::JordanMinus),
            CaseArg::DiagPlus => Some(CaseTag::DiagPlus),
            CaseArg::DiagMinus => Some(CaseTag::DiagMinus),
            CaseArg::Reversing => Some(CaseTag::Reversing),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Recurrence,
    Generic,
}

#[derive(Subcommand)]
enum Command {
    /// Print the case and the linear part of a map.
    Classify { input: PathBuf },
    /// Write the interpolating Hamiltonian of a map with unipotent linear part.
    Interpolate {
        input: PathBuf,
        #[arg(long)]
        order: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the normal form, invariants and change-of-variables log.
    Normalize {
        input: PathBuf,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, value_enum, default_value = "auto")]
        case: CaseArg,
        #[arg(long, value_enum, default_value = "recurrence")]
        solver: SolverArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the invariant tables only.
    Invariants {
        input: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Round-trip and invariance checks.
    Verify {
        input: PathBuf,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_doc(path: &PathBuf, order: Option<u32>) -> Result<PsfDocument> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))?;
    let doc = psf::parse_psf(&text)?;
    match order {
        Some(n) => doc.truncated(n),
        None => Ok(doc),
    }
}

fn write_out(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
    .map_err(|e| Error::Parameter(format!("cannot write output: {e}")))
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Classify { input } => {
            let f = read_doc(&input, None)?.to_map()?;
            let family = classify_linear_part(&f)?;
            println!("{}", family.case);
            println!("linear {}", family.input_linear);
        }
        Command::Interpolate { input, order, output } => {
            let f = read_doc(&input, order)?.to_map()?;
            let h = interpolate(&f)?;
            write_out(output.as_ref(), &psf::emit_psf(&PsfDocument::from_series("h", &h)))?;
        }
        Command::Normalize {
            input,
            order,
            case,
            solver,
            output,
        } => {
            let f = read_doc(&input, order)?.to_map()?;
            let strategy = match solver {
                SolverArg::Recurrence => Strategy::Recurrence,
                SolverArg::Generic => Strategy::Generic,
            };
            let r = normalize_with(&f, case.tag(), strategy)?;
            write_out(output.as_ref(), &psf::emit_result(&r))?;
        }
        Command::Invariants { input, order } => {
            let f = read_doc(&input, order)?.to_map()?;
            let r = normalize_with(&f, None, Strategy::Recurrence)?;
            print!("{}", psf::emit_invariants(&r.invariants));
        }
        Command::Verify {
            input,
            order,
            trials,
            seed,
        } => {
            let f = read_doc(&input, order)?.to_map()?;
            let r = normalize_with(&f, None, Strategy::Recurrence)?;
            let round = roundtrip_check(&r.h_normal);
            println!("{round}");
            let replay = r.replay_matches(&f)?;
            println!("log replay: {}", if replay { "pass" } else { "FAIL" });
            let inv = invariance_check(&f, trials, seed)?;
            println!("{inv}");
            return Ok(round.success() && replay && inv.success());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(6),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
