//! `iwasawa`: command-line front end to the exact Heisenberg lattice and
//! Iwasawa manifold toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input or usage.

mod commands;
mod schema;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{Outcome, Status};
use schema::load_input;

#[derive(Debug, Parser)]
#[command(
    name = "iwasawa",
    version,
    about = "Exact computations on lattices in the complex Heisenberg group"
)]
struct Cli {
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// INPUT is a JSON document path or `corpus:NAME`.
#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a generator set spans a cocompact lattice.
    #[command(subcommand)]
    Lattice(LatticeOp),
    /// Pass between lattices and (Delta, Gamma, q) data.
    #[command(subcommand)]
    Iwasawa(IwasawaOp),
    /// Hodge-theoretic invariants of a complex torus.
    #[command(subcommand)]
    Torus(TorusOp),
    /// Cohomology of a Chevalley–Eilenberg algebra.
    #[command(subcommand)]
    Cohomology(CohomologyOp),
    /// Certificates for the cocycle as a Chern form.
    #[command(subcommand)]
    Chern(ChernOp),
    /// Run one named check, or `all`, on a lattice.
    Verify {
        /// `all` or one of base-picard, common-cm, line-splitting, roundtrip, ce-model.
        check: String,
        input: String,
        /// Coordinate bound for enumerated lines.
        #[arg(long, default_value_t = 1)]
        height: u32,
        /// Report wall-clock time per check (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Bundled example documents.
    #[command(subcommand)]
    Corpus(CorpusOp),
}

#[derive(Debug, Subcommand)]
enum LatticeOp {
    Validate { input: String },
}

#[derive(Debug, Subcommand)]
enum IwasawaOp {
    /// (Delta, Gamma, q) from a Heisenberg document.
    Extract { input: String },
    /// A lattice from a construct document.
    Construct { input: String },
}

#[derive(Debug, Subcommand)]
enum TorusOp {
    /// Basis of End ⊗ Q acting on H₁.
    Endos { input: String },
    /// Picard number and the rational (2,0)+(0,2) dimension.
    Picard { input: String },
    /// Maximality conditions for complex multiplication.
    Cm { input: String },
    /// Elliptic subtori spanned by lattice vectors of bounded height.
    Subtori {
        #[arg(long, default_value_t = 1)]
        height: u32,
        input: String,
    },
}

#[derive(Debug, Subcommand)]
enum CohomologyOp {
    Betti {
        input: String,
    },
    /// Page dimensions of the Frölicher spectral sequence.
    Frolicher {
        #[arg(long, default_value_t = 4)]
        rmax: usize,
        input: String,
    },
}

#[derive(Debug, Subcommand)]
enum ChernOp {
    Check {
        #[arg(long, default_value_t = 1)]
        height: u32,
        input: String,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusOp {
    List,
    /// Print a bundled document.
    Emit {
        name: String,
    },
}

fn dispatch(command: &Command) -> Result<Outcome> {
    use commands as c;
    match command {
        Command::Lattice(LatticeOp::Validate { input }) => c::lattice_validate(&load_input(input)?),
        Command::Iwasawa(IwasawaOp::Extract { input }) => c::iwasawa_extract(&load_input(input)?),
        Command::Iwasawa(IwasawaOp::Construct { input }) => {
            c::iwasawa_construct(&load_input(input)?)
        }
        Command::Torus(TorusOp::Endos { input }) => c::torus_endos(&load_input(input)?),
        Command::Torus(TorusOp::Picard { input }) => c::torus_picard(&load_input(input)?),
        Command::Torus(TorusOp::Cm { input }) => c::torus_cm(&load_input(input)?),
        Command::Torus(TorusOp::Subtori { height, input }) => {
            c::torus_subtori(&load_input(input)?, *height)
        }
        Command::Cohomology(CohomologyOp::Betti { input }) => {
            c::cohomology_betti(&load_input(input)?)
        }
        Command::Cohomology(CohomologyOp::Frolicher { rmax, input }) => {
            c::cohomology_frolicher(&load_input(input)?, *rmax)
        }
        Command::Chern(ChernOp::Check { height, input }) => {
            c::chern_check(&load_input(input)?, *height)
        }
        Command::Verify {
            check,
            input,
            height,
            timings,
        } => c::verify(&load_input(input)?, check, *height, *timings),
        Command::Corpus(CorpusOp::List) => Ok(c::corpus_list()),
        Command::Corpus(CorpusOp::Emit { name }) => {
            c::corpus_emit(&load_input(&format!("corpus:{name}"))?)
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(outcome) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.json).expect("JSON value")
                );
            } else {
                print!("{}", outcome.text);
            }
            match outcome.status {
                Status::Success => ExitCode::SUCCESS,
                Status::Failure => ExitCode::from(1),
                Status::Malformed => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
