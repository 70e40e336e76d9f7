use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normext::quotient::Engine;

#[derive(Debug, Parser)]
#[command(name = "normext", version, about = "Normal and central extensions of superpotential algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    La,
    Gb,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::La => Engine::La,
            EngineArg::Gb => Engine::Gb,
            EngineArg::Both => Engine::Both,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Algebra description file.
    pub path: PathBuf,
    /// Highest degree computed (default 2m+4).
    #[arg(long)]
    pub bound: Option<usize>,
    /// Index of the omitted relation, 1-based.
    #[arg(long)]
    pub omit: Option<usize>,
    /// The tuple p, e.g. "1,zeta,zeta^2".
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    pub engine: EngineArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Parameter values, e.g. "alpha:=-4,beta:=3".
    #[arg(long, allow_hyphen_values = true)]
    pub assign: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recognize w as a twisted superpotential and report its twist.
    CheckSuperpotential(Common),
    /// Relations from w, and w recovered from the relations.
    Derive(Common),
    /// All good tuples for one omitted index (or every index).
    SolveTuples(Common),
    /// Relations of D(w,p) and the element Ω.
    BuildExtension(Common),
    /// Graded dimensions of A(w), or of D(w,p) when --omit is given.
    Hilbert(Common),
    /// Full certificate for D(w,p).
    Verify(Common),
    /// Hilbert tables along the fibers of the family over the projective plane.
    FamilyProbe {
        #[command(flatten)]
        common: Common,
        /// Points separated by `;`, e.g. "1,0,0;1,2,3".
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
    },
    /// Zhang twist of D(w,p) against D(σw, p').
    Zhang {
        #[command(flatten)]
        common: Common,
        /// Diagonal automorphisms separated by `;`, e.g. "2,1,1;1,3,-1".
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Compare computed good tuples with the sidecar table rows of a corpus.
    Tables {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}
