//! Batch verification front end.  Every subcommand prints a report, either
//! human-readable or as JSON conforming to `schemas/report.schema.json`,
//! and exits 0 exactly when every check passed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod cache;
mod cmds;
mod report;
mod serial;

#[derive(Parser)]
#[command(
    name = "braidcob",
    version,
    about = "Exact chain-level verification of braid cobordism invariants"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the defining relations of the categorified braid group action
    VerifyBraidRelations {
        /// Ring index: letters run 1..=n, words live on n + 1 strands
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Longest random base word used for one-relation pairs
        #[arg(long, default_value_t = 4)]
        max_word_len: usize,
        /// Seed for the random word pairs and the isomorphism search
        #[arg(long, default_value_t = 0x1d_5eed)]
        seed: u64,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
    },
    /// Compute the chain-map invariant of one movie file
    Invariant {
        /// Movie JSON file (see schemas/movie.schema.json)
        #[arg(long)]
        movie: PathBuf,
        /// Also restrict the invariant to one projective column (a vertex
        /// index) and cross-check its graded dimensions
        #[arg(long)]
        apply_to_module: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Re-verify a directory of movie-move fixture pairs
    MovieMoves {
        /// Directory of fixture JSON files
        #[arg(long, default_value = "crates/braidcob/fixtures/movie_moves")]
        fixtures: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the q-matrix of a braid word
    Burau {
        /// Word in the form "n=3; 1 -2"
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Degree-truncated certificates for the polynomial bimodule complexes
    Rouquier {
        /// Truncation degree for the graded-piece certificates
        #[arg(long, default_value_t = 6)]
        degree: i64,
        /// Strand count of the underlying polynomial ring
        #[arg(long, default_value_t = 3)]
        strands: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::VerifyBraidRelations { n, max_word_len, seed, json } => {
            cmds::relations(n, max_word_len, seed, json)
        }
        Cmd::Invariant { movie, apply_to_module, json } => {
            cmds::invariant_cmd(&movie, apply_to_module, json)
        }
        Cmd::MovieMoves { fixtures, json } => cmds::moves(&fixtures, json),
        Cmd::Burau { word, json } => cmds::burau_cmd(&word, json),
        Cmd::Rouquier { degree, strands, json } => cmds::rouquier_cmd(strands, degree, json),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
