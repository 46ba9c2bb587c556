//! `zkmsa` — compile alignment-validator circuits, inspect their constraint
//! counts, encode instances, and run the prove/verify pipeline.
//!
//! Exit codes are uniform across subcommands: 0 for valid/verified, 1 for
//! invalid/rejected, 2 for usage or file-format errors.

mod commands;
mod fasta;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "zkmsa",
    version,
    about = "Alignment validator circuits: compile, check, prove, verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ShapeArgs {
    /// Number of sequences
    #[arg(long)]
    nseq: usize,
    /// Padded sequence length
    #[arg(long)]
    seq_len: usize,
    /// Alignment length
    #[arg(long)]
    aln_len: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a validator circuit and report its statistics
    Compile {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Alphabet: "dna", "protein", or a path to a file listing the letters
        #[arg(long, default_value = "dna")]
        alphabet: String,
        /// Hide the given sequence index from the public inputs (repeatable)
        #[arg(long = "private-seq", value_name = "K")]
        private_seq: Vec<usize>,
        /// Hide the score from the public inputs
        #[arg(long = "private-score")]
        private_score: bool,
        /// Write the circuit (JSON) here
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Print statistics as JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Compile a grid of shapes and write their statistics as CSV
    StatsSweep {
        /// Grid spec "N,..xS,..xA,..", e.g. "10x10x10,100"
        #[arg(long)]
        grid: String,
        /// Output CSV path
        #[arg(long)]
        out: std::path::PathBuf,
        /// Alphabet: "dna", "protein", or a path to a letters file
        #[arg(long, default_value = "dna")]
        alphabet: String,
    },
    /// Validate an instance file with the reference oracle
    Check {
        /// Instance JSON ({"seq": [...], "aln": [...], "score": N})
        instance: std::path::PathBuf,
        /// Also check the instance fits this circuit shape
        #[arg(long)]
        nseq: Option<usize>,
        #[arg(long)]
        seq_len: Option<usize>,
        #[arg(long)]
        aln_len: Option<usize>,
        #[arg(long, default_value = "dna")]
        alphabet: String,
    },
    /// Generate a witness for an instance and print the validator output
    Witness {
        /// Compiled circuit JSON (from `compile --out`)
        #[arg(long)]
        circuit: std::path::PathBuf,
        /// Instance JSON
        #[arg(long)]
        instance: std::path::PathBuf,
        /// Write the witness (JSON array of decimal strings) here
        #[arg(long)]
        out: std::path::PathBuf,
    },
    /// Produce proving and verifying keys for a circuit
    Setup {
        #[arg(long)]
        circuit: std::path::PathBuf,
        /// Setup randomness; identical entropy reproduces identical keys
        #[arg(long)]
        entropy: String,
        /// Proving-key output path
        #[arg(long)]
        pk: std::path::PathBuf,
        /// Verifying-key output path
        #[arg(long)]
        vk: std::path::PathBuf,
        #[arg(long, default_value = "dev")]
        backend: String,
    },
    /// Prove a witness against a circuit
    Prove {
        #[arg(long)]
        circuit: std::path::PathBuf,
        #[arg(long)]
        pk: std::path::PathBuf,
        /// Witness JSON (from `witness --out`)
        #[arg(long)]
        witness: std::path::PathBuf,
        /// Proof envelope output path
        #[arg(long)]
        out: std::path::PathBuf,
        #[arg(long, default_value = "dev")]
        backend: String,
    },
    /// Verify a proof envelope against a verifying key
    Verify {
        #[arg(long)]
        vk: std::path::PathBuf,
        #[arg(long)]
        proof: std::path::PathBuf,
    },
    /// Build an instance file from sequence and alignment FASTA files
    Encode {
        /// FASTA with the (gap-free) input sequences
        #[arg(long)]
        fasta: std::path::PathBuf,
        /// FASTA with the alignment rows, one per sequence in record order
        #[arg(long = "fasta-aln")]
        fasta_aln: std::path::PathBuf,
        /// Claimed sum-of-pairs score
        #[arg(long, allow_negative_numbers = true)]
        score: i64,
        /// Instance JSON output path
        #[arg(long)]
        out: std::path::PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compile {
            shape,
            alphabet,
            private_seq,
            private_score,
            out,
            json,
        } => commands::compile(shape, &alphabet, &private_seq, private_score, out, json),
        Command::StatsSweep {
            grid,
            out,
            alphabet,
        } => commands::stats_sweep(&grid, &out, &alphabet),
        Command::Check {
            instance,
            nseq,
            seq_len,
            aln_len,
            alphabet,
        } => commands::check(&instance, nseq, seq_len, aln_len, &alphabet),
        Command::Witness {
            circuit,
            instance,
            out,
        } => commands::witness(&circuit, &instance, &out),
        Command::Setup {
            circuit,
            entropy,
            pk,
            vk,
            backend,
        } => commands::setup(&circuit, &entropy, &pk, &vk, &backend),
        Command::Prove {
            circuit,
            pk,
            witness,
            out,
            backend,
        } => commands::prove(&circuit, &pk, &witness, &out, &backend),
        Command::Verify { vk, proof } => commands::verify(&vk, &proof),
        Command::Encode {
            fasta,
            fasta_aln,
            score,
            out,
        } => commands::encode(&fasta, &fasta_aln, score, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
