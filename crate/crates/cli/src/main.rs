//! `tgs`: command-line front end for ternary Γ-semiring codes.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tgs_core::Bounds;

#[derive(Parser, Debug)]
#[command(
    name = "tgs",
    version,
    about = "Finite ternary Γ-semirings, their ideals, quotients and codes"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Enumeration caps, e.g. `carrier=12,words=1048576,witnesses=32`.
    #[arg(long, global = true, env = "TGS_BOUNDS", default_value_t = Bounds::default())]
    pub bounds: Bounds,
    /// Run on structures that fail their axioms.
    #[arg(long, global = true, env = "TGS_FORCE")]
    pub force: bool,
    /// Drop ⊕-closure from the k-ideal predicate.
    #[arg(long, global = true, env = "TGS_LITERAL_IDEALS")]
    pub literal_ideals: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scan the axioms and print witnesses for every violation.
    Check {
        /// Structure document, or the name of a bundled one.
        tgs: String,
    },
    /// List every k-ideal with primality and minimal elements.
    Ideals { tgs: String },
    /// The ideal lattice: Hasse diagram, meet and join, distributivity.
    Lattice { tgs: String },
    /// Quotient by the congruence of a k-ideal.
    Quotient {
        tgs: String,
        /// Comma-separated labels of the ideal.
        #[arg(long)]
        ideal: String,
        #[arg(long, value_enum, default_value_t = Relation::Bourne)]
        relation: Relation,
    },
    /// Build a code from a spec.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Syndrome-decode one received word.
    Decode {
        /// Code spec document, or the name of a bundled one.
        #[arg(long)]
        code: String,
        /// Comma-separated labels, e.g. `a,0,1`.
        #[arg(long)]
        word: String,
    },
    /// Send codewords through an additive channel and score a decoder.
    Simulate {
        #[arg(long)]
        code: String,
        /// Largest error weight.
        #[arg(long)]
        wmax: usize,
        #[arg(long, value_enum, default_value_t = SimMode::Exhaustive)]
        mode: SimMode,
        #[arg(long, value_enum, default_value_t = DecoderKind::Syndrome)]
        decoder: DecoderKind,
        /// Number of samples in sampled mode.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Required in sampled mode.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the claim suite over a fixture directory (default: the bundle).
    VerifyClaims(VerifyArgs),
    /// List, check or export the bundled fixtures.
    Fixtures {
        /// Write the bundle and its manifest into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CodeCommand {
    /// Parameters n, |C|, k, d and the decoding radius.
    Params {
        #[arg(long)]
        spec: String,
    },
    /// The member list, spec and parameters.
    Export {
        #[arg(long)]
        spec: String,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Write the full JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write every counterexample as `<id>.json` into this directory.
    #[arg(long)]
    pub counterexamples: Option<PathBuf>,
    /// Add structures found by seeded random search.
    #[arg(long)]
    pub search_seed: Option<u64>,
    #[arg(long, default_value_t = tgs_core::claims::search::DEFAULT_CANDIDATES)]
    pub search_candidates: u64,
    /// Replay a stored counterexample instead of running the suite.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    /// Include wall times in the JSON report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    Bourne,
    Rees,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecoderKind {
    Syndrome,
    Nearest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {}", e.kind(), e.to_string().replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
