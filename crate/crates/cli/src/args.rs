use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use trinomlab_core::field::DEFAULT_SIZE_CAP;
use trinomlab_core::hs::DEFAULT_A_CAP;

#[derive(Debug, Parser)]
#[command(
    name = "trinomlab",
    version,
    about = "Exact checks for the trinomials -x + t x^q + x^(2q-1)"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Largest field order (q^2 for the trinomial suites) a context may have.
    #[arg(long, global = true, env = "TRINOMLAB_SIZE_CAP", default_value_t = DEFAULT_SIZE_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub size_cap: u64,
    /// Largest argument a of H(a) and S(a).
    #[arg(long, global = true, default_value_t = DEFAULT_A_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub a_cap: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// Write records here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Human,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the permutation criterion with brute force for t in F_q^*.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long, conflicts_with = "t")]
        all_t: bool,
        /// An integer (reduced mod p) or comma-separated coefficients over F_p.
        #[arg(long)]
        t: Option<String>,
    },
    /// Construct preimages under the trinomial and verify them.
    Preimage {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: String,
        /// Coordinates in F_{q^2}; same syntax as --t.
        #[arg(long, conflicts_with = "all_y")]
        y: Option<String>,
        #[arg(long)]
        all_y: bool,
    },
    /// Balanced power sums against their binomial closed form.
    Powersum {
        #[arg(long)]
        q: u64,
    },
    /// The binomial sums governed by x^2 + x - z, and their link to power sums.
    Lemmas {
        #[arg(long)]
        q: u64,
    },
    /// H(a) and S(a) for a <= max, optionally with operator residuals.
    Hseq {
        #[arg(long)]
        max: u64,
        /// Also evaluate both annihilating operators for n <= N.
        #[arg(long, value_name = "N")]
        recurrence: Option<u64>,
    },
    /// H(a) + H(q-1-a) and S(a) modulo p, for q = 1 mod 8.
    Congruence {
        #[arg(long)]
        q: u64,
    },
    /// S(a) mod 3 against the conjectured pattern. Never fails.
    Conjecture {
        #[arg(long)]
        max: u64,
    },
    /// Describe the context F_{p^n}.
    FieldInfo {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
}
