use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use trinoperm_core::gnq::MiddleTerm;

use crate::config::{FieldSpec, Format, Overrides, RESULTS_ENV};

/// Permutation trinomials over F_{q^2} and the g_{n,q} family: exhaustive
/// checks, tables and identity verification.
#[derive(Debug, Parser)]
#[command(name = "trinoperm", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// TOML file with the same keys as the flags below (flags win).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for reports, tables, manifest and modulus cache.
    #[arg(long, global = true, env = RESULTS_ENV)]
    pub results_dir: Option<PathBuf>,
    /// Worker threads (0 = automatic). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest admissible field order.
    #[arg(long, global = true)]
    pub size_bound: Option<u64>,
    /// Largest number of g_{n,q} coefficients to expand.
    #[arg(long, global = true)]
    pub coeff_bound: Option<usize>,
    /// Default fields for verify subcommands, e.g. `3,5,3^2`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub fields: Option<Vec<FieldSpec>>,
    /// Reading of the undefined middle coefficient in the last odd family.
    #[arg(long, global = true)]
    pub middle_term: Option<MiddleTerm>,
    /// Table format for `pp enumerate` and `gnq` output.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            fields: self.fields.clone(),
            size_bound: self.size_bound,
            coeff_bound: self.coeff_bound,
            results_dir: self.results_dir.clone(),
            format: self.format,
            threads: self.threads,
            middle_term: self.middle_term,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field construction details.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Trinomials a x + b x^q + c x^(2q-1).
    Pp {
        #[command(subcommand)]
        cmd: PpCmd,
    },
    /// The polynomials g_{n,q}.
    Gnq {
        #[command(subcommand)]
        cmd: GnqCmd,
    },
    /// Exhaustive consistency checks.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
}

impl FieldArgs {
    pub fn spec(self) -> Result<FieldSpec, String> {
        FieldSpec::new(self.p, self.m)
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct OptionalFieldArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
}

impl OptionalFieldArgs {
    pub fn spec(self) -> Result<Option<FieldSpec>, String> {
        match (self.p, self.m) {
            (Some(p), m) => FieldSpec::new(p, m.unwrap_or(1)).map(Some),
            (None, None) => Ok(None),
            (None, Some(_)) => Err("--m needs --p".into()),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum FieldCmd {
    /// Modulus, generator and quadratic extension of F_{p^m}.
    Info(FieldArgs),
}

#[derive(Debug, Subcommand)]
pub enum PpCmd {
    /// Decide one trinomial by brute force and by the criterion.
    Check {
        #[command(flatten)]
        field: FieldArgs,
        /// Encoding of the coefficient of x.
        #[arg(long)]
        a: u64,
        /// Encoding of the coefficient of x^q.
        #[arg(long)]
        b: u64,
        /// Encoding of the coefficient of x^(2q-1).
        #[arg(long, default_value_t = 1)]
        c: u64,
    },
    /// The normalized triples [a:b:c] giving permutations, sorted.
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum GnqCmd {
    /// Coefficients of g_{n,q} over F_p, constant term first.
    Coeffs {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u64,
    },
    /// Desirability of n = q^alpha - q^beta - 1 for all 0 <= beta < alpha <= alpha-max.
    Desirable {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        alpha_max: Option<u32>,
        /// Permutation is tested over F_{q^e}.
        #[arg(long, default_value_t = 2)]
        e: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Binomial-sum closed forms.
    Lemmas {
        #[command(flatten)]
        field: OptionalFieldArgs,
    },
    /// Power sums of trinomials.
    Hermite {
        #[command(flatten)]
        field: OptionalFieldArgs,
        /// Sweep every a != 0, b and exponent, not just closed-form cases.
        #[arg(long)]
        all_ab: bool,
    },
    /// Polynomial identities behind the classification.
    Identities,
    /// Every suite.
    All {
        /// Skip the large odd fields in the trinomial sweep.
        #[arg(long)]
        small: bool,
    },
}
