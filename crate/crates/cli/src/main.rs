//! `trigonal`: command-line front end for the trigonal-curve engine.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use trigonal_core::Error;

#[derive(Parser, Debug)]
#[command(name = "trigonal", version, about = "Abelian functions on cyclic trigonal curves")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Directory holding the per-curve formula packs.
    #[arg(long, env = "TRIGONAL_DATA_DIR", global = true)]
    pub data_dir: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    /// Working precision in decimal digits for numeric root finding.
    #[arg(long, default_value_t = 50, global = true)]
    pub precision: u32,
    /// Terms kept past the leading term in ξ-expansions.
    #[arg(long, default_value_t = 12, global = true)]
    pub order: i32,
}

/// A curve given as `3,7` (positional or `--curve`) or as `--n 3 --s 7`.
#[derive(Args, Debug, Clone)]
pub struct CurveArg {
    /// Curve as "n,s".
    #[arg(value_name = "CURVE")]
    pub positional: Option<String>,
    #[arg(long = "curve", value_name = "N,S")]
    pub curve: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,
}

impl CurveArg {
    /// The requested curve; `(3,7)` when none is given.
    pub fn resolve(&self) -> trigonal_core::Result<(u32, u32)> {
        let text = match (&self.positional, &self.curve) {
            (Some(_), Some(_)) => return Err(Error::usage("give the curve once")),
            (Some(t), None) | (None, Some(t)) => Some(t),
            (None, None) => None,
        };
        match (text, self.n, self.s) {
            (Some(t), None, None) => trigonal_core::curve::parse_curve_id(t),
            (None, Some(n), Some(s)) => Ok((n, s)),
            (None, None, None) => Ok((3, 7)),
            (None, _, _) => Err(Error::usage("--n and --s must be given together")),
            (Some(_), _, _) => Err(Error::usage("give either a curve id or --n/--s, not both")),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weierstrass gap sequence of the (n,s) semigroup.
    Gaps(CurveOnly),
    /// Sato weights of u, λ and σ.
    Weights(CurveOnly),
    /// Generate the Schur–Weierstrass polynomial and compare it with the shipped one.
    Sw(SwArgs),
    /// Local expansions of x, y and u_i at infinity.
    Expansions(CurveOnly),
    /// Generate ρ polynomials from the Kleinian formula.
    Rho(RhoArgs),
    /// Eliminate w between two ρ's, or reproduce the shipped resultant table.
    Resultant(ResultantArgs),
    /// Reduce ρ_{1,k} modulo ρ_{1,2} and check the resulting relations.
    Reduce(ReduceArgs),
    /// Numeric Jacobi inversion at seeded points.
    Invert(InvertArgs),
    /// Evaluate a relation suite at seeded points with λ = 0.
    Verify(VerifyArgs),
    /// Compare operator-defined Q values with their ℘ expansions.
    Hirota(PointsArgs),
    /// Recover the Boussinesq constant from Q_gggg and ℘_{g-1,g-1}.
    Boussinesq(PointsArgs),
    /// Check the two-point addition formula at seeded pairs.
    Addition(PointsArgs),
    /// Monomials that may appear in the σ-expansion at a given weight.
    Candidates(CandidateArgs),
    /// Rank of the basis functions evaluated at seeded points.
    Rank(PointsArgs),
    /// Parse, checksum and check homogeneity and parity of every shipped pack.
    ValidateData(ValidateArgs),
    /// Run the default end-to-end suite.
    All(AllArgs),
}

#[derive(Args, Debug)]
pub struct CurveOnly {
    #[command(flatten)]
    pub curve: CurveArg,
}

#[derive(Args, Debug)]
pub struct SwArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    /// Print the full polynomial in text mode.
    #[arg(long)]
    pub show: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Cleared,
    Quotient,
}

#[derive(Args, Debug)]
pub struct RhoArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    /// Number of ρ's to generate.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    /// Sign of the offset in the Taylor expansion of ℘_ij.
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    /// Expand the cleared or the quotient form of the Kleinian formula.
    #[arg(long, value_enum, default_value_t = FormArg::Cleared)]
    pub form: FormArg,
}

#[derive(Args, Debug)]
pub struct ResultantArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    /// First ρ index.
    #[arg(long, requires = "j")]
    pub i: Option<usize>,
    /// Second ρ index.
    #[arg(long, requires = "i")]
    pub j: Option<usize>,
    /// Allow entries with i > 2.
    #[arg(long)]
    pub deep: bool,
    /// Print the eliminated polynomial in text mode.
    #[arg(long)]
    pub show: bool,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    /// Reduce ρ_{1,k}.
    #[arg(long, default_value_t = 4)]
    pub target: usize,
    #[arg(long, default_value_t = 5)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct InvertArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    #[arg(long, default_value_t = 5)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    /// Suite or data group; `all` covers every shipped relation list.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 5)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct PointsArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    /// Number of sample points; each command has its own default.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CandidateArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    /// Sato weight of the coefficient.
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Curve as "n,s"; every pack in the data directory when omitted.
    #[arg(long = "curve", value_name = "N,S")]
    pub curve: Option<String>,
}

#[derive(Args, Debug)]
pub struct AllArgs {
    /// Include the resultant entries with i > 2.
    #[arg(long)]
    pub deep: bool,
}

/// Result of one subcommand.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub passed: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::Io { .. } => 2,
        Error::Numeric { .. } | Error::Divisor(_) | Error::Internal(_) => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = cli.config.format;
    match commands::run(&cli.config, &cli.command) {
        Ok(out) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable report") + "\n",
                Format::Text => out.text,
            };
            // A closed pipe (e.g. `| head`) is not an error of the run.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("trigonal: {e}");
            if let Error::Numeric { residuals, .. } = &e {
                if !residuals.is_empty() {
                    eprintln!("residuals: {}", residuals.join(", "));
                }
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
