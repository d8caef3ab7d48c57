//! `icb`: command-line front end for the irregular conformal block solvers.

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "icb", version, about = "Irregular and ramified conformal blocks, tau functions and checks")]
pub struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run inner loops sequentially.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Unramified rank-r vertex operator from Λ, β_r, Δ, ρ.
    SolveRankR(RankRArgs),
    /// Ramified vertex operator on the half grid (or the integer grid).
    SolveRamified(RamifiedArgs),
    /// Singular-vector conditions at Δ = Δ_{p,q}, c = 13 − 6(t + 1/t).
    SingularSolve(SingularArgs),
    /// Block ⟨Δ'|Φ(z)|Λ⟩ from a ramified solution file.
    Block(BlockArgs),
    /// Painlevé III₃ tau function at one point.
    TauP3(TauP3Args),
    /// Painlevé II tau function at one point.
    TauP2(TauP2Args),
    /// σ-form residuals along a list of points.
    CheckOde(CheckOdeArgs),
    /// Printed-value regression suites.
    Fixtures(FixturesArgs),
    /// Degenerate singular vector χ_{p,q}.
    SingularVector(SingularVectorArgs),
}

#[derive(Args, Debug)]
pub struct RankRArgs {
    #[arg(long)]
    pub r: u32,
    /// λ_0,…,λ_r, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_r: String,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: String,
    #[arg(long)]
    pub order: u32,
    /// Parameters assumed nonzero (λ_r is included when it is a bare name).
    #[arg(long, default_value = "")]
    pub invertible: String,
}

#[derive(Args, Debug)]
pub struct RamifiedArgs {
    #[arg(long)]
    pub r: u32,
    /// Λ_r,…,Λ_{2r}, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_vec: String,
    #[arg(long, allow_hyphen_values = true, default_value = "D")]
    pub delta: String,
    #[arg(long, allow_hyphen_values = true, default_value = "c")]
    pub c: String,
    /// β_1,…,β_{2r−1}; `?` leaves an entry to be solved.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// symbolic, preset:ex36, preset:ex38 or file:PATH (JSON array of expressions).
    #[arg(long, default_value = "symbolic")]
    pub c0_mode: String,
    #[arg(long)]
    pub order: u32,
    /// Fixes α instead of solving for it.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, value_enum, default_value_t = GridArg::Half)]
    pub grid: GridArg,
    #[arg(long, default_value_t = 0)]
    pub slack: u32,
    #[arg(long, default_value = "")]
    pub invertible: String,
    /// Extra parameter names to carry (for a later Δ' in `block`).
    #[arg(long, default_value = "")]
    pub params: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Half,
    Integer,
}

#[derive(Args, Debug)]
pub struct SingularArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub q: u32,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub t: String,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Half-order of the ansatz; defaults to 2pq + 2r.
    #[arg(long)]
    pub order: Option<u32>,
}

#[derive(Args, Debug)]
pub struct BlockArgs {
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub delta_prime: String,
    /// Replaces the exponent α of the prefactor.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct TauCommon {
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Fourier range −N ≤ n ≤ N.
    #[arg(long = "N", default_value_t = 3)]
    pub n_max: u32,
    /// Block half-order.
    #[arg(long = "M")]
    pub order: Option<u32>,
    /// Working precision in bits (≥ 64); ICB_PRECISION otherwise, else 128.
    #[arg(long)]
    pub prec: Option<u32>,
    #[arg(long, default_value = "printed")]
    pub mode_factor: String,
}

#[derive(Args, Debug)]
pub struct TauP3Args {
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[command(flatten)]
    pub common: TauCommon,
}

#[derive(Args, Debug)]
pub struct TauP2Args {
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value_t = 0)]
    pub branch_k: u32,
    #[command(flatten)]
    pub common: TauCommon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Equation {
    P3,
    P2,
}

#[derive(Args, Debug)]
pub struct CheckOdeArgs {
    #[arg(value_enum)]
    pub equation: Equation,
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub branch_k: u32,
    /// Points, comma separated; complex values as `a+bi`.
    #[arg(long, allow_hyphen_values = true)]
    pub t_list: String,
    #[command(flatten)]
    pub common: TauCommon,
}

#[derive(Args, Debug)]
pub struct FixturesArgs {
    #[command(subcommand)]
    pub action: FixturesAction,
}

#[derive(Subcommand, Debug)]
pub enum FixturesAction {
    Run {
        #[arg(long, default_value = "paper")]
        suite: String,
    },
}

#[derive(Args, Debug)]
pub struct SingularVectorArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub q: u32,
    #[arg(long, allow_hyphen_values = true, default_value = "t")]
    pub t: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("icb: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
