//! Argument definitions.

use crate::report::DEFAULT_BUDGET;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "modphi",
    version,
    about = "Precise deviation estimates under mod-phi convergence, with exact and simulated oracles"
)]
pub struct Cli {
    /// Cap on sampled elementary events for Monte Carlo subcommands.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: f64,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Legendre transform F, saddle h and F'' of a reference law.
    Legendre(LegendreArgs),
    /// Evaluate a limiting function at a complex point.
    Psi(PsiArgs),
    /// Deviation estimate for a model described in a TOML file.
    Deviate(DeviateArgs),
    /// Angle histogram of a planar walk conditioned on a large modulus (CSV).
    Walk2d(WalkArgs),
    /// Conic-sector estimate for a multi-dimensional mod-Gaussian model.
    Conic(ConicArgs),
    /// Exact combinatorics: cumulants, graph functionals, bounds.
    #[command(subcommand)]
    Combi(CombiCmd),
    /// Concrete models with exact or simulated oracles.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Subgraph counts in Erdős–Rényi graphs.
    #[command(subcommand)]
    Er(ErCmd),
    /// Central measures and character values of the infinite symmetric group.
    #[command(subcommand)]
    Thoma(ThomaCmd),
    /// Run acceptance criteria.
    Suite(SuiteArgs),
}

/// JSON is the only structured format for these subcommands; the flag is accepted for symmetry.
#[derive(Debug, Args, Clone, Copy)]
pub struct JsonFlag {
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum LawName {
    Gaussian,
    Poisson,
    Bernoulli,
    Exponential,
    Custom,
}

#[derive(Debug, Args)]
pub struct LegendreArgs {
    #[arg(long, value_enum)]
    pub law: LawName,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mean: f64,
    #[arg(long, default_value_t = 1.0)]
    pub var: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    /// Custom law file (TOML with `eta`, `strip`, `lattice_span`).
    #[arg(long, required_if_eq("law", "custom"))]
    pub spec: Option<PathBuf>,
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub fmt: JsonFlag,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum PsiName {
    Constant,
    ExpMonomial,
    InvGammaExp,
    GammaRatio,
    BarnesSymplectic,
    BarnesEvenOrthogonal,
    BarnesUnitaryReal,
    WeierstrassPrimes,
    WeierstrassIntegers,
    PoissonBernoulli,
}

#[derive(Debug, Args)]
pub struct PsiArgs {
    #[arg(long, value_enum)]
    pub kind: PsiName,
    /// Coefficient of the exponential monomial.
    #[arg(long, allow_negative_numbers = true)]
    pub l: Option<f64>,
    /// Degree of the exponential monomial.
    #[arg(long)]
    pub v: Option<u32>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Truncation K of a Weierstrass product.
    #[arg(long)]
    pub k: Option<usize>,
    /// Bernoulli parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    /// Real part and optional imaginary part.
    #[arg(long, num_args = 1..=2, required = true, allow_negative_numbers = true)]
    pub z: Vec<f64>,
    #[command(flatten)]
    pub fmt: JsonFlag,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum DeviateKind {
    Point,
    Tail,
    Crossover,
    Cumulant,
    Borel,
}

#[derive(Debug, Args)]
pub struct DeviateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub kind: DeviateKind,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[arg(long = "T", alias = "t", allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Expansion order of the point-mass estimate (0 or 1).
    #[arg(long, default_value_t = 0)]
    pub order: u8,
    /// Closed interval a,b of the set B (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Vec<String>,
    #[command(flatten)]
    pub fmt: JsonFlag,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, required = true)]
    pub seed: u64,
    #[arg(long, default_value_t = 36)]
    pub bins: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConicArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: f64,
    #[arg(long)]
    pub b: f64,
    #[command(flatten)]
    pub fmt: JsonFlag,
}

#[derive(Debug, Args)]
pub struct EdgeArgs {
    /// Edge list such as "1-2,2-3,1-3", vertices numbered from 1.
    #[arg(long)]
    pub edges: String,
    /// Number of vertices if larger than the largest label.
    #[arg(long)]
    pub vertices: Option<usize>,
    #[command(flatten)]
    pub fmt: JsonFlag,
}

#[derive(Debug, Subcommand)]
pub enum CombiCmd {
    /// Convert power moments to cumulants or back, exactly.
    Mobius {
        #[arg(long, conflicts_with = "cumulants", required_unless_present = "cumulants")]
        moments: Option<String>,
        #[arg(long)]
        cumulants: Option<String>,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Exact cumulants of the sum of a dependency family.
    Cumulant {
        /// window:N:W:P or clique:G1+G2+...:P
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Signed count of connected spanning subgraphs.
    Fh(EdgeArgs),
    /// Spanning-tree count.
    St(EdgeArgs),
    /// Bicoloured pseudo-tree identity.
    Identity(EdgeArgs),
    /// Dependency-graph cumulant bound against exact cumulants.
    Bound {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 6)]
        r: usize,
        #[command(flatten)]
        fmt: JsonFlag,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum IidName {
    Bernoulli,
    Exponential,
}

#[derive(Debug, Subcommand)]
pub enum ModelCmd {
    /// Number of cycles of a uniform permutation.
    Cycles {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 0)]
        order: u8,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Sums of i.i.d. variables.
    Bahadur {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = IidName::Bernoulli)]
        law: IidName,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Magnetization of the one-dimensional Ising chain at T = x n^{3/4}.
    Ising {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Zeros of a random hyperbolic analytic function in a disc.
    Zeros {
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 100_000)]
        draws: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Cycle counts of weighted permutations with constant weight θ.
    Wperm {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Number of distinct prime divisors up to N.
    Omega {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        /// Use the constant as printed rather than the corrected one.
        #[arg(long)]
        literal: bool,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Sum of independent Bernoulli variables against a Poisson reference.
    Pb {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        fmt: JsonFlag,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum PatternName {
    Edge,
    Triangle,
    Path3,
    Custom,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    #[arg(long, value_enum, default_value_t = PatternName::Triangle)]
    pub pattern: PatternName,
    /// Edge list of a custom pattern.
    #[arg(long, required_if_eq("pattern", "custom"))]
    pub edges: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum ErCmd {
    /// Count copies of the pattern in one sampled graph.
    Count {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, required = true)]
        seed: u64,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Exact cumulants, optionally against Monte Carlo estimates.
    Cumulants {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        n: usize,
        /// Rational or decimal edge probability.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Limiting constants σ² and L.
    Sigma {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        p: String,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Triangle-count tail estimate, optionally against simulation.
    Deviate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        v: f64,
        /// Use the exact Gaussian tail instead of its Mills-ratio approximation.
        #[arg(long)]
        uniform: bool,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Exact interpolation of κ^(r) as a polynomial in n.
    Poly {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[command(flatten)]
        fmt: JsonFlag,
    },
}

#[derive(Debug, Args)]
pub struct ThomaArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum ThomaCmd {
    /// Central measure on partitions of n.
    Measure {
        #[command(flatten)]
        omega: ThomaArgs,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Exact cumulants of the normalized character on a cycle type.
    Cumulants {
        #[command(flatten)]
        omega: ThomaArgs,
        /// Cycle length (ignored when --rho is given).
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Cycle type, comma separated.
        #[arg(long, value_delimiter = ',')]
        rho: Vec<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[command(flatten)]
        fmt: JsonFlag,
    },
    /// Limits of n·κ² and n²·κ³.
    Limits {
        #[command(flatten)]
        omega: ThomaArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// General cycle type μ, comma separated.
        #[arg(long, value_delimiter = ',')]
        mu: Vec<usize>,
        #[command(flatten)]
        fmt: JsonFlag,
    },
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// all, deviations, combinatorics, models, er, walk or characters.
    #[arg(default_value = "all")]
    pub name: String,
    /// Reduced Monte Carlo sizes with widened tolerances.
    #[arg(long)]
    pub fast: bool,
    /// Also write a JSON report to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
}
