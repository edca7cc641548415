use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "chebotarev-lab",
    version,
    about = "Artin coefficients, large-sieve integrals, smooth weights, zero-free-region optimization and Chebotarev counts"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Field catalog file; the built-in catalog is used when absent
    #[arg(long, env = "CHEBOTAREV_CATALOG", global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Output format (csv or json); each subcommand has its own default
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Output file, `-` for standard output
    #[arg(long, default_value = "-", global = true, value_name = "PATH")]
    pub output: String,
    /// Seed for randomized inputs and self-test sampling
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker thread cap
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Run the subcommand's oracle comparisons and emit a JSON report
    #[arg(long, global = true)]
    pub selftest: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients a_K(n) of ζ_K/ζ, or a_{K×K'}(n) with --pair
    Coeffs(CoeffsArgs),
    /// Factorization types and Frobenius classes of primes
    Splitting(SplittingArgs),
    /// Large-sieve and mean-value left sides against their bound shapes
    LargeSieve(LargeSieveArgs),
    /// The smooth weight f and its Laplace transform F on grids
    Weights(WeightsArgs),
    /// η(x) profiles from zero-free-region data
    Eta(EtaArgs),
    /// Exact Chebotarev counts with error reports
    Chebotarev(ChebotarevArgs),
    /// Averaged Chebotarev error over a family of fields
    Family(FamilyArgs),
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    /// Catalog field name
    #[arg(long)]
    pub field: Option<String>,
    /// Largest n
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    /// Second field; emits a_{K×K'}(n)
    #[arg(long)]
    pub pair: Option<String>,
}

#[derive(Args, Debug)]
pub struct SplittingArgs {
    #[arg(long)]
    pub field: Option<String>,
    /// Primes p ≤ x
    #[arg(long, default_value_t = 100)]
    pub x: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SieveMode {
    /// Σ_K |Σ_{x < n ≤ xe^{1/T}} a_K(n) b(n)|²
    Window,
    /// Σ_K ∫_{−T}^{T} |Σ_{y < p ≤ u} a_K(p) log p / p^{1+it}|² dt
    Primes,
    /// Zero-count shape only
    ZeroDensity,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Ones,
    /// Unit-modulus phases drawn from --seed
    Random,
}

#[derive(Args, Debug)]
pub struct LargeSieveArgs {
    /// Comma-separated catalog field names
    #[arg(long, value_delimiter = ',')]
    pub fields: Vec<String>,
    /// Use every catalog field with this group label
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, value_enum, default_value_t = SieveMode::Window)]
    pub mode: SieveMode,
    #[arg(long, default_value_t = 1000.0)]
    pub x: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t: f64,
    /// Discriminant bound Q (defaults to the largest |D_K| in the family)
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub y: u64,
    #[arg(long, default_value_t = 1000)]
    pub u: u64,
    #[arg(long, default_value_t = 0.75)]
    pub sigma: f64,
    /// Intersection multiplicity override
    #[arg(long)]
    pub multiplicity: Option<usize>,
    #[arg(long, value_enum, default_value_t = Coefficients::Ones)]
    pub b: Coefficients,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    /// f(t) across its support
    F,
    /// F(z) for z = re + i·(--z-im), re ∈ [−z-max, z-max]
    Laplace,
    /// |F(−s log x)| bound for s = σ + it
    BoundIv,
    /// |F(−s log x)| bound for s = −1/2 + it
    BoundV,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[arg(long, default_value_t = 1e4)]
    pub x: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = Grid::F)]
    pub grid: Grid,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long, default_value_t = 50.0)]
    pub z_max: f64,
    #[arg(long, default_value_t = 0.0)]
    pub z_im: f64,
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_max: f64,
}

#[derive(Args, Debug)]
pub struct EtaArgs {
    /// Take log D and degree from a catalog field
    #[arg(long)]
    pub field: Option<String>,
    /// Natural log of the discriminant (without --field)
    #[arg(long)]
    pub log_d: Option<f64>,
    /// Degree n = [K:Q] (without --field)
    #[arg(long)]
    pub degree: Option<usize>,
    /// Use the large zero-free region of a family with bound Q
    #[arg(long)]
    pub large: bool,
    /// Natural log of Q for --large (defaults to log D)
    #[arg(long)]
    pub log_q: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Width δ of the large region (defaults to ε/(10⁹m³))
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = chebotarev_core::zfr::DEFAULT_C1)]
    pub c1: f64,
    #[arg(long, default_value_t = chebotarev_core::zfr::DEFAULT_C_EPS)]
    pub c_eps: f64,
    /// Smallest log x
    #[arg(long, default_value_t = 10.0)]
    pub log_x_min: f64,
    /// Largest log x
    #[arg(long, default_value_t = 100.0)]
    pub log_x_max: f64,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = chebotarev_core::zfr::DEFAULT_RESOLUTION)]
    pub resolution: usize,
}

#[derive(Args, Debug)]
pub struct ChebotarevArgs {
    #[arg(long)]
    pub field: Option<String>,
    /// Class label (1 is the identity) or `type:a,b,…`; all targets when absent
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long, default_value_t = 1e5)]
    pub x: f64,
    /// Also compute the smoothed count ψ̃ with this weight ε
    #[arg(long)]
    pub weights_eps: Option<f64>,
    /// Report format (same as --format)
    #[arg(long, value_enum)]
    pub report: Option<Format>,
    #[arg(long, default_value_t = chebotarev_core::zfr::DEFAULT_C1)]
    pub c1: f64,
    #[arg(long, default_value_t = chebotarev_core::zfr::DEFAULT_C_EPS)]
    pub c_eps: f64,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// Use every catalog field with this group label
    #[arg(long)]
    pub group: Option<String>,
    /// Comma-separated catalog field names
    #[arg(long, value_delimiter = ',')]
    pub fields: Vec<String>,
    /// Use the quadratic fields with fundamental discriminant |D| ≤ N
    #[arg(long, value_name = "N")]
    pub quadratic_limit: Option<u64>,
    /// Discriminant bound Q (integer; defaults to the largest |D_K|)
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long, default_value_t = 1e5)]
    pub x: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Exponent A in the shape x/(log x)^A
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Exceptional-field threshold, in units of x/(log x)^A
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
}
