use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Explicit neural-network solutions of PDEs with Barron-norm certificates.
///
/// Space-time networks (heat with --spacetime, hj) take `(x, √t)` as input,
/// with `√t` the last coordinate.
#[derive(Debug, Parser)]
#[command(name = "barron-pde", version, args_override_self = true)]
pub struct Cli {
    /// Worker threads (default: BARRON_PDE_THREADS, else all cores).
    /// Results do not depend on this value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a network solution from network data.
    #[command(subcommand)]
    Solve(Solve),
    /// Finite-difference residual of a network against a PDE operator.
    Verify(VerifyArgs),
    /// Subsampling error against width m.
    Rates(RatesArgs),
    /// Counterexample experiments.
    #[command(subcommand)]
    Counterexample(Counterexample),
    /// Print the path-norm certificate of a network file.
    Norm(NormArgs),
}

#[derive(Debug, Subcommand)]
pub enum Solve {
    /// −Δu + λ²u = f.
    ScreenedPoisson(ScreenedArgs),
    /// −Δu = f for activation-pair data (softplus → its antiderivative pair).
    PoissonPair(PairArgs),
    /// u_t − Δu = f, u(0) = u0.
    Heat(HeatArgs),
    /// u_t − Δu + |∇u|² = 0 via Cole–Hopf.
    Hj(HjArgs),
}

#[derive(Debug, Args)]
pub struct ScreenedArgs {
    #[arg(long)]
    pub lambda: f64,
    /// Right-hand side network.
    #[arg(long)]
    pub rhs: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Quadrature/profile nodes per atom.
    #[arg(long, default_value_t = 4096)]
    pub n_quad: usize,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub rhs: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HeatArgs {
    #[arg(long)]
    pub u0: PathBuf,
    /// Source network over (t, x), time first.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Evaluation time (required unless --spacetime).
    #[arg(long)]
    pub t: Option<f64>,
    /// Emit the homogeneous solution as one network of (x, √t).
    #[arg(long)]
    pub spacetime: bool,
    /// Gauss–Hermite nodes for smooth activations.
    #[arg(long, default_value_t = 40)]
    pub hermite: usize,
    /// Adapted Gaussian nodes for relu data.
    #[arg(long, default_value_t = 1024)]
    pub relu_nodes: usize,
    /// Gauss–Legendre nodes in time for the Duhamel integral.
    #[arg(long, default_value_t = 32)]
    pub timenodes: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HjArgs {
    #[arg(long)]
    pub u0: PathBuf,
    /// Evaluation radius in x.
    #[arg(long, default_value_t = 3.0)]
    pub radius: f64,
    /// Largest evaluation time.
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    /// Monte Carlo samples N.
    #[arg(long, default_value_t = 4096)]
    pub mc: usize,
    #[arg(long, default_value_t = 256)]
    pub exp_atoms: usize,
    #[arg(long, default_value_t = 256)]
    pub log_atoms: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpKind {
    Screened,
    /// `-Δu = f`
    Poisson,
    Heat,
    Hj,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long, value_enum)]
    pub op: OpKind,
    /// Required for --op screened.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// `lo:hi[,lo:hi...];h[;cell]`. For heat and hj the first axis is t.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    /// Right-hand side network (screened: f(x); heat: f(t, x)).
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Read the rhs atoms as `a σ''(wᵀx + b)`, the convention of `solve poisson-pair`.
    #[arg(long, requires = "rhs")]
    pub rhs_second: bool,
    /// Fail with exit code 1 when the residual exceeds this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    L2,
    Linf,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[arg(long)]
    pub net: PathBuf,
    /// Comma-separated increasing widths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    /// Number of subsampling seeds.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    /// First seed; seeds are seed, seed+1, ...
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample points of the uniform measure on [-R, R]^d.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = NormKind::L2)]
    pub norm: NormKind,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Counterexample {
    /// Harmonic extension of σ(y₁) on B^d against a Barron control target.
    Ball(BallArgs),
    /// r^{kπ/θ} sin(kπ/θ φ) on a sector of angle θ.
    Corner(CornerArgs),
    /// −max{0,x₁}³/6, a cubically growing Poisson solution.
    Growth(GrowthArgs),
    /// The U-shaped domain function.
    Ushape(UshapeArgs),
}

#[derive(Debug, Args)]
pub struct BallArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [16, 32, 64, 128, 256, 512])]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub ridge: f64,
    #[arg(long, default_value_t = 0.05)]
    pub control_t: f64,
    /// Grid step of the reduced axisymmetric solver.
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CornerArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 4.712388980384690)]
    pub theta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0])]
    pub radii: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UshapeArgs {
    /// Point `x,y`.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub probe: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub net: PathBuf,
}
