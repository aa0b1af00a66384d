//! Command-line surface for `sedosc`: oracle queries, classical versus
//! quantum comparison tables, the algebra identity suite, Langevin runs,
//! direct sampling and temperature sweeps.
//!
//! Exit codes: 0 success, 1 identity failure, 2 usage or configuration
//! error, 3 statistical acceptance failure. `SEDOSC_THREADS` sets the worker
//! count; results never depend on it.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod error;
pub mod output;
pub mod settings;

pub use error::{CliError, Result};
use settings::Settings;

/// Environment variable overriding the default worker count.
pub const THREADS_ENV: &str = "SEDOSC_THREADS";

/// `|z|` above which `simulate` and `sample` report a statistical failure.
pub const Z_FAIL: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    IdentityFailure,
    StatisticalFailure,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::IdentityFailure => 1,
            Status::StatisticalFailure => 3,
        }
    }
}

pub const USAGE_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "sedosc", version, about = "Classical oscillator in zero-point radiation versus the quantum oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one closed-form expectation value.
    Oracle(OracleArgs),
    /// Classical and quantum ⟨H⟩, ⟨H²⟩, ⟨L²⟩ side by side.
    Compare(CompareArgs),
    /// Run the exact bracket and commutator identity suite.
    Algebra(AlgebraArgs),
    /// Integrate the Langevin dynamics and compare with equilibrium.
    Simulate(SimulateArgs),
    /// Sample the equilibrium phase-space density directly.
    Sample(SampleArgs),
    /// Tabulate an oracle over a temperature grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// csv, json or text.
    #[arg(long)]
    pub format: Option<String>,
    /// Write the main result here instead of standard output.
    #[arg(long)]
    pub output: Option<String>,
}

impl Common {
    fn entries(&self) -> Vec<(&'static str, Option<String>)> {
        vec![("format", self.format.clone()), ("output", self.output.clone())]
    }
}

#[derive(Debug, Args)]
pub struct Physics {
    #[arg(long)]
    pub mass: Option<String>,
    #[arg(long)]
    pub omega0: Option<String>,
    #[arg(long)]
    pub hbar: Option<String>,
    #[arg(long)]
    pub kb: Option<String>,
    /// Radiation damping time.
    #[arg(long)]
    pub tau: Option<String>,
    /// Temperature.
    #[arg(long = "T", visible_alias = "temperature", allow_negative_numbers = true)]
    pub temperature: Option<String>,
}

impl Physics {
    fn entries(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("mass", self.mass.clone()),
            ("omega0", self.omega0.clone()),
            ("hbar", self.hbar.clone()),
            ("kb", self.kb.clone()),
            ("tau", self.tau.clone()),
            ("T", self.temperature.clone()),
        ]
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// H, H2, L2, Lx2/Ly2/Lz2, x<n>, p<n>, Z, coth, E, EP, P (phase density)
    /// or rho0 (ground-state position density).
    #[arg(long)]
    pub quantity: Option<String>,
    /// classical or quantum.
    #[arg(long)]
    pub side: Option<String>,
    #[arg(long)]
    pub dims: Option<String>,
    /// Mode frequency for E and EP (default ω₀).
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<String>,
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Comma-separated temperatures.
    #[arg(long)]
    pub temps: Option<String>,
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    /// Comma-separated groups (poisson, commutator, dirac, ladder) or all.
    #[arg(long)]
    pub check: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub dt: Option<String>,
    /// Total steps including burn-in.
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long = "burn-in")]
    pub burn_in: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub dims: Option<String>,
    /// exact_gaussian or euler_maruyama.
    #[arg(long)]
    pub integrator: Option<String>,
    /// white or colored.
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long)]
    pub stride: Option<String>,
    /// Trajectory file; `.bin` selects the binary layout, anything else CSV.
    #[arg(long)]
    pub trajectory: Option<String>,
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Parallel chunks; the result does not depend on it.
    #[arg(long)]
    pub chunks: Option<String>,
    /// Also write the drawn points as CSV.
    #[arg(long)]
    pub samples: Option<String>,
    /// Run the energy-law KS test (true/false).
    #[arg(long)]
    pub law: Option<String>,
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub quantity: Option<String>,
    #[arg(long)]
    pub side: Option<String>,
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<String>,
    #[arg(long)]
    pub points: Option<String>,
    /// lin or log.
    #[arg(long)]
    pub spacing: Option<String>,
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    /// Every accepted key with its flag value.
    fn entries(&self) -> Vec<(&'static str, Option<String>)> {
        let mut e = match self {
            Command::Oracle(a) => {
                let mut v = vec![
                    ("quantity", a.quantity.clone()),
                    ("side", a.side.clone()),
                    ("dims", a.dims.clone()),
                    ("omega", a.omega.clone()),
                    ("x", a.x.clone()),
                    ("p", a.p.clone()),
                ];
                v.extend(a.physics.entries());
                v
            }
            Command::Compare(a) => {
                let mut v = vec![("temps", a.temps.clone())];
                v.extend(a.physics.entries());
                v
            }
            Command::Algebra(a) => vec![("check", a.check.clone())],
            Command::Simulate(a) => {
                let mut v = vec![
                    ("dt", a.dt.clone()),
                    ("steps", a.steps.clone()),
                    ("burn_in", a.burn_in.clone()),
                    ("seed", a.seed.clone()),
                    ("dims", a.dims.clone()),
                    ("integrator", a.integrator.clone()),
                    ("noise", a.noise.clone()),
                    ("stride", a.stride.clone()),
                    ("trajectory", a.trajectory.clone()),
                ];
                v.extend(a.physics.entries());
                v
            }
            Command::Sample(a) => {
                let mut v = vec![
                    ("dims", a.dims.clone()),
                    ("n", a.n.clone()),
                    ("seed", a.seed.clone()),
                    ("chunks", a.chunks.clone()),
                    ("samples", a.samples.clone()),
                    ("law", a.law.clone()),
                ];
                v.extend(a.physics.entries());
                v
            }
            Command::Sweep(a) => {
                let mut v = vec![
                    ("quantity", a.quantity.clone()),
                    ("side", a.side.clone()),
                    ("dims", a.dims.clone()),
                    ("omega", a.omega.clone()),
                    ("from", a.from.clone()),
                    ("to", a.to.clone()),
                    ("points", a.points.clone()),
                    ("spacing", a.spacing.clone()),
                ];
                v.extend(a.physics.entries());
                v
            }
        };
        e.extend(self.common().entries());
        e
    }

    fn common(&self) -> &Common {
        match self {
            Command::Oracle(a) => &a.common,
            Command::Compare(a) => &a.common,
            Command::Algebra(a) => &a.common,
            Command::Simulate(a) => &a.common,
            Command::Sample(a) => &a.common,
            Command::Sweep(a) => &a.common,
        }
    }

    /// Resolves settings and runs the command.
    pub fn execute(&self, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Status> {
        let settings = Settings::resolve(self.common().config.as_deref(), self.entries())?;
        match self {
            Command::Oracle(_) => commands::oracle::run(&settings, stdout),
            Command::Compare(_) => commands::compare::run(&settings, stdout),
            Command::Algebra(_) => commands::algebra::run(&settings, stdout, stderr),
            Command::Simulate(_) => commands::simulate::run(&settings, stdout, stderr),
            Command::Sample(_) => commands::sample::run(&settings, stdout, stderr),
            Command::Sweep(_) => commands::sweep::run(&settings, stdout),
        }
    }
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{e}");
            return if code == 0 { 0 } else { USAGE_ERROR };
        }
    };
    // Commands write into buffers so they can run inside a worker pool.
    let mut out = Vec::new();
    let mut err = Vec::new();
    let outcome = thread_count().and_then(|threads| match threads {
        None => cli.command.execute(&mut out, &mut err),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::usage(format!("cannot start {n} worker threads: {e}")))?;
            pool.install(|| cli.command.execute(&mut out, &mut err))
        }
    });
    let _ = stdout.write_all(&out);
    let _ = stderr.write_all(&err);
    match outcome {
        Ok(status) => status.code(),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            USAGE_ERROR
        }
    }
}
