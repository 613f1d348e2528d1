//! Command-line driver: one subcommand per experiment, CSV on the way out
//! and a gnuplot script next to every file-based CSV.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error as ThisError;

use crate::analysis::{
    brute_force_k, classify_visiting, critical_h_bisection, default_max_n, jump_start, kstar_pitchfork_euler,
    kstar_rk_for, kstar_transcritical_euler, sweep_surface, wayout, BisectionConfig, JumpClass, SweepMode,
    TripletSource,
};
use crate::error::Error;
use crate::precision::{PrecisionContext, Scalar};
use crate::schemes::{ButcherTableau, Scheme, Stepper, SURFACE_SET};
use crate::systems::{PlanarPoint, SingularityKind, SystemParams};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_POLE: i32 = 3;
pub const EXIT_UNRESOLVED: i32 = 4;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Core(Error::Pole { .. }) => EXIT_POLE,
            Self::Core(Error::Unresolved { .. } | Error::NoBracket { .. }) => EXIT_UNRESOLVED,
            Self::Core(
                Error::InvalidPrecision { .. }
                | Error::Parse { .. }
                | Error::InvalidParams(_)
                | Error::InvalidTableau(_)
                | Error::NoCanard { .. }
                | Error::Unsupported(_)
                | Error::PastCriticality
                | Error::NotContracting(_),
            ) => EXIT_USAGE,
            _ => EXIT_FAILED,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "canardlab", version, about = "Discretized canards: simulations, delays and critical step sizes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate one orbit and classify its jump.
    Simulate(SimulateArgs),
    /// Critical step-size surfaces over a (rho, eps) grid, one CSV per tableau.
    Sweep(SweepArgs),
    /// Way-out index of a canard entering at -rho.
    Wayout(WayoutArgs),
    /// Bisect the critical step size on the nonlinear system.
    Bisect(BisectArgs),
    /// Lower bound K* on the canard steps before expansion compensates.
    Kstar(KstarArgs),
    /// Run the property suites and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Transcritical,
    Pitchfork,
    Fold,
}

impl From<KindArg> for SingularityKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Transcritical => SingularityKind::Transcritical,
            KindArg::Pitchfork => SingularityKind::Pitchfork,
            KindArg::Fold => SingularityKind::Fold,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Linearized,
    Bisection,
}

#[derive(Debug, Args)]
pub struct Precision {
    /// Working precision in significant decimal digits.
    #[arg(long)]
    pub digits: Option<u32>,
}

impl Precision {
    fn context(&self, default: u32) -> CliResult<PrecisionContext> {
        Ok(PrecisionContext::new(self.digits.unwrap_or(default))?)
    }
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value = "transcritical")]
    pub kind: KindArg,
    /// euler, kahan, afamily, or a shipped tableau name.
    #[arg(long, default_value = "euler")]
    pub scheme: String,
    /// Butcher tableau file; overrides --scheme.
    #[arg(long)]
    pub tableau_file: Option<PathBuf>,
    /// Parameter of the implicit pitchfork family.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
}

impl SchemeArgs {
    fn resolve(&self, ctx: &PrecisionContext) -> CliResult<Scheme> {
        if let Some(path) = &self.tableau_file {
            return Ok(Scheme::RungeKutta(read_tableau(ctx, path)?));
        }
        let a = self.a.as_deref().map(|a| ctx.parse(a)).transpose()?;
        Ok(Scheme::from_name(ctx, &self.scheme, a.as_ref())?)
    }
}

fn read_tableau(ctx: &PrecisionContext, path: &Path) -> CliResult<ButcherTableau> {
    let text = fs::read_to_string(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("custom");
    Ok(ButcherTableau::parse_text(ctx, name, &text)?)
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub h: String,
    #[arg(long)]
    pub eps: String,
    /// Entry offset; the start is the perturbed canard point at -rho.
    #[arg(long)]
    pub rho: Option<String>,
    #[arg(long, default_value = "1e-4", allow_hyphen_values = true)]
    pub delta: String,
    /// Explicit start, instead of --rho/--delta.
    #[arg(long, allow_hyphen_values = true, requires = "y0")]
    pub x0: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "x0")]
    pub y0: Option<String>,
    /// Deviation modulus that counts as a jump; defaults to rho.
    #[arg(long)]
    pub escape: Option<String>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Write every k-th iterate.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[command(flatten)]
    pub precision: Precision,
    /// Orbit CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Tableaux to sweep; defaults to the five surface schemes.
    #[arg(long = "tableau")]
    pub tableaux: Vec<String>,
    #[arg(long)]
    pub tableau_file: Option<PathBuf>,
    #[arg(long, default_value = "1")]
    pub rho_min: String,
    #[arg(long, default_value = "10")]
    pub rho_max: String,
    #[arg(long, default_value_t = 10)]
    pub rho_steps: usize,
    #[arg(long, default_value = "0.01")]
    pub eps_min: String,
    #[arg(long, default_value = "1")]
    pub eps_max: String,
    #[arg(long, default_value_t = 10)]
    pub eps_steps: usize,
    #[arg(long, value_enum, default_value = "linearized")]
    pub mode: ModeArg,
    #[arg(long, default_value = "1e-4")]
    pub delta: String,
    #[arg(long, default_value_t = 3)]
    pub target_digits: u32,
    #[command(flatten)]
    pub precision: Precision,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct WayoutArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub h: String,
    #[arg(long)]
    pub eps: String,
    #[arg(long, required_unless_present = "lattice")]
    pub rho: Option<String>,
    /// Enter on the symmetric lattice point with index N instead of --rho.
    #[arg(long, conflicts_with = "rho")]
    pub lattice: Option<i64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub n_max: usize,
    #[command(flatten)]
    pub precision: Precision,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BisectArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub rho: String,
    #[arg(long)]
    pub eps: String,
    #[arg(long, default_value = "1e-4")]
    pub delta: String,
    /// Stop once the bracket is narrower than 10^-target relative.
    #[arg(long, default_value_t = 3)]
    pub target_digits: u32,
    #[command(flatten)]
    pub precision: Precision,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KstarArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub rho: String,
    #[arg(long)]
    pub h: String,
    #[arg(long)]
    pub eps: String,
    /// Also count the canard steps directly, up to --n-max.
    #[arg(long)]
    pub brute: bool,
    #[arg(long, default_value_t = 10_000_000)]
    pub n_max: usize,
    #[command(flatten)]
    pub precision: Precision,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a single suite.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
    pub suite: Option<String>,
    #[command(flatten)]
    pub precision: Precision,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> CliResult<i32> {
    match command {
        Command::Simulate(a) => simulate(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Wayout(a) => cmd_wayout(&a),
        Command::Bisect(a) => bisect(&a),
        Command::Kstar(a) => kstar(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(io::BufWriter::new(File::create(path)?))
        }
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

/// Significant digits written to CSV cells.
fn cell_digits(ctx: &PrecisionContext, wanted: usize) -> usize {
    wanted.min(ctx.digits() as usize)
}

fn params(ctx: &PrecisionContext, h: &str, eps: &str) -> CliResult<SystemParams> {
    Ok(SystemParams::new(ctx.parse(eps)?, ctx.parse(h)?)?)
}

fn write_plot_script(csv_path: &Path, body: &str) -> CliResult<()> {
    let script = csv_path.with_extension("gp");
    let name = csv_path.file_name().and_then(|n| n.to_str()).unwrap_or("data.csv");
    let mut f = File::create(script)?;
    writeln!(f, "set datafile separator ','")?;
    write!(f, "{}", body.replace("{csv}", name))?;
    Ok(())
}

fn simulate(a: &SimulateArgs) -> CliResult<i32> {
    let ctx = a.precision.context(PrecisionContext::SIMULATION_DIGITS)?;
    let kind: SingularityKind = a.scheme.kind.into();
    let params = params(&ctx, &a.h, &a.eps)?;
    let stepper = Stepper::new(kind, a.scheme.resolve(&ctx)?, params.clone())?;
    let rho = a.rho.as_deref().map(|r| ctx.parse(r)).transpose()?;
    let start = match (&a.x0, &a.y0, &rho) {
        (Some(x), Some(y), _) => PlanarPoint::new(ctx.parse(x)?, ctx.parse(y)?),
        (_, _, Some(rho)) => jump_start(kind, &params, rho, &ctx.parse(&a.delta)?),
        _ => return Err(CliError::Usage("give either --rho or both --x0 and --y0".into())),
    };
    let escape = match (&a.escape, &rho) {
        (Some(e), _) => ctx.parse(e)?,
        (None, Some(rho)) => rho.clone(),
        (None, None) => start.x.abs().max(start.y.abs()).max(ctx.one()),
    };
    let max_n = a.n_max.unwrap_or_else(|| default_max_n(&params, &escape));
    let stride = a.stride.max(1);
    let digits = cell_digits(&ctx, 20);
    let mut out = csv::Writer::from_writer(sink(a.out.as_deref())?);
    out.write_record(["n", "x", "y"])?;
    let mut write_err = None;
    let class = classify_visiting(&stepper, start, &escape, max_n, |k, p| {
        if write_err.is_none() && k % stride == 0 {
            let row = [k.to_string(), p.x.to_decimal(digits), p.y.to_decimal(digits)];
            if let Err(e) = out.write_record(&row) {
                write_err = Some(e);
            }
        }
    });
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let class = class?;
    let mut inner = out.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    writeln!(
        inner,
        "# kind={kind} scheme={} h={} eps={} digits={} escape={} class={class}",
        stepper.scheme,
        a.h,
        a.eps,
        ctx.digits(),
        escape.to_decimal(12),
    )?;
    inner.flush()?;
    if let Some(path) = &a.out {
        write_plot_script(
            path,
            "set xlabel 'x'\nset ylabel 'y'\nplot '{csv}' using 2:3 with lines title 'orbit', x with lines dashtype 2 lc 'black' title 'x = y'\n",
        )?;
    }
    if matches!(class, JumpClass::Stuck { .. }) {
        eprintln!("orbit stuck after {max_n} iterations");
    }
    Ok(EXIT_OK)
}

/// `steps` points from `lo` to `hi` inclusive, computed exactly at `ctx`.
fn linear_grid(ctx: &PrecisionContext, lo: &str, hi: &str, steps: usize) -> CliResult<Vec<Scalar>> {
    let (lo, hi) = (ctx.parse(lo)?, ctx.parse(hi)?);
    if steps == 0 {
        return Err(CliError::Usage("grid needs at least one point".into()));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let step = (&hi - &lo) / (steps as i32 - 1);
    Ok((0..steps).map(|i| &lo + &step * i as i32).collect())
}

fn sweep(a: &SweepArgs) -> CliResult<i32> {
    let ctx = a.precision.context(PrecisionContext::SWEEP_DIGITS)?;
    let mut tableaux = Vec::new();
    if let Some(path) = &a.tableau_file {
        tableaux.push(read_tableau(&ctx, path)?);
    }
    let names: Vec<&str> = if a.tableaux.is_empty() && a.tableau_file.is_none() {
        SURFACE_SET.to_vec()
    } else {
        a.tableaux.iter().map(String::as_str).collect()
    };
    for name in names {
        tableaux.push(ButcherTableau::shipped(&ctx, name)?);
    }
    let rho = linear_grid(&ctx, &a.rho_min, &a.rho_max, a.rho_steps)?;
    let eps = linear_grid(&ctx, &a.eps_min, &a.eps_max, a.eps_steps)?;
    let mode = match a.mode {
        ModeArg::Linearized => SweepMode::Linearized,
        ModeArg::Bisection => SweepMode::Bisection(BisectionConfig::new(ctx.parse(&a.delta)?, a.target_digits)),
    };
    fs::create_dir_all(&a.out)?;
    let digits = cell_digits(&ctx, 20);
    for t in &tableaux {
        let cells = sweep_surface(t, &rho, &eps, &mode)?;
        let path = a.out.join(format!("sweep_{}.csv", t.name()));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["rho", "eps", "h_star", "mode", "tableau"])?;
        for c in &cells {
            let h = c.h_star.as_ref().map(|h| h.to_decimal(digits)).unwrap_or_default();
            w.write_record([c.rho.to_decimal(digits), c.eps.to_decimal(digits), h, mode.label().into(), t.name().into()])?;
        }
        w.flush()?;
        write_plot_script(
            &path,
            &format!(
                "set xlabel 'rho'\nset ylabel 'eps'\nset zlabel 'h*'\nset dgrid3d {} {}\nsplot '{{csv}}' every ::1 using 1:2:3 with lines title '{}'\n",
                a.eps_steps,
                a.rho_steps,
                t.name()
            ),
        )?;
        println!("{}", path.display());
    }
    Ok(EXIT_OK)
}

fn cmd_wayout(a: &WayoutArgs) -> CliResult<i32> {
    let ctx = a.precision.context(PrecisionContext::SIMULATION_DIGITS)?;
    let kind: SingularityKind = a.scheme.kind.into();
    let params = params(&ctx, &a.h, &a.eps)?;
    let scheme = a.scheme.resolve(&ctx)?;
    Stepper::new(kind, scheme.clone(), params.clone())?;
    let rho = match (&a.rho, a.lattice) {
        (_, Some(n)) => verify::lattice_rho(kind, &params, n),
        (Some(r), None) => ctx.parse(r)?,
        (None, None) => return Err(CliError::Usage("give --rho or --lattice".into())),
    };
    let r = wayout(kind, &scheme, &params, &rho, a.n_max)?;
    let mut w = csv::Writer::from_writer(sink(a.out.as_deref())?);
    w.write_record(["kind", "scheme", "h", "eps", "rho", "N", "psi", "exit_k"])?;
    w.write_record([
        kind.name().to_string(),
        scheme.label(),
        a.h.clone(),
        a.eps.clone(),
        rho.to_decimal(cell_digits(&ctx, 20)),
        r.n_in.to_string(),
        r.psi.to_string(),
        r.exit_k.to_string(),
    ])?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn bisect(a: &BisectArgs) -> CliResult<i32> {
    let ctx = a.precision.context(PrecisionContext::SWEEP_DIGITS)?;
    let kind: SingularityKind = a.scheme.kind.into();
    let scheme = a.scheme.resolve(&ctx)?;
    let (rho, eps) = (ctx.parse(&a.rho)?, ctx.parse(&a.eps)?);
    let cfg = BisectionConfig::new(ctx.parse(&a.delta)?, a.target_digits);
    let t = critical_h_bisection(kind, &scheme, &rho, &eps, &cfg)?;
    let TripletSource::BisectionBracket { lo, hi } = t.source else {
        unreachable!("bisection returns a bracket")
    };
    let digits = cell_digits(&ctx, a.target_digits as usize + 8);
    let mut w = csv::Writer::from_writer(sink(a.out.as_deref())?);
    w.write_record(["kind", "tableau", "rho", "eps", "h_lo", "h_hi", "digits"])?;
    w.write_record([
        kind.name().to_string(),
        scheme.label(),
        a.rho.clone(),
        a.eps.clone(),
        lo.to_decimal(digits),
        hi.to_decimal(digits),
        ctx.digits().to_string(),
    ])?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn kstar(a: &KstarArgs) -> CliResult<i32> {
    let ctx = a.precision.context(PrecisionContext::SIMULATION_DIGITS)?;
    let kind: SingularityKind = a.scheme.kind.into();
    let scheme = a.scheme.resolve(&ctx)?;
    let params = params(&ctx, &a.h, &a.eps)?;
    let rho = ctx.parse(&a.rho)?;
    let bound = match (&scheme, kind) {
        (Scheme::Euler, SingularityKind::Transcritical) => kstar_transcritical_euler(&rho, &params.h, &params.epsilon)?,
        (Scheme::Euler, SingularityKind::Pitchfork) => kstar_pitchfork_euler(&rho, &params.h, &params.epsilon)?,
        (Scheme::RungeKutta(t), SingularityKind::Transcritical) => kstar_rk_for(t, &params, &rho)?.kstar,
        _ => return Err(Error::Unsupported(format!("a K* bound for {scheme}")).into()),
    };
    let brute = if a.brute {
        brute_force_k(kind, &scheme, &params, &rho, a.n_max)?.to_string()
    } else {
        String::new()
    };
    let mut w = csv::Writer::from_writer(sink(a.out.as_deref())?);
    w.write_record(["kind", "scheme", "rho", "h", "eps", "kstar", "k_brute"])?;
    w.write_record([
        kind.name().to_string(),
        scheme.label(),
        a.rho.clone(),
        a.h.clone(),
        a.eps.clone(),
        bound.to_decimal(cell_digits(&ctx, 20)),
        brute,
    ])?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<i32> {
    let ctx = a.precision.context(PrecisionContext::SIMULATION_DIGITS)?;
    let reports = match &a.suite {
        Some(name) => vec![verify::run_suite(&ctx, name)?],
        None => verify::run_all(&ctx),
    };
    for r in &reports {
        println!("{r}");
    }
    Ok(if reports.iter().all(verify::SuiteReport::passed) { EXIT_OK } else { EXIT_FAILED })
}
