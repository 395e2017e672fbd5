//! The `qac` command-line front end.
//!
//! Exit codes: 0 success, 1 an invariant or dimension check failed,
//! 2 an unknown measure or a failed verification check, 64 usage, file or
//! parse errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bases::{mub_certify, mub_construct, operator_basis, MubSet, ProjectiveBasis};
use crate::channels::{depolarizing_kraus, random_channel_from};
use crate::duality::{complementarity_terms, duality_identity_residual, particle_feature, wave_feature};
use crate::error::QacError;
use crate::fmt::sig;
use crate::haar::{sample_density_hs, sample_pure, sample_unitary, McEstimate, SeededSampler};
use crate::io::{
    load_state, read_json, to_json_string, write_json, ChannelFile, FileError, LoadError, LoadedState, MatrixFile,
    MubFile, StateFile,
};
use crate::linalg::Party;
use crate::measures::{
    avg_coherence_closed, avg_coherence_mub, avg_correlation_closed, avg_correlation_mub, coherence,
    correlation, correlation_operator_basis, depolarizing_correlation, partial_coherence, skew_information,
    twirling_correlation_closed, twirling_correlation_mc, Observable,
};
use crate::states::DensityMatrix;
use crate::verify::{run_suite, Bound, VerifyConfig, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const DIGITS: usize = 12;

pub const MEASURES: [&str; 15] = [
    "skew",
    "coherence",
    "avg-coherence",
    "avg-coherence-mub",
    "partial-coherence",
    "correlation",
    "avg-correlation",
    "avg-correlation-mub",
    "qob",
    "depolarizing",
    "twirling",
    "twirling-mc",
    "wave",
    "particle",
    "wp-residual",
];

#[derive(Debug, Parser)]
#[command(name = "qac", version, about = "Skew-information coherence and average correlation of quantum states")]
struct Cli {
    /// Worker threads for sampling and trials; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a state file holds a valid density matrix or pure state.
    Validate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate one measure on a state file.
    Measure(MeasureArgs),
    /// Write a complete MUB set, or certify one read from a file.
    Mub(MubArgs),
    /// Generate a seeded random state, unitary or channel.
    Random(RandomArgs),
    /// Run a verification suite and report every check.
    Verify(VerifyArgs),
    /// Wave/particle complementarity terms of a system–environment state.
    Wp(WpArgs),
}

#[derive(Debug, Args)]
struct MeasureArgs {
    path: PathBuf,
    /// One of: skew, coherence, avg-coherence, avg-coherence-mub,
    /// partial-coherence, correlation, avg-correlation, avg-correlation-mub,
    /// qob, depolarizing, twirling, twirling-mc, wave, particle, wp-residual.
    measure: String,
    /// Matrix file whose columns are the measurement basis (default: computational).
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Matrix file with the observable for `skew`.
    #[arg(long)]
    observable: Option<PathBuf>,
    /// Override the file's subsystem dimensions, e.g. 2,3.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// MUB file for the `-mub` measures (default: the built-in construction).
    #[arg(long)]
    mubs: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo sample count.
    #[arg(long, alias = "samples", default_value_t = 10_000)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct MubArgs {
    /// Dimension of the set to construct (a prime power ≤ 64).
    #[arg(long, required_unless_present = "certify", conflicts_with = "certify")]
    dim: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// MUB file to certify.
    #[arg(long)]
    certify: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    State,
    Pure,
    Bipartite,
    Unitary,
    Channel,
}

#[derive(Debug, Args)]
struct RandomArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Environment dimension of the Stinespring dilation for `--kind channel`.
    #[arg(long, default_value_t = 2)]
    env_dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo samples per estimate (suite default if omitted).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 2)]
    env_dim: usize,
    /// Where to write the JSON report.
    #[arg(long, alias = "report")]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct WpArgs {
    path: PathBuf,
    #[arg(long)]
    basis: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    json: bool,
}

/// A failed command, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<QacError> for Failure {
    fn from(e: QacError) -> Self {
        let code = if matches!(e, QacError::InvalidArgument(_)) { EXIT_USAGE } else { EXIT_INVALID };
        Self { code, message: e.to_string() }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::File(f) => f.into(),
            LoadError::Invalid(q) => Self { code: EXIT_INVALID, message: q.to_string() },
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command; returns the exit code.
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
    let outcome = match cli.threads {
        Some(0) => Err(Failure::usage("--threads must be positive")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Failure::usage(format!("cannot start {n} worker threads: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Validate { path, json } => cmd_validate(&path, json),
        Command::Measure(a) => cmd_measure(&a),
        Command::Mub(a) => cmd_mub(&a),
        Command::Random(a) => cmd_random(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Wp(a) => cmd_wp(&a),
    }
}

fn emit_json(value: &serde_json::Value) {
    print!("{}", to_json_string(value));
}

fn cmd_validate(path: &Path, as_json: bool) -> CmdResult {
    let file: StateFile = read_json(path)?;
    match file.decode() {
        Ok(state) => {
            let purity = state.density.purity();
            if as_json {
                emit_json(&json!({"valid": true, "dims": state.dims, "purity": purity}));
            } else {
                println!("valid: dims {:?}, purity {}", state.dims, sig(purity, DIGITS));
            }
            Ok(EXIT_OK)
        }
        Err(LoadError::Invalid(e)) => {
            if as_json {
                emit_json(&json!({"valid": false, "violation": e.to_string()}));
            } else {
                println!("invalid: {e}");
            }
            Ok(EXIT_INVALID)
        }
        Err(LoadError::File(e)) => Err(e.into()),
    }
}

fn dims_override(dims: &Option<Vec<usize>>) -> Result<Option<(usize, usize)>, Failure> {
    match dims.as_deref() {
        None => Ok(None),
        Some([a, b]) if *a > 0 && *b > 0 => Ok(Some((*a, *b))),
        Some(_) => Err(Failure::usage("--dims takes two positive integers, e.g. --dims 2,3")),
    }
}

fn load_basis(path: &Option<PathBuf>, d: usize) -> Result<ProjectiveBasis, Failure> {
    match path {
        None => Ok(ProjectiveBasis::standard(d)),
        Some(p) => {
            let m = read_json::<MatrixFile>(p)?.matrix.to_matrix()?;
            if m.nrows() != d || m.ncols() != d {
                return Err(QacError::DimensionMismatch(format!("basis is {}x{}, expected {d}x{d}", m.nrows(), m.ncols())).into());
            }
            Ok(ProjectiveBasis::new(m)?)
        }
    }
}

fn load_mubs(path: &Option<PathBuf>, d: usize) -> Result<MubSet, Failure> {
    let mubs = match path {
        None => mub_construct(d)?,
        Some(p) => MubSet::from_bases(read_json::<MubFile>(p)?.to_bases()?)?,
    };
    if mubs.dim() != d {
        return Err(QacError::DimensionMismatch(format!("MUB set has dimension {}, expected {d}", mubs.dim())).into());
    }
    Ok(mubs)
}

/// The system the wave/particle features refer to: `ρ^A` of a bipartite
/// state, or the whole state otherwise.
fn path_system(state: &LoadedState, dims: Option<(usize, usize)>) -> Result<DensityMatrix, Failure> {
    if dims.is_some() || state.dims.len() == 2 {
        Ok(state.bipartite(dims)?.reduced(Party::A))
    } else {
        Ok(state.density.clone())
    }
}

enum Value {
    Exact(f64),
    Estimate(McEstimate),
}

fn cmd_measure(a: &MeasureArgs) -> CmdResult {
    if !MEASURES.contains(&a.measure.as_str()) {
        eprintln!("error: unknown measure {:?}; expected one of {}", a.measure, MEASURES.join(", "));
        return Ok(EXIT_FAILED);
    }
    let state = load_state(&a.path)?;
    let dims = dims_override(&a.dims)?;
    let rho = &state.density;
    let value = match a.measure.as_str() {
        "skew" => {
            let path = a.observable.as_ref().ok_or_else(|| Failure::usage("skew needs --observable <file>"))?;
            let o = Observable::new(read_json::<MatrixFile>(path)?.matrix.to_matrix()?)?;
            Value::Exact(skew_information(rho, &o)?)
        }
        "coherence" => Value::Exact(coherence(rho, &load_basis(&a.basis, rho.dim())?)?),
        "avg-coherence" => Value::Exact(avg_coherence_closed(rho)),
        "avg-coherence-mub" => Value::Exact(avg_coherence_mub(rho, &load_mubs(&a.mubs, rho.dim())?)?),
        "wave" | "particle" => {
            let sys = path_system(&state, dims)?;
            let basis = load_basis(&a.basis, sys.dim())?;
            Value::Exact(if a.measure == "wave" { wave_feature(&sys, &basis)? } else { particle_feature(&sys, &basis)? })
        }
        "wp-residual" => {
            if dims.is_some() || state.dims.len() == 2 {
                let bi = state.bipartite(dims)?;
                let basis = load_basis(&a.basis, bi.dim_a())?;
                Value::Exact(complementarity_terms(&bi, &basis)?.residual())
            } else {
                Value::Exact(duality_identity_residual(rho, &load_basis(&a.basis, rho.dim())?)?)
            }
        }
        name => {
            let bi = state.bipartite(dims)?;
            let da = bi.dim_a();
            match name {
                "partial-coherence" => Value::Exact(partial_coherence(&bi, &load_basis(&a.basis, da)?)?),
                "correlation" => Value::Exact(correlation(&bi, &load_basis(&a.basis, da)?)?),
                "avg-correlation" => Value::Exact(avg_correlation_closed(&bi)),
                "avg-correlation-mub" => Value::Exact(avg_correlation_mub(&bi, &load_mubs(&a.mubs, da)?)?),
                "qob" => Value::Exact(correlation_operator_basis(&bi, &operator_basis(da))?),
                "depolarizing" => Value::Exact(depolarizing_correlation(&bi, &depolarizing_kraus(&operator_basis(da))?)?),
                "twirling" => Value::Exact(twirling_correlation_closed(&bi)),
                "twirling-mc" => {
                    if a.n < 2 {
                        return Err(Failure::usage("--n must be at least 2"));
                    }
                    Value::Estimate(twirling_correlation_mc(&bi, a.n, a.seed))
                }
                _ => unreachable!("measure names checked above"),
            }
        }
    };
    match (value, a.json) {
        (Value::Exact(v), false) => println!("{}", sig(v, DIGITS)),
        (Value::Exact(v), true) => emit_json(&json!({"measure": a.measure, "value": v})),
        (Value::Estimate(e), false) => {
            println!("{} +/- {} (n = {}, seed = {})", sig(e.mean, DIGITS), sig(e.stderr, DIGITS), e.n, a.seed)
        }
        (Value::Estimate(e), true) => emit_json(
            &json!({"measure": a.measure, "value": e.mean, "stderr": e.stderr, "samples": e.n, "seed": a.seed}),
        ),
    }
    Ok(EXIT_OK)
}

fn cmd_mub(a: &MubArgs) -> CmdResult {
    if let Some(path) = &a.certify {
        let file: MubFile = read_json(path)?;
        let bases = file.to_bases()?;
        let cert = mub_certify(&bases)?;
        let complete = cert.num_bases == cert.dim + 1;
        let pass = cert.pass && complete;
        if a.json {
            emit_json(&json!({
                "dim": cert.dim,
                "num_bases": cert.num_bases,
                "orthonormality": cert.orthonormality,
                "unbiasedness": cert.unbiasedness,
                "completeness": cert.completeness,
                "second_moment": cert.second_moment,
                "pass": pass,
            }));
        } else {
            println!("dim {}, {} bases", cert.dim, cert.num_bases);
            println!("unbiasedness  {}", sig(cert.unbiasedness, DIGITS));
            println!("completeness  {}", sig(cert.completeness, DIGITS));
            println!("second-moment {}", sig(cert.second_moment, DIGITS));
            println!("{}", if pass { "pass" } else { "fail" });
        }
        return Ok(if pass { EXIT_OK } else { EXIT_INVALID });
    }
    let d = a.dim.expect("clap requires --dim without --certify");
    let mubs = mub_construct(d)?;
    let file = MubFile::from(&mubs);
    match &a.out {
        Some(out) => {
            write_json(out, &file)?;
            println!("wrote {} bases of dimension {d} to {}", mubs.bases().len(), out.display());
        }
        None => print!("{}", to_json_string(&file)),
    }
    Ok(EXIT_OK)
}

fn write_or_print<T: serde::Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    match out {
        Some(p) => Ok(write_json(p, value)?),
        None => {
            print!("{}", to_json_string(value));
            Ok(())
        }
    }
}

fn cmd_random(a: &RandomArgs) -> CmdResult {
    if a.dims.is_empty() || a.dims.len() > 2 || a.dims.contains(&0) {
        return Err(Failure::usage("--dims takes one or two positive integers"));
    }
    let total: usize = a.dims.iter().product();
    let mut s = SeededSampler::new(a.seed);
    let single = |what: &str| match a.dims.as_slice() {
        [d] => Ok(*d),
        _ => Err(Failure::usage(format!("--kind {what} takes a single dimension"))),
    };
    match a.kind {
        Kind::State => write_or_print(&a.out, &StateFile::from_density(sample_density_hs(&mut s, total).matrix(), &a.dims))?,
        Kind::Bipartite => {
            if a.dims.len() != 2 {
                return Err(Failure::usage("--kind bipartite takes two dimensions"));
            }
            write_or_print(&a.out, &StateFile::from_density(sample_density_hs(&mut s, total).matrix(), &a.dims))?
        }
        Kind::Pure => write_or_print(&a.out, &StateFile::from_pure(&sample_pure(&mut s, total), &a.dims))?,
        Kind::Unitary => write_or_print(&a.out, &MatrixFile::new(&sample_unitary(&mut s, single("unitary")?)))?,
        Kind::Channel => {
            let d = single("channel")?;
            if a.env_dim == 0 {
                return Err(Failure::usage("--env-dim must be positive"));
            }
            write_or_print(&a.out, &ChannelFile::from(&random_channel_from(&mut s, d, a.env_dim)?))?
        }
    }
    Ok(EXIT_OK)
}

fn tolerance_scale() -> Result<f64, Failure> {
    match std::env::var("QAC_TOLERANCE_SCALE") {
        Err(_) => Ok(1.0),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
            _ => Err(Failure::usage(format!("QAC_TOLERANCE_SCALE must be a positive number, got {v:?}"))),
        },
    }
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    if !SUITES.contains(&a.suite.as_str()) {
        return Err(Failure::usage(format!("unknown suite {:?}; expected one of {}", a.suite, SUITES.join(", "))));
    }
    let cfg = VerifyConfig {
        samples: a.samples,
        env_dim: a.env_dim,
        tolerance_scale: tolerance_scale()?,
        ..VerifyConfig::new(&a.suite, &a.dims, a.trials, a.seed)
    };
    let report = run_suite(&cfg)?;
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    if a.json {
        print!("{}", to_json_string(&report));
    } else {
        for c in &report.checks {
            let rel = match c.bound {
                Bound::AtMost => "<=",
                Bound::Exceeds => ">",
            };
            println!(
                "{} {:<36} max {} {rel} {} ({} trials)",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                sig(c.max_residual, 6),
                sig(c.tolerance, 6),
                c.trials
            );
        }
        println!("suite {} dims {:?} seed {}: {}", report.suite, report.dims, report.seed, if report.pass { "pass" } else { "FAIL" });
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_wp(a: &WpArgs) -> CmdResult {
    let state = load_state(&a.path)?;
    let bi = state.bipartite(dims_override(&a.dims)?)?;
    let basis = load_basis(&a.basis, bi.dim_a())?;
    let t = complementarity_terms(&bi, &basis)?;
    let purity = bi.state().purity();
    if a.json {
        emit_json(&json!({
            "wave": t.wave,
            "particle": t.particle,
            "avg_correlation": t.correlation,
            "lhs": t.lhs,
            "rhs": t.rhs,
            "residual": t.residual(),
            "global_purity": purity,
        }));
    } else {
        println!("W        {}", sig(t.wave, DIGITS));
        println!("P        {}", sig(t.particle, DIGITS));
        println!("Q_U      {}", sig(t.correlation, DIGITS));
        println!("lhs      {}", sig(t.lhs, DIGITS));
        println!("rhs      {}", sig(t.rhs, DIGITS));
        println!("residual {}", sig(t.residual(), DIGITS));
        if (purity - 1.0).abs() > 1e-10 {
            println!("note: the state is mixed (purity {}); the relation is only guaranteed for pure states", sig(purity, DIGITS));
        }
    }
    Ok(EXIT_OK)
}
