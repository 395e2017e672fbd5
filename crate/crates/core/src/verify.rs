//! Verification suites: randomized batteries that check every identity and
//! inequality of the theory numerically and summarize them in a report.
//!
//! Trial `t` of a suite draws all of its randomness from
//! `SeededSampler::new(seed).fork(salt).fork(t)`, trials run in parallel and
//! results are reduced in trial order, so reports do not depend on the
//! number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::{conjugate_basis_set, mub_construct, operator_basis, ProjectiveBasis};
use crate::channels::{depolarizing_kraus, random_channel_from};
use crate::duality::{complementarity_terms, duality_identity_residual, pure_avg_correlation};
use crate::error::{QacError, Result};
use crate::field::prime_power;
use crate::haar::{
    ginibre, sample_bipartite_hs, sample_density_hs, sample_product_state, sample_pure, sample_pure_bipartite,
    sample_unitary, second_moment_closed, second_moment_mc, SeededSampler,
};
use crate::linalg::{c64, max_abs_diff, ComplexMatrix, Party};
use crate::measures::{
    avg_coherence_closed, avg_coherence_mc, avg_coherence_mub, avg_correlation_closed, avg_correlation_mc,
    avg_correlation_mub, coherence, correlation_operator_basis, depolarizing_correlation, partial_coherence,
    twirling_correlation_closed, twirling_correlation_mc,
};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const SUITES: [&str; 10] = [
    "prop1a",
    "prop1b",
    "prop1c",
    "prop2",
    "prop3",
    "prop4",
    "eq1",
    "haar-moment",
    "mub-identities",
    "channel-eq",
];

pub const MAX_DIM_A: usize = 13;
pub const MAX_TOTAL_DIM: usize = 64;
/// Statistical checks pass when the estimate lies within this many standard errors.
pub const Z_TOL: f64 = 5.0;
/// Number of states that also get a Monte-Carlo check in the mixed suites.
pub const MC_STATES: usize = 5;

const EQ_TOL: f64 = 1e-10;
const TIGHT_TOL: f64 = 1e-12;
const MC_SALT: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub suite: String,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Monte-Carlo sample count; `None` picks the suite default.
    pub samples: Option<usize>,
    pub env_dim: usize,
    pub tolerance_scale: f64,
}

impl VerifyConfig {
    pub fn new(suite: &str, dims: &[usize], trials: usize, seed: u64) -> Self {
        Self {
            suite: suite.into(),
            dims: dims.to_vec(),
            trials,
            seed,
            samples: None,
            env_dim: 2,
            tolerance_scale: 1.0,
        }
    }

    fn default_samples(&self) -> usize {
        if self.suite == "haar-moment" {
            100_000
        } else {
            10_000
        }
    }
}

/// Whether a check bounds its residual from above (the usual case) or
/// requires it to exceed the tolerance (counterexample witnesses).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    Exceeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub qac: String,
    pub report_schema: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub suite: String,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerance_scale: f64,
    pub versions: Versions,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Recorder {
    scale: f64,
    checks: Vec<CheckRecord>,
}

impl Recorder {
    /// NaN residuals poison the maximum so that they always fail.
    fn max_of(residuals: &[f64]) -> f64 {
        residuals.iter().fold(0.0_f64, |m, &r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) })
    }

    fn at_most(&mut self, name: &str, residuals: &[f64], tolerance: f64) {
        let tolerance = tolerance * self.scale;
        let max_residual = Self::max_of(residuals);
        let pass = max_residual <= tolerance;
        self.push(name, residuals.len(), max_residual, tolerance, Bound::AtMost, pass);
    }

    fn exceeds(&mut self, name: &str, residuals: &[f64], tolerance: f64) {
        let tolerance = tolerance * self.scale;
        let max_residual = Self::max_of(residuals);
        let pass = max_residual > tolerance;
        self.push(name, residuals.len(), max_residual, tolerance, Bound::Exceeds, pass);
    }

    fn push(&mut self, name: &str, trials: usize, max_residual: f64, tolerance: f64, bound: Bound, pass: bool) {
        self.checks.push(CheckRecord { name: name.into(), trials, max_residual, tolerance, bound, pass });
    }
}

/// Runs `f` once per trial on its own forked sampler; results in trial order.
fn per_trial<T, F>(seed: u64, salt: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut SeededSampler) -> T + Sync,
{
    let root = SeededSampler::new(seed).fork(salt);
    (0..trials).into_par_iter().map(|t| f(t, &mut root.fork(t as u64))).collect()
}

fn mc_seed(s: &SeededSampler) -> u64 {
    s.fork(MC_SALT).seed()
}

fn usage(msg: impl Into<String>) -> QacError {
    QacError::InvalidArgument(msg.into())
}

fn single_dim(cfg: &VerifyConfig) -> Result<usize> {
    match cfg.dims.as_slice() {
        [d] => Ok(*d),
        _ => Err(usage(format!("suite {} takes a single dimension, e.g. --dims 3", cfg.suite))),
    }
}

fn pair_dims(cfg: &VerifyConfig) -> Result<(usize, usize)> {
    match cfg.dims.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(usage(format!("suite {} takes two dimensions, e.g. --dims 2,3", cfg.suite))),
    }
}

fn check_caps(da: usize, total: usize, needs_mub: bool) -> Result<()> {
    if da < 2 {
        return Err(usage("the measured party needs dimension at least 2"));
    }
    if da > MAX_DIM_A {
        return Err(usage(format!("d_A = {da} exceeds the cap {MAX_DIM_A}")));
    }
    if total > MAX_TOTAL_DIM {
        return Err(usage(format!("total dimension {total} exceeds the cap {MAX_TOTAL_DIM}")));
    }
    if needs_mub && prime_power(da).is_none() {
        return Err(usage(format!("this suite needs a complete MUB set, which requires a prime-power d_A (got {da})")));
    }
    Ok(())
}

fn random_basis(s: &mut SeededSampler, d: usize) -> ProjectiveBasis {
    ProjectiveBasis::new(sample_unitary(s, d)).expect("Haar unitaries are unitary")
}

/// Runs one suite. Usage problems (unknown suite, bad dims) are reported as
/// `InvalidArgument`; failed checks are recorded in the report instead.
pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if !SUITES.contains(&cfg.suite.as_str()) {
        return Err(usage(format!("unknown suite {:?}; expected one of {}", cfg.suite, SUITES.join(", "))));
    }
    if cfg.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    if cfg.dims.contains(&0) {
        return Err(usage("dimensions must be positive"));
    }
    if !(cfg.tolerance_scale.is_finite() && cfg.tolerance_scale > 0.0) {
        return Err(usage("tolerance scale must be a positive number"));
    }
    let samples = cfg.samples.unwrap_or_else(|| cfg.default_samples());
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let mut rec = Recorder { scale: cfg.tolerance_scale, checks: Vec::new() };
    match cfg.suite.as_str() {
        "prop1a" => prop1a(cfg, &mut rec)?,
        "prop1b" => prop1b(cfg, &mut rec)?,
        "prop1c" => prop1c(cfg, &mut rec)?,
        "prop2" => prop2(cfg, samples, &mut rec)?,
        "prop3" => prop3(cfg, samples, &mut rec)?,
        "prop4" => prop4(cfg, &mut rec)?,
        "eq1" => eq1(cfg, samples, &mut rec)?,
        "haar-moment" => haar_moment(cfg, samples, &mut rec)?,
        "mub-identities" => mub_identities(cfg, &mut rec)?,
        "channel-eq" => channel_eq(cfg, samples, &mut rec)?,
        _ => unreachable!("suite names checked above"),
    }
    let pass = rec.checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        suite: cfg.suite.clone(),
        dims: cfg.dims.clone(),
        trials: cfg.trials,
        samples,
        seed: cfg.seed,
        tolerance_scale: cfg.tolerance_scale,
        versions: Versions { qac: env!("CARGO_PKG_VERSION").into(), report_schema: REPORT_SCHEMA_VERSION },
        checks: rec.checks,
        pass,
    })
}

fn prop1a(cfg: &VerifyConfig, rec: &mut Recorder) -> Result<()> {
    let dims = pair_dims(cfg)?;
    check_caps(dims.0, dims.0 * dims.1, true)?;
    let mubs = mub_construct(dims.0)?;
    let general = per_trial(cfg.seed, 0, cfg.trials, |_, s| {
        let rho = sample_bipartite_hs(s, dims);
        let basis = random_basis(s, dims.0);
        let q_closed = avg_correlation_closed(&rho);
        let q_mub = avg_correlation_mub(&rho, &mubs).expect("dims match");
        let local = coherence(&rho.reduced(Party::A), &basis).expect("dims match");
        let global = partial_coherence(&rho, &basis).expect("dims match");
        ((-q_closed).max(0.0), (-q_mub).max(0.0), (local - global).max(0.0))
    });
    rec.at_most("q-closed-nonnegative", &general.iter().map(|r| r.0).collect::<Vec<_>>(), TIGHT_TOL);
    rec.at_most("q-mub-nonnegative", &general.iter().map(|r| r.1).collect::<Vec<_>>(), TIGHT_TOL);
    rec.at_most("partial-coherence-dominates-local", &general.iter().map(|r| r.2).collect::<Vec<_>>(), TIGHT_TOL);

    let product = per_trial(cfg.seed, 1, cfg.trials, |_, s| {
        let rho = sample_product_state(s, dims);
        (avg_correlation_closed(&rho).abs(), avg_correlation_mub(&rho, &mubs).expect("dims match").abs())
    });
    rec.at_most("product-q-closed-zero", &product.iter().map(|r| r.0).collect::<Vec<_>>(), TIGHT_TOL);
    rec.at_most("product-q-mub-zero", &product.iter().map(|r| r.1).collect::<Vec<_>>(), EQ_TOL);
    Ok(())
}

fn prop1b(cfg: &VerifyConfig, rec: &mut Recorder) -> Result<()> {
    let dims = pair_dims(cfg)?;
    check_caps(dims.0, dims.0 * dims.1, true)?;
    if cfg.env_dim == 0 || dims.1 * cfg.env_dim > MAX_TOTAL_DIM {
        return Err(usage("environment dimension out of range"));
    }
    let mubs = mub_construct(dims.0)?;
    let rows = per_trial(cfg.seed, 0, cfg.trials, |_, s| {
        let rho = sample_bipartite_hs(s, dims);
        let ch = random_channel_from(s, dims.1, cfg.env_dim).expect("valid channel dimensions");
        let out = ch.apply_on_b(&rho).expect("channel acts on B");
        let closed = avg_correlation_closed(&out) - avg_correlation_closed(&rho);
        let mub = avg_correlation_mub(&out, &mubs).expect("dims match") - avg_correlation_mub(&rho, &mubs).expect("dims match");
        let marginal = max_abs_diff(out.reduced(Party::A).matrix(), rho.reduced(Party::A).matrix());
        (closed.max(0.0), mub.max(0.0), marginal)
    });
    rec.at_most("contractivity-closed", &rows.iter().map(|r| r.0).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("contractivity-mub", &rows.iter().map(|r| r.1).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("marginal-a-unchanged", &rows.iter().map(|r| r.2).collect::<Vec<_>>(), EQ_TOL);
    Ok(())
}

fn prop1c(cfg: &VerifyConfig, rec: &mut Recorder) -> Result<()> {
    let dims = pair_dims(cfg)?;
    check_caps(dims.0, dims.0 * dims.1, true)?;
    let mubs = mub_construct(dims.0)?;
    let rows = per_trial(cfg.seed, 0, cfg.trials, |_, s| {
        let rho = sample_bipartite_hs(s, dims);
        let ua = sample_unitary(s, dims.0);
        let ub = sample_unitary(s, dims.1);
        let moved = rho.local_unitary(&ua, &ub).expect("unitaries of the right size");
        let mub = (avg_correlation_mub(&moved, &mubs).expect("dims match") - avg_correlation_mub(&rho, &mubs).expect("dims match")).abs();
        let closed = (avg_correlation_closed(&moved) - avg_correlation_closed(&rho)).abs();
        (mub, closed)
    });
    rec.at_most("local-unitary-invariance-mub", &rows.iter().map(|r| r.0).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("local-unitary-invariance-closed", &rows.iter().map(|r| r.1).collect::<Vec<_>>(), EQ_TOL);
    Ok(())
}

fn prop2(cfg: &VerifyConfig, samples: usize, rec: &mut Recorder) -> Result<()> {
    let dims = pair_dims(cfg)?;
    check_caps(dims.0, dims.0 * dims.1, false)?;
    let z = per_trial(cfg.seed, 0, cfg.trials, |_, s| {
        let rho = sample_bipartite_hs(s, dims);
        avg_correlation_mc(&rho, samples, mc_seed(s)).z_score(avg_correlation_closed(&rho))
    });
    rec.at_most("haar-mc-vs-closed", &z, Z_TOL);
    Ok(())
}

fn prop3(cfg: &VerifyConfig, samples: usize, rec: &mut Recorder) -> Result<()> {
    let dims = pair_dims(cfg)?;
    check_caps(dims.0, dims.0 * dims.1, true)?;
    let mubs = mub_construct(dims.0)?;
    let g = operator_basis(dims.0);
    let rows = per_trial(cfg.seed, 0, cfg.trials, |t, s| {
        let rho = sample_bipartite_hs(s, dims);
        let closed = avg_correlation_closed(&rho);
        let mub = avg_correlation_mub(&rho, &mubs).expect("dims match");
        let ob = correlation_operator_basis(&rho, &g).expect("dims match");
        let z = (t < MC_STATES).then(|| avg_correlation_mc(&rho, samples, mc_seed(s)).z_score(closed));
        ((mub - closed).abs(), (ob - closed).abs(), z)
    });
    rec.at_most("mub-vs-closed", &rows.iter().map(|r| r.0).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("ob-vs-closed", &rows.iter().map(|r| r.1).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("haar-mc-vs-closed", &rows.iter().filter_map(|r| r.2).collect::<Vec<_>>(), Z_TOL);
    Ok(())
}

fn prop4(cfg: &VerifyConfig, rec: &mut Recorder) -> Result<()> {
    let dims = pair_dims(cfg)?;
    check_caps(dims.0, dims.0 * dims.1, false)?;
    let pure = per_trial(cfg.seed, 0, cfg.trials, |_, s| {
        let (psi, rho) = sample_pure_bipartite(s, dims);
        let basis = random_basis(s, dims.0);
        let wpc = complementarity_terms(&rho, &basis).expect("dims match").residual();
        let schmidt = (pure_avg_correlation(&psi, dims).expect("dims match") - avg_correlation_closed(&rho)).abs();
        (wpc, schmidt)
    });
    rec.at_most("wpc-pure", &pure.iter().map(|r| r.0).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("schmidt-vs-closed", &pure.iter().map(|r| r.1).collect::<Vec<_>>(), EQ_TOL);

    let wpd = per_trial(cfg.seed, 1, cfg.trials, |_, s| {
        let rho_a = sample_density_hs(s, dims.0);
        let basis = random_basis(s, dims.0);
        duality_identity_residual(&rho_a, &basis).expect("dims match")
    });
    rec.at_most("wpd", &wpd, TIGHT_TOL);

    let mixed = per_trial(cfg.seed, 2, cfg.trials, |_, s| {
        let rho = sample_bipartite_hs(s, dims);
        let basis = random_basis(s, dims.0);
        complementarity_terms(&rho, &basis).expect("dims match").residual()
    });
    rec.exceeds("wpc-mixed-counterexample", &mixed, 1e-3);
    Ok(())
}

fn eq1(cfg: &VerifyConfig, samples: usize, rec: &mut Recorder) -> Result<()> {
    let d = single_dim(cfg)?;
    check_caps(d, d, true)?;
    let mubs = mub_construct(d)?;
    let ceiling = (d as f64 - 1.0) / (d as f64 + 1.0);
    let rows = per_trial(cfg.seed, 0, cfg.trials, |t, s| {
        let rho = sample_density_hs(s, d);
        let closed = avg_coherence_closed(&rho);
        let mub = avg_coherence_mub(&rho, &mubs).expect("dims match");
        let u = sample_unitary(s, d);
        let other = conjugate_basis_set(&mubs, &u).expect("conjugated set stays complete");
        let moved = avg_coherence_mub(&rho, &other).expect("dims match");
        let range = (-closed).max(closed - ceiling).max(0.0);
        let z = (t < MC_STATES).then(|| avg_coherence_mc(&rho, samples, mc_seed(s)).z_score(closed));
        let psi = sample_pure(s, d);
        let peak = (avg_coherence_closed(&crate::states::DensityMatrix::from_pure(&psi)) - ceiling).abs();
        ((mub - closed).abs(), (moved - mub).abs(), range, peak, z)
    });
    rec.at_most("mub-vs-closed", &rows.iter().map(|r| r.0).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("mub-set-independence", &rows.iter().map(|r| r.1).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("closed-in-range", &rows.iter().map(|r| r.2).collect::<Vec<_>>(), TIGHT_TOL);
    rec.at_most("pure-state-maximum", &rows.iter().map(|r| r.3).collect::<Vec<_>>(), TIGHT_TOL);
    rec.at_most("haar-mc-vs-closed", &rows.iter().filter_map(|r| r.4).collect::<Vec<_>>(), Z_TOL);
    Ok(())
}

fn haar_moment(cfg: &VerifyConfig, samples: usize, rec: &mut Recorder) -> Result<()> {
    let d = single_dim(cfg)?;
    check_caps(d, d, false)?;
    // Trials run sequentially here: each Monte-Carlo estimate is already parallel.
    let root = SeededSampler::new(cfg.seed);
    let mut z = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let s = root.fork(t as u64);
        let mut rng = s.stream(0);
        let (a, b, x) = (ginibre(&mut rng, d, d), ginibre(&mut rng, d, d), ginibre(&mut rng, d, d));
        let exact = second_moment_closed(&a, &b, &x)?;
        z.push(second_moment_mc(&a, &b, &x, samples, mc_seed(&s))?.max_z_score(&exact));
    }
    rec.at_most("closed-vs-mc", &z, Z_TOL);

    let sz = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c64(1.0, 0.0), c64(-1.0, 0.0)]));
    let analytic = max_abs_diff(&second_moment_closed(&sz, &sz, &sz)?, &sz.unscale(-3.0));
    rec.at_most("sigma-z-analytic", &[analytic], TIGHT_TOL);
    Ok(())
}

fn mub_identities(cfg: &VerifyConfig, rec: &mut Recorder) -> Result<()> {
    let d = single_dim(cfg)?;
    check_caps(d, d, true)?;
    let mubs = mub_construct(d)?;
    let mut certs = vec![*mubs.certificate()];
    certs.extend(per_trial(cfg.seed, 0, cfg.trials, |_, s| {
        let u = sample_unitary(s, d);
        *conjugate_basis_set(&mubs, &u).expect("conjugated set stays complete").certificate()
    }));
    let field = |f: fn(&crate::bases::MubCertificate) -> f64| certs.iter().map(f).collect::<Vec<_>>();
    rec.at_most("orthonormality", &field(|c| c.orthonormality), EQ_TOL);
    rec.at_most("unbiasedness", &field(|c| c.unbiasedness), EQ_TOL);
    rec.at_most("completeness", &field(|c| c.completeness), EQ_TOL);
    rec.at_most("second-moment", &field(|c| c.second_moment), EQ_TOL);
    rec.at_most("basis-count", &field(|c| (c.num_bases as f64 - (c.dim + 1) as f64).abs()), 0.0);
    Ok(())
}

fn channel_eq(cfg: &VerifyConfig, samples: usize, rec: &mut Recorder) -> Result<()> {
    let dims = pair_dims(cfg)?;
    check_caps(dims.0, dims.0 * dims.1, false)?;
    let g = operator_basis(dims.0);
    let depol = depolarizing_kraus(&g)?;
    let ratio = dims.0 as f64 / (dims.0 as f64 + 1.0);
    let rows = per_trial(cfg.seed, 0, cfg.trials, |t, s| {
        let rho = sample_bipartite_hs(s, dims);
        let ob = correlation_operator_basis(&rho, &g).expect("dims match");
        let de = depolarizing_correlation(&rho, &depol).expect("dims match");
        let tw = twirling_correlation_closed(&rho);
        let z = (t < MC_STATES).then(|| twirling_correlation_mc(&rho, samples, mc_seed(s)).z_score(tw));
        ((ob - de).abs(), (ob - ratio * tw).abs(), z)
    });
    rec.at_most("ob-vs-depolarizing", &rows.iter().map(|r| r.0).collect::<Vec<_>>(), EQ_TOL);
    rec.at_most("ob-vs-twirling", &rows.iter().map(|r| r.1).collect::<Vec<_>>(), TIGHT_TOL);
    rec.at_most("twirling-mc-vs-closed", &rows.iter().filter_map(|r| r.2).collect::<Vec<_>>(), Z_TOL);
    Ok(())
}
