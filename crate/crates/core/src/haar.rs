//! Seeded Haar sampling, Monte-Carlo averaging, and the second-moment
//! unitary integral `∫ U†AUXU†BU dU`.
//!
//! Randomness is counter-based: sample `i` of a run is drawn from the
//! ChaCha20 stream `(seed, i)`, so the result of a sample never depends on
//! which worker produced it. Reductions always run sequentially in index
//! order, which makes every estimate bitwise reproducible for a given seed.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::bases::ProjectiveBasis;
use crate::error::{dim_mismatch, QacError, Result};
use crate::linalg::{trace, trace_of_product, ComplexMatrix, ComplexVector};
use crate::states::{BipartiteDensityMatrix, DensityMatrix, PureState};

/// Samples are processed in blocks of this many indices; block boundaries
/// depend only on `n`, never on the worker count.
const BLOCK: usize = 4096;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A seed plus a running substream counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededSampler {
    seed: u64,
    counter: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// The generator for substream `index`; identical for identical `(seed, index)`.
    pub fn stream(&self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// The generator at the current counter, advancing the counter.
    pub fn next_stream(&mut self) -> ChaCha20Rng {
        let rng = self.stream(self.counter);
        self.counter += 1;
        rng
    }

    /// An independent sampler keyed by `(seed, index)`, for nested runs.
    pub fn fork(&self, index: u64) -> SeededSampler {
        SeededSampler::new(splitmix64(self.seed ^ splitmix64(index.wrapping_add(0x5eed))))
    }
}

/// Standard complex normal `(x + iy)/√2` from one Box–Muller pair.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * PI * u2).sin_cos();
    Complex64::new(r * c, r * s) * std::f64::consts::FRAC_1_SQRT_2
}

/// A `rows × cols` matrix of i.i.d. standard complex normals.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let qr = ginibre(rng, d, d).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for z in q.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    q
}

/// Uniformly random unit vector (Haar-random pure state).
pub fn haar_pure<R: Rng + ?Sized>(rng: &mut R, d: usize) -> PureState {
    loop {
        let v = ComplexVector::from_iterator(d, (0..d).map(|_| complex_normal(rng)));
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Hilbert–Schmidt random state `GG†/tr(GG†)`.
pub fn hs_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let g = ginibre(rng, d, d);
    let w = &g * g.adjoint();
    let tr = trace(&w).re;
    DensityMatrix::from_trusted(w.unscale(tr))
}

pub fn sample_unitary(s: &mut SeededSampler, d: usize) -> ComplexMatrix {
    haar_unitary(&mut s.next_stream(), d)
}

pub fn sample_pure(s: &mut SeededSampler, d: usize) -> PureState {
    haar_pure(&mut s.next_stream(), d)
}

pub fn sample_density_hs(s: &mut SeededSampler, d: usize) -> DensityMatrix {
    hs_density(&mut s.next_stream(), d)
}

pub fn sample_bipartite_hs(s: &mut SeededSampler, dims: (usize, usize)) -> BipartiteDensityMatrix {
    let rho = sample_density_hs(s, dims.0 * dims.1);
    BipartiteDensityMatrix::new(rho, dims).expect("dimension is the product of dims")
}

/// `ρ^A ⊗ ρ^B` with both factors Hilbert–Schmidt random.
pub fn sample_product_state(s: &mut SeededSampler, dims: (usize, usize)) -> BipartiteDensityMatrix {
    let a = sample_density_hs(s, dims.0);
    let b = sample_density_hs(s, dims.1);
    BipartiteDensityMatrix::product(&a, &b)
}

/// Haar-random pure state on `H^A ⊗ H^B` as a bipartite density matrix.
pub fn sample_pure_bipartite(s: &mut SeededSampler, dims: (usize, usize)) -> (PureState, BipartiteDensityMatrix) {
    let psi = sample_pure(s, dims.0 * dims.1);
    let rho = BipartiteDensityMatrix::from_pure(&psi, dims).expect("dimension is the product of dims");
    (psi, rho)
}

/// Monte-Carlo estimate of a real expectation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`.
    pub stderr: f64,
    pub n: usize,
}

impl McEstimate {
    /// Two-pass mean and standard error, summed in slice order.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        assert!(n >= 2, "a standard error needs at least two samples");
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Self { mean, stderr: (var / n as f64).sqrt(), n }
    }

    /// `|mean - value| / stderr`, with an exact match counting as zero.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = (self.mean - value).abs();
        if diff == 0.0 {
            0.0
        } else if self.stderr == 0.0 {
            f64::INFINITY
        } else {
            diff / self.stderr
        }
    }
}

/// Evaluates `f(i, rng_i)` for `i in 0..n`, possibly in parallel, and returns
/// the values in index order.
pub fn indexed_samples<T, F>(seed: u64, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha20Rng) -> T + Sync,
{
    let sampler = SeededSampler::new(seed);
    (0..n).into_par_iter().map(|i| f(i, &mut sampler.stream(i as u64))).collect()
}

/// Average of `f(state, UΠU†)` over `n` Haar-random `U`, with `Π` the
/// computational basis of dimension `d`.
pub fn mc_average<S, F>(state: &S, d: usize, n: usize, seed: u64, f: F) -> McEstimate
where
    S: Sync + ?Sized,
    F: Fn(&S, &ProjectiveBasis) -> f64 + Sync,
{
    let values = indexed_samples(seed, n, |_, rng| {
        let basis = ProjectiveBasis::from_unitary_unchecked(haar_unitary(rng, d));
        f(state, &basis)
    });
    McEstimate::from_samples(&values)
}

fn check_moment_args(a: &ComplexMatrix, b: &ComplexMatrix, x: &ComplexMatrix) -> Result<usize> {
    let d = a.nrows();
    for (name, m) in [("A", a), ("B", b), ("X", x)] {
        if m.nrows() != d || m.ncols() != d {
            return Err(dim_mismatch(format!("second moment: {name} is {}x{}, expected {d}x{d}", m.nrows(), m.ncols())));
        }
    }
    if d == 0 {
        return Err(QacError::DimensionTooSmall("second moment needs d ≥ 1".into()));
    }
    Ok(d)
}

/// Closed form of `∫ U†AUXU†BU dU`:
///
/// `[d·tr(AB) − tr A·tr B]/[d(d²−1)] · tr X · I + [d·tr A·tr B − tr(AB)]/[d(d²−1)] · X`.
///
/// For `d = 1` the integrand is the constant `A·X·B`, which is returned as is.
pub fn second_moment_closed(a: &ComplexMatrix, b: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = check_moment_args(a, b, x)?;
    if d == 1 {
        return Ok(a * x * b);
    }
    let df = d as f64;
    let denom = df * (df * df - 1.0);
    let tr_ab = trace_of_product(a, b);
    let tr_a_tr_b = trace(a) * trace(b);
    let c_id = (tr_ab * df - tr_a_tr_b) / denom * trace(x);
    let c_x = (tr_a_tr_b * df - tr_ab) / denom;
    Ok(ComplexMatrix::identity(d, d) * c_id + x * c_x)
}

/// Entrywise Monte-Carlo estimate of a matrix-valued integral.
#[derive(Debug, Clone)]
pub struct MatrixEstimate {
    pub mean: ComplexMatrix,
    /// Standard error of each entry's modulus deviation,
    /// `sqrt(Σ|z − mean|² / (n−1) / n)`.
    pub stderr: DMatrix<f64>,
    pub n: usize,
}

impl MatrixEstimate {
    /// Largest entrywise `|mean − expected| / stderr`; exact matches count as zero.
    pub fn max_z_score(&self, expected: &ComplexMatrix) -> f64 {
        let mut worst = 0.0_f64;
        for (i, (m, e)) in self.mean.iter().zip(expected.iter()).enumerate() {
            let diff = (m - e).norm();
            let se = self.stderr[i];
            let z = if diff <= 1e-14 { 0.0 } else if se == 0.0 { f64::INFINITY } else { diff / se };
            worst = worst.max(z);
        }
        worst
    }
}

/// Sample mean of `U†AUXU†BU` over `n` Haar draws.
pub fn second_moment_mc(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    n: usize,
    seed: u64,
) -> Result<MatrixEstimate> {
    let d = check_moment_args(a, b, x)?;
    if n < 2 {
        return Err(QacError::InvalidArgument("second_moment_mc needs n ≥ 2".into()));
    }
    let sampler = SeededSampler::new(seed);
    let mut sum = ComplexMatrix::zeros(d, d);
    let mut sum_sq = DMatrix::<f64>::zeros(d, d);
    for start in (0..n).step_by(BLOCK) {
        let end = (start + BLOCK).min(n);
        let block: Vec<ComplexMatrix> = (start..end)
            .into_par_iter()
            .map(|i| {
                let u = haar_unitary(&mut sampler.stream(i as u64), d);
                let ud = u.adjoint();
                &ud * a * &u * x * &ud * b * &u
            })
            .collect();
        for m in &block {
            sum += m;
            for (acc, z) in sum_sq.iter_mut().zip(m.iter()) {
                *acc += z.norm_sqr();
            }
        }
    }
    let nf = n as f64;
    let mean = sum.unscale(nf);
    let stderr = DMatrix::from_fn(d, d, |r, c| {
        let var = ((sum_sq[(r, c)] - nf * mean[(r, c)].norm_sqr()) / (nf - 1.0)).max(0.0);
        (var / nf).sqrt()
    });
    Ok(MatrixEstimate { mean, stderr, n })
}
