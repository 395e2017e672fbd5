//! Dense complex linear algebra shared by every other module.
//!
//! Composite spaces always use the A-major index convention: the basis state
//! `|a⟩⊗|b⟩` of `H^A ⊗ H^B` sits at index `a·d_B + b`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{dim_mismatch, QacError, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Absolute tolerance used for Hermiticity and orthonormality checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues down to `-NEGATIVE_EIGEN_TOL · max(1, max|λ|)` are treated as
/// rounding noise and clamped to zero.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

/// Which tensor factor of a bipartite space an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    A,
    B,
}

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Largest entry modulus.
pub fn max_norm(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `tr(a·b)` without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.ncols(), b.nrows());
    assert_eq!(a.nrows(), b.ncols());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Squared Hilbert–Schmidt norm `Σ|m_ij|²`.
pub fn hs_norm_sqr(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `max|m - m†|`.
pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†)/2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `max|u†u - I|`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let gram = u.adjoint() * u;
    max_abs_diff(&gram, &identity(u.ncols()))
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

fn check_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if !m.is_square() {
        return Err(dim_mismatch(format!(
            "{what}: expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }

    /// `V·diag(f(λ))·V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(j).scale_mut(w);
        }
        scaled * self.eigenvectors.adjoint()
    }
}

/// Hermitian eigendecomposition. Rejects matrices whose anti-Hermitian
/// part exceeds `HERMITIAN_TOL · max(1, max-norm)`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_square(m, "hermitian_eigen")?;
    if !is_finite(m) {
        return Err(QacError::NonFinite);
    }
    let residual = hermiticity_residual(m);
    if residual > HERMITIAN_TOL * max_norm(m).max(1.0) {
        return Err(QacError::NotHermitian { residual });
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-tol, 0)` with `tol = 1e-10·max(1, max|λ|)` are clamped
/// to zero; anything more negative is `NotPositive`. Positive eigenvalues
/// below the eigensolver's rounding floor (`64·d·ε·max(1, max|λ|)`) are also
/// zeroed, since `√ε`-sized noise would otherwise leak into the root of
/// rank-deficient inputs.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let scale = eig.eigenvalues.iter().fold(1.0_f64, |acc, l| acc.max(l.abs()));
    let neg_tol = NEGATIVE_EIGEN_TOL * scale;
    if let Some(&lowest) = eig.eigenvalues.first() {
        if lowest < -neg_tol {
            return Err(QacError::NotPositive { eigenvalue: lowest });
        }
    }
    let floor = 64.0 * m.nrows() as f64 * f64::EPSILON * scale;
    let root = eig.reconstruct_with(|l| if l <= floor { 0.0 } else { l.sqrt() });
    Ok(hermitian_part(&root))
}

/// Kronecker product with A-major indexing: row `i_a·rows(b) + i_b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_vector(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

/// Traces out one factor of an operator on `H^A ⊗ H^B`.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), over: Party) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    let n = check_square(m, "partial_trace")?;
    if da == 0 || db == 0 || da * db != n {
        return Err(dim_mismatch(format!(
            "partial_trace: dims ({da},{db}) do not factor a {n}x{n} matrix"
        )));
    }
    let out = match over {
        Party::B => ComplexMatrix::from_fn(da, da, |a, a2| (0..db).map(|b| m[(a * db + b, a2 * db + b)]).sum()),
        Party::A => ComplexMatrix::from_fn(db, db, |b, b2| (0..da).map(|a| m[(a * db + b, a * db + b2)]).sum()),
    };
    Ok(out)
}

/// The swap `F = Σ_kl |k⟩⟨l| ⊗ |l⟩⟨k|` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            f[(k * d + l, l * d + k)] = c64(1.0, 0.0);
        }
    }
    f
}

/// Schmidt form `|ψ⟩ = Σ_μ √λ_μ |a_μ⟩⊗|b_μ⟩` of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Squared Schmidt coefficients `λ_μ`, descending.
    pub coefficients: Vec<f64>,
    /// `|a_μ⟩` as columns (d_A × r).
    pub basis_a: ComplexMatrix,
    /// `|b_μ⟩` as columns (d_B × r).
    pub basis_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> ComplexVector {
        let da = self.basis_a.nrows();
        let db = self.basis_b.nrows();
        let mut psi = ComplexVector::zeros(da * db);
        for (mu, &lambda) in self.coefficients.iter().enumerate() {
            let amp = lambda.sqrt();
            let term = tensor_vector(&self.basis_a.column(mu).into_owned(), &self.basis_b.column(mu).into_owned());
            psi += term.scale(amp);
        }
        psi
    }
}

pub const NORMALIZATION_TOL: f64 = 1e-10;

pub fn schmidt_decompose(psi: &ComplexVector, dims: (usize, usize)) -> Result<SchmidtDecomposition> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != psi.len() {
        return Err(dim_mismatch(format!(
            "schmidt_decompose: dims ({da},{db}) do not factor a vector of length {}",
            psi.len()
        )));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(QacError::NotNormalized { norm });
    }
    let reshaped = ComplexMatrix::from_fn(da, db, |a, b| psi[a * db + b]);
    let svd = reshaped.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    // stable: equal singular values keep the solver's order
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let coefficients = order.iter().map(|&i| svd.singular_values[i].powi(2)).collect();
    let basis_a = ComplexMatrix::from_fn(da, order.len(), |a, k| u[(a, order[k])]);
    // reshaped = U Σ V†, so the B-factor amplitudes are the rows of V†
    let basis_b = ComplexMatrix::from_fn(db, order.len(), |b, k| v_t[(order[k], b)]);
    Ok(SchmidtDecomposition { coefficients, basis_a, basis_b })
}
