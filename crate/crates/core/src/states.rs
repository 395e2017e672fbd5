//! Validated density matrices and pure states.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{dim_mismatch, QacError, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_part, hermiticity_residual, is_finite, max_norm, partial_trace, psd_sqrt, trace,
    ComplexMatrix, ComplexVector, Party, NORMALIZATION_TOL,
};

/// Absolute tolerance for state validation (Hermiticity, unit trace, positivity).
pub const STATE_TOL: f64 = 1e-10;

/// A quantum state: Hermitian, unit trace, positive semidefinite.
///
/// The square root is computed on first use and cached; every skew
/// information measure reads it from here.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    sqrt_cache: OnceLock<ComplexMatrix>,
}

impl DensityMatrix {
    /// Checks the three state invariants and returns the validated state.
    /// The stored matrix is the Hermitian part of the input.
    pub fn validate(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(dim_mismatch(format!(
                "density matrix must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !is_finite(&matrix) {
            return Err(QacError::NonFinite);
        }
        let residual = hermiticity_residual(&matrix);
        if residual > STATE_TOL {
            return Err(QacError::NotHermitian { residual });
        }
        let matrix = hermitian_part(&matrix);
        let tr = trace(&matrix);
        let residual = (tr - Complex64::new(1.0, 0.0)).norm();
        if residual > STATE_TOL {
            return Err(QacError::TraceNotOne { residual });
        }
        let eig = hermitian_eigen(&matrix)?;
        let lowest = eig.eigenvalues[0];
        if lowest < -STATE_TOL {
            return Err(QacError::NotPositive { eigenvalue: lowest });
        }
        Ok(Self { matrix, sqrt_cache: OnceLock::new() })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        let matrix = hermitian_part(&(v * v.adjoint()));
        Self { matrix, sqrt_cache: OnceLock::new() }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(d, d).scale(1.0 / d as f64), sqrt_cache: OnceLock::new() }
    }

    /// Wraps a matrix already known to be a state (e.g. a channel output or a
    /// sampled state). Only Hermiticity is enforced, by symmetrizing.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(max_norm(&matrix).is_finite());
        Self { matrix: hermitian_part(&matrix), sqrt_cache: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `√ρ`, computed once.
    pub fn sqrt(&self) -> &ComplexMatrix {
        self.sqrt_cache.get_or_init(|| psd_sqrt(&self.matrix).expect("validated state has a PSD square root"))
    }

    /// `tr √ρ`.
    pub fn trace_sqrt(&self) -> f64 {
        trace(self.sqrt()).re
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `UρU†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(dim_mismatch(format!("unitary is {}x{}, state dim {}", u.nrows(), u.ncols(), self.dim())));
        }
        Ok(Self::from_trusted(u * &self.matrix * u.adjoint()))
    }
}

/// A state on `H^A ⊗ H^B` together with its factorization.
#[derive(Debug, Clone)]
pub struct BipartiteDensityMatrix {
    dims: (usize, usize),
    state: DensityMatrix,
}

impl BipartiteDensityMatrix {
    pub fn new(state: DensityMatrix, dims: (usize, usize)) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != state.dim() {
            return Err(dim_mismatch(format!(
                "dims ({},{}) do not factor a state of dimension {}",
                dims.0,
                dims.1,
                state.dim()
            )));
        }
        Ok(Self { dims, state })
    }

    pub fn validate(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        Self::new(DensityMatrix::validate(matrix)?, dims)
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        let m = crate::linalg::tensor_product(a.matrix(), b.matrix());
        Self { dims: (a.dim(), b.dim()), state: DensityMatrix::from_trusted(m) }
    }

    pub fn from_pure(psi: &PureState, dims: (usize, usize)) -> Result<Self> {
        Self::new(DensityMatrix::from_pure(psi), dims)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim_a(&self) -> usize {
        self.dims.0
    }

    pub fn dim_b(&self) -> usize {
        self.dims.1
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn sqrt(&self) -> &ComplexMatrix {
        self.state.sqrt()
    }

    /// Reduced state of `party` (the other factor is traced out).
    pub fn reduced(&self, party: Party) -> DensityMatrix {
        let over = match party {
            Party::A => Party::B,
            Party::B => Party::A,
        };
        let m = partial_trace(self.state.matrix(), self.dims, over).expect("dims validated at construction");
        DensityMatrix::from_trusted(m)
    }

    /// `(U_A⊗U_B) ρ (U_A⊗U_B)†`.
    pub fn local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        let u = crate::linalg::tensor_product(ua, ub);
        Ok(Self { dims: self.dims, state: self.state.conjugate_by(&u)? })
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: (usize, usize)) -> Self {
        debug_assert_eq!(dims.0 * dims.1, matrix.nrows());
        Self { dims, state: DensityMatrix::from_trusted(matrix) }
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(dim_mismatch("pure state must have at least one amplitude"));
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() {
            return Err(QacError::NonFinite);
        }
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(QacError::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `v` first; fails only for the zero vector.
    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QacError::NotNormalized { norm });
        }
        Self::new(v.unscale(norm))
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = ComplexVector::zeros(d);
        v[i] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState { amplitudes: self.amplitudes.kronecker(&other.amplitudes) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, max_abs_diff};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows.len(), rows[0].len(), |r, c| c64(rows[r][c], 0.0))
    }

    pub(crate) fn bell() -> PureState {
        let mut v = ComplexVector::zeros(4);
        v[0] = c64(FRAC_1_SQRT_2, 0.0);
        v[3] = c64(FRAC_1_SQRT_2, 0.0);
        PureState::new(v).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(DensityMatrix::validate(real(&[&[0.5, 0.0], &[0.0, 0.5]])).is_ok());
        match DensityMatrix::validate(real(&[&[0.6, 0.0], &[0.0, 0.5]])) {
            Err(QacError::TraceNotOne { residual }) => assert!((residual - 0.1).abs() < 1e-12),
            other => panic!("expected TraceNotOne, got {other:?}"),
        }
        // eigenvalues of [[.5,.6],[.6,.5]] are 1.1 and -0.1
        match DensityMatrix::validate(real(&[&[0.5, 0.6], &[0.6, 0.5]])) {
            Err(QacError::NotPositive { eigenvalue }) => assert!((eigenvalue + 0.1).abs() < 1e-12),
            other => panic!("expected NotPositive, got {other:?}"),
        }
        let mut m = real(&[&[0.5, 0.1], &[0.0, 0.5]]);
        m[(0, 1)] = c64(0.1, 0.0);
        assert!(matches!(DensityMatrix::validate(m), Err(QacError::NotHermitian { .. })));
        assert!(matches!(DensityMatrix::validate(real(&[&[1.0, 0.0]])), Err(QacError::DimensionMismatch(_))));
    }

    #[test]
    fn pure_state_projectors() {
        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        assert_eq!(zero.matrix(), &real(&[&[1.0, 0.0], &[0.0, 0.0]]));

        let plus = PureState::new(ComplexVector::from_element(2, c64(FRAC_1_SQRT_2, 0.0))).unwrap();
        let rho = DensityMatrix::from_pure(&plus);
        assert!(max_abs_diff(rho.matrix(), &ComplexMatrix::from_element(2, 2, c64(0.5, 0.0))) < 1e-15);
        assert!(max_abs_diff(rho.sqrt(), rho.matrix()) < 1e-10);

        let b = DensityMatrix::from_pure(&bell());
        for r in 0..4 {
            for c in 0..4 {
                let corner = (r == 0 || r == 3) && (c == 0 || c == 3);
                let expected = if corner { 0.5 } else { 0.0 };
                assert!((b.matrix()[(r, c)] - c64(expected, 0.0)).norm() < 1e-15);
            }
        }
        assert!(max_abs_diff(b.sqrt(), b.matrix()) < 1e-10);
        assert!((b.trace_sqrt() - 1.0).abs() < 1e-10);

        let bad = ComplexVector::from_element(2, c64(1.0, 0.0));
        assert!(matches!(PureState::new(bad), Err(QacError::NotNormalized { .. })));
    }

    #[test]
    fn reduced_examples() {
        let bell = BipartiteDensityMatrix::from_pure(&bell(), (2, 2)).unwrap();
        let half = ComplexMatrix::identity(2, 2).scale(0.5);
        assert!(max_abs_diff(bell.reduced(Party::A).matrix(), &half) < 1e-15);

        let a = DensityMatrix::validate(real(&[&[0.75, 0.2], &[0.2, 0.25]])).unwrap();
        let b = DensityMatrix::maximally_mixed(3);
        let prod = BipartiteDensityMatrix::product(&a, &b);
        assert!(max_abs_diff(prod.reduced(Party::A).matrix(), a.matrix()) < 1e-15);

        let mixed = BipartiteDensityMatrix::new(DensityMatrix::maximally_mixed(6), (2, 3)).unwrap();
        let third = ComplexMatrix::identity(3, 3).scale(1.0 / 3.0);
        assert!(max_abs_diff(mixed.reduced(Party::B).matrix(), &third) < 1e-15);
        assert!(DensityMatrix::validate(mixed.reduced(Party::B).into_matrix()).is_ok());

        assert!(BipartiteDensityMatrix::new(DensityMatrix::maximally_mixed(6), (4, 2)).is_err());
    }

    #[test]
    fn trace_sqrt_bounds() {
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!((mixed.trace_sqrt() - 2.0).abs() < 1e-12);
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
    }
}
