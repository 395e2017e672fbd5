//! Wave and particle features of a reduced state and their complementarity
//! with system–environment correlation.

use crate::bases::ProjectiveBasis;
use crate::error::{dim_mismatch, Result};
use crate::linalg::{schmidt_decompose, trace_of_product, Party, SchmidtDecomposition};
use crate::measures::avg_correlation_closed;
use crate::states::{BipartiteDensityMatrix, DensityMatrix, PureState};

fn in_basis(rho: &DensityMatrix, basis: &ProjectiveBasis) -> Result<crate::linalg::ComplexMatrix> {
    if rho.dim() != basis.dim() {
        return Err(dim_mismatch(format!("state dim {} vs basis dim {}", rho.dim(), basis.dim())));
    }
    let b = basis.unitary();
    Ok(b.adjoint() * rho.matrix() * b)
}

/// `W = Σ_{i≠j} |⟨i|ρ|j⟩|²`.
pub fn wave_feature(rho_a: &DensityMatrix, basis: &ProjectiveBasis) -> Result<f64> {
    let m = in_basis(rho_a, basis)?;
    let n = m.nrows();
    Ok((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| m[(i, j)].norm_sqr()).sum())
}

/// `P = Σ_i |⟨i|ρ|i⟩|²`.
pub fn particle_feature(rho_a: &DensityMatrix, basis: &ProjectiveBasis) -> Result<f64> {
    let m = in_basis(rho_a, basis)?;
    Ok(m.diagonal().iter().map(|z| z.norm_sqr()).sum())
}

/// `|W + P − tr ρ²|`.
pub fn duality_identity_residual(rho_a: &DensityMatrix, basis: &ProjectiveBasis) -> Result<f64> {
    let w = wave_feature(rho_a, basis)?;
    let p = particle_feature(rho_a, basis)?;
    let purity = trace_of_product(rho_a.matrix(), rho_a.matrix()).re;
    Ok((w + p - purity).abs())
}

/// Every term of the complementarity relation
/// `W + P + (d_A+1)·Q_U = (tr√ρ^A)²` for one state and path basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complementarity {
    pub wave: f64,
    pub particle: f64,
    /// Average correlation `Q_U(ρ^AE)` from the closed form.
    pub correlation: f64,
    pub lhs: f64,
    /// `(tr√ρ^A)²`.
    pub rhs: f64,
}

impl Complementarity {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Evaluates both sides of the complementarity relation. The identity is a
/// theorem for pure `ρ^AE` only; for mixed states the terms are still
/// reported but generally do not balance.
pub fn complementarity_terms(rho: &BipartiteDensityMatrix, basis_a: &ProjectiveBasis) -> Result<Complementarity> {
    let rho_a = rho.reduced(Party::A);
    let wave = wave_feature(&rho_a, basis_a)?;
    let particle = particle_feature(&rho_a, basis_a)?;
    let correlation = avg_correlation_closed(rho);
    let lhs = wave + particle + (rho.dim_a() + 1) as f64 * correlation;
    let rhs = rho_a.trace_sqrt().powi(2);
    Ok(Complementarity { wave, particle, correlation, lhs, rhs })
}

/// Absolute residual of `W + P + (d_A+1)·Q_U(ρ^AE) = (tr√ρ^A)²` for a pure
/// system–environment state.
pub fn complementarity_residual(psi: &PureState, dims: (usize, usize), basis_a: &ProjectiveBasis) -> Result<f64> {
    let rho = BipartiteDensityMatrix::from_pure(psi, dims)?;
    Ok(complementarity_terms(&rho, basis_a)?.residual())
}

/// `[(Σ_μ √λ_μ)² − Σ_μ λ_μ²]/(d_A+1)` from squared Schmidt coefficients.
pub fn schmidt_avg_correlation(sd: &SchmidtDecomposition, dim_a: usize) -> f64 {
    let root_sum: f64 = sd.coefficients.iter().map(|l| l.max(0.0).sqrt()).sum();
    let square_sum: f64 = sd.coefficients.iter().map(|l| l * l).sum();
    (root_sum.powi(2) - square_sum) / (dim_a + 1) as f64
}

/// Schmidt-form average correlation of a pure bipartite state.
pub fn pure_avg_correlation(psi: &PureState, dims: (usize, usize)) -> Result<f64> {
    let sd = schmidt_decompose(psi.amplitudes(), dims)?;
    Ok(schmidt_avg_correlation(&sd, dims.0))
}
