//! Skew-information coherence and correlation measures.
//!
//! Every averaged quantity is available through at least two routes: an
//! explicit average (over a complete MUB set, an operator basis, a Kraus
//! set, or Haar-random bases) and a closed form in terms of `tr√ρ^A` and
//! `tr_B(tr_A√ρ^AB)²`.

use num_complex::Complex64;

use crate::bases::{HermitianOperatorBasis, MubSet, ProjectiveBasis};
use crate::channels::KrausChannel;
use crate::error::{dim_mismatch, QacError, Result};
use crate::haar::{haar_unitary, indexed_samples, mc_average, McEstimate};
use crate::linalg::{
    hermiticity_residual, identity, partial_trace, tensor_product, trace, trace_of_product, ComplexMatrix, Party,
    HERMITIAN_TOL,
};
use crate::states::{BipartiteDensityMatrix, DensityMatrix};

/// A Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(dim_mismatch("observable must be square"));
        }
        let residual = hermiticity_residual(&matrix);
        if residual > HERMITIAN_TOL {
            return Err(QacError::NotHermitian { residual });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

fn check_dim(expected: usize, got: usize, what: &str) -> Result<()> {
    if expected != got {
        return Err(dim_mismatch(format!("{what}: expected dimension {expected}, got {got}")));
    }
    Ok(())
}

/// Wigner–Yanase skew information `I(ρ,O) = −½ tr([√ρ,O]²)`.
pub fn skew_information(rho: &DensityMatrix, o: &Observable) -> Result<f64> {
    check_dim(rho.dim(), o.dim(), "skew_information")?;
    Ok(skew_hermitian(rho.sqrt(), o.matrix()))
}

fn skew_hermitian(sqrt: &ComplexMatrix, o: &ComplexMatrix) -> f64 {
    let c = sqrt * o - o * sqrt;
    -0.5 * trace_of_product(&c, &c).re
}

/// Skew information for an arbitrary operator `K`:
/// `½[tr(ρKK†) + tr(ρK†K)] − tr(√ρ K† √ρ K)`, which equals `½‖[√ρ,K]‖²`
/// and coincides with [`skew_information`] for Hermitian `K`.
pub fn skew_information_general(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    if !k.is_square() {
        return Err(dim_mismatch("skew_information_general: operator must be square"));
    }
    check_dim(rho.dim(), k.nrows(), "skew_information_general")?;
    Ok(skew_general(rho.matrix(), rho.sqrt(), k))
}

fn skew_general(rho: &ComplexMatrix, sqrt: &ComplexMatrix, k: &ComplexMatrix) -> f64 {
    let kd = k.adjoint();
    let sym = 0.5 * (trace_of_product(rho, &(k * &kd)) + trace_of_product(rho, &(&kd * k))).re;
    sym - trace_of_product(&(sqrt * &kd), &(sqrt * k)).re
}

/// `I(ρ, |b⟩⟨b|) = ⟨b|ρ|b⟩ − ⟨b|√ρ|b⟩²` for a unit vector `b`.
fn skew_rank_one(rho: &ComplexMatrix, sqrt: &ComplexMatrix, b: nalgebra::DVectorView<'_, Complex64>) -> f64 {
    let expect = |m: &ComplexMatrix| b.dotc(&(m * b)).re;
    expect(rho) - expect(sqrt).powi(2)
}

/// `C(ρ|Π) = Σ_i I(ρ, |b_i⟩⟨b_i|)`.
pub fn coherence(rho: &DensityMatrix, basis: &ProjectiveBasis) -> Result<f64> {
    check_dim(rho.dim(), basis.dim(), "coherence")?;
    let (m, s) = (rho.matrix(), rho.sqrt());
    Ok(basis.unitary().column_iter().map(|b| skew_rank_one(m, s, b)).sum())
}

/// `I(ρ^AB, |b⟩⟨b|⊗1) = ⟨b|ρ^A|b⟩ − ‖(⟨b|⊗1)√ρ(|b⟩⊗1)‖²_HS`.
fn skew_local_rank_one(
    rho_a: &ComplexMatrix,
    sqrt_ab: &ComplexMatrix,
    dims: (usize, usize),
    b: nalgebra::DVectorView<'_, Complex64>,
) -> f64 {
    let (da, db) = dims;
    let first = b.dotc(&(rho_a * b)).re;
    let mut block_norm = 0.0;
    for u in 0..db {
        for v in 0..db {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..da {
                let ca = b[a].conj();
                if ca == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for a2 in 0..da {
                    acc += ca * b[a2] * sqrt_ab[(a * db + u, a2 * db + v)];
                }
            }
            block_norm += acc.norm_sqr();
        }
    }
    first - block_norm
}

/// Partial coherence `C(ρ^AB|Π⊗I_B) = Σ_i I(ρ^AB, |b_i⟩⟨b_i|⊗1^B)`.
pub fn partial_coherence(rho: &BipartiteDensityMatrix, basis_a: &ProjectiveBasis) -> Result<f64> {
    check_dim(rho.dim_a(), basis_a.dim(), "partial_coherence")?;
    let rho_a = rho.reduced(Party::A);
    Ok(partial_coherence_with(rho, rho_a.matrix(), basis_a))
}

fn partial_coherence_with(rho: &BipartiteDensityMatrix, rho_a: &ComplexMatrix, basis_a: &ProjectiveBasis) -> f64 {
    let s = rho.sqrt();
    basis_a.unitary().column_iter().map(|b| skew_local_rank_one(rho_a, s, rho.dims(), b)).sum()
}

/// `Q(ρ^AB|Π) = C(ρ^AB|Π⊗I_B) − C(ρ^A|Π)`.
pub fn correlation(rho: &BipartiteDensityMatrix, basis_a: &ProjectiveBasis) -> Result<f64> {
    check_dim(rho.dim_a(), basis_a.dim(), "correlation")?;
    let rho_a = rho.reduced(Party::A);
    Ok(correlation_with(rho, &rho_a, basis_a))
}

fn correlation_with(rho: &BipartiteDensityMatrix, rho_a: &DensityMatrix, basis_a: &ProjectiveBasis) -> f64 {
    let global = partial_coherence_with(rho, rho_a.matrix(), basis_a);
    let local: f64 = {
        let (m, s) = (rho_a.matrix(), rho_a.sqrt());
        basis_a.unitary().column_iter().map(|b| skew_rank_one(m, s, b)).sum()
    };
    global - local
}

/// Mean coherence over a complete set of MUBs.
pub fn avg_coherence_mub(rho: &DensityMatrix, mubs: &MubSet) -> Result<f64> {
    check_dim(rho.dim(), mubs.dim(), "avg_coherence_mub")?;
    let total = mubs.bases().iter().map(|b| coherence(rho, b)).sum::<Result<f64>>()?;
    Ok(total / mubs.bases().len() as f64)
}

/// `(d − (tr√ρ)²)/(d+1)`.
pub fn avg_coherence_closed(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    (d - rho.trace_sqrt().powi(2)) / (d + 1.0)
}

/// Coherence averaged over `n` Haar-random bases.
pub fn avg_coherence_mc(rho: &DensityMatrix, n: usize, seed: u64) -> McEstimate {
    mc_average(rho, rho.dim(), n, seed, |r, b| coherence(r, b).expect("basis has the state's dimension"))
}

/// Mean correlation over a complete set of MUBs on `H^A`.
pub fn avg_correlation_mub(rho: &BipartiteDensityMatrix, mubs: &MubSet) -> Result<f64> {
    check_dim(rho.dim_a(), mubs.dim(), "avg_correlation_mub")?;
    let rho_a = rho.reduced(Party::A);
    let total: f64 = mubs.bases().iter().map(|b| correlation_with(rho, &rho_a, b)).sum();
    Ok(total / mubs.bases().len() as f64)
}

/// `tr_B(tr_A√ρ^AB)²`, i.e. `tr(M²)` with `M = tr_A √ρ^AB`.
pub fn sqrt_marginal_purity(rho: &BipartiteDensityMatrix) -> f64 {
    let s = rho.sqrt();
    debug_assert!((trace_of_product(s, s).re - 1.0).abs() < 1e-8, "tr((√ρ)²) must equal tr ρ = 1");
    let m = partial_trace(s, rho.dims(), Party::A).expect("dims validated at construction");
    trace_of_product(&m, &m).re
}

/// `(tr√ρ^A)² − tr_B(tr_A√ρ^AB)²`, the numerator shared by the closed forms.
fn closed_numerator(rho: &BipartiteDensityMatrix) -> f64 {
    rho.reduced(Party::A).trace_sqrt().powi(2) - sqrt_marginal_purity(rho)
}

/// `[(tr√ρ^A)² − tr_B(tr_A√ρ^AB)²]/(d_A+1)`.
pub fn avg_correlation_closed(rho: &BipartiteDensityMatrix) -> f64 {
    closed_numerator(rho) / (rho.dim_a() + 1) as f64
}

/// Correlation averaged over `n` Haar-random bases on `H^A`.
pub fn avg_correlation_mc(rho: &BipartiteDensityMatrix, n: usize, seed: u64) -> McEstimate {
    let rho_a = rho.reduced(Party::A);
    mc_average(rho, rho.dim_a(), n, seed, |r, b| correlation_with(r, &rho_a, b))
}

/// `Σ_i I(ρ^A, G_i)`; equals `d_A − (tr√ρ^A)²`.
pub fn local_operator_basis_sum(rho_a: &DensityMatrix, g: &HermitianOperatorBasis) -> Result<f64> {
    check_dim(rho_a.dim(), g.dim(), "local_operator_basis_sum")?;
    Ok(g.operators().iter().map(|gi| skew_hermitian(rho_a.sqrt(), gi)).sum())
}

/// `Σ_i I(ρ^AB, G_i ⊗ 1^B)`.
pub fn global_operator_basis_sum(rho: &BipartiteDensityMatrix, g: &HermitianOperatorBasis) -> Result<f64> {
    check_dim(rho.dim_a(), g.dim(), "global_operator_basis_sum")?;
    let id_b = identity(rho.dim_b());
    Ok(g.operators().iter().map(|gi| skew_hermitian(rho.sqrt(), &tensor_product(gi, &id_b))).sum())
}

/// `Q_ob = (1/(d_A+1)) Σ_i [I(ρ^AB, G_i⊗1^B) − I(ρ^A, G_i)]`.
pub fn correlation_operator_basis(rho: &BipartiteDensityMatrix, g: &HermitianOperatorBasis) -> Result<f64> {
    let global = global_operator_basis_sum(rho, g)?;
    let local = local_operator_basis_sum(&rho.reduced(Party::A), g)?;
    Ok((global - local) / (rho.dim_a() + 1) as f64)
}

/// Coherence relative to a channel, `C(ρ|Φ) = Σ_K I(ρ, K)`.
pub fn channel_coherence(rho: &DensityMatrix, ch: &KrausChannel) -> Result<f64> {
    if ch.dim_in() != ch.dim_out() {
        return Err(dim_mismatch("channel coherence needs a channel with equal input and output dimension"));
    }
    check_dim(rho.dim(), ch.dim_in(), "channel_coherence")?;
    Ok(ch.kraus().iter().map(|k| skew_general(rho.matrix(), rho.sqrt(), k)).sum())
}

/// `C(ρ^AB|Φ⊗I_B) = Σ_K I(ρ^AB, K⊗1^B)`.
pub fn channel_partial_coherence(rho: &BipartiteDensityMatrix, ch: &KrausChannel) -> Result<f64> {
    if ch.dim_in() != ch.dim_out() {
        return Err(dim_mismatch("channel coherence needs a channel with equal input and output dimension"));
    }
    check_dim(rho.dim_a(), ch.dim_in(), "channel_partial_coherence")?;
    let id_b = identity(rho.dim_b());
    Ok(ch
        .kraus()
        .iter()
        .map(|k| skew_general(rho.matrix(), rho.sqrt(), &tensor_product(k, &id_b)))
        .sum())
}

/// `Q(ρ^AB|E) = C(ρ^AB|E⊗I_B) − C(ρ^A|E)`; with the depolarizing Kraus
/// set this is the operator-basis correlation.
pub fn depolarizing_correlation(rho: &BipartiteDensityMatrix, ch: &KrausChannel) -> Result<f64> {
    let global = channel_partial_coherence(rho, ch)?;
    let local = channel_coherence(&rho.reduced(Party::A), ch)?;
    Ok(global - local)
}

/// Twirling-channel correlation `[(tr√ρ^A)² − tr_B(tr_A√ρ^AB)²]/d_A`.
pub fn twirling_correlation_closed(rho: &BipartiteDensityMatrix) -> f64 {
    closed_numerator(rho) / rho.dim_a() as f64
}

/// `∫ I(ρ^AB, U⊗1^B) − I(ρ^A, U) dU` by Haar sampling, with the skew
/// information of the unitary argument from [`skew_information_general`].
pub fn twirling_correlation_mc(rho: &BipartiteDensityMatrix, n: usize, seed: u64) -> McEstimate {
    let rho_a = rho.reduced(Party::A);
    let (da, db) = rho.dims();
    let id_b = identity(db);
    let (m_ab, s_ab) = (rho.matrix(), rho.sqrt());
    let (m_a, s_a) = (rho_a.matrix(), rho_a.sqrt());
    let values = indexed_samples(seed, n, |_, rng| {
        let u = haar_unitary(rng, da);
        let lifted = tensor_product(&u, &id_b);
        skew_general(m_ab, s_ab, &lifted) - skew_general(m_a, s_a, &u)
    });
    McEstimate::from_samples(&values)
}

/// `tr(√ρ)` of a bipartite state's A-marginal, exposed for reports.
pub fn trace_sqrt_reduced(rho: &BipartiteDensityMatrix, party: Party) -> f64 {
    trace(rho.reduced(party).sqrt()).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{mub_construct, operator_basis};
    use crate::channels::depolarizing_kraus;
    use crate::haar::{sample_bipartite_hs, sample_density_hs, sample_product_state, sample_unitary, SeededSampler};
    use crate::linalg::{c64, ComplexVector};
    use crate::states::PureState;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)])
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)])
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::new(ComplexVector::from_element(2, c64(FRAC_1_SQRT_2, 0.0))).unwrap())
    }

    fn bell() -> BipartiteDensityMatrix {
        let mut v = ComplexVector::zeros(4);
        v[0] = c64(FRAC_1_SQRT_2, 0.0);
        v[3] = c64(FRAC_1_SQRT_2, 0.0);
        BipartiteDensityMatrix::from_pure(&PureState::new(v).unwrap(), (2, 2)).unwrap()
    }

    fn sigma_x_basis() -> ProjectiveBasis {
        mub_construct(2).unwrap().bases()[1].clone()
    }

    #[test]
    fn skew_information_examples() {
        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        let id = Observable::new(identity(2)).unwrap();
        assert!(skew_information(&zero, &id).unwrap().abs() < 1e-15);
        // [|0⟩⟨0|, σ_x] = |0⟩⟨1| − |1⟩⟨0|, whose square has trace −2
        let x = Observable::new(pauli_x()).unwrap();
        assert!((skew_information(&zero, &x).unwrap() - 1.0).abs() < 1e-12);
        let z = Observable::new(pauli_z()).unwrap();
        assert!(skew_information(&DensityMatrix::maximally_mixed(2), &z).unwrap().abs() < 1e-15);
        assert!(skew_information(&DensityMatrix::maximally_mixed(3), &z).is_err());
        assert!(Observable::new(ComplexMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)])).is_err());
    }

    #[test]
    fn general_skew_information() {
        let mut s = SeededSampler::new(12);
        for _ in 0..100 {
            let rho = sample_density_hs(&mut s, 3);
            let g = crate::haar::ginibre(&mut s.next_stream(), 3, 3);
            let h = (&g + g.adjoint()).scale(0.5);
            let a = skew_information(&rho, &Observable::new(h.clone()).unwrap()).unwrap();
            let b = skew_information_general(&rho, &h).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            // ½‖[√ρ,K]‖² for a non-Hermitian K
            let c = rho.sqrt() * &g - &g * rho.sqrt();
            let hs: f64 = 0.5 * c.iter().map(|z| z.norm_sqr()).sum::<f64>();
            assert!((skew_information_general(&rho, &g).unwrap() - hs).abs() < 1e-12);
        }
        let rho = sample_density_hs(&mut s, 3);
        assert!(skew_information_general(&rho, &identity(3)).unwrap().abs() < 1e-14);

        let psi = crate::haar::sample_pure(&mut s, 3);
        let pure = DensityMatrix::from_pure(&psi);
        let u = sample_unitary(&mut s, 3);
        let v = psi.amplitudes();
        let expected = 1.0 - v.dotc(&(&u * v)).norm_sqr();
        assert!((skew_information_general(&pure, &u).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityMatrix::validate(ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![
            c64(0.2, 0.0),
            c64(0.3, 0.0),
            c64(0.5, 0.0),
        ])))
        .unwrap();
        assert!(coherence(&diag, &ProjectiveBasis::standard(3)).unwrap().abs() < 1e-12);
        assert!((coherence(&plus(), &ProjectiveBasis::standard(2)).unwrap() - 0.5).abs() < 1e-12);
        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        assert!((coherence(&zero, &sigma_x_basis()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_one_shortcuts_agree_with_definition() {
        let mut s = SeededSampler::new(4);
        for &(da, db) in &[(2, 2), (3, 2), (2, 3)] {
            let rho = sample_bipartite_hs(&mut s, (da, db));
            let basis = ProjectiveBasis::new(sample_unitary(&mut s, da)).unwrap();
            let rho_a = rho.reduced(Party::A);
            let by_def_local: f64 = basis
                .projectors()
                .map(|p| skew_information(&rho_a, &Observable::new(p).unwrap()).unwrap())
                .sum();
            assert!((coherence(&rho_a, &basis).unwrap() - by_def_local).abs() < 1e-12);
            let by_def_global: f64 = basis
                .projectors()
                .map(|p| {
                    let lifted = tensor_product(&p, &identity(db));
                    skew_information(rho.state(), &Observable::new(lifted).unwrap()).unwrap()
                })
                .sum();
            assert!((partial_coherence(&rho, &basis).unwrap() - by_def_global).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_coherence_examples() {
        let mut s = SeededSampler::new(21);
        let a = sample_density_hs(&mut s, 2);
        let b = sample_density_hs(&mut s, 3);
        let prod = BipartiteDensityMatrix::product(&a, &b);
        let basis = ProjectiveBasis::new(sample_unitary(&mut s, 2)).unwrap();
        assert!((partial_coherence(&prod, &basis).unwrap() - coherence(&a, &basis).unwrap()).abs() < 1e-12);

        assert!((partial_coherence(&bell(), &ProjectiveBasis::standard(2)).unwrap() - 0.5).abs() < 1e-12);
        let mixed = BipartiteDensityMatrix::new(DensityMatrix::maximally_mixed(4), (2, 2)).unwrap();
        assert!(partial_coherence(&mixed, &ProjectiveBasis::standard(2)).unwrap().abs() < 1e-12);
        assert!(partial_coherence(&mixed, &ProjectiveBasis::standard(3)).is_err());
    }

    #[test]
    fn correlation_examples() {
        let mut s = SeededSampler::new(22);
        for _ in 0..10 {
            let prod = sample_product_state(&mut s, (3, 2));
            let basis = ProjectiveBasis::new(sample_unitary(&mut s, 3)).unwrap();
            assert!(correlation(&prod, &basis).unwrap().abs() < 1e-12);
        }
        assert!((correlation(&bell(), &ProjectiveBasis::standard(2)).unwrap() - 0.5).abs() < 1e-12);
        assert!((correlation(&bell(), &sigma_x_basis()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn average_coherence_examples() {
        let m2 = mub_construct(2).unwrap();
        assert!(avg_coherence_mub(&DensityMatrix::maximally_mixed(2), &m2).unwrap().abs() < 1e-12);
        assert!(avg_coherence_closed(&DensityMatrix::maximally_mixed(5)).abs() < 1e-12);
        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        assert!((avg_coherence_mub(&zero, &m2).unwrap() - 1.0 / 3.0).abs() < 1e-12);

        let mut s = SeededSampler::new(3);
        let pure3 = DensityMatrix::from_pure(&crate::haar::sample_pure(&mut s, 3));
        assert!((avg_coherence_closed(&pure3) - 0.5).abs() < 1e-10);

        for d in [3, 5] {
            let m = mub_construct(d).unwrap();
            let rho = sample_density_hs(&mut s, d);
            assert!((avg_coherence_mub(&rho, &m).unwrap() - avg_coherence_closed(&rho)).abs() < 1e-10);
        }
        assert!(avg_coherence_mub(&zero, &mub_construct(3).unwrap()).is_err());
    }

    #[test]
    fn average_correlation_examples() {
        let m2 = mub_construct(2).unwrap();
        let mut s = SeededSampler::new(30);
        let prod = sample_product_state(&mut s, (2, 3));
        assert!(avg_correlation_mub(&prod, &m2).unwrap().abs() < 1e-12);
        assert!(avg_correlation_closed(&prod).abs() < 1e-12);
        assert!((avg_correlation_mub(&bell(), &m2).unwrap() - 0.5).abs() < 1e-12);
        assert!((avg_correlation_closed(&bell()) - 0.5).abs() < 1e-12);

        let rho = sample_bipartite_hs(&mut s, (2, 3));
        assert!((avg_correlation_mub(&rho, &m2).unwrap() - avg_correlation_closed(&rho)).abs() < 1e-10);

        let mut v = ComplexVector::zeros(4);
        v[0] = c64(3f64.sqrt() / 2.0, 0.0);
        v[3] = c64(0.5, 0.0);
        let skewed = BipartiteDensityMatrix::from_pure(&PureState::new(v).unwrap(), (2, 2)).unwrap();
        let expected = ((3f64.sqrt() / 2.0 + 0.5).powi(2) - (9.0 / 16.0 + 1.0 / 16.0)) / 3.0;
        assert!((avg_correlation_closed(&skewed) - expected).abs() < 1e-10);
    }

    #[test]
    fn operator_basis_correlation() {
        let g2 = operator_basis(2);
        assert!((correlation_operator_basis(&bell(), &g2).unwrap() - 0.5).abs() < 1e-10);
        let mut s = SeededSampler::new(40);
        let prod = sample_product_state(&mut s, (2, 2));
        assert!(correlation_operator_basis(&prod, &g2).unwrap().abs() < 1e-12);
        for d in 2..5 {
            let rho_a = sample_density_hs(&mut s, d);
            let lhs = local_operator_basis_sum(&rho_a, &operator_basis(d)).unwrap();
            assert!((lhs - (d as f64 - rho_a.trace_sqrt().powi(2))).abs() < 1e-10);
        }
    }

    #[test]
    fn depolarizing_and_twirling() {
        let ch = depolarizing_kraus(&operator_basis(2)).unwrap();
        assert!((depolarizing_correlation(&bell(), &ch).unwrap() - 0.5).abs() < 1e-10);
        assert!((twirling_correlation_closed(&bell()) - 0.75).abs() < 1e-12);
        let mut s = SeededSampler::new(50);
        let prod = sample_product_state(&mut s, (2, 2));
        assert!(depolarizing_correlation(&prod, &ch).unwrap().abs() < 1e-12);
        assert!(twirling_correlation_closed(&prod).abs() < 1e-12);

        let rho = sample_bipartite_hs(&mut s, (3, 2));
        let g3 = operator_basis(3);
        let ch3 = depolarizing_kraus(&g3).unwrap();
        let qob = correlation_operator_basis(&rho, &g3).unwrap();
        assert!((depolarizing_correlation(&rho, &ch3).unwrap() - qob).abs() < 1e-10);
        let ratio = twirling_correlation_closed(&rho) / avg_correlation_closed(&rho);
        assert!((ratio - 4.0 / 3.0).abs() < 1e-10);
        assert!(depolarizing_correlation(&rho, &ch).is_err());
    }

    #[test]
    fn monte_carlo_routes() {
        let est = avg_coherence_mc(&DensityMatrix::maximally_mixed(3), 500, 1);
        assert!(est.mean.abs() < 1e-12);

        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        let est = avg_coherence_mc(&zero, 10_000, 2);
        assert!(est.z_score(1.0 / 3.0) < 5.0, "{est:?}");

        let est = avg_correlation_mc(&bell(), 10_000, 3);
        assert!(est.z_score(0.5) < 5.0, "{est:?}");

        let est = twirling_correlation_mc(&bell(), 10_000, 4);
        assert!(est.z_score(0.75) < 5.0, "{est:?}");

        let mut s = SeededSampler::new(60);
        let prod = sample_product_state(&mut s, (2, 3));
        let est = twirling_correlation_mc(&prod, 2_000, 5);
        assert!(est.z_score(0.0) < 5.0 || est.mean.abs() < 1e-12, "{est:?}");
    }
}
