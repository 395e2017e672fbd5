//! Quantum channels in Kraus form.

use crate::bases::HermitianOperatorBasis;
use crate::error::{dim_mismatch, QacError, Result};
use crate::haar::{haar_unitary, SeededSampler};
use crate::linalg::{identity, max_abs_diff, tensor_product, ComplexMatrix};
use crate::states::{BipartiteDensityMatrix, DensityMatrix};

/// Tolerance on `Σ K†K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// A CPTP map `ρ ↦ Σ KρK†`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Checks shapes and trace preservation.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| dim_mismatch("a channel needs at least one Kraus operator"))?;
        let (dim_out, dim_in) = first.shape();
        if dim_in == 0 || dim_out == 0 {
            return Err(dim_mismatch("Kraus operators must be non-empty"));
        }
        if kraus.iter().any(|k| k.shape() != (dim_out, dim_in)) {
            return Err(dim_mismatch("Kraus operators have inconsistent shapes"));
        }
        let channel = Self { dim_in, dim_out, kraus };
        let residual = channel.completeness_residual();
        if !(residual <= COMPLETENESS_TOL) {
            return Err(QacError::CompletenessViolated { residual });
        }
        Ok(channel)
    }

    pub fn identity(d: usize) -> Self {
        Self { dim_in: d, dim_out: d, kraus: vec![identity(d)] }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `max|Σ K†K − I|`.
    pub fn completeness_residual(&self) -> f64 {
        let sum: ComplexMatrix = self.kraus.iter().map(|k| k.adjoint() * k).sum();
        max_abs_diff(&sum, &identity(self.dim_in))
    }

    fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.kraus.iter().map(|k| k * m * k.adjoint()).sum()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(dim_mismatch(format!("channel input dim {} vs state dim {}", self.dim_in, rho.dim())));
        }
        Ok(DensityMatrix::from_trusted(self.apply_matrix(rho.matrix())))
    }

    /// `(I_A ⊗ Φ)(ρ^AB)`.
    pub fn apply_on_b(&self, rho: &BipartiteDensityMatrix) -> Result<BipartiteDensityMatrix> {
        let (da, db) = rho.dims();
        if db != self.dim_in {
            return Err(dim_mismatch(format!("channel input dim {} vs d_B = {db}", self.dim_in)));
        }
        let id_a = identity(da);
        let out: ComplexMatrix = self
            .kraus
            .iter()
            .map(|k| {
                let lifted = tensor_product(&id_a, k);
                &lifted * rho.matrix() * lifted.adjoint()
            })
            .sum();
        Ok(BipartiteDensityMatrix::from_trusted(out, (da, self.dim_out)))
    }
}

/// Depolarizing channel with Kraus set `{I/√(d+1)} ∪ {G_i/√(d+1)}`.
pub fn depolarizing_kraus(g: &HermitianOperatorBasis) -> Result<KrausChannel> {
    let d = g.dim();
    let scale = 1.0 / ((d + 1) as f64).sqrt();
    let kraus = std::iter::once(identity(d).scale(scale))
        .chain(g.operators().iter().map(|op| op.scale(scale)))
        .collect();
    KrausChannel::new(kraus)
}

/// Random channel on `C^d` from the `env_dim` blocks of a Haar-random
/// isometry `C^d → C^d ⊗ C^env`.
pub fn random_channel(d: usize, env_dim: usize, seed: u64) -> Result<KrausChannel> {
    if d == 0 || env_dim == 0 {
        return Err(QacError::InvalidArgument("random_channel needs d ≥ 1 and env_dim ≥ 1".into()));
    }
    let mut sampler = SeededSampler::new(seed);
    random_channel_from(&mut sampler, d, env_dim)
}

pub fn random_channel_from(s: &mut SeededSampler, d: usize, env_dim: usize) -> Result<KrausChannel> {
    let u = haar_unitary(&mut s.next_stream(), d * env_dim);
    let isometry = u.columns(0, d);
    let kraus = (0..env_dim).map(|e| isometry.rows(e * d, d).into_owned()).collect();
    KrausChannel::new(kraus)
}
