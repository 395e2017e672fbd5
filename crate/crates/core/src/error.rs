use thiserror::Error;

use crate::fmt::sig;

/// Every failure the library can report. Numerical variants carry the
/// measured residual so diagnostics can say by how much an invariant broke.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QacError {
    #[error("NotHermitian residual {}", sig(*.residual, 6))]
    NotHermitian { residual: f64 },
    #[error("TraceNotOne residual {}", sig(*.residual, 6))]
    TraceNotOne { residual: f64 },
    #[error("NotPositive eigenvalue {}", sig(*.eigenvalue, 6))]
    NotPositive { eigenvalue: f64 },
    #[error("NotNormalized norm {}", sig(*.norm, 12))]
    NotNormalized { norm: f64 },
    #[error("NotUnitary residual {}", sig(*.residual, 6))]
    NotUnitary { residual: f64 },
    #[error("NotOrthonormal residual {}", sig(*.residual, 6))]
    NotOrthonormal { residual: f64 },
    #[error("CompletenessViolated residual {}", sig(*.residual, 6))]
    CompletenessViolated { residual: f64 },
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("CertificationFailed: {0}")]
    CertificationFailed(String),
    #[error("NotPrimePower: {0} is not a prime power")]
    NotPrimePower(usize),
    #[error("DimensionTooSmall: {0}")]
    DimensionTooSmall(String),
    #[error("NonFinite: matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, QacError>;

pub(crate) fn dim_mismatch(what: impl Into<String>) -> QacError {
    QacError::DimensionMismatch(what.into())
}
