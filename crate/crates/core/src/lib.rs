//! Average coherence and average correlation of quantum states, built on
//! the Wigner–Yanase skew information.
//!
//! The library evaluates coherence `C(ρ|Π)`, the bipartite correlation
//! `Q(ρ^AB|Π)` and their basis averages by independent routes: explicit
//! averaging over complete sets of mutually unbiased bases ([`bases`]),
//! Monte-Carlo integration over Haar-random bases ([`haar`]), sums over a
//! Hermitian operator basis or a depolarizing Kraus set ([`channels`]), and
//! closed forms ([`measures`]). The [`duality`] module relates the average
//! correlation to wave and particle features of the reduced state, and
//! [`verify`] bundles the identities into reproducible check suites that
//! the `qac` binary exposes.
//!
//! ```
//! use qac::{bases::mub_construct, haar, measures};
//!
//! let mut sampler = haar::SeededSampler::new(7);
//! let rho = haar::sample_bipartite_hs(&mut sampler, (3, 2));
//! let mubs = mub_construct(3).unwrap();
//! let by_mubs = measures::avg_correlation_mub(&rho, &mubs).unwrap();
//! let closed = measures::avg_correlation_closed(&rho);
//! assert!((by_mubs - closed).abs() < 1e-10);
//! ```

pub mod bases;
pub mod channels;
pub mod cli;
pub mod duality;
pub mod error;
pub mod field;
pub mod fmt;
pub mod haar;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod states;
pub mod verify;

pub use bases::{HermitianOperatorBasis, MubSet, ProjectiveBasis};
pub use channels::KrausChannel;
pub use error::{QacError, Result};
pub use haar::{McEstimate, SeededSampler};
pub use linalg::{ComplexMatrix, ComplexVector, Party};
pub use measures::Observable;
pub use states::{BipartiteDensityMatrix, DensityMatrix, PureState};
