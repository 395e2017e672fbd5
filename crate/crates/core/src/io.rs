//! JSON file formats.
//!
//! Complex arrays are stored as separate `re`/`im` arrays, row-major.
//! Composite indices follow the A-major convention, recorded in every
//! state file as `"index_convention": "A-major"`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bases::{MubSet, ProjectiveBasis};
use crate::channels::KrausChannel;
use crate::error::QacError;
use crate::linalg::{c64, ComplexMatrix, ComplexVector};
use crate::states::{BipartiteDensityMatrix, DensityMatrix, PureState};

pub const FORMAT_VERSION: u32 = 1;
pub const INDEX_CONVENTION: &str = "A-major";

/// Reading or decoding a file failed before any physics was checked.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("invalid file contents: {0}")]
    Format(String),
}

/// Either a file-level problem or a violated physical invariant.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Invalid(#[from] QacError),
}

fn format_err(msg: impl Into<String>) -> FileError {
    FileError::Format(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| {
            (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect()).collect()
        };
        Self { re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, FileError> {
        let rows = self.re.len();
        if rows == 0 || self.im.len() != rows {
            return Err(format_err("matrix needs matching, non-empty re and im arrays"));
        }
        let cols = self.re[0].len();
        if cols == 0 || self.re.iter().chain(&self.im).any(|row| row.len() != cols) {
            return Err(format_err("matrix rows must all have the same non-zero length"));
        }
        if self.re.iter().chain(&self.im).flatten().any(|x| !x.is_finite()) {
            return Err(format_err("matrix entries must be finite"));
        }
        Ok(ComplexMatrix::from_fn(rows, cols, |r, c| c64(self.re[r][c], self.im[r][c])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexVector> for VectorJson {
    fn from(v: &ComplexVector) -> Self {
        Self { re: v.iter().map(|z| z.re).collect(), im: v.iter().map(|z| z.im).collect() }
    }
}

impl VectorJson {
    pub fn to_vector(&self) -> Result<ComplexVector, FileError> {
        if self.re.is_empty() || self.re.len() != self.im.len() {
            return Err(format_err("vector needs matching, non-empty re and im arrays"));
        }
        if self.re.iter().chain(&self.im).any(|x| !x.is_finite()) {
            return Err(format_err("vector entries must be finite"));
        }
        Ok(ComplexVector::from_iterator(self.re.len(), self.re.iter().zip(&self.im).map(|(&r, &i)| c64(r, i))))
    }
}

fn default_state_format() -> String {
    "qac-state".into()
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

fn default_convention() -> String {
    INDEX_CONVENTION.into()
}

/// A density matrix or pure state with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default = "default_state_format")]
    pub format: String,
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default = "default_convention")]
    pub index_convention: String,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pure: Option<VectorJson>,
}

/// Decoded contents of a [`StateFile`], already validated.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub dims: Vec<usize>,
    pub density: DensityMatrix,
    pub pure: Option<PureState>,
}

impl LoadedState {
    /// The state as bipartite; `dims` overrides the file's factorization.
    pub fn bipartite(&self, dims: Option<(usize, usize)>) -> Result<BipartiteDensityMatrix, QacError> {
        let dims = match dims {
            Some(d) => d,
            None => match self.dims.as_slice() {
                [a, b] => (*a, *b),
                _ => {
                    return Err(QacError::DimensionMismatch(
                        "this measure needs a bipartite state: give two dims in the file or --dims".into(),
                    ))
                }
            },
        };
        BipartiteDensityMatrix::new(self.density.clone(), dims)
    }
}

impl StateFile {
    pub fn from_density(m: &ComplexMatrix, dims: &[usize]) -> Self {
        Self {
            format: default_state_format(),
            version: FORMAT_VERSION,
            index_convention: default_convention(),
            dims: dims.to_vec(),
            matrix: Some(m.into()),
            pure: None,
        }
    }

    pub fn from_pure(psi: &PureState, dims: &[usize]) -> Self {
        Self {
            format: default_state_format(),
            version: FORMAT_VERSION,
            index_convention: default_convention(),
            dims: dims.to_vec(),
            matrix: None,
            pure: Some(psi.amplitudes().into()),
        }
    }

    /// Structural decoding (shapes, dims) followed by physical validation.
    pub fn decode(&self) -> Result<LoadedState, LoadError> {
        if self.index_convention != INDEX_CONVENTION {
            return Err(format_err(format!("unsupported index_convention {:?}", self.index_convention)).into());
        }
        if self.dims.is_empty() || self.dims.len() > 2 || self.dims.contains(&0) {
            return Err(format_err("dims must list one or two positive integers").into());
        }
        let total: usize = self.dims.iter().product();
        match (&self.matrix, &self.pure) {
            (Some(m), None) => {
                let m = m.to_matrix()?;
                if m.nrows() != total || m.ncols() != total {
                    return Err(format_err(format!("matrix is {}x{} but dims multiply to {total}", m.nrows(), m.ncols())).into());
                }
                Ok(LoadedState { dims: self.dims.clone(), density: DensityMatrix::validate(m)?, pure: None })
            }
            (None, Some(v)) => {
                let v = v.to_vector()?;
                if v.len() != total {
                    return Err(format_err(format!("pure state has {} amplitudes but dims multiply to {total}", v.len())).into());
                }
                let psi = PureState::new(v)?;
                Ok(LoadedState { dims: self.dims.clone(), density: DensityMatrix::from_pure(&psi), pure: Some(psi) })
            }
            _ => Err(format_err("a state file needs exactly one of \"matrix\" or \"pure\"").into()),
        }
    }
}

/// A single matrix: a unitary whose columns form a basis, an observable, …
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    #[serde(default = "default_matrix_format")]
    pub format: String,
    #[serde(default = "default_version")]
    pub version: u32,
    pub matrix: MatrixJson,
}

fn default_matrix_format() -> String {
    "qac-matrix".into()
}

impl MatrixFile {
    pub fn new(m: &ComplexMatrix) -> Self {
        Self { format: default_matrix_format(), version: FORMAT_VERSION, matrix: m.into() }
    }
}

/// A family of bases, each stored as a unitary with the vectors as columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubFile {
    #[serde(default = "default_mub_format")]
    pub format: String,
    #[serde(default = "default_version")]
    pub version: u32,
    pub dim: usize,
    pub bases: Vec<MatrixJson>,
}

fn default_mub_format() -> String {
    "qac-mub".into()
}

impl From<&MubSet> for MubFile {
    fn from(m: &MubSet) -> Self {
        Self {
            format: default_mub_format(),
            version: FORMAT_VERSION,
            dim: m.dim(),
            bases: m.bases().iter().map(|b| b.unitary().into()).collect(),
        }
    }
}

impl MubFile {
    /// Decodes every basis, checking orthonormality but not mutual unbiasedness.
    pub fn to_bases(&self) -> Result<Vec<ProjectiveBasis>, LoadError> {
        if self.bases.is_empty() {
            return Err(format_err("MUB file lists no bases").into());
        }
        let mut out = Vec::with_capacity(self.bases.len());
        for m in &self.bases {
            let m = m.to_matrix()?;
            if m.nrows() != self.dim || m.ncols() != self.dim {
                return Err(format_err(format!("basis is {}x{}, file dim {}", m.nrows(), m.ncols(), self.dim)).into());
            }
            out.push(ProjectiveBasis::new(m)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    #[serde(default = "default_channel_format")]
    pub format: String,
    #[serde(default = "default_version")]
    pub version: u32,
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixJson>,
}

fn default_channel_format() -> String {
    "qac-channel".into()
}

impl From<&KrausChannel> for ChannelFile {
    fn from(ch: &KrausChannel) -> Self {
        Self {
            format: default_channel_format(),
            version: FORMAT_VERSION,
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus: ch.kraus().iter().map(Into::into).collect(),
        }
    }
}

impl ChannelFile {
    pub fn to_channel(&self) -> Result<KrausChannel, LoadError> {
        let kraus = self.kraus.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
        if kraus.iter().any(|k| k.shape() != (self.dim_out, self.dim_in)) {
            return Err(format_err("Kraus operator shape differs from dim_out x dim_in").into());
        }
        Ok(KrausChannel::new(kraus)?)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FileError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| FileError::Io { path: display.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| FileError::Json { path: display, source })
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FileError> {
    fs::write(path, to_json_string(value)).map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

pub fn load_state(path: &Path) -> Result<LoadedState, LoadError> {
    read_json::<StateFile>(path)?.decode()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::mub_construct;
    use crate::haar::{sample_density_hs, SeededSampler};
    use crate::linalg::max_abs_diff;
    use proptest::prelude::*;

    #[test]
    fn state_file_layout() {
        let rho = DensityMatrix::maximally_mixed(2);
        let json = to_json_string(&StateFile::from_density(rho.matrix(), &[2]));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["index_convention"], "A-major");
        assert_eq!(v["matrix"]["re"][0][0], 0.5);
        assert!(v.get("pure").is_none());
    }

    #[test]
    fn decode_reports_the_right_failure_kind() {
        let mut f = StateFile::from_density(&ComplexMatrix::identity(2, 2).scale(0.45), &[2]);
        assert!(matches!(f.decode(), Err(LoadError::Invalid(QacError::TraceNotOne { .. }))));
        f.dims = vec![3];
        assert!(matches!(f.decode(), Err(LoadError::File(FileError::Format(_)))));
        let both = StateFile { pure: Some(VectorJson { re: vec![1.0], im: vec![0.0] }), ..StateFile::from_density(&ComplexMatrix::identity(1, 1), &[1]) };
        assert!(matches!(both.decode(), Err(LoadError::File(_))));
        let ragged = MatrixJson { re: vec![vec![1.0, 0.0], vec![0.0]], im: vec![vec![0.0, 0.0], vec![0.0]] };
        assert!(ragged.to_matrix().is_err());
    }

    #[test]
    fn mub_and_channel_files() {
        let m = mub_construct(3).unwrap();
        let file = MubFile::from(&m);
        let back: MubFile = serde_json::from_str(&to_json_string(&file)).unwrap();
        let bases = back.to_bases().unwrap();
        assert!(MubSet::from_bases(bases).is_ok());

        let ch = crate::channels::random_channel(2, 2, 1).unwrap();
        let back: ChannelFile = serde_json::from_str(&to_json_string(&ChannelFile::from(&ch))).unwrap();
        let ch2 = back.to_channel().unwrap();
        assert_eq!(ch.kraus(), ch2.kraus());
    }

    proptest! {
        #[test]
        fn state_files_round_trip_bitwise(seed in any::<u64>(), d in 1usize..6) {
            let rho = sample_density_hs(&mut SeededSampler::new(seed), d);
            let text = to_json_string(&StateFile::from_density(rho.matrix(), &[d]));
            let back: StateFile = serde_json::from_str(&text).unwrap();
            let loaded = back.decode().unwrap();
            prop_assert_eq!(max_abs_diff(loaded.density.matrix(), rho.matrix()), 0.0);
        }
    }
}
