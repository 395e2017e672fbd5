//! Orthonormal measurement bases, complete sets of mutually unbiased bases
//! and the Hermitian operator basis `{G_i}`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{dim_mismatch, QacError, Result};
use crate::field::{prime_power, GaloisField, MAX_ORDER};
use crate::linalg::{c64, identity, max_abs_diff, unitarity_residual, ComplexMatrix, ComplexVector};

/// Tolerance every certified basis and MUB identity must meet.
pub const BASIS_TOL: f64 = 1e-10;

/// An orthonormal basis `{|b_i⟩}` of `C^d`, stored as the columns of a
/// unitary matrix. Its rank-one projectors form a von Neumann measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveBasis {
    vectors: ComplexMatrix,
}

impl ProjectiveBasis {
    /// Accepts the columns of `vectors` if their Gram matrix is the identity
    /// within `BASIS_TOL`.
    pub fn new(vectors: ComplexMatrix) -> Result<Self> {
        if !vectors.is_square() || vectors.nrows() == 0 {
            return Err(dim_mismatch(format!(
                "basis matrix must be square and non-empty, got {}x{}",
                vectors.nrows(),
                vectors.ncols()
            )));
        }
        let residual = unitarity_residual(&vectors);
        if residual > BASIS_TOL {
            return Err(QacError::NotOrthonormal { residual });
        }
        Ok(Self { vectors })
    }

    pub(crate) fn from_unitary_unchecked(vectors: ComplexMatrix) -> Self {
        Self { vectors }
    }

    pub fn standard(d: usize) -> Self {
        Self { vectors: identity(d) }
    }

    /// Columns `ω^{jk}/√d` with `ω = e^{2πi/d}`.
    pub fn fourier(d: usize) -> Self {
        let norm = 1.0 / (d as f64).sqrt();
        let vectors = ComplexMatrix::from_fn(d, d, |j, k| {
            Complex64::from_polar(norm, 2.0 * PI * ((j * k) % d) as f64 / d as f64)
        });
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// The unitary whose columns are the basis vectors.
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> ComplexVector {
        self.vectors.column(i).into_owned()
    }

    pub fn projector(&self, i: usize) -> ComplexMatrix {
        let v = self.vectors.column(i);
        v * v.adjoint()
    }

    pub fn projectors(&self) -> impl Iterator<Item = ComplexMatrix> + '_ {
        (0..self.dim()).map(|i| self.projector(i))
    }

    /// `{u|b_i⟩}`, i.e. the measurement `UΠU†`.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(dim_mismatch("rotated: unitary dimension differs from basis"));
        }
        Self::new(u * &self.vectors)
    }
}

/// Makes the first component of every column real and non-negative.
fn fix_phases(m: &mut ComplexMatrix) {
    for mut col in m.column_iter_mut() {
        let first = col[0];
        if first.norm() > 1e-12 {
            let phase = first.conj() / first.norm();
            for z in col.iter_mut() {
                *z *= phase;
            }
            col[0] = c64(col[0].re.max(0.0), 0.0);
        }
    }
}

/// Residuals of the three defining identities of a complete MUB set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MubCertificate {
    pub dim: usize,
    pub num_bases: usize,
    /// `max|⟨b_ti|b_tj⟩ - δ_ij|` over all bases.
    pub orthonormality: f64,
    /// `max| |⟨b_tj|b_sk⟩|² - 1/d |` over `t ≠ s`.
    pub unbiasedness: f64,
    /// `max|Σ_{t,i} |b_ti⟩⟨b_ti| - (d+1)I|`.
    pub completeness: f64,
    /// `max|Σ_{t,i} |b_ti⟩⟨b_ti|⊗|b_ti⟩⟨b_ti| - I⊗I - F|`.
    pub second_moment: f64,
    pub pass: bool,
}

impl MubCertificate {
    pub fn pairwise_pass(&self) -> bool {
        self.orthonormality <= BASIS_TOL && self.unbiasedness <= BASIS_TOL
    }
}

/// Computes the certification residuals of a candidate family of bases.
pub fn mub_certify(candidate: &[ProjectiveBasis]) -> Result<MubCertificate> {
    let d = candidate.first().map(ProjectiveBasis::dim).ok_or_else(|| dim_mismatch("mub_certify: empty family"))?;
    if candidate.iter().any(|b| b.dim() != d) {
        return Err(dim_mismatch("mub_certify: bases have different dimensions"));
    }
    let orthonormality = candidate.iter().map(|b| unitarity_residual(b.unitary())).fold(0.0, f64::max);

    let target = 1.0 / d as f64;
    let mut unbiasedness = 0.0_f64;
    for (t, bt) in candidate.iter().enumerate() {
        for bs in &candidate[t + 1..] {
            let overlaps = bt.unitary().adjoint() * bs.unitary();
            for z in overlaps.iter() {
                unbiasedness = unbiasedness.max((z.norm_sqr() - target).abs());
            }
        }
    }

    let frame: ComplexMatrix = candidate.iter().map(|b| b.unitary() * b.unitary().adjoint()).sum();
    let completeness = max_abs_diff(&frame, &identity(d).scale((d + 1) as f64));
    let second_moment = second_moment_residual(candidate, d);

    let pass = orthonormality <= BASIS_TOL
        && unbiasedness <= BASIS_TOL
        && completeness <= BASIS_TOL
        && second_moment <= BASIS_TOL;
    Ok(MubCertificate { dim: d, num_bases: candidate.len(), orthonormality, unbiasedness, completeness, second_moment, pass })
}

/// Max-norm of `Σ_v |v⟩⟨v|^{⊗2} - I⊗I - F`.
///
/// Both sides are invariant under swapping the two tensor factors in either
/// the row or column index, so only unordered index pairs `{a,b}` are
/// formed. With `Y[{a,b}, v] = v_a v_b` the sum is `Y·Y†`, evaluated as two
/// real products.
fn second_moment_residual(candidate: &[ProjectiveBasis], d: usize) -> f64 {
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect();
    let nvec: usize = candidate.len() * d;
    let np = pairs.len();
    // [Re Y | Im Y]
    let mut y = DMatrix::<f64>::zeros(np, 2 * nvec);
    let mut col = 0;
    for basis in candidate {
        for i in 0..d {
            let v = basis.unitary().column(i);
            for (p, &(a, b)) in pairs.iter().enumerate() {
                let z = v[a] * v[b];
                y[(p, col)] = z.re;
                y[(p, nvec + col)] = z.im;
            }
            col += 1;
        }
    }
    let yr = y.columns(0, nvec);
    let yi = y.columns(nvec, nvec);
    let s_re = &y * y.transpose();
    let cross = yi * yr.transpose();
    let mut worst = 0.0_f64;
    for (p, &(a, b)) in pairs.iter().enumerate() {
        for (p2, &(c, e)) in pairs.iter().enumerate() {
            let expected = ((a == c && b == e) as u8 + (a == e && b == c) as u8) as f64;
            let im = cross[(p, p2)] - cross[(p2, p)];
            let diff = Complex64::new(s_re[(p, p2)] - expected, im);
            worst = worst.max(diff.norm());
        }
    }
    worst
}

/// A certified complete set of `d+1` mutually unbiased bases.
#[derive(Debug, Clone)]
pub struct MubSet {
    bases: Vec<ProjectiveBasis>,
    certificate: MubCertificate,
}

impl MubSet {
    /// Certifies `bases` and rejects the family unless it is a complete MUB set.
    pub fn from_bases(bases: Vec<ProjectiveBasis>) -> Result<Self> {
        let certificate = mub_certify(&bases)?;
        let d = certificate.dim;
        if bases.len() != d + 1 || !certificate.pass {
            return Err(QacError::CertificationFailed(format!(
                "{} bases in dimension {d}: orthonormality {:e}, unbiasedness {:e}, completeness {:e}, second moment {:e}",
                bases.len(),
                certificate.orthonormality,
                certificate.unbiasedness,
                certificate.completeness,
                certificate.second_moment
            )));
        }
        Ok(Self { bases, certificate })
    }

    pub fn dim(&self) -> usize {
        self.certificate.dim
    }

    pub fn bases(&self) -> &[ProjectiveBasis] {
        &self.bases
    }

    pub fn certificate(&self) -> &MubCertificate {
        &self.certificate
    }
}

/// Builds the complete set of `d+1` MUBs for a prime power `d ≤ 64`.
///
/// The first basis is always the computational one. For `d = 2` the other
/// two are the σ_x and σ_y eigenbases. For odd characteristic, basis `a`
/// has vectors `|v_{a,b}⟩_x = ω_p^{tr(a x² + b x)}/√d` indexed by field
/// elements. In characteristic 2 the quadratic phase is replaced by
/// `i^{xᵀ A_a x}` with `A_a[i][j] = tr(a e_i e_j)` evaluated mod 4 on the
/// coordinate vector of `x`, and the linear phase by `(-1)^{tr(b x)}`.
pub fn mub_construct(d: usize) -> Result<MubSet> {
    let (p, k) = prime_power(d).ok_or(QacError::NotPrimePower(d))?;
    if d > MAX_ORDER {
        return Err(QacError::InvalidArgument(format!("MUB dimension {d} exceeds {MAX_ORDER}")));
    }
    let mut bases = vec![ProjectiveBasis::standard(d)];
    if d == 2 {
        let h = FRAC_1_SQRT_2;
        let x = ComplexMatrix::from_row_slice(2, 2, &[c64(h, 0.0), c64(h, 0.0), c64(h, 0.0), c64(-h, 0.0)]);
        let y = ComplexMatrix::from_row_slice(2, 2, &[c64(h, 0.0), c64(h, 0.0), c64(0.0, h), c64(0.0, -h)]);
        bases.push(ProjectiveBasis::from_unitary_unchecked(x));
        bases.push(ProjectiveBasis::from_unitary_unchecked(y));
        return MubSet::from_bases(bases);
    }
    let field = GaloisField::new(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    if p == 2 {
        let coords = |x: usize| -> Vec<usize> { (0..k).map(|i| (x >> i) & 1).collect() };
        for a in 0..d {
            // e_i = x^i has index 2^i
            let form: Vec<Vec<usize>> = (0..k)
                .map(|i| (0..k).map(|j| field.trace(field.mul(a, field.mul(1 << i, 1 << j)))).collect())
                .collect();
            let quad: Vec<usize> = (0..d)
                .map(|x| {
                    let v = coords(x);
                    let mut acc = 0;
                    for i in 0..k {
                        for j in 0..k {
                            acc += v[i] * v[j] * form[i][j];
                        }
                    }
                    acc % 4
                })
                .collect();
            let m = ComplexMatrix::from_fn(d, d, |x, b| {
                let sign = if field.trace(field.mul(b, x)) == 1 { 2 } else { 0 };
                Complex64::from_polar(norm, PI / 2.0 * ((quad[x] + sign) % 4) as f64)
            });
            bases.push(ProjectiveBasis::from_unitary_unchecked(m));
        }
    } else {
        for a in 0..d {
            let m = ComplexMatrix::from_fn(d, d, |x, b| {
                let phase = field.add(field.mul(a, field.mul(x, x)), field.mul(b, x));
                Complex64::from_polar(norm, 2.0 * PI * field.trace(phase) as f64 / p as f64)
            });
            bases.push(ProjectiveBasis::from_unitary_unchecked(m));
        }
    }
    MubSet::from_bases(bases)
}

/// Maps every vector `|b⟩ ↦ u†|b⟩` and re-certifies the result.
pub fn conjugate_basis_set(mubs: &MubSet, u: &ComplexMatrix) -> Result<MubSet> {
    let d = mubs.dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(dim_mismatch(format!("unitary is {}x{}, MUB dimension {d}", u.nrows(), u.ncols())));
    }
    let residual = unitarity_residual(u);
    if residual > BASIS_TOL {
        return Err(QacError::NotUnitary { residual });
    }
    let ud = u.adjoint();
    let bases = mubs
        .bases()
        .iter()
        .map(|b| {
            let mut m = &ud * b.unitary();
            fix_phases(&mut m);
            ProjectiveBasis::from_unitary_unchecked(m)
        })
        .collect();
    MubSet::from_bases(bases)
}

/// Hilbert–Schmidt orthonormal basis of the Hermitian operators on `C^d`:
/// `|i⟩⟨i|`, then `S_ij = (|i⟩⟨j|+|j⟩⟨i|)/√2` and finally
/// `T_ij = i(|i⟩⟨j|-|j⟩⟨i|)/√2` for `i < j` in lexicographic order.
#[derive(Debug, Clone)]
pub struct HermitianOperatorBasis {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl HermitianOperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }
}

pub fn operator_basis(d: usize) -> HermitianOperatorBasis {
    let mut operators = Vec::with_capacity(d * d);
    let unit = |i: usize, j: usize, z: Complex64| {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(i, j)] = z;
        m
    };
    for i in 0..d {
        operators.push(unit(i, i, c64(1.0, 0.0)));
    }
    let h = FRAC_1_SQRT_2;
    for i in 0..d {
        for j in i + 1..d {
            operators.push(unit(i, j, c64(h, 0.0)) + unit(j, i, c64(h, 0.0)));
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            operators.push(unit(i, j, c64(0.0, h)) + unit(j, i, c64(0.0, -h)));
        }
    }
    HermitianOperatorBasis { dim: d, operators }
}
