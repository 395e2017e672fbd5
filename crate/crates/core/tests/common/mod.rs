//! Reference implementations written without the library's linear algebra,
//! used as oracles by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn tr(m: &M) -> Complex64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// Eigenvalues of a Hermitian matrix through the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `m` with every value doubled.
pub fn hermitian_spectrum(m: &M) -> Vec<f64> {
    let n = m.nrows();
    let big = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, col| {
        let z = m[(r % n, col % n)];
        match (r < n, col < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// `√m` from the spectral theorem: eigenvectors of the real embedding,
/// negative rounding clipped to zero.
pub fn sqrt_spectral(m: &M) -> M {
    let n = m.nrows();
    let big = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, col| {
        let z = m[(r % n, col % n)];
        match (r < n, col < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let e = big.symmetric_eigen();
    // Each eigenvalue of m appears twice; summing over all 2n real
    // eigenvectors and halving reproduces the complex spectral sum.
    let mut out = M::zeros(n, n);
    for k in 0..2 * n {
        let w = e.eigenvalues[k].max(0.0).sqrt();
        let v: Vec<Complex64> = (0..n).map(|i| c(e.eigenvectors[(i, k)], e.eigenvectors[(i + n, k)])).collect();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += v[i] * v[j].conj() * w;
            }
        }
    }
    out * c(0.5, 0.0)
}

/// `tr_A` of an operator on `C^da ⊗ C^db` (A-major), by explicit index sums.
pub fn trace_out_a(m: &M, da: usize, db: usize) -> M {
    M::from_fn(db, db, |j, l| (0..da).map(|i| m[(i * db + j, i * db + l)]).sum())
}

/// `tr_B` of an operator on `C^da ⊗ C^db`.
pub fn trace_out_b(m: &M, da: usize, db: usize) -> M {
    M::from_fn(da, da, |i, k| (0..db).map(|j| m[(i * db + j, k * db + j)]).sum())
}

pub fn kron(a: &M, b: &M) -> M {
    let (ra, ca, rb, cb) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    M::from_fn(ra * rb, ca * cb, |r, col| a[(r / rb, col / cb)] * b[(r % rb, col % cb)])
}

/// `(d − (Σ√λ)²)/(d+1)` from the spectrum alone.
pub fn avg_coherence_oracle(rho: &M) -> f64 {
    let d = rho.nrows() as f64;
    let s: f64 = hermitian_spectrum(rho).iter().map(|l| l.max(0.0).sqrt()).sum();
    (d - s * s) / (d + 1.0)
}

/// `[(tr√ρ^A)² − tr((tr_A√ρ)²)]`, the shared numerator of the closed forms.
pub fn correlation_numerator_oracle(rho: &M, da: usize, db: usize) -> f64 {
    let rho_a = trace_out_b(rho, da, db);
    let s_a: f64 = hermitian_spectrum(&rho_a).iter().map(|l| l.max(0.0).sqrt()).sum();
    let m = trace_out_a(&sqrt_spectral(rho), da, db);
    s_a * s_a - tr(&(&m * &m)).re
}

/// Skew information `−½ tr([√ρ, K]²)` computed from the definition with a
/// given square root.
pub fn skew_from_root(root: &M, k: &M) -> f64 {
    let comm = root * k - k * root;
    -0.5 * tr(&(&comm * &comm)).re
}

/// `∫ U†AUXU†BU dU` by the Weingarten expansion over `S_2 × S_2`, summed
/// over every index tuple.
pub fn weingarten_second_moment(a: &M, b: &M, x: &M) -> M {
    let d = a.nrows();
    let df = d as f64;
    let wg_id = 1.0 / (df * df - 1.0);
    let wg_swap = -1.0 / (df * (df * df - 1.0));
    let delta = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
    let mut out = M::zeros(d, d);
    // Entry (r,s) = Σ conj(U_ar) A_ab U_bc X_ce conj(U_fe) B_fg U_gs.
    for r in 0..d {
        for s in 0..d {
            let mut acc = c(0.0, 0.0);
            for ai in 0..d {
                for bi in 0..d {
                    for ci in 0..d {
                        for ei in 0..d {
                            for fi in 0..d {
                                for gi in 0..d {
                                    let coeff = a[(ai, bi)] * x[(ci, ei)] * b[(fi, gi)];
                                    if coeff == c(0.0, 0.0) {
                                        continue;
                                    }
                                    // Rows (b, g) against conjugate rows (a, f); columns (c, s) against (r, e).
                                    let row_id = delta(bi, ai) * delta(gi, fi);
                                    let row_sw = delta(bi, fi) * delta(gi, ai);
                                    let col_id = delta(ci, r) * delta(s, ei);
                                    let col_sw = delta(ci, ei) * delta(s, r);
                                    let w = row_id * col_id * wg_id
                                        + row_sw * col_sw * wg_id
                                        + row_id * col_sw * wg_swap
                                        + row_sw * col_id * wg_swap;
                                    acc += coeff * w;
                                }
                            }
                        }
                    }
                }
            }
            out[(r, s)] = acc;
        }
    }
    out
}
