//! The average correlation of a bipartite state by every available route,
//! and its behavior along a family of entangled pure states.

use qac::bases::{mub_construct, operator_basis};
use qac::haar::{sample_bipartite_hs, SeededSampler};
use qac::linalg::c64;
use qac::measures::{avg_correlation_closed, avg_correlation_mc, avg_correlation_mub, correlation_operator_basis};
use qac::{BipartiteDensityMatrix, ComplexVector, PureState};

fn main() -> qac::Result<()> {
    let dims = (2, 3);
    let rho = sample_bipartite_hs(&mut SeededSampler::new(11), dims);

    let mub = avg_correlation_mub(&rho, &mub_construct(dims.0)?)?;
    let ob = correlation_operator_basis(&rho, &operator_basis(dims.0))?;
    let closed = avg_correlation_closed(&rho);
    let mc = avg_correlation_mc(&rho, 20_000, 3);
    println!("random state on {dims:?}");
    println!("  MUB average     {mub:.12}");
    println!("  operator basis  {ob:.12}");
    println!("  closed form     {closed:.12}");
    println!("  Haar average    {:.6} ± {:.6}", mc.mean, mc.stderr);

    println!("\ncos t|00> + sin t|11>");
    for k in 0..=4 {
        let t = k as f64 * std::f64::consts::FRAC_PI_8 / 2.0;
        let psi = PureState::new(ComplexVector::from_vec(vec![c64(t.cos(), 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(t.sin(), 0.0)]))?;
        let q = avg_correlation_closed(&BipartiteDensityMatrix::from_pure(&psi, (2, 2))?);
        println!("  t = {t:.4}  Q = {q:.6}");
    }
    Ok(())
}
