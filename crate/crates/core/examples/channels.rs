//! Channel-based correlations: operator basis, depolarizing Kraus set and
//! twirling, plus contractivity under a random channel on B.

use qac::bases::operator_basis;
use qac::channels::{depolarizing_kraus, random_channel};
use qac::haar::{sample_bipartite_hs, SeededSampler};
use qac::measures::{
    avg_correlation_closed, correlation_operator_basis, depolarizing_correlation, twirling_correlation_closed,
    twirling_correlation_mc,
};

fn main() -> qac::Result<()> {
    let dims = (3, 2);
    let rho = sample_bipartite_hs(&mut SeededSampler::new(21), dims);
    let g = operator_basis(dims.0);
    let depol = depolarizing_kraus(&g)?;

    let ob = correlation_operator_basis(&rho, &g)?;
    let de = depolarizing_correlation(&rho, &depol)?;
    let tw = twirling_correlation_closed(&rho);
    let tw_mc = twirling_correlation_mc(&rho, 20_000, 4);
    println!("operator basis     {ob:.12}");
    println!("depolarizing       {de:.12}");
    println!("twirling (closed)  {tw:.12}  ratio {:.12}", ob / tw);
    println!("twirling (Haar)    {:.6} ± {:.6}", tw_mc.mean, tw_mc.stderr);

    let ch = random_channel(dims.1, 2, 22)?;
    let after = ch.apply_on_b(&rho)?;
    println!("\nQ before channel on B {:.6}, after {:.6}", avg_correlation_closed(&rho), avg_correlation_closed(&after));
    Ok(())
}
