//! Average coherence of a random qutrit state, three ways.

use qac::bases::mub_construct;
use qac::haar::{sample_density_hs, SeededSampler};
use qac::measures::{avg_coherence_closed, avg_coherence_mc, avg_coherence_mub};

fn main() -> qac::Result<()> {
    let d = 3;
    let rho = sample_density_hs(&mut SeededSampler::new(1), d);
    let mubs = mub_construct(d)?;

    let by_mubs = avg_coherence_mub(&rho, &mubs)?;
    let closed = avg_coherence_closed(&rho);
    let mc = avg_coherence_mc(&rho, 20_000, 2);

    println!("d = {d}, purity {:.6}", rho.purity());
    println!("over {} MUBs   {by_mubs:.12}", mubs.bases().len());
    println!("closed form     {closed:.12}");
    println!("Haar average    {:.6} ± {:.6} (z = {:.2})", mc.mean, mc.stderr, mc.z_score(closed));
    Ok(())
}
