//! Second-moment Haar integral: closed form against sampling.

use qac::haar::{ginibre, second_moment_closed, second_moment_mc, SeededSampler};

fn main() -> qac::Result<()> {
    let d = 3;
    let mut rng = SeededSampler::new(5).stream(0);
    let (a, b, x) = (ginibre(&mut rng, d, d), ginibre(&mut rng, d, d), ginibre(&mut rng, d, d));
    let exact = second_moment_closed(&a, &b, &x)?;
    for n in [1_000, 10_000, 100_000] {
        let est = second_moment_mc(&a, &b, &x, n, 6)?;
        let err = (&est.mean - &exact).iter().map(|z| z.norm()).fold(0.0, f64::max);
        println!("n = {n:>6}  max |MC - exact| = {err:.2e}  max z = {:.2}", est.max_z_score(&exact));
    }
    Ok(())
}
