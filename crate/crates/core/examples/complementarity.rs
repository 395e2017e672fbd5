//! Wave, particle and correlation terms for a system entangled with an
//! environment; the balance holds for pure states and fails for mixed ones.

use qac::bases::ProjectiveBasis;
use qac::duality::complementarity_terms;
use qac::haar::{sample_bipartite_hs, sample_pure_bipartite, sample_unitary, SeededSampler};

fn main() -> qac::Result<()> {
    let mut s = SeededSampler::new(31);
    let dims = (2, 3);
    let basis = ProjectiveBasis::new(sample_unitary(&mut s, dims.0))?;
    let (_, pure) = sample_pure_bipartite(&mut s, dims);
    let mixed = sample_bipartite_hs(&mut s, dims);
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}", "", "W", "P", "Q_U", "lhs", "rhs");
    for (name, rho) in [("pure", &pure), ("mixed", &mixed)] {
        let t = complementarity_terms(rho, &basis)?;
        println!("{name:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}", t.wave, t.particle, t.correlation, t.lhs, t.rhs);
    }
    Ok(())
}
