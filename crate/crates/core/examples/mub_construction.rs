//! Builds complete sets of mutually unbiased bases and prints their
//! certification residuals. Pass dimensions as arguments, e.g.
//! `cargo run --example mub_construction -- 4 8 9`.

use qac::bases::mub_construct;

fn main() {
    let dims: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let dims = if dims.is_empty() { vec![2, 3, 4, 5, 6, 7, 8, 9, 16] } else { dims };
    println!("{:>3} {:>6} {:>12} {:>12} {:>12}", "d", "bases", "unbiased", "complete", "2nd moment");
    for d in dims {
        match mub_construct(d) {
            Ok(set) => {
                let c = set.certificate();
                println!("{d:>3} {:>6} {:>12.2e} {:>12.2e} {:>12.2e}", c.num_bases, c.unbiasedness, c.completeness, c.second_moment);
            }
            Err(e) => println!("{d:>3}  {e}"),
        }
    }
}
