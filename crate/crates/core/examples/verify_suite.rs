//! Runs every verification suite at small sizes and prints the checks.

use qac::verify::{run_suite, VerifyConfig, SUITES};

fn main() -> qac::Result<()> {
    for suite in SUITES {
        let dims: &[usize] = match suite {
            "eq1" | "haar-moment" | "mub-identities" => &[3],
            _ => &[2, 3],
        };
        let cfg = VerifyConfig { samples: Some(2_000), ..VerifyConfig::new(suite, dims, 10, 1) };
        let report = run_suite(&cfg)?;
        println!("{suite} {dims:?}: {}", if report.pass { "pass" } else { "FAIL" });
        for c in &report.checks {
            println!("    {:<36} {:.3e} (tol {:.0e})", c.name, c.max_residual, c.tolerance);
        }
    }
    Ok(())
}
