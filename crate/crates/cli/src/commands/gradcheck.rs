use anyhow::{bail, Result};

use bm_core::loss::gradient_check_suite;

pub fn run(trials: usize, step: f64, tolerance: f64, seed: u64) -> Result<()> {
    if trials == 0 {
        bail!("--trials must be >= 1");
    }
    if step <= 0.0 || step.is_nan() {
        bail!("--step must be positive");
    }
    let outcomes = gradient_check_suite(trials, step, tolerance, seed);
    let mut all_ok = true;
    for o in &outcomes {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} {}: max_rel_error={:.3e} over {} trials (tolerance {:.1e}, step {:.1e})",
            o.kind, o.max_rel_error, o.trials, o.tolerance, step
        );
        all_ok &= o.passed();
    }
    if !all_ok {
        bail!("gradient check failed");
    }
    Ok(())
}
