// Gevrey weight sequences: associated function, the (M.1)-(M.3) checks and
// the lower bound of an ultrapolynomial.

use uwq::weights::{assoc_fn, check_conditions, fit_ultrapoly_bound, lemma69_fitted, WeightSequence};

pub fn run_example() -> uwq::Result<()> {
    for s in [1.5, 2.0, 3.0] {
        let w = WeightSequence::gevrey_default(s)?;
        let r = check_conditions(&w)?;
        println!("s = {s}: M.1 {}  M.2 {:?}  M.3 {:?}", r.m1_ok, r.m2, r.m3);
        for rho in [0.5, 2.0, 10.0, 100.0] {
            println!("  M({rho}) = {:.6}", assoc_fn(&w, rho)?.value);
        }
        println!("  moment inequality with fitted constants: {}", lemma69_fitted(&w, 1.0, 20)?);
    }
    let w = WeightSequence::gevrey(2.0, 256)?;
    let grid: Vec<f64> = (0..200).map(|i| 50.0 * i as f64 / 199.0).collect();
    if let Some((l, k, rep)) = fit_ultrapoly_bound(&w, 1, &grid, &[1.0], &[0.25, 0.5, 1.0, 2.0])? {
        println!("|P_l(x)| ≥ {:.3e} e^(M(|x|/{k})) with l = {l}", rep.c_tilde);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
