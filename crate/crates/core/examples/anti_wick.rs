// Anti-Wick operators: positivity, the norm bound, and agreement with the
// Weyl quantization of the Gaussian-smoothed symbol.

use uwq::corpus::{band_limited_symbol, corpus};
use uwq::expansion::{heat_quarter, PolySymbol};
use uwq::grid::AxisGrid;
use uwq::quant::{anti_wick_matrix, sample_symbol, verify_prop245, verify_prop245_poly};
use uwq::Complex64;

pub fn run_example() -> uwq::Result<()> {
    let axis = AxisGrid::new(128, 10.0, 1)?;
    let inputs = corpus(&axis, 7);
    let one = Complex64::new(1.0, 0.0);

    let x4 = PolySymbol::monomial(&[0], &[4], one);
    println!("smoothing x⁴ gives {}", heat_quarter(&x4, 1));
    let r = verify_prop245_poly(&x4, &axis, &inputs)?;
    println!("x⁴: anti-Wick vs smoothed Weyl on the corpus {:.2e}", r.max_err);

    let a = band_limited_symbol(&axis, 3, false);
    println!("random band-limited symbol, entrywise {:.2e}", verify_prop245(&a).max_err);

    let xi2 = sample_symbol(&PolySymbol::monomial(&[2], &[0], one), &axis);
    let low = anti_wick_matrix(&xi2).hermitian_part().eigenvalues()[0];
    println!("ξ² ≥ 0, lowest eigenvalue {low:.3e}");

    let norm = anti_wick_matrix(&a).spectral_norm();
    println!("‖A_a‖ = {norm:.6} ≤ sup|a| = {:.6}", a.max_abs());
    assert!(r.max_err < 1e-5 && low > -1e-7 && norm <= a.max_abs() * (1.0 + 1e-6));
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
