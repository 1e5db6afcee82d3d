// Weyl quantization of x² + ξ²: the spectrum is 1, 3, 5, ...

use uwq::expansion::PolySymbol;
use uwq::grid::AxisGrid;
use uwq::quant::weyl_analytic;
use uwq::Complex64;

pub fn run_example() -> uwq::Result<()> {
    let axis = AxisGrid::new(128, 8.0, 1)?;
    let one = Complex64::new(1.0, 0.0);
    let h = PolySymbol::monomial(&[2], &[0], one).add(&PolySymbol::monomial(&[0], &[2], one));
    let op = weyl_analytic(&h, &axis)?;
    println!("hermitian error {:.1e}", op.hermitian_error());
    for (k, ev) in op.eigenvalues().iter().take(8).enumerate() {
        let expect = (2 * k + 1) as f64;
        println!("λ_{k} = {ev:.10}  (|λ - {expect}| = {:.1e})", (ev - expect).abs());
        assert!((ev - expect).abs() < 1e-6);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
