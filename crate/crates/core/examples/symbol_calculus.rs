// Exact expansions for polynomial symbols, checked against operator matrices.

use uwq::corpus::corpus;
use uwq::expansion::{aw_to_weyl_terms, compose_terms, inverse_aw_recursion, tau_change_terms, transpose_terms, PolySymbol};
use uwq::grid::AxisGrid;
use uwq::quant::{op_tau_analytic, Tau};
use uwq::Complex64;

pub fn run_example() -> uwq::Result<()> {
    let axis = AxisGrid::new(128, 10.0, 1)?;
    let inputs = corpus(&axis, 7);
    let c = |re: f64| Complex64::new(re, 0.0);
    let a = PolySymbol::monomial(&[1], &[2], c(1.0)).add(&PolySymbol::monomial(&[2], &[0], c(0.5)));
    let b = PolySymbol::monomial(&[0], &[1], c(1.0));
    println!("a = {a}");

    let weyl = aw_to_weyl_terms(&a, 2);
    for (j, t) in weyl.terms().iter().enumerate() {
        println!("  anti-Wick to Weyl, order {j}: {t}");
    }
    let inv = inverse_aw_recursion(&a, 2)?;
    println!("  anti-Wick symbol of a^w: {}", inv.a);

    let kn = tau_change_terms(&a, 0.5, 0.0);
    println!("  Weyl symbol a as a Kohn–Nirenberg symbol: {kn}");
    let lhs = op_tau_analytic(&kn, &axis, Tau::KOHN_NIRENBERG)?;
    let rhs = op_tau_analytic(&a, &axis, Tau::WEYL)?;
    println!("  τ change on the corpus {:.2e}", lhs.discrepancy_on(&rhs, &inputs));

    let t = transpose_terms(&a, 0.0);
    let tr = op_tau_analytic(&a, &axis, Tau::KOHN_NIRENBERG)?.transpose();
    println!("  transpose {t}, error {:.2e}", tr.discrepancy_on(&op_tau_analytic(&t, &axis, Tau::KOHN_NIRENBERG)?, &inputs));

    let ab = compose_terms(&a, &b);
    let prod = op_tau_analytic(&a, &axis, Tau::KOHN_NIRENBERG)?.mul(&op_tau_analytic(&b, &axis, Tau::KOHN_NIRENBERG)?);
    let err = prod.discrepancy_on(&op_tau_analytic(&ab, &axis, Tau::KOHN_NIRENBERG)?, &inputs);
    println!("  a # x = {ab}, error {err:.2e}");
    assert!(err < 1e-8);
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
