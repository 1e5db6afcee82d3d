// Regularized kernel of b(x,ξ) = ξ paired with a test function, along a
// shrinking cutoff ladder, for two different cutoffs.

use uwq::defaults::DELTA_LADDER;
use uwq::expansion::PolySymbol;
use uwq::gaussconv::{oscillatory_kernel, Cutoff, KernelTestFunction, OscSymbol};

pub fn run_example() -> uwq::Result<()> {
    let chi = KernelTestFunction::standard();
    let b = OscSymbol::Poly(PolySymbol::xi(1, 0));
    let mut limits = Vec::new();
    for psi in [Cutoff::STANDARD, Cutoff::ALTERNATE] {
        let r = oscillatory_kernel(&b, &chi, &DELTA_LADDER, &psi)?;
        for (d, v) in r.deltas.iter().zip(&r.values) {
            println!("δ = {d:<6} {v:.12}");
        }
        println!("  differences {:?}", r.differences);
        println!("  extrapolated {:.12} (order {:?})", r.extrapolated, r.order);
        limits.push(r.extrapolated);
    }
    println!("cutoff dependence {:.2e}", (limits[0] - limits[1]).norm());
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
