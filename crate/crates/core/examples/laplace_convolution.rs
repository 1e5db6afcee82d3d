// Gaussian convolution of a compactly supported density, once by direct
// quadrature and once through its Laplace transform.

use uwq::gaussconv::{conv_gauss_direct, conv_gauss_via_laplace, laplace, CompactDensity, DensityKind};
use uwq::Complex64;

pub fn run_example() -> uwq::Result<()> {
    let dens = CompactDensity::new(DensityKind::PolyTimesBump { coeffs: vec![1.0, 0.5, -0.25] }, -1.0, 1.5, 1)?;
    println!("L(S)(0) = {:.12}", laplace(&dens, &[Complex64::new(0.0, 0.0)])?.re);
    println!("{:>6} {:>22} {:>22} {:>10}", "x", "via Laplace", "direct", "rel");
    for i in 0..=8 {
        let x = -4.0 + i as f64;
        let via = conv_gauss_via_laplace(&dens, -1.0, &[x])?;
        let direct = conv_gauss_direct(&dens, -1.0, &[x])?;
        let rel = (via - direct).norm() / direct.norm();
        println!("{x:>6} {:>22.15e} {:>22.15e} {rel:>10.1e}", via.re, direct.re);
        assert!(rel < 1e-8);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
