// Windowed Fourier transform of a few test functions, then back again.

use uwq::corpus::{corpus, corpus_names};
use uwq::grid::AxisGrid;
use uwq::stft::{stft, stft_inverse, stft_norm_check};
use uwq::Complex64;

pub fn run_example() -> uwq::Result<()> {
    let axis = AxisGrid::new(128, 10.0, 1)?;
    for (name, u) in corpus_names().iter().zip(corpus(&axis, 7)) {
        let back = stft_inverse(&stft(&u));
        let err = back.axpy(Complex64::new(-1.0, 0.0), &u).norm_l2() / u.norm_l2();
        let iso = stft_norm_check(&u).relative_error();
        println!("{name:>16}  inversion {err:.2e}  isometry {iso:.2e}");
        assert!(err < 1e-10 && iso < 1e-10);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
