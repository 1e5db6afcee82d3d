//! Test-function corpus: shifted Gaussians, Hermite functions and seeded
//! random Gaussian packets. In two dimensions every entry is a tensor product.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{AxisGrid, FunctionGrid, PhaseFunctionGrid};

/// Normalized Hermite function `h_k(x)` via the three-term recurrence.
pub fn hermite_function(k: usize, x: f64) -> f64 {
    let h0 = PI.powf(-0.25) * (-x * x / 2.0).exp();
    if k == 0 {
        return h0;
    }
    let (mut prev, mut cur) = (h0, 2f64.sqrt() * x * h0);
    for j in 1..k {
        let next = (2.0 / (j + 1) as f64).sqrt() * x * cur - (j as f64 / (j + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `e^{-(x-y)²/2 + i η x}`.
fn packet(x: f64, y: f64, eta: f64) -> Complex64 {
    Complex64::from_polar((-(x - y) * (x - y) / 2.0).exp(), eta * x)
}

/// One-dimensional profile of corpus entry `i`.
fn profile(i: usize, x: f64, packets: &[Vec<(f64, f64, Complex64)>]) -> Complex64 {
    match i {
        0 => packet(x, 0.0, 0.0),
        1 => packet(x, 1.0, 0.5),
        2 => packet(x, -1.5, -1.0),
        3..=7 => Complex64::new(hermite_function(i - 3, x), 0.0),
        _ => packets[i - 8].iter().map(|&(y, eta, c)| c * packet(x, y, eta)).sum(),
    }
}

pub const CORPUS_SIZE: usize = 10;

pub fn corpus_names() -> Vec<String> {
    let mut names = vec!["gauss(0,0)".to_string(), "gauss(1,0.5)".into(), "gauss(-1.5,-1)".into()];
    names.extend((0..5).map(|k| format!("hermite{k}")));
    names.extend((0..2).map(|s| format!("random{s}")));
    names
}

/// The ten corpus functions on `axis`. Random entries are fixed by `seed`.
pub fn corpus(axis: &AxisGrid, seed: u64) -> Vec<FunctionGrid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let packets: Vec<Vec<(f64, f64, Complex64)>> = (0..2)
        .map(|_| {
            (0..4)
                .map(|_| {
                    let y = rng.gen_range(-2.0..2.0);
                    let eta = rng.gen_range(-2.0..2.0);
                    (y, eta, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                })
                .collect()
        })
        .collect();
    (0..CORPUS_SIZE)
        .map(|i| {
            FunctionGrid::from_fn(*axis, |x| x.iter().map(|&t| profile(i, t, &packets)).product())
        })
        .collect()
}

/// Random symbol with six low phase-space frequencies, periodic on the grid.
/// Only the first coordinate is used.
pub fn band_limited_symbol(axis: &AxisGrid, seed: u64, real: bool) -> PhaseFunctionGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, Complex64)> = (0..6)
        .map(|_| {
            let p = rng.gen_range(-4i32..=4) as f64 * axis.dxi();
            let q = rng.gen_range(-4i32..=4) as f64 * axis.dx();
            let amp = Complex64::new(rng.gen_range(-1.0..1.0), if real { 0.0 } else { rng.gen_range(-1.0..1.0) });
            (p, q, amp)
        })
        .collect();
    PhaseFunctionGrid::from_fn(*axis, |x, xi| {
        modes
            .iter()
            .map(|(p, q, amp)| {
                if real {
                    amp * (p * x[0] + q * xi[0]).cos()
                } else {
                    amp * Complex64::from_polar(1.0, p * x[0] + q * xi[0])
                }
            })
            .sum()
    })
}
