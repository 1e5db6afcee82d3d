//! Unnormalized multi-dimensional FFTs over `n^dims` row-major arrays.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()));
    let mut planner = planner.lock().unwrap_or_else(|e| e.into_inner());
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// Applies the unnormalized DFT `X_k = sum_j x_j e^{∓2πi jk/n}` along every axis.
pub(crate) fn fft_nd(data: &mut [Complex64], n: usize, dims: usize, inverse: bool) {
    debug_assert_eq!(data.len(), n.pow(dims as u32));
    let fft = plan(n, inverse);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let total = data.len();
    for axis in 0..dims {
        let stride = n.pow((dims - 1 - axis) as u32);
        let block = stride * n;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

/// Splits a flat row-major index into per-axis indices.
pub(crate) fn unravel(mut flat: usize, n: usize, dims: usize, out: &mut [usize]) {
    for axis in (0..dims).rev() {
        out[axis] = flat % n;
        flat /= n;
    }
}

pub(crate) fn ravel(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}


/// Signed frequency index of FFT bin `k`: `0..n/2` then `-n/2..-1`.
pub(crate) fn signed_bin(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}
