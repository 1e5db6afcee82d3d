//! Short-time Fourier transform with the Gaussian window `G_0`.
//!
//! `Vu(y,η) = Δx^d Σ_t e^{-itη} u(t) G(t-y)` on the full phase grid. The window
//! is periodized over the box and normalized so that `Σ_y Δy^d G(t-y)² = 1` at every node;
//! with that choice the discrete adjoint satisfies `V*V = (2π)^d I` exactly up
//! to rounding, including for windows centered near the boundary.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::{apply_dft, periodic_window_1d, AxisGrid, Domain, FunctionGrid, PhaseFunctionGrid};

/// Samples `t -> G(t - y_flat)` over the position grid.
pub(crate) fn window_row(axis: &AxisGrid, y_flat: usize) -> Vec<f64> {
    let d = axis.dim();
    let n = axis.n();
    let mut yi = [0usize; 2];
    axis.indices(y_flat, &mut yi[..d]);
    // per-axis factors depend only on the index difference
    let factors: Vec<Vec<f64>> = (0..d)
        .map(|a| {
            let row: Vec<f64> =
                (0..n).map(|t| periodic_window_1d(axis.point(t) - axis.point(yi[a]), axis.half_width())).collect();
            // overlapping images add e^{-L²/4}-sized mass; rescale it away
            let mass = row.iter().map(|g| g * g).sum::<f64>() * axis.dx();
            row.iter().map(|g| g / mass.sqrt()).collect()
        })
        .collect();
    let mut ti = [0usize; 2];
    (0..axis.len())
        .map(|t| {
            axis.indices(t, &mut ti[..d]);
            (0..d).map(|a| factors[a][ti[a]]).product()
        })
        .collect()
}

/// `Vu` on the phase grid, rows indexed by the window center `y`.
pub fn stft(u: &FunctionGrid) -> PhaseFunctionGrid {
    let axis = *u.axis();
    let npts = axis.len();
    let mut out = Vec::with_capacity(npts * npts);
    let mut buf = vec![Complex64::new(0.0, 0.0); npts];
    for y in 0..npts {
        let g = window_row(&axis, y);
        for ((b, v), w) in buf.iter_mut().zip(u.values()).zip(&g) {
            *b = v * w;
        }
        apply_dft(&mut buf, &axis, false);
        out.extend_from_slice(&buf);
    }
    PhaseFunctionGrid::new(axis, out).expect("shape follows the axis")
}

/// `V*F(t) = Σ_{y,η} Δy^d Δη^d G(t-y) e^{itη} F(y,η)`, the exact adjoint of [`stft`]
/// for the phase-space and position-space quadratures.
pub fn stft_adjoint(f: &PhaseFunctionGrid) -> FunctionGrid {
    let axis = *f.axis();
    let npts = axis.len();
    let d = axis.dim() as i32;
    let scale = (2.0 * PI).powi(d) * axis.cell();
    let mut acc = vec![Complex64::new(0.0, 0.0); npts];
    let mut buf = vec![Complex64::new(0.0, 0.0); npts];
    for y in 0..npts {
        buf.copy_from_slice(f.row(y));
        apply_dft(&mut buf, &axis, true);
        let g = window_row(&axis, y);
        for ((a, b), w) in acc.iter_mut().zip(&buf).zip(&g) {
            *a += b * (w * scale);
        }
    }
    FunctionGrid::new(axis, Domain::Position, acc).expect("shape follows the axis")
}

/// `(2π)^{-d} V*V u`, which reproduces `u`.
pub fn stft_inverse(f: &PhaseFunctionGrid) -> FunctionGrid {
    let d = f.axis().dim() as i32;
    stft_adjoint(f).scaled(Complex64::new((2.0 * PI).powi(-d), 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormCheck {
    /// `‖Vu‖_{L²(phase)}`.
    pub lhs: f64,
    /// `(2π)^{d/2} ‖u‖_{L²}`.
    pub rhs: f64,
}

impl NormCheck {
    pub fn relative_error(&self) -> f64 {
        if self.rhs == 0.0 {
            self.lhs
        } else {
            (self.lhs - self.rhs).abs() / self.rhs
        }
    }
}

pub fn stft_norm_check(u: &FunctionGrid) -> NormCheck {
    let d = u.axis().dim() as i32;
    NormCheck { lhs: stft(u).norm_l2(), rhs: (2.0 * PI).powf(d as f64 / 2.0) * u.norm_l2() }
}
