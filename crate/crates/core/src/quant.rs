//! τ-quantization, Weyl and anti-Wick operators as dense matrices.
//!
//! Kernels follow `K_τ(x,y) = (2π)^{-d} Σ_ξ Δξ^d e^{i(x-y)ξ} a((1-τ)x+τy, ξ)`.
//! Two assembly routes exist:
//!
//! * sampled symbols ([`PhaseFunctionGrid`]) are treated as periodic in `x`.
//!   The difference `x - y` is taken as its minimal periodic image and the
//!   off-grid point `(1-τ)x+τy` is reached by trigonometric interpolation.
//!   This route is exact for band-limited symbols and invertible by
//!   [`symbol_from_kernel`].
//! * analytic symbols ([`PhaseSymbol`], e.g. [`PolySymbol`]) are evaluated
//!   directly at `(1-τ)x_j + τx_l`. The Nyquist column of the frequency grid
//!   has no mirror node, so there the symbol is averaged over `ξ_N -> -ξ_N`;
//!   this keeps transposes and Hermitian symmetry exact.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::BufRead;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expansion::PolySymbol;
use crate::fft::{self, signed_bin};
use crate::grid::{read_csv, AxisGrid, Domain, FunctionGrid, PhaseFunctionGrid};
use crate::stft::{stft, stft_adjoint, window_row};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Quantization parameter: `0` is Kohn–Nirenberg, `1/2` is Weyl.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau(f64);

impl Tau {
    pub const KOHN_NIRENBERG: Tau = Tau(0.0);
    pub const WEYL: Tau = Tau(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!("tau = {value} must be finite")));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Symbol that can be evaluated anywhere in phase space.
pub trait PhaseSymbol {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64;

    /// Polynomial form, when available; enables a faster kernel assembly.
    fn as_poly(&self) -> Option<&PolySymbol> {
        None
    }
}

impl PhaseSymbol for PolySymbol {
    fn dim(&self) -> usize {
        PolySymbol::dim(self)
    }

    fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        PolySymbol::eval(self, x, xi)
    }

    fn as_poly(&self) -> Option<&PolySymbol> {
        Some(self)
    }
}

/// Closure-backed [`PhaseSymbol`].
pub struct FnSymbol<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &[f64]) -> Complex64> FnSymbol<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &[f64]) -> Complex64> PhaseSymbol for FnSymbol<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        (self.f)(x, xi)
    }
}

/// Samples an analytic symbol on the phase grid.
pub fn sample_symbol(a: &impl PhaseSymbol, axis: &AxisGrid) -> PhaseFunctionGrid {
    PhaseFunctionGrid::from_fn(*axis, |x, xi| a.eval(x, xi))
}

/// Kernel samples `K(x_j, y_l)`; rows are outputs, columns inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    axis: AxisGrid,
    entries: DMatrix<Complex64>,
    weighted: bool,
}

impl KernelMatrix {
    pub fn new(axis: AxisGrid, entries: DMatrix<Complex64>, weighted: bool) -> Result<Self> {
        check_square(&axis, &entries)?;
        Ok(Self { axis, entries, weighted })
    }

    pub fn axis(&self) -> &AxisGrid {
        &self.axis
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Whether the `Δy^d` quadrature weight is already folded in.
    pub fn weighted(&self) -> bool {
        self.weighted
    }
}

fn check_square(axis: &AxisGrid, m: &DMatrix<Complex64>) -> Result<()> {
    let n = axis.len();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Shape(format!("{}x{} matrix for a grid of {n} points", m.nrows(), m.ncols())));
    }
    Ok(())
}

/// Dense operator acting on sampled functions: `(Op u)_j = Σ_l M_{jl} u_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    axis: AxisGrid,
    matrix: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(axis: AxisGrid, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_square(&axis, &matrix)?;
        Ok(Self { axis, matrix })
    }

    pub fn identity(axis: AxisGrid) -> Self {
        Self { axis, matrix: DMatrix::identity(axis.len(), axis.len()) }
    }

    pub fn axis(&self) -> &AxisGrid {
        &self.axis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, u: &FunctionGrid) -> FunctionGrid {
        let v = &self.matrix * nalgebra::DVector::from_column_slice(u.values());
        FunctionGrid::new(self.axis, Domain::Position, v.as_slice().to_vec()).expect("square")
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { axis: self.axis, matrix: &self.matrix * &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { axis: self.axis, matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { axis: self.axis, matrix: &self.matrix * s }
    }

    /// Plain (not conjugate) transpose.
    pub fn transpose(&self) -> Self {
        Self { axis: self.axis, matrix: self.matrix.transpose() }
    }

    pub fn adjoint(&self) -> Self {
        Self { axis: self.axis, matrix: self.matrix.adjoint() }
    }

    /// Largest entrywise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.matrix.iter().zip(other.matrix.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M†|` entrywise.
    pub fn hermitian_error(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    pub fn hermitian_part(&self) -> Self {
        Self { axis: self.axis, matrix: (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0) }
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = nalgebra::SymmetricEigen::new(self.hermitian_part().matrix);
        let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        let svd = nalgebra::SVD::new(self.matrix.clone(), false, false);
        svd.singular_values.iter().copied().fold(0.0, f64::max)
    }

    /// `max_u ‖(M - N) u‖_∞ / ‖u‖_{L²}` over the given inputs.
    pub fn discrepancy_on(&self, other: &Self, inputs: &[FunctionGrid]) -> f64 {
        let diff = self.sub(other);
        inputs
            .iter()
            .map(|u| {
                let norm = u.norm_l2();
                if norm == 0.0 {
                    0.0
                } else {
                    diff.apply(u).max_abs() / norm
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.axis.header();
        out.push('\n');
        for j in 0..self.matrix.nrows() {
            for l in 0..self.matrix.ncols() {
                let v = self.matrix[(j, l)];
                let _ = writeln!(out, "{j},{l},{},{}", v.re, v.im);
            }
        }
        out
    }

    pub fn from_csv(reader: impl BufRead) -> Result<Self> {
        let (header, rows) = read_csv(reader, 4)?;
        let axis = header.axis()?;
        let n = axis.len();
        let mut m = DMatrix::from_element(n, n, ZERO);
        for (i, r) in rows.iter().enumerate() {
            let (j, l) = (r[0], r[1]);
            if j < 0.0 || l < 0.0 || j as usize >= n || l as usize >= n {
                return Err(Error::Parse { line: i + 2, message: format!("entry ({j}, {l}) out of range") });
            }
            m[(j as usize, l as usize)] = Complex64::new(r[2], r[3]);
        }
        Self::new(axis, m)
    }
}

/// Per-axis multi-index helpers over `n^d` flat indices.
struct Flat {
    n: usize,
    d: usize,
}

impl Flat {
    fn split(&self, flat: usize) -> [usize; 2] {
        let mut idx = [0usize; 2];
        fft::unravel(flat, self.n, self.d, &mut idx[..self.d]);
        idx
    }

    fn join(&self, idx: &[usize]) -> usize {
        fft::ravel(&idx[..self.d], self.n)
    }

    fn parity(&self, flat: usize) -> f64 {
        let idx = self.split(flat);
        if idx[..self.d].iter().sum::<usize>() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Kernel of `Op_τ(a)` for a sampled, `x`-periodic symbol.
pub fn kernel_from_symbol(a: &PhaseFunctionGrid, tau: Tau) -> KernelMatrix {
    let axis = *a.axis();
    let (n, d) = (axis.n(), axis.dim());
    let npts = axis.len();
    let flat = Flat { n, d };
    let s_factor = 1.0 - tau.value();

    // trigonometric coefficients in x: c[p][k] = (-1)^|p| FFT_x[a](p) / N
    let mut c = vec![ZERO; npts * npts];
    let mut col = vec![ZERO; npts];
    for k in 0..npts {
        for x in 0..npts {
            col[x] = a.get(x, k);
        }
        fft::fft_nd(&mut col, n, d, false);
        for p in 0..npts {
            c[p * npts + k] = col[p] * (flat.parity(p) / npts as f64);
        }
    }
    // B[p][m] = Σ_k e^{i t_m ξ_k} c[p][k]
    for p in 0..npts {
        let row = &mut c[p * npts..(p + 1) * npts];
        fft::fft_nd(row, n, d, true);
        for (m, v) in row.iter_mut().enumerate() {
            *v *= flat.parity(m);
        }
    }
    let scale = (axis.dxi() / (2.0 * PI)).powi(d as i32);
    let mut k_mat = DMatrix::from_element(npts, npts, ZERO);
    let mut buf = vec![ZERO; npts];
    for m in 0..npts {
        let mi = flat.split(m);
        let shift: Vec<f64> = (0..d).map(|i| s_factor * signed_bin(mi[i], n) as f64 * axis.dx()).collect();
        for p in 0..npts {
            let pi = flat.split(p);
            let mut phase = Complex64::new(1.0, 0.0);
            for i in 0..d {
                let q = signed_bin(pi[i], n) as f64 * axis.dxi();
                phase *= if pi[i] == n / 2 {
                    Complex64::new((q * shift[i]).cos(), 0.0)
                } else {
                    Complex64::from_polar(1.0, q * shift[i])
                };
            }
            buf[p] = c[p * npts + m] * phase * flat.parity(p);
        }
        fft::fft_nd(&mut buf, n, d, true);
        for l in 0..npts {
            let li = flat.split(l);
            let row: Vec<usize> = (0..d).map(|i| (li[i] + mi[i]) % n).collect();
            k_mat[(flat.join(&row), l)] = buf[l] * scale;
        }
    }
    KernelMatrix { axis, entries: k_mat, weighted: false }
}

/// Inverse of [`kernel_from_symbol`]: recovers the τ-symbol from kernel samples.
pub fn symbol_from_kernel(k: &KernelMatrix, tau: Tau) -> Result<PhaseFunctionGrid> {
    let axis = k.axis;
    let (n, d) = (axis.n(), axis.dim());
    let npts = axis.len();
    let flat = Flat { n, d };
    let unweight = if k.weighted { 1.0 / axis.cell() } else { 1.0 };
    let s_factor = 1.0 - tau.value();

    // g[m][x] = h_m(x - (1-τ) t_m), with h_m(y_l) = K(y_l + t_m, y_l)
    let mut g = vec![ZERO; npts * npts];
    let mut buf = vec![ZERO; npts];
    for m in 0..npts {
        let mi = flat.split(m);
        for l in 0..npts {
            let li = flat.split(l);
            let row: Vec<usize> = (0..d).map(|i| (li[i] + mi[i]) % n).collect();
            buf[l] = k.entries[(flat.join(&row), l)] * unweight;
        }
        fft::fft_nd(&mut buf, n, d, false);
        for p in 0..npts {
            let pi = flat.split(p);
            let mut phase = Complex64::new(1.0, 0.0);
            for i in 0..d {
                let q = signed_bin(pi[i], n) as f64 * axis.dxi();
                let s = s_factor * signed_bin(mi[i], n) as f64 * axis.dx();
                phase *= if pi[i] == n / 2 {
                    // the Nyquist mode is lost where the interpolant vanishes
                    let cs = (q * s).cos();
                    Complex64::new(if cs.abs() > 1e-12 { 1.0 / cs } else { 0.0 }, 0.0)
                } else {
                    Complex64::from_polar(1.0, -q * s)
                };
            }
            buf[p] *= phase;
        }
        fft::fft_nd(&mut buf, n, d, true);
        for x in 0..npts {
            g[x * npts + m] = buf[x] / npts as f64;
        }
    }
    // a(x, ξ_k) = Δx^d Σ_m e^{-i t_m ξ_k} g_m(x)
    let mut out = vec![ZERO; npts * npts];
    for x in 0..npts {
        let row = &mut g[x * npts..(x + 1) * npts];
        for (m, v) in row.iter_mut().enumerate() {
            *v *= flat.parity(m);
        }
        fft::fft_nd(row, n, d, false);
        for kk in 0..npts {
            out[x * npts + kk] = row[kk] * axis.cell();
        }
    }
    PhaseFunctionGrid::new(axis, out)
}

/// Kernel of `Op_τ(a)` for an analytic symbol, evaluated at `(1-τ)x_j + τx_l`.
pub fn kernel_from_analytic(a: &impl PhaseSymbol, axis: &AxisGrid, tau: Tau) -> Result<KernelMatrix> {
    if a.dim() != axis.dim() {
        return Err(Error::Shape(format!("symbol of dimension {} on a {}-d grid", a.dim(), axis.dim())));
    }
    if let Some(p) = a.as_poly() {
        return Ok(kernel_from_poly(p, axis, tau));
    }
    let (n, d) = (axis.n(), axis.dim());
    let npts = axis.len();
    let flat = Flat { n, d };
    let t = tau.value();
    let scale = (axis.dxi() / (2.0 * PI)).powi(d as i32);
    // e^{i (x_j - x_l) ξ_k} depends on (j - l) mod n and k per axis
    let twiddle: Vec<Complex64> = (0..n * n)
        .map(|i| {
            let (m, k) = (i / n, i % n);
            Complex64::from_polar(1.0, 2.0 * PI * (m * k % n) as f64 / n as f64) * if m % 2 == 0 { 1.0 } else { -1.0 }
        })
        .collect();
    let xi_nodes: Vec<[usize; 2]> = (0..npts).map(|k| flat.split(k)).collect();

    let mut k_mat = DMatrix::from_element(npts, npts, ZERO);
    let mut z = [0.0; 2];
    let mut xi = [0.0; 2];
    for j in 0..npts {
        let ji = flat.split(j);
        for l in 0..npts {
            let li = flat.split(l);
            for i in 0..d {
                z[i] = (1.0 - t) * axis.point(ji[i]) + t * axis.point(li[i]);
            }
            let mut acc = ZERO;
            for ki in &xi_nodes {
                let mut w = Complex64::new(1.0, 0.0);
                for i in 0..d {
                    let m = (ji[i] + n - li[i]) % n;
                    w *= twiddle[m * n + ki[i]];
                    xi[i] = axis.freq(ki[i]);
                }
                acc += w * nyquist_symmetric(a, &z[..d], &mut xi[..d], &ki[..d]);
            }
            k_mat[(j, l)] = acc * scale;
        }
    }
    Ok(KernelMatrix { axis: *axis, entries: k_mat, weighted: false })
}

/// Same kernel as the pointwise route, with the ξ-sums of every power tabulated once.
fn kernel_from_poly(p: &PolySymbol, axis: &AxisGrid, tau: Tau) -> KernelMatrix {
    let (n, d) = (axis.n(), axis.dim());
    let npts = axis.len();
    let flat = Flat { n, d };
    let t = tau.value();
    let scale = (axis.dxi() / (2.0 * PI)).powi(d as i32);
    let max_xi = p.terms().flat_map(|(m, _)| m.xi.parts().to_vec()).max().unwrap_or(0) as usize;
    let max_x = p.terms().flat_map(|(m, _)| m.x.parts().to_vec()).max().unwrap_or(0) as usize;
    // sums[k][m] = Σ_k' e^{i t_m ξ_k'} ξ_k'^k, the Nyquist node averaged over ±ξ_N
    let sums: Vec<Vec<Complex64>> = (0..=max_xi)
        .map(|k| {
            (0..n)
                .map(|m| {
                    (0..n)
                        .map(|kk| {
                            let xi = axis.freq(kk);
                            let v = if kk == 0 && k % 2 == 1 { 0.0 } else { xi.powi(k as i32) };
                            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                            Complex64::from_polar(sign * v, 2.0 * PI * (m * kk % n) as f64 / n as f64)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    let terms: Vec<(Vec<usize>, Vec<usize>, Complex64)> = p
        .terms()
        .map(|(m, c)| {
            (m.xi.parts().iter().map(|&e| e as usize).collect(), m.x.parts().iter().map(|&e| e as usize).collect(), *c)
        })
        .collect();
    let mut k_mat = DMatrix::from_element(npts, npts, ZERO);
    let mut zpow = vec![vec![1.0; max_x + 1]; d];
    for j in 0..npts {
        let ji = flat.split(j);
        for l in 0..npts {
            let li = flat.split(l);
            let mut diff = [0usize; 2];
            for i in 0..d {
                let z = (1.0 - t) * axis.point(ji[i]) + t * axis.point(li[i]);
                for e in 1..=max_x {
                    zpow[i][e] = zpow[i][e - 1] * z;
                }
                diff[i] = (ji[i] + n - li[i]) % n;
            }
            let mut acc = ZERO;
            for (xi_e, x_e, c) in &terms {
                let mut v = *c;
                for i in 0..d {
                    v *= sums[xi_e[i]][diff[i]] * zpow[i][x_e[i]];
                }
                acc += v;
            }
            k_mat[(j, l)] = acc * scale;
        }
    }
    KernelMatrix { axis: *axis, entries: k_mat, weighted: false }
}

/// `a(z, ξ)`, averaged over sign flips of the coordinates sitting on `-ξ_N`.
fn nyquist_symmetric(a: &impl PhaseSymbol, z: &[f64], xi: &mut [f64], ki: &[usize]) -> Complex64 {
    let edge: Vec<usize> = (0..ki.len()).filter(|&i| ki[i] == 0).collect();
    if edge.is_empty() {
        return a.eval(z, xi);
    }
    let mut acc = ZERO;
    let count = 1usize << edge.len();
    for mask in 0..count {
        for (b, &i) in edge.iter().enumerate() {
            xi[i] = xi[i].abs() * if mask >> b & 1 == 1 { 1.0 } else { -1.0 };
        }
        acc += a.eval(z, xi);
    }
    acc / count as f64
}

/// Folds the `Δy^d` weight into the kernel.
pub fn operator_matrix(k: &KernelMatrix) -> Result<OperatorMatrix> {
    if k.weighted {
        return Err(Error::DoubleWeighting);
    }
    Ok(OperatorMatrix { axis: k.axis, matrix: &k.entries * Complex64::new(k.axis.cell(), 0.0) })
}

/// `Op_τ(a)` for a sampled symbol.
pub fn op_tau(a: &PhaseFunctionGrid, tau: Tau) -> OperatorMatrix {
    operator_matrix(&kernel_from_symbol(a, tau)).expect("fresh kernel is unweighted")
}

/// `Op_τ(a)` for an analytic symbol.
pub fn op_tau_analytic(a: &impl PhaseSymbol, axis: &AxisGrid, tau: Tau) -> Result<OperatorMatrix> {
    operator_matrix(&kernel_from_analytic(a, axis, tau)?)
}

/// Weyl quantization of a sampled symbol.
pub fn weyl(a: &PhaseFunctionGrid) -> OperatorMatrix {
    op_tau(a, Tau::WEYL)
}

/// Weyl quantization of an analytic symbol.
pub fn weyl_analytic(a: &impl PhaseSymbol, axis: &AxisGrid) -> Result<OperatorMatrix> {
    op_tau_analytic(a, axis, Tau::WEYL)
}

/// `A_a u = (2π)^{-d} V*(a · Vu)`.
pub fn anti_wick_direct(a: &PhaseFunctionGrid, u: &FunctionGrid) -> Result<FunctionGrid> {
    if a.axis() != u.axis() {
        return Err(Error::Shape("symbol and function live on different grids".into()));
    }
    let mut vu = stft(u);
    for (v, s) in vu.values_mut().iter_mut().zip(a.values()) {
        *v *= s;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Overflow("a · Vu is not finite".into()));
        }
    }
    let d = u.axis().dim() as i32;
    Ok(stft_adjoint(&vu).scaled(Complex64::new((2.0 * PI).powi(-d), 0.0)))
}

/// Matrix of `A_a`:
/// `A_{jl} = (2π)^{-d} Δx^d Δy^d Δη^d Σ_y G(t_j-y) G(t_l-y) Σ_η e^{i(t_j-t_l)η} a(y,η)`.
pub fn anti_wick_matrix(a: &PhaseFunctionGrid) -> OperatorMatrix {
    let axis = *a.axis();
    let (n, d) = (axis.n(), axis.dim());
    let npts = axis.len();
    let flat = Flat { n, d };
    let pref = (2.0 * PI).powi(-(d as i32)) * axis.cell() * axis.cell() * axis.dual_cell();
    let mut m = DMatrix::from_element(npts, npts, ZERO);
    let mut c = vec![ZERO; npts];
    let diff_index: Vec<usize> = (0..npts * npts)
        .map(|i| {
            let (j, l) = (flat.split(i / npts), flat.split(i % npts));
            let idx: Vec<usize> = (0..d).map(|a| (j[a] + n - l[a]) % n).collect();
            flat.join(&idx)
        })
        .collect();
    for y in 0..npts {
        c.copy_from_slice(a.row(y));
        fft::fft_nd(&mut c, n, d, true);
        // e^{i t_m η_k} = (-1)^|m| e^{2πi mk/n}
        for (mm, v) in c.iter_mut().enumerate() {
            *v *= flat.parity(mm);
        }
        let g = window_row(&axis, y);
        let gmax = g.iter().copied().fold(0.0, f64::max);
        let cut = 1e-20 * gmax;
        let active: Vec<usize> = (0..npts).filter(|&t| g[t] > cut).collect();
        for &j in &active {
            for &l in &active {
                let w = g[j] * g[l];
                if w <= cut * gmax {
                    continue;
                }
                m[(j, l)] += c[diff_index[j * npts + l]] * (w * pref);
            }
        }
    }
    OperatorMatrix { axis, matrix: m }
}

/// Convolution with `π^{-d} e^{-|y|²-|η|²}` over the `2d` phase variables.
///
/// The phase grid is treated as periodic in every variable, so symbols that
/// do not decay are smoothed correctly only away from the box edges.
pub fn gauss_smooth(a: &PhaseFunctionGrid) -> PhaseFunctionGrid {
    let axis = *a.axis();
    let (n, d) = (axis.n(), axis.dim());
    let mut data = a.values().to_vec();
    fft::fft_nd(&mut data, n, 2 * d, false);
    let mut idx = [0usize; 4];
    for (i, v) in data.iter_mut().enumerate() {
        fft::unravel(i, n, 2 * d, &mut idx[..2 * d]);
        let mut e = 0.0;
        for (ax, &k) in idx[..2 * d].iter().enumerate() {
            // x-axes have frequency step Δξ, ξ-axes have step Δx
            let step = if ax < d { axis.dxi() } else { axis.dx() };
            let f = signed_bin(k, n) as f64 * step;
            e += f * f;
        }
        *v *= (-e / 4.0).exp();
    }
    fft::fft_nd(&mut data, n, 2 * d, true);
    let total = data.len() as f64;
    for v in data.iter_mut() {
        *v /= total;
    }
    PhaseFunctionGrid::new(axis, data).expect("shape preserved")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop245Report {
    pub max_err: f64,
}

/// Entrywise `max |anti_wick_matrix(a) - weyl(gauss_smooth(a))|`.
pub fn verify_prop245(a: &PhaseFunctionGrid) -> Prop245Report {
    let aw = anti_wick_matrix(a);
    let w = weyl(&gauss_smooth(a));
    Prop245Report { max_err: aw.max_diff(&w) }
}

/// Polynomial form: `anti_wick_matrix(a)` against the Weyl quantization of the
/// exactly smoothed polynomial, measured on decaying inputs.
pub fn verify_prop245_poly(a: &PolySymbol, axis: &AxisGrid, inputs: &[FunctionGrid]) -> Result<Prop245Report> {
    let aw = anti_wick_matrix(&sample_symbol(a, axis));
    let b = crate::expansion::heat_quarter(a, 1);
    let w = weyl_analytic(&b, axis)?;
    Ok(Prop245Report { max_err: aw.discrepancy_on(&w, inputs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::gaussian;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn small_axis() -> AxisGrid {
        AxisGrid::new(64, 8.0, 1).unwrap()
    }

    use crate::corpus::band_limited_symbol as band_limited;

    #[test]
    fn constant_symbol_is_identity() {
        let ax = small_axis();
        let one = PhaseFunctionGrid::from_real_fn(ax, |_, _| 1.0);
        let id = OperatorMatrix::identity(ax);
        for tau in [0.0, 0.3, 0.5, 1.0] {
            assert!(op_tau(&one, Tau::new(tau).unwrap()).max_diff(&id) < 1e-12);
        }
        let k = kernel_from_symbol(&one, Tau::WEYL);
        assert!((k.entries()[(5, 5)] - c(1.0 / ax.dx())).norm() < 1e-12);
        assert!(op_tau_analytic(&PolySymbol::one(1), &ax, Tau::WEYL).unwrap().max_diff(&id) < 1e-12);
    }

    #[test]
    fn multiplication_symbol() {
        let ax = small_axis();
        let f = |x: f64| (-x * x / 4.0).exp() * (1.0 + 0.2 * x);
        let a = PhaseFunctionGrid::from_real_fn(ax, |x, _| f(x[0]));
        let op = op_tau(&a, Tau::KOHN_NIRENBERG);
        for j in 0..ax.n() {
            for l in 0..ax.n() {
                let expect = if j == l { f(ax.point(j)) } else { 0.0 };
                assert!((op.matrix()[(j, l)] - c(expect)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn xi_is_spectral_derivative() {
        let ax = small_axis();
        let xi = PolySymbol::xi(1, 0);
        for tau in [0.0, 0.5, 1.0] {
            let op = op_tau_analytic(&xi, &ax, Tau::new(tau).unwrap()).unwrap();
            for k in [-5i32, 1, 7] {
                let kk = k as f64 * ax.dxi();
                let u = FunctionGrid::from_fn(ax, |x| Complex64::from_polar(1.0, kk * x[0]));
                assert!(op.apply(&u).max_diff(&u.scaled(c(kk))) < 1e-10);
            }
        }
    }

    #[test]
    fn xi_squared_on_gaussian() {
        let ax = AxisGrid::standard(1);
        let op = weyl_analytic(&PolySymbol::monomial(&[2], &[0], c(1.0)), &ax).unwrap();
        let u = FunctionGrid::from_real_fn(ax, gaussian);
        let expect = FunctionGrid::from_real_fn(ax, |x| (1.0 - x[0] * x[0]) * gaussian(x));
        assert!(op.apply(&u).max_diff(&expect) < 1e-8);
    }

    #[test]
    fn linear_in_symbol() {
        let ax = small_axis();
        let (a, b) = (band_limited(&ax, 1, false), band_limited(&ax, 2, false));
        let (al, be) = (Complex64::new(0.5, 1.0), Complex64::new(-2.0, 0.25));
        let combo = PhaseFunctionGrid::new(
            ax,
            a.values().iter().zip(b.values()).map(|(x, y)| al * x + be * y).collect(),
        )
        .unwrap();
        let lhs = weyl(&combo);
        let rhs = OperatorMatrix::new(ax, weyl(&a).matrix() * al + weyl(&b).matrix() * be).unwrap();
        assert!(lhs.max_diff(&rhs) < 1e-12);
    }

    #[test]
    fn double_weighting_is_rejected() {
        let ax = small_axis();
        let k = KernelMatrix::new(ax, DMatrix::identity(ax.len(), ax.len()), true).unwrap();
        assert!(matches!(operator_matrix(&k), Err(Error::DoubleWeighting)));
    }

    #[test]
    fn kernel_roundtrip_examples() {
        let ax = small_axis();
        let one = PhaseFunctionGrid::from_real_fn(ax, |_, _| 1.0);
        let back = symbol_from_kernel(&kernel_from_symbol(&one, Tau::WEYL), Tau::WEYL).unwrap();
        assert!(back.max_diff(&one) < 1e-10);
        let xxi = PhaseFunctionGrid::from_real_fn(ax, |x, xi| x[0] * xi[0]);
        for tau in [Tau::KOHN_NIRENBERG, Tau::new(1.0).unwrap()] {
            let back = symbol_from_kernel(&kernel_from_symbol(&xxi, tau), tau).unwrap();
            assert!(back.max_diff(&xxi) < 1e-9, "{}", back.max_diff(&xxi));
        }
        // away from τ ∈ {0, 1} the x-Nyquist mode of a non-band-limited symbol is lost
        let back = symbol_from_kernel(&kernel_from_symbol(&xxi, Tau::WEYL), Tau::WEYL).unwrap();
        let resid = PhaseFunctionGrid::new(ax, xxi.values().iter().zip(back.values()).map(|(a, b)| a - b).collect()).unwrap();
        // the residual alternates in x with a ξ-linear profile
        for k in [10, 40] {
            let r0 = resid.get(20, k);
            assert!((resid.get(21, k) + r0).norm() < 1e-9 && (resid.get(22, k) - r0).norm() < 1e-9);
        }
    }

    #[test]
    fn kernel_roundtrip_random() {
        let ax = small_axis();
        let a = band_limited(&ax, 7, false);
        for tau in [0.0, 0.25, 0.5, 1.0] {
            let tau = Tau::new(tau).unwrap();
            let back = symbol_from_kernel(&kernel_from_symbol(&a, tau), tau).unwrap();
            assert!(back.max_diff(&a) < 1e-9, "tau = {tau:?}: {}", back.max_diff(&a));
        }
    }

    #[test]
    fn tau_change_sign_oracle() {
        // Op_0(e^{i(px+qξ)}) u(x) = e^{ipx} u(x+q), whose Weyl symbol is e^{-ipq/2} e^{i(px+qξ)}
        let ax = AxisGrid::new(64, 8.0, 1).unwrap();
        let (p, q) = (3.0 * ax.dxi(), 5.0 * ax.dx());
        let a = PhaseFunctionGrid::from_fn(ax, |x, xi| Complex64::from_polar(1.0, p * x[0] + q * xi[0]));
        let back = symbol_from_kernel(&kernel_from_symbol(&a, Tau::KOHN_NIRENBERG), Tau::WEYL).unwrap();
        let expect = PhaseFunctionGrid::new(ax, a.values().iter().map(|v| v * Complex64::from_polar(1.0, -p * q / 2.0)).collect()).unwrap();
        assert!(back.max_diff(&expect) < 1e-10, "{}", back.max_diff(&expect));

        let op = op_tau(&a, Tau::KOHN_NIRENBERG);
        let u = FunctionGrid::from_real_fn(ax, gaussian);
        let shifted = FunctionGrid::from_fn(ax, |x| Complex64::from_polar(gaussian(&[x[0] + q]), p * x[0]));
        assert!(op.apply(&u).max_diff(&shifted) < 1e-10);
    }

    #[test]
    fn polynomial_fast_path_matches_pointwise() {
        for ax in [AxisGrid::new(32, 4.0, 1).unwrap(), AxisGrid::new(8, 2.0, 2).unwrap()] {
            let d = ax.dim();
            let mut p = PolySymbol::zero(d);
            for (k, e, re, im) in [(3u32, 1u32, 1.0, 0.5), (2, 2, -0.5, 0.0), (1, 0, 0.0, 2.0), (0, 3, 0.25, 0.0)] {
                let mut xi = vec![0; d];
                let mut x = vec![0; d];
                xi[0] = k;
                x[d - 1] = e;
                p = p.add(&PolySymbol::monomial(&xi, &x, Complex64::new(re, im)));
            }
            let slow = FnSymbol::new(d, |x: &[f64], xi: &[f64]| p.eval(x, xi));
            for tau in [0.0, 0.3, 0.5, 1.0] {
                let tau = Tau::new(tau).unwrap();
                let a = kernel_from_analytic(&p, &ax, tau).unwrap();
                let b = kernel_from_analytic(&slow, &ax, tau).unwrap();
                let scale = b.entries().iter().map(|v| v.norm()).fold(0.0, f64::max);
                let diff = a.entries().iter().zip(b.entries().iter()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
                assert!(diff < 1e-12 * scale, "{diff} vs {scale}");
            }
        }
    }

    #[test]
    fn weyl_real_symbols_are_hermitian() {
        let ax = small_axis();
        assert!(weyl(&band_limited(&ax, 3, true)).hermitian_error() < 1e-12);
        let p = PolySymbol::monomial(&[3], &[1], c(1.0)).add(&PolySymbol::monomial(&[2], &[2], c(-0.5)));
        assert!(weyl_analytic(&p, &ax).unwrap().hermitian_error() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_spectrum() {
        let ax = AxisGrid::new(128, 8.0, 1).unwrap();
        let h = PolySymbol::monomial(&[2], &[0], c(1.0)).add(&PolySymbol::monomial(&[0], &[2], c(1.0)));
        let op = weyl_analytic(&h, &ax).unwrap();
        let ev = op.eigenvalues();
        for (k, e) in ev.iter().take(8).enumerate() {
            assert!((e - (2 * k + 1) as f64).abs() < 1e-6, "k = {k}: {e}");
        }
    }

    #[test]
    fn anti_wick_identity_and_consistency() {
        let ax = small_axis();
        let one = PhaseFunctionGrid::from_real_fn(ax, |_, _| 1.0);
        let a1 = anti_wick_matrix(&one);
        assert!(a1.max_diff(&OperatorMatrix::identity(ax)) < 1e-10);
        let a = band_limited(&ax, 11, false);
        let m = anti_wick_matrix(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = FunctionGrid::new(
            ax,
            Domain::Position,
            (0..ax.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        )
        .unwrap();
        let direct = anti_wick_direct(&a, &u).unwrap();
        assert!(m.apply(&u).max_diff(&direct) < 1e-11);
    }

    #[test]
    fn gauss_smooth_examples() {
        let ax = AxisGrid::standard(1);
        let one = PhaseFunctionGrid::from_real_fn(ax, |_, _| 1.0);
        assert!(gauss_smooth(&one).max_diff(&one) < 1e-13);
        let s = gauss_smooth(&PhaseFunctionGrid::from_real_fn(ax, |_, xi| xi[0] * xi[0]));
        let s4 = gauss_smooth(&PhaseFunctionGrid::from_real_fn(ax, |x, _| x[0].powi(4)));
        for x in 40..88 {
            for k in 40..88 {
                let (xx, kk) = (ax.point(x), ax.freq(k));
                assert!((s.get(x, k) - c(kk * kk + 0.5)).norm() < 1e-9);
                let q = xx.powi(4) + 3.0 * xx * xx + 0.75;
                assert!((s4.get(x, k) - c(q)).norm() < 1e-9 * q.max(1.0), "{}", (s4.get(x, k) - c(q)).norm());
            }
        }
    }

    #[test]
    fn antiwick_matches_smoothed_weyl_band_limited() {
        let ax = small_axis();
        let one = PhaseFunctionGrid::from_real_fn(ax, |_, _| 1.0);
        assert!(verify_prop245(&one).max_err < 1e-10);
        let a = band_limited(&ax, 21, false);
        let err = verify_prop245(&a).max_err;
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn csv_roundtrip() {
        let ax = AxisGrid::new(8, 2.0, 1).unwrap();
        let op = weyl(&band_limited(&ax, 2, false));
        let back = OperatorMatrix::from_csv(op.to_csv().as_bytes()).unwrap();
        assert_eq!(op, back);
    }
}
