//! Uniform periodic grids on position and phase space.
//!
//! An [`AxisGrid`] covers the half-open box `[-L, L)^d` with `n` points per
//! axis. Its dual frequency axis has spacing `π/L` and covers
//! `[-πn/(2L), πn/(2L))`, stored in monotone physical order. The Fourier
//! convention is `(Fu)(ξ) = ∫ e^{-ixξ} u(x) dx`, discretized as a Riemann sum.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::BufRead;

use num_complex::Complex64;

use crate::defaults;
use crate::error::{Error, Result};
use crate::fft;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisGrid {
    n: usize,
    half_width: f64,
    dim: usize,
}

impl AxisGrid {
    pub fn new(n: usize, half_width: f64, dim: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("n = {n} must be a power of two >= 2")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Grid(format!("half-width L = {half_width} must be positive")));
        }
        if !(1..=2).contains(&dim) {
            return Err(Error::Grid(format!("dimension d = {dim} must be 1 or 2")));
        }
        Ok(Self { n, half_width, dim })
    }

    /// `n = 128, L = 10` for `d = 1`; `n = 64, L = 8` for `d = 2`.
    pub fn standard(dim: usize) -> Self {
        match dim {
            2 => Self { n: defaults::N_2D, half_width: defaults::L_2D, dim: 2 },
            _ => Self { n: defaults::N_1D, half_width: defaults::L_1D, dim: 1 },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of grid points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    /// Position of the `i`-th node along one axis.
    pub fn point(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dx()
    }

    /// Frequency of the `k`-th node along one dual axis.
    pub fn freq(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.dxi()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.freq(k)).collect()
    }

    /// Largest frequency magnitude on the dual axis (attained at `-ξ_N`).
    pub fn nyquist(&self) -> f64 {
        (self.n / 2) as f64 * self.dxi()
    }

    /// Cell volume `Δx^d`.
    pub fn cell(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Dual cell volume `Δξ^d`.
    pub fn dual_cell(&self) -> f64 {
        self.dxi().powi(self.dim as i32)
    }

    pub(crate) fn indices(&self, flat: usize, out: &mut [usize]) {
        fft::unravel(flat, self.n, self.dim, out);
    }

    /// Writes the coordinates of flat node `flat` into `out`.
    pub fn coords(&self, flat: usize, out: &mut [f64]) {
        let mut idx = [0usize; 2];
        self.indices(flat, &mut idx[..self.dim]);
        for (o, &i) in out.iter_mut().zip(&idx[..self.dim]) {
            *o = self.point(i);
        }
    }

    pub fn freq_coords(&self, flat: usize, out: &mut [f64]) {
        let mut idx = [0usize; 2];
        self.indices(flat, &mut idx[..self.dim]);
        for (o, &i) in out.iter_mut().zip(&idx[..self.dim]) {
            *o = self.freq(i);
        }
    }

    pub(crate) fn header(&self) -> String {
        format!("# n={} L={} d={}", self.n, self.half_width, self.dim)
    }
}

/// Whether samples live on the position axis or on its dual frequency axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Position,
    Frequency,
}

/// Sampled function on an [`AxisGrid`], row-major over axes.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionGrid {
    axis: AxisGrid,
    domain: Domain,
    values: Vec<Complex64>,
}

impl FunctionGrid {
    pub fn new(axis: AxisGrid, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != axis.len() {
            return Err(Error::Shape(format!(
                "{} samples for a grid of {} points",
                values.len(),
                axis.len()
            )));
        }
        Ok(Self { axis, domain, values })
    }

    pub fn zeros(axis: AxisGrid) -> Self {
        Self { axis, domain: Domain::Position, values: vec![Complex64::new(0.0, 0.0); axis.len()] }
    }

    pub fn from_fn(axis: AxisGrid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut x = [0.0; 2];
        let d = axis.dim();
        let values = (0..axis.len())
            .map(|i| {
                axis.coords(i, &mut x[..d]);
                f(&x[..d])
            })
            .collect();
        Self { axis, domain: Domain::Position, values }
    }

    pub fn from_real_fn(axis: AxisGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(axis, |x| Complex64::new(f(x), 0.0))
    }

    pub fn axis(&self) -> &AxisGrid {
        &self.axis
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    fn cell(&self) -> f64 {
        match self.domain {
            Domain::Position => self.axis.cell(),
            Domain::Frequency => self.axis.dual_cell(),
        }
    }

    /// `Σ u_j v̄_j` times the cell volume of the grid's domain.
    pub fn inner(&self, other: &FunctionGrid) -> Complex64 {
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        s * self.cell()
    }

    pub fn norm_l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { values: self.values.iter().map(|v| v * s).collect(), ..self.clone() }
    }

    pub fn axpy(&self, alpha: Complex64, other: &FunctionGrid) -> Self {
        Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + alpha * b).collect(),
            ..self.clone()
        }
    }

    /// Largest elementwise difference.
    pub fn max_diff(&self, other: &FunctionGrid) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.axis.header();
        if self.domain == Domain::Frequency {
            out.push_str(" domain=frequency");
        }
        out.push('\n');
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{}", v.re, v.im);
        }
        out
    }

    pub fn from_csv(reader: impl BufRead) -> Result<Self> {
        let (header, rows) = read_csv(reader, 3)?;
        let axis = header.axis()?;
        let domain = match header.get("domain") {
            Some("frequency") => Domain::Frequency,
            _ => Domain::Position,
        };
        let values = collect_indexed(rows, axis.len())?;
        Self::new(axis, domain, values)
    }
}

/// Sampled symbol `a(x, ξ)` on position grid × dual frequency grid.
///
/// Layout is x-major: the sample at position node `i` and frequency node `k`
/// is stored at `i * n^d + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunctionGrid {
    axis: AxisGrid,
    values: Vec<Complex64>,
}

impl PhaseFunctionGrid {
    pub fn new(axis: AxisGrid, values: Vec<Complex64>) -> Result<Self> {
        let len = axis.len() * axis.len();
        if values.len() != len {
            return Err(Error::Shape(format!("{} samples for a phase grid of {len}", values.len())));
        }
        Ok(Self { axis, values })
    }

    pub fn zeros(axis: AxisGrid) -> Self {
        Self { axis, values: vec![Complex64::new(0.0, 0.0); axis.len() * axis.len()] }
    }

    pub fn from_fn(axis: AxisGrid, f: impl Fn(&[f64], &[f64]) -> Complex64) -> Self {
        let d = axis.dim();
        let npts = axis.len();
        let mut x = [0.0; 2];
        let mut xi = [0.0; 2];
        let mut values = Vec::with_capacity(npts * npts);
        for i in 0..npts {
            axis.coords(i, &mut x[..d]);
            for k in 0..npts {
                axis.freq_coords(k, &mut xi[..d]);
                values.push(f(&x[..d], &xi[..d]));
            }
        }
        Self { axis, values }
    }

    pub fn from_real_fn(axis: AxisGrid, f: impl Fn(&[f64], &[f64]) -> f64) -> Self {
        Self::from_fn(axis, |x, xi| Complex64::new(f(x, xi), 0.0))
    }

    /// Position axis.
    pub fn axis(&self) -> &AxisGrid {
        &self.axis
    }

    /// Frequency axis: the exact dual of [`axis`](Self::axis). Returned as the
    /// position axis, whose [`AxisGrid::freq`] gives the dual nodes.
    pub fn kaxis(&self) -> &AxisGrid {
        &self.axis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn get(&self, x_flat: usize, k_flat: usize) -> Complex64 {
        self.values[x_flat * self.axis.len() + k_flat]
    }

    /// Row of samples over frequency at position node `x_flat`.
    pub fn row(&self, x_flat: usize) -> &[Complex64] {
        let n = self.axis.len();
        &self.values[x_flat * n..(x_flat + 1) * n]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    /// Phase-space `L²` norm with weights `Δx^d Δξ^d`.
    pub fn norm_l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.axis.cell() * self.axis.dual_cell())
            .sqrt()
    }

    pub fn inner(&self, other: &PhaseFunctionGrid) -> Complex64 {
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        s * self.axis.cell() * self.axis.dual_cell()
    }

    pub fn max_diff(&self, other: &PhaseFunctionGrid) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{} xi_n={} xi_step={}\n", self.axis.header(), self.axis.n(), self.axis.dxi());
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{}", v.re, v.im);
        }
        out
    }

    pub fn from_csv(reader: impl BufRead) -> Result<Self> {
        let (header, rows) = read_csv(reader, 3)?;
        let axis = header.axis()?;
        if let Some(step) = header.get("xi_step") {
            let step: f64 = step.parse().map_err(|_| Error::Parse { line: 1, message: "bad xi_step".into() })?;
            if (step - axis.dxi()).abs() > 1e-12 * axis.dxi() {
                return Err(Error::Grid("frequency axis is not the dual of the position axis".into()));
            }
        }
        let values = collect_indexed(rows, axis.len() * axis.len())?;
        Self::new(axis, values)
    }
}

pub(crate) struct CsvHeader(Vec<(String, String)>);

impl CsvHeader {
    pub(crate) fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)
            .ok_or_else(|| Error::Parse { line: 1, message: format!("header is missing `{key}`") })?
            .parse()
            .map_err(|_| Error::Parse { line: 1, message: format!("header field `{key}` is malformed") })
    }

    pub(crate) fn axis(&self) -> Result<AxisGrid> {
        AxisGrid::new(self.require("n")?, self.require("L")?, self.require("d")?)
    }
}

/// Reads `# key=value ...` followed by comma-separated rows of `width` fields.
pub(crate) fn read_csv(reader: impl BufRead, width: usize) -> Result<(CsvHeader, Vec<Vec<f64>>)> {
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for tok in rest.split_whitespace() {
                if let Some((k, v)) = tok.split_once('=') {
                    header.push((k.to_string(), v.to_string()));
                }
            }
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: lineno + 1, message: e.to_string() })?;
        if fields.len() != width {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected {width} fields, found {}", fields.len()),
            });
        }
        rows.push(fields);
    }
    Ok((CsvHeader(header), rows))
}

fn collect_indexed(rows: Vec<Vec<f64>>, len: usize) -> Result<Vec<Complex64>> {
    let mut values = vec![None; len];
    for (line, row) in rows.iter().enumerate() {
        let idx = row[0];
        if idx < 0.0 || idx.fract() != 0.0 || idx as usize >= len {
            return Err(Error::Parse { line: line + 2, message: format!("index {idx} out of range") });
        }
        values[idx as usize] = Some(Complex64::new(row[1], row[2]));
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Parse { line: 0, message: format!("missing sample {i}") }))
        .collect()
}

/// `(-1)^{Σ_i idx_i}` for the flat node.
fn parity(flat: usize, n: usize, dim: usize) -> f64 {
    let mut idx = [0usize; 2];
    fft::unravel(flat, n, dim, &mut idx[..dim]);
    if idx[..dim].iter().sum::<usize>() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Riemann-sum Fourier transform onto the dual grid.
///
/// `F(ξ_k) = Δx^d Σ_j e^{-i x_j·ξ_k} u(x_j)`, evaluated with one FFT. On this
/// grid the phase splits as `(-1)^j (-1)^{k-n/2} e^{-2πijk/n}`.
pub fn fourier(u: &FunctionGrid) -> FunctionGrid {
    let axis = *u.axis();
    let mut data = u.values.clone();
    apply_dft(&mut data, &axis, false);
    FunctionGrid { axis, domain: Domain::Frequency, values: data }
}

/// Inverse of [`fourier`]: `u(x_j) = (2π)^{-d} Δξ^d Σ_k e^{i x_j·ξ_k} F(ξ_k)`.
pub fn inverse_fourier(f: &FunctionGrid) -> FunctionGrid {
    let axis = *f.axis();
    let mut data = f.values.clone();
    apply_dft(&mut data, &axis, true);
    FunctionGrid { axis, domain: Domain::Position, values: data }
}

/// In-place transform of one `n^d` block, shared by the phase-space transforms.
pub(crate) fn apply_dft(data: &mut [Complex64], axis: &AxisGrid, inverse: bool) {
    let (n, d) = (axis.n(), axis.dim());
    let half_parity = if (n / 2 * d) % 2 == 0 { 1.0 } else { -1.0 };
    for (j, v) in data.iter_mut().enumerate() {
        *v *= parity(j, n, d);
    }
    fft::fft_nd(data, n, d, inverse);
    let scale = if inverse {
        (axis.dxi() / (2.0 * PI)).powi(d as i32)
    } else {
        axis.cell()
    };
    for (k, v) in data.iter_mut().enumerate() {
        *v *= parity(k, n, d) * half_parity * scale;
    }
}

/// `G_0(x) = π^{-d/4} e^{-|x|²/2}`.
pub fn gaussian(x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    PI.powf(-(x.len() as f64) / 4.0) * (-0.5 * r2).exp()
}

/// Samples `G_{y,η}(x) = π^{-d/4} e^{i x·η} e^{-|x-y|²/2}`.
///
/// Centers with `|y_i| > L/2` lose window mass outside the box; a warning is
/// logged for them.
pub fn gaussian_window(axis: &AxisGrid, y: &[f64], eta: &[f64]) -> FunctionGrid {
    if y.iter().any(|c| c.abs() > axis.half_width() / 2.0) {
        log::warn!("window center {y:?} lies outside [-L/2, L/2]; samples lose mass off-box");
    }
    let d = axis.dim();
    FunctionGrid::from_fn(*axis, |x| {
        let mut shifted = [0.0; 2];
        let mut phase = 0.0;
        for i in 0..d {
            shifted[i] = x[i] - y[i];
            phase += x[i] * eta[i];
        }
        Complex64::from_polar(gaussian(&shifted[..d]), phase)
    })
}

/// `Δx^d Σ_j u(x_j)`.
pub fn quadrature(u: &FunctionGrid) -> Complex64 {
    u.values.iter().sum::<Complex64>() * u.cell()
}

/// One-dimensional window factor `π^{-1/4} e^{-t²/2}` periodized over the box.
pub(crate) fn periodic_window_1d(t: f64, half_width: f64) -> f64 {
    let period = 2.0 * half_width;
    let t = t - period * (t / period).round();
    (-1..=1)
        .map(|k| {
            let s = t + k as f64 * period;
            (-0.5 * s * s).exp()
        })
        .sum::<f64>()
        * PI.powf(-0.25)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(AxisGrid::new(100, 1.0, 1).is_err());
        assert!(AxisGrid::new(64, 0.0, 1).is_err());
        assert!(AxisGrid::new(64, 1.0, 3).is_err());
    }

    #[test]
    fn spacing_product_is_two_pi() {
        for (n, l) in [(128, 10.0), (64, 8.0), (256, 3.5)] {
            let a = AxisGrid::new(n, l, 1).unwrap();
            assert!((a.dx() * a.dxi() * n as f64 - 2.0 * PI).abs() < 1e-15);
        }
    }

    #[test]
    fn fourier_of_gaussian_matches_closed_form() {
        let axis = AxisGrid::new(128, 10.0, 1).unwrap();
        let u = FunctionGrid::from_real_fn(axis, gaussian);
        let f = fourier(&u);
        for k in 0..axis.n() {
            let xi = axis.freq(k);
            let expected = PI.powf(-0.25) * (2.0 * PI).sqrt() * (-xi * xi / 2.0).exp();
            assert!((f.values()[k] - c(expected)).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn fourier_of_constant_is_delta() {
        let axis = AxisGrid::new(64, 5.0, 1).unwrap();
        let u = FunctionGrid::from_real_fn(axis, |_| 1.0);
        let f = fourier(&u);
        for k in 0..axis.n() {
            let expected = if k == axis.n() / 2 { 2.0 * axis.half_width() } else { 0.0 };
            assert!((f.values()[k] - c(expected)).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_fourier_of_constant_is_scaled_delta() {
        let axis = AxisGrid::new(64, 5.0, 1).unwrap();
        let f = FunctionGrid::new(axis, Domain::Frequency, vec![c(1.0); 64]).unwrap();
        let u = inverse_fourier(&f);
        for j in 0..axis.n() {
            let expected = if j == axis.n() / 2 { 1.0 / axis.dx() } else { 0.0 };
            assert!((u.values()[j] - c(expected)).norm() < 1e-12);
        }
    }

    #[test]
    fn double_fourier_reflects_even_functions() {
        // with L = sqrt(nπ/2) the dual axis coincides with the position axis
        let l = (32.0 * PI).sqrt();
        for axis in [AxisGrid::new(64, l, 1).unwrap(), AxisGrid::new(64, l, 2).unwrap()] {
            let u = FunctionGrid::from_real_fn(axis, |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                (-r2 / 2.0).exp() * (1.0 + r2)
            });
            let mut ff = fourier(&u);
            ff.domain = Domain::Position;
            let ff = fourier(&ff);
            let scale = (2.0 * PI).powi(axis.dim() as i32);
            let mut idx = [0usize; 2];
            for j in 0..axis.len() {
                axis.indices(j, &mut idx[..axis.dim()]);
                // reflection x -> -x maps node i to n - i (mod n)
                let refl: Vec<usize> = idx[..axis.dim()].iter().map(|&i| (axis.n() - i) % axis.n()).collect();
                let rj = fft::ravel(&refl, axis.n());
                assert!((ff.values()[j] - u.values()[rj] * scale).norm() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn gaussian_window_values() {
        let axis = AxisGrid::new(128, 10.0, 1).unwrap();
        let g = gaussian_window(&axis, &[0.0], &[0.0]);
        assert!((g.values()[64].re - PI.powf(-0.25)).abs() < 1e-15);
        assert!((g.norm_l2() - 1.0).abs() < 1e-12);
        let shifted = gaussian_window(&axis, &[1.5], &[0.0]);
        let modulated = gaussian_window(&axis, &[1.5], &[2.0]);
        for j in 0..axis.n() {
            let phase = Complex64::from_polar(1.0, axis.point(j) * 2.0);
            assert!((modulated.values()[j] - shifted.values()[j] * phase).norm() < 1e-15);
        }
    }

    #[test]
    fn quadrature_cases() {
        let axis = AxisGrid::new(128, 10.0, 1).unwrap();
        let g2 = FunctionGrid::from_real_fn(axis, |x| gaussian(x).powi(2));
        assert!((quadrature(&g2) - c(1.0)).norm() < 1e-12);
        assert_eq!(quadrature(&FunctionGrid::zeros(axis)), c(0.0));
        let odd = FunctionGrid::from_real_fn(axis, |x| x[0] * (-x[0] * x[0]).exp());
        assert!(quadrature(&odd).norm() < 1e-13);
    }

    #[test]
    fn csv_roundtrip() {
        let axis = AxisGrid::new(8, 2.0, 1).unwrap();
        let u = FunctionGrid::from_fn(axis, |x| Complex64::new(x[0], -x[0] * 0.3));
        let back = FunctionGrid::from_csv(u.to_csv().as_bytes()).unwrap();
        assert_eq!(u, back);
        let a = PhaseFunctionGrid::from_fn(axis, |x, xi| Complex64::new(x[0] * xi[0], 1.0 / 3.0));
        let back = PhaseFunctionGrid::from_csv(a.to_csv().as_bytes()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn csv_reports_bad_rows() {
        let text = "# n=4 L=1 d=1\n0,1,0\n1,abc,0\n";
        match FunctionGrid::from_csv(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn periodic_window_sums_to_one() {
        let axis = AxisGrid::new(64, 8.0, 1).unwrap();
        for t in [-8.0, -3.3, 0.0, 7.9] {
            let mass: f64 = (0..axis.n())
                .map(|j| periodic_window_1d(t - axis.point(j), axis.half_width()).powi(2))
                .sum::<f64>()
                * axis.dx();
            assert!((mass - 1.0).abs() < 1e-14, "t={t} mass={mass}");
        }
    }
}
