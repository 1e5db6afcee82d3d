//! Gaussian convolution through the Laplace transform, a growth diagnostic
//! for Gaussian-weighted densities, the closed-form smoothed symbol
//! `e^{l|x|²} P(ξ)`, and the cutoff-regularized oscillatory kernel.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::BufRead;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expansion::{heat_quarter, PolySymbol};
use crate::grid::{read_csv, AxisGrid};

const EXP_LIMIT: f64 = 700.0;
const GL_POINTS: usize = 16;

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(GL_POINTS).expect("nonzero"));
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * GL_POINTS);
    for p in 0..panels {
        let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
        for &(t, w) in rule.as_node_weight_pairs() {
            out.push((0.5 * (hi - lo) * t + 0.5 * (hi + lo), 0.5 * (hi - lo) * w));
        }
    }
    out
}

/// Closed-form density profiles on the support box.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityKind {
    Indicator,
    /// Unit-mass Gaussian `(πw²)^{-d/2} e^{-|x-c|²/w²}`, cut to the box.
    GaussianBump { center: f64, width: f64 },
    /// `Π_i p(x_i) · β(x)` with `β` the smooth bump `Π_i e^{-1/(1-t_i²)}` of the box.
    PolyTimesBump { coeffs: Vec<f64> },
}

/// Integrable density supported in `[lo, hi]^d`, stored at its quadrature nodes.
#[derive(Debug, Clone)]
pub struct CompactDensity {
    kind: DensityKind,
    lo: f64,
    hi: f64,
    dim: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl CompactDensity {
    pub fn new(kind: DensityKind, lo: f64, hi: f64, dim: usize) -> Result<Self> {
        let panels = if dim == 1 { 64 } else { 16 };
        Self::with_panels(kind, lo, hi, dim, panels)
    }

    pub fn with_panels(kind: DensityKind, lo: f64, hi: f64, dim: usize, panels: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!("support [{lo}, {hi}] is empty or infinite")));
        }
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidArgument(format!("dimension {dim} is not 1 or 2")));
        }
        if panels == 0 {
            return Err(Error::InvalidArgument("at least one quadrature panel is needed".into()));
        }
        if let DensityKind::GaussianBump { width, .. } = kind {
            if !(width > 0.0) {
                return Err(Error::InvalidArgument(format!("bump width {width} must be positive")));
            }
        }
        let rule = composite_gauss_legendre(lo, hi, panels);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        if dim == 1 {
            for &(t, w) in &rule {
                nodes.push(vec![t]);
                weights.push(w);
            }
        } else {
            for &(t, w) in &rule {
                for &(u, v) in &rule {
                    nodes.push(vec![t, u]);
                    weights.push(w * v);
                }
            }
        }
        let mut s = Self { kind, lo, hi, dim, nodes, weights, values: Vec::new() };
        s.values = s.nodes.iter().map(|x| s.profile(x)).collect();
        Ok(s)
    }

    pub fn indicator(lo: f64, hi: f64) -> Self {
        Self::new(DensityKind::Indicator, lo, hi, 1).expect("valid interval")
    }

    fn profile(&self, x: &[f64]) -> f64 {
        if x.iter().any(|&t| t < self.lo || t > self.hi) {
            return 0.0;
        }
        match &self.kind {
            DensityKind::Indicator => 1.0,
            DensityKind::GaussianBump { center, width } => {
                let r2: f64 = x.iter().map(|t| (t - center) * (t - center)).sum();
                (PI * width * width).powf(-(self.dim as f64) / 2.0) * (-r2 / (width * width)).exp()
            }
            DensityKind::PolyTimesBump { coeffs } => {
                let (mid, half) = (0.5 * (self.lo + self.hi), 0.5 * (self.hi - self.lo));
                x.iter()
                    .map(|&t| {
                        let u = (t - mid) / half;
                        let bump = if u.abs() < 1.0 { (-1.0 / (1.0 - u * u)).exp() } else { 0.0 };
                        coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c) * bump
                    })
                    .product()
            }
        }
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Density value at an arbitrary point (zero off the box).
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.profile(x)
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `e^{s|y|²} S(y)` on the same nodes.
    fn gauss_weighted(&self, s: f64) -> Result<Vec<f64>> {
        self.nodes
            .iter()
            .zip(&self.values)
            .map(|(y, v)| {
                let e = s * y.iter().map(|t| t * t).sum::<f64>();
                if e > EXP_LIMIT {
                    return Err(Error::Overflow(format!("e^(s|y|²) with exponent {e}")));
                }
                Ok(v * e.exp())
            })
            .collect()
    }

    fn laplace_of(&self, values: &[f64], zeta: &[Complex64]) -> Result<Complex64> {
        if zeta.len() != self.dim {
            return Err(Error::Shape(format!("zeta has {} components for a {}-d density", zeta.len(), self.dim)));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for ((y, w), v) in self.nodes.iter().zip(&self.weights).zip(values) {
            if *v == 0.0 {
                continue;
            }
            let e: Complex64 = -y.iter().zip(zeta).map(|(t, z)| z * t).sum::<Complex64>();
            if e.re > EXP_LIMIT {
                return Err(Error::Overflow(format!("e^(-ζ·x) with real exponent {}", e.re)));
            }
            acc += e.exp() * (w * v);
        }
        Ok(acc)
    }
}

/// `L(S)(ζ) = ∫ e^{-ζ·x} S(x) dx`.
pub fn laplace(s: &CompactDensity, zeta: &[Complex64]) -> Result<Complex64> {
    s.laplace_of(&s.values, zeta)
}

/// `(S * e^{s|·|²})(x)` evaluated as `e^{s|x|²} L(e^{s|·|²} S)(2sx)`.
pub fn conv_gauss_via_laplace(dens: &CompactDensity, s: f64, x: &[f64]) -> Result<Complex64> {
    check_s(s)?;
    let outer = s * x.iter().map(|t| t * t).sum::<f64>();
    if outer > EXP_LIMIT {
        return Err(Error::Overflow(format!("e^(s|x|²) with exponent {outer}")));
    }
    let weighted = dens.gauss_weighted(s)?;
    let zeta: Vec<Complex64> = x.iter().map(|t| Complex64::new(2.0 * s * t, 0.0)).collect();
    Ok(dens.laplace_of(&weighted, &zeta)? * outer.exp())
}

/// `∫ S(y) e^{s|x-y|²} dy` by direct quadrature.
pub fn conv_gauss_direct(dens: &CompactDensity, s: f64, x: &[f64]) -> Result<Complex64> {
    check_s(s)?;
    if x.len() != dens.dim {
        return Err(Error::Shape(format!("x has {} components for a {}-d density", x.len(), dens.dim)));
    }
    let mut acc = 0.0;
    for ((y, w), v) in dens.nodes.iter().zip(&dens.weights).zip(&dens.values) {
        let e = s * y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        if e > EXP_LIMIT {
            return Err(Error::Overflow(format!("e^(s|x-y|²) with exponent {e}")));
        }
        acc += w * v * e.exp();
    }
    Ok(Complex64::new(acc, 0.0))
}

fn check_s(s: f64) -> Result<()> {
    if s == 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("s = {s} must be finite and nonzero")));
    }
    Ok(())
}

/// Radial growth envelope `g(|x|) ≥ |S(x)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthEnvelope {
    /// `e^{l|x|²}`
    Gaussian { l: f64 },
    /// `e^{a|x|}`
    Exponential { a: f64 },
    /// `(1+|x|)^p`
    Polynomial { p: f64 },
    /// bounded, vanishing for `|x| > radius`
    Compact { radius: f64 },
}

impl GrowthEnvelope {
    fn ln_value(&self, r: f64) -> f64 {
        match *self {
            GrowthEnvelope::Gaussian { l } => l * r * r,
            GrowthEnvelope::Exponential { a } => a * r,
            GrowthEnvelope::Polynomial { p } => p * (1.0 + r).ln(),
            GrowthEnvelope::Compact { radius } => {
                if r <= radius {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BstarEntry {
    pub k: f64,
    pub pass: bool,
    /// Ratio of the last two slab integrals.
    pub tail_ratio: f64,
    /// Extrapolated remaining tail relative to the integral over the box.
    pub relative_tail: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BstarReport {
    pub s: f64,
    pub entries: Vec<BstarEntry>,
}

impl BstarReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Checks `∫ cosh(k|x|) e^{s|x|²} g(x) dx < ∞` for each `k` from the decay of
/// slab integrals over `[0, box]`. A sufficient-condition diagnostic only.
pub fn bstar_diagnostic(
    envelope: Option<GrowthEnvelope>,
    s: f64,
    k_list: &[f64],
    box_half: f64,
    dim: usize,
) -> Result<BstarReport> {
    let env = envelope.ok_or(Error::EnvelopeMissing)?;
    if !(box_half > 0.0) {
        return Err(Error::InvalidArgument(format!("box {box_half} must be positive")));
    }
    const SLABS: usize = 64;
    let h = box_half / SLABS as f64;
    let rule = composite_gauss_legendre(0.0, 1.0, 1);
    let mut entries = Vec::new();
    for &k in k_list {
        let ln_slabs: Vec<f64> = (0..SLABS)
            .map(|i| {
                let terms: Vec<f64> = rule
                    .iter()
                    .map(|&(t, w)| {
                        let r = (i as f64 + t) * h;
                        // ln cosh(kr) computed without overflow
                        let kr = (k * r).abs();
                        let ln_cosh = kr + (-2.0 * kr).exp().ln_1p() - std::f64::consts::LN_2;
                        (w * h).ln() + (dim as f64 - 1.0) * r.ln() + ln_cosh + s * r * r + env.ln_value(r)
                    })
                    .collect();
                log_sum_exp(&terms)
            })
            .collect();
        let total = log_sum_exp(&ln_slabs);
        let last = ln_slabs[SLABS - 1];
        let entry = if last == f64::NEG_INFINITY {
            BstarEntry { k, pass: true, tail_ratio: 0.0, relative_tail: 0.0 }
        } else {
            let ratios: Vec<f64> = ln_slabs[SLABS - 4..].windows(2).map(|w| (w[1] - w[0]).exp()).collect();
            let rho = *ratios.last().expect("three ratios");
            let decreasing = ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
            let relative_tail = if rho < 1.0 { (last - total).exp() * rho / (1.0 - rho) } else { f64::INFINITY };
            BstarEntry { k, pass: rho < 1.0 && decreasing && relative_tail < 1e-3, tail_ratio: rho, relative_tail }
        };
        entries.push(entry);
    }
    Ok(BstarReport { s, entries })
}

/// Gaussian smoothing of `e^{l|x|²} P(ξ)`:
/// `b(x,ξ) = (1-l)^{-d/2} e^{l|x|²/(1-l)} [e^{Δ_ξ/4} P](ξ)`.
pub fn example5_symbol(l: f64, p: &PolySymbol, x: &[f64], xi: &[f64]) -> Result<Complex64> {
    Ok(example5_prefactor(l, p, x)? * heat_quarter(p, 1).eval(x, xi))
}

fn example5_prefactor(l: f64, p: &PolySymbol, x: &[f64]) -> Result<f64> {
    if !(l < 1.0) {
        return Err(Error::InvalidArgument(format!("l = {l} must be below 1")));
    }
    if !p.is_xi_only() {
        return Err(Error::InvalidArgument("P must depend on ξ only".into()));
    }
    if x.len() != p.dim() {
        return Err(Error::Shape(format!("x has {} components for a {}-d symbol", x.len(), p.dim())));
    }
    let d = p.dim() as f64;
    let r2: f64 = x.iter().map(|t| t * t).sum();
    Ok((1.0 - l).powf(-d / 2.0) * (l * r2 / (1.0 - l)).exp())
}

/// Smooth cutoff equal to `1` on `|u| ≤ inner` and `0` for `|u| ≥ outer`:
/// `h(outer-|u|) / (h(outer-|u|) + h(|u|-inner))` with `h(t) = e^{-1/t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub inner: f64,
    pub outer: f64,
}

impl Cutoff {
    pub const STANDARD: Cutoff = Cutoff { inner: 1.0, outer: 2.0 };
    pub const ALTERNATE: Cutoff = Cutoff { inner: 0.5, outer: 3.0 };

    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(0.0 < inner && inner < outer) {
            return Err(Error::InvalidArgument(format!("cutoff needs 0 < {inner} < {outer}")));
        }
        Ok(Self { inner, outer })
    }

    pub fn eval(&self, u: f64) -> f64 {
        let h = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
        let a = u.abs();
        if a <= self.inner {
            return 1.0;
        }
        if a >= self.outer {
            return 0.0;
        }
        let (p, q) = (h(self.outer - a), h(a - self.inner));
        p / (p + q)
    }
}

/// Symbols with finitely many powers of `ξ`: `b(x,ξ) = Σ_k f_k(x) ξ^k` (d = 1).
#[derive(Debug, Clone, PartialEq)]
pub enum OscSymbol {
    Poly(PolySymbol),
    /// smoothed `e^{l x²} P(ξ)`, see [`example5_symbol`]
    Example5 { l: f64, p: PolySymbol },
}

impl OscSymbol {
    fn check(&self) -> Result<()> {
        let (dim, p) = match self {
            OscSymbol::Poly(p) => (p.dim(), p),
            OscSymbol::Example5 { l, p } => {
                example5_prefactor(*l, p, &vec![0.0; p.dim()])?;
                (p.dim(), p)
            }
        };
        if dim != 1 {
            return Err(Error::InvalidArgument(format!("oscillatory kernel supports d = 1, got {dim}")));
        }
        let _ = p;
        Ok(())
    }

    fn xi_degree(&self) -> usize {
        match self {
            OscSymbol::Poly(p) | OscSymbol::Example5 { p, .. } => {
                p.terms().map(|(m, _)| m.xi.parts()[0] as usize).max().unwrap_or(0)
            }
        }
    }

    /// Coefficients `f_k(x)` of `ξ^k`.
    fn xi_coeffs(&self, x: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.xi_degree() + 1];
        let (poly, pref) = match self {
            OscSymbol::Poly(p) => (p.clone(), 1.0),
            OscSymbol::Example5 { l, p } => (heat_quarter(p, 1), example5_prefactor(*l, p, &[x]).expect("checked")),
        };
        for (m, c) in poly.terms() {
            let k = m.xi.parts()[0] as usize;
            if k < out.len() {
                out[k] += c * x.powi(m.x.parts()[0] as i32) * pref;
            }
        }
        out
    }

    pub fn eval(&self, x: f64, xi: f64) -> Complex64 {
        self.xi_coeffs(x).iter().enumerate().map(|(k, c)| c * xi.powi(k as i32)).sum()
    }
}

/// Test function `χ(x, y)` sampled on the square of a one-dimensional grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTestFunction {
    axis: AxisGrid,
    values: DMatrix<Complex64>,
}

impl KernelTestFunction {
    pub fn new(axis: AxisGrid, values: DMatrix<Complex64>) -> Result<Self> {
        if axis.dim() != 1 {
            return Err(Error::InvalidArgument("test functions live on a 1-d axis".into()));
        }
        if values.nrows() != axis.n() || values.ncols() != axis.n() {
            return Err(Error::Shape(format!("{}x{} samples for n = {}", values.nrows(), values.ncols(), axis.n())));
        }
        Ok(Self { axis, values })
    }

    pub fn from_fn(axis: AxisGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let n = axis.n();
        Self::new(axis, DMatrix::from_fn(n, n, |j, l| f(axis.point(j), axis.point(l))))
    }

    /// `e^{-7(x²+y²)} (1 + 0.3x - 0.2y)`.
    pub fn standard() -> Self {
        let axis = AxisGrid::new(256, 4.0, 1).expect("valid axis");
        Self::from_fn(axis, |x, y| Complex64::new((-7.0 * (x * x + y * y)).exp() * (1.0 + 0.3 * x - 0.2 * y), 0.0))
            .expect("square")
    }

    pub fn axis(&self) -> &AxisGrid {
        &self.axis
    }

    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    /// `∫ χ(x, x) dx`.
    pub fn diagonal_integral(&self) -> Complex64 {
        (0..self.axis.n()).map(|j| self.values[(j, j)]).sum::<Complex64>() * self.axis.dx()
    }

    /// `∫∫ K(x,y) χ(x,y) dx dy` for an operator matrix (weights already folded).
    pub fn pair_with(&self, op: &crate::quant::OperatorMatrix) -> Result<Complex64> {
        if op.axis() != &self.axis {
            return Err(Error::Shape("operator and test function live on different grids".into()));
        }
        Ok(op.matrix().iter().zip(self.values.iter()).map(|(k, c)| k * c).sum::<Complex64>() * self.axis.dx())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.axis.header();
        out.push('\n');
        let n = self.axis.n();
        for j in 0..n {
            for l in 0..n {
                let v = self.values[(j, l)];
                let _ = writeln!(out, "{j},{l},{},{}", v.re, v.im);
            }
        }
        out
    }

    pub fn from_csv(reader: impl BufRead) -> Result<Self> {
        let (header, rows) = read_csv(reader, 4)?;
        let axis = header.axis()?;
        let n = axis.n();
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for (i, r) in rows.iter().enumerate() {
            if r[0] < 0.0 || r[1] < 0.0 || r[0] as usize >= n || r[1] as usize >= n {
                return Err(Error::Parse { line: i + 2, message: format!("entry ({}, {}) out of range", r[0], r[1]) });
            }
            m[(r[0] as usize, r[1] as usize)] = Complex64::new(r[2], r[3]);
        }
        Self::new(axis, m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscKernelReport {
    pub deltas: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `|value(δ_{k+1}) - value(δ_k)|`
    pub differences: Vec<f64>,
    /// Measured convergence order in `δ`, when the differences allow it.
    pub order: Option<f64>,
    pub extrapolated: Complex64,
}

impl OscKernelReport {
    /// Differences shrink along the ladder; pairs already at rounding level count as shrinking.
    pub fn cauchy_monotone(&self) -> bool {
        let floor = 1e-13 * (1.0 + self.extrapolated.norm());
        self.differences.windows(2).all(|w| w[1] < w[0] || w[1].max(w[0]) < floor)
    }

    pub fn final_difference(&self) -> f64 {
        self.differences.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// `⟨K_δ, χ⟩ = (2π)^{-1} ∫∫∫ e^{i(x-y)ξ} ψ(δξ) b((x+y)/2, ξ) χ(x,y) dx dy dξ` along a δ ladder,
/// with Richardson extrapolation to `δ = 0`.
///
/// The `(x, y)` integral is a Riemann sum over the grid of `χ`, collapsed onto
/// the differences `t = x - y`: `g_k(t) = Σ_{x-y=t} f_k((x+y)/2) χ(x,y) Δx²` for
/// `b = Σ_k f_k(x) ξ^k`. What remains is `(2π)^{-1} Σ_k ∫ ψ(δξ) ξ^k ĝ_k(ξ) dξ`
/// with `ĝ_k(ξ) = Σ_t g_k(t) e^{itξ}`, done by Gauss–Legendre in `ξ`. The Riemann
/// sum is exact as long as `outer/δ` plus the bandwidth of `χ` stays below `2π/Δx`.
pub fn oscillatory_kernel(
    b: &OscSymbol,
    chi: &KernelTestFunction,
    deltas: &[f64],
    psi: &Cutoff,
) -> Result<OscKernelReport> {
    b.check()?;
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0)) || deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("delta list must be positive and strictly decreasing".into()));
    }
    let axis = chi.axis;
    let n = axis.n();
    let dx = axis.dx();
    let smallest = deltas[deltas.len() - 1];
    if psi.outer / smallest >= 2.0 * PI / dx {
        return Err(Error::InvalidArgument(format!(
            "δ = {smallest} puts the cutoff at |ξ| = {}, beyond what the χ grid resolves ({})",
            psi.outer / smallest,
            2.0 * PI / dx
        )));
    }
    let kmax = b.xi_degree();
    // f_k at the midpoints (x_j + y_l)/2 = -L + (j+l)Δx/2
    let mids: Vec<Vec<Complex64>> = (0..2 * n - 1).map(|s| b.xi_coeffs(-axis.half_width() + s as f64 * dx / 2.0)).collect();
    let zero = Complex64::new(0.0, 0.0);
    // g[m][k] at t = (m - (n-1)) Δx
    let mut g = vec![vec![zero; kmax + 1]; 2 * n - 1];
    for j in 0..n {
        for l in 0..n {
            let c = chi.values[(j, l)];
            if c == zero {
                continue;
            }
            for (acc, f) in g[j + n - 1 - l].iter_mut().zip(&mids[j + l]) {
                *acc += c * f * (dx * dx);
            }
        }
    }
    let scale = g.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let kept: Vec<(f64, &Vec<Complex64>)> = g
        .iter()
        .enumerate()
        .filter(|(_, row)| row.iter().any(|v| v.norm() > 1e-18 * scale))
        .map(|(m, row)| ((m as f64 - (n - 1) as f64) * dx, row))
        .collect();
    let t_max = kept.iter().map(|(t, _)| t.abs()).fold(0.0, f64::max);

    let mut values = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let (a, o) = (psi.inner / delta, psi.outer / delta);
        let mut acc = zero;
        for (lo, hi) in [(-o, -a), (-a, a), (a, o)] {
            // panels of at most a quarter oscillation of e^{i t_max ξ}
            let panels = (((hi - lo) * (t_max + 1.0) / (0.5 * PI)).ceil() as usize).max(2);
            for (xi, wt) in composite_gauss_legendre(lo, hi, panels) {
                let weight = wt * psi.eval(delta * xi);
                if weight == 0.0 {
                    continue;
                }
                let mut sum = zero;
                for (t, row) in &kept {
                    let phase = Complex64::from_polar(1.0, t * xi);
                    let mut poly = zero;
                    for v in row.iter().rev() {
                        poly = poly * xi + v;
                    }
                    sum += phase * poly;
                }
                acc += sum * weight;
            }
        }
        let v = acc / (2.0 * PI);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Overflow(format!("kernel pairing at δ = {delta} is not finite")));
        }
        values.push(v);
    }
    let differences: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let (order, extrapolated) = richardson(deltas, &values, &differences);
    Ok(OscKernelReport { deltas: deltas.to_vec(), values, differences, order, extrapolated })
}

fn richardson(deltas: &[f64], values: &[Complex64], diffs: &[f64]) -> (Option<f64>, Complex64) {
    let last = *values.last().expect("nonempty");
    if diffs.len() < 2 {
        return (None, last);
    }
    let m = diffs.len();
    let (d1, d2) = (diffs[m - 2], diffs[m - 1]);
    let r = deltas[m - 1] / deltas[m];
    if d2 <= 1e-14 * (1.0 + last.norm()) || d1 <= d2 {
        return (None, last);
    }
    let order = (d1 / d2).ln() / r.ln();
    let step = values[m] - values[m - 1];
    (Some(order), last + step / (r.powf(order) - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quant::{weyl_analytic, FnSymbol};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / (1.0 + b.norm())
    }

    #[test]
    fn composite_rule_is_exact_for_polynomials() {
        let r = composite_gauss_legendre(-1.0, 3.0, 5);
        let v: f64 = r.iter().map(|(x, w)| w * x.powi(7)).sum();
        assert!((v - (3f64.powi(8) - 1.0) / 8.0).abs() < 1e-10);
    }

    #[test]
    fn laplace_examples() {
        let s = CompactDensity::indicator(-1.0, 1.0);
        assert!((laplace(&s, &[c(0.0)]).unwrap() - c(2.0)).norm() < 1e-13);
        let e = std::f64::consts::E;
        assert!((laplace(&s, &[c(1.0)]).unwrap() - c(e - 1.0 / e)).norm() < 1e-13);
        assert!(laplace(&s, &[Complex64::new(0.0, PI)]).unwrap().norm() < 1e-13);
        assert!(matches!(laplace(&s, &[c(-800.0)]), Err(Error::Overflow(_))));
    }

    #[test]
    fn laplace_on_imaginary_axis_is_fourier() {
        let s = CompactDensity::indicator(-1.0, 1.0);
        for eta in [0.3f64, 1.7, 5.0, 12.5] {
            let v = laplace(&s, &[Complex64::new(0.0, eta)]).unwrap();
            assert!((v - c(2.0 * eta.sin() / eta)).norm() < 1e-10);
        }
    }

    #[test]
    fn laplace_is_analytic() {
        let s = CompactDensity::new(DensityKind::PolyTimesBump { coeffs: vec![1.0, 0.5, -0.25] }, -1.0, 1.5, 1).unwrap();
        let h = 1e-5;
        for (re, im) in [(0.3, -0.7), (-1.2, 2.0), (2.5, 0.1)] {
            let z = Complex64::new(re, im);
            let f = |z: Complex64| laplace(&s, &[z]).unwrap();
            let dfdx = (f(z + h) - f(z - h)) / (2.0 * h);
            let dfdy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
            // Cauchy–Riemann: ∂f/∂y = i ∂f/∂x
            assert!((dfdy - Complex64::i() * dfdx).norm() < 1e-6 * (1.0 + dfdx.norm()));
        }
    }

    #[test]
    fn convolution_examples() {
        let s = CompactDensity::indicator(-1.0, 1.0);
        let at0 = conv_gauss_via_laplace(&s, -1.0, &[0.0]).unwrap();
        // √π erf(1)
        assert!((at0.re - 1.493_648_265_624_854).abs() < 1e-12);
        let via = conv_gauss_via_laplace(&s, -1.0, &[10.0]).unwrap();
        let direct = conv_gauss_direct(&s, -1.0, &[10.0]).unwrap();
        assert!((via - direct).norm() / direct.norm() < 1e-8);
        let sym = CompactDensity::new(DensityKind::PolyTimesBump { coeffs: vec![1.0, 0.0, 2.0] }, -1.0, 1.0, 1).unwrap();
        for x in [0.5, 2.0, 3.7] {
            let (a, b) = (conv_gauss_via_laplace(&sym, -0.25, &[x]).unwrap(), conv_gauss_via_laplace(&sym, -0.25, &[-x]).unwrap());
            assert!(rel(a, b) < 1e-12);
        }
        assert!(matches!(conv_gauss_direct(&s, 0.0, &[0.0]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn narrow_bump_reproduces_kernel() {
        let mut prev = f64::INFINITY;
        for w in [0.1, 0.05, 0.025] {
            let s = CompactDensity::with_panels(DensityKind::GaussianBump { center: 0.0, width: w }, -1.0, 1.0, 1, 128).unwrap();
            let err = (conv_gauss_direct(&s, -1.0, &[0.8]).unwrap().re - (-0.64f64).exp()).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn convolution_in_two_dimensions() {
        let s = CompactDensity::new(DensityKind::Indicator, -1.0, 1.0, 2).unwrap();
        let x = [0.4, -1.3];
        let via = conv_gauss_via_laplace(&s, -1.0, &x).unwrap();
        let direct = conv_gauss_direct(&s, -1.0, &x).unwrap();
        assert!(rel(via, direct) < 1e-12);
        // separable: product of the 1-d values
        let one = CompactDensity::indicator(-1.0, 1.0);
        let prod = conv_gauss_direct(&one, -1.0, &[0.4]).unwrap() * conv_gauss_direct(&one, -1.0, &[-1.3]).unwrap();
        assert!(rel(direct, prod) < 1e-12);
    }

    #[test]
    fn bstar_examples() {
        let ks = [0.0, 1.0, 5.0, 10.0];
        let r = bstar_diagnostic(Some(GrowthEnvelope::Gaussian { l: 0.5 }), -1.0, &ks, 60.0, 1).unwrap();
        assert!(r.all_pass(), "{r:?}");
        let r = bstar_diagnostic(Some(GrowthEnvelope::Gaussian { l: 1.0 }), -1.0, &ks, 60.0, 1).unwrap();
        assert!(r.entries.iter().all(|e| !e.pass));
        let r = bstar_diagnostic(Some(GrowthEnvelope::Compact { radius: 2.0 }), 3.0, &ks, 60.0, 2).unwrap();
        assert!(r.all_pass());
        assert!(matches!(bstar_diagnostic(None, -1.0, &ks, 10.0, 1), Err(Error::EnvelopeMissing)));
    }

    #[test]
    fn example5_values() {
        let one = PolySymbol::one(1);
        assert!((example5_symbol(0.0, &one, &[0.7], &[2.0]).unwrap() - c(1.0)).norm() < 1e-15);
        let xi2 = PolySymbol::monomial(&[2], &[0], c(1.0));
        assert!((example5_symbol(0.0, &xi2, &[0.7], &[2.0]).unwrap() - c(4.5)).norm() < 1e-14);
        let v = example5_symbol(0.5, &one, &[1.0], &[0.0]).unwrap();
        assert!((v.re - 2f64.sqrt() * std::f64::consts::E).abs() < 1e-14);
        assert!(example5_symbol(1.0, &one, &[0.0], &[0.0]).is_err());
    }

    #[test]
    fn example5_matches_quadrature() {
        // π^{-1} ∫∫ e^{l y²} P(η) e^{-(x-y)² - (ξ-η)²} dy dη with P = ξ²
        let (l, x, xi) = (0.5, 0.8, -1.1);
        let rule = composite_gauss_legendre(-12.0, 12.0, 48);
        let mut acc = 0.0;
        for &(y, wy) in &rule {
            for &(eta, we) in &rule {
                acc += wy * we * (l * y * y - (x - y) * (x - y) - (xi - eta) * (xi - eta)).exp() * eta * eta;
            }
        }
        acc /= PI;
        let xi2 = PolySymbol::monomial(&[2], &[0], c(1.0));
        let v = example5_symbol(l, &xi2, &[x], &[xi]).unwrap();
        assert!((v.re - acc).abs() < 1e-10 * acc.abs());
    }

    #[test]
    fn cutoff_is_smooth_plateau() {
        let p = Cutoff::STANDARD;
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.eval(1.0), 1.0);
        assert_eq!(p.eval(-2.0), 0.0);
        assert!((p.eval(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = p.eval(1.0 + i as f64 / 100.0);
            assert!(v <= prev);
            prev = v;
        }
        assert!(Cutoff::new(2.0, 1.0).is_err());
    }

    #[test]
    fn oscillatory_kernel_identity_symbol() {
        let chi = KernelTestFunction::standard();
        let deltas = crate::defaults::DELTA_LADDER;
        let r = oscillatory_kernel(&OscSymbol::Poly(PolySymbol::one(1)), &chi, &deltas, &Cutoff::STANDARD).unwrap();
        assert!(r.cauchy_monotone(), "{:?}", r.differences);
        assert!(rel(r.extrapolated, chi.diagonal_integral()) < 1e-8);
        let zero = KernelTestFunction::from_fn(*chi.axis(), |_, _| c(0.0)).unwrap();
        let r0 = oscillatory_kernel(&OscSymbol::Poly(PolySymbol::one(1)), &zero, &deltas, &Cutoff::STANDARD).unwrap();
        assert!(r0.values.iter().all(|v| v.norm() == 0.0));
        assert!(oscillatory_kernel(&OscSymbol::Poly(PolySymbol::one(1)), &chi, &[0.1, 0.2], &Cutoff::STANDARD).is_err());
    }

    #[test]
    fn oscillatory_kernel_rejects_unresolved_ladder() {
        let chi = KernelTestFunction::standard();
        let one = OscSymbol::Poly(PolySymbol::one(1));
        assert!(oscillatory_kernel(&one, &chi, &[0.1, 0.0125], &Cutoff::ALTERNATE).is_err());
        assert!(oscillatory_kernel(&one, &chi, &[0.1, 0.0125], &Cutoff::STANDARD).is_ok());
    }

    #[test]
    fn example5_kernel_matches_weyl_pairing() {
        let chi = KernelTestFunction::standard();
        let p = PolySymbol::monomial(&[2], &[0], c(1.0));
        let sym = FnSymbol::new(1, |x: &[f64], k: &[f64]| example5_symbol(0.5, &p, x, k).unwrap());
        let oracle = chi.pair_with(&weyl_analytic(&sym, chi.axis()).unwrap()).unwrap();
        let b = OscSymbol::Example5 { l: 0.5, p: p.clone() };
        for psi in [Cutoff::STANDARD, Cutoff::ALTERNATE] {
            let r = oscillatory_kernel(&b, &chi, &crate::defaults::DELTA_LADDER, &psi).unwrap();
            assert!(r.cauchy_monotone(), "{:?}", r.differences);
            assert!(rel(r.extrapolated, oracle) < 1e-6, "{} vs {oracle}", r.extrapolated);
        }
    }

    #[test]
    fn oscillatory_kernel_xi_matches_weyl() {
        let chi = KernelTestFunction::standard();
        let xi = PolySymbol::xi(1, 0);
        let r = oscillatory_kernel(&OscSymbol::Poly(xi.clone()), &chi, &crate::defaults::DELTA_LADDER, &Cutoff::STANDARD).unwrap();
        let w = weyl_analytic(&FnSymbol::new(1, |_: &[f64], k: &[f64]| c(k[0])), chi.axis()).unwrap();
        let oracle = chi.pair_with(&w).unwrap();
        assert!(rel(r.extrapolated, oracle) < 1e-6, "{} vs {}", r.extrapolated, oracle);
    }

    #[test]
    fn csv_roundtrip() {
        let ax = AxisGrid::new(8, 2.0, 1).unwrap();
        let chi = KernelTestFunction::from_fn(ax, |x, y| Complex64::new(x, y)).unwrap();
        assert_eq!(KernelTestFunction::from_csv(chi.to_csv().as_bytes()).unwrap(), chi);
    }
}
