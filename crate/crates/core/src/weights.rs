//! Weight sequences `M_p`, associated functions and ultrapolynomials.
//!
//! Everything is stored and evaluated in the log domain: `(p!)^2` already
//! overflows an `f64` near `p = 85`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::defaults;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `M_p = (p!)^s`.
    Gevrey(f64),
    Explicit,
}

/// Positive sequence `M_0 = 1, M_1, ..., M_P`, stored as `ln M_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    ln_values: Vec<f64>,
    generator: Generator,
}

impl WeightSequence {
    /// Gevrey sequence `(p!)^s` truncated at `P`.
    pub fn gevrey(s: f64, truncation: usize) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidWeight(format!("Gevrey exponent s = {s} must be positive")));
        }
        if truncation == 0 {
            return Err(Error::TruncationTooShort { needed: 1, have: 0 });
        }
        let mut ln_values = Vec::with_capacity(truncation + 1);
        let mut ln_fact = 0.0;
        ln_values.push(0.0);
        for p in 1..=truncation {
            ln_fact += (p as f64).ln();
            ln_values.push(s * ln_fact);
        }
        Ok(Self { ln_values, generator: Generator::Gevrey(s) })
    }

    pub fn gevrey_default(s: f64) -> Result<Self> {
        Self::gevrey(s, defaults::WEIGHT_TRUNCATION)
    }

    /// Explicit sequence from plain values `M_0, ..., M_P`.
    pub fn explicit(values: &[f64]) -> Result<Self> {
        if values.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::InvalidWeight("all terms must be positive and finite".into()));
        }
        Self::explicit_ln(values.iter().map(|v| v.ln()).collect())
    }

    /// Explicit sequence from `ln M_0, ..., ln M_P`.
    pub fn explicit_ln(ln_values: Vec<f64>) -> Result<Self> {
        if ln_values.len() < 2 {
            return Err(Error::TruncationTooShort { needed: 1, have: ln_values.len().saturating_sub(1) });
        }
        if ln_values[0].abs() > 1e-14 {
            return Err(Error::InvalidWeight(format!("M_0 must be 1, got e^{}", ln_values[0])));
        }
        if ln_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidWeight("ln M_p must be finite".into()));
        }
        Ok(Self { ln_values, generator: Generator::Explicit })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// Truncation index `P`.
    pub fn truncation(&self) -> usize {
        self.ln_values.len() - 1
    }

    pub fn ln_values(&self) -> &[f64] {
        &self.ln_values
    }

    pub fn ln_value(&self, p: usize) -> f64 {
        self.ln_values[p]
    }

    pub fn value(&self, p: usize) -> f64 {
        self.ln_values[p].exp()
    }

    /// `ln m_p = ln M_p - ln M_{p-1}` for `1 <= p`. Gevrey quotients are known
    /// past the truncation; explicit ones are not.
    pub fn ln_quotient(&self, p: usize) -> Option<f64> {
        if p == 0 {
            return None;
        }
        if p <= self.truncation() {
            return Some(self.ln_values[p] - self.ln_values[p - 1]);
        }
        match self.generator {
            Generator::Gevrey(s) => Some(s * (p as f64).ln()),
            Generator::Explicit => None,
        }
    }

    /// `m_p = M_p / M_{p-1}` on the stored prefix.
    pub fn quotient(&self, p: usize) -> f64 {
        self.ln_quotient(p).map(f64::exp).unwrap_or(f64::NAN)
    }

    /// `(M.1)`: `M_p^2 <= M_{p-1} M_{p+1}` for `1 <= p <= P-1`.
    pub fn is_log_convex(&self) -> bool {
        self.ln_values.windows(3).all(|w| 2.0 * w[1] <= w[0] + w[2] + 1e-12 * (1.0 + w[1].abs()))
    }

    /// Plain-text form: `gevrey s=<s> P=<P>` or `explicit` followed by `ln M_p` lines.
    pub fn to_text(&self) -> String {
        match self.generator {
            Generator::Gevrey(s) => format!("gevrey s={s} P={}\n", self.truncation()),
            Generator::Explicit => {
                let mut out = String::from("explicit\n");
                for v in &self.ln_values {
                    let _ = writeln!(out, "{v}");
                }
                out
            }
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim().starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| Error::Parse { line: 1, message: "empty weight file".into() })?;
        let mut tokens = header.split_whitespace();
        match tokens.next() {
            Some("gevrey") => {
                let mut s = None;
                let mut truncation = defaults::WEIGHT_TRUNCATION;
                for tok in tokens {
                    let bad = || Error::Parse { line: 1, message: format!("malformed field `{tok}`") };
                    match tok.split_once('=') {
                        Some(("s", v)) => s = Some(v.parse::<f64>().map_err(|_| bad())?),
                        Some(("P", v)) => truncation = v.parse::<usize>().map_err(|_| bad())?,
                        _ => return Err(bad()),
                    }
                }
                let s = s.ok_or_else(|| Error::Parse { line: 1, message: "gevrey header needs s=<real>".into() })?;
                Self::gevrey(s, truncation)
            }
            Some("explicit") => {
                let values = lines
                    .map(|(i, l)| {
                        l.trim().parse::<f64>().map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::explicit_ln(values)
            }
            other => Err(Error::Parse {
                line: 1,
                message: format!("expected `gevrey` or `explicit`, found {other:?}"),
            }),
        }
    }
}

/// Positive non-decreasing sequence `r_1, r_2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinateSequence {
    r: Vec<f64>,
    diverging: bool,
}

impl SubordinateSequence {
    pub fn new(r: Vec<f64>, diverging: bool) -> Result<Self> {
        if r.is_empty() || r.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::InvalidWeight("subordinate terms must be positive".into()));
        }
        if r.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidWeight("subordinate sequence must be non-decreasing".into()));
        }
        Ok(Self { r, diverging })
    }

    /// `r_p = p` for `p = 1..=len`.
    pub fn identity(len: usize) -> Self {
        Self { r: (1..=len).map(|p| p as f64).collect(), diverging: true }
    }

    /// `r_p` for `p >= 1`.
    pub fn get(&self, p: usize) -> f64 {
        self.r[p - 1]
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn diverging(&self) -> bool {
        self.diverging
    }
}

/// Value of an associated function together with where the supremum sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssocValue {
    pub value: f64,
    pub maximizer: usize,
    /// The maximizer is the truncation index, so the true supremum may be larger.
    pub saturated: bool,
}

impl AssocValue {
    pub fn exact(self) -> Result<f64> {
        if self.saturated {
            Err(Error::Saturated { truncation: self.maximizer })
        } else {
            Ok(self.value)
        }
    }
}

fn sup_log_plus(terms: impl Iterator<Item = f64>, log_convex: bool, last: usize) -> AssocValue {
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for (p, t) in terms.enumerate() {
        if t > best {
            best = t;
            arg = p;
        } else if log_convex && t < best {
            // concave in p from here on
            break;
        }
    }
    AssocValue { value: best.max(0.0), maximizer: arg, saturated: arg == last && best > 0.0 }
}

/// `M(ρ) = sup_p log_+ (ρ^p / M_p)` over the stored prefix.
pub fn assoc_fn(w: &WeightSequence, rho: f64) -> Result<AssocValue> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::NonPositiveRho(rho));
    }
    let lr = rho.ln();
    let terms = w.ln_values.iter().enumerate().map(|(p, lm)| p as f64 * lr - lm);
    Ok(sup_log_plus(terms, w.is_log_convex(), w.truncation()))
}

/// Reference scan over every index, used to cross-check [`assoc_fn`].
pub fn assoc_fn_brute(w: &WeightSequence, rho: f64) -> Result<AssocValue> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::NonPositiveRho(rho));
    }
    let lr = rho.ln();
    let terms = w.ln_values.iter().enumerate().map(|(p, lm)| p as f64 * lr - lm);
    Ok(sup_log_plus(terms, false, w.truncation()))
}

/// `N_r(ρ) = sup_p log_+ (ρ^p / (M_p r_1 ... r_p))`.
pub fn assoc_fn_subordinate(w: &WeightSequence, r: &SubordinateSequence, rho: f64) -> Result<AssocValue> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::NonPositiveRho(rho));
    }
    let last = w.truncation().min(r.len());
    let lr = rho.ln();
    let mut ln_prod = 0.0;
    let terms = (0..=last).map(|p| {
        if p > 0 {
            ln_prod += r.get(p).ln();
        }
        p as f64 * lr - w.ln_value(p) - ln_prod
    });
    Ok(sup_log_plus(terms, false, last))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum M2Fit {
    Holds { c0: f64, h: f64 },
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum M3Fit {
    Holds { c0: f64 },
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionsReport {
    pub m1_ok: bool,
    pub m2: M2Fit,
    pub m3: M3Fit,
}

impl ConditionsReport {
    pub fn all_hold(&self) -> bool {
        self.m1_ok && matches!(self.m2, M2Fit::Holds { .. }) && matches!(self.m3, M3Fit::Holds { .. })
    }

    /// `(c0, H)` usable in both `(M.2)` and `(M.3)`.
    pub fn constants(&self) -> Option<(f64, f64)> {
        match (self.m2, self.m3) {
            (M2Fit::Holds { c0: a, h }, M3Fit::Holds { c0: b }) => Some((a.max(b), h)),
            _ => None,
        }
    }
}

/// Checks `(M.1)`, fits `(M.2)` and `(M.3)` constants on the stored prefix.
pub fn check_conditions(w: &WeightSequence) -> Result<ConditionsReport> {
    if w.truncation() < 4 {
        return Err(Error::TruncationTooShort { needed: 4, have: w.truncation() });
    }
    Ok(ConditionsReport { m1_ok: w.is_log_convex(), m2: fit_m2(w), m3: fit_m3(w) })
}

/// Residuals `r_p = ln M_p - p ln H - min_q (ln M_q + ln M_{p-q})`.
fn m2_residuals(w: &WeightSequence, ln_h: f64) -> Vec<f64> {
    let lm = w.ln_values();
    (0..lm.len())
        .map(|p| {
            let split = (0..=p).map(|q| lm[q] + lm[p - q]).fold(f64::INFINITY, f64::min);
            lm[p] - p as f64 * ln_h - split
        })
        .collect()
}

/// Smallest lattice `H` whose residuals stop growing over the upper half of the
/// prefix; `c0` is then the exact maximum residual.
fn fit_m2(w: &WeightSequence) -> M2Fit {
    let half = w.truncation() / 2;
    let steps = ((defaults::H_MAX - defaults::H_MIN) / defaults::H_STEP).round() as usize;
    for i in 0..=steps {
        let h = defaults::H_MIN + i as f64 * defaults::H_STEP;
        let r = m2_residuals(w, h.ln());
        let tail_max = r[half..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if tail_max <= r[half] + 1e-12 {
            let c0 = r.iter().copied().fold(f64::NEG_INFINITY, f64::max).exp();
            return M2Fit::Holds { c0, h };
        }
    }
    M2Fit::Violated
}

/// Growth exponent `κ` with `m_p ~ p^κ`, fitted on the upper half of the prefix.
fn growth_exponent(w: &WeightSequence) -> f64 {
    let p = w.truncation();
    match w.generator {
        Generator::Gevrey(s) => s,
        Generator::Explicit => {
            let (a, b) = (w.ln_quotient(p / 2).unwrap(), w.ln_quotient(p).unwrap());
            (b - a) / ((p as f64).ln() - ((p / 2) as f64).ln())
        }
    }
}

/// Estimate of `Σ_{p > P} 1/m_p^e` for `m_p ~ p^κ`.
fn quotient_tail(w: &WeightSequence, power: f64) -> Option<f64> {
    let p = w.truncation() as f64;
    let kappa = growth_exponent(w) * power;
    if kappa <= 1.0 {
        return None;
    }
    let ln_mp = w.ln_quotient(w.truncation()).unwrap() * power;
    // Σ_{j>P} (P/j)^κ / m_P^e <= P / ((κ - 1) m_P^e)
    Some(p * (-ln_mp).exp() / (kappa - 1.0))
}

fn fit_m3(w: &WeightSequence) -> M3Fit {
    let pmax = w.truncation();
    let Some(remainder) = quotient_tail(w, 1.0) else {
        return M3Fit::Violated;
    };
    let inv: Vec<f64> = (0..=pmax).map(|p| if p == 0 { 0.0 } else { (-w.ln_quotient(p).unwrap()).exp() }).collect();
    let mut c0: f64 = 0.0;
    for q in 1..=pmax / 2 {
        let tail: f64 = inv[q + 1..].iter().sum::<f64>() + remainder;
        c0 = c0.max(tail * w.ln_quotient(q + 1).unwrap().exp() / q as f64);
    }
    M3Fit::Holds { c0 }
}

/// `M(m m_n) <= 2 (c0 m + 2) n ln H + ln c0` for `1 <= n <= n_max`.
pub fn lemma69_check(w: &WeightSequence, m: f64, n_max: usize, c0: f64, h: f64) -> Result<bool> {
    if n_max > w.truncation() {
        return Err(Error::TruncationTooShort { needed: n_max, have: w.truncation() });
    }
    for n in 1..=n_max {
        let lhs = assoc_fn(w, m * w.quotient(n))?.exact()?;
        let rhs = 2.0 * (c0 * m + 2.0) * n as f64 * h.ln() + c0.ln();
        if lhs > rhs + 1e-12 * (1.0 + rhs.abs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`lemma69_check`] with constants fitted by [`check_conditions`].
pub fn lemma69_fitted(w: &WeightSequence, m: f64, n_max: usize) -> Result<bool> {
    let report = check_conditions(w)?;
    let (c0, h) = report
        .constants()
        .ok_or_else(|| Error::InvalidWeight("(M.2)/(M.3) constants could not be fitted".into()))?;
    lemma69_check(w, m, n_max, c0, h)
}

/// Scale of an ultrapolynomial: one `l` or a subordinate sequence `l_j`.
#[derive(Debug, Clone, PartialEq)]
pub enum Scale {
    Constant(f64),
    Sequence(SubordinateSequence),
}

/// Truncated `P_l(z) = Π_{j=q}^{q+J-1} (1 + z² / (l_j² m_j²))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ultrapolynomial {
    weight: WeightSequence,
    scale: Scale,
    q: usize,
    factors: usize,
}

impl Ultrapolynomial {
    pub fn new(weight: WeightSequence, scale: Scale, q: usize, factors: usize) -> Result<Self> {
        if q == 0 || factors == 0 {
            return Err(Error::InvalidArgument("q and J must be positive".into()));
        }
        match &scale {
            Scale::Constant(l) if !(l.is_finite() && *l > 0.0) => {
                return Err(Error::InvalidArgument(format!("l = {l} must be positive")))
            }
            Scale::Sequence(s) if s.len() < q + factors - 1 => {
                return Err(Error::TruncationTooShort { needed: q + factors - 1, have: s.len() })
            }
            _ => {}
        }
        let last = q + factors - 1;
        if w_quotient_missing(&weight, last) {
            return Err(Error::TruncationTooShort { needed: last, have: weight.truncation() });
        }
        Ok(Self { weight, scale, q, factors })
    }

    /// Smallest `J` for which the dropped tail at `|z| = z_abs` is below the default bound.
    pub fn truncation_for(weight: &WeightSequence, l: f64, q: usize, z_abs: f64) -> Result<usize> {
        let probe = Self { weight: weight.clone(), scale: Scale::Constant(l), q, factors: 1 };
        let mut hi = 1usize;
        let cap = match weight.generator {
            Generator::Gevrey(_) => 1 << 26,
            Generator::Explicit => weight.truncation() + 1 - q,
        };
        let fits = |j: usize| probe.tail_with(j, z_abs).is_some_and(|t| t < defaults::ULTRAPOLY_TAIL);
        while !fits(hi) {
            hi *= 2;
            if hi > cap {
                return Err(Error::TailBound { z_abs, tail: f64::INFINITY, bound: defaults::ULTRAPOLY_TAIL });
            }
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if fits(mid) {
                hi = mid
            } else {
                lo = mid
            }
        }
        Ok(hi)
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    fn ln_scale(&self, j: usize) -> f64 {
        match &self.scale {
            Scale::Constant(l) => l.ln(),
            Scale::Sequence(s) => s.get(j.min(s.len())).ln(),
        }
    }

    /// Upper bound for `Σ_{j > last} |z|² / (l_j² m_j²)`.
    fn tail_with(&self, factors: usize, z_abs: f64) -> Option<f64> {
        let last = self.q + factors - 1;
        let z2 = z_abs * z_abs;
        let ln_l = self.ln_scale(last);
        let tail = match self.weight.generator {
            Generator::Gevrey(s) => {
                // Σ_{j>J} j^{-2s} <= ∫_J^∞ t^{-2s} dt
                let j = last as f64;
                j.powf(1.0 - 2.0 * s) / (2.0 * s - 1.0)
            }
            Generator::Explicit => {
                let stored: f64 = (last + 1..=self.weight.truncation())
                    .map(|j| (-2.0 * self.weight.ln_quotient(j).unwrap()).exp())
                    .sum();
                stored + quotient_tail(&self.weight, 2.0)?
            }
        };
        Some(z2 * (-2.0 * ln_l).exp() * tail)
    }

    /// Dropped tail at `|z|`, `None` when it cannot be bounded.
    pub fn tail(&self, z_abs: f64) -> Option<f64> {
        self.tail_with(self.factors, z_abs)
    }

    fn check_tail(&self, z_abs: f64) -> Result<()> {
        match self.tail(z_abs) {
            Some(t) if t < defaults::ULTRAPOLY_TAIL => Ok(()),
            t => Err(Error::TailBound {
                z_abs,
                tail: t.unwrap_or(f64::INFINITY),
                bound: defaults::ULTRAPOLY_TAIL,
            }),
        }
    }

    fn factor(&self, j: usize, z2: Complex64) -> Complex64 {
        let denom = (2.0 * (self.ln_scale(j) + self.weight.ln_quotient(j).unwrap())).exp();
        Complex64::new(1.0, 0.0) + z2 / denom
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_tail(z.norm())?;
        let z2 = z * z;
        Ok((self.q..self.q + self.factors).map(|j| self.factor(j, z2)).product())
    }

    /// `ln |P(z)|`, immune to overflow of the product.
    ///
    /// Long Gevrey products with a constant scale sum the first factors directly
    /// and the rest by Euler–Maclaurin over `ln|1 + w t^{-2s}|`.
    pub fn ln_abs(&self, z: Complex64) -> Result<f64> {
        self.check_tail(z.norm())?;
        let z2 = z * z;
        let last = self.q + self.factors - 1;
        if let (Generator::Gevrey(s), Scale::Constant(l)) = (&self.weight.generator, &self.scale) {
            let split = self.q + EM_SPLIT;
            if last > 2 * split && z.norm() < 0.5 * l * (split as f64).powf(*s) {
                let head: f64 = (self.q..=split).map(|j| self.factor(j, z2).norm().ln()).sum();
                return Ok(head + em_log_sum(z2 / (l * l), *s, (split + 1) as f64, last as f64));
            }
        }
        Ok((self.q..=last).map(|j| self.factor(j, z2).norm().ln()).sum())
    }
}

fn w_quotient_missing(w: &WeightSequence, last: usize) -> bool {
    w.ln_quotient(last).is_none()
}

const EM_SPLIT: usize = 2048;

/// `Σ_{j=a}^{b} Re ln(1 + w j^{-2s})` for `|w| a^{-2s} < 1/4`.
fn em_log_sum(w: Complex64, s: f64, a: f64, b: f64) -> f64 {
    let f = |t: f64| (Complex64::new(1.0, 0.0) + w * t.powf(-2.0 * s)).ln().re;
    let df = |t: f64| {
        let v = w * t.powf(-2.0 * s);
        (-2.0 * s * v / (t * (Complex64::new(1.0, 0.0) + v))).re
    };
    // integral in u = ln t, where the integrand is smooth and decays geometrically
    let (ua, ub) = (a.ln(), b.ln());
    let panels = ((ub - ua) / 0.5).ceil().max(1.0) as usize;
    let integral: f64 = crate::gaussconv::composite_gauss_legendre(ua, ub, panels)
        .into_iter()
        .map(|(u, wt)| wt * u.exp() * f(u.exp()))
        .sum();
    integral + 0.5 * (f(a) + f(b)) + (df(b) - df(a)) / 12.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltraBoundReport {
    /// `min_x |P(x)| e^{-M(|x|/k)}` over the grid.
    pub c_tilde: f64,
    pub ok: bool,
}

/// Empirical lower bound `|P(x)| >= C̃ e^{M(|x|/k)}` on a grid of real points.
///
/// `ok` requires `C̃` to be positive and finite and the ratio not to sink on the
/// outer half of the grid (`|x| > max|x|/2`) below its minimum on the inner half.
pub fn verify_ultrapoly_bound(p: &Ultrapolynomial, k: f64, grid: &[f64]) -> Result<UltraBoundReport> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidArgument(format!("k = {k} must be positive")));
    }
    let r_max = grid.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut inner = f64::INFINITY;
    let mut outer = f64::INFINITY;
    for &x in grid {
        let m = if x == 0.0 { 0.0 } else { assoc_fn(&p.weight, x.abs() / k)?.exact()? };
        let ln_ratio = p.ln_abs(Complex64::new(x, 0.0))? - m;
        if x.abs() > r_max / 2.0 {
            outer = outer.min(ln_ratio);
        } else {
            inner = inner.min(ln_ratio);
        }
    }
    let ln_c = inner.min(outer);
    let c_tilde = ln_c.exp();
    let ok = c_tilde.is_finite() && c_tilde > 0.0 && (outer == f64::INFINITY || outer >= inner - 1e-12);
    Ok(UltraBoundReport { c_tilde, ok })
}

/// First `(l, k)` pair, scanning `l` then `k`, for which the bound is verified.
pub fn fit_ultrapoly_bound(
    weight: &WeightSequence,
    q: usize,
    grid: &[f64],
    l_candidates: &[f64],
    k_candidates: &[f64],
) -> Result<Option<(f64, f64, UltraBoundReport)>> {
    let z_max = grid.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for &l in l_candidates {
        let j = Ultrapolynomial::truncation_for(weight, l, q, z_max)?;
        let p = Ultrapolynomial::new(weight.clone(), Scale::Constant(l), q, j)?;
        for &k in k_candidates {
            let report = verify_ultrapoly_bound(&p, k, grid)?;
            if report.ok {
                return Ok(Some((l, k, report)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ln_fact(p: usize) -> f64 {
        (1..=p).map(|k| (k as f64).ln()).sum()
    }

    #[test]
    fn gevrey_values() {
        let w = WeightSequence::gevrey(2.0, 10).unwrap();
        assert_eq!(w.value(0), 1.0);
        assert!((w.value(4) - 576.0).abs() < 1e-9);
        assert!((w.quotient(3) - 9.0).abs() < 1e-12);
        assert!((w.ln_quotient(100).unwrap() - 2.0 * 100f64.ln()).abs() < 1e-12);
        assert!(w.is_log_convex());
    }

    #[test]
    fn assoc_examples() {
        let w = WeightSequence::gevrey(2.0, 50).unwrap();
        assert_eq!(assoc_fn(&w, 0.5).unwrap().value, 0.0);
        let v = assoc_fn(&w, 2.0).unwrap();
        assert!((v.value - 2f64.ln()).abs() < 1e-14);
        assert_eq!(v.maximizer, 1);
        assert!(!v.saturated);

        let flat = WeightSequence::explicit(&[1.0; 20]).unwrap();
        let v = assoc_fn(&flat, 3.0).unwrap();
        assert!(v.saturated);
        assert!(matches!(v.exact(), Err(Error::Saturated { truncation: 19 })));
        assert!(matches!(assoc_fn(&w, 0.0), Err(Error::NonPositiveRho(_))));
        assert!(matches!(assoc_fn(&w, -1.0), Err(Error::NonPositiveRho(_))));
    }

    #[test]
    fn assoc_subordinate_examples() {
        let w = WeightSequence::gevrey(2.0, 50).unwrap();
        let r = SubordinateSequence::identity(50);
        assert_eq!(assoc_fn_subordinate(&w, &r, 0.9).unwrap().value, 0.0);
        let v = assoc_fn_subordinate(&w, &r, 2.0).unwrap();
        assert!((v.value - 2f64.ln()).abs() < 1e-14);
        // max_p p ln 10 - 3 ln p!, attained at p = 2
        let v = assoc_fn_subordinate(&w, &r, 10.0).unwrap();
        assert_eq!(v.maximizer, 2);
        assert!((v.value - 12.5f64.ln()).abs() < 1e-12);
        assert!((v.value - 2.525_728_644_308_255).abs() < 1e-12);
    }

    #[test]
    fn conditions_examples() {
        let w = WeightSequence::gevrey(2.0, 40).unwrap();
        let rep = check_conditions(&w).unwrap();
        assert!(rep.m1_ok);
        assert!(rep.all_hold());

        let fact = WeightSequence::explicit_ln((0..=40).map(ln_fact).collect()).unwrap();
        match check_conditions(&fact).unwrap().m2 {
            M2Fit::Holds { h, c0 } => {
                assert!((h - 2.0).abs() < 1e-12, "H = {h}");
                assert!(c0 >= 1.0);
            }
            M2Fit::Violated => panic!("p! satisfies (M.2)"),
        }
        // Σ 1/p diverges
        assert_eq!(check_conditions(&fact).unwrap().m3, M3Fit::Violated);

        let mut bad = vec![1.0, 1.0, 10.0, 11.0];
        bad.extend((4..10).map(|p| 11.0 * 20f64.powi(p - 3)));
        let bad = WeightSequence::explicit(&bad).unwrap();
        assert!(!check_conditions(&bad).unwrap().m1_ok);

        let short = WeightSequence::gevrey(2.0, 3).unwrap();
        assert!(matches!(check_conditions(&short), Err(Error::TruncationTooShort { .. })));
    }

    #[test]
    fn m2_brute_force_for_factorial() {
        let fact = WeightSequence::explicit_ln((0..=40).map(ln_fact).collect()).unwrap();
        let M2Fit::Holds { c0, h } = check_conditions(&fact).unwrap().m2 else { panic!() };
        for p in 0..=40usize {
            for q in 0..=p {
                let lhs = ln_fact(p);
                let rhs = c0.ln() + p as f64 * h.ln() + ln_fact(q) + ln_fact(p - q);
                assert!(lhs <= rhs + 1e-9);
            }
        }
    }

    #[test]
    fn gevrey_m2_constants() {
        for (s, expect) in [(1.5, 2.9), (2.0, 4.0), (3.0, 8.0)] {
            let w = WeightSequence::gevrey_default(s).unwrap();
            let M2Fit::Holds { h, .. } = check_conditions(&w).unwrap().m2 else { panic!("s = {s}") };
            assert!(h <= expect + 1e-9, "s = {s}: H = {h}");
        }
    }

    #[test]
    fn moment_inequality_examples() {
        let w = WeightSequence::gevrey_default(2.0).unwrap();
        assert!(lemma69_fitted(&w, 1.0, 20).unwrap());
        assert!(lemma69_fitted(&w, 0.5, 20).unwrap());
        assert!(!lemma69_check(&w, 1.0, 20, 1.0, 1.0).unwrap());
    }

    #[test]
    fn ultrapoly_examples() {
        let w = WeightSequence::gevrey(2.0, 64).unwrap();
        let p = Ultrapolynomial::new(w.clone(), Scale::Constant(1.0), 1, 50).unwrap();
        assert_eq!(p.eval(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        let j = Ultrapolynomial::truncation_for(&w, 1.0, 1, 1.0).unwrap();
        let zero = Ultrapolynomial::new(w.clone(), Scale::Constant(1.0), 1, j).unwrap();
        assert!(zero.eval(Complex64::new(0.0, 1.0)).unwrap().norm() < 1e-15);
        // fifty factors drop a tail of about 1e-5 at z = 2
        assert!(matches!(p.eval(Complex64::new(2.0, 0.0)), Err(Error::TailBound { .. })));

        let j = Ultrapolynomial::truncation_for(&w, 1.0, 1, 2.0).unwrap();
        let p = Ultrapolynomial::new(w, Scale::Constant(1.0), 1, j).unwrap();
        let v = p.eval(Complex64::new(2.0, 0.0)).unwrap();
        // Π (1 + x⁴/n⁴) = (cosh(π√2 x) - cos(π√2 x)) / (2π² x²) at x = √2
        let pi = std::f64::consts::PI;
        let closed = ((2.0 * pi).cosh() - 1.0) / (4.0 * pi * pi);
        assert!((v.re - closed).abs() < 1e-10 * closed, "{v} vs {closed}");
        assert!((closed - 6.756_774_4).abs() < 1e-6);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn long_product_log_matches_direct_sum() {
        for s in [1.5, 2.0] {
            let w = WeightSequence::gevrey(s, 64).unwrap();
            let j = Ultrapolynomial::truncation_for(&w, 1.0, 1, 3.0).unwrap().max(20_000);
            let p = Ultrapolynomial::new(w, Scale::Constant(1.0), 1, j).unwrap();
            for x in [0.5, 3.0] {
                let z = Complex64::new(x, 0.0);
                let direct: f64 = (1..=j).map(|k| p.factor(k, z * z).norm().ln()).sum();
                assert!((p.ln_abs(z).unwrap() - direct).abs() < 1e-10, "s = {s}, x = {x}");
            }
        }
    }

    #[test]
    fn ultrapoly_bound_examples() {
        let w = WeightSequence::gevrey(2.0, 256).unwrap();
        let grid: Vec<f64> = (0..200).map(|i| 50.0 * i as f64 / 199.0).collect();
        let j = Ultrapolynomial::truncation_for(&w, 1.0, 1, 50.0).unwrap();
        let p = Ultrapolynomial::new(w.clone(), Scale::Constant(1.0), 1, j).unwrap();

        let origin = verify_ultrapoly_bound(&p, 10.0, &[0.0]).unwrap();
        assert_eq!(origin.c_tilde, 1.0);
        assert!(origin.ok);
        assert!(!verify_ultrapoly_bound(&p, 0.01, &grid).unwrap().ok);
        let (l, k, rep) = fit_ultrapoly_bound(&w, 1, &grid, &[1.0], &[0.25, 0.5, 1.0, 2.0, 4.0])
            .unwrap()
            .expect("some k works");
        assert_eq!(l, 1.0);
        assert!(rep.ok && rep.c_tilde > 0.0, "k = {k}");
    }

    #[test]
    fn text_roundtrip() {
        let w = WeightSequence::gevrey(1.5, 32).unwrap();
        assert_eq!(WeightSequence::from_text(&w.to_text()).unwrap(), w);
        let e = WeightSequence::explicit(&[1.0, 2.0, 8.0, 48.0]).unwrap();
        assert_eq!(WeightSequence::from_text(&e.to_text()).unwrap(), e);
        assert!(matches!(WeightSequence::from_text("weird"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(WeightSequence::from_text("explicit\n0\nx\n"), Err(Error::Parse { line: 3, .. })));
    }

    proptest! {
        #[test]
        fn assoc_is_monotone_and_vanishes_below_m1(s in 1.1f64..3.0, a in 0.01f64..200.0, b in 0.01f64..200.0) {
            let w = WeightSequence::gevrey_default(s).unwrap();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let ml = assoc_fn(&w, lo).unwrap();
            let mh = assoc_fn(&w, hi).unwrap();
            prop_assert!(ml.value <= mh.value + 1e-12);
            if lo <= w.quotient(1) {
                prop_assert_eq!(ml.value, 0.0);
            }
        }

        #[test]
        fn assoc_grows_strictly_past_vanishing(s in 1.1f64..3.0, rho in 0.5f64..500.0) {
            let w = WeightSequence::gevrey_default(s).unwrap();
            let m2 = assoc_fn(&w, 2.0 * rho).unwrap();
            if m2.value > 0.0 && !m2.saturated {
                prop_assert!(assoc_fn(&w, rho).unwrap().value < m2.value);
            }
        }

        #[test]
        fn assoc_matches_brute_force(s in 1.1f64..4.0, rho in 0.01f64..1e4) {
            let w = WeightSequence::gevrey_default(s).unwrap();
            let fast = assoc_fn(&w, rho).unwrap();
            let slow = assoc_fn_brute(&w, rho).unwrap();
            prop_assert!((fast.value - slow.value).abs() <= 1e-12);
            prop_assert_eq!(fast.saturated, slow.saturated);
        }

        #[test]
        fn ultrapoly_monotone_on_reals(a in 0.0f64..5.0, b in 0.0f64..5.0) {
            let w = WeightSequence::gevrey_default(2.0).unwrap();
            let j = Ultrapolynomial::truncation_for(&w, 1.0, 1, 5.0).unwrap();
            let p = Ultrapolynomial::new(w, Scale::Constant(1.0), 1, j).unwrap();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let vl = p.eval(Complex64::new(-lo, 0.0)).unwrap().re;
            let vh = p.eval(Complex64::new(hi, 0.0)).unwrap().re;
            prop_assert!(vl >= 1.0);
            prop_assert!(vl <= vh * (1.0 + 1e-14));
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ultrapoly_bound_monotone_in_k(k in 0.05f64..5.0, factor in 1.0f64..4.0) {
            let w = WeightSequence::gevrey(2.0, 128).unwrap();
            let grid: Vec<f64> = (0..40).map(|i| 20.0 * i as f64 / 39.0).collect();
            let j = Ultrapolynomial::truncation_for(&w, 1.0, 1, 20.0).unwrap();
            let p = Ultrapolynomial::new(w, Scale::Constant(1.0), 1, j).unwrap();
            if verify_ultrapoly_bound(&p, k, &grid).unwrap().ok {
                prop_assert!(verify_ultrapoly_bound(&p, k * factor, &grid).unwrap().ok);
            }
        }
    }
}
