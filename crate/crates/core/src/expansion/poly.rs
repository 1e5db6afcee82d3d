use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::multi_index::MultiIndex;
use crate::error::{Error, Result};

/// Exponent pair of a monomial `ξ^k x^e`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub xi: MultiIndex,
    pub x: MultiIndex,
}

impl Monomial {
    pub fn new(xi: MultiIndex, x: MultiIndex) -> Self {
        Self { xi, x }
    }

    pub fn degree(&self) -> u32 {
        self.xi.order() + self.x.order()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.xi.dim();
        let mut parts = Vec::new();
        for (name, idx) in [("xi", &self.xi), ("x", &self.x)] {
            for (i, &k) in idx.parts().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let var = if d == 1 { name.to_string() } else { format!("{name}{}", i + 1) };
                parts.push(if k == 1 { var } else { format!("{var}^{k}") });
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Polynomial `Σ c_{k,e} ξ^k x^e` in phase-space variables with complex coefficients.
///
/// Terms are kept in a sorted map without zero coefficients, so iteration
/// order and serialization are canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySymbol {
    dim: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl PolySymbol {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Monomial::new(MultiIndex::zero(dim), MultiIndex::zero(dim)), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    /// `c ξ^xi x^x`.
    pub fn monomial(xi: &[u32], x: &[u32], c: Complex64) -> Self {
        assert_eq!(xi.len(), x.len(), "exponent vectors must share a dimension");
        let mut p = Self::zero(xi.len());
        p.add_term(Monomial::new(MultiIndex::new(xi.to_vec()), MultiIndex::new(x.to_vec())), c);
        p
    }

    /// `ξ_i` as a polynomial.
    pub fn xi(dim: usize, i: usize) -> Self {
        Self::single(MultiIndex::axis(dim, i, 1), MultiIndex::zero(dim))
    }

    /// `x_i` as a polynomial.
    pub fn x(dim: usize, i: usize) -> Self {
        Self::single(MultiIndex::zero(dim), MultiIndex::axis(dim, i, 1))
    }

    fn single(xi: MultiIndex, x: MultiIndex) -> Self {
        let dim = xi.dim();
        let mut p = Self::zero(dim);
        p.add_term(Monomial::new(xi, x), Complex64::new(1.0, 0.0));
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            if m.xi.dim() != dim || m.x.dim() != dim {
                return Err(Error::Shape(format!("monomial {m} does not have dimension {dim}")));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Whether the polynomial only involves `ξ`.
    pub fn is_xi_only(&self) -> bool {
        self.terms.keys().all(|m| m.x.order() == 0)
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(Monomial::new(ma.xi.add(&mb.xi), ma.x.add(&mb.x)), ca * cb);
            }
        }
        out
    }

    /// `∂_ξ^alpha ∂_x^beta`.
    pub fn derive(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let (Some(xi), Some(x)) = (m.xi.checked_sub(alpha), m.x.checked_sub(beta)) else {
                continue;
            };
            let factor = m.xi.falling(alpha) * m.x.falling(beta);
            out.add_term(Monomial::new(xi, x), c * factor);
        }
        out
    }

    /// `D_ξ^alpha D_x^beta` with `D = -i ∂`.
    pub fn derive_d(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Self {
        let order = alpha.order() + beta.order();
        self.derive(alpha, beta).scale(Complex64::new(0.0, -1.0).powu(order))
    }

    /// `a(x, -ξ)`.
    pub fn reflect_xi(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let sign = if m.xi.order() % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(m.clone(), c * sign);
        }
        out
    }

    /// Laplacian in all `2d` phase-space variables.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        let z = MultiIndex::zero(self.dim);
        for i in 0..self.dim {
            let two = MultiIndex::axis(self.dim, i, 2);
            out = out.add(&self.derive(&two, &z)).add(&self.derive(&z, &two));
        }
        out
    }

    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = 1.0;
                for (k, &t) in m.xi.parts().iter().zip(xi) {
                    v *= t.powi(*k as i32);
                }
                for (k, &t) in m.x.parts().iter().zip(x) {
                    v *= t.powi(*k as i32);
                }
                c * v
            })
            .sum()
    }

    /// Coefficientwise agreement: `max |Δc| <= tol * max(1, max |c|)`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_diff(other) <= tol * self.max_coeff().max(other.max_coeff()).max(1.0)
    }

    /// Largest coefficientwise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let keys = self.terms.keys().chain(other.terms.keys());
        keys.map(|m| (self.coefficient(m) - other.coefficient(m)).norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients whose magnitude is at most `tol`.
    pub fn cleaned(&self, tol: f64) -> Self {
        Self { dim: self.dim, terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(m, c)| (m.clone(), *c)).collect() }
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}·{m}", c.re)?;
            } else {
                write!(f, "({}{:+}i)·{m}", c.re, c.im)?;
            }
        }
        Ok(())
    }
}
