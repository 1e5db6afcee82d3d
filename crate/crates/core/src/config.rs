//! Symbol specification files.
//!
//! A spec is a small TOML (or JSON) table:
//!
//! ```toml
//! kind = "poly"
//! d = 1
//! terms = [[2, 0, 1.0, 0.0]]
//! ```
//!
//! Each `terms` row lists the `d` exponents of `ξ`, then the `d` exponents of
//! `x`, then the real and imaginary part of the coefficient. `kind = "grid"`
//! takes `path` (a phase-grid CSV) and `kind = "example5"` takes `l` plus
//! `terms` for a polynomial `P(ξ)`. Optional `n` and `L` override the grid.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expansion::{Monomial, MultiIndex, PolySymbol};
use crate::grid::{AxisGrid, PhaseFunctionGrid};

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolPayload {
    Poly(PolySymbol),
    Grid { path: PathBuf },
    Example5 { l: f64, p: PolySymbol },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    pub d: usize,
    pub payload: SymbolPayload,
    pub n: Option<usize>,
    pub half_width: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    d: Option<usize>,
    terms: Option<Vec<Vec<f64>>>,
    path: Option<String>,
    l: Option<f64>,
    n: Option<usize>,
    #[serde(rename = "L")]
    half_width: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Toml,
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn parse_symbol(text: &str, format: Format) -> Result<SymbolSpec> {
    let raw: RawSpec = match format {
        Format::Toml => toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map(|s| line_of(text, s.start)).unwrap_or(0),
            message: e.message().to_string(),
        })?,
        Format::Json => {
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?
        }
    };
    validate(raw)
}

pub fn load_symbol(path: &Path) -> Result<SymbolSpec> {
    let text = std::fs::read_to_string(path)?;
    let mut spec = parse_symbol(&text, Format::from_path(path))?;
    // grid paths are relative to the spec file
    if let SymbolPayload::Grid { path: p } = &mut spec.payload {
        if p.is_relative() {
            if let Some(dir) = path.parent() {
                *p = dir.join(&*p);
            }
        }
    }
    Ok(spec)
}

fn forbid(present: bool, field: &str, kind: &str) -> Result<()> {
    if present {
        return Err(Error::Config(format!("field `{field}` is not allowed for kind `{kind}`")));
    }
    Ok(())
}

fn require<T>(v: Option<T>, field: &str, kind: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("kind `{kind}` requires field `{field}`")))
}

fn poly_from_rows(rows: &[Vec<f64>], d: usize) -> Result<PolySymbol> {
    let mut p = PolySymbol::zero(d);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != 2 * d + 2 {
            return Err(Error::Config(format!("terms[{i}] has {} entries, expected {}", row.len(), 2 * d + 2)));
        }
        let mut exps = Vec::with_capacity(2 * d);
        for &e in &row[..2 * d] {
            if e < 0.0 || e.fract() != 0.0 || e > u32::MAX as f64 {
                return Err(Error::Config(format!("terms[{i}] has exponent {e}, expected a non-negative integer")));
            }
            exps.push(e as u32);
        }
        let m = Monomial::new(MultiIndex::new(exps[..d].to_vec()), MultiIndex::new(exps[d..].to_vec()));
        p.add_term(m, Complex64::new(row[2 * d], row[2 * d + 1]));
    }
    Ok(p)
}

fn validate(raw: RawSpec) -> Result<SymbolSpec> {
    let kind = raw.kind.as_str();
    let d = require(raw.d, "d", kind)?;
    if !(1..=2).contains(&d) {
        return Err(Error::Config(format!("field `d` must be 1 or 2, got {d}")));
    }
    let payload = match kind {
        "poly" => {
            forbid(raw.path.is_some(), "path", kind)?;
            forbid(raw.l.is_some(), "l", kind)?;
            SymbolPayload::Poly(poly_from_rows(&require(raw.terms, "terms", kind)?, d)?)
        }
        "grid" => {
            forbid(raw.terms.is_some(), "terms", kind)?;
            forbid(raw.l.is_some(), "l", kind)?;
            SymbolPayload::Grid { path: PathBuf::from(require(raw.path, "path", kind)?) }
        }
        "example5" => {
            forbid(raw.path.is_some(), "path", kind)?;
            let l = require(raw.l, "l", kind)?;
            if !(l < 1.0) {
                return Err(Error::Config(format!("field `l` must be below 1, got {l}")));
            }
            let p = poly_from_rows(&require(raw.terms, "terms", kind)?, d)?;
            if !p.is_xi_only() {
                return Err(Error::Config("example5 polynomial must depend on ξ only".into()));
            }
            SymbolPayload::Example5 { l, p }
        }
        other => return Err(Error::Config(format!("field `kind` must be poly, grid or example5, got `{other}`"))),
    };
    if let Some(n) = raw.n {
        if n < 2 || n % 2 != 0 {
            return Err(Error::Config(format!("field `n` must be even and at least 2, got {n}")));
        }
    }
    if let Some(l) = raw.half_width {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Config(format!("field `L` must be positive, got {l}")));
        }
    }
    Ok(SymbolSpec { d, payload, n: raw.n, half_width: raw.half_width })
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:?}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

fn rows_toml(p: &PolySymbol) -> String {
    let rows: Vec<String> = p
        .terms()
        .map(|(m, c)| {
            let mut parts: Vec<String> = m.xi.parts().iter().chain(m.x.parts()).map(|e| e.to_string()).collect();
            parts.push(fmt_num(c.re));
            parts.push(fmt_num(c.im));
            format!("[{}]", parts.join(", "))
        })
        .collect();
    format!("terms = [{}]\n", rows.join(", "))
}

impl SymbolSpec {
    pub fn poly(p: PolySymbol) -> Self {
        Self { d: p.dim(), payload: SymbolPayload::Poly(p), n: None, half_width: None }
    }

    /// Canonical TOML form; parsing it returns an equal spec.
    pub fn to_toml(&self) -> String {
        let mut out = String::new();
        let kind = match self.payload {
            SymbolPayload::Poly(_) => "poly",
            SymbolPayload::Grid { .. } => "grid",
            SymbolPayload::Example5 { .. } => "example5",
        };
        out.push_str(&format!("kind = \"{kind}\"\nd = {}\n", self.d));
        if let Some(n) = self.n {
            out.push_str(&format!("n = {n}\n"));
        }
        if let Some(l) = self.half_width {
            out.push_str(&format!("L = {}\n", fmt_num(l)));
        }
        match &self.payload {
            SymbolPayload::Poly(p) => out.push_str(&rows_toml(p)),
            SymbolPayload::Grid { path } => out.push_str(&format!("path = {:?}\n", path.display().to_string())),
            SymbolPayload::Example5 { l, p } => {
                out.push_str(&format!("l = {}\n", fmt_num(*l)));
                out.push_str(&rows_toml(p));
            }
        }
        out
    }

    /// Grid from the spec's overrides, falling back to `fallback`.
    pub fn axis(&self, fallback: &AxisGrid) -> Result<AxisGrid> {
        AxisGrid::new(self.n.unwrap_or(fallback.n()), self.half_width.unwrap_or(fallback.half_width()), self.d)
    }

    /// Samples the symbol on `axis`.
    pub fn sample(&self, axis: &AxisGrid) -> Result<PhaseFunctionGrid> {
        if axis.dim() != self.d {
            return Err(Error::Shape(format!("{}-d spec on a {}-d grid", self.d, axis.dim())));
        }
        match &self.payload {
            SymbolPayload::Poly(p) => Ok(PhaseFunctionGrid::from_fn(*axis, |x, xi| p.eval(x, xi))),
            SymbolPayload::Example5 { l, p } => {
                // validates l and P once; every later evaluation then succeeds
                crate::gaussconv::example5_symbol(*l, p, &vec![0.0; self.d], &vec![0.0; self.d])?;
                Ok(PhaseFunctionGrid::from_fn(*axis, |x, xi| {
                    crate::gaussconv::example5_symbol(*l, p, x, xi).expect("validated")
                }))
            }
            SymbolPayload::Grid { path } => {
                let file = std::fs::File::open(path)?;
                let g = PhaseFunctionGrid::from_csv(std::io::BufReader::new(file))?;
                if g.axis() != axis {
                    return Err(Error::Shape(format!("grid file {} does not match the requested grid", path.display())));
                }
                Ok(g)
            }
        }
    }

    pub fn as_poly(&self) -> Option<&PolySymbol> {
        match &self.payload {
            SymbolPayload::Poly(p) => Some(p),
            _ => None,
        }
    }
}
