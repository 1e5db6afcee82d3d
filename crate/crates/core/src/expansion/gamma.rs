use num_complex::Complex64;

use super::multi_index::indices_up_to;
use super::poly::PolySymbol;
use crate::error::{Error, Result};
use crate::weights::{assoc_fn, WeightSequence};

/// Parameters of a symbol class: `ρ`, `h`, `m` and the weight `M_p`, with
/// `A_p = B_p = M_p^ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassParams {
    pub rho: f64,
    pub h: f64,
    pub m: f64,
    pub weight: WeightSequence,
}

impl ClassParams {
    pub fn new(rho: f64, h: f64, m: f64, weight: WeightSequence) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidArgument(format!("rho = {rho} must lie in (0, 1]")));
        }
        if !(h > 0.0 && m > 0.0 && h.is_finite() && m.is_finite()) {
            return Err(Error::InvalidArgument("h and m must be positive".into()));
        }
        Ok(Self { rho, h, m, weight })
    }

    fn ln_a(&self, p: u32) -> Result<f64> {
        let p = p as usize;
        if p > self.weight.truncation() {
            return Err(Error::TruncationTooShort { needed: p, have: self.weight.truncation() });
        }
        Ok(self.rho * self.weight.ln_value(p))
    }
}

fn assoc_or_zero(w: &WeightSequence, t: f64) -> Result<f64> {
    if t == 0.0 {
        Ok(0.0)
    } else {
        assoc_fn(w, t)?.exact()
    }
}

/// Grid estimate of
/// `sup_{α,β} sup_{(x,ξ)} |D_ξ^α D_x^β a| ⟨(x,ξ)⟩^{ρ(|α|+|β|)} e^{-M(m|ξ|)-M(m|x|)} / (h^{|α|+|β|} A_α B_β)`
/// over `[-box, box]^{2d}`, with 81 nodes per axis for `d = 1` and 21 for `d = 2`.
pub fn gamma_norm_estimate(a: &PolySymbol, params: &ClassParams, box_half: f64) -> Result<f64> {
    if a.is_zero() {
        return Ok(0.0);
    }
    let d = a.dim();
    let nodes: usize = if d == 1 { 81 } else { 21 };
    let axis: Vec<f64> = (0..nodes).map(|i| -box_half + 2.0 * box_half * i as f64 / (nodes - 1) as f64).collect();

    let mut derivs = Vec::new();
    for alpha in indices_up_to(d, a.degree()) {
        for beta in indices_up_to(d, a.degree() - alpha.order()) {
            let p = a.derive_d(&alpha, &beta);
            if p.is_zero() {
                continue;
            }
            let ord = alpha.order() + beta.order();
            let ln_den = ord as f64 * params.h.ln() + params.ln_a(alpha.order())? + params.ln_a(beta.order())?;
            derivs.push((p, ord, ln_den));
        }
    }

    let total = nodes.pow(2 * d as u32);
    let mut best = 0.0f64;
    let mut coords = vec![0.0; 2 * d];
    for flat in 0..total {
        let mut f = flat;
        for c in coords.iter_mut().rev() {
            *c = axis[f % nodes];
            f /= nodes;
        }
        let (x, xi) = coords.split_at(d);
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nxi = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let bracket = (1.0 + nx * nx + nxi * nxi).sqrt().ln();
        let damp = assoc_or_zero(&params.weight, params.m * nxi)? + assoc_or_zero(&params.weight, params.m * nx)?;
        for (p, ord, ln_den) in &derivs {
            let v: Complex64 = p.eval(x, xi);
            if v.norm() == 0.0 {
                continue;
            }
            let ln_val = v.norm().ln() + params.rho * *ord as f64 * bracket - damp - ln_den;
            best = best.max(ln_val.exp());
        }
    }
    Ok(best)
}
