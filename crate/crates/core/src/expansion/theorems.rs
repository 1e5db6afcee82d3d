use num_complex::Complex64;

use super::multi_index::{compositions, indices_up_to, MultiIndex};
use super::poly::PolySymbol;
use crate::error::{Error, Result};

/// Ordered expansion terms `p_0, p_1, ..., p_J`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalExpansion {
    terms: Vec<PolySymbol>,
}

impl FormalExpansion {
    pub fn new(terms: Vec<PolySymbol>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[PolySymbol] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_{j<N} p_j`.
    pub fn partial_sum(&self, n: usize) -> Result<PolySymbol> {
        if n > self.terms.len() {
            return Err(Error::PartialSumRange { have: self.terms.len(), requested: n });
        }
        let dim = self.terms.first().map_or(1, PolySymbol::dim);
        Ok(self.terms[..n].iter().fold(PolySymbol::zero(dim), |acc, p| acc.add(p)))
    }

    pub fn full_sum(&self) -> PolySymbol {
        self.partial_sum(self.terms.len()).expect("full range")
    }
}

/// `π^{-1/2} ∫ t^k e^{-t²} dt`: zero for odd `k`, `(k-1)!! / 2^{k/2}` otherwise.
pub fn gaussian_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    (1..=k / 2).map(|i| (2 * i - 1) as f64 / 2.0).product()
}

/// `c_{α,β} = π^{-d} ∫∫ η^α y^β e^{-|y|²-|η|²} dy dη`.
pub fn moment_coeff(alpha: &MultiIndex, beta: &MultiIndex) -> f64 {
    alpha.parts().iter().chain(beta.parts()).map(|&k| gaussian_moment(k)).product()
}

/// `L_l a = Σ_{|α+β| = order} c_{α,β}/(α!β!) ∂_ξ^α ∂_x^β a`.
fn moment_operator(a: &PolySymbol, order: u32) -> PolySymbol {
    let d = a.dim();
    let mut out = PolySymbol::zero(d);
    for ab in compositions(2 * d, order) {
        let (alpha, beta) = ab.split();
        let c = moment_coeff(&alpha, &beta);
        if c == 0.0 {
            continue;
        }
        let w = c / (alpha.factorial() * beta.factorial());
        out = out.add(&a.derive(&alpha, &beta).scale(Complex64::new(w, 0.0)));
    }
    out
}

/// Anti-Wick to Weyl expansion: `p_j = Σ_{|α+β|=2j} c_{α,β}/(α!β!) ∂_ξ^α ∂_x^β a`.
pub fn aw_to_weyl_terms(a: &PolySymbol, max_order: usize) -> FormalExpansion {
    FormalExpansion::new((0..=max_order).map(|j| moment_operator(a, 2 * j as u32)).collect())
}

/// The odd-order slice `Σ_{|α+β|=2j-1}` that the reduced expansion drops.
pub fn aw_odd_terms(a: &PolySymbol, j: usize) -> PolySymbol {
    if j == 0 {
        return PolySymbol::zero(a.dim());
    }
    moment_operator(a, 2 * j as u32 - 1)
}

/// `Σ_k (sign Δ/4)^k / k!`, exact on polynomials (the series terminates).
///
/// With `sign = +1` this is convolution with `π^{-d} e^{-|y|²-|η|²}`; `sign = -1`
/// is its inverse.
pub fn heat_quarter(a: &PolySymbol, sign: i32) -> PolySymbol {
    let s = f64::from(sign.signum());
    let mut out = a.clone();
    let mut term = a.clone();
    let mut k = 1;
    loop {
        term = term.laplacian().scale(Complex64::new(s / (4.0 * k as f64), 0.0));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
        k += 1;
    }
    out
}

/// Table `p'_{k,j}` with `b_j = Σ_k p'_{k,j}` and `a = Σ_j (-1)^j b_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseExpansion {
    /// `primed[k][j]`, zero unless `j <= k`.
    pub primed: Vec<Vec<PolySymbol>>,
    pub bj: Vec<PolySymbol>,
    pub a: PolySymbol,
}

/// Anti-Wick symbol `a` of the operator `b^w`, via the `p'_{k,j}` recursion
/// `p'_{k,j} = Σ_{l=1}^{k-j+1} L_l p'_{k-l,j-1}`.
pub fn inverse_aw_recursion(b: &PolySymbol, max_order: usize) -> Result<InverseExpansion> {
    let needed = b.degree().div_ceil(2) as usize;
    if max_order < needed {
        return Err(Error::InvalidArgument(format!(
            "order {max_order} cannot exhaust a symbol of degree {}; need at least {needed}",
            b.degree()
        )));
    }
    let d = b.dim();
    let n = max_order + 1;
    let mut primed = vec![vec![PolySymbol::zero(d); n]; n];
    primed[0][0] = b.clone();
    for j in 1..n {
        for k in j..n {
            let mut acc = PolySymbol::zero(d);
            for l in 1..=(k + 1 - j) {
                let prev = &primed[k - l][j - 1];
                if !prev.is_zero() {
                    acc = acc.add(&moment_operator(prev, 2 * l as u32));
                }
            }
            primed[k][j] = acc;
        }
    }
    let bj: Vec<PolySymbol> =
        (0..n).map(|j| (0..n).fold(PolySymbol::zero(d), |acc, k| acc.add(&primed[k][j]))).collect();
    let a = bj.iter().enumerate().fold(PolySymbol::zero(d), |acc, (j, p)| {
        if j % 2 == 0 {
            acc.add(p)
        } else {
            acc.sub(p)
        }
    });
    Ok(InverseExpansion { primed, bj, a })
}

/// Symbol `b` with `Op_τ(b) = Op_{τ1}(a)`:
/// `b = Σ_β (1/β!) (τ1 - τ)^{|β|} ∂_ξ^β D_x^β a`.
pub fn tau_change_terms(a: &PolySymbol, tau1: f64, tau: f64) -> PolySymbol {
    let d = a.dim();
    let t = tau1 - tau;
    let zero = MultiIndex::zero(d);
    let mut out = PolySymbol::zero(d);
    for beta in indices_up_to(d, a.degree()) {
        let w = t.powi(beta.order() as i32) / beta.factorial();
        if w == 0.0 {
            continue;
        }
        let term = a.derive(&beta, &zero).derive_d(&zero, &beta);
        out = out.add(&term.scale(Complex64::new(w, 0.0)));
    }
    out
}

/// τ-symbol of the transpose of `Op_τ(a)`:
/// `b(x,ξ) = Σ_α (1/α!) (1-2τ)^{|α|} (-1)^{|α|} [∂_ξ^α D_x^α a](x,-ξ)`.
pub fn transpose_terms(a: &PolySymbol, tau: f64) -> PolySymbol {
    let d = a.dim();
    let t = 1.0 - 2.0 * tau;
    let zero = MultiIndex::zero(d);
    let mut out = PolySymbol::zero(d);
    for alpha in indices_up_to(d, a.degree()) {
        let sign = if alpha.order() % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * t.powi(alpha.order() as i32) / alpha.factorial();
        if w == 0.0 {
            continue;
        }
        let term = a.derive(&alpha, &zero).derive_d(&zero, &alpha);
        out = out.add(&term.scale(Complex64::new(w, 0.0)));
    }
    out.reflect_xi()
}

/// Kohn–Nirenberg symbol of `a(x,D) b(x,D)`: `Σ_α (1/α!) ∂_ξ^α a · D_x^α b`.
pub fn compose_terms(a: &PolySymbol, b: &PolySymbol) -> PolySymbol {
    let d = a.dim();
    let zero = MultiIndex::zero(d);
    let mut out = PolySymbol::zero(d);
    for alpha in indices_up_to(d, a.degree().min(b.degree())) {
        let left = a.derive(&alpha, &zero);
        let right = b.derive_d(&zero, &alpha);
        if left.is_zero() || right.is_zero() {
            continue;
        }
        out = out.add(&left.mul(&right).scale(Complex64::new(1.0 / alpha.factorial(), 0.0)));
    }
    out
}

/// `μ_k = (k-1)!!/2^{k/2}` cross-checked against `μ_k = (k-1)/2 · μ_{k-2}`.
pub fn moment_recurrence_ok(max_k: u32) -> bool {
    let mut prev2 = 1.0;
    (2..=max_k).step_by(2).all(|k| {
        let next = (k - 1) as f64 / 2.0 * prev2;
        prev2 = next;
        (gaussian_moment(k) - next).abs() <= 1e-15 * next
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn xi2() -> PolySymbol {
        PolySymbol::monomial(&[2], &[0], c(1.0))
    }

    fn x4() -> PolySymbol {
        PolySymbol::monomial(&[0], &[4], c(1.0))
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn moments_match_quadrature() {
        for k in 0..=10 {
            let q = simpson(|t| t.powi(k as i32) * (-t * t).exp(), -12.0, 12.0, 4000)
                / std::f64::consts::PI.sqrt();
            assert!((q - gaussian_moment(k)).abs() < 1e-12 * (1.0 + q.abs()), "k = {k}");
        }
        assert!(moment_recurrence_ok(20));
        assert_eq!(moment_coeff(&mi(&[0]), &mi(&[0])), 1.0);
        assert_eq!(moment_coeff(&mi(&[2]), &mi(&[0])), 0.5);
        assert_eq!(moment_coeff(&mi(&[2, 1]), &mi(&[0, 2])), 0.0);
    }

    #[test]
    fn aw_examples() {
        let e = aw_to_weyl_terms(&xi2(), 3);
        assert_eq!(e.terms()[0], xi2());
        assert_eq!(e.terms()[1], PolySymbol::constant(1, c(0.5)));
        assert!(e.terms()[2].is_zero());
        assert_eq!(e.partial_sum(2).unwrap(), xi2().add(&PolySymbol::constant(1, c(0.5))));
        assert!(e.partial_sum(0).unwrap().is_zero());
        assert!(matches!(e.partial_sum(9), Err(Error::PartialSumRange { have: 4, requested: 9 })));

        let e = aw_to_weyl_terms(&PolySymbol::x(1, 0), 2);
        assert_eq!(e.full_sum(), PolySymbol::x(1, 0));

        let e = aw_to_weyl_terms(&x4(), 2);
        assert_eq!(e.terms()[1], PolySymbol::monomial(&[0], &[2], c(3.0)));
        assert_eq!(e.terms()[2], PolySymbol::constant(1, c(0.75)));
    }

    #[test]
    fn heat_examples() {
        assert_eq!(heat_quarter(&xi2(), 1), xi2().add(&PolySymbol::constant(1, c(0.5))));
        let expect = x4().add(&PolySymbol::monomial(&[0], &[2], c(3.0))).add(&PolySymbol::constant(1, c(0.75)));
        assert_eq!(heat_quarter(&x4(), 1), expect);
        assert_eq!(heat_quarter(&PolySymbol::one(2), 1), PolySymbol::one(2));
        assert_eq!(heat_quarter(&PolySymbol::one(2), -1), PolySymbol::one(2));
    }

    #[test]
    fn inverse_examples() {
        let inv = inverse_aw_recursion(&xi2(), 1).unwrap();
        assert_eq!(inv.primed[1][1], PolySymbol::constant(1, c(0.5)));
        assert_eq!(inv.a, xi2().sub(&PolySymbol::constant(1, c(0.5))));
        assert_eq!(inverse_aw_recursion(&PolySymbol::one(1), 0).unwrap().a, PolySymbol::one(1));
        let inv = inverse_aw_recursion(&x4(), 2).unwrap();
        assert!(inv.a.approx_eq(&heat_quarter(&x4(), -1), 1e-14));
        assert!(inverse_aw_recursion(&x4(), 1).is_err());
    }

    #[test]
    fn tau_change_examples() {
        let xixi = PolySymbol::monomial(&[1], &[1], c(1.0));
        let b = tau_change_terms(&xixi, 0.0, 0.5);
        assert_eq!(b, xixi.add(&PolySymbol::constant(1, Complex64::new(0.0, 0.5))));
        let f = PolySymbol::monomial(&[3], &[0], c(2.0));
        assert_eq!(tau_change_terms(&f, 0.3, 0.9), f);
    }

    #[test]
    fn transpose_examples() {
        let a = PolySymbol::monomial(&[2], &[3], c(1.0)).add(&PolySymbol::monomial(&[1], &[1], c(-2.0)));
        assert_eq!(transpose_terms(&a, 0.5), a.reflect_xi());
        let xi = PolySymbol::xi(1, 0);
        assert_eq!(transpose_terms(&xi, 0.0), xi.scale(c(-1.0)));
        for tau in [0.0, 0.25, 1.0] {
            let via_change = tau_change_terms(&a.reflect_xi(), 1.0 - tau, tau);
            assert!(transpose_terms(&a, tau).approx_eq(&via_change, 1e-14));
        }
    }

    #[test]
    fn compose_examples() {
        let f = compose_terms(&PolySymbol::xi(1, 0), &PolySymbol::x(1, 0));
        let expect = PolySymbol::monomial(&[1], &[1], c(1.0)).add(&PolySymbol::constant(1, Complex64::new(0.0, -1.0)));
        assert_eq!(f, expect);
        let a = PolySymbol::monomial(&[0], &[2], c(3.0));
        let b = PolySymbol::monomial(&[2], &[1], c(1.0));
        assert_eq!(compose_terms(&a, &b), a.mul(&b));
    }

    #[test]
    fn odd_slices_vanish() {
        let a = PolySymbol::monomial(&[3, 1], &[2, 1], c(1.0)).add(&PolySymbol::monomial(&[1, 0], &[0, 4], c(-2.0)));
        for j in 1..=4 {
            assert!(aw_odd_terms(&a, j).is_zero());
        }
    }

    fn arb_poly(d: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = PolySymbol> {
        let mono = (
            proptest::collection::vec(0..=max_deg, 2 * d),
            -3.0f64..3.0,
            -3.0f64..3.0,
        );
        proptest::collection::vec(mono, 1..=max_terms).prop_map(move |ms| {
            let mut p = PolySymbol::zero(d);
            for (exps, re, im) in ms {
                // scale exponents down until the total degree fits
                let mut e = exps;
                while e.iter().sum::<u32>() > max_deg {
                    let i = e.iter().enumerate().max_by_key(|(_, v)| **v).unwrap().0;
                    e[i] -= 1;
                }
                p = p.add(&PolySymbol::monomial(&e[..d], &e[d..], Complex64::new(re, im)));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn heat_inverse_roundtrip(p in arb_poly(1, 8, 6)) {
            prop_assert!(heat_quarter(&heat_quarter(&p, 1), -1).approx_eq(&p, 1e-12));
        }

        #[test]
        fn aw_full_sum_is_heat(p in arb_poly(2, 6, 5)) {
            let e = aw_to_weyl_terms(&p, 3);
            prop_assert!(e.full_sum().approx_eq(&heat_quarter(&p, 1), 1e-12));
        }

        #[test]
        fn inverse_recursion_inverts(p in arb_poly(1, 8, 6)) {
            let inv = inverse_aw_recursion(&p, 4).unwrap();
            prop_assert!(heat_quarter(&inv.a, 1).approx_eq(&p, 1e-12));
        }

        #[test]
        fn tau_change_involution(p in arb_poly(1, 6, 5), t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
            let back = tau_change_terms(&tau_change_terms(&p, t1, t2), t2, t1);
            prop_assert!(back.approx_eq(&p, 1e-12));
        }

        #[test]
        fn compose_associative(a in arb_poly(1, 4, 1), b in arb_poly(1, 4, 1), c in arb_poly(1, 4, 1)) {
            let left = compose_terms(&compose_terms(&a, &b), &c);
            let right = compose_terms(&a, &compose_terms(&b, &c));
            prop_assert!(left.approx_eq(&right, 1e-12));
        }

        #[test]
        fn moment_symmetry(a in proptest::collection::vec(0u32..6, 2), b in proptest::collection::vec(0u32..6, 2)) {
            let (ma, mb) = (MultiIndex::new(a.clone()), MultiIndex::new(b.clone()));
            let base = moment_coeff(&ma, &mb);
            prop_assert_eq!(base, moment_coeff(&mb, &ma));
            let (ra, rb) = (MultiIndex::new(vec![a[1], a[0]]), MultiIndex::new(vec![b[1], b[0]]));
            prop_assert_eq!(base, moment_coeff(&ra, &rb));
        }
    }
}
