//! Acceptance suites. Each report compares one identity against its oracle
//! and passes iff the measured error is at most the tolerance.

use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{band_limited_symbol, corpus, hermite_function};
use crate::defaults;
use crate::error::{Error, Result};
use crate::expansion::{
    aw_odd_terms, aw_to_weyl_terms, compose_terms, heat_quarter, indices_up_to, inverse_aw_recursion,
    tau_change_terms, transpose_terms, Monomial, MultiIndex, PolySymbol,
};
use crate::gaussconv::{
    conv_gauss_direct, conv_gauss_via_laplace, oscillatory_kernel, CompactDensity, Cutoff, DensityKind,
    KernelTestFunction, OscSymbol,
};
use crate::grid::{AxisGrid, FunctionGrid, PhaseFunctionGrid};
use crate::quant::{
    anti_wick_matrix, kernel_from_symbol, op_tau_analytic, sample_symbol, symbol_from_kernel, verify_prop245,
    verify_prop245_poly, weyl_analytic, OperatorMatrix, Tau,
};
use crate::stft::{stft, stft_inverse, stft_norm_check};
use crate::weights::{check_conditions, fit_ultrapoly_bound, lemma69_fitted, WeightSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Stft,
    Quant245,
    Expansion,
    Tau,
    Compose,
    Gaussconv,
    Weights,
}

impl Suite {
    /// Every suite except `All`, in run order.
    pub const MEMBERS: [Suite; 7] =
        [Suite::Stft, Suite::Quant245, Suite::Expansion, Suite::Tau, Suite::Compose, Suite::Gaussconv, Suite::Weights];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Stft => "stft",
            Suite::Quant245 => "quant245",
            Suite::Expansion => "expansion",
            Suite::Tau => "tau",
            Suite::Compose => "compose",
            Suite::Gaussconv => "gaussconv",
            Suite::Weights => "weights",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::MEMBERS)
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Report {
    /// Acceptance criterion number, read from the `cNN_` prefix.
    pub fn criterion(&self) -> Option<u32> {
        self.name.strip_prefix('c')?.get(..2)?.parse().ok()
    }
}

/// Grid parameters for the one-dimensional checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyParams {
    pub n: usize,
    pub half_width: f64,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self { n: defaults::N_1D, half_width: defaults::L_1D, seed: 7, parallel: false }
    }
}

impl VerifyParams {
    fn axis(&self) -> Result<AxisGrid> {
        AxisGrid::new(self.n, self.half_width, 1)
    }
}

/// One measured quantity of a check.
struct Measure {
    name: &'static str,
    measured: f64,
    tolerance: f64,
}

fn m(name: &'static str, measured: f64, tolerance: f64) -> Measure {
    Measure { name, measured, tolerance }
}

type CheckFn = Box<dyn FnOnce() -> Result<Vec<Measure>> + Send>;

/// A unit of work: the names it reports under and the closure measuring them.
struct Check {
    names: Vec<&'static str>,
    tolerances: Vec<f64>,
    run: CheckFn,
}

fn check(names: &[(&'static str, f64)], run: impl FnOnce() -> Result<Vec<Measure>> + Send + 'static) -> Check {
    Check {
        names: names.iter().map(|n| n.0).collect(),
        tolerances: names.iter().map(|n| n.1).collect(),
        run: Box::new(run),
    }
}

fn execute(c: Check) -> Vec<Report> {
    let start = Instant::now();
    let out = (c.run)();
    let ms = start.elapsed().as_secs_f64() * 1e3;
    match out {
        Ok(measures) => measures
            .into_iter()
            .map(|x| {
                let pass = x.measured <= x.tolerance;
                Report {
                    name: x.name.to_string(),
                    status: if pass { Status::Pass } else { Status::Fail },
                    measured: x.measured,
                    tolerance: x.tolerance,
                    runtime_ms: ms,
                    note: None,
                }
            })
            .collect(),
        Err(e) => c
            .names
            .iter()
            .zip(&c.tolerances)
            .map(|(name, &tol)| Report {
                name: name.to_string(),
                status: Status::Fail,
                measured: f64::NAN,
                tolerance: tol,
                runtime_ms: ms,
                note: Some(e.to_string()),
            })
            .collect(),
    }
}

/// Runs a suite and returns its reports sorted by name.
pub fn run_verify(suite: Suite, params: &VerifyParams) -> Result<Vec<Report>> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::MEMBERS.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(suite_checks(s, params)?);
    }
    let mut reports: Vec<Report> = if params.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = checks.into_iter().map(|c| scope.spawn(move || execute(c))).collect();
            handles.into_iter().flat_map(|h| h.join().expect("check thread panicked")).collect()
        })
    } else {
        checks.into_iter().flat_map(execute).collect()
    };
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(reports)
}

pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.status != Status::Fail)
}

/// Plain-text table with the defaults header on top.
pub fn render_table(reports: &[Report], params: &VerifyParams) -> String {
    let mut out = format!("# {}\n# n={} L={} seed={}\n", defaults::header(), params.n, params.half_width, params.seed);
    out.push_str(&format!("{:<34} {:<6} {:>12} {:>10} {:>10}\n", "name", "status", "measured", "tolerance", "ms"));
    for r in reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        out.push_str(&format!(
            "{:<34} {:<6} {:>12.3e} {:>10.1e} {:>10.1}",
            r.name, status, r.measured, r.tolerance, r.runtime_ms
        ));
        if let Some(note) = &r.note {
            out.push_str(&format!("  ({note})"));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonOut<'a> {
    header: String,
    n: usize,
    #[serde(rename = "L")]
    half_width: f64,
    seed: u64,
    reports: &'a [Report],
}

pub fn render_json(reports: &[Report], params: &VerifyParams) -> String {
    let out = JsonOut {
        header: defaults::header(),
        n: params.n,
        half_width: params.half_width,
        seed: params.seed,
        reports,
    };
    serde_json::to_string_pretty(&out).expect("reports serialize")
}

fn suite_checks(s: Suite, p: &VerifyParams) -> Result<Vec<Check>> {
    let axis = p.axis()?;
    let seed = p.seed;
    Ok(match s {
        Suite::All => unreachable!("expanded by run_verify"),
        Suite::Stft => stft_checks(axis, seed),
        Suite::Quant245 => quant_checks(axis, seed),
        Suite::Expansion => expansion_checks(axis, seed),
        Suite::Tau => tau_checks(axis, seed),
        Suite::Compose => compose_checks(axis, seed),
        Suite::Gaussconv => gaussconv_checks(),
        Suite::Weights => weights_checks(),
    })
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mono(xi: u32, x: u32) -> PolySymbol {
    PolySymbol::monomial(&[xi], &[x], c(1.0))
}

/// `ξ^i x^j` with `i + j <= degree`.
fn monomials_1d(degree: u32) -> Vec<PolySymbol> {
    (0..=degree).flat_map(|t| (0..=t).map(move |i| mono(i, t - i))).collect()
}

/// The six polynomial test symbols `1, x, ξ², x²+ξ², x⁴, xξ`.
pub fn poly_test_symbols() -> Vec<PolySymbol> {
    vec![PolySymbol::one(1), mono(0, 1), mono(2, 0), mono(2, 0).add(&mono(0, 2)), mono(0, 4), mono(1, 1)]
}

fn rel_err(a: &FunctionGrid, b: &FunctionGrid) -> f64 {
    a.axpy(c(-1.0), b).norm_l2() / b.norm_l2()
}

fn stft_checks(axis: AxisGrid, seed: u64) -> Vec<Check> {
    let run = move |ax: AxisGrid| -> Result<(f64, f64)> {
        let mut inv: f64 = 0.0;
        let mut iso: f64 = 0.0;
        for u in corpus(&ax, seed) {
            inv = inv.max(rel_err(&stft_inverse(&stft(&u)), &u));
            iso = iso.max(stft_norm_check(&u).relative_error());
        }
        Ok((inv, iso))
    };
    vec![
        check(&[("c01_stft_inversion", 1e-10), ("c02_stft_isometry", 1e-10)], move || {
            let (inv, iso) = run(axis)?;
            Ok(vec![m("c01_stft_inversion", inv, 1e-10), m("c02_stft_isometry", iso, 1e-10)])
        }),
        check(&[("c01_stft_inversion_2d", 1e-10), ("c02_stft_isometry_2d", 1e-10)], move || {
            let (inv, iso) = run(AxisGrid::new(32, defaults::L_2D, 2)?)?;
            Ok(vec![m("c01_stft_inversion_2d", inv, 1e-10), m("c02_stft_isometry_2d", iso, 1e-10)])
        }),
    ]
}

fn quant_checks(axis: AxisGrid, seed: u64) -> Vec<Check> {
    vec![
        check(&[("c03_antiwick_weyl_poly", 1e-5)], move || {
            let inputs = corpus(&axis, seed);
            let mut worst: f64 = 0.0;
            for a in poly_test_symbols() {
                worst = worst.max(verify_prop245_poly(&a, &axis, &inputs)?.max_err);
            }
            Ok(vec![m("c03_antiwick_weyl_poly", worst, 1e-5)])
        }),
        check(&[("c03_antiwick_weyl_grid", 1e-5)], move || {
            let a = band_limited_symbol(&axis, seed, false);
            Ok(vec![m("c03_antiwick_weyl_grid", verify_prop245(&a).max_err, 1e-5)])
        }),
        check(&[("c09_positivity", 1e-7)], move || {
            let symbols = [PolySymbol::one(1), mono(0, 2), mono(2, 0), mono(2, 0).add(&mono(0, 2)), mono(0, 4).add(&PolySymbol::one(1))];
            let mut worst: f64 = 0.0;
            for a in &symbols {
                let g = sample_symbol(a, &axis);
                let top = g.values().iter().map(|v| v.re).fold(f64::MIN, f64::max);
                let low = anti_wick_matrix(&g).hermitian_part().eigenvalues()[0];
                worst = worst.max((-low).max(0.0) / (1.0 + top));
            }
            Ok(vec![m("c09_positivity", worst, 1e-7)])
        }),
        check(&[("c10_norm_bound", 1e-6)], move || {
            let mut worst = f64::MIN;
            for i in 0..5 {
                let a = band_limited_symbol(&axis, seed.wrapping_add(100 + i), false);
                let sup = a.max_abs();
                worst = worst.max(anti_wick_matrix(&a).spectral_norm() / sup - 1.0);
            }
            Ok(vec![m("c10_norm_bound", worst, 1e-6)])
        }),
        check(&[("c11_harmonic_oscillator", 1e-6), ("c11_hermite_eigenfunctions", 1e-6)], move || {
            let w = weyl_analytic(&mono(2, 0).add(&mono(0, 2)), &axis)?;
            let ev = w.eigenvalues();
            let spread = (0..8).map(|k| (ev[k] - (2 * k + 1) as f64).abs()).fold(0.0, f64::max);
            let mut resid: f64 = 0.0;
            for k in 0..8 {
                let h = FunctionGrid::from_real_fn(axis, |x| hermite_function(k, x[0]));
                let lam = c((2 * k + 1) as f64);
                resid = resid.max(w.apply(&h).axpy(-lam, &h).norm_l2() / h.norm_l2());
            }
            Ok(vec![m("c11_harmonic_oscillator", spread, 1e-6), m("c11_hermite_eigenfunctions", resid, 1e-6)])
        }),
    ]
}

/// Exhaustive `d = 1` monomials of degree ≤ 8 and seeded random `d = 2` polynomials.
fn expansion_corpus(seed: u64) -> Vec<PolySymbol> {
    let mut out = monomials_1d(8);
    let pool = indices_up_to(4, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..24 {
        let mut p = PolySymbol::zero(2);
        for _ in 0..4 {
            let idx = &pool[rng.gen_range(0..pool.len())];
            let (xi, x) = (&idx.parts()[..2], &idx.parts()[2..]);
            let coeff = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            p.add_term(Monomial::new(MultiIndex::new(xi.to_vec()), MultiIndex::new(x.to_vec())), coeff);
        }
        out.push(p);
    }
    out
}

fn rel_coeff(a: &PolySymbol, b: &PolySymbol) -> f64 {
    a.max_diff(b) / b.max_coeff().max(1.0)
}

fn expansion_checks(axis: AxisGrid, seed: u64) -> Vec<Check> {
    vec![
        check(&[("c04_aw_to_weyl_exact", 1e-12), ("c05_inverse_aw_coeff", 1e-12)], move || {
            let mut fwd: f64 = 0.0;
            let mut inv: f64 = 0.0;
            for a in expansion_corpus(seed) {
                let order = a.degree() as usize;
                let smooth = heat_quarter(&a, 1);
                fwd = fwd.max(rel_coeff(&aw_to_weyl_terms(&a, order).full_sum(), &smooth));
                for j in 1..=order {
                    fwd = fwd.max(aw_odd_terms(&a, j).max_coeff() / a.max_coeff().max(1.0));
                }
                let back = inverse_aw_recursion(&a, order)?.a;
                inv = inv.max(rel_coeff(&heat_quarter(&back, 1), &a));
            }
            Ok(vec![m("c04_aw_to_weyl_exact", fwd, 1e-12), m("c05_inverse_aw_coeff", inv, 1e-12)])
        }),
        check(&[("c05_inverse_aw_matrix", 1e-5)], move || {
            let inputs = corpus(&axis, seed);
            let mut worst: f64 = 0.0;
            for b in poly_test_symbols() {
                let a = inverse_aw_recursion(&b, b.degree() as usize)?.a;
                let aw = anti_wick_matrix(&sample_symbol(&a, &axis));
                worst = worst.max(aw.discrepancy_on(&weyl_analytic(&b, &axis)?, &inputs));
            }
            Ok(vec![m("c05_inverse_aw_matrix", worst, 1e-5)])
        }),
    ]
}

fn op(a: &PolySymbol, axis: &AxisGrid, tau: f64) -> Result<OperatorMatrix> {
    op_tau_analytic(a, axis, Tau::new(tau)?)
}

fn tau_checks(axis: AxisGrid, seed: u64) -> Vec<Check> {
    vec![
        check(&[("c06_tau_sign_oracle", 1e-10)], move || {
            // Op_0(e^{i(px+qξ)}) is e^{ipx}u(x+q), whose Weyl symbol carries e^{-ipq/2}
            let (pp, q) = (3.0 * axis.dxi(), 5.0 * axis.dx());
            let a = PhaseFunctionGrid::from_fn(axis, |x, xi| Complex64::from_polar(1.0, pp * x[0] + q * xi[0]));
            let back = symbol_from_kernel(&kernel_from_symbol(&a, Tau::KOHN_NIRENBERG), Tau::WEYL)?;
            let phase = Complex64::from_polar(1.0, -pp * q / 2.0);
            let expect = PhaseFunctionGrid::new(axis, a.values().iter().map(|v| v * phase).collect())?;
            Ok(vec![m("c06_tau_sign_oracle", back.max_diff(&expect), 1e-10)])
        }),
        check(&[("c06_tau_change", 1e-8)], move || {
            let inputs = corpus(&axis, seed);
            let taus = [0.0, 0.5, 1.0];
            let mut worst: f64 = 0.0;
            for a in monomials_1d(4) {
                let ops: Vec<OperatorMatrix> = taus.iter().map(|&t| op(&a, &axis, t)).collect::<Result<_>>()?;
                for (i, &t1) in taus.iter().enumerate() {
                    for &t in &taus {
                        let b = tau_change_terms(&a, t1, t);
                        worst = worst.max(op(&b, &axis, t)?.discrepancy_on(&ops[i], &inputs));
                    }
                }
            }
            Ok(vec![m("c06_tau_change", worst, 1e-8)])
        }),
        check(&[("c07_transpose", 1e-9), ("c07_transpose_expansion", 1e-9)], move || {
            let inputs = corpus(&axis, seed);
            let mut plain: f64 = 0.0;
            let mut expansion: f64 = 0.0;
            for a in monomials_1d(4) {
                for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    let lhs = op(&a, &axis, t)?.transpose();
                    let rhs = op(&a.reflect_xi(), &axis, 1.0 - t)?;
                    plain = plain.max(lhs.max_diff(&rhs) / rhs.max_abs().max(1.0));
                    let same_tau = op(&transpose_terms(&a, t), &axis, t)?;
                    expansion = expansion.max(lhs.discrepancy_on(&same_tau, &inputs));
                }
            }
            Ok(vec![m("c07_transpose", plain, 1e-9), m("c07_transpose_expansion", expansion, 1e-9)])
        }),
    ]
}

fn compose_checks(axis: AxisGrid, seed: u64) -> Vec<Check> {
    vec![check(&[("c08_compose", 1e-8)], move || {
        let inputs = corpus(&axis, seed);
        let monos = monomials_1d(3);
        let ops: Vec<OperatorMatrix> = monos.iter().map(|a| op(a, &axis, 0.0)).collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for (a, oa) in monos.iter().zip(&ops) {
            for (b, ob) in monos.iter().zip(&ops) {
                let ab = op(&compose_terms(a, b), &axis, 0.0)?;
                let diff = oa.mul(ob).sub(&ab);
                for u in &inputs {
                    // high powers of ξ reach |ξ_N|^6 and carry a matching rounding floor
                    let norm = u.norm_l2();
                    let scale = (ab.apply(u).max_abs() / norm).max(1.0);
                    worst = worst.max(diff.apply(u).max_abs() / norm / scale);
                }
            }
        }
        Ok(vec![m("c08_compose", worst, 1e-8)])
    })]
}

/// The three compactly supported densities of the Laplace check.
pub fn laplace_densities() -> Result<Vec<CompactDensity>> {
    Ok(vec![
        CompactDensity::new(DensityKind::Indicator, -1.0, 1.0, 1)?,
        CompactDensity::new(DensityKind::GaussianBump { center: 0.3, width: 0.5 }, -1.0, 1.5, 1)?,
        CompactDensity::new(DensityKind::PolyTimesBump { coeffs: vec![1.0, 0.5, -0.25] }, -1.0, 1.5, 1)?,
    ])
}

/// The three symbols of the oscillatory kernel check: `1`, `ξ` and the smoothed `e^{x²/2} ξ²`.
pub fn osc_symbols() -> Vec<(&'static str, OscSymbol)> {
    vec![
        ("1", OscSymbol::Poly(PolySymbol::one(1))),
        ("xi", OscSymbol::Poly(PolySymbol::xi(1, 0))),
        ("example5", OscSymbol::Example5 { l: 0.5, p: mono(2, 0) }),
    ]
}

fn gaussconv_checks() -> Vec<Check> {
    vec![
        check(&[("c12_laplace_identity", 1e-8)], || {
            let mut worst: f64 = 0.0;
            for dens in laplace_densities()? {
                for s in [-2.0, -1.0, -0.25] {
                    for i in 0..=40 {
                        let x = -5.0 + 0.25 * i as f64;
                        let via = conv_gauss_via_laplace(&dens, s, &[x])?;
                        let direct = conv_gauss_direct(&dens, s, &[x])?;
                        worst = worst.max((via - direct).norm() / direct.norm());
                    }
                }
            }
            Ok(vec![m("c12_laplace_identity", worst, 1e-8)])
        }),
        check(
            &[("c13_osc_cauchy_monotone", 0.0), ("c13_osc_final_difference", 1e-5), ("c13_osc_psi_independence", 1e-5)],
            || {
                let chi = KernelTestFunction::standard();
                let ladder = defaults::DELTA_LADDER;
                let (mut broken, mut last, mut spread) = (0.0, 0.0f64, 0.0f64);
                for (_, b) in osc_symbols() {
                    let std = oscillatory_kernel(&b, &chi, &ladder, &Cutoff::STANDARD)?;
                    let alt = oscillatory_kernel(&b, &chi, &ladder, &Cutoff::ALTERNATE)?;
                    for r in [&std, &alt] {
                        if !r.cauchy_monotone() {
                            broken += 1.0;
                        }
                        last = last.max(r.final_difference());
                    }
                    spread = spread.max((std.extrapolated - alt.extrapolated).norm());
                }
                Ok(vec![
                    m("c13_osc_cauchy_monotone", broken, 0.0),
                    m("c13_osc_final_difference", last, 1e-5),
                    m("c13_osc_psi_independence", spread, 1e-5),
                ])
            },
        ),
    ]
}

const GEVREY_ORDERS: [f64; 3] = [1.5, 2.0, 3.0];

fn weights_checks() -> Vec<Check> {
    vec![
        check(&[("c14_conditions", 0.0), ("c14_moment_inequality", 0.0)], || {
            let (mut cond, mut lemma) = (0.0, 0.0);
            for s in GEVREY_ORDERS {
                let w = WeightSequence::gevrey_default(s)?;
                if !check_conditions(&w)?.all_hold() {
                    cond += 1.0;
                }
                for mm in [0.5, 1.0] {
                    if !lemma69_fitted(&w, mm, 20)? {
                        lemma += 1.0;
                    }
                }
            }
            Ok(vec![m("c14_conditions", cond, 0.0), m("c14_moment_inequality", lemma, 0.0)])
        }),
        check(&[("c14_ultrapoly_bound", 0.0)], || {
            let grid: Vec<f64> = (0..200).map(|i| 50.0 * i as f64 / 199.0).collect();
            let mut missing = 0.0;
            for s in GEVREY_ORDERS {
                let w = WeightSequence::gevrey(s, 256)?;
                if fit_ultrapoly_bound(&w, 1, &grid, &[1.0, 2.0], &[0.25, 0.5, 1.0, 2.0, 4.0])?.is_none() {
                    missing += 1.0;
                }
            }
            Ok(vec![m("c14_ultrapoly_bound", missing, 0.0)])
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in std::iter::once(Suite::All).chain(Suite::MEMBERS) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn criterion_prefix() {
        let r = Report {
            name: "c07_transpose".into(),
            status: Status::Pass,
            measured: 0.0,
            tolerance: 1.0,
            runtime_ms: 0.0,
            note: None,
        };
        assert_eq!(r.criterion(), Some(7));
    }

    #[test]
    fn failed_check_reports_every_name() {
        let c = check(&[("c99_a", 1.0), ("c99_b", 2.0)], || Err(Error::InvalidArgument("boom".into())));
        let r = execute(c);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.status == Status::Fail && x.note.as_deref() == Some("invalid argument: boom")));
    }

    #[test]
    fn stft_suite_passes_and_is_sorted() {
        let p = VerifyParams { n: 64, half_width: 8.0, ..Default::default() };
        let r = run_verify(Suite::Stft, &p).unwrap();
        let names: Vec<&str> = r.iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names, ["c01_stft_inversion", "c01_stft_inversion_2d", "c02_stft_isometry", "c02_stft_isometry_2d"]);
        assert!(all_pass(&r), "{}", render_table(&r, &p));
    }
}
