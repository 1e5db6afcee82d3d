use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uwq::config::{load_symbol, SymbolPayload, SymbolSpec};
use uwq::corpus::corpus;
use uwq::expansion::{
    aw_to_weyl_terms, compose_terms, inverse_aw_recursion, tau_change_terms, transpose_terms, PolySymbol,
};
use uwq::gaussconv::{
    conv_gauss_direct, conv_gauss_via_laplace, laplace, oscillatory_kernel, CompactDensity, Cutoff, DensityKind,
    KernelTestFunction, OscSymbol,
};
use uwq::grid::{AxisGrid, FunctionGrid, PhaseFunctionGrid};
use uwq::quant::{anti_wick_matrix, op_tau, op_tau_analytic, verify_prop245, verify_prop245_poly, Tau};
use uwq::stft::{stft, stft_inverse};
use uwq::verify::{all_pass, render_json, render_table, run_verify, Suite, VerifyParams};
use uwq::weights::{assoc_fn, check_conditions, WeightSequence};
use uwq::{defaults, Complex64, Error, Result};

#[derive(Parser)]
#[command(name = "uwq", version, about = "Quantization calculus on discretized phase space")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Points per axis
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Half-width of the box [-L, L)
    #[arg(long = "L", global = true)]
    half_width: Option<f64>,
    /// Dimension
    #[arg(long, global = true, default_value_t = 1)]
    d: usize,
    /// Machine-readable output where supported
    #[arg(long, global = true)]
    json: bool,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl Global {
    fn axis(&self) -> Result<AxisGrid> {
        let (n, l) = if self.d == 1 { (defaults::N_1D, defaults::L_1D) } else { (defaults::N_2D, defaults::L_2D) };
        AxisGrid::new(self.n.unwrap_or(n), self.half_width.unwrap_or(l), self.d)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Associated function table and (M.1)-(M.3) checks
    Weights {
        #[arg(long, conflicts_with = "file")]
        gevrey: Option<f64>,
        /// Weight file (`gevrey s=..` or `explicit` + ln M_p lines)
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = defaults::WEIGHT_TRUNCATION)]
        truncation: usize,
        #[arg(long)]
        check: bool,
        #[arg(long, value_delimiter = ',')]
        rho: Vec<f64>,
    },
    /// Short-time Fourier transform of a position CSV, or its inverse
    Stft {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Operator matrix of Op_τ(a)
    Quantize {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
    },
    /// Anti-Wick operator matrix, or its Weyl-consistency check
    Antiwick {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long = "verify-245")]
        verify_245: bool,
    },
    /// Symbol expansions for polynomial symbols
    Expand {
        #[arg(long)]
        symbol: PathBuf,
        /// aw260 | inverse | tau:<τ1>:<τ> | transpose:<τ> | compose:<spec>
        #[arg(long)]
        theorem: String,
        #[arg(long = "max-order")]
        max_order: Option<usize>,
    },
    /// Gaussian convolution via the Laplace transform
    Gaussconv {
        /// indicator:lo:hi | bump:center:width:lo:hi | poly:c0,c1,..:lo:hi
        #[arg(long, allow_hyphen_values = true)]
        density: String,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// a:b:step
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        compare: bool,
    },
    /// Laplace transform of a density at one point
    Laplace {
        #[arg(long, allow_hyphen_values = true)]
        density: String,
        /// re:im
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
    },
    /// Regularized oscillatory kernel along a δ ladder
    OscKernel {
        #[arg(long)]
        symbol: PathBuf,
        /// Kernel test function CSV; the built-in one when absent
        #[arg(long)]
        chi: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<f64>,
        /// Use the alternate cutoff (plateau 0.5, support 3)
        #[arg(long)]
        alternate: bool,
    },
    /// Run acceptance suites and print a pass/fail table
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<fs::File>> {
    Ok(BufReader::new(fs::File::open(path)?))
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::InvalidArgument(format!("{what}: cannot parse `{s}`")))
}

fn parse_density(spec: &str) -> Result<CompactDensity> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::InvalidArgument(format!("density `{spec}`"));
    let (kind, lo, hi) = match parts.as_slice() {
        ["indicator", lo, hi] => (DensityKind::Indicator, lo, hi),
        ["bump", c, w, lo, hi] => {
            (DensityKind::GaussianBump { center: parse_f64(c, "center")?, width: parse_f64(w, "width")? }, lo, hi)
        }
        ["poly", cs, lo, hi] => {
            let coeffs = cs.split(',').map(|c| parse_f64(c, "coefficient")).collect::<Result<Vec<_>>>()?;
            (DensityKind::PolyTimesBump { coeffs }, lo, hi)
        }
        _ => return Err(bad()),
    };
    CompactDensity::new(kind, parse_f64(lo, "lo")?, parse_f64(hi, "hi")?, 1)
}

fn x_range(spec: &str) -> Result<Vec<f64>> {
    let p: Vec<f64> = spec.split(':').map(|s| parse_f64(s, "x range")).collect::<Result<_>>()?;
    let [a, b, step] = p.as_slice() else {
        return Err(Error::InvalidArgument(format!("x range `{spec}` is not a:b:step")));
    };
    if !(*step > 0.0) || b < a {
        return Err(Error::InvalidArgument(format!("x range `{spec}` is empty")));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| a + i as f64 * step).collect())
}

fn poly_of(spec: &SymbolSpec) -> Result<&PolySymbol> {
    spec.as_poly().ok_or_else(|| Error::InvalidArgument("this command needs a `poly` symbol".into()))
}

fn poly_table(rows: &[(String, &PolySymbol)]) -> String {
    let mut out = String::from("order,monomial,re,im\n");
    for (order, p) in rows {
        for (m, c) in p.terms() {
            out.push_str(&format!("{order},{m},{},{}\n", c.re, c.im));
        }
    }
    out
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Weights { gevrey, file, truncation, check, rho } => {
            let w = match (gevrey, file) {
                (Some(s), _) => WeightSequence::gevrey(*s, *truncation)?,
                (None, Some(path)) => WeightSequence::from_text(&fs::read_to_string(path)?)?,
                (None, None) => return Err(Error::InvalidArgument("give --gevrey or --file".into())),
            };
            let mut out = String::new();
            let mut ok = true;
            if *check {
                let r = check_conditions(&w)?;
                out.push_str(&format!("# M.1 {}\n# M.2 {:?}\n# M.3 {:?}\n", r.m1_ok, r.m2, r.m3));
                ok = r.all_hold();
            }
            out.push_str("rho,M,saturated\n");
            for &r in rho {
                let v = assoc_fn(&w, r)?;
                out.push_str(&format!("{r},{},{}\n", v.value, v.saturated));
            }
            emit(g, &out)?;
            Ok(ok)
        }
        Command::Stft { input, inverse } => {
            let text = if *inverse {
                stft_inverse(&PhaseFunctionGrid::from_csv(open(input)?)?).to_csv()
            } else {
                stft(&FunctionGrid::from_csv(open(input)?)?).to_csv()
            };
            emit(g, &text)?;
            Ok(true)
        }
        Command::Quantize { symbol, tau } => {
            let spec = load_symbol(symbol)?;
            let axis = spec.axis(&g.axis()?)?;
            let tau = Tau::new(*tau)?;
            let op = match spec.as_poly() {
                Some(p) => op_tau_analytic(p, &axis, tau)?,
                None => op_tau(&spec.sample(&axis)?, tau),
            };
            emit(g, &op.to_csv())?;
            Ok(true)
        }
        Command::Antiwick { symbol, verify_245 } => {
            let spec = load_symbol(symbol)?;
            let axis = spec.axis(&g.axis()?)?;
            if *verify_245 {
                let report = match spec.as_poly() {
                    Some(p) => verify_prop245_poly(p, &axis, &corpus(&axis, 7))?,
                    None => verify_prop245(&spec.sample(&axis)?),
                };
                let text = if g.json {
                    format!("{{\"max_err\": {}}}\n", report.max_err)
                } else {
                    format!("max_err = {:e}\n", report.max_err)
                };
                emit(g, &text)?;
                return Ok(true);
            }
            emit(g, &anti_wick_matrix(&spec.sample(&axis)?).to_csv())?;
            Ok(true)
        }
        Command::Expand { symbol, theorem, max_order } => {
            let spec = load_symbol(symbol)?;
            let a = poly_of(&spec)?;
            let order = max_order.unwrap_or(a.degree() as usize);
            let parts: Vec<&str> = theorem.splitn(3, ':').collect();
            let text = match parts.as_slice() {
                ["aw260"] => {
                    let e = aw_to_weyl_terms(a, order);
                    let rows: Vec<(String, &PolySymbol)> =
                        e.terms().iter().enumerate().map(|(j, p)| (j.to_string(), p)).collect();
                    poly_table(&rows)
                }
                ["inverse"] => {
                    let e = inverse_aw_recursion(a, order)?;
                    let mut rows: Vec<(String, &PolySymbol)> =
                        e.bj.iter().enumerate().map(|(j, p)| (j.to_string(), p)).collect();
                    rows.push(("a".into(), &e.a));
                    poly_table(&rows)
                }
                ["tau", t1, t] => {
                    let b = tau_change_terms(a, parse_f64(t1, "tau1")?, parse_f64(t, "tau")?);
                    poly_table(&[("all".into(), &b)])
                }
                ["transpose", t] => poly_table(&[("all".into(), &transpose_terms(a, parse_f64(t, "tau")?))]),
                ["compose", other] => {
                    let path = symbol.parent().unwrap_or(Path::new(".")).join(other);
                    let other = load_symbol(&path)?;
                    poly_table(&[("all".into(), &compose_terms(a, poly_of(&other)?))])
                }
                _ => return Err(Error::InvalidArgument(format!("unknown theorem `{theorem}`"))),
            };
            emit(g, &text)?;
            Ok(true)
        }
        Command::Gaussconv { density, s, x, compare } => {
            let dens = parse_density(density)?;
            let mut out = String::from(if *compare { "x,via_laplace,direct,relerr\n" } else { "x,via_laplace\n" });
            for xv in x_range(x)? {
                let via = conv_gauss_via_laplace(&dens, *s, &[xv])?;
                if *compare {
                    let direct = conv_gauss_direct(&dens, *s, &[xv])?;
                    let rel = (via - direct).norm() / direct.norm();
                    out.push_str(&format!("{xv},{},{},{rel:e}\n", via.re, direct.re));
                } else {
                    out.push_str(&format!("{xv},{}\n", via.re));
                }
            }
            emit(g, &out)?;
            Ok(true)
        }
        Command::Laplace { density, zeta } => {
            let dens = parse_density(density)?;
            let (re, im) = zeta
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("zeta `{zeta}` is not re:im")))?;
            let z = Complex64::new(parse_f64(re, "zeta")?, parse_f64(im, "zeta")?);
            let v = laplace(&dens, &[z])?;
            emit(g, &format!("{},{}\n", v.re, v.im))?;
            Ok(true)
        }
        Command::OscKernel { symbol, chi, deltas, alternate } => {
            let spec = load_symbol(symbol)?;
            let b = match &spec.payload {
                SymbolPayload::Poly(p) => OscSymbol::Poly(p.clone()),
                SymbolPayload::Example5 { l, p } => OscSymbol::Example5 { l: *l, p: p.clone() },
                SymbolPayload::Grid { .. } => {
                    return Err(Error::InvalidArgument("osc-kernel needs a poly or example5 symbol".into()))
                }
            };
            let chi = match chi {
                Some(path) => KernelTestFunction::from_csv(open(path)?)?,
                None => KernelTestFunction::standard(),
            };
            let deltas = if deltas.is_empty() { defaults::DELTA_LADDER.to_vec() } else { deltas.clone() };
            let psi = if *alternate { Cutoff::ALTERNATE } else { Cutoff::STANDARD };
            let r = oscillatory_kernel(&b, &chi, &deltas, &psi)?;
            let mut out = String::from("delta,re,im,cauchy_diff\n");
            for (i, (d, v)) in r.deltas.iter().zip(&r.values).enumerate() {
                let diff = if i == 0 { String::new() } else { format!("{:e}", r.differences[i - 1]) };
                out.push_str(&format!("{d},{},{},{diff}\n", v.re, v.im));
            }
            let order = r.order.map(|o| o.to_string()).unwrap_or_default();
            out.push_str(&format!("# extrapolated {},{} order {order}\n", r.extrapolated.re, r.extrapolated.im));
            emit(g, &out)?;
            Ok(r.cauchy_monotone())
        }
        Command::Verify { suite, parallel, seed } => {
            let suite: Suite = suite.parse()?;
            let params = VerifyParams {
                n: g.n.unwrap_or(defaults::N_1D),
                half_width: g.half_width.unwrap_or(defaults::L_1D),
                seed: *seed,
                parallel: *parallel,
            };
            let reports = run_verify(suite, &params)?;
            let text = if g.json { render_json(&reports, &params) + "\n" } else { render_table(&reports, &params) };
            emit(g, &text)?;
            Ok(all_pass(&reports))
        }
    }
}
