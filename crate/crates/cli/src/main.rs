use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;

use digitsum::arith::{floor_log2, fmt_exact, fmt_rational, fmt_sig12, to_f64};
use digitsum::bigfloat::{check_precision, PRECISION_ENV};
use digitsum::dist::{dtv_to_binomial, kl_divergence_prec, pgf_counts, pmf_bruteforce, pmf_from_pgf};
use digitsum::expansion::{l1_residual, ResidualRange};
use digitsum::figures::{figure_csv, FigureOptions};
use digitsum::krawtchouk::chi2_via_parseval;
use digitsum::numeration::{g1_g2, gbar1, HalvingFailure};
use digitsum::parse::{parse_natural, parse_poly, parse_range, parse_rational, parse_rational_list};
use digitsum::periodic::{f2corr_eval, variance_fluctuation_log2};
use digitsum::stein::{increment_violation, max_abs_g, stein_residual_flipped};
use digitsum::sweep::{par_map, StepMode, SweepConfig};
use digitsum::*;

#[derive(Parser)]
#[command(name = "digitsum", version, about = "Sum-of-digits distributions, exactly")]
struct Cli {
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Float precision in bits for logarithms and certified reals.
    #[arg(long, global = true, env = PRECISION_ENV)]
    precision: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Digit sum of N.
    Nu {
        n: String,
        #[arg(long, default_value_t = 2)]
        base: u64,
    },
    /// Σ_{j<N} ν(j).
    Sum {
        n: String,
        #[arg(long, default_value_t = 2)]
        base: u64,
    },
    /// E(X_N).
    Mean {
        n: String,
        #[arg(long, default_value_t = 2)]
        base: u64,
    },
    /// Exact law of X_N, one `k,p/q` line per atom.
    Pmf {
        n: String,
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long, value_enum, default_value_t = Route::Mixture)]
        route: Route,
    },
    /// P(X_N = m) against (log_q N)^m / (m!·N), a slowly converging asymptotic.
    Density {
        n: String,
        #[arg(long, short, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        base: u64,
    },
    /// Distance between X_N and Bi(λ, 1/2).
    Dist {
        #[arg(value_enum)]
        kind: DistKind,
        #[command(flatten)]
        target: Target,
    },
    /// Coefficients a_0(N), …, a_m(N).
    Coeffs {
        n: String,
        #[arg(long, short, default_value_t = 2)]
        m: usize,
    },
    /// Order-m binomial approximant and its l1 residual.
    Approx {
        n: String,
        #[arg(long, short, default_value_t = 1)]
        m: usize,
        /// Print the approximant's weights as well.
        #[arg(long)]
        weights: bool,
    },
    /// Periodic functions at log₂N or at a real x.
    Periodic {
        #[arg(value_enum)]
        which: PeriodicKind,
        #[command(flatten)]
        target: Target,
        /// Evaluate at this real x instead of log₂N.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long, default_value_t = 48)]
        terms: usize,
    },
    /// Solve the binomial Stein equation, or the Stein-based estimates for N.
    Stein {
        #[command(subcommand)]
        op: SteinOp,
    },
    /// Krawtchouk tables, Parseval sums and the chi-square majorant.
    Krawtchouk {
        #[command(subcommand)]
        op: KrawOp,
    },
    /// Weight laws of binary coding systems.
    Code {
        #[arg(value_enum)]
        system: SystemKind,
        n: String,
        /// w(0), w(1), … for a custom system.
        #[arg(long)]
        weights: Option<String>,
    },
    /// CSV behind one of the plots.
    Figure {
        id: u32,
        #[arg(long)]
        max_lambda: Option<u32>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance criteria.
    Accept {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Args)]
struct Target {
    /// A single N, e.g. `12` or `2^20+3`.
    n: Option<String>,
    /// Sweep a range instead, e.g. `2^10..2^12`; prints CSV.
    #[arg(long)]
    range: Option<String>,
    #[arg(long, default_value_t = 1)]
    step: u64,
    /// Sample each octave at this many points instead of stepping.
    #[arg(long)]
    per_octave: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SteinOp {
    /// g for h tabulated on 0..=λ.
    Solve {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        h: String,
    },
    /// |a₁| E|Y − λ/2| / (λ/2) beside the exact distance.
    Dtv { n: String },
    /// E h(X_N) − E h(Y_λ) for h = 1{k ≤ t}.
    Correction {
        n: String,
        #[arg(long)]
        threshold: i64,
    },
}

#[derive(Subcommand)]
enum KrawOp {
    /// K_j(t) for 0 ≤ j, t ≤ N.
    Table {
        size: usize,
        #[arg(long, default_value = "1/2")]
        p: String,
    },
    /// Both sides of the Parseval identity for f given by coefficients.
    Parseval {
        size: usize,
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Exact chi-square of X_N against Bi(λ) and its majorant.
    Chi2 { n: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Mixture,
    Pgf,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistKind {
    Dtv,
    Kolmogorov,
    Chi2,
    Kl,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "verbatim")]
enum PeriodicKind {
    F,
    F1,
    F2corr,
    #[value(name = "varfluct")]
    Varfluct,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemKind {
    Binary,
    Gray,
    Transcomplement,
    Custom,
}

type Res<T> = std::result::Result<T, Error>;

fn main() -> ExitCode {
    // Die quietly when piped into `head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn num(s: &str) -> Res<BigUint> {
    parse_natural(s)
}

fn lambda(n: &BigUint) -> Res<usize> {
    floor_log2(n).ok_or(Error::EmptyDistribution)
}

fn run(cli: Cli) -> Res<ExitCode> {
    let prec = match cli.precision {
        Some(p) => {
            check_precision(p)?;
            std::env::set_var(PRECISION_ENV, p.to_string());
            p
        }
        None => digitsum::bigfloat::precision_bits(),
    };
    let jobs = cli.jobs;
    match cli.cmd {
        Cmd::Nu { n, base } => println!("{}", nu(&num(&n)?, base)?),
        Cmd::Sum { n, base } => println!("{}", digit_sum_total(&num(&n)?, base)?),
        Cmd::Mean { n, base } => println!("{}", fmt_exact(&mean_exact(&num(&n)?, base)?)),
        Cmd::Pmf { n, base, route } => {
            let n = num(&n)?;
            let p = match (route, base) {
                (Route::Mixture, 2) => pmf_mixture(&n)?,
                (Route::Brute, 2) => pmf_bruteforce(&n)?,
                (Route::Pgf, q) | (Route::Mixture, q) => pmf_from_pgf(&pgf_closed_form(&n, q)?)?,
                (Route::Brute, q) => {
                    let counts = brute_counts(&n, q)?;
                    ExactPmf::from_counts(0, &counts, &n)?
                }
            };
            print_pmf(&p);
        }
        Cmd::Density { n, m, base } => {
            let n = num(&n)?;
            let p = pmf_from_pgf(&pgf_closed_form(&n, base)?)?;
            let exact = p.prob(|k| k == m as i64);
            let x = digitsum::arith::log2_f64(&n) / (base as f64).log2();
            let fact: f64 = (1..=m).map(f64::from).product();
            let approx = x.powi(m as i32) / fact / to_f64(&BigRational::from_integer(n.into()));
            println!("exact  = {}", fmt_exact(&exact));
            println!("approx = {}", fmt_sig12(approx));
            println!("ratio  = {}", fmt_sig12(to_f64(&exact) / approx));
        }
        Cmd::Dist { kind, target } => {
            let f = move |n: &BigUint| -> Res<(String, f64)> {
                let p = pmf_mixture(n)?;
                let y = binomial_pmf(lambda(n)?);
                Ok(match kind {
                    DistKind::Dtv => {
                        let d = dtv_to_binomial(n)?;
                        (fmt_exact(&d), to_f64(&d))
                    }
                    DistKind::Kolmogorov => {
                        let d = kolmogorov_exact(&p, &y);
                        (fmt_exact(&d), to_f64(&d))
                    }
                    DistKind::Chi2 => {
                        let d = chi2_exact(&p, &y)?;
                        (fmt_exact(&d), to_f64(&d))
                    }
                    DistKind::Kl => {
                        let d = kl_divergence_prec(&p, &y, prec)?;
                        let v = d.to_f64();
                        (format!("{} (± {:.1e})", fmt_sig12(v), d.abs_error), v)
                    }
                })
            };
            emit(&target, jobs, "n,value", f)?;
        }
        Cmd::Coeffs { n, m } => {
            let n = num(&n)?;
            for (r, a) in a_coeffs(&n, m)?.coeffs.iter().enumerate() {
                println!("a{r} = {}", fmt_exact(a));
            }
        }
        Cmd::Approx { n, m, weights } => {
            let n = num(&n)?;
            let approx = approximant_pmf(&n, m)?;
            let l1 = l1_residual(&n, m, ResidualRange::Support)?;
            let a = a_coeffs(&n, m)?;
            let l = lambda(&n)? as f64;
            let main = hermite_constant(m)? * to_f64(&a.coeffs[m]).abs() / l.powf(m as f64 / 2.0);
            println!("l1 residual = {}", fmt_exact(&l1));
            println!("main term   = {}", fmt_sig12(main));
            if weights {
                for (i, w) in approx.weights().iter().enumerate() {
                    println!("{},{}", approx.offset() + i as i64, fmt_rational(w));
                }
            }
        }
        Cmd::Periodic { which, target, x, base, terms } => {
            if let Some(x) = x {
                let v = match which {
                    PeriodicKind::F => f_eval(&DyadicPoint::real(x, prec))?,
                    PeriodicKind::F2corr => f2corr_eval(&DyadicPoint::real(x, prec))?,
                    PeriodicKind::F1 => f1_eval(x, base, terms)?,
                    PeriodicKind::Varfluct => {
                        return Err(Error::Contract(
                            "varfluct is defined at integers only; pass N".into(),
                        ))
                    }
                };
                println!("{} (± {:.1e})", fmt_sig12(v.to_f64()), v.error_bound());
                return Ok(ExitCode::SUCCESS);
            }
            let f = move |n: &BigUint| -> Res<(String, f64)> {
                let v = match which {
                    PeriodicKind::F => f_eval(&DyadicPoint::log2_of(n.clone()))?,
                    PeriodicKind::F2corr => f2corr_eval(&DyadicPoint::log2_of(n.clone()))?,
                    PeriodicKind::F1 => {
                        let x = digitsum::arith::log2_f64(n) / (base as f64).log2();
                        f1_eval(x, base, terms)?
                    }
                    PeriodicKind::Varfluct => {
                        let v = variance_fluctuation(n)?;
                        let w = variance_fluctuation_log2(n)?;
                        return Ok((format!("{} [log2n: {}]", fmt_exact(&v), fmt_sig12(w)), to_f64(&v)));
                    }
                };
                Ok(match v.exact() {
                    Some(r) => (fmt_exact(r), to_f64(r)),
                    None => (fmt_sig12(v.to_f64()), v.to_f64()),
                })
            };
            emit(&target, jobs, "n,value", f)?;
        }
        Cmd::Stein { op } => stein(op)?,
        Cmd::Krawtchouk { op } => krawtchouk(op)?,
        Cmd::Code { system, n, weights } => code(system, &num(&n)?, weights.as_deref())?,
        Cmd::Figure { id, max_lambda, output } => {
            let csv = figure_csv(id, &FigureOptions { max_lambda, jobs })?;
            write_out(output.as_ref(), &csv)?;
        }
        Cmd::Accept { only } => {
            let ids: Vec<u8> = if only.is_empty() {
                (1..=digitsum::acceptance::CRITERIA).collect()
            } else {
                only
            };
            let mut all = true;
            for id in ids {
                let out = digitsum::acceptance::run(id, jobs);
                all &= out.passed;
                println!("{out}");
            }
            return Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn brute_counts(n: &BigUint, q: u64) -> Res<Vec<BigUint>> {
    let limit = u64::try_from(n)
        .ok()
        .filter(|&v| v <= digitsum::dist::ORACLE_CAP)
        .ok_or_else(|| Error::OracleRange { n: n.to_string(), cap: digitsum::dist::ORACLE_CAP })?;
    let (_, counts) = digitsum::dist::BruteForceCounts::new(q)?
        .nth(limit.checked_sub(1).ok_or(Error::EmptyDistribution)? as usize)
        .expect("the stream is unbounded");
    let c: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
    debug_assert_eq!(c, pgf_counts(n, q)?);
    Ok(c)
}

fn print_pmf(p: &ExactPmf) {
    for (i, m) in p.masses().iter().enumerate() {
        println!("{},{}", p.offset() + i as i64, fmt_rational(m));
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Numeric(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Numeric(e.to_string())),
    }
}

/// One value for a single N, or a CSV over a range.
fn emit<F>(target: &Target, jobs: usize, header: &str, f: F) -> Res<()>
where
    F: Fn(&BigUint) -> Res<(String, f64)> + Sync + Send,
{
    match (&target.n, &target.range) {
        (Some(n), None) => {
            let (text, _) = f(&num(n)?)?;
            write_out(target.output.as_ref(), &format!("{text}\n"))
        }
        (None, Some(r)) => {
            let (lo, hi) = parse_range(r)?;
            let too_big = || Error::Contract("sweep bounds must fit in 64 bits".into());
            let cfg = SweepConfig {
                start: u64::try_from(&lo).map_err(|_| too_big())?,
                end: u64::try_from(&hi).map_err(|_| too_big())?,
                mode: match target.per_octave {
                    Some(k) => StepMode::DyadicDense { per_octave: k },
                    None => StepMode::Linear { step: target.step },
                },
                output: target.output.clone(),
                ..Default::default()
            };
            let ns = cfg.points()?;
            let vals = par_map(jobs, &ns, None, |&n| f(&BigUint::from(n)))?;
            let mut csv = format!("{header}\n");
            for (n, (_, v)) in ns.iter().zip(vals) {
                csv.push_str(&format!("{n},{}\n", fmt_sig12(v)));
            }
            write_out(cfg.output.as_ref(), &csv)
        }
        _ => Err(Error::Parse("give either N or --range".into())),
    }
}

fn stein(op: SteinOp) -> Res<()> {
    match op {
        SteinOp::Solve { lambda, h } => {
            let h = parse_rational_list(&h)?;
            let sol = stein_solve(lambda, &h)?;
            println!("Eh = {}", fmt_exact(&sol.eh));
            for (m, g) in sol.g.iter().enumerate() {
                println!("g({m}) = {}", fmt_exact(g));
            }
            println!("residual = {}", fmt_rational(&stein_residual(&sol)));
            println!("residual, flipped orientation = {}", fmt_rational(&stein_residual_flipped(&sol)));
            println!("max |g| = {} ≤ {}", fmt_exact(&max_abs_g(&sol)), fmt_exact(&g_uniform_bound(lambda)?));
            match increment_violation(&sol) {
                None => println!("increment bound holds"),
                Some(j) => println!("increment bound fails at j = {j}"),
            }
        }
        SteinOp::Dtv { n } => {
            let n = num(&n)?;
            println!("stein estimate = {}", fmt_exact(&dtv_via_stein(&n)?));
            println!("exact dtv      = {}", fmt_exact(&dtv_to_binomial(&n)?));
        }
        SteinOp::Correction { n, threshold } => {
            let n = num(&n)?;
            let h = digitsum::stein::half_line(lambda(&n)?, threshold);
            let c = stein_mean_correction(&n, &h)?;
            println!("difference = {}", fmt_exact(&c.lhs));
            println!("leading    = {}", fmt_exact(&c.leading));
            println!("remainder  = {}", fmt_exact(&c.difference()));
            println!("remainder, leading sign flipped = {}", fmt_exact(&c.flipped_difference()));
        }
    }
    Ok(())
}

fn krawtchouk(op: KrawOp) -> Res<()> {
    match op {
        KrawOp::Table { size, p } => {
            let fam = krawtchouk_table(size, &parse_rational(&p)?)?;
            for j in 0..=size {
                let row: Vec<String> = (0..=size).map(|t| fmt_rational(fam.get(j, t))).collect();
                println!("{}", row.join(","));
            }
        }
        KrawOp::Parseval { size, p, f } => {
            let (l, r) = parseval_check(&parse_poly(&f)?, size, &parse_rational(&p)?)?;
            println!("lhs = {}", fmt_exact(&l));
            println!("rhs = {}", fmt_exact(&r));
            println!("{}", if l == r { "equal" } else { "DIFFERENT" });
        }
        KrawOp::Chi2 { n } => {
            let n = num(&n)?;
            let exact = chi2_via_parseval(&n)?;
            println!("chi2     = {}", fmt_exact(&exact));
            println!("majorant = {}", fmt_sig12(chi2_upper_bound(&n)?));
        }
    }
    Ok(())
}

fn code(kind: SystemKind, n: &BigUint, weights: Option<&str>) -> Res<()> {
    let small = u64::try_from(n).map_err(|_| Error::Contract("N must fit in 64 bits".into()))?;
    let mut sys = match kind {
        SystemKind::Binary => CodingSystem::binary(),
        SystemKind::Gray => CodingSystem::gray(),
        SystemKind::Transcomplement => CodingSystem::transcomplement(),
        SystemKind::Custom => {
            let list = weights.ok_or_else(|| Error::Parse("custom needs --weights".into()))?;
            let w: Vec<u64> = parse_rational_list(list)?
                .iter()
                .map(|r| {
                    u64::try_from(r.to_integer())
                        .ok()
                        .filter(|_| r.is_integer())
                        .ok_or_else(|| Error::Parse(format!("weight {r} is not a nonnegative integer")))
                })
                .collect::<Res<_>>()?;
            if (w.len() as u64) < small {
                return Err(Error::Contract(format!("need weights for 0..{small}")));
            }
            let len = w.len() as u64;
            let mut sys = CodingSystem::custom("custom", move |j| w[j as usize]);
            let reach = len / 2;
            if let Err(e) = sys.verify_halving(reach) {
                println!("halving identity fails: {}", describe(e));
                let p = digitsum::numeration::code_pmf_bruteforce(&sys, n)?;
                print_pmf(&p);
                return Ok(());
            }
            sys
        }
    };
    if !matches!(kind, SystemKind::Custom) {
        sys.verify_halving(small.div_ceil(2).max(1)).map_err(|e| Error::Uncertified(describe(e)))?;
    }
    println!("weight({small}) = {}", if small < u64::MAX { sys.weight(small) } else { 0 });
    let p = code_pmf(&sys, n)?;
    print_pmf(&p);
    println!("E(Z) - λ/2 = {}", fmt_exact(&gbar1(&sys, n)?));
    let fl = g1_g2(&sys, n)?;
    let (g1, g2) = fl.values(n);
    println!("G1 = {}", fmt_sig12(g1));
    println!("G2 = {}", fmt_sig12(g2));
    Ok(())
}

fn describe(e: HalvingFailure) -> String {
    match e {
        HalvingFailure::NonzeroOrigin(w) => format!("w(0) = {w} ≠ 0"),
        HalvingFailure::Identity(n) => format!("R_2n ≠ (1+y) R_n at n = {n}"),
    }
}

