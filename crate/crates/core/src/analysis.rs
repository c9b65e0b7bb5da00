//! Error measurement, convergence sweeps and decay classification.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::collocate::{assemble, solve, SolutionApprox};
use crate::error::{Error, Result};
use crate::fracbasis::{default_grid, sup_norm, weighted_l2_norm, DEFAULT_NORM_POINTS};
use crate::problem::{transform, ProblemSpec};

/// Errors at or below this level are treated as round-off and left out of rate fits.
pub const NOISE_FLOOR: f64 = 1e-13;
/// A series is only fitted if some error exceeds this level.
pub const MIN_SIGNAL: f64 = 1e-11;
/// Minimum number of usable points for a rate fit.
pub const MIN_FIT_POINTS: usize = 4;
/// Required lead in R^2 of the winning fit.
pub const R2_MARGIN: f64 = 0.02;
/// Smallest gap between a self-reference degree and the degrees compared against it.
pub const REFERENCE_GAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub lambda: f64,
    pub l2_e: f64,
    pub linf_e: f64,
    pub l2_estar: f64,
    pub linf_estar: f64,
}

type ThetaFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// What a numerical solution is compared against: `phi` and `phi'` on `[0, 1]`.
#[derive(Clone)]
pub struct Comparator {
    phi: ThetaFn,
    phi_prime: ThetaFn,
    /// Degree of the self-reference solution, if this is one.
    pub n_ref: Option<usize>,
}

impl fmt::Debug for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Comparator")
            .field("n_ref", &self.n_ref)
            .finish_non_exhaustive()
    }
}

impl Comparator {
    pub fn new(
        phi: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
        phi_prime: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            phi: Arc::new(phi),
            phi_prime: Arc::new(phi_prime),
            n_ref: None,
        }
    }

    /// The transformed exact solution of `spec`.
    pub fn exact(spec: &ProblemSpec) -> Result<Self> {
        if !spec.has_exact() {
            return Err(Error::MissingExact(spec.name.clone()));
        }
        let tp = Arc::new(transform(spec)?);
        let tp2 = Arc::clone(&tp);
        Ok(Self::new(move |th| tp.phi(th), move |th| tp2.phi_prime(th)))
    }

    /// A solved system used in place of the exact solution.
    pub fn from_solution(sol: SolutionApprox) -> Self {
        let n = sol.n();
        let sol = Arc::new(sol);
        let sol2 = Arc::clone(&sol);
        Self {
            phi: Arc::new(move |th| Ok(sol.evaluate(th))),
            phi_prime: Arc::new(move |th| Ok(sol2.evaluate_derivative(th))),
            n_ref: Some(n),
        }
    }

    pub fn phi(&self, theta: f64) -> Result<f64> {
        (self.phi)(theta)
    }

    pub fn phi_prime(&self, theta: f64) -> Result<f64> {
        (self.phi_prime)(theta)
    }

    fn check_gap(&self, n: usize) -> Result<()> {
        match self.n_ref {
            Some(r) if r < n + REFERENCE_GAP => Err(Error::Argument(format!(
                "reference degree {r} must be at least N + {REFERENCE_GAP} = {}",
                n + REFERENCE_GAP
            ))),
            _ => Ok(()),
        }
    }
}

/// Solves `spec` at `(lambda_ref, n_ref)` to stand in for an unknown exact solution.
pub fn self_reference(
    spec: &ProblemSpec,
    lambda_ref: f64,
    n_ref: usize,
    alpha_c: f64,
    beta_c: f64,
) -> Result<Comparator> {
    let tp = transform(spec)?;
    let sol = solve(assemble(&tp, n_ref, lambda_ref, alpha_c, beta_c)?)?;
    Ok(Comparator::from_solution(sol))
}

/// The exact solution when `spec` has one, otherwise the standard self-reference.
pub fn default_comparator(spec: &ProblemSpec, alpha_c: f64, beta_c: f64) -> Result<Comparator> {
    if spec.has_exact() {
        Comparator::exact(spec)
    } else {
        self_reference(spec, 0.5, 18, alpha_c, beta_c)
    }
}

/// Weighted L2 and sup norms of `e` and `e*`.
///
/// The L2 norms use the `(alpha_c, beta_c, 1)` weight with `norm_points` nodes;
/// sup norms use 1000 uniform points plus the collocation nodes.
pub fn error_report(
    sol: &SolutionApprox,
    cmp: &Comparator,
    alpha_c: f64,
    beta_c: f64,
    norm_points: usize,
) -> Result<ErrorReport> {
    cmp.check_gap(sol.n())?;
    let grid = default_grid(sol.system.nodes());
    let mut failure: Option<Error> = None;
    let mut guard = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let e = |th: f64| cmp.phi(th).map(|v| v - sol.evaluate(th));
    let es = |th: f64| cmp.phi_prime(th).map(|v| v - sol.evaluate_derivative(th));
    let l2_e = weighted_l2_norm(|th| guard(e(th)), alpha_c, beta_c, 1.0, norm_points)?;
    let l2_estar = weighted_l2_norm(|th| guard(es(th)), alpha_c, beta_c, 1.0, norm_points)?;
    let linf_e = sup_norm(|th| guard(e(th)), &grid)?;
    let linf_estar = sup_norm(|th| guard(es(th)), &grid)?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(ErrorReport {
        n: sol.n(),
        lambda: sol.lambda(),
        l2_e,
        linf_e,
        l2_estar,
        linf_estar,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateClass {
    Exponential,
    Algebraic,
    Inconclusive,
}

impl fmt::Display for RateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RateClass::Exponential => "exponential",
            RateClass::Algebraic => "algebraic",
            RateClass::Inconclusive => "inconclusive",
        })
    }
}

/// Fit of one error series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesFit {
    pub class: RateClass,
    /// Slope of the winning fit of `ln err` (against `N` or `ln N`); NaN if inconclusive.
    pub rate: f64,
    pub r2_exponential: f64,
    pub r2_algebraic: f64,
}

impl SeriesFit {
    fn margin(&self) -> f64 {
        (self.r2_exponential - self.r2_algebraic).abs()
    }
}

/// Combined verdict over the four error norms of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class: RateClass,
    /// Rate of the most decisive agreeing series; NaN if inconclusive.
    pub rate: f64,
    /// Fits of `l2_e`, `linf_e`, `l2_estar`, `linf_estar`, in that order.
    pub series: [SeriesFit; 4],
}

/// Least squares line `y = a + b x`; returns `(b, R^2)`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        0.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, r2)
}

/// Decides between `err ~ rho^-N` and `err ~ N^-r` from `(N, err)` pairs.
///
/// Points at or below [`NOISE_FLOOR`] are dropped. At least [`MIN_FIT_POINTS`]
/// must remain, one of them above [`MIN_SIGNAL`], and both fits must decay.
pub fn classify(points: &[(usize, f64)]) -> SeriesFit {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, e)| *n > 0 && e.is_finite() && *e > NOISE_FLOOR)
        .map(|&(n, e)| (n as f64, e.ln()))
        .collect();
    let inconclusive = |r2e: f64, r2a: f64| SeriesFit {
        class: RateClass::Inconclusive,
        rate: f64::NAN,
        r2_exponential: r2e,
        r2_algebraic: r2a,
    };
    if usable.len() < MIN_FIT_POINTS || !usable.iter().any(|p| p.1 > MIN_SIGNAL.ln()) {
        return inconclusive(f64::NAN, f64::NAN);
    }
    let ns: Vec<f64> = usable.iter().map(|p| p.0).collect();
    let log_ns: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|p| p.1).collect();
    let (slope_e, r2e) = linear_fit(&ns, &ys);
    let (slope_a, r2a) = linear_fit(&log_ns, &ys);
    if !(slope_e < 0.0 && slope_a < 0.0) {
        return inconclusive(r2e, r2a);
    }
    let (class, rate) = if r2e >= r2a + R2_MARGIN {
        (RateClass::Exponential, slope_e)
    } else if r2a >= r2e + R2_MARGIN {
        (RateClass::Algebraic, slope_a)
    } else {
        return inconclusive(r2e, r2a);
    };
    SeriesFit {
        class,
        rate,
        r2_exponential: r2e,
        r2_algebraic: r2a,
    }
}

/// Classifies each norm separately; inconclusive series abstain and the rest must agree.
pub fn classify_reports(rows: &[ErrorReport]) -> Classification {
    let getters: [fn(&ErrorReport) -> f64; 4] =
        [|r| r.l2_e, |r| r.linf_e, |r| r.l2_estar, |r| r.linf_estar];
    let series = getters.map(|get| {
        let pts: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, get(r))).collect();
        classify(&pts)
    });
    let decisive: Vec<&SeriesFit> = series
        .iter()
        .filter(|f| f.class != RateClass::Inconclusive)
        .collect();
    let agreed = decisive
        .first()
        .map(|f| f.class)
        .filter(|c| decisive.iter().all(|f| f.class == *c));
    let (class, rate) = match agreed {
        Some(c) => {
            let best = decisive
                .iter()
                .max_by(|a, b| a.margin().total_cmp(&b.margin()))
                .map_or(f64::NAN, |f| f.rate);
            (c, best)
        }
        None => (RateClass::Inconclusive, f64::NAN),
    };
    Classification {
        class,
        rate,
        series,
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub problem: String,
    pub lambda: f64,
    /// Successful rows, strictly increasing in `n`.
    pub rows: Vec<ErrorReport>,
    /// Degrees whose solve or measurement failed.
    pub failures: Vec<(usize, Error)>,
    pub rate_class: RateClass,
    pub fitted_rate: f64,
    pub classification: Classification,
}

/// Solves and measures once per `N` (in parallel) and classifies the decay.
///
/// See [`classify_reports`] for how the four norms are combined.
pub fn sweep(
    spec: &ProblemSpec,
    lambda: f64,
    n_values: &[usize],
    alpha_c: f64,
    beta_c: f64,
    cmp: &Comparator,
) -> Result<SweepResult> {
    sweep_with_points(
        spec,
        lambda,
        n_values,
        alpha_c,
        beta_c,
        cmp,
        DEFAULT_NORM_POINTS,
    )
}

/// [`sweep`] with an explicit norm quadrature size.
pub fn sweep_with_points(
    spec: &ProblemSpec,
    lambda: f64,
    n_values: &[usize],
    alpha_c: f64,
    beta_c: f64,
    cmp: &Comparator,
    norm_points: usize,
) -> Result<SweepResult> {
    if n_values.is_empty() {
        return Err(Error::Argument("sweep needs at least one N".into()));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(
            "N values must be strictly increasing".into(),
        ));
    }
    let tp = transform(spec)?;
    let outcomes: Vec<(usize, Result<ErrorReport>)> = n_values
        .par_iter()
        .map(|&n| {
            let run = || {
                let sol = solve(assemble(&tp, n, lambda, alpha_c, beta_c)?)?;
                error_report(&sol, cmp, alpha_c, beta_c, norm_points)
            };
            (n, run())
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (n, r) in outcomes {
        match r {
            Ok(rep) => rows.push(rep),
            Err(e) => failures.push((n, e)),
        }
    }
    let classification = classify_reports(&rows);
    Ok(SweepResult {
        problem: spec.name.clone(),
        lambda,
        rows,
        failures,
        rate_class: classification.class,
        fitted_rate: classification.rate,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Text,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "text" => Ok(TableFormat::Text),
            "" => Err(Error::Argument("table format must not be empty".into())),
            other => Err(Error::Argument(format!(
                "unknown table format `{other}` (expected csv or text)"
            ))),
        }
    }
}

/// C-style `%.5e`: six significant digits and a signed two-digit exponent.
pub fn sci(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.5e}");
    let (mant, exp) = s.split_once('e').unwrap_or((&s, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

type Getter = fn(&ErrorReport) -> f64;

pub const CSV_HEADER: &str = "N,L2_e,Linf_e,L2_estar,Linf_estar";

/// Renders a sweep as CSV or as an aligned table with one column per `N`.
pub fn emit_table(result: &SweepResult, format: TableFormat) -> Result<String> {
    if result.rows.is_empty() {
        return Err(Error::Argument("cannot emit an empty sweep".into()));
    }
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in &result.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.n,
                    sci(r.l2_e),
                    sci(r.linf_e),
                    sci(r.l2_estar),
                    sci(r.linf_estar)
                );
            }
        }
        TableFormat::Text => {
            let label_w = 12;
            let cell_w = 13;
            let _ = write!(out, "{:<label_w$}", "N");
            for r in &result.rows {
                let _ = write!(out, "{:>cell_w$}", r.n);
            }
            out.push('\n');
            let lines: [(&str, Getter); 4] = [
                ("L2 e", |r| r.l2_e),
                ("Linf e", |r| r.linf_e),
                ("L2 e*", |r| r.l2_estar),
                ("Linf e*", |r| r.linf_estar),
            ];
            for (label, get) in lines {
                let _ = write!(out, "{label:<label_w$}");
                for r in &result.rows {
                    let _ = write!(out, "{:>cell_w$}", sci(get(r)));
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

/// `lambda` with at most four decimals and no trailing zeros.
pub fn lambda_tag(lambda: f64) -> String {
    let s = format!("{lambda:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `<problem>_<lambda>_sweep.csv`.
pub fn sweep_file_name(problem: &str, lambda: f64) -> String {
    format!("{problem}_{}_sweep.csv", lambda_tag(lambda))
}
