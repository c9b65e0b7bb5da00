//! Problem definitions for third-kind VIDEs with proportional delay
//!
//! ```text
//! t^gamma y'(t) = p(t) y(t) + q(t) y(eps t) + g(t)
//!               + int_0^t (t-s)^-mu s^(mu+gamma-1) K1(t,s) y(s) ds
//!               + eps^-gamma int_0^(eps t) (eps t - tau)^-mu tau^(mu+gamma-1) K2(t,tau) y(tau) dtau,
//! y(0) = y0,   t in [0, T].
//! ```

use std::collections::HashSet;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::exprlang::{parse_str, Expr};
use crate::specfun::{frac_gauss_jacobi, QuadratureRule};

/// A real function of one variable.
pub type Fn1 = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;
/// A real function of two variables.
pub type Fn2 = Arc<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>;

/// Points of the Gauss-Jacobi rule behind [`manufactured_g`].
pub const DEFAULT_ORACLE_POINTS: usize = 200;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["ex1", "ex2", "ex3", "ex4", "ex5"];

fn fn1(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Fn1 {
    Arc::new(move |t| Ok(f(t)))
}

fn fn2(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Fn2 {
    Arc::new(move |t, s| Ok(f(t, s)))
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    /// Weak singularity exponent, in `[0, 1)`.
    pub mu: f64,
    pub gamma: f64,
    /// Proportional delay factor, in `(0, 1]`.
    pub eps: f64,
    /// Right endpoint `T` of the interval.
    pub t_end: f64,
    pub y0: f64,
    pub p: Fn1,
    pub q: Fn1,
    pub g: Fn1,
    pub k1: Fn2,
    pub k2: Fn2,
    pub exact: Option<Fn1>,
    pub exact_prime: Option<Fn1>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("mu", &self.mu)
            .field("gamma", &self.gamma)
            .field("eps", &self.eps)
            .field("t_end", &self.t_end)
            .field("y0", &self.y0)
            .field("has_exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

/// Every violated parameter constraint, as human-readable messages.
pub fn validate(spec: &ProblemSpec) -> std::result::Result<(), Vec<String>> {
    let mut errs = Vec::new();
    let ProblemSpec {
        mu,
        gamma,
        eps,
        t_end,
        y0,
        ..
    } = *spec;
    if !(0.0..1.0).contains(&mu) {
        errs.push(format!("mu must lie in [0, 1), got {mu}"));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        errs.push(format!("gamma must be positive, got {gamma}"));
    }
    // A few ulps of slack so that e.g. mu = 1/3, gamma = 2/3 passes.
    if !(mu + gamma >= 1.0 - 4.0 * f64::EPSILON) {
        errs.push(format!("mu + gamma must be at least 1, got {}", mu + gamma));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        errs.push(format!("eps must lie in (0, 1], got {eps}"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        errs.push(format!("T must be positive, got {t_end}"));
    }
    if !y0.is_finite() {
        errs.push(format!("y0 must be finite, got {y0}"));
    }
    if spec.exact.is_some() != spec.exact_prime.is_some() {
        errs.push("exact and exact_prime must be given together".into());
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

impl ProblemSpec {
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        validate(self)
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some() && self.exact_prime.is_some()
    }

    /// Residual of the equation at `t` together with the largest term in magnitude.
    ///
    /// Integrals use a matched `n_points` Gauss-Jacobi rule; requires an exact solution.
    pub fn residual(&self, t: f64, n_points: usize) -> Result<(f64, f64)> {
        let terms = self.equation_terms(t, &oracle_rule(self, n_points)?)?;
        let res = terms.lhs - terms.p - terms.q - terms.i1 - terms.i2 - (self.g)(t)?;
        let scale = [terms.lhs, terms.p, terms.q, terms.i1, terms.i2]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok((res, scale))
    }

    fn equation_terms(&self, t: f64, rule: &QuadratureRule) -> Result<Terms> {
        let (Some(y), Some(dy)) = (&self.exact, &self.exact_prime) else {
            return Err(Error::MissingExact(self.name.clone()));
        };
        let et = self.eps * t;
        let i1 = rule.try_integrate(|xi| Ok::<_, Error>((self.k1)(t, t * xi)? * y(t * xi)?))?;
        let i2 = rule.try_integrate(|xi| Ok::<_, Error>((self.k2)(t, et * xi)? * y(et * xi)?))?;
        let tg = t.powf(self.gamma);
        Ok(Terms {
            lhs: tg * dy(t)?,
            p: (self.p)(t)? * y(t)?,
            q: (self.q)(t)? * y(et)?,
            i1: tg * i1,
            i2: tg * i2,
        })
    }

    /// Replaces `gamma`, rebuilding a manufactured `g` when an exact solution is present.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        validate(&self).map_err(Error::InvalidProblem)?;
        if self.has_exact() {
            self.g = manufactured_g(&self, DEFAULT_ORACLE_POINTS)?;
        }
        Ok(self)
    }
}

struct Terms {
    lhs: f64,
    p: f64,
    q: f64,
    i1: f64,
    i2: f64,
}

/// Rule for `int_0^1 (1-xi)^-mu xi^(mu+gamma-1) f(xi) dxi`.
fn oracle_rule(spec: &ProblemSpec, n_points: usize) -> Result<QuadratureRule> {
    if n_points == 0 {
        return Err(Error::Argument(
            "oracle quadrature needs at least one point".into(),
        ));
    }
    frac_gauss_jacobi(n_points, -spec.mu, spec.mu + spec.gamma - 1.0, 1.0)
}

/// Forcing term that makes `spec.exact` solve the equation.
///
/// Both memory integrals are mapped to `[0, 1]` and evaluated with an
/// `n_points` Gauss-Jacobi rule carrying the singular factors as its weight.
pub fn manufactured_g(spec: &ProblemSpec, n_points: usize) -> Result<Fn1> {
    if !spec.has_exact() {
        return Err(Error::MissingExact(spec.name.clone()));
    }
    let rule = oracle_rule(spec, n_points)?;
    let spec = spec.clone();
    Ok(Arc::new(move |t| {
        let terms = spec.equation_terms(t, &rule)?;
        Ok(terms.lhs - terms.p - terms.q - terms.i1 - terms.i2)
    }))
}

/// The problem rewritten on `theta in [0, 1]` via `t = T theta`.
#[derive(Clone, Debug)]
pub struct TransformedProblem {
    pub spec: ProblemSpec,
}

fn positive_theta(func: &'static str, theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(domain(
            func,
            format!("theta must lie in (0, 1], got {theta}"),
        ))
    }
}

impl TransformedProblem {
    pub fn mu(&self) -> f64 {
        self.spec.mu
    }

    pub fn gamma(&self) -> f64 {
        self.spec.gamma
    }

    pub fn eps(&self) -> f64 {
        self.spec.eps
    }

    pub fn y0(&self) -> f64 {
        self.spec.y0
    }

    fn scaled(&self, f: &Fn1, func: &'static str, theta: f64) -> Result<f64> {
        positive_theta(func, theta)?;
        let big_t = self.spec.t_end;
        let t = big_t * theta;
        Ok(big_t * t.powf(-self.spec.gamma) * f(t)?)
    }

    /// `T (T theta)^-gamma p(T theta)`.
    pub fn p1(&self, theta: f64) -> Result<f64> {
        self.scaled(&self.spec.p, "p1", theta)
    }

    pub fn q1(&self, theta: f64) -> Result<f64> {
        self.scaled(&self.spec.q, "q1", theta)
    }

    pub fn g1(&self, theta: f64) -> Result<f64> {
        self.scaled(&self.spec.g, "g1", theta)
    }

    /// `T K1(T theta, T eta)`.
    pub fn k1_bar(&self, theta: f64, eta: f64) -> Result<f64> {
        let big_t = self.spec.t_end;
        Ok(big_t * (self.spec.k1)(big_t * theta, big_t * eta)?)
    }

    /// `T K2(T theta, T tau)`.
    pub fn k2_bar(&self, theta: f64, tau: f64) -> Result<f64> {
        let big_t = self.spec.t_end;
        Ok(big_t * (self.spec.k2)(big_t * theta, big_t * tau)?)
    }

    /// `phi(theta) = y(T theta)`.
    pub fn phi(&self, theta: f64) -> Result<f64> {
        let y = self
            .spec
            .exact
            .as_ref()
            .ok_or_else(|| Error::MissingExact(self.spec.name.clone()))?;
        y(self.spec.t_end * theta)
    }

    /// `phi'(theta) = T y'(T theta)`.
    pub fn phi_prime(&self, theta: f64) -> Result<f64> {
        let dy = self
            .spec
            .exact_prime
            .as_ref()
            .ok_or_else(|| Error::MissingExact(self.spec.name.clone()))?;
        Ok(self.spec.t_end * dy(self.spec.t_end * theta)?)
    }
}

/// Moves `spec` onto the unit interval; fails if the spec is invalid.
pub fn transform(spec: &ProblemSpec) -> Result<TransformedProblem> {
    validate(spec).map_err(Error::InvalidProblem)?;
    Ok(TransformedProblem { spec: spec.clone() })
}

/// Built-in benchmark problem; `ex1` uses `gamma = 1`.
pub fn builtin(name: &str) -> Result<ProblemSpec> {
    let spec = match name {
        "ex1" => ex1(1.0),
        "ex2" => ex2_like("ex2", 0.5, false),
        "ex3" => ex2_like("ex3", 1.0, true),
        "ex4" => ex4_like("ex4", 0.5),
        "ex5" => ex4_like("ex5", 2.0 - SQRT_2),
        _ => return Err(Error::UnknownProblem(name.to_string())),
    };
    finish(spec)
}

/// [`builtin`] with an optional replacement for `gamma`.
pub fn builtin_with_gamma(name: &str, gamma: Option<f64>) -> Result<ProblemSpec> {
    match gamma {
        None => builtin(name),
        Some(g) => builtin(name)?.with_gamma(g),
    }
}

fn finish(mut spec: ProblemSpec) -> Result<ProblemSpec> {
    validate(&spec).map_err(Error::InvalidProblem)?;
    if spec.has_exact() {
        spec.g = manufactured_g(&spec, DEFAULT_ORACLE_POINTS)?;
    }
    Ok(spec)
}

fn placeholder_g() -> Fn1 {
    fn1(|_| 0.0)
}

fn ex1(gamma: f64) -> ProblemSpec {
    let mu = 0.5;
    let r = 1.0 - mu;
    let kernel = fn2(move |_, s| s.powf(r).exp());
    ProblemSpec {
        name: "ex1".into(),
        mu,
        gamma,
        eps: 0.5,
        t_end: 1.0,
        y0: 0.0,
        p: fn1(|t| t.powf(5.0 / 3.0)),
        q: fn1(|t| t.powf(5.0 / 3.0)),
        g: placeholder_g(),
        k1: kernel.clone(),
        k2: kernel,
        exact: Some(fn1(move |t| t * (-t.powf(r)).exp())),
        exact_prime: Some(fn1(move |t| (1.0 - r * t.powf(r)) * (-t.powf(r)).exp())),
    }
}

fn ex2_like(name: &str, t_end: f64, two_terms: bool) -> ProblemSpec {
    let mu = 1.0 / 3.0;
    let c = 3f64.sqrt() / (3.0 * PI);
    let kernel = fn2(move |_, s| c * s.exp());
    let powers: Vec<f64> = if two_terms {
        vec![1.5, 1.0 + SQRT_2]
    } else {
        vec![1.0 + mu]
    };
    let pw = powers.clone();
    let exact = fn1(move |t| pw.iter().map(|&a| t.powf(a)).sum::<f64>() * (-t).exp());
    let exact_prime = fn1(move |t| {
        powers
            .iter()
            .map(|&a| a * t.powf(a - 1.0) - t.powf(a))
            .sum::<f64>()
            * (-t).exp()
    });
    ProblemSpec {
        name: name.into(),
        mu,
        gamma: 1.0,
        eps: 0.66,
        t_end,
        y0: 0.0,
        p: fn1(|t| t.powf(5.0 / 3.0)),
        q: fn1(|t| t.powf(5.0 / 3.0)),
        g: placeholder_g(),
        k1: kernel.clone(),
        k2: kernel,
        exact: Some(exact),
        exact_prime: Some(exact_prime),
    }
}

fn ex4_like(name: &str, mu: f64) -> ProblemSpec {
    ProblemSpec {
        name: name.into(),
        mu,
        gamma: 1.0,
        eps: 0.5,
        t_end: 0.5,
        y0: 3.0,
        p: fn1(|t| t.powf(1.5) * t.cos()),
        q: fn1(|t| t.powf(1.5) * (-t).exp()),
        g: fn1(|t| (2.0 * t).sin()),
        k1: fn2(move |t, s| -s.powf(1.0 + mu) * (1.0 + (t * s).sin())),
        k2: fn2(move |t, tau| tau.powf(1.0 + mu) * (1.0 + (t * tau).cos())),
        exact: None,
        exact_prime: None,
    }
}

const CONFIG_KEYS: [&str; 12] = [
    "mu",
    "gamma",
    "eps",
    "T",
    "y0",
    "p",
    "q",
    "g",
    "K1",
    "K2",
    "exact",
    "exact_prime",
];

/// Parses a `key = expression` problem file.
///
/// Blank lines and `#` comments are ignored. Scalar keys are constant
/// expressions; `p`, `q`, `g`, `exact`, `exact_prime` may use `t`, `K1` may
/// use `t, s` and `K2` may use `t, tau`. All may use `mu, gamma, eps, T, pi, e`.
/// When `g` is omitted it is manufactured from `exact` and `exact_prime`.
pub fn parse_config(text: &str, name: &str) -> Result<ProblemSpec> {
    let mut entries: Vec<(&str, Expr)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::Argument(format!("line {}: {msg}", lineno + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at("expected `key = expression`".into()))?;
        let key = key.trim();
        let Some(&key) = CONFIG_KEYS.iter().find(|k| **k == key) else {
            return Err(at(format!("unknown key `{key}`")));
        };
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(at(format!("duplicate key `{key}`")));
        }
        let expr = parse_str(value.trim()).map_err(|e| at(format!("{key}: {e}")))?;
        entries.push((key, expr));
    }
    let get = |k: &str| {
        entries
            .iter()
            .find(|(key, _)| *key == k)
            .map(|(_, e)| e.clone())
    };
    let require = |k: &str| get(k).ok_or_else(|| Error::Argument(format!("missing key `{k}`")));

    let scalar = |k: &str, vars: &[(&str, f64)]| -> Result<f64> {
        let e = require(k)?;
        check_vars(k, &e, &[])?;
        Ok(e.eval(vars)?)
    };
    let mu = scalar("mu", &[])?;
    let gamma = scalar("gamma", &[])?;
    let eps = scalar("eps", &[])?;
    let t_end = scalar("T", &[])?;
    let params = [("mu", mu), ("gamma", gamma), ("eps", eps), ("T", t_end)];

    let unary = |k: &str| -> Result<Option<Fn1>> {
        let Some(e) = get(k) else { return Ok(None) };
        check_vars(k, &e, &["t"])?;
        Ok(Some(Arc::new(move |t| {
            let [a, b, c, d] = params;
            Ok(e.eval(&[("t", t), a, b, c, d])?)
        })))
    };
    let binary = |k: &str, second: &'static str| -> Result<Fn2> {
        let e = require(k)?;
        check_vars(k, &e, &["t", second])?;
        Ok(Arc::new(move |t, s| {
            let [a, b, c, d] = params;
            Ok(e.eval(&[("t", t), (second, s), a, b, c, d])?)
        }))
    };
    let exact = unary("exact")?;
    let exact_prime = unary("exact_prime")?;
    let y0 = match (get("y0"), &exact) {
        (Some(e), _) => {
            check_vars("y0", &e, &[])?;
            e.eval(&params)?
        }
        (None, Some(y)) => y(0.0)?,
        (None, None) => return Err(Error::Argument("missing key `y0`".into())),
    };
    let mut spec = ProblemSpec {
        name: name.to_string(),
        mu,
        gamma,
        eps,
        t_end,
        y0,
        p: unary("p")?.ok_or_else(|| Error::Argument("missing key `p`".into()))?,
        q: unary("q")?.ok_or_else(|| Error::Argument("missing key `q`".into()))?,
        g: placeholder_g(),
        k1: binary("K1", "s")?,
        k2: binary("K2", "tau")?,
        exact,
        exact_prime,
    };
    validate(&spec).map_err(Error::InvalidProblem)?;
    spec.g = match unary("g")? {
        Some(g) => g,
        None if spec.has_exact() => manufactured_g(&spec, DEFAULT_ORACLE_POINTS)?,
        None => {
            return Err(Error::Argument(
                "missing key `g` (needed when no exact solution is given)".into(),
            ))
        }
    };
    Ok(spec)
}

fn check_vars(key: &str, e: &Expr, local: &[&str]) -> Result<()> {
    let allowed: HashSet<&str> = ["mu", "gamma", "eps", "T", "pi", "e"]
        .into_iter()
        .chain(local.iter().copied())
        .collect();
    let bad: Vec<String> = e
        .free_vars()
        .into_iter()
        .filter(|v| !allowed.contains(v.as_str()))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "`{key}` uses unsupported variable(s): {}",
            bad.join(", ")
        )))
    }
}
