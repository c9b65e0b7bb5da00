//! Special functions and Gauss-Jacobi rules.
//!
//! Jacobi polynomials are evaluated by their three-term recurrence. Gauss nodes
//! are located by Sturm-sequence bisection on the symmetric Jacobi matrix and
//! then polished with Newton steps on the polynomial itself; weights come from
//! the derivative formula so that tiny weights keep full relative accuracy.
//! The fractional rule on `[0, 1]` is the image of the classical rule under
//! `theta = ((t + 1) / 2)^(1 / lambda)`.

use std::f64::consts::LN_2;

use crate::error::{domain, Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling-series cutoff; below this the argument is shifted upwards.
const STIRLING_MIN: f64 = 10.0;

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "ln_gamma",
            format!("argument must be positive, got {x}"),
        ));
    }
    if x >= STIRLING_MIN {
        return Ok(stirling(x));
    }
    // Shift into the asymptotic range: ln G(x) = ln G(x + k) - ln(x (x+1) ... (x+k-1)).
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    Ok(stirling(shifted) - prod.ln())
}

fn stirling(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    // B_{2k} / (2k (2k - 1)) for k = 1..8, Horner in 1/x^2.
    let series = r
        * (1.0 / 12.0
            + r2 * (-1.0 / 360.0
                + r2 * (1.0 / 1260.0
                    + r2 * (-1.0 / 1680.0
                        + r2 * (1.0 / 1188.0
                            + r2 * (-691.0 / 360_360.0
                                + r2 * (1.0 / 156.0 + r2 * (-3617.0 / 122_400.0))))))));
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// Euler Beta function `B(a, b) = G(a) G(b) / G(a + b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(domain(
            "beta",
            format!("arguments must be positive, got ({a}, {b})"),
        ));
    }
    Ok(ln_beta(a, b)?.exp())
}

pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

fn check_jacobi_params(func: &'static str, alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -1.0) || !(beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(domain(
            func,
            format!("Jacobi parameters must exceed -1, got alpha={alpha}, beta={beta}"),
        ));
    }
    Ok(())
}

/// Value of `P_n^{(alpha, beta)}(x)` by the three-term recurrence.
fn jacobi_value(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = 0.5 * ((ab + 2.0) * x + (alpha - beta));
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (s - 2.0);
        let a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s;
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Value and first derivative of the Jacobi polynomial `J_n^{alpha,beta}(x)`.
///
/// The derivative uses `d/dx P_n^{(a,b)} = (n + a + b + 1) / 2 * P_{n-1}^{(a+1,b+1)}`,
/// which stays well defined at the endpoints `x = +-1`.
pub fn jacobi_eval(n: usize, alpha: f64, beta: f64, x: f64) -> Result<(f64, f64)> {
    check_jacobi_params("jacobi_eval", alpha, beta)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(
            "jacobi_eval",
            format!("x must lie in [-1, 1], got {x}"),
        ));
    }
    Ok(jacobi_value_and_derivative(n, alpha, beta, x))
}

fn jacobi_value_and_derivative(n: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let value = jacobi_value(n, alpha, beta, x);
    let derivative = if n == 0 {
        0.0
    } else {
        0.5 * (n as f64 + alpha + beta + 1.0) * jacobi_value(n - 1, alpha + 1.0, beta + 1.0, x)
    };
    (value, derivative)
}

/// Gauss-Jacobi rule on `[-1, 1]` for the weight `(1 - x)^alpha (1 + x)^beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussJacobi {
    pub alpha: f64,
    pub beta: f64,
    /// Zeros of `J_n^{alpha,beta}`, ascending.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Diagonal and squared off-diagonal of the orthonormal Jacobi matrix.
fn jacobi_matrix(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let mut diag = Vec::with_capacity(n);
    let mut off_sq = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        diag.push(if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        });
        // off_sq[k] couples rows k-1 and k; off_sq[0] is unused.
        off_sq.push(match k {
            0 => 0.0,
            1 => 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab)),
            _ => {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            }
        });
    }
    (diag, off_sq)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(diag: &[f64], off_sq: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for k in 0..diag.len() {
        d = diag[k] - x - if k == 0 { 0.0 } else { off_sq[k] / d };
        if d == 0.0 {
            d = -f64::EPSILON * (1.0 + x.abs());
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Bracket `[lo, hi]` for the k-th smallest eigenvalue, shrunk to rounding level.
fn bisect_eigenvalue(diag: &[f64], off_sq: &[f64], k: usize) -> (f64, f64) {
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo
            || mid >= hi
            || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-3)
        {
            break;
        }
        if sturm_count(diag, off_sq, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

const NEWTON_MAX_ITER: usize = 100;

/// Gauss-Jacobi nodes and weights with `n_points` nodes on `[-1, 1]`.
pub fn gauss_jacobi(n_points: usize, alpha: f64, beta: f64) -> Result<GaussJacobi> {
    check_jacobi_params("gauss_jacobi", alpha, beta)?;
    if n_points == 0 {
        return Err(Error::Argument(
            "gauss_jacobi needs at least one node".into(),
        ));
    }
    let n = n_points;
    let (diag, off_sq) = jacobi_matrix(n, alpha, beta);

    // G(n+a+1) G(n+b+1) / (G(n+a+b+1) n!) as a running product: differencing
    // large ln_gamma values would cost ~1e-13 relative accuracy at n ~ 200.
    let mut gamma_ratio =
        (ln_gamma(alpha + 2.0)? + ln_gamma(beta + 2.0)? - ln_gamma(alpha + beta + 2.0)?).exp();
    for k in 2..=n {
        let k = k as f64;
        gamma_ratio *= (k + alpha) * (k + beta) / ((k + alpha + beta) * k);
    }
    let ln_scale = (alpha + beta + 1.0) * LN_2 + gamma_ratio.ln();

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        let (lo, hi) = bisect_eigenvalue(&diag, &off_sq, k);
        let mut x = 0.5 * (lo + hi);
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = jacobi_value_and_derivative(n, alpha, beta, x);
            if dp == 0.0 || !dp.is_finite() {
                break;
            }
            let step = p / dp;
            let next = x - step;
            // The bisection bracket is already at rounding width; Newton only
            // polishes, and is not allowed to wander to a neighbouring zero.
            if !(next > lo - 4.0 * f64::EPSILON && next < hi + 4.0 * f64::EPSILON) {
                converged = true;
                break;
            }
            x = next;
            if step.abs() <= 2.0 * f64::EPSILON * (1.0 + x.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NodeComputation {
                n,
                alpha,
                beta,
                detail: format!("Newton polish of node {k} did not settle"),
            });
        }
        let (_, dp) = jacobi_value_and_derivative(n, alpha, beta, x);
        let w = (ln_scale - ((1.0 - x) * (1.0 + x)).ln() - 2.0 * dp.abs().ln()).exp();
        nodes.push(x);
        weights.push(w);
    }
    Ok(GaussJacobi {
        alpha,
        beta,
        nodes,
        weights,
    })
}

/// Gauss rule on `[0, 1]` for the fractional Jacobi weight
/// `lambda (1 - theta^lambda)^alpha theta^((beta + 1) lambda - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub n_points: usize,
    /// Strictly increasing, inside `(0, 1)`.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `sum_k w_k f(theta_k)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Fallible variant of [`QuadratureRule::integrate`].
    pub fn try_integrate<E, F>(&self, mut f: F) -> std::result::Result<f64, E>
    where
        F: FnMut(f64) -> std::result::Result<f64, E>,
    {
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(x)?;
        }
        Ok(acc)
    }

    /// Value of the weight function this rule integrates against.
    pub fn weight_at(&self, theta: f64) -> f64 {
        weight_function(self.alpha, self.beta, self.lambda, theta)
    }
}

/// The fractional Jacobi weight `lambda (1 - theta^lambda)^alpha theta^((beta+1) lambda - 1)`.
pub fn weight_function(alpha: f64, beta: f64, lambda: f64, theta: f64) -> f64 {
    let z = theta.powf(lambda);
    lambda * (1.0 - z).powf(alpha) * theta.powf((beta + 1.0) * lambda - 1.0)
}

pub(crate) fn check_lambda(func: &'static str, lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(domain(
            func,
            format!("lambda must lie in (0, 1], got {lambda}"),
        ));
    }
    Ok(())
}

/// Fractional Jacobi-Gauss rule on `[0, 1]`.
pub fn frac_gauss_jacobi(
    n_points: usize,
    alpha: f64,
    beta: f64,
    lambda: f64,
) -> Result<QuadratureRule> {
    check_lambda("frac_gauss_jacobi", lambda)?;
    let classical = gauss_jacobi(n_points, alpha, beta)?;
    let scale = (-(alpha + beta + 1.0) * LN_2).exp();
    let inv_lambda = 1.0 / lambda;
    let nodes = classical
        .nodes
        .iter()
        .map(|&t| {
            let z = 0.5 * (t + 1.0);
            if lambda == 1.0 {
                z
            } else {
                z.powf(inv_lambda)
            }
        })
        .collect();
    let weights = classical.weights.iter().map(|&w| w * scale).collect();
    Ok(QuadratureRule {
        alpha,
        beta,
        lambda,
        n_points,
        nodes,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    /// Factorial closed form, cancellation-prone; small n only.
    fn jacobi_closed_form(n: usize, a: f64, b: f64, x: f64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let lead = (ln_gamma(n as f64 + a + 1.0).unwrap()
            - ln_gamma(n as f64 + 1.0).unwrap()
            - ln_gamma(n as f64 + a + b + 1.0).unwrap())
        .exp();
        let mut sum = 0.0;
        let mut binom = 1.0;
        for k in 0..=n {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
            }
            let g = (ln_gamma(n as f64 + k as f64 + a + b + 1.0).unwrap()
                - ln_gamma(k as f64 + a + 1.0).unwrap())
            .exp();
            sum += binom * g * ((x - 1.0) / 2.0).powi(k as i32);
        }
        lead * sum
    }

    #[test]
    fn ln_gamma_special_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-13);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-13);
        assert!((ln_gamma(0.5).unwrap() - SQRT_PI.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-13);
        assert!((ln_gamma(7.0).unwrap() - 720f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_reference_table() {
        // Reference values from a 50-digit evaluation.
        let table: [(f64, f64); 10] = [
            (1e-8, 18.420_680_738_180_21),
            (0.1, 2.252_712_651_734_206),
            (0.3, 1.095_797_994_818_075_5),
            (1.5, -0.120_782_237_635_245_22),
            (3.7, 1.428_072_326_665_388),
            (9.99, 12.779_315_214_350_193),
            (10.5, 13.940_625_219_403_764),
            (33.3, 82.603_723_581_654_95),
            (120.25, 454.220_987_383_358_2),
            (200.0, 857.933_669_825_857_4),
        ];
        for (x, want) in table {
            let got = ln_gamma(x).unwrap();
            let tol = 1e-13_f64.max(2.0 * f64::EPSILON * want.abs());
            assert!(
                (got - want).abs() <= tol,
                "ln_gamma({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(matches!(ln_gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(ln_gamma(-2.5), Err(Error::Domain { .. })));
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn beta_identities() {
        assert!((beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((beta(0.5, 0.5).unwrap() / PI - 1.0).abs() < 1e-13);
        assert!((beta(0.5, 1.5).unwrap() / (PI / 2.0) - 1.0).abs() < 1e-13);
        // B(a, b+1) = B(a, b) b / (a + b)
        let (a, b) = (0.37, 2.9);
        let lhs = beta(a, b + 1.0).unwrap();
        let rhs = beta(a, b).unwrap() * b / (a + b);
        assert!((lhs / rhs - 1.0).abs() < 1e-13);
        assert!(beta(0.0, 1.0).is_err());
        assert!(beta(1.0, -1.0).is_err());
    }

    #[test]
    fn jacobi_low_degrees() {
        assert_eq!(jacobi_eval(0, 0.3, -0.2, 0.7).unwrap(), (1.0, 0.0));
        let (v, d) = jacobi_eval(1, -0.5, -0.5, 0.3).unwrap();
        assert!((v - 0.15).abs() < 1e-15);
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jacobi_endpoint_identity() {
        // P_n(1) = G(n + a + 1) / (n! G(a + 1))
        let (n, a, b) = (3usize, 0.2, -0.4);
        let want = (ln_gamma(n as f64 + a + 1.0).unwrap()
            - ln_gamma(n as f64 + 1.0).unwrap()
            - ln_gamma(a + 1.0).unwrap())
        .exp();
        let (v, _) = jacobi_eval(n, a, b, 1.0).unwrap();
        assert!((v - want).abs() < 1e-14, "{v} vs {want}");
        // G(4.2) / (3! G(1.2)) = 3.2 * 2.2 * 1.2 / 6
        assert!((v - 3.2 * 2.2 * 1.2 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_matches_closed_form_small_n() {
        for n in 0..=8 {
            for &(a, b) in &[(-0.5, -0.5), (0.0, 0.0), (0.7, -0.3), (-0.9, 2.5)] {
                for i in 0..=20 {
                    let x = -1.0 + i as f64 / 10.0;
                    let (v, _) = jacobi_eval(n, a, b, x).unwrap();
                    let want = jacobi_closed_form(n, a, b, x);
                    // The alternating closed form itself loses ~1e-11 near x = -1.
                    assert!(
                        (v - want).abs() <= 1e-9 * (1.0 + want.abs()),
                        "n={n} a={a} b={b} x={x}: {v} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn jacobi_derivative_matches_central_difference() {
        let h = 1e-6;
        for n in 1..=12 {
            for &(a, b) in &[(-0.5, -0.5), (0.3, 1.7), (-0.2, 0.0)] {
                for i in 1..20 {
                    let x = -0.95 + 0.1 * i as f64 - 0.05;
                    let (_, d) = jacobi_eval(n, a, b, x).unwrap();
                    let fd =
                        (jacobi_value(n, a, b, x + h) - jacobi_value(n, a, b, x - h)) / (2.0 * h);
                    assert!(
                        (d - fd).abs() < 1e-6 * (1.0 + d.abs()),
                        "n={n} x={x}: {d} vs {fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn jacobi_rejects_bad_params() {
        assert!(jacobi_eval(2, -1.0, 0.0, 0.0).is_err());
        assert!(jacobi_eval(2, 0.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn gauss_legendre_small() {
        let r = gauss_jacobi(1, 0.0, 0.0).unwrap();
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-14);

        let r = gauss_jacobi(2, 0.0, 0.0).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-14 && (r.weights[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_jacobi_one_point() {
        for &(a, b) in &[(-0.5, 0.25), (1.5, -0.75), (0.0, 3.0)] {
            let r = gauss_jacobi(1, a, b).unwrap();
            let node = (b - a) / (a + b + 2.0);
            let w = 2f64.powf(a + b + 1.0) * beta(a + 1.0, b + 1.0).unwrap();
            assert!((r.nodes[0] - node).abs() < 1e-15);
            assert!((r.weights[0] / w - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn gauss_jacobi_symmetric_nodes() {
        for n in 1..=40 {
            for &a in &[-0.5, 0.0, 1.3] {
                let r = gauss_jacobi(n, a, a).unwrap();
                for i in 0..n {
                    assert!((r.nodes[i] + r.nodes[n - 1 - i]).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn gauss_jacobi_nodes_interlace() {
        for &(a, b) in &[(-0.5, -0.5), (-0.5, 1.0), (0.0, 2.0), (-1.0 / 3.0, 3.0)] {
            let mut prev = gauss_jacobi(1, a, b).unwrap();
            for n in 2..=41 {
                let cur = gauss_jacobi(n, a, b).unwrap();
                for i in 0..n - 1 {
                    assert!(cur.nodes[i] < prev.nodes[i] && prev.nodes[i] < cur.nodes[i + 1]);
                }
                prev = cur;
            }
        }
    }

    #[test]
    fn gauss_jacobi_polynomial_exactness() {
        // Moments of (1-x)^a (1+x)^b against (1+x)^k: 2^(a+b+k+1) B(a+1, b+k+1).
        for &(a, b) in &[(-0.5, -0.5), (0.6, -0.3), (-0.9, 0.9)] {
            for n in [1usize, 3, 8, 17, 30] {
                let r = gauss_jacobi(n, a, b).unwrap();
                for k in 0..2 * n {
                    let q = r.integrate(|x| (1.0 + x).powi(k as i32));
                    let exact = (((a + b + k as f64 + 1.0) * LN_2)
                        + ln_beta(a + 1.0, b + k as f64 + 1.0).unwrap())
                    .exp();
                    assert!((q / exact - 1.0).abs() < 1e-12, "a={a} b={b} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn frac_rule_basic() {
        let r = frac_gauss_jacobi(1, 0.0, 0.0, 1.0).unwrap();
        assert!((r.nodes[0] - 0.5).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-14);
        for n in 1..=25 {
            let r = frac_gauss_jacobi(n, 0.0, 0.0, 1.0).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn frac_rule_beta_moment() {
        // z = theta^lambda turns the moment into B(alpha + 1, beta + k + 1).
        let r = frac_gauss_jacobi(8, -0.5, 3.0, 0.5).unwrap();
        let q = r.integrate(|t| t.powf(2.0 * 0.5));
        let want = beta(0.5, 6.0).unwrap();
        assert!((q / want - 1.0).abs() < 1e-12, "{q} vs {want}");
    }

    #[test]
    fn frac_rule_nodes_inside_unit_interval() {
        let r = frac_gauss_jacobi(40, -0.5, 3.0, 1.0 / 3.0).unwrap();
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!(frac_gauss_jacobi(4, 0.0, 0.0, 0.0).is_err());
        assert!(frac_gauss_jacobi(4, 0.0, 0.0, 1.5).is_err());
        assert!(frac_gauss_jacobi(0, 0.0, 0.0, 1.0).is_err());
    }
}
