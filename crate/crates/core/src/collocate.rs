//! Fractional Jacobi spectral collocation on the unit interval.
//!
//! Unknowns are nodal values of `phi' (U*)`, `phi (U)` and `phi(eps theta) (V)`.
//! The memory integrals at each collocation point `theta_i` are mapped to
//! `xi in [0, 1]` with `eta_i(xi) = theta_i xi^(1/lambda)`, which turns the
//! weak singularity into a classical Jacobi weight in `xi`.

use crate::error::{domain, Error, Result};
use crate::fracbasis::{build_basis, FractionalBasis};
use crate::linalg::{lu_solve, Matrix};
use crate::problem::TransformedProblem;
use crate::specfun::{check_lambda, frac_gauss_jacobi, QuadratureRule};

/// `((1 - xi^(1/lambda)) / (1 - xi))^(-mu)` for `xi in (0, 1)`; exactly 1 at `lambda = 1`.
pub fn singular_ratio(xi: f64, lambda: f64, mu: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(domain(
            "singular_ratio",
            format!("xi must lie in (0, 1), got {xi}"),
        ));
    }
    if lambda == 1.0 {
        return Ok(1.0);
    }
    let a = (-xi.powf(1.0 / lambda)).ln_1p();
    let b = (-xi).ln_1p();
    Ok((-mu * (a - b)).exp())
}

/// The smooth kernel `(1/lambda) ratio(xi) kbar(theta, theta xi^(1/lambda))`.
pub fn transform_kernel<K>(
    kbar: K,
    lambda: f64,
    mu: f64,
) -> Result<impl Fn(f64, f64) -> Result<f64>>
where
    K: Fn(f64, f64) -> Result<f64>,
{
    check_lambda("transform_kernel", lambda)?;
    if !(0.0..1.0).contains(&mu) {
        return Err(domain(
            "transform_kernel",
            format!("mu must lie in [0, 1), got {mu}"),
        ));
    }
    Ok(move |theta: f64, xi: f64| {
        let ratio = singular_ratio(xi, lambda, mu)?;
        Ok(ratio / lambda * kbar(theta, eta(theta, xi, lambda))?)
    })
}

fn eta(theta: f64, xi: f64, lambda: f64) -> f64 {
    if lambda == 1.0 {
        theta * xi
    } else {
        theta * xi.powf(1.0 / lambda)
    }
}

/// All matrices of the discrete scheme for one `(N, lambda)`.
#[derive(Debug, Clone)]
pub struct CollocationSystem {
    pub n: usize,
    pub lambda: f64,
    pub alpha_c: f64,
    pub beta_c: f64,
    pub eps: f64,
    pub t_end: f64,
    pub basis: FractionalBasis,
    /// Diagonals of `P` and `Q`.
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub g: Vec<f64>,
    pub u0: Vec<f64>,
    pub c: Matrix,
    pub d: Matrix,
    pub e: Matrix,
    pub h: Matrix,
    /// Rule in `xi` for the weight `(1-xi)^-mu xi^((mu+gamma)/lambda - 1)`.
    pub kernel_rule: QuadratureRule,
    /// Rule in `xi` for the weight `xi^(1/lambda - 1)`.
    pub anti_rule: QuadratureRule,
}

impl CollocationSystem {
    pub fn nodes(&self) -> &[f64] {
        &self.basis.nodes
    }
}

/// Assembles the system with the default `N + 1` quadrature points.
pub fn assemble(
    tp: &TransformedProblem,
    n: usize,
    lambda: f64,
    alpha_c: f64,
    beta_c: f64,
) -> Result<CollocationSystem> {
    assemble_with_points(tp, n, lambda, alpha_c, beta_c, n + 1)
}

/// As [`assemble`] but with `quad_points` nodes in the kernel and antiderivative rules.
pub fn assemble_with_points(
    tp: &TransformedProblem,
    n: usize,
    lambda: f64,
    alpha_c: f64,
    beta_c: f64,
    quad_points: usize,
) -> Result<CollocationSystem> {
    check_lambda("assemble", lambda)?;
    if quad_points == 0 {
        return Err(Error::Argument(
            "assembly needs at least one quadrature point".into(),
        ));
    }
    let (mu, gamma, eps) = (tp.mu(), tp.gamma(), tp.eps());
    let basis = build_basis(n, alpha_c, beta_c, lambda)?;
    let kernel_rule = frac_gauss_jacobi(quad_points, -mu, (mu + gamma) / lambda - 1.0, 1.0)?;
    let anti_rule = frac_gauss_jacobi(quad_points, 0.0, 1.0 / lambda - 1.0, 1.0)?;
    let k1 = transform_kernel(|th, et| tp.k1_bar(th, et), lambda, mu)?;
    let k2 = transform_kernel(|th, et| tp.k2_bar(th, eps * et), lambda, mu)?;

    let size = n + 1;
    let mut c = Matrix::zeros(size, size);
    let mut d = Matrix::zeros(size, size);
    let mut e = Matrix::zeros(size, size);
    let mut h = Matrix::zeros(size, size);
    let mut p = Vec::with_capacity(size);
    let mut q = Vec::with_capacity(size);
    let mut g = Vec::with_capacity(size);
    let mut buf = vec![0.0; size];

    for (i, &th) in basis.nodes.iter().enumerate() {
        p.push(tp.p1(th)?);
        q.push(tp.q1(th)?);
        g.push(tp.g1(th)?);
        for (&xi, &w) in kernel_rule.nodes.iter().zip(&kernel_rule.weights) {
            let et = eta(th, xi, lambda);
            let w1 = w * k1(th, xi)?;
            basis.values_into(et, &mut buf);
            for (cij, f) in c.row_mut(i).iter_mut().zip(&buf) {
                *cij += w1 * f;
            }
            let w2 = w * k2(th, xi)?;
            basis.values_into(eps * et, &mut buf);
            for (dij, f) in d.row_mut(i).iter_mut().zip(&buf) {
                *dij += w2 * f;
            }
        }
        let scale = th / lambda;
        for (&xi, &w) in anti_rule.nodes.iter().zip(&anti_rule.weights) {
            let et = eta(th, xi, lambda);
            basis.values_into(et, &mut buf);
            for (eij, f) in e.row_mut(i).iter_mut().zip(&buf) {
                *eij += scale * w * f;
            }
            basis.values_into(eps * et, &mut buf);
            for (hij, f) in h.row_mut(i).iter_mut().zip(&buf) {
                *hij += eps * scale * w * f;
            }
        }
    }

    Ok(CollocationSystem {
        n,
        lambda,
        alpha_c,
        beta_c,
        eps,
        t_end: tp.spec.t_end,
        basis,
        p,
        q,
        g,
        u0: vec![tp.y0(); size],
        c,
        d,
        e,
        h,
        kernel_rule,
        anti_rule,
    })
}

/// Nodal solution of a collocation system.
#[derive(Debug, Clone)]
pub struct SolutionApprox {
    pub system: CollocationSystem,
    /// Approximations of `phi'(theta_i)`.
    pub u_star: Vec<f64>,
    /// Approximations of `phi(theta_i)`.
    pub u: Vec<f64>,
    /// Approximations of `phi(eps theta_i)`.
    pub v: Vec<f64>,
}

fn axpy_diag(m: &mut Matrix, diag: &[f64], rhs: &Matrix, sign: f64) {
    for (i, &di) in diag.iter().enumerate() {
        let row = rhs.row(i).to_vec();
        for (o, r) in m.row_mut(i).iter_mut().zip(row) {
            *o += sign * di * r;
        }
    }
}

fn add_scaled(m: &mut Matrix, other: &Matrix, sign: f64) {
    for i in 0..m.rows() {
        let row = other.row(i).to_vec();
        for (o, r) in m.row_mut(i).iter_mut().zip(row) {
            *o += sign * r;
        }
    }
}

fn singular(sys: &CollocationSystem, pv: crate::linalg::SingularPivot) -> Error {
    Error::Singular {
        n: sys.n,
        lambda: sys.lambda,
        pivot: pv.pivot,
        threshold: pv.threshold,
    }
}

impl CollocationSystem {
    /// The reduced operator `I - (P + C + D) E - Q H` and its right-hand side.
    pub fn reduced(&self) -> (Matrix, Vec<f64>) {
        let size = self.n + 1;
        let mut pcd = self.c.clone();
        add_scaled(&mut pcd, &self.d, 1.0);
        for i in 0..size {
            pcd[(i, i)] += self.p[i];
        }
        let mut a = Matrix::identity(size);
        add_scaled(&mut a, &pcd.mul(&self.e), -1.0);
        axpy_diag(&mut a, &self.q, &self.h, -1.0);
        let mut rhs = pcd.mul_vec(&self.u0);
        for (i, r) in rhs.iter_mut().enumerate() {
            *r += self.q[i] * self.u0[i] + self.g[i];
        }
        (a, rhs)
    }
}

/// Solves for `U*` and recovers `U = U0 + E U*`, `V = U0 + H U*`.
pub fn solve(system: CollocationSystem) -> Result<SolutionApprox> {
    let (a, rhs) = system.reduced();
    let u_star = lu_solve(&a, &rhs).map_err(|pv| singular(&system, pv))?;
    let add_u0 =
        |w: Vec<f64>| -> Vec<f64> { w.into_iter().zip(&system.u0).map(|(x, y)| x + y).collect() };
    let u = add_u0(system.e.mul_vec(&u_star));
    let v = add_u0(system.h.mul_vec(&u_star));
    Ok(SolutionApprox {
        system,
        u_star,
        u,
        v,
    })
}

/// Solves the unreduced `3(N+1)` block system in `(U*, U, V)`; for cross-checking.
pub fn solve_block(system: CollocationSystem) -> Result<SolutionApprox> {
    let m = system.n + 1;
    let mut a = Matrix::zeros(3 * m, 3 * m);
    let mut rhs = vec![0.0; 3 * m];
    for i in 0..m {
        // U*_i - (P + C + D) U - Q V = G
        a[(i, i)] = 1.0;
        for j in 0..m {
            a[(i, m + j)] = -(system.c[(i, j)] + system.d[(i, j)]);
        }
        a[(i, m + i)] -= system.p[i];
        a[(i, 2 * m + i)] = -system.q[i];
        rhs[i] = system.g[i];
        // U - E U* = U0,  V - H U* = U0
        a[(m + i, m + i)] = 1.0;
        a[(2 * m + i, 2 * m + i)] = 1.0;
        for j in 0..m {
            a[(m + i, j)] = -system.e[(i, j)];
            a[(2 * m + i, j)] = -system.h[(i, j)];
        }
        rhs[m + i] = system.u0[i];
        rhs[2 * m + i] = system.u0[i];
    }
    let x = lu_solve(&a, &rhs).map_err(|pv| singular(&system, pv))?;
    Ok(SolutionApprox {
        u_star: x[..m].to_vec(),
        u: x[m..2 * m].to_vec(),
        v: x[2 * m..].to_vec(),
        system,
    })
}

impl SolutionApprox {
    /// `phi_N(theta) = sum_j u_j F_j(theta)` for `theta in [0, 1]`.
    pub fn evaluate(&self, theta: f64) -> f64 {
        self.system.basis.interpolate_unchecked(&self.u, theta)
    }

    /// `phi*_N(theta) = sum_j u*_j F_j(theta)`, the separate approximation of `phi'`.
    pub fn evaluate_derivative(&self, theta: f64) -> f64 {
        self.system.basis.interpolate_unchecked(&self.u_star, theta)
    }

    /// `y_N(t) = phi_N(t / T)` for `t in [0, T]`.
    pub fn to_physical(&self, t: f64) -> Result<f64> {
        let big_t = self.system.t_end;
        if !(0.0..=big_t).contains(&t) {
            return Err(domain(
                "to_physical",
                format!("t must lie in [0, {big_t}], got {t}"),
            ));
        }
        Ok(self.evaluate((t / big_t).min(1.0)))
    }

    pub fn n(&self) -> usize {
        self.system.n
    }

    pub fn lambda(&self) -> f64 {
        self.system.lambda
    }
}
