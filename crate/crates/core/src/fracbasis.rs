//! Generalized Lagrange basis on fractional Jacobi-Gauss nodes.
//!
//! The cardinal functions `F_j(theta)` are polynomials of degree `N` in
//! `z = theta^lambda`. They are evaluated with the second barycentric formula
//! in the `z` variable, which is `O(N)` per point and stable on `[0, 1]`.

use crate::error::{Error, Result};
use crate::specfun::{check_lambda, frac_gauss_jacobi};

/// Relative distance in `z` below which a point is treated as a node.
const NODE_HIT_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalBasis {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Collocation points `theta_j`, zeros of `J_{N+1}^{alpha,beta,lambda}`.
    pub nodes: Vec<f64>,
    /// `theta_j^lambda`.
    pub z_nodes: Vec<f64>,
    /// Barycentric weights in the `z` variable, normalised to max modulus 1.
    pub bary_weights: Vec<f64>,
}

/// Basis of degree `n` (that is, `n + 1` nodes).
pub fn build_basis(n: usize, alpha: f64, beta: f64, lambda: f64) -> Result<FractionalBasis> {
    check_lambda("build_basis", lambda)?;
    let rule = frac_gauss_jacobi(n + 1, alpha, beta, lambda)?;
    let nodes = rule.nodes;
    let z_nodes: Vec<f64> = nodes.iter().map(|&t| pow_lambda(t, lambda)).collect();
    let bary_weights = barycentric_weights(&z_nodes);
    Ok(FractionalBasis {
        lambda,
        alpha,
        beta,
        nodes,
        z_nodes,
        bary_weights,
    })
}

#[inline]
fn pow_lambda(theta: f64, lambda: f64) -> f64 {
    if lambda == 1.0 {
        theta
    } else {
        theta.powf(lambda)
    }
}

fn barycentric_weights(z: &[f64]) -> Vec<f64> {
    // Factors are scaled by 4 (inverse capacity of a unit interval) so that
    // the products neither underflow nor overflow for moderate N.
    let mut w: Vec<f64> = (0..z.len())
        .map(|j| {
            let prod: f64 = z
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &zi)| 4.0 * (z[j] - zi))
                .product();
            1.0 / prod
        })
        .collect();
    let max = w.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    if max > 0.0 {
        w.iter_mut().for_each(|v| *v /= max);
    }
    w
}

impl FractionalBasis {
    /// Polynomial degree `N`.
    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn node_hit(&self, z: f64) -> Option<usize> {
        self.z_nodes
            .iter()
            .position(|&zj| (z - zj).abs() <= NODE_HIT_TOL * zj.abs().max(1.0))
    }

    /// All basis values `F_0(theta), ..., F_N(theta)` written into `out`.
    pub fn values_into(&self, theta: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len());
        let z = pow_lambda(theta, self.lambda);
        if let Some(k) = self.node_hit(z) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[k] = 1.0;
            return;
        }
        let mut denom = 0.0;
        for ((o, &w), &zj) in out.iter_mut().zip(&self.bary_weights).zip(&self.z_nodes) {
            *o = w / (z - zj);
            denom += *o;
        }
        out.iter_mut().for_each(|v| *v /= denom);
    }

    /// All basis values at `theta`.
    pub fn values(&self, theta: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.values_into(theta, &mut out);
        out
    }

    /// `F_{j,lambda}(theta)`.
    pub fn eval(&self, j: usize, theta: f64) -> Result<f64> {
        if j >= self.len() {
            return Err(Error::Argument(format!(
                "basis index {j} out of range for degree {}",
                self.degree()
            )));
        }
        Ok(self.values(theta)[j])
    }

    /// `sum_j values_j F_{j,lambda}(theta)`.
    pub fn interpolate(&self, values: &[f64], theta: f64) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::Argument(format!(
                "expected {} nodal values, got {}",
                self.len(),
                values.len()
            )));
        }
        Ok(self.interpolate_unchecked(values, theta))
    }

    pub(crate) fn interpolate_unchecked(&self, values: &[f64], theta: f64) -> f64 {
        let z = pow_lambda(theta, self.lambda);
        if let Some(k) = self.node_hit(z) {
            return values[k];
        }
        let (mut num, mut den) = (0.0, 0.0);
        for ((&w, &zj), &v) in self.bary_weights.iter().zip(&self.z_nodes).zip(values) {
            let c = w / (z - zj);
            num += c * v;
            den += c;
        }
        num / den
    }

    /// Grid estimate of `max_theta sum_j |F_j(theta)|` on `grid_size` uniform points.
    pub fn lebesgue_constant(&self, grid_size: usize) -> Result<f64> {
        let min = 10 * self.len();
        if grid_size < min {
            return Err(Error::Argument(format!(
                "lebesgue grid needs at least {min} points, got {grid_size}"
            )));
        }
        let mut buf = vec![0.0; self.len()];
        let mut best = 0.0_f64;
        for i in 0..grid_size {
            let theta = i as f64 / (grid_size - 1) as f64;
            self.values_into(theta, &mut buf);
            best = best.max(buf.iter().map(|v| v.abs()).sum());
        }
        Ok(best)
    }
}

/// Free-function form of [`FractionalBasis::eval`].
pub fn eval_basis(basis: &FractionalBasis, j: usize, theta: f64) -> Result<f64> {
    basis.eval(j, theta)
}

/// Free-function form of [`FractionalBasis::interpolate`].
pub fn interpolate(basis: &FractionalBasis, values: &[f64], theta: f64) -> Result<f64> {
    basis.interpolate(values, theta)
}

pub fn lebesgue_constant(basis: &FractionalBasis, grid_size: usize) -> Result<f64> {
    basis.lebesgue_constant(grid_size)
}

/// Default number of points of the rule behind [`weighted_l2_norm`].
pub const DEFAULT_NORM_POINTS: usize = 200;

/// `||f||_{0, omega^{alpha,beta,lambda}}` evaluated with an `m_points` fractional Gauss rule.
pub fn weighted_l2_norm<F: FnMut(f64) -> f64>(
    mut f: F,
    alpha: f64,
    beta: f64,
    lambda: f64,
    m_points: usize,
) -> Result<f64> {
    if m_points == 0 {
        return Err(Error::Argument(
            "norm quadrature needs at least one point".into(),
        ));
    }
    let rule = frac_gauss_jacobi(m_points, alpha, beta, lambda)?;
    Ok(rule
        .integrate(|t| {
            let v = f(t);
            v * v
        })
        .sqrt())
}

/// Number of uniform points in [`default_grid`].
pub const DEFAULT_GRID_POINTS: usize = 1000;

/// 1000 uniform points on `[0, 1]` merged with the given nodes, ascending.
///
/// The sup norm over this grid approximates the true sup norm from below.
pub fn default_grid(nodes: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..DEFAULT_GRID_POINTS)
        .map(|i| i as f64 / (DEFAULT_GRID_POINTS - 1) as f64)
        .chain(nodes.iter().copied())
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// `max |f|` over `grid`.
pub fn sup_norm<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::Argument("sup norm needs a nonempty grid".into()));
    }
    Ok(grid.iter().fold(0.0_f64, |m, &t| m.max(f(t).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn degree_zero_basis_is_constant() {
        let b = build_basis(0, 0.3, -0.2, 0.5).unwrap();
        assert_eq!(b.len(), 1);
        for t in [0.0, 0.1, 0.77, 1.0] {
            assert_eq!(b.eval(0, t).unwrap(), 1.0);
        }
        assert_eq!(b.lebesgue_constant(10).unwrap(), 1.0);
    }

    #[test]
    fn lambda_one_z_nodes_equal_nodes() {
        let b = build_basis(4, -0.5, -0.5, 1.0).unwrap();
        assert_eq!(b.nodes, b.z_nodes);
    }

    #[test]
    fn half_lambda_squares_nodes() {
        let b1 = build_basis(4, -0.5, -0.5, 1.0).unwrap();
        let bh = build_basis(4, -0.5, -0.5, 0.5).unwrap();
        for (a, b) in b1.nodes.iter().zip(&bh.nodes) {
            assert!((a * a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn reproduces_theta_to_lambda() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for &lambda in &[1.0, 0.5, 1.0 / 3.0] {
            let b = build_basis(3, -0.5, -0.5, lambda).unwrap();
            let vals: Vec<f64> = b.nodes.iter().map(|t| t.powf(lambda)).collect();
            for _ in 0..20 {
                let t: f64 = rng.gen();
                let got = b.interpolate(&vals, t).unwrap();
                assert!((got - t.powf(lambda)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reproduces_quadratic_in_z() {
        let lambda = 0.4;
        let p = |t: f64| {
            let z = t.powf(lambda);
            3.0 - 2.0 * z + z * z
        };
        let b = build_basis(2, -0.5, -0.5, lambda).unwrap();
        let vals: Vec<f64> = b.nodes.iter().map(|&t| p(t)).collect();
        for i in 0..=50 {
            let t = i as f64 / 50.0;
            assert!((b.interpolate(&vals, t).unwrap() - p(t)).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_values_interpolate_exactly() {
        let b = build_basis(9, 0.2, -0.6, 0.5).unwrap();
        let vals = vec![2.5; b.len()];
        for i in 0..=40 {
            let t = i as f64 / 40.0;
            assert!((b.interpolate(&vals, t).unwrap() - 2.5).abs() < 1e-13);
        }
    }

    #[test]
    fn exponential_is_resolved_spectrally() {
        let b = build_basis(16, -0.5, -0.5, 1.0).unwrap();
        let vals: Vec<f64> = b.nodes.iter().map(|t| t.exp()).collect();
        let grid: Vec<f64> = (0..=4000).map(|i| i as f64 / 4000.0).collect();
        let err = sup_norm(|t| b.interpolate(&vals, t).unwrap() - t.exp(), &grid).unwrap();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn interpolate_length_mismatch() {
        let b = build_basis(3, -0.5, -0.5, 1.0).unwrap();
        assert!(matches!(
            b.interpolate(&[1.0, 2.0], 0.3),
            Err(Error::Argument(_))
        ));
        assert!(b.eval(4, 0.3).is_err());
    }

    #[test]
    fn lebesgue_constant_grows_faster_for_positive_parameters() {
        let cheb = build_basis(32, -0.5, -0.5, 1.0).unwrap();
        let other = build_basis(32, 0.5, 0.5, 1.0).unwrap();
        let lc = cheb.lebesgue_constant(2000).unwrap();
        let lo = other.lebesgue_constant(2000).unwrap();
        assert!(lo > lc, "{lo} <= {lc}");
        assert!(cheb.lebesgue_constant(100).is_err());
    }

    #[test]
    fn lebesgue_over_log_n_is_bounded() {
        let mut ratios = Vec::new();
        for n in [4usize, 8, 16, 32, 64] {
            let b = build_basis(n, -0.5, -0.5, 1.0).unwrap();
            let l = b.lebesgue_constant(20 * (n + 1)).unwrap();
            ratios.push(l / (n as f64).ln());
        }
        assert!(ratios.iter().all(|&r| r <= 3.0), "{ratios:?}");
    }

    #[test]
    fn weighted_norms() {
        assert_eq!(
            weighted_l2_norm(|_| 0.0, -0.5, -0.5, 1.0, 200).unwrap(),
            0.0
        );
        let n = weighted_l2_norm(|_| 1.0, -0.5, -0.5, 1.0, 200).unwrap();
        assert!((n - PI.sqrt()).abs() < 1e-13, "{}", n - PI.sqrt());
        let n = weighted_l2_norm(|t| t, 0.0, 0.0, 1.0, 200).unwrap();
        assert!((n - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!(weighted_l2_norm(|t| t, 0.0, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn weighted_norm_saturates_on_polynomials() {
        let f = |t: f64| 1.0 - 3.0 * t + 0.5 * t.powi(5);
        let a = weighted_l2_norm(f, -0.5, -0.5, 1.0, 50).unwrap();
        let b = weighted_l2_norm(f, -0.5, -0.5, 1.0, 100).unwrap();
        assert!((a / b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sup_norms() {
        let grid = default_grid(&[]);
        assert_eq!(sup_norm(|_| 0.0, &grid).unwrap(), 0.0);
        assert!((sup_norm(|t| t * (1.0 - t), &grid).unwrap() - 0.25).abs() < 1e-6);
        let s = sup_norm(|t| (10.0 * t).sin(), &grid).unwrap();
        assert!((0.999..=1.0).contains(&s));
        assert!(sup_norm(|t| t, &[]).is_err());
    }

    #[test]
    fn default_grid_contains_nodes() {
        let b = build_basis(5, -0.5, -0.5, 0.5).unwrap();
        let g = default_grid(&b.nodes);
        assert_eq!(g.len(), DEFAULT_GRID_POINTS + 6);
        assert!(b.nodes.iter().all(|n| g.contains(n)));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #[test]
        fn kronecker_and_partition_of_unity(
            n in 0usize..=32,
            li in 0usize..3,
            theta in 0.0f64..=1.0,
        ) {
            let lambda = [1.0, 0.5, 1.0 / 3.0][li];
            let b = build_basis(n, -0.5, -0.5, lambda).unwrap();
            for (i, &ti) in b.nodes.iter().enumerate() {
                let v = b.values(ti);
                for (j, &f) in v.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((f - want).abs() <= 1e-12);
                }
            }
            let s: f64 = b.values(theta).iter().sum();
            prop_assert!((s - 1.0).abs() <= 1e-10);
        }

        #[test]
        fn reproduces_lambda_polynomials(
            n in 1usize..=32,
            li in 0usize..3,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let lambda = [1.0, 0.5, 1.0 / 3.0][li];
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let coeffs: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            let p = |t: f64| {
                let z = t.powf(lambda);
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
            };
            let b = build_basis(n, -0.5, -0.5, lambda).unwrap();
            let vals: Vec<f64> = b.nodes.iter().map(|&t| p(t)).collect();
            for i in 0..=200 {
                let t = i as f64 / 200.0;
                let err = (b.interpolate(&vals, t).unwrap() - p(t)).abs();
                prop_assert!(err <= 1e-11 * scale, "t={} err={}", t, err);
            }
        }
    }
}
