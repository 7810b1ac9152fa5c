//! Numerical differentiation and integration primitives: Gauss–Legendre
//! rules, Chebyshev interpolation/differentiation, and Cauchy contour
//! derivatives on circles.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A positive-weight quadrature rule on a bounded interval.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub a: f64,
    pub b: f64,
    /// Strictly increasing nodes in (a, b).
    pub nodes: Vec<f64>,
    /// Positive weights summing to b - a.
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Apply the rule to a function.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// Legendre polynomial value and derivative at x via the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// n-point Gauss–Legendre rule mapped to (a, b).
///
/// Nodes are found by Newton iteration on P_n from the asymptotic initial
/// guess cos(pi (i - 1/4)/(n + 1/2)).
pub fn gauss_legendre(n: usize, interval: (f64, f64)) -> Result<QuadratureRule> {
    let (a, b) = interval;
    if n == 0 {
        return Err(Error::invalid("gauss_legendre: n must be >= 1"));
    }
    if !(a < b) {
        return Err(Error::invalid(format!(
            "gauss_legendre: need a < b, got ({a}, {b})"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        // Newton; converges in a handful of steps from the asymptotic guess.
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th root counted from +1 downwards; store ascending.
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, dp) = legendre_pair(n, 0.0);
        weights[n / 2] = 2.0 / (dp * dp);
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    Ok(QuadratureRule {
        a,
        b,
        nodes,
        weights,
    })
}

/// Chebyshev interpolant on a mapped interval, coefficients in the basis
/// T_k(t) with t the affine image of x in [-1, 1].
#[derive(Debug, Clone)]
pub struct ChebyshevInterpolant {
    pub a: f64,
    pub b: f64,
    /// c[0] + sum_{k>=1} c[k] T_k.
    pub coefficients: Vec<f64>,
}

/// Chebyshev extrema nodes of degree m-1 on (a, b), in decreasing order
/// (x_0 = b down to x_{m-1} = a).
pub fn chebyshev_nodes(m: usize, a: f64, b: f64) -> Vec<f64> {
    let n = (m - 1) as f64;
    (0..m)
        .map(|j| 0.5 * (a + b) + 0.5 * (b - a) * (PI * j as f64 / n).cos())
        .collect()
}

impl ChebyshevInterpolant {
    /// Interpolant through values sampled at `chebyshev_nodes(m, a, b)`.
    pub fn from_values(a: f64, b: f64, values: &[f64]) -> Result<Self> {
        let m = values.len();
        if m < 2 {
            return Err(Error::invalid("chebyshev fit needs at least 2 points"));
        }
        for (j, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::EvaluationFailure {
                    location: format!("chebyshev node {} of {}", j, m),
                });
            }
        }
        let n = m - 1;
        let nf = n as f64;
        let mut coefficients = vec![0.0; m];
        // DCT-I; the O(m^2) sum is fine at the degrees used here.
        for (k, c) in coefficients.iter_mut().enumerate() {
            let mut acc = 0.5 * (values[0] + if k % 2 == 0 { values[n] } else { -values[n] });
            for (j, v) in values.iter().enumerate().take(n).skip(1) {
                acc += v * (PI * (k * j) as f64 / nf).cos();
            }
            *c = 2.0 * acc / nf;
        }
        coefficients[0] *= 0.5;
        coefficients[n] *= 0.5;
        Ok(Self {
            a,
            b,
            coefficients,
        })
    }

    /// Fit f at m Chebyshev points of (a, b).
    pub fn fit(f: impl Fn(f64) -> f64, domain: (f64, f64), m: usize) -> Result<Self> {
        let (a, b) = domain;
        if m < 2 {
            return Err(Error::invalid("chebyshev_fit: m must be >= 2"));
        }
        let values: Vec<f64> = chebyshev_nodes(m, a, b).iter().map(|&x| f(x)).collect();
        Self::from_values(a, b, &values)
    }

    /// Fit with the degree doubled from 16 until the trailing-coefficient
    /// tail drops below `tail_tol` of the largest coefficient.
    pub fn fit_adaptive(f: impl Fn(f64) -> f64, domain: (f64, f64), tail_tol: f64) -> Result<Self> {
        let mut m = 17;
        loop {
            let p = Self::fit(&f, domain, m)?;
            if p.tail_converged(tail_tol) {
                return Ok(p);
            }
            m = 2 * (m - 1) + 1;
            if m > 4097 {
                return Ok(p);
            }
        }
    }

    /// True when the last few coefficients are below `tol` relative to the
    /// largest one.
    pub fn tail_converged(&self, tol: f64) -> bool {
        let max = self
            .coefficients
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.abs()));
        if max == 0.0 {
            return true;
        }
        let m = self.coefficients.len();
        self.coefficients[m.saturating_sub(3)..]
            .iter()
            .all(|c| c.abs() <= tol * max)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - (self.a + self.b)) / (self.b - self.a);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coefficients.iter().skip(1).rev() {
            let tmp = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = tmp;
        }
        self.coefficients[0] + t * b1 - b2
    }

    /// Interpolant of the order-th derivative via the coefficient recurrence.
    pub fn derivative(&self, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("derivative order must be >= 1"));
        }
        if order >= self.coefficients.len() {
            return Err(Error::invalid(format!(
                "derivative order {} >= interpolant degree {}",
                order,
                self.degree().max(1)
            )));
        }
        let scale = 2.0 / (self.b - self.a);
        let mut c = self.coefficients.clone();
        for _ in 0..order {
            let n = c.len() - 1;
            // d_{k-1} = d_{k+1} + 2 k c_k, downward; d_0 halved at the end.
            let mut d = vec![0.0; n.max(1) + 1];
            for k in (1..=n).rev() {
                let ahead = if k + 1 < d.len() { d[k + 1] } else { 0.0 };
                d[k - 1] = ahead + 2.0 * k as f64 * c[k];
            }
            d[0] *= 0.5;
            d.truncate(n.max(1));
            for v in d.iter_mut() {
                *v *= scale;
            }
            c = d;
        }
        Ok(Self {
            a: self.a,
            b: self.b,
            coefficients: c,
        })
    }
}

/// Circle contour for Cauchy derivatives.
#[derive(Debug, Clone, Copy)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    pub node_count: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64, node_count: usize) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::invalid("contour radius must be positive"));
        }
        if node_count < 8 || node_count % 2 != 0 {
            return Err(Error::invalid("contour node_count must be even and >= 8"));
        }
        Ok(Self {
            center,
            radius,
            node_count,
        })
    }
}

/// k!/(2 pi i) times the contour integral of F(z)/(z-c)^{k+1} over the circle,
/// by the trapezoid rule on equispaced nodes; exponentially convergent for
/// analytic F.
pub fn contour_derivative(
    f: impl Fn(Complex64) -> Complex64,
    spec: &ContourSpec,
    order: usize,
) -> Result<Complex64> {
    if order == 0 {
        return Err(Error::invalid("contour derivative order must be >= 1"));
    }
    let m = spec.node_count;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let phi = 2.0 * PI * j as f64 / m as f64;
        let e = Complex64::from_polar(1.0, phi);
        let v = f(spec.center + spec.radius * e);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::EvaluationFailure {
                location: format!("contour node {j} (phi = {phi:.6})"),
            });
        }
        acc += v * Complex64::from_polar(1.0, -(order as f64) * phi);
    }
    let kfact: f64 = (1..=order).map(|i| i as f64).product();
    Ok(acc * kfact / (m as f64 * spec.radius.powi(order as i32)))
}

/// Contour derivative with the node count doubled from 16 until two
/// successive values agree below `tol`.
pub fn contour_derivative_adaptive(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    order: usize,
    tol: f64,
) -> Result<Complex64> {
    let mut m = 16;
    let mut prev = contour_derivative(&f, &ContourSpec::new(center, radius, m)?, order)?;
    loop {
        m *= 2;
        let cur = contour_derivative(&f, &ContourSpec::new(center, radius, m)?, order)?;
        if (cur - prev).norm() < tol || m >= 4096 {
            return Ok(cur);
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = gauss_legendre(1, (0.0, 2.0)).unwrap();
        assert!((r.nodes[0] - 1.0).abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_nodes_are_p2_roots() {
        let r = gauss_legendre(2, (-1.0, 1.0)).unwrap();
        let x = 0.5773502691896258;
        assert!((r.nodes[0] + x).abs() < 1e-15);
        assert!((r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        assert!((r.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degree_three_exactness() {
        let r = gauss_legendre(2, (0.0, 1.0)).unwrap();
        let v = r.integrate(|x| x * x);
        assert!((v - 1.0 / 3.0).abs() <= 1e-15);
    }

    #[test]
    fn invalid_arguments_rejected() {
        assert!(gauss_legendre(0, (0.0, 1.0)).is_err());
        assert!(gauss_legendre(4, (1.0, 1.0)).is_err());
    }

    #[test]
    fn weights_positive_nodes_increasing_sum_matches() {
        for n in [1, 2, 3, 7, 20, 61, 200] {
            let r = gauss_legendre(n, (-2.0, 5.0)).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
            let sum: f64 = r.weights.iter().sum();
            assert!(
                (sum - 7.0).abs() < 1e-14 * 7.0,
                "n = {n}: weight sum {sum}"
            );
        }
    }

    #[test]
    fn high_order_polynomial_exactness() {
        // n points integrate degree 2n-1 exactly.
        for n in [5usize, 12, 40] {
            let r = gauss_legendre(n, (0.0, 1.0)).unwrap();
            let d = (2 * n - 1) as i32;
            let v = r.integrate(|x| x.powi(d));
            let exact = 1.0 / (d as f64 + 1.0);
            assert!((v - exact).abs() < 1e-13 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn chebyshev_constant_and_linear() {
        let p = ChebyshevInterpolant::fit(|_| 3.5, (0.0, 1.0), 8).unwrap();
        assert!((p.coefficients[0] - 3.5).abs() < 1e-14);
        assert!(p.coefficients[1..].iter().all(|c| c.abs() < 1e-14));

        let p = ChebyshevInterpolant::fit(|x| x, (-1.0, 1.0), 8).unwrap();
        assert!((p.coefficients[1] - 1.0).abs() < 1e-14);
        assert!((p.coefficients[0]).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_sin_fit_and_derivative() {
        let p = ChebyshevInterpolant::fit(|x| x.sin(), (0.0, 3.0), 30).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=300 {
            let x = 3.0 * i as f64 / 300.0;
            worst = worst.max((p.eval(x) - x.sin()).abs());
        }
        assert!(worst <= 1e-13, "max fit error {worst:e}");

        let p = ChebyshevInterpolant::fit(|x| x.sin(), (0.0, 3.0), 40).unwrap();
        let d = p.derivative(1).unwrap();
        let mut worst = 0.0f64;
        for i in 1..300 {
            let x = 3.0 * i as f64 / 300.0;
            worst = worst.max((d.eval(x) - x.cos()).abs());
        }
        assert!(worst <= 1e-11, "max derivative error {worst:e}");
    }

    #[test]
    fn chebyshev_second_derivative_of_square() {
        let p = ChebyshevInterpolant::fit(|x| x * x, (0.0, 1.0), 6).unwrap();
        let d2 = p.derivative(2).unwrap();
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert!((d2.eval(x) - 2.0).abs() <= 1e-12);
        }
        let d1 = ChebyshevInterpolant::fit(|_| 4.0, (0.0, 1.0), 4)
            .unwrap()
            .derivative(1)
            .unwrap();
        for i in 0..=10 {
            assert!(d1.eval(i as f64 / 10.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn chebyshev_derivative_of_polynomial_is_exact() {
        // fit x^3 - 2x on [0,2]; derivative coefficients must reproduce 3x^2 - 2.
        let p = ChebyshevInterpolant::fit(|x| x.powi(3) - 2.0 * x, (0.0, 2.0), 9).unwrap();
        let d = p.derivative(1).unwrap();
        for i in 0..=20 {
            let x = 2.0 * i as f64 / 20.0;
            assert!((d.eval(x) - (3.0 * x * x - 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_order_bounds() {
        let p = ChebyshevInterpolant::fit(|x| x, (-1.0, 1.0), 4).unwrap();
        assert!(p.derivative(0).is_err());
        assert!(p.derivative(4).is_err());
    }

    #[test]
    fn contour_polynomial_derivatives() {
        let spec = ContourSpec::new(Complex64::new(0.0, 0.0), 1.0, 32).unwrap();
        let d2 = contour_derivative(|z| z * z, &spec, 2).unwrap();
        assert!((d2 - Complex64::new(2.0, 0.0)).norm() < 1e-13);

        let spec = ContourSpec::new(Complex64::new(0.7, 0.3), 0.8, 32).unwrap();
        let d2 = contour_derivative(|z| z, &spec, 2).unwrap();
        assert!(d2.norm() < 1e-13);
    }

    #[test]
    fn contour_exponential() {
        let spec = ContourSpec::new(Complex64::new(1.0, 0.0), 1.0, 32).unwrap();
        let d1 = contour_derivative(|z| z.exp(), &spec, 1).unwrap();
        assert!((d1 - Complex64::new(1f64.exp(), 0.0)).norm() <= 1e-13);
    }

    #[test]
    fn contour_radius_invariance_for_entire_function() {
        let f = |z: Complex64| (z * Complex64::new(0.3, 0.1)).exp() + z * z;
        let c = Complex64::new(0.5, 0.0);
        let v1 = contour_derivative_adaptive(f, c, 0.5, 3, 1e-13).unwrap();
        let v2 = contour_derivative_adaptive(f, c, 2.0, 3, 1e-13).unwrap();
        assert!((v1 - v2).norm() <= 1e-12);
    }

    #[test]
    fn contour_rejects_bad_specs() {
        assert!(ContourSpec::new(Complex64::new(0.0, 0.0), 0.0, 16).is_err());
        assert!(ContourSpec::new(Complex64::new(0.0, 0.0), 1.0, 6).is_err());
    }
}
