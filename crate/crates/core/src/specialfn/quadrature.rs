//! Gauss-Legendre quadrature and the arcsine-weighted `J0` integral.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

use super::bessel_j0;

const MIN_NODES: usize = 8;
const MAX_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Double the rule order until successive estimates agree.
    Adaptive,
    /// One comparison between `nodes` and `2 * nodes`; no further refinement.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    nodes: usize,
    scheme: QuadratureScheme,
    abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 16,
            scheme: QuadratureScheme::Adaptive,
            abs_tol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes: usize, scheme: QuadratureScheme, abs_tol: f64) -> Result<Self> {
        if !(MIN_NODES..=MAX_NODES).contains(&nodes) {
            return Err(Error::InvalidConfig(format!(
                "quadrature nodes must be in [{MIN_NODES}, {MAX_NODES}], got {nodes}"
            )));
        }
        if !(abs_tol.is_finite() && abs_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "quadrature tolerance must be positive, got {abs_tol}"
            )));
        }
        Ok(Self {
            nodes,
            scheme,
            abs_tol,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn scheme(&self) -> QuadratureScheme {
        self.scheme
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// from Newton iteration on `P_n` started at the Chebyshev-like guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            deriv = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                deriv = legendre_with_derivative(n, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    half * nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

/// `int_a^b f` for a smooth integrand.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let mut n = spec.nodes;
    let mut coarse = gauss_rule(&f, a, b, n);
    loop {
        let fine = gauss_rule(&f, a, b, 2 * n);
        let estimate = (fine - coarse).abs();
        if estimate <= spec.abs_tol {
            return Ok(fine);
        }
        n *= 2;
        if spec.scheme == QuadratureScheme::Fixed || 2 * n > MAX_NODES {
            return Err(Error::QuadratureTolerance {
                tol: spec.abs_tol,
                estimate,
            });
        }
        coarse = fine;
    }
}

/// `int_0^1 f(a mu) / sqrt(1 - mu^2) d mu`, computed as
/// `int_0^{pi/2} f(a sin t) dt` so the endpoint singularity disappears.
pub fn weighted_integral_with<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::InvalidConfig(format!("integral parameter {a} is not finite")));
    }
    integrate(|t| f(a * t.sin()), 0.0, FRAC_PI_2, spec)
}

/// `int_0^1 J0(a mu) / sqrt(1 - mu^2) d mu`.
pub fn weighted_j0_integral(a: f64, spec: &QuadratureSpec) -> Result<f64> {
    weighted_integral_with(bessel_j0, a, spec)
}
