//! Gauss rules for the arcsine and uniform probability measures on [-1, 1].
//!
//! An `n`-point rule integrates polynomials of degree `2n - 1` exactly.
//! Weights sum to one.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::pointgen::Measure;

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn for_measure(measure: Measure, n: usize) -> Rule {
        match measure {
            Measure::Chebyshev => gauss_chebyshev(n),
            Measure::Uniform => gauss_legendre(n),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest univariate degree integrated exactly.
    pub fn exactness(&self) -> usize {
        (2 * self.len()).saturating_sub(1)
    }
}

/// Nodes `cos((2k+1)π / 2n)`, equal weights `1/n`.
pub fn gauss_chebyshev(n: usize) -> Rule {
    let nodes = (0..n)
        .map(|k| libm::cos((2 * k + 1) as f64 * PI / (2 * n) as f64))
        .collect();
    Rule {
        nodes,
        weights: alloc::vec![1.0 / n as f64; n],
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes by Newton's method, weights halved so they sum to 1.
pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes.push(x);
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    Rule { nodes, weights }
}

/// Visits every node of the `d`-fold tensor rule with its product weight.
pub fn for_each_tensor_node(rule: &Rule, d: usize, mut visit: impl FnMut(&[f64], f64)) {
    let n = rule.len();
    if n == 0 || d == 0 {
        return;
    }
    let mut idx = alloc::vec![0usize; d];
    let mut point = alloc::vec![rule.nodes[0]; d];
    loop {
        let w: f64 = idx.iter().map(|&i| rule.weights[i]).product();
        visit(&point, w);
        let mut k = 0;
        loop {
            if k == d {
                return;
            }
            idx[k] += 1;
            if idx[k] < n {
                point[k] = rule.nodes[idx[k]];
                break;
            }
            idx[k] = 0;
            point[k] = rule.nodes[0];
            k += 1;
        }
    }
}
