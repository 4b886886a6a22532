//! Barycentric Lagrange interpolation on Chebyshev points of the second kind.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevAxis {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl ChebyshevAxis {
    /// `n ≥ 2` nodes including both interval ends. `n == 1` gives a single
    /// node at the midpoint (constant interpolant).
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        assert!(n >= 1 && hi > lo);
        if n == 1 {
            return ChebyshevAxis { lo, hi, nodes: vec![0.5 * (lo + hi)], weights: vec![1.0] };
        }
        let m = n - 1;
        let nodes = (0..n)
            .map(|j| {
                let x = -(PI * j as f64 / m as f64).cos();
                0.5 * (lo + hi) + 0.5 * (hi - lo) * x
            })
            .collect();
        let weights = (0..n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == m {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();
        ChebyshevAxis { lo, hi, nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Values of every cardinal basis polynomial at `x`.
    pub fn basis(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        let mut out = vec![0.0; n];
        if n == 1 {
            out[0] = 1.0;
            return out;
        }
        for (j, &xj) in self.nodes.iter().enumerate() {
            if x == xj {
                out[j] = 1.0;
                return out;
            }
        }
        let mut denom = 0.0;
        for ((o, &w), &xj) in out.iter_mut().zip(&self.weights).zip(&self.nodes) {
            *o = w / (x - xj);
            denom += *o;
        }
        for v in &mut out {
            *v /= denom;
        }
        out
    }

    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        self.basis(x).iter().zip(values).map(|(b, v)| b * v).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_polynomials_exactly() {
        let ax = ChebyshevAxis::new(-2.0, 3.0, 6);
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) - 0.1 * x.powi(5);
        let vals: Vec<f64> = ax.nodes().iter().map(|&x| f(x)).collect();
        for i in 0..=40 {
            let x = -2.0 + 5.0 * i as f64 / 40.0;
            assert!((ax.interpolate(&vals, x) - f(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn smooth_function_converges() {
        let ax = ChebyshevAxis::new(0.0, 1.0, 15);
        let vals: Vec<f64> = ax.nodes().iter().map(|&x| (3.0 * x).cos()).collect();
        assert!((ax.interpolate(&vals, 0.3217) - (3.0 * 0.3217f64).cos()).abs() < 1e-12);
    }

    #[test]
    fn basis_partitions_unity() {
        let ax = ChebyshevAxis::new(10.0, 11.0, 9);
        let s: f64 = ax.basis(10.37).iter().sum();
        assert!((s - 1.0).abs() < 1e-13);
    }
}
