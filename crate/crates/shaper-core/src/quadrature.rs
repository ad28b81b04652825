//! Gauss-Hermite nodes and weights for Gaussian expectations.
//!
//! Nodes are the roots of the physicists' Hermite polynomial H_n, so
//! sum_i w_i f(t_i) approximates the integral of exp(-t^2) f(t) and the
//! weights sum to sqrt(pi). An expectation over N(mu, s^2) is then
//! (1/sqrt(pi)) * sum_i w_i f(mu + sqrt(2) s t_i).

use crate::error::{Error, Result};

/// Minimum order accepted; below this the AIR integrands are visibly
/// under-resolved for the largest constellations.
pub const MIN_ORDER: usize = 8;

/// Default order. Validated against order 40 to < 1e-6 bits on the
/// worst case used in this crate (shaped 16-PAM at 22 dB).
pub const DEFAULT_ORDER: usize = 20;

/// One-dimensional Gauss-Hermite rule.
#[derive(Debug, Clone)]
pub struct HermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HermiteRule {
    /// Computes the order-n rule by Newton iteration on the orthonormal
    /// Hermite recurrence. Deterministic; converges in < 20 iterations
    /// for every n used here.
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_ORDER {
            return Err(Error::invalid_argument(format!(
                "quadrature order {n} below minimum {MIN_ORDER}"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        let nf = n as f64;
        let mut z = 0.0f64;
        for i in 0..m {
            // initial guesses: asymptotic for the outermost roots, then
            // extrapolation inwards
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..200 {
                // evaluate the orthonormal polynomial and derivative at z
                let mut p1 = std::f64::consts::PI.powf(-0.25);
                let mut p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        // roots come out descending on the first half; sort ascending
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
        let nodes = idx.iter().map(|&k| nodes[k]).collect();
        let weights = idx.iter().map(|&k| weights[k]).collect();
        Ok(HermiteRule { nodes, weights })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for n in [8, 20, 40] {
            let r = HermiteRule::new(n).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - std::f64::consts::PI.sqrt()).abs() < 1e-12, "n={n} sum={s}");
        }
    }

    #[test]
    fn gaussian_moments_exact() {
        // integral of exp(-t^2) t^2 = sqrt(pi)/2; t^4 -> 3 sqrt(pi)/4
        let r = HermiteRule::new(20).unwrap();
        let m2: f64 = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * t * t).sum();
        let m4: f64 = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * t.powi(4)).sum();
        let sp = std::f64::consts::PI.sqrt();
        assert!((m2 - sp / 2.0).abs() < 1e-12);
        assert!((m4 - 3.0 * sp / 4.0).abs() < 1e-11);
    }

    #[test]
    fn order_20_matches_reference_endpoints() {
        // largest node/weight of the order-20 rule, standard tabulated values
        let r = HermiteRule::new(20).unwrap();
        assert!((r.nodes[19] - 5.387480890011233).abs() < 1e-12);
        assert!((r.weights[19] - 2.229393645534145e-13).abs() < 1e-20);
    }

    #[test]
    fn below_minimum_rejected() {
        assert!(HermiteRule::new(4).is_err());
    }

    #[test]
    fn nodes_symmetric_and_sorted() {
        let r = HermiteRule::new(21).unwrap();
        for i in 0..21 {
            assert!((r.nodes[i] + r.nodes[20 - i]).abs() < 1e-12);
            if i > 0 {
                assert!(r.nodes[i] > r.nodes[i - 1]);
            }
        }
    }
}
