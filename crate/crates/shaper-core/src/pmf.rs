//! Probability mass functions over constellation points.

use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::rng;
use rand::Rng;

const SUM_TOL: f64 = 1e-12;

/// Probabilities aligned to a constellation's point order.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Strict constructor: entries nonnegative, sum within 1e-12 of one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid_argument("empty pmf"));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::invalid_argument("pmf entries must be finite and >= 0"));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::invalid_argument(format!(
                "pmf sums to {s}, expected 1 within {SUM_TOL:e}"
            )));
        }
        Ok(Pmf { probs })
    }

    /// Rescales nonnegative weights to sum exactly to one. Accepts inputs
    /// with rounding slack (e.g. values transcribed to 3 decimals).
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let s: f64 = weights.iter().sum();
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::invalid_argument("weights must have positive finite sum"));
        }
        if weights.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::invalid_argument("weights must be finite and >= 0"));
        }
        Pmf::new(weights.iter().map(|w| w / s).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Pmf { probs: vec![1.0 / n as f64; n] }
    }

    /// Builds the full symmetric PMF from one-sided probabilities listed
    /// for the positive points in increasing amplitude order. The input
    /// may carry print-rounding slack; it is renormalized.
    pub fn from_one_sided(one_sided: &[f64]) -> Result<Self> {
        let mut w = Vec::with_capacity(one_sided.len() * 2);
        w.extend(one_sided.iter().rev());
        w.extend(one_sided.iter());
        Pmf::normalized(w)
    }

    /// One-sided view (positive half, increasing amplitude) of a
    /// symmetric 1D PMF.
    pub fn one_sided(&self) -> Vec<f64> {
        self.probs[self.len() / 2..].to_vec()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// Exact mirror symmetry p(x) = p(-x) on an even-length 1D ordering.
    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n / 2).all(|i| self.probs[i] == self.probs[n - 1 - i])
    }

    /// -sum p log2 p with 0 log 0 = 0, in bits.
    pub fn entropy_bits(&self) -> f64 {
        -self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.log2())
            .sum::<f64>()
    }

    /// i.i.d. point indices, deterministic for a fixed (seed, n).
    /// Inverse-CDF over a cumulative table; one uniform draw per symbol.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<usize> {
        let mut rng = rng::stream(seed, &[0x706d_66]);
        self.sample_with(n, &mut rng)
    }

    /// Same inverse-CDF sampler on a caller-owned stream.
    pub fn sample_with<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        let mut cdf = Vec::with_capacity(self.len());
        let mut acc = 0.0;
        for &p in &self.probs {
            acc += p;
            cdf.push(acc);
        }
        *cdf.last_mut().unwrap() = 1.0; // guard the final bucket against rounding
        (0..n)
            .map(|_| {
                let u: f64 = rng.gen();
                cdf.partition_point(|&c| c <= u)
            })
            .collect()
    }
}

/// Maxwell-Boltzmann PMF p(x_i) proportional to exp(-nu |x_i|^2) on the
/// base (pre-normalization) lattice of `c`. The scale applied afterwards
/// by normalization does not change the family, only reparametrizes nu.
pub fn maxwell_boltzmann(c: &Constellation, nu: f64) -> Result<Pmf> {
    if nu < 0.0 || !nu.is_finite() {
        return Err(Error::invalid_argument("nu must be finite and >= 0"));
    }
    // weights on the unscaled lattice keep nu comparable across calls
    let base: Vec<f64> = c
        .points()
        .iter()
        .map(|x| {
            let b = x / c.scale();
            (-nu * b.norm_sqr()).exp()
        })
        .collect();
    Pmf::normalized(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::make_pam;

    #[test]
    fn mb_zero_nu_is_uniform() {
        let c = make_pam(8).unwrap();
        let p = maxwell_boltzmann(&c, 0.0).unwrap();
        for i in 0..8 {
            assert!((p.get(i) - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn mb_large_nu_concentrates_on_innermost() {
        let c = make_pam(8).unwrap();
        let p = maxwell_boltzmann(&c, 10.0).unwrap();
        // points ordered -7..+7; inner pair is indices 3,4
        assert!(p.get(3) + p.get(4) >= 0.999);
    }

    #[test]
    fn mb_rejects_negative_nu() {
        let c = make_pam(4).unwrap();
        assert!(maxwell_boltzmann(&c, -0.1).is_err());
    }

    #[test]
    fn mb_monotone_in_amplitude() {
        let c = make_pam(16).unwrap();
        for nu in [0.0, 0.01, 0.1, 0.5] {
            let p = maxwell_boltzmann(&c, nu).unwrap();
            let pts = c.points();
            for i in 0..16 {
                for j in 0..16 {
                    if pts[i].norm() <= pts[j].norm() {
                        assert!(p.get(i) >= p.get(j) - 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn entropy_uniform_exact() {
        assert!((Pmf::uniform(64).entropy_bits() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_shaped_preset_frozen() {
        // direct high-precision summation oracle value for the 8-PAM
        // preset [0.200, 0.157, 0.096, 0.046] (renormalized)
        let p = Pmf::from_one_sided(&[0.200, 0.157, 0.096, 0.046]).unwrap();
        assert!((p.entropy_bits() - 2.828092507183385).abs() < 1e-12);
    }

    #[test]
    fn sample_deterministic() {
        let p = Pmf::from_one_sided(&[0.3, 0.2]).unwrap();
        assert_eq!(p.sample(1000, 42), p.sample(1000, 42));
        assert_ne!(p.sample(1000, 42), p.sample(1000, 43));
    }

    #[test]
    fn sample_frequencies_match_pmf() {
        let p = Pmf::uniform(64);
        let n = 1_000_000;
        let idx = p.sample(n, 9);
        let mut counts = vec![0usize; 64];
        for i in idx {
            counts[i] += 1;
        }
        for c in counts {
            let f = c as f64 / n as f64;
            assert!((f - 1.0 / 64.0).abs() < 3e-3, "freq {f}");
        }
    }
}
