//! Achievable-information-rate estimators: symbol-wise mismatched rate,
//! bit-metric decoding rate (Monte Carlo and quadrature), and LLRs under
//! a circularly symmetric Gaussian auxiliary channel.
//!
//! All estimators work with likelihood ratios, so any multiplicative
//! constant on the auxiliary density cancels; `AuxChannel` carries an
//! explicit `density_log_scale` knob to make that invariance testable,
//! and no estimator in this module reads it.

use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::pmf::Pmf;
use crate::quadrature::HermiteRule;
use crate::rng;
use num_complex::Complex64;
use rayon::prelude::*;

/// Saturation for LLR magnitudes, natural-log units. Beyond this the
/// rate integrand changes by less than 1e-20 bits.
pub const LLR_CAP: f64 = 50.0;

const LN_2: f64 = std::f64::consts::LN_2;

/// Gaussian auxiliary channel. `sigma2` is the noise variance in the
/// constellation's own dimension: E[|N|^2] for complex (2D) symbols,
/// E[N^2] for real (1D) symbols. With unit-energy input both give
/// SNR = 1/sigma2, and a 2D product channel restricted to one real
/// component keeps the same numeric sigma2.
#[derive(Debug, Clone, Copy)]
pub struct AuxChannel {
    pub sigma2: f64,
    /// Log of a multiplicative constant on the density. Cancels in every
    /// ratio this module computes and is never read by the estimators.
    pub density_log_scale: f64,
}

impl AuxChannel {
    pub fn new(sigma2: f64) -> Self {
        AuxChannel { sigma2, density_log_scale: 0.0 }
    }

    pub fn from_snr_db(snr_db: f64) -> Self {
        AuxChannel::new(10f64.powf(-snr_db / 10.0))
    }

    pub fn snr_db(&self) -> f64 {
        -10.0 * self.sigma2.log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MonteCarlo,
    Quadrature,
}

/// An AIR value with estimator metadata. `value` is the raw estimate in
/// bits per symbol of the constellation's dimension (or per 4D symbol if
/// `per4d`); clipping at zero happens only in `reported()` so estimator
/// statistics stay unbiased.
#[derive(Debug, Clone, Copy)]
pub struct AirEstimate {
    pub value: f64,
    pub method: Method,
    pub n_samples: usize,
    pub per4d: bool,
}

impl AirEstimate {
    /// The published form: max(value, 0).
    pub fn reported(&self) -> f64 {
        self.value.max(0.0)
    }

    /// Rescales a per-symbol estimate of a `dims`-dimensional symbol to
    /// bits per 4D symbol.
    pub fn to_4d(&self, dims: u8) -> AirEstimate {
        assert!(!self.per4d);
        AirEstimate {
            value: self.value * 4.0 / dims as f64,
            per4d: true,
            ..*self
        }
    }
}

/// AWGN capacity in bits per 4D symbol: 2 log2(1 + SNR).
pub fn awgn_capacity_4d(snr_db: f64) -> f64 {
    2.0 * (1.0 + 10f64.powf(snr_db / 10.0)).log2()
}

/// SNR (dB) at which the AWGN capacity per 4D equals `rate_4d`.
pub fn awgn_capacity_snr_db(rate_4d: f64) -> f64 {
    10.0 * (2f64.powf(rate_4d / 2.0) - 1.0).log10()
}

/// Log-likelihood ln q(y|x) up to the constant that cancels in ratios.
#[inline]
fn loglik(y: Complex64, x: Complex64, dim: u8, sigma2: f64) -> f64 {
    match dim {
        1 => {
            let d = y.re - x.re;
            -d * d / (2.0 * sigma2)
        }
        _ => {
            let dr = y.re - x.re;
            let di = y.im - x.im;
            -(dr * dr + di * di) / sigma2
        }
    }
}

/// LLR of bit level `i` (1-based from the MSB) for one received sample:
/// log of the PMF-weighted likelihood sum over points with bit 1 against
/// those with bit 0, by shared-max log-sum-exp, saturated at +-LLR_CAP.
pub fn llr(y: Complex64, i: u32, c: &Constellation, p: &Pmf, q: &AuxChannel) -> Result<f64> {
    if i < 1 || i > c.bits_per_symbol() {
        return Err(Error::invalid_argument(format!(
            "bit level {i} out of 1..={}",
            c.bits_per_symbol()
        )));
    }
    let mut row = vec![0.0; c.bits_per_symbol() as usize];
    llr_row(y, c, p, q, &mut row);
    Ok(row[(i - 1) as usize])
}

/// All m LLRs of one sample into `out`.
fn llr_row(y: Complex64, c: &Constellation, p: &Pmf, q: &AuxChannel, out: &mut [f64]) {
    let m = c.bits_per_symbol() as usize;
    debug_assert_eq!(out.len(), m);
    let mut e = vec![0.0f64; c.len()];
    let mut mx = f64::NEG_INFINITY;
    for (k, x) in c.points().iter().enumerate() {
        let pk = p.get(k);
        e[k] = if pk > 0.0 {
            pk.ln() + loglik(y, *x, c.dimension(), q.sigma2)
        } else {
            f64::NEG_INFINITY
        };
        if e[k] > mx {
            mx = e[k];
        }
    }
    for i in 0..m {
        let mut s1 = 0.0;
        let mut s0 = 0.0;
        for k in 0..c.len() {
            if e[k] == f64::NEG_INFINITY {
                continue;
            }
            let t = (e[k] - mx).exp();
            if c.bit(k, (i + 1) as u32) {
                s1 += t;
            } else {
                s0 += t;
            }
        }
        // an empty side yields an infinite ratio; saturate, don't crash
        let v = if s1 == 0.0 {
            -LLR_CAP
        } else if s0 == 0.0 {
            LLR_CAP
        } else {
            (s1.ln() - s0.ln()).clamp(-LLR_CAP, LLR_CAP)
        };
        out[i] = v;
    }
}

/// LLR matrix for a sample buffer, row-major N x m. Parallel over
/// samples; output layout is fixed, so thread count cannot change it.
pub fn llr_matrix(ys: &[Complex64], c: &Constellation, p: &Pmf, q: &AuxChannel) -> Vec<f64> {
    let m = c.bits_per_symbol() as usize;
    let mut out = vec![0.0; ys.len() * m];
    out.par_chunks_mut(m)
        .zip(ys.par_iter())
        .for_each(|(row, &y)| llr_row(y, c, p, q, row));
    out
}

/// Symbol-wise mismatched-decoding rate from Monte-Carlo samples:
/// mean of log2 [ q(y|x_sent) / sum_x q(y|x) P(x) ].
pub fn rsym_mc(
    sent: &[usize],
    ys: &[Complex64],
    c: &Constellation,
    p: &Pmf,
    q: &AuxChannel,
) -> Result<AirEstimate> {
    if sent.is_empty() || sent.len() != ys.len() {
        return Err(Error::invalid_argument("need equal, nonempty sent/received buffers"));
    }
    let contrib: Vec<f64> = sent
        .par_iter()
        .zip(ys.par_iter())
        .map(|(&k, &y)| {
            let mut mx = f64::NEG_INFINITY;
            let lls: Vec<f64> = c
                .points()
                .iter()
                .map(|x| loglik(y, *x, c.dimension(), q.sigma2))
                .collect();
            for &v in &lls {
                if v > mx {
                    mx = v;
                }
            }
            let den: f64 = lls
                .iter()
                .enumerate()
                .map(|(j, &v)| p.get(j) * (v - mx).exp())
                .sum();
            (lls[k] - mx - den.ln()) / LN_2
        })
        .collect();
    Ok(AirEstimate {
        value: rng::tree_sum(&contrib) / sent.len() as f64,
        method: Method::MonteCarlo,
        n_samples: sent.len(),
        per4d: false,
    })
}

/// Bit-metric decoding rate from sent bits and LLRs (row-major N x m):
/// mean[-log2 P(x_sent)] - mean sum_i log2(1 + exp((-1)^b Lambda)).
pub fn rbmd_mc(
    c: &Constellation,
    p: &Pmf,
    bits: &[u8],
    llrs: &[f64],
) -> Result<AirEstimate> {
    let m = c.bits_per_symbol() as usize;
    if bits.is_empty() || bits.len() != llrs.len() || bits.len() % m != 0 {
        return Err(Error::invalid_argument("bits/llrs must be nonempty N x m of equal shape"));
    }
    let n = bits.len() / m;
    // labels are distinct, so sent bits identify the sent point
    let mut index_of_label = vec![usize::MAX; c.len()];
    for (k, &lab) in c.labels().iter().enumerate() {
        index_of_label[lab as usize] = k;
    }
    let contrib: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|row| {
            let b = &bits[row * m..(row + 1) * m];
            let l = &llrs[row * m..(row + 1) * m];
            let label = b.iter().fold(0u32, |acc, &bit| (acc << 1) | bit as u32);
            let k = index_of_label[label as usize];
            let mut v = -p.get(k).log2();
            for i in 0..m {
                let t = if b[i] == 0 { l[i] } else { -l[i] };
                // log2(1 + e^t), stable on both tails
                v -= if t > 35.0 { t / LN_2 } else { t.exp().ln_1p() / LN_2 };
            }
            v
        })
        .collect();
    Ok(AirEstimate {
        value: rng::tree_sum(&contrib) / n as f64,
        method: Method::MonteCarlo,
        n_samples: n,
        per4d: false,
    })
}

/// Deterministic R_BMD on the AWGN channel: H(B) - sum_i H(B_i|Y), the
/// conditional entropies integrated by Gauss-Hermite quadrature around
/// each constellation point (order nodes per real dimension).
pub fn rbmd_quadrature(
    c: &Constellation,
    p: &Pmf,
    snr_db: f64,
    order: usize,
) -> Result<AirEstimate> {
    bit_quadrature(c, p, snr_db, order, false)
}

/// Deterministic symbol-wise rate (mutual information with the matched
/// Gaussian density) by the same integrator; the oracle counterpart of
/// `rsym_mc`.
pub fn rsym_quadrature(
    c: &Constellation,
    p: &Pmf,
    snr_db: f64,
    order: usize,
) -> Result<AirEstimate> {
    bit_quadrature(c, p, snr_db, order, true)
}

fn bit_quadrature(
    c: &Constellation,
    p: &Pmf,
    snr_db: f64,
    order: usize,
    symbol_wise: bool,
) -> Result<AirEstimate> {
    if !c.is_normalized(p) {
        return Err(Error::InvalidState(
            "constellation must be normalized under the pmf".into(),
        ));
    }
    let rule = HermiteRule::new(order)?;
    let sigma2 = 10f64.powf(-snr_db / 10.0);
    let m = c.bits_per_symbol() as usize;
    let l = c.len();
    let sqrt_pi = std::f64::consts::PI.sqrt();

    // nodes: 1D uses y = x + sqrt(2 s2) t; 2D uses y = x + sqrt(s2)(ta + j tb)
    let offsets: Vec<(Complex64, f64)> = match c.dimension() {
        1 => rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| (Complex64::new((2.0 * sigma2).sqrt() * t, 0.0), w / sqrt_pi))
            .collect(),
        _ => {
            let s = sigma2.sqrt();
            let mut v = Vec::with_capacity(order * order);
            for (&ta, &wa) in rule.nodes.iter().zip(&rule.weights) {
                for (&tb, &wb) in rule.nodes.iter().zip(&rule.weights) {
                    v.push((Complex64::new(s * ta, s * tb), wa * wb / (sqrt_pi * sqrt_pi)));
                }
            }
            v
        }
    };

    let cond: f64 = (0..l)
        .into_par_iter()
        .map(|j| {
            let pj = p.get(j);
            if pj == 0.0 {
                return 0.0;
            }
            let xj = c.points()[j];
            let mut acc = 0.0;
            let mut e = vec![0.0f64; l];
            for &(off, w) in &offsets {
                let y = xj + off;
                let mut mx = f64::NEG_INFINITY;
                for (k, x) in c.points().iter().enumerate() {
                    let pk = p.get(k);
                    e[k] = if pk > 0.0 {
                        pk.ln() + loglik(y, *x, c.dimension(), sigma2)
                    } else {
                        f64::NEG_INFINITY
                    };
                    if e[k] > mx {
                        mx = e[k];
                    }
                }
                // posterior over points at this node; conditional
                // entropies use the posterior-entropy form, whose
                // bounded integrand keeps quadrature truncation small
                let total: f64 = e.iter().map(|&v| (v - mx).exp()).sum();
                if symbol_wise {
                    let mut ent = 0.0;
                    for &v in &e {
                        let q = (v - mx).exp() / total;
                        if q > 0.0 {
                            ent -= q * q.log2();
                        }
                    }
                    acc += w * ent;
                } else {
                    for i in 1..=m as u32 {
                        let s1: f64 = (0..l)
                            .filter(|&k| c.bit(k, i))
                            .map(|k| (e[k] - mx).exp())
                            .sum();
                        let b1 = s1 / total;
                        let mut ent = 0.0;
                        if b1 > 0.0 {
                            ent -= b1 * b1.log2();
                        }
                        if b1 < 1.0 {
                            ent -= (1.0 - b1) * (1.0 - b1).log2();
                        }
                        acc += w * ent;
                    }
                }
            }
            pj * acc
        })
        .sum();

    let h = p.entropy_bits();
    Ok(AirEstimate {
        value: h - cond,
        method: Method::Quadrature,
        n_samples: 0,
        per4d: false,
    })
}

/// R_BMD in bits per 4D symbol for a 1D lattice + PMF on AWGN: the
/// lattice is normalized under the PMF and the per-real-symbol rate
/// quadrupled (four real dimensions per 4D symbol).
pub fn rbmd_awgn_4d(lattice: &Constellation, p: &Pmf, snr_db: f64, order: usize) -> Result<f64> {
    let c = lattice.normalize(p)?;
    Ok(rbmd_quadrature(&c, p, snr_db, order)?.value * 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::make_pam;
    use crate::pmf;

    fn qam64() -> (Constellation, Pmf) {
        make_pam(8).unwrap().product_qam(&Pmf::uniform(8)).unwrap()
    }

    #[test]
    fn capacity_helpers_roundtrip() {
        assert_eq!(awgn_capacity_4d(0.0), 2.0);
        for s in [-3.0, 5.0, 14.0, 21.0] {
            let r = awgn_capacity_4d(s);
            assert!((awgn_capacity_snr_db(r) - s).abs() < 1e-12);
        }
    }

    #[test]
    fn llr_zero_at_symmetry_point() {
        let (c, p) = qam64();
        let q = AuxChannel::from_snr_db(12.0);
        // y = 0 sits on the perpendicular bisector of every MSB decision
        let v = llr(Complex64::new(0.0, 0.0), 1, &c, &p, &q).unwrap();
        assert!(v.abs() < 1e-12, "llr {v}");
    }

    #[test]
    fn llr_reduces_to_prior_when_likelihoods_tie() {
        // shaped 2-PAM: at y = 0 both likelihoods are equal, so the LLR
        // is exactly the a-priori log-ratio
        let c = make_pam(2).unwrap();
        let p = Pmf::new(vec![0.3, 0.7]).unwrap();
        let cn = c.normalize(&p).unwrap();
        let q = AuxChannel::from_snr_db(6.0);
        // bit 1 corresponds to the +1 point (label 1), prob 0.7
        let v = llr(Complex64::new(0.0, 0.0), 1, &cn, &p, &q).unwrap();
        assert!((v - (0.7f64 / 0.3).ln()).abs() < 1e-12, "llr {v}");
    }

    #[test]
    fn llr_out_of_range_bit_rejected() {
        let (c, p) = qam64();
        let q = AuxChannel::from_snr_db(10.0);
        assert!(llr(Complex64::new(0.1, 0.2), 0, &c, &p, &q).is_err());
        assert!(llr(Complex64::new(0.1, 0.2), 7, &c, &p, &q).is_err());
    }

    #[test]
    fn llr_saturates_on_one_sided_mass() {
        // all mass on the positive point: bit level 1 has an empty 0-side
        let c = make_pam(2).unwrap();
        let p = Pmf::new(vec![0.0, 1.0]).unwrap();
        let cn = c.normalize(&p).unwrap();
        let q = AuxChannel::from_snr_db(10.0);
        let v = llr(Complex64::new(0.4, 0.0), 1, &cn, &p, &q).unwrap();
        assert_eq!(v, LLR_CAP);
    }

    #[test]
    fn llr_matches_extended_precision_oracle() {
        // direct term-by-term summation without the shared-max trick,
        // in f64 on deliberately moderate inputs so both are exact to 1e-9
        let (c, p) = qam64();
        let q = AuxChannel::from_snr_db(9.0);
        let mut rng = crate::rng::stream(3, &[1]);
        for _ in 0..50 {
            let (a, b) = crate::rng::normal_pair(&mut rng);
            let y = Complex64::new(a, b);
            for i in 1..=6u32 {
                let fast = llr(y, i, &c, &p, &q).unwrap();
                let mut s1 = 0.0f64;
                let mut s0 = 0.0f64;
                for k in 0..c.len() {
                    let t = p.get(k) * (-(y - c.points()[k]).norm_sqr() / q.sigma2).exp();
                    if c.bit(k, i) {
                        s1 += t;
                    } else {
                        s0 += t;
                    }
                }
                let direct = (s1 / s0).ln().clamp(-LLR_CAP, LLR_CAP);
                assert!((fast - direct).abs() < 1e-9, "bit {i}: {fast} vs {direct}");
            }
        }
    }

    #[test]
    fn estimators_invariant_to_density_scale() {
        let (c, p) = qam64();
        let q1 = AuxChannel { sigma2: 0.05, density_log_scale: 0.0 };
        let q2 = AuxChannel { sigma2: 0.05, density_log_scale: 10f64.ln() };
        let idx = p.sample(500, 21);
        let mut rng = crate::rng::stream(21, &[2]);
        let ys: Vec<Complex64> = idx
            .iter()
            .map(|&k| {
                let (a, b) = crate::rng::normal_pair(&mut rng);
                c.points()[k] + Complex64::new(a, b) * (q1.sigma2 / 2.0).sqrt()
            })
            .collect();
        let r1 = rsym_mc(&idx, &ys, &c, &p, &q1).unwrap().value;
        let r2 = rsym_mc(&idx, &ys, &c, &p, &q2).unwrap().value;
        assert_eq!(r1.to_bits(), r2.to_bits());
        let l1 = llr_matrix(&ys, &c, &p, &q1);
        let l2 = llr_matrix(&ys, &c, &p, &q2);
        assert_eq!(l1, l2);
    }

    #[test]
    fn rsym_noiseless_approaches_entropy() {
        let (c, p) = qam64();
        let q = AuxChannel::new(1e-6);
        let idx = p.sample(2000, 5);
        let ys: Vec<Complex64> = idx.iter().map(|&k| c.points()[k]).collect();
        let r = rsym_mc(&idx, &ys, &c, &p, &q).unwrap();
        assert!((r.value - p.entropy_bits()).abs() < 1e-6, "r {}", r.value);
    }

    #[test]
    fn rsym_independent_noise_is_negative_raw_zero_reported() {
        let (c, p) = qam64();
        let q = AuxChannel::from_snr_db(10.0);
        let idx = p.sample(20000, 6);
        let mut rng = crate::rng::stream(6, &[3]);
        // received independent of sent: the mismatched rate is negative
        // (Jensen gap of the prior-weighted likelihood), clipped only at
        // reporting
        let ys: Vec<Complex64> = (0..idx.len())
            .map(|_| {
                let (a, b) = crate::rng::normal_pair(&mut rng);
                Complex64::new(a, b) * 0.7
            })
            .collect();
        let r = rsym_mc(&idx, &ys, &c, &p, &q).unwrap();
        assert!(r.value < -0.5, "r {}", r.value);
        assert_eq!(r.reported(), 0.0);
    }

    #[test]
    fn rbmd_zero_llrs_give_zero_rate() {
        let (c, p) = qam64();
        let n = 100;
        let m = 6;
        let mut bits = vec![0u8; n * m];
        // arbitrary but valid sent bits
        for (row, chunk) in bits.chunks_mut(m).enumerate() {
            let lab = c.labels()[row % 64];
            for i in 0..m {
                chunk[i] = ((lab >> (m - 1 - i)) & 1) as u8;
            }
        }
        let llrs = vec![0.0; n * m];
        let r = rbmd_mc(&c, &p, &bits, &llrs).unwrap();
        assert!(r.value.abs() < 1e-12, "r {}", r.value);
    }

    #[test]
    fn rbmd_perfect_llrs_give_entropy() {
        let (c, p) = qam64();
        let idx = p.sample(400, 8);
        let m = 6;
        let mut bits = Vec::new();
        let mut llrs = Vec::new();
        for &k in &idx {
            for i in 1..=m as u32 {
                let b = c.bit(k, i);
                bits.push(b as u8);
                llrs.push(if b { LLR_CAP } else { -LLR_CAP });
            }
        }
        let r = rbmd_mc(&c, &p, &bits, &llrs).unwrap();
        assert!((r.value - p.entropy_bits()).abs() < 1e-10, "r {}", r.value);
    }

    #[test]
    fn quadrature_high_snr_saturates() {
        let (c, p) = qam64();
        let r = rbmd_quadrature(&c, &p, 40.0, 20).unwrap();
        assert!((r.to_4d(2).value - 12.0).abs() < 1e-3, "r4d {}", r.to_4d(2).value);
    }

    #[test]
    fn quadrature_low_snr_vanishes() {
        let (c, p) = qam64();
        let r = rbmd_quadrature(&c, &p, -20.0, 20).unwrap();
        let r4d = r.to_4d(2).value;
        assert!(r4d.abs() <= 0.05, "r4d {r4d}");
    }

    #[test]
    fn quadrature_1d_2d_product_equivalence() {
        // product input, circular noise: two real channel uses equal one
        // complex use
        let pam = make_pam(8).unwrap();
        let p1 = Pmf::from_one_sided(&[0.200, 0.157, 0.096, 0.046]).unwrap();
        let c1 = pam.normalize(&p1).unwrap();
        let (c2, p2) = pam.product_qam(&p1).unwrap();
        for snr in [8.0, 14.0, 18.0] {
            let r1 = rbmd_quadrature(&c1, &p1, snr, 20).unwrap().value;
            let r2 = rbmd_quadrature(&c2, &p2, snr, 20).unwrap().value;
            assert!((2.0 * r1 - r2).abs() < 2e-6, "snr {snr}: {r1} vs {r2}");
        }
    }

    #[test]
    fn quadrature_order_convergence() {
        let pam = make_pam(16).unwrap();
        let p = Pmf::from_one_sided(&[0.109, 0.101, 0.088, 0.071, 0.054, 0.038, 0.025, 0.015])
            .unwrap();
        let c = pam.normalize(&p).unwrap();
        // high SNR stresses the rule most: the decision-boundary layer
        // narrows against the node pitch, so order 20 carries ~1e-3 bits
        // of truncation there while order 40 is converged to under 2e-4
        let a = rbmd_quadrature(&c, &p, 22.0, 20).unwrap().value;
        let b = rbmd_quadrature(&c, &p, 22.0, 40).unwrap().value;
        let d = rbmd_quadrature(&c, &p, 22.0, 60).unwrap().value;
        assert!((a - b).abs() < 2e-3, "{a} vs {b}");
        assert!((b - d).abs() < 2e-4, "{b} vs {d}");
        // moderate SNR converges tighter
        let e = rbmd_quadrature(&c, &p, 12.0, 20).unwrap().value;
        let f = rbmd_quadrature(&c, &p, 12.0, 40).unwrap().value;
        assert!((e - f).abs() < 2e-5, "{e} vs {f}");
    }

    #[test]
    fn quadrature_monotone_in_snr() {
        let (c, p) = qam64();
        let mut last = -1.0;
        for snr in (0..=24).step_by(2) {
            let r = rbmd_quadrature(&c, &p, snr as f64, 20).unwrap().value;
            assert!(r >= last - 1e-9, "snr {snr}");
            last = r;
        }
    }

    #[test]
    fn llr_1d_equals_2d_on_product_input() {
        let pam = make_pam(8).unwrap();
        let p1 = Pmf::from_one_sided(&[0.200, 0.157, 0.096, 0.046]).unwrap();
        let c1 = pam.normalize(&p1).unwrap();
        let (c2, p2) = pam.product_qam(&p1).unwrap();
        let q = AuxChannel::from_snr_db(13.0);
        let mut rng = crate::rng::stream(9, &[4]);
        for _ in 0..40 {
            let (a, b) = crate::rng::normal_pair(&mut rng);
            let y2 = Complex64::new(a * 0.8, b * 0.8);
            // real-part bits of the 2D label are the first three; the
            // equivalent 1D observation is sqrt(2) * Re(y)
            let y1 = Complex64::new(y2.re * 2f64.sqrt(), 0.0);
            for i in 1..=3u32 {
                let v2 = llr(y2, i, &c2, &p2, &q).unwrap();
                let v1 = llr(y1, i, &c1, &p1, &q).unwrap();
                assert!((v1 - v2).abs() < 1e-9, "bit {i}: {v1} vs {v2}");
            }
        }
    }
}
