//! Closed-form link model: amplifier noise plus a modulation-dependent
//! nonlinear interference variance cubic in launch power, with the
//! modulation entering through standardized fourth and sixth moments.
//! Includes power sweeps, reach interpolation, and the shaping-SNR
//! mismatch fixed point.

use crate::air::rbmd_quadrature;
use crate::constellation::{Constellation, Moments};
use crate::error::{Error, Result};
use crate::mbopt::optimize_mb;
use crate::pmf::Pmf;
use std::f64::consts::PI;

pub const H_PLANCK: f64 = 6.62607015e-34;
pub const C_LIGHT: f64 = 299792458.0;

/// Launch-power grid used by the internal optimizers, dBm.
const POWER_GRID_LO_DBM: f64 = -6.0;
const POWER_GRID_HI_DBM: f64 = 6.0;
const POWER_GRID_STEP_DB: f64 = 0.5;

pub fn dbm_to_w(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

pub fn w_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

/// Physical layout of a multi-span WDM link.
#[derive(Debug, Clone, Copy)]
pub struct LinkParams {
    pub n_spans: u32,
    pub span_km: f64,
    pub alpha_db_per_km: f64,
    pub gamma_per_w_km: f64,
    pub dispersion_ps_nm_km: f64,
    pub noise_figure_db: f64,
    pub wavelength_nm: f64,
    pub symbol_rate_hz: f64,
    pub channel_spacing_hz: f64,
    pub n_channels: u32,
}

impl LinkParams {
    /// The 2000 km reference system the published interference
    /// coefficients were fitted to.
    pub fn reference_2000km() -> LinkParams {
        LinkParams {
            n_spans: 20,
            span_km: 100.0,
            alpha_db_per_km: 0.2,
            gamma_per_w_km: 1.3,
            dispersion_ps_nm_km: 17.0,
            noise_figure_db: 4.0,
            wavelength_nm: 1550.0,
            symbol_rate_hz: 28e9,
            channel_spacing_hz: 30e9,
            n_channels: 9,
        }
    }

    pub fn total_km(&self) -> f64 {
        self.n_spans as f64 * self.span_km
    }

    /// Field attenuation coefficient, nepers per meter applied to power.
    pub fn alpha_np_per_m(&self) -> f64 {
        self.alpha_db_per_km * (10f64).ln() / 10.0 / 1e3
    }

    /// Group-velocity dispersion, s^2/m. Anomalous dispersion fibers
    /// (positive D) give negative beta2.
    pub fn beta2_s2_per_m(&self) -> f64 {
        let d = self.dispersion_ps_nm_km * 1e-6; // s/m^2
        let lam = self.wavelength_nm * 1e-9;
        -d * lam * lam / (2.0 * PI * C_LIGHT)
    }

    /// Effective nonlinear length of one span, meters.
    pub fn effective_length_m(&self) -> f64 {
        let a = self.alpha_np_per_m();
        (1.0 - (-a * self.span_km * 1e3).exp()) / a
    }

    /// Lumped-amplifier noise power in the symbol bandwidth, both
    /// polarizations, across all spans: n (G-1) F h nu Rs.
    pub fn ase_variance_w(&self) -> f64 {
        let gain = 10f64.powf(self.alpha_db_per_km * self.span_km / 10.0);
        let nf = 10f64.powf(self.noise_figure_db / 10.0);
        let nu = C_LIGHT / (self.wavelength_nm * 1e-9);
        self.n_spans as f64 * (gain - 1.0) * nf * H_PLANCK * nu * self.symbol_rate_hz
    }

    /// Relative weight of intra- plus inter-channel interference
    /// buildup for this layout; ratios of this weight transfer the
    /// fitted coefficients between channel counts.
    fn interference_weight(&self) -> f64 {
        let b = self.symbol_rate_hz;
        let spm = 0.5 * (0.5 * PI * PI * self.beta2_s2_per_m().abs() * self.effective_length_m() * b * b).asinh();
        let df = self.channel_spacing_hz;
        let side = (self.n_channels - 1) / 2;
        let xpm: f64 = (1..=side)
            .map(|m| {
                let f = m as f64 * df;
                ((f + b / 2.0) / (f - b / 2.0)).ln()
            })
            .sum();
        spm + 2.0 * xpm
    }
}

/// Fitted interference coefficients, W^-2: a constant term, linear and
/// quadratic terms in (mu4 - 2), and a mu6 term.
#[derive(Debug, Clone, Copy)]
pub struct ChiCoefficients {
    pub chi0: f64,
    pub chi4: f64,
    pub chi4p: f64,
    pub chi6: f64,
}

impl ChiCoefficients {
    /// Published fit for the 2000 km reference system.
    pub fn reference_2000km() -> ChiCoefficients {
        ChiCoefficients { chi0: 3.09e4, chi4: 1.05e4, chi4p: -1.22e2, chi6: 1.29e2 }
    }

    pub fn zero() -> ChiCoefficients {
        ChiCoefficients { chi0: 0.0, chi4: 0.0, chi4p: 0.0, chi6: 0.0 }
    }

    pub fn scale(&self, f: f64) -> ChiCoefficients {
        ChiCoefficients {
            chi0: self.chi0 * f,
            chi4: self.chi4 * f,
            chi4p: self.chi4p * f,
            chi6: self.chi6 * f,
        }
    }

    /// Transfers coefficients fitted on `from` to the layout `to`:
    /// linear in span count, and scaled by the interference-weight
    /// ratio when the channel count or spectrum changes.
    pub fn rescaled_for(&self, from: &LinkParams, to: &LinkParams) -> ChiCoefficients {
        let spans = to.n_spans as f64 / from.n_spans as f64;
        let w = to.interference_weight() / from.interference_weight();
        self.scale(spans * w)
    }
}

/// Interference variance at launch power `p_w`:
/// P^3 [chi0 + (mu4-2) chi4 + (mu4-2)^2 chi4' + mu6 chi6].
pub fn nli_variance_w(p_w: f64, m: Moments, chi: &ChiCoefficients) -> f64 {
    let d4 = m.mu4 - 2.0;
    p_w.powi(3) * (chi.chi0 + d4 * chi.chi4 + d4 * d4 * chi.chi4p + m.mu6 * chi.chi6)
}

/// Effective SNR after amplifier and interference noise.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveSnrBreakdown {
    pub power_w: f64,
    pub ase_w: f64,
    pub nli_w: f64,
    pub snr_db: f64,
}

pub fn effective_snr(p_w: f64, m: Moments, chi: &ChiCoefficients, ase_w: f64) -> EffectiveSnrBreakdown {
    let nli_w = nli_variance_w(p_w, m, chi);
    EffectiveSnrBreakdown {
        power_w: p_w,
        ase_w,
        nli_w,
        snr_db: 10.0 * (p_w / (ase_w + nli_w)).log10(),
    }
}

fn power_grid_dbm() -> Vec<f64> {
    let n = ((POWER_GRID_HI_DBM - POWER_GRID_LO_DBM) / POWER_GRID_STEP_DB).round() as usize + 1;
    (0..n).map(|i| POWER_GRID_LO_DBM + POWER_GRID_STEP_DB * i as f64).collect()
}

/// One evaluated launch power of a sweep.
#[derive(Debug, Clone, Copy)]
pub struct PowerSweepPoint {
    pub power_dbm: f64,
    pub snr_eff_db: f64,
    pub rate_4d: f64,
    pub ase_w: f64,
    pub nli_w: f64,
}

/// Rate-vs-power curve of one 1D input over explicit launch powers.
pub fn air_power_sweep(
    lattice: &Constellation,
    pmf: &Pmf,
    link: &LinkParams,
    chi: &ChiCoefficients,
    powers_dbm: &[f64],
    order: usize,
) -> Result<Vec<PowerSweepPoint>> {
    let m = Moments::of_2d(lattice, pmf)?;
    let c = lattice.normalize(pmf)?;
    let ase = link.ase_variance_w();
    powers_dbm
        .iter()
        .map(|&dbm| {
            let b = effective_snr(dbm_to_w(dbm), m, chi, ase);
            let r = rbmd_quadrature(&c, pmf, b.snr_db, order)?.value * 4.0;
            Ok(PowerSweepPoint {
                power_dbm: dbm,
                snr_eff_db: b.snr_db,
                rate_4d: r,
                ase_w: b.ase_w,
                nli_w: b.nli_w,
            })
        })
        .collect()
}

/// Best point of a sweep; strict comparison keeps the first (lowest
/// power) maximum on ties.
pub fn best_point(points: &[PowerSweepPoint]) -> PowerSweepPoint {
    let mut best = points[0];
    for p in &points[1..] {
        if p.rate_4d > best.rate_4d {
            best = *p;
        }
    }
    best
}

fn best_snr(points: &[PowerSweepPoint]) -> PowerSweepPoint {
    let mut best = points[0];
    for p in &points[1..] {
        if p.snr_eff_db > best.snr_eff_db {
            best = *p;
        }
    }
    best
}

/// Where interference coefficients for a given span count come from.
#[derive(Debug, Clone)]
pub enum ChiProvider {
    /// Linear span scaling of one fitted set.
    LinearSpans { reference: ChiCoefficients, reference_spans: u32 },
    /// Explicit per-span-count table; unknown counts are an error.
    Table(Vec<(u32, ChiCoefficients)>),
}

impl ChiProvider {
    pub fn chi_for_spans(&self, n_spans: u32) -> Result<ChiCoefficients> {
        match self {
            ChiProvider::LinearSpans { reference, reference_spans } => {
                Ok(reference.scale(n_spans as f64 / *reference_spans as f64))
            }
            ChiProvider::Table(rows) => rows
                .iter()
                .find(|(n, _)| *n == n_spans)
                .map(|(_, chi)| *chi)
                .ok_or_else(|| {
                    Error::Config(format!("no interference coefficients for {n_spans} spans"))
                }),
        }
    }
}

/// One distance of a reach sweep.
#[derive(Debug, Clone, Copy)]
pub struct ReachPoint {
    pub distance_km: f64,
    pub n_spans: u32,
    pub air_uniform_4d: f64,
    pub air_shaped_4d: f64,
    pub snr_uniform_db: f64,
}

#[derive(Debug, Clone)]
pub struct ReachResult {
    pub points: Vec<ReachPoint>,
    pub target_rate_4d: f64,
    pub reach_uniform_km: f64,
    pub reach_shaped_km: f64,
    pub gain_km: f64,
}

/// Distance (km) where the sampled rate curve crosses the target,
/// linear in rate between samples and clamped at the sampled ends.
fn crossing_km(dists: &[f64], air: &[f64], target: f64) -> f64 {
    if target >= air[0] {
        return dists[0];
    }
    let n = air.len();
    if target <= air[n - 1] {
        return dists[n - 1];
    }
    let mut j = 0;
    while j + 1 < n && air[j + 1] > target {
        j += 1;
    }
    let t = (air[j] - target) / (air[j] - air[j + 1]);
    dists[j] + t * (dists[j + 1] - dists[j])
}

/// Rate vs distance for uniform and per-distance shaped inputs, and the
/// distances at which each sustains `target_rate_4d`. The shaped input
/// at each distance is the family optimum for the best uniform SNR
/// there; both curves take their best launch power per distance.
pub fn reach_sweep(
    lattice: &Constellation,
    link_ref: &LinkParams,
    provider: &ChiProvider,
    distances_km: &[f64],
    target_rate_4d: f64,
    order: usize,
) -> Result<ReachResult> {
    if distances_km.len() < 2 {
        return Err(Error::invalid_argument("need at least two distances"));
    }
    let grid = power_grid_dbm();
    let uniform = Pmf::uniform(lattice.len());
    let mut points = Vec::with_capacity(distances_km.len());
    for &dist in distances_km {
        let spans = dist / link_ref.span_km;
        if (spans - spans.round()).abs() > 1e-9 || spans < 1.0 {
            return Err(Error::invalid_argument(format!(
                "distance {dist} km is not a whole number of {} km spans",
                link_ref.span_km
            )));
        }
        let n_spans = spans.round() as u32;
        let link = LinkParams { n_spans, ..*link_ref };
        let chi = provider.chi_for_spans(n_spans)?;

        let sweep_u = air_power_sweep(lattice, &uniform, &link, &chi, &grid, order)?;
        let snr_u = best_snr(&sweep_u).snr_eff_db;
        let shaped = optimize_mb(lattice, snr_u, order)?.pmf;
        let sweep_s = air_power_sweep(lattice, &shaped, &link, &chi, &grid, order)?;
        points.push(ReachPoint {
            distance_km: dist,
            n_spans,
            air_uniform_4d: best_point(&sweep_u).rate_4d,
            air_shaped_4d: best_point(&sweep_s).rate_4d,
            snr_uniform_db: snr_u,
        });
    }
    let dists: Vec<f64> = points.iter().map(|p| p.distance_km).collect();
    let au: Vec<f64> = points.iter().map(|p| p.air_uniform_4d).collect();
    let as_: Vec<f64> = points.iter().map(|p| p.air_shaped_4d).collect();
    let reach_uniform_km = crossing_km(&dists, &au, target_rate_4d);
    let reach_shaped_km = crossing_km(&dists, &as_, target_rate_4d);
    Ok(ReachResult {
        points,
        target_rate_4d,
        reach_uniform_km,
        reach_shaped_km,
        gain_km: reach_shaped_km - reach_uniform_km,
    })
}

/// One offset of the design-SNR mismatch sweep.
#[derive(Debug, Clone, Copy)]
pub struct MismatchPoint {
    pub delta_db: f64,
    pub channel_snr_db: f64,
    pub shaped_rate_4d: f64,
    pub gain_4d: f64,
    pub iterations: u32,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct MismatchResult {
    pub power_dbm: f64,
    pub uniform_snr_db: f64,
    pub uniform_rate_4d: f64,
    pub points: Vec<MismatchPoint>,
}

const MISMATCH_DAMPING: f64 = 0.5;
const MISMATCH_TOL_DB: f64 = 1e-4;
const MISMATCH_MAX_ITER: u32 = 50;

/// Shaping designed for (realized SNR + delta): since the realized SNR
/// depends on the input's moments, each delta is solved as a damped
/// fixed point on the channel SNR. Operates at the uniform-optimal
/// launch power found on the internal grid.
pub fn mismatch_sweep(
    lattice: &Constellation,
    link: &LinkParams,
    chi: &ChiCoefficients,
    deltas_db: &[f64],
    order: usize,
) -> Result<MismatchResult> {
    let grid = power_grid_dbm();
    let uniform = Pmf::uniform(lattice.len());
    let sweep_u = air_power_sweep(lattice, &uniform, link, chi, &grid, order)?;
    let best_u = best_snr(&sweep_u);
    let p_w = dbm_to_w(best_u.power_dbm);
    let ase = link.ase_variance_w();
    let snr_u = best_u.snr_eff_db;
    let c_u = lattice.normalize(&uniform)?;
    let r_u = rbmd_quadrature(&c_u, &uniform, snr_u, order)?.value * 4.0;

    let mut points = Vec::with_capacity(deltas_db.len());
    for &delta in deltas_db {
        let mut snr_ch = snr_u;
        let mut pmf = uniform.clone();
        let mut converged = false;
        let mut iterations = 0;
        for it in 1..=MISMATCH_MAX_ITER {
            iterations = it;
            pmf = optimize_mb(lattice, snr_ch + delta, order)?.pmf;
            let m = Moments::of_2d(lattice, &pmf)?;
            let new = effective_snr(p_w, m, chi, ase).snr_db;
            let upd = snr_ch + MISMATCH_DAMPING * (new - snr_ch);
            let done = (upd - snr_ch).abs() < MISMATCH_TOL_DB;
            snr_ch = upd;
            if done {
                converged = true;
                break;
            }
        }
        let c = lattice.normalize(&pmf)?;
        let r = rbmd_quadrature(&c, &pmf, snr_ch, order)?.value * 4.0;
        points.push(MismatchPoint {
            delta_db: delta,
            channel_snr_db: snr_ch,
            shaped_rate_4d: r,
            gain_4d: r - r_u,
            iterations,
            converged,
        });
    }
    Ok(MismatchResult {
        power_dbm: best_u.power_dbm,
        uniform_snr_db: snr_u,
        uniform_rate_4d: r_u,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::make_pam;

    fn uniform64_moments() -> Moments {
        let c = make_pam(8).unwrap();
        Moments::of_2d(&c, &Pmf::uniform(8)).unwrap()
    }

    #[test]
    fn ase_reference_value() {
        let link = LinkParams::reference_2000km();
        let ase = link.ase_variance_w();
        assert!((ase / 1.7847124604294514e-5 - 1.0).abs() < 1e-12, "ase {ase}");
    }

    #[test]
    fn nli_reference_value() {
        let chi = ChiCoefficients::reference_2000km();
        let nli = nli_variance_w(dbm_to_w(-1.5), uniform64_moments(), &chi);
        assert!((nli / 8.742734434148336e-6 - 1.0).abs() < 1e-12, "nli {nli}");
    }

    #[test]
    fn effective_snr_peaks_at_reference_power() {
        let link = LinkParams::reference_2000km();
        let chi = ChiCoefficients::reference_2000km();
        let m = uniform64_moments();
        let ase = link.ase_variance_w();
        let expect = [
            (-3.0, 13.7883),
            (-2.5, 14.0308),
            (-2.0, 14.1913),
            (-1.5, 14.2528),
            (-1.0, 14.2004),
            (-0.5, 14.0233),
            (0.0, 13.7174),
        ];
        for (dbm, snr) in expect {
            let got = effective_snr(dbm_to_w(dbm), m, &chi, ase).snr_db;
            assert!((got - snr).abs() < 5e-4, "{dbm} dBm: {got} vs {snr}");
        }
    }

    #[test]
    fn shaped_input_lowers_effective_snr() {
        // heavier tails raise mu4/mu6 and with them the interference
        let link = LinkParams::reference_2000km();
        let chi = ChiCoefficients::reference_2000km();
        let ase = link.ase_variance_w();
        let c = make_pam(8).unwrap();
        let pd = Pmf::from_one_sided(&[0.200, 0.157, 0.096, 0.046]).unwrap();
        let md = Moments::of_2d(&c, &pd).unwrap();
        let p = dbm_to_w(-1.5);
        let su = effective_snr(p, uniform64_moments(), &chi, ase).snr_db;
        let sd = effective_snr(p, md, &chi, ase).snr_db;
        assert!(sd < su, "{sd} vs {su}");
        assert!((sd - 14.072).abs() < 5e-3, "shaped snr {sd}");
    }

    #[test]
    fn power_sweep_peak_and_monotone_tails() {
        let link = LinkParams::reference_2000km();
        let chi = ChiCoefficients::reference_2000km();
        let c = make_pam(8).unwrap();
        let grid: Vec<f64> = (0..13).map(|i| -4.0 + 0.5 * i as f64).collect();
        let pts = air_power_sweep(&c, &Pmf::uniform(8), &link, &chi, &grid, 20).unwrap();
        let best = best_point(&pts);
        assert_eq!(best.power_dbm, -1.5);
        // rate rises to the peak and falls after it
        let peak = pts.iter().position(|p| p.power_dbm == -1.5).unwrap();
        for w in pts[..=peak].windows(2) {
            assert!(w[1].rate_4d >= w[0].rate_4d);
        }
        for w in pts[peak..].windows(2) {
            assert!(w[1].rate_4d <= w[0].rate_4d);
        }
    }

    #[test]
    fn chi_provider_linear_and_table() {
        let reference = ChiCoefficients::reference_2000km();
        let lin = ChiProvider::LinearSpans { reference, reference_spans: 20 };
        let half = lin.chi_for_spans(10).unwrap();
        assert!((half.chi0 - reference.chi0 / 2.0).abs() < 1e-9);
        assert!((half.chi6 - reference.chi6 / 2.0).abs() < 1e-9);
        let tab = ChiProvider::Table(vec![(20, reference)]);
        assert!(tab.chi_for_spans(20).is_ok());
        let err = tab.chi_for_spans(15).unwrap_err();
        assert!(err.to_string().contains("15 spans"), "{err}");
    }

    #[test]
    fn desk_rescaling_matches_frozen_factor() {
        let reference = LinkParams::reference_2000km();
        let desk = LinkParams { n_spans: 10, n_channels: 3, ..reference };
        let chi = ChiCoefficients::reference_2000km().rescaled_for(&reference, &desk);
        let factor = chi.chi0 / 3.09e4;
        assert!((factor - 0.2844).abs() < 2e-4, "factor {factor}");
        assert!((desk.ase_variance_w() / 8.9236e-6 - 1.0).abs() < 1e-4);
        // weight components
        let w9 = reference.interference_weight();
        let w3 = desk.interference_weight();
        assert!((w9 - 4.7462).abs() < 1e-3, "w9 {w9}");
        assert!((w3 - 2.6992).abs() < 1e-3, "w3 {w3}");
    }

    #[test]
    fn beta2_and_effective_length() {
        let link = LinkParams::reference_2000km();
        assert!((link.beta2_s2_per_m() / -2.1683e-26 - 1.0).abs() < 1e-4);
        assert!((link.effective_length_m() / 21.50e3 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn reach_endpoints_match_frozen() {
        let lattice = make_pam(8).unwrap();
        let link = LinkParams::reference_2000km();
        let provider = ChiProvider::LinearSpans {
            reference: ChiCoefficients::reference_2000km(),
            reference_spans: 20,
        };
        let dists = [1000.0, 3000.0];
        let res = reach_sweep(&lattice, &link, &provider, &dists, 8.86, 20).unwrap();
        assert!((res.points[0].snr_uniform_db - 17.263).abs() < 2e-3);
        assert!((res.points[1].snr_uniform_db - 12.492).abs() < 2e-3);
    }

    #[test]
    fn reach_rejects_partial_spans() {
        let lattice = make_pam(8).unwrap();
        let link = LinkParams::reference_2000km();
        let provider = ChiProvider::LinearSpans {
            reference: ChiCoefficients::reference_2000km(),
            reference_spans: 20,
        };
        assert!(reach_sweep(&lattice, &link, &provider, &[1000.0, 1050.0], 8.86, 20).is_err());
    }

    #[test]
    fn crossing_interpolates_and_clamps() {
        let d = [1000.0, 1100.0, 1200.0];
        let a = [9.0, 8.5, 8.0];
        assert_eq!(crossing_km(&d, &a, 9.5), 1000.0);
        assert_eq!(crossing_km(&d, &a, 7.5), 1200.0);
        assert!((crossing_km(&d, &a, 8.75) - 1050.0).abs() < 1e-12);
    }

    #[test]
    fn mismatch_fixed_point_matches_frozen_rows() {
        let lattice = make_pam(8).unwrap();
        let link = LinkParams::reference_2000km();
        let chi = ChiCoefficients::reference_2000km();
        let deltas = [-1.0, 0.0, 1.0, 6.0];
        let res = mismatch_sweep(&lattice, &link, &chi, &deltas, 20).unwrap();
        assert_eq!(res.power_dbm, -1.5);
        assert!((res.uniform_snr_db - 14.2528).abs() < 5e-4);
        assert!((res.uniform_rate_4d - 8.9194).abs() < 5e-4);
        let expect = [
            (-1.0, 14.0078, 0.31942),
            (0.0, 14.0411, 0.35031),
            (1.0, 14.0756, 0.35764),
            (6.0, 14.2156, 0.14334),
        ];
        for (p, (d, snr, gain)) in res.points.iter().zip(expect) {
            assert!(p.converged, "delta {d}");
            assert_eq!(p.delta_db, d);
            assert!((p.channel_snr_db - snr).abs() < 2e-3, "delta {d}: snr {}", p.channel_snr_db);
            assert!((p.gain_4d - gain).abs() < 2e-3, "delta {d}: gain {}", p.gain_4d);
        }
    }

    #[test]
    fn mismatch_on_noise_only_link_peaks_at_zero() {
        // without interference the realized SNR is input-independent, so
        // designing for the true SNR is optimal
        let lattice = make_pam(8).unwrap();
        let link = LinkParams::reference_2000km();
        let chi = ChiCoefficients::zero();
        let deltas: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
        let res = mismatch_sweep(&lattice, &link, &chi, &deltas, 20).unwrap();
        let best = res
            .points
            .iter()
            .max_by(|a, b| a.gain_4d.partial_cmp(&b.gain_4d).unwrap())
            .unwrap();
        assert_eq!(best.delta_db, 0.0, "argmax {}", best.delta_db);
        for p in &res.points {
            assert!(p.converged && p.iterations == 1, "delta {}", p.delta_db);
        }
    }
}
