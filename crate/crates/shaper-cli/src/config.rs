//! Config file loading: each subcommand owns a small TOML schema.
//! Every run is fully specified by the file plus CLI flag overrides;
//! the resolved form is hashed and logged into the output.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use shaper_core::constellation::{make_pam, Constellation};
use shaper_core::gnmodel::{ChiCoefficients, LinkParams};
use shaper_core::pmf::Pmf;
use shaper_core::presets;
use shaper_core::tabular;
use std::path::{Path, PathBuf};

pub fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("cannot parse config {}", path.display()))
}

/// Short hash of the resolved config; logged into every output so
/// reruns can recognize their own rows.
pub fn config_hash<T: Serialize>(cfg: &T) -> String {
    let canon = toml::to_string(cfg).expect("config serializes");
    let digest = Sha256::digest(canon.as_bytes());
    let mut s = String::new();
    for b in &digest[..6] {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

pub fn resolved_toml<T: Serialize>(cfg: &T) -> String {
    toml::to_string(cfg).expect("config serializes")
}

fn default_order() -> usize {
    20
}

fn default_chi_scale() -> f64 {
    1.0
}

/// Relative paths named inside a config resolve against the config
/// file's directory, so shipped configs work from any cwd.
pub fn rebase(path: &str, base: &Path) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Input law spec: "uniform", a preset name, or "file:<path>" pointing
/// at a tabular points file with a 1D lattice.
pub fn resolve_input(spec: &str, qam: usize, base: &Path) -> Result<(Constellation, Pmf)> {
    if spec == "uniform" {
        let levels = integer_sqrt_qam(qam)?;
        let lattice = make_pam(levels)?;
        let pmf = Pmf::uniform(levels);
        return Ok((lattice, pmf));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let full = rebase(path, base);
        let (c, p) = tabular::load_points(&full)
            .with_context(|| format!("cannot load points file {}", full.display()))?;
        if c.dimension() != 1 {
            bail!("input file {} must hold a 1D lattice", full.display());
        }
        return Ok((c, p));
    }
    let preset = presets::preset(spec)?;
    if preset.qam_points != qam {
        bail!("preset {} is {}QAM, config says {}QAM", spec, preset.qam_points, qam);
    }
    Ok((preset.lattice(), preset.pmf()))
}

pub fn integer_sqrt_qam(qam: usize) -> Result<usize> {
    let levels = (qam as f64).sqrt().round() as usize;
    if levels * levels != qam {
        bail!("qam order {qam} is not a square");
    }
    Ok(levels)
}

/// Optional chi source shared by the gn and optimize-pmf commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChiSource {
    /// Key-value file with link + coefficients; default is the built-in
    /// 2000 km reference.
    pub chi_file: Option<String>,
    /// Multiplier on all four coefficients (0 disables interference).
    #[serde(default = "default_chi_scale")]
    pub chi_scale: f64,
}

impl ChiSource {
    pub fn load(&self, base: &Path) -> Result<(LinkParams, ChiCoefficients)> {
        let (link, chi) = match &self.chi_file {
            Some(path) => {
                let full = rebase(path, base);
                tabular::load_chi(&full)
                    .with_context(|| format!("cannot load chi file {}", full.display()))?
            }
            None => (LinkParams::reference_2000km(), ChiCoefficients::reference_2000km()),
        };
        Ok((link, chi.scale(self.chi_scale)))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AwgnSweepConfig {
    pub snr_lo_db: f64,
    pub snr_hi_db: f64,
    pub snr_step_db: f64,
    /// QAM orders to sweep with uniform and per-SNR optimized input.
    pub formats: Vec<usize>,
    /// Fixed-PMF presets to include; empty means all six.
    #[serde(default)]
    pub presets: Vec<String>,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPmfConfig {
    /// Acceptable SNR penalty against per-SNR shaping, dB.
    pub penalty_db: f64,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    pub search: Vec<FixedPmfWindow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPmfWindow {
    pub qam: usize,
    pub lo_db: f64,
    pub hi_db: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GnPowerConfig {
    #[serde(flatten)]
    pub chi: ChiSource,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    pub qam: usize,
    /// "uniform", a preset name, or "file:<path>".
    pub pmf: String,
    pub lo_dbm: f64,
    pub hi_dbm: f64,
    pub step_db: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GnReachConfig {
    #[serde(flatten)]
    pub chi: ChiSource,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    pub qam: usize,
    pub lo_km: f64,
    pub hi_km: f64,
    pub step_km: f64,
    pub target_rate_4d: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GnMismatchConfig {
    #[serde(flatten)]
    pub chi: ChiSource,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    pub qam: usize,
    pub lo_db: f64,
    pub hi_db: f64,
    pub step_db: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizePmfConfig {
    #[serde(flatten)]
    pub chi: ChiSource,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    pub qam: usize,
    pub powers_dbm: Vec<f64>,
    /// "1d", "2d", or "both".
    pub dimension: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SsfmConfig {
    pub qam: usize,
    /// "uniform", a preset name, or "file:<path>".
    pub pmf: String,
    pub power_dbm: f64,
    pub seed: u64,
    pub n_symbols: usize,
    pub oversampling: usize,
    pub step_km: f64,
    pub rolloff: f64,
    /// Link overrides; defaults are the desk-scale reference.
    #[serde(default)]
    pub link: LinkOverrides,
    /// Only read by `ssfm sweep`.
    pub sweep: Option<SsfmSweep>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SsfmSweep {
    pub seeds: u64,
    #[serde(default)]
    pub powers_dbm: Vec<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LinkOverrides {
    pub n_spans: Option<u32>,
    pub span_km: Option<f64>,
    pub alpha_db_per_km: Option<f64>,
    pub gamma_per_w_km: Option<f64>,
    pub dispersion_ps_nm_km: Option<f64>,
    pub noise_figure_db: Option<f64>,
    pub wavelength_nm: Option<f64>,
    pub symbol_rate_hz: Option<f64>,
    pub channel_spacing_hz: Option<f64>,
    pub n_channels: Option<u32>,
}

impl LinkOverrides {
    /// Desk-scale base (10 x 100 km, 3 channels) with overrides applied.
    pub fn resolve(&self) -> LinkParams {
        let mut link = LinkParams::reference_2000km();
        link.n_spans = 10;
        link.n_channels = 3;
        if let Some(v) = self.n_spans {
            link.n_spans = v;
        }
        if let Some(v) = self.span_km {
            link.span_km = v;
        }
        if let Some(v) = self.alpha_db_per_km {
            link.alpha_db_per_km = v;
        }
        if let Some(v) = self.gamma_per_w_km {
            link.gamma_per_w_km = v;
        }
        if let Some(v) = self.dispersion_ps_nm_km {
            link.dispersion_ps_nm_km = v;
        }
        if let Some(v) = self.noise_figure_db {
            link.noise_figure_db = v;
        }
        if let Some(v) = self.wavelength_nm {
            link.wavelength_nm = v;
        }
        if let Some(v) = self.symbol_rate_hz {
            link.symbol_rate_hz = v;
        }
        if let Some(v) = self.channel_spacing_hz {
            link.channel_spacing_hz = v;
        }
        if let Some(v) = self.n_channels {
            link.n_channels = v;
        }
        link
    }
}

/// Inclusive float grid; step must advance.
pub fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || hi < lo {
        bail!("empty grid: lo {lo}, hi {hi}, step {step}");
    }
    let n = ((hi - lo) / step).round() as usize + 1;
    Ok((0..n).map(|i| lo + i as f64 * step).filter(|&v| v <= hi + 1e-9).collect())
}
