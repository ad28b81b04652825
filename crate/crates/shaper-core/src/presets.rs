//! Named shaping presets: the published two-per-format schedule of
//! fixed PMFs, each with its design SNR and intended channel SNR range.
//! Names follow the "<format>-<letter>" pattern, e.g. "64qam-d".

use crate::constellation::{make_pam, Constellation};
use crate::error::{Error, Result};
use crate::pmf::Pmf;

/// One fixed shaping choice: a one-sided PMF over the positive half of
/// the constituent PAM lattice, its design SNR, and the channel SNR
/// window it is meant to cover.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    /// QAM order (16, 64, or 256).
    pub qam_points: usize,
    pub shaping_snr_db: f64,
    pub channel_range_db: (f64, f64),
    pub one_sided: &'static [f64],
}

pub const PRESETS: [Preset; 6] = [
    Preset {
        name: "16qam-a",
        qam_points: 16,
        shaping_snr_db: 1.2,
        channel_range_db: (1.1, 6.1),
        one_sided: &[0.432, 0.068],
    },
    Preset {
        name: "16qam-b",
        qam_points: 16,
        shaping_snr_db: 9.9,
        channel_range_db: (6.1, 11.6),
        one_sided: &[0.332, 0.168],
    },
    Preset {
        name: "64qam-c",
        qam_points: 64,
        shaping_snr_db: 9.3,
        channel_range_db: (7.4, 12.2),
        one_sided: &[0.277, 0.16, 0.053, 0.01],
    },
    Preset {
        name: "64qam-d",
        qam_points: 64,
        shaping_snr_db: 15.0,
        channel_range_db: (12.2, 16.6),
        one_sided: &[0.200, 0.157, 0.096, 0.046],
    },
    Preset {
        name: "256qam-e",
        qam_points: 256,
        shaping_snr_db: 15.5,
        channel_range_db: (13.5, 18.1),
        one_sided: &[0.152, 0.131, 0.097, 0.062, 0.034, 0.016, 0.006, 0.002],
    },
    Preset {
        name: "256qam-f",
        qam_points: 256,
        shaping_snr_db: 20.6,
        channel_range_db: (18.1, 22.1),
        one_sided: &[0.109, 0.101, 0.088, 0.071, 0.054, 0.038, 0.025, 0.015],
    },
];

impl Preset {
    /// Per-quadrature PAM levels (4, 8, or 16).
    pub fn pam_levels(&self) -> usize {
        (self.qam_points as f64).sqrt() as usize
    }

    /// Full symmetric 1D PMF; the tabulated one-sided values are
    /// rounded, so the mirror is renormalized.
    pub fn pmf(&self) -> Pmf {
        Pmf::from_one_sided(self.one_sided).expect("preset tables are valid")
    }

    /// Base constituent PAM lattice (scale 1).
    pub fn lattice(&self) -> Constellation {
        make_pam(self.pam_levels()).expect("preset sizes are valid")
    }

    /// Unit-energy 2D QAM constellation and its product PMF.
    pub fn qam(&self) -> (Constellation, Pmf) {
        self.lattice().product_qam(&self.pmf()).expect("preset tables are valid")
    }
}

/// Looks a preset up by name; the error lists all known names.
pub fn preset(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        Error::Config(format!(
            "unknown preset '{name}'; available: {}",
            PRESETS.map(|p| p.name).join(", ")
        ))
    })
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}
