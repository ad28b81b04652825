//! Plain-text serialization: shaped constellations (one row per point)
//! and interference-coefficient files (key-value with the link they
//! belong to). Floats are written in shortest round-trip form.

use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::gnmodel::{ChiCoefficients, LinkParams};
use crate::pmf::Pmf;
use num_complex::Complex64;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Renders a constellation and its PMF: `key = value` header (M,
/// dimension, rho), then one `re im label_bits probability` row per
/// point.
pub fn points_to_string(c: &Constellation, p: &Pmf) -> Result<String> {
    if p.len() != c.len() {
        return Err(Error::invalid_argument("pmf length must match the constellation"));
    }
    let mut s = String::new();
    let _ = writeln!(s, "# shaped constellation, one row per point");
    let _ = writeln!(s, "M = {}", c.len());
    let _ = writeln!(s, "dimension = {}", c.dimension());
    let _ = writeln!(s, "rho = {}", c.scale());
    let _ = writeln!(s, "# re im label_bits probability");
    let width = c.bits_per_symbol() as usize;
    for (k, pt) in c.points().iter().enumerate() {
        let _ = writeln!(
            s,
            "{} {} {:0width$b} {}",
            pt.re,
            pt.im,
            c.labels()[k],
            p.get(k),
        );
    }
    Ok(s)
}

fn parse_f64(tok: &str, what: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad {what}: '{tok}'")))
}

/// Splits a `key = value` line; returns None for anything else.
fn key_value(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim(), v.trim()))
}

/// Parses the `points_to_string` format. The PMF column is
/// renormalized, so hand-rounded tables load cleanly.
pub fn points_from_str(text: &str) -> Result<(Constellation, Pmf)> {
    let mut m: Option<usize> = None;
    let mut dimension: Option<u8> = None;
    let mut rho: Option<f64> = None;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut probs = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = key_value(line) {
            match k {
                "M" => m = Some(v.parse().map_err(|_| Error::Parse(format!("bad M: '{v}'")))?),
                "dimension" => {
                    dimension =
                        Some(v.parse().map_err(|_| Error::Parse(format!("bad dimension: '{v}'")))?)
                }
                "rho" => rho = Some(parse_f64(v, "rho")?),
                other => return Err(Error::Parse(format!("unknown header key '{other}'"))),
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let (re, im, bits, prob) = match (it.next(), it.next(), it.next(), it.next(), it.next()) {
            (Some(a), Some(b), Some(c), Some(d), None) => (a, b, c, d),
            _ => return Err(Error::Parse(format!("expected 4 columns, got '{line}'"))),
        };
        points.push(Complex64::new(parse_f64(re, "re")?, parse_f64(im, "im")?));
        labels.push(
            u32::from_str_radix(bits, 2)
                .map_err(|_| Error::Parse(format!("bad label bits: '{bits}'")))?,
        );
        probs.push(parse_f64(prob, "probability")?);
    }
    let m = m.ok_or_else(|| Error::Parse("missing M header".into()))?;
    let dimension = dimension.ok_or_else(|| Error::Parse("missing dimension header".into()))?;
    let rho = rho.ok_or_else(|| Error::Parse("missing rho header".into()))?;
    if points.len() != m {
        return Err(Error::Parse(format!("M = {m} but {} rows", points.len())));
    }
    let c = Constellation::from_parts(points, labels, dimension, rho)?;
    let p = Pmf::normalized(probs)?;
    Ok((c, p))
}

pub fn save_points(path: impl AsRef<Path>, c: &Constellation, p: &Pmf) -> Result<()> {
    fs::write(path, points_to_string(c, p)?)?;
    Ok(())
}

pub fn load_points(path: impl AsRef<Path>) -> Result<(Constellation, Pmf)> {
    points_from_str(&fs::read_to_string(path)?)
}

/// Renders interference coefficients with the link they were derived
/// for, as one flat key-value block.
pub fn chi_to_string(link: &LinkParams, chi: &ChiCoefficients) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# link parameters");
    let _ = writeln!(s, "n_spans = {}", link.n_spans);
    let _ = writeln!(s, "span_km = {}", link.span_km);
    let _ = writeln!(s, "alpha_db_per_km = {}", link.alpha_db_per_km);
    let _ = writeln!(s, "gamma_per_w_km = {}", link.gamma_per_w_km);
    let _ = writeln!(s, "dispersion_ps_nm_km = {}", link.dispersion_ps_nm_km);
    let _ = writeln!(s, "noise_figure_db = {}", link.noise_figure_db);
    let _ = writeln!(s, "wavelength_nm = {}", link.wavelength_nm);
    let _ = writeln!(s, "symbol_rate_hz = {}", link.symbol_rate_hz);
    let _ = writeln!(s, "channel_spacing_hz = {}", link.channel_spacing_hz);
    let _ = writeln!(s, "n_channels = {}", link.n_channels);
    let _ = writeln!(s, "# interference coefficients, 1/W^2");
    let _ = writeln!(s, "chi0 = {}", chi.chi0);
    let _ = writeln!(s, "chi4 = {}", chi.chi4);
    let _ = writeln!(s, "chi4p = {}", chi.chi4p);
    let _ = writeln!(s, "chi6 = {}", chi.chi6);
    s
}

/// Parses `chi_to_string`; every key is required exactly once.
pub fn chi_from_str(text: &str) -> Result<(LinkParams, ChiCoefficients)> {
    let mut link = LinkParams::reference_2000km();
    let mut chi = ChiCoefficients { chi0: f64::NAN, chi4: f64::NAN, chi4p: f64::NAN, chi6: f64::NAN };
    let mut seen = std::collections::BTreeMap::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = key_value(line)
            .ok_or_else(|| Error::Parse(format!("expected key = value, got '{line}'")))?;
        *seen.entry(k.to_string()).or_insert(0) += 1;
        match k {
            "n_spans" => {
                link.n_spans =
                    v.parse().map_err(|_| Error::Parse(format!("bad n_spans: '{v}'")))?
            }
            "span_km" => link.span_km = parse_f64(v, k)?,
            "alpha_db_per_km" => link.alpha_db_per_km = parse_f64(v, k)?,
            "gamma_per_w_km" => link.gamma_per_w_km = parse_f64(v, k)?,
            "dispersion_ps_nm_km" => link.dispersion_ps_nm_km = parse_f64(v, k)?,
            "noise_figure_db" => link.noise_figure_db = parse_f64(v, k)?,
            "wavelength_nm" => link.wavelength_nm = parse_f64(v, k)?,
            "symbol_rate_hz" => link.symbol_rate_hz = parse_f64(v, k)?,
            "channel_spacing_hz" => link.channel_spacing_hz = parse_f64(v, k)?,
            "n_channels" => {
                link.n_channels =
                    v.parse().map_err(|_| Error::Parse(format!("bad n_channels: '{v}'")))?
            }
            "chi0" => chi.chi0 = parse_f64(v, k)?,
            "chi4" => chi.chi4 = parse_f64(v, k)?,
            "chi4p" => chi.chi4p = parse_f64(v, k)?,
            "chi6" => chi.chi6 = parse_f64(v, k)?,
            other => return Err(Error::Parse(format!("unknown key '{other}'"))),
        }
    }
    const KEYS: [&str; 14] = [
        "n_spans", "span_km", "alpha_db_per_km", "gamma_per_w_km", "dispersion_ps_nm_km",
        "noise_figure_db", "wavelength_nm", "symbol_rate_hz", "channel_spacing_hz", "n_channels",
        "chi0", "chi4", "chi4p", "chi6",
    ];
    for k in KEYS {
        match seen.get(k) {
            Some(1) => {}
            Some(_) => return Err(Error::Parse(format!("duplicate key '{k}'"))),
            None => return Err(Error::Parse(format!("missing key '{k}'"))),
        }
    }
    Ok((link, chi))
}

pub fn save_chi(path: impl AsRef<Path>, link: &LinkParams, chi: &ChiCoefficients) -> Result<()> {
    fs::write(path, chi_to_string(link, chi))?;
    Ok(())
}

pub fn load_chi(path: impl AsRef<Path>) -> Result<(LinkParams, ChiCoefficients)> {
    chi_from_str(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::make_pam;
    use crate::presets::preset;

    #[test]
    fn points_round_trip_2d() {
        let (c, p) = preset("64qam-d").unwrap().qam();
        let text = points_to_string(&c, &p).unwrap();
        let (c2, p2) = points_from_str(&text).unwrap();
        assert_eq!(c2.len(), c.len());
        assert_eq!(c2.dimension(), c.dimension());
        assert_eq!(c2.labels(), c.labels());
        assert!((c2.scale() - c.scale()).abs() < 1e-15);
        for k in 0..c.len() {
            assert!((c2.points()[k] - c.points()[k]).norm() < 1e-15);
            assert!((p2.get(k) - p.get(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn points_round_trip_1d() {
        let c = make_pam(8).unwrap();
        let p = preset("64qam-c").unwrap().pmf();
        let text = points_to_string(&c, &p).unwrap();
        let (c2, p2) = points_from_str(&text).unwrap();
        assert_eq!(c2.dimension(), 1);
        for k in 0..8 {
            assert_eq!(c2.points()[k], c.points()[k]);
            assert!((p2.get(k) - p.get(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn points_reject_malformed() {
        assert!(points_from_str("M = 2\nrho = 1\n1 0 0 0.5\n-1 0 1 0.5").is_err());
        let (c, p) = preset("16qam-a").unwrap().qam();
        let good = points_to_string(&c, &p).unwrap();
        let bad = good.replace("M = 16", "M = 8");
        assert!(points_from_str(&bad).is_err());
        let bad = good.replacen("0 ", "x ", 1);
        assert!(points_from_str(&bad).is_err());
    }

    #[test]
    fn chi_round_trip_and_missing_key() {
        let link = LinkParams::reference_2000km();
        let chi = ChiCoefficients::reference_2000km();
        let text = chi_to_string(&link, &chi);
        let (l2, c2) = chi_from_str(&text).unwrap();
        assert_eq!(l2.n_spans, link.n_spans);
        assert_eq!(l2.symbol_rate_hz, link.symbol_rate_hz);
        assert_eq!(c2.chi0, chi.chi0);
        assert_eq!(c2.chi4p, chi.chi4p);
        let truncated = text.replace("chi6 = 129", "");
        assert!(chi_from_str(&truncated).is_err());
    }
}
