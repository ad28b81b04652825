//! PAM/QAM constellations with binary-reflected Gray labels, power
//! normalization under a PMF, and standardized moments.

use crate::error::{Error, Result};
use crate::pmf::Pmf;
use num_complex::Complex64;

/// How close sum p|x|^2 must be to 1 for a constellation to count as
/// normalized under a PMF.
pub const NORM_TOL: f64 = 1e-9;

/// A finite signal set: points, bit labels, and the scalar applied to
/// the base odd-integer lattice. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Constellation {
    points: Vec<Complex64>,
    labels: Vec<u32>,
    bits_per_symbol: u32,
    dimension: u8,
    scale: f64,
}

/// Binary-reflected Gray code by the reflect-and-prefix recursion:
/// G(1) = [0, 1]; G(k+1) = [0·G(k), 1·reverse(G(k))].
fn brgc(bits: u32) -> Vec<u32> {
    let mut code = vec![0u32, 1u32];
    for b in 1..bits {
        let mut next = Vec::with_capacity(code.len() * 2);
        next.extend(code.iter().copied());
        next.extend(code.iter().rev().map(|g| g | (1 << b)));
        code = next;
    }
    code
}

/// Base PAM lattice {-(L-1), ..., -1, +1, ..., +(L-1)} with BRGC labels
/// in amplitude order and scale 1.
pub fn make_pam(levels: usize) -> Result<Constellation> {
    if !levels.is_power_of_two() || !(2..=16).contains(&levels) {
        return Err(Error::invalid_argument(format!(
            "levels must be a power of two in 2..=16, got {levels}"
        )));
    }
    let bits = levels.trailing_zeros();
    let points = (0..levels)
        .map(|i| Complex64::new((2 * i as i64 - (levels as i64 - 1)) as f64, 0.0))
        .collect();
    Ok(Constellation {
        points,
        labels: brgc(bits),
        bits_per_symbol: bits,
        dimension: 1,
        scale: 1.0,
    })
}

impl Constellation {
    /// Assembles a constellation from explicit parts, validating the
    /// labeling (a permutation of 0..len) and the dimension tag.
    pub fn from_parts(
        points: Vec<Complex64>,
        labels: Vec<u32>,
        dimension: u8,
        scale: f64,
    ) -> Result<Constellation> {
        let m = points.len();
        if !m.is_power_of_two() || m < 2 {
            return Err(Error::invalid_argument("point count must be a power of two >= 2"));
        }
        if labels.len() != m {
            return Err(Error::invalid_argument("one label per point required"));
        }
        let mut seen = vec![false; m];
        for &lab in &labels {
            if (lab as usize) >= m || seen[lab as usize] {
                return Err(Error::invalid_argument("labels must be a permutation of 0..M"));
            }
            seen[lab as usize] = true;
        }
        match dimension {
            1 => {
                if points.iter().any(|p| p.im != 0.0) {
                    return Err(Error::invalid_argument("1D points must be real"));
                }
            }
            2 => {}
            _ => return Err(Error::invalid_argument("dimension must be 1 or 2")),
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid_argument("scale must be positive and finite"));
        }
        Ok(Constellation {
            points,
            labels,
            bits_per_symbol: m.trailing_zeros(),
            dimension,
            scale,
        })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits_per_symbol
    }

    pub fn dimension(&self) -> u8 {
        self.dimension
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Bit i (1-based from the MSB) of point k's label.
    pub fn bit(&self, k: usize, i: u32) -> bool {
        debug_assert!(i >= 1 && i <= self.bits_per_symbol);
        (self.labels[k] >> (self.bits_per_symbol - i)) & 1 == 1
    }

    /// Average energy sum p|x|^2 under `p`.
    pub fn energy(&self, p: &Pmf) -> Result<f64> {
        if p.len() != self.len() {
            return Err(Error::invalid_argument(format!(
                "pmf length {} does not match constellation size {}",
                p.len(),
                self.len()
            )));
        }
        Ok(self
            .points
            .iter()
            .enumerate()
            .map(|(i, x)| p.get(i) * x.norm_sqr())
            .sum())
    }

    pub fn is_normalized(&self, p: &Pmf) -> bool {
        matches!(self.energy(p), Ok(e) if (e - 1.0).abs() <= NORM_TOL)
    }

    /// Rescales so that sum p|x|^2 = 1; the applied factor folds into
    /// `scale`, which stays relative to the base lattice.
    pub fn normalize(&self, p: &Pmf) -> Result<Constellation> {
        let e = self.energy(p)?;
        let f = 1.0 / e.sqrt();
        Ok(Constellation {
            points: self.points.iter().map(|x| x * f).collect(),
            labels: self.labels.clone(),
            bits_per_symbol: self.bits_per_symbol,
            dimension: self.dimension,
            scale: self.scale * f,
        })
    }

    /// Square QAM as the product of two copies of a 1D PAM, with the
    /// product PMF and product labeling (real-part bits first). The
    /// result is normalized to unit 2D energy.
    pub fn product_qam(&self, p1d: &Pmf) -> Result<(Constellation, Pmf)> {
        if self.dimension != 1 {
            return Err(Error::invalid_argument("product_qam needs a 1D constituent"));
        }
        if p1d.len() != self.len() {
            return Err(Error::invalid_argument("pmf length mismatch"));
        }
        let l = self.len();
        let m1 = self.bits_per_symbol;
        let mut points = Vec::with_capacity(l * l);
        let mut labels = Vec::with_capacity(l * l);
        let mut probs = Vec::with_capacity(l * l);
        for (ire, xre) in self.points.iter().enumerate() {
            for (iim, xim) in self.points.iter().enumerate() {
                points.push(Complex64::new(xre.re, xim.re));
                labels.push((self.labels[ire] << m1) | self.labels[iim]);
                probs.push(p1d.get(ire) * p1d.get(iim));
            }
        }
        let p2d = Pmf::new(probs).or_else(|_| {
            // product of floats can miss the strict sum tolerance
            Pmf::normalized(
                (0..l * l)
                    .map(|k| p1d.get(k / l) * p1d.get(k % l))
                    .collect(),
            )
        })?;
        let c = Constellation {
            points,
            labels,
            bits_per_symbol: 2 * m1,
            dimension: 2,
            scale: self.scale,
        };
        let c = c.normalize(&p2d)?;
        Ok((c, p2d))
    }

    /// E[|X|^k] under `p`; the constellation must already be normalized
    /// so this is the standardized moment.
    pub fn standardized_moment(&self, p: &Pmf, k: u32) -> Result<f64> {
        if k % 2 != 0 || !(k == 4 || k == 6) {
            return Err(Error::invalid_argument("k must be 4 or 6"));
        }
        let e = self.energy(p)?;
        if (e - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "constellation not normalized under pmf (energy {e})"
            )));
        }
        Ok(self
            .points
            .iter()
            .enumerate()
            .map(|(i, x)| p.get(i) * x.norm().powi(k as i32))
            .sum())
    }
}

/// Standardized fourth and sixth moments of a complex (2D) input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mu4: f64,
    pub mu6: f64,
}

impl Moments {
    /// Moments of the 2D input equivalent to `c` under `p`. A 1D
    /// constellation is lifted to its 2D product: with U, V i.i.d.
    /// unit-energy 1D symbols and X = (U + jV)/sqrt(2),
    /// mu4 = m4/2 + 1/2 and mu6 = m6/4 + (3/4) m4.
    pub fn of_2d(c: &Constellation, p: &Pmf) -> Result<Moments> {
        match c.dimension() {
            2 => Ok(Moments {
                mu4: c.standardized_moment(p, 4)?,
                mu6: c.standardized_moment(p, 6)?,
            }),
            1 => {
                let c1 = if c.is_normalized(p) { c.clone() } else { c.normalize(p)? };
                let m4 = c1.standardized_moment(p, 4)?;
                let m6 = c1.standardized_moment(p, 6)?;
                Ok(Moments {
                    mu4: m4 / 2.0 + 0.5,
                    mu6: m6 / 4.0 + 0.75 * m4,
                })
            }
            d => Err(Error::invalid_argument(format!("unsupported dimension {d}"))),
        }
    }

    /// Complex circular Gaussian input.
    pub fn gaussian() -> Moments {
        Moments { mu4: 2.0, mu6: 6.0 }
    }

    /// Continuous uniform distribution on a 2D square (the dense-QAM
    /// limit): mu4 = 7/5, mu6 = 81/35.
    pub fn continuous_uniform_2d() -> Moments {
        Moments { mu4: 1.4, mu6: 81.0 / 35.0 }
    }

    /// Constant-modulus input (any PSK).
    pub fn constant_modulus() -> Moments {
        Moments { mu4: 1.0, mu6: 1.0 }
    }
}
