//! Maxwell-Boltzmann input optimization on a PAM lattice: per-SNR rate
//! maximization over the family exponent, SNR-penalty of a frozen PMF,
//! and the two-entry piecewise-constant PMF schedule search.

use crate::air::{awgn_capacity_snr_db, rbmd_quadrature};
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::pmf::{maxwell_boltzmann, Pmf};
use crate::quadrature::DEFAULT_ORDER;
use std::collections::HashMap;

/// Interval width at which the golden-section exponent search stops.
pub const GOLDEN_TOL: f64 = 1e-7;

/// Grid pitch of the schedule search, dB.
pub const SEARCH_GRID_DB: f64 = 0.05;

/// Penalties larger than this are reported as infinite.
pub const MAX_PENALTY_DB: f64 = 6.0;

/// A per-SNR optimized Maxwell-Boltzmann input on a 1D lattice.
#[derive(Debug, Clone)]
pub struct ShapingSolution {
    pub snr_db: f64,
    pub nu: f64,
    pub pmf: Pmf,
    /// Bit-metric rate per real symbol at `snr_db`.
    pub rate_1d: f64,
    /// Same rate per 4D symbol (four real dimensions).
    pub rate_4d: f64,
}

/// One frozen PMF of a schedule and the SNR interval it serves.
#[derive(Debug, Clone)]
pub struct PlanEntry {
    pub shaping_snr_db: f64,
    pub nu: f64,
    pub pmf: Pmf,
    pub range_db: (f64, f64),
}

/// Result of `fixed_pmf_search`: two PMFs covering a low and a high SNR
/// interval that meet at the capacity-proximity limit.
#[derive(Debug, Clone)]
pub struct FixedPmfPlan {
    pub entries: Vec<PlanEntry>,
    /// Largest grid SNR where the shaped envelope stays within the
    /// penalty budget of AWGN capacity.
    pub cap_limit_db: f64,
    pub penalty_db: f64,
}

/// Largest useful family exponent for a lattice: beyond it the mass
/// ratio between the two innermost amplitudes falls under 1e-3 and the
/// input has degenerated to its innermost pair.
pub fn nu_upper_bound(lattice: &Constellation) -> Result<f64> {
    if lattice.dimension() != 1 || lattice.len() < 4 {
        return Err(Error::invalid_argument("need a 1D lattice with at least 4 points"));
    }
    let mut amps: Vec<f64> = lattice.points().iter().map(|x| x.re.abs()).collect();
    amps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    amps.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let (a1, a2) = (amps[0] / lattice.scale(), amps[1] / lattice.scale());
    Ok((1e3f64).ln() / (a2 * a2 - a1 * a1))
}

fn rate_of_nu(lattice: &Constellation, nu: f64, snr_db: f64, order: usize) -> Result<(Pmf, f64)> {
    let p = maxwell_boltzmann(lattice, nu)?;
    let c = lattice.normalize(&p)?;
    let r = rbmd_quadrature(&c, &p, snr_db, order)?.value;
    Ok((p, r))
}

/// Best Maxwell-Boltzmann input at one SNR by golden-section search on
/// the exponent over [0, nu_upper_bound]. The rate is unimodal in the
/// exponent at fixed SNR, so the bracket shrinks safely.
pub fn optimize_mb(lattice: &Constellation, snr_db: f64, order: usize) -> Result<ShapingSolution> {
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = 0.0;
    let mut b = nu_upper_bound(lattice)?;
    let f = |nu: f64| -> Result<f64> { Ok(rate_of_nu(lattice, nu, snr_db, order)?.1) };
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > GOLDEN_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d)?;
        }
    }
    let nu = 0.5 * (a + b);
    let (pmf, rate_1d) = rate_of_nu(lattice, nu, snr_db, order)?;
    Ok(ShapingSolution { snr_db, nu, pmf, rate_1d, rate_4d: 4.0 * rate_1d })
}

/// Extra SNR (dB) a frozen PMF needs at `snr_db` to reach
/// `target_rate_1d`: the horizontal gap, by bisection to 1e-3 dB.
/// Returns infinity when the target exceeds what the PMF can ever carry
/// (its entropy) or the gap exceeds `MAX_PENALTY_DB`.
pub fn snr_penalty(
    lattice: &Constellation,
    pmf: &Pmf,
    snr_db: f64,
    target_rate_1d: f64,
    order: usize,
) -> Result<f64> {
    if target_rate_1d >= pmf.entropy_bits() {
        return Ok(f64::INFINITY);
    }
    let c = lattice.normalize(pmf)?;
    let r = |s: f64| -> Result<f64> { Ok(rbmd_quadrature(&c, pmf, s, order)?.value) };
    if r(snr_db)? >= target_rate_1d {
        return Ok(0.0);
    }
    if r(snr_db + MAX_PENALTY_DB)? < target_rate_1d {
        return Ok(f64::INFINITY);
    }
    let mut lo = 0.0;
    let mut hi = MAX_PENALTY_DB;
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if r(snr_db + mid)? >= target_rate_1d {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Finds a two-entry PMF schedule over [lo_db, hi_db]: on a 0.05 dB
/// grid, computes the per-SNR optimized envelope, locates the last grid
/// SNR within `penalty_db` (horizontal) of AWGN capacity, then picks
///   entry 1: the PMF whose coverage interval contains that limit with
///            the lowest reachable lower edge, serving [edge, limit];
///   entry 2: the PMF reaching highest above the limit while still
///            covering it from below, serving [limit, edge].
/// A PMF covers a grid SNR when boosting the channel by `penalty_db`
/// lifts its rate to the envelope there.
pub fn fixed_pmf_search(
    lattice: &Constellation,
    lo_db: f64,
    hi_db: f64,
    penalty_db: f64,
    order: usize,
) -> Result<FixedPmfPlan> {
    if !(lo_db < hi_db) || !(penalty_db > 0.0) {
        return Err(Error::invalid_argument("need lo < hi and a positive penalty"));
    }
    let n = ((hi_db - lo_db) / SEARCH_GRID_DB).round() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|i| lo_db + SEARCH_GRID_DB * i as f64).collect();

    let mut env_nu = vec![0.0; n];
    let mut env_r = vec![0.0; n];
    for i in 0..n {
        let sol = optimize_mb(lattice, grid[i], order)?;
        env_nu[i] = sol.nu;
        env_r[i] = sol.rate_1d;
    }

    // capacity-proximity limit: last grid point within budget
    let cap_idx = (0..n)
        .rev()
        .find(|&i| grid[i] - awgn_capacity_snr_db(4.0 * env_r[i]) <= penalty_db)
        .ok_or_else(|| {
            Error::Infeasible("no grid SNR within the capacity budget; widen the window".into())
        })?;

    let mut ctx = SearchCtx {
        lattice,
        grid: &grid,
        env_nu: &env_nu,
        env_r: &env_r,
        penalty_db,
        order,
        cache: HashMap::new(),
        cov: HashMap::new(),
        order_seen: Vec::new(),
    };
    // candidates: every 5th grid index, then two refinement passes of
    // +-6 fine indices around the incumbent; first maximum wins ties
    for ti in (0..n).step_by(5) {
        ctx.visit(ti)?;
    }

    let score1 = |_: usize, (lo, hi): (usize, usize)| -> i64 {
        if lo <= cap_idx && cap_idx <= hi {
            (cap_idx - lo) as i64
        } else {
            -1
        }
    };
    let score2 = |_: usize, (lo, hi): (usize, usize)| -> i64 {
        if lo <= cap_idx {
            hi as i64
        } else {
            -1
        }
    };
    let b1 = ctx.pick(&score1)?;
    let b2 = ctx.pick(&score2)?;

    let mut entries = Vec::new();
    for (b, is_low) in [(b1, true), (b2, false)] {
        let (lo, hi) = ctx.cov[&b];
        let nu = env_nu[b];
        let pmf = maxwell_boltzmann(lattice, nu)?;
        let range_db = if is_low {
            (grid[lo], grid[cap_idx])
        } else {
            (grid[cap_idx], grid[hi])
        };
        entries.push(PlanEntry { shaping_snr_db: grid[b], nu, pmf, range_db });
    }
    Ok(FixedPmfPlan { entries, cap_limit_db: grid[cap_idx], penalty_db })
}

/// Mutable state of one schedule search: the rate cache and the
/// coverage intervals of visited candidates, in visit order so ties
/// resolve to the earliest candidate.
struct SearchCtx<'a> {
    lattice: &'a Constellation,
    grid: &'a [f64],
    env_nu: &'a [f64],
    env_r: &'a [f64],
    penalty_db: f64,
    order: usize,
    cache: HashMap<(u64, i64), f64>,
    cov: HashMap<usize, (usize, usize)>,
    order_seen: Vec<usize>,
}

impl SearchCtx<'_> {
    fn rfix(&mut self, nu: f64, s: f64) -> Result<f64> {
        let key = (nu.to_bits(), (s * 1e6).round() as i64);
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let v = rate_of_nu(self.lattice, nu, s, self.order)?.1;
        self.cache.insert(key, v);
        Ok(v)
    }

    fn feasible(&mut self, nu: f64, i: usize) -> Result<bool> {
        Ok(self.rfix(nu, self.grid[i] + self.penalty_db)? >= self.env_r[i])
    }

    /// Contiguous grid interval around `ti` that the candidate covers.
    fn coverage(&mut self, ti: usize) -> Result<(usize, usize)> {
        let nu = self.env_nu[ti];
        let mut lo = ti;
        while lo > 0 && self.feasible(nu, lo - 1)? {
            lo -= 1;
        }
        let mut hi = ti;
        while hi < self.grid.len() - 1 && self.feasible(nu, hi + 1)? {
            hi += 1;
        }
        Ok((lo, hi))
    }

    fn visit(&mut self, ti: usize) -> Result<()> {
        if !self.cov.contains_key(&ti) {
            let c = self.coverage(ti)?;
            self.cov.insert(ti, c);
            self.order_seen.push(ti);
        }
        Ok(())
    }

    fn best(&self, score: &dyn Fn(usize, (usize, usize)) -> i64) -> usize {
        let mut arg = self.order_seen[0];
        let mut val = i64::MIN;
        for &ti in &self.order_seen {
            let s = score(ti, self.cov[&ti]);
            if s > val {
                val = s;
                arg = ti;
            }
        }
        arg
    }

    fn pick(&mut self, score: &dyn Fn(usize, (usize, usize)) -> i64) -> Result<usize> {
        let mut b = self.best(score);
        for _ in 0..2 {
            let lo = b.saturating_sub(6);
            let hi = (b + 6).min(self.grid.len() - 1);
            for ti in lo..=hi {
                self.visit(ti)?;
            }
            b = self.best(score);
        }
        Ok(b)
    }
}

/// A sampled monotone rate-vs-SNR reference, invertible by linear
/// interpolation; used to express shaped rates as horizontal SNR gains.
#[derive(Debug, Clone)]
pub struct RateCurve {
    snr_db: Vec<f64>,
    rate_1d: Vec<f64>,
}

impl RateCurve {
    /// Uniform-input rate curve of the lattice over [lo, hi] dB.
    pub fn uniform(lattice: &Constellation, lo_db: f64, hi_db: f64, step_db: f64, order: usize) -> Result<RateCurve> {
        if !(lo_db < hi_db) || !(step_db > 0.0) {
            return Err(Error::invalid_argument("need lo < hi and a positive step"));
        }
        let p = Pmf::uniform(lattice.len());
        let c = lattice.normalize(&p)?;
        let n = ((hi_db - lo_db) / step_db).round() as usize + 1;
        let snr_db: Vec<f64> = (0..n).map(|i| lo_db + step_db * i as f64).collect();
        let rate_1d = snr_db
            .iter()
            .map(|&s| Ok(rbmd_quadrature(&c, &p, s, order)?.value))
            .collect::<Result<Vec<f64>>>()?;
        Ok(RateCurve { snr_db, rate_1d })
    }

    /// SNR at which the curve reaches `rate_1d`, clamped to the sampled
    /// ends.
    pub fn snr_at_rate(&self, rate_1d: f64) -> f64 {
        let r = &self.rate_1d;
        if rate_1d <= r[0] {
            return self.snr_db[0];
        }
        if rate_1d >= r[r.len() - 1] {
            return self.snr_db[r.len() - 1];
        }
        let j = r.partition_point(|&v| v < rate_1d) - 1;
        let t = (rate_1d - r[j]) / (r[j + 1] - r[j]);
        self.snr_db[j] + t * (self.snr_db[j + 1] - self.snr_db[j])
    }

    /// Horizontal gain of achieving `rate_1d` at `snr_db` against this
    /// reference: positive when the reference needs more SNR.
    pub fn gain_db(&self, rate_1d: f64, snr_db: f64) -> f64 {
        self.snr_at_rate(rate_1d) - snr_db
    }
}

/// Convenience: default-order optimizer used by callers that do not
/// tune quadrature order.
pub fn optimize_mb_default(lattice: &Constellation, snr_db: f64) -> Result<ShapingSolution> {
    optimize_mb(lattice, snr_db, DEFAULT_ORDER)
}
