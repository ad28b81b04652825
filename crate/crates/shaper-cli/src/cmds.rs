//! Subcommand implementations: thin wrappers binding core sweeps to
//! config files and CSV outputs.

use crate::config::{self, config_hash, resolved_toml};
use crate::output::{key_num, val, val_sci, CsvSink};
use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;
use shaper_core::air::{awgn_capacity_4d, rbmd_awgn_4d};
use shaper_core::constellation::{make_pam, Constellation, Moments};
use shaper_core::gnmodel::{air_power_sweep, best_point, mismatch_sweep, reach_sweep, ChiProvider};
use shaper_core::mbopt::{fixed_pmf_search, optimize_mb};
use shaper_core::nlopt::{optimize_pmf_1d, optimize_pmf_2d, NloptProblem, NloptSolution, OrbitMap};
use shaper_core::pmf::Pmf;
use shaper_core::presets;
use shaper_core::ssfm::{run_link, SimConfig};
use shaper_core::tabular;
use shaper_core::Error;
use std::path::{Path, PathBuf};

/// Sibling path for emitted PMF tables: `<out stem>_<tag>.pts`.
fn pmf_path(out: &Path, tag: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}_{tag}.pts"))
}

fn power_tag(dbm: f64) -> String {
    format!("{}dbm", key_num(dbm).replace('-', "m"))
}

pub fn moments(preset: &str, out: Option<&Path>) -> Result<()> {
    #[derive(Serialize)]
    struct MomentsConfig<'a> {
        preset: &'a str,
    }

    let mut rows: Vec<(String, Moments)> = Vec::new();
    if preset == "all" {
        rows.push(("constant-modulus".into(), Moments::constant_modulus()));
        for levels in [4usize, 8, 16] {
            let c = make_pam(levels)?;
            let m = Moments::of_2d(&c, &Pmf::uniform(levels))?;
            rows.push((format!("uniform-{}qam", levels * levels), m));
        }
        rows.push(("continuous-uniform".into(), Moments::continuous_uniform_2d()));
        rows.push(("gaussian".into(), Moments::gaussian()));
        for name in presets::names() {
            let p = presets::preset(name)?;
            let m = Moments::of_2d(&p.lattice(), &p.pmf())?;
            rows.push((name.to_string(), m));
        }
    } else {
        let p = presets::preset(preset)?;
        let m = Moments::of_2d(&p.lattice(), &p.pmf())?;
        rows.push((preset.to_string(), m));
    }

    println!("{:<20} {:>10} {:>10}", "input_id", "mu4", "mu6");
    for (id, m) in &rows {
        println!("{:<20} {:>10.4} {:>10.4}", id, m.mu4, m.mu6);
    }

    if let Some(path) = out {
        let cfg = MomentsConfig { preset };
        let hash = config_hash(&cfg);
        let sink =
            CsvSink::new(path, "moments", &hash, &resolved_toml(&cfg), &["input_id", "mu4", "mu6"], 1);
        let csv_rows: Vec<Vec<String>> =
            rows.iter().map(|(id, m)| vec![id.clone(), val(m.mu4), val(m.mu6)]).collect();
        let (a, s) = sink.write(&csv_rows)?;
        println!("{}: {a} rows appended, {s} skipped", path.display());
    }
    Ok(())
}

pub fn awgn_sweep(config: &Path, out: &Path) -> Result<()> {
    let cfg: config::AwgnSweepConfig = config::load(config)?;
    let snrs = config::grid(cfg.snr_lo_db, cfg.snr_hi_db, cfg.snr_step_db)?;
    let preset_names: Vec<String> = if cfg.presets.is_empty() {
        presets::names().iter().map(|s| s.to_string()).collect()
    } else {
        cfg.presets.clone()
    };
    // validate early so bad ids fail before the sweep runs
    for name in &preset_names {
        presets::preset(name)?;
    }

    // (snr, format, pmf_id, lattice, pmf); per-SNR optimized inputs get
    // a placeholder pmf and are solved in the worker
    enum Input {
        Fixed(Constellation, Pmf),
        PerSnr(Constellation),
    }
    let mut tasks: Vec<(f64, usize, String, Input)> = Vec::new();
    for &qam in &cfg.formats {
        let levels = config::integer_sqrt_qam(qam)?;
        let lattice = make_pam(levels)?;
        for &snr in &snrs {
            tasks.push((snr, qam, "uniform".into(), Input::Fixed(lattice.clone(), Pmf::uniform(levels))));
            tasks.push((snr, qam, "mb".into(), Input::PerSnr(lattice.clone())));
        }
    }
    for name in &preset_names {
        let p = presets::preset(name)?;
        for &snr in &snrs {
            tasks.push((snr, p.qam_points, name.clone(), Input::Fixed(p.lattice(), p.pmf())));
        }
    }

    let order = cfg.quadrature_order;
    let rows: Vec<Vec<String>> = tasks
        .par_iter()
        .map(|(snr, qam, id, input)| -> Result<Vec<String>> {
            let rate = match input {
                Input::Fixed(lattice, pmf) => rbmd_awgn_4d(lattice, pmf, *snr, order)?,
                Input::PerSnr(lattice) => optimize_mb(lattice, *snr, order)?.rate_4d,
            };
            Ok(vec![
                key_num(*snr),
                qam.to_string(),
                id.clone(),
                val(rate),
                val(awgn_capacity_4d(*snr)),
            ])
        })
        .collect::<Result<_>>()?;

    let hash = config_hash(&cfg);
    let sink = CsvSink::new(
        out,
        "awgn-sweep",
        &hash,
        &resolved_toml(&cfg),
        &["snr_db", "format", "pmf_id", "rbmd_4d_bits", "capacity_4d_bits"],
        3,
    );
    let (a, s) = sink.write(&rows)?;
    println!("{}: {a} rows appended, {s} skipped", out.display());
    Ok(())
}

pub fn fixed_pmf(config: &Path, out: &Path) -> Result<()> {
    let cfg: config::FixedPmfConfig = config::load(config)?;
    let mut rows = Vec::new();
    for win in &cfg.search {
        let levels = config::integer_sqrt_qam(win.qam)?;
        let lattice = make_pam(levels)?;
        let plan = fixed_pmf_search(&lattice, win.lo_db, win.hi_db, cfg.penalty_db, cfg.quadrature_order)?;
        println!(
            "{}QAM window [{}, {}] dB: capacity limit {:.2} dB, {} entries",
            win.qam,
            win.lo_db,
            win.hi_db,
            plan.cap_limit_db,
            plan.entries.len()
        );
        for (i, entry) in plan.entries.iter().enumerate() {
            let one_sided: Vec<String> = entry.pmf.one_sided().iter().map(|&p| val(p)).collect();
            println!(
                "  entry {i}: shaping snr {:.2} dB, serves [{:.2}, {:.2}] dB, one-sided [{}]",
                entry.shaping_snr_db,
                entry.range_db.0,
                entry.range_db.1,
                one_sided.join(" ")
            );
            let tag = format!("{}qam_entry{}", win.qam, i);
            tabular::save_points(pmf_path(out, &tag), &lattice, &entry.pmf)?;
            rows.push(vec![
                win.qam.to_string(),
                i.to_string(),
                val(entry.shaping_snr_db),
                val(entry.nu),
                val(entry.range_db.0),
                val(entry.range_db.1),
                val(plan.cap_limit_db),
                one_sided.join(";"),
            ]);
        }
    }
    let hash = config_hash(&cfg);
    let sink = CsvSink::new(
        out,
        "fixed-pmf",
        &hash,
        &resolved_toml(&cfg),
        &[
            "format",
            "entry",
            "shaping_snr_db",
            "nu",
            "range_lo_db",
            "range_hi_db",
            "cap_limit_db",
            "one_sided_pmf",
        ],
        2,
    );
    let (a, s) = sink.write(&rows)?;
    println!("{}: {a} rows appended, {s} skipped", out.display());
    Ok(())
}

pub fn gn_power(config: &Path, out: &Path) -> Result<()> {
    let cfg: config::GnPowerConfig = config::load(config)?;
    let base = config.parent().unwrap_or_else(|| Path::new("."));
    let (link, chi) = cfg.chi.load(base)?;
    let (lattice, pmf) = config::resolve_input(&cfg.pmf, cfg.qam, base)?;
    let powers = config::grid(cfg.lo_dbm, cfg.hi_dbm, cfg.step_db)?;
    let points = air_power_sweep(&lattice, &pmf, &link, &chi, &powers, cfg.quadrature_order)?;
    let best = best_point(&points);
    println!(
        "best launch power {} dBm: snr_eff {:.3} dB, rate {:.4} bit/4D",
        best.power_dbm, best.snr_eff_db, best.rate_4d
    );
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![key_num(p.power_dbm), val(p.snr_eff_db), val(p.rate_4d), val_sci(p.ase_w), val_sci(p.nli_w)]
        })
        .collect();
    let hash = config_hash(&cfg);
    let sink = CsvSink::new(
        out,
        "gn power",
        &hash,
        &resolved_toml(&cfg),
        &["power_dbm", "snr_eff_db", "rbmd_4d_bits", "ase_w", "nli_w"],
        1,
    );
    let (a, s) = sink.write(&rows)?;
    println!("{}: {a} rows appended, {s} skipped", out.display());
    Ok(())
}

pub fn gn_reach(config: &Path, out: &Path) -> Result<()> {
    let cfg: config::GnReachConfig = config::load(config)?;
    let base = config.parent().unwrap_or_else(|| Path::new("."));
    let (link, chi) = cfg.chi.load(base)?;
    let levels = config::integer_sqrt_qam(cfg.qam)?;
    let lattice = make_pam(levels)?;
    let distances = config::grid(cfg.lo_km, cfg.hi_km, cfg.step_km)?;
    let provider = ChiProvider::LinearSpans { reference: chi, reference_spans: link.n_spans };
    let result = reach_sweep(&lattice, &link, &provider, &distances, cfg.target_rate_4d, cfg.quadrature_order)?;
    println!(
        "target {:.2} bit/4D: uniform reach {:.0} km, shaped reach {:.0} km, gain {:.0} km",
        result.target_rate_4d, result.reach_uniform_km, result.reach_shaped_km, result.gain_km
    );
    let rows: Vec<Vec<String>> = result
        .points
        .iter()
        .map(|p| {
            vec![
                key_num(p.distance_km),
                p.n_spans.to_string(),
                val(p.snr_uniform_db),
                val(p.air_uniform_4d),
                val(p.air_shaped_4d),
            ]
        })
        .collect();
    let hash = config_hash(&cfg);
    let sink = CsvSink::new(
        out,
        "gn reach",
        &hash,
        &resolved_toml(&cfg),
        &["distance_km", "n_spans", "snr_uniform_db", "rbmd_uniform_4d_bits", "rbmd_shaped_4d_bits"],
        1,
    );
    let (a, s) = sink.write(&rows)?;
    println!("{}: {a} rows appended, {s} skipped", out.display());
    Ok(())
}

pub fn gn_mismatch(config: &Path, out: &Path) -> Result<()> {
    let cfg: config::GnMismatchConfig = config::load(config)?;
    let base = config.parent().unwrap_or_else(|| Path::new("."));
    let (link, chi) = cfg.chi.load(base)?;
    let levels = config::integer_sqrt_qam(cfg.qam)?;
    let lattice = make_pam(levels)?;
    let deltas = config::grid(cfg.lo_db, cfg.hi_db, cfg.step_db)?;
    let result = mismatch_sweep(&lattice, &link, &chi, &deltas, cfg.quadrature_order)?;
    println!(
        "uniform baseline at {} dBm: snr {:.3} dB, rate {:.4} bit/4D",
        result.power_dbm, result.uniform_snr_db, result.uniform_rate_4d
    );
    let rows: Vec<Vec<String>> = result
        .points
        .iter()
        .map(|p| {
            vec![
                key_num(p.delta_db),
                val(p.channel_snr_db),
                val(p.shaped_rate_4d),
                val(p.gain_4d),
                p.iterations.to_string(),
                p.converged.to_string(),
            ]
        })
        .collect();
    let hash = config_hash(&cfg);
    let sink = CsvSink::new(
        out,
        "gn mismatch",
        &hash,
        &resolved_toml(&cfg),
        &["delta_db", "channel_snr_db", "rbmd_shaped_4d_bits", "gain_4d_bits", "iterations", "converged"],
        1,
    );
    let (a, s) = sink.write(&rows)?;
    println!("{}: {a} rows appended, {s} skipped", out.display());
    let stuck: Vec<f64> =
        result.points.iter().filter(|p| !p.converged).map(|p| p.delta_db).collect();
    if !stuck.is_empty() {
        return Err(Error::NonConvergence(format!(
            "fixed point did not settle at delta {stuck:?} dB; rows retained in {}",
            out.display()
        ))
        .into());
    }
    Ok(())
}

pub fn optimize_pmf(config: &Path, out: &Path, seed_override: Option<u64>) -> Result<()> {
    let mut cfg: config::OptimizePmfConfig = config::load(config)?;
    let base = config.parent().unwrap_or_else(|| Path::new("."));
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    let (link, chi) = cfg.chi.load(base)?;
    let levels = config::integer_sqrt_qam(cfg.qam)?;
    let lattice = make_pam(levels)?;
    let dims: Vec<&str> = match cfg.dimension.as_str() {
        "1d" => vec!["1d"],
        "2d" => vec!["2d"],
        "both" => vec!["1d", "2d"],
        other => bail!("dimension must be 1d, 2d, or both, not {other}"),
    };

    let tasks: Vec<(f64, &str)> =
        cfg.powers_dbm.iter().flat_map(|&p| dims.iter().map(move |&d| (p, d))).collect();
    let solutions: Vec<(f64, &str, NloptSolution)> = tasks
        .par_iter()
        .map(|&(power, dim)| -> Result<(f64, &str, NloptSolution)> {
            let problem = NloptProblem {
                lattice: &lattice,
                link: &link,
                chi: &chi,
                power_dbm: power,
                order: cfg.quadrature_order,
            };
            let sol = match dim {
                "1d" => optimize_pmf_1d(&problem, cfg.seed)?,
                _ => optimize_pmf_2d(&problem, cfg.seed)?,
            };
            Ok((power, dim, sol))
        })
        .collect::<Result<_>>()?;

    let product = OrbitMap::build(&lattice)?.constellation;
    let mut rows = Vec::new();
    for (power, dim, sol) in &solutions {
        println!(
            "{} dBm {dim}: rate {:.4} bit/4D, snr_eff {:.3} dB, mu4 {:.4}, {} iterations{}",
            power,
            sol.rate_4d,
            sol.snr_eff_db,
            sol.moments.mu4,
            sol.iterations,
            if sol.converged { "" } else { " (not converged)" }
        );
        let tag = format!("{}_{}", power_tag(*power), dim);
        let c = if *dim == "1d" { &lattice } else { &product };
        tabular::save_points(pmf_path(out, &tag), c, &sol.pmf)?;
        rows.push(vec![
            key_num(*power),
            dim.to_string(),
            val(sol.snr_eff_db),
            val(sol.rate_4d),
            val(sol.moments.mu4),
            val(sol.moments.mu6),
            sol.iterations.to_string(),
            sol.converged.to_string(),
        ]);
    }
    let hash = config_hash(&cfg);
    let sink = CsvSink::new(
        out,
        "optimize-pmf",
        &hash,
        &resolved_toml(&cfg),
        &["power_dbm", "dimension", "snr_eff_db", "rbmd_4d_bits", "mu4", "mu6", "iterations", "converged"],
        2,
    );
    let (a, s) = sink.write(&rows)?;
    println!("{}: {a} rows appended, {s} skipped", out.display());
    let stuck: Vec<f64> =
        solutions.iter().filter(|(_, _, s)| !s.converged).map(|(p, _, _)| *p).collect();
    if !stuck.is_empty() {
        return Err(Error::NonConvergence(format!(
            "ascent hit the iteration cap at {stuck:?} dBm; rows retained in {}",
            out.display()
        ))
        .into());
    }
    Ok(())
}

fn sim_config_from(cfg: &config::SsfmConfig, base: &Path, power_dbm: f64, seed: u64) -> Result<SimConfig> {
    let (lattice, pmf) = config::resolve_input(&cfg.pmf, cfg.qam, base)?;
    Ok(SimConfig {
        link: cfg.link.resolve(),
        lattice,
        pmf,
        power_dbm,
        oversampling: cfg.oversampling,
        n_symbols: cfg.n_symbols,
        step_km: cfg.step_km,
        rolloff: cfg.rolloff,
        seed,
    })
}

const SSFM_COLUMNS: [&str; 8] = [
    "power_dbm",
    "distance_km",
    "seed",
    "snr_x_db",
    "snr_y_db",
    "channel_snr_db",
    "rbmd_4d_bits",
    "low_sample_warning",
];

fn ssfm_row(power: f64, distance_km: f64, seed: u64, r: &shaper_core::ssfm::RunResult) -> Vec<String> {
    vec![
        key_num(power),
        key_num(distance_km),
        seed.to_string(),
        val(r.snr_db_per_pol[0]),
        val(r.snr_db_per_pol[1]),
        val(r.channel_snr_db),
        val(r.rbmd_4d),
        r.low_sample_warning.to_string(),
    ]
}

pub fn ssfm_run(config: &Path, out: &Path, seed_override: Option<u64>) -> Result<()> {
    let mut cfg: config::SsfmConfig = config::load(config)?;
    let base = config.parent().unwrap_or_else(|| Path::new("."));
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    let sim = sim_config_from(&cfg, base, cfg.power_dbm, cfg.seed)?;
    let distance_km = sim.link.total_km();
    let result = run_link(&sim)?;
    println!(
        "{} dBm over {} km (seed {}): snr {:.3} dB, rate {:.4} bit/4D",
        cfg.power_dbm, distance_km, cfg.seed, result.channel_snr_db, result.rbmd_4d
    );
    if result.low_sample_warning {
        println!("warning: noise too low to resolve at this block length; snr is a floor");
    }
    let hash = config_hash(&cfg);
    let sink = CsvSink::new(out, "ssfm run", &hash, &resolved_toml(&cfg), &SSFM_COLUMNS, 3);
    let (a, s) = sink.write(&[ssfm_row(cfg.power_dbm, distance_km, cfg.seed, &result)])?;
    println!("{}: {a} rows appended, {s} skipped", out.display());
    Ok(())
}

pub fn ssfm_sweep(config: &Path, out: &Path, seed_override: Option<u64>) -> Result<()> {
    let mut cfg: config::SsfmConfig = config::load(config)?;
    let base = config.parent().unwrap_or_else(|| Path::new("."));
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    let sweep = cfg
        .sweep
        .clone()
        .ok_or_else(|| Error::Config("ssfm sweep needs a [sweep] section".into()))?;
    if sweep.seeds == 0 {
        return Err(Error::Config("sweep.seeds must be at least 1".into()).into());
    }
    let powers = if sweep.powers_dbm.is_empty() { vec![cfg.power_dbm] } else { sweep.powers_dbm.clone() };

    let tasks: Vec<(f64, u64)> =
        powers.iter().flat_map(|&p| (0..sweep.seeds).map(move |i| (p, cfg.seed + i))).collect();
    let results: Vec<(f64, u64, f64, shaper_core::ssfm::RunResult)> = tasks
        .par_iter()
        .map(|&(power, seed)| -> Result<(f64, u64, f64, shaper_core::ssfm::RunResult)> {
            let sim = sim_config_from(&cfg, base, power, seed)?;
            let distance_km = sim.link.total_km();
            let r = run_link(&sim)?;
            Ok((power, seed, distance_km, r))
        })
        .collect::<Result<_>>()?;

    let rows: Vec<Vec<String>> =
        results.iter().map(|(p, seed, d, r)| ssfm_row(*p, *d, *seed, r)).collect();
    let hash = config_hash(&cfg);
    let sink = CsvSink::new(out, "ssfm sweep", &hash, &resolved_toml(&cfg), &SSFM_COLUMNS, 3);
    let (a, s) = sink.write(&rows)?;

    for &power in &powers {
        let snrs: Vec<f64> = results
            .iter()
            .filter(|(p, ..)| *p == power)
            .map(|(_, _, _, r)| r.channel_snr_db)
            .collect();
        let n = snrs.len() as f64;
        let mean = snrs.iter().sum::<f64>() / n;
        let std = if snrs.len() > 1 {
            (snrs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        println!("{power} dBm: snr {mean:.3} +- {std:.3} dB over {} seeds", snrs.len());
    }
    println!("{}: {a} rows appended, {s} skipped", out.display());
    Ok(())
}
