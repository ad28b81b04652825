//! End-to-end runs of the binary against small configs: exit codes,
//! CSV contracts, and idempotent appends.

use std::path::Path;
use std::process::{Command, Output};

fn shaper(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shaper"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Data rows (non-comment, non-header) of a CSV.
fn data_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn moments_prints_reference_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = shaper(&["moments"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    for id in [
        "constant-modulus",
        "uniform-16qam",
        "uniform-64qam",
        "uniform-256qam",
        "continuous-uniform",
        "gaussian",
        "16qam-a",
        "16qam-b",
        "64qam-c",
        "64qam-d",
        "256qam-e",
        "256qam-f",
    ] {
        assert!(text.contains(id), "missing row {id} in:\n{text}");
    }
    assert!(text.contains("1.6648"), "64qam-d mu4 missing:\n{text}");
}

#[test]
fn moments_unknown_preset_exits_2_listing_presets() {
    let dir = tempfile::tempdir().unwrap();
    let out = shaper(&["moments", "nosuch"], dir.path());
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("nosuch") && err.contains("64qam-d"), "{err}");
}

#[test]
fn awgn_sweep_capacity_column_and_idempotence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "a.toml",
        "snr_lo_db = 0.0\nsnr_hi_db = 20.0\nsnr_step_db = 10.0\nformats = [64]\npresets = [\"64qam-d\"]\n",
    );
    let out = shaper(&["awgn-sweep", "--config", &cfg, "--out", "a.csv"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = dir.path().join("a.csv");
    let header = std::fs::read_to_string(&csv).unwrap();
    assert!(header.contains("snr_db,format,pmf_id,rbmd_4d_bits,capacity_4d_bits,config_hash"));
    assert!(header.contains("# config_hash = "));
    assert!(header.contains("# config: formats = [64]"));

    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 9);
    let cap0: f64 = rows
        .iter()
        .find(|r| r[0] == "0" && r[2] == "uniform")
        .map(|r| r[4].parse().unwrap())
        .unwrap();
    assert_eq!(cap0, 2.0);
    let uni20: f64 = rows
        .iter()
        .find(|r| r[0] == "20" && r[2] == "uniform")
        .map(|r| r[3].parse().unwrap())
        .unwrap();
    assert!(uni20 > 11.6 && uni20 < 12.0, "uniform 64QAM at 20 dB: {uni20}");
    let mb10: f64 =
        rows.iter().find(|r| r[0] == "10" && r[2] == "mb").map(|r| r[3].parse().unwrap()).unwrap();
    let uni10: f64 = rows
        .iter()
        .find(|r| r[0] == "10" && r[2] == "uniform")
        .map(|r| r[3].parse().unwrap())
        .unwrap();
    assert!(mb10 > uni10, "shaping should gain at 10 dB");

    let before = std::fs::read_to_string(&csv).unwrap();
    let again = shaper(&["awgn-sweep", "--config", &cfg, "--out", "a.csv"], dir.path());
    assert_eq!(code(&again), 0);
    assert!(stdout(&again).contains("0 rows appended, 9 skipped"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), before, "rerun must not change the file");
}

#[test]
fn awgn_sweep_unknown_preset_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "a.toml",
        "snr_lo_db = 0.0\nsnr_hi_db = 1.0\nsnr_step_db = 1.0\nformats = [16]\npresets = [\"bogus\"]\n",
    );
    let out = shaper(&["awgn-sweep", "--config", &cfg, "--out", "a.csv"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("16qam-a"), "{}", stderr(&out));
    assert!(!dir.path().join("a.csv").exists(), "no output on config error");
}

#[test]
fn fixed_pmf_emits_schedule_and_tightens_with_penalty() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "f.toml",
        "penalty_db = 0.1\n[[search]]\nqam = 16\nlo_db = -2.0\nhi_db = 13.5\n",
    );
    let out = shaper(&["fixed-pmf", "--config", &cfg, "--out", "f.csv"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = data_rows(&dir.path().join("f.csv"));
    assert_eq!(rows.len(), 2, "two schedule entries");
    let hi1: f64 = rows[1][5].parse().unwrap();
    assert!((hi1 - 11.6).abs() < 0.3, "upper endpoint {hi1}");
    for entry in 0..2 {
        let pts = dir.path().join(format!("f_16qam_entry{entry}.pts"));
        let (c, p) = shaper_core::tabular::load_points(&pts).unwrap();
        assert_eq!(c.len(), 4);
        assert!(p.is_symmetric());
    }

    let tight = write(
        dir.path(),
        "t.toml",
        "penalty_db = 0.05\n[[search]]\nqam = 16\nlo_db = -2.0\nhi_db = 13.5\n",
    );
    let out2 = shaper(&["fixed-pmf", "--config", &tight, "--out", "t.csv"], dir.path());
    assert_eq!(code(&out2), 0, "{}", stderr(&out2));
    let rows2 = data_rows(&dir.path().join("t.csv"));
    let lo_loose: f64 = rows[0][4].parse().unwrap();
    let hi_loose: f64 = rows[1][5].parse().unwrap();
    let lo_tight: f64 = rows2[0][4].parse().unwrap();
    let hi_tight: f64 = rows2[1][5].parse().unwrap();
    assert!(lo_tight >= lo_loose && hi_tight <= hi_loose, "tighter penalty must narrow coverage");
}

#[test]
fn gn_power_runs_with_builtin_reference() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "g.toml",
        "qam = 64\npmf = \"uniform\"\nlo_dbm = -3.0\nhi_dbm = 0.0\nstep_db = 1.0\n",
    );
    let out = shaper(&["gn", "power", "--config", &cfg, "--out", "g.csv"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = data_rows(&dir.path().join("g.csv"));
    assert_eq!(rows.len(), 4);
    let snr_m15: f64 = rows.iter().find(|r| r[0] == "-1.5").map_or(f64::NAN, |r| r[1].parse().unwrap());
    assert!(snr_m15.is_nan(), "grid should not contain -1.5");
    let snr_m1: f64 = rows.iter().find(|r| r[0] == "-1").unwrap()[1].parse().unwrap();
    assert!((snr_m1 - 14.2).abs() < 0.3, "snr near optimum {snr_m1}");
}

#[test]
fn gn_power_empty_grid_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "g.toml",
        "qam = 64\npmf = \"uniform\"\nlo_dbm = 1.0\nhi_dbm = -1.0\nstep_db = 1.0\n",
    );
    let out = shaper(&["gn", "power", "--config", &cfg, "--out", "g.csv"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("empty grid"), "{}", stderr(&out));
}

#[test]
fn gn_mismatch_gain_peaks_inside_offset_range() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "m.toml",
        "qam = 64\nlo_db = 0.0\nhi_db = 1.0\nstep_db = 1.0\n",
    );
    let out = shaper(&["gn", "mismatch", "--config", &cfg, "--out", "m.csv"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = data_rows(&dir.path().join("m.csv"));
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let gain: f64 = r[3].parse().unwrap();
        assert!(gain > 0.3 && gain < 0.4, "gain {gain}");
        assert_eq!(r[5], "true", "fixed point converged");
    }
}

#[test]
fn optimize_pmf_writes_points_file_and_converges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "o.toml",
        "qam = 16\npowers_dbm = [-6.0]\ndimension = \"1d\"\nseed = 7\nquadrature_order = 16\n",
    );
    let out = shaper(&["optimize-pmf", "--config", &cfg, "--out", "o.csv"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = data_rows(&dir.path().join("o.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], "1d");
    assert_eq!(rows[0][7], "true", "converged flag");
    let mu4: f64 = rows[0][4].parse().unwrap();
    assert!(mu4 > 1.32, "low power favors heavy tails, mu4 {mu4}");
    let (c, p) = shaper_core::tabular::load_points(dir.path().join("o_m6dbm_1d.pts")).unwrap();
    assert_eq!((c.len(), c.dimension()), (4, 1));
    assert!(p.is_symmetric());
}

#[test]
fn ssfm_run_and_sweep_share_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        concat!(
            "qam = 64\npmf = \"uniform\"\npower_dbm = -0.5\nseed = 1\n",
            "n_symbols = 512\noversampling = 8\nstep_km = 5.0\nrolloff = 0.01\n",
            "[link]\nn_spans = 1\nn_channels = 1\n",
            "[sweep]\nseeds = 3\n",
        ),
    );
    let run = shaper(&["ssfm", "run", "--config", &cfg, "--out", "s.csv"], dir.path());
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    let rows = data_rows(&dir.path().join("s.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][..3], &["-0.5", "100", "1"]);
    let snr: f64 = rows[0][5].parse().unwrap();
    assert!(snr > 10.0, "one quiet span should be clean, snr {snr}");

    // the sweep reuses the run's (power, seed) row and adds the rest
    let sweep = shaper(&["ssfm", "sweep", "--config", &cfg, "--out", "s.csv"], dir.path());
    assert_eq!(code(&sweep), 0, "{}", stderr(&sweep));
    let text = stdout(&sweep);
    assert!(text.contains("2 rows appended, 1 skipped"), "{text}");
    assert!(text.contains("+-") && text.contains("3 seeds"), "{text}");
    assert_eq!(data_rows(&dir.path().join("s.csv")).len(), 3);
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "qam = \"not a number");
    let out = shaper(&["gn", "power", "--config", &cfg, "--out", "x.csv"], dir.path());
    assert_eq!(code(&out), 2);
    let missing = shaper(&["gn", "power", "--config", "absent.toml", "--out", "x.csv"], dir.path());
    assert_eq!(code(&missing), 2);
    assert!(stderr(&missing).contains("absent.toml"));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        concat!(
            "qam = 64\npmf = \"uniform\"\npower_dbm = -0.5\nseed = 1\n",
            "n_symbols = 256\noversampling = 8\nstep_km = 5.0\nrolloff = 0.01\n",
            "[link]\nn_spans = 1\nn_channels = 1\n",
        ),
    );
    let a = shaper(&["ssfm", "run", "--config", &cfg, "--out", "a.csv"], dir.path());
    let b = shaper(&["--seed", "9", "ssfm", "run", "--config", &cfg, "--out", "b.csv"], dir.path());
    assert_eq!((code(&a), code(&b)), (0, 0), "{}\n{}", stderr(&a), stderr(&b));
    let ra = data_rows(&dir.path().join("a.csv"));
    let rb = data_rows(&dir.path().join("b.csv"));
    assert_eq!(ra[0][2], "1");
    assert_eq!(rb[0][2], "9");
    assert_ne!(ra[0][5], rb[0][5], "different seed, different noise");
}
