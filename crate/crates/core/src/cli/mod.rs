//! Front end shared by the `sim` binary and the tests: figure presets,
//! JSON experiment configs, and CSV/JSON output.

mod presets;

pub use presets::{preset, CurveSpec, Preset, ReferenceSpec, DEFAULT_TRIALS, PRESET_NAMES};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feedback::{ccdf_eps, ccdf_eps_upper_bound, elog_eps_bounds, Regime};
use crate::montecarlo::{reference_curve, CurvePoint, Experiment, ExperimentConfig};

pub const CSV_HEADER: &str = "U,mean_bps_hz,stderr,mean_scheduled,n_trials";
pub const THREADS_ENV: &str = "SIM_THREADS";
pub const BUILD_DESCRIBE: &str = env!("SIM_GIT_DESCRIBE");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestCurve {
    pub name: String,
    pub file: String,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestReference {
    pub name: String,
    pub file: String,
    pub regime: Regime,
    pub n_t: usize,
}

/// Written next to the CSVs of every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub run: String,
    pub seed: u64,
    pub build: String,
    pub curves: Vec<ManifestCurve>,
    pub references: Vec<ManifestReference>,
    /// Only field that differs between identical reruns.
    pub wall_clock_seconds: f64,
}

impl Manifest {
    pub const FILE: &'static str = "manifest.json";

    pub fn load(dir: &Path) -> Result<Manifest> {
        Ok(serde_json::from_str(&fs::read_to_string(
            dir.join(Self::FILE),
        )?)?)
    }
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::with_capacity(64 * (points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.users, p.mean, p.stderr, p.mean_scheduled, p.n_trials
        );
    }
    out
}

fn reference_csv(users: &[usize], values: &[f64]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (u, v) in users.iter().zip(values) {
        let _ = writeln!(out, "{u},{v},0,0,0");
    }
    out
}

/// Worker count from `SIM_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::config(
                THREADS_ENV,
                format!("expected a positive integer, got `{v}`"),
            )),
        },
    }
}

/// Runs `f` on a dedicated pool when a worker count is given.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config(THREADS_ENV, e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn run_curves(
    run: &str,
    seed: u64,
    curves: &[CurveSpec],
    references: &[ReferenceSpec],
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    for c in curves {
        c.config.validate()?;
    }
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let mut manifest = Manifest {
        run: run.to_string(),
        seed,
        build: BUILD_DESCRIBE.to_string(),
        curves: Vec::new(),
        references: Vec::new(),
        wall_clock_seconds: 0.0,
    };
    for c in curves {
        let points = Experiment::new(c.config.clone())?.run()?;
        let file = format!("{run}_{}.csv", c.name);
        let path = out_dir.join(&file);
        fs::write(&path, curve_csv(&points))?;
        written.push(path);
        manifest.curves.push(ManifestCurve {
            name: c.name.clone(),
            file,
            config: c.config.clone(),
        });
    }
    for r in references {
        let values = reference_curve(r.regime, r.n_t, &r.user_grid)?;
        let file = format!("{run}_{}.csv", r.name);
        let path = out_dir.join(&file);
        fs::write(&path, reference_csv(&r.user_grid, &values))?;
        written.push(path);
        manifest.references.push(ManifestReference {
            name: r.name.clone(),
            file,
            regime: r.regime,
            n_t: r.n_t,
        });
    }
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    let path = out_dir.join(Manifest::FILE);
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    written.push(path);
    Ok(written)
}

/// Runs every curve of a named preset into `out_dir`.
pub fn run_preset(
    name: &str,
    seed: u64,
    trials: Option<usize>,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if trials == Some(0) {
        return Err(Error::config("trials", "must be at least 1"));
    }
    let p = preset(name, seed, trials).ok_or_else(|| Error::UnknownPreset {
        name: name.to_string(),
        available: PRESET_NAMES.join(", "),
    })?;
    run_curves(p.name, seed, &p.curves, &p.references, out_dir)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    // serde names unknown and missing fields in its message
    let cfg: ExperimentConfig = serde_json::from_str(&text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs a single user-supplied configuration into `out_dir`.
pub fn run_custom(config_path: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let cfg = load_config(config_path)?;
    let name = format!("{}_custom", cfg.algorithm.label());
    let seed = cfg.seed;
    run_curves(
        "custom",
        seed,
        &[CurveSpec { name, config: cfg }],
        &[],
        out_dir,
    )
}

/// `delta,ccdf,upper_bound` on `δ = 0, 0.05, …, 0.5`.
pub fn ccdf_table(n_t: usize, m: usize) -> Result<String> {
    let mut out = String::from("delta,ccdf,upper_bound\n");
    for k in 0..=10 {
        let delta = k as f64 * 0.05;
        let _ = writeln!(
            out,
            "{delta},{},{}",
            ccdf_eps(delta, n_t, m)?,
            ccdf_eps_upper_bound(delta, n_t, m)?
        );
    }
    Ok(out)
}

/// `n_t,m,p_alpha,lower,upper` for `E[-ln ε]`.
pub fn elog_bounds_table(n_t: usize, m: usize) -> Result<String> {
    let b = elog_eps_bounds(n_t, m)?;
    Ok(format!(
        "n_t,m,p_alpha,lower,upper\n{n_t},{m},{},{},{}\n",
        b.p_alpha, b.lower, b.upper
    ))
}
