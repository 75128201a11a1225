//! CSV bundles behind the seven figures, each with a manifest.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::Path;

use frmod_core::params::{
    phi_curve, q1_admissible_range, speclimit_to_timelimit, target_phase_to_q,
};
use frmod_core::simulate::Method;
use frmod_core::{Side, SpecLimit};
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{acvf_table, simulate_run, spectrum_table, FrmodReport, Overrides};
use crate::config::{Config, FrmodConfig, GridConfig, ModelConfig, SimulationConfig};
use crate::error::CliError;
use crate::output::{json_bytes, Cell, Table};

pub const FIGURE_N: usize = 4096;
pub const FIGURE_HMAX: usize = 100;
pub const FIGURE_SEED: u64 = 1;
pub const MANIFEST: &str = "manifest.json";

/// Spectral limits quoted for figures 1 and 2 and the phase they produce.
pub const FIGURE1_SPEC: (f64, f64) = (6.2, 25.6);
pub const FIGURE1_PHI: f64 = -0.42;

/// Points per phi curve in figure 7.
pub const CURVE_POINTS: usize = 401;

/// `(panel, d, q0)` of every figure-7 curve.
pub const FIGURE7_CURVES: [(&str, f64, f64); 10] = [
    ("left", 0.1, 1.0),
    ("left", 0.2, 1.0),
    ("left", 0.35, 1.0),
    ("left", 0.45, 1.0),
    ("middle", 0.35, 0.5),
    ("middle", 0.35, 1.0),
    ("middle", 0.35, 2.0),
    ("right", 0.2, 0.5),
    ("right", 0.2, 1.0),
    ("right", 0.2, 2.0),
];

/// The `d` for which `(cf⁺, cf⁻) = (6.2, 25.6)` gives `φ = -0.42`.
pub fn figure1_memory() -> Result<f64, CliError> {
    let limit = SpecLimit::new(FIGURE1_SPEC.0, FIGURE1_SPEC.1)?;
    let phi = |d: f64| speclimit_to_timelimit(limit, d).map(|t| t.phi - FIGURE1_PHI);
    let (mut lo, mut hi) = (0.01, 0.49);
    if phi(lo)? >= 0.0 || phi(hi)? <= 0.0 {
        return Err(CliError::Check(
            "figure 1 phase is not bracketed on (0.01, 0.49)".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn frmod(d: f64, lambda0: f64, q0: Option<f64>, q1: f64, boundary: Option<Side>) -> FrmodConfig {
    FrmodConfig {
        d,
        lambda0,
        q0,
        q1,
        boundary,
        ar: Vec::new(),
        ma: Vec::new(),
    }
}

/// Model of figures 1 to 6.
pub fn figure_model(which: u8) -> Result<FrmodConfig, CliError> {
    Ok(match which {
        1 | 2 => {
            let d = figure1_memory()?;
            let limit = SpecLimit::new(FIGURE1_SPEC.0, FIGURE1_SPEC.1)?;
            let q = target_phase_to_q(speclimit_to_timelimit(limit, d)?, d)?;
            let q1 = if which == 1 { q.q1 } else { -q.q1 };
            frmod(d, FRAC_PI_4, Some(q.q0), q1, None)
        }
        3 => frmod(0.2, FRAC_PI_2, Some(1.0), 0.5, None),
        4 => frmod(0.35, FRAC_PI_2, Some(1.0), -2.0, None),
        5 => frmod(0.4, FRAC_PI_4, None, 3.0, Some(Side::Minus)),
        6 => frmod(0.4, FRAC_PI_4, None, 3.0, Some(Side::Plus)),
        _ => {
            return Err(CliError::Config(format!(
                "figure {which} has no panel bundle"
            )))
        }
    })
}

pub fn figure_config(which: u8, seed: u64) -> Result<Config, CliError> {
    Ok(Config {
        model: ModelConfig::Frmod(figure_model(which)?),
        simulation: Some(SimulationConfig {
            n: FIGURE_N,
            seed,
            method: Method::ExactEmbedding,
            replicates: 1,
            truncation: None,
        }),
        grid: Some(GridConfig::default()),
    })
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| CliError::io(path.display(), e))
}

#[derive(Debug, Clone, Serialize)]
struct FileEntry {
    role: &'static str,
    path: String,
    columns: Vec<&'static str>,
}

fn entry(role: &'static str, path: &str, table: &Table) -> FileEntry {
    FileEntry {
        role,
        path: path.to_string(),
        columns: table.headers.clone(),
    }
}

/// Writes the bundle of figure `which` into `dir` and returns the manifest.
pub fn write_figure(which: u8, dir: &Path, seed: Option<u64>) -> Result<Value, CliError> {
    if !(1..=7).contains(&which) {
        return Err(CliError::Config(format!(
            "figure must be in 1..=7, got {which}"
        )));
    }
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let manifest = if which == 7 {
        figure7(dir)?
    } else {
        panel_figure(which, dir, seed.unwrap_or(FIGURE_SEED))?
    };
    write_file(dir, MANIFEST, &json_bytes(&manifest)?)?;
    Ok(manifest)
}

fn panel_figure(which: u8, dir: &Path, seed: u64) -> Result<Value, CliError> {
    let config = figure_config(which, seed)?;
    let ModelConfig::Frmod(fc) = &config.model else {
        unreachable!("panel figures use frmod models")
    };
    let report = FrmodReport::new(&fc.to_spec()?)?;
    let ov = Overrides::default();
    let run = simulate_run(&config, ov)?;
    let tables = [
        ("series", "series.csv", run.table),
        (
            "acvf",
            "acvf.csv",
            acvf_table(&config, FIGURE_HMAX, true, ov)?,
        ),
        (
            "periodogram",
            "periodogram.csv",
            spectrum_table(&config, None, true, ov)?,
        ),
        (
            "density",
            "density.csv",
            spectrum_table(&config, None, false, ov)?,
        ),
    ];
    let mut files = Vec::new();
    for (role, name, table) in &tables {
        write_file(dir, name, &table.to_csv()?)?;
        files.push(entry(role, name, table));
    }
    write_file(dir, "simulation.json", &json_bytes(&run.metadata)?)?;
    files.push(FileEntry {
        role: "simulation",
        path: "simulation.json".into(),
        columns: Vec::new(),
    });
    Ok(json!({
        "figure": which,
        "files": files,
        "config": config,
        "seed": seed,
        "params": report,
    }))
}

/// `φ` strictly monotone along the grid.
fn is_monotone(phis: &[f64]) -> bool {
    let steps: Vec<f64> = phis.windows(2).map(|w| w[1] - w[0]).collect();
    steps.iter().all(|&s| s > 0.0) || steps.iter().all(|&s| s < 0.0)
}

fn figure7(dir: &Path) -> Result<Value, CliError> {
    let mut files = Vec::new();
    let mut curves = Vec::new();
    for (panel, d, q0) in FIGURE7_CURVES {
        let (lo, hi) = q1_admissible_range(d, q0)?;
        let grid: Vec<f64> = (0..CURVE_POINTS)
            .map(|i| lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64)
            .collect();
        let curve = phi_curve(d, q0, &grid)?;
        let phis: Vec<f64> = curve.iter().map(|p| p.1).collect();
        if !is_monotone(&phis) {
            return Err(CliError::Check(format!(
                "phi curve for d={d}, q0={q0} is not one-to-one"
            )));
        }
        let mut table = Table::new(vec!["q1", "phi"]);
        for (q1, phi) in &curve {
            table.push(vec![Cell::Float(*q1), Cell::Float(*phi)]);
        }
        let name = format!("phi_{panel}_d{d}_q0{q0}.csv");
        write_file(dir, &name, &table.to_csv()?)?;
        files.push(entry("phi-curve", &name, &table));
        let interval = frmod_core::params::admissible_interval(d)?;
        curves.push(json!({
            "panel": panel,
            "d": d,
            "q0": q0,
            "file": name,
            "q1_min": lo,
            "q1_max": hi,
            "interval_lo": interval.lo,
            "interval_hi": interval.hi,
            "monotone": true,
        }));
    }
    Ok(json!({
        "figure": 7,
        "files": files,
        "config": { "curves": curves, "points": CURVE_POINTS },
        "seed": Value::Null,
    }))
}
