//! Subcommand bodies. Each returns data; writing is left to the caller.

use std::f64::consts::PI;

use frmod_core::estimate::{
    periodogram, remodulate, rice_demodulate, sample_acvf, sample_cross_acvf,
};
use frmod_core::simulate::{
    replicate_seed, simulate_cholesky, simulate_exact, simulate_modulated, simulate_truncated,
    Method,
};
use frmod_core::spectrum::SpectrumGrid;
use frmod_core::{AsymSpec, Companion, CovarianceModel, FrmodSpec, Model, SeriesSample};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Config, SimulationConfig, MIN_POINTS};
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Truncation used by the linear routes when the config gives none.
pub const DEFAULT_TRUNCATION: usize = 10_000;

/// Lag window of the P-T probe written by `demodulate`.
pub const PROBE_LAGS: i64 = 10;

/// Command-line overrides of the simulation block.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
}

impl Overrides {
    pub fn seed(&self, sim: &SimulationConfig) -> u64 {
        self.seed.unwrap_or(sim.seed)
    }

    pub fn replicates(&self, sim: &SimulationConfig) -> Result<usize, CliError> {
        let r = self.replicates.unwrap_or(sim.replicates);
        if r == 0 {
            return Err(CliError::Config("replicates must be at least 1".into()));
        }
        Ok(r)
    }
}

/// Path `r` of a run with master seed `seed`.
pub fn simulate_replicate(
    model: &Model,
    sim: &SimulationConfig,
    seed: u64,
    r: usize,
) -> Result<SeriesSample, CliError> {
    let path_seed = replicate_seed(seed, r as u64);
    let sample = match sim.method {
        Method::ExactEmbedding => simulate_exact(model, sim.n, path_seed)?,
        Method::Cholesky => simulate_cholesky(model, sim.n, path_seed)?,
        Method::TruncatedLinear | Method::ModulatedLinear => {
            let spec = plain_frmod(model)?;
            let k = sim.truncation.unwrap_or(DEFAULT_TRUNCATION);
            if k == 0 {
                return Err(CliError::Config(
                    "simulation.truncation must be at least 1".into(),
                ));
            }
            if sim.method == Method::TruncatedLinear {
                simulate_truncated(spec, sim.n, path_seed, k)?
            } else {
                simulate_modulated(spec, sim.n, path_seed, k)?
            }
        }
    };
    Ok(sample)
}

fn plain_frmod(model: &Model) -> Result<&FrmodSpec, CliError> {
    match model {
        Model::Frmod(spec) if !spec.has_arma() => Ok(spec),
        _ => Err(CliError::Config(
            "truncated and modulated methods need a frmod model without ar/ma terms".into(),
        )),
    }
}

/// Limiting parameters of an FRMod spec, the quantity set of a figure title.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrmodReport {
    pub d: f64,
    pub lambda0: f64,
    pub q0: f64,
    pub q1: f64,
    pub a0: f64,
    pub a1: f64,
    pub r0: f64,
    pub r1: f64,
    pub g0: f64,
    pub g1: f64,
    pub c_gamma: f64,
    pub phi: f64,
    pub interval_lo: f64,
    pub interval_hi: f64,
    pub cf_plus: f64,
    pub cf_minus: f64,
    /// Factor the ARMA filter applies to `c_gamma`, `cf_plus` and `cf_minus`.
    pub arma_gain: f64,
}

impl FrmodReport {
    pub fn new(spec: &FrmodSpec) -> Result<Self, CliError> {
        let l = spec.limits()?;
        Ok(Self {
            d: spec.d(),
            lambda0: spec.lambda0(),
            q0: l.q.q0,
            q1: l.q.q1,
            a0: l.a.a0,
            a1: l.a.a1,
            r0: l.r.r0,
            r1: l.r.r1,
            g0: l.g.g0,
            g1: l.g.g1,
            c_gamma: l.time.c_gamma,
            phi: l.time.phi,
            interval_lo: l.interval.lo,
            interval_hi: l.interval.hi,
            cf_plus: l.spec.cf_plus,
            cf_minus: l.spec.cf_minus,
            arma_gain: spec.gain_at_lambda0(),
        })
    }

    fn rows(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("d", self.d),
            ("lambda0", self.lambda0),
            ("q0", self.q0),
            ("q1", self.q1),
            ("a0", self.a0),
            ("a1", self.a1),
            ("r0", self.r0),
            ("r1", self.r1),
            ("g0", self.g0),
            ("g1", self.g1),
            ("c_gamma", self.c_gamma),
            ("phi", self.phi),
            ("interval_lo", self.interval_lo),
            ("interval_hi", self.interval_hi),
            ("cf_plus", self.cf_plus),
            ("cf_minus", self.cf_minus),
            ("arma_gain", self.arma_gain),
        ]
    }
}

fn asym_report(spec: &AsymSpec) -> Value {
    let (cf_plus, cf_minus) = spec.spec_constants();
    json!({
        "kind": "asym",
        "lambda0": spec.lambda0,
        "d_plus": spec.d_plus,
        "d_minus": spec.d_minus,
        "q1_plus": spec.q1_plus,
        "q1_minus": spec.q1_minus,
        "q0_plus": spec.q0_plus(),
        "q0_minus": spec.q0_minus(),
        "cf_plus": cf_plus,
        "cf_minus": cf_minus,
    })
}

fn model_report(model: &Model) -> Result<Value, CliError> {
    Ok(match model {
        Model::Frmod(spec) => {
            let mut v = serde_json::to_value(FrmodReport::new(spec)?)
                .map_err(|e| CliError::Config(e.to_string()))?;
            v["kind"] = json!("frmod");
            v
        }
        Model::Asym(spec) => asym_report(spec),
        Model::MultiFactor(spec) => {
            let parts = spec
                .components
                .iter()
                .map(|c| match c {
                    frmod_core::Component::Frmod(s) => model_report(&Model::Frmod(s.clone())),
                    frmod_core::Component::Asym(s) => Ok(asym_report(s)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            json!({ "kind": "multifactor", "components": parts })
        }
    })
}

/// JSON document of limiting parameters.
pub fn params_json(config: &Config) -> Result<Value, CliError> {
    model_report(&config.model.to_model()?)
}

/// `name,value` rows; only for single-component FRMod models.
pub fn params_table(config: &Config) -> Result<Table, CliError> {
    let Model::Frmod(spec) = config.model.to_model()? else {
        return Err(CliError::Config(
            "csv params output needs a frmod model; use --format json".into(),
        ));
    };
    let mut t = Table::new(vec!["name", "value"]);
    let mut csv = csv_rows(&FrmodReport::new(&spec)?);
    t.rows.append(&mut csv);
    Ok(t)
}

fn csv_rows(report: &FrmodReport) -> Vec<Vec<Cell>> {
    report
        .rows()
        .into_iter()
        .map(|(name, v)| vec![Cell::Name(name), Cell::Float(v)])
        .collect()
}

/// `h, gamma_true[, gamma_sample]` for `h = 0..=hmax`.
pub fn acvf_table(
    config: &Config,
    hmax: usize,
    with_sample: bool,
    ov: Overrides,
) -> Result<Table, CliError> {
    let model = config.model.to_model()?;
    let truth = model.acvf(hmax)?;
    if !with_sample {
        let mut t = Table::new(vec!["h", "gamma_true"]);
        for (h, g) in truth.values.iter().enumerate() {
            t.push(vec![Cell::Int(h as i64), Cell::Float(*g)]);
        }
        return Ok(t);
    }
    let sim = config.simulation()?;
    if hmax >= sim.n {
        return Err(CliError::Config(format!(
            "hmax = {hmax} must be below simulation.n = {}",
            sim.n
        )));
    }
    let (seed, reps) = (ov.seed(sim), ov.replicates(sim)?);
    let mut mean = vec![0.0; hmax + 1];
    for r in 0..reps {
        let x = simulate_replicate(&model, sim, seed, r)?.values;
        for (m, v) in mean.iter_mut().zip(sample_acvf(&x, hmax)?.values) {
            *m += v / reps as f64;
        }
    }
    let mut t = Table::new(vec!["h", "gamma_true", "gamma_sample"]);
    for (h, (g, m)) in truth.values.iter().zip(&mean).enumerate() {
        t.push(vec![Cell::Int(h as i64), Cell::Float(*g), Cell::Float(*m)]);
    }
    Ok(t)
}

fn near_singular(lambda: f64, singular: &[f64], radius: f64) -> bool {
    lambda.abs() <= radius || singular.iter().any(|s| (lambda - s).abs() <= radius)
}

/// `lambda, f_true` on the configured grid, or `lambda, f_true,
/// periodogram_mean` on the Fourier frequencies of the simulated length.
pub fn spectrum_table(
    config: &Config,
    points: Option<usize>,
    with_periodogram: bool,
    ov: Overrides,
) -> Result<Table, CliError> {
    let model = config.model.to_model()?;
    let mut grid = config.grid_or_default();
    if let Some(p) = points {
        grid.points = p;
    }
    if grid.points < MIN_POINTS {
        return Err(CliError::Config(format!(
            "points = {} must be at least {MIN_POINTS}",
            grid.points
        )));
    }
    if !with_periodogram {
        let g = SpectrumGrid::new(&model, grid.points, grid.exclusion)?;
        let mut t = Table::new(vec!["lambda", "f_true"]);
        for (l, f) in g.lambdas.iter().zip(&g.values) {
            t.push(vec![Cell::Float(*l), Cell::Float(*f)]);
        }
        return Ok(t);
    }
    let sim = config.simulation()?;
    let (seed, reps) = (ov.seed(sim), ov.replicates(sim)?);
    let mut mean: Vec<f64> = Vec::new();
    let mut freqs: Vec<f64> = Vec::new();
    for r in 0..reps {
        let p = periodogram(&simulate_replicate(&model, sim, seed, r)?.values)?;
        if mean.is_empty() {
            mean = vec![0.0; p.ordinates.len()];
            freqs = p.frequencies.clone();
        }
        for (m, v) in mean.iter_mut().zip(&p.ordinates) {
            *m += v / reps as f64;
        }
    }
    let singular = model.singular_frequencies();
    let mut t = Table::new(vec!["lambda", "f_true", "periodogram_mean"]);
    for (l, m) in freqs.iter().zip(&mean) {
        if *l >= PI || near_singular(*l, &singular, grid.exclusion) {
            continue;
        }
        t.push(vec![
            Cell::Float(*l),
            Cell::Float(model.spectral_density(*l)?),
            Cell::Float(*m),
        ]);
    }
    Ok(t)
}

/// Simulated paths plus their metadata sidecar.
pub struct SimulationRun {
    pub table: Table,
    pub metadata: Value,
}

/// `n, x` for one path, or `replicate, n, x` when more than one is drawn.
pub fn simulate_run(config: &Config, ov: Overrides) -> Result<SimulationRun, CliError> {
    let model = config.model.to_model()?;
    let sim = config.simulation()?;
    let (seed, reps) = (ov.seed(sim), ov.replicates(sim)?);
    let mut table = Table::new(if reps > 1 {
        vec!["replicate", "n", "x"]
    } else {
        vec!["n", "x"]
    });
    let mut paths = Vec::with_capacity(reps);
    for r in 0..reps {
        let s = simulate_replicate(&model, sim, seed, r)?;
        for (t, x) in s.values.iter().enumerate() {
            let mut row = vec![Cell::Int(t as i64), Cell::Float(*x)];
            if reps > 1 {
                row.insert(0, Cell::Int(r as i64));
            }
            table.push(row);
        }
        paths.push(json!({
            "replicate": r,
            "seed": s.seed,
            "method": s.method,
            "fallback": s.fallback,
            "embedding_size": s.embedding_size,
            "clipped_eigenvalues": s.clipped_eigenvalues,
            "truncation": s.truncation,
        }));
    }
    let metadata = json!({
        "seed": seed,
        "n": sim.n,
        "method": sim.method,
        "replicates": reps,
        "fallback": paths.iter().any(|p| p["fallback"] == json!(true)),
        "paths": paths,
    });
    Ok(SimulationRun { table, metadata })
}

/// Demodulated components with reconstruction residual and P-T probe.
pub struct Demodulation {
    pub table: Table,
    pub probe: Value,
}

pub fn demodulate(
    x: &[f64],
    lambda0: f64,
    companion: &Companion,
) -> Result<Demodulation, CliError> {
    if x.len() < 2 {
        return Err(CliError::Config(
            "input needs at least two values of x".into(),
        ));
    }
    frmod_core::params::check_frequency(lambda0).map_err(|e| CliError::Config(e.to_string()))?;
    let (y1, y2) = rice_demodulate(x, lambda0, companion)?;
    let back = remodulate(&y1, &y2, lambda0)?;
    let mut table = Table::new(vec!["n", "y1", "y2", "residual"]);
    let mut max_residual = 0.0f64;
    for t in 0..x.len() {
        let res = back[t] - x[t];
        max_residual = max_residual.max(res.abs());
        table.push(vec![
            Cell::Int(t as i64),
            Cell::Float(y1[t]),
            Cell::Float(y2[t]),
            Cell::Float(res),
        ]);
    }
    let max_lag = PROBE_LAGS.min(x.len() as i64 - 1);
    let mut lags = Vec::new();
    let (mut diag_gap, mut anti_gap) = (0.0f64, 0.0f64);
    for h in 0..=max_lag {
        let g11 = sample_cross_acvf(&y1, &y1, h)?;
        let g22 = sample_cross_acvf(&y2, &y2, h)?;
        let g12 = sample_cross_acvf(&y1, &y2, h)?;
        let g21 = sample_cross_acvf(&y2, &y1, h)?;
        diag_gap = diag_gap.max((g11 - g22).abs());
        anti_gap = anti_gap.max((g12 + g21).abs());
        lags.push(json!({ "h": h, "g11": g11, "g22": g22, "g12": g12, "g21": g21 }));
    }
    let probe = json!({
        "lambda0": lambda0,
        "companion": companion,
        "n": x.len(),
        "max_residual": max_residual,
        "max_abs_g11_minus_g22": diag_gap,
        "max_abs_g12_plus_g21": anti_gap,
        "lags": lags,
    });
    Ok(Demodulation { table, probe })
}
