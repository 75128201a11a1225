//! Seeded Gaussian sample paths.
//!
//! Stream rule: stream `s` of seed `σ` is `ChaCha20Rng::seed_from_u64(σ)`
//! switched to stream `s`. Replicate `r` of a master seed runs on
//! [`replicate_seed`]`(σ, r)`.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fft;
use crate::model::{
    check_polynomial, CoefficientSequences, CovarianceModel, FrmodSpec, Model, PolyKind,
};
use crate::specfun::{gamma_ratio_unchecked, gamma_unchecked};

/// Embedding eigenvalues below `-EIGEN_TOL · max` reject the embedding;
/// smaller negative ones are clipped to zero.
pub const EIGEN_TOL: f64 = 1e-8;

/// Relative diagonal jitter of the Toeplitz factorisation.
pub const CHOLESKY_JITTER: f64 = 1e-10;

/// Embedding sizes tried: the minimal power of two and this many doublings.
pub const MAX_EMBEDDING_DOUBLINGS: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEmbedding,
    Cholesky,
    TruncatedLinear,
    ModulatedLinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSample {
    pub values: Vec<f64>,
    pub seed: u64,
    pub method: Method,
    pub model: Model,
    /// The circulant embedding was rejected and the Toeplitz factorisation used.
    pub fallback: bool,
    pub embedding_size: Option<usize>,
    pub clipped_eigenvalues: usize,
    /// `K` of the truncated linear routes.
    pub truncation: Option<usize>,
}

/// SplitMix64 finaliser applied to `master + (r + 1) · golden`.
pub fn replicate_seed(master: u64, replicate: u64) -> u64 {
    let mut z = master.wrapping_add(
        replicate
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normals(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// `streams` independent i.i.d. N(0, 1) sequences of length `n`.
pub fn gaussian_wn(seed: u64, n: usize, streams: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(domain("n", 0.0, "n >= 1"));
    }
    if !(1..=2).contains(&streams) {
        return Err(domain("streams", streams as f64, "1 or 2 streams"));
    }
    Ok((0..streams as u64)
        .map(|s| normals(&mut stream_rng(seed, s), n))
        .collect())
}

struct Embedding {
    scale: Vec<f64>,
    clipped: usize,
}

/// Square roots of the circulant eigenvalues divided by `m`, or `None` when
/// the embedding is not nonnegative definite.
fn embedding(gamma: &[f64], m: usize) -> Option<Embedding> {
    let half = m / 2;
    let mut row: Vec<Complex64> = (0..m)
        .map(|j| Complex64::new(gamma[if j <= half { j } else { m - j }], 0.0))
        .collect();
    fft::forward(&mut row);
    let max = row.iter().fold(0.0f64, |a, z| a.max(z.re));
    let mut clipped = 0;
    let mut scale = Vec::with_capacity(m);
    for z in &row {
        if z.re < -EIGEN_TOL * max {
            return None;
        }
        if z.re < 0.0 {
            clipped += 1;
        }
        scale.push((z.re.max(0.0) / m as f64).sqrt());
    }
    Some(Embedding { scale, clipped })
}

/// Exact stationary Gaussian path with the model autocovariance.
///
/// Circulant embedding of the smallest power-of-two size `≥ 2(n-1)`, doubled
/// up to [`MAX_EMBEDDING_DOUBLINGS`] times if not nonnegative definite, and a
/// Toeplitz factorisation otherwise.
pub fn simulate_exact(model: &Model, n: usize, seed: u64) -> Result<SeriesSample> {
    if n < 2 {
        return Err(domain("n", n as f64, "n >= 2"));
    }
    let m0 = (2 * (n - 1)).next_power_of_two().max(2);
    for attempt in 0..=MAX_EMBEDDING_DOUBLINGS {
        let m = m0 << attempt;
        let gamma = model.acvf(m / 2)?.values;
        let Some(emb) = embedding(&gamma, m) else {
            continue;
        };
        let mut rng = stream_rng(seed, 0);
        let mut buf: Vec<Complex64> = emb
            .scale
            .iter()
            .map(|&s| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(s * re, s * im)
            })
            .collect();
        fft::forward(&mut buf);
        return Ok(SeriesSample {
            values: buf[..n].iter().map(|z| z.re).collect(),
            seed,
            method: Method::ExactEmbedding,
            model: model.clone(),
            fallback: false,
            embedding_size: Some(m),
            clipped_eigenvalues: emb.clipped,
            truncation: None,
        });
    }
    let mut sample = simulate_cholesky(model, n, seed)?;
    sample.fallback = true;
    Ok(sample)
}

/// Exact path from the Cholesky factor of the `n × n` Toeplitz covariance,
/// computed in `O(n²)` by the Durbin-Levinson recursion.
pub fn simulate_cholesky(model: &Model, n: usize, seed: u64) -> Result<SeriesSample> {
    if n < 2 {
        return Err(domain("n", n as f64, "n >= 2"));
    }
    let mut gamma = model.acvf(n - 1)?.values;
    gamma[0] *= 1.0 + CHOLESKY_JITTER;
    let z = normals(&mut stream_rng(seed, 0), n);
    Ok(SeriesSample {
        values: levinson_sample(&gamma, &z)?,
        seed,
        method: Method::Cholesky,
        model: model.clone(),
        fallback: false,
        embedding_size: None,
        clipped_eigenvalues: 0,
        truncation: None,
    })
}

/// `x_t = Σ_j φ_{t,j} x_{t-j} + √v_t z_t`, the lower-triangular factor of
/// the Toeplitz matrix applied to `z`.
fn levinson_sample(gamma: &[f64], z: &[f64]) -> Result<Vec<f64>> {
    let n = z.len();
    let mut v = gamma[0];
    if !(v > 0.0) {
        return Err(Error::NotPositiveDefinite {
            step: 0,
            variance: v,
        });
    }
    let mut x = Vec::with_capacity(n);
    x.push(v.sqrt() * z[0]);
    let mut phi: Vec<f64> = Vec::with_capacity(n);
    let mut prev: Vec<f64> = Vec::with_capacity(n);
    for t in 1..n {
        let acc: f64 = phi
            .iter()
            .enumerate()
            .map(|(j, p)| p * gamma[t - 1 - j])
            .sum();
        let k = (gamma[t] - acc) / v;
        prev.clone_from(&phi);
        for j in 0..prev.len() {
            phi[j] = prev[j] - k * prev[prev.len() - 1 - j];
        }
        phi.push(k);
        v *= 1.0 - k * k;
        if !(v > 0.0) {
            return Err(Error::NotPositiveDefinite {
                step: t,
                variance: v,
            });
        }
        let pred: f64 = phi.iter().enumerate().map(|(j, p)| p * x[t - 1 - j]).sum();
        x.push(pred + v.sqrt() * z[t]);
    }
    Ok(x)
}

fn require_plain(spec: &FrmodSpec) -> Result<()> {
    spec.validate()?;
    if spec.has_arma() {
        return Err(Error::InvalidModel(
            "linear-representation routes require empty AR and MA parts".into(),
        ));
    }
    Ok(())
}

fn require_truncation(k: usize) -> Result<()> {
    if k == 0 {
        return Err(domain("K", 0.0, "K >= 1"));
    }
    Ok(())
}

/// Path of the model truncated to `|l| ≤ K` in `Y_n = Σ_l A_l ε_{n-l}`,
/// modulated as `X_t = cos(λ0 t) Y_{1,t} + sin(λ0 t) Y_{2,t}`, `t = 0..n-1`.
///
/// Its autocovariance is that of [`crate::model::acvf_oracle`] with the same `K`.
pub fn simulate_truncated(spec: &FrmodSpec, n: usize, seed: u64, k: usize) -> Result<SeriesSample> {
    require_plain(spec)?;
    require_truncation(k)?;
    if n == 0 {
        return Err(domain("n", 0.0, "n >= 1"));
    }
    let coeffs = CoefficientSequences::new(spec.mf.d, spec.q, k)?;
    let eps = gaussian_wn(seed, n + 2 * k, 2)?;
    let neg_a1: Vec<f64> = coeffs.a1.iter().map(|v| -v).collect();
    let add =
        |a: Vec<f64>, b: Vec<f64>| -> Vec<f64> { a.iter().zip(&b).map(|(x, y)| x + y).collect() };
    let y1 = add(
        fft::convolve(&coeffs.a0, &eps[0]),
        fft::convolve(&coeffs.a1, &eps[1]),
    );
    let y2 = add(
        fft::convolve(&neg_a1, &eps[0]),
        fft::convolve(&coeffs.a0, &eps[1]),
    );
    let l0 = spec.mf.lambda0;
    let values = (0..n)
        .map(|t| {
            let w = l0 * t as f64;
            w.cos() * y1[t + 2 * k] + w.sin() * y2[t + 2 * k]
        })
        .collect();
    Ok(SeriesSample {
        values,
        seed,
        method: Method::TruncatedLinear,
        model: spec.clone().into(),
        fallback: false,
        embedding_size: None,
        clipped_eigenvalues: 0,
        truncation: Some(k),
    })
}

/// `(cos(λ0 j) a0_j - sin(λ0 j) a1_j, cos(λ0 j) a1_j + sin(λ0 j) a0_j)`.
pub fn modulated_coefficients(spec: &FrmodSpec, j: i64) -> Result<(f64, f64)> {
    require_plain(spec)?;
    let (d, q) = (spec.mf.d, spec.q);
    let (a0, a1) = if j == 0 {
        (2.0 * q.q0, 0.0)
    } else {
        let k = j.unsigned_abs() as f64;
        let c = gamma_ratio_unchecked(k + d, k + 1.0) / gamma_unchecked(d);
        (q.q0 * c, j.signum() as f64 * q.q1 * c)
    };
    Ok(rotate_pair(spec.mf.lambda0 * j as f64, a0, a1))
}

fn rotate_pair(w: f64, a0: f64, a1: f64) -> (f64, f64) {
    let (s, c) = w.sin_cos();
    (c * a0 - s * a1, c * a1 + s * a0)
}

/// `M^n ε` with `M = [[cos λ0, sin λ0], [-sin λ0, cos λ0]]`.
pub fn rotate_noise(lambda0: f64, n: i64, eps: [f64; 2]) -> [f64; 2] {
    let (s, c) = (lambda0 * n as f64).sin_cos();
    [c * eps[0] + s * eps[1], -s * eps[0] + c * eps[1]]
}

/// Path from `X_t = Σ_{|j| ≤ K} b_j^T ε̃_{t-j}` with `b_j` the modulated
/// coefficients and `ε̃_m = M^m ε_m`.
///
/// With the same seed and `K` this reproduces [`simulate_truncated`] up to
/// rounding.
pub fn simulate_modulated(spec: &FrmodSpec, n: usize, seed: u64, k: usize) -> Result<SeriesSample> {
    require_plain(spec)?;
    require_truncation(k)?;
    if n == 0 {
        return Err(domain("n", 0.0, "n >= 1"));
    }
    let coeffs = CoefficientSequences::new(spec.mf.d, spec.q, k)?;
    let l0 = spec.mf.lambda0;
    let (mut b0, mut b1) = (Vec::with_capacity(2 * k + 1), Vec::with_capacity(2 * k + 1));
    for j in -(k as i64)..=(k as i64) {
        let (a0, a1) = coeffs.get(j);
        let (x, y) = rotate_pair(l0 * j as f64, a0, a1);
        b0.push(x);
        b1.push(y);
    }
    let eps = gaussian_wn(seed, n + 2 * k, 2)?;
    let (mut e1, mut e2) = (
        Vec::with_capacity(eps[0].len()),
        Vec::with_capacity(eps[0].len()),
    );
    for (i, (&u, &v)) in eps[0].iter().zip(&eps[1]).enumerate() {
        let [r1, r2] = rotate_noise(l0, i as i64 - k as i64, [u, v]);
        e1.push(r1);
        e2.push(r2);
    }
    let c1 = fft::convolve(&b0, &e1);
    let c2 = fft::convolve(&b1, &e2);
    Ok(SeriesSample {
        values: (0..n).map(|t| c1[t + 2 * k] + c2[t + 2 * k]).collect(),
        seed,
        method: Method::ModulatedLinear,
        model: spec.clone().into(),
        fallback: false,
        embedding_size: None,
        clipped_eigenvalues: 0,
        truncation: Some(k),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredSeries {
    pub values: Vec<f64>,
    /// Leading samples still influenced by the zero initial conditions.
    pub burn_in: usize,
}

/// `Φ(B)⁻¹ Θ(B) x` with zero initial conditions: MA convolution, then the AR
/// recursion. `burn_in` is `max(10p, 100)` for a non-trivial filter.
pub fn apply_arma(x: &[f64], ar: &[f64], ma: &[f64]) -> Result<FilteredSeries> {
    check_polynomial(ar, PolyKind::Ar)?;
    check_polynomial(ma, PolyKind::Ma)?;
    let n = x.len();
    let mut values: Vec<f64> = (0..n)
        .map(|t| {
            x[t] + ma
                .iter()
                .enumerate()
                .filter(|(j, _)| *j < t)
                .map(|(j, th)| th * x[t - 1 - j])
                .sum::<f64>()
        })
        .collect();
    for t in 0..n {
        let ar_part: f64 = ar
            .iter()
            .enumerate()
            .filter(|(j, _)| *j < t)
            .map(|(j, ph)| ph * values[t - 1 - j])
            .sum();
        values[t] += ar_part;
    }
    let trivial = ar.iter().chain(ma).all(|&c| c == 0.0);
    Ok(FilteredSeries {
        values,
        burn_in: if trivial { 0 } else { (10 * ar.len()).max(100) },
    })
}
