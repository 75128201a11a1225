//! Sample estimators, Rice demodulation and the oscillatory-sum remainders.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{domain, Error, Result};
use crate::fft;
use crate::model::ScalarAcvf;
use crate::params::check_frequency;
use crate::simulate::gaussian_wn;
use crate::specfun::{check_memory, cos_pi, gamma_unchecked, sin_pi, KahanSum};

/// Periodogram at the Fourier frequencies `2πj/n`, `j = 1..=⌊n/2⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Periodogram {
    pub frequencies: Vec<f64>,
    pub ordinates: Vec<f64>,
}

fn spectrum_of(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(&mut buf);
    buf
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Biased (divisor `n`) sample autocovariance about the sample mean.
pub fn sample_acvf(x: &[f64], hmax: usize) -> Result<ScalarAcvf> {
    if hmax >= x.len() {
        return Err(domain("hmax", hmax as f64, "hmax < n"));
    }
    let m = mean(x);
    let c: Vec<f64> = x.iter().map(|v| v - m).collect();
    let n = c.len() as f64;
    let values = (0..=hmax)
        .map(|h| c[h..].iter().zip(&c).map(|(a, b)| a * b).sum::<f64>() / n)
        .collect();
    Ok(ScalarAcvf::exact(values))
}

/// `n⁻¹ Σ_t (x_{t+h} - x̄)(y_t - ȳ)` for any integer `h` with `|h| < n`.
pub fn sample_cross_acvf(x: &[f64], y: &[f64], h: i64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if h.unsigned_abs() as usize >= n {
        return Err(domain("h", h as f64, "|h| < n"));
    }
    let (mx, my) = (mean(x), mean(y));
    let s: f64 = if h >= 0 {
        let h = h as usize;
        (0..n - h).map(|t| (x[t + h] - mx) * (y[t] - my)).sum()
    } else {
        let h = h.unsigned_abs() as usize;
        (h..n).map(|t| (x[t - h] - mx) * (y[t] - my)).sum()
    };
    Ok(s / n as f64)
}

/// `I(λ_j) = |Σ_t x_t e^{-itλ_j}|² / (2πn)`.
pub fn periodogram(x: &[f64]) -> Result<Periodogram> {
    let n = x.len();
    if n < 2 {
        return Err(domain("n", n as f64, "n >= 2"));
    }
    let spec = spectrum_of(x);
    let scale = 1.0 / (2.0 * PI * n as f64);
    let half = n / 2;
    Ok(Periodogram {
        frequencies: (1..=half).map(|j| 2.0 * PI * j as f64 / n as f64).collect(),
        ordinates: (1..=half).map(|j| spec[j].norm_sqr() * scale).collect(),
    })
}

/// `I_xy(λ_j) = X(λ_j) conj(Y(λ_j)) / (2πn)` at the same frequencies as
/// [`periodogram`].
pub fn cross_periodogram(x: &[f64], y: &[f64]) -> Result<Vec<Complex64>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(domain("n", n as f64, "n >= 2"));
    }
    let (fx, fy) = (spectrum_of(x), spectrum_of(y));
    let scale = 1.0 / (2.0 * PI * n as f64);
    Ok((1..=n / 2).map(|j| fx[j] * fy[j].conj() * scale).collect())
}

/// Discrete Hilbert transform: multiplier `-i sign(λ)` on the DFT with the
/// mean and Nyquist bins zeroed.
pub fn hilbert_transform(x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 4 {
        return Err(domain("n", n as f64, "n >= 4"));
    }
    let mut buf = spectrum_of(x);
    let i = Complex64::new(0.0, 1.0);
    for (j, z) in buf.iter_mut().enumerate() {
        if j == 0 || 2 * j == n {
            *z = Complex64::new(0.0, 0.0);
        } else if 2 * j < n {
            *z *= -i;
        } else {
            *z *= i;
        }
    }
    fft::inverse(&mut buf);
    Ok(buf.iter().map(|z| z.re / n as f64).collect())
}

/// Second series paired with `x` before the rotation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Companion {
    /// `-H(x)`, which brings the band at `λ0` down to frequency zero.
    Hilbert,
    /// Phase-randomised copy of `x`: same periodogram, independent phases.
    Independent { seed: u64 },
    /// A caller-supplied series, e.g. an independent path of the same model.
    Given(Vec<f64>),
}

/// Fourier surrogate of `x` with uniformly random phases on the interior
/// bins (Hermitian symmetry kept, DC and Nyquist bins unchanged).
pub fn phase_randomize(x: &[f64], seed: u64) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 4 {
        return Err(domain("n", n as f64, "n >= 4"));
    }
    let mut buf = spectrum_of(x);
    let u = gaussian_wn(seed, n, 2)?;
    for j in 1..n.div_ceil(2) {
        let phase = u[1][j].atan2(u[0][j]);
        let z = buf[j] * Complex64::from_polar(1.0, phase);
        buf[j] = z;
        buf[n - j] = z.conj();
    }
    fft::inverse(&mut buf);
    Ok(buf.iter().map(|z| z.re / n as f64).collect())
}

/// `y1_n = cos(λ0 n) x_n - sin(λ0 n) x2_n`, `y2_n = sin(λ0 n) x_n + cos(λ0 n) x2_n`.
pub fn rice_demodulate(
    x: &[f64],
    lambda0: f64,
    companion: &Companion,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_frequency(lambda0)?;
    let x2 = match companion {
        Companion::Hilbert => hilbert_transform(x)?.into_iter().map(|v| -v).collect(),
        Companion::Independent { seed } => phase_randomize(x, *seed)?,
        Companion::Given(v) => {
            if v.len() != x.len() {
                return Err(Error::LengthMismatch {
                    left: x.len(),
                    right: v.len(),
                });
            }
            v.clone()
        }
    };
    let mut y1 = Vec::with_capacity(x.len());
    let mut y2 = Vec::with_capacity(x.len());
    for (t, (&a, &b)) in x.iter().zip(&x2).enumerate() {
        let (s, c) = (lambda0 * t as f64).sin_cos();
        y1.push(c * a - s * b);
        y2.push(s * a + c * b);
    }
    Ok((y1, y2))
}

/// `x_n = cos(λ0 n) y1_n + sin(λ0 n) y2_n`.
pub fn remodulate(y1: &[f64], y2: &[f64], lambda0: f64) -> Result<Vec<f64>> {
    check_frequency(lambda0)?;
    if y1.len() != y2.len() {
        return Err(Error::LengthMismatch {
            left: y1.len(),
            right: y2.len(),
        });
    }
    Ok(y1
        .iter()
        .zip(y2)
        .enumerate()
        .map(|(t, (&a, &b))| {
            let (s, c) = (lambda0 * t as f64).sin_cos();
            c * a + s * b
        })
        .collect())
}

/// Smallest `Kω` accepted by [`lemma_d1_remainder`].
pub const MIN_TERMS_TIMES_OMEGA: f64 = 64.0;

/// Terms used by default: `Kω ≈ 1024`.
pub fn default_remainder_terms(omega: f64) -> usize {
    (1024.0 / omega).ceil() as usize
}

/// Summation-by-parts terms used for the tail of [`oscillatory_sum`].
const TAIL_TERMS: usize = 6;

/// `∇^m x^α` for `x ≫ m`, from `(x-j)^α = x^α Σ_n C(α,n) (-j/x)^n` and
/// `Σ_j (-1)^j C(m,j) j^n = (-1)^m m! S(n,m)`; avoids the cancellation of
/// repeated differencing.
fn backward_difference(alpha: f64, x: f64, m: usize) -> f64 {
    if m == 0 {
        return x.powf(alpha);
    }
    // stirling[k] = S(n, k) for the current n
    let mut stirling = vec![0.0f64; m + 1];
    stirling[0] = 1.0;
    let mut factorial = 1.0;
    for k in 1..=m {
        factorial *= k as f64;
    }
    let mut binom = 1.0;
    let mut sum = 0.0;
    for n in 1..=m + 60 {
        for k in (1..=m.min(n)).rev() {
            stirling[k] = k as f64 * stirling[k] + stirling[k - 1];
        }
        stirling[0] = 0.0;
        binom *= -(alpha - (n - 1) as f64) / (n as f64 * x);
        if n < m {
            continue;
        }
        let term = binom * factorial * stirling[m];
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * x.powf(alpha) * sum
}

/// `Σ_{k≥1} e^{ikω} k^α` for `-1 < α < 0`: compensated direct sum to `K`
/// plus Abel summation by parts for the tail,
/// `Σ_{k≥s} z^k f(k) = Σ_m z^{s+m} ∇^m f(s+m) / (1-z)^{m+1}`.
fn oscillatory_sum(alpha: f64, omega: f64, k: usize) -> (f64, f64) {
    let (mut re, mut im) = (KahanSum::new(), KahanSum::new());
    for j in 1..=k {
        let jf = j as f64;
        let f = jf.powf(alpha);
        let (s, c) = (jf * omega).sin_cos();
        re.add(f * c);
        im.add(f * s);
    }
    let w = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, omega)).inv();
    let s = (k + 1) as f64;
    let mut tail = Complex64::new(0.0, 0.0);
    let mut wm = w;
    for m in 0..TAIL_TERMS {
        let x = s + m as f64;
        tail += Complex64::from_polar(1.0, omega * x) * wm * backward_difference(alpha, x, m);
        wm *= w;
    }
    (re.value() + tail.re, im.value() + tail.im)
}

/// `R1 = Σ sin(kω) k^{2d-1} - ω^{-2d} Γ(2d) sin(πd)` and
/// `R2 = Σ cos(kω) k^{2d-1} - ω^{-2d} Γ(2d) cos(πd)`.
///
/// Requires `ω ∈ (0, π/4]` and `Kω ≥ 64`; the tail beyond `K` is summed by
/// parts, so its error is of order `(Kω)^{-6} K^{2d-1} / ω`.
pub fn lemma_d1_remainder(d: f64, omega: f64, k: usize) -> Result<(f64, f64)> {
    check_memory(d)?;
    if !(omega > 0.0 && omega <= FRAC_PI_4) {
        return Err(domain("omega", omega, "0 < omega <= pi/4"));
    }
    if (k as f64) * omega < MIN_TERMS_TIMES_OMEGA {
        return Err(domain("K", k as f64, "K * omega >= 64"));
    }
    let (c, s) = oscillatory_sum(2.0 * d - 1.0, omega, k);
    let lead = omega.powf(-2.0 * d) * gamma_unchecked(2.0 * d);
    Ok((s - lead * sin_pi(d), c - lead * cos_pi(d)))
}
