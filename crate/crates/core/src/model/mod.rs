//! Model definitions and exact autocovariances.
//!
//! The base series is `X_n = cos(λ0 n) Y_{1,n} + sin(λ0 n) Y_{2,n}` with
//! `Y = (I - B)^{-D} Q ε` a bivariate FARIMA(0, D, 0) whose matrix ACVF has
//! `γ11 = γ22` and `γ12 = -γ21`. Then `γ_X(h) = cos(λ0 h) γ11(h) - sin(λ0 h) γ12(h)`.

pub mod arma;
pub mod oracle;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::params::{
    boundary_q, check_frequency, LimitParams, MemoryFrequency, QPair, Side, TimeLimit,
};
use crate::specfun::{check_memory, cos_pi, gamma_ratio_unchecked, gamma_unchecked, sin_pi};
use crate::spectrum;

pub use arma::{arma_gain, check_polynomial, min_root_modulus, psi_weights, PolyKind};
pub use oracle::{
    acvf_oracle, oracle_matrix, oracle_tail_bound, BivariateAcvf, CoefficientSequences,
    DEFAULT_ORACLE_K,
};

/// Toeplitz size used for positive-semidefiniteness checks.
pub const PSD_CHECK_SIZE: usize = 256;

/// ψ-expansion truncation target for AR filters.
pub const PSI_EPS: f64 = 1e-12;

/// Largest number of psi weights an ARMA autocovariance may use.
pub const MAX_PSI_TERMS: usize = 1 << 18;

/// Below this length the weight autocorrelation is summed directly.
const DIRECT_CORRELATION: usize = 512;

/// Autocovariances at lags `0..=H`; negative lags follow by evenness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarAcvf {
    pub values: Vec<f64>,
    /// Bound on the truncation error of every value (zero when exact).
    pub tail_bound: f64,
}

impl ScalarAcvf {
    pub fn exact(values: Vec<f64>) -> Self {
        Self {
            values,
            tail_bound: 0.0,
        }
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, h: i64) -> f64 {
        self.values[h.unsigned_abs() as usize]
    }

    /// Smallest eigenvalue of the `size × size` Toeplitz matrix `[γ(i - j)]`.
    pub fn toeplitz_min_eigenvalue(&self, size: usize) -> f64 {
        let size = size.min(self.values.len());
        let m = DMatrix::from_fn(size, size, |i, j| self.values[i.abs_diff(j)]);
        m.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Fails unless the leading Toeplitz block (up to 256 lags) has
    /// eigenvalues `≥ -1e-8 γ(0)`.
    pub fn check_psd(&self) -> Result<()> {
        let min = self.toeplitz_min_eigenvalue(PSD_CHECK_SIZE);
        if min >= -1e-8 * self.values[0] {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite {
                step: 0,
                variance: min,
            })
        }
    }
}

/// FRMod(p, d, q): the base series filtered by `Θ(B) / Φ(B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrmodSpec {
    pub mf: MemoryFrequency,
    pub q: QPair,
    #[serde(default)]
    pub ar: Vec<f64>,
    #[serde(default)]
    pub ma: Vec<f64>,
}

impl FrmodSpec {
    pub fn new(mf: MemoryFrequency, q: QPair, ar: Vec<f64>, ma: Vec<f64>) -> Result<Self> {
        let spec = Self { mf, q, ar, ma };
        spec.validate()?;
        Ok(spec)
    }

    /// FRMod(0, d, 0).
    pub fn basic(d: f64, lambda0: f64, q0: f64, q1: f64) -> Result<Self> {
        Self::new(
            MemoryFrequency::new(d, lambda0)?,
            QPair::new(q0, q1)?,
            Vec::new(),
            Vec::new(),
        )
    }

    /// FRMod(0, d, 0) with the phase on the edge of the admissible interval.
    pub fn boundary(d: f64, lambda0: f64, q1: f64, side: Side) -> Result<Self> {
        let q = boundary_q(d, q1, side)?;
        Self::new(
            MemoryFrequency::new(d, lambda0)?,
            QPair::new(q.q0, q.q1)?,
            Vec::new(),
            Vec::new(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        check_memory(self.mf.d)?;
        check_frequency(self.mf.lambda0)?;
        self.q.validate()?;
        check_polynomial(&self.ar, PolyKind::Ar)?;
        check_polynomial(&self.ma, PolyKind::Ma)
    }

    pub fn d(&self) -> f64 {
        self.mf.d
    }

    pub fn lambda0(&self) -> f64 {
        self.mf.lambda0
    }

    pub fn has_arma(&self) -> bool {
        self.ar.iter().any(|&c| c != 0.0) || self.ma.iter().any(|&c| c != 0.0)
    }

    /// Limiting constants of the unfiltered series.
    pub fn limits(&self) -> Result<LimitParams> {
        LimitParams::from_q(self.q, self.mf.d)
    }

    /// `|Θ(e^{-iλ0})|² / |Φ(e^{-iλ0})|²`, the factor the ARMA filter applies to
    /// `c_γ` and `c_f^±`.
    pub fn gain_at_lambda0(&self) -> f64 {
        arma_gain(&self.ar, &self.ma, self.mf.lambda0)
    }
}

/// Two boundary components sharing `λ0` with separate memory on each side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymSpec {
    pub lambda0: f64,
    pub d_plus: f64,
    pub d_minus: f64,
    pub q1_plus: f64,
    pub q1_minus: f64,
}

impl AsymSpec {
    pub fn new(
        lambda0: f64,
        d_plus: f64,
        d_minus: f64,
        q1_plus: f64,
        q1_minus: f64,
    ) -> Result<Self> {
        let spec = Self {
            lambda0,
            d_plus,
            d_minus,
            q1_plus,
            q1_minus,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_frequency(self.lambda0)?;
        check_memory(self.d_plus)?;
        check_memory(self.d_minus)?;
        if !self.q1_plus.is_finite() || !self.q1_minus.is_finite() {
            return Err(Error::InvalidModel("q1 amplitudes must be finite".into()));
        }
        if self.q1_plus == 0.0 && self.q1_minus == 0.0 {
            return Err(Error::InvalidModel(
                "at least one of q1_plus, q1_minus must be nonzero".into(),
            ));
        }
        Ok(())
    }

    pub fn q0_plus(&self) -> f64 {
        (PI * self.d_plus / 2.0).tan() * self.q1_plus
    }

    pub fn q0_minus(&self) -> f64 {
        -(PI * self.d_minus / 2.0).tan() * self.q1_minus
    }

    /// `max(d₊, d₋)`, the memory governing the ACVF decay.
    pub fn d_star(&self) -> f64 {
        self.d_plus.max(self.d_minus)
    }

    pub fn d_low(&self) -> f64 {
        self.d_plus.min(self.d_minus)
    }

    /// The nonzero boundary components, `+` side first.
    pub fn components(&self) -> Vec<FrmodSpec> {
        let mut out = Vec::with_capacity(2);
        for (d, q1, side) in [
            (self.d_plus, self.q1_plus, Side::Plus),
            (self.d_minus, self.q1_minus, Side::Minus),
        ] {
            if q1 != 0.0 {
                let q = QPair {
                    q0: side.sign() * (PI * d / 2.0).tan() * q1,
                    q1,
                };
                out.push(FrmodSpec {
                    mf: MemoryFrequency {
                        d,
                        lambda0: self.lambda0,
                    },
                    q,
                    ar: Vec::new(),
                    ma: Vec::new(),
                });
            }
        }
        out
    }

    /// Divergence constants `(c_{f,+}, c_{f,-})`.
    pub fn spec_constants(&self) -> (f64, f64) {
        let c = |d: f64, q1: f64| q1 * q1 * (1.0 - cos_pi(2.0 * d)) / (PI * (1.0 + cos_pi(d)));
        (c(self.d_plus, self.q1_plus), c(self.d_minus, self.q1_minus))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Component {
    Frmod(FrmodSpec),
    Asym(AsymSpec),
}

impl Component {
    pub fn lambda0(&self) -> f64 {
        match self {
            Component::Frmod(s) => s.mf.lambda0,
            Component::Asym(s) => s.lambda0,
        }
    }

    pub fn acvf_at(&self, h: i64) -> Result<f64> {
        match self {
            Component::Frmod(s) => frmod_acvf_at(s, h),
            Component::Asym(s) => Ok(acvf_asym(s, h)),
        }
    }
}

/// Sum of independent cyclical components at distinct frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiFactorSpec {
    pub components: Vec<Component>,
}

impl MultiFactorSpec {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        let spec = Self { components };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidModel(
                "multifactor model needs at least one component".into(),
            ));
        }
        for c in &self.components {
            match c {
                Component::Frmod(s) => s.validate()?,
                Component::Asym(s) => s.validate()?,
            }
        }
        for (i, a) in self.components.iter().enumerate() {
            for b in &self.components[i + 1..] {
                if (a.lambda0() - b.lambda0()).abs() < 1e-12 {
                    return Err(Error::InvalidModel(format!(
                        "component frequencies must be distinct (lambda0 = {})",
                        a.lambda0()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Any supported model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Frmod(FrmodSpec),
    Asym(AsymSpec),
    #[serde(rename = "multifactor")]
    MultiFactor(MultiFactorSpec),
}

impl From<FrmodSpec> for Model {
    fn from(s: FrmodSpec) -> Self {
        Model::Frmod(s)
    }
}

impl From<AsymSpec> for Model {
    fn from(s: AsymSpec) -> Self {
        Model::Asym(s)
    }
}

impl From<MultiFactorSpec> for Model {
    fn from(s: MultiFactorSpec) -> Self {
        Model::MultiFactor(s)
    }
}

/// Common interface used by simulation, quadrature and the CLI.
pub trait CovarianceModel {
    /// `γ_X(0..=hmax)`.
    fn acvf(&self, hmax: usize) -> Result<ScalarAcvf>;

    /// `f_X(λ)`; errors at a singular frequency.
    fn spectral_density(&self, lambda: f64) -> Result<f64>;

    /// `f_X(anchor + delta)`, keeping full precision in small offsets from a
    /// singular frequency used as the anchor.
    fn spectral_density_offset(&self, anchor: f64, delta: f64) -> Result<f64> {
        self.spectral_density(anchor + delta)
    }

    /// Cyclical frequencies in `(0, π)` where `f_X` diverges.
    fn singular_frequencies(&self) -> Vec<f64>;

    /// Largest memory parameter among the components.
    fn max_memory(&self) -> f64;
}

impl CovarianceModel for FrmodSpec {
    fn acvf(&self, hmax: usize) -> Result<ScalarAcvf> {
        acvf_frmod(self, hmax, None)
    }

    fn spectral_density(&self, lambda: f64) -> Result<f64> {
        spectrum::spec_x(self, lambda)
    }

    fn spectral_density_offset(&self, anchor: f64, delta: f64) -> Result<f64> {
        spectrum::spec_x_offset(self, anchor, delta)
    }

    fn singular_frequencies(&self) -> Vec<f64> {
        vec![self.mf.lambda0]
    }

    fn max_memory(&self) -> f64 {
        self.mf.d
    }
}

impl CovarianceModel for AsymSpec {
    fn acvf(&self, hmax: usize) -> Result<ScalarAcvf> {
        self.validate()?;
        Ok(ScalarAcvf::exact(
            (0..=hmax as i64).map(|h| acvf_asym(self, h)).collect(),
        ))
    }

    fn spectral_density(&self, lambda: f64) -> Result<f64> {
        spectrum::spec_asym(self, lambda)
    }

    fn spectral_density_offset(&self, anchor: f64, delta: f64) -> Result<f64> {
        spectrum::spec_asym_offset(self, anchor, delta)
    }

    fn singular_frequencies(&self) -> Vec<f64> {
        vec![self.lambda0]
    }

    fn max_memory(&self) -> f64 {
        self.d_star()
    }
}

impl CovarianceModel for Component {
    fn acvf(&self, hmax: usize) -> Result<ScalarAcvf> {
        match self {
            Component::Frmod(s) => s.acvf(hmax),
            Component::Asym(s) => s.acvf(hmax),
        }
    }

    fn spectral_density(&self, lambda: f64) -> Result<f64> {
        match self {
            Component::Frmod(s) => s.spectral_density(lambda),
            Component::Asym(s) => s.spectral_density(lambda),
        }
    }

    fn spectral_density_offset(&self, anchor: f64, delta: f64) -> Result<f64> {
        match self {
            Component::Frmod(s) => s.spectral_density_offset(anchor, delta),
            Component::Asym(s) => s.spectral_density_offset(anchor, delta),
        }
    }

    fn singular_frequencies(&self) -> Vec<f64> {
        vec![self.lambda0()]
    }

    fn max_memory(&self) -> f64 {
        match self {
            Component::Frmod(s) => s.max_memory(),
            Component::Asym(s) => s.max_memory(),
        }
    }
}

impl CovarianceModel for MultiFactorSpec {
    fn acvf(&self, hmax: usize) -> Result<ScalarAcvf> {
        let mut values = vec![0.0; hmax + 1];
        let mut tail_bound = 0.0;
        for c in &self.components {
            let part = c.acvf(hmax)?;
            for (v, p) in values.iter_mut().zip(&part.values) {
                *v += p;
            }
            tail_bound += part.tail_bound;
        }
        Ok(ScalarAcvf { values, tail_bound })
    }

    fn spectral_density(&self, lambda: f64) -> Result<f64> {
        spectrum::spec_multifactor(self, lambda)
    }

    fn spectral_density_offset(&self, anchor: f64, delta: f64) -> Result<f64> {
        spectrum::spec_multifactor_offset(self, anchor, delta)
    }

    fn singular_frequencies(&self) -> Vec<f64> {
        self.components.iter().map(Component::lambda0).collect()
    }

    fn max_memory(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.max_memory())
            .fold(0.0, f64::max)
    }
}

impl CovarianceModel for Model {
    fn acvf(&self, hmax: usize) -> Result<ScalarAcvf> {
        match self {
            Model::Frmod(s) => s.acvf(hmax),
            Model::Asym(s) => s.acvf(hmax),
            Model::MultiFactor(s) => s.acvf(hmax),
        }
    }

    fn spectral_density(&self, lambda: f64) -> Result<f64> {
        match self {
            Model::Frmod(s) => s.spectral_density(lambda),
            Model::Asym(s) => s.spectral_density(lambda),
            Model::MultiFactor(s) => s.spectral_density(lambda),
        }
    }

    fn spectral_density_offset(&self, anchor: f64, delta: f64) -> Result<f64> {
        match self {
            Model::Frmod(s) => s.spectral_density_offset(anchor, delta),
            Model::Asym(s) => s.spectral_density_offset(anchor, delta),
            Model::MultiFactor(s) => s.spectral_density_offset(anchor, delta),
        }
    }

    fn singular_frequencies(&self) -> Vec<f64> {
        match self {
            Model::Frmod(s) => s.singular_frequencies(),
            Model::Asym(s) => s.singular_frequencies(),
            Model::MultiFactor(s) => s.singular_frequencies(),
        }
    }

    fn max_memory(&self) -> f64 {
        match self {
            Model::Frmod(s) => s.max_memory(),
            Model::Asym(s) => s.max_memory(),
            Model::MultiFactor(s) => s.max_memory(),
        }
    }
}

/// `Γ(1-2d) sin(πd) Γ(h+d) / (π Γ(h+1-d))` at `h ≥ 0`.
fn f_term(d: f64, h: f64) -> f64 {
    gamma_unchecked(1.0 - 2.0 * d) * sin_pi(d) / PI * gamma_ratio_unchecked(h + d, h + 1.0 - d)
}

/// `Γ(h+2d) / (Γ(2d) Γ(h+1))` at `h ≥ 0`.
fn c_term(d: f64, h: f64) -> f64 {
    gamma_ratio_unchecked(h + 2.0 * d, h + 1.0) / gamma_unchecked(2.0 * d)
}

/// `(γ11(h), γ12(h))` of the bivariate FARIMA(0, D, 0) with amplitudes `q`.
///
/// Gamma-function arguments use `|h|`; `γ11` is even and `γ12` odd. At
/// `h = 0` the `1{h ≥ 0}` and `1{h ≤ 0}` terms both contribute.
pub fn acvf_y(d: f64, q: QPair, h: i64) -> Result<(f64, f64)> {
    check_memory(d)?;
    Ok(acvf_y_unchecked(d, q, h))
}

pub(crate) fn acvf_y_unchecked(d: f64, q: QPair, h: i64) -> (f64, f64) {
    let ha = h.unsigned_abs() as f64;
    let f = f_term(d, ha);
    let c = c_term(d, ha);
    let weight = if h == 0 { 2.0 } else { 1.0 };
    let (s0, s1) = (q.q0 * q.q0, q.q1 * q.q1);
    let g11 = s0 * (2.0 * f + weight * c) + s1 * (2.0 * f - weight * c);
    let g12 = h.signum() as f64 * 2.0 * q.q0 * q.q1 * c;
    (g11, g12)
}

pub(crate) fn modulate(lambda0: f64, h: i64, g11: f64, g12: f64) -> f64 {
    let w = lambda0 * h as f64;
    w.cos() * g11 - w.sin() * g12
}

/// `γ_X(h)` of FRMod(0, d, 0).
pub fn acvf_frmod0(spec: &FrmodSpec, h: i64) -> Result<f64> {
    if spec.has_arma() {
        return Err(Error::InvalidModel(
            "acvf_frmod0 requires empty AR and MA parts".into(),
        ));
    }
    check_memory(spec.mf.d)?;
    Ok(frmod0_value(spec.mf.d, spec.q, spec.mf.lambda0, h))
}

pub(crate) fn frmod0_value(d: f64, q: QPair, lambda0: f64, h: i64) -> f64 {
    let (g11, g12) = acvf_y_unchecked(d, q, h);
    modulate(lambda0, h, g11, g12)
}

/// `γ_X(0..=hmax)` of FRMod(p, d, q).
///
/// Without AR part the MA filter is applied exactly. With an AR part the
/// ψ-weights of `Θ/Φ` are truncated after `k` terms (default: `ρ^k < 1e-12`)
/// and the returned `tail_bound` covers the omitted weights.
pub fn acvf_frmod(spec: &FrmodSpec, hmax: usize, k: Option<usize>) -> Result<ScalarAcvf> {
    spec.validate()?;
    let (d, q, l0) = (spec.mf.d, spec.q, spec.mf.lambda0);
    let base = |h: i64| frmod0_value(d, q, l0, h);
    if !spec.has_arma() {
        return Ok(ScalarAcvf::exact((0..=hmax as i64).map(base).collect()));
    }
    let has_ar = spec.ar.iter().any(|&c| c != 0.0);
    let (weights, tail) = if has_ar {
        let k = k.unwrap_or_else(|| arma::truncation_for(&spec.ar, &spec.ma, PSI_EPS));
        if k > MAX_PSI_TERMS {
            return Err(Error::Truncation {
                required: k,
                limit: MAX_PSI_TERMS,
            });
        }
        let psi = psi_weights(&spec.ar, &spec.ma, k);
        let tail = arma::psi_tail(&psi, &spec.ar);
        (psi, tail)
    } else {
        let mut theta = vec![1.0];
        theta.extend_from_slice(&spec.ma);
        (theta, 0.0)
    };
    let kk = weights.len() - 1;
    // w(m) = Σ_j ψ_j ψ_{j+m}
    let w: Vec<f64> = if kk < DIRECT_CORRELATION {
        (0..=kk)
            .map(|m| {
                weights[..=kk - m]
                    .iter()
                    .zip(&weights[m..])
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    } else {
        let reversed: Vec<f64> = weights.iter().rev().copied().collect();
        crate::fft::convolve(&reversed, &weights)[kk..].to_vec()
    };
    let base_vals: Vec<f64> = (0..=(hmax + kk) as i64).map(base).collect();
    let g = |h: i64| base_vals[h.unsigned_abs() as usize];
    let values = (0..=hmax as i64)
        .map(|h| {
            let mut v = w[0] * g(h);
            for (m, &wm) in w.iter().enumerate().skip(1) {
                let m = m as i64;
                v += wm * (g(h + m) + g(h - m));
            }
            v
        })
        .collect();
    let s: f64 = weights.iter().map(|v| v.abs()).sum();
    Ok(ScalarAcvf {
        values,
        tail_bound: base_vals[0] * (2.0 * s * tail + tail * tail),
    })
}

fn frmod_acvf_at(spec: &FrmodSpec, h: i64) -> Result<f64> {
    if spec.has_arma() {
        let a = acvf_frmod(spec, h.unsigned_abs() as usize, None)?;
        Ok(a.get(h))
    } else {
        acvf_frmod0(spec, h)
    }
}

/// `γ_X(h)` of the asymmetric-memory model, written with the boundary
/// identities `q0² ± q1²` substituted.
pub fn acvf_asym(spec: &AsymSpec, h: i64) -> f64 {
    let ha = h.unsigned_abs() as f64;
    let parts = |d: f64| {
        let (c, s) = (cos_pi(d), sin_pi(d));
        let a = 4.0 * gamma_unchecked(1.0 - 2.0 * d) * s / (1.0 + c)
            * gamma_ratio_unchecked(ha + d, ha + 1.0 - d)
            / PI;
        let bc = 2.0 * c / (1.0 + c) * c_term(d, ha);
        let b = if h >= 0 { bc } else { 0.0 };
        let cc = if h <= 0 { bc } else { 0.0 };
        let dd = ((1.0 - c) / (1.0 + c)).sqrt() * 2.0 * c_term(d, ha);
        (a - b - cc, dd)
    };
    let (abc_p, d_p) = parts(spec.d_plus);
    let (abc_m, d_m) = parts(spec.d_minus);
    let (qp, qm) = (spec.q1_plus * spec.q1_plus, spec.q1_minus * spec.q1_minus);
    let w = spec.lambda0 * h as f64;
    w.cos() * (qp * abc_p + qm * abc_m) - w.sin() * h.signum() as f64 * (qp * d_p - qm * d_m)
}

/// `Σ_m γ_{X_m}(h)` of a multi-factor model.
pub fn acvf_multifactor(spec: &MultiFactorSpec, h: i64) -> Result<f64> {
    spec.components.iter().map(|c| c.acvf_at(h)).sum()
}

/// `c_γ cos(λ0 h + φ) h^{2d-1}` for `h ≥ 1`.
pub fn asymptotic_envelope(d: f64, t: TimeLimit, lambda0: f64, h: i64) -> Result<f64> {
    check_memory(d)?;
    if h < 1 {
        return Err(domain("h", h as f64, "h >= 1"));
    }
    let hf = h as f64;
    Ok(t.c_gamma * (lambda0 * hf + t.phi).cos() * hf.powf(2.0 * d - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{boundary_q0, q_to_r, r_to_timelimit};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn cross_term_vanishes_without_q1() {
        for h in -20..=20 {
            let (_, g12) = acvf_y(0.3, QPair { q0: 1.3, q1: 0.0 }, h).unwrap();
            assert_eq!(g12, 0.0);
        }
    }

    #[test]
    fn lag_zero_counts_both_indicator_terms() {
        let d = 0.35;
        let q = QPair { q0: 1.1, q1: 0.6 };
        let f0 = gamma_unchecked(1.0 - 2.0 * d) * gamma_unchecked(d) * sin_pi(d)
            / (gamma_unchecked(1.0 - d) * PI);
        let expect = q.q0 * q.q0 * (2.0 * f0 + 2.0) + q.q1 * q.q1 * (2.0 * f0 - 2.0);
        let (g11, g12) = acvf_y(d, q, 0).unwrap();
        assert!(rel(g11, expect) < 1e-13);
        assert_eq!(g12, 0.0);
        // the brute-force sums agree (tail of order K^{2d-1})
        let m = oracle_matrix(d, q, 0, 200_000).unwrap();
        assert!((m.g11 - g11).abs() <= oracle_tail_bound(d, q, 0, 200_000));
    }

    #[test]
    fn parity_of_bivariate_acvf() {
        let q = QPair { q0: 2.0, q1: -1.0 };
        for h in 1..60 {
            let (a11, a12) = acvf_y(0.2, q, h).unwrap();
            let (b11, b12) = acvf_y(0.2, q, -h).unwrap();
            assert_eq!(a11, b11);
            assert_eq!(a12, -b12);
        }
    }

    #[test]
    fn closed_form_matches_oracle_fixture() {
        let (d, q) = (0.4, QPair { q0: 1.0, q1: 3.0 });
        let seq = CoefficientSequences::new(d, q, DEFAULT_ORACLE_K).unwrap();
        for h in 1..=50 {
            let (g11, g12) = acvf_y(d, q, h).unwrap();
            let m = seq.matrix_acvf(h);
            let tol = 5e-3f64.max(3.0 * oracle_tail_bound(d, q, h, DEFAULT_ORACLE_K));
            assert!((m.g11 - g11).abs() <= tol * g11.abs(), "h={h}");
            assert!((m.g12 - g12).abs() <= tol * g12.abs(), "h={h}");
        }
    }

    #[test]
    fn frmod0_examples() {
        let spec = FrmodSpec::basic(0.3, 1.1, 1.0, 0.7).unwrap();
        let (g11, _) = acvf_y(0.3, spec.q, 0).unwrap();
        assert_eq!(acvf_frmod0(&spec, 0).unwrap(), g11);
        for h in 1..=100 {
            assert!(
                (acvf_frmod0(&spec, h).unwrap() - acvf_frmod0(&spec, -h).unwrap()).abs() < 1e-15
            );
        }
        let arma = FrmodSpec::new(spec.mf, spec.q, vec![0.3], vec![]).unwrap();
        assert!(acvf_frmod0(&arma, 1).is_err());
    }

    #[test]
    fn envelope_residual_decays() {
        let (d, l0) = (0.3, PI / 5.0);
        let spec = FrmodSpec::basic(d, l0, 1.0, -0.8).unwrap();
        let t = r_to_timelimit(q_to_r(spec.q, d).unwrap()).unwrap();
        let residual = |h: i64| {
            let hf = h as f64;
            (acvf_frmod0(&spec, h).unwrap() - asymptotic_envelope(d, t, l0, h).unwrap()).abs()
                / hf.powf(2.0 * d - 1.0)
        };
        let mut prev = f64::INFINITY;
        for h in [1_000i64, 10_000, 100_000] {
            let r = residual(h);
            assert!(r < prev, "h={h}");
            prev = r;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn envelope_examples() {
        let t = TimeLimit {
            c_gamma: 2.0,
            phi: 0.0,
        };
        let l0 = PI / 4.0;
        let e = asymptotic_envelope(0.2, t, l0, 8).unwrap();
        assert!(rel(e, 2.0 * 8f64.powf(-0.6)) < 1e-14);
        assert!(asymptotic_envelope(0.2, t, l0, 0).is_err());
        // sign flips across half a period
        let a = asymptotic_envelope(0.2, t, l0, 16).unwrap();
        let b = asymptotic_envelope(0.2, t, l0, 20).unwrap();
        assert!(a > 0.0 && b < 0.0);
    }

    #[test]
    fn envelope_ratio_tends_to_one() {
        let (d, l0) = (0.25, 1.0);
        let spec = FrmodSpec::basic(d, l0, 1.0, 1.0).unwrap();
        let t = r_to_timelimit(q_to_r(spec.q, d).unwrap()).unwrap();
        for h in 100_000i64..100_050 {
            let env = asymptotic_envelope(d, t, l0, h).unwrap();
            if (l0 * h as f64 + t.phi).cos().abs() > 0.5 {
                assert!((acvf_frmod0(&spec, h).unwrap() / env - 1.0).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn ma1_expansion() {
        let base = FrmodSpec::basic(0.25, 1.2, 1.0, 0.5).unwrap();
        let theta = 0.6;
        let spec = FrmodSpec::new(base.mf, base.q, vec![], vec![theta]).unwrap();
        let a = acvf_frmod(&spec, 10, None).unwrap();
        assert_eq!(a.tail_bound, 0.0);
        for h in 0..=10i64 {
            let g = |k: i64| acvf_frmod0(&base, k).unwrap();
            let expect = (1.0 + theta * theta) * g(h) + theta * (g(h + 1) + g(h - 1));
            assert!((a.get(h) - expect).abs() < 1e-13 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn empty_filter_is_identity() {
        let spec = FrmodSpec::basic(0.1, 2.0, 2.0, -1.0).unwrap();
        let a = acvf_frmod(&spec, 30, Some(500)).unwrap();
        for h in 0..=30 {
            assert_eq!(a.get(h), acvf_frmod0(&spec, h).unwrap());
        }
    }

    #[test]
    fn ar_truncation_is_self_consistent() {
        let base = FrmodSpec::basic(0.3, PI / 3.0, 1.0, 0.5).unwrap();
        let spec = FrmodSpec::new(base.mf, base.q, vec![0.5], vec![]).unwrap();
        let short = acvf_frmod(&spec, 20, Some(1_000)).unwrap();
        let long = acvf_frmod(&spec, 20, Some(10_000)).unwrap();
        for h in 0..=20 {
            let diff = (short.get(h) - long.get(h)).abs();
            assert!(diff <= short.tail_bound + 1e-11 * long.get(0), "h={h}");
        }
        // a short expansion reports a tail bound that covers the gap
        let coarse = acvf_frmod(&spec, 20, Some(12)).unwrap();
        assert!(coarse.tail_bound > 0.0);
        for h in 0..=20 {
            assert!((coarse.get(h) - long.get(h)).abs() <= coarse.tail_bound);
        }
    }

    #[test]
    fn fft_correlation_matches_direct_sum() {
        let base = FrmodSpec::basic(0.3, PI / 3.0, 1.0, 0.5).unwrap();
        let spec = FrmodSpec::new(base.mf, base.q, vec![0.5, -0.2], vec![0.4]).unwrap();
        let direct = acvf_frmod(&spec, 40, Some(DIRECT_CORRELATION - 1)).unwrap();
        let fft = acvf_frmod(&spec, 40, Some(DIRECT_CORRELATION + 1)).unwrap();
        for h in 0..=40 {
            assert!(
                (direct.get(h) - fft.get(h)).abs() < 1e-13 * direct.get(0),
                "h={h}"
            );
        }
    }

    #[test]
    fn near_unit_root_exceeds_truncation_limit() {
        let base = FrmodSpec::basic(0.3, 1.0, 1.0, 0.5).unwrap();
        let spec = FrmodSpec::new(base.mf, base.q, vec![0.9999999], vec![]).unwrap();
        let err = acvf_frmod(&spec, 5, None).unwrap_err();
        assert!(matches!(
            err,
            Error::Truncation {
                limit: MAX_PSI_TERMS,
                ..
            }
        ));
    }

    #[test]
    fn rejects_non_stationary_ar() {
        let base = FrmodSpec::basic(0.3, 1.0, 1.0, 0.5).unwrap();
        let err = FrmodSpec::new(base.mf, base.q, vec![1.01], vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidPolynomial { .. }));
    }

    #[test]
    fn boundary_direct_formula() {
        for (d, q1, side) in [
            (0.4, 3.0, Side::Minus),
            (0.4, 3.0, Side::Plus),
            (0.15, -1.2, Side::Plus),
        ] {
            let q = QPair {
                q0: boundary_q0(d, q1, side).unwrap(),
                q1,
            };
            let (c, s) = (cos_pi(d), sin_pi(d));
            for h in -40i64..=40 {
                let ha = h.unsigned_abs() as f64;
                let lead = 4.0 * gamma_unchecked(1.0 - 2.0 * d) * s / (1.0 + c)
                    * gamma_ratio_unchecked(ha + d, ha + 1.0 - d)
                    / PI;
                let ind = 2.0 * c / (1.0 + c) * c_term(d, ha);
                let count = if h == 0 { 2.0 } else { 1.0 };
                let g11 = q1 * q1 * (lead - count * ind);
                let g12 = side.sign()
                    * h.signum() as f64
                    * ((1.0 - c) / (1.0 + c)).sqrt()
                    * 2.0
                    * q1
                    * q1
                    * c_term(d, ha);
                let (a11, a12) = acvf_y(d, q, h).unwrap();
                assert!((a11 - g11).abs() <= 1e-10 * g11.abs());
                assert!((a12 - g12).abs() <= 1e-10 * g12.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn asym_equals_sum_of_boundary_components() {
        let spec = AsymSpec::new(PI / 4.0, 0.3, 0.45, 1.0, 0.7).unwrap();
        let comps = spec.components();
        assert_eq!(comps.len(), 2);
        for h in -30i64..=30 {
            let sum: f64 = comps.iter().map(|c| acvf_frmod0(c, h).unwrap()).sum();
            let direct = acvf_asym(&spec, h);
            assert!((sum - direct).abs() <= 1e-12 * sum.abs().max(1.0), "h={h}");
        }
    }

    #[test]
    fn asym_degenerate_cases() {
        let spec = AsymSpec::new(1.0, 0.3, 0.2, 1.5, 0.0).unwrap();
        let single = FrmodSpec::boundary(0.3, 1.0, 1.5, Side::Plus).unwrap();
        for h in 0..20 {
            assert!((acvf_asym(&spec, h) - acvf_frmod0(&single, h).unwrap()).abs() < 1e-12);
        }
        let (g11, _) = acvf_y(0.3, single.q, 0).unwrap();
        assert!((acvf_asym(&spec, 0) - g11).abs() < 1e-12);
        assert!(AsymSpec::new(1.0, 0.3, 0.2, 0.0, 0.0).is_err());
    }

    #[test]
    fn asym_envelope_exponent() {
        let spec = AsymSpec::new(PI / 4.0, 0.3, 0.45, 1.0, 1.0).unwrap();
        // amplitude over one period, regressed on log h
        let amp = |h0: i64| {
            (h0..h0 + 8)
                .map(|h| acvf_asym(&spec, h).abs())
                .fold(0.0, f64::max)
        };
        let (h1, h2) = (1_000f64, 100_000f64);
        let slope = (amp(h2 as i64).ln() - amp(h1 as i64).ln()) / (h2.ln() - h1.ln());
        assert!((slope - (2.0 * 0.45 - 1.0)).abs() < 0.02, "slope {slope}");
    }

    #[test]
    fn multifactor_examples() {
        let a = Component::Frmod(FrmodSpec::basic(0.3, PI / 4.0, 1.0, 0.5).unwrap());
        let b = Component::Frmod(FrmodSpec::basic(0.2, 2.0 * PI / 3.0, 0.5, -1.0).unwrap());
        let one = MultiFactorSpec::new(vec![a.clone()]).unwrap();
        let two = MultiFactorSpec::new(vec![a.clone(), b.clone()]).unwrap();
        let doubled = MultiFactorSpec {
            components: vec![a.clone(), a.clone()],
        };
        assert!(MultiFactorSpec::new(doubled.components.clone()).is_err());
        for h in -15i64..=15 {
            let single = a.acvf_at(h).unwrap();
            assert_eq!(acvf_multifactor(&one, h).unwrap(), single);
            assert_eq!(acvf_multifactor(&doubled, h).unwrap(), 2.0 * single);
            let sum = single + b.acvf_at(h).unwrap();
            assert_eq!(acvf_multifactor(&two, h).unwrap(), sum);
        }
        let seq = two.acvf(15).unwrap();
        for h in 0..=15 {
            assert_eq!(seq.get(h), acvf_multifactor(&two, h).unwrap());
        }
    }

    #[test]
    fn toeplitz_psd_for_examples() {
        let specs: Vec<Model> = vec![
            Model::Frmod(FrmodSpec::basic(0.4, PI / 4.0, 1.0, 3.0).unwrap()),
            Model::Frmod(FrmodSpec::boundary(0.4, PI / 4.0, 3.0, Side::Minus).unwrap()),
            Model::Asym(AsymSpec::new(PI / 4.0, 0.3, 0.45, 1.0, 1.0).unwrap()),
        ];
        for m in &specs {
            let a = m.acvf(300).unwrap();
            assert!(a.check_psd().is_ok());
        }
        let bad = ScalarAcvf::exact(vec![1.0, 0.9, -0.9]);
        assert!(bad.check_psd().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gamma_x_is_even(d in 0.01f64..0.49, l0 in 0.05f64..3.1, q0 in -3.0f64..3.0, q1 in -3.0f64..3.0, h in 1i64..500) {
            prop_assume!(q0.abs() + q1.abs() > 1e-3);
            let spec = FrmodSpec::basic(d, l0, q0, q1).unwrap();
            let a = acvf_frmod0(&spec, h).unwrap();
            let b = acvf_frmod0(&spec, -h).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300));
        }

        #[test]
        fn variance_is_positive(d in 0.01f64..0.49, q0 in -3.0f64..3.0, q1 in -3.0f64..3.0) {
            prop_assume!(q0.abs() + q1.abs() > 1e-3);
            let (g11, _) = acvf_y(d, QPair { q0, q1 }, 0).unwrap();
            prop_assert!(g11 > 0.0);
        }
    }
}
