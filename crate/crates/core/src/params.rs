//! Parameter algebra for the limiting behavior of the model.
//!
//! Five equivalent descriptions of the same limit are supported:
//!
//! * `(q0, q1)` model amplitudes,
//! * `(a0, a1)` coefficient-asymptotic amplitudes,
//! * `(r0, r1)` limiting bivariate ACVF, `γ_Y(h) ~ R h^{2d-1}`,
//! * `(g0, g1)` limiting bivariate spectrum, `f_Y(λ) ~ G λ^{-2d}`,
//! * `(c_γ, φ)` and `(c_f⁺, c_f⁻)` for the univariate series.
//!
//! All angles are in radians.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Error, Result};
use crate::specfun::{check_memory, cos_pi, gamma_unchecked, sin_pi};

/// Slack used when testing whether a phase lies inside the admissible interval.
pub const PHASE_TOL: f64 = 1e-9;

/// Memory parameter `d ∈ (0, ½)` together with a cyclical frequency `λ0 ∈ (0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemoryFrequency {
    pub d: f64,
    pub lambda0: f64,
}

impl MemoryFrequency {
    pub fn new(d: f64, lambda0: f64) -> Result<Self> {
        check_memory(d)?;
        check_frequency(lambda0)?;
        Ok(Self { d, lambda0 })
    }
}

/// `0 < λ0 < π`.
pub fn check_frequency(lambda0: f64) -> Result<()> {
    if lambda0 > 0.0 && lambda0 < PI {
        Ok(())
    } else {
        Err(domain("lambda0", lambda0, "0 < lambda0 < pi"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QPair {
    pub q0: f64,
    pub q1: f64,
}

impl QPair {
    pub fn new(q0: f64, q1: f64) -> Result<Self> {
        let q = Self { q0, q1 };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.q0.is_finite() || !self.q1.is_finite() {
            return Err(Error::InvalidModel("q0 and q1 must be finite".into()));
        }
        if self.q0 == 0.0 && self.q1 == 0.0 {
            return Err(Error::InvalidModel("(q0, q1) must not both be zero".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct APair {
    pub a0: f64,
    pub a1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RPair {
    pub r0: f64,
    pub r1: f64,
}

impl RPair {
    pub fn new(r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > 0.0) || !r1.is_finite() {
            return Err(domain("r0", r0, "r0 > 0"));
        }
        Ok(Self { r0, r1 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GPair {
    pub g0: f64,
    pub g1: f64,
}

/// Limiting ACVF `γ_X(h) ~ c_γ cos(λ0 h + φ) h^{2d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeLimit {
    pub c_gamma: f64,
    pub phi: f64,
}

impl TimeLimit {
    pub fn new(c_gamma: f64, phi: f64) -> Result<Self> {
        if !(c_gamma > 0.0) || !c_gamma.is_finite() {
            return Err(domain("c_gamma", c_gamma, "c_gamma > 0"));
        }
        if !phi.is_finite() {
            return Err(domain("phi", phi, "finite"));
        }
        Ok(Self { c_gamma, phi })
    }
}

/// Limiting spectrum `f_X(λ) ~ c_f^± |λ - λ0|^{-2d}` as `λ → λ0±`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecLimit {
    pub cf_plus: f64,
    pub cf_minus: f64,
}

impl SpecLimit {
    pub fn new(cf_plus: f64, cf_minus: f64) -> Result<Self> {
        if !(cf_plus >= 0.0) {
            return Err(domain("cf_plus", cf_plus, "cf_plus >= 0"));
        }
        if !(cf_minus >= 0.0) {
            return Err(domain("cf_minus", cf_minus, "cf_minus >= 0"));
        }
        if cf_plus + cf_minus == 0.0 {
            return Err(domain("cf_plus + cf_minus", 0.0, "positive sum"));
        }
        Ok(Self { cf_plus, cf_minus })
    }
}

/// Closed interval of admissible phases `[(d - ½)π, (½ - d)π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseInterval {
    pub lo: f64,
    pub hi: f64,
}

impl PhaseInterval {
    pub fn contains(&self, phi: f64) -> bool {
        phi >= self.lo - PHASE_TOL && phi <= self.hi + PHASE_TOL
    }

    fn check(&self, phi: f64) -> Result<()> {
        if self.contains(phi) {
            Ok(())
        } else {
            Err(Error::InadmissiblePhase {
                phi,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

/// Root choice when inverting `(r0, r1) → (a0, a1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

/// Which side of `λ0` carries the spectral divergence in the boundary case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// Every limiting description derived from one `(d, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    pub d: f64,
    pub q: QPair,
    pub a: APair,
    pub r: RPair,
    pub g: GPair,
    pub time: TimeLimit,
    pub spec: SpecLimit,
    pub interval: PhaseInterval,
}

impl LimitParams {
    pub fn from_q(q: QPair, d: f64) -> Result<Self> {
        q.validate()?;
        let a = q_to_a(q, d)?;
        let r = q_to_r(q, d)?;
        let g = r_to_g(r, d)?;
        let time = r_to_timelimit(r)?;
        let spec = timelimit_to_speclimit(time, d)?;
        Ok(Self {
            d,
            q,
            a,
            r,
            g,
            time,
            spec,
            interval: admissible_interval(d)?,
        })
    }
}

pub fn admissible_interval(d: f64) -> Result<PhaseInterval> {
    check_memory(d)?;
    let hi = (0.5 - d) * PI;
    Ok(PhaseInterval { lo: -hi, hi })
}

pub fn q_to_a(q: QPair, d: f64) -> Result<APair> {
    check_memory(d)?;
    let gd = gamma_unchecked(d);
    Ok(APair {
        a0: q.q0 / gd,
        a1: q.q1 / gd,
    })
}

/// `Γ²(d) / Γ(2d)`
fn gamma_sq_ratio(d: f64) -> f64 {
    let gd = gamma_unchecked(d);
    gd * gd / gamma_unchecked(2.0 * d)
}

pub fn a_to_r(a: APair, d: f64) -> Result<RPair> {
    check_memory(d)?;
    if a.a0 == 0.0 && a.a1 == 0.0 {
        return Err(Error::InvalidModel("(a0, a1) must not both be zero".into()));
    }
    let k = gamma_sq_ratio(d);
    let (s0, s1) = (a.a0 * a.a0, a.a1 * a.a1);
    Ok(RPair {
        r0: k * ((s0 + s1) / cos_pi(d) + s0 - s1),
        r1: -2.0 * a.a0 * a.a1 * k,
    })
}

/// Discriminant `r0² - tan²(πd) r1²` of the `(r0, r1) → (a0, a1)` inversion.
pub fn discriminant(r: RPair, d: f64) -> f64 {
    let t = (PI * d).tan();
    r.r0 * r.r0 - t * t * r.r1 * r.r1
}

/// Recovers `(a0, a1)` with `a1 ≥ 0` from the limiting ACVF constants.
pub fn r_to_a(r: RPair, d: f64, branch: Branch) -> Result<APair> {
    check_memory(d)?;
    if !(r.r0 > 0.0) {
        return Err(domain("r0", r.r0, "r0 > 0"));
    }
    let delta = discriminant(r, d);
    if delta < 0.0 {
        return Err(Error::InfeasibleLimit {
            r0: r.r0,
            r1: r.r1,
            discriminant: delta,
        });
    }
    Ok(invert_r(r, d, delta.sqrt(), branch))
}

fn invert_r(r: RPair, d: f64, sqrt_delta: f64, branch: Branch) -> APair {
    let k = gamma_sq_ratio(d);
    let alpha = k * (1.0 / cos_pi(d) - 1.0);
    let nu = match branch {
        Branch::Plus => r.r0 + sqrt_delta,
        Branch::Minus => r.r0 - sqrt_delta,
    };
    if nu <= 0.0 {
        // a1 = 0: the limit is carried by a0 alone.
        let beta = k * (1.0 / cos_pi(d) + 1.0);
        return APair {
            a0: (r.r0 / beta).sqrt(),
            a1: 0.0,
        };
    }
    let a1 = (nu / (2.0 * alpha)).sqrt();
    APair {
        a0: -r.r1 / (2.0 * k * a1),
        a1,
    }
}

pub fn q_to_r(q: QPair, d: f64) -> Result<RPair> {
    check_memory(d)?;
    q.validate()?;
    let g2d = gamma_unchecked(2.0 * d);
    let sec = 1.0 / cos_pi(d);
    Ok(RPair {
        r0: (q.q0 * q.q0 * (sec + 1.0) + q.q1 * q.q1 * (sec - 1.0)) / g2d,
        r1: -2.0 * q.q0 * q.q1 / g2d,
    })
}

pub fn r_to_g(r: RPair, d: f64) -> Result<GPair> {
    check_memory(d)?;
    let s = gamma_unchecked(2.0 * d) / PI;
    Ok(GPair {
        g0: s * cos_pi(d) * r.r0,
        g1: s * sin_pi(d) * r.r1,
    })
}

/// Limiting bivariate spectrum constants written directly in `(q0, q1)`.
pub fn q_to_g(q: QPair, d: f64) -> Result<GPair> {
    check_memory(d)?;
    let c = cos_pi(d);
    Ok(GPair {
        g0: (q.q0 * q.q0 * (1.0 + c) + q.q1 * q.q1 * (1.0 - c)) / PI,
        g1: -2.0 * sin_pi(d) * q.q0 * q.q1 / PI,
    })
}

/// `c_f^+ = (g0 - g1)/2`, `c_f^- = (g0 + g1)/2`.
pub fn g_to_speclimit(g: GPair) -> SpecLimit {
    SpecLimit {
        cf_plus: 0.5 * (g.g0 - g.g1),
        cf_minus: 0.5 * (g.g0 + g.g1),
    }
}

pub fn r_to_timelimit(r: RPair) -> Result<TimeLimit> {
    if !(r.r0 > 0.0) {
        return Err(domain("r0", r.r0, "r0 > 0"));
    }
    let c_gamma = r.r0.hypot(r.r1);
    Ok(TimeLimit {
        c_gamma,
        phi: (-r.r1 / c_gamma).clamp(-1.0, 1.0).asin(),
    })
}

pub fn timelimit_to_r(t: TimeLimit) -> RPair {
    RPair {
        r0: t.c_gamma * t.phi.cos(),
        r1: -t.c_gamma * t.phi.sin(),
    }
}

pub fn timelimit_to_speclimit(t: TimeLimit, d: f64) -> Result<SpecLimit> {
    let interval = admissible_interval(d)?;
    interval.check(t.phi)?;
    let phi = t.phi.clamp(interval.lo, interval.hi);
    let s = t.c_gamma * gamma_unchecked(2.0 * d) / (2.0 * PI);
    Ok(SpecLimit {
        cf_plus: (s * (PI * d - phi).cos()).max(0.0),
        cf_minus: (s * (PI * d + phi).cos()).max(0.0),
    })
}

pub fn speclimit_to_timelimit(s: SpecLimit, d: f64) -> Result<TimeLimit> {
    check_memory(d)?;
    let (p, m) = (s.cf_plus, s.cf_minus);
    if !(p >= 0.0 && m >= 0.0) || p + m == 0.0 {
        return Err(domain(
            "cf_plus + cf_minus",
            p + m,
            "nonnegative with positive sum",
        ));
    }
    let root = (p * p + m * m - 2.0 * p * m * (2.0 * PI * d).cos()).sqrt();
    Ok(TimeLimit {
        c_gamma: 2.0 * gamma_unchecked(1.0 - 2.0 * d) * root,
        phi: ((p - m) * cos_pi(d) / root).clamp(-1.0, 1.0).asin(),
    })
}

/// Amplitudes `(q0, q1)` producing the requested limiting ACVF.
///
/// Uses the `+` root of the inversion with `a1 ≥ 0`. Phases within
/// [`PHASE_TOL`] of an endpoint of the admissible interval are treated as the
/// boundary, where the discriminant vanishes.
pub fn target_phase_to_q(t: TimeLimit, d: f64) -> Result<QPair> {
    let interval = admissible_interval(d)?;
    interval.check(t.phi)?;
    if !(t.c_gamma > 0.0) {
        return Err(domain("c_gamma", t.c_gamma, "c_gamma > 0"));
    }
    let r = timelimit_to_r(TimeLimit {
        c_gamma: t.c_gamma,
        phi: t.phi.clamp(interval.lo, interval.hi),
    });
    let sqrt_delta = discriminant(r, d).max(0.0).sqrt();
    let a = invert_r(r, d, sqrt_delta, Branch::Plus);
    let gd = gamma_unchecked(d);
    Ok(QPair {
        q0: gd * a.a0,
        q1: gd * a.a1,
    })
}

/// `q0` placing the phase on the edge of the admissible interval.
///
/// `Side::Plus` gives `φ = (½ - d)π` (so `c_f^- = 0`, divergence only for
/// `λ > λ0`); `Side::Minus` gives `φ = -(½ - d)π`.
pub fn boundary_q0(d: f64, q1: f64, side: Side) -> Result<f64> {
    check_memory(d)?;
    Ok(side.sign() * sin_pi(d) / (1.0 + cos_pi(d)) * q1)
}

/// Boundary amplitude pair for a given `q1`.
pub fn boundary_q(d: f64, q1: f64, side: Side) -> Result<QPair> {
    Ok(QPair {
        q0: boundary_q0(d, q1, side)?,
        q1,
    })
}

/// Phase as a function of `q1` at fixed `q0`.
pub fn phi_curve(d: f64, q0: f64, q1_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_memory(d)?;
    q1_grid
        .iter()
        .map(|&q1| {
            let q = QPair { q0, q1 };
            let phi = if q1 == 0.0 && q0 != 0.0 {
                0.0
            } else {
                r_to_timelimit(q_to_r(q, d)?)?.phi
            };
            Ok((q1, phi))
        })
        .collect()
}

/// Range of `q1` between the two boundary values for a fixed `q0`,
/// `|q1| ≤ |q0| / tan(πd/2)`, on which [`phi_curve`] is one-to-one.
pub fn q1_admissible_range(d: f64, q0: f64) -> Result<(f64, f64)> {
    check_memory(d)?;
    let m = q0.abs() / (FRAC_PI_2 * d).tan();
    Ok((-m, m))
}
