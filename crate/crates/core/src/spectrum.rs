//! Closed-form spectral densities, limiting constants and the quadrature map
//! from spectrum back to autocovariance.
//!
//! `f_{Y,12}` is purely imaginary; it is carried as the real `g` with
//! `f_{Y,12} = i g`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{domain, Error, Result};
use crate::model::{arma_gain, AsymSpec, CovarianceModel, FrmodSpec, MultiFactorSpec};
use crate::params::{check_frequency, QPair, Side};
use crate::quad::{integrate, QuadResult};
use crate::specfun::{check_memory, cos_pi};

/// Default absolute tolerance of [`acvf_from_spectrum`].
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

const MAX_SEGMENTS: usize = 4_000;

/// Spectral quantities at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumValue {
    pub lambda: f64,
    pub f11: f64,
    pub f12_imag: f64,
    pub fx: f64,
}

/// `f_X` on a frequency grid in `(0, π)` with neighbourhoods of the singular
/// frequencies removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub singular_points: Vec<f64>,
}

impl SpectrumGrid {
    /// `points` equally spaced midpoints `π(i - 1/2)/points`, `i = 1..=points`,
    /// dropping any within `exclusion` of `0` or of `±λ0`.
    pub fn new<M: CovarianceModel + ?Sized>(
        model: &M,
        points: usize,
        exclusion: f64,
    ) -> Result<Self> {
        if points < 2 {
            return Err(domain("points", points as f64, "points >= 2"));
        }
        let radius = exclusion.max(1e-12);
        let mut singular_points = vec![0.0];
        for l0 in model.singular_frequencies() {
            singular_points.push(l0);
            singular_points.push(-l0);
        }
        singular_points.sort_by(f64::total_cmp);
        let mut lambdas = Vec::with_capacity(points);
        let mut values = Vec::with_capacity(points);
        for i in 1..=points {
            let lambda = PI * (i as f64 - 0.5) / points as f64;
            if singular_points.iter().any(|s| (lambda - s).abs() < radius) {
                continue;
            }
            values.push(model.spectral_density(lambda)?);
            lambdas.push(lambda);
        }
        Ok(Self {
            lambdas,
            values,
            singular_points,
        })
    }
}

/// Maps any angle into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// `(f11(λ), g(λ))` of the bivariate FARIMA(0, D, 0), for `λ ∈ (-π, π]`, `λ ≠ 0`.
///
/// `f11` is even and `g` odd in `λ`.
pub fn spec_y(d: f64, q: QPair, lambda: f64) -> Result<(f64, f64)> {
    check_memory(d)?;
    if !(lambda > -PI && lambda <= PI) {
        return Err(domain("lambda", lambda, "-pi < lambda <= pi"));
    }
    if lambda == 0.0 {
        return Err(Error::Singularity(0.0));
    }
    Ok(spec_y_unchecked(d, q, lambda))
}

fn spec_y_unchecked(d: f64, q: QPair, lambda: f64) -> (f64, f64) {
    let l = lambda.abs();
    let scale = (2.0 * (0.5 * l).sin()).powf(-2.0 * d) / PI;
    let (s0, s1) = (q.q0 * q.q0, q.q1 * q.q1);
    let f11 = scale * ((s0 - s1) * ((l - PI) * d).cos() + s0 + s1);
    let g = lambda.signum() * scale * 2.0 * q.q0 * q.q1 * ((l - PI) * d).sin();
    (f11, g)
}

/// Modulated spectrum without the ARMA factor at `anchor + delta`.
///
/// When the anchor is `±λ0` the offset enters `λ ∓ λ0` exactly, which keeps
/// full relative precision in `|λ - λ0|^{-2d}` for tiny offsets.
fn base_fx(d: f64, q: QPair, lambda0: f64, anchor: f64, delta: f64) -> Result<f64> {
    let (u, v) = if anchor == lambda0 {
        (delta, wrap_angle(2.0 * lambda0 + delta))
    } else if anchor == -lambda0 {
        (wrap_angle(-2.0 * lambda0 + delta), delta)
    } else {
        let lambda = anchor + delta;
        (wrap_angle(lambda - lambda0), wrap_angle(lambda + lambda0))
    };
    if u == 0.0 || v == 0.0 {
        return Err(Error::Singularity(anchor + delta));
    }
    let (f11u, gu) = spec_y_unchecked(d, q, u);
    let (f11v, gv) = spec_y_unchecked(d, q, v);
    Ok(0.5 * (f11u + f11v) - 0.5 * (gu - gv))
}

/// `f_X(λ) = ½[f11(λ-λ0) + f11(λ+λ0)] - ½[g(λ-λ0) - g(λ+λ0)]`, times
/// `|Θ(e^{-iλ})|² / |Φ(e^{-iλ})|²` when the spec carries an ARMA filter.
pub fn spec_x(spec: &FrmodSpec, lambda: f64) -> Result<f64> {
    spec_x_offset(spec, lambda, 0.0)
}

/// [`spec_x`] at `anchor + delta`; exact in `delta` when `anchor = ±λ0`.
pub fn spec_x_offset(spec: &FrmodSpec, anchor: f64, delta: f64) -> Result<f64> {
    check_memory(spec.mf.d)?;
    check_frequency(spec.mf.lambda0)?;
    let fx = base_fx(spec.mf.d, spec.q, spec.mf.lambda0, anchor, delta)?;
    if spec.has_arma() {
        Ok(fx * arma_gain(&spec.ar, &spec.ma, anchor + delta))
    } else {
        Ok(fx)
    }
}

/// Bivariate and univariate spectral values of `spec` at `λ`.
pub fn spectrum_value(spec: &FrmodSpec, lambda: f64) -> Result<SpectrumValue> {
    let (f11, f12_imag) = spec_y(spec.mf.d, spec.q, lambda)?;
    Ok(SpectrumValue {
        lambda,
        f11,
        f12_imag,
        fx: spec_x(spec, lambda)?,
    })
}

/// Spectral constants of a boundary-phase FRMod(0, d, 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConstants {
    /// `c` in `f_X(λ) ~ c |λ - λ0|^{-2d}` on the divergent side.
    pub cf_divergent: f64,
    /// `lim f_X(λ)` as `λ → λ0` from the bounded side.
    pub bounded_limit: f64,
}

/// Constants of [`FrmodSpec::boundary`] with the same arguments.
///
/// The bounded limit is `½ (f11 + g)(2λ0)` (argument wrapped), which reduces
/// to `2^{-2d} sin^{-2d}(λ0) (1 - cos θ) q1² / (π (1 + cos πd))` with
/// `θ = (2π - |wrap(2λ0)|) d` when the side and the wrapped `2λ0` have opposite signs,
/// and `θ = |wrap(2λ0)| d` otherwise.
pub fn spec_boundary_constants(
    d: f64,
    q1: f64,
    lambda0: f64,
    side: Side,
) -> Result<BoundaryConstants> {
    check_memory(d)?;
    check_frequency(lambda0)?;
    let denom = PI * (1.0 + cos_pi(d));
    let v = wrap_angle(2.0 * lambda0);
    let x = v.abs();
    let theta = if side.sign() * v.signum() < 0.0 {
        (TAU - x) * d
    } else {
        x * d
    };
    Ok(BoundaryConstants {
        cf_divergent: q1 * q1 * (1.0 - cos_pi(2.0 * d)) / denom,
        bounded_limit: (2.0 * lambda0.sin()).powf(-2.0 * d) * (1.0 - theta.cos()) * q1 * q1 / denom,
    })
}

/// Asymmetric-memory spectrum: sum of its two boundary components.
pub fn spec_asym(spec: &AsymSpec, lambda: f64) -> Result<f64> {
    spec_asym_offset(spec, lambda, 0.0)
}

pub fn spec_asym_offset(spec: &AsymSpec, anchor: f64, delta: f64) -> Result<f64> {
    spec.validate()?;
    let mut total = 0.0;
    for c in spec.components() {
        total += base_fx(c.mf.d, c.q, c.mf.lambda0, anchor, delta)?;
    }
    Ok(total)
}

pub fn spec_multifactor(spec: &MultiFactorSpec, lambda: f64) -> Result<f64> {
    spec_multifactor_offset(spec, lambda, 0.0)
}

pub fn spec_multifactor_offset(spec: &MultiFactorSpec, anchor: f64, delta: f64) -> Result<f64> {
    spec.components
        .iter()
        .map(|c| c.spectral_density_offset(anchor, delta))
        .sum()
}

/// `γ_X(h) = 2 ∫_0^π cos(hλ) f_X(λ) dλ` by adaptive quadrature.
///
/// The range is split at each singular frequency; next to one the
/// substitution `u = |λ - λ0|^{1-2d}` (with the largest memory parameter of
/// the model) turns the `|λ - λ0|^{-2d}` blow-up into a bounded integrand.
pub fn acvf_from_spectrum<M: CovarianceModel + ?Sized>(
    model: &M,
    h: i64,
    tol: f64,
) -> Result<QuadResult> {
    let d = model.max_memory();
    check_memory(d)?;
    let p = 1.0 / (1.0 - 2.0 * d);
    let mut singular: Vec<f64> = model.singular_frequencies();
    singular.sort_by(f64::total_cmp);

    // Pieces of [0, π] with a flag for a singular left / right end.
    let mut knots = vec![(0.0, false)];
    for &s in &singular {
        let prev = knots.last().map_or(0.0, |k: &(f64, bool)| k.0);
        if knots.last().is_some_and(|k| k.1) {
            knots.push((0.5 * (prev + s), false));
        }
        knots.push((s, true));
    }
    knots.push((PI, false));

    let hf = h as f64;
    let integrand = |anchor: f64, delta: f64| -> Result<f64> {
        match model.spectral_density_offset(anchor, delta) {
            Ok(f) => Ok(2.0 * (hf * (anchor + delta)).cos() * f),
            // Only reachable when u^p underflows to zero.
            Err(Error::Singularity(_)) => Ok(0.0),
            Err(e) => Err(e),
        }
    };

    let pieces = knots.len() - 1;
    let piece_tol = tol / pieces as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for w in knots.windows(2) {
        let ((a, sing_a), (b, sing_b)) = (w[0], w[1]);
        let r = if sing_a {
            let top = (b - a).powf(1.0 / p);
            integrate(
                |u| Ok(integrand(a, u.powf(p))? * p * u.powf(p - 1.0)),
                0.0,
                top,
                piece_tol,
                MAX_SEGMENTS,
            )?
        } else if sing_b {
            let top = (b - a).powf(1.0 / p);
            integrate(
                |u| Ok(integrand(b, -u.powf(p))? * p * u.powf(p - 1.0)),
                0.0,
                top,
                piece_tol,
                MAX_SEGMENTS,
            )?
        } else {
            integrate(|x| integrand(x, 0.0), a, b, piece_tol, MAX_SEGMENTS)?
        };
        value += r.value;
        error += r.error;
    }
    Ok(QuadResult { value, error })
}

/// Richardson-extrapolated limit of `F(δ)` as `δ → 0⁺`, assuming
/// `F(δ) = c + b δ^p + o(δ^p)`, from a geometric sequence of `δ` values.
pub fn richardson_limit<F: Fn(f64) -> f64>(f: F, deltas: &[f64], p: f64) -> f64 {
    let vals: Vec<f64> = deltas.iter().map(|&x| f(x)).collect();
    let n = vals.len();
    if n < 2 {
        return vals.first().copied().unwrap_or(f64::NAN);
    }
    let ratio = (deltas[n - 2] / deltas[n - 1]).powf(p);
    (ratio * vals[n - 1] - vals[n - 2]) / (ratio - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{acvf_frmod0, Component};
    use crate::params::{boundary_q0, g_to_speclimit, q_to_g, q_to_r, r_to_g, LimitParams};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn spec_y_examples() {
        let (f11, g) = spec_y(0.3, QPair { q0: 1.0, q1: 0.0 }, 0.7).unwrap();
        assert!(f11 > 0.0 && g == 0.0);
        let (d, q) = (0.35, QPair { q0: 1.3, q1: -0.4 });
        let (f11, g) = spec_y(d, q, PI).unwrap();
        assert_eq!(g, 0.0);
        assert!(rel(f11, 2f64.powf(1.0 - 2.0 * d) * q.q0 * q.q0 / PI) < 1e-14);
        assert!(matches!(spec_y(d, q, 0.0), Err(Error::Singularity(_))));
        assert!(spec_y(d, q, 3.5).is_err());
    }

    #[test]
    fn spec_y_low_frequency_constants() {
        let (d, q) = (0.4, QPair { q0: 1.0, q1: 3.0 });
        let g = q_to_g(q, d).unwrap();
        for &l in &[1e-4, 1e-5, 1e-6] {
            let (f11, f12) = spec_y(d, q, l).unwrap();
            let scale = f64::powf(l, 2.0 * d);
            assert!(rel(f11 * scale, g.g0) < 10.0 * l);
            assert!(rel(f12 * scale, g.g1) < 10.0 * l);
        }
    }

    #[test]
    fn parity_of_spec_y() {
        let q = QPair { q0: 0.8, q1: 2.1 };
        for i in 1..200 {
            let l = PI * i as f64 / 200.0;
            let (a11, a12) = spec_y(0.25, q, l).unwrap();
            let (b11, b12) = spec_y(0.25, q, -l).unwrap();
            assert_eq!(a11, b11);
            assert_eq!(a12, -b12);
            assert!(a11 >= a12.abs());
        }
    }

    #[test]
    fn symmetric_divergence_without_q1() {
        let spec = FrmodSpec::basic(0.3, 1.0, 1.4, 0.0).unwrap();
        let lp = LimitParams::from_q(spec.q, 0.3).unwrap();
        assert!(rel(lp.spec.cf_plus, lp.spec.cf_minus) < 1e-14);
        for &delta in &[1e-3, 1e-5] {
            let up = spec_x(&spec, 1.0 + delta).unwrap();
            let down = spec_x(&spec, 1.0 - delta).unwrap();
            assert!(rel(up, down) < 10.0 * delta);
        }
    }

    #[test]
    fn fx_is_even_and_nonnegative() {
        let spec = FrmodSpec::basic(0.4, PI / 4.0, 1.0, 3.0).unwrap();
        for i in 1..4096 {
            let l = PI * i as f64 / 4096.0;
            if (l - PI / 4.0).abs() < 1e-9 {
                continue;
            }
            let a = spec_x(&spec, l).unwrap();
            assert!(a >= 0.0);
            assert!(rel(spec_x(&spec, -l).unwrap(), a) < 1e-13);
        }
        assert!(matches!(
            spec_x(&spec, PI / 4.0),
            Err(Error::Singularity(_))
        ));
        assert!(matches!(
            spec_x(&spec, -PI / 4.0),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn cyclical_constants_by_extrapolation() {
        let (d, l0) = (0.4, PI / 4.0);
        let spec = FrmodSpec::basic(d, l0, 1.0, 3.0).unwrap();
        let lp = LimitParams::from_q(spec.q, d).unwrap();
        let deltas = [1e-3, 1e-4, 1e-5, 1e-6];
        let up = richardson_limit(
            |x| spec_x(&spec, l0 + x).unwrap() * x.powf(2.0 * d),
            &deltas,
            2.0 * d,
        );
        let down = richardson_limit(
            |x| spec_x(&spec, l0 - x).unwrap() * x.powf(2.0 * d),
            &deltas,
            2.0 * d,
        );
        assert!(rel(up, lp.spec.cf_plus) < 1e-2);
        assert!(rel(down, lp.spec.cf_minus) < 1e-2);
    }

    #[test]
    fn boundary_side_is_pinned() {
        let (d, q1, l0) = (0.4, 3.0, PI / 4.0);
        for side in [Side::Plus, Side::Minus] {
            let bc = spec_boundary_constants(d, q1, l0, side).unwrap();
            assert!(bc.cf_divergent > 0.0 && bc.bounded_limit > 0.0);
            let spec = FrmodSpec::boundary(d, l0, q1, side).unwrap();
            let s = side.sign();
            let deltas = [1e-3, 1e-4, 1e-5, 1e-6];
            let div = richardson_limit(
                |x| spec_x(&spec, l0 + s * x).unwrap() * x.powf(2.0 * d),
                &deltas,
                2.0 * d,
            );
            assert!(
                rel(div, bc.cf_divergent) < 1e-2,
                "{side:?}: {div} vs {}",
                bc.cf_divergent
            );
            let near = spec_x(&spec, l0 - s * 1e-7).unwrap();
            assert!(
                rel(near, bc.bounded_limit) < 1e-3,
                "{side:?}: {near} vs {}",
                bc.bounded_limit
            );
        }
    }

    #[test]
    fn boundary_limit_when_twice_lambda0_wraps() {
        let (d, q1, l0) = (0.3, 1.5, 2.4);
        for side in [Side::Plus, Side::Minus] {
            let bc = spec_boundary_constants(d, q1, l0, side).unwrap();
            let spec = FrmodSpec::boundary(d, l0, q1, side).unwrap();
            let near = spec_x(&spec, l0 - side.sign() * 1e-8).unwrap();
            assert!(rel(near, bc.bounded_limit) < 1e-4, "{side:?}");
        }
    }

    #[test]
    fn asym_constants_and_degenerate_cases() {
        let spec = AsymSpec::new(PI / 4.0, 0.3, 0.45, 1.0, 1.0).unwrap();
        let (cp, cm) = spec.spec_constants();
        let deltas = [1e-3, 1e-4, 1e-5, 1e-6];
        let l0 = spec.lambda0;
        let up = richardson_limit(
            |x| spec_asym(&spec, l0 + x).unwrap() * x.powf(0.6),
            &deltas,
            0.6,
        );
        let down = richardson_limit(
            |x| spec_asym(&spec, l0 - x).unwrap() * x.powf(0.9),
            &deltas,
            0.9,
        );
        assert!(rel(up, cp) < 2e-2, "{up} vs {cp}");
        assert!(rel(down, cm) < 2e-2, "{down} vs {cm}");

        let one_sided = AsymSpec::new(PI / 4.0, 0.3, 0.45, 1.0, 0.0).unwrap();
        let lower = spec_asym(&one_sided, l0 - 1e-6).unwrap();
        let lower2 = spec_asym(&one_sided, l0 - 1e-4).unwrap();
        assert!(rel(lower, lower2) < 0.05);

        let same = AsymSpec::new(1.0, 0.2, 0.2, 1.0, 1.0).unwrap();
        let p = FrmodSpec::boundary(0.2, 1.0, 1.0, Side::Plus).unwrap();
        let m = FrmodSpec::boundary(0.2, 1.0, 1.0, Side::Minus).unwrap();
        for &l in &[0.3, 0.99, 1.01, 2.5] {
            let sum = spec_x(&p, l).unwrap() + spec_x(&m, l).unwrap();
            assert!(rel(spec_asym(&same, l).unwrap(), sum) < 1e-14);
        }
    }

    #[test]
    fn arma_factor_multiplies() {
        let base = FrmodSpec::basic(0.3, 1.0, 1.0, 0.5).unwrap();
        let spec = FrmodSpec::new(base.mf, base.q, vec![0.5], vec![0.2]).unwrap();
        let l = 2.0;
        let expect = spec_x(&base, l).unwrap() * arma_gain(&[0.5], &[0.2], l);
        assert!(rel(spec_x(&spec, l).unwrap(), expect) < 1e-14);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let spec = FrmodSpec::basic(0.25, PI / 3.0, 1.0, 1.0).unwrap();
        for h in 0..=20 {
            let quad = acvf_from_spectrum(&spec, h, DEFAULT_QUAD_TOL).unwrap();
            let exact = acvf_frmod0(&spec, h).unwrap();
            assert!(
                (quad.value - exact).abs() <= 1e-4 * exact.abs(),
                "h={h}: {} vs {exact}",
                quad.value
            );
        }
    }

    #[test]
    fn quadrature_half_integrals_balance_when_symmetric() {
        // With q1 = 0 the two sides of λ0 carry the same leading mass.
        let (d, l0) = (0.4, PI / 2.0);
        let spec = FrmodSpec::basic(d, l0, 1.0, 0.0).unwrap();
        let p = 1.0 / (1.0 - 2.0 * d);
        let eps: f64 = 1e-4;
        let top = eps.powf(1.0 / p);
        let side = |s: f64| {
            let f = |u: f64| Ok(spec_x_offset(&spec, l0, s * u.powf(p))? * p * u.powf(p - 1.0));
            integrate(f, 0.0, top, 1e-12, 500).unwrap().value
        };
        assert!(rel(side(1.0), side(-1.0)) < 1e-3);
    }

    #[test]
    fn quadrature_for_multifactor_and_arma() {
        let a = FrmodSpec::basic(0.3, PI / 4.0, 1.0, 0.5).unwrap();
        let b = FrmodSpec::basic(0.2, 2.0 * PI / 3.0, 0.5, -1.0).unwrap();
        let mf = MultiFactorSpec::new(vec![
            Component::Frmod(a.clone()),
            Component::Frmod(b.clone()),
        ])
        .unwrap();
        let acvf = mf.acvf(5).unwrap();
        for h in 0..=5 {
            let quad = acvf_from_spectrum(&mf, h, DEFAULT_QUAD_TOL).unwrap();
            assert!((quad.value - acvf.get(h)).abs() <= 1e-4 * acvf.get(h).abs().max(1e-2));
        }
        let arma = FrmodSpec::new(a.mf, a.q, vec![0.4], vec![0.3]).unwrap();
        let acvf = arma.acvf(5).unwrap();
        for h in 0..=5 {
            let quad = acvf_from_spectrum(&arma, h, DEFAULT_QUAD_TOL).unwrap();
            assert!((quad.value - acvf.get(h)).abs() <= 1e-4 * acvf.get(h).abs().max(1e-2));
        }
    }

    #[test]
    fn grid_excludes_singular_points() {
        let spec = FrmodSpec::basic(0.3, PI / 4.0, 1.0, 0.5).unwrap();
        let grid = SpectrumGrid::new(&spec, 4096, 1e-4).unwrap();
        assert!(grid.lambdas.iter().all(|l| (l - PI / 4.0).abs() >= 1e-4));
        assert!(grid.lambdas.windows(2).all(|w| w[1] > w[0]));
        assert!(grid.values.iter().all(|&v| v >= 0.0));
        // pi/4 sits halfway between two midpoints
        assert_eq!(grid.lambdas.len(), 4096);
        assert!(grid.lambdas[0] > 0.0 && grid.lambdas[4095] < PI);
        let wide = SpectrumGrid::new(&spec, 4096, 1e-3).unwrap();
        // two around pi/4 and the first midpoint near 0
        assert_eq!(wide.lambdas.len(), 4093);
        assert!(wide.lambdas.iter().all(|l| (l - PI / 4.0).abs() >= 1e-3));
    }

    #[test]
    fn boundary_q0_makes_g1_equal_minus_g0() {
        for &d in &[0.1, 0.3, 0.45] {
            let q = QPair {
                q0: boundary_q0(d, 2.0, Side::Plus).unwrap(),
                q1: 2.0,
            };
            let g = q_to_g(q, d).unwrap();
            assert!(rel(g.g1, -g.g0) < 1e-12);
            let s = g_to_speclimit(g);
            assert!(s.cf_minus.abs() < 1e-12 * s.cf_plus);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn g_constants_agree(d in 0.01f64..0.49, q0 in -4.0f64..4.0, q1 in -4.0f64..4.0) {
            prop_assume!(q0.abs() + q1.abs() > 1e-3);
            let q = QPair { q0, q1 };
            let a = q_to_g(q, d).unwrap();
            let b = r_to_g(q_to_r(q, d).unwrap(), d).unwrap();
            prop_assert!((a.g0 - b.g0).abs() <= 1e-12 * a.g0);
            prop_assert!((a.g1 - b.g1).abs() <= 1e-12 * a.g0);
        }

        #[test]
        fn fx_nonnegative_anywhere(d in 0.01f64..0.49, l0 in 0.05f64..3.1, q0 in -4.0f64..4.0, q1 in -4.0f64..4.0, l in -3.0f64..3.0) {
            prop_assume!(q0.abs() + q1.abs() > 1e-3);
            let spec = FrmodSpec::basic(d, l0, q0, q1).unwrap();
            if let Ok(v) = spec_x(&spec, l) {
                prop_assert!(v >= -1e-12 * v.abs().max(1.0));
            }
        }
    }
}
