//! ARMA polynomials `Φ(z) = 1 - φ₁z - … - φ_p z^p` and
//! `Θ(z) = 1 + θ₁z + … + θ_q z^q`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Roots closer to the unit circle than this are rejected.
pub const ROOT_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyKind {
    Ar,
    Ma,
}

impl PolyKind {
    fn name(self) -> &'static str {
        match self {
            PolyKind::Ar => "AR",
            PolyKind::Ma => "MA",
        }
    }
}

fn trimmed(coeffs: &[f64]) -> &[f64] {
    let len = coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
    &coeffs[..len]
}

/// Smallest root modulus of `1 - Σ φ_i z^i` (AR) or `1 + Σ θ_i z^i` (MA).
///
/// The roots are the reciprocals of the eigenvalues of the companion matrix
/// of the reversed polynomial. Returns infinity for a constant polynomial.
pub fn min_root_modulus(coeffs: &[f64], kind: PolyKind) -> f64 {
    let c = trimmed(coeffs);
    let p = c.len();
    if p == 0 {
        return f64::INFINITY;
    }
    let sign = match kind {
        PolyKind::Ar => 1.0,
        PolyKind::Ma => -1.0,
    };
    let companion = DMatrix::from_fn(p, p, |i, j| {
        if i == 0 {
            sign * c[j]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let largest = companion
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    1.0 / largest
}

pub fn check_polynomial(coeffs: &[f64], kind: PolyKind) -> Result<()> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "{} coefficients must be finite",
            kind.name()
        )));
    }
    let modulus = min_root_modulus(coeffs, kind);
    if modulus > 1.0 + ROOT_MARGIN {
        Ok(())
    } else {
        Err(Error::InvalidPolynomial {
            which: kind.name(),
            modulus,
        })
    }
}

/// First `k + 1` coefficients of `Θ(z) / Φ(z)`.
pub fn psi_weights(ar: &[f64], ma: &[f64], k: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut v = if j == 0 {
            1.0
        } else {
            ma.get(j - 1).copied().unwrap_or(0.0)
        };
        for (i, &phi) in ar.iter().enumerate().take(j) {
            v += phi * psi[j - 1 - i];
        }
        psi.push(v);
    }
    psi
}

/// Power transfer `|Θ(e^{-iλ})|² / |Φ(e^{-iλ})|²`.
pub fn arma_gain(ar: &[f64], ma: &[f64], lambda: f64) -> f64 {
    let eval = |coeffs: &[f64], sign: f64| {
        let (mut re, mut im) = (1.0, 0.0);
        for (j, &c) in coeffs.iter().enumerate() {
            let w = (j + 1) as f64 * lambda;
            re += sign * c * w.cos();
            im -= sign * c * w.sin();
        }
        re * re + im * im
    };
    eval(ma, 1.0) / eval(ar, -1.0)
}

/// Truncation length so that `ρ^K` falls below `eps`, with `ρ` the inverse
/// smallest AR root modulus.
pub fn truncation_for(ar: &[f64], ma: &[f64], eps: f64) -> usize {
    let p = trimmed(ar).len();
    if p == 0 {
        return trimmed(ma).len();
    }
    let rho = 1.0 / min_root_modulus(ar, PolyKind::Ar);
    let k = (eps.ln() / rho.ln()).ceil();
    // Repeated roots add a polynomial factor j^{m-1}; pad for it.
    k as usize + trimmed(ma).len() + 8 * p
}

/// Bound on `Σ_{j>K} |ψ_j|` by geometric extrapolation of the last weights.
pub fn psi_tail(psi: &[f64], ar: &[f64]) -> f64 {
    let p = trimmed(ar).len();
    if p == 0 {
        return 0.0;
    }
    let rho = 1.0 / min_root_modulus(ar, PolyKind::Ar);
    let window = (2 * p).min(psi.len());
    let last = psi[psi.len() - window..]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    // Peak of the trailing window rescaled to the first omitted index, then summed
    // as a geometric series; the window factor absorbs oscillation between peaks.
    last * (window as f64) * rho / (1.0 - rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_modulus_of_first_order() {
        assert!((min_root_modulus(&[0.5], PolyKind::Ar) - 2.0).abs() < 1e-12);
        assert!((min_root_modulus(&[0.25], PolyKind::Ma) - 4.0).abs() < 1e-12);
        assert!(min_root_modulus(&[], PolyKind::Ar).is_infinite());
        assert!(min_root_modulus(&[0.0, 0.0], PolyKind::Ar).is_infinite());
    }

    #[test]
    fn root_modulus_of_complex_pair() {
        // Φ(z) = 1 - 2r cos(ω) z + r² z²... written as 1 - φ₁z - φ₂z²
        // with roots of modulus 1/r.
        let (r, w) = (0.8f64, 0.7f64);
        let ar = [2.0 * r * w.cos(), -r * r];
        assert!((min_root_modulus(&ar, PolyKind::Ar) - 1.0 / r).abs() < 1e-10);
    }

    #[test]
    fn polynomial_checks() {
        assert!(check_polynomial(&[0.5], PolyKind::Ar).is_ok());
        assert!(check_polynomial(&[1.0], PolyKind::Ar).is_err());
        assert!(check_polynomial(&[1.2], PolyKind::Ma).is_err());
        assert!(check_polynomial(&[], PolyKind::Ma).is_ok());
        let err = check_polynomial(&[0.5, 0.6], PolyKind::Ar).unwrap_err();
        assert!(matches!(err, Error::InvalidPolynomial { which: "AR", .. }));
    }

    #[test]
    fn psi_weight_examples() {
        assert_eq!(psi_weights(&[], &[0.4], 3), vec![1.0, 0.4, 0.0, 0.0]);
        let psi = psi_weights(&[0.5], &[], 4);
        assert_eq!(psi, vec![1.0, 0.5, 0.25, 0.125, 0.0625]);
        // (1 + θz)/(1 - φz): ψ_j = (φ + θ) φ^{j-1}
        let psi = psi_weights(&[0.5], &[0.3], 3);
        assert!((psi[1] - 0.8).abs() < 1e-15 && (psi[3] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn gain_examples() {
        assert_eq!(arma_gain(&[], &[], 1.3), 1.0);
        let l: f64 = 0.9;
        let ma = arma_gain(&[], &[0.4], l);
        assert!((ma - (1.0 + 0.16 + 0.8 * l.cos())).abs() < 1e-14);
        let ar = arma_gain(&[0.5], &[], l);
        assert!((ar - 1.0 / (1.0 + 0.25 - l.cos())).abs() < 1e-14);
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        let ar = [0.9];
        let k = 50;
        let psi = psi_weights(&ar, &[], k);
        let true_tail: f64 = (k + 1..10_000).map(|j| 0.9f64.powi(j as i32)).sum();
        assert!(psi_tail(&psi, &ar) >= true_tail);
    }
}
