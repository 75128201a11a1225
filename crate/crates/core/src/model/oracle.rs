//! Brute-force covariances from the truncated two-sided linear representation
//! `Y_n = Σ_{|l| ≤ K} A_l ε_{n-l}` with `A_l = [[a0_l, a1_l], [-a1_l, a0_l]]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::QPair;
use crate::specfun::{check_memory, frac_coeffs, gamma_unchecked, KahanSum};

pub const DEFAULT_ORACLE_K: usize = 200_000;

/// `a0_l`, `a1_l` for `l = -K..=K`, stored at index `l + K`.
///
/// `a0_0 = 2 q0`, `a0_l = q0 c_{d,|l|}` and `a1_l = sign(l) q1 c_{d,|l|}`.
#[derive(Debug, Clone)]
pub struct CoefficientSequences {
    pub k: usize,
    pub a0: Vec<f64>,
    pub a1: Vec<f64>,
}

impl CoefficientSequences {
    pub fn new(d: f64, q: QPair, k: usize) -> Result<Self> {
        check_memory(d)?;
        let c = frac_coeffs(d, k);
        let mut a0 = Vec::with_capacity(2 * k + 1);
        let mut a1 = Vec::with_capacity(2 * k + 1);
        for l in -(k as i64)..=(k as i64) {
            let cl = c[l.unsigned_abs() as usize];
            a0.push(if l == 0 { 2.0 * q.q0 } else { q.q0 * cl });
            a1.push(l.signum() as f64 * q.q1 * cl);
        }
        Ok(Self { k, a0, a1 })
    }

    /// `(a0_l, a1_l)`, zero outside the truncation window.
    pub fn get(&self, l: i64) -> (f64, f64) {
        let i = l + self.k as i64;
        if i < 0 || i as usize >= self.a0.len() {
            (0.0, 0.0)
        } else {
            (self.a0[i as usize], self.a1[i as usize])
        }
    }

    fn matrix(&self, idx: usize) -> [[f64; 2]; 2] {
        let (a0, a1) = (self.a0[idx], self.a1[idx]);
        [[a0, a1], [-a1, a0]]
    }

    /// `Σ_l A_{l+h} A_l^T` over the window, every matrix entry accumulated
    /// independently.
    pub fn matrix_acvf(&self, h: i64) -> BivariateAcvf {
        let len = self.a0.len() as i64;
        let start = 0.max(-h);
        let end = len.min(len - h);
        let mut acc = [[KahanSum::new(); 2]; 2];
        for i in start..end {
            let a = self.matrix((i + h) as usize);
            let b = self.matrix(i as usize);
            for (r, row) in acc.iter_mut().enumerate() {
                for (c, cell) in row.iter_mut().enumerate() {
                    cell.add(a[r][0] * b[c][0] + a[r][1] * b[c][1]);
                }
            }
        }
        BivariateAcvf {
            g11: acc[0][0].value(),
            g12: acc[0][1].value(),
            g21: acc[1][0].value(),
            g22: acc[1][1].value(),
        }
    }

    /// `cos(λ0 h) γ11(h) - sin(λ0 h) γ12(h)` from the truncated sums.
    pub fn acvf_x(&self, lambda0: f64, h: i64) -> f64 {
        let m = self.matrix_acvf(h);
        let w = lambda0 * h as f64;
        w.cos() * m.g11 - w.sin() * m.g12
    }
}

/// Lag-`h` matrix autocovariance `E Y_{n+h} Y_n^T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariateAcvf {
    pub g11: f64,
    pub g12: f64,
    pub g21: f64,
    pub g22: f64,
}

/// Brute-force `γ_X(h)` with truncation `K ≥ |h| + 1`.
pub fn acvf_oracle(d: f64, q: QPair, lambda0: f64, h: i64, k: usize) -> Result<f64> {
    check_window(h, k)?;
    Ok(CoefficientSequences::new(d, q, k)?.acvf_x(lambda0, h))
}

/// Brute-force bivariate `γ_Y(h)`.
pub fn oracle_matrix(d: f64, q: QPair, h: i64, k: usize) -> Result<BivariateAcvf> {
    check_window(h, k)?;
    Ok(CoefficientSequences::new(d, q, k)?.matrix_acvf(h))
}

fn check_window(h: i64, k: usize) -> Result<()> {
    if (h.unsigned_abs() as usize) < k {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "oracle truncation K = {k} must exceed |h| = {}",
            h.unsigned_abs()
        )))
    }
}

/// Bound on the terms dropped by truncating at `K`, from
/// `c_{d,k} ≤ k^{d-1}/Γ(d)`: roughly `4 (q0² + q1²) K'^{2d-1} / ((1 - 2d) Γ²(d))`
/// with `K' = K - |h|`.
pub fn oracle_tail_bound(d: f64, q: QPair, h: i64, k: usize) -> f64 {
    let kk = (k as f64 - h.unsigned_abs() as f64).max(1.0);
    let gd = gamma_unchecked(d);
    4.0 * (q.q0 * q.q0 + q.q1 * q.q1) * kk.powf(2.0 * d - 1.0) / ((1.0 - 2.0 * d) * gd * gd)
}
