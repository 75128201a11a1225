//! Fractional random-modulation (FRMod) models of cyclical long memory.
//!
//! `X_n = cos(λ0 n) Y_{1,n} + sin(λ0 n) Y_{2,n}` with `Y` a bivariate
//! fractionally integrated series. The crate provides the parameter algebra
//! between the equivalent limiting parameterisations, closed-form
//! autocovariances and spectral densities (basic, boundary, asymmetric,
//! ARMA-filtered and multi-factor), brute-force oracles, exact and truncated
//! Gaussian simulation, and demodulation and estimation utilities.
//!
//! ```
//! use frmod_core::{CovarianceModel, FrmodSpec};
//!
//! let spec = FrmodSpec::basic(0.3, std::f64::consts::FRAC_PI_4, 1.0, 0.5)?;
//! let acvf = spec.acvf(10)?;
//! let phi = spec.limits()?.time.phi;
//! assert!(acvf.values[0] > 0.0 && phi.abs() < 0.5 * std::f64::consts::PI);
//! # Ok::<(), frmod_core::Error>(())
//! ```

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
mod fft;
pub mod model;
pub mod params;
pub mod quad;
pub mod simulate;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use estimate::{Companion, Periodogram};
pub use model::{
    AsymSpec, BivariateAcvf, Component, CovarianceModel, FrmodSpec, Model, MultiFactorSpec,
    ScalarAcvf,
};
pub use params::{
    APair, Branch, GPair, LimitParams, MemoryFrequency, PhaseInterval, QPair, RPair, Side,
    SpecLimit, TimeLimit,
};
pub use quad::QuadResult;
pub use simulate::{Method, SeriesSample};
pub use spectrum::{BoundaryConstants, SpectrumGrid, SpectrumValue};
