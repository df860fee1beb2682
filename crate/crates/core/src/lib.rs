//! Adaptive lasso estimation, variable selection and finite-sample inference
//! for stationary time-series regressions
//!
//! ```text
//! Y_t = sum_i rho_i Y_{t-i} + sum_i gamma_i W_{i,t} + sum_i beta_i X_{i,t-1} + eps_t
//! ```
//!
//! The crate is organised around the life of one analysis:
//!
//! - [`dataset`] turns raw columns (CSV or simulated) into the lagged design `Z_t`.
//! - [`estimators`] fits least squares and the adaptive lasso, and picks the
//!   tuning parameter by BIC along a warm-started path.
//! - [`inference`] estimates the sandwich covariance, the finite-sample bias of
//!   the active coefficients, confidence intervals and the zero-coefficient test,
//!   and simulates quantiles of the fixed-penalty limit law.
//! - [`dgp`] simulates the five reference designs (Gaussian, Student-t and
//!   GARCH errors; independent or correlated covariates).
//! - [`mc`] runs whole Monte Carlo experiments and renders coverage and
//!   rejection tables.
//!
//! ```
//! use alasso::dataset::{build_design, ModelSpec, RawSeriesTable};
//! use alasso::estimators::{fit_path, PathOptions};
//!
//! let y: Vec<f64> = (0..60).map(|t| ((t * 37 % 11) as f64 - 5.0) / 3.0).collect();
//! let raw = RawSeriesTable::new("y", y, vec![]).unwrap();
//! let data = build_design(&raw, &ModelSpec::new(2, 0, 0)).unwrap();
//! let path = fit_path(&data, &PathOptions::default()).unwrap();
//! assert_eq!(path.grid.len(), 100);
//! ```

pub mod dataset;
pub mod dgp;
pub mod error;
pub mod estimators;
pub mod inference;
pub mod linalg;
pub mod mc;
pub mod rng;

pub use error::{Error, Result};
