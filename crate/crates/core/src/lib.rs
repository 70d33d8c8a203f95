//! Poisson scaling limits of associated lattice random fields.
//!
//! The crate generates two families of associated 0/1 fields on `Z^d`
//! (pattern fields `X_k = ∏_{g∈G} Y_{k+g}` and the one-dimensional or-field
//! `X_k = Y_k ∨ Y_{k+1}` over i.i.d. Bernoulli `Y`), evaluates their exact
//! first and second moments, and probes the rescaled measures
//! `μ_n(A) = Σ_{j ∈ Z^d ∩ nA} X_j` through characteristic functions, box-count
//! histograms and exact association checks.
//!
//! Modules:
//! * [`field`]: field families, sampling, `p_n`, covariances, `σ(n)`;
//! * [`measure`]: test functions, `μ_n(A)`, `∫ f dμ_n`, Simpson quadrature;
//! * [`limit`]: `I_1(n)`, `φ(t)`, covariance bounds, exact and Monte Carlo
//!   characteristic functions;
//! * [`association`]: exact up-set and Monte Carlo FKG checks;
//! * [`stats`]: count histograms, reference laws, TV distance, moments;
//! * [`config`] and [`experiment`]: the reproducible experiment runner.

pub mod association;
pub mod config;
pub mod error;
pub mod experiment;
pub mod field;
pub mod lattice;
pub mod limit;
pub mod measure;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use field::{FieldKind, FieldSample, FieldSpec};
pub use lattice::{LatticeWindow, Site};
pub use measure::{BoxRegion, TestFunction, Trapezoid};
pub use num_complex::Complex64;
