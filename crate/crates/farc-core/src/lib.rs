//! Frequency-angle two-dimensional reflection coefficient (FARC) models for
//! terahertz building materials.
//!
//! The crate covers the full path from raw reflection measurements to fitted
//! material models:
//!
//! - [`dielectric`]: frequency-dependent complex relative permittivity via a
//!   bound-electron oscillator model (non-metallic materials) and a
//!   free-electron model (metals).
//! - [`reflection`]: rough-surface Fresnel reflection, the FARC models that
//!   replace the static permittivity with the dielectric models, their
//!   four-parameter statistical reparametrization `(a, b, c, d)`, and the
//!   exact mapping between the physical and statistical forms.
//! - [`measurement`]: conversion of calibrated power ratios to reflection
//!   coefficient samples, dataset validation on a frequency x angle grid, and
//!   angle-averaged coefficients.
//! - [`fitting`]: RMSE objective, deterministic multistart simplex fitting of
//!   the statistical parameters, and synthetic dataset generation.
//!
//! Every operation is a pure function over immutable values (datasets are
//! frozen once validated), so evaluations, sweeps, and multistart fits can
//! run concurrently without coordination.
//!
//! The crate is `no_std` compatible (`alloc` is required); complex-valued
//! math is backed by `libm` so it works without the standard library.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dielectric;
pub mod fitting;
pub mod measurement;
pub mod reflection;

pub use dielectric::{ComplexPermittivity, DielectricParams, DrudeParams, LorenzParams};
pub use fitting::{FitConfig, FitError, FitReport, ParamBounds};
pub use measurement::{
    Dataset, GridPolicy, MeasurementError, MeasurementGrid, PowerRecord, ReflectionSample,
};
pub use reflection::{
    IncidenceGeometry, MaterialClass, MaterialSurface, ReflectionCoefficient, ReflectionError,
    StatFarcParams, SurfacePermittivity,
};
