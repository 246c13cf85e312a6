//! Secular-equation analysis for Rayleigh-type surface waves on an isotropic
//! elastic half-space under impedance-type boundary conditions.
//!
//! The crate covers the whole pipeline:
//!
//! - [`material`]: validated half-space parameters and bulk speeds;
//! - [`kernel`]: velocity-stress system matrices, decay exponents and the
//!   two decaying surface modes;
//! - [`secular`]: the secular function for perturbed (`gamma_j = eps_j + i Z_j`,
//!   `eps_j < 0`) and full impedance (`eps_j = 0`) boundary conditions, with
//!   the boundary-system determinant kept as an independent oracle;
//! - [`analysis`]: subsonic root finding, argument-principle zero scans of
//!   the upper half-plane, and numerical certification of the coercivity,
//!   quadratic-form, energy-identity and uniform-limit properties that rule
//!   out zeros off the real axis.
//!
//! All evaluations are plain `f64`/`Complex64` arithmetic; branch cuts on
//! the real axis are resolved as limits from the upper half-plane, which is
//! where the scans operate.

// indexed loops mirror the displayed matrix forms, and `!(x > 0.0)` guards
// reject NaN where `x <= 0.0` would let it through
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod material;
pub mod secular;

pub use error::{Error, Result};
pub use material::Material;
pub use secular::{BoundaryParams, Regime, SecularEval};
