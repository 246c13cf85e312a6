//! Isotropic elastic half-space parameters with derived bulk wave speeds.
//!
//! The admissible range for the Lamé constants is `mu > 0`, `lambda + mu > 0`,
//! which in engineering variables is `E > 0` and `-1 < nu < 0.5`. These
//! inequalities force the bulk speed ordering `c1 > c2 > 0` that every
//! downstream formula relies on, so validation happens once, at construction.

use crate::error::{Error, Result};

/// Validated isotropic material. The bulk speeds are derived from
/// `(rho, lambda, mu)` at construction and can never go stale:
///
/// - pressure speed `c1 = sqrt((lambda + 2 mu) / rho)`
/// - shear speed    `c2 = sqrt(mu / rho)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    rho: f64,
    lambda: f64,
    mu: f64,
    c1: f64,
    c2: f64,
}

impl Material {
    /// Build a material from mass density and Lamé constants.
    ///
    /// Rejects any parameter set violating `rho > 0`, `mu > 0` or
    /// `lambda + mu > 0`; the error names the violated inequality.
    pub fn from_lame(rho: f64, lambda: f64, mu: f64) -> Result<Self> {
        if !rho.is_finite() || rho <= 0.0 {
            return Err(Error::InvalidMaterial(format!(
                "rho > 0 violated (rho = {rho})"
            )));
        }
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::InvalidMaterial(format!("mu > 0 violated (mu = {mu})")));
        }
        if !lambda.is_finite() || lambda + mu <= 0.0 {
            return Err(Error::InvalidMaterial(format!(
                "lambda + mu > 0 violated (lambda + mu = {})",
                lambda + mu
            )));
        }
        Ok(Self {
            rho,
            lambda,
            mu,
            c1: ((lambda + 2.0 * mu) / rho).sqrt(),
            c2: (mu / rho).sqrt(),
        })
    }

    /// Build a material from Young's modulus and Poisson's ratio,
    /// `E > 0`, `nu` in the open interval `(-1, 0.5)`:
    ///
    /// `mu = E / (2 (1 + nu))`, `lambda = E nu / ((1 + nu)(1 - 2 nu))`.
    pub fn from_young_poisson(rho: f64, young: f64, poisson: f64) -> Result<Self> {
        if !young.is_finite() || young <= 0.0 {
            return Err(Error::InvalidMaterial(format!(
                "E > 0 violated (E = {young})"
            )));
        }
        if !poisson.is_finite() || poisson <= -1.0 || poisson >= 0.5 {
            return Err(Error::InvalidMaterial(format!(
                "-1 < nu < 0.5 violated (nu = {poisson})"
            )));
        }
        let mu = young / (2.0 * (1.0 + poisson));
        let lambda = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
        Self::from_lame(rho, lambda, mu)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Pressure bulk speed.
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Shear bulk speed.
    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Young's modulus recovered from the Lamé constants.
    pub fn young(&self) -> f64 {
        self.mu * (3.0 * self.lambda + 2.0 * self.mu) / (self.lambda + self.mu)
    }

    /// Poisson's ratio recovered from the Lamé constants.
    pub fn poisson(&self) -> f64 {
        self.lambda / (2.0 * (self.lambda + self.mu))
    }

    /// Dimensionless variables of the secular equation:
    /// `tau = c2^2 / c1^2` (always in `(0, 1)`) and the scaled impedances
    /// `delta_j = Z_j / sqrt(mu rho)`.
    pub fn nondimensionalize(&self, z1: f64, z2: f64) -> (f64, f64, f64) {
        let tau = (self.c2 * self.c2) / (self.c1 * self.c1);
        let scale = (self.mu * self.rho).sqrt();
        (tau, z1 / scale, z2 / scale)
    }
}
