//! The secular function for perturbed and full impedance boundary conditions.
//!
//! The surface `x2 = 0` carries the conditions `s12 + gamma1 v1 = 0`,
//! `s22 + gamma2 v2 = 0` with complex ratios `gamma_j = eps_j + i Z_j`.
//! Requiring a two-mode surface wave to satisfy them yields a homogeneous
//! 2x2 system for the mode amplitudes; its determinant, normalized to the
//! pole-free closed form
//!
//! ```text
//! R(c; g1, g2) = (2 - c^2/c2^2)^2 - 4 b2 b1
//!                - (i c^3 / (mu c2^2)) (g1 b2 + g2 b1)
//!                + (c^2 g1 g2 / mu^2) (1 - b2 b1)
//! ```
//!
//! is the secular function. `R` is defined on the whole complex plane (the
//! closed form has no poles); its real subsonic roots are surface-wave
//! speeds. `eps_j = 0` gives the frequency-independent full impedance form,
//! `Z_j = 0` on top of that the classical stress-free Rayleigh function.
//!
//! The 2x2 boundary system itself is kept as an independent test oracle:
//! its determinant equals `(i rho^2 c2^4 k^2 / b2) R` identically.

use num_complex::Complex64;

use crate::error::Result;
use crate::kernel::{check_speed_admissible, decay_exponent, decay_exponents, mode_basis};
use crate::material::Material;

/// Classification of the boundary-parameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `gamma1 = gamma2 = 0`: classical traction-free surface.
    StressFree,
    /// `Re gamma1 = Re gamma2 = 0`, not both zero: full impedance condition.
    PureImpedance,
    /// `Re gamma1 < 0` and `Re gamma2 < 0`.
    Perturbed,
    /// Anything else (some `Re gamma_j > 0`, or mixed signs).
    Other,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::StressFree => "stress-free",
            Regime::PureImpedance => "pure-impedance",
            Regime::Perturbed => "perturbed",
            Regime::Other => "other",
        }
    }
}

/// Complex boundary ratios `(gamma1, gamma2)` with their regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryParams {
    gamma1: Complex64,
    gamma2: Complex64,
    regime: Regime,
}

impl BoundaryParams {
    pub fn new(gamma1: Complex64, gamma2: Complex64) -> Self {
        let regime = if gamma1 == Complex64::new(0.0, 0.0) && gamma2 == Complex64::new(0.0, 0.0) {
            Regime::StressFree
        } else if gamma1.re == 0.0 && gamma2.re == 0.0 {
            Regime::PureImpedance
        } else if gamma1.re < 0.0 && gamma2.re < 0.0 {
            Regime::Perturbed
        } else {
            Regime::Other
        };
        Self {
            gamma1,
            gamma2,
            regime,
        }
    }

    /// Full impedance parameters: `gamma_j = i Z_j`.
    pub fn impedance(z1: f64, z2: f64) -> Self {
        Self::new(Complex64::new(0.0, z1), Complex64::new(0.0, z2))
    }

    pub fn stress_free() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn gamma1(&self) -> Complex64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> Complex64 {
        self.gamma2
    }

    pub fn eps1(&self) -> f64 {
        self.gamma1.re
    }

    pub fn eps2(&self) -> f64 {
        self.gamma2.re
    }

    pub fn z1(&self) -> f64 {
        self.gamma1.im
    }

    pub fn z2(&self) -> f64 {
        self.gamma2.im
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }
}

/// One evaluation of the secular function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularEval {
    pub c: Complex64,
    pub value: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub regime: Regime,
}

/// Evaluate `R(c; gamma1, gamma2)` from the closed form. Defined for every
/// finite `c`; real-axis values follow the branch convention of
/// [`crate::kernel::decay_exponent`] (limit from the upper half-plane).
pub fn secular(c: Complex64, bp: &BoundaryParams, mat: &Material) -> SecularEval {
    let (b1, b2) = decay_exponents(c, mat);
    let mu = mat.mu();
    let c2sq = mat.c2() * mat.c2();
    let i = Complex64::new(0.0, 1.0);
    let c_sq = c * c;
    let value = {
        let rayleigh = (2.0 - c_sq / c2sq) * (2.0 - c_sq / c2sq) - 4.0 * b2 * b1;
        let linear = -(c_sq * c * i / (mu * c2sq)) * (bp.gamma1 * b2 + bp.gamma2 * b1);
        let quadratic = c_sq * (bp.gamma1 * bp.gamma2 / (mu * mu)) * (1.0 - b2 * b1);
        rayleigh + linear + quadratic
    };
    SecularEval {
        c,
        value,
        b1,
        b2,
        regime: bp.regime,
    }
}

/// Secular function with full impedance boundary conditions,
/// `R(c; i Z1, i Z2)`.
pub fn secular_impedance(c: Complex64, z1: f64, z2: f64, mat: &Material) -> SecularEval {
    secular(c, &BoundaryParams::impedance(z1, z2), mat)
}

/// Dimensionless secular function in `x = c^2/c2^2`, `tau = c2^2/c1^2`,
/// `delta_j = Z_j / sqrt(mu rho)`:
///
/// `(2-x)^2 - 4 sqrt(1-x) sqrt(1-tau x) + x^{3/2} (d1 sqrt(1-x) + d2 sqrt(1-tau x))
///  + x d1 d2 (sqrt(1-x) sqrt(1-tau x) - 1)`
///
/// Written out on its own so it can cross-check [`secular_impedance`]
/// through the change of variables `c = c2 sqrt(x)`.
pub fn secular_nondim(x: Complex64, tau: f64, delta1: f64, delta2: f64) -> Complex64 {
    let s1 = sqrt_nondim(x);
    let s2 = sqrt_nondim(tau * x);
    let x_three_half = x * sqrt_x_upper(x);
    (2.0 - x) * (2.0 - x) - 4.0 * s1 * s2
        + x_three_half * (delta1 * s1 + delta2 * s2)
        + x * delta1 * delta2 * (s1 * s2 - 1.0)
}

// sqrt(1 - u) with the same real-axis convention as the decay exponents:
// for real u > 1 the value is the limit from Im c -> 0+ along c = c2 sqrt(u),
// i.e. -i sqrt(u - 1).
fn sqrt_nondim(u: Complex64) -> Complex64 {
    if u.im == 0.0 {
        let t = 1.0 - u.re;
        if t >= 0.0 {
            Complex64::new(t.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, -(-t).sqrt())
        }
    } else {
        (Complex64::new(1.0, 0.0) - u).sqrt()
    }
}

// principal sqrt(x); exact on the nonnegative real axis
fn sqrt_x_upper(x: Complex64) -> Complex64 {
    if x.im == 0.0 && x.re >= 0.0 {
        Complex64::new(x.re.sqrt(), 0.0)
    } else {
        x.sqrt()
    }
}

/// The boundary operator `B_gamma` as a 2x4 matrix acting on the mode tails.
pub fn boundary_matrix(bp: &BoundaryParams, mat: &Material) -> [[Complex64; 4]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    [
        [
            Complex64::new(mat.c2() * mat.rho(), 0.0),
            zero,
            bp.gamma1,
            zero,
        ],
        [
            zero,
            Complex64::new(mat.c1() * mat.rho(), 0.0),
            zero,
            bp.gamma2,
        ],
    ]
}

/// The homogeneous 2x2 boundary system for the mode amplitudes, from its
/// displayed closed form.
///
/// Refuses speeds inside the singular-speed exclusion zones (the entries
/// contain `1/b2`).
pub fn boundary_system_matrix(
    c: Complex64,
    k: f64,
    bp: &BoundaryParams,
    mat: &Material,
) -> Result<[[Complex64; 2]; 2]> {
    check_speed_admissible(c, mat)?;
    let rho = mat.rho();
    let c2sq = mat.c2() * mat.c2();
    let (b1, b2) = decay_exponents(c, mat);
    let i = Complex64::new(0.0, 1.0);
    let s = rho * c2sq * k;
    Ok([
        [
            -2.0 * i * s * b1 + c * k * bp.gamma1,
            -i * s * (b2 + 1.0 / b2) + c * k * bp.gamma1,
        ],
        [
            s * (1.0 + b2 * b2) + c * k * bp.gamma2 * i * b1,
            2.0 * s + k * c * bp.gamma2 * i / b2,
        ],
    ])
}

/// The same 2x2 system assembled numerically as `B_gamma * A` from the mode
/// basis, used to cross-check [`boundary_system_matrix`].
pub fn boundary_system_from_modes(
    c: Complex64,
    k: f64,
    bp: &BoundaryParams,
    mat: &Material,
) -> Result<[[Complex64; 2]; 2]> {
    let basis = mode_basis(c, k, mat)?;
    let b = boundary_matrix(bp, mat);
    let a = basis.tail_matrix();
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex64::new(0.0, 0.0);
            for (r, ar) in a.iter().enumerate() {
                s += b[i][r] * ar[j];
            }
            m[i][j] = s;
        }
    }
    Ok(m)
}

/// Determinant of the boundary system; equals `(i rho^2 c2^4 k^2 / b2) R`
/// identically, which the test suites verify.
pub fn determinant_oracle(
    c: Complex64,
    k: f64,
    bp: &BoundaryParams,
    mat: &Material,
) -> Result<Complex64> {
    let m = boundary_system_matrix(c, k, bp, mat)?;
    Ok(m[0][0] * m[1][1] - m[0][1] * m[1][0])
}

/// The proportionality factor `i rho^2 c2^4 k^2 / b2` between the boundary
/// determinant and the closed-form secular function.
pub fn oracle_factor(c: Complex64, k: f64, mat: &Material) -> Complex64 {
    let b2 = decay_exponent(c, mat.c2());
    let c2 = mat.c2();
    Complex64::new(0.0, mat.rho() * mat.rho() * c2.powi(4) * k * k) / b2
}
