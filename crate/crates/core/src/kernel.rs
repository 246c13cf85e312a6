//! Velocity-stress system matrices, decay exponents and surface normal modes.
//!
//! The planar isotropic elastodynamic equations in the unknowns
//! `y = (v1, v2, s11, s12, s22)` form a first-order system
//! `dy/dt = A1 dy/dx1 + A2 dy/dx2`. The change of variables `y = C w` turns
//! it into a symmetric system with coefficient matrices `S1 = C^-1 A1 C`,
//! `S2 = C^-1 A2 C`. All five matrices are written below directly from their
//! closed forms; the similarity identities are exercised by tests, never used
//! to build anything.
//!
//! A surface mode `w = e^{-k b x2} e^{i k (x1 - c t)} w_hat` solves the system
//! iff `(i c k I + i k S1 - k b S2) w_hat = 0`, which pins `b` to one of
//! `+-b1, +-b2` with
//!
//! `b_j = sqrt(1 - c^2/c_j^2)`   (principal branch).
//!
//! On the real supersonic segments (`|Re c| > c_j`, `Im c = 0`) the branch
//! cut of the principal square root is hit; there the returned value is the
//! limit from `Im c -> 0+`, i.e. `-i sign(Re c) sqrt(c^2/c_j^2 - 1)`. This
//! keeps every evaluation continuous from the upper half-plane, where the
//! half-plane scans live. `Re b_j >= 0` holds everywhere, with equality
//! exactly on those segments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::material::Material;

/// Exclusion radius around the singular speeds `c in {0, +-c2}`, as a
/// fraction of `c2`. The mode vectors contain `1/b2` and degenerate to a
/// rank-one family at `c = 0`, so evaluations inside this radius are refused.
pub const SINGULAR_SPEED_EXCLUSION: f64 = 1e-9;

/// The five constant matrices of the velocity-stress formulation and its
/// symmetric version, for one material.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrices {
    /// Coefficient of `d/dx1` in the velocity-stress variables.
    pub a1: [[f64; 5]; 5],
    /// Coefficient of `d/dx2` in the velocity-stress variables.
    pub a2: [[f64; 5]; 5],
    /// Change of variables `y = C w` that symmetrizes the system.
    pub c: [[f64; 5]; 5],
    /// Symmetric coefficient of `d/dx1`.
    pub s1: [[f64; 5]; 5],
    /// Symmetric coefficient of `d/dx2`.
    pub s2: [[f64; 5]; 5],
    /// `s2` with its (zero) first row and column deleted.
    pub s2_prime: [[f64; 4]; 4],
}

/// Populate all system matrices from their closed forms.
pub fn build_system(mat: &Material) -> SystemMatrices {
    let rho = mat.rho();
    let lambda = mat.lambda();
    let mu = mat.mu();
    let c1 = mat.c1();
    let c2 = mat.c2();
    // c1 > c2 is guaranteed by material validation, so q is real positive.
    let q = (c1 * c1 - c2 * c2).sqrt();

    let a1 = [
        [0.0, 0.0, 1.0 / rho, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0 / rho, 0.0],
        [lambda + 2.0 * mu, 0.0, 0.0, 0.0, 0.0],
        [0.0, mu, 0.0, 0.0, 0.0],
        [lambda, 0.0, 0.0, 0.0, 0.0],
    ];
    let a2 = [
        [0.0, 0.0, 0.0, 1.0 / rho, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0 / rho],
        [0.0, lambda, 0.0, 0.0, 0.0],
        [mu, 0.0, 0.0, 0.0, 0.0],
        [0.0, lambda + 2.0 * mu, 0.0, 0.0, 0.0],
    ];
    let c = [
        [0.0, 0.0, 0.0, 1.0 / c1, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0 / c1],
        [
            2.0 * rho * c2 * q / (c1 * c1),
            0.0,
            rho * (1.0 - 2.0 * c2 * c2 / (c1 * c1)),
            0.0,
            0.0,
        ],
        [0.0, c2 * rho / c1, 0.0, 0.0, 0.0],
        [0.0, 0.0, rho, 0.0, 0.0],
    ];
    let s14 = 2.0 * c2 * q / c1;
    let s34 = (c1 * c1 - 2.0 * c2 * c2) / c1;
    let s1 = [
        [0.0, 0.0, 0.0, s14, 0.0],
        [0.0, 0.0, 0.0, 0.0, c2],
        [0.0, 0.0, 0.0, s34, 0.0],
        [s14, 0.0, s34, 0.0, 0.0],
        [0.0, c2, 0.0, 0.0, 0.0],
    ];
    let s2 = [
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, c2, 0.0],
        [0.0, 0.0, 0.0, 0.0, c1],
        [0.0, c2, 0.0, 0.0, 0.0],
        [0.0, 0.0, c1, 0.0, 0.0],
    ];
    let mut s2_prime = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            s2_prime[i][j] = s2[i + 1][j + 1];
        }
    }

    debug_assert!(similarity_residual(&a1, &c, &s1) < 1e-12);
    debug_assert!(similarity_residual(&a2, &c, &s2) < 1e-12);

    SystemMatrices {
        a1,
        a2,
        c,
        s1,
        s2,
        s2_prime,
    }
}

/// Max-entry residual of `C^-1 A C - S`, relative to the largest entry of S.
pub fn similarity_residual(a: &[[f64; 5]; 5], c: &[[f64; 5]; 5], s: &[[f64; 5]; 5]) -> f64 {
    let c_inv = linalg::invert(*c).expect("change-of-variables matrix is invertible");
    let prod = linalg::matmul(&c_inv, &linalg::matmul(a, c));
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            num = num.max((prod[i][j] - s[i][j]).abs());
            den = den.max(s[i][j].abs());
        }
    }
    num / den
}

/// Principal-branch square root of `1 - (c/speed)^2`, with values on the
/// real supersonic segments taken as the limit from `Im c -> 0+`.
pub fn decay_exponent(c: Complex64, speed: f64) -> Complex64 {
    if c.im == 0.0 {
        let r = c.re / speed;
        let t = 1.0 - r * r;
        if t >= 0.0 {
            Complex64::new(t.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, -c.re.signum() * (-t).sqrt())
        }
    } else {
        let z = c / speed;
        (Complex64::new(1.0, 0.0) - z * z).sqrt()
    }
}

/// Both decay exponents `(b1, b2)` at speed `c`.
pub fn decay_exponents(c: Complex64, mat: &Material) -> (Complex64, Complex64) {
    (decay_exponent(c, mat.c1()), decay_exponent(c, mat.c2()))
}

/// Determinant of the 5x5 mode system `i c k I + i k S1 - k b S2`,
/// by partial-pivoted elimination. Vanishes exactly at `b = +-b1, +-b2`
/// (and identically in `b` at `c = 0`).
pub fn dispersion_det(c: Complex64, b: Complex64, k: f64, mat: &Material) -> Complex64 {
    dispersion_det_with_scale(c, b, k, mat).0
}

/// Like [`dispersion_det`], additionally returning the largest intermediate
/// entry magnitude of the elimination, for residual scaling in tests.
pub fn dispersion_det_with_scale(
    c: Complex64,
    b: Complex64,
    k: f64,
    mat: &Material,
) -> (Complex64, f64) {
    let sys = build_system(mat);
    let ik = Complex64::new(0.0, k);
    let mut m = [[Complex64::new(0.0, 0.0); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            m[i][j] = ik * sys.s1[i][j] - k * b * sys.s2[i][j];
        }
        m[i][i] += c * ik;
    }
    linalg::det_with_scale(m)
}

/// The two decaying surface normal modes at speed `c` and wave number `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    pub c: Complex64,
    pub k: f64,
    pub b1: Complex64,
    pub b2: Complex64,
    /// Mode vector for the exponent `b1`.
    pub w1: [Complex64; 5],
    /// Mode vector for the exponent `b2`.
    pub w2: [Complex64; 5],
    /// `w1` with its first component deleted.
    pub w1_tail: [Complex64; 4],
    /// `w2` with its first component deleted.
    pub w2_tail: [Complex64; 4],
}

impl ModeBasis {
    /// The 4x2 matrix whose columns are the two mode tails.
    pub fn tail_matrix(&self) -> [[Complex64; 2]; 4] {
        let mut a = [[Complex64::new(0.0, 0.0); 2]; 4];
        for i in 0..4 {
            a[i][0] = self.w1_tail[i];
            a[i][1] = self.w2_tail[i];
        }
        a
    }

    /// Gram matrix `A* A` of the tail matrix.
    pub fn tail_gram(&self) -> [[Complex64; 2]; 2] {
        let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..4 {
                    let ci = if i == 0 { self.w1_tail[r] } else { self.w2_tail[r] };
                    let cj = if j == 0 { self.w1_tail[r] } else { self.w2_tail[r] };
                    s += ci.conj() * cj;
                }
                g[i][j] = s;
            }
        }
        g
    }

    /// Smallest singular value of the tail matrix, via its Gram matrix.
    pub fn min_singular_value(&self) -> f64 {
        let eigs = linalg::hermitian_eigenvalues_2x2(&self.tail_gram());
        eigs[0].max(0.0).sqrt()
    }
}

/// Reject speeds inside the exclusion radius of `{0, +-c2}`.
pub fn check_speed_admissible(c: Complex64, mat: &Material) -> Result<()> {
    let c2 = mat.c2();
    let radius = SINGULAR_SPEED_EXCLUSION * c2;
    for singular in [
        Complex64::new(0.0, 0.0),
        Complex64::new(c2, 0.0),
        Complex64::new(-c2, 0.0),
    ] {
        if (c - singular).norm() < radius {
            return Err(Error::SingularSpeed {
                c,
                exclusion: radius,
            });
        }
    }
    Ok(())
}

/// Build the two decaying modes at `(c, k)` from their closed forms.
///
/// Errors with [`Error::SingularSpeed`] inside the exclusion radius of
/// `c in {0, +-c2}`.
pub fn mode_basis(c: Complex64, k: f64, mat: &Material) -> Result<ModeBasis> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!("wave number k must be > 0, got {k}")));
    }
    check_speed_admissible(c, mat)?;
    let c1 = mat.c1();
    let c2 = mat.c2();
    let q = (c1 * c1 - c2 * c2).sqrt();
    let (b1, b2) = decay_exponents(c, mat);
    let i = Complex64::new(0.0, 1.0);
    let first = Complex64::new(-2.0 * c2 * k * q / c1, 0.0);

    let w1 = [
        first,
        -2.0 * i * c2 * b1 * k,
        Complex64::new(c2 * c2 * k / c1, 0.0) * (1.0 + b2 * b2),
        c * k,
        b1 * c * k * i,
    ];
    let w2 = [
        first,
        -c2 * k * i * (1.0 / b2 + b2),
        Complex64::new(2.0 * c2 * c2 * k / c1, 0.0),
        c * k,
        c * k * i / b2,
    ];
    let w1_tail = [w1[1], w1[2], w1[3], w1[4]];
    let w2_tail = [w2[1], w2[2], w2[3], w2[4]];
    Ok(ModeBasis {
        c,
        k,
        b1,
        b2,
        w1,
        w2,
        w1_tail,
        w2_tail,
    })
}

/// Residual `||(i c k I + i k S1 - k b S2) w|| / ||w||` of a candidate mode.
pub fn mode_residual(c: Complex64, b: Complex64, k: f64, w: &[Complex64; 5], mat: &Material) -> f64 {
    let sys = build_system(mat);
    let ik = Complex64::new(0.0, k);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..5 {
        let mut row = c * ik * w[i];
        for j in 0..5 {
            row += (ik * sys.s1[i][j] - k * b * sys.s2[i][j]) * w[j];
        }
        num += row.norm_sqr();
        den += w[i].norm_sqr();
    }
    (num / den).sqrt()
}

/// Map a symmetric-variables state `w` to physical variables
/// `y = C w = (v1, v2, s11, s12, s22)`.
pub fn state_to_physical(w: &[Complex64; 5], mat: &Material) -> [Complex64; 5] {
    let sys = build_system(mat);
    let mut y = [Complex64::new(0.0, 0.0); 5];
    for i in 0..5 {
        for j in 0..5 {
            y[i] += sys.c[i][j] * w[j];
        }
    }
    y
}
