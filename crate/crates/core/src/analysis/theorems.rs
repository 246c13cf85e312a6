//! Numerical certification of the coercivity, quadratic-form, energy and
//! uniform-limit properties behind the non-vanishing results.
//!
//! The chain being certified:
//!
//! 1. For perturbed parameters (`Re gamma_j < 0`) the Hermitian matrix
//!    `beta0 B* B + S2'` has four positive eigenvalues with closed forms;
//!    their minimum `epsilon` makes `M = beta0 B* B - eps' I + S2'` positive
//!    definite for any `eps' < epsilon`.
//! 2. Restricted to the span of the two mode tails, the quadratic form of
//!    `S2'` vanishes on the real subsonic segment and is non-positive in the
//!    upper half-plane (a consequence of the energy identity
//!    `d/dx2 (p* S2 p) = 2 k |p|^2 Im c`).
//! 3. Together these give `||B r||^2 >= (epsilon/beta0) ||r||^2` on the mode
//!    span, so the boundary determinant — and with it the secular function —
//!    cannot vanish for `Im c >= 0`, `c != 0`.
//! 4. The impedance case is the uniform limit of perturbed ones with
//!    `eps_j = -1/n`; an explicit bound `r_n = O(1/n)` controls the sup
//!    distance, so the non-vanishing survives in the open upper half-plane.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{build_system, mode_basis};
use crate::linalg;
use crate::material::Material;
use crate::secular::{secular, secular_impedance, BoundaryParams, Regime};

use super::winding::Rect;

/// Relative slack between `epsilon` and the shift actually used in `M`.
const EPSILON_BACKOFF: f64 = 1e-9;

/// Positive-definiteness floor for the Jacobi check, relative to ||M||_F.
/// The closed-form gap `EPSILON_BACKOFF * epsilon` can drop below what any
/// f64 eigensolver resolves once `epsilon` is much smaller than the matrix
/// norm, so definiteness is confirmed against eigensolver resolution.
const PD_RESOLUTION: f64 = 1e-12;

/// Scale-relative agreement demanded between closed-form and Jacobi
/// eigenvalues.
const EIGENVALUE_CROSS_TOL: f64 = 1e-10;

/// Certified constants of the coercivity bound for one parameter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    /// `-1/(2 rho Re gamma1) - 1/(2 rho Re gamma2)`.
    pub beta0: f64,
    /// Discriminant of the (c1, gamma2) eigenvalue pair.
    pub d1: f64,
    /// Discriminant of the (c2, gamma1) eigenvalue pair.
    pub d2: f64,
    /// Closed-form eigenvalues `[lam1-, lam1+, lam2-, lam2+]` of
    /// `beta0 B* B + S2'`.
    pub lambdas: [f64; 4],
    /// `min(lam1-, lam2-)`.
    pub epsilon: f64,
    /// Smallest Jacobi eigenvalue of `M = beta0 B* B - eps' I + S2'` at
    /// `eps' = (1 - 1e-9) epsilon`.
    pub min_eig_m: f64,
    /// Worst absolute disagreement between closed-form and Jacobi
    /// eigenvalues, relative to the spectral scale.
    pub eig_cross_error: f64,
    pub pass: bool,
}

fn bgamma_gram_plus_s2prime(
    beta: f64,
    bp: &BoundaryParams,
    mat: &Material,
) -> [[Complex64; 4]; 4] {
    let rho = mat.rho();
    let c1 = mat.c1();
    let c2 = mat.c2();
    let g1 = bp.gamma1();
    let g2 = bp.gamma2();
    let z = Complex64::new(0.0, 0.0);
    [
        [
            Complex64::new(beta * c2 * c2 * rho * rho, 0.0),
            z,
            c2 * (1.0 + beta * rho * g1),
            z,
        ],
        [
            z,
            Complex64::new(beta * c1 * c1 * rho * rho, 0.0),
            z,
            c1 * (1.0 + beta * rho * g2),
        ],
        [
            c2 * (1.0 + beta * rho * g1.conj()),
            z,
            Complex64::new(beta * g1.norm_sqr(), 0.0),
            z,
        ],
        [
            z,
            c1 * (1.0 + beta * rho * g2.conj()),
            z,
            Complex64::new(beta * g2.norm_sqr(), 0.0),
        ],
    ]
}

/// Certify the coercivity constants for perturbed boundary parameters.
///
/// Computes `beta0`, the discriminants and closed-form eigenvalues of
/// `beta0 B* B + S2'`, takes `epsilon` as the smaller of the two minus
/// branches, and confirms positive definiteness of
/// `M = beta0 B* B - eps' I + S2'` at `eps' = (1 - 1e-9) epsilon` with an
/// independent cyclic-Jacobi eigensolver, cross-checking the closed forms
/// against it.
///
/// Errors unless the regime is `Perturbed`: `beta0` is undefined once a
/// `Re gamma_j` reaches zero.
pub fn verify_coercivity(bp: &BoundaryParams, mat: &Material) -> Result<TheoremReport> {
    if bp.regime() != Regime::Perturbed {
        return Err(Error::RegimeMismatch {
            required: "perturbed (Re gamma1 < 0 and Re gamma2 < 0)",
            found: bp.regime().as_str(),
        });
    }
    let rho = mat.rho();
    let c1 = mat.c1();
    let c2 = mat.c2();
    let g1 = bp.gamma1();
    let g2 = bp.gamma2();
    let beta0 = -1.0 / (2.0 * rho * g1.re) - 1.0 / (2.0 * rho * g2.re);

    // lam+ from the quadratic formula, lam- rationalized through the block
    // determinant to dodge the cancellation when d is near (beta0 s)^2
    let eig_pair = |speed: f64, gamma: Complex64| -> (f64, f64, f64) {
        let s = speed * speed * rho * rho + gamma.norm_sqr();
        // sum-of-squares form of the discriminant (exactly equal to
        // beta^2 s^2 + 4 speed^2 (1 + 2 beta rho Re gamma), but without
        // cancellation)
        let cross = 1.0 + beta0 * rho * gamma;
        let d = (beta0 * (speed * speed * rho * rho - gamma.norm_sqr())).powi(2)
            + 4.0 * speed * speed * cross.norm_sqr();
        let lam_plus = 0.5 * (beta0 * s + d.sqrt());
        let block_det = beta0 * speed * speed * rho * rho * beta0 * gamma.norm_sqr()
            - speed * speed * cross.norm_sqr();
        let lam_minus = block_det / lam_plus;
        (d, lam_minus, lam_plus)
    };
    let (d1, lam1_minus, lam1_plus) = eig_pair(c1, g2);
    let (d2, lam2_minus, lam2_plus) = eig_pair(c2, g1);
    let lambdas = [lam1_minus, lam1_plus, lam2_minus, lam2_plus];
    let epsilon = lam1_minus.min(lam2_minus);

    // independent route: cyclic Jacobi on the assembled Hermitian matrices
    let k_mat = bgamma_gram_plus_s2prime(beta0, bp, mat);
    let jacobi = linalg::hermitian_eigenvalues(&k_mat);
    let mut sorted_cf = lambdas;
    sorted_cf.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = jacobi[3].abs().max(jacobi[0].abs()).max(1.0);
    let mut eig_cross_error: f64 = 0.0;
    for (cf, j) in sorted_cf.iter().zip(jacobi.iter()) {
        eig_cross_error = eig_cross_error.max((cf - j).abs() / scale);
    }

    let eps_prime = (1.0 - EPSILON_BACKOFF) * epsilon;
    let mut m = k_mat;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= Complex64::new(eps_prime, 0.0);
    }
    let mut frob = 0.0;
    for row in &m {
        for e in row {
            frob += e.norm_sqr();
        }
    }
    let frob = frob.sqrt();
    let min_eig_m = linalg::hermitian_eigenvalues(&m)[0];

    let pass = lambdas.iter().all(|&l| l > 0.0)
        && eig_cross_error <= EIGENVALUE_CROSS_TOL
        && min_eig_m >= -PD_RESOLUTION * frob;

    Ok(TheoremReport {
        beta0,
        d1,
        d2,
        lambdas,
        epsilon,
        min_eig_m,
        eig_cross_error,
        pass,
    })
}

/// The quadratic form of `S2'` restricted to the span of the mode tails,
/// as the Hermitian 2x2 matrix `A* S2' A` (Hermitian-symmetrized to kill
/// roundoff asymmetry), plus the scale callers should measure it against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedForm {
    pub matrix: [[Complex64; 2]; 2],
    /// `max |A_ij|^2 * max(c1, c2)`; entries and eigenvalues are compared
    /// against multiples of this.
    pub scale: f64,
}

impl RestrictedForm {
    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        linalg::hermitian_eigenvalues_2x2(&self.matrix)
    }

    pub fn max_entry_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for row in &self.matrix {
            for e in row {
                m = m.max(e.norm());
            }
        }
        m
    }
}

/// Evaluate `A* S2' A` numerically from the mode basis at `(c, k)`.
pub fn restricted_quadratic_form(c: Complex64, k: f64, mat: &Material) -> Result<RestrictedForm> {
    let basis = mode_basis(c, k, mat)?;
    let s2p = build_system(mat).s2_prime;
    let a = basis.tail_matrix();
    // t = S2' A (4x2)
    let mut t = [[Complex64::new(0.0, 0.0); 2]; 4];
    for i in 0..4 {
        for j in 0..2 {
            let mut s = Complex64::new(0.0, 0.0);
            for (r, ar) in a.iter().enumerate() {
                s += s2p[i][r] * ar[j];
            }
            t[i][j] = s;
        }
    }
    // h = A* t (2x2), then Hermitian-symmetrize
    let mut h = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex64::new(0.0, 0.0);
            for r in 0..4 {
                s += a[r][i].conj() * t[r][j];
            }
            h[i][j] = s;
        }
    }
    let sym = [
        [
            Complex64::new(h[0][0].re, 0.0),
            0.5 * (h[0][1] + h[1][0].conj()),
        ],
        [
            0.5 * (h[1][0] + h[0][1].conj()),
            Complex64::new(h[1][1].re, 0.0),
        ],
    ];
    let mut amax: f64 = 0.0;
    for row in &a {
        for e in row {
            amax = amax.max(e.norm());
        }
    }
    Ok(RestrictedForm {
        matrix: sym,
        scale: amax * amax * mat.c1().max(mat.c2()),
    })
}

/// Smallest value of `||B_gamma r||^2 / ||r||^2` over nonzero `r` in the
/// mode-tail span, via the 2x2 generalized problem
/// `(A* B* B A) x = lambda (A* A) x`.
pub fn boundary_operator_min_gain(
    c: Complex64,
    k: f64,
    bp: &BoundaryParams,
    mat: &Material,
) -> Result<f64> {
    let basis = mode_basis(c, k, mat)?;
    let a = basis.tail_matrix();
    let b = crate::secular::boundary_matrix(bp, mat);
    // ba = B A (2x2)
    let mut ba = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex64::new(0.0, 0.0);
            for (r, ar) in a.iter().enumerate() {
                s += b[i][r] * ar[j];
            }
            ba[i][j] = s;
        }
    }
    // p = (BA)* (BA), g = A* A
    let mut p = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex64::new(0.0, 0.0);
            for r in 0..2 {
                s += ba[r][i].conj() * ba[r][j];
            }
            p[i][j] = s;
        }
    }
    let g = basis.tail_gram();
    Ok(linalg::generalized_min_eigenvalue_2x2(&p, &g).max(0.0))
}

/// Max relative residual of the energy identity
/// `d/dx2 (p* S2 p) = 2 k |p|^2 Im c` for the two-mode profile
/// `p(x2) = amp1 e^{-k b1 x2} w1 + amp2 e^{-k b2 x2} w2`,
/// with the left side taken by central differences over `x2_grid`.
///
/// Residuals are normalized by `k ||p||^2 (1 + |c|)`, so the returned value
/// decays at the O(h^2) rate of the difference stencil under grid
/// refinement.
pub fn energy_identity_check(
    c: Complex64,
    k: f64,
    amp1: Complex64,
    amp2: Complex64,
    mat: &Material,
    x2_grid: &[f64],
) -> Result<f64> {
    if x2_grid.len() < 3 {
        return Err(Error::InvalidArgument(
            "energy grid needs at least 3 points".into(),
        ));
    }
    for w in x2_grid.windows(2) {
        if !(w[1] > w[0]) || w[0] < 0.0 {
            return Err(Error::InvalidArgument(
                "energy grid must be increasing and nonnegative".into(),
            ));
        }
    }
    let basis = mode_basis(c, k, mat)?;
    let s2 = build_system(mat).s2;

    let profile = |x2: f64| -> ([Complex64; 5], f64, f64) {
        let e1 = (-k * basis.b1 * x2).exp();
        let e2 = (-k * basis.b2 * x2).exp();
        let mut p = [Complex64::new(0.0, 0.0); 5];
        for i in 0..5 {
            p[i] = amp1 * e1 * basis.w1[i] + amp2 * e2 * basis.w2[i];
        }
        let mut s_form = Complex64::new(0.0, 0.0);
        let mut norm_sq = 0.0;
        for i in 0..5 {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..5 {
                row += s2[i][j] * p[j];
            }
            s_form += p[i].conj() * row;
            norm_sq += p[i].norm_sqr();
        }
        (p, s_form.re, norm_sq)
    };

    let samples: Vec<(f64, f64)> = x2_grid
        .iter()
        .map(|&x| {
            let (_, s_form, norm_sq) = profile(x);
            (s_form, norm_sq)
        })
        .collect();

    let mut worst: f64 = 0.0;
    for i in 1..x2_grid.len() - 1 {
        let lhs = (samples[i + 1].0 - samples[i - 1].0) / (x2_grid[i + 1] - x2_grid[i - 1]);
        let rhs = 2.0 * k * samples[i].1 * c.im;
        let denom = k * samples[i].1 * (1.0 + c.norm()) + f64::MIN_POSITIVE;
        worst = worst.max((lhs - rhs).abs() / denom);
    }
    Ok(worst)
}

/// One row of the uniform-limit table: the measured sup distance between
/// the perturbed secular function at `eps = -1/n` and its impedance limit,
/// against the explicit bound `r_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurwitzRow {
    pub n: u32,
    pub sup_diff: f64,
    pub r_n: f64,
}

/// Verify the uniform-convergence bound on a compact rectangle in the open
/// upper half-plane.
///
/// For each `n`, measures `sup |R(c; -1/n + i Z1, -1/n + i Z2) - R(c; i Z1, i Z2)|`
/// over a dense grid, computes the bound
/// `r_n = (m1 + m2)/n + |(-1/n + i Z1)(-1/n + i Z2) - (i Z1)(i Z2)| m3`
/// from grid maxima `m_j` of the three coefficient functions, and checks
/// `sup <= r_n (1 + 1e-9)` with `r_n` strictly decreasing.
pub fn hurwitz_convergence_check(
    z1: f64,
    z2: f64,
    mat: &Material,
    region: &Rect,
    ns: &[u32],
    grid: (usize, usize),
) -> Result<Vec<HurwitzRow>> {
    if !(region.im_min > 0.0) {
        return Err(Error::InvalidArgument(
            "uniform-limit region must lie in the open upper half-plane".into(),
        ));
    }
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::InvalidArgument("need positive perturbation indices".into()));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "perturbation indices must be strictly increasing".into(),
        ));
    }
    let (nx, ny) = (grid.0.max(2), grid.1.max(2));
    let mu = mat.mu();
    let c2sq = mat.c2() * mat.c2();

    let mut points = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        let y = region.im_min + (region.im_max - region.im_min) * iy as f64 / (ny - 1) as f64;
        for ix in 0..nx {
            let x = region.re_min + (region.re_max - region.re_min) * ix as f64 / (nx - 1) as f64;
            points.push(Complex64::new(x, y));
        }
    }

    let mut m1: f64 = 0.0;
    let mut m2: f64 = 0.0;
    let mut m3: f64 = 0.0;
    let mut limit_vals = Vec::with_capacity(points.len());
    for &c in &points {
        let eval = secular_impedance(c, z1, z2, mat);
        let c3 = c * c * c;
        let g1 = -(c3 * Complex64::new(0.0, 1.0) / (mu * c2sq)) * eval.b2;
        let g2 = -(c3 * Complex64::new(0.0, 1.0) / (mu * c2sq)) * eval.b1;
        let g3 = c * c / (mu * mu) * (1.0 - eval.b2 * eval.b1);
        m1 = m1.max(g1.norm());
        m2 = m2.max(g2.norm());
        m3 = m3.max(g3.norm());
        limit_vals.push(eval.value);
    }

    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let eps = -1.0 / n as f64;
        let bp = BoundaryParams::new(Complex64::new(eps, z1), Complex64::new(eps, z2));
        let mut sup: f64 = 0.0;
        for (&c, &f0) in points.iter().zip(limit_vals.iter()) {
            sup = sup.max((secular(c, &bp, mat).value - f0).norm());
        }
        let factor = (Complex64::new(eps, z1) * Complex64::new(eps, z2)
            - Complex64::new(0.0, z1) * Complex64::new(0.0, z2))
        .norm();
        let r_n = (m1 + m2) / n as f64 + factor * m3;
        if sup > r_n * (1.0 + 1e-9) {
            return Err(Error::BoundViolated(format!(
                "uniform bound failed at n = {n}: sup {sup:e} > r_n {r_n:e}"
            )));
        }
        if let Some(prev) = rows.last() {
            let prev: &HurwitzRow = prev;
            if r_n >= prev.r_n {
                return Err(Error::BoundViolated(format!(
                    "r_n not decreasing at n = {n}: {r_n:e} >= {:e}",
                    prev.r_n
                )));
            }
        }
        rows.push(HurwitzRow { n, sup_diff: sup, r_n });
    }
    Ok(rows)
}
