//! Small fixed-size linear-algebra helpers.
//!
//! Everything in this crate works on 2x2, 4x4 and 5x5 matrices, so the
//! routines below operate on stack arrays and favor robustness over
//! generality: partial-pivoted elimination for determinants and inverses,
//! cyclic Jacobi for Hermitian eigenvalues.

use num_complex::Complex64;

/// Determinant of a complex N x N matrix by partial-pivoted Gaussian
/// elimination. Also returns the largest entry magnitude seen during
/// elimination (a growth measure callers can use to scale residual checks).
pub fn det_with_scale<const N: usize>(mut m: [[Complex64; N]; N]) -> (Complex64, f64) {
    let mut scale: f64 = 0.0;
    for row in &m {
        for e in row {
            scale = scale.max(e.norm());
        }
    }
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..N {
        let mut pivot = col;
        for r in col + 1..N {
            if m[r][col].norm() > m[pivot][col].norm() {
                pivot = r;
            }
        }
        if m[pivot][col].norm() == 0.0 {
            return (Complex64::new(0.0, 0.0), scale);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..N {
            let f = m[r][col] / m[col][col];
            m[r][col] = Complex64::new(0.0, 0.0);
            for c in col + 1..N {
                m[r][c] -= f * m[col][c];
                scale = scale.max(m[r][c].norm());
            }
        }
    }
    (det, scale)
}

/// Determinant of a complex N x N matrix.
pub fn det<const N: usize>(m: [[Complex64; N]; N]) -> Complex64 {
    det_with_scale(m).0
}

/// Inverse of a real N x N matrix by Gauss-Jordan elimination with partial
/// pivoting. Returns `None` for (numerically) singular input.
pub fn invert<const N: usize>(m: [[f64; N]; N]) -> Option<[[f64; N]; N]> {
    let mut a = m;
    let mut inv = [[0.0; N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..N {
        let mut pivot = col;
        for r in col + 1..N {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col];
        for c in 0..N {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for r in 0..N {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f == 0.0 {
                continue;
            }
            for c in 0..N {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    Some(inv)
}

/// Real matrix product.
pub fn matmul<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut out = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut s = 0.0;
            for (k, bk) in b.iter().enumerate() {
                s += a[i][k] * bk[j];
            }
            out[i][j] = s;
        }
    }
    out
}

/// Eigenvalues of a Hermitian N x N matrix by cyclic complex Jacobi
/// rotations, returned sorted ascending. The strict lower triangle of the
/// input is ignored (rebuilt from the upper one), diagonal imaginary parts
/// are dropped.
pub fn hermitian_eigenvalues<const N: usize>(m: &[[Complex64; N]; N]) -> [f64; N] {
    let mut a = *m;
    for i in 0..N {
        a[i][i] = Complex64::new(a[i][i].re, 0.0);
        for j in i + 1..N {
            a[j][i] = a[i][j].conj();
        }
    }

    let frob: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|e| e.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let tol = 1e-15 * frob.max(f64::MIN_POSITIVE);

    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..N {
            for j in i + 1..N {
                off += a[i][j].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                let r = apq.norm();
                if r <= tol * 1e-2 {
                    continue;
                }
                // Phase out a_pq, then rotate the remaining real 2x2 block.
                let phi = apq.arg();
                let alpha = a[p][p].re;
                let beta = a[q][q].re;
                let theta = 0.5 * (2.0 * r).atan2(alpha - beta);
                let (s, c) = theta.sin_cos();
                let e_m = Complex64::from_polar(1.0, -phi);
                let e_p = Complex64::from_polar(1.0, phi);
                // Columns: A <- A U with U = [[c, -s], [s e^{-i phi}, c e^{-i phi}]]
                for i in 0..N {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = aip * c + aiq * (s * e_m);
                    a[i][q] = aip * (-s) + aiq * (c * e_m);
                }
                // Rows: A <- U* A
                for j in 0..N {
                    let apj = a[p][j];
                    let aqj = a[q][j];
                    a[p][j] = apj * c + aqj * (s * e_p);
                    a[q][j] = apj * (-s) + aqj * (c * e_p);
                }
                a[p][q] = Complex64::new(0.0, 0.0);
                a[q][p] = Complex64::new(0.0, 0.0);
                a[p][p] = Complex64::new(a[p][p].re, 0.0);
                a[q][q] = Complex64::new(a[q][q].re, 0.0);
            }
        }
    }

    let mut eigs = [0.0; N];
    for (i, e) in eigs.iter_mut().enumerate() {
        *e = a[i][i].re;
    }
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Closed-form eigenvalues of a Hermitian 2x2 matrix, sorted ascending.
pub fn hermitian_eigenvalues_2x2(m: &[[Complex64; 2]; 2]) -> [f64; 2] {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let half_trace = 0.5 * (a + d);
    let disc = (0.5 * (a - d)).hypot(m[0][1].norm());
    [half_trace - disc, half_trace + disc]
}

/// Smallest eigenvalue of the 2x2 Hermitian generalized problem
/// `P x = lambda G x` with `G` positive definite: the roots of
/// `det(P - lambda G) = 0`, a real quadratic.
pub fn generalized_min_eigenvalue_2x2(
    p: &[[Complex64; 2]; 2],
    g: &[[Complex64; 2]; 2],
) -> f64 {
    let det_g = g[0][0].re * g[1][1].re - g[0][1].norm_sqr();
    let det_p = p[0][0].re * p[1][1].re - p[0][1].norm_sqr();
    // lambda^2 det G - lambda (G00 P11 + P00 G11 - 2 Re(P01 conj(G01))) + det P
    let b = -(g[0][0].re * p[1][1].re + p[0][0].re * g[1][1].re
        - 2.0 * (p[0][1] * g[0][1].conj()).re);
    let disc = (b * b - 4.0 * det_g * det_p).max(0.0).sqrt();
    // Stable quadratic roots.
    let q = -0.5 * (b + b.signum() * disc);
    let (r1, r2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / det_g, det_p / q)
    };
    r1.min(r2)
}
