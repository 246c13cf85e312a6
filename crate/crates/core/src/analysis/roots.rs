//! Subsonic root finding for the impedance secular equation.
//!
//! On the subsonic interval `(0, c2)` with pure impedance parameters the
//! secular function is real-valued, so roots are located by dense sign
//! sampling followed by bisection. Robustness beats speed here: a root may
//! legitimately not exist (normal impedance below its critical value), and
//! the caller needs to know the difference between "no root" and "missed
//! root".

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::material::Material;
use crate::secular::secular_impedance;

/// Number of uniform samples taken on `(0, c2)` before bracketing.
pub const SUBSONIC_SAMPLES: usize = 4096;

/// Outcome of a subsonic root search.
#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub found: bool,
    /// Root speed in `(0, c2)`, when found.
    pub c_root: Option<f64>,
    /// |f| at the returned root.
    pub residual: Option<f64>,
    /// Sign-change bracket that was refined, when one existed.
    pub bracket: Option<(f64, f64)>,
    /// Bisection iterations spent.
    pub iterations: usize,
    /// Set when more than one sign change was seen, or when a near-zero
    /// sample without any sign change suggests a tangential root.
    pub multiplicity_note: Option<String>,
}

/// Locate the real subsonic root of `R(c; i Z1, i Z2)`.
///
/// Samples the real restriction at [`SUBSONIC_SAMPLES`] uniform points,
/// collects sign-change brackets, and refines the first one by bisection.
/// `found = false` (with no error) when no bracket and no tangential
/// candidate exists.
pub fn find_subsonic_root(z1: f64, z2: f64, mat: &Material, tol: f64) -> Result<RootReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    let c2 = mat.c2();
    let n = SUBSONIC_SAMPLES;
    let f = |c: f64| secular_impedance(Complex64::new(c, 0.0), z1, z2, mat).value.re;

    let mut brackets: Vec<(f64, f64)> = Vec::new();
    let mut exact_hit: Option<f64> = None;
    let mut near_zero: Option<(f64, f64)> = None; // (c, |f|)

    let mut prev_c = c2 / n as f64;
    let mut prev_f = f(prev_c);
    for i in 2..n {
        let c = c2 * i as f64 / n as f64;
        let fc = f(c);
        if fc == 0.0 {
            exact_hit.get_or_insert(c);
        } else if prev_f != 0.0 && (fc < 0.0) != (prev_f < 0.0) {
            brackets.push((prev_c, c));
        }
        // tangential candidates are not collected in the corridor of the
        // trivial root at c = 0, where |f| ~ c^2 is small for free
        let a = fc.abs();
        if a <= tol && c >= 0.05 * c2 && near_zero.is_none_or(|(_, best)| a < best) {
            near_zero = Some((c, a));
        }
        prev_c = c;
        prev_f = fc;
    }

    let mut note = if brackets.len() > 1 {
        Some(format!("{} sign-change brackets detected", brackets.len()))
    } else {
        None
    };

    if let Some(c) = exact_hit {
        return Ok(RootReport {
            found: true,
            c_root: Some(c),
            residual: Some(0.0),
            bracket: None,
            iterations: 0,
            multiplicity_note: note,
        });
    }

    if let Some(&(mut lo, mut hi)) = brackets.first() {
        let mut flo = f(lo);
        let mut iterations = 0;
        let width_goal = 1e-15 * c2;
        while hi - lo > width_goal && iterations < 128 {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            iterations += 1;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let c_root = 0.5 * (lo + hi);
        let residual = f(c_root).abs();
        if residual > tol {
            let msg = format!("bisection residual {residual:e} above tolerance {tol:e}");
            note = Some(match note {
                Some(n) => format!("{n}; {msg}"),
                None => msg,
            });
        }
        return Ok(RootReport {
            found: true,
            c_root: Some(c_root),
            residual: Some(residual),
            bracket: brackets.first().copied(),
            iterations,
            multiplicity_note: note,
        });
    }

    if let Some((c, a)) = near_zero {
        return Ok(RootReport {
            found: true,
            c_root: Some(c),
            residual: Some(a),
            bracket: None,
            iterations: 0,
            multiplicity_note: Some(format!(
                "tangential root candidate at c = {c} (|f| = {a:e} without sign change)"
            )),
        });
    }

    Ok(RootReport {
        found: false,
        c_root: None,
        residual: None,
        bracket: None,
        iterations: 0,
        multiplicity_note: None,
    })
}

/// One cell of an impedance-parameter existence map.
#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceCell {
    pub z1: f64,
    pub z2: f64,
    pub report: RootReport,
}

/// Run [`find_subsonic_root`] over the Cartesian product of two impedance
/// grids. Cells are computed in parallel and returned in row-major order
/// (`z1` outer, `z2` inner); per-cell failures are recorded, never raised.
pub fn existence_map(
    z1_grid: &[f64],
    z2_grid: &[f64],
    mat: &Material,
    tol: f64,
) -> Result<Vec<ExistenceCell>> {
    if z1_grid.is_empty() || z2_grid.is_empty() {
        return Err(Error::InvalidArgument("empty impedance grid".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    let rows: Vec<Vec<ExistenceCell>> = z1_grid
        .par_iter()
        .map(|&z1| {
            z2_grid
                .iter()
                .map(|&z2| {
                    let report =
                        find_subsonic_root(z1, z2, mat, tol).expect("tol validated above");
                    ExistenceCell { z1, z2, report }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}
