//! Root finding, zero scanning and theorem certification for the secular
//! function.

mod roots;
mod theorems;
mod winding;

pub use roots::{existence_map, find_subsonic_root, ExistenceCell, RootReport, SUBSONIC_SAMPLES};
pub use theorems::{
    boundary_operator_min_gain, energy_identity_check, hurwitz_convergence_check,
    restricted_quadratic_form, verify_coercivity, HurwitzRow, RestrictedForm, TheoremReport,
};
pub use winding::{
    scan_region, winding_number, ContourScan, Rect, ScanOptions, ScanReport, ScanStatus,
    CONTOUR_SAFETY_RATIO,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::material::Material;
use crate::secular::{secular, BoundaryParams, Regime};

/// Certify the absence of secular-function zeros over
/// `[-re_extent, re_extent] x [im_floor, im_ceiling]`.
///
/// The rectangle must stay off the real axis (`im_floor > 0`): the branch
/// cut lives there, and for pure impedance parameters so do the genuine
/// surface-wave roots. Use [`real_axis_min_abs`] to certify the axis itself
/// in the perturbed regime.
///
/// Errors on `Other`-regime parameters; theorem certification is only
/// meaningful for perturbed, pure-impedance or stress-free boundaries. Use
/// [`scan_region`] directly to explore arbitrary parameters.
pub fn scan_upper_halfplane(
    bp: &BoundaryParams,
    mat: &Material,
    re_extent: f64,
    im_floor: f64,
    im_ceiling: f64,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    if !(im_floor > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "im_floor must be > 0 to stay above the branch cut, got {im_floor}"
        )));
    }
    if bp.regime() == Regime::Other {
        return Err(Error::RegimeMismatch {
            required: "perturbed, pure-impedance or stress-free",
            found: bp.regime().as_str(),
        });
    }
    let region = Rect::new(-re_extent, re_extent, im_floor, im_ceiling)?;
    let f = |c: Complex64| secular(c, bp, mat).value;
    Ok(scan_region(&f, &region, opts))
}

/// Minimum of |R| over the sampled real axis `[-extent, extent]`, skipping
/// samples with `|c| < exclude_radius` (the trivial root at the origin).
/// Returns the minimum and its location.
pub fn real_axis_min_abs(
    bp: &BoundaryParams,
    mat: &Material,
    extent: f64,
    step: f64,
    exclude_radius: f64,
) -> Result<(f64, f64)> {
    if !(step > 0.0) || !(extent > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "axis sampling needs positive extent and step, got extent {extent}, step {step}"
        )));
    }
    let n = (extent / step).floor() as i64;
    let mut min_abs = f64::INFINITY;
    let mut at = 0.0;
    for i in -n..=n {
        let x = i as f64 * step;
        if x.abs() < exclude_radius {
            continue;
        }
        let a = secular(Complex64::new(x, 0.0), bp, mat).value.norm();
        if a < min_abs {
            min_abs = a;
            at = x;
        }
    }
    Ok((min_abs, at))
}
