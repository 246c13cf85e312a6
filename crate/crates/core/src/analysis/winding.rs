//! Argument-principle zero counting on rectangles.
//!
//! The zero count of a holomorphic function inside a rectangle equals its
//! total phase change along the boundary divided by 2 pi. The phase is
//! accumulated by unwrapping between contour samples, splitting any step
//! larger than pi/2 recursively; the count is then exact after rounding.
//! No derivative of `f` is needed.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(Error::InvalidArgument(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn split4(&self) -> [Rect; 4] {
        let rm = 0.5 * (self.re_min + self.re_max);
        let im = 0.5 * (self.im_min + self.im_max);
        [
            Rect { re_min: self.re_min, re_max: rm, im_min: self.im_min, im_max: im },
            Rect { re_min: rm, re_max: self.re_max, im_min: self.im_min, im_max: im },
            Rect { re_min: self.re_min, re_max: rm, im_min: im, im_max: self.im_max },
            Rect { re_min: rm, re_max: self.re_max, im_min: im, im_max: self.im_max },
        ]
    }
}

/// Contour is declared unsafe when min |f| on it falls below this fraction
/// of max |f| on it.
pub const CONTOUR_SAFETY_RATIO: f64 = 1e-8;

/// Recursion limit for splitting a single phase step.
const MAX_PHASE_REFINEMENT: u32 = 48;

/// Result of a clean contour walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourScan {
    /// Zero count inside the rectangle (with multiplicity).
    pub winding: i64,
    /// Smallest |f| seen on the contour.
    pub min_abs: f64,
    /// Largest |f| seen on the contour.
    pub max_abs: f64,
    /// Number of function evaluations spent.
    pub evaluations: usize,
}

/// Count zeros of `f` inside `region` by boundary phase unwrapping.
///
/// Walks the rectangle counterclockwise with `samples_per_edge` base samples
/// per edge, refining adaptively wherever a phase step exceeds pi/2. Errors
/// if |f| comes within [`CONTOUR_SAFETY_RATIO`] times its contour maximum of
/// zero anywhere on the contour (the caller should shrink or move the
/// rectangle), or if refinement cannot resolve a phase step.
pub fn winding_number<F: Fn(Complex64) -> Complex64>(
    f: F,
    region: &Rect,
    samples_per_edge: usize,
) -> Result<ContourScan> {
    if samples_per_edge < 2 {
        return Err(Error::InvalidArgument(format!(
            "samples_per_edge must be >= 2, got {samples_per_edge}"
        )));
    }
    let corners = region.corners();
    let mut pts = Vec::with_capacity(4 * samples_per_edge);
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        for s in 0..samples_per_edge {
            let t = s as f64 / samples_per_edge as f64;
            pts.push(a + (b - a) * t);
        }
    }
    let vals: Vec<Complex64> = pts.iter().map(|&z| f(z)).collect();
    let mut evaluations = pts.len();

    let mut min_abs = f64::INFINITY;
    let mut max_abs: f64 = 0.0;
    let mut min_at = pts[0];
    for (&z, v) in pts.iter().zip(vals.iter()) {
        let a = v.norm();
        if a < min_abs {
            min_abs = a;
            min_at = z;
        }
        max_abs = max_abs.max(a);
    }
    let threshold = CONTOUR_SAFETY_RATIO * max_abs;
    if !(min_abs > threshold) || max_abs == 0.0 {
        return Err(Error::ContourNearZero {
            at: min_at,
            min_abs,
            threshold,
        });
    }

    let mut total = 0.0;
    let n = pts.len();
    for i in 0..n {
        let j = (i + 1) % n;
        total += phase_step(
            &f,
            pts[i],
            vals[i],
            pts[j],
            vals[j],
            0,
            threshold,
            &mut min_abs,
            &mut max_abs,
            &mut evaluations,
        )?;
    }

    let turns = total / std::f64::consts::TAU;
    let winding = turns.round();
    if (turns - winding).abs() > 0.25 {
        return Err(Error::PhaseUnresolved {
            at: Complex64::new(
                0.5 * (region.re_min + region.re_max),
                0.5 * (region.im_min + region.im_max),
            ),
        });
    }
    Ok(ContourScan {
        winding: winding as i64,
        min_abs,
        max_abs,
        evaluations,
    })
}

#[allow(clippy::too_many_arguments)]
fn phase_step<F: Fn(Complex64) -> Complex64>(
    f: &F,
    z0: Complex64,
    v0: Complex64,
    z1: Complex64,
    v1: Complex64,
    depth: u32,
    threshold: f64,
    min_abs: &mut f64,
    max_abs: &mut f64,
    evaluations: &mut usize,
) -> Result<f64> {
    let step = (v1 / v0).arg();
    if step.abs() <= std::f64::consts::FRAC_PI_2 {
        return Ok(step);
    }
    if depth >= MAX_PHASE_REFINEMENT {
        return Err(Error::PhaseUnresolved { at: z0 });
    }
    let zm = 0.5 * (z0 + z1);
    let vm = f(zm);
    *evaluations += 1;
    let a = vm.norm();
    *min_abs = min_abs.min(a);
    *max_abs = max_abs.max(a);
    if !(a > threshold) {
        return Err(Error::ContourNearZero {
            at: zm,
            min_abs: a,
            threshold,
        });
    }
    Ok(phase_step(f, z0, v0, zm, vm, depth + 1, threshold, min_abs, max_abs, evaluations)?
        + phase_step(f, zm, vm, z1, v1, depth + 1, threshold, min_abs, max_abs, evaluations)?)
}

/// Tiling and subdivision parameters for [`scan_region`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Base samples per tile edge (>= 64 for certification runs).
    pub samples_per_edge: usize,
    /// Initial tile grid along the real axis.
    pub tiles_re: usize,
    /// Initial tile grid along the imaginary axis.
    pub tiles_im: usize,
    /// Maximum quad-subdivision depth on contour-safety failures.
    pub max_depth: usize,
    /// Interior |f| sampling grid along the real axis.
    pub interior_re: usize,
    /// Interior |f| sampling grid along the imaginary axis.
    pub interior_im: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            samples_per_edge: 64,
            tiles_re: 4,
            tiles_im: 2,
            max_depth: 8,
            interior_re: 200,
            interior_im: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanStatus {
    /// Every tile was certified.
    Clean,
    /// Some tile kept failing contour safety down to `max_depth`; the
    /// reported winding covers only the resolved tiles.
    ContourTooCloseToZero,
}

/// Outcome of a rectangle scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub region: Rect,
    /// Total zero count over all certified tiles.
    pub winding: i64,
    pub min_abs_on_contour: f64,
    pub min_abs_interior: f64,
    /// Location of the interior minimum.
    pub argmin_interior: Complex64,
    /// Number of tile subdivisions triggered by contour-safety failures.
    pub subdivisions: usize,
    pub status: ScanStatus,
    /// Sub-rectangle left unresolved at max depth, when status is not clean.
    pub failed_tile: Option<Rect>,
}

struct TileOutcome {
    winding: i64,
    min_abs: f64,
    subdivisions: usize,
    failed: Option<Rect>,
}

fn certify_tile<F: Fn(Complex64) -> Complex64 + Sync>(
    f: &F,
    tile: &Rect,
    opts: &ScanOptions,
    depth: usize,
) -> TileOutcome {
    match winding_number(f, tile, opts.samples_per_edge) {
        Ok(cs) => TileOutcome {
            winding: cs.winding,
            min_abs: cs.min_abs,
            subdivisions: 0,
            failed: None,
        },
        Err(_) if depth < opts.max_depth => {
            let mut out = TileOutcome {
                winding: 0,
                min_abs: f64::INFINITY,
                subdivisions: 1,
                failed: None,
            };
            for quad in tile.split4() {
                let sub = certify_tile(f, &quad, opts, depth + 1);
                out.winding += sub.winding;
                out.min_abs = out.min_abs.min(sub.min_abs);
                out.subdivisions += sub.subdivisions;
                if out.failed.is_none() {
                    out.failed = sub.failed;
                }
            }
            out
        }
        Err(_) => TileOutcome {
            winding: 0,
            min_abs: f64::INFINITY,
            subdivisions: 0,
            failed: Some(*tile),
        },
    }
}

/// Count zeros of `f` over `region` by tiling it, running [`winding_number`]
/// per tile with automatic subdivision on contour-safety failures, and
/// summing. Also samples |f| on an interior grid and reports its minimum.
///
/// Tiles are processed in parallel but reduced in fixed grid order, so the
/// report is identical regardless of thread count.
pub fn scan_region<F: Fn(Complex64) -> Complex64 + Sync>(
    f: &F,
    region: &Rect,
    opts: &ScanOptions,
) -> ScanReport {
    let mut tiles = Vec::with_capacity(opts.tiles_re * opts.tiles_im);
    for iy in 0..opts.tiles_im {
        for ix in 0..opts.tiles_re {
            let x0 = region.re_min
                + (region.re_max - region.re_min) * ix as f64 / opts.tiles_re as f64;
            let x1 = region.re_min
                + (region.re_max - region.re_min) * (ix + 1) as f64 / opts.tiles_re as f64;
            let y0 = region.im_min
                + (region.im_max - region.im_min) * iy as f64 / opts.tiles_im as f64;
            let y1 = region.im_min
                + (region.im_max - region.im_min) * (iy + 1) as f64 / opts.tiles_im as f64;
            tiles.push(Rect {
                re_min: x0,
                re_max: x1,
                im_min: y0,
                im_max: y1,
            });
        }
    }

    let outcomes: Vec<TileOutcome> = tiles
        .par_iter()
        .map(|t| certify_tile(f, t, opts, 0))
        .collect();

    let mut winding = 0;
    let mut min_abs_on_contour = f64::INFINITY;
    let mut subdivisions = 0;
    let mut failed_tile = None;
    for o in &outcomes {
        winding += o.winding;
        min_abs_on_contour = min_abs_on_contour.min(o.min_abs);
        subdivisions += o.subdivisions;
        if failed_tile.is_none() {
            failed_tile = o.failed;
        }
    }

    // interior |f| minimum on a fixed grid, reduced in row-major order
    let nx = opts.interior_re.max(2);
    let ny = opts.interior_im.max(2);
    let interior: Vec<(f64, Complex64)> = (0..ny)
        .into_par_iter()
        .map(|iy| {
            let y = region.im_min
                + (region.im_max - region.im_min) * (iy as f64 + 0.5) / ny as f64;
            let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
            for ix in 0..nx {
                let x = region.re_min
                    + (region.re_max - region.re_min) * (ix as f64 + 0.5) / nx as f64;
                let z = Complex64::new(x, y);
                let a = f(z).norm();
                if a < best.0 {
                    best = (a, z);
                }
            }
            best
        })
        .collect();
    let mut min_abs_interior = f64::INFINITY;
    let mut argmin_interior = Complex64::new(0.0, 0.0);
    for (a, z) in interior {
        if a < min_abs_interior {
            min_abs_interior = a;
            argmin_interior = z;
        }
    }

    ScanReport {
        region: *region,
        winding,
        min_abs_on_contour,
        min_abs_interior,
        argmin_interior,
        subdivisions,
        status: if failed_tile.is_none() {
            ScanStatus::Clean
        } else {
            ScanStatus::ContourTooCloseToZero
        },
        failed_tile,
    }
}
