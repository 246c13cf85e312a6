//! Command implementations. Each returns the process exit code after
//! writing its artifacts:
//!
//! - 0: success (including "no root found" and clean scans)
//! - 2: configuration/validation error (raised by the caller)
//! - 3: a scan detected zeros in the region
//! - 4: a verification check failed
//! - 5: internal numeric failure (unresolvable contour, bad report)

use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{Context, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rayscan_core::analysis::{
    boundary_operator_min_gain, energy_identity_check, existence_map, find_subsonic_root,
    hurwitz_convergence_check, restricted_quadratic_form, scan_region, verify_coercivity, Rect,
    ScanOptions, ScanReport, ScanStatus,
};
use rayscan_core::secular::{
    determinant_oracle, oracle_factor, secular, secular_impedance, BoundaryParams,
};
use rayscan_core::{Material, Regime};

use crate::config::{ConfigError, GridSpec, RunConfig};
use crate::report::{fmt_f64, fmt_opt_f64, Check, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_WINDING: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

fn cfg_err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

fn open_out(path: &str) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {path}"))?;
    Ok(BufWriter::new(file))
}

fn emit_report(report: &Report) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(report.to_json().as_bytes())?;
    Ok(())
}

fn require_data_path(cfg: &RunConfig) -> Result<String, ConfigError> {
    cfg.output
        .path
        .clone()
        .ok_or_else(|| cfg_err("output.path", "this command writes CSV and needs a path"))
}

/// Evaluate the secular function over the configured grid and write one CSV
/// record per grid point.
pub fn cmd_eval(cfg: &RunConfig, mat: &Material, bp: &BoundaryParams) -> Result<i32> {
    let spec = cfg
        .eval
        .as_ref()
        .ok_or_else(|| cfg_err("eval.grid", "eval needs a grid"))?;
    let path = require_data_path(cfg)?;

    let points: Vec<Complex64> = match &spec.grid {
        GridSpec::Real(g) => g
            .points()?
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect(),
        GridSpec::Rect(g) => g.points()?,
    };

    let mut out = open_out(&path)?;
    writeln!(out, "c_re,c_im,R_re,R_im,abs_R")?;
    for &c in &points {
        let v = secular(c, bp, mat).value;
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(c.re),
            fmt_f64(c.im),
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(v.norm())
        )?;
    }
    out.flush()?;

    let report = Report {
        command: "eval".into(),
        config_echo: cfg.clone(),
        results: serde_json::json!({
            "path": path,
            "records": points.len(),
            "regime": bp.regime().as_str(),
        }),
        checks: vec![],
    };
    emit_report(&report)?;
    Ok(EXIT_OK)
}

/// Locate the subsonic surface-wave root for impedance boundary parameters.
pub fn cmd_root(cfg: &RunConfig, mat: &Material, bp: &BoundaryParams) -> Result<i32> {
    if !matches!(bp.regime(), Regime::PureImpedance | Regime::StressFree) {
        return Err(cfg_err(
            "boundary",
            format!(
                "root search needs a pure-impedance or stress-free boundary, got {}",
                bp.regime().as_str()
            ),
        )
        .into());
    }
    let spec = cfg.root.clone().unwrap_or_default();
    let report = find_subsonic_root(bp.z1(), bp.z2(), mat, spec.tol)?;

    let json = Report {
        command: "root".into(),
        config_echo: cfg.clone(),
        results: serde_json::json!({
            "found": report.found,
            "c_root": report.c_root,
            "c_root_over_c2": report.c_root.map(|c| c / mat.c2()),
            "residual": report.residual,
            "bracket": report.bracket.map(|(lo, hi)| vec![lo, hi]),
            "iterations": report.iterations,
            "multiplicity_note": report.multiplicity_note,
        }),
        checks: vec![],
    };
    emit_report(&json)?;
    Ok(EXIT_OK)
}

fn scan_results_json(report: &ScanReport) -> serde_json::Value {
    serde_json::json!({
        "region": {
            "re_min": report.region.re_min,
            "re_max": report.region.re_max,
            "im_min": report.region.im_min,
            "im_max": report.region.im_max,
        },
        "winding": report.winding,
        "min_abs_on_contour": report.min_abs_on_contour,
        "min_abs_interior": report.min_abs_interior,
        "argmin_interior": [report.argmin_interior.re, report.argmin_interior.im],
        "subdivisions": report.subdivisions,
        "status": match report.status {
            ScanStatus::Clean => "clean",
            ScanStatus::ContourTooCloseToZero => "contour-too-close-to-zero",
        },
        "failed_tile": report.failed_tile.map(|t| {
            serde_json::json!({
                "re_min": t.re_min, "re_max": t.re_max,
                "im_min": t.im_min, "im_max": t.im_max,
            })
        }),
    })
}

/// Count secular-function zeros over a rectangle in the upper half-plane.
/// Exit 3 when zeros are found (scripts use this to detect ill-posed
/// parameters), 5 when a tile could not be certified.
pub fn cmd_scan(cfg: &RunConfig, mat: &Material, bp: &BoundaryParams) -> Result<i32> {
    let mut spec = cfg.scan.clone().unwrap_or_default();
    spec.resolve(mat);
    let im_floor = spec.im_floor.expect("resolved");
    if !(im_floor > 0.0) {
        return Err(cfg_err("scan.im_floor", "must be > 0 (the real axis carries the branch cut)").into());
    }
    let re_extent = spec.re_extent.expect("resolved");
    let region = Rect::new(
        -re_extent,
        re_extent,
        im_floor,
        spec.im_ceiling.expect("resolved"),
    )
    .map_err(|e| cfg_err("scan", e.to_string()))?;
    let opts = ScanOptions {
        samples_per_edge: spec.samples_per_edge,
        tiles_re: spec.tiles_re,
        tiles_im: spec.tiles_im,
        max_depth: spec.max_depth,
        interior_re: spec.interior_re,
        interior_im: spec.interior_im,
    };
    let f = |c: Complex64| secular(c, bp, mat).value;
    let report = scan_region(&f, &region, &opts);

    let clean = report.status == ScanStatus::Clean;
    let check = Check::new(
        "no-roots-in-region",
        clean && report.winding == 0,
        report.min_abs_interior,
        "R != 0 on the scanned upper half-plane rectangle",
    );
    let json = Report {
        command: "scan".into(),
        config_echo: {
            let mut echo = cfg.clone();
            echo.scan = Some(spec);
            echo
        },
        results: scan_results_json(&report),
        checks: vec![check],
    };
    emit_report(&json)?;

    if !clean || report.winding < 0 {
        return Ok(EXIT_NUMERIC);
    }
    if report.winding > 0 {
        return Ok(EXIT_WINDING);
    }
    Ok(EXIT_OK)
}

/// Map subsonic root existence over an impedance-parameter rectangle.
pub fn cmd_existence_map(cfg: &RunConfig, mat: &Material, bp: &BoundaryParams) -> Result<i32> {
    if !matches!(bp.regime(), Regime::PureImpedance | Regime::StressFree) {
        return Err(cfg_err(
            "boundary",
            "existence mapping sweeps impedance parameters; the boundary must be \
             pure-impedance or stress-free",
        )
        .into());
    }
    let mut spec = cfg.existence_map.clone().unwrap_or_default();
    spec.resolve(mat);
    let path = require_data_path(cfg)?;
    let z1 = spec.z1.as_ref().expect("resolved").points("existence_map.z1")?;
    let z2 = spec.z2.as_ref().expect("resolved").points("existence_map.z2")?;

    let cells = existence_map(&z1, &z2, mat, spec.tol)?;

    let mut out = open_out(&path)?;
    writeln!(out, "Z1,Z2,found,c_root,residual")?;
    let mut found_count = 0usize;
    for cell in &cells {
        if cell.report.found {
            found_count += 1;
        }
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(cell.z1),
            fmt_f64(cell.z2),
            cell.report.found,
            fmt_opt_f64(cell.report.c_root),
            fmt_opt_f64(cell.report.residual),
        )?;
    }
    out.flush()?;

    let json = Report {
        command: "existence-map".into(),
        config_echo: {
            let mut echo = cfg.clone();
            echo.existence_map = Some(spec);
            echo
        },
        results: serde_json::json!({
            "path": path,
            "cells": cells.len(),
            "found": found_count,
        }),
        checks: vec![],
    };
    emit_report(&json)?;
    Ok(EXIT_OK)
}

/// Complex draw over the scan box, rejected near the singular speeds.
fn admissible_speed(rng: &mut ChaCha8Rng, mat: &Material, im_min: f64, im_max: f64) -> Complex64 {
    let r = 3.0 * mat.c1();
    let c2 = mat.c2();
    loop {
        let c = Complex64::new(rng.gen_range(-r..r), rng.gen_range(im_min..im_max));
        if c.norm() > 1e-3 * c2 && (c - c2).norm() > 1e-3 * c2 && (c + c2).norm() > 1e-3 * c2 {
            return c;
        }
    }
}

/// Run the verification battery appropriate to the boundary regime and emit
/// one pass/fail check per invariant. Exit 4 when any applicable check
/// fails.
pub fn cmd_verify(cfg: &RunConfig, mat: &Material, bp: &BoundaryParams) -> Result<i32> {
    let spec = cfg.verify.clone().unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut checks: Vec<Check> = Vec::new();
    let mut results = serde_json::Map::new();

    // coercivity constants and the key inequality need the perturbed regime
    if bp.regime() == Regime::Perturbed {
        let rep = verify_coercivity(bp, mat)?;
        results.insert(
            "coercivity".into(),
            serde_json::json!({
                "beta0": rep.beta0,
                "d1": rep.d1,
                "d2": rep.d2,
                "lambdas": rep.lambdas,
                "epsilon": rep.epsilon,
                "min_eig_m": rep.min_eig_m,
                "eig_cross_error": rep.eig_cross_error,
            }),
        );
        checks.push(Check::new(
            "coercivity-eigenvalues",
            rep.pass,
            rep.epsilon,
            "positivity of the boundary-form spectrum for Re gamma < 0",
        ));

        let bound = rep.epsilon / rep.beta0;
        let mut worst_slack = f64::INFINITY;
        for _ in 0..spec.key_samples {
            let c = admissible_speed(&mut rng, mat, 1e-4, 3.0 * mat.c1());
            let gain = boundary_operator_min_gain(c, 1.0, bp, mat)?;
            worst_slack = worst_slack.min(gain - bound);
        }
        checks.push(Check::new(
            "coercivity-key-inequality",
            worst_slack >= -1e-9 * bound.max(1.0),
            worst_slack,
            "||B r||^2 >= (epsilon/beta0) ||r||^2 on the mode span",
        ));
    } else {
        checks.push(Check::skipped(
            "coercivity-eigenvalues",
            "inapplicable: needs Re gamma1 < 0 and Re gamma2 < 0",
        ));
        checks.push(Check::skipped(
            "coercivity-key-inequality",
            "inapplicable: needs Re gamma1 < 0 and Re gamma2 < 0",
        ));
    }

    // restricted quadratic form: exactly zero on the real subsonic segment
    let mut worst_entry: f64 = 0.0;
    for _ in 0..spec.form_zero_samples {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let c = Complex64::new(sign * rng.gen_range(0.01..0.99) * mat.c2(), 0.0);
        let form = restricted_quadratic_form(c, 1.0, mat)?;
        worst_entry = worst_entry.max(form.max_entry_abs() / form.scale);
    }
    checks.push(Check::new(
        "quadratic-form-subsonic-zero",
        worst_entry <= spec.form_zero_tol,
        spec.form_zero_tol - worst_entry,
        "A* S2' A = 0 for real subsonic speeds",
    ));

    // ... and non-positive in the upper half-plane
    let mut worst_eig = f64::NEG_INFINITY;
    for _ in 0..spec.form_sign_samples {
        let c = admissible_speed(&mut rng, mat, 1e-6, 3.0 * mat.c1());
        let form = restricted_quadratic_form(c, 1.0, mat)?;
        worst_eig = worst_eig.max(form.eigenvalues()[1] / form.scale);
    }
    checks.push(Check::new(
        "quadratic-form-upper-nonpositive",
        worst_eig <= spec.form_sign_tol,
        spec.form_sign_tol - worst_eig,
        "A* S2' A <= 0 for Im c > 0",
    ));

    // energy identity at second order in the grid step
    let mut min_order = f64::INFINITY;
    for _ in 0..spec.energy_draws {
        let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..2.0));
        let a1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let a2 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let coarse: Vec<f64> = (0..65).map(|i| i as f64 / 64.0).collect();
        let fine: Vec<f64> = (0..129).map(|i| i as f64 / 128.0).collect();
        let rc = energy_identity_check(c, 1.0, a1, a2, mat, &coarse)?;
        let rf = energy_identity_check(c, 1.0, a1, a2, mat, &fine)?;
        min_order = min_order.min((rc / rf).log2());
    }
    checks.push(Check::new(
        "energy-identity-order",
        min_order >= spec.energy_order_min,
        min_order - spec.energy_order_min,
        "d/dx2 (p* S2 p) = 2 k |p|^2 Im c to O(h^2)",
    ));

    // uniform approach of the impedance limit, with its explicit bound
    let ns: Vec<u32> = std::iter::successors(Some(1u32), |&n| {
        (n < spec.hurwitz_max_n).then_some(n * 2)
    })
    .collect();
    let region = Rect::new(-2.0, 2.0, 0.5, 2.0).expect("static rectangle");
    match hurwitz_convergence_check(bp.z1(), bp.z2(), mat, &region, &ns, (81, 41)) {
        Ok(rows) => {
            let margin = rows
                .iter()
                .map(|r| r.r_n * (1.0 + 1e-9) - r.sup_diff)
                .fold(f64::INFINITY, f64::min);
            results.insert(
                "hurwitz_table".into(),
                serde_json::Value::Array(
                    rows.iter()
                        .map(|r| {
                            serde_json::json!({"n": r.n, "sup_diff": r.sup_diff, "r_n": r.r_n})
                        })
                        .collect(),
                ),
            );
            checks.push(Check::new(
                "uniform-limit-bound",
                true,
                margin,
                "sup |f_n - f| <= r_n with r_n decreasing to 0",
            ));
        }
        Err(e) => {
            checks.push(Check::new(
                "uniform-limit-bound",
                false,
                f64::NEG_INFINITY,
                &format!("bound failed: {e}"),
            ));
        }
    }

    // sign-flip symmetry of the impedance secular function
    let mut worst_sym: f64 = 0.0;
    for _ in 0..spec.symmetry_samples {
        let c = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let z1 = rng.gen_range(-2.0..2.0);
        let z2 = rng.gen_range(-2.0..2.0);
        let lhs = secular_impedance(-c, z1, z2, mat).value;
        let rhs = secular_impedance(c, -z1, -z2, mat).value;
        worst_sym = worst_sym.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }
    checks.push(Check::new(
        "secular-symmetry",
        worst_sym <= spec.symmetry_tol,
        spec.symmetry_tol - worst_sym,
        "R(-c; i Z) = R(c; -i Z)",
    ));

    // boundary-determinant oracle against the closed form
    let mut worst_oracle: f64 = 0.0;
    for _ in 0..spec.oracle_samples {
        let c = admissible_speed(&mut rng, mat, -3.0 * mat.c1(), 3.0 * mat.c1());
        let rand_bp = BoundaryParams::new(
            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        );
        let k = rng.gen_range(0.1..3.0);
        let det = determinant_oracle(c, k, &rand_bp, mat)?;
        let pred = oracle_factor(c, k, mat) * secular(c, &rand_bp, mat).value;
        let scale = det.norm().max(pred.norm()).max(1e-30);
        worst_oracle = worst_oracle.max((det - pred).norm() / scale);
    }
    checks.push(Check::new(
        "determinant-oracle",
        worst_oracle <= spec.oracle_tol,
        spec.oracle_tol - worst_oracle,
        "det(boundary system) = (i rho^2 c2^4 k^2 / b2) R",
    ));

    // classical reduction for the traction-free surface
    if bp.regime() == Regime::StressFree {
        let mut worst_red: f64 = 0.0;
        for i in 1..200 {
            let x = mat.c2() * i as f64 / 200.0;
            let v = secular_impedance(Complex64::new(x, 0.0), 0.0, 0.0, mat).value;
            let u = x * x / (mat.c2() * mat.c2());
            let w = x * x / (mat.c1() * mat.c1());
            let classical = (2.0 - u).powi(2) - 4.0 * (1.0 - u).sqrt() * (1.0 - w).sqrt();
            worst_red = worst_red.max((v.re - classical).abs().max(v.im.abs()));
        }
        checks.push(Check::new(
            "stress-free-reduction",
            worst_red <= 1e-12,
            1e-12 - worst_red,
            "R(c; 0, 0) is the classical traction-free function",
        ));
    } else {
        checks.push(Check::skipped(
            "stress-free-reduction",
            "inapplicable: boundary is not stress-free",
        ));
    }

    let mut stderr = std::io::stderr().lock();
    for c in &checks {
        if c.skipped == Some(true) {
            writeln!(stderr, "SKIP {:<34} ({})", c.name, c.paper_ref)?;
        } else {
            writeln!(
                stderr,
                "{} {:<34} margin={:+.3e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.margin
            )?;
        }
    }

    let all_pass = checks.iter().all(|c| c.pass);
    let json = Report {
        command: "verify".into(),
        config_echo: {
            let mut echo = cfg.clone();
            echo.verify = Some(spec);
            echo
        },
        results: serde_json::Value::Object(results),
        checks,
    };
    emit_report(&json)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
