//! JSON run configuration: one document with nested material/boundary
//! sections plus one section per command. Absent command sections are filled
//! with defaults at resolution time (some derived from the material), so the
//! echoed configuration always spells out every value a run used.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use rayscan_core::{BoundaryParams, Material};

/// A validation failure naming the offending config field.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialSpec,
    pub boundary: BoundarySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<RootSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub existence_map: Option<ExistenceMapSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Material group: exactly one of `{lambda, mu}` or `{E, nu}` beside `rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub young: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
}

impl MaterialSpec {
    pub fn build(&self) -> Result<Material, ConfigError> {
        let lame = self.lambda.is_some() || self.mu.is_some();
        let young = self.young.is_some() || self.nu.is_some();
        match (lame, young) {
            (true, true) => Err(err(
                "material",
                "groups {lambda, mu} and {E, nu} are mutually exclusive",
            )),
            (false, false) => Err(err(
                "material",
                "need either {rho, lambda, mu} or {rho, E, nu}",
            )),
            (true, false) => {
                let lambda = self.lambda.ok_or_else(|| err("material.lambda", "missing"))?;
                let mu = self.mu.ok_or_else(|| err("material.mu", "missing"))?;
                Material::from_lame(self.rho, lambda, mu)
                    .map_err(|e| err("material", e.to_string()))
            }
            (false, true) => {
                let e_mod = self.young.ok_or_else(|| err("material.E", "missing"))?;
                let nu = self.nu.ok_or_else(|| err("material.nu", "missing"))?;
                Material::from_young_poisson(self.rho, e_mod, nu)
                    .map_err(|e| err("material", e.to_string()))
            }
        }
    }
}

/// Boundary group: exactly one of a `gamma` pair (complex, as `[re, im]`),
/// a `Z` pair, or `stress_free: true`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<[f64; 2]>,
    #[serde(rename = "Z1", default, skip_serializing_if = "Option::is_none")]
    pub z1: Option<f64>,
    #[serde(rename = "Z2", default, skip_serializing_if = "Option::is_none")]
    pub z2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stress_free: Option<bool>,
}

impl BoundarySpec {
    pub fn build(&self) -> Result<BoundaryParams, ConfigError> {
        let gamma = self.gamma1.is_some() || self.gamma2.is_some();
        let imped = self.z1.is_some() || self.z2.is_some();
        let free = self.stress_free == Some(true);
        match (gamma, imped, free) {
            (true, false, false) => {
                let g1 = self.gamma1.ok_or_else(|| err("boundary.gamma1", "missing"))?;
                let g2 = self.gamma2.ok_or_else(|| err("boundary.gamma2", "missing"))?;
                Ok(BoundaryParams::new(
                    Complex64::new(g1[0], g1[1]),
                    Complex64::new(g2[0], g2[1]),
                ))
            }
            (false, true, false) => {
                let z1 = self.z1.ok_or_else(|| err("boundary.Z1", "missing"))?;
                let z2 = self.z2.ok_or_else(|| err("boundary.Z2", "missing"))?;
                Ok(BoundaryParams::impedance(z1, z2))
            }
            (false, false, true) => Ok(BoundaryParams::stress_free()),
            (false, false, false) => Err(err(
                "boundary",
                "need one of {gamma1, gamma2}, {Z1, Z2} or stress_free: true",
            )),
            _ => Err(err(
                "boundary",
                "groups {gamma1, gamma2}, {Z1, Z2} and stress_free are mutually exclusive",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    Real(RealGrid),
    Rect(RectGrid),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RealGrid {
    pub fn points(&self) -> Result<Vec<f64>, ConfigError> {
        if !(self.step > 0.0) {
            return Err(err("eval.grid.real.step", "must be > 0"));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as i64;
        if n < 1 {
            return Err(err("eval.grid.real", "empty grid (needs at least 2 points)"));
        }
        Ok((0..=n).map(|i| self.start + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub re_count: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub im_count: usize,
}

impl RectGrid {
    pub fn points(&self) -> Result<Vec<Complex64>, ConfigError> {
        if self.re_count < 2 || self.im_count < 2 {
            return Err(err("eval.grid.rect", "grid counts must be >= 2"));
        }
        if !(self.re_min < self.re_max && self.im_min < self.im_max) {
            return Err(err("eval.grid.rect", "degenerate rectangle"));
        }
        let mut pts = Vec::with_capacity(self.re_count * self.im_count);
        for iy in 0..self.im_count {
            let y = self.im_min
                + (self.im_max - self.im_min) * iy as f64 / (self.im_count - 1) as f64;
            for ix in 0..self.re_count {
                let x = self.re_min
                    + (self.re_max - self.re_min) * ix as f64 / (self.re_count - 1) as f64;
                pts.push(Complex64::new(x, y));
            }
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSpec {
    pub grid: GridSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RootSpec {
    pub tol: f64,
}

impl Default for RootSpec {
    fn default() -> Self {
        Self { tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSpec {
    /// Real half-width of the region; default 3 c1.
    pub re_extent: Option<f64>,
    /// Bottom of the region; default 1e-3 c2 (must stay > 0).
    pub im_floor: Option<f64>,
    /// Top of the region; default 3 c1.
    pub im_ceiling: Option<f64>,
    pub samples_per_edge: usize,
    pub tiles_re: usize,
    pub tiles_im: usize,
    pub max_depth: usize,
    pub interior_re: usize,
    pub interior_im: usize,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            re_extent: None,
            im_floor: None,
            im_ceiling: None,
            samples_per_edge: 64,
            tiles_re: 4,
            tiles_im: 2,
            max_depth: 8,
            interior_re: 200,
            interior_im: 100,
        }
    }
}

impl ScanSpec {
    /// Fill material-dependent region defaults.
    pub fn resolve(&mut self, mat: &Material) {
        self.re_extent.get_or_insert(3.0 * mat.c1());
        self.im_floor.get_or_insert(1e-3 * mat.c2());
        self.im_ceiling.get_or_insert(3.0 * mat.c1());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySpec {
    pub seed: u64,
    /// Upper half-plane draws for the key-inequality check.
    pub key_samples: usize,
    /// Real subsonic samples for the restricted-form zero check.
    pub form_zero_samples: usize,
    /// Upper half-plane draws for the restricted-form sign check.
    pub form_sign_samples: usize,
    pub energy_draws: usize,
    pub symmetry_samples: usize,
    pub oracle_samples: usize,
    /// Largest perturbation index for the uniform-limit table (doubling
    /// from 1).
    pub hurwitz_max_n: u32,
    pub form_zero_tol: f64,
    pub form_sign_tol: f64,
    pub energy_order_min: f64,
    pub symmetry_tol: f64,
    pub oracle_tol: f64,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self {
            seed: 1,
            key_samples: 100,
            form_zero_samples: 1000,
            form_sign_samples: 2000,
            energy_draws: 20,
            symmetry_samples: 1000,
            oracle_samples: 500,
            hurwitz_max_n: 1024,
            form_zero_tol: 1e-12,
            form_sign_tol: 1e-10,
            energy_order_min: 1.9,
            symmetry_tol: 1e-12,
            oracle_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl RangeSpec {
    pub fn points(&self, field: &str) -> Result<Vec<f64>, ConfigError> {
        if self.count < 2 {
            return Err(err(field, "grid count must be >= 2"));
        }
        if !(self.min < self.max) {
            return Err(err(field, "min must be < max"));
        }
        Ok((0..self.count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExistenceMapSpec {
    pub z1: Option<RangeSpec>,
    pub z2: Option<RangeSpec>,
    pub tol: f64,
}

impl Default for ExistenceMapSpec {
    fn default() -> Self {
        Self {
            z1: None,
            z2: None,
            tol: 1e-10,
        }
    }
}

impl ExistenceMapSpec {
    pub fn resolve(&mut self, mat: &Material) {
        let scale = (mat.mu() * mat.rho()).sqrt();
        self.z1.get_or_insert(RangeSpec {
            min: -2.0 * scale,
            max: 2.0 * scale,
            count: 21,
        });
        self.z2.get_or_insert(RangeSpec {
            min: -2.0 * scale,
            max: 2.0 * scale,
            count: 21,
        });
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    /// Destination for CSV data (eval, existence-map) or the JSON report
    /// (other commands; stdout when absent).
    pub path: Option<String>,
    /// "csv" or "json"; defaults per command.
    pub format: Option<String>,
}

/// Load a config document, apply `--set path=value` overrides, and
/// deserialize.
pub fn load_config(text: &str, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let mut doc: Value =
        serde_json::from_str(text).map_err(|e| err("<document>", e.to_string()))?;
    for item in overrides {
        let (path, raw) = item
            .split_once('=')
            .ok_or_else(|| err("--set", format!("expected path=value, got `{item}`")))?;
        apply_override(&mut doc, path, raw)?;
    }
    serde_json::from_value(doc).map_err(|e| err("<document>", e.to_string()))
}

fn apply_override(doc: &mut Value, path: &str, raw: &str) -> Result<(), ConfigError> {
    let parsed: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(err("--set", format!("bad path `{path}`")));
    }
    let mut cur = doc;
    for part in &parts[..parts.len() - 1] {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| err(path, "path traverses a non-object"))?;
        cur = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = cur
        .as_object_mut()
        .ok_or_else(|| err(path, "path traverses a non-object"))?;
    obj.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}
