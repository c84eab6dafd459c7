//! Problem configuration: JSON in, validated specs out.
//!
//! ```json
//! {
//!   "f": {"catalog": "quadratic", "params": {"c": 0.25}},
//!   "g": {"coefficients": [[1, 0], [0.5, 0]]},
//!   "params": {"alpha": [0.5, 0], "beta": [0.5, 0], "gamma": [1, 0], "m": 1, "a": 1, "k": 0.3},
//!   "grid": {"levels": 10, "angles_per_radius": 512, "refine_steps": 30},
//!   "quad": {"nodes_per_panel": 32, "max_panels": 64, "rel_tol": 1e-10},
//!   "variant": "thm32"
//! }
//! ```
//!
//! Every field is optional. Functions default to the identity, `alpha`,
//! `beta`, `gamma`, `m` and `a` to one, and `k` to unset.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;
use univalence_core::catalog::{catalog_build, NAMES};
use univalence_core::grid::{DEFAULT_ANGLES, DEFAULT_LEVELS, DEFAULT_REFINE_STEPS};
use univalence_core::quadrature::{DEFAULT_MAX_PANELS, DEFAULT_NODES_PER_PANEL, DEFAULT_REL_TOL};
use univalence_core::{
    Error as CoreError, FunctionSet, Functions64, Grid64, Params64, Quadrature64, Series64, SeriesFunction, Variant,
    C64,
};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    /// A field-path message such as `params.gamma: must be nonzero`.
    #[error("{0}")]
    Field(String),
}

/// A function given by catalog name or by its coefficient list `c1, c2, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction", into = "RawFunction")]
pub enum FunctionSpec {
    Catalog { name: String, params: BTreeMap<String, f64> },
    Coefficients(Vec<C64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    catalog: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<C64>>,
}

impl FunctionSpec {
    pub fn identity() -> Self {
        FunctionSpec::Catalog { name: "identity".into(), params: BTreeMap::new() }
    }

    pub fn build(&self) -> Result<Series64, String> {
        let built = match self {
            FunctionSpec::Catalog { name, params } => catalog_build(name, params),
            FunctionSpec::Coefficients(c) => SeriesFunction::normalized(c.clone(), "coefficients"),
        };
        built.map_err(|e| match e {
            CoreError::Invalid(msg) => msg,
            CoreError::UnknownCatalog(name) => {
                format!("unknown catalog function `{name}` (expected one of {})", NAMES.join(", "))
            }
            other => other.to_string(),
        })
    }
}

impl TryFrom<RawFunction> for FunctionSpec {
    type Error = String;

    fn try_from(raw: RawFunction) -> Result<Self, String> {
        let spec = match (raw.catalog, raw.coefficients) {
            (Some(name), None) => FunctionSpec::Catalog { name, params: raw.params.unwrap_or_default() },
            (None, Some(c)) if raw.params.is_none() => FunctionSpec::Coefficients(c),
            (None, Some(_)) => return Err("`params` only applies to catalog functions".into()),
            (Some(_), Some(_)) => return Err("give either `catalog` or `coefficients`, not both".into()),
            (None, None) => return Err("expected `catalog` or `coefficients`".into()),
        };
        spec.build()?;
        Ok(spec)
    }
}

impl From<FunctionSpec> for RawFunction {
    fn from(spec: FunctionSpec) -> Self {
        match spec {
            FunctionSpec::Catalog { name, params } => {
                RawFunction { catalog: Some(name), params: (!params.is_empty()).then_some(params), coefficients: None }
            }
            FunctionSpec::Coefficients(c) => RawFunction { catalog: None, params: None, coefficients: Some(c) },
        }
    }
}

fn one() -> f64 {
    1.0
}

fn complex_one() -> C64 {
    C64::new(1.0, 0.0)
}

fn finite_complex<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
    let z = C64::deserialize(d)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(serde::de::Error::custom("must be finite"));
    }
    Ok(z)
}

fn nonzero_complex<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
    let z = finite_complex(d)?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(serde::de::Error::custom("must be nonzero"));
    }
    Ok(z)
}

fn nonnegative<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    let x = f64::deserialize(d)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(serde::de::Error::custom(format!("must be a finite number >= 0, got {x}")));
    }
    Ok(x)
}

fn positive<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    let x = f64::deserialize(d)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(serde::de::Error::custom(format!("must be a finite number > 0, got {x}")));
    }
    Ok(x)
}

fn unit_interval<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    let k = Option::<f64>::deserialize(d)?;
    match k {
        Some(x) if !(0.0..1.0).contains(&x) => Err(serde::de::Error::custom(format!("must lie in [0, 1), got {x}"))),
        k => Ok(k),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default = "complex_one", deserialize_with = "finite_complex")]
    pub alpha: C64,
    #[serde(default = "complex_one", deserialize_with = "finite_complex")]
    pub beta: C64,
    #[serde(default = "complex_one", deserialize_with = "nonzero_complex")]
    pub gamma: C64,
    #[serde(default = "one", deserialize_with = "nonnegative")]
    pub m: f64,
    #[serde(default = "one", deserialize_with = "positive")]
    pub a: f64,
    #[serde(default, deserialize_with = "unit_interval", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

impl Default for ParamsSpec {
    fn default() -> Self {
        Self { alpha: complex_one(), beta: complex_one(), gamma: complex_one(), m: 1.0, a: 1.0, k: None }
    }
}

impl ParamsSpec {
    pub fn to_params(&self) -> Params64 {
        let mut p = Params64::new(self.alpha, self.beta, self.gamma)
            .and_then(|p| p.with_m(self.m))
            .and_then(|p| p.with_a(self.a))
            .expect("validated on parse");
        p.k = self.k;
        p
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    levels: Option<u32>,
    #[serde(default = "default_angles")]
    angles_per_radius: usize,
    #[serde(default = "default_refine")]
    refine_steps: usize,
}

fn default_angles() -> usize {
    DEFAULT_ANGLES
}

fn default_refine() -> usize {
    DEFAULT_REFINE_STEPS
}

/// The sampling grid; `levels` gives radii `1 - 2^-j`, `radii` lists them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct GridSpec(pub Grid64);

impl TryFrom<RawGrid> for GridSpec {
    type Error = String;

    fn try_from(raw: RawGrid) -> Result<Self, String> {
        let grid = match (raw.radii, raw.levels) {
            (Some(_), Some(_)) => return Err("give either `radii` or `levels`, not both".into()),
            (Some(radii), None) => Grid64::new(radii, raw.angles_per_radius, raw.refine_steps),
            (None, levels) => Grid64::dyadic(levels.unwrap_or(DEFAULT_LEVELS), raw.angles_per_radius, raw.refine_steps),
        };
        grid.map(GridSpec).map_err(strip_core)
    }
}

impl From<GridSpec> for RawGrid {
    fn from(g: GridSpec) -> Self {
        RawGrid {
            radii: Some(g.0.radii),
            levels: None,
            angles_per_radius: g.0.angles_per_radius,
            refine_steps: g.0.refine_steps,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuad {
    #[serde(default = "default_nodes")]
    nodes_per_panel: usize,
    #[serde(default = "default_panels")]
    max_panels: usize,
    #[serde(default = "default_rel_tol")]
    rel_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    substitution_power: Option<u32>,
}

fn default_nodes() -> usize {
    DEFAULT_NODES_PER_PANEL
}

fn default_panels() -> usize {
    DEFAULT_MAX_PANELS
}

fn default_rel_tol() -> f64 {
    DEFAULT_REL_TOL
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQuad", into = "RawQuad")]
pub struct QuadSpec(pub Quadrature64);

impl TryFrom<RawQuad> for QuadSpec {
    type Error = String;

    fn try_from(raw: RawQuad) -> Result<Self, String> {
        let mut q = Quadrature64::new(raw.nodes_per_panel, raw.max_panels, raw.rel_tol).map_err(strip_core)?;
        if let Some(p) = raw.substitution_power {
            q = q.with_substitution_power(p).map_err(strip_core)?;
        }
        Ok(QuadSpec(q))
    }
}

impl From<QuadSpec> for RawQuad {
    fn from(q: QuadSpec) -> Self {
        RawQuad {
            nodes_per_panel: q.0.nodes_per_panel(),
            max_panels: q.0.max_panels(),
            rel_tol: q.0.rel_tol(),
            substitution_power: q.0.substitution_power_override(),
        }
    }
}

fn strip_core(e: CoreError) -> String {
    match e {
        CoreError::Invalid(msg) => msg,
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default = "FunctionSpec::identity")]
    pub f: FunctionSpec,
    #[serde(default = "FunctionSpec::identity")]
    pub g: FunctionSpec,
    #[serde(default = "FunctionSpec::identity")]
    pub phi: FunctionSpec,
    #[serde(default)]
    pub params: ParamsSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub quad: QuadSpec,
    #[serde(default)]
    pub variant: Variant,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        Self {
            f: FunctionSpec::identity(),
            g: FunctionSpec::identity(),
            phi: FunctionSpec::identity(),
            params: ParamsSpec::default(),
            grid: GridSpec::default(),
            quad: QuadSpec::default(),
            variant: Variant::default(),
        }
    }
}

impl ProblemSpec {
    pub fn functions(&self) -> Functions64 {
        let build = |s: &FunctionSpec| s.build().expect("validated on parse");
        FunctionSet::new(build(&self.f), build(&self.g), build(&self.phi))
    }

    pub fn parameters(&self) -> Params64 {
        self.params.to_params()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs always serialize")
    }
}

/// Parses and validates a JSON problem document.
pub fn parse_config(text: &str) -> Result<ProblemSpec, ConfigError> {
    // going through a Value keeps line/column noise out of field messages
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        if path == "." {
            ConfigError::Field(inner)
        } else {
            ConfigError::Field(format!("{path}: {inner}"))
        }
    })
}
