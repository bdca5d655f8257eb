//! Problem configuration: JSON schema, the bundled catalog, and atomic
//! output writing.

use crate::error::{Result, SemiError};
use crate::fields::ScalarField;
use crate::operator::GridSpec;
use crate::symbols::SymbolSpec;
use crate::weight::WeightParams;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyParams {
    pub h_list: Vec<f64>,
    pub c: f64,
    pub rho: f64,
    pub t_window: f64,
}

impl Default for StudyParams {
    fn default() -> Self {
        StudyParams { h_list: vec![0.1, 0.05, 0.025, 0.0125], c: 4.0, rho: 0.3, t_window: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub name: String,
    pub spec: SymbolSpec,
    pub weight: WeightParams,
    pub grid: GridSpec,
    pub study: StudyParams,
}

pub const CATALOG: &[&str] = &["harmonic-complex-1d", "flat-well-1d", "anisotropic-2d"];

/// Bundled problems; names double as config-file fallbacks in the CLI.
pub fn catalog(name: &str) -> Option<ProblemConfig> {
    let mk = |name: &str, spec: SymbolSpec, grid: GridSpec| ProblemConfig {
        name: name.to_string(),
        spec,
        weight: WeightParams::new(1e-2, 0.1, 1.0),
        grid,
        study: StudyParams::default(),
    };
    match name {
        "harmonic-complex-1d" => {
            let mut spec = SymbolSpec::schrodinger(
                1,
                ScalarField::monomial(1, 0, 2, 1.0),
                ScalarField::monomial(1, 0, 2, 1.0),
            );
            spec.flatten_radius = Some(4.0);
            Some(mk(name, spec, GridSpec::periodic(1, 10.0, 512)))
        }
        "flat-well-1d" => {
            let mut spec = SymbolSpec::schrodinger(
                1,
                ScalarField::flat_well(),
                ScalarField::monomial(1, 0, 2, 1.0),
            );
            spec.flatten_radius = Some(4.0);
            Some(mk(name, spec, GridSpec::periodic(1, 10.0, 512)))
        }
        "anisotropic-2d" => {
            let mut spec = SymbolSpec::schrodinger(
                2,
                ScalarField::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], 1.0)]),
                ScalarField::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0)]),
            );
            spec.flatten_radius = Some(4.0);
            Some(mk(name, spec, GridSpec::periodic(2, 8.0, 32)))
        }
        _ => None,
    }
}

/// Load a config from a JSON file, or fall back to a catalog name.
pub fn load_config(path_or_name: &str) -> Result<ProblemConfig> {
    if Path::new(path_or_name).exists() {
        let text = std::fs::read_to_string(path_or_name)?;
        let cfg: ProblemConfig = serde_json::from_str(&text)?;
        cfg.weight.validate()?;
        cfg.grid.validate()?;
        return Ok(cfg);
    }
    catalog(path_or_name).ok_or_else(|| SemiError::Config {
        field: "config".into(),
        message: format!(
            "`{path_or_name}` is neither a file nor a catalog name ({})",
            CATALOG.join(", ")
        ),
    })
}

/// Serialize to pretty JSON and write via temp file + rename so readers
/// never observe a partial file.
pub fn write_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    write_atomic_bytes(path, text.as_bytes())
}

pub fn write_atomic_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default(),
        std::process::id()
    ));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
