//! Run configuration: JSON document with strict key checking, overridden
//! field-by-field by command-line flags.

use actionrate::scan::{DataCase, ScanGrid};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub gamma: f64,
    pub allow_isothermal: bool,
    pub data: DataConfig,
    pub window: WindowConfig,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DataConfig {
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub v_minus: f64,
    pub v_plus: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct WindowConfig {
    pub l3: f64,
    pub t_max: f64,
    pub pad: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub rho1_count: usize,
    pub eps2_count: usize,
    pub eps2_max: f64,
    pub gammas: Vec<f64>,
    pub cases: Vec<DataCase>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub root: f64,
    pub residual: f64,
    pub rho_star: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            gamma: 2.0,
            allow_isothermal: false,
            data: DataConfig::default(),
            window: WindowConfig::default(),
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
        }
    }
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            rho_minus: 1.0,
            rho_plus: 1.0,
            v_minus: 1.0,
            v_plus: -1.0,
        }
    }
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            l3: 0.5,
            t_max: 1.0,
            pad: 0.1,
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = ScanGrid::default();
        GridConfig {
            rho1_count: g.rho1_count,
            eps2_count: g.eps2_count,
            eps2_max: g.eps2_max,
            gammas: g.gammas,
            cases: g.cases,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: 1e-12,
            residual: 1e-10,
            rho_star: 1e-9,
        }
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("."),
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| format!("malformed config {}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, tol) in [
            ("tolerances.root", self.tolerances.root),
            ("tolerances.residual", self.tolerances.residual),
            ("tolerances.rho_star", self.tolerances.rho_star),
        ] {
            if !(tol > 0.0) {
                return Err(format!("{name} must be positive, got {tol}"));
            }
        }
        if !(self.window.l3 > 0.0 && self.window.t_max > 0.0 && self.window.pad >= 0.0) {
            return Err("window parameters must be positive (pad nonnegative)".into());
        }
        if self.grid.rho1_count == 0 || self.grid.eps2_count == 0 || !(self.grid.eps2_max > 0.0) {
            return Err("grid counts must be positive".into());
        }
        Ok(())
    }

    pub fn scan_grid(&self) -> ScanGrid {
        ScanGrid {
            rho1_count: self.grid.rho1_count,
            eps2_count: self.grid.eps2_count,
            eps2_max: self.grid.eps2_max,
            gammas: self.grid.gammas.clone(),
            cases: self.grid.cases.clone(),
            allow_isothermal: self.allow_isothermal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let config = RunConfig::default();
        config.validate().unwrap();
        let text = serde_json::to_string(&config).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"gamma": 2.0, "unknown_knob": 1}"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn bad_tolerance_rejected() {
        let text = r#"{"tolerances": {"root": -1e-12}}"#;
        let config: RunConfig = serde_json::from_str(text).unwrap();
        assert!(config.validate().is_err());
    }
}
