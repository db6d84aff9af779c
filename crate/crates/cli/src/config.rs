//! JSON run configuration.
//!
//! Physical parameters (`p`, `alpha`, `beta`) have no defaults. Grid and
//! verification settings fall back to the values documented on each field.

use std::collections::BTreeSet;
use std::path::Path;

use mkdv_core::curve::GridSpec;
use mkdv_core::{SolitonParams, Variant};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    Singular,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    KappaCsv,
    ThetaCsv,
    CurveCsv,
    CurveSvg,
    ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Default −20.
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    /// Default 20.
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    /// Default 2001.
    #[serde(default = "default_nx")]
    pub nx: usize,
    pub t_values: Vec<f64>,
    /// Default 0.
    #[serde(default)]
    pub y0: f64,
    /// Base point of the regular-class quadrature; defaults to `x_min`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
}

fn default_x_min() -> f64 {
    -20.0
}
fn default_x_max() -> f64 {
    20.0
}
fn default_nx() -> usize {
    2001
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Random points per residual check. Default 200.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Random points per bilinear equation. Default 100.
    #[serde(default = "default_bilinear_samples")]
    pub bilinear_samples: usize,
    /// Random draws of the positivity batch. Default 1000; 0 skips it.
    #[serde(default = "default_positivity_draws")]
    pub positivity_draws: usize,
    /// Default 1e-6.
    #[serde(default = "default_pde_tolerance")]
    pub pde_tolerance: f64,
    /// Default 1e-8.
    #[serde(default = "default_identity_tolerance")]
    pub identity_tolerance: f64,
}

fn default_samples() -> usize {
    200
}
fn default_bilinear_samples() -> usize {
    100
}
fn default_positivity_draws() -> usize {
    1000
}
fn default_pde_tolerance() -> f64 {
    1e-6
}
fn default_identity_tolerance() -> f64 {
    1e-8
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples: default_samples(),
            bilinear_samples: default_bilinear_samples(),
            positivity_draws: default_positivity_draws(),
            pde_tolerance: default_pde_tolerance(),
            identity_tolerance: default_identity_tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub variant: VariantName,
    #[serde(default)]
    pub k: i32,
    pub p: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Overrides the Galilean constant `a` of the regular class. Any value
    /// other than `p_{N+1}^{-2}` breaks the solution; meant for negative controls.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub galilean_a: Option<f64>,
    pub grid: GridConfig,
    /// Files to write; each subcommand picks the ones it owns. Defaults to all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<BTreeSet<Output>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub verify: VerifyConfig,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.params()?;
        cfg.grid()?;
        if cfg.outputs.as_ref().is_some_and(|o| o.is_empty()) {
            return Err(CliError::Config("outputs: must not be empty".into()));
        }
        Ok(cfg)
    }

    pub fn params(&self) -> CliResult<SolitonParams> {
        let named = |e: mkdv_core::Error| CliError::Config(format!("p/alpha/beta: {e}"));
        let params = match self.variant {
            VariantName::Singular => {
                if self.galilean_a.is_some() {
                    return Err(CliError::Config("galilean_a: only the regular class has a Galilean constant".into()));
                }
                SolitonParams::singular(self.k, self.p.clone(), self.alpha.clone(), self.beta.clone()).map_err(named)?
            }
            VariantName::Regular => {
                let p = SolitonParams::regular(self.k, self.p.clone(), self.alpha.clone(), self.beta.clone()).map_err(named)?;
                match self.galilean_a {
                    Some(a) if !a.is_finite() || a == 0.0 => {
                        return Err(CliError::Config(format!("galilean_a: must be finite and nonzero, got {a}")))
                    }
                    Some(a) => p.with_galilean_constant(a),
                    None => p,
                }
            }
        };
        Ok(params)
    }

    pub fn grid(&self) -> CliResult<GridSpec> {
        let g = &self.grid;
        if g.t_values.is_empty() {
            return Err(CliError::Config("grid.t_values: at least one time is required".into()));
        }
        let spec = GridSpec::new(g.x_min, g.x_max, g.nx, g.t_values.clone())
            .map_err(|e| CliError::Config(format!("grid: {e}")))?
            .with_y0(g.y0)
            .with_x0(g.x0.unwrap_or(g.x_min));
        spec.validate().map_err(|e| CliError::Config(format!("grid: {e}")))?;
        Ok(spec)
    }

    pub fn variant(&self) -> Variant {
        match self.variant {
            VariantName::Singular => Variant::Singular,
            VariantName::Regular => Variant::Regular,
        }
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.as_ref().is_none_or(|o| o.contains(&output))
    }
}

/// Preset configurations `fig1` to `fig5`.
pub mod presets {
    use super::*;

    fn grid(t_values: &[f64]) -> GridConfig {
        GridConfig {
            x_min: default_x_min(),
            x_max: default_x_max(),
            nx: default_nx(),
            t_values: t_values.to_vec(),
            y0: 0.0,
            x0: None,
        }
    }

    fn config(variant: VariantName, p: &[f64], alpha: &[f64], beta: &[f64], t_values: &[f64], outputs: &[Output]) -> RunConfig {
        RunConfig {
            variant,
            k: 0,
            p: p.to_vec(),
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
            galilean_a: None,
            grid: grid(t_values),
            outputs: Some(outputs.iter().copied().collect()),
            seed: None,
            verify: VerifyConfig::default(),
        }
    }

    const SINGULAR_P: [f64; 2] = [0.3, 0.9];
    const SINGULAR_ALPHA: [f64; 2] = [1.0, -1.0];
    const SINGULAR_BETA: [f64; 2] = [1.0, 1.0];
    const REGULAR_P: [f64; 3] = [0.5, 0.7, 0.9];
    const REGULAR_ALPHA: [f64; 3] = [1.0, 1.0, 1.0];

    /// Singular profiles.
    pub fn fig1() -> RunConfig {
        config(
            VariantName::Singular,
            &SINGULAR_P,
            &SINGULAR_ALPHA,
            &SINGULAR_BETA,
            &[-7.0, 0.0, 7.0],
            &[Output::KappaCsv, Output::ThetaCsv],
        )
    }

    /// Singular curves.
    pub fn fig2() -> RunConfig {
        config(
            VariantName::Singular,
            &SINGULAR_P,
            &SINGULAR_ALPHA,
            &SINGULAR_BETA,
            &[-7.0, 0.0, 7.0],
            &[Output::CurveCsv, Output::CurveSvg],
        )
    }

    /// Regular profiles with `β₃ = 0`.
    pub fn fig3() -> RunConfig {
        config(
            VariantName::Regular,
            &REGULAR_P,
            &REGULAR_ALPHA,
            &[1.0, -1.0, 0.0],
            &[-30.0, 0.0, 30.0],
            &[Output::KappaCsv, Output::ThetaCsv],
        )
    }

    /// Regular curves with `β₃ = 0`.
    pub fn fig4() -> RunConfig {
        config(
            VariantName::Regular,
            &REGULAR_P,
            &REGULAR_ALPHA,
            &[1.0, -1.0, 0.0],
            &[-18.0, -5.0, 8.0],
            &[Output::CurveCsv, Output::CurveSvg],
        )
    }

    /// Regular profiles with `β₃ = 1`.
    pub fn fig5_profiles() -> RunConfig {
        config(
            VariantName::Regular,
            &REGULAR_P,
            &REGULAR_ALPHA,
            &[1.0, -1.0, 1.0],
            &[-30.0, 0.0, 30.0],
            &[Output::KappaCsv, Output::ThetaCsv],
        )
    }

    /// Regular curves with `β₃ = 1`.
    pub fn fig5_curves() -> RunConfig {
        config(
            VariantName::Regular,
            &REGULAR_P,
            &REGULAR_ALPHA,
            &[1.0, -1.0, 1.0],
            &[-15.0, 0.0, 15.0],
            &[Output::CurveCsv, Output::CurveSvg],
        )
    }
}
