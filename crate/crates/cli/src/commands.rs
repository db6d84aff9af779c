use std::path::{Path, PathBuf};

use crate::config::{presets, Output, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{curve_csv, curve_svg, profile_csv, write_file, ProfileField};
use crate::{sweep, verify};

pub const KAPPA_CSV: &str = "kappa.csv";
pub const THETA_CSV: &str = "theta.csv";
pub const CURVE_CSV: &str = "curve.csv";
pub const CURVE_SVG: &str = "curve.svg";
pub const REPORT_JSON: &str = "verify_report.json";

fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

fn require_any(cfg: &RunConfig, owned: &[Output], command: &str) -> CliResult<()> {
    if owned.iter().any(|&o| cfg.wants(o)) {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "outputs: `{command}` writes {owned:?}, none of which is selected"
        )))
    }
}

/// κ and θ profiles. Returns the files written.
pub fn solve(cfg: &RunConfig, out: &Path) -> CliResult<Vec<PathBuf>> {
    require_any(cfg, &[Output::KappaCsv, Output::ThetaCsv], "solve")?;
    let params = cfg.params()?;
    let grid = cfg.grid()?;
    let rows = sweep::profiles(&params, &grid)?;
    ensure_dir(out)?;
    let mut written = Vec::new();
    for (output, name, field) in [
        (Output::KappaCsv, KAPPA_CSV, ProfileField::Kappa),
        (Output::ThetaCsv, THETA_CSV, ProfileField::Theta),
    ] {
        if cfg.wants(output) {
            let path = out.join(name);
            write_file(&path, &profile_csv(&rows, field))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Curve polylines as CSV and SVG.
pub fn curve(cfg: &RunConfig, out: &Path) -> CliResult<Vec<PathBuf>> {
    require_any(cfg, &[Output::CurveCsv, Output::CurveSvg], "curve")?;
    let params = cfg.params()?;
    let grid = cfg.grid()?;
    let slices = sweep::curves(&params, &grid)?;
    ensure_dir(out)?;
    let mut written = Vec::new();
    if cfg.wants(Output::CurveCsv) {
        let path = out.join(CURVE_CSV);
        write_file(&path, &curve_csv(&slices))?;
        written.push(path);
    }
    if cfg.wants(Output::CurveSvg) {
        let path = out.join(CURVE_SVG);
        write_file(&path, &curve_svg(&slices))?;
        written.push(path);
    }
    Ok(written)
}

/// Runs every residual check. The report is written before a failure is
/// turned into [`CliError::Verification`].
pub fn verify(cfg: &RunConfig, out: &Path, seed: u64) -> CliResult<verify::Report> {
    let params = cfg.params()?;
    let grid = cfg.grid()?;
    let report = verify::run(&params, &grid, &cfg.verify, seed)?;
    print!("{}", report.summary());
    if cfg.wants(Output::ResidualReport) {
        ensure_dir(out)?;
        let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        write_file(&out.join(REPORT_JSON), &json)?;
    }
    if report.pass {
        Ok(report)
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
        Err(CliError::Verification(format!("failed checks: {}", failed.join(", "))))
    }
}

/// The preset of each figure directory, in output order.
pub fn figure_presets() -> Vec<(&'static str, &'static str, RunConfig)> {
    vec![
        ("fig1", "config.json", presets::fig1()),
        ("fig2", "config.json", presets::fig2()),
        ("fig3", "config.json", presets::fig3()),
        ("fig4", "config.json", presets::fig4()),
        ("fig5", "config_profiles.json", presets::fig5_profiles()),
        ("fig5", "config_curves.json", presets::fig5_curves()),
    ]
}

/// Writes every figure dataset under `out/figN/`, each next to the config
/// that reproduces it.
pub fn figures(out: &Path, seed: u64) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (dir, config_name, mut cfg) in figure_presets() {
        cfg.seed = Some(seed);
        let dir = out.join(dir);
        ensure_dir(&dir)?;
        let config_path = dir.join(config_name);
        let json = serde_json::to_string_pretty(&cfg).expect("config serializes") + "\n";
        write_file(&config_path, &json)?;
        written.push(config_path);
        if cfg.wants(Output::KappaCsv) || cfg.wants(Output::ThetaCsv) {
            written.extend(solve(&cfg, &dir)?);
        }
        if cfg.wants(Output::CurveCsv) || cfg.wants(Output::CurveSvg) {
            written.extend(curve(&cfg, &dir)?);
        }
    }
    Ok(written)
}
