//! Residual checks behind `mkdv verify`.
//!
//! Sample points are drawn sequentially from a seeded generator and then
//! evaluated in parallel; every check reduces with `max`, so the report is
//! independent of the thread count.

use mkdv_core::bilinear::{bilinear_residual, BilinearEquation};
use mkdv_core::curve::{fd_tangent, GridSpec};
use mkdv_core::positivity::{
    cauchy_binet_expansion, cauchy_binet_sum, det_f, random_valid_draw, random_violating_draw, GeneralEntryParams,
};
use mkdv_core::solutions::{FieldKind, SolutionField};
use mkdv_core::{Error, SolitonParams, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::VerifyConfig;
use crate::error::CliResult;

pub const SCHEMA_VERSION: u32 = 1;

/// Step of the finite-difference tangent in the unit-speed check.
pub const TANGENT_STEP: f64 = 1e-4;
pub const UNIT_SPEED_TOLERANCE: f64 = 1e-5;
pub const CAUCHY_BINET_TOLERANCE: f64 = 1e-10;
/// Largest `N` of the positivity batch.
pub const POSITIVITY_MAX_N: usize = 6;
/// Constraint-violating draws of the sensitivity check.
pub const VIOLATING_DRAWS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(id: impl Into<String>, samples: usize, max_residual: f64, tolerance: f64) -> Self {
        Check {
            id: id.into(),
            samples,
            max_residual,
            tolerance,
            // a NaN residual fails
            pass: samples > 0 && max_residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub variant: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<28} n={:<5} max={:.3e} tol={:.1e}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.samples,
                c.max_residual,
                c.tolerance
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!(
            "{}: {} of {} checks passed\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len() - failed,
            self.checks.len()
        ));
        out
    }
}

/// Uniform points of the sampled window: all of `[x_min, x_max]` and the
/// span of the configured times.
fn sample_points(rng: &mut ChaCha8Rng, grid: &GridSpec, count: usize) -> Vec<(f64, f64)> {
    let t_lo = grid.t_values.iter().copied().fold(f64::INFINITY, f64::min);
    let t_hi = grid.t_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..count)
        .map(|_| {
            let x = rng.gen_range(grid.x_min..=grid.x_max);
            let t = if t_hi > t_lo { rng.gen_range(t_lo..=t_hi) } else { t_lo };
            (x, t)
        })
        .collect()
}

/// Up to `count` points away from poles, drawn in batches.
fn non_pole_points(
    rng: &mut ChaCha8Rng,
    field: &SolutionField,
    grid: &GridSpec,
    count: usize,
) -> CliResult<Vec<(f64, f64)>> {
    let mut kept = Vec::with_capacity(count);
    for _ in 0..100 {
        if kept.len() >= count {
            break;
        }
        let batch = sample_points(rng, grid, count);
        let poles = batch
            .par_iter()
            .map(|&(x, t)| field.status(x, t, grid.y0).map(|s| s.is_pole))
            .collect::<Result<Vec<_>, _>>()?;
        kept.extend(batch.into_iter().zip(poles).filter(|(_, p)| !p).map(|(pt, _)| pt));
    }
    kept.truncate(count);
    Ok(kept)
}

fn max_over<F>(points: &[(f64, f64)], f: F) -> CliResult<(usize, f64)>
where
    F: Fn(f64, f64) -> Result<Option<f64>, Error> + Sync,
{
    let values = points
        .par_iter()
        .map(|&(x, t)| f(x, t))
        .collect::<Result<Vec<_>, _>>()?;
    let kept: Vec<f64> = values.into_iter().flatten().collect();
    // NaN propagates as a failure instead of being dropped by f64::max
    let worst = kept.iter().fold(0.0f64, |m, &v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) });
    Ok((kept.len(), worst))
}

pub fn run(params: &SolitonParams, grid: &GridSpec, cfg: &VerifyConfig, seed: u64) -> CliResult<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = SolutionField::new(params.clone(), FieldKind::PotentialTheta);
    let y = grid.y0;
    let mut checks = Vec::new();

    let points = non_pole_points(&mut rng, &field, grid, cfg.samples)?;
    let jets = points
        .par_iter()
        .map(|&(x, t)| field.jet(x, t, y))
        .collect::<Result<Vec<_>, _>>()?;
    let live: Vec<_> = jets.iter().filter(|j| !j.is_pole()).collect();
    let worst = |f: &dyn Fn(&mkdv_core::solutions::ThetaJet) -> f64| {
        live.iter().fold(0.0f64, |m, j| {
            let v = f(j);
            if v.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(v)
            }
        })
    };
    checks.push(Check::new(
        "mkdv_residual",
        live.len(),
        worst(&|j| j.mkdv_residual().relative()),
        cfg.pde_tolerance,
    ));
    checks.push(Check::new(
        "potential_mkdv_residual",
        live.len(),
        worst(&|j| j.potential_mkdv_residual().relative()),
        cfg.pde_tolerance,
    ));
    checks.push(Check::new(
        "frame_evolution_residual",
        live.len(),
        worst(&|j| j.frame_evolution_residual().relative()),
        cfg.pde_tolerance,
    ));

    for eq in BilinearEquation::for_variant(params.variant) {
        let pts = non_pole_points(&mut rng, &field, grid, cfg.bilinear_samples)?;
        let (n, r) = max_over(&pts, |x, t| bilinear_residual(eq, params, x, t, y).map(|r| Some(r.relative_to_scale())))?;
        checks.push(Check::new(format!("bilinear_{}", eq.id()), n, r, cfg.identity_tolerance));
    }

    // ⟨T, T⟩ = 1 with a future-pointing tangent; a stencil touching a pole is skipped
    let (n, r) = max_over(&points, |x, t| match fd_tangent(params, x, t, y, TANGENT_STEP) {
        Ok((u, v)) if u + v > 0.0 => Ok(Some((u * v - 1.0).abs())),
        Ok(_) => Ok(Some(f64::INFINITY)),
        Err(Error::Pole { .. }) => Ok(None),
        Err(e) => Err(e),
    })?;
    checks.push(Check::new("unit_speed", n, r, UNIT_SPEED_TOLERANCE));

    if params.variant == Variant::Regular && params.satisfies_regularity() {
        // count of sample points where either determinant is not positive
        let (n, r) = max_over(&points, |x, t| {
            let mut bad = 0.0;
            for size in [params.rows() - 1, params.rows()] {
                let g = GeneralEntryParams::from_reduction(params, size, x, t, y)?;
                if det_f(&g)?.sign != 1 {
                    bad = 1.0;
                }
            }
            Ok(Some(bad))
        })?;
        checks.push(Check::new("reduced_determinants_positive", n, r, 0.0));
    }

    if cfg.positivity_draws > 0 {
        checks.extend(positivity_checks(&mut rng, cfg.positivity_draws)?);
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        variant: match params.variant {
            Variant::Singular => "singular".into(),
            Variant::Regular => "regular".into(),
        },
        seed,
        checks,
        pass,
    })
}

/// Random draws satisfying the positivity hypothesis (`N` cycling through
/// `1..=6`), then engineered violations that must expose a negative term.
pub fn positivity_checks(rng: &mut ChaCha8Rng, draws: usize) -> CliResult<Vec<Check>> {
    let batch: Vec<GeneralEntryParams> = (0..draws)
        .map(|i| random_valid_draw(rng, 1 + i % POSITIVITY_MAX_N))
        .collect();
    let results = batch
        .par_iter()
        .map(|d| -> Result<(f64, f64), Error> {
            let det = det_f(d)?;
            let terms = cauchy_binet_expansion(d)?;
            let all_positive = det.sign == 1 && terms.iter().all(|t| t.value.sign == 1);
            let sum = cauchy_binet_sum(&terms);
            let rel = if sum.sign == det.sign {
                (sum.logmag - det.logmag).abs().exp_m1()
            } else {
                f64::INFINITY
            };
            Ok((if all_positive { 0.0 } else { 1.0 }, rel))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let negatives = results.iter().map(|r| r.0).sum::<f64>();
    let worst_rel = results.iter().fold(0.0f64, |m, r| m.max(r.1));

    let violating: Vec<GeneralEntryParams> = (0..VIOLATING_DRAWS)
        .map(|i| random_violating_draw(rng, 1 + i % POSITIVITY_MAX_N))
        .collect();
    let mut undetected = 0.0;
    for d in &violating {
        if !cauchy_binet_expansion(d)?.iter().any(|t| t.value.sign == -1) {
            undetected += 1.0;
        }
    }

    Ok(vec![
        Check::new("positivity_terms_positive", draws, negatives, 0.0),
        Check::new("positivity_cauchy_binet", draws, worst_rel, CAUCHY_BINET_TOLERANCE),
        Check::new("positivity_violation_detected", violating.len(), undetected, 0.0),
    ])
}
