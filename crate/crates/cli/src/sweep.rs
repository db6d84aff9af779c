//! Grid evaluation. Points are evaluated in parallel and collected in order,
//! so results do not depend on the thread count.

use mkdv_core::curve::{curve_explicit_slice, curve_quadrature_slice, CurveSlice, GridSpec};
use mkdv_core::solutions::{pole_flags, FieldKind, SolutionField};
use mkdv_core::{SolitonParams, Variant};
use rayon::prelude::*;

use crate::error::CliResult;

/// One field value on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Pole,
    /// `θ` where the two determinants have opposite signs; the value is
    /// `2 log|ρ_a/ρ_b|`.
    Branch(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub x: f64,
    pub t: f64,
    pub theta: Cell,
    pub kappa: Cell,
}

/// `θ` and `κ` on every slice of the grid.
pub fn profiles(params: &SolitonParams, grid: &GridSpec) -> CliResult<Vec<Vec<ProfileRow>>> {
    let field = SolutionField::new(params.clone(), FieldKind::CurvatureKappa);
    let xs = grid.xs();
    grid.t_values
        .par_iter()
        .map(|&t| profile_slice(&field, &xs, t, grid.y0))
        .collect()
}

fn profile_slice(field: &SolutionField, xs: &[f64], t: f64, y: f64) -> CliResult<Vec<ProfileRow>> {
    let statuses = xs
        .par_iter()
        .map(|&x| field.status(x, t, y))
        .collect::<Result<Vec<_>, _>>()?;
    let flags = pole_flags(&statuses);
    let rows = xs
        .par_iter()
        .zip(statuses.par_iter().zip(flags.par_iter()))
        .map(|(&x, (status, &pole))| {
            if pole {
                return Ok(ProfileRow {
                    x,
                    t,
                    theta: Cell::Pole,
                    kappa: Cell::Pole,
                });
            }
            let Some((theta, kappa)) = field.theta_kappa(x, t, y)? else {
                unreachable!("pointwise poles are already flagged")
            };
            Ok(ProfileRow {
                x,
                t,
                theta: if status.is_branch() {
                    Cell::Branch(theta)
                } else {
                    Cell::Value(theta)
                },
                kappa: Cell::Value(kappa),
            })
        })
        .collect::<Result<Vec<_>, mkdv_core::Error>>()?;
    Ok(rows)
}

/// Curve slices: closed form for the singular class, quadrature otherwise.
pub fn curves(params: &SolitonParams, grid: &GridSpec) -> CliResult<Vec<CurveSlice>> {
    grid.t_values
        .par_iter()
        .map(|&t| match params.variant {
            Variant::Singular => curve_explicit_slice(params, grid, t),
            Variant::Regular => curve_quadrature_slice(params, grid, t),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(Into::into)
}
