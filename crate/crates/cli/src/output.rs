//! CSV and SVG emission. Floats use Rust's shortest round-trip exponent
//! form, so identical inputs always give identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use mkdv_core::curve::CurveSlice;

use crate::error::{CliError, CliResult};
use crate::sweep::{Cell, ProfileRow};

pub const PROFILE_HEADER: &str = "x,t,value,pole";
pub const CURVE_HEADER: &str = "x,t,gamma1,gamma2,theta,kappa,pole";

pub fn fmt(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileField {
    Theta,
    Kappa,
}

/// `pole` is 0 for a regular value, 1 at a pole (empty value) and 2 where
/// `θ` is taken across a sign change of `ρ_a/ρ_b` (value is `2 log|ρ_a/ρ_b|`).
pub fn profile_csv(slices: &[Vec<ProfileRow>], field: ProfileField) -> String {
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for row in slices.iter().flatten() {
        let cell = match field {
            ProfileField::Theta => row.theta,
            ProfileField::Kappa => row.kappa,
        };
        let (value, flag) = match cell {
            Cell::Value(v) => (fmt(v), 0),
            Cell::Pole => (String::new(), 1),
            Cell::Branch(v) => (fmt(v), 2),
        };
        let _ = writeln!(out, "{},{},{},{}", fmt(row.x), fmt(row.t), value, flag);
    }
    out
}

pub fn curve_csv(slices: &[CurveSlice]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for slice in slices {
        for s in &slice.samples {
            if s.pole {
                let _ = writeln!(out, "{},{},,,,,1", fmt(s.x), fmt(slice.t));
            } else {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},0",
                    fmt(s.x),
                    fmt(slice.t),
                    fmt(s.gamma.v1),
                    fmt(s.gamma.v2),
                    fmt(s.frame.theta),
                    fmt(s.kappa)
                );
            }
        }
    }
    out
}

const PANEL: f64 = 360.0;
const MARGIN: f64 = 20.0;

/// Display coordinates of one slice, split into pole-free components.
///
/// Each slice is boosted by the hyperbolic angle of its overall chord so that
/// the chord is horizontal. A boost is a Lorentzian motion, so the displayed
/// curve is the same curve up to the freedom the representation formula
/// leaves open. Without it, regular curves whose tangent angle has drifted
/// far from zero would collapse onto a light ray.
fn display_components(slice: &CurveSlice) -> Vec<Vec<(f64, f64)>> {
    let (mut su, mut sv) = (0.0, 0.0);
    for &(du, dv) in &slice.null_steps {
        if du.is_finite() && dv.is_finite() {
            su += du;
            sv += dv;
        }
    }
    let phi = if su > 0.0 && sv > 0.0 { 0.5 * (su / sv).ln() } else { 0.0 };
    let (shrink, stretch) = ((-phi).exp(), phi.exp());
    slice
        .segments()
        .into_iter()
        .map(|seg| {
            slice.samples[seg]
                .iter()
                .map(|s| {
                    let (u, v) = s.gamma.null_coords();
                    let (u, v) = (u * shrink, v * stretch);
                    (0.5 * (u + v), 0.5 * (u - v))
                })
                .collect()
        })
        .collect()
}

/// Bounds of the central 98 % of the points, padded by 10 %. Samples next to
/// a pole run off to infinity and would otherwise flatten the picture.
fn robust_bounds(points: &[(f64, f64)]) -> (f64, f64, f64, f64) {
    let quantiles = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        let lo = v[(v.len() - 1) / 100];
        let hi = v[(v.len() - 1) - (v.len() - 1) / 100];
        let pad = 0.1 * (hi - lo).max(1e-9);
        (lo - pad, hi + pad)
    };
    let (x0, x1) = quantiles(points.iter().map(|p| p.0).collect());
    let (y0, y1) = quantiles(points.iter().map(|p| p.1).collect());
    (x0, x1, y0, y1)
}

/// One panel per time slice, each fitted to its own data with equal axis
/// scales, polylines broken at poles.
pub fn curve_svg(slices: &[CurveSlice]) -> String {
    let width = slices.len() as f64 * (PANEL + MARGIN) + MARGIN;
    let height = PANEL + 2.0 * MARGIN + 20.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.0} {height:.0}\" width=\"{width:.0}\" height=\"{height:.0}\">"
    );
    out.push_str("<!-- each panel: one time slice, boosted so its chord is horizontal; axes gamma1 (right), gamma2 (up) -->\n");
    let _ = writeln!(out, "<rect width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>");
    for (i, slice) in slices.iter().enumerate() {
        let left = MARGIN + i as f64 * (PANEL + MARGIN);
        let top = MARGIN + 20.0;
        let _ = writeln!(out, "<g id=\"t{i}\">");
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">t = {}</text>",
            left + PANEL / 2.0,
            MARGIN + 8.0,
            slice.t
        );
        let _ = writeln!(
            out,
            "<rect x=\"{left:.1}\" y=\"{top:.1}\" width=\"{PANEL:.1}\" height=\"{PANEL:.1}\" fill=\"none\" stroke=\"#999\"/>"
        );
        let components = display_components(slice);
        let all: Vec<(f64, f64)> = components.iter().flatten().copied().collect();
        if all.is_empty() {
            out.push_str("</g>\n");
            continue;
        }
        let (x0, x1, y0, y1) = robust_bounds(&all);
        let scale = PANEL / (x1 - x0).max(y1 - y0);
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let map = |(x, y): (f64, f64)| {
            (
                left + PANEL / 2.0 + (x - cx) * scale,
                top + PANEL / 2.0 - (y - cy) * scale,
            )
        };
        let _ = writeln!(
            out,
            "<clipPath id=\"clip{i}\"><rect x=\"{left:.1}\" y=\"{top:.1}\" width=\"{PANEL:.1}\" height=\"{PANEL:.1}\"/></clipPath>"
        );
        let _ = writeln!(out, "<g clip-path=\"url(#clip{i})\">");
        let (ax, ay) = map((0.0, 0.0));
        let _ = writeln!(
            out,
            "<line x1=\"{left:.1}\" y1=\"{ay:.2}\" x2=\"{:.1}\" y2=\"{ay:.2}\" stroke=\"#ccc\"/>",
            left + PANEL
        );
        let _ = writeln!(
            out,
            "<line x1=\"{ax:.2}\" y1=\"{top:.1}\" x2=\"{ax:.2}\" y2=\"{:.1}\" stroke=\"#ccc\"/>",
            top + PANEL
        );
        for component in &components {
            if component.len() < 2 {
                continue;
            }
            out.push_str("<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" points=\"");
            for (j, &p) in component.iter().enumerate() {
                let (x, y) = map(p);
                // keep far-off samples finite and bounded; the clip hides them
                let (x, y) = (x.clamp(-1e6, 1e6), y.clamp(-1e6, 1e6));
                if j > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{x:.2},{y:.2}");
            }
            out.push_str("\"/>\n");
        }
        out.push_str("</g>\n</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
