//! Hirota bilinear operators and residuals of the bilinear systems solved by
//! the two determinant classes.
//!
//! ```text
//! D_x^a D_t^b D_y^c f·g = Σ C(a,i) C(b,j) C(c,l) (−1)^{(a−i)+(b−j)+(c−l)} ∂^{(i,j,l)}f ∂^{(a−i,b−j,c−l)}g
//! ```
//!
//! The underlying Toda / mKP forms carry an extra variable `z`. Under the
//! reduction `q_i = −p_i` every determinant satisfies `∂_z ρ = ρ Σ p_i²`, so
//! each `D_z` term collapses to a constant:
//!
//! * `D_z σ(k+1)·σ(k) = 0` (same row sum on both sides) gives `c = 0` in the
//!   singular `(D_x² − c)` and `(D_x³ − D_t − 3c D_x)` equations;
//! * `D_v h_{N+1}·h_N = p_{N+1}² h_{N+1} h_N` (one extra row) gives the
//!   constant `r² = p_{N+1}²` of the regular equations.
//!
//! Residuals are reported relative to the largest expanded term, which keeps
//! them meaningful where `τ` is exponentially large or small.

use crate::error::{Error, Result};
use crate::solutions::Residual;
use crate::tau::{Casorati, DerivKey, SolitonParams, Variant};

/// Anything that can hand out partial derivatives in a common scaled unit.
pub trait PartialSource {
    fn partial(&self, key: DerivKey) -> Result<f64>;
}

impl<S: PartialSource + ?Sized> PartialSource for &S {
    fn partial(&self, key: DerivKey) -> Result<f64> {
        (**self).partial(key)
    }
}

/// A Casorati determinant times a fixed positive factor.
pub struct ScaledRho<'a> {
    cas: Casorati<'a>,
    factor: f64,
}

impl<'a> ScaledRho<'a> {
    pub fn new(cas: Casorati<'a>, factor: f64) -> Self {
        Self { cas, factor }
    }
}

impl PartialSource for ScaledRho<'_> {
    fn partial(&self, key: DerivKey) -> Result<f64> {
        Ok(self.factor * self.cas.scaled(key)?)
    }
}

/// `e^{xy} ∂^key (e^{−xy} ρ)`: the singular τ function with its common
/// `e^{−xy}` factored out (it multiplies every term of a bilinear equation).
pub struct GaugedTau<'a> {
    rho: ScaledRho<'a>,
    x: f64,
    y: f64,
}

impl PartialSource for GaugedTau<'_> {
    fn partial(&self, key: DerivKey) -> Result<f64> {
        if key.dx > 1 && key.dy > 0 {
            return Err(Error::Capability(key));
        }
        let r = |dx: u8, dy: u8| self.rho.partial(DerivKey::new(dx, key.dt, dy));
        let (x, y) = (self.x, self.y);
        match (key.dx, key.dy) {
            (_, 0) => {
                // ∂_x^n (e^{−xy} ρ) = e^{−xy} Σ C(n,m) (−y)^{n−m} ∂_x^m ρ
                let n = key.dx;
                (0..=n).try_fold(0.0, |acc, m| {
                    Ok(acc + binomial(n, m) * (-y).powi(i32::from(n - m)) * r(m, 0)?)
                })
            }
            (0, 1) => Ok(r(0, 1)? - x * r(0, 0)?),
            (1, 1) => Ok(r(1, 1)? - y * r(0, 1)? - x * r(1, 0)? + (x * y - 1.0) * r(0, 0)?),
            _ => Err(Error::Capability(key)),
        }
    }
}

fn binomial(n: u8, k: u8) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Hirota operator `D_x^dx D_t^dt D_y^dy` applied to `f·g`, returned as the
/// sum of its expanded terms together with the largest term magnitude.
pub fn hirota(op: DerivKey, f: &dyn PartialSource, g: &dyn PartialSource) -> Result<Residual> {
    let mut terms = Vec::new();
    for i in 0..=op.dx {
        for j in 0..=op.dt {
            for l in 0..=op.dy {
                let coeff = binomial(op.dx, i) * binomial(op.dt, j) * binomial(op.dy, l);
                let flips = (op.dx - i) + (op.dt - j) + (op.dy - l);
                let sign = if flips.is_multiple_of(2) { 1.0 } else { -1.0 };
                let fk = f.partial(DerivKey::new(i, j, l))?;
                let gk = g.partial(DerivKey::new(op.dx - i, op.dt - j, op.dy - l))?;
                terms.push(sign * coeff * fk * gk);
            }
        }
    }
    Ok(Residual::from_terms(&terms))
}

/// Combines several already-expanded pieces (each scaled by a coefficient)
/// into one residual whose scale is the largest term among all pieces.
fn combine(pieces: &[(f64, Residual)]) -> Residual {
    Residual {
        value: pieces.iter().map(|(c, r)| c * r.value).sum(),
        scale: pieces
            .iter()
            .fold(0.0f64, |m, (c, r)| m.max((c * r.scale).abs())),
    }
}

fn product(value: f64) -> Residual {
    Residual {
        value,
        scale: value.abs(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BilinearEquation {
    /// `D_x D_y τ·τ = −2 τ̄²` (singular).
    CBi1,
    /// `D_x D_y τ̄·τ̄ = −2 τ²` (singular).
    CBi1b,
    /// `(D_x² − c) τ·τ̄ = 0`.
    CBi2,
    /// `(D_x³ − D_t − 3c D_x) τ·τ̄ = 0`.
    CBi3,
    /// `(D_x² − r²) ρ_{N+1}·ρ_N = 0` (regular).
    MkpRed1,
    /// `(D_x³ − D_t − 3r² D_x) ρ_{N+1}·ρ_N = 0` (regular).
    MkpRed2,
}

impl BilinearEquation {
    pub const ALL: [BilinearEquation; 6] = [
        Self::CBi1,
        Self::CBi1b,
        Self::CBi2,
        Self::CBi3,
        Self::MkpRed1,
        Self::MkpRed2,
    ];

    pub fn applies_to(&self, variant: Variant) -> bool {
        match self {
            Self::CBi1 | Self::CBi1b => variant == Variant::Singular,
            Self::CBi2 | Self::CBi3 => true,
            Self::MkpRed1 | Self::MkpRed2 => variant == Variant::Regular,
        }
    }

    /// Equations asserted for a variant.
    pub fn for_variant(variant: Variant) -> Vec<BilinearEquation> {
        Self::ALL.into_iter().filter(|e| e.applies_to(variant)).collect()
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::CBi1 => "cbi1",
            Self::CBi1b => "cbi1b",
            Self::CBi2 => "cbi2",
            Self::CBi3 => "cbi3",
            Self::MkpRed1 => "mkp_red1",
            Self::MkpRed2 => "mkp_red2",
        }
    }

    /// The constant `c` (or `r²`) entering the equation for these parameters.
    pub fn constant(&self, params: &SolitonParams) -> f64 {
        params.c
    }
}

/// The two τ functions of a solution class in a shared scaled unit.
enum Pair<'a> {
    Singular { tau: GaugedTau<'a>, tau_bar: GaugedTau<'a> },
    Regular { rho_n: ScaledRho<'a>, rho_n1: ScaledRho<'a> },
}

fn build_pair(params: &SolitonParams, x: f64, t: f64, y: f64) -> Result<Pair<'_>> {
    let (n, k) = (params.n, params.k);
    match params.variant {
        Variant::Singular => {
            let a = Casorati::new(params, n, k, x, t, y)?;
            let b = Casorati::new(params, n, k + 1, x, t, y)?;
            // τ_N(k) = e^{−xy} ρ_N(k) / ∏ p_i^k; the shared e^{−xy} and
            // e^{scale_a} are dropped, the relative factor 1/∏p_i is kept.
            let prod_p: f64 = params.p.iter().product();
            let rel = (b.log_scale() - a.log_scale()).exp() / prod_p;
            Ok(Pair::Singular {
                tau: GaugedTau {
                    rho: ScaledRho::new(a, 1.0),
                    x,
                    y,
                },
                tau_bar: GaugedTau {
                    rho: ScaledRho::new(b, rel),
                    x,
                    y,
                },
            })
        }
        Variant::Regular => {
            let a = Casorati::new(params, n, k, x, t, y)?;
            let b = Casorati::new(params, n + 1, k, x, t, y)?;
            let rel = (b.log_scale() - a.log_scale()).exp();
            Ok(Pair::Regular {
                rho_n: ScaledRho::new(a, 1.0),
                rho_n1: ScaledRho::new(b, rel),
            })
        }
    }
}

/// Residual of `eq` at a point. Use [`Residual::relative_to_scale`] for the
/// relative residual.
pub fn bilinear_residual(eq: BilinearEquation, params: &SolitonParams, x: f64, t: f64, y: f64) -> Result<Residual> {
    if !eq.applies_to(params.variant) {
        return Err(Error::NotApplicable(format!(
            "{} does not apply to the {:?} class",
            eq.id(),
            params.variant
        )));
    }
    let pair = build_pair(params, x, t, y)?;
    let c = eq.constant(params);
    let (f, g): (&dyn PartialSource, &dyn PartialSource) = match &pair {
        Pair::Singular { tau, tau_bar } => (tau, tau_bar),
        Pair::Regular { rho_n, rho_n1 } => (rho_n, rho_n1),
    };
    match eq {
        BilinearEquation::CBi1 => {
            let lhs = hirota(DerivKey::new(1, 0, 1), f, f)?;
            let rhs = g.partial(DerivKey::NONE)?;
            Ok(combine(&[(1.0, lhs), (2.0, product(rhs * rhs))]))
        }
        BilinearEquation::CBi1b => {
            let lhs = hirota(DerivKey::new(1, 0, 1), g, g)?;
            let rhs = f.partial(DerivKey::NONE)?;
            Ok(combine(&[(1.0, lhs), (2.0, product(rhs * rhs))]))
        }
        BilinearEquation::CBi2 => {
            let d2 = hirota(DerivKey::x(2), f, g)?;
            let fg = product(f.partial(DerivKey::NONE)? * g.partial(DerivKey::NONE)?);
            Ok(combine(&[(1.0, d2), (-c, fg)]))
        }
        BilinearEquation::CBi3 => cubic(f, g, c),
        BilinearEquation::MkpRed1 => {
            let d2 = hirota(DerivKey::x(2), g, f)?;
            let fg = product(f.partial(DerivKey::NONE)? * g.partial(DerivKey::NONE)?);
            Ok(combine(&[(1.0, d2), (-c, fg)]))
        }
        BilinearEquation::MkpRed2 => cubic(g, f, c),
    }
}

/// `(D_x³ − D_t − 3c D_x) f·g`.
fn cubic(f: &dyn PartialSource, g: &dyn PartialSource, c: f64) -> Result<Residual> {
    let d3 = hirota(DerivKey::x(3), f, g)?;
    let dt = hirota(DerivKey::T, f, g)?;
    let d1 = hirota(DerivKey::X, f, g)?;
    Ok(combine(&[(1.0, d3), (-1.0, dt), (-3.0 * c, d1)]))
}

impl Residual {
    /// `|value| / scale`, zero when every term vanishes.
    pub fn relative_to_scale(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.value.abs() / self.scale
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Polynomial test source: f(x, t, y) given by closed-form partials.
    struct Poly(fn(DerivKey) -> f64);

    impl PartialSource for Poly {
        fn partial(&self, key: DerivKey) -> Result<f64> {
            Ok((self.0)(key))
        }
    }

    fn f_partials(k: DerivKey) -> f64 {
        // f = e^{2x} (1 + y) + t, at x = t = y = 0
        match (k.dx, k.dt, k.dy) {
            (0, 0, 0) => 1.0,
            (n, 0, 0) => 2f64.powi(i32::from(n)),
            (n, 0, 1) => 2f64.powi(i32::from(n)),
            (0, 1, 0) => 1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn odd_operators_vanish_on_equal_arguments() {
        let f = Poly(f_partials);
        assert_eq!(hirota(DerivKey::X, &f, &f).unwrap().value, 0.0);
        assert_eq!(hirota(DerivKey::x(3), &f, &f).unwrap().value, 0.0);
        assert_eq!(hirota(DerivKey::T, &f, &f).unwrap().value, 0.0);
    }

    #[test]
    fn second_order_expansions() {
        let f = Poly(f_partials);
        // D_x² f·f = 2(f_xx f − f_x²) = 2(4 − 4) = 0
        assert_eq!(hirota(DerivKey::x(2), &f, &f).unwrap().value, 0.0);
        let g = Poly(|k| match (k.dx, k.dt, k.dy) {
            (0, 0, 0) => 3.0,
            (1, 0, 0) => 5.0,
            (2, 0, 0) => 7.0,
            (0, 0, 1) => 11.0,
            (1, 0, 1) => 13.0,
            _ => 0.0,
        });
        // D_x² f·g = f_xx g − 2 f_x g_x + f g_xx
        assert_eq!(hirota(DerivKey::x(2), &f, &g).unwrap().value, 4.0 * 3.0 - 2.0 * 2.0 * 5.0 + 7.0);
        // D_x D_y f·g = f_xy g − f_x g_y − f_y g_x + f g_xy
        let expect = 2.0 * 3.0 - 2.0 * 11.0 - 1.0 * 5.0 + 13.0;
        assert_eq!(hirota(DerivKey::new(1, 0, 1), &f, &g).unwrap().value, expect);
    }

    #[test]
    fn gauged_tau_partials_match_product_rule() {
        let s = SolitonParams::singular(0, vec![0.3, 0.9], vec![1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let (x, t, y) = (0.7, 0.2, -0.4);
        let cas = Casorati::new(&s, 2, 0, x, t, y).unwrap();
        let tau = GaugedTau {
            rho: ScaledRho::new(cas.clone(), 1.0),
            x,
            y,
        };
        let r = |k| cas.scaled(k).unwrap();
        let expect_xx = r(DerivKey::x(2)) - 2.0 * y * r(DerivKey::X) + y * y * r(DerivKey::NONE);
        let got = tau.partial(DerivKey::x(2)).unwrap();
        assert!((got - expect_xx).abs() <= 1e-14 * expect_xx.abs().max(1.0));
        assert!(tau.partial(DerivKey::new(2, 0, 1)).is_err());
    }

    #[test]
    fn applicability() {
        let r = SolitonParams::regular(0, vec![0.5, 0.9], vec![1.0; 2], vec![1.0, -1.0]).unwrap();
        assert!(matches!(
            bilinear_residual(BilinearEquation::CBi1, &r, 0.0, 0.0, 0.0),
            Err(Error::NotApplicable(_))
        ));
        let s = SolitonParams::singular(0, vec![0.5], vec![1.0], vec![1.0]).unwrap();
        assert!(bilinear_residual(BilinearEquation::MkpRed1, &s, 0.0, 0.0, 0.0).is_err());
        assert_eq!(BilinearEquation::for_variant(Variant::Singular).len(), 4);
        assert_eq!(BilinearEquation::for_variant(Variant::Regular).len(), 4);
    }

    #[test]
    fn single_soliton_satisfies_every_singular_equation() {
        let s = SolitonParams::singular(0, vec![0.5], vec![1.0], vec![1.0]).unwrap();
        for eq in BilinearEquation::for_variant(Variant::Singular) {
            let r = bilinear_residual(eq, &s, 0.8, -0.3, 0.2).unwrap();
            assert!(r.relative_to_scale() < 1e-13, "{eq:?}: {r:?}");
        }
    }
}
