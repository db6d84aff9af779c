//! Potential `θ` and curvature `κ = θ_x` built from pairs of Casorati
//! determinants, and the residuals of the potential / plain defocusing mKdV
//! equations
//!
//! ```text
//! θ_t = θ_xxx − θ_x³ / 2          κ_t = κ_xxx − (3/2) κ² κ_x
//! ```
//!
//! The singular class uses `θ = 2 log ρ_N(k)/ρ_N(k+1)`, the regular class
//! `θ = 2 log ρ_N(k)/ρ_{N+1}(k)`. All derivatives are exact: they come from
//! the column-shift engine in [`crate::tau`] through the log-derivative chain
//! rule, never from finite differences.

use crate::error::{Error, Result};
use crate::tau::{Casorati, DerivKey, SolitonParams, Variant};

/// Row-scaled `|det|` below which a τ zero is declared.
pub const DEFAULT_POLE_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    PotentialTheta,
    CurvatureKappa,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub params: SolitonParams,
    pub kind: FieldKind,
    pub pole_threshold: f64,
}

/// One determinant of the pair: `(size, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetSpec {
    pub size: usize,
    pub k: i32,
}

impl SolutionField {
    pub fn new(params: SolitonParams, kind: FieldKind) -> Self {
        Self {
            params,
            kind,
            pole_threshold: DEFAULT_POLE_THRESHOLD,
        }
    }

    pub fn with_pole_threshold(mut self, threshold: f64) -> Self {
        self.pole_threshold = threshold;
        self
    }

    /// Numerator and denominator determinants of `τ/τ̄`. Fixed by the variant.
    pub fn pair(&self) -> (DetSpec, DetSpec) {
        let (n, k) = (self.params.n, self.params.k);
        match self.params.variant {
            Variant::Singular => (DetSpec { size: n, k }, DetSpec { size: n, k: k + 1 }),
            Variant::Regular => (DetSpec { size: n, k }, DetSpec { size: n + 1, k }),
        }
    }

    fn casoratis(&self, x: f64, t: f64, y: f64) -> Result<(Casorati<'_>, Casorati<'_>)> {
        let (a, b) = self.pair();
        Ok((
            Casorati::new(&self.params, a.size, a.k, x, t, y)?,
            Casorati::new(&self.params, b.size, b.k, x, t, y)?,
        ))
    }

    /// Pole / branch status of the pair at a point, without derivatives.
    pub fn status(&self, x: f64, t: f64, y: f64) -> Result<PointStatus> {
        let (a, b) = self.casoratis(x, t, y)?;
        Ok(self.status_of(&a, &b))
    }

    fn status_of(&self, a: &Casorati<'_>, b: &Casorati<'_>) -> PointStatus {
        let (ra, rb) = (a.rho(), b.rho());
        let measure_a = a.pole_measure();
        let measure_b = b.pole_measure();
        PointStatus {
            sign_a: ra.sign,
            sign_b: rb.sign,
            measure_a,
            measure_b,
            log_ratio: ra.logmag - rb.logmag,
            is_pole: measure_a < self.pole_threshold || measure_b < self.pole_threshold,
        }
    }

    /// `θ` and `κ` only, `None` at a pole. Much cheaper than [`Self::jet`].
    pub fn theta_kappa(&self, x: f64, t: f64, y: f64) -> Result<Option<(f64, f64)>> {
        let (a, b) = self.casoratis(x, t, y)?;
        let status = self.status_of(&a, &b);
        if status.is_pole {
            return Ok(None);
        }
        let log_x = |c: &Casorati<'_>| -> Result<f64> {
            match c.monomial_signs() {
                Some(signs) => Ok(LogJet::monomial(c.params(), &signs).x),
                None => Ok(c.scaled(DerivKey::X)? / c.scaled(DerivKey::NONE)?),
            }
        };
        Ok(Some((2.0 * status.log_ratio, 2.0 * (log_x(&a)? - log_x(&b)?))))
    }

    /// `θ`, `κ` and the derivatives the residual checks need, at one point.
    pub fn jet(&self, x: f64, t: f64, y: f64) -> Result<ThetaJet> {
        let (a, b) = self.casoratis(x, t, y)?;
        let status = self.status_of(&a, &b);
        if status.is_pole {
            return Ok(ThetaJet::pole(status));
        }
        let la = LogJet::of(&a, self.params.variant)?;
        let lb = LogJet::of(&b, self.params.variant)?;
        let d = |f: fn(&LogJet) -> f64| 2.0 * (f(&la) - f(&lb));
        Ok(ThetaJet {
            status,
            theta: 2.0 * status.log_ratio,
            theta_x: d(|l| l.x),
            theta_xx: d(|l| l.xx),
            theta_xxx: d(|l| l.xxx),
            theta_xxxx: d(|l| l.xxxx),
            theta_t: d(|l| l.t),
            theta_xt: d(|l| l.xt),
            theta_y: d(|l| l.y),
            theta_xy: d(|l| l.xy),
            ly_a: la.y,
            ly_b: lb.y,
        })
    }
}

/// Signs and row-scaled magnitudes of the two determinants at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointStatus {
    pub sign_a: i8,
    pub sign_b: i8,
    pub measure_a: f64,
    pub measure_b: f64,
    /// `log|ρ_a| − log|ρ_b|`.
    pub log_ratio: f64,
    pub is_pole: bool,
}

impl PointStatus {
    /// `ρ_a / ρ_b < 0`: `θ` has no real branch here.
    pub fn is_branch(&self) -> bool {
        !self.is_pole && self.sign_a * self.sign_b < 0
    }
}

/// Value of `θ` or `κ` at a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    /// NaN when `is_pole`.
    pub value: f64,
    pub is_pole: bool,
    /// `θ` was evaluated as `2 log|ρ_a/ρ_b|` across a sign change of the ratio.
    pub branch: bool,
}

impl EvalResult {
    pub fn pole() -> Self {
        Self {
            value: f64::NAN,
            is_pole: true,
            branch: false,
        }
    }

    fn finite(value: f64) -> Self {
        Self {
            value,
            is_pole: false,
            branch: false,
        }
    }
}

/// Logarithmic derivatives of one determinant.
#[derive(Debug, Clone, Copy, Default)]
struct LogJet {
    x: f64,
    xx: f64,
    xxx: f64,
    xxxx: f64,
    t: f64,
    xt: f64,
    y: f64,
    xy: f64,
}

impl LogJet {
    fn of(c: &Casorati<'_>, variant: Variant) -> Result<Self> {
        if let Some(signs) = c.monomial_signs() {
            return Ok(Self::monomial(c.params(), &signs));
        }
        let r0 = c.scaled(DerivKey::NONE)?;
        let ratio = |key| -> Result<f64> { Ok(c.scaled(key)? / r0) };
        let r1 = ratio(DerivKey::x(1))?;
        let r2 = ratio(DerivKey::x(2))?;
        let r3 = ratio(DerivKey::x(3))?;
        let r4 = ratio(DerivKey::x(4))?;
        let rt = ratio(DerivKey::T)?;
        let rxt = ratio(DerivKey::new(1, 1, 0))?;
        let (ry, rxy) = match variant {
            Variant::Singular => (ratio(DerivKey::Y)?, ratio(DerivKey::new(1, 0, 1))?),
            Variant::Regular => (0.0, 0.0),
        };
        Ok(Self {
            x: r1,
            xx: r2 - r1 * r1,
            xxx: r3 - 3.0 * r2 * r1 + 2.0 * r1.powi(3),
            xxxx: r4 - 4.0 * r3 * r1 - 3.0 * r2 * r2 + 12.0 * r2 * r1 * r1 - 6.0 * r1.powi(4),
            t: rt,
            xt: rxt - r1 * rt,
            y: ry,
            xy: rxy - r1 * ry,
        })
    }

    /// `log ρ = Σ s_i η_i + const` is linear in `(x, t, y)`.
    fn monomial(params: &SolitonParams, signs: &[f64]) -> Self {
        let sum = |f: &dyn Fn(usize) -> f64| signs.iter().enumerate().map(|(i, s)| s * f(i)).sum::<f64>();
        Self {
            x: sum(&|i| params.p[i]),
            t: sum(&|i| params.phase_rate_t(i)),
            y: sum(&|i| params.phase_rate_y(i)),
            ..Self::default()
        }
    }
}

/// `θ` and its partials at a non-pole point. `κ = θ_x`, so `κ_xxx = θ_xxxx`
/// and `κ_t = θ_xt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaJet {
    pub status: PointStatus,
    /// `2 log|ρ_a/ρ_b|`; meaningful as `θ` only when `!status.is_branch()`.
    pub theta: f64,
    pub theta_x: f64,
    pub theta_xx: f64,
    pub theta_xxx: f64,
    pub theta_xxxx: f64,
    pub theta_t: f64,
    pub theta_xt: f64,
    pub theta_y: f64,
    pub theta_xy: f64,
    /// `∂_y log ρ_a` and `∂_y log ρ_b` (singular class; zero otherwise).
    pub ly_a: f64,
    pub ly_b: f64,
}

impl ThetaJet {
    fn pole(status: PointStatus) -> Self {
        Self {
            status,
            theta: f64::NAN,
            theta_x: f64::NAN,
            theta_xx: f64::NAN,
            theta_xxx: f64::NAN,
            theta_xxxx: f64::NAN,
            theta_t: f64::NAN,
            theta_xt: f64::NAN,
            theta_y: f64::NAN,
            theta_xy: f64::NAN,
            ly_a: f64::NAN,
            ly_b: f64::NAN,
        }
    }

    pub fn is_pole(&self) -> bool {
        self.status.is_pole
    }

    pub fn kappa(&self) -> f64 {
        self.theta_x
    }

    pub fn mkdv_residual(&self) -> Residual {
        let k = self.theta_x;
        let terms = [self.theta_xt, -self.theta_xxxx, 1.5 * k * k * self.theta_xx];
        Residual::from_terms(&terms)
    }

    pub fn potential_mkdv_residual(&self) -> Residual {
        let terms = [self.theta_t, -self.theta_xxx, 0.5 * self.theta_x.powi(3)];
        Residual::from_terms(&terms)
    }

    /// `θ_t − κ_xx + κ³/2`, assembled from the curvature side.
    pub fn frame_evolution_residual(&self) -> Residual {
        let kappa = self.theta_x;
        let kappa_xx = self.theta_xxx;
        let terms = [self.theta_t, -kappa_xx, 0.5 * kappa.powi(3)];
        Residual::from_terms(&terms)
    }
}

/// Residual of an identity and the magnitude of its largest term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    pub fn from_terms(terms: &[f64]) -> Self {
        Self {
            value: terms.iter().sum(),
            scale: terms.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        }
    }

    /// `|value| / (1 + scale)`.
    pub fn relative(&self) -> f64 {
        self.value.abs() / (1.0 + self.scale)
    }
}

pub fn theta(field: &SolutionField, x: f64, t: f64, y: f64) -> Result<EvalResult> {
    let s = field.status(x, t, y)?;
    if s.is_pole {
        return Ok(EvalResult::pole());
    }
    Ok(EvalResult {
        value: 2.0 * s.log_ratio,
        is_pole: false,
        branch: s.is_branch(),
    })
}

/// Like [`theta`] but refuses sign-indefinite points instead of flagging them.
pub fn theta_strict(field: &SolutionField, x: f64, t: f64, y: f64) -> Result<f64> {
    let s = field.status(x, t, y)?;
    if s.is_pole {
        return Err(Error::Pole { x, t });
    }
    if s.is_branch() {
        return Err(Error::Branch { x, t });
    }
    Ok(2.0 * s.log_ratio)
}

pub fn kappa(field: &SolutionField, x: f64, t: f64, y: f64) -> Result<EvalResult> {
    let jet = field.jet(x, t, y)?;
    if jet.is_pole() {
        return Ok(EvalResult::pole());
    }
    Ok(EvalResult::finite(jet.theta_x))
}

fn non_pole_jet(field: &SolutionField, x: f64, t: f64, y: f64) -> Result<ThetaJet> {
    let jet = field.jet(x, t, y)?;
    if jet.is_pole() {
        return Err(Error::Pole { x, t });
    }
    Ok(jet)
}

/// `κ_t − κ_xxx + (3/2) κ² κ_x`.
pub fn mkdv_residual(field: &SolutionField, x: f64, t: f64, y: f64) -> Result<Residual> {
    Ok(non_pole_jet(field, x, t, y)?.mkdv_residual())
}

/// `θ_t − θ_xxx + θ_x³ / 2`.
pub fn potential_mkdv_residual(field: &SolutionField, x: f64, t: f64, y: f64) -> Result<Residual> {
    Ok(non_pole_jet(field, x, t, y)?.potential_mkdv_residual())
}

/// Samples `θ` or `κ` along `xs` at fixed `(t, y)`.
///
/// Besides the pointwise threshold, a sign change of either determinant
/// between neighbouring samples marks the neighbour closer to the zero as a
/// pole, so zeros falling between grid points are not missed.
pub fn sample_line(field: &SolutionField, kind: FieldKind, xs: &[f64], t: f64, y: f64) -> Result<Vec<EvalResult>> {
    let statuses: Vec<PointStatus> = xs.iter().map(|&x| field.status(x, t, y)).collect::<Result<_>>()?;
    let poles = pole_flags(&statuses);
    xs.iter()
        .zip(&poles)
        .map(|(&x, &pole)| {
            if pole {
                return Ok(EvalResult::pole());
            }
            match kind {
                FieldKind::PotentialTheta => theta(field, x, t, y),
                FieldKind::CurvatureKappa => kappa(field, x, t, y),
            }
        })
        .collect()
}

/// Pointwise pole flags plus one flag per determinant sign change.
pub fn pole_flags(statuses: &[PointStatus]) -> Vec<bool> {
    let mut flags: Vec<bool> = statuses.iter().map(|s| s.is_pole).collect();
    for i in 1..statuses.len() {
        let (l, r) = (&statuses[i - 1], &statuses[i]);
        let pick = |ml: f64, mr: f64| if ml <= mr { i - 1 } else { i };
        if l.sign_a * r.sign_a < 0 && !(flags[i - 1] || flags[i]) {
            flags[pick(l.measure_a, r.measure_a)] = true;
        }
        if l.sign_b * r.sign_b < 0 && !(flags[i - 1] || flags[i]) {
            flags[pick(l.measure_b, r.measure_b)] = true;
        }
    }
    flags
}
