//! Casorati determinants of exponential-sum entries and their exact partials.
//!
//! Both solution classes use entries
//!
//! ```text
//! f_n^(i) = α_i p_i^n e^{η_i} + β_i (−p_i)^n e^{−η_i}
//! ```
//!
//! and differ only in the phase `η_i`:
//!
//! * singular: `η_i = p_i x + 4 p_i³ t + y / p_i`
//! * regular:  `η_i = p_i x + (4 p_i³ − 6 p_i / a) t` with `a = p_{N+1}^{-2}`
//!
//! Every partial derivative acts on `f_n` as a fixed combination of index
//! shifts (`∂_x f_n = f_{n+1}`, `∂_y f_n = f_{n−1}`, `∂_t f_n = 4 f_{n+3}` or
//! `4 f_{n+3} − (6/a) f_{n+1}`), so derivatives of the determinant are sums of
//! determinants with shifted columns.

use crate::det::{det_lu, TauValue};
use crate::error::{Error, Result};

/// Largest phase magnitude whose exponential is finite.
const MAX_PHASE: f64 = 709.78;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Pairs `(ρ_N(k), ρ_N(k+1))`, depends on the auxiliary variable `y`.
    Singular,
    /// Pairs `(ρ_N(k), ρ_{N+1}(k))`, Galilean-shifted phases.
    Regular,
}

/// Parameters of one solution family.
///
/// `p`, `alpha` and `beta` have length `N` for the singular class and `N + 1`
/// for the regular class. `q_i = −p_i` is built into the entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonParams {
    pub variant: Variant,
    pub n: usize,
    pub k: i32,
    pub p: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Galilean constant, `p_{N+1}^{-2}` for a genuine regular solution; 0 for singular.
    pub a: f64,
    /// Bilinear constant: 0 for singular, `p_{N+1}²` for regular.
    pub c: f64,
}

impl SolitonParams {
    pub fn singular(k: i32, p: Vec<f64>, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let params = Self {
            variant: Variant::Singular,
            n: p.len(),
            k,
            p,
            alpha,
            beta,
            a: 0.0,
            c: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    /// Regular class of size `N = p.len() − 1`; sets `a = p_{N+1}^{-2}`, `c = p_{N+1}²`.
    pub fn regular(k: i32, p: Vec<f64>, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let last = *p
            .last()
            .ok_or_else(|| Error::InvalidParams("regular class needs at least one wave number".into()))?;
        let params = Self {
            variant: Variant::Regular,
            n: p.len() - 1,
            k,
            p,
            alpha,
            beta,
            a: last.powi(-2),
            c: last * last,
        };
        params.validate()?;
        Ok(params)
    }

    /// Replaces the Galilean constant. Anything but `p_{N+1}^{-2}` breaks the
    /// equation; used for negative controls.
    pub fn with_galilean_constant(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    /// Number of entry rows available (`N` or `N + 1`).
    pub fn rows(&self) -> usize {
        self.p.len()
    }

    pub fn validate(&self) -> Result<()> {
        let rows = match self.variant {
            Variant::Singular => self.n,
            Variant::Regular => self.n + 1,
        };
        if self.p.len() != rows || self.alpha.len() != rows || self.beta.len() != rows {
            return Err(Error::InvalidParams(format!(
                "expected {rows} values each for p, alpha, beta; got {}, {}, {}",
                self.p.len(),
                self.alpha.len(),
                self.beta.len()
            )));
        }
        if self.variant == Variant::Singular && self.n == 0 {
            return Err(Error::InvalidParams("singular class needs N >= 1".into()));
        }
        let all = self.p.iter().chain(&self.alpha).chain(&self.beta);
        if let Some(v) = all.clone().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite parameter {v}")));
        }
        if let Some(i) = self.p.iter().position(|&p| p == 0.0) {
            return Err(Error::InvalidParams(format!("p[{i}] must be nonzero")));
        }
        if self.variant == Variant::Regular && !(self.a.is_finite() && self.a != 0.0) {
            return Err(Error::InvalidParams("Galilean constant a must be finite and nonzero".into()));
        }
        Ok(())
    }

    /// Parameter condition under which both regular determinants are positive:
    /// `0 < p_1 < … < p_{N+1}`, `α_i > 0`, `sgn β_i = (−1)^{k+i−1}` (1-based `i`).
    /// `β_i = 0` is accepted as the degenerate boundary case.
    pub fn satisfies_regularity(&self) -> bool {
        self.variant == Variant::Regular
            && self.p[0] > 0.0
            && self.p.windows(2).all(|w| w[0] < w[1])
            && self.alpha.iter().all(|&a| a > 0.0)
            && self
                .beta
                .iter()
                .enumerate()
                .all(|(i, &b)| b == 0.0 || (b > 0.0) == ((self.k + i as i32).rem_euclid(2) == 0))
    }

    /// Phase `η_i` of row `row` (0-based).
    pub fn phase(&self, row: usize, x: f64, t: f64, y: f64) -> f64 {
        let p = self.p[row];
        match self.variant {
            Variant::Singular => p * x + 4.0 * p.powi(3) * t + y / p,
            Variant::Regular => p * x + (4.0 * p.powi(3) - 6.0 * p / self.a) * t,
        }
    }

    /// `∂η_i/∂t`.
    pub fn phase_rate_t(&self, row: usize) -> f64 {
        let p = self.p[row];
        match self.variant {
            Variant::Singular => 4.0 * p.powi(3),
            Variant::Regular => 4.0 * p.powi(3) - 6.0 * p / self.a,
        }
    }

    /// `∂η_i/∂y`; the regular phases do not depend on `y`.
    pub fn phase_rate_y(&self, row: usize) -> f64 {
        match self.variant {
            Variant::Singular => 1.0 / self.p[row],
            Variant::Regular => 0.0,
        }
    }

    /// Action of `∂_t` on the entry index: `(shift, coefficient)` pairs.
    fn t_shifts(&self) -> ShiftPoly {
        match self.variant {
            Variant::Singular => ShiftPoly(vec![(3, 4.0)]),
            Variant::Regular => ShiftPoly(vec![(1, -6.0 / self.a), (3, 4.0)]),
        }
    }
}

/// Multi-order partial derivative request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DerivKey {
    pub dx: u8,
    pub dt: u8,
    pub dy: u8,
}

impl DerivKey {
    pub const NONE: DerivKey = DerivKey::new(0, 0, 0);
    pub const X: DerivKey = DerivKey::new(1, 0, 0);
    pub const T: DerivKey = DerivKey::new(0, 1, 0);
    pub const Y: DerivKey = DerivKey::new(0, 0, 1);

    pub const fn new(dx: u8, dt: u8, dy: u8) -> Self {
        Self { dx, dt, dy }
    }

    pub const fn x(dx: u8) -> Self {
        Self::new(dx, 0, 0)
    }

    /// Engine capability: `dx ≤ 4`, `dt ≤ 1`, `dy ≤ 1`, in any combination.
    pub fn is_supported(&self) -> bool {
        self.dx <= 4 && self.dt <= 1 && self.dy <= 1
    }

    pub fn order(&self) -> u8 {
        self.dx + self.dt + self.dy
    }
}

/// Lowest and highest index shifts a supported key can produce.
const MIN_SHIFT: i32 = -1;
const MAX_SHIFT: i32 = 4 + 3;

/// Linear combination of index shifts, `Σ c · S^s`.
#[derive(Debug, Clone, PartialEq)]
struct ShiftPoly(Vec<(i32, f64)>);

impl ShiftPoly {
    fn identity() -> Self {
        ShiftPoly(vec![(0, 1.0)])
    }

    fn compose(&self, other: &ShiftPoly) -> ShiftPoly {
        let mut out: Vec<(i32, f64)> = Vec::new();
        for &(s1, c1) in &self.0 {
            for &(s2, c2) in &other.0 {
                match out.iter_mut().find(|(s, _)| *s == s1 + s2) {
                    Some(slot) => slot.1 += c1 * c2,
                    None => out.push((s1 + s2, c1 * c2)),
                }
            }
        }
        out.retain(|&(_, c)| c != 0.0);
        out.sort_by_key(|&(s, _)| s);
        ShiftPoly(out)
    }

    fn pow(&self, e: u8) -> ShiftPoly {
        (0..e).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    fn single_shift(&self) -> Option<i32> {
        match self.0.as_slice() {
            [(s, _)] => Some(*s),
            _ => None,
        }
    }
}

/// Unscaled entry `f_n^(row)(x, t, y)`; `row` is 0-based. `y` is ignored by
/// the regular class.
pub fn entry(params: &SolitonParams, row: usize, n: i32, x: f64, t: f64, y: f64) -> Result<f64> {
    check_row(params, row)?;
    let eta = params.phase(row, x, t, y);
    if !eta.is_finite() || eta.abs() > MAX_PHASE {
        return Err(Error::Range {
            what: "entry phase η",
            value: eta,
        });
    }
    let p = params.p[row];
    let v = params.alpha[row] * p.powi(n) * eta.exp() + params.beta[row] * (-p).powi(n) * (-eta).exp();
    if !v.is_finite() {
        return Err(Error::Range {
            what: "entry phase η",
            value: eta,
        });
    }
    Ok(v)
}

fn check_row(params: &SolitonParams, row: usize) -> Result<()> {
    if row >= params.rows() {
        return Err(Error::InvalidParams(format!(
            "row {row} out of range for {} rows",
            params.rows()
        )));
    }
    Ok(())
}

/// Row-scaled table of entries for one determinant at one point.
///
/// Row `i` is stored divided by `e^{|η_i|} · m_i`, where `m_i` is the largest
/// value of `|α_i p_i^n| e^{η_i} + |β_i p_i^n| e^{−η_i}` (scaled) over the
/// columns of the undifferentiated determinant. All
/// derivative determinants share this scaling, so their scaled values can be
/// combined directly.
#[derive(Debug, Clone)]
pub struct Casorati<'a> {
    params: &'a SolitonParams,
    size: usize,
    k: i32,
    lo: i32,
    width: usize,
    table: Vec<f64>,
    log_scale: f64,
    degenerate: bool,
    /// Scaled value of the undifferentiated determinant.
    value: f64,
}

impl<'a> Casorati<'a> {
    pub fn new(params: &'a SolitonParams, size: usize, k: i32, x: f64, t: f64, y: f64) -> Result<Self> {
        if size > params.rows() {
            return Err(Error::InvalidParams(format!(
                "determinant of size {size} needs {size} entry rows, only {} available",
                params.rows()
            )));
        }
        let lo = k + MIN_SHIFT;
        let hi = k + size as i32 - 1 + MAX_SHIFT;
        let width = (hi - lo + 1).max(0) as usize;
        let mut table = vec![0.0; size * width];
        let mut log_scale = 0.0;
        let mut degenerate = false;
        for row in 0..size {
            let eta = params.phase(row, x, t, y);
            if !eta.is_finite() {
                return Err(Error::Range {
                    what: "entry phase η",
                    value: eta,
                });
            }
            let p = params.p[row];
            let grow = params.alpha[row] * (eta - eta.abs()).exp();
            let decay = params.beta[row] * (-eta - eta.abs()).exp();
            let cells = &mut table[row * width..(row + 1) * width];
            let mut pw = p.powi(lo);
            let mut sign = if lo.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            for cell in cells.iter_mut() {
                *cell = (grow + sign * decay) * pw;
                pw *= p;
                sign = -sign;
            }
            // scale by the size of the two exponential terms, not by the
            // entries themselves, so a cancelling row still reads as small
            let m = (k..k + size as i32)
                .map(|n| (grow * p.powi(n)).abs() + (decay * p.powi(n)).abs())
                .fold(0.0f64, f64::max);
            if m == 0.0 || !m.is_finite() {
                degenerate = true;
                continue;
            }
            cells.iter_mut().for_each(|v| *v /= m);
            log_scale += eta.abs() + m.ln();
        }
        let mut cas = Self {
            params,
            size,
            k,
            lo,
            width,
            table,
            log_scale,
            degenerate,
            value: 0.0,
        };
        cas.value = match (size, degenerate) {
            (0, _) => 1.0,
            (_, true) => 0.0,
            _ => {
                let m = (0..size)
                    .flat_map(|row| (0..size).map(move |j| (row, j)))
                    .map(|(row, j)| cas.at(row, k + j as i32))
                    .collect();
                det_lu(m, size)
            }
        };
        Ok(cas)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Natural log of the common row scale.
    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// `∂^key ρ / exp(log_scale)`.
    pub fn scaled(&self, key: DerivKey) -> Result<f64> {
        if !key.is_supported() {
            return Err(Error::Capability(key));
        }
        if key == DerivKey::NONE {
            return Ok(self.value);
        }
        if self.size == 0 {
            return Ok(0.0);
        }
        if self.degenerate {
            return Ok(0.0);
        }
        if key.dy > 0 && self.params.variant == Variant::Regular {
            return Ok(0.0);
        }
        let x_op = ShiftPoly(vec![(1, 1.0)]);
        let y_op = ShiftPoly(vec![(-1, 1.0)]);
        let t_op = self.params.t_shifts();
        let (nt, ny) = (usize::from(key.dt) + 1, usize::from(key.dy) + 1);
        let idx = |ax: u8, at: u8, ay: u8| (usize::from(ax) * nt + usize::from(at)) * ny + usize::from(ay);
        let mut ops = Vec::with_capacity((usize::from(key.dx) + 1) * nt * ny);
        for ax in 0..=key.dx {
            for at in 0..=key.dt {
                for ay in 0..=key.dy {
                    ops.push(x_op.pow(ax).compose(&t_op.pow(at)).compose(&y_op.pow(ay)));
                }
            }
        }

        let n = self.size;
        let (cx, ct, cy) = (compositions(key.dx, n), compositions(key.dt, n), compositions(key.dy, n));
        let mut total = 0.0;
        let mut polys: Vec<&ShiftPoly> = Vec::with_capacity(n);
        for ax in &cx {
            for at in &ct {
                for ay in &cy {
                    polys.clear();
                    polys.extend((0..n).map(|j| &ops[idx(ax[j], at[j], ay[j])]));
                    if has_repeated_single_column(&polys) {
                        continue;
                    }
                    let weight = multinomial(ax) * multinomial(at) * multinomial(ay);
                    total += weight * self.det_of_columns(&polys);
                }
            }
        }
        Ok(total)
    }

    fn det_of_columns(&self, polys: &[&ShiftPoly]) -> f64 {
        let n = self.size;
        let mut m = vec![0.0; n * n];
        for (j, poly) in polys.iter().enumerate() {
            for row in 0..n {
                m[row * n + j] = poly
                    .0
                    .iter()
                    .map(|&(s, c)| c * self.at(row, self.k + j as i32 + s))
                    .sum();
            }
        }
        det_lu(m, n)
    }

    fn at(&self, row: usize, index: i32) -> f64 {
        self.table[row * self.width + (index - self.lo) as usize]
    }

    pub fn rho(&self) -> TauValue {
        match self.scaled(DerivKey::NONE) {
            Ok(v) => TauValue::from_scaled(v, self.log_scale),
            Err(_) => unreachable!("the zero key is always supported"),
        }
    }

    pub fn deriv(&self, key: DerivKey) -> Result<TauValue> {
        Ok(TauValue::from_scaled(self.scaled(key)?, self.log_scale))
    }

    /// `|ρ|` relative to the row scale; O(1) away from zeros of `ρ`.
    pub fn pole_measure(&self) -> f64 {
        self.value.abs()
    }

    /// When every row is a single exponential (`α_i = 0` or `β_i = 0`),
    /// returns the sign `s_i` of each row's phase: `ρ ∝ exp(Σ s_i η_i)`.
    pub fn monomial_signs(&self) -> Option<Vec<f64>> {
        (0..self.size)
            .map(|row| match (self.params.alpha[row] == 0.0, self.params.beta[row] == 0.0) {
                (false, true) => Some(1.0),
                (true, false) => Some(-1.0),
                _ => None,
            })
            .collect()
    }

    pub fn params(&self) -> &SolitonParams {
        self.params
    }
}

/// Determinant of the matrix of single shifts with two equal columns is zero.
fn has_repeated_single_column(polys: &[&ShiftPoly]) -> bool {
    let singles: Option<Vec<i32>> = polys
        .iter()
        .enumerate()
        .map(|(j, p)| p.single_shift().map(|s| j as i32 + s))
        .collect();
    singles.is_some_and(|s| (0..s.len()).any(|i| s[i + 1..].contains(&s[i])))
}

/// All ways to distribute `total` derivatives over `parts` columns.
fn compositions(total: u8, parts: usize) -> Vec<Vec<u8>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn multinomial(counts: &[u8]) -> f64 {
    let fact = |n: u8| (1..=u32::from(n)).product::<u32>() as f64;
    let total: u8 = counts.iter().sum();
    counts.iter().fold(fact(total), |acc, &c| acc / fact(c))
}

/// `ρ_size(k)` at a point; `ρ_0 = 1`.
pub fn rho(params: &SolitonParams, size: usize, k: i32, x: f64, t: f64, y: f64) -> Result<TauValue> {
    Ok(Casorati::new(params, size, k, x, t, y)?.rho())
}

pub fn rho_deriv(
    params: &SolitonParams,
    size: usize,
    k: i32,
    key: DerivKey,
    x: f64,
    t: f64,
    y: f64,
) -> Result<TauValue> {
    if !key.is_supported() {
        return Err(Error::Capability(key));
    }
    Casorati::new(params, size, k, x, t, y)?.deriv(key)
}

/// `τ_size(k) = e^{−xy} ρ_size(k) / ∏ p_i^k` (singular class only).
pub fn tau(params: &SolitonParams, size: usize, k: i32, x: f64, t: f64, y: f64) -> Result<TauValue> {
    if params.variant != Variant::Singular {
        return Err(Error::NotApplicable(
            "τ with the e^{-xy} prefactor is defined for the singular class only".into(),
        ));
    }
    let r = rho(params, size, k, x, t, y)?;
    if r.is_zero() {
        return Ok(r);
    }
    let p = &params.p[..size];
    let log_prod: f64 = p.iter().map(|v| v.abs().ln()).sum();
    let negatives = p.iter().filter(|v| **v < 0.0).count() as i64;
    let flip = (negatives * i64::from(k)).rem_euclid(2) == 1;
    Ok(TauValue {
        sign: if flip { -r.sign } else { r.sign },
        logmag: r.logmag - x * y - f64::from(k) * log_prod,
    })
}

/// Determinant of the unscaled entry matrix; overflows where the entries do.
pub fn rho_naive(params: &SolitonParams, size: usize, k: i32, x: f64, t: f64, y: f64) -> Result<f64> {
    if size > params.rows() {
        return Err(Error::InvalidParams(format!("size {size} exceeds available rows")));
    }
    let mut m = vec![0.0; size * size];
    for i in 0..size {
        for j in 0..size {
            m[i * size + j] = entry(params, i, k + j as i32, x, t, y)?;
        }
    }
    Ok(det_lu(m, size))
}

/// Scaled values of `ρ` and the listed partials at one point, plus the scale.
pub fn scaled_partials(cas: &Casorati<'_>, keys: &[DerivKey]) -> Result<Vec<f64>> {
    keys.iter().map(|&k| cas.scaled(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig2() -> SolitonParams {
        SolitonParams::singular(0, vec![0.3, 0.9], vec![1.0, -1.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn entries() {
        let s = SolitonParams::singular(0, vec![0.5], vec![1.0], vec![1.0]).unwrap();
        assert_eq!(entry(&s, 0, 0, 0.0, 0.0, 0.0).unwrap(), 2.0);
        assert_eq!(entry(&s, 0, 1, 0.0, 0.0, 0.0).unwrap(), 0.0);
        let r = SolitonParams::regular(0, vec![0.4, 0.8], vec![1.3, 1.0], vec![0.7, -1.0]).unwrap();
        let expected = 1.3 * 0.4f64.exp() + 0.7 * (-0.4f64).exp();
        assert_relative_eq!(entry(&r, 0, 0, 1.0, 0.0, 123.0).unwrap(), expected, epsilon = 1e-15);
        assert!(matches!(
            entry(&s, 0, 0, 2000.0, 0.0, 0.0),
            Err(Error::Range { value, .. }) if value == 1000.0
        ));
        assert!(entry(&s, 3, 0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn regular_phase_uses_galilean_constant() {
        let r = SolitonParams::regular(0, vec![0.4, 0.8], vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(r.a, 1.0 / 0.64, epsilon = 1e-15);
        assert_relative_eq!(r.c, 0.64, epsilon = 1e-15);
        let expect = 0.4 * 2.0 + (4.0 * 0.064 - 6.0 * 0.4 * 0.64) * 3.0;
        assert_relative_eq!(r.phase(0, 2.0, 3.0, 9.0), expect, epsilon = 1e-14);
    }

    #[test]
    fn regular_t_rule_matches_phase_derivative() {
        // ∂_t f_n = 4 f_{n+3} − (6/a) f_{n+1}, checked against the analytic phase derivative
        let r = SolitonParams::regular(1, vec![0.4, 0.8], vec![1.3, 0.6], vec![-0.7, 1.1]).unwrap();
        let (x, t) = (0.3, -0.4);
        for row in 0..2 {
            let p = r.p[row];
            let eta = r.phase(row, x, t, 0.0);
            let deta = 4.0 * p.powi(3) - 6.0 * p / r.a;
            for n in -1..4 {
                let exact = deta
                    * (r.alpha[row] * p.powi(n) * eta.exp() - r.beta[row] * (-p).powi(n) * (-eta).exp());
                let shifted = 4.0 * entry(&r, row, n + 3, x, t, 0.0).unwrap()
                    - 6.0 / r.a * entry(&r, row, n + 1, x, t, 0.0).unwrap();
                assert_relative_eq!(exact, shifted, epsilon = 1e-14, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(SolitonParams::singular(0, vec![0.0], vec![1.0], vec![1.0]).is_err());
        assert!(SolitonParams::singular(0, vec![0.3, 0.4], vec![1.0], vec![1.0, 1.0]).is_err());
        assert!(SolitonParams::singular(0, vec![], vec![], vec![]).is_err());
        assert!(SolitonParams::regular(0, vec![], vec![], vec![]).is_err());
        assert!(SolitonParams::regular(0, vec![f64::NAN], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn regularity_condition() {
        let fig3 = SolitonParams::regular(0, vec![0.5, 0.7, 0.9], vec![1.0; 3], vec![1.0, -1.0, 0.0]).unwrap();
        assert!(fig3.satisfies_regularity());
        let fig5 = SolitonParams::regular(0, vec![0.5, 0.7, 0.9], vec![1.0; 3], vec![1.0, -1.0, 1.0]).unwrap();
        assert!(fig5.satisfies_regularity());
        let bad = SolitonParams::regular(0, vec![0.5, 0.7, 0.9], vec![1.0; 3], vec![1.0, 1.0, 1.0]).unwrap();
        assert!(!bad.satisfies_regularity());
        let shifted = SolitonParams::regular(1, vec![0.5, 0.7], vec![1.0; 2], vec![-1.0, 1.0]).unwrap();
        assert!(shifted.satisfies_regularity());
        assert!(!fig2().satisfies_regularity());
    }

    #[test]
    fn rho_small_cases() {
        let s = SolitonParams::singular(0, vec![0.5], vec![1.0], vec![1.0]).unwrap();
        assert_eq!(rho(&s, 0, 0, 1.0, 2.0, 3.0).unwrap(), TauValue::ONE);
        assert_relative_eq!(rho(&s, 1, 0, 0.0, 0.0, 0.0).unwrap().value(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn rho_two_by_two_against_cofactors() {
        let p = fig2();
        let f = |i, n| entry(&p, i, n, 0.0, 0.0, 0.0).unwrap();
        let oracle = f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
        assert_relative_eq!(rho(&p, 2, 0, 0.0, 0.0, 0.0).unwrap().value(), oracle, max_relative = 1e-12);
    }

    #[test]
    fn derivative_of_single_entry_is_a_shift() {
        let s = SolitonParams::singular(2, vec![0.7], vec![1.2], vec![-0.4]).unwrap();
        let (x, t, y) = (0.3, 0.1, -0.2);
        let d = rho_deriv(&s, 1, 2, DerivKey::X, x, t, y).unwrap().value();
        assert_relative_eq!(d, entry(&s, 0, 3, x, t, y).unwrap(), max_relative = 1e-13);
        let d = rho_deriv(&s, 1, 2, DerivKey::Y, x, t, y).unwrap().value();
        assert_relative_eq!(d, entry(&s, 0, 1, x, t, y).unwrap(), max_relative = 1e-13);
        let d = rho_deriv(&s, 1, 2, DerivKey::T, x, t, y).unwrap().value();
        assert_relative_eq!(d, 4.0 * entry(&s, 0, 5, x, t, y).unwrap(), max_relative = 1e-13);
    }

    #[test]
    fn y_derivative_replaces_first_column() {
        let p = fig2();
        let (x, t, y) = (0.4, -0.3, 0.2);
        let f = |i, n| entry(&p, i, n, x, t, y).unwrap();
        let oracle = f(0, -1) * f(1, 1) - f(0, 1) * f(1, -1);
        let d = rho_deriv(&p, 2, 0, DerivKey::Y, x, t, y).unwrap().value();
        assert_relative_eq!(d, oracle, max_relative = 1e-12);
    }

    #[test]
    fn zero_key_is_rho_and_capability_is_enforced() {
        let p = fig2();
        let a = rho(&p, 2, 1, 0.5, 0.5, 0.5).unwrap();
        let b = rho_deriv(&p, 2, 1, DerivKey::NONE, 0.5, 0.5, 0.5).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            rho_deriv(&p, 2, 0, DerivKey::new(5, 0, 0), 0.0, 0.0, 0.0),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            rho_deriv(&p, 2, 0, DerivKey::new(0, 2, 0), 0.0, 0.0, 0.0),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn regular_rho_has_no_y_dependence() {
        let r = SolitonParams::regular(0, vec![0.5, 0.9], vec![1.0; 2], vec![1.0, -1.0]).unwrap();
        assert_eq!(rho(&r, 2, 0, 0.3, 0.2, 0.0).unwrap(), rho(&r, 2, 0, 0.3, 0.2, 7.0).unwrap());
        assert!(rho_deriv(&r, 2, 0, DerivKey::Y, 0.3, 0.2, 0.0).unwrap().is_zero());
    }

    #[test]
    fn tau_prefactor() {
        let p = fig2();
        assert_eq!(tau(&p, 2, 0, 0.3, 0.2, 0.0).unwrap(), rho(&p, 2, 0, 0.3, 0.2, 0.0).unwrap());
        let r = rho(&p, 2, 0, 1.0, 0.2, 1.0).unwrap();
        let t = tau(&p, 2, 0, 1.0, 0.2, 1.0).unwrap();
        assert_eq!(t.sign, r.sign);
        assert_relative_eq!(r.logmag - t.logmag, 1.0, epsilon = 1e-14);
        let neg = SolitonParams::singular(1, vec![-0.5], vec![1.0], vec![2.0]).unwrap();
        let r = rho(&neg, 1, 1, 0.1, 0.0, 0.0).unwrap();
        let t = tau(&neg, 1, 1, 0.1, 0.0, 0.0).unwrap();
        assert_eq!(t.sign, -r.sign);
        let reg = SolitonParams::regular(0, vec![0.5], vec![1.0], vec![1.0]).unwrap();
        assert!(tau(&reg, 1, 0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn compositions_and_weights() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(compositions(4, 3).len(), 15);
        assert_eq!(multinomial(&[1, 1]), 2.0);
        assert_eq!(multinomial(&[2, 1, 1]), 12.0);
    }

    #[test]
    fn far_field_does_not_overflow() {
        let p = fig2();
        let v = rho(&p, 2, 0, 900.0, 0.0, 0.0).unwrap();
        assert!(v.logmag.is_finite() && v.logmag > 700.0);
        assert!(rho_naive(&p, 2, 0, 900.0, 0.0, 0.0).is_err());
    }
}
