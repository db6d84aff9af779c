//! Positivity of the general two-exponential Casorati determinant
//!
//! ```text
//! F_ij = α_i p_i^{k+j−1} e^{η_i} + β_i q_i^{k+j−1} e^{ξ_i}
//! ```
//!
//! under `q_N < … < q_1 < 0 < p_1 < … < p_N`, `α_i > 0` and
//! `sgn β_i = (−1)^{k+i−1}`. Writing `F` as the product of an `N × 2N`
//! coefficient matrix and a `2N × N` power matrix, Cauchy–Binet expands
//! `det F` into `2^N` terms
//!
//! ```text
//! d(μ) = ∏ μ_n ν_n^k e^{ω_n} ∏_{i<j} (ν_j − ν_i)
//! ```
//!
//! where row `n` contributes either `(μ, ν, ω) = (α_n, p_n, η_n)` or
//! `(β_n, q_n, ξ_n)`. Each factor's sign is `(−1)^{Σ i_m − r}` for the `r`
//! rows `i_1 < … < i_r` that pick `q`, so every term is positive.

use rand::Rng;

use crate::det::{det_tau, TauValue};
use crate::error::{Error, Result};
use crate::tau::SolitonParams;

/// Largest `N` accepted by [`cauchy_binet_expansion`].
pub const MAX_EXPANSION_N: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralEntryParams {
    pub k: i32,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
}

impl GeneralEntryParams {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Parameters of `ρ_size(k)` at a point: `q_i = −p_i`, `ξ_i = −η_i`.
    pub fn from_reduction(params: &SolitonParams, size: usize, x: f64, t: f64, y: f64) -> Result<Self> {
        if size == 0 || size > params.rows() {
            return Err(Error::InvalidParams(format!(
                "determinant size {size} outside 1..={}",
                params.rows()
            )));
        }
        let eta: Vec<f64> = (0..size).map(|i| params.phase(i, x, t, y)).collect();
        Ok(Self {
            k: params.k,
            p: params.p[..size].to_vec(),
            q: params.p[..size].iter().map(|p| -p).collect(),
            alpha: params.alpha[..size].to_vec(),
            beta: params.beta[..size].to_vec(),
            xi: eta.iter().map(|e| -e).collect(),
            eta,
        })
    }

    /// Lengths agree, `N ≥ 1`, everything finite.
    pub fn validate_shape(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        let fields = [&self.q, &self.alpha, &self.beta, &self.eta, &self.xi];
        if fields.iter().any(|f| f.len() != n) {
            return Err(Error::InvalidParams("parameter vectors must all have length N".into()));
        }
        if std::iter::once(&self.p)
            .chain(fields)
            .flat_map(|f| f.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        Ok(())
    }

    /// Full hypothesis of the positivity statement. `β_i = 0` is accepted as a
    /// degenerate boundary case. Reports the first violated constraint.
    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        let fail = |msg: String| Err(Error::Precondition(msg));
        if self.p[0] <= 0.0 {
            return fail(format!("p_1 = {} must be positive", self.p[0]));
        }
        if self.q[0] >= 0.0 {
            return fail(format!("q_1 = {} must be negative", self.q[0]));
        }
        for i in 1..self.n() {
            if self.p[i] <= self.p[i - 1] {
                return fail(format!("p must increase strictly: p_{} = {} ≤ p_{} = {}", i + 1, self.p[i], i, self.p[i - 1]));
            }
            if self.q[i] >= self.q[i - 1] {
                return fail(format!("q must decrease strictly: q_{} = {} ≥ q_{} = {}", i + 1, self.q[i], i, self.q[i - 1]));
            }
        }
        for (i, (&a, &b)) in self.alpha.iter().zip(&self.beta).enumerate() {
            if a <= 0.0 {
                return fail(format!("α_{} = {a} must be positive", i + 1));
            }
            if b != 0.0 && (b > 0.0) != self.beta_should_be_positive(i) {
                return fail(format!("β_{} = {b} must have sign (−1)^(k+{})", i + 1, i));
            }
        }
        Ok(())
    }

    /// `sgn β_i = (−1)^{k+i−1}` with 1-based `i`; `row` is 0-based.
    fn beta_should_be_positive(&self, row: usize) -> bool {
        (i64::from(self.k) + row as i64).rem_euclid(2) == 0
    }

    /// Row-scaled entry matrix; returns the matrix and the log of the scales.
    fn scaled_matrix(&self) -> (Vec<f64>, f64) {
        let n = self.n();
        let mut a = Vec::with_capacity(n * n);
        let mut log_scale = 0.0;
        for i in 0..n {
            let m = self.eta[i].max(self.xi[i]);
            log_scale += m;
            let (ge, gx) = ((self.eta[i] - m).exp(), (self.xi[i] - m).exp());
            for j in 0..n {
                let e = self.k + j as i32;
                a.push(self.alpha[i] * self.p[i].powi(e) * ge + self.beta[i] * self.q[i].powi(e) * gx);
            }
        }
        (a, log_scale)
    }
}

/// `det F` by row-scaled LU, after checking the positivity hypothesis.
pub fn det_f(params: &GeneralEntryParams) -> Result<TauValue> {
    params.validate()?;
    Ok(det_f_unchecked(params))
}

/// `det F` without the sign and ordering hypothesis (shape still required
/// by the caller).
pub fn det_f_unchecked(params: &GeneralEntryParams) -> TauValue {
    let (a, s) = params.scaled_matrix();
    let mut v = det_tau(a, params.n());
    if !v.is_zero() {
        v.logmag += s;
    }
    v
}

/// One Cauchy–Binet term. `selection[n]` is true when row `n` picks
/// `(β_n, q_n, ξ_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CbTerm {
    pub selection: Vec<bool>,
    pub value: TauValue,
}

impl CbTerm {
    /// `(−1)^{i_1 + … + i_r − r}` over the 1-based rows picking `q`.
    pub fn predicted_sign(&self) -> i8 {
        let exponent: usize = self
            .selection
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i)
            .sum();
        if exponent.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Sign of `∏ μ_n ν_n^k` for a selection (the coefficient factor alone).
pub fn coefficient_sign(params: &GeneralEntryParams, selection: &[bool]) -> i8 {
    let mut sign = 1.0f64;
    for (n, &pick_q) in selection.iter().enumerate() {
        let (mu, nu) = if pick_q {
            (params.beta[n], params.q[n])
        } else {
            (params.alpha[n], params.p[n])
        };
        sign *= mu.signum() * nu.signum().powi(params.k);
        if mu == 0.0 {
            return 0;
        }
    }
    sign as i8
}

/// Sign of the Vandermonde factor `∏_{i<j} (ν_j − ν_i)`.
pub fn vandermonde_sign(params: &GeneralEntryParams, selection: &[bool]) -> i8 {
    vandermonde(&nus(params, selection)).sign
}

fn nus(params: &GeneralEntryParams, selection: &[bool]) -> Vec<f64> {
    selection
        .iter()
        .enumerate()
        .map(|(n, &s)| if s { params.q[n] } else { params.p[n] })
        .collect()
}

fn vandermonde(nu: &[f64]) -> TauValue {
    let mut v = TauValue::ONE;
    for j in 0..nu.len() {
        for i in 0..j {
            let d = nu[j] - nu[i];
            if d == 0.0 {
                return TauValue::ZERO;
            }
            v = v.mul(&TauValue::from_f64(d));
        }
    }
    v
}

/// All `2^N` terms, in selection order `0..2^N` (bit `n` set = row `n` picks `q`).
pub fn cauchy_binet_expansion(params: &GeneralEntryParams) -> Result<Vec<CbTerm>> {
    params.validate_shape()?;
    let n = params.n();
    if n > MAX_EXPANSION_N {
        return Err(Error::Precondition(format!(
            "N = {n} exceeds {MAX_EXPANSION_N} for the exhaustive expansion"
        )));
    }
    Ok((0u32..1 << n)
        .map(|mask| {
            let selection: Vec<bool> = (0..n).map(|b| mask >> b & 1 == 1).collect();
            let mut value = vandermonde(&nus(params, &selection));
            for (row, &pick_q) in selection.iter().enumerate() {
                let (mu, nu, omega) = if pick_q {
                    (params.beta[row], params.q[row], params.xi[row])
                } else {
                    (params.alpha[row], params.p[row], params.eta[row])
                };
                let factor = TauValue::from_f64(mu * nu.powi(params.k));
                value = value.mul(&TauValue::from_scaled(factor.value(), omega));
            }
            CbTerm { selection, value }
        })
        .collect())
}

/// Sum of all Cauchy–Binet terms.
pub fn cauchy_binet_sum(terms: &[CbTerm]) -> TauValue {
    TauValue::sum(terms.iter().map(|t| &t.value))
}

/// A random draw satisfying the positivity hypothesis.
///
/// `p_i, |q_i| ∈ (0.05, 3)`, `α_i, |β_i| ∈ (0.1, 5)`, phases in `(−10, 10)`,
/// `k ∈ [−3, 3]`. Wave numbers are redrawn until pairwise separated by
/// `1e-3` so that the ordering is strict with margin.
pub fn random_valid_draw<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GeneralEntryParams {
    let k = rng.gen_range(-3..=3);
    let spaced = |rng: &mut R| loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..3.0)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] > 1e-3) {
            return v;
        }
    };
    let p = spaced(rng);
    let q: Vec<f64> = spaced(rng).into_iter().map(|s| -s).collect();
    let alpha = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
    let beta = (0..n)
        .map(|i| {
            let mag = rng.gen_range(0.1..5.0);
            if (k + i as i32).rem_euclid(2) == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let eta = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
    let xi = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
    GeneralEntryParams {
        k,
        p,
        q,
        alpha,
        beta,
        eta,
        xi,
    }
}

/// A valid draw with exactly one `β_i` sign flipped.
pub fn random_violating_draw<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GeneralEntryParams {
    let mut d = random_valid_draw(rng, n);
    let i = rng.gen_range(0..n);
    d.beta[i] = -d.beta[i];
    d
}
