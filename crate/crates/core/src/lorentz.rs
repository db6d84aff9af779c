//! Primitives of the Minkowski plane ℝ^{1,1}.
//!
//! The metric is `⟨v, w⟩ = v1·w1 − v2·w2`. Note the causal convention used
//! throughout the crate: the **zero vector is spacelike**. Most texts leave
//! `0` unclassified; here `causal_classify(0) == Spacelike`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest hyperbolic angle whose `cosh` is finite in `f64`.
pub const MAX_THETA: f64 = 710.475_860_073_943_9;

/// A vector of ℝ^{1,1}.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2L {
    pub v1: f64,
    pub v2: f64,
}

impl Vec2L {
    pub const ZERO: Vec2L = Vec2L { v1: 0.0, v2: 0.0 };

    pub const fn new(v1: f64, v2: f64) -> Self {
        Self { v1, v2 }
    }

    /// Quiet marker for samples that sit on a pole of the underlying solution.
    pub const fn pole_marker() -> Self {
        Self {
            v1: f64::NAN,
            v2: f64::NAN,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.v1.is_finite() && self.v2.is_finite()
    }

    pub fn inner(&self, other: &Vec2L) -> f64 {
        lorentz_inner(*self, *other)
    }

    pub fn norm(&self) -> f64 {
        lorentz_norm(*self)
    }

    pub fn causal_type(&self) -> CausalType {
        causal_classify(*self)
    }

    /// Null (light-cone) coordinates `(v1 + v2, v1 − v2)`; their product is `⟨v, v⟩`.
    pub fn null_coords(&self) -> (f64, f64) {
        (self.v1 + self.v2, self.v1 - self.v2)
    }

    pub fn from_null_coords(plus: f64, minus: f64) -> Self {
        Self::new(0.5 * (plus + minus), 0.5 * (plus - minus))
    }

    /// Euclidean length of the coordinate pair, used only for error scales.
    pub fn euclidean_norm(&self) -> f64 {
        self.v1.hypot(self.v2)
    }
}

impl Add for Vec2L {
    type Output = Vec2L;
    fn add(self, rhs: Vec2L) -> Vec2L {
        Vec2L::new(self.v1 + rhs.v1, self.v2 + rhs.v2)
    }
}

impl Sub for Vec2L {
    type Output = Vec2L;
    fn sub(self, rhs: Vec2L) -> Vec2L {
        Vec2L::new(self.v1 - rhs.v1, self.v2 - rhs.v2)
    }
}

impl Neg for Vec2L {
    type Output = Vec2L;
    fn neg(self) -> Vec2L {
        Vec2L::new(-self.v1, -self.v2)
    }
}

impl Mul<Vec2L> for f64 {
    type Output = Vec2L;
    fn mul(self, rhs: Vec2L) -> Vec2L {
        Vec2L::new(self * rhs.v1, self * rhs.v2)
    }
}

/// Causal character of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalType {
    Spacelike,
    Timelike,
    Lightlike,
}

pub fn lorentz_inner(v: Vec2L, w: Vec2L) -> f64 {
    v.v1 * w.v1 - v.v2 * w.v2
}

/// `Spacelike` iff `⟨v,v⟩ > 0` or `v = 0`; `Timelike` iff `⟨v,v⟩ < 0`;
/// `Lightlike` otherwise.
pub fn causal_classify(v: Vec2L) -> CausalType {
    if v.v1 == 0.0 && v.v2 == 0.0 {
        return CausalType::Spacelike;
    }
    // factored form keeps the sign right when v1² and v2² nearly cancel
    let q = (v.v1 - v.v2) * (v.v1 + v.v2);
    if q > 0.0 {
        CausalType::Spacelike
    } else if q < 0.0 {
        CausalType::Timelike
    } else {
        CausalType::Lightlike
    }
}

/// `|⟨v,v⟩|^{1/2}`. Evaluated without branching on the sign so that tiny
/// negative round-off near the light cone cannot produce a NaN.
pub fn lorentz_norm(v: Vec2L) -> f64 {
    lorentz_inner(v, v).abs().sqrt()
}

/// Moving frame `Φ = [T, N]` of a positive pointing unit-speed spacelike curve.
///
/// `T = [cosh θ, sinh θ]`, `N = J′T = [sinh θ, cosh θ]`. The angle is kept so
/// that nothing downstream has to invert a hyperbolic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub tangent: Vec2L,
    pub normal: Vec2L,
    pub theta: f64,
}

impl Frame {
    /// Frame with all fields NaN, for pole samples.
    pub fn pole_marker() -> Self {
        Self {
            tangent: Vec2L::pole_marker(),
            normal: Vec2L::pole_marker(),
            theta: f64::NAN,
        }
    }

    /// Applies the frame matrix `[T N]` (columns) to `v`.
    pub fn apply(&self, v: Vec2L) -> Vec2L {
        v.v1 * self.tangent + v.v2 * self.normal
    }

    /// Largest deviation of the three orthonormality relations.
    pub fn orthonormality_defect(&self) -> f64 {
        let tt = (lorentz_inner(self.tangent, self.tangent) - 1.0).abs();
        let nn = (lorentz_inner(self.normal, self.normal) + 1.0).abs();
        let tn = lorentz_inner(self.tangent, self.normal).abs();
        tt.max(nn).max(tn)
    }
}

/// Builds the SO⁺(1,1) frame of hyperbolic angle `theta`.
pub fn frame_from_theta(theta: f64) -> Result<Frame> {
    if !theta.is_finite() || theta.abs() > MAX_THETA {
        return Err(Error::Range {
            what: "hyperbolic angle",
            value: theta,
        });
    }
    let (c, s) = (theta.cosh(), theta.sinh());
    if !c.is_finite() {
        return Err(Error::Range {
            what: "hyperbolic angle",
            value: theta,
        });
    }
    Ok(Frame {
        tangent: Vec2L::new(c, s),
        normal: Vec2L::new(s, c),
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn inner_products() {
        assert_eq!(lorentz_inner(Vec2L::new(1.0, 0.0), Vec2L::new(1.0, 0.0)), 1.0);
        assert_eq!(lorentz_inner(Vec2L::new(3.0, 4.0), Vec2L::new(3.0, 4.0)), -7.0);
        assert_eq!(lorentz_inner(Vec2L::new(1.0, 1.0), Vec2L::new(1.0, 1.0)), 0.0);
    }

    #[test]
    fn classification() {
        assert_eq!(causal_classify(Vec2L::ZERO), CausalType::Spacelike);
        assert_eq!(causal_classify(Vec2L::new(0.0, 1.0)), CausalType::Timelike);
        assert_eq!(causal_classify(Vec2L::new(2.0, 2.0)), CausalType::Lightlike);
        assert_eq!(causal_classify(Vec2L::new(2.0, -1.0)), CausalType::Spacelike);
    }

    #[test]
    fn norms() {
        assert_eq!(lorentz_norm(Vec2L::new(1.0, 0.0)), 1.0);
        assert_relative_eq!(lorentz_norm(Vec2L::new(3.0, 4.0)), 7f64.sqrt(), epsilon = 1e-15);
        assert_eq!(lorentz_norm(Vec2L::new(5.0, 5.0)), 0.0);
        // one ulp off the light cone stays finite
        let v = Vec2L::new(1.0, 1.0 + f64::EPSILON);
        assert!(lorentz_norm(v).is_finite());
    }

    #[test]
    fn frames() {
        let f = frame_from_theta(0.0).unwrap();
        assert_eq!(f.tangent, Vec2L::new(1.0, 0.0));
        assert_eq!(f.normal, Vec2L::new(0.0, 1.0));
        let f = frame_from_theta(1.0).unwrap();
        assert_relative_eq!(f.tangent.v1, 1.543_080_634_815_243_7, epsilon = 1e-15);
        assert_relative_eq!(f.tangent.v2, 1.175_201_193_643_801_4, epsilon = 1e-15);
        assert!(frame_from_theta(800.0).is_err());
        assert!(frame_from_theta(f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn frame_is_an_isometry(theta in -20.0..20.0f64,
                                a in -10.0..10.0f64, b in -10.0..10.0f64,
                                c in -10.0..10.0f64, d in -10.0..10.0f64) {
            let f = frame_from_theta(theta).unwrap();
            let (v, w) = (Vec2L::new(a, b), Vec2L::new(c, d));
            let before = lorentz_inner(v, w);
            let after = lorentz_inner(f.apply(v), f.apply(w));
            // cancellation grows with cosh²θ, so compare against that scale
            let scale = theta.cosh().powi(2) * v.euclidean_norm() * w.euclidean_norm();
            prop_assert!((before - after).abs() <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn tangent_is_positive_pointing_and_spacelike(theta in -15.0..15.0f64) {
            let f = frame_from_theta(theta).unwrap();
            prop_assert!(f.tangent.v1 >= 1.0);
            prop_assert_eq!(causal_classify(f.tangent), CausalType::Spacelike);
            prop_assert_eq!(f.theta, theta);
        }

        #[test]
        fn tangent_positive_for_large_angles(theta in -700.0..700.0f64) {
            prop_assert!(frame_from_theta(theta).unwrap().tangent.v1 >= 1.0);
        }

        #[test]
        fn small_angle_frames_are_orthonormal(theta in -5.0..5.0f64) {
            let f = frame_from_theta(theta).unwrap();
            prop_assert!(f.orthonormality_defect() < 1e-12 * theta.cosh().powi(2));
        }
    }
}
