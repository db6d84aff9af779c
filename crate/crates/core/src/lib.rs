//! Exact τ-function solutions of the defocusing mKdV equation and the
//! arc-length preserving motion of spacelike curves they induce on the
//! Minkowski plane, together with residual checks for every identity the
//! construction relies on.

pub mod bilinear;
pub mod curve;
pub mod det;
pub mod error;
pub mod lorentz;
pub mod positivity;
pub mod quadrature;
pub mod solutions;
pub mod tau;

pub use bilinear::{bilinear_residual, hirota, BilinearEquation, PartialSource};
pub use curve::{arclength_check, curve_explicit, curve_quadrature, frame_evolution_residual, CurveSample, CurveSlice, GridSpec};
pub use det::TauValue;
pub use error::{Error, Result};
pub use positivity::{cauchy_binet_expansion, det_f, CbTerm, GeneralEntryParams};
pub use lorentz::{causal_classify, frame_from_theta, lorentz_inner, lorentz_norm, CausalType, Frame, Vec2L};
pub use tau::{entry, rho, rho_deriv, tau, Casorati, DerivKey, SolitonParams, Variant};
