//! Finite-difference oracles for the exact derivative engine.

use mkdv_core::solutions::{kappa, mkdv_residual, FieldKind, SolutionField};
use mkdv_core::{rho, rho_deriv, tau, DerivKey, SolitonParams, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::random_params;

fn fig2() -> SolitonParams {
    SolitonParams::singular(0, vec![0.3, 0.9], vec![1.0, -1.0], vec![1.0, 1.0]).unwrap()
}

fn value(params: &SolitonParams, key: DerivKey, x: f64, t: f64, y: f64) -> f64 {
    rho_deriv(params, params.n, params.k, key, x, t, y).unwrap().value()
}

/// Fourth-order central first derivative.
fn d5(f: impl Fn(f64) -> f64, at: f64, h: f64) -> f64 {
    (f(at - 2.0 * h) - 8.0 * f(at - h) + 8.0 * f(at + h) - f(at + 2.0 * h)) / (12.0 * h)
}

#[test]
fn y_derivative_matches_central_difference() {
    let s = fig2();
    for &(x, t, y) in &[(0.3, 0.1, 0.2), (-2.0, 1.0, -0.5), (4.0, -0.7, 1.1)] {
        let h = 1e-5;
        let fd = (value(&s, DerivKey::NONE, x, t, y + h) - value(&s, DerivKey::NONE, x, t, y - h)) / (2.0 * h);
        let exact = value(&s, DerivKey::Y, x, t, y);
        assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{fd} vs {exact}");
    }
}

#[test]
fn third_x_derivative_at_the_origin() {
    let s = fig2();
    let h = 1e-2;
    let f = |x: f64| value(&s, DerivKey::NONE, x, 0.0, 0.0);
    let fd = (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h.powi(3));
    let exact = value(&s, DerivKey::x(3), 0.0, 0.0, 0.0);
    assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{fd} vs {exact}");
}

/// Every supported key against a one-step difference of an exact lower key.
fn one_step_oracle(variant: Variant, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-3;
    for trial in 0..100 {
        let params = random_params(&mut rng, variant, 1 + trial % 3);
        let (x, t, y) = (rng.gen_range(-5.0..5.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let base = value(&params, DerivKey::NONE, x, t, y).abs();
        for dx in 0..=4u8 {
            for dt in 0..=1u8 {
                for dy in 0..=1u8 {
                    let key = DerivKey::new(dx, dt, dy);
                    if key == DerivKey::NONE {
                        continue;
                    }
                    let exact = value(&params, key, x, t, y);
                    let fd = if dx > 0 {
                        let lower = DerivKey::new(dx - 1, dt, dy);
                        d5(|s| value(&params, lower, s, t, y), x, h)
                    } else if dt > 0 {
                        let lower = DerivKey::new(dx, dt - 1, dy);
                        d5(|s| value(&params, lower, x, s, y), t, h)
                    } else {
                        d5(|s| value(&params, DerivKey::NONE, x, t, s), y, h)
                    };
                    let scale = exact.abs().max(base);
                    assert!(
                        (fd - exact).abs() <= 1e-7 * scale,
                        "{variant:?} {key:?} at ({x}, {t}, {y}): {fd} vs {exact}"
                    );
                }
            }
        }
    }
}

#[test]
fn one_step_differences_singular() {
    one_step_oracle(Variant::Singular, 31);
}

#[test]
fn one_step_differences_regular() {
    one_step_oracle(Variant::Regular, 32);
}

#[test]
fn index_shift_by_two_is_a_constant_factor() {
    let s = SolitonParams::singular(1, vec![0.4, -1.1, 0.8], vec![1.0, 2.0, -0.5], vec![0.7, -1.0, 1.5]).unwrap();
    let prod_sq: f64 = s.p.iter().map(|p| p * p).product();
    for &(x, t, y) in &[(0.0, 0.0, 0.0), (1.5, -0.4, 0.3)] {
        let r0 = rho(&s, 3, 1, x, t, y).unwrap();
        let r2 = rho(&s, 3, 3, x, t, y).unwrap();
        assert_eq!(r0.sign, r2.sign);
        assert!((r2.logmag - r0.logmag - prod_sq.ln()).abs() < 1e-12);
        let t0 = tau(&s, 3, 1, x, t, y).unwrap();
        let t2 = tau(&s, 3, 3, x, t, y).unwrap();
        assert_eq!(t0.sign, t2.sign);
        assert!((t0.logmag - t2.logmag).abs() < 1e-12);
    }
}

#[test]
fn y_log_derivative_of_tau() {
    let s = fig2();
    let (x, t, y) = (0.9, 0.2, -0.3);
    let h = 1e-4;
    let log_tau = |y| tau(&s, 2, 0, x, t, y).unwrap().logmag;
    let fd = (log_tau(y + h) - log_tau(y - h)) / (2.0 * h);
    let exact = value(&s, DerivKey::Y, x, t, y) / value(&s, DerivKey::NONE, x, t, y) - x;
    assert!((fd - exact).abs() < 1e-7, "{fd} vs {exact}");
}

/// mKdV residual assembled from finite differences of the exact κ.
fn fd_residual(field: &SolutionField, x: f64, t: f64) -> f64 {
    let k = |x: f64, t: f64| kappa(field, x, t, 0.0).unwrap().value;
    let h = 4e-3;
    let kx = d5(|s| k(s, t), x, h);
    let f = |i: f64| k(x + i * h, t);
    let kxxx = (-f(3.0) + 8.0 * f(2.0) - 13.0 * f(1.0) + 13.0 * f(-1.0) - 8.0 * f(-2.0) + f(-3.0)) / (8.0 * h.powi(3));
    let kt = d5(|s| k(x, s), t, 1e-3);
    kt - kxxx + 1.5 * k(x, t).powi(2) * kx
}

#[test]
fn residual_agrees_with_all_difference_path() {
    let cases = [
        (fig2(), (-6.0, 6.0), (-2.0, 2.0)),
        (
            SolitonParams::regular(0, vec![0.5, 0.7, 0.9], vec![1.0; 3], vec![1.0, -1.0, 0.0]).unwrap(),
            (-15.0, 15.0),
            (-20.0, 20.0),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for (params, xr, tr) in cases {
        let field = SolutionField::new(params, FieldKind::CurvatureKappa);
        let mut checked = 0;
        while checked < 40 {
            let (x, t) = (rng.gen_range(xr.0..xr.1), rng.gen_range(tr.0..tr.1));
            // keep the stencils well away from poles, where κ ~ 2 / distance
            let offsets = (-6..=6).map(|i| (0.01 * f64::from(i), 0.0)).chain((-2..=2).map(|i| (0.0, 1e-3 * f64::from(i))));
            let mut near_pole = false;
            for (dx, dt) in offsets {
                let k = kappa(&field, x + dx, t + dt, 0.0).unwrap();
                near_pole |= k.is_pole || k.value.abs() > 4.0;
            }
            if near_pole {
                continue;
            }
            let exact = mkdv_residual(&field, x, t, 0.0).unwrap().value;
            let fd = fd_residual(&field, x, t);
            assert!((exact - fd).abs() <= 1e-4, "({x}, {t}): exact {exact:e} fd {fd:e}");
            checked += 1;
        }
    }
}
