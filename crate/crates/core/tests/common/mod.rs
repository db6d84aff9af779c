//! Shared random parameter draws for the integration tests.
#![allow(dead_code)]

use mkdv_core::{SolitonParams, Variant};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random valid parameters with `N` solitons: distinct wave numbers in
/// `(0.2, p_max)` separated by at least 0.05, amplitudes of size `(0.3, 3)`.
/// Regular draws satisfy the positivity sign rule.
pub fn random_params_up_to(rng: &mut ChaCha8Rng, variant: Variant, n: usize, p_max: f64) -> SolitonParams {
    let k = rng.gen_range(-2..=2);
    let rows = match variant {
        Variant::Singular => n,
        Variant::Regular => n + 1,
    };
    let mut p: Vec<f64> = Vec::new();
    while p.len() < rows {
        let c = rng.gen_range(0.2..p_max);
        if p.iter().all(|q: &f64| (q - c).abs() > 0.05) {
            p.push(c);
        }
    }
    p.sort_by(f64::total_cmp);
    let mag = |rng: &mut ChaCha8Rng| rng.gen_range(0.3..3.0);
    match variant {
        Variant::Singular => {
            let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let alpha = (0..rows).map(|_| sign(rng) * mag(rng)).collect();
            let beta = (0..rows).map(|_| sign(rng) * mag(rng)).collect();
            SolitonParams::singular(k, p, alpha, beta).unwrap()
        }
        Variant::Regular => {
            let alpha = (0..rows).map(|_| mag(rng)).collect();
            let beta = (0..rows)
                .map(|i| if (k + i as i32).rem_euclid(2) == 0 { mag(rng) } else { -mag(rng) })
                .collect();
            SolitonParams::regular(k, p, alpha, beta).unwrap()
        }
    }
}

pub fn random_params(rng: &mut ChaCha8Rng, variant: Variant, n: usize) -> SolitonParams {
    random_params_up_to(rng, variant, n, 1.5)
}
