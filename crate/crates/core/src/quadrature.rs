//! Five-point Gauss–Legendre rule, exact for polynomials of degree 9.

const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];

const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

/// Quadrature points of `[a, b]` as `(x, weight)` pairs.
pub fn gauss_legendre5(a: f64, b: f64) -> [(f64, f64); 5] {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    std::array::from_fn(|i| (mid + half * NODES[i], half * WEIGHTS[i]))
}

/// `∫_a^b f` by one five-point cell.
pub fn integrate<E>(a: f64, b: f64, mut f: impl FnMut(f64) -> Result<f64, E>) -> Result<f64, E> {
    gauss_legendre5(a, b)
        .iter()
        .try_fold(0.0, |acc, &(x, w)| Ok(acc + w * f(x)?))
}
