//! Dense determinants for the small matrices of this crate.
//!
//! Matrices are row-major `Vec<f64>` of side `n`. Everything here is O(n³)
//! LU with partial pivoting; `n` never exceeds a handful.

/// Sign / natural-log-magnitude pair. Represents `sign · exp(logmag)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauValue {
    pub sign: i8,
    pub logmag: f64,
}

impl TauValue {
    pub const ONE: TauValue = TauValue {
        sign: 1,
        logmag: 0.0,
    };
    pub const ZERO: TauValue = TauValue {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if v > 0.0 { 1 } else { -1 },
                logmag: v.abs().ln(),
            }
        }
    }

    /// `mantissa · exp(log_scale)` without forming the product.
    pub fn from_scaled(mantissa: f64, log_scale: f64) -> Self {
        let mut v = Self::from_f64(mantissa);
        if v.sign != 0 {
            v.logmag += log_scale;
        }
        v
    }

    /// The represented value; may overflow to ±inf or underflow to 0.
    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logmag.exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn mul(&self, other: &TauValue) -> TauValue {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        TauValue {
            sign: self.sign * other.sign,
            logmag: self.logmag + other.logmag,
        }
    }

    /// Quotient `self / other`; `None` when dividing by zero.
    pub fn div(&self, other: &TauValue) -> Option<TauValue> {
        if other.sign == 0 {
            return None;
        }
        if self.sign == 0 {
            return Some(Self::ZERO);
        }
        Some(TauValue {
            sign: self.sign * other.sign,
            logmag: self.logmag - other.logmag,
        })
    }

    /// Sum of signed log-magnitude values, evaluated relative to the largest term.
    pub fn sum<'a>(values: impl IntoIterator<Item = &'a TauValue>) -> TauValue {
        let values: Vec<&TauValue> = values.into_iter().filter(|v| v.sign != 0).collect();
        let Some(top) = values
            .iter()
            .map(|v| v.logmag)
            .max_by(|a, b| a.total_cmp(b))
        else {
            return Self::ZERO;
        };
        let acc: f64 = values
            .iter()
            .map(|v| f64::from(v.sign) * (v.logmag - top).exp())
            .sum();
        Self::from_scaled(acc, top)
    }
}

/// Determinant by LU with partial pivoting; returns the plain value.
pub fn det_lu(mut a: Vec<f64>, n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap_or(col);
        let pivot = a[pivot_row * n + col];
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for i in col + 1..n {
            let factor = a[i * n + col] / pivot;
            if factor != 0.0 {
                for j in col + 1..n {
                    a[i * n + j] -= factor * a[col * n + j];
                }
            }
        }
    }
    det
}

/// Divides each row by its largest-magnitude entry, then factors.
///
/// Returns the determinant of the scaled matrix and the accumulated log of
/// the row scales, so that `det = scaled · exp(log_scale)`.
pub fn det_row_scaled(mut a: Vec<f64>, n: usize) -> (f64, f64) {
    let mut log_scale = 0.0;
    for i in 0..n {
        let row = &mut a[i * n..(i + 1) * n];
        let m = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m == 0.0 {
            return (0.0, 0.0);
        }
        row.iter_mut().for_each(|v| *v /= m);
        log_scale += m.ln();
    }
    (det_lu(a, n), log_scale)
}

pub fn det_tau(a: Vec<f64>, n: usize) -> TauValue {
    if n == 0 {
        return TauValue::ONE;
    }
    let (d, s) = det_row_scaled(a, n);
    TauValue::from_scaled(d, s)
}

/// Cofactor expansion along the first row. Test oracle only; O(n!).
pub fn det_cofactor(a: &[f64], n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => a[0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<f64> = (1..n)
                    .flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| a[i * n + c]))
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[j] * det_cofactor(&minor, n - 1)
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(det_lu(vec![], 0), 1.0);
        assert_eq!(det_lu(vec![3.0], 1), 3.0);
        assert_eq!(det_lu(vec![1.0, 2.0, 3.0, 4.0], 2), -2.0);
        assert_eq!(det_lu(vec![0.0, 1.0, 1.0, 0.0], 2), -1.0);
        assert_eq!(det_lu(vec![1.0, 2.0, 2.0, 4.0], 2), 0.0);
        assert_eq!(det_tau(vec![], 0), TauValue::ONE);
    }

    #[test]
    fn scaled_path_survives_overflowing_rows() {
        // entries near 1e217: the naive product of pivots overflows f64
        let big = 500.0f64.exp();
        let a = vec![1.0 * big, 2.0 * big, 3.0 * big, 4.0 * big];
        assert!(det_lu(a.clone(), 2).is_infinite());
        let v = det_tau(a, 2);
        assert_eq!(v.sign, -1);
        assert!((v.logmag - (2f64.ln() + 1000.0)).abs() < 1e-12);
    }

    #[test]
    fn tau_value_arithmetic() {
        let a = TauValue::from_f64(-3.0);
        let b = TauValue::from_f64(2.0);
        assert!((a.mul(&b).value() + 6.0).abs() < 1e-14);
        assert!((a.div(&b).unwrap().value() + 1.5).abs() < 1e-14);
        assert!(a.div(&TauValue::ZERO).is_none());
        let s = TauValue::sum([&a, &b, &TauValue::ZERO]);
        assert!((s.value() + 1.0).abs() < 1e-14);
        assert_eq!(TauValue::sum([]), TauValue::ZERO);
    }

    proptest! {
        #[test]
        fn lu_matches_cofactor(n in 1usize..6, seed in proptest::collection::vec(-3.0..3.0f64, 36)) {
            let a: Vec<f64> = seed[..n * n].to_vec();
            let lu = det_lu(a.clone(), n);
            let cf = det_cofactor(&a, n);
            let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).powi(n as i32).max(1.0);
            prop_assert!((lu - cf).abs() <= 1e-12 * scale * 120.0);
        }

        #[test]
        fn row_scaling_agrees_with_naive(n in 1usize..6, seed in proptest::collection::vec(-3.0..3.0f64, 36),
                                          scales in proptest::collection::vec(-30.0..30.0f64, 6)) {
            let mut a: Vec<f64> = seed[..n * n].to_vec();
            for i in 0..n {
                for j in 0..n { a[i * n + j] *= scales[i].exp(); }
            }
            let row_product: f64 = (0..n)
                .map(|i| (0..n).fold(0.0f64, |m, j| m.max(a[i * n + j].abs())))
                .product();
            let naive = det_lu(a.clone(), n);
            let v = det_tau(a, n).value();
            prop_assert!((naive - v).abs() <= 1e-12 * row_product);
        }

        #[test]
        fn tau_value_round_trip_is_monotone(a in -1e6..1e6f64, b in -1e6..1e6f64) {
            let (ta, tb) = (TauValue::from_f64(a), TauValue::from_f64(b));
            if a < b { prop_assert!(ta.value() <= tb.value()); }
            prop_assert!((ta.value() - a).abs() <= 1e-12 * a.abs());
        }
    }
}
