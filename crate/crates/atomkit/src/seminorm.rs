//! Graded seminorm families.
//!
//! Each represented space carries an increasing family `{q_n}` of seminorms:
//! sup of derivatives up to order `n` for smooth functions on a box
//! (implemented here), weighted short-time Fourier sups (in [`crate::gabor`])
//! and weighted sups on the disc (in [`crate::disc`]).

use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::spectral;

/// Seminorm kind tag used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeminormKind {
    DerivativeSup,
    WeightedStft,
    WeightedDiscSup,
}

/// `q_n(f) = sup { |f^(alpha)(x)| : x in K, |alpha| <= n }` with derivatives
/// taken spectrally on the periodized representation and the sup restricted
/// to grid points inside the box `K = [-k_half_width, k_half_width]^dim`.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeSup {
    pub k_half_width: f64,
    pub max_order: usize,
}

impl DerivativeSup {
    pub fn new(k_half_width: f64, max_order: usize) -> Self {
        DerivativeSup { k_half_width, max_order }
    }

    fn sup_on_k(&self, f: &GridFunction) -> f64 {
        let n = f.n;
        let inside = |i: usize| f.coord(i).abs() <= self.k_half_width + 1e-12;
        match f.dim() {
            1 => (0..n)
                .filter(|&i| inside(i))
                .map(|i| f.samples[i].norm())
                .fold(0.0f64, f64::max),
            _ => {
                let mut m = 0.0f64;
                for i in 0..n {
                    if !inside(i) {
                        continue;
                    }
                    for k in 0..n {
                        if inside(k) {
                            m = m.max(f.samples[i * n + k].norm());
                        }
                    }
                }
                m
            }
        }
    }

    pub fn eval(&self, n: usize, f: &GridFunction) -> Result<f64> {
        if n > self.max_order {
            return Err(Error::rejected(format!(
                "order {n} outside admissible range 0..={}",
                self.max_order
            )));
        }
        match f.domain {
            Domain::Box { .. } => {}
            Domain::Cyclic { .. } => {
                return Err(Error::mismatch("derivative-sup seminorm needs a box grid"))
            }
        }
        let mut sup = 0.0f64;
        for alpha in multi_orders(f.dim(), n) {
            let df = if alpha.iter().all(|&a| a == 0) {
                f.clone()
            } else {
                spectral::spectral_derivative(f, &alpha)?
            };
            sup = sup.max(self.sup_on_k(&df));
        }
        Ok(sup)
    }
}

/// All multi-indices `alpha` with `|alpha| <= n` for the given dimension.
pub fn multi_orders(dim: u8, n: usize) -> Vec<Vec<u32>> {
    match dim {
        1 => (0..=n as u32).map(|a| vec![a]).collect(),
        2 => {
            let mut out = Vec::new();
            for total in 0..=n as u32 {
                for a in 0..=total {
                    out.push(vec![a, total - a]);
                }
            }
            out
        }
        _ => panic!("dim must be 1 or 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn zero_function_is_zero() {
        let f = GridFunction::from_fn_1d(2.0, 256, Some(4.0), |_| Complex64::default()).unwrap();
        let q = DerivativeSup::new(1.0, 5);
        for n in 0..=5 {
            assert_eq!(q.eval(n, &f).unwrap(), 0.0);
        }
    }

    #[test]
    fn order_out_of_range_rejected() {
        let f = GridFunction::from_fn_1d(2.0, 256, Some(4.0), |_| Complex64::default()).unwrap();
        let q = DerivativeSup::new(1.0, 3);
        assert!(q.eval(4, &f).is_err());
    }

    #[test]
    fn exponential_closed_form() {
        // q_n(e^{2 pi i lam x}) = max(1, |2 pi lam|, ..., |2 pi lam|^n)
        let q = DerivativeSup::new(1.0, 4);
        for lam_j in [1i64, 3, 10] {
            let lam = lam_j as f64 / 4.0;
            let f = GridFunction::from_fn_1d(2.0, 512, Some(4.0), |x| {
                Complex64::from_polar(1.0, 2.0 * PI * lam * x)
            })
            .unwrap();
            for n in 0..=4 {
                let want = (0..=n).map(|a| (2.0 * PI * lam).powi(a as i32)).fold(0.0f64, f64::max).max(1.0);
                let got = q.eval(n, &f).unwrap();
                // FFT roundoff in distant bins is amplified by the
                // derivative multiplier, so the floor is ~1e-6 relative
                assert!(
                    (got - want).abs() / want < 1e-5,
                    "lam {lam} n {n}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn monotone_in_order() {
        let q = DerivativeSup::new(1.0, 4);
        let f = GridFunction::from_fn_1d(2.0, 512, Some(4.0), |x| {
            Complex64::new((2.0 * PI * x).sin().exp(), 0.0)
        })
        .unwrap();
        let mut prev = 0.0;
        for n in 0..=4 {
            let v = q.eval(n, &f).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn multi_orders_2d_count() {
        // |alpha| <= 3 in two variables: 1 + 2 + 3 + 4
        assert_eq!(multi_orders(2, 3).len(), 10);
    }
}
