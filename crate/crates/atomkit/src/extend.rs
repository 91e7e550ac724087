//! Extension of a smooth function on `K = [-M, M]^p` to a compactly
//! supported periodic function on `[-2M, 2M)^p`.
//!
//! Two backends:
//!   * caller-global: the caller already supplies samples on the full box
//!     (the underlying whole-line extension is assumed); the cutoff is just
//!     applied on top.
//!   * reflection (1-D): a truncated reflection `f(M+s) = sum_k c_k f(M - b_k s)`
//!     whose coefficients solve the Vandermonde system matching one-sided
//!     derivatives up to a finite order `r`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::cutoff::CutoffFunction;
use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionBackend {
    /// Samples provided on the full `[-2M, 2M)^p` box.
    CallerGlobal,
    /// 1-D truncated reflection certified to the given derivative order.
    Reflection { order: usize },
}

/// Reflection scales `b_k` and the matched coefficients `c_k` solving
/// `sum_k c_k (-b_k)^m = 1` for `m = 0..r-1`.
pub fn reflection_coefficients(r: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(r >= 1 && r <= 12);
    let b: Vec<f64> = (0..r).map(|k| 2.0 * (k as f64 + 1.0) / r as f64).collect();
    let mut v = DMatrix::zeros(r, r);
    for m in 0..r {
        for k in 0..r {
            v[(m, k)] = (-b[k]).powi(m as i32);
        }
    }
    let rhs = DVector::from_element(r, 1.0);
    let c = v.lu().solve(&rhs).expect("Vandermonde system is nonsingular");
    (b, c.iter().copied().collect())
}

/// Evaluate a 1-D grid function off-grid by local 8-point Lagrange
/// interpolation (stencil clamped at the edges).
pub fn interp_1d(f: &GridFunction, x: f64) -> Complex64 {
    let hw = match f.domain {
        Domain::Box { half_width, .. } => half_width,
        Domain::Cyclic { .. } => panic!("interp_1d needs a box grid"),
    };
    let n = f.n;
    let h = 2.0 * hw / n as f64;
    let pos = (x + hw) / h;
    let center = pos.floor() as i64;
    let lo = (center - 3).clamp(0, n as i64 - 8) as usize;
    let mut acc = Complex64::default();
    for i in lo..lo + 8 {
        let mut w = 1.0;
        for k in lo..lo + 8 {
            if k != i {
                w *= (pos - k as f64) / (i as f64 - k as f64);
            }
        }
        acc += w * f.samples[i];
    }
    acc
}

/// Extend `f` to the full box, apply the cutoff and mark the result as one
/// period of a `4M`-periodic function.
pub fn extend(f: &GridFunction, backend: ExtensionBackend, cutoff: &CutoffFunction) -> Result<GridFunction> {
    let m = cutoff.half_width;
    match backend {
        ExtensionBackend::CallerGlobal => {
            let ok = matches!(f.domain, Domain::Box { dim, half_width }
                if dim == cutoff.dim && (half_width - 2.0 * m).abs() < 1e-12 && f.n == cutoff.samples.n);
            if !ok {
                return Err(Error::mismatch(
                    "caller-global backend needs samples on the full [-2M, 2M) box matching the cutoff grid",
                ));
            }
            let samples = f
                .samples
                .iter()
                .zip(&cutoff.samples.samples)
                .map(|(a, b)| a * b.re)
                .collect();
            GridFunction::new(f.domain, f.n, samples, Some(4.0 * m))
        }
        ExtensionBackend::Reflection { order } => {
            if cutoff.dim != 1 {
                return Err(Error::Unsupported("reflection backend is 1-D only".into()));
            }
            let ok = matches!(f.domain, Domain::Box { dim: 1, half_width }
                if (half_width - m).abs() < 1e-12);
            if !ok {
                return Err(Error::mismatch("reflection backend needs samples on K = [-M, M)"));
            }
            let (b, c) = reflection_coefficients(order);
            let n_full = cutoff.samples.n;
            let full = GridFunction::from_fn_1d(2.0 * m, n_full, Some(4.0 * m), |x| {
                let v = if x.abs() <= m {
                    interp_1d(f, x)
                } else {
                    // distance past the nearer endpoint, reflected inward
                    let (end, s) = if x > m { (m, x - m) } else { (-m, -m - x) };
                    let sign = if x > m { -1.0 } else { 1.0 };
                    let mut acc = Complex64::default();
                    for (bk, ck) in b.iter().zip(&c) {
                        acc += ck * interp_1d(f, end + sign * bk * s);
                    }
                    acc
                };
                v * cutoff.eval_axis(x)
            })?;
            Ok(full)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cutoff() -> CutoffFunction {
        CutoffFunction::build(1.0, 0.1, 30.0, 1024, 1).unwrap()
    }

    #[test]
    fn zero_extends_to_zero() {
        let co = cutoff();
        let f = GridFunction::from_fn_1d(1.0, 512, None, |_| Complex64::default()).unwrap();
        let hf = extend(&f, ExtensionBackend::Reflection { order: 8 }, &co).unwrap();
        assert_eq!(hf.norm_sup(), 0.0);
    }

    #[test]
    fn caller_global_restricts_to_f_on_k() {
        let co = cutoff();
        let k = 3.0;
        let f = GridFunction::from_fn_1d(2.0, 1024, None, |x| {
            Complex64::from_polar(1.0, 2.0 * PI * x * k / 4.0)
        })
        .unwrap();
        let hf = extend(&f, ExtensionBackend::CallerGlobal, &co).unwrap();
        assert_eq!(hf.period, Some(4.0));
        for i in 0..hf.n {
            if hf.coord(i).abs() <= 1.0 {
                assert!((hf.samples[i] - f.samples[i]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn caller_global_rejects_k_grid() {
        let co = cutoff();
        let f = GridFunction::from_fn_1d(1.0, 512, None, |_| Complex64::default()).unwrap();
        assert!(extend(&f, ExtensionBackend::CallerGlobal, &co).is_err());
    }

    #[test]
    fn reflection_rejects_2d() {
        let co = CutoffFunction::build(1.0, 0.1, 30.0, 256, 2).unwrap();
        let f = GridFunction::from_fn_2d(1.0, 256, None, |_, _| Complex64::default()).unwrap();
        assert!(extend(&f, ExtensionBackend::Reflection { order: 8 }, &co).is_err());
    }

    #[test]
    fn moment_conditions_hold() {
        for r in [4usize, 8] {
            let (b, c) = reflection_coefficients(r);
            for m in 0..r {
                let s: f64 = b.iter().zip(&c).map(|(bk, ck)| ck * (-bk).powi(m as i32)).sum();
                assert!((s - 1.0).abs() < 1e-8, "r {r} moment {m}: {s}");
            }
        }
    }

    #[test]
    fn reflection_is_exact_for_linear() {
        // f(x) = x: the matched reflection reproduces the linear continuation,
        // so Hf equals x on K exactly up to interpolation roundoff.
        let co = cutoff();
        let f = GridFunction::from_fn_1d(1.0, 512, None, |x| Complex64::new(x, 0.0)).unwrap();
        let hf = extend(&f, ExtensionBackend::Reflection { order: 8 }, &co).unwrap();
        for i in 0..hf.n {
            let x = hf.coord(i);
            if x.abs() <= 1.0 {
                assert!((hf.samples[i].re - x).abs() < 1e-10, "x {x}");
            }
        }
    }

    #[test]
    fn reflection_tracks_the_analytic_continuation_near_the_seam() {
        // For an analytic f the matched reflection approximates the true
        // continuation to high order just past the seam, which is exactly
        // what makes the extension smooth there. The cutoff plateau covers
        // |x| <= 1.1, so no cutoff correction is needed on this strip.
        let co = cutoff();
        let truth = |x: f64| (1.3 * x).sin() + 0.5 * (0.7 * x).cos();
        let f = GridFunction::from_fn_1d(1.0, 512, None, |x| Complex64::new(truth(x), 0.0)).unwrap();
        let hf = extend(&f, ExtensionBackend::Reflection { order: 8 }, &co).unwrap();
        let mut worst = 0.0f64;
        for i in 0..hf.n {
            let x = hf.coord(i);
            if x.abs() > 1.0 && x.abs() <= 1.1 {
                worst = worst.max((hf.samples[i].re - truth(x)).abs());
            }
        }
        assert!(worst < 1e-5, "continuation error {worst}");
    }
}
