//! Standard probe elements used by the tests, diagnostics and the CLI.
//!
//! Probes are either closed-form (so residuals have independent oracles) or
//! seeded, so every run with the same seed sees the same family.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::disc::TaylorRep;
use crate::error::Result;
use crate::grid::{Domain, GridFunction};

/// `f(x) = exp(sin 2 pi x)` sampled on the full box `[-2M, 2M)`; smooth and
/// 1-periodic, hence compatible with the `4M`-periodization for integer `M`.
pub fn exp_smooth_probe(m: f64, n: usize) -> Result<GridFunction> {
    GridFunction::from_fn_1d(2.0 * m, n, Some(4.0 * m), |x| {
        Complex64::new((2.0 * std::f64::consts::PI * x).sin().exp(), 0.0)
    })
}

/// 2-D variant `f(x1, x2) = exp(sin 2 pi x1) cos(2 pi x2)`.
pub fn exp_smooth_probe_2d(m: f64, n: usize) -> Result<GridFunction> {
    let tau = 2.0 * std::f64::consts::PI;
    GridFunction::from_fn_2d(2.0 * m, n, Some(4.0 * m), |x1, x2| {
        Complex64::new((tau * x1).sin().exp() * (tau * x2).cos(), 0.0)
    })
}

/// A seeded random trigonometric polynomial with geometrically decaying
/// coefficients, `sum_{|k| <= deg} c_k 2^{-|k|} e^{2 pi i k x / (4M)}`.
pub fn exp_trig_probe(m: f64, n: usize, deg: i64, seed: u64) -> Result<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(i64, Complex64)> = (-deg..=deg)
        .map(|k| {
            let c = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            (k, c * 0.5f64.powi(k.abs() as i32))
        })
        .collect();
    let tau = 2.0 * std::f64::consts::PI;
    GridFunction::from_fn_1d(2.0 * m, n, Some(4.0 * m), |x| {
        coeffs
            .iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, tau * *k as f64 * x / (4.0 * m)))
            .sum()
    })
}

/// The geometric disc probe `f(z) = 1 / (1 - z/2)`, Taylor coefficients
/// `2^{-m}`, truncated at the working degree.
pub fn disc_geometric_probe(degree: usize) -> Result<TaylorRep> {
    TaylorRep::new((0..=degree).map(|m| Complex64::new(0.5f64.powi(m as i32), 0.0)).collect())
}

/// A seeded random signal on `Z_L`, normalized in `l_2`.
pub fn gabor_random_probe(l: usize, seed: u64) -> Result<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<Complex64> = (0..l)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = samples.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt();
    for s in &mut samples {
        *s /= norm;
    }
    GridFunction::new(Domain::Cyclic { order: l }, l, samples, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_probes_are_reproducible() {
        let a = exp_trig_probe(1.0, 256, 8, 7).unwrap();
        let b = exp_trig_probe(1.0, 256, 8, 7).unwrap();
        assert_eq!(a, b);
        let c = exp_trig_probe(1.0, 256, 8, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn gabor_probe_is_normalized() {
        let p = gabor_random_probe(64, 3).unwrap();
        assert!((p.norm_l2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_probe_matches_closed_form() {
        let p = exp_smooth_probe(1.0, 512).unwrap();
        let x = p.coord(17);
        assert!((p.samples[17].re - (2.0 * std::f64::consts::PI * x).sin().exp()).abs() < 1e-15);
    }
}
