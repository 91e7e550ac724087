//! Discrete Fourier analysis of periodic grid functions.
//!
//! Coefficients follow the analysis convention `a_j = (1/N^dim) sum_x f(x) e^{-2pi i j x / N}`,
//! so a pure exponential sample has a single unit coefficient. For a grid
//! covering one period `P`, the coefficient at wrapped integer `j`
//! corresponds to the frequency `j / P` per axis.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};

/// Box grids start at `-P/2`, so the index-space DFT picks up the phase
/// `e^{-2 pi i j x_0 / P} = (-1)^j` per axis relative to the Fourier
/// coefficient of the function of `x`; cyclic grids start at 0.
fn start_sign(f: &GridFunction) -> Result<bool> {
    match f.domain {
        Domain::Cyclic { .. } => Ok(false),
        Domain::Box { half_width, .. } => {
            let p = f
                .period
                .ok_or_else(|| Error::rejected("spectral analysis requires a periodic grid function"))?;
            if (p - 2.0 * half_width).abs() > 1e-9 * p {
                return Err(Error::rejected(
                    "spectral analysis needs the box to cover exactly one period",
                ));
            }
            Ok(true)
        }
    }
}

fn apply_start_sign(data: &mut [Complex64], n: usize, dim: u8) {
    match dim {
        1 => {
            for (i, c) in data.iter_mut().enumerate() {
                if i % 2 == 1 {
                    *c = -*c;
                }
            }
        }
        _ => {
            for i in 0..n {
                for k in 0..n {
                    if (i + k) % 2 == 1 {
                        data[i * n + k] = -data[i * n + k];
                    }
                }
            }
        }
    }
}

fn fft_inplace(data: &mut [Complex64], n: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    for chunk in data.chunks_exact_mut(n) {
        fft.process(chunk);
    }
}

fn transpose(data: &mut Vec<Complex64>, n: usize) {
    let mut out = vec![Complex64::default(); n * n];
    for i in 0..n {
        for k in 0..n {
            out[k * n + i] = data[i * n + k];
        }
    }
    *data = out;
}

/// Normalized DFT coefficients of the samples; layout matches the sample
/// layout (coefficient for wrapped frequency `j` at linear index `j mod N`).
pub fn fft_coefficients(f: &GridFunction) -> Result<Vec<Complex64>> {
    if f.period.is_none() {
        return Err(Error::rejected("spectral analysis requires a periodic grid function"));
    }
    let n = f.n;
    let mut data = f.samples.clone();
    match f.dim() {
        1 => fft_inplace(&mut data, n, false),
        2 => {
            fft_inplace(&mut data, n, false);
            transpose(&mut data, n);
            fft_inplace(&mut data, n, false);
            transpose(&mut data, n);
        }
        _ => return Err(Error::Unsupported("dim must be 1 or 2".into())),
    }
    let scale = 1.0 / (n as f64).powi(f.dim() as i32);
    for c in &mut data {
        *c *= scale;
    }
    if start_sign(f)? {
        apply_start_sign(&mut data, n, f.dim());
    }
    Ok(data)
}

/// Inverse of [`fft_coefficients`]: rebuild samples from a full coefficient table.
pub fn fft_synthesis(coeffs: &[Complex64], template: &GridFunction) -> Result<GridFunction> {
    let n = template.n;
    let mut data = coeffs.to_vec();
    if start_sign(template)? {
        apply_start_sign(&mut data, n, template.dim());
    }
    match template.dim() {
        1 => fft_inplace(&mut data, n, true),
        2 => {
            fft_inplace(&mut data, n, true);
            transpose(&mut data, n);
            fft_inplace(&mut data, n, true);
            transpose(&mut data, n);
        }
        _ => return Err(Error::Unsupported("dim must be 1 or 2".into())),
    }
    GridFunction::new(template.domain, n, data, template.period)
}

/// Wrapped integer frequency for linear index `i` on an `n`-point axis.
pub fn wrapped_freq(i: usize, n: usize) -> i64 {
    let i = i as i64;
    let n = n as i64;
    if i <= n / 2 - 1 {
        i
    } else {
        i - n
    }
}

/// Spectral partial derivative of a periodic grid function: multiply the
/// coefficients by `(2 pi i j / P)^alpha` per axis. Exact for trigonometric
/// polynomials resolved on the grid.
pub fn spectral_derivative(f: &GridFunction, alpha: &[u32]) -> Result<GridFunction> {
    let period = f
        .period
        .ok_or_else(|| Error::rejected("spectral derivative requires a periodic grid function"))?;
    let n = f.n;
    let mut coeffs = fft_coefficients(f)?;
    let tau = 2.0 * std::f64::consts::PI / period;
    match f.dim() {
        1 => {
            for (i, c) in coeffs.iter_mut().enumerate() {
                let lam = Complex64::new(0.0, tau * wrapped_freq(i, n) as f64);
                *c *= lam.powu(alpha[0]);
            }
        }
        2 => {
            for i in 0..n {
                let l1 = Complex64::new(0.0, tau * wrapped_freq(i, n) as f64).powu(alpha[0]);
                for k in 0..n {
                    let l2 = Complex64::new(0.0, tau * wrapped_freq(k, n) as f64).powu(alpha[1]);
                    coeffs[i * n + k] *= l1 * l2;
                }
            }
        }
        _ => return Err(Error::Unsupported("dim must be 1 or 2".into())),
    }
    fft_synthesis(&coeffs, f)
}
