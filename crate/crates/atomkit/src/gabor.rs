//! Finite Gabor frames on the cyclic group `Z_L`.
//!
//! The atoms are time-frequency shifts `pi(lambda) g` of a normalized
//! periodized Gaussian over the lattice `aZ_L x bZ_L`; the dual system is
//! `pi(lambda) h` with `h = S^{-1} g` for the frame operator `S`. The graded
//! seminorms are weighted sups of the short-time Fourier transform,
//! `q_n(f) = sup_z |V_g f(z)| (1 + |z|)^n`, with `z` measured in physical
//! units (grid step `1/sqrt(L)` on both axes, wrapped symmetrically).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::par;

/// A lattice point `(x, xi)` with `a | x`, `b | xi`, both in `0..L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticePoint {
    pub x: usize,
    pub xi: usize,
    /// Wrapped lattice indices `(x/a, xi/b)` in symmetric representatives;
    /// their sup-norm is the shell used by the summability certificate.
    pub wrapped: [i64; 2],
}

impl LatticePoint {
    pub fn shell(&self) -> i64 {
        self.wrapped[0].abs().max(self.wrapped[1].abs())
    }
}

/// Symmetric representative of `t mod l` in `[-l/2, l/2)`.
pub fn wrap(t: i64, l: i64) -> i64 {
    let r = ((t % l) + l) % l;
    if r >= l.div_euclid(2) {
        r - l
    } else {
        r
    }
}

/// A finite Gabor system: signal length, lattice steps and window.
#[derive(Debug, Clone)]
pub struct GaborSystem {
    pub l: usize,
    pub a: usize,
    pub b: usize,
    /// Normalized periodized Gaussian window, `||g||_2 = 1`.
    pub window: GridFunction,
    lattice: Vec<LatticePoint>,
}

impl GaborSystem {
    pub fn new(l: usize, a: usize, b: usize) -> Result<Self> {
        if !l.is_power_of_two() || l < 8 {
            return Err(Error::rejected("signal length must be a power of two, at least 8"));
        }
        if a == 0 || b == 0 || l % a != 0 || l % b != 0 {
            return Err(Error::rejected("lattice steps must divide the signal length"));
        }
        if a * b >= l {
            return Err(Error::rejected(
                "lattice is too sparse: need a*b < L for an oversampled system",
            ));
        }
        let window = periodized_gaussian(l)?;
        let mut lattice = Vec::with_capacity((l / a) * (l / b));
        for k in 0..(l / a) as i64 {
            for m in 0..(l / b) as i64 {
                let kw = wrap(k, (l / a) as i64);
                let mw = wrap(m, (l / b) as i64);
                lattice.push(LatticePoint {
                    x: (k as usize) * a,
                    xi: (m as usize) * b,
                    wrapped: [kw, mw],
                });
            }
        }
        lattice.sort_by_key(|p| (p.shell(), p.wrapped[0], p.wrapped[1]));
        Ok(GaborSystem { l, a, b, window, lattice })
    }

    /// Shell-ordered lattice enumeration.
    pub fn lattice(&self) -> &[LatticePoint] {
        &self.lattice
    }

    /// Physical grid step: both axes of the time-frequency plane carry the
    /// step `1/sqrt(L)`, which makes the plane square.
    pub fn step(&self) -> f64 {
        1.0 / (self.l as f64).sqrt()
    }

    /// Physical distance of the point `(x, xi)` (arbitrary integers,
    /// wrapped) from the origin of the time-frequency plane.
    pub fn phys_dist(&self, x: i64, xi: i64) -> f64 {
        let d = self.step();
        let tx = wrap(x, self.l as i64) as f64 * d;
        let txi = wrap(xi, self.l as i64) as f64 * d;
        (tx * tx + txi * txi).sqrt()
    }

    /// The polynomial weight `v_n(z) = (1 + |z|)^n`.
    pub fn weight(&self, n: usize, x: i64, xi: i64) -> f64 {
        (1.0 + self.phys_dist(x, xi)).powi(n as i32)
    }

    /// The time-frequency shift `pi(x, xi) f`: shift by `x`, then modulate
    /// by `xi` (so the modulation acts on the shifted variable directly).
    pub fn shift_modulate(&self, x: i64, xi: i64, f: &GridFunction) -> GridFunction {
        let l = self.l as i64;
        let tau = 2.0 * std::f64::consts::PI;
        let samples = (0..self.l)
            .map(|t| {
                let src = (((t as i64 - x) % l + l) % l) as usize;
                let phase = tau * (xi as f64) * (t as f64) / self.l as f64;
                f.samples[src] * Complex64::from_polar(1.0, phase)
            })
            .collect();
        GridFunction::new(Domain::Cyclic { order: self.l }, self.l, samples, None)
            .expect("valid cyclic grid")
    }

    /// The frame operator `S f = sum_lambda <f, pi(lambda) g> pi(lambda) g`
    /// as a dense Hermitian matrix; rows are assembled in parallel.
    pub fn frame_operator(&self) -> DMatrix<Complex64> {
        self.frame_operator_impl(true)
    }

    /// Sequential frame operator assembly (benchmark baseline).
    pub fn frame_operator_seq(&self) -> DMatrix<Complex64> {
        self.frame_operator_impl(false)
    }

    fn frame_operator_impl(&self, parallel: bool) -> DMatrix<Complex64> {
        let shifted: Vec<GridFunction> = self
            .lattice
            .iter()
            .map(|p| self.shift_modulate(p.x as i64, p.xi as i64, &self.window))
            .collect();
        let l = self.l;
        let row = |t: usize| -> Vec<Complex64> {
            (0..l)
                .map(|s| {
                    let mut acc = Complex64::default();
                    for g in &shifted {
                        acc += g.samples[t] * g.samples[s].conj();
                    }
                    acc
                })
                .collect()
        };
        let rows = if parallel {
            par::map_indexed(l, row)
        } else {
            par::map_indexed_seq(l, row)
        };
        DMatrix::from_fn(l, l, |t, s| rows[t][s])
    }

    /// Extreme eigenvalues of the frame operator; refuses when the lower
    /// one certifies no frame at the working precision.
    pub fn frame_bounds(&self) -> Result<(f64, f64)> {
        let s = self.frame_operator();
        let eig = s.symmetric_eigen();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &ev in eig.eigenvalues.iter() {
            lo = lo.min(ev);
            hi = hi.max(ev);
        }
        if lo <= 1e-10 * hi.max(1.0) {
            return Err(Error::gate(format!(
                "lattice does not generate a frame: lower bound {lo:.3e} vanishes at working precision"
            )));
        }
        Ok((lo, hi))
    }

    /// The canonical dual window `h = S^{-1} g` (Cholesky solve).
    pub fn dual_window(&self) -> Result<GridFunction> {
        let s = self.frame_operator();
        let chol = s.cholesky().ok_or_else(|| {
            Error::gate("frame operator is not positive definite at working precision")
        })?;
        let g = DVector::from_iterator(self.l, self.window.samples.iter().copied());
        let h = chol.solve(&g);
        GridFunction::new(
            Domain::Cyclic { order: self.l },
            self.l,
            h.iter().copied().collect(),
            None,
        )
    }

    /// Full short-time Fourier table `V_g f` on `Z_L x Z_L`, row-major in
    /// `(x, xi)`, computed by the direct double loop (parallel over rows).
    pub fn stft_table(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        self.stft_table_impl(f, true)
    }

    /// Sequential STFT table (benchmark baseline and oracle).
    pub fn stft_table_seq(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        self.stft_table_impl(f, false)
    }

    fn stft_table_impl(&self, f: &GridFunction, parallel: bool) -> Result<Vec<Complex64>> {
        if !f.same_grid(&self.window) {
            return Err(Error::mismatch("signal grid does not match the Gabor system"));
        }
        let l = self.l;
        let row = |x: usize| -> Vec<Complex64> {
            (0..l)
                .map(|xi| {
                    let shifted = self.shift_modulate(x as i64, xi as i64, &self.window);
                    let mut acc = Complex64::default();
                    for t in 0..l {
                        acc += f.samples[t] * shifted.samples[t].conj();
                    }
                    acc
                })
                .collect()
        };
        let rows = if parallel {
            par::map_indexed(l, row)
        } else {
            par::map_indexed_seq(l, row)
        };
        Ok(rows.into_iter().flatten().collect())
    }

    /// `q_n(f) = sup_z |V_g f(z)| v_n(z)`.
    pub fn stft_seminorm(&self, n: usize, f: &GridFunction) -> Result<f64> {
        let table = self.stft_table(f)?;
        let mut sup = 0.0f64;
        for x in 0..self.l {
            for xi in 0..self.l {
                let v = table[x * self.l + xi].norm() * self.weight(n, x as i64, xi as i64);
                sup = sup.max(v);
            }
        }
        Ok(sup)
    }
}

/// Normalized periodization of `e^{-pi t^2 / L}` over `Z_L`.
pub fn periodized_gaussian(l: usize) -> Result<GridFunction> {
    let lf = l as f64;
    let mut samples: Vec<Complex64> = (0..l)
        .map(|t| {
            let mut acc = 0.0;
            for r in -8i64..=8 {
                let u = t as f64 + r as f64 * lf;
                acc += (-std::f64::consts::PI * u * u / lf).exp();
            }
            Complex64::new(acc, 0.0)
        })
        .collect();
    let norm = samples.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt();
    for s in &mut samples {
        *s /= norm;
    }
    GridFunction::new(Domain::Cyclic { order: l }, l, samples, None)
}

/// The Gabor atomic decomposition: atoms `pi(lambda) g`, duals
/// `f -> <f, pi(lambda) h>` with the canonical dual window `h`.
#[derive(Debug, Clone)]
pub struct GaborDecomposition {
    pub system: GaborSystem,
    pub dual: GridFunction,
    max_order: usize,
}

impl GaborDecomposition {
    pub fn new(system: GaborSystem) -> Result<Self> {
        let dual = system.dual_window()?;
        Ok(GaborDecomposition { system, dual, max_order: 8 })
    }

    pub fn lattice_point(&self, pos: usize) -> LatticePoint {
        self.system.lattice()[pos]
    }
}

impl Decomposition for GaborDecomposition {
    type Elem = GridFunction;

    fn atom_count(&self) -> usize {
        self.system.lattice().len()
    }

    fn atom(&self, pos: usize) -> GridFunction {
        let p = self.system.lattice()[pos];
        self.system.shift_modulate(p.x as i64, p.xi as i64, &self.system.window)
    }

    fn coefficients(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        if !f.same_grid(&self.system.window) {
            return Err(Error::mismatch("signal grid does not match the Gabor system"));
        }
        Ok(self
            .system
            .lattice()
            .iter()
            .map(|p| {
                let d = self.system.shift_modulate(p.x as i64, p.xi as i64, &self.dual);
                f.samples
                    .iter()
                    .zip(&d.samples)
                    .map(|(a, b)| a * b.conj())
                    .sum()
            })
            .collect())
    }

    fn seminorm(&self, n: usize, f: &GridFunction) -> Result<f64> {
        if n > self.max_order {
            return Err(Error::rejected(format!(
                "order {n} outside admissible range 0..={}",
                self.max_order
            )));
        }
        self.system.stft_seminorm(n, f)
    }

    fn max_seminorm_order(&self) -> usize {
        self.max_order
    }
}

/// Per-shell breakdown of `sum_lambda |c_lambda| q_n(pi(lambda) h)` together
/// with the closed-form dominating bound
/// `(max_lambda |c_lambda| v_N(lambda)) * q_n(h) * sum_lambda v_n(lambda)/v_N(lambda)`
/// with `N = n + 4`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SummabilityReport {
    pub n: usize,
    pub big_n: usize,
    /// `(shell, partial sum over the shell)` in shell order.
    pub shells: Vec<(i64, f64)>,
    pub total: f64,
    pub bound: f64,
}

pub fn summability_certificate(d: &GaborDecomposition, f: &GridFunction, n: usize) -> Result<SummabilityReport> {
    let sys = &d.system;
    let big_n = n + 4;
    if big_n > d.max_seminorm_order() {
        return Err(Error::rejected("weight order exceeds the admissible seminorm range"));
    }
    let coeffs = d.coefficients(f)?;
    // |V_g (pi(lambda) h)(z)| = |V_g h(z - lambda)| up to phase, so the
    // weighted sup of the shifted dual only needs the dual's table once.
    let dual_table: Vec<f64> = sys.stft_table(&d.dual)?.iter().map(|v| v.norm()).collect();
    let l = sys.l;
    let q_shifted = |p: &LatticePoint, order: usize| -> f64 {
        let mut sup = 0.0f64;
        for w_x in 0..l {
            for w_xi in 0..l {
                let v = dual_table[w_x * l + w_xi]
                    * sys.weight(order, w_x as i64 + p.x as i64, w_xi as i64 + p.xi as i64);
                sup = sup.max(v);
            }
        }
        sup
    };
    let mut shells: Vec<(i64, f64)> = Vec::new();
    let mut total = 0.0;
    for (p, c) in sys.lattice().iter().zip(&coeffs) {
        let term = c.norm() * q_shifted(p, n);
        total += term;
        match shells.last_mut() {
            Some(last) if last.0 == p.shell() => last.1 += term,
            _ => shells.push((p.shell(), term)),
        }
    }
    // dominating bound
    let coeff_decay = sys
        .lattice()
        .iter()
        .zip(&coeffs)
        .map(|(p, c)| c.norm() * sys.weight(big_n, p.x as i64, p.xi as i64))
        .fold(0.0f64, f64::max);
    let q_n_dual = sys.stft_seminorm(n, &d.dual)?;
    let weight_sum: f64 = sys
        .lattice()
        .iter()
        .map(|p| {
            sys.weight(n, p.x as i64, p.xi as i64) / sys.weight(big_n, p.x as i64, p.xi as i64)
        })
        .sum();
    let bound = coeff_decay * q_n_dual * weight_sum;
    Ok(SummabilityReport { n, big_n, shells, total, bound })
}
