//! Exponential atomic decomposition of smooth functions on a box.
//!
//! A function on `K = [-M, M]^p` is extended to a compactly supported
//! function on `[-2M, 2M)^p`, periodized with period `4M`, and expanded in
//! the exponentials `e^{2 pi i x . lambda_j}` with `lambda_j = j / (4M)`.
//! The dual functionals are the Fourier coefficients of the extension; the
//! smoothness of the cutoff makes the coefficients decay faster than any
//! fixed power of `|j|` over the resolved range.

use num_complex::Complex64;

use crate::cutoff::CutoffFunction;
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::extend::{extend, ExtensionBackend};
use crate::grid::GridFunction;
use crate::index::{euclid_norm, shell_order, sup_norm, CoefficientSeq, MultiIndex};
use crate::seminorm::DerivativeSup;
use crate::spectral;

pub const DEFAULT_PLATEAU_FRACTION: f64 = 0.1;
pub const DEFAULT_STEP_BETA: f64 = 30.0;

/// The exponential decomposition at a fixed truncation.
#[derive(Debug, Clone)]
pub struct ExpDecomposition {
    pub m: f64,
    pub dim: u8,
    pub grid_n: usize,
    pub j_max: i64,
    pub cutoff: CutoffFunction,
    pub backend: ExtensionBackend,
    indices: Vec<MultiIndex>,
    seminorms: DerivativeSup,
}

impl ExpDecomposition {
    pub fn new(
        m: f64,
        dim: u8,
        grid_n: usize,
        j_max: i64,
        plateau_fraction: f64,
        backend: ExtensionBackend,
    ) -> Result<Self> {
        if j_max < 1 || j_max as usize > grid_n / 2 - 1 {
            return Err(Error::rejected("index truncation must satisfy 1 <= J <= N/2 - 1"));
        }
        let cutoff = CutoffFunction::build(m, plateau_fraction, DEFAULT_STEP_BETA, grid_n, dim)?;
        Ok(ExpDecomposition {
            m,
            dim,
            grid_n,
            j_max,
            cutoff,
            backend,
            indices: shell_order(dim, j_max),
            seminorms: DerivativeSup::new(m, 8),
        })
    }

    /// Same decomposition with a different cutoff (used by the
    /// non-uniqueness checks: distinct cutoffs give distinct dual systems).
    pub fn with_cutoff(&self, plateau_fraction: f64, beta: f64) -> Result<Self> {
        let mut cutoff = CutoffFunction::build(self.m, plateau_fraction, beta, self.grid_n, self.dim)?;
        cutoff.beta = beta;
        Ok(ExpDecomposition { cutoff, ..self.clone() })
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn frequency(&self, j: MultiIndex) -> [f64; 2] {
        [j[0] as f64 / (4.0 * self.m), j[1] as f64 / (4.0 * self.m)]
    }

    /// The atom `e^{2 pi i x . lambda_j}` sampled on the full box.
    pub fn atom_grid(&self, j: MultiIndex) -> GridFunction {
        let lam = self.frequency(j);
        let tau = 2.0 * std::f64::consts::PI;
        match self.dim {
            1 => GridFunction::from_fn_1d(2.0 * self.m, self.grid_n, Some(4.0 * self.m), |x| {
                Complex64::from_polar(1.0, tau * lam[0] * x)
            })
            .expect("valid grid"),
            _ => GridFunction::from_fn_2d(2.0 * self.m, self.grid_n, Some(4.0 * self.m), |x1, x2| {
                Complex64::from_polar(1.0, tau * (lam[0] * x1 + lam[1] * x2))
            })
            .expect("valid grid"),
        }
    }

    pub fn extend(&self, f: &GridFunction) -> Result<GridFunction> {
        extend(f, self.backend, &self.cutoff)
    }

    /// `analyze`: the dual coefficients `u_j(f)`, i.e. the Fourier
    /// coefficients of the periodized extension, shell-ordered up to `j_max`.
    pub fn analyze(&self, f: &GridFunction) -> Result<CoefficientSeq> {
        let hf = self.extend(f)?;
        fourier_coeffs(&hf, self.j_max)
    }

    pub fn seminorms(&self) -> DerivativeSup {
        self.seminorms
    }

    /// Positions with `|j|_inf <= shell`, i.e. the count of atoms realized
    /// by the truncation order `shell`.
    pub fn positions_up_to_shell(&self, shell: i64) -> usize {
        self.indices.iter().take_while(|&&j| sup_norm(j) <= shell).count()
    }
}

impl Decomposition for ExpDecomposition {
    type Elem = GridFunction;

    fn atom_count(&self) -> usize {
        self.indices.len()
    }

    fn atom(&self, pos: usize) -> GridFunction {
        self.atom_grid(self.indices[pos])
    }

    fn coefficients(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        Ok(self.analyze(f)?.values)
    }

    fn seminorm(&self, n: usize, f: &GridFunction) -> Result<f64> {
        self.seminorms.eval(n, f)
    }

    fn max_seminorm_order(&self) -> usize {
        self.seminorms.max_order
    }
}

/// Fourier coefficients of a periodic grid function at the shell-ordered
/// indices `|j|_inf <= j_max`.
pub fn fourier_coeffs(hf: &GridFunction, j_max: i64) -> Result<CoefficientSeq> {
    if hf.period.is_none() {
        return Err(Error::rejected("fourier_coeffs needs a periodic grid function"));
    }
    if j_max as usize > hf.n / 2 - 1 {
        return Err(Error::rejected("truncation exceeds the resolved frequency range"));
    }
    let table = spectral::fft_coefficients(hf)?;
    let n = hf.n as i64;
    let at = |j: i64| ((j % n + n) % n) as usize;
    let dim = hf.dim();
    let values = shell_order(dim, j_max)
        .into_iter()
        .map(|j| match dim {
            1 => table[at(j[0])],
            _ => table[at(j[0]) * hf.n + at(j[1])],
        })
        .collect();
    CoefficientSeq::new(dim, j_max, values)
}

/// One row of the coefficient decay table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DecayRow {
    pub m: u32,
    pub weighted_sup: f64,
}

/// Weighted sups `sup_j |a_j| |j|^m` and a log-log least-squares slope of
/// the per-shell coefficient maxima over the top two octaves.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub fitted_slope: f64,
    pub fit_range: (i64, i64),
}

pub fn decay_report(coeffs: &CoefficientSeq, m_max: u32) -> Result<DecayReport> {
    if m_max > 10 {
        return Err(Error::rejected("decay order capped at 10"));
    }
    let mut rows = Vec::new();
    for m in 0..=m_max {
        let sup = coeffs
            .indices
            .iter()
            .zip(&coeffs.values)
            .map(|(&j, v)| {
                let r = euclid_norm(j);
                let w = if m == 0 { 1.0 } else { r.powi(m as i32) };
                v.norm() * w
            })
            .fold(0.0f64, f64::max);
        rows.push(DecayRow { m, weighted_sup: sup });
    }
    // per-shell maxima over the top two octaves [J/4, J]
    let j_max = coeffs.j_max;
    let lo = (j_max / 4).max(1);
    let mut pts = Vec::new();
    for shell in lo..=j_max {
        let sup = coeffs
            .indices
            .iter()
            .zip(&coeffs.values)
            .filter(|(&j, _)| sup_norm(j) == shell)
            .map(|(_, v)| v.norm())
            .fold(0.0f64, f64::max);
        if sup > 0.0 {
            pts.push(((shell as f64).ln(), sup.ln()));
        }
    }
    let fitted_slope = least_squares_slope(&pts);
    Ok(DecayReport { rows, fitted_slope, fit_range: (lo, j_max) })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// The decomposition with one atom removed and all duals corrected by the
/// closed-form rank-one inverse.
#[derive(Debug, Clone)]
pub struct RemovedAtomDecomposition {
    pub base: ExpDecomposition,
    pub removed: MultiIndex,
    removed_pos: usize,
    /// `u_j(f_{j0})` for all base positions.
    atom_coeffs: Vec<Complex64>,
    /// `u_{j0}(f_{j0})`.
    self_coeff: Complex64,
}

/// Margin required on `|1 - u_{j0}(f_{j0})|` before removal is attempted.
pub const REMOVAL_MARGIN: f64 = 1e-6;

pub fn remove_atom(base: &ExpDecomposition, j0: MultiIndex) -> Result<RemovedAtomDecomposition> {
    let pos = base
        .indices()
        .iter()
        .position(|&j| j == j0)
        .ok_or_else(|| Error::rejected(format!("index {j0:?} outside truncation")))?;
    let atom = base.atom_grid(j0);
    let atom_coeffs = base.coefficients(&atom)?;
    let self_coeff = atom_coeffs[pos];
    let margin = (Complex64::new(1.0, 0.0) - self_coeff).norm();
    if margin <= REMOVAL_MARGIN {
        return Err(Error::gate(format!(
            "removal needs |1 - u_j0(f_j0)| > {REMOVAL_MARGIN}; got {margin:.3e} (u_j0(f_j0) = {self_coeff})"
        )));
    }
    Ok(RemovedAtomDecomposition {
        base: base.clone(),
        removed: j0,
        removed_pos: pos,
        atom_coeffs,
        self_coeff,
    })
}

impl RemovedAtomDecomposition {
    /// Map a position of this decomposition to a base position.
    fn base_pos(&self, pos: usize) -> usize {
        if pos < self.removed_pos {
            pos
        } else {
            pos + 1
        }
    }

    /// Corrected dual values `y_j'(f) = u_j(f) + u_j(f_j0) u_j0(f) / (1 - u_j0(f_j0))`.
    pub fn corrected_coefficients(&self, base_coeffs: &[Complex64]) -> Vec<Complex64> {
        let gain = base_coeffs[self.removed_pos] / (Complex64::new(1.0, 0.0) - self.self_coeff);
        (0..self.atom_count())
            .map(|pos| {
                let bp = self.base_pos(pos);
                base_coeffs[bp] + self.atom_coeffs[bp] * gain
            })
            .collect()
    }
}

impl Decomposition for RemovedAtomDecomposition {
    type Elem = GridFunction;

    fn atom_count(&self) -> usize {
        self.base.atom_count() - 1
    }

    fn atom(&self, pos: usize) -> GridFunction {
        self.base.atom(self.base_pos(pos))
    }

    fn coefficients(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        let base_coeffs = self.base.coefficients(f)?;
        Ok(self.corrected_coefficients(&base_coeffs))
    }

    fn seminorm(&self, n: usize, f: &GridFunction) -> Result<f64> {
        self.base.seminorm(n, f)
    }

    fn max_seminorm_order(&self) -> usize {
        self.base.max_seminorm_order()
    }
}
