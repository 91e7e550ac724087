//! Stability of atomic decompositions under small perturbations.
//!
//! Perturbing the atoms `x_j -> y_j` defines the difference operator
//! `T f = sum_j u_j(f) (x_j - y_j)`; when `T` is a contraction the perturbed
//! family is again a decomposition with duals `u_j ∘ (I - T)^{-1}`, and the
//! inverse is evaluated by a truncated Neumann series whose length is chosen
//! from the contraction factor. Rank-one perturbations admit a closed-form
//! inverse that serves as an exact oracle for the series. Perturbing the
//! duals instead is admissible below a per-position threshold computed from
//! the graded seminorms of the atoms.

use num_complex::Complex64;

use crate::decomp::{synthesize, Decomposition, Element};
use crate::error::{Error, Result};

/// A linear map on decomposition elements.
pub trait LinearMap<E: Element> {
    fn apply(&self, x: &E) -> Result<E>;
}

impl<E: Element, F: Fn(&E) -> Result<E>> LinearMap<E> for F {
    fn apply(&self, x: &E) -> Result<E> {
        self(x)
    }
}

/// Default contraction budget: series lengths are chosen for this factor
/// unless a sharper estimate is certified.
pub const DEFAULT_CONTRACTION: f64 = 0.5;
pub const DEFAULT_SERIES_TOL: f64 = 1e-6;

/// Smallest `K` with `c^{K+1} / (1 - c) <= tol`; refuses `c >= 1`.
pub fn neumann_terms(c: f64, tol: f64) -> Result<usize> {
    if !(c >= 0.0) || !(tol > 0.0) {
        return Err(Error::rejected("contraction factor and tolerance must be positive"));
    }
    if c >= 1.0 {
        return Err(Error::gate(format!(
            "contraction factor {c} >= 1: the perturbation is too large for the series inverse"
        )));
    }
    if c == 0.0 {
        return Ok(0);
    }
    let mut k = 0usize;
    while c.powi(k as i32 + 1) / (1.0 - c) > tol {
        k += 1;
        if k > 10_000 {
            return Err(Error::gate("series length exceeds 10000 terms"));
        }
    }
    Ok(k)
}

/// Residual bound `c^{K+1} / (1 - c)` left after `K` series terms.
pub fn series_remainder(c: f64, terms: usize) -> f64 {
    c.powi(terms as i32 + 1) / (1.0 - c)
}

/// `sum_{k=0}^{terms} T^k f`, evaluated iteratively.
pub fn neumann_apply<E: Element>(t: &impl LinearMap<E>, f: &E, terms: usize) -> Result<E> {
    let mut acc = f.clone();
    let mut cur = f.clone();
    for _ in 0..terms {
        cur = t.apply(&cur)?;
        acc.scaled_add(Complex64::new(1.0, 0.0), &cur);
    }
    Ok(acc)
}

/// Estimate the contraction factor `max_i q_n(T f_i) / q_n(f_i)` over a
/// probe family; refuses when the estimate reaches 1.
pub fn contraction_estimate<E: Element>(
    t: &impl LinearMap<E>,
    probes: &[E],
    seminorm: impl Fn(&E) -> Result<f64>,
) -> Result<f64> {
    if probes.is_empty() {
        return Err(Error::rejected("need at least one probe"));
    }
    let mut c = 0.0f64;
    for p in probes {
        let denom = seminorm(p)?;
        if denom == 0.0 {
            continue;
        }
        c = c.max(seminorm(&t.apply(p)?)? / denom);
    }
    if c >= 1.0 {
        return Err(Error::gate(format!(
            "probe-certified contraction factor {c:.6} reaches 1"
        )));
    }
    Ok(c)
}

/// The rank-one map `x -> phi(x) u` with its closed-form resolvent.
pub struct RankOne<E, F: Fn(&E) -> Complex64> {
    pub direction: E,
    pub functional: F,
}

impl<E: Element, F: Fn(&E) -> Complex64> RankOne<E, F> {
    /// `(I - T)^{-1} x = x + phi(x) u / (1 - phi(u))`; refuses when the
    /// eigenvalue `phi(u)` sits at 1 within the working margin.
    pub fn inverse_apply(&self, x: &E) -> Result<E> {
        let lam = (self.functional)(&self.direction);
        let denom = Complex64::new(1.0, 0.0) - lam;
        if denom.norm() <= 1e-12 {
            return Err(Error::gate(format!(
                "rank-one eigenvalue {lam} sits at 1: the map is not invertible"
            )));
        }
        let mut out = x.clone();
        out.scaled_add((self.functional)(x) / denom, &self.direction);
        Ok(out)
    }
}

impl<E: Element, F: Fn(&E) -> Complex64> LinearMap<E> for RankOne<E, F> {
    fn apply(&self, x: &E) -> Result<E> {
        let mut out = self.direction.clone();
        Element::scale(&mut out, (self.functional)(x));
        Ok(out)
    }
}

/// A decomposition whose atoms have been replaced; the duals are transferred
/// through the truncated Neumann inverse of `I - T`.
pub struct PerturbedAtoms<'a, D: Decomposition> {
    pub base: &'a D,
    new_atoms: Vec<D::Elem>,
    terms: usize,
}

impl<'a, D: Decomposition> PerturbedAtoms<'a, D> {
    pub fn new(base: &'a D, new_atoms: Vec<D::Elem>, contraction: f64, tol: f64) -> Result<Self> {
        if new_atoms.len() != base.atom_count() {
            return Err(Error::mismatch("perturbed family must match the atom count"));
        }
        let terms = neumann_terms(contraction, tol)?;
        Ok(PerturbedAtoms { base, new_atoms, terms })
    }

    pub fn series_terms(&self) -> usize {
        self.terms
    }

    /// `T f = sum_j u_j(f) (x_j - y_j)`.
    pub fn difference_apply(&self, f: &D::Elem) -> Result<D::Elem> {
        let coeffs = self.base.coefficients(f)?;
        let mut acc = f.zero_like();
        for (pos, c) in coeffs.iter().enumerate() {
            let mut diff = self.base.atom(pos);
            diff.scaled_add(Complex64::new(-1.0, 0.0), &self.new_atoms[pos]);
            acc.scaled_add(*c, &diff);
        }
        Ok(acc)
    }
}

impl<D: Decomposition> Decomposition for PerturbedAtoms<'_, D> {
    type Elem = D::Elem;

    fn atom_count(&self) -> usize {
        self.new_atoms.len()
    }

    fn atom(&self, pos: usize) -> D::Elem {
        self.new_atoms[pos].clone()
    }

    fn coefficients(&self, f: &D::Elem) -> Result<Vec<Complex64>> {
        let t = |x: &D::Elem| self.difference_apply(x);
        let g = neumann_apply(&t, f, self.terms)?;
        self.base.coefficients(&g)
    }

    fn seminorm(&self, n: usize, f: &D::Elem) -> Result<f64> {
        self.base.seminorm(n, f)
    }

    fn max_seminorm_order(&self) -> usize {
        self.base.max_seminorm_order()
    }
}

/// One row of the dual-perturbation threshold table: position `j` (1-based),
/// the graded seminorms of the atom entering the bound, and the admissible
/// noise size `1 / (1 + j^2 p_j(x_j) + 3^j p_1(x_j))` with `p_k = q_{k-1}`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ThresholdRow {
    pub j: usize,
    pub p_j_atom: f64,
    pub p_1_atom: f64,
    pub threshold: f64,
}

pub fn dual_gap_thresholds<D: Decomposition>(d: &D, count: usize) -> Result<Vec<ThresholdRow>> {
    if count == 0 || count > d.atom_count() {
        return Err(Error::rejected("threshold count must lie in 1..=atom count"));
    }
    if count > d.max_seminorm_order() + 1 {
        return Err(Error::rejected(
            "threshold count exceeds the admissible seminorm range",
        ));
    }
    let mut rows = Vec::with_capacity(count);
    for j in 1..=count {
        let atom = d.atom(j - 1);
        let p_j = d.seminorm(j - 1, &atom)?;
        let p_1 = d.seminorm(0, &atom)?;
        let threshold = 1.0 / (1.0 + (j * j) as f64 * p_j + 3.0f64.powi(j as i32) * p_1);
        rows.push(ThresholdRow { j, p_j_atom: p_j, p_1_atom: p_1, threshold });
    }
    Ok(rows)
}

/// A decomposition whose duals carry additive noise functionals
/// `v_j = u_j + eps_j`; reproduction is repaired through the Neumann
/// inverse of `I + T` with `T f = sum_j eps_j(f) x_j`.
pub struct PerturbedDuals<'a, D: Decomposition> {
    pub base: &'a D,
    noise: Vec<Box<dyn Fn(&D::Elem) -> Complex64 + Sync + 'a>>,
    terms: usize,
}

impl<'a, D: Decomposition> PerturbedDuals<'a, D> {
    pub fn new(
        base: &'a D,
        noise: Vec<Box<dyn Fn(&D::Elem) -> Complex64 + Sync + 'a>>,
        contraction: f64,
        tol: f64,
    ) -> Result<Self> {
        if noise.len() != base.atom_count() {
            return Err(Error::mismatch("noise family must match the atom count"));
        }
        let terms = neumann_terms(contraction, tol)?;
        Ok(PerturbedDuals { base, noise, terms })
    }

    /// Raw noisy coefficients `v_j(f) = u_j(f) + eps_j(f)`.
    pub fn noisy_coefficients(&self, f: &D::Elem) -> Result<Vec<Complex64>> {
        let mut coeffs = self.base.coefficients(f)?;
        for (c, eps) in coeffs.iter_mut().zip(&self.noise) {
            *c += eps(f);
        }
        Ok(coeffs)
    }

    /// `T f = sum_j eps_j(f) x_j`, the deviation the noise adds to the
    /// reproduction; `I + T` is inverted by the Neumann series of `-T`.
    pub fn noise_apply(&self, f: &D::Elem) -> Result<D::Elem> {
        let mut acc = f.zero_like();
        for (pos, eps) in self.noise.iter().enumerate() {
            acc.scaled_add(eps(f), &self.base.atom(pos));
        }
        Ok(acc)
    }

    fn neg_noise_apply(&self, f: &D::Elem) -> Result<D::Elem> {
        let mut acc = self.noise_apply(f)?;
        acc.scale(Complex64::new(-1.0, 0.0));
        Ok(acc)
    }
}

impl<D: Decomposition> Decomposition for PerturbedDuals<'_, D> {
    type Elem = D::Elem;

    fn atom_count(&self) -> usize {
        self.base.atom_count()
    }

    fn atom(&self, pos: usize) -> D::Elem {
        self.base.atom(pos)
    }

    fn coefficients(&self, f: &D::Elem) -> Result<Vec<Complex64>> {
        let t = |x: &D::Elem| self.neg_noise_apply(x);
        let g = neumann_apply(&t, f, self.terms)?;
        self.noisy_coefficients(&g)
    }

    fn seminorm(&self, n: usize, f: &D::Elem) -> Result<f64> {
        self.base.seminorm(n, f)
    }

    fn max_seminorm_order(&self) -> usize {
        self.base.max_seminorm_order()
    }
}

/// Reproduction residual of a perturbed system: `q_n(f - sum_j v_j(f) y_j)`.
pub fn transfer_residual<D: Decomposition>(d: &D, f: &D::Elem, n: usize) -> Result<f64> {
    let coeffs = d.coefficients(f)?;
    let mut rec = synthesize(d, &coeffs, coeffs.len())?;
    rec.scale(Complex64::new(-1.0, 0.0));
    rec.scaled_add(Complex64::new(1.0, 0.0), f);
    d.seminorm(n, &rec)
}
