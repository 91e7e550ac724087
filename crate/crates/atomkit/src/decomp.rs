//! The analysis/synthesis pair behind every atomic decomposition.
//!
//! A decomposition pairs an enumerated family of atoms with the dual
//! functionals producing the expansion coefficients, so that
//! `f ~ sum_j u_j(f) x_j`. Everything is truncated; claims about the full
//! series are asserted as decay between two truncation levels.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// Linear-space operations needed to form partial sums of atoms.
pub trait Element: Clone {
    fn zero_like(&self) -> Self;
    fn scale(&mut self, c: Complex64);
    /// `self += c * other`.
    fn scaled_add(&mut self, c: Complex64, other: &Self);
}

impl Element for GridFunction {
    fn zero_like(&self) -> Self {
        let mut z = self.clone();
        z.samples.iter_mut().for_each(|s| *s = Complex64::default());
        z
    }

    fn scale(&mut self, c: Complex64) {
        GridFunction::scale(self, c);
    }

    fn scaled_add(&mut self, c: Complex64, other: &Self) {
        self.axpy(c, other);
    }
}

/// An enumerated atomic decomposition with an evaluable seminorm family.
pub trait Decomposition {
    type Elem: Element;

    /// Number of atoms realized at the truncation.
    fn atom_count(&self) -> usize;

    /// The atom at the given enumeration position.
    fn atom(&self, pos: usize) -> Self::Elem;

    /// All dual coefficients `u_j(f)` in enumeration order.
    fn coefficients(&self, f: &Self::Elem) -> Result<Vec<Complex64>>;

    /// The space's graded seminorm of order `n`.
    fn seminorm(&self, n: usize, f: &Self::Elem) -> Result<f64>;

    fn max_seminorm_order(&self) -> usize;
}

/// Partial sum `sum_{pos < upto} coeffs[pos] * atom[pos]`.
pub fn synthesize<D: Decomposition>(d: &D, coeffs: &[Complex64], upto: usize) -> Result<D::Elem> {
    if upto > coeffs.len() {
        return Err(Error::rejected(format!(
            "partial sum order {upto} exceeds available {} coefficients",
            coeffs.len()
        )));
    }
    if upto > d.atom_count() {
        return Err(Error::rejected("partial sum order exceeds atom truncation"));
    }
    let mut acc = d.atom(0).zero_like();
    for pos in 0..upto {
        acc.scaled_add(coeffs[pos], &d.atom(pos));
    }
    Ok(acc)
}

/// `q_n(f - sum_{pos < upto} u_pos(f) x_pos)`.
pub fn reproduction_residual<D: Decomposition>(d: &D, f: &D::Elem, upto: usize, n: usize) -> Result<f64> {
    let coeffs = d.coefficients(f)?;
    let mut rec = synthesize(d, &coeffs, upto)?;
    rec.scale(Complex64::new(-1.0, 0.0));
    rec.scaled_add(Complex64::new(1.0, 0.0), f);
    d.seminorm(n, &rec)
}

/// The tail operator: drop the first `n` enumerated terms of the expansion
/// of `f` and sum the rest (up to truncation).
pub fn tail_apply<D: Decomposition>(d: &D, n: usize, f: &D::Elem) -> Result<D::Elem> {
    if n > d.atom_count() {
        return Err(Error::rejected(format!(
            "tail start {n} beyond truncation {}",
            d.atom_count()
        )));
    }
    let coeffs = d.coefficients(f)?;
    let mut acc = f.zero_like();
    for pos in n..d.atom_count() {
        acc.scaled_add(coeffs[pos], &d.atom(pos));
    }
    Ok(acc)
}
