//! Sequence-space seminorms built from partial sums of atoms.
//!
//! `q_p((a_j)) = sup_n p(sum_{j<=n} a_j x_j)` turns coefficient sequences
//! into a graded sequence space; the unconditional variant takes the sup
//! over sign multipliers in the unit ball of `l_inf` and is estimated here
//! by random sampling from below and by absolute summability from above.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::{Decomposition, Element};
use crate::error::{Error, Result};

/// `max_{m <= upto} q_n(sum_{pos < m} coeffs[pos] x_pos)`, monotone
/// nondecreasing in `upto`.
pub fn partial_sum_seminorm<D: Decomposition>(
    d: &D,
    coeffs: &[Complex64],
    n: usize,
    upto: usize,
) -> Result<f64> {
    if upto > coeffs.len() || upto > d.atom_count() {
        return Err(Error::rejected("partial-sum order exceeds truncation"));
    }
    let mut acc = d.atom(0).zero_like();
    let mut sup = d.seminorm(n, &acc)?;
    for pos in 0..upto {
        acc.scaled_add(coeffs[pos], &d.atom(pos));
        sup = sup.max(d.seminorm(n, &acc)?);
    }
    Ok(sup)
}

/// Sandwich estimate of the unconditional seminorm
/// `sup_{|b|_inf <= 1} q_n(sum b_j a_j x_j)`.
///
/// Lower bound: max over `r` random sign vectors (the all-ones vector is
/// always included). Upper bound: `sum |a_j| q_n(x_j)`.
pub fn unconditional_estimate<D: Decomposition>(
    d: &D,
    coeffs: &[Complex64],
    n: usize,
    r: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if r == 0 {
        return Err(Error::rejected("need at least one sign sample"));
    }
    if coeffs.len() > d.atom_count() {
        return Err(Error::rejected("more coefficients than atoms"));
    }
    let count = coeffs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lower = 0.0f64;
    for sample in 0..r {
        let signs: Vec<f64> = (0..count)
            .map(|_| if sample == 0 || rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let mut acc = d.atom(0).zero_like();
        for pos in 0..count {
            acc.scaled_add(coeffs[pos] * signs[pos], &d.atom(pos));
        }
        lower = lower.max(d.seminorm(n, &acc)?);
    }
    let mut upper = 0.0;
    for pos in 0..count {
        if coeffs[pos].norm() > 0.0 {
            upper += coeffs[pos].norm() * d.seminorm(n, &d.atom(pos))?;
        }
    }
    Ok((lower, upper))
}
