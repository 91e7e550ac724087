//! Finite-truncation probes of shrinking and bounded completeness.
//!
//! Both properties are asymptotic statements about the tail operators
//! `T_n f = sum_{pos >= n} u_pos(f) x_pos`, so at a finite truncation the
//! toolkit only certifies decay *curves*: sups of functionals applied to
//! tails (shrinking) and seminorms of coefficient blocks (bounded
//! completeness). Verdicts are deliberately phrased as "consistent with";
//! a curve that fails to decrease by the required factor yields a negative
//! verdict, as in the unit-vector system with the summation functional,
//! whose harmonic tails decay only logarithmically.

use num_complex::Complex64;

use crate::decomp::{synthesize, tail_apply, Decomposition, Element};
use crate::disc::TaylorRep;
use crate::error::{Error, Result};

/// Decrease factor between the first and last curve value required for a
/// positive verdict.
pub const VERDICT_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    #[serde(rename = "consistent with shrinking")]
    ConsistentWithShrinking,
    #[serde(rename = "not resolved as shrinking at this truncation")]
    NotResolvedShrinking,
    #[serde(rename = "consistent with boundedly complete")]
    ConsistentWithBoundedlyComplete,
    #[serde(rename = "not resolved as boundedly complete at this truncation")]
    NotResolvedBoundedlyComplete,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::ConsistentWithShrinking => "consistent with shrinking",
            Verdict::NotResolvedShrinking => "not resolved as shrinking at this truncation",
            Verdict::ConsistentWithBoundedlyComplete => "consistent with boundedly complete",
            Verdict::NotResolvedBoundedlyComplete => {
                "not resolved as boundedly complete at this truncation"
            }
        };
        f.write_str(s)
    }
}

/// A decay curve over a grid of truncation orders.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TailCurve {
    pub truncations: Vec<usize>,
    pub values: Vec<f64>,
    /// `values.first() / values.last()`; infinite when the last value is 0.
    pub decrease_factor: f64,
    pub verdict: Verdict,
}

fn decrease_factor(values: &[f64]) -> f64 {
    let first = *values.first().unwrap();
    let last = *values.last().unwrap();
    if last == 0.0 {
        if first == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        first / last
    }
}

fn validate_truncations(truncations: &[usize], max: usize) -> Result<()> {
    if truncations.len() < 2 {
        return Err(Error::rejected("need at least two truncation orders"));
    }
    if !truncations.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::rejected("truncation orders must be strictly increasing"));
    }
    if *truncations.last().unwrap() > max {
        return Err(Error::rejected("truncation order beyond the atom count"));
    }
    Ok(())
}

/// Shrinking probe: `sup |phi(T_t f)|` over the probe elements and
/// functionals, for each truncation `t`.
pub fn shrinking_curve<D: Decomposition>(
    d: &D,
    probes: &[D::Elem],
    functionals: &[impl Fn(&D::Elem) -> Complex64],
    truncations: &[usize],
) -> Result<TailCurve> {
    validate_truncations(truncations, d.atom_count())?;
    if probes.is_empty() || functionals.is_empty() {
        return Err(Error::rejected("need at least one probe and one functional"));
    }
    let mut values = Vec::with_capacity(truncations.len());
    for &t in truncations {
        let mut sup = 0.0f64;
        for p in probes {
            let tail = tail_apply(d, t, p)?;
            for phi in functionals {
                sup = sup.max(phi(&tail).norm());
            }
        }
        values.push(sup);
    }
    let factor = decrease_factor(&values);
    let verdict = if factor >= VERDICT_FACTOR {
        Verdict::ConsistentWithShrinking
    } else {
        Verdict::NotResolvedShrinking
    };
    Ok(TailCurve { truncations: truncations.to_vec(), values, decrease_factor: factor, verdict })
}

/// Bounded-completeness probe: seminorms of the coefficient blocks between
/// consecutive truncations, `q_n(sum_{t1 <= pos < t2} c_pos x_pos)`.
pub fn boundedly_complete_curve<D: Decomposition>(
    d: &D,
    coeffs: &[Complex64],
    n: usize,
    truncations: &[usize],
) -> Result<TailCurve> {
    validate_truncations(truncations, d.atom_count())?;
    if coeffs.len() < *truncations.last().unwrap() {
        return Err(Error::rejected("coefficient sequence shorter than the last truncation"));
    }
    let mut values = Vec::with_capacity(truncations.len() - 1);
    for w in truncations.windows(2) {
        let mut block = d.atom(0).zero_like();
        for pos in w[0]..w[1] {
            block.scaled_add(coeffs[pos], &d.atom(pos));
        }
        values.push(d.seminorm(n, &block)?);
    }
    let factor = decrease_factor(&values);
    let verdict = if factor >= VERDICT_FACTOR {
        Verdict::ConsistentWithBoundedlyComplete
    } else {
        Verdict::NotResolvedBoundedlyComplete
    };
    Ok(TailCurve {
        truncations: truncations.to_vec(),
        values,
        decrease_factor: factor,
        verdict,
    })
}

/// Round-trip residual curve `q_n(f - sum_{pos < t} u_pos(f) x_pos)` over a
/// truncation grid, a byproduct reported by the CLI.
pub fn residual_curve<D: Decomposition>(
    d: &D,
    f: &D::Elem,
    n: usize,
    truncations: &[usize],
) -> Result<TailCurve> {
    validate_truncations(truncations, d.atom_count())?;
    let coeffs = d.coefficients(f)?;
    let mut values = Vec::with_capacity(truncations.len());
    for &t in truncations {
        let mut rec = synthesize(d, &coeffs, t)?;
        rec.scale(Complex64::new(-1.0, 0.0));
        rec.scaled_add(Complex64::new(1.0, 0.0), f);
        values.push(d.seminorm(n, &rec)?);
    }
    let factor = decrease_factor(&values);
    let verdict = if factor >= VERDICT_FACTOR {
        Verdict::ConsistentWithShrinking
    } else {
        Verdict::NotResolvedShrinking
    };
    Ok(TailCurve { truncations: truncations.to_vec(), values, decrease_factor: factor, verdict })
}

/// The unit-vector system on complex sequences with the summation norm
/// `q_n(f) = sum_j |f_j|` (independent of the grade). Against the summation
/// functional `f -> sum_j f_j` its tails decay like harmonic sums, so the
/// shrinking probe stays unresolved: the counterexample the verdict
/// language exists for.
#[derive(Debug, Clone)]
pub struct UnitVectorSystem {
    pub len: usize,
}

impl UnitVectorSystem {
    pub fn new(len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::rejected("need at least two coordinates"));
        }
        Ok(UnitVectorSystem { len })
    }

    /// The harmonic element `f_j = 1/(j+1)`.
    pub fn harmonic_element(&self) -> TaylorRep {
        TaylorRep {
            coeffs: (0..self.len)
                .map(|j| Complex64::new(1.0 / (j as f64 + 1.0), 0.0))
                .collect(),
        }
    }

    /// The summation functional `f -> sum_j f_j`, a bounded functional for
    /// the summation norm.
    pub fn summation_functional(&self) -> impl Fn(&TaylorRep) -> Complex64 {
        |f: &TaylorRep| f.coeffs.iter().sum()
    }
}

impl Decomposition for UnitVectorSystem {
    type Elem = TaylorRep;

    fn atom_count(&self) -> usize {
        self.len
    }

    fn atom(&self, pos: usize) -> TaylorRep {
        let mut coeffs = vec![Complex64::default(); self.len];
        coeffs[pos] = Complex64::new(1.0, 0.0);
        TaylorRep { coeffs }
    }

    fn coefficients(&self, f: &TaylorRep) -> Result<Vec<Complex64>> {
        if f.coeffs.len() != self.len {
            return Err(Error::mismatch("coordinate count does not match the system"));
        }
        Ok(f.coeffs.clone())
    }

    fn seminorm(&self, _n: usize, f: &TaylorRep) -> Result<f64> {
        Ok(f.coeffs.iter().map(|c| c.norm()).sum())
    }

    fn max_seminorm_order(&self) -> usize {
        8
    }
}
