//! Shell-ordered enumeration of truncated `Z^dim` index sets and the
//! coefficient sequences indexed by them.
//!
//! The series handled here converge unconditionally, so any enumeration is
//! admissible; shells of constant sup-norm (`|j|_inf = 0, 1, 2, ...`,
//! lexicographic within a shell) keep truncations symmetric about 0.

use num_complex::Complex64;
use std::io::Write;

use crate::error::{Error, Result};

/// A multi-index in `Z^dim`; the second component is 0 when `dim == 1`.
pub type MultiIndex = [i64; 2];

pub fn sup_norm(j: MultiIndex) -> i64 {
    j[0].abs().max(j[1].abs())
}

pub fn euclid_norm(j: MultiIndex) -> f64 {
    ((j[0] * j[0] + j[1] * j[1]) as f64).sqrt()
}

/// All indices of `Z^dim` with `|j|_inf <= j_max`, shell by shell,
/// lexicographic within each shell.
pub fn shell_order(dim: u8, j_max: i64) -> Vec<MultiIndex> {
    assert!(dim == 1 || dim == 2, "only dim 1 and 2 are supported");
    let mut out = Vec::new();
    for shell in 0..=j_max {
        if dim == 1 {
            if shell == 0 {
                out.push([0, 0]);
            } else {
                out.push([-shell, 0]);
                out.push([shell, 0]);
            }
        } else {
            for a in -shell..=shell {
                for b in -shell..=shell {
                    if a.abs().max(b.abs()) == shell {
                        out.push([a, b]);
                    }
                }
            }
        }
    }
    out
}

/// A finite coefficient sequence over a shell-ordered truncation of `Z^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeq {
    pub dim: u8,
    pub j_max: i64,
    /// Values in shell order; `values[p]` belongs to `indices[p]`.
    pub values: Vec<Complex64>,
    pub indices: Vec<MultiIndex>,
}

impl CoefficientSeq {
    pub fn new(dim: u8, j_max: i64, values: Vec<Complex64>) -> Result<Self> {
        let indices = shell_order(dim, j_max);
        if values.len() != indices.len() {
            return Err(Error::rejected(format!(
                "expected {} coefficients for dim {dim}, j_max {j_max}; got {}",
                indices.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::rejected("non-finite coefficient"));
        }
        Ok(CoefficientSeq { dim, j_max, values, indices })
    }

    pub fn zeros(dim: u8, j_max: i64) -> Self {
        let indices = shell_order(dim, j_max);
        let values = vec![Complex64::new(0.0, 0.0); indices.len()];
        CoefficientSeq { dim, j_max, values, indices }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Position of an index in the enumeration, if within truncation.
    pub fn position(&self, j: MultiIndex) -> Option<usize> {
        if sup_norm(j) > self.j_max {
            return None;
        }
        self.indices.iter().position(|&k| k == j)
    }

    pub fn get(&self, j: MultiIndex) -> Option<Complex64> {
        self.position(j).map(|p| self.values[p])
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "j1,j2,re,im")?;
        for (j, v) in self.indices.iter().zip(&self.values) {
            writeln!(w, "{},{},{},{}", j[0], j[1], v.re, v.im)?;
        }
        Ok(())
    }
}
