//! Numerical toolkit for truncated atomic decompositions in three graded
//! function spaces: smooth functions on a box (exponential atoms), signals
//! on a finite cyclic group (Gabor atoms), and holomorphic functions on the
//! unit disc (reproducing-kernel atoms).
//!
//! Every decomposition pairs an enumerated atom family with computable dual
//! functionals and a graded seminorm family, behind the common
//! [`decomp::Decomposition`] trait. On top of that sit perturbation
//! transfer with certified contraction budgets ([`perturb`]), summability
//! certificates ([`gabor`]), and finite-truncation probes of shrinking and
//! bounded completeness ([`diagnostics`]). All hot loops are ordered maps
//! followed by sequential reductions, so parallel and sequential builds are
//! bitwise identical ([`par`]).

pub mod cutoff;
pub mod decomp;
pub mod diagnostics;
pub mod disc;
pub mod error;
pub mod expdecomp;
pub mod extend;
pub mod gabor;
pub mod grid;
pub mod index;
pub mod par;
pub mod perturb;
pub mod probes;
pub mod report;
pub mod seminorm;
pub mod sequence;
pub mod spectral;

pub use error::{Error, Result};
