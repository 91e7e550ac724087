//! Atomic decomposition of weighted-sup holomorphic functions on the unit
//! disc, truncated to polynomials.
//!
//! The disc is split into dyadic annuli `[1 - 2^{-k}, 1 - 2^{-k-1})` with
//! `8 * 2^k` sectors each and an outer remainder ring; each cell `D_j`
//! contributes the atom `f_j(z) = m(D_j) / (1 - conj(lambda_j) z)^2` at the
//! cell centroid `lambda_j`. Functions are carried as Taylor coefficients up
//! to a fixed degree `N`; on that space the sampling operator
//! `S f = sum_j f(lambda_j) f_j` is a dense matrix whose inverse yields the
//! dual functionals `u_j(f) = (S^{-1} f)(lambda_j)`. The grading is the
//! family of weighted sups `q_n(f) = sup_z |f(z)| v_n(z)` with
//! `v_n(z) = min(1, |log(1 - |z|)|^{-n})`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::decomp::{Decomposition, Element};
use crate::error::{Error, Result};
use crate::par;

/// One partition cell: a polar rectangle with its measure and centroid.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub r_lo: f64,
    pub r_hi: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub area: f64,
    pub centroid: Complex64,
}

fn cell(r_lo: f64, r_hi: f64, theta_lo: f64, theta_hi: f64) -> Cell {
    let area = 0.5 * (theta_hi - theta_lo) * (r_hi * r_hi - r_lo * r_lo);
    let r_bar = (2.0 / 3.0) * (r_hi.powi(3) - r_lo.powi(3)) / (r_hi * r_hi - r_lo * r_lo);
    let t_bar = 0.5 * (theta_lo + theta_hi);
    Cell {
        r_lo,
        r_hi,
        theta_lo,
        theta_hi,
        area,
        centroid: Complex64::from_polar(r_bar, t_bar),
    }
}

/// Dyadic sector partition of the unit disc at depth `K`.
#[derive(Debug, Clone)]
pub struct DiscPartition {
    pub depth: u32,
    pub cells: Vec<Cell>,
}

impl DiscPartition {
    pub fn build(depth: u32) -> Result<Self> {
        if depth < 1 || depth > 10 {
            return Err(Error::rejected("partition depth must lie in 1..=10"));
        }
        let tau = 2.0 * std::f64::consts::PI;
        let radius = |k: u32| 1.0 - 0.5f64.powi(k as i32);
        let mut cells = Vec::new();
        for k in 0..depth {
            let (r_lo, r_hi) = (radius(k), radius(k + 1));
            let sectors = 8usize << k;
            for s in 0..sectors {
                let t0 = tau * s as f64 / sectors as f64;
                let t1 = tau * (s + 1) as f64 / sectors as f64;
                cells.push(cell(r_lo, r_hi, t0, t1));
            }
        }
        // remainder ring up to the boundary
        let sectors = 8usize << (depth + 1);
        for s in 0..sectors {
            let t0 = tau * s as f64 / sectors as f64;
            let t1 = tau * (s + 1) as f64 / sectors as f64;
            cells.push(cell(radius(depth), 1.0, t0, t1));
        }
        Ok(DiscPartition { depth, cells })
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }
}

/// A polynomial on the disc, stored as Taylor coefficients `c_0 .. c_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorRep {
    pub coeffs: Vec<Complex64>,
}

impl TaylorRep {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::rejected("empty coefficient vector"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::rejected("non-finite Taylor coefficient"));
        }
        Ok(TaylorRep { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation at a point of the closed disc.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

impl Element for TaylorRep {
    fn zero_like(&self) -> Self {
        TaylorRep { coeffs: vec![Complex64::default(); self.coeffs.len()] }
    }

    fn scale(&mut self, c: Complex64) {
        for v in &mut self.coeffs {
            *v *= c;
        }
    }

    fn scaled_add(&mut self, c: Complex64, other: &Self) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (v, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *v += c * o;
        }
    }
}

/// The weight `v_n(z) = min(1, |log(1 - |z|)|^{-n})`; `v_n(0) = 1` and the
/// weight is identically 1 wherever `|log(1 - |z|)| <= 1`.
pub fn disc_weight(n: usize, r: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&r));
    if n == 0 {
        return 1.0;
    }
    let l = (1.0 - r).ln().abs();
    if l <= 1.0 {
        1.0
    } else {
        l.powi(-(n as i32))
    }
}

/// Condition-number ceiling for the sampling matrix; larger systems are
/// refused rather than silently inverted.
pub const CONDITION_CEILING: f64 = 1e8;

/// The disc decomposition at a fixed partition depth and Taylor degree.
#[derive(Debug, Clone)]
pub struct DiscDecomposition {
    pub partition: DiscPartition,
    pub degree: usize,
    pub condition: f64,
    /// The sampling matrix `S` on Taylor coefficients.
    s_matrix: DMatrix<Complex64>,
    /// LU factors of `S` (stored as the decomposed matrix).
    s_inv: DMatrix<Complex64>,
    max_order: usize,
}

/// Assemble the sampling matrix `S = A B` with
/// `A[n][j] = (n+1) m(D_j) conj(lambda_j)^n` and `B[j][m] = lambda_j^m`
/// (rows in parallel).
pub fn sampling_matrix(partition: &DiscPartition, degree: usize) -> DMatrix<Complex64> {
    sampling_matrix_impl(partition, degree, true)
}

/// Sequential assembly (benchmark baseline).
pub fn sampling_matrix_seq(partition: &DiscPartition, degree: usize) -> DMatrix<Complex64> {
    sampling_matrix_impl(partition, degree, false)
}

fn sampling_matrix_impl(partition: &DiscPartition, degree: usize, parallel: bool) -> DMatrix<Complex64> {
    let dim = degree + 1;
    let cells = &partition.cells;
    let row = |n: usize| -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); dim];
        for c in cells {
            let lam = c.centroid;
            let a = Complex64::new((n as f64 + 1.0) * c.area, 0.0) * lam.conj().powu(n as u32);
            let mut pow = Complex64::new(1.0, 0.0);
            for slot in out.iter_mut() {
                *slot += a * pow;
                pow *= lam;
            }
        }
        out
    };
    let rows = if parallel {
        par::map_indexed(dim, row)
    } else {
        par::map_indexed_seq(dim, row)
    };
    DMatrix::from_fn(dim, dim, |n, m| rows[n][m])
}

impl DiscDecomposition {
    pub fn new(depth: u32, degree: usize) -> Result<Self> {
        if degree < 1 || degree > 256 {
            return Err(Error::rejected("Taylor degree must lie in 1..=256"));
        }
        let partition = DiscPartition::build(depth)?;
        let s_matrix = sampling_matrix(&partition, degree);
        let svd = s_matrix.clone().svd(false, false);
        let (mut smax, mut smin) = (0.0f64, f64::INFINITY);
        for &sv in svd.singular_values.iter() {
            smax = smax.max(sv);
            smin = smin.min(sv);
        }
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(condition <= CONDITION_CEILING) {
            return Err(Error::gate(format!(
                "sampling matrix condition {condition:.3e} exceeds ceiling {CONDITION_CEILING:.0e}; \
                 refine the partition or lower the degree"
            )));
        }
        let s_inv = s_matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::gate("sampling matrix is numerically singular"))?;
        Ok(DiscDecomposition {
            partition,
            degree,
            condition,
            s_matrix,
            s_inv,
            max_order: 8,
        })
    }

    pub fn s_matrix(&self) -> &DMatrix<Complex64> {
        &self.s_matrix
    }

    /// The atom for the given cell, truncated at the working degree.
    pub fn atom_for_cell(&self, c: &Cell) -> TaylorRep {
        let lam_bar = c.centroid.conj();
        let mut pow = Complex64::new(1.0, 0.0);
        let coeffs = (0..=self.degree)
            .map(|n| {
                let v = Complex64::new(c.area * (n as f64 + 1.0), 0.0) * pow;
                pow *= lam_bar;
                v
            })
            .collect();
        TaylorRep { coeffs }
    }

    fn apply_s_inv(&self, f: &TaylorRep) -> Result<TaylorRep> {
        if f.coeffs.len() != self.degree + 1 {
            return Err(Error::mismatch("Taylor degree does not match the decomposition"));
        }
        let v = nalgebra::DVector::from_iterator(f.coeffs.len(), f.coeffs.iter().copied());
        let out = &self.s_inv * v;
        Ok(TaylorRep { coeffs: out.iter().copied().collect() })
    }

    /// The weighted-sup seminorm evaluated on a fixed deterministic grid of
    /// dyadic radii and equispaced angles.
    pub fn weighted_sup(&self, n: usize, f: &TaylorRep) -> Result<f64> {
        if n > self.max_order {
            return Err(Error::rejected(format!(
                "order {n} outside admissible range 0..={}",
                self.max_order
            )));
        }
        let angles = 256usize;
        let tau = 2.0 * std::f64::consts::PI;
        let mut sup = 0.0f64;
        for k in 0..=16u32 {
            let r = 1.0 - 0.5f64.powi(k as i32);
            let w = disc_weight(n, r);
            for s in 0..angles {
                let z = Complex64::from_polar(r, tau * s as f64 / angles as f64);
                sup = sup.max(f.eval(z).norm() * w);
            }
        }
        Ok(sup)
    }
}

impl Decomposition for DiscDecomposition {
    type Elem = TaylorRep;

    fn atom_count(&self) -> usize {
        self.partition.cells.len()
    }

    fn atom(&self, pos: usize) -> TaylorRep {
        self.atom_for_cell(&self.partition.cells[pos])
    }

    fn coefficients(&self, f: &TaylorRep) -> Result<Vec<Complex64>> {
        let g = self.apply_s_inv(f)?;
        Ok(self.partition.cells.iter().map(|c| g.eval(c.centroid)).collect())
    }

    fn seminorm(&self, n: usize, f: &TaylorRep) -> Result<f64> {
        self.weighted_sup(n, f)
    }

    fn max_seminorm_order(&self) -> usize {
        self.max_order
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::synthesize;
    use std::f64::consts::PI;

    /// `f(z) = 1 / (1 - z/2)` truncated at the working degree.
    fn geometric_probe(degree: usize) -> TaylorRep {
        TaylorRep::new((0..=degree).map(|m| Complex64::new(0.5f64.powi(m as i32), 0.0)).collect())
            .unwrap()
    }

    #[test]
    fn partition_areas_sum_to_disc_area() {
        for depth in [1u32, 3, 6] {
            let p = DiscPartition::build(depth).unwrap();
            assert!(
                (p.total_area() - PI).abs() < 1e-12,
                "depth {depth}: {}",
                p.total_area()
            );
        }
    }

    #[test]
    fn centroids_lie_in_their_cells() {
        let p = DiscPartition::build(4).unwrap();
        for c in &p.cells {
            let r = c.centroid.norm();
            assert!(r >= c.r_lo && r < c.r_hi, "centroid radius {r} outside [{}, {})", c.r_lo, c.r_hi);
            let t = c.centroid.arg().rem_euclid(2.0 * PI);
            assert!(t >= c.theta_lo - 1e-12 && t <= c.theta_hi + 1e-12);
        }
    }

    #[test]
    fn taylor_eval_matches_horner_free_sum() {
        let f = geometric_probe(12);
        let z = Complex64::new(0.3, -0.4);
        let direct: Complex64 = (0..=12)
            .map(|m| f.coeffs[m] * z.powu(m as u32))
            .sum();
        assert!((f.eval(z) - direct).norm() < 1e-14);
    }

    #[test]
    fn sampling_matrix_parallel_matches_sequential_bitwise() {
        let p = DiscPartition::build(3).unwrap();
        let a = sampling_matrix(&p, 16);
        let b = sampling_matrix_seq(&p, 16);
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn sampling_matrix_is_riemann_sum_of_reproducing_identity() {
        // S approximates pi times the identity on low-degree polynomials:
        // sum_j m(D_j) K(., lambda_j) f(lambda_j) ~ integral against the
        // kernel (n+1) (conj(lambda) z)^n / pi reproduces f.
        let p = DiscPartition::build(6).unwrap();
        let s = sampling_matrix(&p, 8);
        for n in 0..=4 {
            for m in 0..=8 {
                let want = if n == m { PI } else { 0.0 };
                let got = s[(n, m)];
                assert!(
                    (got - Complex64::new(want, 0.0)).norm() < 0.15,
                    "S[{n},{m}] = {got}"
                );
            }
        }
    }

    #[test]
    fn condition_is_modest_for_balanced_truncation() {
        let d = DiscDecomposition::new(3, 16).unwrap();
        assert!(d.condition < 100.0, "condition {}", d.condition);
    }

    #[test]
    fn over_resolved_degree_trips_the_gate() {
        // depth 1 has 40 cells; degree 64 needs rank 65 and must be refused
        let err = DiscDecomposition::new(1, 64).unwrap_err();
        assert!(err.is_gate_refusal(), "unexpected error {err}");
    }

    #[test]
    fn reproduction_is_exact_on_the_truncated_space() {
        // S is inverted exactly, so synthesis over all cells reproduces the
        // Taylor coefficients up to conditioning roundoff.
        let d = DiscDecomposition::new(4, 16).unwrap();
        let f = geometric_probe(16);
        let coeffs = d.coefficients(&f).unwrap();
        let rec = synthesize(&d, &coeffs, coeffs.len()).unwrap();
        for (a, b) in rec.coeffs.iter().zip(&f.coeffs) {
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn weight_branches() {
        assert_eq!(disc_weight(3, 0.0), 1.0);
        assert_eq!(disc_weight(0, 0.9), 1.0);
        // inside the log ball the weight is clamped at 1
        assert_eq!(disc_weight(2, 0.5), 1.0);
        // near the boundary it decays, faster for larger n
        let w1 = disc_weight(1, 0.999);
        let w3 = disc_weight(3, 0.999);
        assert!(w1 < 1.0 && w3 < w1);
    }

    #[test]
    fn weighted_sup_scales_homogeneously() {
        let d = DiscDecomposition::new(2, 8).unwrap();
        let f = geometric_probe(8);
        let q = d.weighted_sup(2, &f).unwrap();
        let mut g = f.clone();
        g.scale(Complex64::new(0.0, -2.5));
        let q2 = d.weighted_sup(2, &g).unwrap();
        assert!((q2 - 2.5 * q).abs() < 1e-12 * q.max(1.0));
    }

    #[test]
    fn refinement_shrinks_the_quadrature_error() {
        // S/pi is a Riemann sum of the reproducing identity; its deviation
        // from the identity on the geometric probe decreases as the
        // partition refines
        let mut prev = f64::INFINITY;
        for depth in [1u32, 2, 3] {
            let d = DiscDecomposition::new(depth, 8).unwrap();
            let f = geometric_probe(8);
            let v = nalgebra::DVector::from_iterator(9, f.coeffs.iter().copied());
            let sf = d.s_matrix() * v / Complex64::new(PI, 0.0);
            let mut res = TaylorRep { coeffs: sf.iter().copied().collect() };
            res.scaled_add(Complex64::new(-1.0, 0.0), &f);
            let q = d.weighted_sup(1, &res).unwrap();
            assert!(q <= prev * 1.05, "depth {depth}: {q} vs {prev}");
            prev = q;
        }
    }
}
