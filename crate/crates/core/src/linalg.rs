//! Dense complex-matrix kernel.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. Bipartite
//! matrices use the A ⊗ B index layout, `index = a * dim_b + b`, with A the
//! most significant factor.
//!
//! Entropies are in bits. Eigenbases are canonical: inside every cluster of
//! eigenvalues closer than [`DEGENERACY_TOL`], the basis is obtained by
//! projecting the computational basis vectors (in index order) onto the
//! eigenspace and orthonormalizing. A maximally mixed matrix therefore gets
//! the computational basis, and every non-degenerate eigenvector gets a fixed
//! phase.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Eigenvalues closer than this are one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Hermiticity tolerance for inputs to [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-ENTROPY_CLAMP, 0)` are treated as zero by the entropy
/// functions; anything more negative is an error.
pub const ENTROPY_CLAMP: f64 = 1e-10;

// A projected computational vector shorter than this is numerically inside
// the orthogonal complement and is skipped.
const CANONICAL_ACCEPT: f64 = 1e-7;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which factor of a bipartite system an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Real eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// Index ranges of degenerate clusters (consecutive eigenvalues within
    /// `tol` of their neighbour).
    pub fn clusters(&self, tol: f64) -> Vec<Range<usize>> {
        cluster_ranges(&self.eigenvalues, tol)
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(lam);
        }
        scaled * v.adjoint()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

pub(crate) fn cluster_ranges(sorted_desc: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted_desc.len() {
        if i == sorted_desc.len() || (sorted_desc[i - 1] - sorted_desc[i]).abs() > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

/// Frobenius norm of `a - a†`.
pub fn hermitian_deviation(a: &ComplexMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

/// Frobenius norm of `U†U - I`.
pub fn unitary_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (u.adjoint() * u - identity(u.nrows())).norm()
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `‖a − b‖_F`.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok((a - b).norm())
}

fn check_bipartite(mat: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<()> {
    let n = dim_a * dim_b;
    if mat.nrows() != n || mat.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, dims {}x{} need {}x{}",
            mat.nrows(),
            mat.ncols(),
            dim_a,
            dim_b,
            n,
            n
        )));
    }
    Ok(())
}

/// Reduced matrix of the subsystem `keep`; the other factor is traced out.
pub fn partial_trace(
    mat: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Side,
) -> Result<ComplexMatrix> {
    check_bipartite(mat, dim_a, dim_b)?;
    Ok(match keep {
        Side::A => ComplexMatrix::from_fn(dim_a, dim_a, |a, ap| {
            (0..dim_b)
                .map(|b| mat[(a * dim_b + b, ap * dim_b + b)])
                .sum()
        }),
        Side::B => ComplexMatrix::from_fn(dim_b, dim_b, |b, bp| {
            (0..dim_a)
                .map(|a| mat[(a * dim_b + b, a * dim_b + bp)])
                .sum()
        }),
    })
}

/// Transpose on the indices of `side` only.
pub fn partial_transpose(
    mat: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    side: Side,
) -> Result<ComplexMatrix> {
    check_bipartite(mat, dim_a, dim_b)?;
    let n = dim_a * dim_b;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (i / dim_b, i % dim_b);
        let (ap, bp) = (j / dim_b, j % dim_b);
        match side {
            Side::A => mat[(ap * dim_b + b, a * dim_b + bp)],
            Side::B => mat[(a * dim_b + bp, ap * dim_b + b)],
        }
    }))
}

/// Reorders a bipartite matrix from A ⊗ B to B ⊗ A.
pub fn swap_factors(mat: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    check_bipartite(mat, dim_a, dim_b)?;
    let n = dim_a * dim_b;
    // new index b * dim_a + a  <-  old index a * dim_b + b
    let old = |i: usize| (i % dim_a) * dim_b + i / dim_a;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| mat[(old(i), old(j))]))
}

/// Eigenvalues of a Hermitian matrix, descending. No validation.
pub fn eigenvalues_hermitian(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.nrows();
    let mut vals: Vec<f64> = match n {
        0 => Vec::new(),
        1 => vec![a[(0, 0)].re],
        2 => {
            let p = a[(0, 0)].re;
            let q = a[(1, 1)].re;
            let off = 0.5 * (a[(0, 1)] + a[(1, 0)].conj());
            let mean = 0.5 * (p + q);
            let rad = (0.25 * (p - q) * (p - q) + off.norm_sqr()).sqrt();
            vec![mean + rad, mean - rad]
        }
        _ => {
            let h = (a + a.adjoint()) * real(0.5);
            h.symmetric_eigenvalues().iter().copied().collect()
        }
    };
    vals.sort_by(|x, y| y.total_cmp(x));
    vals
}

/// Eigendecomposition of a Hermitian matrix with the canonical eigenbasis
/// described in the module docs.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eig_hermitian needs a square matrix, got {:?}",
            a.shape()
        )));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let dev = hermitian_deviation(a);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = a.nrows();
    let h = (a + a.adjoint()) * real(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let raw = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for range in cluster_ranges(&eigenvalues, DEGENERACY_TOL) {
        let block = raw.columns(range.start, range.len()).into_owned();
        let basis = canonical_subspace_basis(&block);
        eigenvectors
            .columns_mut(range.start, range.len())
            .copy_from(&basis);
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Canonical orthonormal basis of the column span of `block` (orthonormal
/// columns): projections of e_0, e_1, … onto the span, Gram–Schmidt in index
/// order.
fn canonical_subspace_basis(block: &ComplexMatrix) -> ComplexMatrix {
    let (n, k) = block.shape();
    let projector = block * block.adjoint();
    let mut chosen: Vec<ComplexVector> = Vec::with_capacity(k);
    for i in 0..n {
        if chosen.len() == k {
            break;
        }
        let mut v: ComplexVector = projector.column(i).into_owned();
        // two passes of classical Gram–Schmidt
        for _ in 0..2 {
            for u in &chosen {
                let overlap = u.dotc(&v);
                v -= u * overlap;
            }
        }
        let norm = v.norm();
        if norm > CANONICAL_ACCEPT {
            chosen.push(v / Complex64::new(norm, 0.0));
        }
    }
    if chosen.len() < k {
        // Only reachable for badly conditioned input; keep the solver's basis.
        return block.clone();
    }
    ComplexMatrix::from_columns(&chosen)
}

/// Shannon entropy (bits) of a spectrum, with the clamp convention for tiny
/// negative eigenvalues.
pub fn entropy_of_eigenvalues(eigs: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lam in eigs {
        if lam < -ENTROPY_CLAMP {
            return Err(Error::NotPositive(lam));
        }
        s -= xlog2x(lam);
    }
    Ok(s.max(0.0))
}

/// `x log2 x` with `0 log 0 = 0`; non-positive `x` contributes zero.
#[inline]
pub fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    if !rho.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "entropy needs a square matrix, got {:?}",
            rho.shape()
        )));
    }
    let dev = hermitian_deviation(rho);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::InvalidTrace(tr.re));
    }
    entropy_of_eigenvalues(&eigenvalues_hermitian(rho))
}

/// `H₂(p) = −p log p − (1−p) log(1−p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    crate::error::check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}

/// `Tr(ρ²)` for a Hermitian matrix, i.e. `‖ρ‖_F²`.
pub fn purity_of(mat: &ComplexMatrix) -> f64 {
    mat.norm_squared()
}

/// `exp(iH)` for Hermitian `h`.
pub fn expm_i_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    let n = h.nrows();
    match n {
        0 => ComplexMatrix::zeros(0, 0),
        1 => ComplexMatrix::from_element(1, 1, Complex64::from_polar(1.0, h[(0, 0)].re)),
        2 => {
            // h = x0 I + v·σ
            let x0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
            let vz = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
            let off = 0.5 * (h[(1, 0)] + h[(0, 1)].conj());
            let (vx, vy) = (off.re, off.im);
            let r = (vx * vx + vy * vy + vz * vz).sqrt();
            let phase = Complex64::from_polar(1.0, x0);
            let (c, s) = (r.cos(), if r > 0.0 { r.sin() / r } else { 1.0 });
            let i = Complex64::i();
            let m = ComplexMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(c, 0.0) + i * s * vz,
                    i * s * Complex64::new(vx, -vy),
                    i * s * Complex64::new(vx, vy),
                    Complex64::new(c, 0.0) - i * s * vz,
                ],
            );
            m * phase
        }
        _ => {
            let herm = (h + h.adjoint()) * real(0.5);
            let eig = herm.symmetric_eigen();
            let v = &eig.eigenvectors;
            let mut scaled = v.clone();
            for (j, &lam) in eig.eigenvalues.iter().enumerate() {
                let mut col = scaled.column_mut(j);
                col *= Complex64::from_polar(1.0, lam);
            }
            scaled * v.adjoint()
        }
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn outer(psi: &ComplexVector) -> ComplexMatrix {
    psi * psi.adjoint()
}

/// Computational basis vector `e_i` of length `dim`.
pub fn basis_vector(dim: usize, i: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[i] = ONE;
    v
}

/// Pauli matrices (x, y, z).
pub fn pauli() -> [ComplexMatrix; 3] {
    let i = Complex64::i();
    [
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
        ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag(vals: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
            vals.len(),
            vals.iter().map(|&x| real(x)),
        ))
    }

    #[test]
    fn tensor_identities() {
        assert_eq!(tensor(&identity(2), &identity(2)), identity(4));
        let p0 = diag(&[1.0, 0.0]);
        let p1 = diag(&[0.0, 1.0]);
        let k = tensor(&p0, &p1);
        for r in 0..4 {
            for c in 0..4 {
                let expect = if (r, c) == (1, 1) { 1.0 } else { 0.0 };
                assert_eq!(k[(r, c)], real(expect));
            }
        }
    }

    #[test]
    fn tensor_flips_both_qubits() {
        let [x, _, _] = pauli();
        let xx = tensor(&x, &x);
        let out = &xx * basis_vector(4, 0);
        assert_eq!(out, basis_vector(4, 3));
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let mut psi = ComplexVector::zeros(4);
        psi[0] = real(std::f64::consts::FRAC_1_SQRT_2);
        psi[3] = real(std::f64::consts::FRAC_1_SQRT_2);
        let rho = outer(&psi);
        for side in [Side::A, Side::B] {
            let red = partial_trace(&rho, 2, 2, side).unwrap();
            assert_abs_diff_eq!(
                frobenius_distance(&red, &(identity(2) * real(0.5))).unwrap(),
                0.0,
                epsilon = 1e-15
            );
        }
        assert!(partial_trace(&rho, 2, 3, Side::A).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = diag(&[0.7, 0.3]);
        let rb = diag(&[0.2, 0.5, 0.3]);
        let prod = tensor(&ra, &rb);
        assert_abs_diff_eq!(
            frobenius_distance(&partial_trace(&prod, 2, 3, Side::A).unwrap(), &ra).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            frobenius_distance(&partial_trace(&prod, 2, 3, Side::B).unwrap(), &rb).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn partial_transpose_sides_are_transposes_of_each_other() {
        let m = ComplexMatrix::from_fn(6, 6, |i, j| Complex64::new(i as f64, j as f64 * 0.5));
        let ta = partial_transpose(&m, 2, 3, Side::A).unwrap();
        let tb = partial_transpose(&m, 2, 3, Side::B).unwrap();
        assert_eq!(ta.transpose(), tb);
    }

    #[test]
    fn swap_factors_of_product() {
        let ra = diag(&[0.7, 0.3]);
        let rb = diag(&[0.2, 0.5, 0.3]);
        let swapped = swap_factors(&tensor(&ra, &rb), 2, 3).unwrap();
        assert_eq!(swapped, tensor(&rb, &ra));
    }

    #[test]
    fn maximally_mixed_gets_computational_basis() {
        let s = eig_hermitian(&(identity(4) * real(0.25))).unwrap();
        assert_eq!(s.eigenvalues, vec![0.25; 4]);
        assert_abs_diff_eq!((&s.eigenvectors - identity(4)).norm(), 0.0, epsilon = 1e-12);
        assert_eq!(s.clusters(DEGENERACY_TOL), vec![0..4]);
    }

    #[test]
    fn diagonal_spectrum_order() {
        let s = eig_hermitian(&diag(&[0.3, 0.7])).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (s.eigenvectors.column(0) - basis_vector(2, 1)).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            (s.eigenvectors.column(1) - basis_vector(2, 0)).norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rank_one_qubit_projector_eigenvalues() {
        // (1/2)[[1, τ*], [τ, 1]] with |τ| = 1 has characteristic polynomial
        // λ² − λ = 0.
        let tau = Complex64::from_polar(1.0, 0.9);
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[real(0.5), 0.5 * tau.conj(), 0.5 * tau, real(0.5)],
        );
        let s = eig_hermitian(&m).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.0, epsilon = 1e-14);
        assert!((s.reconstruct() - &m).norm() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn degenerate_cluster_basis_is_canonical() {
        // diag(0.5, 0.25, 0.25) rotated inside the degenerate block.
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = identity(3);
        v[(1, 1)] = real(c);
        v[(1, 2)] = Complex64::new(0.0, c);
        v[(2, 1)] = Complex64::new(0.0, c);
        v[(2, 2)] = real(c);
        let m = &v * diag(&[0.5, 0.25, 0.25]) * v.adjoint();
        let s = eig_hermitian(&m).unwrap();
        assert_abs_diff_eq!((&s.eigenvectors - identity(3)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_examples() {
        let mut pure = ComplexMatrix::zeros(3, 3);
        pure[(1, 1)] = ONE;
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-14);
        for d in [2usize, 3, 8] {
            let mixed = identity(d) * real(1.0 / d as f64);
            assert_abs_diff_eq!(
                von_neumann_entropy(&mixed).unwrap(),
                (d as f64).log2(),
                epsilon = 1e-12
            );
        }
        assert!(von_neumann_entropy(&identity(2)).is_err());
        assert!(entropy_of_eigenvalues(&[1.0 + 1e-3, -1e-3]).is_err());
        assert_abs_diff_eq!(entropy_of_eigenvalues(&[1.0, -1e-12]).unwrap(), 0.0);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // −0.25 log 0.25 − 0.75 log 0.75
        let direct = 0.25 * 2.0 + 0.75 * (4.0f64 / 3.0).log2();
        assert_abs_diff_eq!(binary_entropy(0.25).unwrap(), direct, epsilon = 1e-15);
        assert_abs_diff_eq!(
            binary_entropy(0.25).unwrap(),
            0.811278124459,
            epsilon = 1e-12
        );
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let [x, _, _] = pauli();
        assert_abs_diff_eq!(
            frobenius_distance(&identity(2), &x).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        assert_eq!(frobenius_distance(&x, &x).unwrap(), 0.0);
        assert!(frobenius_distance(&x, &identity(3)).is_err());
    }

    #[test]
    fn expm_matches_general_path() {
        let h = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                real(0.3),
                Complex64::new(0.2, -0.7),
                Complex64::new(0.2, 0.7),
                real(-1.1),
            ],
        );
        let closed = expm_i_hermitian(&h);
        // pad into a 3x3 problem to force the eigen path
        let mut big = ComplexMatrix::zeros(3, 3);
        big.view_mut((0, 0), (2, 2)).copy_from(&h);
        let general = expm_i_hermitian(&big);
        assert_abs_diff_eq!(
            (general.view((0, 0), (2, 2)) - &closed).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert!(unitary_deviation(&closed) < 1e-13);
    }
}
