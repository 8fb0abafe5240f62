//! Measurement-induced disturbance: the information lost by measuring both
//! subsystems in the eigenbases of their reduced states.

use super::discord::{entropy_unchecked, mutual_information};
use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian, identity, ComplexMatrix, Side};
use crate::state::DensityOperator;

const PROJECTOR_TOL: f64 = 1e-9;

/// Rank-one projectors onto the canonical eigenbasis of a Hermitian matrix,
/// in descending eigenvalue order.
pub fn eigenprojectors(mat: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    let spec = eig_hermitian(mat)?;
    Ok(spec
        .eigenvectors
        .column_iter()
        .map(|c| {
            let c = c.into_owned();
            &c * c.adjoint()
        })
        .collect())
}

/// Checks a complete set of rank-one projectors and returns the unit vectors
/// they project onto, as columns.
fn projector_basis(projectors: &[ComplexMatrix], dim: usize) -> Result<ComplexMatrix> {
    if projectors.len() != dim {
        return Err(Error::InvalidProjectors(format!(
            "{} projectors for dimension {dim}",
            projectors.len()
        )));
    }
    let mut sum = ComplexMatrix::zeros(dim, dim);
    let mut basis = ComplexMatrix::zeros(dim, dim);
    for (k, p) in projectors.iter().enumerate() {
        if p.shape() != (dim, dim) {
            return Err(Error::InvalidProjectors(format!(
                "projector {k} is {:?}, expected {dim}x{dim}",
                p.shape()
            )));
        }
        let idem = (p * p - p).norm();
        let herm = linalg::hermitian_deviation(p);
        let rank = (linalg::trace(p).re - 1.0).abs();
        if idem > PROJECTOR_TOL || herm > PROJECTOR_TOL || rank > PROJECTOR_TOL {
            return Err(Error::InvalidProjectors(format!(
                "projector {k} is not a rank-one orthogonal projector"
            )));
        }
        sum += p;
        // the largest column of P is a multiple of its range vector
        let j = (0..dim)
            .max_by(|&x, &y| p.column(x).norm().total_cmp(&p.column(y).norm()))
            .unwrap_or(0);
        let col = p.column(j).into_owned();
        let norm = col.norm();
        basis.set_column(k, &(col / linalg::real(norm)));
    }
    let completeness = (sum - identity(dim)).norm();
    if completeness > PROJECTOR_TOL {
        return Err(Error::InvalidProjectors(format!(
            "projectors do not sum to the identity (off by {completeness:.3e})"
        )));
    }
    Ok(basis)
}

/// `W diag(W† ρ W) W†` for an orthonormal product basis `W`.
fn dephase_in(rho: &DensityOperator, w: &ComplexMatrix) -> DensityOperator {
    let rotated = w.adjoint() * rho.matrix() * w;
    let mut diag = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for i in 0..rho.dim() {
        diag[(i, i)] = linalg::real(rotated[(i, i)].re.max(0.0));
    }
    let mut mat = w * diag * w.adjoint();
    mat = (&mat + mat.adjoint()) * linalg::real(0.5);
    let tr = linalg::trace(&mat).re;
    DensityOperator::from_parts(rho.dim_a(), rho.dim_b(), mat / linalg::real(tr))
}

/// `Σ_ij (Π_i ⊗ Π_j) ρ (Π_i ⊗ Π_j)` for complete sets of rank-one projectors.
pub fn dephase(
    rho: &DensityOperator,
    proj_a: &[ComplexMatrix],
    proj_b: &[ComplexMatrix],
) -> Result<DensityOperator> {
    let va = projector_basis(proj_a, rho.dim_a())?;
    let vb = projector_basis(proj_b, rho.dim_b())?;
    Ok(dephase_in(rho, &linalg::tensor(&va, &vb)))
}

/// MID together with the intermediate quantities.
#[derive(Debug, Clone)]
pub struct MidBreakdown {
    /// `S(P(ρ)) − S(ρ)`.
    pub value: f64,
    /// `I(ρ) − I(P(ρ))`.
    pub via_mutual_information: f64,
    pub via_entropy: f64,
    pub dephased: DensityOperator,
    pub basis_a: ComplexMatrix,
    pub basis_b: ComplexMatrix,
}

impl MidBreakdown {
    /// Difference between the two formulas.
    pub fn discrepancy(&self) -> f64 {
        (self.via_mutual_information - self.via_entropy).abs()
    }
}

pub fn mid_breakdown(rho: &DensityOperator) -> MidBreakdown {
    let basis_a = eig_hermitian(&rho.reduced(Side::A))
        .expect("reduced state is Hermitian")
        .eigenvectors;
    let basis_b = eig_hermitian(&rho.reduced(Side::B))
        .expect("reduced state is Hermitian")
        .eigenvectors;
    let dephased = dephase_in(rho, &linalg::tensor(&basis_a, &basis_b));
    let via_mutual_information = mutual_information(rho) - mutual_information(&dephased);
    let via_entropy = entropy_unchecked(dephased.matrix()) - rho.entropy();
    MidBreakdown {
        value: via_entropy,
        via_mutual_information,
        via_entropy,
        dephased,
        basis_a,
        basis_b,
    }
}

/// Measurement-induced disturbance in bits.
pub fn mid(rho: &DensityOperator) -> f64 {
    mid_breakdown(rho).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;
    use crate::states::{bell_state, classical_classical, horodecki_2x4, random_density_seeded};
    use approx::assert_abs_diff_eq;

    fn computational(dim: usize) -> Vec<ComplexMatrix> {
        (0..dim)
            .map(|k| linalg::outer(&linalg::basis_vector(dim, k)))
            .collect()
    }

    #[test]
    fn bell_state_examples() {
        assert_abs_diff_eq!(mid(&bell_state()), 1.0, epsilon = 1e-12);
        let p = dephase(&bell_state(), &computational(2), &computational(2)).unwrap();
        let expect = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            real(0.5),
            real(0.0),
            real(0.0),
            real(0.5),
        ]));
        assert!((p.matrix() - expect).norm() < 1e-14);
    }

    #[test]
    fn classical_states_are_undisturbed() {
        let cc = classical_classical(2, 3, &[0.1, 0.2, 0.05, 0.3, 0.15, 0.2]).unwrap();
        assert_abs_diff_eq!(mid(&cc), 0.0, epsilon = 1e-12);
        let p = dephase(&cc, &computational(2), &computational(3)).unwrap();
        assert!((p.matrix() - cc.matrix()).norm() < 1e-14);
    }

    #[test]
    fn formulas_agree_and_reductions_survive() {
        for k in 0..40 {
            let dims = [(2, 2), (2, 3), (3, 3), (2, 4)][k % 4];
            let rho = random_density_seeded(dims.0, dims.1, 1 + k % 4, k as u64).unwrap();
            let b = mid_breakdown(&rho);
            assert!(b.discrepancy() < 1e-9, "{}", b.discrepancy());
            assert!(b.value >= -1e-9);
            for side in [Side::A, Side::B] {
                assert!((b.dephased.reduced(side) - rho.reduced(side)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn horodecki_dephasing_drops_cross_block_coherences() {
        let p = 0.3;
        let rho = horodecki_2x4(p).unwrap();
        let pa = eigenprojectors(&rho.reduced(Side::A)).unwrap();
        let pb = eigenprojectors(&rho.reduced(Side::B)).unwrap();
        let dephased = dephase(&rho, &pa, &pb).unwrap();
        let m = rho.matrix();
        let d = dephased.matrix();
        // coherences inside the (1+p)/2 block of A = |1⟩ survive
        assert_abs_diff_eq!(d[(4, 7)].re, m[(4, 7)].re, epsilon = 1e-12);
        // coherences between the two A blocks are removed
        for (i, j) in [(0, 5), (1, 6), (2, 7)] {
            assert!(m[(i, j)].norm() > 1e-3);
            assert!(d[(i, j)].norm() < 1e-12);
        }
    }

    #[test]
    fn horodecki_at_zero_is_a_product_state() {
        let rho = horodecki_2x4(0.0).unwrap();
        assert!(mid(&rho).abs() < 1e-12);
        assert!(crate::measures::mutual_information(&rho) < 1e-12);
    }

    #[test]
    fn rejects_bad_projector_sets() {
        let rho = bell_state();
        let half = vec![computational(2)[0].clone()];
        assert!(matches!(
            dephase(&rho, &half, &computational(2)),
            Err(Error::InvalidProjectors(_))
        ));
        let mut doubled = computational(2);
        doubled[1] = doubled[0].clone();
        assert!(dephase(&rho, &doubled, &computational(2)).is_err());
        let scaled = vec![identity(2), ComplexMatrix::zeros(2, 2)];
        assert!(dephase(&rho, &scaled, &computational(2)).is_err());
    }
}
