//! Shift of a state under locally noneffective unitaries (LNU): local
//! unitaries that commute with the reduced state of the subsystem they act on.
//!
//! The shift is `d(ρ, U) = ‖ρ − ρ_f‖_F / √2 = √(Tr ρ² − Tr ρ ρ_f)` with
//! `ρ_f = (U ⊗ I) ρ (U ⊗ I)†`, and the LNU distance is its maximum over the
//! commutant of the reduced state.

use num_complex::Complex64;

use super::fano::su_generators;
use super::{MeasureReport, Optimum};
use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian, identity, real, ComplexMatrix, Side, DEGENERACY_TOL};
use crate::optimize::{multistart_minimize, OptimizerConfig};
use crate::state::{DensityOperator, UnitaryMatrix};

/// A commuting unitary must satisfy `‖[ρ_A, U]‖_F` below this.
pub const COMMUTATION_TOL: f64 = 1e-8;

/// Smallest shift reported as a witness.
pub const WITNESS_THRESHOLD: f64 = 1e-8;

/// Parameterization of the unitaries commuting with a Hermitian matrix.
///
/// In the canonical eigenbasis the commutant is block diagonal, one block per
/// degenerate eigenvalue cluster. Block `b` of size `k` is `exp(i Σ x_j g_j)`
/// with `g_j` the SU(k) generators, plus the identity for every block except
/// the first; the first block carries no overall phase because a global phase
/// does not move the state.
#[derive(Debug, Clone)]
pub struct CommutantParam {
    /// Canonical eigenbasis, as columns.
    pub eigenbasis: ComplexMatrix,
    /// Sizes of the degenerate clusters, in eigenbasis order.
    pub blocks: Vec<usize>,
    /// Last parameter vector applied via [`CommutantParam::with_parameters`].
    pub parameters: Vec<f64>,
    generators: Vec<Vec<ComplexMatrix>>,
}

impl CommutantParam {
    /// Commutant of `reduced`, clustering eigenvalues at `DEGENERACY_TOL`.
    pub fn for_reduced(reduced: &ComplexMatrix) -> Result<Self> {
        let spec = eig_hermitian(reduced)?;
        let blocks = spec
            .clusters(DEGENERACY_TOL)
            .into_iter()
            .map(|r| r.len())
            .collect();
        Ok(Self::from_blocks(spec.eigenvectors, blocks))
    }

    /// Only diagonal phases in `basis`, whatever the degeneracy.
    pub fn phases_only(basis: ComplexMatrix) -> Self {
        let blocks = vec![1; basis.ncols()];
        Self::from_blocks(basis, blocks)
    }

    fn from_blocks(eigenbasis: ComplexMatrix, blocks: Vec<usize>) -> Self {
        let generators: Vec<Vec<ComplexMatrix>> = blocks
            .iter()
            .enumerate()
            .map(|(b, &k)| {
                let mut g = su_generators(k, &identity(k))
                    .map(|s| s.matrices)
                    .unwrap_or_default();
                if b > 0 {
                    g.push(identity(k));
                }
                g
            })
            .collect();
        let parameters = vec![0.0; generators.iter().map(Vec::len).sum()];
        Self {
            eigenbasis,
            blocks,
            parameters,
            generators,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenbasis.nrows()
    }

    pub fn num_params(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    pub fn with_parameters(mut self, params: &[f64]) -> Self {
        assert_eq!(params.len(), self.num_params());
        self.parameters = params.to_vec();
        self
    }

    /// The block-diagonal unitary in eigenbasis coordinates.
    pub fn block_unitary(&self, params: &[f64]) -> ComplexMatrix {
        assert_eq!(params.len(), self.num_params(), "parameter count");
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d, d);
        let (mut offset, mut p) = (0, 0);
        for (k, gens) in self.blocks.iter().zip(&self.generators) {
            let mut h = ComplexMatrix::zeros(*k, *k);
            for g in gens {
                h += g * real(params[p]);
                p += 1;
            }
            out.view_mut((offset, offset), (*k, *k))
                .copy_from(&linalg::expm_i_hermitian(&h));
            offset += k;
        }
        out
    }

    /// The commuting unitary in the original coordinates, `V B V†`.
    pub fn unitary(&self, params: &[f64]) -> UnitaryMatrix {
        let v = &self.eigenbasis;
        UnitaryMatrix::from_parts(v * self.block_unitary(params) * v.adjoint())
    }
}

/// `Tr(ρ ρ_f)` as a quadratic form in the entries of a local unitary on A.
///
/// With `R_xy` the `N×N` blocks of `ρ` written in `basis ⊗ I`,
/// `Tr(ρ ρ_f) = Σ U_ac conj(U_a'c') Tr(R_a'a R_cc')`, so the `M⁴` traces are
/// computed once and each evaluation costs `O(M⁴)` regardless of `N`.
#[derive(Debug, Clone)]
pub struct LocalShiftObjective {
    dim_a: usize,
    purity: f64,
    // q[((a * m + c) * m + ap) * m + cp] = Tr(R_{ap a} R_{c cp})
    q: Vec<Complex64>,
}

impl LocalShiftObjective {
    pub fn new(rho: &DensityOperator, basis: &ComplexMatrix) -> Self {
        let (m, n) = rho.dims();
        let w = linalg::tensor(basis, &identity(n));
        let rotated = w.adjoint() * rho.matrix() * &w;
        let block = |x: usize, y: usize| rotated.view((x * n, y * n), (n, n));
        let mut q = vec![Complex64::new(0.0, 0.0); m * m * m * m];
        for a in 0..m {
            for c in 0..m {
                for ap in 0..m {
                    for cp in 0..m {
                        let r1 = block(ap, a);
                        let r2 = block(c, cp);
                        let mut acc = Complex64::new(0.0, 0.0);
                        for i in 0..n {
                            for j in 0..n {
                                acc += r1[(i, j)] * r2[(j, i)];
                            }
                        }
                        q[((a * m + c) * m + ap) * m + cp] = acc;
                    }
                }
            }
        }
        Self {
            dim_a: m,
            purity: rho.purity(),
            q,
        }
    }

    pub fn purity(&self) -> f64 {
        self.purity
    }

    /// `Re Tr(ρ ρ_f)` for a unitary given in the objective's basis.
    pub fn overlap(&self, u: &ComplexMatrix) -> f64 {
        let m = self.dim_a;
        let mut acc = 0.0;
        for a in 0..m {
            for c in 0..m {
                let uac = u[(a, c)];
                if uac == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let base = (a * m + c) * m * m;
                let mut inner = Complex64::new(0.0, 0.0);
                for ap in 0..m {
                    for cp in 0..m {
                        inner += self.q[base + ap * m + cp] * u[(ap, cp)].conj();
                    }
                }
                acc += (uac * inner).re;
            }
        }
        acc
    }

    /// `d(ρ, U)²`.
    pub fn shift_squared(&self, u: &ComplexMatrix) -> f64 {
        self.purity - self.overlap(u)
    }
}

fn check_commutes(rho_a: &ComplexMatrix, u: &ComplexMatrix) -> Result<()> {
    let residual = (rho_a * u - u * rho_a).norm();
    if residual > COMMUTATION_TOL {
        return Err(Error::NonCommuting(residual));
    }
    Ok(())
}

/// Both routes for `d(ρ, U_A)`: `(‖ρ − ρ_f‖_F / √2, √(Tr ρ² − Tr ρρ_f))`.
pub fn lnu_shift_routes(rho: &DensityOperator, u_a: &UnitaryMatrix) -> Result<(f64, f64)> {
    let rho_f = rho.apply_local(u_a.matrix(), Side::A)?;
    check_commutes(&rho.reduced(Side::A), u_a.matrix())?;
    let frob = (rho.matrix() - &rho_f).norm() / std::f64::consts::SQRT_2;
    let overlap = linalg::trace(&(rho.matrix() * &rho_f)).re;
    let via_trace = (rho.purity() - overlap).max(0.0).sqrt();
    Ok((frob, via_trace))
}

/// `d(ρ, U_A)` for a unitary on A that commutes with `ρ_A`.
pub fn lnu_shift(rho: &DensityOperator, u_a: &UnitaryMatrix) -> Result<f64> {
    lnu_shift_routes(rho, u_a).map(|(frob, _)| frob)
}

/// Maximizes the shift over `param` and converts the optimum back to the
/// original coordinates.
fn maximize_shift(
    rho: &DensityOperator,
    param: &CommutantParam,
    config: &OptimizerConfig,
) -> MeasureReport {
    let objective = LocalShiftObjective::new(rho, &param.eigenbasis);
    let f = |x: &[f64]| -objective.shift_squared(&param.block_unitary(x));
    let dim = param.num_params();
    let res = multistart_minimize(&f, dim, &[], config);
    let to_shift = |v: f64| (-v).max(0.0).sqrt();
    let shifts: Vec<f64> = res.values.iter().map(|&v| to_shift(v)).collect();
    let hi = shifts.iter().copied().fold(0.0, f64::max);
    let lo = shifts.iter().copied().fold(f64::INFINITY, f64::min);
    // The quadratic form loses about half the digits near zero; the
    // Frobenius route does not.
    let u = param.unitary(&res.best.x);
    let shifted = rho
        .apply_local(u.matrix(), Side::A)
        .expect("commutant unitary has the subsystem dimension");
    MeasureReport {
        value: (rho.matrix() - shifted).norm() / std::f64::consts::SQRT_2,
        restarts: res.values.len(),
        residual: res.best.residual,
        dispersion: if shifts.is_empty() { 0.0 } else { hi - lo },
        evaluations: res.evals,
        optimum: Optimum::Unitary(u),
    }
}

/// LNU distance with the unitary acting on `side`.
///
/// The search runs over the full commutant of the reduced state (block
/// unitaries on degenerate eigenvalue clusters), so the value is a certified
/// lower bound on the true maximum.
pub fn lnu_distance(rho: &DensityOperator, side: Side, config: &OptimizerConfig) -> MeasureReport {
    let state = match side {
        Side::A => rho.clone(),
        Side::B => rho.swapped(),
    };
    let param = CommutantParam::for_reduced(&state.reduced(Side::A))
        .expect("reduced state of a valid density operator is Hermitian");
    maximize_shift(&state, &param, config)
}

/// Upper bound `√(2(Tr ρ² − 1/MN))`, valid for either target subsystem.
pub fn lnu_bound(rho: &DensityOperator) -> f64 {
    // Tr ρ² − 1/D = ‖ρ − I/D‖², without the cancellation
    let dim = rho.dim();
    let centred = rho.matrix() - identity(dim) * real(1.0 / dim as f64);
    (2.0 * centred.norm_squared()).sqrt()
}

/// Searches the unitaries diagonal in the canonical eigenbasis of `ρ_A` for
/// one that shifts the state; `None` if no shift above `WITNESS_THRESHOLD`
/// is found.
pub fn discord_witness_unitary(
    rho: &DensityOperator,
    config: &OptimizerConfig,
) -> Option<UnitaryMatrix> {
    let spec = eig_hermitian(&rho.reduced(Side::A)).expect("reduced state is Hermitian");
    let param = CommutantParam::phases_only(spec.eigenvectors);
    let report = maximize_shift(rho, &param, config);
    match report.optimum {
        Optimum::Unitary(u) if report.value > WITNESS_THRESHOLD => Some(u),
        _ => None,
    }
}
