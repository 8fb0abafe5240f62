//! Quantum discord with rank-one projective measurements, and mutual
//! information.

use num_complex::Complex64;

use super::fano::su_generators;
use super::lnu::CommutantParam;
use super::{MeasureReport, Optimum};
use crate::linalg::{
    eig_hermitian, eigenvalues_hermitian, entropy_of_eigenvalues, expm_i_hermitian, identity, real,
    xlog2x, ComplexMatrix, Side,
};
use crate::optimize::{multistart_minimize, OptimizerConfig};
use crate::state::DensityOperator;

/// Entropy of a matrix that is known to be a (possibly unnormalized) state.
pub(crate) fn entropy_unchecked(mat: &ComplexMatrix) -> f64 {
    entropy_of_eigenvalues(&eigenvalues_hermitian(mat)).unwrap_or_else(|_| {
        eigenvalues_hermitian(mat)
            .iter()
            .map(|&x| -xlog2x(x))
            .sum::<f64>()
            .max(0.0)
    })
}

/// `I(ρ) = S(ρ_A) + S(ρ_B) − S(ρ)` in bits.
pub fn mutual_information(rho: &DensityOperator) -> f64 {
    let sa = entropy_unchecked(&rho.reduced(Side::A));
    let sb = entropy_unchecked(&rho.reduced(Side::B));
    (sa + sb - rho.entropy()).max(0.0)
}

/// `S(ρ_B | {Π_j^A})` for measurements on A, with the blocks of `ρ` cached.
#[derive(Debug, Clone)]
pub struct ConditionalEntropy {
    dim_a: usize,
    dim_b: usize,
    // blocks[a * dim_a + a'] = ⟨a|ρ|a'⟩, an operator on B
    blocks: Vec<ComplexMatrix>,
}

impl ConditionalEntropy {
    pub fn new(rho: &DensityOperator) -> Self {
        let (m, n) = rho.dims();
        let mut blocks = Vec::with_capacity(m * m);
        for a in 0..m {
            for ap in 0..m {
                blocks.push(rho.matrix().view((a * n, ap * n), (n, n)).into_owned());
            }
        }
        Self {
            dim_a: m,
            dim_b: n,
            blocks,
        }
    }

    /// Unnormalized post-measurement state of B for outcome `ψ`:
    /// `⟨ψ|ρ|ψ⟩_A = Σ conj(ψ_a) ψ_a' R_aa'`.
    pub fn conditional_state(&self, psi: &[Complex64]) -> ComplexMatrix {
        let m = self.dim_a;
        let mut out = ComplexMatrix::zeros(self.dim_b, self.dim_b);
        for a in 0..m {
            for ap in 0..m {
                let c = psi[a].conj() * psi[ap];
                if c != Complex64::new(0.0, 0.0) {
                    out += &self.blocks[a * m + ap] * c;
                }
            }
        }
        out
    }

    /// `Σ_j p_j S(σ_j / p_j)` for the measurement in the columns of `u`.
    pub fn evaluate(&self, u: &ComplexMatrix) -> f64 {
        let mut total = 0.0;
        for col in u.column_iter() {
            let psi: Vec<Complex64> = col.iter().copied().collect();
            let sigma = self.conditional_state(&psi);
            let p = sigma.trace().re;
            // p S(σ/p) = −Σ μ log μ + p log p
            let s: f64 = eigenvalues_hermitian(&sigma)
                .iter()
                .map(|&mu| -xlog2x(mu))
                .sum();
            total += s + xlog2x(p);
        }
        total.max(0.0)
    }
}

/// Qubit measurement basis from Bloch angles.
fn qubit_basis(theta: f64, phi: f64) -> ComplexMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            real(c),
            -Complex64::from_polar(s, -phi),
            Complex64::from_polar(s, phi),
            real(c),
        ],
    )
}

/// Bloch angles of the projector onto `v`.
fn qubit_angles(v0: Complex64, v1: Complex64) -> Vec<f64> {
    vec![2.0 * v1.norm().atan2(v0.norm()), v1.arg() - v0.arg()]
}

/// Discord with the measurement on `measured`, as an upper bound on the true
/// value.
///
/// The search covers every orthonormal basis of the measured subsystem: Bloch
/// angles for a qubit, `V₀ exp(iH)` with off-diagonal `H` otherwise. One start
/// is always the canonical eigenbasis of the measured reduced state.
pub fn discord(rho: &DensityOperator, measured: Side, config: &OptimizerConfig) -> MeasureReport {
    let state = match measured {
        Side::A => rho.clone(),
        Side::B => rho.swapped(),
    };
    let rho_a = state.reduced(Side::A);
    let offset = entropy_unchecked(&rho_a) - state.entropy();
    let cond = ConditionalEntropy::new(&state);
    let m = state.dim_a();
    let eig = eig_hermitian(&rho_a).expect("reduced state is Hermitian");
    let v0 = eig.eigenvectors;

    let (values, best_basis, residual, evals) = if m == 1 {
        let u = identity(1);
        let v = cond.evaluate(&u);
        (vec![v], u, 0.0, 1)
    } else if m == 2 {
        let f = |x: &[f64]| cond.evaluate(&qubit_basis(x[0], x[1]));
        let start = qubit_angles(v0[(0, 0)], v0[(1, 0)]);
        let res = multistart_minimize(&f, 2, &[start], config);
        let u = qubit_basis(res.best.x[0], res.best.x[1]);
        (res.values, u, res.best.residual, res.evals)
    } else {
        let gens: Vec<ComplexMatrix> = su_generators(m, &identity(m))
            .expect("identity is orthonormal")
            .matrices
            .into_iter()
            .take(m * (m - 1))
            .collect();
        let basis = |x: &[f64]| {
            let mut h = ComplexMatrix::zeros(m, m);
            for (g, &c) in gens.iter().zip(x) {
                h += g * real(c);
            }
            &v0 * expm_i_hermitian(&h)
        };
        let f = |x: &[f64]| cond.evaluate(&basis(x));
        let res = multistart_minimize(&f, gens.len(), &[vec![0.0; gens.len()]], config);
        let u = basis(&res.best.x);
        (res.values, u, res.best.residual, res.evals)
    };

    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let projectors = best_basis
        .column_iter()
        .map(|c| {
            let c = c.into_owned();
            &c * c.adjoint()
        })
        .collect();
    MeasureReport {
        // Non-negative in exact arithmetic; only round-off can push it below.
        value: (offset + best).max(0.0),
        restarts: values.len(),
        residual,
        dispersion: worst - best,
        evaluations: evals,
        optimum: Optimum::Projectors(projectors),
    }
}

/// Whether `ρ` is left invariant, to Frobenius distance `tol`, by dephasing
/// in some eigenbasis of the reduced state on `side`.
///
/// With a degenerate reduced spectrum the eigenbasis is searched over the
/// commutant of the reduced state.
pub fn is_zero_discord(
    rho: &DensityOperator,
    side: Side,
    tol: f64,
    config: &OptimizerConfig,
) -> bool {
    let state = match side {
        Side::A => rho.clone(),
        Side::B => rho.swapped(),
    };
    let (m, n) = state.dims();
    let param =
        CommutantParam::for_reduced(&state.reduced(Side::A)).expect("reduced state is Hermitian");
    let off_diagonal = |x: &[f64]| {
        let w = param.unitary(x);
        let full = crate::linalg::tensor(w.matrix(), &identity(n));
        let rotated = full.adjoint() * state.matrix() * &full;
        let mut acc = 0.0;
        for a in 0..m {
            for ap in 0..m {
                if a != ap {
                    acc += rotated.view((a * n, ap * n), (n, n)).norm_squared();
                }
            }
        }
        acc
    };
    let dim = param.num_params();
    let zeros = vec![0.0; dim];
    if off_diagonal(&zeros).sqrt() <= tol {
        return true;
    }
    if param.blocks.iter().all(|&k| k == 1) {
        return false;
    }
    let res = multistart_minimize(&off_diagonal, dim, &[zeros], config);
    res.best.value.max(0.0).sqrt() <= tol
}
