//! Constructors for the named states and random ensembles.
//!
//! Randomness always comes from a caller-owned generator; the `*_seeded`
//! helpers wrap [`seeded_rng`] for one-shot use.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_range, Error, Result};
use crate::linalg::{self, identity, real, ComplexMatrix, ComplexVector, Side, ZERO};
use crate::state::{DensityOperator, UnitaryMatrix};

/// The generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` of the master seed; used to give every grid
/// point its own generator regardless of scheduling.
pub fn stream_rng(master_seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// `(|00⟩ + |11⟩)/√2` on two qubits.
pub fn bell_vector() -> ComplexVector {
    let mut psi = ComplexVector::zeros(4);
    psi[0] = real(FRAC_1_SQRT_2);
    psi[3] = real(FRAC_1_SQRT_2);
    psi
}

pub fn bell_state() -> DensityOperator {
    DensityOperator::from_parts(2, 2, linalg::outer(&bell_vector()))
}

pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> DensityOperator {
    let n = dim_a * dim_b;
    DensityOperator::from_parts(dim_a, dim_b, identity(n) * real(1.0 / n as f64))
}

/// `ρ_a ⊗ ρ_b`.
pub fn product(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<DensityOperator> {
    DensityOperator::new(rho_a.nrows(), rho_b.nrows(), linalg::tensor(rho_a, rho_b))
}

/// `Σ p_ij |i⟩⟨i| ⊗ |j⟩⟨j|`; `probs` is row-major `dim_a × dim_b`.
pub fn classical_classical(dim_a: usize, dim_b: usize, probs: &[f64]) -> Result<DensityOperator> {
    if probs.len() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for a {}x{} system",
            probs.len(),
            dim_a,
            dim_b
        )));
    }
    let diag = ComplexVector::from_iterator(probs.len(), probs.iter().map(|&p| real(p)));
    DensityOperator::new(dim_a, dim_b, ComplexMatrix::from_diagonal(&diag))
}

/// Two-qubit isotropic state `(1−z)/4 I + z|Ψ⟩⟨Ψ|`.
pub fn isotropic(z: f64) -> Result<DensityOperator> {
    check_range("z", z, 0.0, 1.0, "[0, 1]")?;
    let mat = identity(4) * real((1.0 - z) / 4.0) + linalg::outer(&bell_vector()) * real(z);
    Ok(DensityOperator::from_parts(2, 2, mat))
}

/// `(1−ε) I/(MN) + ε|ψ⟩⟨ψ|`.
pub fn pseudo_pure(
    dims: (usize, usize),
    epsilon: f64,
    psi: &ComplexVector,
) -> Result<DensityOperator> {
    check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;
    let n = dims.0 * dims.1;
    if psi.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "state vector has length {}, system dimension is {}",
            psi.len(),
            n
        )));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::OutOfRange {
            name: "‖ψ‖",
            value: norm,
            range: "{1}",
        });
    }
    let mat = identity(n) * real((1.0 - epsilon) / n as f64) + linalg::outer(psi) * real(epsilon);
    DensityOperator::new(dims.0, dims.1, mat)
}

/// The `n + 1` qubit DQC1 state with polarization `alpha` and unitary `u`.
///
/// The top (control) qubit is subsystem A, the `n` register qubits are B.
#[derive(Debug, Clone)]
pub struct Dqc1State {
    n: usize,
    alpha: f64,
    u: UnitaryMatrix,
    tau: Complex64,
    diag: Vec<Complex64>,
    rho: DensityOperator,
}

/// `|τ|` at or below this leaves `arg τ` undefined.
pub const TAU_DEGENERATE: f64 = 1e-12;

impl Dqc1State {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.u
    }

    /// Normalized trace `Tr(U)/2ⁿ`.
    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Diagonal entries `u_jj`.
    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn density(&self) -> &DensityOperator {
        &self.rho
    }

    /// True when `|τ|` is too small for `arg τ` to be meaningful; the control
    /// qubit's reduced state is then maximally mixed.
    pub fn is_degenerate(&self) -> bool {
        self.tau.norm() <= TAU_DEGENERATE
    }

    /// `arg τ`, or 0 when `τ` vanishes.
    pub fn phase(&self) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            self.tau.arg()
        }
    }
}

/// Assembles `(1/2^{n+1}) [[I, αU†], [αU, I]]`.
pub fn dqc1(n: usize, alpha: f64, u: UnitaryMatrix) -> Result<Dqc1State> {
    check_range("alpha", alpha, 0.0, 1.0, "[0, 1]")?;
    if n == 0 || n > 12 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            range: "[1, 12]",
        });
    }
    let dim = 1usize << n;
    if u.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "unitary has dimension {}, n = {} needs {}",
            u.dim(),
            n,
            dim
        )));
    }
    let c = 1.0 / (2 * dim) as f64;
    let um = u.matrix();
    let mut mat = ComplexMatrix::zeros(2 * dim, 2 * dim);
    for i in 0..dim {
        mat[(i, i)] = real(c);
        mat[(dim + i, dim + i)] = real(c);
        for j in 0..dim {
            mat[(dim + i, j)] = um[(i, j)] * (alpha * c);
            mat[(i, dim + j)] = um[(j, i)].conj() * (alpha * c);
        }
    }
    let tau = u.trace() / dim as f64;
    let diag = (0..dim).map(|j| um[(j, j)]).collect();
    Ok(Dqc1State {
        n,
        alpha,
        u,
        tau,
        diag,
        rho: DensityOperator::from_parts(2, dim, mat),
    })
}

/// The 2 ⊗ 4 bound entangled state of P. Horodecki, A-major ordering.
pub fn horodecki_2x4(p: f64) -> Result<DensityOperator> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let mut m = ComplexMatrix::zeros(8, 8);
    for i in [0usize, 1, 2, 3, 5, 6] {
        m[(i, i)] = real(p);
    }
    for (i, j) in [(0usize, 5usize), (1, 6), (2, 7)] {
        m[(i, j)] = real(p);
        m[(j, i)] = real(p);
    }
    let s = (1.0 - p * p).max(0.0).sqrt() / 2.0;
    m[(4, 4)] = real((1.0 + p) / 2.0);
    m[(7, 7)] = real((1.0 + p) / 2.0);
    m[(4, 7)] = real(s);
    m[(7, 4)] = real(s);
    Ok(DensityOperator::from_parts(2, 4, m / real(1.0 + 7.0 * p)))
}

/// `½(|a+⟩⟨a+| ⊗ |b+⟩⟨b+| + |a−⟩⟨a−| ⊗ |b−⟩⟨b−|)` with `a = ẑ` and
/// `b = (sin γ cos δ, sin γ sin δ, cos γ)`.
pub fn zero_discord_example(gamma: f64, delta: f64) -> DensityOperator {
    let [x, y, z] = linalg::pauli();
    let b = [
        gamma.sin() * delta.cos(),
        gamma.sin() * delta.sin(),
        gamma.cos(),
    ];
    let b_sigma = &x * real(b[0]) + &y * real(b[1]) + &z * real(b[2]);
    let half = real(0.5);
    let a_plus = (identity(2) + &z) * half;
    let a_minus = (identity(2) - &z) * half;
    let b_plus = (identity(2) + &b_sigma) * half;
    let b_minus = (identity(2) - &b_sigma) * half;
    let mat = (linalg::tensor(&a_plus, &b_plus) + linalg::tensor(&a_minus, &b_minus)) * half;
    DensityOperator::from_parts(2, 2, mat)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the diagonal of
/// R made real positive.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::OutOfRange {
            name: "dim",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            real(1.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    UnitaryMatrix::new(q)
}

pub fn haar_unitary_seeded(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    haar_unitary(dim, &mut seeded_rng(seed))
}

/// Haar-random unit vector.
pub fn random_pure_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(dim, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / real(norm);
        }
    }
}

/// Induced-measure random state: a Haar-random pure state on
/// `(dim_a·dim_b) ⊗ rank` with the ancilla traced out.
pub fn random_density<R: Rng + ?Sized>(
    dim_a: usize,
    dim_b: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let n = dim_a * dim_b;
    if n == 0 || rank == 0 || rank > n {
        return Err(Error::OutOfRange {
            name: "rank",
            value: rank as f64,
            range: "[1, dim_a·dim_b]",
        });
    }
    let psi = random_pure_vector(n * rank, rng);
    let mut mat = linalg::partial_trace(&linalg::outer(&psi), n, rank, Side::A)?;
    mat = (&mat + mat.adjoint()) * real(0.5);
    let tr = linalg::trace(&mat).re;
    DensityOperator::new(dim_a, dim_b, mat / real(tr))
}

pub fn random_density_seeded(
    dim_a: usize,
    dim_b: usize,
    rank: usize,
    seed: u64,
) -> Result<DensityOperator> {
    random_density(dim_a, dim_b, rank, &mut seeded_rng(seed))
}

/// Explicit separable state `Σ_k p_k |a_k⟩⟨a_k| ⊗ |b_k⟩⟨b_k|` with Haar-random
/// local vectors and uniformly drawn (then normalized) weights.
pub fn random_separable<R: Rng + ?Sized>(
    dim_a: usize,
    dim_b: usize,
    terms: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    if terms == 0 {
        return Err(Error::OutOfRange {
            name: "terms",
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let n = dim_a * dim_b;
    let mut mat = ComplexMatrix::from_element(n, n, ZERO);
    for w in weights {
        let a = linalg::outer(&random_pure_vector(dim_a, rng));
        let b = linalg::outer(&random_pure_vector(dim_b, rng));
        mat += linalg::tensor(&a, &b) * real(w / total);
    }
    DensityOperator::new(dim_a, dim_b, mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues_hermitian, frobenius_distance, unitary_deviation};
    use approx::assert_abs_diff_eq;

    fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        frobenius_distance(a, b).unwrap()
    }

    #[test]
    fn isotropic_examples() {
        let mixed = isotropic(0.0).unwrap();
        assert!(dist(mixed.matrix(), &(identity(4) * real(0.25))) < 1e-15);
        let pure = isotropic(1.0).unwrap();
        assert!(dist(pure.matrix(), bell_state().matrix()) < 1e-15);
        let half = isotropic(0.5).unwrap();
        let eig = half.eigenvalues();
        for (got, want) in eig.iter().zip([0.625, 0.125, 0.125, 0.125]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
        assert!(isotropic(1.2).is_err());
    }

    #[test]
    fn pseudo_pure_examples() {
        let psi = bell_vector();
        let mixed = pseudo_pure((2, 2), 0.0, &psi).unwrap();
        assert!(dist(mixed.matrix(), maximally_mixed(2, 2).matrix()) < 1e-15);
        let pure = pseudo_pure((2, 2), 1.0, &psi).unwrap();
        assert!(dist(pure.matrix(), bell_state().matrix()) < 1e-15);
        let half = pseudo_pure((2, 2), 0.5, &psi).unwrap();
        assert!(dist(half.matrix(), isotropic(0.5).unwrap().matrix()) < 1e-15);
        assert!(pseudo_pure((2, 2), 0.5, &(psi.clone() * real(2.0))).is_err());
        assert!(pseudo_pure((2, 3), 0.5, &psi).is_err());
    }

    #[test]
    fn dqc1_identity_is_product() {
        // n = 1, α = 1, U = I gives |+⟩⟨+| ⊗ I/2.
        let st = dqc1(1, 1.0, UnitaryMatrix::identity(2)).unwrap();
        let plus = ComplexMatrix::from_element(2, 2, real(0.5));
        let expect = linalg::tensor(&plus, &(identity(2) * real(0.5)));
        assert!(dist(st.density().matrix(), &expect) < 1e-15);
        assert_abs_diff_eq!(st.tau().re, 1.0);
    }

    #[test]
    fn dqc1_zero_polarization_is_mixed() {
        let u = haar_unitary_seeded(2, 3).unwrap();
        let st = dqc1(1, 0.0, u).unwrap();
        assert!(dist(st.density().matrix(), &(identity(4) * real(0.25))) < 1e-15);
    }

    #[test]
    fn dqc1_structure() {
        let mut rng = seeded_rng(11);
        for n in 1..=4 {
            for &alpha in &[0.0, 0.3, 1.0] {
                let u = haar_unitary(1 << n, &mut rng).unwrap();
                let st = dqc1(n, alpha, u).unwrap();
                let rho = DensityOperator::new(2, 1 << n, st.density().matrix().clone()).unwrap();
                assert_abs_diff_eq!(
                    rho.purity(),
                    (1.0 + alpha * alpha) / (1u64 << (n + 1)) as f64,
                    epsilon = 1e-12
                );
                let tau = st.tau();
                let ra = ComplexMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        real(0.5),
                        tau.conj() * (alpha / 2.0),
                        tau * (alpha / 2.0),
                        real(0.5),
                    ],
                );
                assert!(dist(&rho.reduced(Side::A), &ra) < 1e-12);
                let rb = identity(1 << n) * real(1.0 / (1 << n) as f64);
                assert!(dist(&rho.reduced(Side::B), &rb) < 1e-12);
                assert!(tau.norm() <= 1.0 + 1e-12);
            }
        }
        assert!(dqc1(2, 0.5, UnitaryMatrix::identity(2)).is_err());
        assert!(dqc1(1, 1.5, UnitaryMatrix::identity(2)).is_err());
    }

    #[test]
    fn horodecki_examples() {
        let h0 = horodecki_2x4(0.0).unwrap();
        assert_abs_diff_eq!(h0.entropy(), 0.0, epsilon = 1e-12);
        let h1 = horodecki_2x4(1.0).unwrap();
        // at p = 1 the cross-block coherences survive
        let mut expect = identity(8);
        for (i, j) in [(0, 5), (1, 6), (2, 7)] {
            expect[(i, j)] = real(1.0);
            expect[(j, i)] = real(1.0);
        }
        assert!(dist(h1.matrix(), &(expect * real(0.125))) < 1e-15);
        for k in 0..=100 {
            let p = k as f64 / 100.0;
            let h = horodecki_2x4(p).unwrap();
            let checked = DensityOperator::new(2, 4, h.matrix().clone()).unwrap();
            assert_abs_diff_eq!(linalg::trace(checked.matrix()).re, 1.0, epsilon = 1e-12);
            let min = *eigenvalues_hermitian(&h.partial_transpose(Side::B))
                .last()
                .unwrap();
            assert!(min >= -1e-12, "p = {p}: min PT eigenvalue {min}");
        }
        assert!(horodecki_2x4(-0.1).is_err());
    }

    #[test]
    fn zero_discord_example_structure() {
        for &(g, d) in &[(0.0, 0.0), (0.7, 1.3), (2.0, -0.4)] {
            let rho = zero_discord_example(g, d);
            let checked = DensityOperator::new(2, 2, rho.matrix().clone()).unwrap();
            let half = identity(2) * real(0.5);
            assert!(dist(&checked.reduced(Side::A), &half) < 1e-15);
            assert!(dist(&checked.reduced(Side::B), &half) < 1e-15);
            assert_abs_diff_eq!(checked.purity(), 0.5, epsilon = 1e-15);
        }
        let classical = classical_classical(2, 2, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(dist(zero_discord_example(0.0, 0.4).matrix(), classical.matrix()) < 1e-15);
    }

    #[test]
    fn haar_is_unitary_and_deterministic() {
        let one = haar_unitary_seeded(1, 5).unwrap();
        assert_abs_diff_eq!(one.matrix()[(0, 0)].norm(), 1.0, epsilon = 1e-15);
        for dim in [2usize, 5, 16, 32] {
            let u = haar_unitary_seeded(dim, 9).unwrap();
            assert!(unitary_deviation(u.matrix()) < 1e-10);
            assert_eq!(u, haar_unitary_seeded(dim, 9).unwrap());
        }
        assert!(haar_unitary_seeded(0, 1).is_err());
    }

    #[test]
    fn haar_first_moment_is_small() {
        let dim = 8;
        let samples = 1000;
        let mut rng = seeded_rng(2024);
        let mut mean = ComplexMatrix::zeros(dim, dim);
        for _ in 0..samples {
            mean += haar_unitary(dim, &mut rng).unwrap().into_matrix();
        }
        mean /= real(samples as f64);
        assert!(mean.norm() <= 0.2, "‖E[U]‖_F = {}", mean.norm());
    }

    #[test]
    fn haar_left_invariance_statistic() {
        // E|U_00|² = 1/d must be unchanged by a fixed left rotation.
        let dim = 4;
        let fixed = haar_unitary_seeded(dim, 77).unwrap().into_matrix();
        let mut rng = seeded_rng(3);
        let (mut plain, mut rotated) = (0.0, 0.0);
        let samples = 4000;
        for _ in 0..samples {
            let u = haar_unitary(dim, &mut rng).unwrap().into_matrix();
            plain += u[(0, 0)].norm_sqr();
            rotated += (&fixed * &u)[(0, 0)].norm_sqr();
        }
        plain /= samples as f64;
        rotated /= samples as f64;
        assert!((plain - 0.25).abs() < 0.02, "{plain}");
        assert!((rotated - 0.25).abs() < 0.02, "{rotated}");
    }

    #[test]
    fn random_density_contract() {
        let pure = random_density_seeded(2, 3, 1, 4).unwrap();
        assert_abs_diff_eq!(pure.purity(), 1.0, epsilon = 1e-12);
        let full = random_density_seeded(2, 2, 4, 8).unwrap();
        assert!(DensityOperator::new(2, 2, full.matrix().clone()).is_ok());
        assert!(*full.eigenvalues().last().unwrap() > 1e-6);
        assert_eq!(full, random_density_seeded(2, 2, 4, 8).unwrap());
        assert!(random_density_seeded(2, 2, 5, 8).is_err());
    }

    #[test]
    fn random_separable_is_ppt() {
        let mut rng = seeded_rng(1);
        for _ in 0..20 {
            let rho = random_separable(2, 3, 4, &mut rng).unwrap();
            let min = *eigenvalues_hermitian(&rho.partial_transpose(Side::A))
                .last()
                .unwrap();
            assert!(min > -1e-12);
        }
    }
}
