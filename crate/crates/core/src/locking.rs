//! Mutually unbiased bases and the locking state
//! `ρ = (1/md) Σ_{k,t} (|k⟩⟨k| ⊗ |t⟩⟨t|)_A ⊗ |b_k^t⟩⟨b_k^t|_B`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, identity, real, unitary_deviation, ComplexMatrix, Side};
use crate::measures::{lnu_bound, mid};
use crate::state::DensityOperator;

const UNITARY_TOL: f64 = 1e-10;
const UNBIASED_TOL: f64 = 1e-9;

/// `m` mutually unbiased bases of `C^d`; column `k` of `bases[t]` is `|b_k^t⟩`.
#[derive(Debug, Clone)]
pub struct MubFamily {
    d: usize,
    bases: Vec<ComplexMatrix>,
}

impl MubFamily {
    /// Validates orthonormality of every basis and pairwise unbiasedness.
    pub fn new(bases: Vec<ComplexMatrix>) -> Result<Self> {
        let d = bases
            .first()
            .map(|b| b.nrows())
            .ok_or_else(|| Error::Unsupported("empty basis family".into()))?;
        for b in &bases {
            if b.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!(
                    "basis is {:?}, expected {d}x{d}",
                    b.shape()
                )));
            }
            let dev = unitary_deviation(b);
            if dev > UNITARY_TOL {
                return Err(Error::NotUnitary(dev));
            }
        }
        let target = 1.0 / (d as f64).sqrt();
        let mut worst: f64 = 0.0;
        for (s, x) in bases.iter().enumerate() {
            for y in &bases[s + 1..] {
                let overlaps = x.adjoint() * y;
                for z in overlaps.iter() {
                    worst = worst.max((z.norm() - target).abs());
                }
            }
        }
        if worst > UNBIASED_TOL {
            return Err(Error::NotUnbiased(worst));
        }
        Ok(Self { d, bases })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[ComplexMatrix] {
        &self.bases
    }

    pub fn basis(&self, t: usize) -> &ComplexMatrix {
        &self.bases[t]
    }
}

fn is_prime(d: usize) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| d % k != 0)
}

fn qubit_bases() -> Vec<ComplexMatrix> {
    let h = 0.5f64.sqrt();
    let i = Complex64::i();
    vec![
        identity(2),
        ComplexMatrix::from_row_slice(2, 2, &[real(h), real(h), real(h), real(-h)]),
        ComplexMatrix::from_row_slice(2, 2, &[real(h), real(h), i * h, -i * h]),
    ]
}

/// Basis `t` of the prime-dimension family: `(1/√d) ω^{t k² + j k}` at row
/// `k`, column `j`.
fn quadratic_basis(d: usize, t: usize) -> ComplexMatrix {
    let scale = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, d, |k, j| {
        let exponent = (t * k * k + j * k) % d;
        Complex64::from_polar(scale, 2.0 * PI * exponent as f64 / d as f64)
    })
}

fn hadamard_power(n: usize) -> ComplexMatrix {
    let h = 0.5f64.sqrt();
    let h1 = ComplexMatrix::from_row_slice(2, 2, &[real(h), real(h), real(h), real(-h)]);
    (1..n).fold(h1.clone(), |acc, _| linalg::tensor(&acc, &h1))
}

/// `m` mutually unbiased bases in dimension `d`, computational basis first.
///
/// Supported: `d = 2` with `m ≤ 3` (Pauli eigenbases), odd prime `d` with
/// `m ≤ d + 1` (quadratic-phase bases) and `d = 2ⁿ` with `m ≤ 2`
/// (computational and `H^{⊗n}`).
pub fn mub_family(d: usize, m: usize) -> Result<MubFamily> {
    if m == 0 {
        return Err(Error::Unsupported("at least one basis is needed".into()));
    }
    let bases = if d == 2 && m <= 3 {
        qubit_bases().into_iter().take(m).collect()
    } else if is_prime(d) && d > 2 && m <= d + 1 {
        std::iter::once(identity(d))
            .chain((0..m - 1).map(|t| quadratic_basis(d, t)))
            .collect()
    } else if d.is_power_of_two() && d >= 2 && m <= 2 {
        let n = d.trailing_zeros() as usize;
        std::iter::once(identity(d))
            .chain((m == 2).then(|| hadamard_power(n)))
            .collect()
    } else {
        return Err(Error::Unsupported(format!(
            "no MUB construction for d = {d}, m = {m}"
        )));
    };
    MubFamily::new(bases)
}

/// The locking state built from a MUB family. Subsystem A has dimension
/// `m·d` with index `k·m + t`; B has dimension `d`.
#[derive(Debug, Clone)]
pub struct LockingState {
    family: MubFamily,
    rho: DensityOperator,
}

impl LockingState {
    pub fn d(&self) -> usize {
        self.family.d()
    }

    pub fn m(&self) -> usize {
        self.family.m()
    }

    pub fn family(&self) -> &MubFamily {
        &self.family
    }

    pub fn density(&self) -> &DensityOperator {
        &self.rho
    }

    /// Always true: the state is a mixture of products by construction.
    pub fn is_separable(&self) -> bool {
        true
    }
}

pub fn locking_state(family: &MubFamily) -> LockingState {
    let (d, m) = (family.d(), family.m());
    let dim_a = m * d;
    let mut mat = ComplexMatrix::zeros(dim_a * d, dim_a * d);
    let w = real(1.0 / (m * d) as f64);
    for k in 0..d {
        for t in 0..m {
            let a = k * m + t;
            let b = family.basis(t).column(k).into_owned();
            let proj = &b * b.adjoint() * w;
            mat.view_mut((a * d, a * d), (d, d)).copy_from(&proj);
        }
    }
    LockingState {
        family: family.clone(),
        rho: DensityOperator::from_parts(dim_a, d, mat),
    }
}

/// MID of the locking state computed from its matrix.
pub fn locking_mid(state: &LockingState) -> f64 {
    mid(state.density())
}

/// `(1 − 1/m) log d`.
pub fn locking_mid_closed(d: usize, m: usize) -> f64 {
    (1.0 - 1.0 / m as f64) * (d as f64).log2()
}

/// `S(P(ρ)) = log m + (2 − 1/m) log d`.
pub fn locking_dephased_entropy_closed(d: usize, m: usize) -> f64 {
    (m as f64).log2() + (2.0 - 1.0 / m as f64) * (d as f64).log2()
}

/// MID of the state conditioned on basis label `t`,
/// `(1/d) Σ_k |k⟩⟨k| ⊗ |b_k^t⟩⟨b_k^t|`, after B is rotated into basis `t`.
pub fn post_communication_mid(state: &LockingState, t: usize) -> Result<f64> {
    if t >= state.m() {
        return Err(Error::OutOfRange {
            name: "t",
            value: t as f64,
            range: "[0, m)",
        });
    }
    let d = state.d();
    let basis = state.family().basis(t);
    let mut mat = ComplexMatrix::zeros(d * d, d * d);
    for k in 0..d {
        let b = basis.column(k).into_owned();
        let proj = &b * b.adjoint() * real(1.0 / d as f64);
        mat.view_mut((k * d, k * d), (d, d)).copy_from(&proj);
    }
    let conditional = DensityOperator::new(d, d, mat)?;
    let rotated = conditional.apply_local(&basis.adjoint(), Side::B)?;
    Ok(mid(&DensityOperator::new(d, d, rotated)?))
}

/// `√(2ⁿ − 1)/2ⁿ` for `d = 2ⁿ`, `m = 2`.
pub fn locking_lnu_bound_printed(d: usize, m: usize) -> Result<f64> {
    if m != 2 || !d.is_power_of_two() || d < 2 {
        return Err(Error::Unsupported(format!(
            "closed-form bound needs d = 2^n and m = 2, got d = {d}, m = {m}"
        )));
    }
    Ok(((d - 1) as f64).sqrt() / d as f64)
}

/// The LNU upper bound: the closed form where it applies, otherwise
/// [`lnu_bound`] of the state.
pub fn locking_lnu_bound(state: &LockingState) -> f64 {
    locking_lnu_bound_printed(state.d(), state.m()).unwrap_or_else(|_| lnu_bound(state.density()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues_hermitian;
    use crate::measures::{eigenprojectors, mid_breakdown};
    use approx::assert_abs_diff_eq;

    const SUPPORTED: [(usize, usize); 8] = [
        (2, 2),
        (2, 3),
        (3, 2),
        (3, 3),
        (3, 4),
        (4, 2),
        (5, 6),
        (8, 2),
    ];

    #[test]
    fn families_are_unbiased() {
        for (d, m) in SUPPORTED {
            let f = mub_family(d, m).unwrap();
            assert_eq!(f.m(), m);
            assert!((f.basis(0) - identity(d)).norm() < 1e-15);
        }
        let f = mub_family(4, 2).unwrap();
        for z in f.basis(1).iter() {
            assert_abs_diff_eq!(z.norm(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn unsupported_pairs() {
        for (d, m) in [(6, 2), (4, 3), (3, 5), (2, 4), (1, 1), (3, 0)] {
            assert!(
                matches!(mub_family(d, m), Err(Error::Unsupported(_))),
                "{d} {m}"
            );
        }
    }

    #[test]
    fn rejects_biased_family() {
        let mut b = qubit_bases();
        b[1] = identity(2);
        assert!(matches!(MubFamily::new(b), Err(Error::NotUnbiased(_))));
    }

    #[test]
    fn state_properties() {
        for (d, m) in SUPPORTED {
            let st = locking_state(&mub_family(d, m).unwrap());
            let rho = st.density();
            let md = (m * d) as f64;
            assert!((rho.reduced(Side::A) - identity(m * d) * real(1.0 / md)).norm() < 1e-12);
            assert!((rho.reduced(Side::B) - identity(d) * real(1.0 / d as f64)).norm() < 1e-12);
            let eigs = rho.eigenvalues();
            for (k, &lam) in eigs.iter().enumerate() {
                let expect = if k < m * d { 1.0 / md } else { 0.0 };
                assert_abs_diff_eq!(lam, expect, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(rho.entropy(), md.log2(), epsilon = 1e-9);
            assert_abs_diff_eq!(rho.purity(), 1.0 / md, epsilon = 1e-12);
            assert!(st.is_separable());
        }
    }

    #[test]
    fn mid_matches_closed_form() {
        for (d, m) in SUPPORTED {
            let st = locking_state(&mub_family(d, m).unwrap());
            let b = mid_breakdown(st.density());
            assert_abs_diff_eq!(b.value, locking_mid_closed(d, m), epsilon = 1e-9);
            assert_abs_diff_eq!(
                crate::measures::discord::entropy_unchecked(b.dephased.matrix()),
                locking_dephased_entropy_closed(d, m),
                epsilon = 1e-9
            );
        }
        assert_abs_diff_eq!(
            locking_mid_closed(3, 3),
            2.0 / 3.0 * 3f64.log2(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(locking_mid_closed(16, 2), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn dephased_spectrum() {
        for (d, m) in SUPPORTED {
            let rho = locking_state(&mub_family(d, m).unwrap()).density().clone();
            let pa = eigenprojectors(&rho.reduced(Side::A)).unwrap();
            let pb = eigenprojectors(&rho.reduced(Side::B)).unwrap();
            let p = crate::measures::dephase(&rho, &pa, &pb).unwrap();
            let eigs = eigenvalues_hermitian(p.matrix());
            let md = (m * d) as f64;
            let mut expect = vec![1.0 / md; d];
            expect.extend(std::iter::repeat_n(1.0 / (md * d as f64), (m - 1) * d * d));
            expect.extend(std::iter::repeat_n(0.0, d * (d - 1)));
            for (x, y) in eigs.iter().zip(&expect) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn relabelled_families_give_the_same_mid() {
        let f = mub_family(3, 4).unwrap();
        let base = locking_mid(&locking_state(&f));
        let mut permuted = f.bases().to_vec();
        permuted.reverse();
        let g = MubFamily::new(permuted).unwrap();
        assert_abs_diff_eq!(locking_mid(&locking_state(&g)), base, epsilon = 1e-9);
        // per-vector phases do not change the projectors
        let phased: Vec<ComplexMatrix> = f
            .bases()
            .iter()
            .enumerate()
            .map(|(t, b)| {
                let mut b = b.clone();
                for (k, mut col) in b.column_iter_mut().enumerate() {
                    col *= Complex64::from_polar(1.0, 0.7 * (t + 2 * k) as f64);
                }
                b
            })
            .collect();
        let h = MubFamily::new(phased).unwrap();
        assert_abs_diff_eq!(locking_mid(&locking_state(&h)), base, epsilon = 1e-9);
    }

    #[test]
    fn communication_unlocks() {
        for (d, m) in SUPPORTED {
            let st = locking_state(&mub_family(d, m).unwrap());
            for t in 0..m {
                assert!(post_communication_mid(&st, t).unwrap().abs() < 1e-10);
            }
            assert!(post_communication_mid(&st, m).is_err());
        }
    }

    #[test]
    fn lnu_bounds() {
        assert_abs_diff_eq!(
            locking_lnu_bound_printed(4, 2).unwrap(),
            3f64.sqrt() / 4.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            locking_lnu_bound_printed(2, 2).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert!(locking_lnu_bound_printed(3, 2).is_err());
        for (d, m) in SUPPORTED {
            let st = locking_state(&mub_family(d, m).unwrap());
            assert_abs_diff_eq!(
                locking_lnu_bound(&st),
                lnu_bound(st.density()),
                epsilon = 1e-12
            );
        }
    }
}
