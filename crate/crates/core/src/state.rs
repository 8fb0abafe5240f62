use crate::error::{Error, Result};
use crate::linalg::{
    self, eigenvalues_hermitian, entropy_of_eigenvalues, hermitian_deviation, trace,
    unitary_deviation, ComplexMatrix, ComplexVector, Side,
};

/// Validation tolerance for Hermiticity, trace and positivity.
pub const STATE_TOL: f64 = 1e-10;

/// Unitarity tolerance, `‖U†U − I‖_F`.
pub const UNITARY_TOL: f64 = 1e-10;

/// A bipartite density operator on `C^{dim_a} ⊗ C^{dim_b}`.
///
/// Construction validates Hermiticity, unit trace and positivity, so every
/// value of this type is a physical state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim_a: usize,
    dim_b: usize,
    mat: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(dim_a: usize, dim_b: usize, mat: ComplexMatrix) -> Result<Self> {
        let n = dim_a * dim_b;
        if n == 0 || mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, subsystem dims {}x{}",
                mat.nrows(),
                mat.ncols(),
                dim_a,
                dim_b
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = hermitian_deviation(&mat);
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = trace(&mat);
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = eigenvalues_hermitian(&mat).last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { dim_a, dim_b, mat })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_parts(dim_a: usize, dim_b: usize, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), dim_a * dim_b);
        Self { dim_a, dim_b, mat }
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn from_pure(dim_a: usize, dim_b: usize, psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::OutOfRange {
                name: "‖ψ‖",
                value: norm,
                range: "{1}",
            });
        }
        Self::new(dim_a, dim_b, linalg::outer(psi))
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn dim_of(&self, side: Side) -> usize {
        match side {
            Side::A => self.dim_a,
            Side::B => self.dim_b,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Reduced state of `keep`.
    pub fn reduced(&self, keep: Side) -> ComplexMatrix {
        linalg::partial_trace(&self.mat, self.dim_a, self.dim_b, keep)
            .expect("dimensions validated at construction")
    }

    pub fn partial_transpose(&self, side: Side) -> ComplexMatrix {
        linalg::partial_transpose(&self.mat, self.dim_a, self.dim_b, side)
            .expect("dimensions validated at construction")
    }

    /// The same state with the factors in B ⊗ A order.
    pub fn swapped(&self) -> DensityOperator {
        let mat = linalg::swap_factors(&self.mat, self.dim_a, self.dim_b)
            .expect("dimensions validated at construction");
        Self::from_parts(self.dim_b, self.dim_a, mat)
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        linalg::purity_of(&self.mat)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues_hermitian(&self.mat)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of_eigenvalues(&self.eigenvalues()).expect("validated state is positive")
    }

    /// `(U ⊗ I) ρ (U ⊗ I)†` for `side = A`, `(I ⊗ U) ρ (I ⊗ U)†` for `B`.
    pub fn apply_local(&self, u: &ComplexMatrix, side: Side) -> Result<ComplexMatrix> {
        let d = self.dim_of(side);
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "local operator is {}x{}, subsystem has dimension {}",
                u.nrows(),
                u.ncols(),
                d
            )));
        }
        let full = match side {
            Side::A => linalg::tensor(u, &linalg::identity(self.dim_b)),
            Side::B => linalg::tensor(&linalg::identity(self.dim_a), u),
        };
        Ok(&full * &self.mat * full.adjoint())
    }
}

/// A square complex unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    mat: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square, got {:?}",
                mat.shape()
            )));
        }
        let dev = unitary_deviation(&mat);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_parts(mat: ComplexMatrix) -> Self {
        debug_assert!(unitary_deviation(&mat) < 1e-8);
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: linalg::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> num_complex::Complex64 {
        trace(&self.mat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, real, ONE, ZERO};

    #[test]
    fn rejects_invalid_matrices() {
        let not_unit_trace = identity(4);
        assert!(matches!(
            DensityOperator::new(2, 2, not_unit_trace),
            Err(Error::InvalidTrace(_))
        ));
        let negative = ComplexMatrix::from_row_slice(2, 2, &[real(1.5), ZERO, ZERO, real(-0.5)]);
        assert!(matches!(
            DensityOperator::new(1, 2, negative),
            Err(Error::NotPositive(_))
        ));
        let nonherm = ComplexMatrix::from_row_slice(2, 2, &[real(0.5), ONE, ZERO, real(0.5)]);
        assert!(matches!(
            DensityOperator::new(2, 1, nonherm),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            DensityOperator::new(2, 3, identity(4) * real(0.25)),
            Err(Error::DimensionMismatch(_))
        ));
        let mut nan = identity(2) * real(0.5);
        nan[(0, 1)] = real(f64::NAN);
        assert!(matches!(
            DensityOperator::new(2, 1, nan),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn unitary_validation() {
        assert!(UnitaryMatrix::new(identity(3)).is_ok());
        assert!(matches!(
            UnitaryMatrix::new(identity(3) * real(2.0)),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn swapped_swaps_reductions() {
        let ra = ComplexMatrix::from_row_slice(2, 2, &[real(0.6), real(0.1), real(0.1), real(0.4)]);
        let rb = identity(3) * real(1.0 / 3.0);
        let rho = DensityOperator::new(2, 3, ra.kronecker(&rb)).unwrap();
        let sw = rho.swapped();
        assert_eq!(sw.dims(), (3, 2));
        assert!((sw.reduced(Side::B) - &ra).norm() < 1e-15);
        assert!((sw.reduced(Side::A) - &rb).norm() < 1e-15);
    }
}
