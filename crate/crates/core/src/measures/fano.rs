//! SU(d) generators and the Fano (Bloch-vector / correlation-matrix) form of
//! a bipartite state.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, identity, real, unitary_deviation, ComplexMatrix};
use crate::state::DensityOperator;

/// Role of a generator in the `(U_pq, V_pq, W_r)` construction. Indices are
/// zero-based positions in the construction basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `|p⟩⟨q| + |q⟩⟨p|`
    Symmetric { p: usize, q: usize },
    /// `−i|p⟩⟨q| + i|q⟩⟨p|`
    Antisymmetric { p: usize, q: usize },
    /// `√(2/r(r+1)) (Σ_{k<r} |k⟩⟨k| − r|r⟩⟨r|)`, `r ≥ 1`
    Diagonal { r: usize },
}

/// The `d² − 1` traceless Hermitian generators with `Tr(σ_i σ_j) = 2δ_ij`.
///
/// Ordering: all `U_pq` for `p < q` lexicographic, then all `V_pq` in the same
/// order, then `W_1 … W_{d−1}`.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub dim: usize,
    pub matrices: Vec<ComplexMatrix>,
    pub kinds: Vec<GeneratorKind>,
    pub basis: ComplexMatrix,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Index of the partner generator: `V_pq` for `U_pq` and vice versa.
    pub fn partner(&self, s: usize) -> Option<usize> {
        let target = match self.kinds[s] {
            GeneratorKind::Symmetric { p, q } => GeneratorKind::Antisymmetric { p, q },
            GeneratorKind::Antisymmetric { p, q } => GeneratorKind::Symmetric { p, q },
            GeneratorKind::Diagonal { .. } => return None,
        };
        self.kinds.iter().position(|k| *k == target)
    }
}

/// Generators of SU(`dim`) built on the orthonormal columns of `basis`.
pub fn su_generators(dim: usize, basis: &ComplexMatrix) -> Result<GeneratorSet> {
    if basis.nrows() != dim || basis.ncols() != dim || dim == 0 {
        return Err(Error::DimensionMismatch(format!(
            "basis is {:?}, expected {dim}x{dim}",
            basis.shape()
        )));
    }
    let dev = unitary_deviation(basis);
    if dev > 1e-10 {
        return Err(Error::NotOrthonormal(dev));
    }
    let ket = |k: usize| basis.column(k).into_owned();
    let ketbra = |p: usize, q: usize| ket(p) * ket(q).adjoint();
    let i = num_complex::Complex64::i();

    let mut matrices = Vec::with_capacity(dim * dim - 1);
    let mut kinds = Vec::with_capacity(dim * dim - 1);
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|p| (p + 1..dim).map(move |q| (p, q)))
        .collect();
    for &(p, q) in &pairs {
        matrices.push(ketbra(p, q) + ketbra(q, p));
        kinds.push(GeneratorKind::Symmetric { p, q });
    }
    for &(p, q) in &pairs {
        matrices.push(ketbra(p, q) * (-i) + ketbra(q, p) * i);
        kinds.push(GeneratorKind::Antisymmetric { p, q });
    }
    for r in 1..dim {
        let scale = (2.0 / (r * (r + 1)) as f64).sqrt();
        let mut w = ComplexMatrix::zeros(dim, dim);
        for k in 0..r {
            w += ketbra(k, k);
        }
        w -= ketbra(r, r) * real(r as f64);
        matrices.push(w * real(scale));
        kinds.push(GeneratorKind::Diagonal { r });
    }
    Ok(GeneratorSet {
        dim,
        matrices,
        kinds,
        basis: basis.clone(),
    })
}

/// `ρ = (1/MN)(I⊗I + r_A·σ⊗I + I⊗r_B·σ + Σ T_st σ_s⊗σ_t)`.
#[derive(Debug, Clone)]
pub struct FanoForm {
    pub dim_a: usize,
    pub dim_b: usize,
    pub r_a: Vec<f64>,
    pub r_b: Vec<f64>,
    pub t: DMatrix<f64>,
    pub generators_a: GeneratorSet,
    pub generators_b: GeneratorSet,
}

impl FanoForm {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.dim_a, self.dim_b);
        let ia = identity(m);
        let ib = identity(n);
        let mut out = identity(m * n);
        for (s, g) in self.generators_a.matrices.iter().enumerate() {
            out += linalg::tensor(g, &ib) * real(self.r_a[s]);
        }
        for (t, g) in self.generators_b.matrices.iter().enumerate() {
            out += linalg::tensor(&ia, g) * real(self.r_b[t]);
        }
        for (s, ga) in self.generators_a.matrices.iter().enumerate() {
            for (t, gb) in self.generators_b.matrices.iter().enumerate() {
                let c = self.t[(s, t)];
                if c != 0.0 {
                    out += linalg::tensor(ga, gb) * real(c);
                }
            }
        }
        out / real((m * n) as f64)
    }
}

/// `Tr(X Y)` without forming the product.
fn trace_product(x: &ComplexMatrix, y: &ComplexMatrix) -> num_complex::Complex64 {
    let n = x.nrows();
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += x[(i, k)] * y[(k, i)];
        }
    }
    acc
}

/// Fano form against generators built on the computational bases.
pub fn fano_decompose(rho: &DensityOperator) -> FanoForm {
    let ga = su_generators(rho.dim_a(), &identity(rho.dim_a())).expect("identity is orthonormal");
    let gb = su_generators(rho.dim_b(), &identity(rho.dim_b())).expect("identity is orthonormal");
    fano_decompose_with(rho, ga, gb)
}

/// Fano form against caller-supplied generator sets.
pub fn fano_decompose_with(
    rho: &DensityOperator,
    generators_a: GeneratorSet,
    generators_b: GeneratorSet,
) -> FanoForm {
    let (m, n) = rho.dims();
    assert_eq!(
        generators_a.dim, m,
        "generator set A has the wrong dimension"
    );
    assert_eq!(
        generators_b.dim, n,
        "generator set B has the wrong dimension"
    );
    let rho_a = rho.reduced(crate::linalg::Side::A);
    let rho_b = rho.reduced(crate::linalg::Side::B);
    let r_a = generators_a
        .matrices
        .iter()
        .map(|g| 0.5 * m as f64 * trace_product(&rho_a, g).re)
        .collect();
    let r_b = generators_b
        .matrices
        .iter()
        .map(|g| 0.5 * n as f64 * trace_product(&rho_b, g).re)
        .collect();
    let scale = (m * n) as f64 / 4.0;
    let t = DMatrix::from_fn(generators_a.len(), generators_b.len(), |s, t| {
        let op = linalg::tensor(&generators_a.matrices[s], &generators_b.matrices[t]);
        scale * trace_product(&op, rho.matrix()).re
    });
    FanoForm {
        dim_a: m,
        dim_b: n,
        r_a,
        r_b,
        t,
        generators_a,
        generators_b,
    }
}
