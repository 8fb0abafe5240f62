//! Brute-force references for the optimized measures.
//!
//! Each oracle evaluates the same objective as its optimized counterpart but
//! by the most literal route available (explicit projector sandwiches, full
//! matrix products, its own parameterization) on a uniform grid. Grids are
//! half-open, `lo + (hi − lo)·i/r` for `i < r`, so doubling the resolution
//! refines the grid and the oracle value can only improve.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    self, eig_hermitian, identity, partial_trace, real, tensor, von_neumann_entropy, ComplexMatrix,
    Side, DEGENERACY_TOL,
};
use crate::state::DensityOperator;

pub const MIN_RESOLUTION: usize = 8;
/// Largest parameter count [`lnu_grid_oracle`] accepts.
pub const MAX_LNU_PARAMS: usize = 4;
/// Largest subsystem dimension [`mid_exhaustive_check`] accepts.
pub const MAX_EXHAUSTIVE_DIM: usize = 8;

/// Uniform grid over a box of angles.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    resolution: usize,
    bounds: Option<Vec<(f64, f64)>>,
}

impl GridSpec {
    /// Grid with the oracle's default angle ranges.
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::OutOfRange {
                name: "resolution",
                value: resolution as f64,
                range: "[8, ∞)",
            });
        }
        Ok(Self {
            resolution,
            bounds: None,
        })
    }

    /// Overrides the range of every angle; the length must match the number
    /// of parameters of the oracle it is used with.
    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    fn axes(&self, defaults: &[(f64, f64)]) -> Result<Vec<Vec<f64>>> {
        let bounds = self.bounds.as_deref().unwrap_or(defaults);
        if bounds.len() != defaults.len() {
            return Err(Error::DimensionMismatch(format!(
                "grid has {} ranges, the oracle has {} parameters",
                bounds.len(),
                defaults.len()
            )));
        }
        let r = self.resolution;
        Ok(bounds
            .iter()
            .map(|&(lo, hi)| {
                (0..r)
                    .map(|i| lo + (hi - lo) * i as f64 / r as f64)
                    .collect()
            })
            .collect())
    }
}

/// Every grid point, in row-major order of the axes.
fn grid_points(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|p| {
                axis.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect()
    })
}

/// Minimum over grid points; ties go to the lowest index.
fn grid_min(points: &[Vec<f64>], f: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
    points
        .par_iter()
        .enumerate()
        .map(|(i, p)| (f(p), i))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(v, _)| v)
        .unwrap_or(f64::INFINITY)
}

fn entropy(mat: &ComplexMatrix) -> f64 {
    von_neumann_entropy(mat).expect("normalized block of a valid state")
}

/// Discord with the measurement on a qubit A, minimized over a grid of
/// Bloch angles `θ ∈ [0, π)`, `φ ∈ [0, 2π)`. An upper bound on the discord.
pub fn discord_grid_oracle(rho: &DensityOperator, grid: &GridSpec) -> Result<f64> {
    if rho.dim_a() != 2 {
        return Err(Error::Unsupported(format!(
            "grid discord needs a qubit measured side, got dimension {}",
            rho.dim_a()
        )));
    }
    let n = rho.dim_b();
    let axes = grid.axes(&[(0.0, PI), (0.0, TAU)])?;
    let rho_a = partial_trace(rho.matrix(), 2, n, Side::A)?;
    let offset = entropy(&rho_a) - entropy(rho.matrix());
    let id_b = identity(n);
    let conditional = |x: &[f64]| {
        let (theta, phi) = (x[0], x[1]);
        let n_vec = [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ];
        let [sx, sy, sz] = linalg::pauli();
        let bloch = sx * real(n_vec[0]) + sy * real(n_vec[1]) + sz * real(n_vec[2]);
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let proj = (identity(2) + &bloch * real(sign)) * real(0.5);
            let full = tensor(&proj, &id_b);
            let post = &full * rho.matrix() * &full;
            let p = post.trace().re;
            if p > 1e-14 {
                let sigma =
                    partial_trace(&post, 2, n, Side::B).expect("dimensions checked") / real(p);
                total += p * entropy(&sigma);
            }
        }
        total
    };
    Ok(offset + grid_min(&grid_points(&axes), conditional))
}

/// `diag(1, e^{ia}) R_y(b) diag(1, e^{ic})`.
fn euler_block(a: f64, b: f64, c: f64) -> ComplexMatrix {
    let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
    let left = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        real(1.0),
        Complex64::from_polar(1.0, a),
    ]));
    let right = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        real(1.0),
        Complex64::from_polar(1.0, c),
    ]));
    let ry = ComplexMatrix::from_row_slice(2, 2, &[real(cb), real(-sb), real(sb), real(cb)]);
    left * ry * right
}

/// LNU distance with the unitary on A, maximized over a grid of the
/// commutant of `ρ_A`. A lower bound on the true maximum.
///
/// The commutant is written as `V (⊕_b B_b) V†` with `V` the canonical
/// eigenbasis. Block 0 carries no overall phase: a phase `e^{iθ}` when it is
/// 1×1 (then omitted) or three Euler angles when 2×2. Later blocks get a phase
/// or a phase plus three Euler angles. Default range `[0, 2π)` per angle.
pub fn lnu_grid_oracle(rho: &DensityOperator, grid: &GridSpec) -> Result<f64> {
    let (m, n) = rho.dims();
    if m > 4 {
        return Err(Error::TooLarge(format!("reduced dimension {m} exceeds 4")));
    }
    let rho_a = partial_trace(rho.matrix(), m, n, Side::A)?;
    let spec = eig_hermitian(&rho_a)?;
    let blocks: Vec<usize> = spec
        .clusters(DEGENERACY_TOL)
        .iter()
        .map(|r| r.len())
        .collect();
    if blocks.iter().any(|&k| k > 2) {
        return Err(Error::TooLarge(
            "grid oracle handles degenerate clusters of size at most 2".into(),
        ));
    }
    let counts: Vec<usize> = blocks
        .iter()
        .enumerate()
        .map(|(b, &k)| match (b, k) {
            (0, 1) => 0,
            (0, _) => 3,
            (_, 1) => 1,
            _ => 4,
        })
        .collect();
    let total: usize = counts.iter().sum();
    if total > MAX_LNU_PARAMS {
        return Err(Error::TooLarge(format!(
            "commutant has {total} parameters, the grid allows {MAX_LNU_PARAMS}"
        )));
    }
    let axes = grid.axes(&vec![(0.0, TAU); total])?;
    let v = spec.eigenvectors;
    let purity = rho.purity();
    let id_b = identity(n);
    let neg_shift = |x: &[f64]| {
        let mut block = ComplexMatrix::zeros(m, m);
        let (mut offset, mut p) = (0, 0);
        for (b, (&k, &c)) in blocks.iter().zip(&counts).enumerate() {
            let piece = match (b, k) {
                (0, 1) => ComplexMatrix::from_element(1, 1, real(1.0)),
                (0, _) => euler_block(x[p], x[p + 1], x[p + 2]),
                (_, 1) => ComplexMatrix::from_element(1, 1, Complex64::from_polar(1.0, x[p])),
                _ => euler_block(x[p + 1], x[p + 2], x[p + 3]) * Complex64::from_polar(1.0, x[p]),
            };
            block.view_mut((offset, offset), (k, k)).copy_from(&piece);
            offset += k;
            p += c;
        }
        let u = &v * block * v.adjoint();
        let full = tensor(&u, &id_b);
        let shifted = &full * rho.matrix() * full.adjoint();
        let overlap = (rho.matrix() * shifted).trace().re;
        -(purity - overlap).max(0.0).sqrt()
    };
    Ok(-grid_min(&grid_points(&axes), neg_shift))
}

/// MID by literal projector sandwiching,
/// `P(ρ) = Σ_ij (Π_i ⊗ Π_j) ρ (Π_i ⊗ Π_j)`, then `S(P(ρ)) − S(ρ)`.
pub fn mid_exhaustive_check(rho: &DensityOperator) -> Result<f64> {
    let (m, n) = rho.dims();
    if m > MAX_EXHAUSTIVE_DIM || n > MAX_EXHAUSTIVE_DIM {
        return Err(Error::TooLarge(format!(
            "exhaustive MID is limited to {MAX_EXHAUSTIVE_DIM}x{MAX_EXHAUSTIVE_DIM}, got {m}x{n}"
        )));
    }
    let projectors = |side: Side, dim: usize| -> Result<Vec<ComplexMatrix>> {
        let reduced = partial_trace(rho.matrix(), m, n, side)?;
        let vecs = eig_hermitian(&reduced)?.eigenvectors;
        Ok((0..dim)
            .map(|k| {
                let c = vecs.column(k).into_owned();
                &c * c.adjoint()
            })
            .collect())
    };
    let pa = projectors(Side::A, m)?;
    let pb = projectors(Side::B, n)?;
    let mut dephased = ComplexMatrix::zeros(m * n, m * n);
    for a in &pa {
        for b in &pb {
            let pi = tensor(a, b);
            dephased += &pi * rho.matrix() * &pi;
        }
    }
    Ok(entropy(&dephased) - entropy(rho.matrix()))
}
