//! Closed forms for the one-clean-qubit (DQC1) state and the α/seed scan.
//!
//! With `c = 1/2^{n+1}`, `τ = Tr U / 2ⁿ` and `φ = arg τ`, the control qubit's
//! reduced state has eigenvectors `(1, ±e^{iφ})/√2` while the register is
//! maximally mixed. Dephasing in those bases leaves the diagonal
//! `c(1 ± α Re(e^{−iφ} u_jj))`, from which the MID closed form follows.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::linalg::{basis_vector, xlog2x, ComplexMatrix, Side, Spectrum};
use crate::measures::{discord, mid};
use crate::optimize::OptimizerConfig;
use crate::states::{dqc1, haar_unitary_seeded, Dqc1State};

/// `(1−x) log(1−x) + (1+x) log(1+x)`, which is `2(1 − H₂((1−x)/2))`.
fn g(x: f64) -> f64 {
    xlog2x(1.0 - x) + xlog2x(1.0 + x)
}

/// `d = (α/2^{(n+1)/2}) √(1 − Re Tr(e^{−2iφ} U²)/2ⁿ)`.
///
/// Fails with [`Error::DegenerateReduction`] when `τ` vanishes: the control
/// qubit is then maximally mixed, the commutant is all of SU(2) and
/// [`crate::measures::lnu_distance`] has to be used instead.
pub fn dqc1_lnu_closed(state: &Dqc1State) -> Result<f64> {
    if state.is_degenerate() {
        return Err(Error::DegenerateReduction(format!(
            "|tau| = {:.3e}; use the numeric LNU distance",
            state.tau().norm()
        )));
    }
    let n = state.n();
    let dim = (1usize << n) as f64;
    let u = state.unitary().matrix();
    let tr_u2 = (u * u).trace();
    let rot = Complex64::from_polar(1.0, -2.0 * state.phase());
    let inner = (1.0 - (rot * tr_u2).re / dim).max(0.0);
    Ok(state.alpha() / (2.0 * dim).sqrt() * inner.sqrt())
}

/// `|d_j| = |Re(e^{−iφ} u_jj)|` with an explicit phase.
fn abs_d(state: &Dqc1State, phi: f64) -> impl Iterator<Item = f64> + '_ {
    let rot = Complex64::from_polar(1.0, -phi);
    state.diag().iter().map(move |&u| (rot * u).re.abs())
}

/// MID closed form with `φ` supplied by the caller.
pub fn dqc1_mid_closed_at_phase(state: &Dqc1State, phi: f64) -> f64 {
    let alpha = state.alpha();
    let c = 1.0 / (1usize << (state.n() + 1)) as f64;
    let sum: f64 = abs_d(state, phi).map(|d| g(alpha * d)).sum();
    (0.5 * g(alpha) - c * sum).max(0.0)
}

/// MID closed form at `φ = arg τ` (0 when `τ` vanishes).
pub fn dqc1_mid_closed(state: &Dqc1State) -> f64 {
    dqc1_mid_closed_at_phase(state, state.phase())
}

/// `1 − H₂((1−α)/2)`, the large-`n` MID.
pub fn dqc1_mid_asymptotic(alpha: f64) -> Result<f64> {
    check_range("alpha", alpha, 0.0, 1.0, "[0, 1]")?;
    Ok((0.5 * g(alpha)).clamp(0.0, 1.0))
}

/// Spectrum of the state dephased in the reduced-state eigenbases, with
/// eigenvectors `(1, ±e^{iφ})/√2 ⊗ e_j`, descending.
pub fn dqc1_spectrum_dephased(state: &Dqc1State) -> Spectrum {
    let n = state.n();
    let dim = 1usize << n;
    let c = 1.0 / (2 * dim) as f64;
    let phi = state.phase();
    let rot = Complex64::from_polar(1.0, -phi);
    let e = Complex64::from_polar(1.0, phi);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries: Vec<(f64, usize, f64)> = Vec::with_capacity(2 * dim);
    for (j, &u) in state.diag().iter().enumerate() {
        let r = (rot * u).re;
        entries.push((c * (1.0 + state.alpha() * r), j, 1.0));
        entries.push((c * (1.0 - state.alpha() * r), j, -1.0));
    }
    entries.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut vecs = ComplexMatrix::zeros(2 * dim, 2 * dim);
    for (col, &(_, j, sign)) in entries.iter().enumerate() {
        let ej = basis_vector(dim, j);
        for b in 0..dim {
            vecs[(b, col)] = ej[b] * s;
            vecs[(dim + b, col)] = ej[b] * e * (sign * s);
        }
    }
    Spectrum {
        eigenvalues: entries.iter().map(|x| x.0).collect(),
        eigenvectors: vecs,
    }
}

/// Closed-form quantities for one DQC1 state.
#[derive(Debug, Clone)]
pub struct Dqc1Report {
    pub n: usize,
    pub alpha: f64,
    /// `None` when `τ` vanishes.
    pub lnu_closed: Option<f64>,
    /// `α/2^{n/2}`.
    pub lnu_upper: f64,
    pub mid_closed: f64,
    pub mid_asymptotic: f64,
    pub tau: Complex64,
    pub phi: f64,
    pub degenerate: bool,
}

pub fn dqc1_report(state: &Dqc1State) -> Dqc1Report {
    let alpha = state.alpha();
    Dqc1Report {
        n: state.n(),
        alpha,
        lnu_closed: dqc1_lnu_closed(state).ok(),
        lnu_upper: alpha / 2f64.powf(state.n() as f64 / 2.0),
        mid_closed: dqc1_mid_closed(state),
        mid_asymptotic: dqc1_mid_asymptotic(alpha).expect("alpha validated by the state"),
        tau: state.tau(),
        phi: state.phase(),
        degenerate: state.is_degenerate(),
    }
}

/// One `(α, seed)` point of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct Dqc1Row {
    pub alpha: f64,
    pub seed: u64,
    pub tau: Complex64,
    pub mid_closed: f64,
    pub mid_numeric: f64,
    pub mid_asymptotic: f64,
    /// Discord with the measurement on the control qubit.
    pub discord: f64,
    /// `NaN` when `τ` vanishes.
    pub lnu_closed: f64,
    pub degenerate: bool,
}

/// Largest register size accepted by [`dqc1_scan`].
pub const SCAN_MAX_QUBITS: usize = 8;

/// Evaluates every `(α, seed)` pair, α-major. The unitary for a seed is
/// `haar_unitary_seeded(2ⁿ, seed)`; the discord search at point `k` is seeded
/// from stream `k` of `config.seed`.
pub fn dqc1_scan(
    n: usize,
    alphas: &[f64],
    seeds: &[u64],
    config: &OptimizerConfig,
) -> Result<Vec<Dqc1Row>> {
    if n == 0 || n > SCAN_MAX_QUBITS {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            range: "[1, 8]",
        });
    }
    for &a in alphas {
        check_range("alpha", a, 0.0, 1.0, "[0, 1]")?;
    }
    let points: Vec<(usize, f64, u64)> = alphas
        .iter()
        .flat_map(|&a| seeds.iter().map(move |&s| (a, s)))
        .enumerate()
        .map(|(k, (a, s))| (k, a, s))
        .collect();
    points
        .par_iter()
        .map(|&(k, alpha, seed)| {
            let u = haar_unitary_seeded(1 << n, seed)?;
            let state = dqc1(n, alpha, u)?;
            let point_cfg = config.for_point(k as u64);
            let d = discord(state.density(), Side::A, &point_cfg).value;
            Ok(Dqc1Row {
                alpha,
                seed,
                tau: state.tau(),
                mid_closed: dqc1_mid_closed(&state),
                mid_numeric: mid(state.density()),
                mid_asymptotic: dqc1_mid_asymptotic(alpha)?,
                discord: d,
                lnu_closed: dqc1_lnu_closed(&state).unwrap_or(f64::NAN),
                degenerate: state.is_degenerate(),
            })
        })
        .collect()
}
