//! Non-classicality measures of bipartite states.

pub mod discord;
pub mod fano;
pub mod lnu;
pub mod mid;

pub use discord::{discord, is_zero_discord, mutual_information, ConditionalEntropy};
pub use fano::{
    fano_decompose, fano_decompose_with, su_generators, FanoForm, GeneratorKind, GeneratorSet,
};
pub use lnu::{
    discord_witness_unitary, lnu_bound, lnu_distance, lnu_shift, lnu_shift_routes, CommutantParam,
    LocalShiftObjective,
};
pub use mid::{dephase, eigenprojectors, mid, mid_breakdown, MidBreakdown};

use crate::linalg::ComplexMatrix;
use crate::state::UnitaryMatrix;

/// The argument at which an optimized measure attained its value.
#[derive(Debug, Clone)]
pub enum Optimum {
    None,
    /// Local unitary on the target subsystem.
    Unitary(UnitaryMatrix),
    /// Rank-one measurement projectors on the measured subsystem.
    Projectors(Vec<ComplexMatrix>),
}

/// Value of an optimized measure plus optimizer diagnostics.
///
/// Discord values are upper bounds on the true minimum and LNU values are
/// lower bounds on the true maximum.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub value: f64,
    /// Number of local searches that were run.
    pub restarts: usize,
    /// Objective spread over the final simplex of the winning search.
    pub residual: f64,
    /// `max − min` of the measure over all local searches.
    pub dispersion: f64,
    pub evaluations: usize,
    pub optimum: Optimum,
}

impl MeasureReport {
    /// Whether the winning local search met the objective tolerance.
    pub fn converged(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}
