//! Quantifying non-classical correlations in bipartite quantum states.
//!
//! Three measures are provided: the shift under locally noneffective
//! unitaries ([`measures::lnu_distance`]), quantum discord
//! ([`measures::discord`]) and measurement-induced disturbance
//! ([`measures::mid`]). States are dense [`DensityOperator`]s on `A ⊗ B` with
//! A-major indexing, `index = a * dim_b + b`.

pub mod dqc1;
pub mod error;
pub mod linalg;
pub mod locking;
pub mod measures;
pub mod optimize;
pub mod oracles;
pub mod state;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, Side, Spectrum};
pub use measures::MeasureReport;
pub use optimize::OptimizerConfig;
pub use state::{DensityOperator, UnitaryMatrix};
