//! Weyl-Wigner-Moyal calculus on a phase-space grid.

use thiserror::Error;

use crate::grid::GridError;

pub mod classical;
pub mod field;
pub mod star;
pub mod wigner;

pub use classical::{
    classical_limit_compare, classical_limit_fields, hbar_sweep, moyal_evolve, ClassicalLimit, MechanicalHamiltonian,
};
pub use field::{Derivatives, SymbolField};
pub use star::{classical_bracket, moyal_bracket, semiclassical_scaling, star_product, StarMethod};
pub use wigner::{born_pairing, weyl_quantize, weyl_symbol, wigner, Kernel, WignerField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WwmError {
    #[error("series order {0} outside 0..=8")]
    OrderOutOfRange(usize),
    #[error("quadrature needs N <= {max}, got {n}")]
    GridTooLarge { n: usize, max: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("evolution unstable with {steps} steps")]
    Unstable { steps: usize },
    #[error("degenerate fit: {0}")]
    Degenerate(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

pub type WwmResult<T> = Result<T, WwmError>;
