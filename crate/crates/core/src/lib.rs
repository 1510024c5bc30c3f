//! Symbolic and numerical verification kernel for noncommutative
//! Hamiltonian mechanics.
//!
//! * [`algebra`]: presentations of *-superalgebras, normal ordering,
//!   supercommutators and quantum Poisson brackets, with the expression
//!   language in [`parse`] and the text format in [`loader`].
//! * [`presentations`]: built-in algebras and the Galilei suite.
//! * [`gns`]: finite-dimensional algebras, states and the GNS construction.
//! * [`grassmann`]: Berezin states on Grassmann algebras and the CC check.
//! * [`dynamics`]: Heisenberg and Schrodinger evolution, localization,
//!   Weyl relations.
//! * [`wwm`]: Wigner functions, Weyl symbols and the Moyal product.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod anchors;
pub mod coeff;
pub mod dynamics;
pub mod gns;
pub mod grassmann;
pub mod grid;
pub mod loader;
pub mod parse;
pub mod poly;
pub mod presentations;
pub mod report;
pub mod wwm;

pub use algebra::{KernelError, Parity, Presentation, PresentationBuilder};
pub use coeff::{Coefficient, GaussianRational};
pub use poly::{NcPoly, Word};
pub use report::{Status, VerificationReport};
