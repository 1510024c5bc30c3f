//! Time evolution: exact Heisenberg series and Noether invariants, the
//! split-step Schrodinger integrator, the localization measure and the Weyl
//! relations on a grid.

pub mod heisenberg;
pub mod pobvm;
pub mod schrodinger;
pub mod weyl;

pub use heisenberg::{heisenberg_evolve, noether_check};
pub use pobvm::{CellSet, Localization};
pub use schrodinger::Schrodinger;
pub use weyl::weyl_relations_check;
