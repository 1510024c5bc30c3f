//! Localization measure on the position grid.
//!
//! `P(D)` is the diagonal projection onto a set of cells. Probabilities are
//! accumulated in exact rational arithmetic from the per-cell weights
//! `|psi_k|^2 dx`, so additivity over disjoint sets is exact rather than
//! merely accurate to rounding.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::grid::{GridError, GridResult, PhaseGrid, WaveField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSet {
    n: usize,
    cells: BTreeSet<usize>,
}

impl CellSet {
    pub fn empty(n: usize) -> Self {
        Self { n, cells: BTreeSet::new() }
    }

    pub fn all(n: usize) -> Self {
        Self { n, cells: (0..n).collect() }
    }

    pub fn from_cells(n: usize, cells: impl IntoIterator<Item = usize>) -> GridResult<Self> {
        let cells: BTreeSet<usize> = cells.into_iter().collect();
        if let Some(&c) = cells.iter().next_back() {
            if c >= n {
                return Err(GridError::Invalid(format!("cell {c} outside a grid of {n}")));
            }
        }
        Ok(Self { n, cells })
    }

    /// Cells covering `[a, b)`; `None` bounds extend to the box edge. Each
    /// finite bound must lie on a cell edge.
    pub fn interval(grid: &PhaseGrid, a: Option<f64>, b: Option<f64>) -> GridResult<Self> {
        let edge = |v: f64| -> GridResult<usize> {
            let k = (v + 0.5 * grid.length()) / grid.dx();
            let r = k.round();
            if (k - r).abs() > 1e-9 || r < 0.0 || r > grid.n() as f64 {
                return Err(GridError::NotCellAligned(v));
            }
            Ok(r as usize)
        };
        let lo = a.map(edge).transpose()?.unwrap_or(0);
        let hi = b.map(edge).transpose()?.unwrap_or(grid.n());
        Ok(Self { n: grid.n(), cells: (lo..hi.max(lo)).collect() })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.cells.contains(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().copied()
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        CellSet { n: self.n, cells: self.cells.union(&other.cells).copied().collect() }
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.cells.is_disjoint(&other.cells)
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.cells.is_subset(&other.cells)
    }

    /// The image under translation by `shift` cells on the circle.
    pub fn translate(&self, shift: isize) -> CellSet {
        let n = self.n as isize;
        CellSet { n: self.n, cells: self.cells.iter().map(|&k| (k as isize + shift).rem_euclid(n) as usize).collect() }
    }
}

/// Translation `[U(a) psi](x) = psi(x - a)` by a whole number of cells.
pub fn translate(psi: &WaveField, shift: isize) -> WaveField {
    let n = psi.values().len() as isize;
    let v = psi.values();
    let out: Vec<Complex64> = (0..n).map(|k| v[(k - shift).rem_euclid(n) as usize]).collect();
    WaveField::new(*psi.grid(), out).expect("same length")
}

#[derive(Clone, Debug)]
pub struct Localization {
    grid: PhaseGrid,
}

impl Localization {
    pub fn new(grid: PhaseGrid) -> Self {
        Self { grid }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    /// Diagonal of the projection `P(D)`.
    pub fn projection(&self, d: &CellSet) -> Vec<f64> {
        (0..self.grid.n()).map(|k| if d.contains(k) { 1.0 } else { 0.0 }).collect()
    }

    fn weights(&self, psi: &WaveField) -> Vec<f64> {
        let dx = self.grid.dx();
        psi.values().iter().map(|z| z.norm_sqr() * dx).collect()
    }

    pub fn probability_exact(&self, psi: &WaveField, d: &CellSet) -> GridResult<BigRational> {
        if d.n != self.grid.n() || psi.values().len() != self.grid.n() {
            return Err(GridError::LengthMismatch { got: d.n, want: self.grid.n() });
        }
        let w = self.weights(psi);
        let mut acc = BigRational::zero();
        for k in d.iter() {
            acc += BigRational::from_float(w[k]).ok_or(GridError::NonFinite { step: 0 })?;
        }
        Ok(acc)
    }

    pub fn probability(&self, psi: &WaveField, d: &CellSet) -> GridResult<f64> {
        Ok(self.probability_exact(psi, d)?.to_f64().unwrap_or(f64::NAN))
    }
}
