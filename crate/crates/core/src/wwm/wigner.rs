//! Wigner functions, Weyl symbols of grid operators and their inverse.
//!
//! An operator is an `N x N` matrix `M` acting on grid samples,
//! `(A psi)_a = sum_b M[a][b] psi_b`, so its kernel is `K(x_a, x_b) = M[a][b] / dx`.
//! The symbol `A_W(x, p) = int exp(-i p y / hbar) K(x + y/2, x - y/2) dy`
//! needs kernel values off the grid for odd `y / dx`; those diagonals are
//! shifted by half a cell spectrally. Wigner fields use the normalised
//! convention `W = A_W(rho) / (2 pi hbar)`, so `int W dx dp = Tr rho`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::grid::{fft, ifft, GridError, GridResult, PhaseGrid, WaveField};
use crate::wwm::field::{Derivatives, SymbolField};

pub type Kernel = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct WignerField {
    grid: PhaseGrid,
    data: Vec<f64>,
}

impl WignerField {
    pub fn from_values(grid: PhaseGrid, data: Vec<f64>) -> GridResult<Self> {
        let want = grid.n() * grid.n();
        if data.len() != want {
            return Err(GridError::LengthMismatch { got: data.len(), want });
        }
        Ok(Self { grid, data })
    }

    /// Real part of a symbol field.
    pub fn from_symbol(f: &SymbolField) -> Self {
        Self { grid: *f.grid(), data: f.values().iter().map(|z| z.re).collect() }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, j: usize, m: usize) -> f64 {
        self.data[j * self.grid.n() + m]
    }

    pub fn to_symbol(&self) -> SymbolField {
        let data = self.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        SymbolField::from_values(self.grid, data, Derivatives::Spectral).expect("same shape")
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum::<f64>() * self.grid.dx() * self.grid.dp()
    }

    /// `sum_m W(x_j, p_m) dp`.
    pub fn x_marginal(&self) -> Vec<f64> {
        let n = self.grid.n();
        let dp = self.grid.dp();
        self.data.chunks(n).map(|row| row.iter().sum::<f64>() * dp).collect()
    }

    /// `sum_j W(x_j, p_m) dx`.
    pub fn p_marginal(&self) -> Vec<f64> {
        let n = self.grid.n();
        let dx = self.grid.dx();
        (0..n).map(|m| (0..n).map(|j| self.data[j * n + m]).sum::<f64>() * dx).collect()
    }

    /// `int W^2 dx dp`, at most `1 / (2 pi hbar)` with equality for pure states.
    pub fn purity_integral(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>() * self.grid.dx() * self.grid.dp()
    }

    /// `int A W dx dp`.
    pub fn pair(&self, symbol: &SymbolField) -> Complex64 {
        symbol.values().iter().zip(&self.data).map(|(a, w)| a * *w).sum::<Complex64>() * self.grid.dx() * self.grid.dp()
    }

    /// `sum_k w_k W_k` for weights summing to one.
    pub fn mixture(fields: &[(f64, &WignerField)]) -> GridResult<Self> {
        let first = fields.first().ok_or_else(|| GridError::Invalid("empty mixture".into()))?;
        let grid = first.1.grid;
        let mut data = vec![0.0; first.1.data.len()];
        for (w, f) in fields {
            if f.grid != grid {
                return Err(GridError::Invalid("mixture components live on different grids".into()));
            }
            data.iter_mut().zip(&f.data).for_each(|(d, v)| *d += w * v);
        }
        Ok(Self { grid, data })
    }

    /// CSV with columns `x,p,w`.
    pub fn to_csv(&self) -> String {
        let n = self.grid.n();
        let mut out = String::from("x,p,w\n");
        for j in 0..n {
            for m in 0..n {
                out.push_str(&format!("{:.12e},{:.12e},{:.12e}\n", self.grid.x(j), self.grid.p(m), self.get(j, m)));
            }
        }
        out
    }
}

// Half-cell multiplier for bin `q` of an `n`-point transform. The Nyquist
// bin is left alone so that the shift and its inverse stay exact inverses
// and real sequences stay real.
fn half_shift(n: usize, q: usize, sign: f64) -> Complex64 {
    if q == n / 2 {
        return Complex64::new(1.0, 0.0);
    }
    let s = if q < n / 2 { q as f64 } else { q as f64 - n as f64 };
    Complex64::from_polar(1.0, sign * PI * s / n as f64)
}

fn signed(n: usize, k_idx: usize) -> isize {
    if k_idx < n / 2 {
        k_idx as isize
    } else {
        k_idx as isize - n as isize
    }
}

fn wrap(n: usize, v: isize) -> usize {
    v.rem_euclid(n as isize) as usize
}

/// Weyl symbol of a grid operator.
pub fn weyl_symbol(grid: &PhaseGrid, m: &Kernel) -> GridResult<SymbolField> {
    let n = grid.n();
    if m.nrows() != n || m.ncols() != n {
        return Err(GridError::LengthMismatch { got: m.nrows() * m.ncols(), want: n * n });
    }
    let dx = grid.dx();
    // r[j * n + k_idx] = K(x_j + k dx / 2, x_j - k dx / 2)
    let mut r = vec![ZERO; n * n];
    let mut line = vec![ZERO; n];
    for k_idx in 0..n {
        let k = signed(n, k_idx);
        if k % 2 == 0 {
            for j in 0..n {
                let ji = j as isize;
                r[j * n + k_idx] = m[(wrap(n, ji + k / 2), wrap(n, ji - k / 2))] / dx;
            }
        } else {
            for (h, z) in line.iter_mut().enumerate() {
                let hi = h as isize;
                *z = m[(wrap(n, hi + (k + 1) / 2), wrap(n, hi - (k - 1) / 2))] / dx;
            }
            fft(&mut line);
            for (q, z) in line.iter_mut().enumerate() {
                *z *= half_shift(n, q, -1.0);
            }
            ifft(&mut line);
            for j in 0..n {
                r[j * n + k_idx] = line[j];
            }
        }
    }
    for row in r.chunks_mut(n) {
        for (k_idx, z) in row.iter_mut().enumerate() {
            if k_idx % 2 == 1 {
                *z = -*z;
            }
        }
        fft(row);
        row.iter_mut().for_each(|z| *z *= dx);
    }
    SymbolField::from_values(*grid, r, Derivatives::Spectral)
}

/// Inverse of [`weyl_symbol`].
pub fn weyl_quantize(f: &SymbolField) -> Kernel {
    let grid = *f.grid();
    let n = grid.n();
    let dx = grid.dx();
    let mut r = f.values().to_vec();
    for row in r.chunks_mut(n) {
        ifft(row);
        for (k_idx, z) in row.iter_mut().enumerate() {
            *z /= dx;
            if k_idx % 2 == 1 {
                *z = -*z;
            }
        }
    }
    let mut m = Kernel::zeros(n, n);
    let mut line = vec![ZERO; n];
    for k_idx in 0..n {
        let k = signed(n, k_idx);
        if k % 2 == 0 {
            for j in 0..n {
                let ji = j as isize;
                m[(wrap(n, ji + k / 2), wrap(n, ji - k / 2))] = r[j * n + k_idx] * dx;
            }
        } else {
            for (j, z) in line.iter_mut().enumerate() {
                *z = r[j * n + k_idx];
            }
            fft(&mut line);
            for (q, z) in line.iter_mut().enumerate() {
                *z *= half_shift(n, q, 1.0);
            }
            ifft(&mut line);
            for (h, z) in line.iter().enumerate() {
                let hi = h as isize;
                m[(wrap(n, hi + (k + 1) / 2), wrap(n, hi - (k - 1) / 2))] = z * dx;
            }
        }
    }
    m
}

/// Wigner field of a density matrix in the grid basis (`Tr rho = 1`).
pub fn wigner_of_density(grid: &PhaseGrid, rho: &Kernel) -> GridResult<WignerField> {
    let s = weyl_symbol(grid, rho)?;
    let c = 1.0 / (2.0 * PI * grid.hbar());
    Ok(WignerField { grid: *grid, data: s.values().iter().map(|z| z.re * c).collect() })
}

/// Density matrix `dx |psi><psi|` of a wave field.
pub fn density(psi: &WaveField) -> Kernel {
    let v = psi.values();
    let n = v.len();
    let dx = psi.grid().dx();
    Kernel::from_fn(n, n, |a, b| v[a] * v[b].conj() * dx)
}

pub fn wigner(psi: &WaveField) -> WignerField {
    wigner_of_density(psi.grid(), &density(psi)).expect("density matches its grid")
}

pub fn identity_operator(grid: &PhaseGrid) -> Kernel {
    Kernel::identity(grid.n(), grid.n())
}

pub fn position_operator(grid: &PhaseGrid) -> Kernel {
    Kernel::from_diagonal(&nalgebra::DVector::from_iterator(
        grid.n(),
        grid.xs().into_iter().map(|x| Complex64::new(x, 0.0)),
    ))
}

/// Circulant operator `F^-1 diag(g(hbar k)) F`.
pub fn momentum_function_operator(grid: &PhaseGrid, g: impl Fn(f64) -> f64) -> Kernel {
    let n = grid.n();
    let mut col = vec![ZERO; n];
    col[0] = Complex64::new(1.0, 0.0);
    fft(&mut col);
    for (j, z) in col.iter_mut().enumerate() {
        *z *= g(grid.momentum_of_bin(j));
    }
    ifft(&mut col);
    Kernel::from_fn(n, n, |a, b| col[wrap(n, a as isize - b as isize)])
}

pub fn momentum_operator(grid: &PhaseGrid) -> Kernel {
    momentum_function_operator(grid, |p| p)
}

/// `P^2 / 2m + V(X)`.
pub fn hamiltonian_operator(grid: &PhaseGrid, mass: f64, v: impl Fn(f64) -> f64) -> Kernel {
    let mut h = momentum_function_operator(grid, |p| p * p / (2.0 * mass));
    for (j, x) in grid.xs().into_iter().enumerate() {
        h[(j, j)] += v(x);
    }
    h
}

/// `(psi, A psi)` and `int A_W W dx dp`.
pub fn born_pairing(psi: &WaveField, a: &Kernel) -> GridResult<(Complex64, Complex64)> {
    let grid = *psi.grid();
    let v = nalgebra::DVector::from_column_slice(psi.values());
    if a.nrows() != v.len() {
        return Err(GridError::LengthMismatch { got: a.nrows(), want: v.len() });
    }
    let direct = (v.adjoint() * a * &v)[(0, 0)] * grid.dx();
    let sym = weyl_symbol(&grid, a)?;
    Ok((direct, wigner(psi).pair(&sym)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PhaseGrid {
        PhaseGrid::new(64, 12.0, 1.0).unwrap()
    }

    fn max_diff(a: &SymbolField, f: impl Fn(f64, f64) -> f64) -> f64 {
        let g = a.grid();
        let mut out = 0.0f64;
        for j in 0..g.n() {
            for m in 0..g.n() {
                out = out.max((a.get(j, m) - Complex64::new(f(g.x(j), g.p(m)), 0.0)).norm());
            }
        }
        out
    }

    #[test]
    fn symbols_of_basic_operators() {
        let g = grid();
        assert!(max_diff(&weyl_symbol(&g, &identity_operator(&g)).unwrap(), |_, _| 1.0) < 1e-12);
        assert!(max_diff(&weyl_symbol(&g, &position_operator(&g)).unwrap(), |x, _| x) < 1e-12);
        assert!(max_diff(&weyl_symbol(&g, &momentum_operator(&g)).unwrap(), |_, p| p) < 1e-12);
        let h = hamiltonian_operator(&g, 2.0, |x| x * x);
        assert!(max_diff(&weyl_symbol(&g, &h).unwrap(), |x, p| p * p / 4.0 + x * x) < 1e-11);
    }

    #[test]
    fn quantize_inverts_symbol() {
        let g = grid();
        let f = SymbolField::from_fn(g, |x, p| Complex64::new((-(x * x) - p * p).exp(), 0.3 * x * (-(p * p)).exp()));
        let back = weyl_symbol(&g, &weyl_quantize(&f)).unwrap();
        assert!(back.sub(&f).max_abs() < 1e-12);
        let k = hamiltonian_operator(&g, 1.0, |x| x.powi(4));
        let round = weyl_quantize(&weyl_symbol(&g, &k).unwrap());
        assert!((round - k).camax() < 1e-10);
    }

    #[test]
    fn wigner_of_ground_state() {
        let g = PhaseGrid::new(128, 20.0, 1.0).unwrap();
        // m = omega = hbar = 1: sigma^2 = 1/2
        let psi = WaveField::gaussian(g, 0.0, 0.0, 0.5f64.sqrt());
        let w = wigner(&psi);
        assert!((w.total() - 1.0).abs() < 1e-12);
        let mut err = 0.0f64;
        for j in (0..128).step_by(9) {
            for m in (0..128).step_by(7) {
                let (x, p) = (g.x(j), g.p(m));
                err = err.max((w.get(j, m) - (-(x * x) - p * p).exp() / PI).abs());
            }
        }
        assert!(err < 1e-10, "{err}");
        let purity = w.purity_integral() * 2.0 * PI * g.hbar();
        assert!((purity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn marginals_reproduce_densities() {
        let g = PhaseGrid::new(128, 20.0, 1.0).unwrap();
        let psi = WaveField::gaussian(g, 1.0, 0.7, 0.9);
        let w = wigner(&psi);
        let xm = w.x_marginal();
        let err = psi.values().iter().zip(&xm).map(|(z, v)| (z.norm_sqr() - v).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12);
        let pm = w.p_marginal();
        let err = psi.momentum_density().iter().zip(&pm).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn born_pairing_for_basic_operators() {
        let g = PhaseGrid::new(128, 20.0, 1.0).unwrap();
        let psi = WaveField::gaussian(g, -0.8, 0.5, 1.1);
        for a in [
            identity_operator(&g),
            position_operator(&g),
            momentum_operator(&g),
            hamiltonian_operator(&g, 1.0, |x| 0.5 * x * x),
        ] {
            let (d, w) = born_pairing(&psi, &a).unwrap();
            assert!((d - w).norm() < 1e-10 * d.norm().max(1.0), "{d} {w}");
        }
    }

    #[test]
    fn mixtures_are_convex() {
        let g = grid();
        let a = WaveField::gaussian(g, -1.0, 0.0, 0.8);
        let b = WaveField::gaussian(g, 1.5, 0.5, 0.8);
        let rho = density(&a) * Complex64::new(0.3, 0.0) + density(&b) * Complex64::new(0.7, 0.0);
        let direct = wigner_of_density(&g, &rho).unwrap();
        let (wa, wb) = (wigner(&a), wigner(&b));
        let mixed = WignerField::mixture(&[(0.3, &wa), (0.7, &wb)]).unwrap();
        let err = direct.values().iter().zip(mixed.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-13);
        assert!(direct.purity_integral() * 2.0 * PI < 1.0 - 1e-3);
    }
}
