//! Weyl form of the canonical commutation relations on the grid, in units
//! with `hbar = 1`: `U(a)` translates by `a`, `V(b)` multiplies by
//! `exp(-i b x)`, and `U(a) V(b) = exp(i a b) V(b) U(a)`.

use num_complex::Complex64;

use crate::anchors;
use crate::dynamics::pobvm::translate;
use crate::grid::{apply_multiplier, GridError, GridResult, PhaseGrid, WaveField};
use crate::report::VerificationReport;

/// Number of cells in `a`, provided `a` is a whole multiple of the spacing.
pub fn cells_in(grid: &PhaseGrid, a: f64) -> GridResult<isize> {
    let k = a / grid.dx();
    let r = k.round();
    if (k - r).abs() > 1e-9 * k.abs().max(1.0) {
        return Err(GridError::NotCellAligned(a));
    }
    Ok(r as isize)
}

pub fn shift(psi: &WaveField, a: f64) -> GridResult<WaveField> {
    Ok(translate(psi, cells_in(psi.grid(), a)?))
}

pub fn boost(psi: &WaveField, b: f64) -> WaveField {
    let g = *psi.grid();
    let v = psi.values().iter().enumerate().map(|(j, z)| z * Complex64::from_polar(1.0, -b * g.x(j))).collect();
    WaveField::new(g, v).expect("same length")
}

/// Translation by an arbitrary distance, `exp(-i a P / hbar)`, applied in
/// Fourier space.
pub fn spectral_shift(psi: &WaveField, a: f64) -> WaveField {
    let g = *psi.grid();
    let mut v = psi.values().to_vec();
    apply_multiplier(&mut v, |j| Complex64::from_polar(1.0, -a * g.momentum_of_bin(j) / g.hbar()));
    WaveField::new(g, v).expect("same length")
}

/// Smooth test function supported in `|x - c| < r`, normalised.
pub fn bump(grid: PhaseGrid, c: f64, r: f64) -> WaveField {
    WaveField::from_fn(grid, |x| {
        let s = (x - c) / r;
        if s.abs() < 1.0 {
            Complex64::new((-1.0 / (1.0 - s * s)).exp(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .normalized()
}

fn max_diff(a: &WaveField, b: &WaveField) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn weyl_relations_check(grid: &PhaseGrid, a: f64, b: f64, tol: f64) -> GridResult<VerificationReport> {
    let mut r = VerificationReport::new("weyl-relations");
    let psi = bump(*grid, 0.0, grid.length() / 6.0);
    let a2 = a / 2.0;
    let b2 = 0.75 * b;
    // shifts compose
    let lhs = shift(&shift(&psi, a2)?, a - a2)?;
    let rhs = shift(&psi, a)?;
    r.record("weyl", "U(a/2)U(a/2)=U(a)", anchors::WEYL_RELATIONS, max_diff(&lhs, &rhs), tol);
    let back = shift(&shift(&psi, a)?, -a)?;
    r.record("weyl", "U(a)U(-a)=I", anchors::WEYL_RELATIONS, max_diff(&back, &psi), tol);
    let lhs = boost(&boost(&psi, b2), b - b2);
    let rhs = boost(&psi, b);
    r.record("weyl", "V(b')V(b-b')=V(b)", anchors::WEYL_RELATIONS, max_diff(&lhs, &rhs), tol);
    let uv = shift(&boost(&psi, b), a)?;
    let vu = boost(&shift(&psi, a)?, b);
    let phase = Complex64::from_polar(1.0, a * b);
    let vu = WaveField::new(*grid, vu.values().iter().map(|z| z * phase).collect())?;
    let c = r.record("weyl", "U(a)V(b)=e^{iab}V(b)U(a)", anchors::WEYL_RELATIONS, max_diff(&uv, &vu), tol);
    c.detail = Some(format!("a = {a}, b = {b}"));
    Ok(r)
}

/// `||(U(eps) psi - psi)/eps + (i/hbar) P psi||` for each `eps`.
pub fn generator_errors(psi: &WaveField, eps: &[f64]) -> Vec<f64> {
    let g = *psi.grid();
    let p_psi = psi.momentum_apply();
    let k = Complex64::new(0.0, 1.0 / g.hbar());
    eps.iter()
        .map(|&e| {
            let moved = spectral_shift(psi, e);
            let d: Vec<Complex64> = moved
                .values()
                .iter()
                .zip(psi.values())
                .zip(p_psi.values())
                .map(|((u, v), pp)| (u - v) / e + k * pp)
                .collect();
            (d.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.dx()).sqrt()
        })
        .collect()
}

/// Least-squares slope and intercept of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let (slope, intercept, _) = loglog_fit(x, y);
    (slope, intercept)
}

/// As [`loglog_slope`], also returning the residuals in `log y`.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> (f64, f64, Vec<f64>) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = lx.iter().zip(&ly).map(|(a, b)| b - (intercept + slope * a)).collect();
    (slope, intercept, residuals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trivial_parameters_are_exact() {
        let g = PhaseGrid::new(128, 20.0, 1.0).unwrap();
        let r = weyl_relations_check(&g, 0.0, 0.0, 0.0).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn commutation_phase_on_the_lattice() {
        let g = PhaseGrid::new(256, 20.0, 1.0).unwrap();
        let r = weyl_relations_check(&g, 64.0 * g.dx(), 2.0 * PI / 20.0 * 32.0, 1e-12).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn off_lattice_shift_rejected() {
        let g = PhaseGrid::new(64, 10.0, 1.0).unwrap();
        assert!(weyl_relations_check(&g, 0.3 * g.dx(), 1.0, 1e-10).is_err());
    }

    #[test]
    fn generator_converges_at_first_order() {
        let g = PhaseGrid::new(256, 30.0, 1.0).unwrap();
        let psi = WaveField::gaussian(g, 0.0, 1.0, 1.0);
        let eps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
        let errs = generator_errors(&psi, &eps);
        let (slope, _) = loglog_slope(&eps, &errs);
        assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    }
}
