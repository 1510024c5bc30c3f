//! Split-step Fourier integration of `i hbar psi_t = -hbar^2/2m psi_xx + V psi`.

use num_complex::Complex64;

use crate::grid::{apply_multiplier, GridError, GridResult, PhaseGrid, WaveField};

#[derive(Clone, Debug)]
pub struct Schrodinger {
    pub mass: f64,
    pub potential: Vec<f64>,
}

impl Schrodinger {
    pub fn new(grid: &PhaseGrid, mass: f64, v: impl Fn(f64) -> f64) -> Self {
        Self { mass, potential: grid.xs().into_iter().map(v).collect() }
    }

    pub fn free(grid: &PhaseGrid, mass: f64) -> Self {
        Self::new(grid, mass, |_| 0.0)
    }

    pub fn harmonic(grid: &PhaseGrid, mass: f64, omega: f64) -> Self {
        Self::new(grid, mass, |x| 0.5 * mass * omega * omega * x * x)
    }

    fn validate(&self, grid: &PhaseGrid) -> GridResult<()> {
        if self.potential.len() != grid.n() {
            return Err(GridError::LengthMismatch { got: self.potential.len(), want: grid.n() });
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(GridError::NonPositive("mass"));
        }
        if self.potential.iter().any(|v| !v.is_finite()) {
            return Err(GridError::Invalid("potential has non-finite samples".into()));
        }
        Ok(())
    }

    /// `<psi|H|psi>` with the kinetic term evaluated spectrally.
    pub fn energy(&self, psi: &WaveField) -> f64 {
        let g = *psi.grid();
        let mut kin = psi.values().to_vec();
        let m = self.mass;
        apply_multiplier(&mut kin, |j| {
            let p = g.momentum_of_bin(j);
            Complex64::new(p * p / (2.0 * m), 0.0)
        });
        let dx = g.dx();
        psi.values().iter().zip(&kin).zip(&self.potential).map(|((z, k), v)| (z.conj() * (k + z * v)).re).sum::<f64>()
            * dx
    }

    /// Strang splitting: half potential kick, full kinetic drift, half kick.
    pub fn evolve(&self, psi: &WaveField, t: f64, steps: usize) -> GridResult<WaveField> {
        let g = *psi.grid();
        self.validate(&g)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(GridError::Invalid(format!("time {t} must be non-negative")));
        }
        if steps == 0 {
            return Err(GridError::Invalid("at least one step is required".into()));
        }
        let dt = t / steps as f64;
        let hbar = g.hbar();
        let half_kick: Vec<Complex64> =
            self.potential.iter().map(|v| Complex64::from_polar(1.0, -v * dt / (2.0 * hbar))).collect();
        let drift: Vec<Complex64> = (0..g.n())
            .map(|j| {
                let p = g.momentum_of_bin(j);
                Complex64::from_polar(1.0, -p * p * dt / (2.0 * self.mass * hbar))
            })
            .collect();
        let mut out = psi.clone();
        for step in 0..steps {
            let buf = out.values_mut();
            buf.iter_mut().zip(&half_kick).for_each(|(z, k)| *z *= k);
            apply_multiplier(buf, |j| drift[j]);
            buf.iter_mut().zip(&half_kick).for_each(|(z, k)| *z *= k);
            if buf.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(GridError::NonFinite { step: step + 1 });
            }
        }
        Ok(out)
    }
}

/// Closed-form position variance of a free Gaussian started with variance
/// `sigma0^2` and no chirp.
pub fn free_gaussian_variance(sigma0: f64, hbar: f64, mass: f64, t: f64) -> f64 {
    let s2 = sigma0 * sigma0;
    s2 * (1.0 + (hbar * t / (2.0 * mass * s2)).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_is_identity() {
        let g = PhaseGrid::new(128, 20.0, 1.0).unwrap();
        let psi = WaveField::gaussian(g, 0.5, 1.0, 1.0);
        let s = Schrodinger::harmonic(&g, 1.0, 1.0);
        let out = s.evolve(&psi, 0.0, 3).unwrap();
        let err = out.values().iter().zip(psi.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-13);
    }

    #[test]
    fn norm_is_preserved_per_step() {
        let g = PhaseGrid::new(256, 30.0, 1.0).unwrap();
        let mut psi = WaveField::gaussian(g, -2.0, 1.0, 0.8);
        let s = Schrodinger::new(&g, 1.0, |x| 0.1 * x.powi(4) - x * x);
        for _ in 0..50 {
            psi = s.evolve(&psi, 0.01, 1).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn second_order_in_step_size() {
        let g = PhaseGrid::new(256, 30.0, 1.0).unwrap();
        let psi = WaveField::gaussian(g, 1.0, 0.0, 1.0);
        let s = Schrodinger::new(&g, 1.0, |x| 0.5 * x * x + 0.05 * x.powi(4));
        let reference = s.evolve(&psi, 1.0, 4096).unwrap();
        let err = |n| {
            let a = s.evolve(&psi, 1.0, n).unwrap();
            a.values().iter().zip(reference.values()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
        };
        let ratio = err(32) / err(64);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn invalid_inputs_rejected() {
        let g = PhaseGrid::new(64, 10.0, 1.0).unwrap();
        let psi = WaveField::gaussian(g, 0.0, 0.0, 1.0);
        let s = Schrodinger::free(&g, 1.0);
        assert!(s.evolve(&psi, 1.0, 0).is_err());
        assert!(s.evolve(&psi, -1.0, 1).is_err());
        let bad = Schrodinger::new(&g, 1.0, |x| if x > 0.0 { f64::NAN } else { 0.0 });
        assert!(bad.evolve(&psi, 1.0, 1).is_err());
        let overflow = Schrodinger::new(&g, 1e-320, |_| 0.0);
        assert!(matches!(overflow.evolve(&psi, 1.0, 1), Err(GridError::NonFinite { .. })));
    }
}
