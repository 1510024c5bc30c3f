//! Exact Heisenberg evolution and Noether invariants.

use crate::algebra::{KernelError, Presentation, Result, MASS, TIME};
use crate::anchors;
use crate::coeff::{Coefficient, GaussianRational};
use crate::poly::NcPoly;
use crate::presentations::{free_hamiltonian, levi_civita};
use crate::report::VerificationReport;

pub const K_MAX: usize = 64;

/// `A(t) = sum_k t^k / k! {H, .}^k A`, which solves `dA/dt = {H, A}` when the
/// iterated brackets vanish from some order on. `t` may be a formal
/// parameter or a number.
pub fn heisenberg_evolve(p: &Presentation, a: &NcPoly, h: &NcPoly, t: &Coefficient) -> Result<NcPoly> {
    let mut term = a.clone();
    let mut out = NcPoly::zero();
    let mut weight = Coefficient::one();
    for k in 0..=K_MAX {
        if term.is_zero() {
            return Ok(out);
        }
        out += &term.scale(&weight);
        term = p.quantum_pb(h, &term)?;
        weight = (&weight * t).scale(&GaussianRational::from_ratio(1, k as i64 + 1));
    }
    if term.is_zero() {
        Ok(out)
    } else {
        Err(KernelError::SeriesDiverges(K_MAX))
    }
}

/// `dA/dt - {H, A}` for an element carrying explicit `t` dependence.
pub fn heisenberg_residual(p: &Presentation, a_t: &NcPoly, h: &NcPoly) -> Result<NcPoly> {
    Ok(&p.param_derivative(a_t, TIME) - &p.quantum_pb(h, a_t)?)
}

/// `dG/dt + {H, G}`, the total time derivative of a possibly explicitly
/// time dependent observable.
pub fn total_derivative(p: &Presentation, g: &NcPoly, h: &NcPoly) -> Result<NcPoly> {
    Ok(&p.param_derivative(g, TIME) + &p.quantum_pb(h, g)?)
}

/// The free-particle invariants `J`, `P`, `mX - Pt`, `-H`, `M = mI` over
/// the CCR presentation, labelled.
pub fn noether_invariants(p: &Presentation, h: &NcPoly) -> Result<Vec<(String, NcPoly)>> {
    let x: Vec<NcPoly> = (1..=3).map(|i| p.gen(&format!("X{i}"))).collect();
    let pv: Vec<NcPoly> = (1..=3).map(|i| p.gen(&format!("P{i}"))).collect();
    let m = Coefficient::param(MASS);
    let t = Coefficient::param(TIME);
    let mut out = Vec::with_capacity(11);
    for j in 0..3 {
        let mut jj = NcPoly::zero();
        for k in 0..3 {
            for l in 0..3 {
                let e = levi_civita(j, k, l);
                if e != 0 {
                    jj += &p.mul(&x[k], &pv[l])?.scale_scalar(&GaussianRational::from_integer(e));
                }
            }
        }
        out.push((format!("J{}", j + 1), jj));
    }
    for j in 0..3 {
        out.push((format!("P{}", j + 1), pv[j].clone()));
    }
    for j in 0..3 {
        out.push((format!("mX{0}-P{0}t", j + 1), &x[j].scale(&m) - &pv[j].scale(&t)));
    }
    out.push(("-H".into(), -h));
    out.push(("M".into(), NcPoly::constant(m)));
    Ok(out)
}

/// Conservation of every free-particle invariant under `d/dt + {H, .}`.
pub fn noether_check(p: &Presentation, h: &NcPoly) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("noether");
    for (label, g) in noether_invariants(p, h)? {
        let d = total_derivative(p, &g, h)?;
        r.record_exact("noether", label, anchors::NOETHER, (!d.is_zero()).then(|| p.display(&d)));
    }
    Ok(r)
}

/// The free particle `H = P^2/2m` over the given CCR presentation, checked.
pub fn free_particle_noether(p: &Presentation) -> Result<VerificationReport> {
    noether_check(p, &free_hamiltonian(p)?)
}
