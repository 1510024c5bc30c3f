use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supmech_core::dynamics::pobvm::{CellSet, Localization};
use supmech_core::dynamics::schrodinger::Schrodinger;
use supmech_core::dynamics::weyl::{generator_errors, loglog_slope};
use supmech_core::gns::{
    check_state, direct_sum_faithful, gns, random_density, superselection_decompose, FiniteAlgebra, StateFunctional,
};
use supmech_core::grassmann::{enumerate_states, matrix_cc, random_rays, CcVerdict, Grassmann};
use supmech_core::grid::{PhaseGrid, WaveField};
use supmech_core::wwm::wigner::{density, wigner_of_density};
use supmech_core::wwm::{star_product, wigner, StarMethod, SymbolField, WignerField};
use supmech_core::GaussianRational;

type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMat {
    let a = CMat::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()) * c(0.5)
}

fn sqrt_psd(m: &CMat) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let top = eig.eigenvalues.amax();
    let root = |v: f64| if v > 1e-12 * top { v.sqrt() } else { 0.0 };
    let d = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|v| c(root(*v))));
    &eig.eigenvectors * CMat::from_diagonal(&d) * eig.eigenvectors.adjoint()
}

// Weighted block densities of a state on a block algebra.
fn densities(alg: &FiniteAlgebra, phi: &StateFunctional) -> Vec<CMat> {
    let mut off = 0;
    alg.blocks()
        .unwrap()
        .iter()
        .map(|&n| {
            let rho = CMat::from_fn(n, n, |j, i| phi.values()[off + i * n + j]);
            off += n * n;
            rho
        })
        .collect()
}

// Searches for phi = (phi_+ + phi_-)/2 with phi_+ != phi_- both states, using
// perturbations rho^{1/2} H rho^{1/2} with trace removed.
fn decomposition_found(alg: &FiniteAlgebra, phi: &StateFunctional, rng: &mut impl Rng) -> bool {
    let rhos = densities(alg, phi);
    let roots: Vec<CMat> = rhos.iter().map(sqrt_psd).collect();
    for _ in 0..20 {
        let hs: Vec<CMat> = roots.iter().map(|r| random_hermitian(rng, r.nrows())).collect();
        let mut d: Vec<CMat> = roots.iter().zip(&hs).map(|(r, h)| r * h * r).collect();
        let tr: Complex64 = d.iter().map(|m| m.trace()).sum();
        for (m, rho) in d.iter_mut().zip(&rhos) {
            *m -= rho * tr;
        }
        let size: f64 = d.iter().map(|m| m.norm()).sum();
        if size < 1e-9 {
            continue;
        }
        // rho + eps d = r (I + eps (H - tr)) r stays positive
        let spread = hs.iter().map(|h| (h - CMat::identity(h.nrows(), h.nrows()) * tr).norm()).fold(0.0, f64::max);
        let eps = 0.5 / spread;
        let side = |s: f64| {
            let blocks: Vec<(f64, CMat)> = rhos.iter().zip(&d).map(|(r, m)| (1.0, r + m * c(s * eps))).collect();
            let st = StateFunctional::from_densities(alg, &blocks).unwrap();
            check_state(alg, &st).unwrap().valid
        };
        if side(1.0) && side(-1.0) {
            return true;
        }
    }
    false
}

fn random_block_state(alg: &FiniteAlgebra, rng: &mut impl Rng) -> StateFunctional {
    let sizes = alg.blocks().unwrap().to_vec();
    let w: Vec<f64> =
        sizes.iter().map(|_| if rng.random_bool(0.5) { rng.random_range(0.1..1.0) } else { 0.0 }).collect();
    let total: f64 = w.iter().sum();
    let w: Vec<f64> = if total == 0.0 {
        (0..sizes.len()).map(|b| f64::from(b == 0)).collect()
    } else {
        w.iter().map(|x| x / total).collect()
    };
    let blocks: Vec<(f64, CMat)> = sizes
        .iter()
        .zip(&w)
        .map(|(&n, &wi)| {
            let rank = rng.random_range(1..=n);
            (wi, random_density(rng, n, rank))
        })
        .collect();
    StateFunctional::from_densities(alg, &blocks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gns_is_a_star_homomorphism(seed: u64, which in 0usize..3) {
        let alg = FiniteAlgebra::builtin(["matn:2", "matn:3", "sumn:2,3"][which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_block_state(&alg, &mut rng);
        let rep = gns(&alg, &phi).unwrap();
        let (hom, star) = rep.rep.homomorphism_residuals(&alg);
        prop_assert!(hom <= 1e-12 && star <= 1e-12, "hom {hom:e}, star {star:e}");
    }

    #[test]
    fn purity_matches_decomposition_search(seed: u64, which in 0usize..2) {
        let alg = FiniteAlgebra::builtin(["matn:2", "sumn:2,3"][which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_block_state(&alg, &mut rng);
        let irreducible = gns(&alg, &phi).unwrap().is_irreducible();
        prop_assert_eq!(irreducible, !decomposition_found(&alg, &phi, &mut rng));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn irreducible_matrix_triples_are_compatible_complete(seed: u64, n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let observables: Vec<CMat> = (0..n * n + 1).map(|_| random_hermitian(&mut rng, n)).collect();
        let rays = random_rays(&mut rng, n, n * n + 2);
        prop_assert_eq!(matrix_cc(&observables, &rays), CcVerdict::Pass);
    }

    #[test]
    fn superselection_operators_commute(seed: u64, which in 0usize..2) {
        let alg = FiniteAlgebra::builtin(["sumn:2,3", "sumn:1,2,2"][which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<StateFunctional> = (0..3).map(|_| random_block_state(&alg, &mut rng)).collect();
        let ds = direct_sum_faithful(&alg, &states).unwrap();
        let sel = superselection_decompose(&ds.rep);
        let values: Vec<Vec<f64>> = (0..2).map(|_| sel.sectors.iter().map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let (q1, q2) = (sel.operator(&values[0]), sel.operator(&values[1]));
        let mut worst = (&q1 * &q2 - &q2 * &q1).norm();
        for m in &ds.rep.matrices {
            worst = worst.max((&q1 * m - m * &q1).norm());
        }
        prop_assert!(worst <= 1e-12, "commutator {worst:e}");
    }
}

fn random_grassmann(g: &Grassmann, rng: &mut impl Rng) -> Vec<GaussianRational> {
    (0..g.dim())
        .map(|_| {
            let mut part = || GaussianRational::from_ratio(rng.random_range(-9..=9), rng.random_range(1..=4));
            GaussianRational::new(part().re().clone(), part().re().clone())
        })
        .collect()
}

#[test]
fn berezin_states_are_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for n in 1..=4 {
        let Some(state) = enumerate_states(n).unwrap().state() else {
            continue;
        };
        let g = Grassmann::new(n);
        for _ in 0..500 {
            let f = g.from_coordinates(&random_grassmann(&g, &mut rng));
            let ff = g.mul(&f, &g.star(&f).unwrap()).unwrap();
            let v = state.expectation(&g, &ff).unwrap().to_complex();
            assert!(v.im == 0.0 && v.re >= -1e-12, "n = {n}: {v}");
            checked += 1;
        }
    }
    assert!(checked >= 500);
}

fn gaussian(g: PhaseGrid, rng: &mut impl Rng) -> WaveField {
    WaveField::gaussian(g, rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0), rng.random_range(0.6..1.4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn wigner_of_mixture_is_mixture_of_wigners(seed: u64, w in 0.05f64..0.95) {
        let g = PhaseGrid::new(64, 16.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (gaussian(g, &mut rng), gaussian(g, &mut rng));
        let rho = density(&a) * c(w) + density(&b) * c(1.0 - w);
        let direct = wigner_of_density(&g, &rho).unwrap();
        let (wa, wb) = (wigner(&a), wigner(&b));
        let mixed = WignerField::mixture(&[(w, &wa), (1.0 - w, &wb)]).unwrap();
        let gap = direct.values().iter().zip(mixed.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(gap <= 1e-12, "gap {gap:e}");
    }

    #[test]
    fn purity_integral_is_bounded(seed: u64, w in 0.1f64..0.9, hbar in 0.5f64..2.0) {
        let g = PhaseGrid::new(128, 24.0, hbar).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (gaussian(g, &mut rng), gaussian(g, &mut rng));
        let bound = 1.0 / (2.0 * std::f64::consts::PI * hbar);
        let pure = wigner(&a).purity_integral();
        prop_assert!((pure - bound).abs() <= 1e-8 * bound, "pure {pure} vs {bound}");
        let rho = density(&a) * c(w) + density(&b) * c(1.0 - w);
        let mixed = wigner_of_density(&g, &rho).unwrap().purity_integral();
        prop_assert!(mixed <= bound * (1.0 + 1e-12), "mixed {mixed} > {bound}");
    }

    #[test]
    fn series_matches_quadrature(seed: u64) {
        // polynomials of degree <= 4 under a Gaussian window, so both
        // evaluators see the same smooth periodic symbol
        let g = PhaseGrid::with_spans(64, 20.0, 20.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut poly = || {
            let k: Vec<f64> = (0..15).map(|_| rng.random_range(-1.0..1.0)).collect();
            SymbolField::from_real_fn(g, move |x, p| {
                let mut s = 0.0;
                let mut i = 0;
                for a in 0..=4 {
                    for b in 0..=4 - a {
                        s += k[i] * x.powi(a) * p.powi(b) * 0.5f64.powi(a + b);
                        i += 1;
                    }
                }
                s * (-(x * x + p * p) / 4.0).exp()
            })
        };
        let (f, h) = (poly(), poly());
        let series = star_product(&f, &h, 0.5, StarMethod::Series(8)).unwrap();
        let quad = star_product(&f, &h, 0.5, StarMethod::Quadrature).unwrap();
        let gap = series.sub(&quad).max_abs();
        prop_assert!(gap <= 1e-6, "gap {gap:e}");
    }

    #[test]
    fn star_product_is_associative(seed: u64, hbar in 0.1f64..1.0) {
        let g = PhaseGrid::with_spans(16, 4.0, 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut poly = || {
            let k: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            SymbolField::polynomial(g, move |x, p| k[0] + k[1] * x + k[2] * p + k[3] * x * x + k[4] * x * p + k[5] * p * p)
        };
        let (a, b, d) = (poly(), poly(), poly());
        let m = StarMethod::Series(8);
        let left = star_product(&star_product(&a, &b, hbar, m).unwrap(), &d, hbar, m).unwrap();
        let right = star_product(&a, &star_product(&b, &d, hbar, m).unwrap(), hbar, m).unwrap();
        let gap = left.sub(&right).max_abs() / left.max_abs().max(1.0);
        prop_assert!(gap <= 1e-8, "gap {gap:e}");
    }

    #[test]
    fn split_step_conserves_energy(seed: u64) {
        let g = PhaseGrid::new(256, 30.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = gaussian(g, &mut rng);
        let h = Schrodinger::harmonic(&g, 1.0, 1.0);
        let e0 = h.energy(&psi);
        // step 1e-4; the splitting error in <H> is second order in the step
        let after = h.evolve(&psi, 0.1, 1000).unwrap();
        let drift = (h.energy(&after) - e0).abs() / e0.abs();
        prop_assert!(drift <= 1e-8, "drift {drift:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn localization_is_monotone(seed: u64, lo in 0usize..128, len in 0usize..128, extra in 0usize..64) {
        let g = PhaseGrid::new(256, 20.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = gaussian(g, &mut rng);
        let loc = Localization::new(g);
        let small = CellSet::from_cells(256, lo..lo + len).unwrap();
        let large = small.union(&CellSet::from_cells(256, (0..extra).map(|_| rng.random_range(0..256))).unwrap());
        prop_assert!(small.is_subset(&large));
        prop_assert!(loc.probability_exact(&psi, &small).unwrap() <= loc.probability_exact(&psi, &large).unwrap());
        prop_assert!(loc.probability(&psi, &small).unwrap() <= loc.probability(&psi, &large).unwrap());
    }
}

#[test]
fn translation_generator_is_first_order() {
    let g = PhaseGrid::new(256, 20.0, 1.0).unwrap();
    let psi = WaveField::gaussian(g, 0.4, 0.8, 1.0);
    let eps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let errs = generator_errors(&psi, &eps);
    let (slope, _) = loglog_slope(&eps, &errs);
    assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
}
