use proptest::prelude::*;

use supmech_core::algebra::Strategy;
use supmech_core::dynamics::heisenberg::heisenberg_evolve;
use supmech_core::presentations::{ccr_spin, free_hamiltonian, galilei_extended, grassmann};
use supmech_core::{Coefficient, GaussianRational, NcPoly, Presentation, Word};

fn presentations() -> Vec<Presentation> {
    vec![galilei_extended(), ccr_spin(), grassmann(3)]
}

type RawTerm = (Vec<u16>, i64);

fn raw_terms(max_len: usize) -> impl proptest::strategy::Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec((prop::collection::vec(0u16..64, 0..=max_len), -4i64..=4), 1..4)
}

// Letters are reduced modulo the number of generators.
fn build(p: &Presentation, terms: &[RawTerm]) -> NcPoly {
    let n = p.num_generators() as u16;
    let mut out = NcPoly::zero();
    for (letters, c) in terms {
        let w = Word(letters.iter().map(|g| g % n).collect());
        out += &NcPoly::term(w, Coefficient::integer(*c));
    }
    out
}

// Keep only words of the given parity so the element is homogeneous.
fn homogeneous(p: &Presentation, terms: &[RawTerm], odd: bool) -> NcPoly {
    let n = p.num_generators() as u16;
    let mut out = NcPoly::zero();
    for (letters, c) in terms {
        let w = Word(letters.iter().map(|g| g % n).collect());
        if p.word_parity(&w).is_odd() == odd {
            out += &NcPoly::term(w, Coefficient::integer(*c));
        }
    }
    p.normal_form(&out).unwrap()
}

fn sign(a: bool, b: bool) -> GaussianRational {
    GaussianRational::from_integer(if a && b { -1 } else { 1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rewriting_is_confluent(which in 0usize..3, terms in raw_terms(4)) {
        let p = &presentations()[which];
        let raw = build(p, &terms);
        let left = p.normal_form_with(&raw, Strategy::Leftmost).unwrap();
        let right = p.normal_form_with(&raw, Strategy::Rightmost).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(p.is_normal(&left));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn super_jacobi(
        which in 0usize..3,
        a in raw_terms(2), b in raw_terms(2), c in raw_terms(2),
        pa: bool, pb: bool, pc: bool,
    ) {
        let p = &presentations()[which];
        let (x, y, z) = (homogeneous(p, &a, pa), homogeneous(p, &b, pb), homogeneous(p, &c, pc));
        let br = |u: &NcPoly, v: &NcPoly| p.supercommutator(u, v).unwrap();
        let total = &(&br(&br(&x, &y), &z).scale_scalar(&sign(pa, pc))
            + &br(&br(&y, &z), &x).scale_scalar(&sign(pb, pa)))
            + &br(&br(&z, &x), &y).scale_scalar(&sign(pc, pb));
        prop_assert!(total.is_zero(), "{}", p.display(&total));
    }

    #[test]
    fn super_leibniz_for_even_first_argument(
        which in 0usize..3,
        a in raw_terms(2), b in raw_terms(2), c in raw_terms(2),
        pb: bool,
    ) {
        let p = &presentations()[which];
        let x = homogeneous(p, &a, false);
        let y = homogeneous(p, &b, pb);
        let z = build(p, &c);
        let pbk = |u: &NcPoly, v: &NcPoly| p.quantum_pb(u, v).unwrap();
        let lhs = pbk(&x, &p.mul(&y, &z).unwrap());
        let rhs = &p.mul(&pbk(&x, &y), &z).unwrap() + &p.mul(&y, &pbk(&x, &z)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_is_an_anti_automorphism(which in 0usize..3, a in raw_terms(3), b in raw_terms(3)) {
        let p = &presentations()[which];
        let (x, y) = (build(p, &a), build(p, &b));
        let lhs = p.star(&p.mul(&x, &y).unwrap()).unwrap();
        let rhs = p.mul(&p.star(&y).unwrap(), &p.star(&x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let back = p.star(&p.star(&x).unwrap()).unwrap();
        prop_assert_eq!(back, p.normal_form(&x).unwrap());
    }

    #[test]
    fn heisenberg_flow_composes(
        terms in prop::collection::vec((prop::collection::vec(0u16..6, 0..=3), -3i64..=3), 1..4),
        t in -5i64..=5, s in -5i64..=5, den in 1i64..=4,
    ) {
        let p = ccr_spin();
        // X1..X3 are generators 0..2, P1..P3 are 3..5
        let a = p.normal_form(&build(&p, &terms)).unwrap();
        let h = free_hamiltonian(&p).unwrap();
        let (tc, sc) = (Coefficient::ratio(t, den), Coefficient::ratio(s, den));
        let direct = heisenberg_evolve(&p, &a, &h, &(&tc + &sc)).unwrap();
        let stepwise = heisenberg_evolve(&p, &heisenberg_evolve(&p, &a, &h, &tc).unwrap(), &h, &sc).unwrap();
        prop_assert_eq!(direct, stepwise);
    }
}
