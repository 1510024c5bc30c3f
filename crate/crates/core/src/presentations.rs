//! Built-in presentations and the symbolic Galilei suite.
//!
//! Generator orders:
//!
//! * `galilei-extended`: `J1 J2 J3 K1 K2 K3 P1 P2 P3 H M`
//! * `ccr-spin`: `X1 X2 X3 P1 P2 P3 S1 S2 S3`
//! * `grassmann:<n>`: `th1 .. thn`
//!
//! Relation tables are written as supercommutators, `[a, b] = -i hbar {a, b}`.

use crate::algebra::{KernelError, Parity, Presentation, PresentationBuilder, Result, Strategy, HBAR, MASS};
use crate::anchors;
use crate::coeff::{Coefficient, GaussianRational};
use crate::poly::{NcPoly, Word};
use crate::report::VerificationReport;

pub const GALILEI_GENERATORS: [&str; 11] = ["J1", "J2", "J3", "K1", "K2", "K3", "P1", "P2", "P3", "H", "M"];

/// `eps_{ijk}` for indices in `0..3`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    if i == j || j == k || i == k {
        0
    } else if (i, j, k) == (0, 1, 2) || (i, j, k) == (1, 2, 0) || (i, j, k) == (2, 0, 1) {
        1
    } else {
        -1
    }
}

fn vector_rels(mut b: PresentationBuilder, a: &str, v: &str) -> PresentationBuilder {
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0 && (a != v || i < j) {
                    let sign = if e > 0 { "" } else { "-" };
                    b = b.relation(
                        &format!("{a}{}", i + 1),
                        &format!("{v}{}", j + 1),
                        &format!("{sign}i*hbar*{v}{}", k + 1),
                    );
                }
            }
        }
    }
    b
}

pub fn galilei_extended() -> Presentation {
    let mut b = PresentationBuilder::new("galilei-extended");
    for g in GALILEI_GENERATORS {
        b = b.generator(g, Parity::Even);
    }
    b = vector_rels(b, "J", "J");
    b = vector_rels(b, "J", "K");
    b = vector_rels(b, "J", "P");
    for i in 1..=3 {
        b = b.relation(&format!("K{i}"), "H", &format!("i*hbar*P{i}")).relation(
            &format!("K{i}"),
            &format!("P{i}"),
            "i*hbar*M",
        );
    }
    b.build().expect("built-in Galilei presentation is valid")
}

pub fn ccr_spin() -> Presentation {
    let mut b = PresentationBuilder::new("ccr-spin");
    for g in ["X1", "X2", "X3", "P1", "P2", "P3", "S1", "S2", "S3"] {
        b = b.generator(g, Parity::Even);
    }
    for i in 1..=3 {
        b = b.relation(&format!("X{i}"), &format!("P{i}"), "i*hbar");
    }
    b = vector_rels(b, "S", "S");
    b.build().expect("built-in CCR presentation is valid")
}

pub fn grassmann(n: usize) -> Presentation {
    let mut b = PresentationBuilder::new(format!("grassmann:{n}"));
    for k in 1..=n {
        b = b.generator(format!("th{k}"), Parity::Odd);
    }
    b.build().expect("built-in Grassmann presentation is valid")
}

/// Look up a presentation by its CLI name.
pub fn by_name(name: &str) -> Result<Presentation> {
    match name {
        "galilei" | "galilei-extended" => Ok(galilei_extended()),
        "ccr-spin" | "ccr" => Ok(ccr_spin()),
        _ => match name.strip_prefix("grassmann:").map(str::parse::<usize>) {
            Some(Ok(n)) if n <= 16 => Ok(grassmann(n)),
            _ => Err(KernelError::Invalid(format!("unknown preset `{name}`"))),
        },
    }
}

fn scalar(n: i64) -> GaussianRational {
    GaussianRational::from_integer(n)
}

fn residual(p: &Presentation, computed: &NcPoly, expected: &NcPoly) -> Option<String> {
    let d = computed - expected;
    (!d.is_zero()).then(|| p.display(&d))
}

/// Expected `{g_a, g_b}` for the Galilei table, coded directly from the
/// classical bracket list rather than from the relation table.
fn galilei_expected(p: &Presentation, a: &str, b: &str) -> NcPoly {
    let split = |s: &str| {
        let (kind, idx) = s.split_at(1);
        (kind.chars().next().unwrap(), idx.parse::<usize>().ok().map(|i| i - 1))
    };
    let gen = |k: char, i: usize| p.gen(&format!("{k}{}", i + 1));
    let (ka, ia) = split(a);
    let (kb, ib) = split(b);
    let vector = |k: char| matches!(k, 'J' | 'K' | 'P');
    // {J_i, V_j} = -eps_ijk V_k for V in {J, K, P}
    let rot = |i: usize, j: usize, v: char| {
        let mut out = NcPoly::zero();
        for k in 0..3 {
            out += &gen(v, k).scale_scalar(&scalar(-levi_civita(i, j, k)));
        }
        out
    };
    match (ka, ia, kb, ib) {
        ('J', Some(i), v, Some(j)) if vector(v) => rot(i, j, v),
        (v, Some(i), 'J', Some(j)) if vector(v) => -&rot(j, i, v),
        ('K', Some(i), 'H', None) => -&gen('P', i),
        ('H', None, 'K', Some(i)) => gen('P', i),
        ('K', Some(i), 'P', Some(j)) if i == j => -&p.gen("M"),
        ('P', Some(i), 'K', Some(j)) if i == j => p.gen("M"),
        _ => NcPoly::zero(),
    }
}

/// All 55 brackets between distinct generators of the extended Galilei
/// algebra, each compared with the expected value.
pub fn verify_pb_table(p: &Presentation) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("galilei-pb-table");
    for (ia, a) in GALILEI_GENERATORS.iter().enumerate() {
        for b in &GALILEI_GENERATORS[ia + 1..] {
            let got = p.quantum_pb(&p.gen(a), &p.gen(b))?;
            let want = galilei_expected(p, a, b);
            r.record_exact("pb-table", format!("{{{a},{b}}}"), anchors::GALILEI_TABLE, residual(p, &got, &want));
        }
    }
    Ok(r)
}

pub struct GalileiInvariants {
    pub c1: NcPoly,
    pub c2: NcPoly,
    pub b: [NcPoly; 3],
}

pub fn galilei_invariants(p: &Presentation) -> Result<GalileiInvariants> {
    let m = p.gen("M");
    let h = p.gen("H");
    let mut p_sq = NcPoly::zero();
    for i in 1..=3 {
        let pi = p.gen(&format!("P{i}"));
        p_sq += &p.mul(&pi, &pi)?;
    }
    let c1 = &p.mul(&m, &h)?.scale_scalar(&scalar(2)) - &p_sq;
    let mut bs = Vec::with_capacity(3);
    for j in 0..3 {
        let mut bj = p.mul(&m, &p.gen(&format!("J{}", j + 1)))?;
        for k in 0..3 {
            for l in 0..3 {
                let e = levi_civita(j, k, l);
                if e != 0 {
                    let kp = p.mul(&p.gen(&format!("K{}", k + 1)), &p.gen(&format!("P{}", l + 1)))?;
                    bj += &kp.scale_scalar(&scalar(-e));
                }
            }
        }
        bs.push(bj);
    }
    let mut c2 = NcPoly::zero();
    for bj in &bs {
        c2 += &p.mul(bj, bj)?;
    }
    let b: [NcPoly; 3] = bs.try_into().expect("three components");
    Ok(GalileiInvariants { c1, c2, b })
}

/// `{C1, h} = {C2, h} = 0` for all generators, plus the `B_j` identities
/// that make the second one work.
pub fn casimir_check(p: &Presentation) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("galilei-casimirs");
    let inv = galilei_invariants(p)?;
    for (name, c) in [("C1", &inv.c1), ("C2", &inv.c2)] {
        for g in GALILEI_GENERATORS {
            let got = p.quantum_pb(c, &p.gen(g))?;
            r.record_exact(
                "casimir",
                format!("{{{name},{g}}}"),
                anchors::GALILEI_CASIMIRS,
                residual(p, &got, &NcPoly::zero()),
            );
        }
    }
    for kind in ["J", "K", "P", "H"] {
        let range: Vec<Option<usize>> = if kind == "H" { vec![None] } else { (0..3).map(Some).collect() };
        for j in range {
            let g = match j {
                Some(j) => p.gen(&format!("{kind}{}", j + 1)),
                None => p.gen("H"),
            };
            for k in 0..3 {
                let got = p.quantum_pb(&g, &inv.b[k])?;
                let want = match (kind, j) {
                    ("J", Some(j)) => {
                        let mut w = NcPoly::zero();
                        for l in 0..3 {
                            w += &inv.b[l].scale_scalar(&scalar(-levi_civita(j, k, l)));
                        }
                        w
                    }
                    _ => NcPoly::zero(),
                };
                let label = match j {
                    Some(j) => format!("{{{kind}{},B{}}}", j + 1, k + 1),
                    None => format!("{{H,B{}}}", k + 1),
                };
                r.record_exact("casimir-intermediate", label, anchors::GALILEI_B_VECTOR, residual(p, &got, &want));
            }
        }
    }
    Ok(r)
}

/// Replace the central generator `M` by `m I`.
pub fn set_mass(p: &Presentation, a: &NcPoly) -> Result<NcPoly> {
    let m = p.gen_id("M").ok_or_else(|| KernelError::Invalid("no generator M".into()))?;
    p.substitute_generator(a, m, &NcPoly::constant(Coefficient::param(MASS)))
}

pub struct DerivedObservables {
    pub x: [NcPoly; 3],
    pub s: [NcPoly; 3],
    pub u: NcPoly,
}

pub fn derived(p: &Presentation) -> Result<DerivedObservables> {
    let inv_m = Coefficient::param_pow(MASS, -1);
    let x: Vec<NcPoly> = (1..=3).map(|i| p.gen(&format!("K{i}")).scale(&inv_m)).collect();
    let pv: Vec<NcPoly> = (1..=3).map(|i| p.gen(&format!("P{i}"))).collect();
    let mut s = Vec::with_capacity(3);
    for j in 0..3 {
        let mut sj = p.gen(&format!("J{}", j + 1));
        for k in 0..3 {
            for l in 0..3 {
                let e = levi_civita(j, k, l);
                if e != 0 {
                    sj += &p.mul(&x[k], &pv[l])?.scale_scalar(&scalar(-e));
                }
            }
        }
        s.push(sj);
    }
    let mut p_sq = NcPoly::zero();
    for pi in &pv {
        p_sq += &p.mul(pi, pi)?;
    }
    let u = &p.gen("H") - &p_sq.scale(&Coefficient::param_pow(MASS, -1).scale(&GaussianRational::from_ratio(1, 2)));
    Ok(DerivedObservables { x: x.try_into().expect("three components"), s: s.try_into().expect("three components"), u })
}

/// Position, spin and internal energy after `M -> m I`.
pub fn derived_observables(p: &Presentation) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("galilei-derived");
    let d = derived(p)?;
    let pv: Vec<NcPoly> = (1..=3).map(|i| p.gen(&format!("P{i}"))).collect();
    let jv: Vec<NcPoly> = (1..=3).map(|i| p.gen(&format!("J{i}"))).collect();
    let pb = |a: &NcPoly, b: &NcPoly| -> Result<NcPoly> { set_mass(p, &p.quantum_pb(a, b)?) };
    let eps_sum = |v: &[NcPoly], j: usize, k: usize| {
        let mut w = NcPoly::zero();
        for l in 0..3 {
            w += &v[l].scale_scalar(&scalar(-levi_civita(j, k, l)));
        }
        w
    };
    for j in 0..3 {
        for k in 0..3 {
            let (a, b) = (j + 1, k + 1);
            let delta = if j == k { NcPoly::one() } else { NcPoly::zero() };
            let rows: [(&str, String, NcPoly, NcPoly, &str); 6] = [
                (
                    "position",
                    format!("{{X{a},X{b}}}"),
                    pb(&d.x[j], &d.x[k])?,
                    NcPoly::zero(),
                    anchors::POSITION_OBSERVABLES,
                ),
                ("position", format!("{{P{a},X{b}}}"), pb(&pv[j], &d.x[k])?, delta, anchors::POSITION_OBSERVABLES),
                (
                    "position",
                    format!("{{J{a},X{b}}}"),
                    pb(&jv[j], &d.x[k])?,
                    eps_sum(&d.x, j, k),
                    anchors::POSITION_OBSERVABLES,
                ),
                (
                    "spin",
                    format!("{{S{a},S{b}}}"),
                    pb(&d.s[j], &d.s[k])?,
                    eps_sum(&d.s, j, k),
                    anchors::SPIN_OBSERVABLES,
                ),
                ("spin", format!("{{S{a},X{b}}}"), pb(&d.s[j], &d.x[k])?, NcPoly::zero(), anchors::SPIN_OBSERVABLES),
                ("spin", format!("{{S{a},P{b}}}"), pb(&d.s[j], &pv[k])?, NcPoly::zero(), anchors::SPIN_OBSERVABLES),
            ];
            for (group, id, got, want, anchor) in rows {
                let want = set_mass(p, &want)?;
                r.record_exact(group, id, anchor, residual(p, &got, &want));
            }
        }
    }
    let c2 = set_mass(p, &galilei_invariants(p)?.c2)?;
    let mut s_sq = NcPoly::zero();
    for sj in &d.s {
        s_sq += &p.mul(sj, sj)?;
    }
    let m2 = s_sq.scale(&Coefficient::param_pow(MASS, 2));
    r.record_exact("casimir-spin", "C2 - m^2 S^2", anchors::C2_SPIN, residual(p, &set_mass(p, &m2)?, &c2));
    for g in &GALILEI_GENERATORS[..10] {
        let got = pb(&d.u, &p.gen(g))?;
        r.record_exact(
            "internal-energy",
            format!("{{U,{g}}}"),
            anchors::INTERNAL_ENERGY,
            residual(p, &got, &NcPoly::zero()),
        );
    }
    Ok(r)
}

/// Free-particle Hamiltonian `P^2 / 2m` over the CCR presentation.
pub fn free_hamiltonian(p: &Presentation) -> Result<NcPoly> {
    let mut h = NcPoly::zero();
    for i in 1..=3 {
        let pi = p.gen(&format!("P{i}"));
        h += &p.mul(&pi, &pi)?;
    }
    Ok(h.scale(&Coefficient::param_pow(MASS, -1).scale(&GaussianRational::from_ratio(1, 2))))
}

/// Consistency of an arbitrary presentation: super-Jacobi on generator
/// triples `a <= b <= c`, the involution on generator pairs, and agreement of
/// the two rewrite strategies on every three-letter word.
pub fn consistency_check(p: &Presentation) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("consistency");
    let n = p.num_generators() as u16;
    let g = |k: u16| NcPoly::generator(k);
    let odd = |k: u16| p.parity(k).is_odd();
    let sign = |a: u16, b: u16| scalar(if odd(a) && odd(b) { -1 } else { 1 });
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let br = |x: &NcPoly, y: &NcPoly| p.supercommutator(x, y);
                let total = &(&br(&br(&g(a), &g(b))?, &g(c))?.scale_scalar(&sign(a, c))
                    + &br(&br(&g(b), &g(c))?, &g(a))?.scale_scalar(&sign(b, a)))
                    + &br(&br(&g(c), &g(a))?, &g(b))?.scale_scalar(&sign(c, b));
                let id = format!("[{},[{},{}]]", p.gen_name(a), p.gen_name(b), p.gen_name(c));
                r.record_exact(
                    "super-jacobi",
                    id,
                    anchors::SUPER_JACOBI,
                    (!total.is_zero()).then(|| p.display(&total)),
                );
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let lhs = p.star(&p.mul(&g(a), &g(b))?)?;
            let rhs = p.mul(&p.star(&g(b))?, &p.star(&g(a))?)?;
            let id = format!("({} {})*", p.gen_name(a), p.gen_name(b));
            r.record_exact("involution", id, anchors::INVOLUTION, residual(p, &lhs, &rhs));
        }
    }
    let mut first = None;
    let mut words = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let w = NcPoly::term(Word(vec![a, b, c]), Coefficient::one());
                let left = p.normal_form_with(&w, Strategy::Leftmost)?;
                let right = p.normal_form_with(&w, Strategy::Rightmost)?;
                words += 1;
                if left != right && first.is_none() {
                    first = Some(format!("{}: {}", p.word_string(&Word(vec![a, b, c])), p.display(&(&left - &right))));
                }
            }
        }
    }
    r.record_exact("confluence", format!("{words} three-letter words"), anchors::CONFLUENCE, first);
    Ok(r)
}

/// `i hbar` as a polynomial constant.
pub fn i_hbar() -> NcPoly {
    NcPoly::constant(&Coefficient::i() * &Coefficient::param(HBAR))
}
