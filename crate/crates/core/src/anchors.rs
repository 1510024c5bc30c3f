//! Anchor registry. Each report entry names the identity it checks with one
//! of these strings; tests and the CLI share them so the two cannot drift.

pub const CCR: &str = "canonical commutation relations [X_j, P_k] = i hbar delta_jk I";
pub const SPIN_ALGEBRA: &str = "spin algebra [S_j, S_k] = i hbar eps_jkl S_l";
pub const QUANTUM_PB: &str = "quantum Poisson bracket {A, B} = (-i hbar)^-1 [A, B]";
pub const SUPER_JACOBI: &str = "super-Jacobi identity of the supercommutator";
pub const INVOLUTION: &str = "involution (AB)* = B* A*";
pub const CONFLUENCE: &str = "normal form independent of rewrite order";
pub const GALILEI_TABLE: &str = "extended Galilei bracket table";
pub const GALILEI_CASIMIRS: &str = "Galilei invariants M, C1 = 2MH - P^2, C2 = (MJ - K x P)^2";
pub const GALILEI_B_VECTOR: &str = "B_j = M J_j - eps_jkl K_k P_l bracket identities";
pub const POSITION_OBSERVABLES: &str = "position X = K/m brackets";
pub const SPIN_OBSERVABLES: &str = "spin S = J - X x P brackets";
pub const C2_SPIN: &str = "C2 = m^2 S^2";
pub const INTERNAL_ENERGY: &str = "internal energy U = H - P^2/2m is invariant";
pub const NOETHER: &str = "Noether invariants J, P, mX - Pt, -H, M = mI of the free particle";
pub const HEISENBERG: &str = "Heisenberg equation dA/dt = {H, A}";
pub const GRASSMANN_STATE: &str = "unique state on a finite Grassmann algebra";
pub const CC_CONDITION: &str = "compatible completeness of observables and pure states";
pub const STATE: &str = "state: positive normalized linear functional";
pub const GNS_RECONSTRUCTION: &str = "GNS reconstruction phi(A) = (chi, pi(A) chi)";
pub const GNS_HOMOMORPHISM: &str = "GNS representation is a *-homomorphism";
pub const PURITY: &str = "irreducible iff the state is pure";
pub const VECTOR_STATE: &str = "vector state phi_B(A) = phi(B* A B) / phi(B* B)";
pub const UNITARY_EQUIVALENCE: &str = "unitary equivalence of GNS representations of vector states";
pub const FAITHFUL_SUM: &str = "direct sum over pure states is faithful";
pub const SUPERSELECTION: &str = "superselection sectors from minimal central projections";
pub const TRANSITION_PROBABILITY: &str = "transition probability Tr(rho1 rho2) from a POVM";
pub const SCHRODINGER: &str = "Schrodinger equation i hbar dpsi/dt = (-hbar^2/2m d^2 + V) psi";
pub const LOCALIZATION: &str = "localization measure P(D) on position cells";
pub const COVARIANCE: &str = "translation covariance of the localization measure";
pub const WEYL_RELATIONS: &str = "Weyl relations U(a) V(b) = e^{iab} V(b) U(a)";
pub const GENERATOR: &str = "infinitesimal generator U(eps) ~ I - i (eps/hbar) P";
pub const WIGNER: &str = "Wigner function of a pure state";
pub const WEYL_SYMBOL: &str = "Weyl symbols of I, X, P";
pub const BORN_PAIRING: &str = "Born pairing (psi, A psi) = int A_W W dx dp";
pub const STAR_CALIBRATION: &str = "star-product calibration x*p - p*x = i hbar";
pub const MOYAL_BRACKET: &str = "Moyal bracket (-i hbar)^-1 (f*g - g*f)";
pub const SEMICLASSICAL: &str = "f*g = fg - (i hbar/2){f, g} + O(hbar^2)";
pub const CLASSICAL_LIMIT: &str = "Moyal evolution approaches Liouville transport";

pub const ALL: &[&str] = &[
    CCR,
    SPIN_ALGEBRA,
    QUANTUM_PB,
    SUPER_JACOBI,
    INVOLUTION,
    CONFLUENCE,
    GALILEI_TABLE,
    GALILEI_CASIMIRS,
    GALILEI_B_VECTOR,
    POSITION_OBSERVABLES,
    SPIN_OBSERVABLES,
    C2_SPIN,
    INTERNAL_ENERGY,
    NOETHER,
    HEISENBERG,
    GRASSMANN_STATE,
    CC_CONDITION,
    STATE,
    GNS_RECONSTRUCTION,
    GNS_HOMOMORPHISM,
    PURITY,
    VECTOR_STATE,
    UNITARY_EQUIVALENCE,
    FAITHFUL_SUM,
    SUPERSELECTION,
    TRANSITION_PROBABILITY,
    SCHRODINGER,
    LOCALIZATION,
    COVARIANCE,
    WEYL_RELATIONS,
    GENERATOR,
    WIGNER,
    WEYL_SYMBOL,
    BORN_PAIRING,
    STAR_CALIBRATION,
    MOYAL_BRACKET,
    SEMICLASSICAL,
    CLASSICAL_LIMIT,
];

pub fn is_registered(anchor: &str) -> bool {
    ALL.contains(&anchor)
}
