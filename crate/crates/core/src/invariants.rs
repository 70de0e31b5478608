//! Degree-2 and degree-4 local-unitary invariants of three- and four-qubit
//! pure states, and the k-ME concurrences and tangles they determine.
//!
//! Every formula is written in its homogeneous degree-4 form, with `I₂²` in
//! place of the constant `1`. For normalized input the two coincide; for
//! unnormalized input the homogeneous form stays consistent with purities of
//! the unnormalized reduced matrices.

use crate::error::{Error, Result};
use crate::qstate::{clamped_sqrt, matrix_purity, PureState, SubsystemSet};

/// `I₂ = ⟨ψ|ψ⟩` and `I₄ = (⟨ψ|ψ⟩², Tr ρ_A², Tr ρ_B², Tr ρ_C²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants3 {
    pub i2: f64,
    pub i4: [f64; 4],
}

/// `I₂` and the seven degree-4 invariants ordered
/// `(Tr ρ_D², Tr ρ_C², Tr ρ_B², Tr ρ_A², Tr ρ_AD², Tr ρ_BD², Tr ρ_CD²)`.
///
/// `derived_pairs` holds `(Tr ρ_AB², Tr ρ_AC², Tr ρ_BC²)`. For pure states
/// these equal `I₄^{(7)}, I₄^{(6)}, I₄^{(5)}` via complements and carry no
/// independent information.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants4 {
    pub i2: f64,
    pub i4: [f64; 7],
    pub derived_pairs: [f64; 3],
}

fn reduced_purity(psi: &PureState, sites: &[usize]) -> Result<f64> {
    Ok(matrix_purity(&psi.reduced(&SubsystemSet::new(sites.to_vec())?)?))
}

pub fn invariants3(psi: &PureState) -> Result<Invariants3> {
    if psi.num_sites() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: psi.num_sites() });
    }
    let i2 = psi.norm_sqr();
    Ok(Invariants3 {
        i2,
        i4: [i2 * i2, reduced_purity(psi, &[0])?, reduced_purity(psi, &[1])?, reduced_purity(psi, &[2])?],
    })
}

/// `(τ_AB, τ_AC, τ_BC)` from the invariants and the three-tangle.
pub fn tangles_from_invariants3(inv: &Invariants3, tau_abc: f64) -> (f64, f64, f64) {
    let [one, a, b, c] = inv.i4;
    let half = 0.5 * tau_abc;
    (one - a - b + c - half, one - a + b - c - half, one + a - b - c - half)
}

/// `(C_{2-ME}, C_{3-ME})` of a three-qubit pure state.
pub fn kme_from_invariants3(inv: &Invariants3) -> (f64, f64) {
    let norm4 = inv.i2 * inv.i2;
    let [_, a, b, c] = inv.i4;
    let max = a.max(b).max(c);
    let c2 = clamped_sqrt(2.0 * (norm4 - max));
    let c3 = clamped_sqrt(2.0 / 3.0 * (3.0 * norm4 - a - b - c));
    (c2, c3)
}

pub fn invariants4(psi: &PureState) -> Result<Invariants4> {
    if psi.num_sites() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: psi.num_sites() });
    }
    let p = |s: &[usize]| reduced_purity(psi, s);
    Ok(Invariants4 {
        i2: psi.norm_sqr(),
        i4: [p(&[3])?, p(&[2])?, p(&[1])?, p(&[0])?, p(&[0, 3])?, p(&[1, 3])?, p(&[2, 3])?],
        derived_pairs: [p(&[0, 1])?, p(&[0, 2])?, p(&[1, 2])?],
    })
}

/// Index triples (1-based, as listed for `I₄^{(m)}`) of the six 3-partitions
/// of four qubits: two singletons and the pair invariant fixing the rest.
pub const C3_INVARIANT_TRIPLES: [[usize; 3]; 6] = [[4, 3, 7], [4, 2, 6], [4, 1, 5], [3, 2, 5], [3, 1, 6], [2, 1, 7]];

/// `(C_{2-ME}, C_{3-ME}, C_{4-ME})` of a four-qubit pure state.
pub fn kme_from_invariants4(inv: &Invariants4) -> (f64, f64, f64) {
    let norm4 = inv.i2 * inv.i2;
    let i = |m: usize| inv.i4[m - 1];
    let max = inv.i4.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c2 = clamped_sqrt(2.0 * (norm4 - max));
    let c3 = C3_INVARIANT_TRIPLES
        .iter()
        .map(|&[x, y, z]| clamped_sqrt(2.0 / 3.0 * (3.0 * norm4 - i(x) - i(y) - i(z))))
        .fold(f64::INFINITY, f64::min);
    let c4 = clamped_sqrt((4.0 * norm4 - i(1) - i(2) - i(3) - i(4)) / 2.0);
    (c2, c3, c4)
}
