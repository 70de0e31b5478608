//! Numerical verification of the closed-form relations between the measures.
//!
//! Each [`RelationId`] has one checker. A checker evaluates both sides of
//! every sub-relation it covers and returns one [`RelationCheckResult`] per
//! sub-relation. [`suite`] runs checkers over generated inputs and
//! aggregates the results.

pub mod random;
pub mod suite;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    family_closed_forms, ghz_noise, ghz_noise_negativity, ghz_noise_nme_exact, slocc_family, w,
    w_class, w_class_linear_entropy, w_kme_closed_form, w_two_tangle, FamilyParams, MinNegativityRelation,
};
use crate::invariants::{invariants3, invariants4, kme_from_invariants3, kme_from_invariants4, tangles_from_invariants3};
use crate::measures::{
    bipartite_concurrence_pure, cut_negativity, kme_concurrence_pure, negativity, negativity_profile, nme_lower_bound,
    three_tangle_raw, two_tangle,
};
use crate::qstate::{linear_entropy, partial_trace, schmidt_spectrum, PureState, SubsystemSet, C64};

pub use random::{random_mixed, random_pure, Ensemble};
pub use suite::{csv_table, results_csv, run_suite, SuiteConfig, SuiteReport, CSV_HEADER};

/// Sub-checks compared against Wootters concurrences get this multiple of the
/// requested tolerance; the spin-flip route loses about one digit.
pub const WOOTTERS_TOL_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationId {
    /// Pure states: `C_{n-ME} = √(Σ_p (Nᵖ)² / n)`.
    R1,
    /// Mixed states: `Σ pᵢ C_{n-ME}(ψᵢ) ≥ √(Σ_p (Nᵖ(ρ))² / n)`.
    R2,
    /// GHZ plus white noise: exact `C_{n-ME}` equals the negativity bound.
    R3,
    /// Three qubits: `C_{2-ME} = min Nᵖ`, `C_{3-ME} = √(Σ (Nᵖ)²/3)`.
    R4,
    /// Three-qubit invariants: tangles and `C_{2,3-ME}`.
    R5,
    /// Four-qubit invariants: `C_{2,3,4-ME}`.
    R6,
    /// SLOCC family closed forms and the conditional `C_{2-ME} = min Nᵖ`.
    R7,
    /// W states: `C_{k-ME}` closed form, pair tangles, block purities.
    R8,
    /// Schmidt rank 2: negativity equals concurrence across the cut.
    R9,
}

impl RelationId {
    pub const ALL: [RelationId; 9] = [
        RelationId::R1,
        RelationId::R2,
        RelationId::R3,
        RelationId::R4,
        RelationId::R5,
        RelationId::R6,
        RelationId::R7,
        RelationId::R8,
        RelationId::R9,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|r| r.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown relation id {s:?}")))
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.index() + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    InequalitySatisfied,
    /// A conditional relation whose condition is false at this input.
    Skip,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::InequalitySatisfied => "inequality-satisfied",
            Verdict::Skip => "skip",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheckResult {
    pub relation: RelationId,
    pub state_descriptor: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs|` for equalities; the violation `max(0, rhs − lhs)` for `lhs ≥ rhs`.
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub condition_note: Option<String>,
}

impl RelationCheckResult {
    pub fn equality(relation: RelationId, descriptor: String, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = (lhs - rhs).abs();
        // NaN residuals fail.
        let verdict = if residual <= tolerance { Verdict::Pass } else { Verdict::Fail };
        Self { relation, state_descriptor: descriptor, lhs, rhs, residual, tolerance, verdict, condition_note: None }
    }

    /// `lhs ≥ rhs` up to `tolerance`.
    pub fn at_least(relation: RelationId, descriptor: String, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = (rhs - lhs).max(0.0);
        let verdict = if rhs - lhs <= tolerance { Verdict::InequalitySatisfied } else { Verdict::Fail };
        Self { relation, state_descriptor: descriptor, lhs, rhs, residual, tolerance, verdict, condition_note: None }
    }

    /// A row recording that a check could not be evaluated.
    pub fn errored(relation: RelationId, descriptor: String, tolerance: f64, err: &Error) -> Self {
        Self {
            relation,
            state_descriptor: descriptor,
            lhs: f64::NAN,
            rhs: f64::NAN,
            residual: f64::NAN,
            tolerance,
            verdict: Verdict::Fail,
            condition_note: Some(format!("error: {err}")),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.condition_note = Some(note.into());
        self
    }
}

/// Inputs accepted by [`check`].
#[derive(Clone, Debug, PartialEq)]
pub enum CheckInput {
    Pure(PureState),
    /// A mixed state with the decomposition that produced it.
    Ensemble(Ensemble),
    Family(FamilyParams),
    GhzNoise { n: usize, t: f64 },
    W { n: usize },
    WClass(Vec<C64>),
    /// A pure state and one side of the cut.
    Bipartite { state: PureState, side_a: SubsystemSet },
}

impl CheckInput {
    fn kind(&self) -> &'static str {
        match self {
            CheckInput::Pure(_) => "pure state",
            CheckInput::Ensemble(_) => "ensemble",
            CheckInput::Family(_) => "family parameters",
            CheckInput::GhzNoise { .. } => "(n, t)",
            CheckInput::W { .. } => "W size",
            CheckInput::WClass(_) => "W-class coefficients",
            CheckInput::Bipartite { .. } => "bipartite pure state",
        }
    }

    /// Fallback descriptor when the caller supplies none.
    pub fn default_label(&self) -> String {
        match self {
            CheckInput::Pure(p) => format!("pure(n={})", p.num_sites()),
            CheckInput::Ensemble(e) => format!("ensemble(n={},rank={})", e.num_sites(), e.states.len()),
            CheckInput::Family(f) => f.descriptor(),
            CheckInput::GhzNoise { n, t } => format!("ghz_noise(n={n},t={t})"),
            CheckInput::W { n } => format!("W{n}"),
            CheckInput::WClass(c) => format!("w_class(n={})", c.len()),
            CheckInput::Bipartite { state, side_a } => format!("bipartite(n={},A={side_a})", state.num_sites()),
        }
    }
}

fn incompatible(relation: RelationId, reason: impl Into<String>) -> Error {
    Error::IncompatibleInput { relation: relation.to_string(), reason: reason.into() }
}

/// Checks `relation` on `input`, labeling results with the default descriptor.
pub fn check(relation: RelationId, input: &CheckInput, tol: f64) -> Result<Vec<RelationCheckResult>> {
    check_labeled(relation, &input.default_label(), input, tol)
}

/// Checks `relation` on `input`; each result's descriptor is `"{label}|{sub-relation}"`.
pub fn check_labeled(relation: RelationId, label: &str, input: &CheckInput, tol: f64) -> Result<Vec<RelationCheckResult>> {
    let ctx = Ctx { relation, label, tol };
    match (relation, input) {
        (RelationId::R1, CheckInput::Pure(psi)) => check_pure_identity(&ctx, psi),
        (RelationId::R2, CheckInput::Ensemble(e)) => check_mixed_bound(&ctx, e),
        (RelationId::R2, CheckInput::Pure(psi)) => check_mixed_bound(&ctx, &Ensemble::new(vec![1.0], vec![psi.clone()])?),
        (RelationId::R3, CheckInput::GhzNoise { n, t }) => check_ghz_noise(&ctx, *n, *t),
        (RelationId::R4, CheckInput::Pure(psi)) => check_three_qubit(&ctx, psi),
        (RelationId::R5, CheckInput::Pure(psi)) => check_invariants3(&ctx, psi),
        (RelationId::R6, CheckInput::Pure(psi)) => check_invariants4(&ctx, psi),
        (RelationId::R7, CheckInput::Family(p)) => check_family(&ctx, p),
        (RelationId::R8, CheckInput::W { n }) => check_w(&ctx, *n),
        (RelationId::R8, CheckInput::WClass(c)) => check_w_class(&ctx, c),
        (RelationId::R9, CheckInput::Bipartite { state, side_a }) => check_schmidt_rank2(&ctx, state, side_a),
        (RelationId::R9, CheckInput::Pure(psi)) => check_schmidt_rank2(&ctx, psi, &SubsystemSet::single(0)),
        (r, other) => Err(incompatible(r, format!("does not accept {}", other.kind()))),
    }
}

struct Ctx<'a> {
    relation: RelationId,
    label: &'a str,
    tol: f64,
}

impl Ctx<'_> {
    fn desc(&self, quantity: &str) -> String {
        format!("{}|{quantity}", self.label)
    }

    fn eq(&self, quantity: &str, lhs: f64, rhs: f64) -> RelationCheckResult {
        RelationCheckResult::equality(self.relation, self.desc(quantity), lhs, rhs, self.tol)
    }

    fn eq_wootters(&self, quantity: &str, lhs: f64, rhs: f64) -> RelationCheckResult {
        RelationCheckResult::equality(self.relation, self.desc(quantity), lhs, rhs, self.tol * WOOTTERS_TOL_FACTOR)
    }

    fn at_least(&self, quantity: &str, lhs: f64, rhs: f64) -> RelationCheckResult {
        RelationCheckResult::at_least(self.relation, self.desc(quantity), lhs, rhs, self.tol)
    }

    fn require_sites(&self, psi: &PureState, n: usize) -> Result<()> {
        if psi.num_sites() != n {
            return Err(incompatible(self.relation, format!("needs {n} qubits, got {}", psi.num_sites())));
        }
        Ok(())
    }
}

fn check_pure_identity(ctx: &Ctx, psi: &PureState) -> Result<Vec<RelationCheckResult>> {
    let n = psi.num_sites();
    if n < 2 {
        return Err(incompatible(ctx.relation, "needs at least 2 qubits"));
    }
    let c = kme_concurrence_pure(psi, n)?.value;
    let profile = negativity_profile(&psi.density())?;
    Ok(vec![ctx.eq("C_n=rms(N)", c, profile.quadratic_mean())])
}

fn check_mixed_bound(ctx: &Ctx, e: &Ensemble) -> Result<Vec<RelationCheckResult>> {
    let n = e.num_sites();
    if n < 2 {
        return Err(incompatible(ctx.relation, "needs at least 2 qubits"));
    }
    let mut average = 0.0;
    let mut mean_negs = vec![0.0; n];
    for (p, psi) in e.weights.iter().zip(&e.states) {
        average += p * kme_concurrence_pure(psi, n)?.value;
        for (acc, x) in mean_negs.iter_mut().zip(negativity_profile(&psi.density())?.per_site) {
            *acc += p * x;
        }
    }
    let middle = (mean_negs.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt();
    let bound = nme_lower_bound(&e.density)?;
    Ok(vec![
        ctx.at_least("avg C_n>=rms(avg N)", average, middle),
        ctx.at_least("rms(avg N)>=rms(N(rho))", middle, bound),
        ctx.at_least("avg C_n>=rms(N(rho))", average, bound),
    ])
}

fn check_ghz_noise(ctx: &Ctx, n: usize, t: f64) -> Result<Vec<RelationCheckResult>> {
    let exact = ghz_noise_nme_exact(n, t).map_err(|e| incompatible(ctx.relation, e.to_string()))?;
    let rho = ghz_noise(n, t)?;
    let mut out = vec![ctx.eq("C_n=bound", exact, nme_lower_bound(&rho)?)];
    let closed = ghz_noise_negativity(n, t)?;
    for p in 0..n {
        out.push(ctx.eq(&format!("N{p}"), closed, negativity(&rho, p, 2)?));
    }
    Ok(out)
}

fn check_three_qubit(ctx: &Ctx, psi: &PureState) -> Result<Vec<RelationCheckResult>> {
    ctx.require_sites(psi, 3)?;
    let profile = negativity_profile(&psi.density())?;
    Ok(vec![
        ctx.eq("C2=min N", kme_concurrence_pure(psi, 2)?.value, profile.min()),
        ctx.eq("C3=rms(N)", kme_concurrence_pure(psi, 3)?.value, profile.quadratic_mean()),
    ])
}

fn pair_tangle(psi: &PureState, i: usize, j: usize) -> Result<f64> {
    two_tangle(&partial_trace(&psi.density(), &SubsystemSet::new(vec![i, j])?)?)
}

fn check_invariants3(ctx: &Ctx, psi: &PureState) -> Result<Vec<RelationCheckResult>> {
    ctx.require_sites(psi, 3)?;
    let inv = invariants3(psi)?;
    let (c2, c3) = kme_from_invariants3(&inv);
    let direct3 = kme_concurrence_pure(psi, 3)?.value;
    let tau_abc = three_tangle_raw(psi)?;
    let (ab, ac, bc) = tangles_from_invariants3(&inv, tau_abc);
    let pairs = [pair_tangle(psi, 0, 1)?, pair_tangle(psi, 0, 2)?, pair_tangle(psi, 1, 2)?];
    let from_tangles = (2.0 / 3.0 * pairs.iter().sum::<f64>() + tau_abc).sqrt();
    Ok(vec![
        ctx.eq("C2 invariant", c2, kme_concurrence_pure(psi, 2)?.value),
        ctx.eq("C3 invariant", c3, direct3),
        ctx.eq_wootters("tau_AB", ab, pairs[0]),
        ctx.eq_wootters("tau_AC", ac, pairs[1]),
        ctx.eq_wootters("tau_BC", bc, pairs[2]),
        ctx.eq_wootters("C3 from tangles", direct3, from_tangles),
    ])
}

fn check_invariants4(ctx: &Ctx, psi: &PureState) -> Result<Vec<RelationCheckResult>> {
    ctx.require_sites(psi, 4)?;
    let (c2, c3, c4) = kme_from_invariants4(&invariants4(psi)?);
    let direct = |k| kme_concurrence_pure(psi, k).map(|r| r.value);
    Ok(vec![ctx.eq("C2 invariant", c2, direct(2)?), ctx.eq("C3 invariant", c3, direct(3)?), ctx.eq("C4 invariant", c4, direct(4)?)])
}

fn check_family(ctx: &Ctx, params: &FamilyParams) -> Result<Vec<RelationCheckResult>> {
    let psi = slocc_family(params)?;
    let pred = family_closed_forms(params)?;
    let direct = |k| kme_concurrence_pure(&psi, k).map(|r| r.value);
    let (c2, c3, c4) = (direct(2)?, direct(3)?, direct(4)?);
    let negs = negativity_profile(&psi.density())?;

    let mut out = vec![ctx.eq("C2", pred.c2, c2), ctx.eq("C3", pred.c3, c3), ctx.eq("C4", pred.c4, c4)];
    for (p, (closed, numeric)) in pred.negativities.iter().zip(&negs.per_site).enumerate() {
        out.push(ctx.eq(&format!("N{p}"), *closed, *numeric));
    }
    for (name, value) in &pred.extra {
        match *name {
            "C2 branch" => out.push(ctx.eq("C2 branch", *value, c2)),
            "C3 branch" => out.push(ctx.eq("C3 branch", *value, c3)),
            _ => {}
        }
    }

    let min_n = negs.min();
    let row = ctx.eq("C2=min N", c2, min_n);
    let row = match pred.c2_equals_min_n {
        MinNegativityRelation::Holds => row.with_note("unconditional"),
        MinNegativityRelation::Fails => {
            let mut r = row.with_note("relation not asserted");
            r.verdict = Verdict::Skip;
            r
        }
        MinNegativityRelation::Conditional { condition_value, satisfied: true } => {
            row.with_note(format!("condition holds ({condition_value:e})"))
        }
        MinNegativityRelation::Conditional { condition_value, satisfied: false } => {
            let anyway = if row.verdict == Verdict::Pass { "equality holds anyway" } else { "equality fails" };
            let mut r = row.with_note(format!("condition false ({condition_value:e}); {anyway}"));
            r.verdict = Verdict::Skip;
            r
        }
    };
    out.push(row);
    Ok(out)
}

fn check_w(ctx: &Ctx, n: usize) -> Result<Vec<RelationCheckResult>> {
    let psi = w(n)?;
    (2..=n)
        .map(|k| Ok(ctx.eq(&format!("C{k}"), w_kme_closed_form(n, k)?, kme_concurrence_pure(&psi, k)?.value)))
        .collect()
}

fn check_w_class(ctx: &Ctx, coeffs: &[C64]) -> Result<Vec<RelationCheckResult>> {
    let n = coeffs.len();
    let psi = w_class(coeffs)?;
    let rho = psi.density();
    let mut out = Vec::new();
    for i in 0..n {
        let block = SubsystemSet::single(i);
        let direct = linear_entropy(partial_trace(&rho, &block)?.entries());
        out.push(ctx.eq(&format!("S_L{{{i}}}"), w_class_linear_entropy(coeffs, &block)?, direct));
    }
    for i in 0..n {
        for j in i + 1..n {
            let block = SubsystemSet::new(vec![i, j])?;
            let pair = partial_trace(&rho, &block)?;
            out.push(ctx.eq(&format!("S_L{block}"), w_class_linear_entropy(coeffs, &block)?, linear_entropy(pair.entries())));
            // Two-tangle labels are 1-based.
            out.push(ctx.eq_wootters(&format!("tau{block}"), w_two_tangle(coeffs, i + 1, j + 1)?, two_tangle(&pair)?));
        }
    }
    Ok(out)
}

fn check_schmidt_rank2(ctx: &Ctx, psi: &PureState, side_a: &SubsystemSet) -> Result<Vec<RelationCheckResult>> {
    let rank = schmidt_spectrum(psi, side_a)?.rank();
    if rank > 2 {
        return Err(incompatible(ctx.relation, format!("Schmidt rank {rank} across {side_a} exceeds 2")));
    }
    let n = cut_negativity(&psi.density(), side_a)?;
    let c = bipartite_concurrence_pure(psi, side_a)?;
    Ok(vec![ctx.eq("N=C", n, c)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ghz, SloccFamily};

    fn all_pass(results: &[RelationCheckResult]) -> bool {
        results.iter().all(|r| !r.verdict.is_failure())
    }

    #[test]
    fn ghz_noise_example() {
        let r = check(RelationId::R3, &CheckInput::GhzNoise { n: 3, t: 0.6 }, 1e-9).unwrap();
        assert_eq!(r.len(), 4);
        assert!((r[0].lhs - 0.5).abs() < 1e-15);
        assert!(all_pass(&r));
        assert!(matches!(
            check(RelationId::R3, &CheckInput::GhzNoise { n: 3, t: 0.05 }, 1e-9),
            Err(Error::IncompatibleInput { .. })
        ));
    }

    #[test]
    fn pure_identity_on_random_state() {
        let r = check(RelationId::R1, &CheckInput::Pure(random_pure(4, 7).unwrap()), 1e-9).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].verdict, Verdict::Pass);
    }

    #[test]
    fn family_nine() {
        let r = check(RelationId::R7, &CheckInput::Family(FamilyParams::bare(SloccFamily::L0O31O31)), 1e-9).unwrap();
        let last = r.last().unwrap();
        assert!(last.state_descriptor.ends_with("C2=min N"));
        assert_eq!(last.verdict, Verdict::Pass);
        assert!(last.lhs.abs() < 1e-9 && last.rhs.abs() < 1e-9);
        assert!(all_pass(&r));
    }

    #[test]
    fn mixed_chain_is_ordered() {
        let e = random_mixed(3, 3, 2).unwrap();
        let r = check(RelationId::R2, &CheckInput::Ensemble(e), 1e-9).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| x.verdict == Verdict::InequalitySatisfied));
    }

    #[test]
    fn incompatible_inputs() {
        let psi = ghz(4).unwrap();
        assert!(matches!(check(RelationId::R4, &CheckInput::Pure(psi.clone()), 1e-9), Err(Error::IncompatibleInput { .. })));
        assert!(matches!(check(RelationId::R3, &CheckInput::Pure(psi), 1e-9), Err(Error::IncompatibleInput { .. })));
        let w3 = w(3).unwrap();
        assert!(check(RelationId::R9, &CheckInput::Pure(w3), 1e-9).is_ok());
        let rank4 = random_pure(4, 3).unwrap();
        let side = SubsystemSet::new(vec![0, 1]).unwrap();
        assert!(check(RelationId::R9, &CheckInput::Bipartite { state: rank4, side_a: side }, 1e-9).is_err());
    }

    #[test]
    fn tight_tolerance_reports_failures() {
        let r = check(RelationId::R1, &CheckInput::Pure(random_pure(5, 1).unwrap()), 0.0).unwrap();
        assert_eq!(r.len(), 1);
        // Either exact agreement or a reported failure; never an error.
        assert!(r[0].residual == 0.0 || r[0].verdict == Verdict::Fail);
    }

    #[test]
    fn w_counts() {
        let r = check(RelationId::R8, &CheckInput::W { n: 5 }, 1e-9).unwrap();
        assert_eq!(r.len(), 4);
        assert!(all_pass(&r));
        let r = check(RelationId::R8, &CheckInput::WClass(random::random_w_coefficients(4, 9)), 1e-9).unwrap();
        assert_eq!(r.len(), 4 + 6 + 6);
        assert!(all_pass(&r));
    }

    #[test]
    fn relation_ids_parse() {
        for r in RelationId::ALL {
            assert_eq!(RelationId::parse(&r.to_string()).unwrap(), r);
        }
        assert!(RelationId::parse("R10").is_err());
    }
}
