//! Suite configuration, execution and reports.
//!
//! A suite expands its configuration into a deterministic job list, runs the
//! jobs in parallel, and sorts the results by relation and descriptor. The
//! report is a pure function of the configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::random::{derive_seed, random_mixed, random_pure, random_schmidt_rank2, random_w_coefficients, rng_from_seed, Ensemble};
use super::{check_labeled, CheckInput, RelationCheckResult, RelationId, Verdict};
use crate::error::{Error, Result};
use crate::families::{ghz, ghz_noise_threshold, slocc_family, w, FamilyParams, SloccFamily};
use crate::qstate::{PureState, SubsystemSet, C64};

/// One axis of a parameter lattice: `steps` evenly spaced values on `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64).collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.steps == 0 || !self.lo.is_finite() || !self.hi.is_finite() || self.lo > self.hi {
            return Err(Error::Config(format!("{name}: need finite lo <= hi and steps >= 1")));
        }
        Ok(())
    }
}

/// Lattice for a single complex parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexGrid {
    pub re: Axis,
    pub im: Axis,
}

impl ComplexGrid {
    pub fn points(&self) -> Vec<C64> {
        let im = self.im.values();
        self.re.values().into_iter().flat_map(|r| im.iter().map(move |&i| C64::new(r, i))).collect()
    }
}

impl Default for ComplexGrid {
    fn default() -> Self {
        // Eight steps on a symmetric range keep 0 off the lattice.
        let axis = Axis { lo: -1.4, hi: 1.4, steps: 8 };
        Self { re: axis, im: axis }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub relations: Vec<RelationId>,
    pub seed: u64,
    /// Per-relation tolerance overrides.
    pub tolerances: BTreeMap<RelationId, f64>,
    /// Per-relation random sample count overrides.
    pub samples: BTreeMap<RelationId, usize>,
    /// Include the fixed named-state examples.
    pub anchors: bool,
    /// Qubit counts for R1 and R2.
    pub pure_sizes: Vec<usize>,
    /// Ensemble sizes for R2, cycled over samples.
    pub mixed_ranks: Vec<usize>,
    pub ghz_sizes: Vec<usize>,
    pub ghz_points: usize,
    pub families: Vec<u8>,
    pub family_grid: ComplexGrid,
    pub w_sizes: Vec<usize>,
    pub schmidt_sizes: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            relations: RelationId::ALL.to_vec(),
            seed: 7,
            tolerances: BTreeMap::new(),
            samples: BTreeMap::new(),
            anchors: true,
            pure_sizes: vec![2, 3, 4, 5, 6],
            mixed_ranks: vec![2, 3, 4],
            ghz_sizes: vec![2, 3, 4, 5, 6],
            ghz_points: 21,
            families: (1..=9).collect(),
            family_grid: ComplexGrid::default(),
            w_sizes: vec![3, 4, 5, 6, 7],
            schmidt_sizes: vec![2, 3, 4, 5, 6],
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config always serializes")
    }

    pub fn tolerance(&self, r: RelationId) -> f64 {
        self.tolerances.get(&r).copied().unwrap_or(match r {
            RelationId::R7 => 1e-8,
            _ => 1e-9,
        })
    }

    /// Random samples for `r`: per size for R1, R2 and R8, per point count for
    /// multi-parameter families in R7, total otherwise. R3 is grid-only.
    pub fn sample_count(&self, r: RelationId) -> usize {
        self.samples.get(&r).copied().unwrap_or(match r {
            RelationId::R2 => 50,
            RelationId::R3 => 0,
            RelationId::R7 => 32,
            RelationId::R8 => 20,
            RelationId::R9 => 100,
            _ => 200,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |name: &str, v: &[usize], lo: usize, hi: usize| -> Result<()> {
            match v.iter().find(|&&x| x < lo || x > hi) {
                Some(x) => Err(Error::Config(format!("{name}: {x} outside {lo}..={hi}"))),
                None => Ok(()),
            }
        };
        in_range("pure_sizes", &self.pure_sizes, 2, 8)?;
        in_range("ghz_sizes", &self.ghz_sizes, 2, 8)?;
        in_range("w_sizes", &self.w_sizes, 3, 8)?;
        in_range("schmidt_sizes", &self.schmidt_sizes, 2, 8)?;
        in_range("mixed_ranks", &self.mixed_ranks, 1, 4)?;
        if let Some(f) = self.families.iter().find(|&&f| !(1..=9).contains(&f)) {
            return Err(Error::Config(format!("families: {f} outside 1..=9")));
        }
        if let Some((r, t)) = self.tolerances.iter().find(|(_, t)| !t.is_finite() || **t < 0.0) {
            return Err(Error::Config(format!("tolerance for {r} must be finite and >= 0, got {t}")));
        }
        if self.ghz_points == 1 {
            return Err(Error::Config("ghz_points must be 0 or >= 2".into()));
        }
        self.family_grid.re.validate("family_grid.re")?;
        self.family_grid.im.validate("family_grid.im")?;
        if self.relations.contains(&RelationId::R2) && self.mixed_ranks.is_empty() {
            return Err(Error::Config("mixed_ranks must not be empty when R2 is selected".into()));
        }
        Ok(())
    }

    fn wants(&self, r: RelationId) -> bool {
        self.relations.contains(&r)
    }
}

struct Job {
    relation: RelationId,
    label: String,
    input: CheckInput,
}

fn push(jobs: &mut Vec<Job>, relation: RelationId, label: impl Into<String>, input: CheckInput) {
    jobs.push(Job { relation, label: label.into(), input });
}

fn family_state(id: u8) -> Result<PureState> {
    slocc_family(&FamilyParams::bare(SloccFamily::from_id(id)?))
}

fn build_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    use RelationId::*;
    let mut jobs = Vec::new();
    let seed = |r: RelationId, i: usize| derive_seed(cfg.seed, r.index() as u64 + 1, i as u64);

    if cfg.wants(R1) {
        if cfg.anchors {
            for n in [2, 3, 4] {
                push(&mut jobs, R1, format!("anchor GHZ{n}"), CheckInput::Pure(ghz(n)?));
                push(&mut jobs, R1, format!("anchor W{n}"), CheckInput::Pure(w(n)?));
            }
        }
        for &n in &cfg.pure_sizes {
            for i in 0..cfg.sample_count(R1) {
                let s = seed(R1, n * 100_000 + i);
                push(&mut jobs, R1, format!("random n={n} #{i:04} seed={s}"), CheckInput::Pure(random_pure(n, s)?));
            }
        }
    }

    if cfg.wants(R2) {
        if cfg.anchors {
            let mix = Ensemble::new(vec![0.5, 0.5], vec![ghz(3)?, PureState::basis("000")?])?;
            push(&mut jobs, R2, "anchor GHZ3+000", CheckInput::Ensemble(mix));
            push(&mut jobs, R2, "anchor GHZ3", CheckInput::Pure(ghz(3)?));
        }
        for &n in &cfg.pure_sizes {
            for i in 0..cfg.sample_count(R2) {
                let rank = cfg.mixed_ranks[i % cfg.mixed_ranks.len()].min(1 << n);
                let s = seed(R2, n * 100_000 + i);
                let e = random_mixed(n, rank, s)?;
                push(&mut jobs, R2, format!("random n={n} rank={rank} #{i:04} seed={s}"), CheckInput::Ensemble(e));
            }
        }
    }

    if cfg.wants(R3) {
        if cfg.anchors {
            push(&mut jobs, R3, "anchor n=3 t=0.6", CheckInput::GhzNoise { n: 3, t: 0.6 });
        }
        for &n in &cfg.ghz_sizes {
            let lo = ghz_noise_threshold(n);
            for j in 0..cfg.ghz_points {
                let t = if j + 1 == cfg.ghz_points { 1.0 } else { lo + (1.0 - lo) * j as f64 / (cfg.ghz_points - 1) as f64 };
                push(&mut jobs, R3, format!("grid n={n} #{j:03} t={t}"), CheckInput::GhzNoise { n, t });
            }
        }
    }

    for r in [R4, R5] {
        if !cfg.wants(r) {
            continue;
        }
        if cfg.anchors {
            push(&mut jobs, r, "anchor GHZ3", CheckInput::Pure(ghz(3)?));
            push(&mut jobs, r, "anchor W3", CheckInput::Pure(w(3)?));
        }
        for i in 0..cfg.sample_count(r) {
            let s = seed(r, i);
            push(&mut jobs, r, format!("random #{i:04} seed={s}"), CheckInput::Pure(random_pure(3, s)?));
        }
    }

    if cfg.wants(R6) {
        if cfg.anchors {
            for id in [7, 8, 9] {
                push(&mut jobs, R6, format!("anchor family{id}"), CheckInput::Pure(family_state(id)?));
            }
            push(&mut jobs, R6, "anchor GHZ4", CheckInput::Pure(ghz(4)?));
        }
        for i in 0..cfg.sample_count(R6) {
            let s = seed(R6, i);
            push(&mut jobs, R6, format!("random #{i:04} seed={s}"), CheckInput::Pure(random_pure(4, s)?));
        }
    }

    if cfg.wants(R7) {
        let lattice = cfg.family_grid.points();
        for &id in &cfg.families {
            let family = SloccFamily::from_id(id)?;
            for p in family_points(cfg, family, &lattice, seed(R7, id as usize)) {
                push(&mut jobs, R7, p.descriptor(), CheckInput::Family(p));
            }
        }
    }

    if cfg.wants(R8) {
        for &n in &cfg.w_sizes {
            push(&mut jobs, R8, format!("W{n}"), CheckInput::W { n });
            for i in 0..cfg.sample_count(R8) {
                let s = seed(R8, n * 100_000 + i);
                push(&mut jobs, R8, format!("w_class n={n} #{i:04} seed={s}"), CheckInput::WClass(random_w_coefficients(n, s)));
            }
        }
    }

    if cfg.wants(R9) {
        if cfg.anchors {
            push(&mut jobs, R9, "anchor Bell", CheckInput::Pure(ghz(2)?));
            let side_a = SubsystemSet::new(vec![0, 1])?;
            push(&mut jobs, R9, "anchor GHZ4 {0,1}", CheckInput::Bipartite { state: ghz(4)?, side_a });
        }
        if !cfg.schmidt_sizes.is_empty() {
            for i in 0..cfg.sample_count(R9) {
                let n = cfg.schmidt_sizes[i % cfg.schmidt_sizes.len()];
                let s = seed(R9, i);
                let mask = rng_from_seed(s ^ 0x5A5A).random_range(1..(1u64 << n) - 1);
                // Site i is bit n−1−i of the mask so that bit order matches basis indices.
                let side_a = SubsystemSet::new((0..n).filter(|&k| mask >> (n - 1 - k) & 1 == 1).collect())?;
                let state = random_schmidt_rank2(n, &side_a, s)?;
                push(&mut jobs, R9, format!("random n={n} A={side_a} #{i:04} seed={s}"), CheckInput::Bipartite { state, side_a });
            }
        }
    }
    Ok(jobs)
}

/// Parameter points for one family: the full lattice for one-parameter
/// families, seeded lattice draws for the others, plus branch boundaries.
fn family_points(cfg: &SuiteConfig, family: SloccFamily, lattice: &[C64], seed: u64) -> Vec<FamilyParams> {
    let zero = C64::new(0.0, 0.0);
    let mut out = Vec::new();
    match family.num_params() {
        0 => out.push(FamilyParams::bare(family)),
        1 => {
            out.extend(lattice.iter().map(|&a| FamilyParams::new(family, a, zero, zero, zero)));
            if family == SloccFamily::La4 {
                let s3 = 3f64.sqrt();
                for aa in [1.5, (3.0 - s3) / 6.0, (3.0 + s3) / 6.0] {
                    for phase in [0.0, std::f64::consts::FRAC_PI_3] {
                        out.push(FamilyParams::new(family, C64::from_polar(aa.sqrt(), phase), zero, zero, zero));
                    }
                }
            }
        }
        m => {
            let mut rng = rng_from_seed(seed);
            for _ in 0..cfg.sample_count(RelationId::R7) {
                let mut pick = || lattice[rng.random_range(0..lattice.len())];
                let mut p = [zero; 4];
                for slot in p.iter_mut().take(m) {
                    *slot = pick();
                }
                out.push(FamilyParams::new(family, p[0], p[1], p[2], p[3]));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationSummary {
    pub relation: RelationId,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Largest residual over non-skipped rows; infinite if any row errored.
    pub worst_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub results: Vec<RelationCheckResult>,
    pub summaries: Vec<RelationSummary>,
}

impl SuiteReport {
    pub fn from_results(mut results: Vec<RelationCheckResult>, relations: &[RelationId]) -> Self {
        results.sort_by(|a, b| (a.relation, &a.state_descriptor).cmp(&(b.relation, &b.state_descriptor)));
        let mut relations = relations.to_vec();
        relations.sort();
        relations.dedup();
        let summaries = relations
            .into_iter()
            .map(|relation| {
                let rows: Vec<_> = results.iter().filter(|r| r.relation == relation).collect();
                let count = |v: Verdict| rows.iter().filter(|r| r.verdict == v).count();
                let worst = rows
                    .iter()
                    .filter(|r| r.verdict != Verdict::Skip)
                    .map(|r| if r.residual.is_nan() { f64::INFINITY } else { r.residual })
                    .fold(0.0, f64::max);
                RelationSummary {
                    relation,
                    total: rows.len(),
                    passed: count(Verdict::Pass) + count(Verdict::InequalitySatisfied),
                    failed: count(Verdict::Fail),
                    skipped: count(Verdict::Skip),
                    worst_residual: worst,
                }
            })
            .collect();
        Self { results, summaries }
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheckResult> {
        self.results.iter().filter(|r| r.verdict.is_failure())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn to_csv(&self) -> String {
        results_csv(&self.results)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{:<9}{:>8}{:>8}{:>6}{:>6}  worst residual", "relation", "checks", "pass", "fail", "skip").unwrap();
        for m in &self.summaries {
            writeln!(s, "{:<9}{:>8}{:>8}{:>6}{:>6}  {:.3e}", m.relation.to_string(), m.total, m.passed, m.failed, m.skipped, m.worst_residual)
                .unwrap();
        }
        let failures: Vec<_> = self.failures().collect();
        if !failures.is_empty() {
            writeln!(s, "\nfailures:").unwrap();
            for f in &failures {
                write!(s, "  {} {}  lhs={} rhs={} residual={:.3e} tol={:e}", f.relation, f.state_descriptor, f.lhs, f.rhs, f.residual, f.tolerance)
                    .unwrap();
                if let Some(note) = &f.condition_note {
                    write!(s, "  [{note}]").unwrap();
                }
                writeln!(s).unwrap();
            }
        }
        writeln!(s, "\n{} checks, {} failures", self.results.len(), failures.len()).unwrap();
        s
    }
}

pub const CSV_HEADER: [&str; 8] = ["relation", "state_descriptor", "lhs", "rhs", "residual", "tolerance", "verdict", "condition_note"];

impl RelationCheckResult {
    /// Fields in [`CSV_HEADER`] order; floats use shortest round-trip formatting.
    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.relation.to_string(),
            self.state_descriptor.clone(),
            self.lhs.to_string(),
            self.rhs.to_string(),
            self.residual.to_string(),
            self.tolerance.to_string(),
            self.verdict.to_string(),
            self.condition_note.clone().unwrap_or_default(),
        ]
    }
}

/// Writes rows under [`CSV_HEADER`].
pub fn csv_table(rows: &[[String; 8]]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

pub fn results_csv(results: &[RelationCheckResult]) -> String {
    csv_table(&results.iter().map(RelationCheckResult::csv_fields).collect::<Vec<_>>())
}

/// Expands and runs the suite. A check that errors becomes a failing row.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let jobs = build_jobs(config)?;
    let results: Vec<Vec<RelationCheckResult>> = jobs
        .par_iter()
        .map(|job| {
            let tol = config.tolerance(job.relation);
            check_labeled(job.relation, &job.label, &job.input, tol)
                .unwrap_or_else(|e| vec![RelationCheckResult::errored(job.relation, job.label.clone(), tol, &e)])
        })
        .collect();
    Ok(SuiteReport::from_results(results.into_iter().flatten().collect(), &config.relations))
}
