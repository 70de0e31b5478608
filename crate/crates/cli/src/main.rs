//! `entangle`: compute entanglement measures and run verification suites.
//!
//! Exit status: 0 when everything requested succeeded and every check passed,
//! 1 when a check failed, 2 on malformed input or configuration.

mod parse;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use entangle_core::families::{slocc_family, FamilyParams, SloccFamily};
use entangle_core::invariants::{invariants3, invariants4, kme_from_invariants3, kme_from_invariants4, tangles_from_invariants3};
use entangle_core::measures::{kme_concurrence_pure, negativity_profile, nme_lower_bound, one_tangle, three_tangle, two_tangle};
use entangle_core::qstate::{parse_state_file, partial_trace, state_file_json, LoadedState, StateFile};
use entangle_core::verify::random::{random_mixed, random_pure};
use entangle_core::verify::suite::{csv_table, ComplexGrid, SuiteConfig, SuiteReport};
use entangle_core::verify::{check, CheckInput, RelationId};
use entangle_core::{SubsystemSet, C64};

use parse::{display, parse_complex, parse_grid};

#[derive(Parser)]
#[command(name = "entangle", version, about = "Multipartite entanglement measures for qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute measures of a state file or a SLOCC family member.
    Measure(MeasureArgs),
    /// Print the LU invariants of a 3- or 4-qubit pure state and what they determine.
    Invariants(InvariantArgs),
    /// Compare family closed forms against numerics at one point or over a grid.
    Family(FamilyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Write a random pure or mixed state as a state file.
    Random(RandomArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["state", "family"])))]
struct Source {
    /// State JSON file.
    #[arg(long)]
    state: Option<PathBuf>,
    /// SLOCC family id (1-9).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    family: Option<u8>,
    #[command(flatten)]
    params: Params,
}

#[derive(Args)]
struct Params {
    /// Family parameter a, as re+imj.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    a: Option<C64>,
    /// Family parameter b.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    b: Option<C64>,
    /// Family parameter c.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c: Option<C64>,
    /// Family parameter d.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    d: Option<C64>,
}

impl Params {
    fn family(&self, id: u8) -> Result<FamilyParams, String> {
        let family = SloccFamily::from_id(id).map_err(|e| e.to_string())?;
        let z = C64::new(0.0, 0.0);
        let given = [self.a, self.b, self.c, self.d];
        if let Some(extra) = given.iter().skip(family.num_params()).position(Option::is_some) {
            let name = ["a", "b", "c", "d"][family.num_params() + extra];
            return Err(format!("family {id} does not take parameter {name}"));
        }
        let [a, b, c, d] = given.map(|p| p.unwrap_or(z));
        Ok(FamilyParams::new(family, a, b, c, d))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Measure {
    /// k-ME concurrences for each requested k (pure states).
    Kme,
    /// Per-site negativities.
    Negativity,
    /// n-ME lower bound from the negativities.
    Bound,
    /// One-, two- and three-tangles (2 or 3 qubits).
    Tangles,
    /// Three-qubit invariants.
    Invariants3,
    /// Four-qubit invariants.
    Invariants4,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    source: Source,
    /// Partition sizes for k-ME concurrence; defaults to 2..=n.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Measures to compute; defaults to kme,negativity (pure) or negativity,bound (mixed).
    #[arg(long, value_delimiter = ',', value_enum)]
    measures: Vec<Measure>,
    /// Also write rows in the verification report CSV schema.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct InvariantArgs {
    #[command(flatten)]
    source: Source,
    /// Write the rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    /// SLOCC family id (1-9).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    family: u8,
    #[command(flatten)]
    params: Params,
    /// Parameter lattice re:lo:hi:steps,im:lo:hi:steps. Give once for all
    /// parameters or once per parameter in order a, b, c, d.
    #[arg(long, value_parser = parse_grid)]
    grid: Vec<ComplexGrid>,
    /// Tolerance for closed form against numerics.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Write the check rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("config").required(true).args(["suite", "default"])))]
struct VerifyArgs {
    /// Suite configuration JSON.
    #[arg(long)]
    suite: Option<PathBuf>,
    /// Run the built-in suite.
    #[arg(long)]
    default: bool,
    /// Overrides the suite seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write all result rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    /// Number of qubits.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Produce a mixture of this many random pure states instead of a pure state.
    #[arg(long)]
    rank: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Points above this count are refused by `family --grid`.
const MAX_GRID_POINTS: usize = 200_000;

type CliResult = Result<ExitCode, String>;

fn main() -> ExitCode {
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Measure(a) => measure(a),
        Command::Invariants(a) => invariants(a),
        Command::Family(a) => family(a),
        Command::Verify(a) => verify(a),
        Command::Random(a) => random(a),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

/// Writes to stdout. A closed pipe (e.g. `| head`) ends the process quietly.
fn emit(text: &str) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
        std::process::exit(if e.kind() == std::io::ErrorKind::BrokenPipe { 0 } else { 2 });
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(&format!("{}\n", format_args!($($arg)*))) };
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("ENTANGLE_THREADS") else { return Ok(()) };
    let n: usize = value.trim().parse().ok().filter(|&n| n > 0).ok_or(format!("ENTANGLE_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn load(source: &Source) -> Result<(String, LoadedState), String> {
    if let Some(path) = &source.state {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let state = parse_state_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        return Ok((name, state));
    }
    let id = source.family.expect("clap enforces a source");
    let params = source.params.family(id)?;
    let psi = slocc_family(&params).map_err(|e| e.to_string())?;
    Ok((params.descriptor(), LoadedState::Pure(psi)))
}

struct Row {
    name: String,
    value: f64,
    note: Option<String>,
}

impl Row {
    fn new(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value, note: None }
    }
}

fn print_rows(source: &str, rows: &[Row]) {
    out!("state: {source}");
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(7);
    for r in rows {
        match &r.note {
            Some(note) => out!("  {:<width$}  {:<16}  {note}", r.name, display(r.value)),
            None => out!("  {:<width$}  {}", r.name, display(r.value)),
        }
    }
}

fn write_rows_csv(path: &Path, source: &str, rows: &[Row]) -> Result<(), String> {
    let table: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                "measure".into(),
                format!("{source}|{}", r.name),
                r.value.to_string(),
                r.value.to_string(),
                "0".into(),
                "0".into(),
                "value".into(),
                r.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    write_file(path, &csv_table(&table))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn pure_only<'a>(state: &'a LoadedState, what: &str) -> Result<&'a entangle_core::PureState, String> {
    match state {
        LoadedState::Pure(p) => Ok(p),
        LoadedState::Density(_) => Err(format!("{what} needs a pure state")),
    }
}

fn err_str(e: entangle_core::Error) -> String {
    e.to_string()
}

fn measure(args: MeasureArgs) -> CliResult {
    let (source, state) = load(&args.source)?;
    let n = state.num_sites();
    let is_pure = matches!(state, LoadedState::Pure(_));
    let measures = if !args.measures.is_empty() {
        args.measures.clone()
    } else if is_pure {
        vec![Measure::Kme, Measure::Negativity]
    } else {
        vec![Measure::Negativity, Measure::Bound]
    };
    let mut rows = Vec::new();
    for m in measures {
        match m {
            Measure::Kme => {
                let psi = pure_only(&state, "k-ME concurrence")?;
                let ks = if args.k.is_empty() { (2..=n).collect() } else { args.k.clone() };
                for k in ks {
                    let report = kme_concurrence_pure(psi, k).map_err(err_str)?;
                    let mut row = Row::new(report.measure_name.clone(), report.value);
                    row.note = report.optimal_partition.map(|p| p.to_string());
                    rows.push(row);
                }
            }
            Measure::Negativity => {
                let profile = negativity_profile(&state.density()).map_err(err_str)?;
                rows.extend(profile.per_site.iter().enumerate().map(|(p, v)| Row::new(format!("N{p}"), *v)));
            }
            Measure::Bound => rows.push(Row::new("C_n lower bound", nme_lower_bound(&state.density()).map_err(err_str)?)),
            Measure::Tangles => rows.extend(tangle_rows(&state)?),
            Measure::Invariants3 => rows.extend(invariant3_rows(pure_only(&state, "invariants3")?)?),
            Measure::Invariants4 => rows.extend(invariant4_rows(pure_only(&state, "invariants4")?)?),
        }
    }
    print_rows(&source, &rows);
    if let Some(path) = &args.csv {
        write_rows_csv(path, &source, &rows)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn tangle_rows(state: &LoadedState) -> Result<Vec<Row>, String> {
    let rho = state.density();
    match (state, state.num_sites()) {
        (_, 2) => Ok(vec![Row::new("tau{0,1}", two_tangle(&rho).map_err(err_str)?)]),
        (LoadedState::Pure(psi), 3) => {
            let mut rows = Vec::new();
            for p in 0..3 {
                rows.push(Row::new(format!("tau{{{p}}}"), one_tangle(psi, p).map_err(err_str)?));
            }
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let pair = SubsystemSet::new(vec![i, j]).map_err(err_str)?;
                let reduced = partial_trace(&rho, &pair).map_err(err_str)?;
                rows.push(Row::new(format!("tau{pair}"), two_tangle(&reduced).map_err(err_str)?));
            }
            rows.push(Row::new("tau{0,1,2}", three_tangle(psi).map_err(err_str)?));
            Ok(rows)
        }
        _ => Err("tangles are available for 2-qubit states and 3-qubit pure states".into()),
    }
}

fn invariant3_rows(psi: &entangle_core::PureState) -> Result<Vec<Row>, String> {
    let inv = invariants3(psi).map_err(err_str)?;
    let mut rows = vec![Row::new("I2", inv.i2)];
    rows.extend(inv.i4.iter().enumerate().map(|(m, v)| Row::new(format!("I4({})", m + 1), *v)));
    Ok(rows)
}

fn invariant4_rows(psi: &entangle_core::PureState) -> Result<Vec<Row>, String> {
    let inv = invariants4(psi).map_err(err_str)?;
    let mut rows = vec![Row::new("I2", inv.i2)];
    rows.extend(inv.i4.iter().enumerate().map(|(m, v)| Row::new(format!("I4({})", m + 1), *v)));
    Ok(rows)
}

fn invariants(args: InvariantArgs) -> CliResult {
    let (source, state) = load(&args.source)?;
    let psi = pure_only(&state, "invariants")?;
    let mut rows = Vec::new();
    match psi.num_sites() {
        3 => {
            rows.extend(invariant3_rows(psi)?);
            let inv = invariants3(psi).map_err(err_str)?;
            let (c2, c3) = kme_from_invariants3(&inv);
            let tau = three_tangle(psi).map_err(err_str)?;
            let (ab, ac, bc) = tangles_from_invariants3(&inv, tau);
            rows.extend([
                Row::new("C2-ME", c2),
                Row::new("C3-ME", c3),
                Row::new("tau{0,1,2}", tau),
                Row::new("tau{0,1}", ab),
                Row::new("tau{0,2}", ac),
                Row::new("tau{1,2}", bc),
            ]);
        }
        4 => {
            rows.extend(invariant4_rows(psi)?);
            let inv = invariants4(psi).map_err(err_str)?;
            for (name, v) in ["Tr rho_{0,1}^2", "Tr rho_{0,2}^2", "Tr rho_{1,2}^2"].iter().zip(inv.derived_pairs) {
                rows.push(Row::new(*name, v));
            }
            let (c2, c3, c4) = kme_from_invariants4(&inv);
            rows.extend([Row::new("C2-ME", c2), Row::new("C3-ME", c3), Row::new("C4-ME", c4)]);
        }
        n => return Err(format!("invariants are defined for 3 or 4 qubits, got {n}")),
    }
    print_rows(&source, &rows);
    if let Some(path) = &args.csv {
        write_rows_csv(path, &source, &rows)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn family_grid_points(args: &FamilyArgs) -> Result<Vec<FamilyParams>, String> {
    let base = args.params.family(args.family)?;
    let m = base.family.num_params();
    if args.grid.is_empty() {
        return Ok(vec![base]);
    }
    if m == 0 {
        return Err(format!("family {} takes no parameters; --grid does not apply", args.family));
    }
    if args.grid.len() != 1 && args.grid.len() != m {
        return Err(format!("family {} takes {m} parameters; give --grid once or {m} times", args.family));
    }
    let axes: Vec<Vec<C64>> = (0..m).map(|i| args.grid[i.min(args.grid.len() - 1)].points()).collect();
    let total = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len())).filter(|&t| t <= MAX_GRID_POINTS);
    let total = total.ok_or(format!("grid has more than {MAX_GRID_POINTS} points"))?;
    let points = (0..total)
        .map(|mut idx| {
            let mut p = [C64::new(0.0, 0.0); 4];
            for (slot, axis) in p.iter_mut().zip(&axes) {
                *slot = axis[idx % axis.len()];
                idx /= axis.len();
            }
            FamilyParams::new(base.family, p[0], p[1], p[2], p[3])
        })
        .collect();
    Ok(points)
}

fn family(args: FamilyArgs) -> CliResult {
    if !args.tol.is_finite() || args.tol < 0.0 {
        return Err(format!("--tol must be finite and >= 0, got {}", args.tol));
    }
    let points = family_grid_points(&args)?;
    let results: Vec<_> = points
        .par_iter()
        .map(|p| check(RelationId::R7, &CheckInput::Family(*p), args.tol))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err_str)?;
    let report = SuiteReport::from_results(results.into_iter().flatten().collect(), &[RelationId::R7]);
    if points.len() == 1 {
        for r in &report.results {
            let note = r.condition_note.as_deref().map(|n| format!("  [{n}]")).unwrap_or_default();
            out!("{:<44}  closed={:<16} numeric={:<16} {}{note}", r.state_descriptor, display(r.lhs), display(r.rhs), r.verdict);
        }
    } else {
        emit(&report.to_text());
    }
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify(args: VerifyArgs) -> CliResult {
    let mut config = match &args.suite {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            SuiteConfig::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let report = entangle_core::verify::run_suite(&config).map_err(err_str)?;
    emit(&report.to_text());
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn random(args: RandomArgs) -> CliResult {
    let file = match args.rank {
        None => StateFile::from_pure(&random_pure(args.n, args.seed).map_err(err_str)?),
        Some(rank) => StateFile::from_density(&random_mixed(args.n, rank, args.seed).map_err(err_str)?.density),
    };
    let json = state_file_json(&file);
    match &args.out {
        Some(path) => write_file(path, &json)?,
        None => out!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}
