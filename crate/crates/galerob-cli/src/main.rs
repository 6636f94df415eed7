//! Command-line surface for the Gale-Robinson toolkit: quiver construction,
//! recurrence sequences, degree-set posets, F-polynomials, Theta orbits, and
//! a cross-verification suite with a machine-readable report.

use std::collections::BTreeSet;
use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use galerob::theta::{theta_inverse_with, theta_orbit_with, theta_with};
use galerob::{
    build_cyclic, build_sj, candidate_points, count_order_ideals, enumerate_faces, export_dot,
    f_polynomial, f_polynomial_oracle, gr_sequence, gr_values, gr_values_at, neighbor_dims,
    order_filters, premutation_dims, recover_g_vector, relabel_down, subrep_bruteforce, yhat,
    AdmissionTable, ArrowKind, DegreeSet, GRParams, Orientation, Quiver, Side, Weight,
    ADMISSION_TABLE,
};

type CliError = Box<dyn Error>;

#[derive(Parser)]
#[command(name = "galerob", version, about = "Gale-Robinson cluster-algebra toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the recurrence quiver and print its arrow census.
    Quiver(QuiverArgs),
    /// Compute terms of the recurrence, numerically or symbolically.
    Sequence(SequenceArgs),
    /// Construct a canonical or cyclic degree set and report its structure.
    Poset(PosetArgs),
    /// Expand the F-polynomial of a degree set.
    Fpoly(FpolyArgs),
    /// Apply the mutation operator repeatedly and emit the orbit.
    Theta(ThetaArgs),
    /// Run the cross-verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Smaller recurrence offset a.
    #[arg(long)]
    a: i64,
    /// Second recurrence offset c.
    #[arg(long)]
    c: i64,
    /// Recurrence order N.
    #[arg(long = "N")]
    n: i64,
}

impl ParamArgs {
    fn to_params(&self) -> Result<GRParams, CliError> {
        Ok(GRParams::new(self.a, self.c, self.n)?)
    }
}

#[derive(Args)]
struct QuiverArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Write the quiver as JSON to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the quiver in DOT format to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct SequenceArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// First index to report.
    #[arg(long, allow_negative_numbers = true)]
    lo: i64,
    /// Last index to report.
    #[arg(long, allow_negative_numbers = true)]
    hi: i64,
    /// Specialize every initial variable to this integer (default 1).
    #[arg(long, allow_negative_numbers = true, conflicts_with = "symbolic")]
    spec: Option<i64>,
    /// Print Laurent polynomials in the initial cluster variables.
    #[arg(long)]
    symbolic: bool,
    /// Emit bare `index,value` lines instead of `x_index = value`.
    #[arg(long)]
    csv: bool,
    /// Write the listing to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PosetArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Index of the canonical degree set.
    #[arg(long, conflicts_with = "cyclic")]
    j: Option<i64>,
    /// Cyclic construction: starting vertex, comma-separated vertex set, base weight.
    #[arg(long, num_args = 3, allow_hyphen_values = true, value_names = ["V", "VBAR", "MU"])]
    cyclic: Option<Vec<String>>,
    /// Write the degree-set JSON to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    /// Order-ideal expansion (alias: ideals).
    Pos,
    /// Order-filter expansion (alias: filters).
    Neg,
    /// Order-filter expansion.
    Filters,
    /// Order-ideal expansion.
    Ideals,
}

impl SideArg {
    fn to_side(self) -> Side {
        match self {
            SideArg::Pos | SideArg::Ideals => Side::Ideals,
            SideArg::Neg | SideArg::Filters => Side::Filters,
        }
    }
}

#[derive(Args)]
struct FpolyArgs {
    /// Smaller recurrence offset a (used with --j).
    #[arg(long)]
    a: Option<i64>,
    /// Second recurrence offset c (used with --j).
    #[arg(long)]
    c: Option<i64>,
    /// Recurrence order N (used with --j).
    #[arg(long = "N")]
    n: Option<i64>,
    /// Index of the canonical degree set.
    #[arg(long)]
    j: Option<i64>,
    /// Read the degree set from this JSON file instead.
    #[arg(long, conflicts_with_all = ["a", "c", "n", "j"])]
    input: Option<PathBuf>,
    /// Which expansion to print.
    #[arg(long, value_enum)]
    side: SideArg,
    /// Write the polynomial to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ThetaArgs {
    /// Read the starting degree set from this JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Number of operator applications; 0 echoes the input.
    #[arg(long)]
    steps: u32,
    /// Apply the inverse operator instead.
    #[arg(long)]
    inverse: bool,
    /// Warn on stderr instead of failing when a set is disconnected.
    #[arg(long)]
    allow_disconnected: bool,
    /// Write the orbit JSON to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Largest canonical index exercised by the suite.
    #[arg(long, default_value_t = 8)]
    jmax: i64,
    /// Worker threads for ideal counting (falls back to GALEROB_THREADS).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report to this file as well as stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Quiver(args) => cmd_quiver(&args),
        Command::Sequence(args) => cmd_sequence(&args),
        Command::Poset(args) => cmd_poset(&args),
        Command::Fpoly(args) => cmd_fpoly(&args),
        Command::Theta(args) => cmd_theta(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Writes to the given file, or to stdout when no file was requested.
fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_degree_set(path: &Path) -> Result<DegreeSet, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let set: DegreeSet =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(set)
}

fn pretty_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cmd_quiver(args: &QuiverArgs) -> Result<ExitCode, CliError> {
    let params = args.params.to_params()?;
    let quiver = Quiver::from_params(params);
    if let Some(path) = &args.json {
        emit(Some(path), &pretty_json(&quiver)?)?;
    }
    if let Some(path) = &args.dot {
        emit(Some(path), &export_dot(&quiver))?;
    }
    println!("vertices: {}", params.n);
    for (kind, count) in quiver.census() {
        println!("{kind:?}: {count}");
    }
    println!("arrows: {}", quiver.arrows().len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_sequence(args: &SequenceArgs) -> Result<ExitCode, CliError> {
    let params = args.params.to_params()?;
    if args.lo > args.hi {
        return Err("--lo must not exceed --hi".into());
    }
    // The recurrence always runs from the seed window 1..=N; the requested
    // range is sliced out afterwards.
    let (lo, hi) = (args.lo.min(1), args.hi.max(params.n));
    let mut lines = Vec::new();
    if args.symbolic {
        let polys = gr_sequence(params, lo, hi)?;
        for idx in args.lo..=args.hi {
            let poly = polys[&idx].render_with("x");
            lines.push(if args.csv {
                format!("{idx},{poly}")
            } else {
                format!("x_{idx} = {poly}")
            });
        }
    } else {
        let seed = BigInt::from(args.spec.unwrap_or(1));
        let values = gr_values_at(params, lo, hi, &seed)?;
        for idx in args.lo..=args.hi {
            let value = &values[&idx];
            lines.push(if args.csv {
                format!("{idx},{value}")
            } else {
                format!("x_{idx} = {value}")
            });
        }
    }
    emit(args.output.as_deref(), &(lines.join("\n") + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_cyclic_spec(
    params: GRParams,
    spec: &[String],
) -> Result<(i64, BTreeSet<i64>, Weight), CliError> {
    let v: i64 = spec[0]
        .trim()
        .parse()
        .map_err(|_| format!("invalid starting vertex {:?}", spec[0]))?;
    if !(1..=params.n).contains(&v) {
        return Err(format!("starting vertex {v} lies outside 1..={}", params.n).into());
    }
    let mut vbar = BTreeSet::new();
    for part in spec[1].split(',') {
        let vertex: i64 = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid vertex {part:?} in the vertex set"))?;
        if !(1..=params.n).contains(&vertex) {
            return Err(format!("vertex {vertex} lies outside 1..={}", params.n).into());
        }
        vbar.insert(vertex);
    }
    if !vbar.contains(&v) {
        return Err(format!("the vertex set must contain the starting vertex {v}").into());
    }
    let mu: Weight = spec[2].parse()?;
    Ok((v, vbar, mu))
}

fn cmd_poset(args: &PosetArgs) -> Result<ExitCode, CliError> {
    let params = args.params.to_params()?;
    let set = match (&args.j, &args.cyclic) {
        (Some(j), None) => {
            if *j < 1 {
                return Err("--j must be at least 1".into());
            }
            build_sj(params, *j)
        }
        (None, Some(spec)) => {
            let (v, vbar, mu) = parse_cyclic_spec(params, spec)?;
            build_cyclic(params, v, &vbar, mu)?
        }
        _ => return Err("exactly one of --j and --cyclic is required".into()),
    };
    let json = pretty_json(&set)?;
    let report = [
        format!("points: {}", set.len()),
        format!("t: {}", set.t()),
        format!("interval-closed: {}", set.is_interval_closed()),
        format!("connected: {}", set.is_connected()),
        format!("sturdy: {}", set.is_sturdy()),
    ]
    .join("\n");
    match &args.output {
        Some(path) => {
            emit(Some(path), &json)?;
            println!("{report}");
        }
        None => {
            print!("{json}");
            eprintln!("{report}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fpoly(args: &FpolyArgs) -> Result<ExitCode, CliError> {
    let set = match (&args.input, args.j) {
        (Some(path), None) => read_degree_set(path)?,
        (None, Some(j)) => {
            let (Some(a), Some(c), Some(n)) = (args.a, args.c, args.n) else {
                return Err("--j requires --a, --c, and --N".into());
            };
            if j < 1 {
                return Err("--j must be at least 1".into());
            }
            build_sj(GRParams::new(a, c, n)?, j)
        }
        _ => return Err("exactly one of --j and --input is required".into()),
    };
    let poly = f_polynomial(&set, args.side.to_side())?;
    emit(args.output.as_deref(), &format!("{poly}\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_theta(args: &ThetaArgs) -> Result<ExitCode, CliError> {
    let set = read_degree_set(&args.input)?;
    if args.steps == 0 {
        emit(args.output.as_deref(), &pretty_json(&set)?)?;
        return Ok(ExitCode::SUCCESS);
    }
    let k = if args.inverse { -(args.steps as i64) } else { args.steps as i64 };
    let orbit = theta_orbit_with(&set, k, &ADMISSION_TABLE, args.allow_disconnected);
    if args.allow_disconnected {
        if !set.is_connected() {
            eprintln!("warning: the starting set is disconnected");
        }
        for (i, step) in orbit.steps.iter().enumerate() {
            if !step.output.is_connected() {
                eprintln!("warning: the output of step {} is disconnected", i + 1);
            }
        }
    }
    emit(args.output.as_deref(), &pretty_json(&orbit)?)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// The verification suite
// ---------------------------------------------------------------------------

struct CheckReport {
    name: &'static str,
    witnesses: Vec<serde_json::Value>,
    skipped: bool,
}

impl CheckReport {
    fn new(name: &'static str, witnesses: Vec<serde_json::Value>) -> CheckReport {
        CheckReport { name, witnesses, skipped: false }
    }

    fn skip(name: &'static str) -> CheckReport {
        CheckReport { name, witnesses: Vec::new(), skipped: true }
    }

    fn passed(&self) -> bool {
        self.skipped || self.witnesses.is_empty()
    }

    fn status(&self) -> &'static str {
        if self.skipped {
            "skipped"
        } else if self.witnesses.is_empty() {
            "pass"
        } else {
            "fail"
        }
    }
}

/// The mutation operator is undefined when vertex 1 sits on a two-cycle, so
/// the operator-based checks do not apply to such parameters.
fn theta_applies(params: GRParams) -> bool {
    params.a != params.c && params.a != params.d()
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(threads) = flag {
        return Ok(threads.max(1));
    }
    match std::env::var("GALEROB_THREADS") {
        Ok(value) => value
            .trim()
            .parse::<usize>()
            .map(|t| t.max(1))
            .map_err(|_| format!("GALEROB_THREADS must be a positive integer, got {value:?}").into()),
        Err(_) => Ok(1),
    }
}

/// The admission table used by the run; GALEROB_TEST_CORRUPT_TABLE poisons
/// one column so the oracle cross-checks must catch the disagreement.
fn admission_table_for_run() -> AdmissionTable {
    let mut table = ADMISSION_TABLE;
    if std::env::var_os("GALEROB_TEST_CORRUPT_TABLE").is_some() {
        eprintln!("warning: admission table corrupted for fault-injection testing");
        table.columns[0] = [9, 9, 9, 9];
    }
    table
}

fn weight_json(w: Weight) -> serde_json::Value {
    serde_json::to_value(w).expect("weights serialize")
}

fn check_geometry(params: GRParams) -> CheckReport {
    let mut witnesses = Vec::new();
    let quiver = Quiver::from_params(params);
    match enumerate_faces(&quiver) {
        Ok(faces) => {
            for face in &faces {
                if face.boundary_weight() != Weight::new(1, 1, 1, 1) {
                    witnesses.push(json!({
                        "kind": "face-weight",
                        "residue": face.residue,
                        "weight": weight_json(face.boundary_weight()),
                    }));
                }
            }
            let euler = params.n - quiver.arrows().len() as i64 + faces.len() as i64;
            if euler != 0 {
                witnesses.push(json!({ "kind": "euler", "value": euler }));
            }
            let ccw = faces.iter().filter(|f| f.orientation == Orientation::Ccw).count();
            if 2 * ccw != faces.len() {
                witnesses.push(json!({
                    "kind": "orientation-balance",
                    "ccw": ccw,
                    "faces": faces.len(),
                }));
            }
        }
        Err(e) => witnesses.push(json!({ "kind": "faces", "error": e.to_string() })),
    }
    let out: Vec<_> = quiver.arrows().iter().filter(|a| a.source == 1).collect();
    let into: Vec<_> = quiver.arrows().iter().filter(|a| a.target == 1).collect();
    let pattern_ok = out.len() == 2
        && into.len() == 2
        && out.iter().any(|a| a.kind == ArrowKind::East && a.target == 1 + params.a)
        && out.iter().any(|a| a.kind == ArrowKind::West && a.target == 1 + params.b())
        && into.iter().any(|a| a.kind == ArrowKind::South && a.source == 1 + params.c)
        && into.iter().any(|a| a.kind == ArrowKind::North && a.source == 1 + params.d());
    if !pattern_ok {
        witnesses.push(json!({
            "kind": "vertex-one-pattern",
            "out_degree": out.len(),
            "in_degree": into.len(),
        }));
    }
    let graph = quiver.to_multigraph();
    if graph.is_two_acyclic() {
        match galerob::classical_mutation(&graph, 1) {
            Ok(mutated) => {
                if relabel_down(&mutated) != graph {
                    witnesses.push(json!({ "kind": "mutation-shift" }));
                }
            }
            Err(e) => witnesses.push(json!({ "kind": "mutation", "error": e.to_string() })),
        }
    }
    CheckReport::new("quiver-geometry", witnesses)
}

fn check_ideal_counts(params: GRParams, jmax: i64, threads: usize) -> CheckReport {
    let mut witnesses = Vec::new();
    match gr_values(params, 1, params.n + jmax) {
        Ok(values) => {
            for j in 1..=jmax {
                let set = build_sj(params, j);
                let count = BigInt::from(count_order_ideals(&set, threads));
                let expected = &values[&(params.n + j)];
                if &count != expected {
                    witnesses.push(json!({
                        "j": j,
                        "count": count.to_string(),
                        "expected": expected.to_string(),
                    }));
                }
            }
        }
        Err(e) => witnesses.push(json!({ "error": e.to_string() })),
    }
    CheckReport::new("ideal-counts", witnesses)
}

fn check_theta_orbit(params: GRParams, jmax: i64, table: &AdmissionTable) -> CheckReport {
    if !theta_applies(params) {
        return CheckReport::skip("theta-orbit");
    }
    let mut witnesses = Vec::new();
    let mut current = build_sj(params, 1);
    for j in 2..=jmax {
        match theta_with(&current, table, false) {
            Ok(step) => {
                if step.output != build_sj(params, j) {
                    witnesses.push(json!({ "j": j, "kind": "wrong-set" }));
                }
                match theta_inverse_with(&step.output, table, false) {
                    Ok(back) if back.output == current => {}
                    Ok(_) => witnesses.push(json!({ "j": j, "kind": "inverse-mismatch" })),
                    Err(e) => witnesses.push(json!({
                        "j": j,
                        "kind": "inverse-refused",
                        "error": e.predicate(),
                    })),
                }
                current = step.output;
            }
            Err(e) => {
                witnesses.push(json!({ "j": j, "kind": "refused", "error": e.predicate() }));
                break;
            }
        }
    }
    CheckReport::new("theta-orbit", witnesses)
}

fn check_admission(params: GRParams, jmax: i64, table: &AdmissionTable) -> CheckReport {
    if !theta_applies(params) {
        return CheckReport::skip("admission-vs-ranks");
    }
    let mut witnesses = Vec::new();
    for j in 1..jmax {
        let set = build_sj(params, j);
        for lambda in candidate_points(&set) {
            let admitted = table.column_of(neighbor_dims(&set, lambda)).is_some();
            match premutation_dims(&set, lambda) {
                Ok(dims) => {
                    if (dims.total() == 1) != admitted {
                        witnesses.push(json!({
                            "j": j,
                            "point": weight_json(lambda),
                            "rank_total": dims.total(),
                            "admitted": admitted,
                        }));
                    }
                }
                Err(e) => witnesses.push(json!({
                    "j": j,
                    "point": weight_json(lambda),
                    "error": e.to_string(),
                })),
            }
        }
    }
    CheckReport::new("admission-vs-ranks", witnesses)
}

fn check_closed_subreps(params: GRParams, jmax: i64) -> CheckReport {
    let mut witnesses = Vec::new();
    for j in 1..=jmax {
        let set = build_sj(params, j);
        if set.len() > 15 {
            break;
        }
        match subrep_bruteforce(&set) {
            Ok(reps) => {
                let mut closed: Vec<BTreeSet<Weight>> = reps
                    .into_iter()
                    .map(|r| r.points.into_iter().collect())
                    .collect();
                closed.sort();
                let mut filters: Vec<BTreeSet<Weight>> = order_filters(&set)
                    .into_iter()
                    .map(|f| f.into_iter().collect())
                    .collect();
                filters.sort();
                if closed != filters {
                    witnesses.push(json!({ "j": j, "kind": "filters" }));
                }
            }
            Err(e) => witnesses.push(json!({ "j": j, "error": e.to_string() })),
        }
        let oracle = f_polynomial_oracle(&set);
        let direct = f_polynomial(&set, Side::Filters);
        match (oracle, direct) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => witnesses.push(json!({ "j": j, "kind": "polynomial" })),
            (Err(e), _) => witnesses.push(json!({ "j": j, "error": e.to_string() })),
            (_, Err(e)) => witnesses.push(json!({ "j": j, "error": e.to_string() })),
        }
    }
    CheckReport::new("closed-subreps", witnesses)
}

fn check_g_vectors(params: GRParams, jmax: i64) -> CheckReport {
    let mut witnesses = Vec::new();
    let quiver = Quiver::from_params(params);
    let graph = quiver.to_multigraph();
    let yhats: Vec<_> = (1..=params.n).map(|k| yhat(&graph, k)).collect();
    match gr_sequence(params, 1, params.n + jmax) {
        Ok(xs) => {
            for j in 1..=jmax {
                let fpoly = match f_polynomial(&build_sj(params, j), Side::Ideals) {
                    Ok(f) => f,
                    Err(e) => {
                        witnesses.push(json!({ "j": j, "error": e.to_string() }));
                        continue;
                    }
                };
                if let Err(e) = recover_g_vector(&xs[&(params.n + j)], &fpoly, &yhats) {
                    witnesses.push(json!({ "j": j, "error": e.to_string() }));
                }
            }
        }
        Err(e) => witnesses.push(json!({ "error": e.to_string() })),
    }
    CheckReport::new("g-vectors", witnesses)
}

fn check_laurent_sweep(params: GRParams) -> CheckReport {
    let mut witnesses = Vec::new();
    let (lo, hi) = (1 - (params.n + 6), params.n + 10);
    match (gr_sequence(params, lo, hi), gr_values(params, lo, hi)) {
        (Ok(polys), Ok(values)) => {
            for (idx, poly) in &polys {
                if poly.eval_at_ones() != values[idx] {
                    witnesses.push(json!({ "index": idx, "kind": "specialization" }));
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => witnesses.push(json!({ "error": e.to_string() })),
    }
    CheckReport::new("laurent-sweep", witnesses)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let params = args.params.to_params()?;
    if args.jmax < 1 {
        return Err("--jmax must be at least 1".into());
    }
    let threads = resolve_threads(args.threads)?;
    let table = admission_table_for_run();

    let checks = vec![
        check_geometry(params),
        check_ideal_counts(params, args.jmax, threads),
        check_theta_orbit(params, args.jmax, &table),
        check_admission(params, args.jmax, &table),
        check_closed_subreps(params, args.jmax),
        check_g_vectors(params, args.jmax),
        check_laurent_sweep(params),
    ];

    let all_passed = checks.iter().all(CheckReport::passed);
    for check in &checks {
        match check.status() {
            "pass" => eprintln!("ok {}", check.name),
            "skipped" => eprintln!("skip {} (operator undefined here)", check.name),
            _ => eprintln!("FAIL {} ({} witnesses)", check.name, check.witnesses.len()),
        }
    }

    let report = json!({
        "params": { "a": params.a, "c": params.c, "N": params.n },
        "jmax": args.jmax,
        "status": if all_passed { "pass" } else { "fail" },
        "checks": checks
            .iter()
            .map(|c| {
                json!({
                    "check": c.name,
                    "status": c.status(),
                    "witnesses": c.witnesses,
                })
            })
            .collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    print!("{text}");
    if let Some(path) = &args.output {
        emit(Some(path), &text)?;
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
