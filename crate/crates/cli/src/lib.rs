//! Command-line front end for `lipfree`.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! together with everything that would be printed, so tests can drive the
//! binary without spawning it. Exit codes: 0 positive verdict or success,
//! 1 negative verdict, 2 input error, 3 certificate or oracle mismatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use lipfree::differentiability::{
    apply_orientation, check_gateaux_eps, coverage_eps_prefix, decide, l1_basis_check, DiffVerdict,
    Failure, L1Verdict, StabilityContext, DEFAULT_L1_CAP,
};
use lipfree::generators::{generate, GeneratorSpec, Kind, Profile};
use lipfree::json::{
    certificate_to_json, function_to_json, labelled_values, parse_element, parse_function,
    parse_space, parse_system, space_to_json, system_to_json, witness_to_json,
};
use lipfree::metric::{validate_space, DEFAULT_VIOLATION_LIMIT};
use lipfree::molecule::{beta_matrix, to_point_masses, MoleculeSystem, PointMassElement};
use lipfree::norming::{build_on_n, extend_lower, extend_upper, verify_norming};
use lipfree::oracles::{brute_cycles, brute_dual_norm, brute_norming_uniqueness};
use lipfree::potential::{check_cyclical_monotonicity, closure, Closure, CyclicalMonotonicity};
use lipfree::rational::{parse as parse_rational, to_json as rat, Rational};
use lipfree::transport::{decompose_to_molecules, free_norm};
use lipfree::{Error, FiniteMetricSpace};

pub const MAX_POINTS_ENV: &str = "LIPFREE_MAX_POINTS";
pub const DEFAULT_MAX_POINTS: usize = 512;

#[derive(Debug, Parser)]
#[command(
    name = "lipfree",
    version,
    about = "Exact Lipschitz-free space geometry"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct SpaceArg {
    /// Space document.
    #[arg(long)]
    space: PathBuf,
}

#[derive(Debug, Args)]
struct SystemArgs {
    #[command(flatten)]
    space: SpaceArg,
    /// Molecule system document.
    #[arg(long)]
    system: PathBuf,
}

#[derive(Debug, Args)]
struct ElementArgs {
    #[command(flatten)]
    space: SpaceArg,
    /// Element document.
    #[arg(long)]
    element: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the metric axioms.
    Validate(SpaceArg),
    /// Free-space norm of an element, with a transport certificate.
    Norm {
        #[command(flatten)]
        args: ElementArgs,
        /// Cross-check against the dual-vertex oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Does the weighted sum of molecules attain its total weight as norm?
    Attains {
        #[command(flatten)]
        args: SystemArgs,
        /// Cross-check against exhaustive cycle enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Write an element as a cyclically monotone sum of molecules.
    Decompose(ElementArgs),
    /// Shortest-path closure and potentials of the system.
    Potentials(SystemArgs),
    /// Norming function and its extremal extensions.
    Norming(SystemArgs),
    /// Epsilon-relaxed rigidity and coverage conditions.
    GateauxEps {
        #[command(flatten)]
        args: SystemArgs,
        #[arg(long)]
        eps: String,
    },
    /// Decide Frechet differentiability of the norm at the system's element.
    Decide {
        #[command(flatten)]
        args: SystemArgs,
        /// Cross-check against the norming-uniqueness oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Shortest prefix of the pairs whose epsilon-segments cover the space.
    CoveragePrefix {
        #[command(flatten)]
        args: SystemArgs,
        #[arg(long)]
        eps: String,
    },
    /// Check whether the molecules are isometrically an l1 basis.
    L1Check {
        #[command(flatten)]
        args: SystemArgs,
        /// Largest pair count accepted.
        #[arg(long, default_value_t = DEFAULT_L1_CAP)]
        cap: usize,
    },
    /// Emit a generated space document.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GenProfile::Generic)]
        profile: GenProfile,
    },
    /// Check the stability estimate for a 1-Lipschitz g near the norming f.
    Stability {
        #[command(flatten)]
        args: SystemArgs,
        /// Function document; defaults to the norming function itself.
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long)]
        eps: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Star,
    C0,
    Line,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenProfile {
    Generic,
    NearDegenerate,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A report plus its exit code.
struct Report {
    code: i32,
    body: Value,
}

impl Report {
    fn verdict(positive: bool, body: Value) -> Self {
        Report {
            code: if positive { 0 } else { 1 },
            body,
        }
    }
}

/// Failure to produce a report.
enum Fail {
    Input(String),
    Mismatch(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Certificate(msg) => Fail::Mismatch(msg),
            other => Fail::Input(other.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn mismatch(msg: impl Into<String>) -> Fail {
    Fail::Mismatch(msg.into())
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: render(&report.body, cli.format),
            stderr: String::new(),
        },
        Err(Fail::Input(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Fail::Mismatch(msg)) => Outcome {
            code: 3,
            stdout: String::new(),
            stderr: format!("certificate mismatch: {msg}\n"),
        },
    }
}

fn render(body: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(body).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            write_text(&mut out, body, 0);
            out
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(
            items
                .iter()
                .map(|i| scalar(i).unwrap())
                .collect::<Vec<_>>()
                .join(" "),
        ),
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

fn write_text(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(out, item, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_text(out, item, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap())),
    }
}

fn max_points() -> Res<usize> {
    match std::env::var(MAX_POINTS_ENV) {
        Err(_) => Ok(DEFAULT_MAX_POINTS),
        Ok(v) => v.trim().parse().map_err(|_| {
            Fail::Input(format!(
                "{MAX_POINTS_ENV} must be a positive integer, got {v:?}"
            ))
        }),
    }
}

fn read_json(path: &Path) -> Res<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Fail::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Fail::Input(format!("{} is not valid JSON: {e}", path.display())))
}

fn load_space(arg: &SpaceArg) -> Res<FiniteMetricSpace> {
    let raw = parse_space(&read_json(&arg.space)?)?;
    check_size(raw.labels.len())?;
    Ok(FiniteMetricSpace::new(raw)?)
}

fn check_size(n: usize) -> Res<()> {
    let limit = max_points()?;
    if n > limit {
        return Err(Error::ResourceLimit {
            what: "point count",
            got: n,
            limit,
        }
        .into());
    }
    Ok(())
}

fn load_system(args: &SystemArgs) -> Res<(FiniteMetricSpace, MoleculeSystem)> {
    let space = load_space(&args.space)?;
    let system = parse_system(&space, &read_json(&args.system)?)?;
    Ok((space, system))
}

fn load_element(args: &ElementArgs) -> Res<(FiniteMetricSpace, PointMassElement)> {
    let space = load_space(&args.space)?;
    let element = parse_element(&space, &read_json(&args.element)?)?;
    Ok((space, element))
}

fn eps_arg(text: &str) -> Res<Rational> {
    Ok(parse_rational(text)?)
}

fn pair_labels(space: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|&(x, y)| json!([space.label(x), space.label(y)]))
            .collect(),
    )
}

fn execute(command: &Command) -> Res<Report> {
    match command {
        Command::Validate(arg) => cmd_validate(arg),
        Command::Norm { args, oracle } => cmd_norm(args, *oracle),
        Command::Attains { args, oracle } => cmd_attains(args, *oracle),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Potentials(args) => cmd_potentials(args),
        Command::Norming(args) => cmd_norming(args),
        Command::GateauxEps { args, eps } => cmd_gateaux_eps(args, eps),
        Command::Decide { args, oracle } => cmd_decide(args, *oracle),
        Command::CoveragePrefix { args, eps } => cmd_coverage_prefix(args, eps),
        Command::L1Check { args, cap } => cmd_l1(args, *cap),
        Command::Gen {
            kind,
            size,
            seed,
            profile,
        } => cmd_gen(*kind, *size, *seed, *profile),
        Command::Stability { args, g, eps } => cmd_stability(args, g.as_deref(), eps),
    }
}

fn cmd_validate(arg: &SpaceArg) -> Res<Report> {
    let raw = parse_space(&read_json(&arg.space)?)?;
    check_size(raw.labels.len())?;
    let report = validate_space(&raw, DEFAULT_VIOLATION_LIMIT)?;
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "kind": v.kind.as_str(),
                "points": v.indices.iter().map(|&i| raw.labels[i].clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let body = json!({
        "command": "validate",
        "ok": report.ok,
        "points": raw.labels.len(),
        "violations": violations,
        "truncated": report.truncated,
        "theta": report.theta.as_ref().map(rat),
        "diameter": report.diameter.as_ref().map(rat),
    });
    Ok(Report::verdict(report.ok, body))
}

fn oracle_points(space: &FiniteMetricSpace) -> Res<()> {
    let limit = lipfree::oracles::MAX_DUAL_ORACLE_POINTS;
    if space.len() > limit {
        return Err(Error::ResourceLimit {
            what: "point count for --oracle",
            got: space.len(),
            limit,
        }
        .into());
    }
    Ok(())
}

fn cmd_norm(args: &ElementArgs, oracle: bool) -> Res<Report> {
    let (space, element) = load_element(args)?;
    if oracle {
        oracle_points(&space)?;
    }
    let cert = free_norm(&space, &element);
    cert.verify(&space, &element).map_err(Fail::Mismatch)?;
    let mut body = json!({
        "command": "norm",
        "value": rat(&cert.value),
        "certificate": certificate_to_json(&space, &cert),
    });
    if oracle {
        let brute = brute_dual_norm(&space, &element)?;
        if brute != cert.value {
            return Err(mismatch(format!(
                "oracle norm {} differs from {}",
                lipfree::rational::render(&brute),
                lipfree::rational::render(&cert.value)
            )));
        }
        body["oracle"] = json!("agree");
    }
    Ok(Report::verdict(true, body))
}

fn cmd_attains(args: &SystemArgs, oracle: bool) -> Res<Report> {
    let (space, system) = load_system(args)?;
    let pairs = system.pairs();
    let element = to_point_masses(&space, &system);
    let cert = free_norm(&space, &element);
    cert.verify(&space, &element).map_err(Fail::Mismatch)?;
    let total = system.total_weight();
    let by_norm = cert.value == total;
    let monotone = check_cyclical_monotonicity(&space, pairs)?;
    if by_norm != monotone.holds() {
        return Err(mismatch(
            "transport norm and cyclical monotonicity disagree on attainment",
        ));
    }
    let mut body = json!({
        "command": "attains",
        "attains": by_norm,
        "norm": rat(&cert.value),
        "total_weight": rat(&total),
    });
    match &monotone {
        CyclicalMonotonicity::Holds => {
            let beta = beta_matrix(&space, pairs)?;
            let table = closure(&beta).table().expect("monotone pairs are feasible");
            let f = extend_upper(&space, &build_on_n(&space, pairs, &table))?.normalized(&space);
            if !verify_norming(&space, pairs, &f) {
                return Err(mismatch("constructed function does not norm the system"));
            }
            body["norming"] = function_to_json(&space, &f);
        }
        CyclicalMonotonicity::Fails(w) => {
            let beta = beta_matrix(&space, pairs)?;
            if !w.verify(&beta) {
                return Err(mismatch("negative cycle does not re-sum"));
            }
            body["witness"] = witness_to_json(&space, pairs, w);
        }
    }
    if oracle {
        let beta = beta_matrix(&space, pairs)?;
        let brute = brute_cycles(&beta, None)?;
        if (brute.min_sum >= Rational::from_integer(0.into())) != by_norm {
            return Err(mismatch("cycle enumeration disagrees"));
        }
        body["oracle"] = json!("agree");
    }
    Ok(Report::verdict(by_norm, body))
}

fn cmd_decompose(args: &ElementArgs) -> Res<Report> {
    let (space, element) = load_element(args)?;
    let system = decompose_to_molecules(&space, &element);
    let norm = free_norm(&space, &element).value;
    if system.total_weight() != norm && !system.is_empty() {
        return Err(mismatch("decomposition weights do not sum to the norm"));
    }
    if to_point_masses(&space, &system) != element {
        return Err(mismatch("decomposition does not reproduce the element"));
    }
    if !check_cyclical_monotonicity(&space, system.pairs())?.holds() {
        return Err(mismatch("decomposition is not cyclically monotone"));
    }
    let body = json!({
        "command": "decompose",
        "norm": rat(&norm),
        "system": system_to_json(&space, &system),
    });
    Ok(Report::verdict(true, body))
}

fn cmd_potentials(args: &SystemArgs) -> Res<Report> {
    let (space, system) = load_system(args)?;
    let pairs = system.pairs();
    let beta = beta_matrix(&space, pairs)?;
    let matrix = |rows: &[Vec<Rational>]| -> Value {
        rows.iter()
            .map(|r| r.iter().map(rat).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .into()
    };
    let mut body = json!({
        "command": "potentials",
        "beta": matrix(beta.rows()),
    });
    match closure(&beta) {
        Closure::Table(t) => {
            let n = t.len();
            for j in 0..n {
                for k in 0..n {
                    if t.alphas()[k] > &t.alphas()[j] + beta.get(k, j) {
                        return Err(mismatch("potentials violate a constraint"));
                    }
                }
            }
            body["feasible"] = json!(true);
            body["closure"] = matrix(t.closure());
            body["anchor"] = json!(t.anchor() + 1);
            body["alphas"] = t.alphas().iter().map(rat).collect::<Vec<_>>().into();
            body["rigid_pairs"] = t
                .rigid_pairs()
                .iter()
                .map(|&(j, k)| json!([j + 1, k + 1]))
                .collect::<Vec<_>>()
                .into();
            body["globally_unique"] = json!(t.globally_unique());
            Ok(Report::verdict(true, body))
        }
        Closure::NegativeCycle(w) => {
            if !w.verify(&beta) {
                return Err(mismatch("negative cycle does not re-sum"));
            }
            body["feasible"] = json!(false);
            body["witness"] = witness_to_json(&space, pairs, &w);
            Ok(Report::verdict(false, body))
        }
    }
}

fn not_attaining(
    space: &FiniteMetricSpace,
    system: &MoleculeSystem,
    command: &str,
    e: Error,
) -> Res<Report> {
    match e {
        Error::NotAttaining(w) => {
            let beta = beta_matrix(space, system.pairs())?;
            if !w.verify(&beta) {
                return Err(mismatch("negative cycle does not re-sum"));
            }
            Ok(Report::verdict(
                false,
                json!({
                    "command": command,
                    "attains": false,
                    "witness": witness_to_json(space, system.pairs(), &w),
                }),
            ))
        }
        other => Err(other.into()),
    }
}

fn cmd_norming(args: &SystemArgs) -> Res<Report> {
    let (space, system) = load_system(args)?;
    let pairs = system.pairs();
    let beta = beta_matrix(&space, pairs)?;
    let table = match closure(&beta) {
        Closure::Table(t) => t,
        Closure::NegativeCycle(w) => {
            return not_attaining(&space, &system, "norming", Error::NotAttaining(w))
        }
    };
    let partial = build_on_n(&space, pairs, &table);
    let upper = extend_upper(&space, &partial)?;
    let lower = extend_lower(&space, &partial)?;
    let f = upper.normalized(&space);
    if !verify_norming(&space, pairs, &f) || !f.verify(&space) {
        return Err(mismatch("constructed function does not norm the system"));
    }
    let on_n: Map<String, Value> = partial
        .values()
        .iter()
        .map(|(&p, v)| (space.label(p).to_owned(), rat(v)))
        .collect();
    let body = json!({
        "command": "norming",
        "on_n": on_n,
        "base_pinned": partial.base_pinned(),
        "upper": labelled_values(&space, upper.values()),
        "lower": labelled_values(&space, lower.values()),
        "extensions_agree": upper.values() == lower.values(),
        "norming": function_to_json(&space, &f),
    });
    Ok(Report::verdict(true, body))
}

fn cmd_gateaux_eps(args: &SystemArgs, eps: &str) -> Res<Report> {
    let (space, system) = load_system(args)?;
    let eps = eps_arg(eps)?;
    let report = match check_gateaux_eps(&space, &system, &eps) {
        Ok(r) => r,
        Err(e) => return not_attaining(&space, &system, "gateaux-eps", e),
    };
    let body = json!({
        "command": "gateaux-eps",
        "eps": rat(&eps),
        "cond_i": report.cond_i.iter().map(|f| json!({
            "pairs": [f.j + 1, f.k + 1],
            "round_trip": rat(&f.round_trip),
        })).collect::<Vec<_>>(),
        "cond_ii": report.cond_ii.iter().map(|f| json!({
            "point": space.label(f.point),
            "closest": [space.label(f.s), space.label(f.t)],
            "slack": rat(&f.slack),
        })).collect::<Vec<_>>(),
        "holds": report.is_empty(),
    });
    Ok(Report::verdict(report.is_empty(), body))
}

fn verdict_json(space: &FiniteMetricSpace, system: &MoleculeSystem, v: &DiffVerdict) -> Value {
    match v {
        DiffVerdict::Frechet { norming, coverage } => {
            let cov: Map<String, Value> = coverage
                .iter()
                .map(|(&p, &(s, t))| {
                    (
                        space.label(p).to_owned(),
                        json!([space.label(s), space.label(t)]),
                    )
                })
                .collect();
            json!({
                "kind": "Frechet",
                "norming": function_to_json(space, norming),
                "coverage": cov,
            })
        }
        DiffVerdict::NotGateaux(failure) => {
            let failure = match failure {
                Failure::NotAttaining(w) => json!({
                    "type": "NotAttaining",
                    "witness": witness_to_json(space, system.pairs(), w),
                }),
                Failure::NonUniqueOnN {
                    j,
                    k,
                    round_trip,
                    alternatives,
                } => json!({
                    "type": "NonUniqueOnN",
                    "pairs": [j + 1, k + 1],
                    "round_trip": rat(round_trip),
                    "alternatives": alternatives.iter().map(|g| function_to_json(space, g)).collect::<Vec<_>>(),
                }),
                Failure::Uncovered {
                    point,
                    slack,
                    alternatives,
                } => json!({
                    "type": "Uncovered",
                    "point": space.label(*point),
                    "slack": rat(slack),
                    "alternatives": alternatives.iter().map(|g| function_to_json(space, g)).collect::<Vec<_>>(),
                }),
            };
            json!({ "kind": "NotGateaux", "failure": failure })
        }
    }
}

fn cmd_decide(args: &SystemArgs, oracle: bool) -> Res<Report> {
    let (space, system) = load_system(args)?;
    if oracle {
        oracle_points(&space)?;
    }
    let verdict = decide(&space, &system)?;
    verdict.verify(&space, &system).map_err(Fail::Mismatch)?;
    let mut body = verdict_json(&space, &system, &verdict);
    body["command"] = json!("decide");
    if oracle {
        if brute_norming_uniqueness(&space, &system)? != verdict.is_frechet() {
            return Err(mismatch("norming-uniqueness oracle disagrees"));
        }
        body["oracle"] = json!("agree");
    }
    Ok(Report::verdict(verdict.is_frechet(), body))
}

fn cmd_coverage_prefix(args: &SystemArgs, eps: &str) -> Res<Report> {
    let (space, system) = load_system(args)?;
    let eps = eps_arg(eps)?;
    let prefix = match coverage_eps_prefix(&space, &system, &eps) {
        Ok(p) => p,
        Err(e) => return not_attaining(&space, &system, "coverage-prefix", e),
    };
    let body = json!({
        "command": "coverage-prefix",
        "eps": rat(&eps),
        "pairs": system.len(),
        "prefix": prefix,
    });
    Ok(Report::verdict(prefix.is_some(), body))
}

fn cmd_l1(args: &SystemArgs, cap: usize) -> Res<Report> {
    let (space, system) = load_system(args)?;
    let pairs = system.pairs();
    let verdict = l1_basis_check(&space, pairs, cap)?;
    let mut body = json!({
        "command": "l1-check",
        "pairs": system.len(),
        "isometric_l1": verdict.is_isometric(),
    });
    if let L1Verdict::Fails { flipped, witness } = &verdict {
        let oriented = apply_orientation(pairs, flipped);
        let beta = beta_matrix(&space, &oriented)?;
        if !witness.verify(&beta) {
            return Err(mismatch("orientation witness does not re-sum"));
        }
        body["orientation"] = pair_labels(&space, &oriented);
        body["witness"] = witness_to_json(&space, &oriented, witness);
    }
    Ok(Report::verdict(verdict.is_isometric(), body))
}

fn cmd_gen(kind: GenKind, size: usize, seed: u64, profile: GenProfile) -> Res<Report> {
    let kind = match kind {
        GenKind::Star => Kind::Star,
        GenKind::C0 => Kind::C0Truncation,
        GenKind::Line => Kind::Line,
        GenKind::Random => Kind::Random,
    };
    let profile = match profile {
        GenProfile::Generic => Profile::Generic,
        GenProfile::NearDegenerate => Profile::NearDegenerate,
    };
    let points = match kind {
        Kind::Star | Kind::C0Truncation => size.saturating_add(1),
        Kind::Line | Kind::Random => size,
    };
    check_size(points)?;
    let space = generate(&GeneratorSpec {
        kind,
        size,
        seed,
        profile,
    })?;
    Ok(Report::verdict(true, space_to_json(&space)))
}

fn cmd_stability(args: &SystemArgs, g: Option<&Path>, eps: &str) -> Res<Report> {
    let (space, system) = load_system(args)?;
    let eps = eps_arg(eps)?;
    let ctx = StabilityContext::new(&space, &system)?;
    let g = match g {
        Some(path) => parse_function(&space, &read_json(path)?)?,
        None => ctx.norming().clone(),
    };
    let report = ctx.check(&g, &eps)?;
    let bound = ctx.bound();
    let body = json!({
        "command": "stability",
        "eps": rat(&eps),
        "theta": rat(&bound.theta),
        "diameter": rat(&bound.diameter),
        "n": bound.n,
        "K": rat(&bound.k),
        "min_weight": rat(ctx.min_weight()),
        "g_of_mu": rat(&report.g_of_mu),
        "hypothesis": report.hypothesis,
        "distance": rat(&report.distance),
        "bound": rat(&report.bound),
        "holds": report.holds,
    });
    Ok(Report::verdict(report.holds, body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        let out = run(["lipfree", "frobnicate"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("Usage"));
        assert!(out.stdout.is_empty());
    }

    #[test]
    fn help_exits_zero() {
        let out = run(["lipfree", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("decide"));
    }

    #[test]
    fn gen_star_is_valid_json() {
        let out = run(["lipfree", "gen", "--kind", "star", "--size", "2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["labels"], json!(["0", "1", "2"]));
        assert_eq!(v["dist"][1][2], json!("2"));
    }

    #[test]
    fn text_format() {
        let out = run([
            "lipfree", "gen", "--kind", "line", "--size", "2", "--format", "text",
        ]);
        assert_eq!(out.code, 0);
        assert_eq!(
            out.stdout,
            "base: 0\ndist:\n  - 0 1\n  - 1 0\nlabels: 0 1\n"
        );
    }

    #[test]
    fn missing_file_is_input_error() {
        let out = run(["lipfree", "validate", "--space", "/nonexistent/space.json"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("cannot read"));
    }

    #[test]
    fn bad_eps_is_input_error() {
        assert!(matches!(eps_arg("0.5"), Err(Fail::Input(_))));
        assert!(eps_arg("1/2").is_ok());
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert!(matches!(
            Fail::from(Error::Certificate("x".into())),
            Fail::Mismatch(_)
        ));
        assert!(matches!(
            Fail::from(Error::Parse("x".into())),
            Fail::Input(_)
        ));
        assert!(matches!(
            Fail::from(Error::ResourceLimit {
                what: "points",
                got: 2,
                limit: 1
            }),
            Fail::Input(_)
        ));
    }
}
