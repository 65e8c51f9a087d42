//! The `difftorsor` command line: JSON reports on standard output, exit status 0 on
//! success, 1 on exhausted searches or unsupported questions, 2 on bad input.

use std::fs;

use clap::{Args, Parser, Subcommand};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::diag_group::{self, Answer, DiagGroup, Factor, GroupError};
use crate::ffield::{Caps, FieldError, FieldTower, KnElem, Matrix, TowerElem};
use crate::solvers::linear::unfold_linear_solution;
use crate::solvers::mult::default_max_n;
use crate::solvers::{
    fold_linear, h1_canonical, lang_solve, mult_solve, solve_additive, unfold_mult_system,
    AdditiveEq, Attempt, Exhausted, Found, LinDiffEq, MultTorsor, SolveError, SolveOutcome, Witness,
};
use crate::zsig::SigmaPoly;
use crate::zsig_module::{
    has_z_torsion, one_relator_hull, rank_z, rank_zsigma, ModuleError, ModuleJson, RankZ,
    ZSigmaModule,
};
use crate::ffield::tower::{DEFAULT_DLOG_CAP, DEFAULT_MAX_LEVEL};

#[derive(Parser, Debug)]
#[command(name = "difftorsor", version, about = "Difference groups, their torsors, and Frobenius solvers")]
pub struct Cli {
    /// Indented output instead of one line of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Highest tower level any solver may construct.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LEVEL)]
    pub max_level: usize,
    /// Largest unit group on which discrete logarithms are computed.
    #[arg(long, global = true, default_value_t = DEFAULT_DLOG_CAP)]
    pub dlog_cap: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct GroupInput {
    /// One-relator group `{g : g^alpha = 1}`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Module presentation file.
    #[arg(long)]
    pub module: Option<String>,
}

#[derive(Args, Debug)]
pub struct TowerArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub e: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// sigma-dimension, order, connectedness and almost-simplicity.
    GroupAnalyze(GroupInput),
    /// Presentation of G_n, the group read over sigma^n.
    GroupGn {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long)]
        n: usize,
    },
    /// Composition factors of a one-relator group.
    GroupJh(GroupInput),
    /// Ranks over Z[s] and over Z, and Z-torsion.
    ModuleRank(GroupInput),
    /// One-relator hull of the ideal generated by the given polynomials.
    Hull {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// sigma^d(Y) = A Y by the Lang map.
    SolveLang {
        #[arg(long)]
        system: String,
    },
    /// Multiplicative torsor x^beta = a, searched over k^[n].
    SolveMult {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        system: String,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// sigma^m(x) + ... + lambda_0 x = a.
    SolveAdditive {
        #[arg(long)]
        system: String,
    },
    /// The folded linear system sigma^{dl}(Y) = A_l Y.
    Fold {
        #[arg(long)]
        system: String,
        #[arg(long)]
        l: usize,
    },
    /// Linear systems: fold, solve, and unfold to a k^[dl] solution. Multiplicative
    /// systems: the system over sigma^n.
    Unfold {
        #[arg(long)]
        system: String,
        /// Folding factor for linear systems, or n for multiplicative ones.
        #[arg(long)]
        l: usize,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        e: Option<usize>,
    },
    /// Canonical class of the torsor x^alpha = a at the level of a.
    H1 {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Irreducible moduli of levels 1..=max_t.
    Moduli {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        max_t: usize,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    /// Bad input: exit status 2.
    Input(String),
    /// The report is still printed with exit status 1.
    Soft(serde_json::Value),
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

impl From<ModuleError> for Failure {
    fn from(e: ModuleError) -> Self {
        input_err(e)
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        input_err(e)
    }
}

#[derive(Serialize, Clone, Copy)]
struct CapsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    max_n: Option<usize>,
    max_level: usize,
    dlog_cap: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearJson {
    p: u64,
    e: usize,
    d: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct LinearOut {
    p: u64,
    e: usize,
    d: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct MultJson {
    exponents: Vec<Vec<String>>,
    constants: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AdditiveJson {
    p: u64,
    e: usize,
    lambdas: Vec<String>,
    a: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnySystem {
    Linear(LinearJson),
    Mult(MultJson),
}

#[derive(Serialize)]
struct FoundReport<W: Serialize> {
    status: &'static str,
    n: usize,
    level: usize,
    witness: W,
    caps: CapsReport,
}

#[derive(Serialize)]
struct AttemptReport {
    n: usize,
    reason: String,
}

#[derive(Serialize)]
struct ExhaustedReport {
    status: &'static str,
    tried_n: usize,
    max_level: usize,
    attempts: Vec<AttemptReport>,
    caps: CapsReport,
}

#[derive(Serialize)]
struct ModuleRankReport {
    generators: usize,
    rank_zsigma: usize,
    rank_z: RankZ,
    z_torsion: Answer,
}

#[derive(Serialize)]
struct JhReport {
    sign: i8,
    factors: Vec<Factor>,
    order: u64,
}

#[derive(Serialize)]
struct H1Report {
    alpha: String,
    a: String,
    class: String,
    caps: CapsReport,
}

#[derive(Serialize)]
struct ModulusRow {
    t: usize,
    degree: usize,
    modulus: Vec<u64>,
}

#[derive(Serialize)]
struct ModuliReport {
    p: u64,
    e: usize,
    moduli: Vec<ModulusRow>,
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let pretty = cli.pretty;
    let render = |v: &serde_json::Value| {
        let mut s = if pretty {
            serde_json::to_string_pretty(v).expect("JSON values serialize")
        } else {
            serde_json::to_string(v).expect("JSON values serialize")
        };
        s.push('\n');
        s
    };
    match dispatch(&cli) {
        Ok(v) => Outcome { code: 0, stdout: render(&v), stderr: String::new() },
        Err(Failure::Soft(v)) => Outcome { code: 1, stdout: render(&v), stderr: String::new() },
        Err(Failure::Input(msg)) => {
            Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
        }
    }
}

fn to_value<S: Serialize>(s: &S) -> serde_json::Value {
    serde_json::to_value(s).expect("reports serialize")
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn read_json<D: serde::de::DeserializeOwned>(path: &str) -> Result<D, Failure> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn parse_poly(text: &str) -> Result<SigmaPoly, Failure> {
    text.parse::<SigmaPoly>().map_err(|e| Failure::Input(format!("{text:?}: {e}")))
}

fn group_input(input: &GroupInput) -> Result<DiagGroup, Failure> {
    if let Some(a) = &input.alpha {
        let alpha = parse_poly(a)?;
        return DiagGroup::one_relator(alpha).map_err(input_err);
    }
    let path = input.module.as_deref().expect("clap requires one input");
    let j: ModuleJson = read_json(path)?;
    Ok(DiagGroup::new(ZSigmaModule::from_json(&j)?))
}

fn tower(p: u64, e: usize, cli: &Cli) -> Result<FieldTower, Failure> {
    Ok(FieldTower::with_caps(p, e, Caps { max_level: cli.max_level, dlog_cap: cli.dlog_cap })?)
}

fn caps(cli: &Cli, max_n: Option<usize>) -> CapsReport {
    CapsReport { max_n, max_level: cli.max_level, dlog_cap: cli.dlog_cap }
}

fn parse_elems(tw: &FieldTower, texts: &[String]) -> Result<Vec<TowerElem>, Failure> {
    texts.iter().map(|s| tw.parse_elem(s).map_err(|e| Failure::Input(format!("{s:?}: {e}")))).collect()
}

/// Brings every entry to the lcm of their levels.
fn common_level(tw: &FieldTower, xs: Vec<TowerElem>) -> Result<Vec<TowerElem>, Failure> {
    let t = xs.iter().fold(1usize, |acc, x| acc.lcm(&x.level));
    Ok(xs.iter().map(|x| tw.embed(x, t)).collect::<Result<_, _>>()?)
}

fn linear_system(j: &LinearJson, cli: &Cli) -> Result<(FieldTower, LinDiffEq), Failure> {
    let tw = tower(j.p, j.e, cli)?;
    let m = j.a.len();
    if m == 0 || j.a.iter().any(|r| r.len() != m) {
        return Err(Failure::Input("A must be a nonempty square matrix".into()));
    }
    let flat: Vec<String> = j.a.iter().flatten().cloned().collect();
    let entries = common_level(&tw, parse_elems(&tw, &flat)?)?;
    let level = entries[0].level;
    let rows = entries.chunks(m).map(|c| c.to_vec()).collect();
    let eq = LinDiffEq::new(&tw, Matrix::from_rows(level, rows), j.d).map_err(input_err)?;
    Ok((tw, eq))
}

fn mult_system(tw: &FieldTower, j: &MultJson) -> Result<MultTorsor, Failure> {
    let exponents = j
        .exponents
        .iter()
        .map(|row| row.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let constants = parse_elems(tw, &j.constants)?;
    MultTorsor::new(tw, exponents, constants).map_err(input_err)
}

fn matrix_text(tw: &FieldTower, m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| tw.format_elem(x)).collect()).collect()
}

fn kn_text(tw: &FieldTower, x: &KnElem) -> Vec<String> {
    x.components.iter().map(|c| tw.format_elem(c)).collect()
}

fn found_value(tw: &FieldTower, f: &Found, caps: CapsReport) -> serde_json::Value {
    let witness = match &f.witness {
        Witness::Matrix(m) => to_value(&matrix_text(tw, m)),
        Witness::Units(xs) => to_value(&xs.iter().map(|x| kn_text(tw, x)).collect::<Vec<_>>()),
        Witness::Elem(x) => to_value(&tw.format_elem(x)),
    };
    to_value(&FoundReport { status: "found", n: f.n, level: f.level, witness, caps })
}

fn exhausted_value(x: &Exhausted, caps: CapsReport) -> serde_json::Value {
    to_value(&ExhaustedReport {
        status: "exhausted",
        tried_n: x.tried_n,
        max_level: x.max_level,
        attempts: x.attempts.iter().map(|a| AttemptReport { n: a.n, reason: a.reason.clone() }).collect(),
        caps,
    })
}

/// Cap overruns become exhausted reports; anything else is an input error.
fn solver_failure(e: SolveError, caps: CapsReport) -> Failure {
    match e {
        SolveError::Field(FieldError::CapExceeded { requested, cap }) => {
            let x = Exhausted {
                tried_n: 1,
                max_level: cap,
                attempts: vec![Attempt { n: 1, reason: format!("level {requested} exceeds the cap") }],
            };
            Failure::Soft(exhausted_value(&x, caps))
        }
        SolveError::Field(e @ FieldError::DlogCapExceeded { .. }) => Failure::Soft(
            serde_json::json!({"status": "exhausted", "reason": e.to_string(), "caps": caps}),
        ),
        e => input_err(e),
    }
}

fn single_level(
    tw: &FieldTower,
    r: Result<Found, SolveError>,
    caps: CapsReport,
) -> Result<serde_json::Value, Failure> {
    r.map(|f| found_value(tw, &f, caps)).map_err(|e| solver_failure(e, caps))
}

fn soft_if_unsupported(v: serde_json::Value, answers: &[Answer]) -> Result<serde_json::Value, Failure> {
    if answers.contains(&Answer::Unsupported) {
        Err(Failure::Soft(v))
    } else {
        Ok(v)
    }
}

fn unsupported(reason: String) -> Failure {
    Failure::Soft(serde_json::json!({"status": "unsupported", "reason": reason}))
}

fn dispatch(cli: &Cli) -> Result<serde_json::Value, Failure> {
    match &cli.command {
        Command::GroupAnalyze(input) => {
            let g = group_input(input)?;
            let r = diag_group::analyze(&g);
            soft_if_unsupported(to_value(&r), &[r.connected, r.almost_simple])
        }
        Command::GroupGn { input, n } => {
            if *n == 0 {
                return Err(Failure::Input("n must be at least 1".into()));
            }
            let g = group_input(input)?;
            Ok(to_value(&diag_group::gn(&g, *n).module.to_json()))
        }
        Command::GroupJh(input) => {
            let g = group_input(input)?;
            match diag_group::jordan_holder(&g) {
                Ok(s) => Ok(to_value(&JhReport { sign: s.sign, order: s.order(), factors: s.factors })),
                Err(e @ (GroupError::UnsupportedShape(_) | GroupError::NotPositiveOrder)) => {
                    Err(unsupported(e.to_string()))
                }
                Err(e) => Err(input_err(e)),
            }
        }
        Command::ModuleRank(input) => {
            let g = group_input(input)?;
            let m = &g.module;
            let z_torsion = has_z_torsion(m).map_or(Answer::Unsupported, Answer::from);
            let r = ModuleRankReport {
                generators: m.num_generators(),
                rank_zsigma: rank_zsigma(m),
                rank_z: rank_z(m),
                z_torsion,
            };
            soft_if_unsupported(to_value(&r), &[z_torsion])
        }
        Command::Hull { gens } => {
            let gens = gens.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(to_value(&one_relator_hull(&gens)?))
        }
        Command::SolveLang { system } => {
            let j: LinearJson = read_json(system)?;
            let (tw, eq) = linear_system(&j, cli)?;
            single_level(&tw, lang_solve(&tw, &eq), caps(cli, None))
        }
        Command::SolveMult { tower: ta, system, max_n } => {
            let tw = tower(ta.p, ta.e, cli)?;
            let j: MultJson = read_json(system)?;
            let sys = mult_system(&tw, &j)?;
            let max_n = max_n.unwrap_or_else(|| default_max_n(&sys));
            if max_n == 0 {
                return Err(Failure::Input("max-n must be at least 1".into()));
            }
            let c = caps(cli, Some(max_n));
            match mult_solve(&tw, &sys, max_n) {
                Ok(SolveOutcome::Found(f)) => Ok(found_value(&tw, &f, c)),
                Ok(SolveOutcome::Exhausted(x)) => Err(Failure::Soft(exhausted_value(&x, c))),
                Err(e) => Err(solver_failure(e, c)),
            }
        }
        Command::SolveAdditive { system } => {
            let j: AdditiveJson = read_json(system)?;
            let tw = tower(j.p, j.e, cli)?;
            let lambdas = parse_elems(&tw, &j.lambdas)?;
            let a = tw.parse_elem(&j.a).map_err(|e| Failure::Input(format!("{:?}: {e}", j.a)))?;
            let eq = AdditiveEq::new(&tw, lambdas, a).map_err(input_err)?;
            single_level(&tw, solve_additive(&tw, &eq), caps(cli, None))
        }
        Command::Fold { system, l } => {
            if *l == 0 {
                return Err(Failure::Input("l must be at least 1".into()));
            }
            let j: LinearJson = read_json(system)?;
            let (tw, eq) = linear_system(&j, cli)?;
            let folded = fold_linear(&tw, &eq, *l);
            Ok(to_value(&LinearOut { p: j.p, e: j.e, d: folded.d, a: matrix_text(&tw, &folded.a) }))
        }
        Command::Unfold { system, l, p, e } => {
            if *l == 0 {
                return Err(Failure::Input("l must be at least 1".into()));
            }
            let j: AnySystem = read_json(system)?;
            match j {
                AnySystem::Linear(j) => {
                    let (tw, eq) = linear_system(&j, cli)?;
                    let folded = fold_linear(&tw, &eq, *l);
                    let c = caps(cli, None);
                    let f = match lang_solve(&tw, &folded) {
                        Ok(f) => f,
                        Err(err) => return Err(solver_failure(err, c)),
                    };
                    let Witness::Matrix(z) = &f.witness else {
                        unreachable!("the Lang solver returns a matrix")
                    };
                    let y = unfold_linear_solution(&tw, z, &eq, *l).map_err(input_err)?;
                    let witness: Vec<Vec<Vec<String>>> =
                        y.components.iter().map(|m| matrix_text(&tw, m)).collect();
                    Ok(to_value(&FoundReport { status: "found", n: eq.d * l, level: f.level, witness, caps: c }))
                }
                AnySystem::Mult(j) => {
                    let Some(p) = p else {
                        return Err(Failure::Input("multiplicative systems need --p".into()));
                    };
                    let tw = tower(*p, e.unwrap_or(1), cli)?;
                    let sys = mult_system(&tw, &j)?;
                    let out = unfold_mult_system(&tw, &sys, *l);
                    Ok(to_value(&MultJson {
                        exponents: out
                            .exponents
                            .iter()
                            .map(|r| r.iter().map(|f| f.to_string()).collect())
                            .collect(),
                        constants: out.constants.iter().map(|c| tw.format_elem(c)).collect(),
                    }))
                }
            }
        }
        Command::H1 { tower: ta, alpha, a } => {
            let tw = tower(ta.p, ta.e, cli)?;
            let alpha_p = parse_poly(alpha)?;
            let x = tw.parse_elem(a).map_err(|e| Failure::Input(format!("{a:?}: {e}")))?;
            let c = caps(cli, None);
            match h1_canonical(&tw, &alpha_p, &x) {
                Ok(k) => Ok(to_value(&H1Report {
                    alpha: alpha_p.to_string(),
                    a: tw.format_elem(&x),
                    class: tw.format_elem(&k),
                    caps: c,
                })),
                Err(err) => Err(solver_failure(err, c)),
            }
        }
        Command::Moduli { tower: ta, max_t } => {
            let tw = tower(ta.p, ta.e, cli)?;
            let mut moduli = Vec::with_capacity(*max_t);
            for t in 1..=*max_t {
                let lf = tw.level(t)?;
                moduli.push(ModulusRow { t, degree: ta.e * t, modulus: lf.modulus().to_vec() });
            }
            Ok(to_value(&ModuliReport { p: ta.p, e: ta.e, moduli }))
        }
    }
}
