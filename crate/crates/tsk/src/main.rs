//! `tsk`: command-line front end for torsheaf.
//!
//! Every command prints one canonical JSON object (sorted keys, exact
//! integers) on stdout. Exit codes: 0 success, 1 invalid input, 2 no result,
//! 3 and 4 internal cross-check failures.

mod selftest;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use torsheaf::chern_engine::chern_general;
use torsheaf::doc::{canonical, SheafDocument};
use torsheaf::multifilt::{big_json, factorize, recompose, subspace_to_json, ElementaryInjection};
use torsheaf::obstruct::obstruction_verdict;
use torsheaf::prescribe::{
    family_p4_even, family_p4_odd, family_p5, family_pn, run, solve_p_closed_p4, solve_p_closed_p5, BuildMode,
    FamilyRun, Infeasible, PrescriptionProblem,
};
use torsheaf::reflexive_r2::{discriminant, R2Filtration, Stability};
use torsheaf::{Error, TruncIntPoly};

#[derive(Parser)]
#[command(name = "tsk", version, about = "Exact Chern classes, stability and prescriptions for equivariant sheaves on P^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Resolution,
    Klyachko,
    Symmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    P4Odd,
    P4Even,
    P5,
    Pn,
}

#[derive(clap::Args, Clone, Copy)]
struct BuildArgs {
    /// Replay and check every drop instead of a sample per stage.
    #[arg(long)]
    full: bool,
    /// Drops checked at the start of each stage in sampled mode.
    #[arg(long, default_value_t = 16)]
    sample: u64,
}

impl BuildArgs {
    fn mode(&self) -> BuildMode {
        if self.full {
            BuildMode::Full
        } else {
            BuildMode::Sampled { per_stage: self.sample }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Chern polynomial of a sheaf document.
    Chern {
        /// Document path, or `-` for stdin.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Slope stability of the reflexive hull, with slope and discriminant.
    Stability {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Elementary steps from F down to E.
    Factorize { e: String, f: String },
    /// Solve for the drop counts from start data and verify the result.
    Prescribe {
        #[arg(long)]
        n: usize,
        /// Comma-separated `c_0,...,c_n`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        start: Vec<i64>,
        /// Also evaluate the closed forms on P^4 and P^5 and compare.
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Reproduce one of the explicit families.
    Family {
        #[arg(long, value_enum)]
        which: Which,
        /// A single value `T` or a range `A..B` (inclusive).
        #[arg(long, default_value = "1")]
        t: String,
        /// Dimension for `pn`.
        #[arg(long)]
        n: Option<usize>,
        /// Largest multiplier tried for `pn`.
        #[arg(long)]
        bound: Option<i64>,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Smoothability obstruction verdict for a torsion-free sheaf.
    Obstruct {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Check a document against the multifiltration axioms.
    Validate {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Randomized cross-checks.
    #[command(hide = true)]
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

/// A finished command: payload plus exit code.
struct Outcome {
    code: u8,
    payload: Value,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Outcome { code: 0, payload }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SearchExhausted(_) => 2,
        Error::Consistency(_) => 3,
        _ => 1,
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome { code: exit_code(e), payload: json!({"error": e.to_string()}) }
}

fn read_input(path: &str) -> Result<String, Error> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn load(path: &str) -> Result<SheafDocument, Error> {
    SheafDocument::parse(&read_input(path)?)
}

fn poly(p: &TruncIntPoly) -> Value {
    json!(p.to_string())
}

fn cmd_chern(input: &str, method: Method) -> Result<Outcome, Error> {
    let doc = load(input)?;
    let m = doc.to_multifiltration();
    m.ensure_valid()?;
    let reflexive = doc.as_reflexive();
    let mut methods = Map::new();
    let want = |x: Method| method == Method::Auto || method == x;
    if want(Method::Klyachko) {
        methods.insert("klyachko".into(), poly(&chern_general(&m)?));
    }
    if want(Method::Resolution) {
        match reflexive {
            Some(f) => {
                methods.insert("resolution".into(), poly(&f.chern_total()));
            }
            None if method == Method::Resolution => {
                return Err(Error::Unsupported("the resolution formula needs reflexive data".into()))
            }
            None => {}
        }
    }
    if want(Method::Symmetric) {
        match reflexive.and_then(R2Filtration::chern_symmetric) {
            Some(c) => {
                methods.insert("symmetric".into(), poly(&c));
            }
            None if method == Method::Symmetric => {
                return Err(Error::Unsupported(
                    "the symmetric formula needs b-normalized reflexive data that is not locally free".into(),
                ))
            }
            None => {}
        }
    }
    let first = methods.values().next().cloned().expect("klyachko always applies");
    if methods.values().any(|v| *v != first) {
        return Ok(Outcome { code: 3, payload: json!({"error": "methods disagree", "methods": methods}) });
    }
    Ok(Outcome::ok(json!({"chern": first, "methods": methods})))
}

fn cmd_stability(input: &str) -> Result<Outcome, Error> {
    let doc = load(input)?;
    let (hull, chern, basis) = match doc.as_reflexive() {
        Some(f) => (f.clone(), f.chern_total(), "reflexive data"),
        None => {
            let m = doc.to_multifiltration();
            m.ensure_valid()?;
            if m.rank() != 2 {
                return Err(Error::Unsupported(format!("stability is implemented for rank 2, got {}", m.rank())));
            }
            (R2Filtration::from_multifiltration(&m.reflexive_hull())?, chern_general(&m)?, "reflexive hull")
        }
    };
    let verdict = hull.stability();
    let delta = discriminant(&chern);
    let bg = match verdict {
        Stability::Unstable => "not applicable",
        _ if delta >= BigInt::from(0) => "holds",
        _ => "violated",
    };
    let code = if bg == "violated" { 3 } else { 0 };
    Ok(Outcome {
        code,
        payload: json!({
            "stability": verdict.name(),
            "stability_basis": basis,
            "slope": hull.slope().to_string(),
            "delta": big_json(&delta),
            "bogomolov_gieseker": bg,
            "summary": format!("{}, Δ={}", verdict.name(), delta),
        }),
    })
}

fn step_json(s: &ElementaryInjection) -> Value {
    json!({
        "k0": s.k0,
        "sigma0": s.sigma0.rays(),
        "m0": s.m0,
        "m_big_sigma": s.m_big_sigma,
        "saturated": s.saturated,
        "target": subspace_to_json(&s.dropped),
    })
}

fn cmd_factorize(e: &str, f: &str) -> Result<Outcome, Error> {
    let e = load(e)?.to_multifiltration();
    let f = load(f)?.to_multifiltration();
    e.ensure_valid()?;
    f.ensure_valid()?;
    if !e.is_contained_in(&f)? {
        return Err(Error::Containment("E is not contained in F".into()));
    }
    let steps = factorize(&e, &f)?;
    let recomposes = recompose(&f, &steps)? == e;
    Ok(Outcome {
        code: if recomposes { 0 } else { 4 },
        payload: json!({
            "count": steps.len(),
            "steps": steps.iter().map(step_json).collect::<Vec<_>>(),
            "recomposes": recomposes,
        }),
    })
}

fn infeasible_json(why: &Infeasible) -> Value {
    let (kind, q, value) = match why {
        Infeasible::NonInteger { q, value } => ("NonInteger", q, json!(value.to_string())),
        Infeasible::Negative { q, value } => ("Negative", q, big_json(value)),
    };
    json!({"feasible": false, "reason": format!("{kind} at q={q}"), "detail": why.to_string(), "q": q, "value": value})
}

fn run_json(r: &FamilyRun) -> Value {
    let mut m = r.certificate.to_json();
    m.insert("feasible".into(), json!(true));
    m.insert("validated".into(), json!(r.validated()));
    m.insert("total_steps".into(), big_json(&r.built.total_steps));
    m.insert("checked_steps".into(), json!(r.built.checked.len()));
    Value::Object(m)
}

fn cmd_prescribe(n: usize, start: Vec<i64>, closed_form: bool, mode: BuildMode) -> Result<Outcome, Error> {
    let problem = PrescriptionProblem::new(n, start)?;
    let result = run(&problem, mode)?;
    let mut payload = match &result {
        Ok(r) => run_json(r),
        Err(why) => infeasible_json(why),
    };
    if closed_form {
        let c = problem.start_chern();
        let closed = match n {
            4 => Some(solve_p_closed_p4(&c, problem.c_rho0())?),
            5 if problem.c_rho0() == 1 => Some(solve_p_closed_p5(&c)?),
            _ => None,
        };
        if let Some(closed) = closed {
            let shown: Vec<Value> = closed.iter().map(|x| json!(x.to_string())).collect();
            payload["closed_form"] = Value::Array(shown);
            if let Ok(r) = &result {
                let solved: Vec<String> = r.solution.p.iter().map(ToString::to_string).collect();
                let closed: Vec<String> = closed.iter().map(ToString::to_string).collect();
                if solved != closed {
                    return Ok(Outcome { code: 3, payload });
                }
            }
        }
    }
    Ok(Outcome { code: if result.is_ok() { 0 } else { 2 }, payload })
}

fn parse_t(t: &str) -> Result<Vec<i64>, Error> {
    let bad = || Error::Parse(format!("--t expects T or A..B, got {t:?}"));
    let num = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    match t.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(t)?]),
    }
}

fn cmd_family(which: Which, t: &str, n: Option<usize>, bound: Option<i64>, mode: BuildMode) -> Result<Outcome, Error> {
    let with_t = |t: i64, v: Value| {
        let mut v = v;
        v["t"] = json!(t);
        v
    };
    let mut all_valid = true;
    let payload = match which {
        Which::P4Odd | Which::P4Even => {
            let mut runs = Vec::new();
            for t in parse_t(t)? {
                let r = if which == Which::P4Odd { family_p4_odd(t, mode)? } else { family_p4_even(t, mode)? };
                all_valid &= r.validated();
                runs.push(with_t(t, run_json(&r)));
            }
            let name = if which == Which::P4Odd { "p4-odd" } else { "p4-even" };
            json!({"family": name, "runs": runs})
        }
        Which::P5 => {
            let mut runs = Vec::new();
            for t in parse_t(t)? {
                let report = family_p5(t, mode)?;
                let show = |r: &Result<FamilyRun, String>| match r {
                    Ok(run) => run_json(run),
                    Err(why) => json!({"feasible": false, "detail": why}),
                };
                all_valid &= report.validated().contains(&"printed");
                runs.push(json!({
                    "t": t,
                    "printed": show(&report.printed),
                    "intro": show(&report.intro),
                    "validated": report.validated(),
                }));
            }
            json!({"family": "p5", "runs": runs})
        }
        Which::Pn => {
            let n = n.ok_or_else(|| Error::Parse("--which pn needs --n".into()))?;
            let found = family_pn(n, bound, mode)?;
            all_valid &= found.run.validated();
            json!({"family": "pn", "n": n, "multiplier": found.multiplier, "certificate": run_json(&found.run)})
        }
    };
    Ok(Outcome { code: if all_valid { 0 } else { 3 }, payload })
}

fn cmd_obstruct(input: &str) -> Result<Outcome, Error> {
    let m = load(input)?.to_multifiltration();
    Ok(Outcome::ok(Value::Object(obstruction_verdict(&m)?.to_json())))
}

fn cmd_validate(input: &str) -> Result<Outcome, Error> {
    let doc = load(input)?;
    let m = doc.to_multifiltration();
    let violations: Vec<String> = m.validate().iter().map(ToString::to_string).collect();
    let valid = violations.is_empty();
    let mut payload = json!({
        "kind": doc.kind(),
        "n": doc.n(),
        "rank": doc.rank(),
        "valid": valid,
        "violations": violations,
    });
    if valid {
        payload["reflexive"] = json!(m.is_reflexive());
    }
    Ok(Outcome { code: if valid { 0 } else { 1 }, payload })
}

fn dispatch(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Chern { input, method } => cmd_chern(&input, method),
        Command::Stability { input } => cmd_stability(&input),
        Command::Factorize { e, f } => cmd_factorize(&e, &f),
        Command::Prescribe { n, start, closed_form, build } => cmd_prescribe(n, start, closed_form, build.mode()),
        Command::Family { which, t, n, bound, build } => cmd_family(which, &t, n, bound, build.mode()),
        Command::Obstruct { input } => cmd_obstruct(&input),
        Command::Validate { input } => cmd_validate(&input),
        Command::Selftest { seed, count } => selftest::run(seed, count),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = dispatch(cli).unwrap_or_else(|e| failure(&e));
    println!("{}", canonical(&out.payload));
    if out.code != 0 {
        if let Some(msg) = out.payload.get("error") {
            eprintln!("tsk: {}", msg.as_str().unwrap_or_default());
        }
    }
    ExitCode::from(out.code)
}
