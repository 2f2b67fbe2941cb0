//! Certificates and the explicit families on `P^4`, `P^5` and `P^n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde_json::{json, Map, Value};

use super::build::{build_sequence, BuildMode, BuiltSequence};
use super::{schwarzenberger, solve_p, Infeasible, PrescriptionProblem, PrescriptionSolution, Schwarzenberger};
use crate::comb::factorial;
use crate::error::{Error, Result};
use crate::multifilt::big_json;
use crate::reflexive_r2::{discriminant, Stability};
use crate::TruncIntPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub start_c: Vec<i64>,
    pub p: Vec<BigInt>,
    /// Computed from the final multifiltration.
    pub chern: TruncIntPoly,
    pub hits_target: bool,
    pub delta: BigInt,
    /// Verdict for the reflexive hull, which is the start sheaf.
    pub stability: Stability,
    pub schwarzenberger: Schwarzenberger,
}

impl Certificate {
    /// A stable sheaf with `Δ > 0` has no split semistable deformation.
    pub fn indecomposable_if_smoothable(&self) -> bool {
        self.stability == Stability::Stable && self.delta > BigInt::from(0)
    }

    pub fn to_json(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("n".into(), json!(self.n));
        m.insert("start_c".into(), json!(self.start_c));
        m.insert("p".into(), Value::Array(self.p.iter().map(big_json).collect()));
        m.insert("chern".into(), json!(self.chern.to_string()));
        m.insert("hits_target".into(), json!(self.hits_target));
        m.insert("delta".into(), big_json(&self.delta));
        m.insert("stability".into(), json!(self.stability.name()));
        m.insert("stability_basis".into(), json!("reflexive hull"));
        m.insert("schwarzenberger".into(), json!(self.schwarzenberger.name()));
        m.insert("indecomposable_if_smoothable".into(), json!(self.indecomposable_if_smoothable()));
        m
    }
}

pub fn certify(sol: &PrescriptionSolution, built: &BuiltSequence) -> Result<Certificate> {
    let problem = &sol.problem;
    let chern = built.final_chern.clone();
    Ok(Certificate {
        n: problem.n(),
        start_c: problem.c().to_vec(),
        p: sol.p.clone(),
        hits_target: chern == problem.target(),
        delta: discriminant(&chern),
        stability: problem.start().stability(),
        schwarzenberger: schwarzenberger(&chern.coeff(1), &chern.coeff(2), problem.n())?,
        chern,
    })
}

#[derive(Clone, Debug)]
pub struct FamilyRun {
    pub solution: PrescriptionSolution,
    pub built: BuiltSequence,
    pub certificate: Certificate,
}

impl FamilyRun {
    /// Solved, built, on target, stable and passing every congruence.
    pub fn validated(&self) -> bool {
        let c = &self.certificate;
        c.hits_target && c.stability == Stability::Stable && c.schwarzenberger.is_ok()
    }
}

pub fn run(problem: &PrescriptionProblem, mode: BuildMode) -> Result<std::result::Result<FamilyRun, Infeasible>> {
    let solution = match solve_p(problem) {
        Ok(s) => s,
        Err(why) => return Ok(Err(why)),
    };
    let built = build_sequence(&solution, mode)?;
    let certificate = certify(&solution, &built)?;
    Ok(Ok(FamilyRun { solution, built, certificate }))
}

fn run_known(c: Vec<i64>, mode: BuildMode) -> Result<FamilyRun> {
    let problem = PrescriptionProblem::new(c.len() - 1, c)?;
    run(&problem, mode)?.map_err(|why| Error::Consistency(format!("start data {:?}: {why}", problem.c())))
}

fn check_t(t: i64) -> Result<()> {
    if t < 1 {
        return Err(Error::Range(format!("family parameter t = {t} must be at least 1")));
    }
    Ok(())
}

/// Start data `(1, 6t, 6t, 0, 0)`.
pub fn family_p4_odd(t: i64, mode: BuildMode) -> Result<FamilyRun> {
    check_t(t)?;
    run_known(vec![1, 6 * t, 6 * t, 0, 0], mode)
}

/// Start data `(1, T, T, T, 0)` with `T = 4t + 3`.
pub fn family_p4_even(t: i64, mode: BuildMode) -> Result<FamilyRun> {
    check_t(t)?;
    let big_t = 4 * t + 3;
    run_known(vec![1, big_t, big_t, big_t, 0], mode)
}

/// Both candidate `P^5` families: `(1, 120t, 120t, 0, 0, 0)` and
/// `(1, 12t, 12t, 0, 0, 0)`.
#[derive(Clone, Debug)]
pub struct P5Report {
    pub t: i64,
    pub printed: std::result::Result<FamilyRun, String>,
    pub intro: std::result::Result<FamilyRun, String>,
}

impl P5Report {
    pub fn validated(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.printed.as_ref().is_ok_and(FamilyRun::validated) {
            out.push("printed");
        }
        if self.intro.as_ref().is_ok_and(FamilyRun::validated) {
            out.push("intro");
        }
        out
    }
}

pub fn family_p5(t: i64, mode: BuildMode) -> Result<P5Report> {
    check_t(t)?;
    let attempt = |x: i64| -> Result<std::result::Result<FamilyRun, String>> {
        let problem = PrescriptionProblem::new(5, vec![1, x, x, 0, 0, 0])?;
        Ok(run(&problem, mode)?.map_err(|why| why.to_string()))
    };
    Ok(P5Report { t, printed: attempt(120 * t)?, intro: attempt(12 * t)? })
}

#[derive(Clone, Debug)]
pub struct PnSearch {
    pub multiplier: i64,
    pub run: FamilyRun,
}

/// Default search bound `lcm(1..n) * n!`.
pub fn pn_bound(n: usize) -> BigInt {
    let l = (1..=n as u64).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)));
    l * factorial(n as u64)
}

/// Smallest `m` such that `(1, m, m, 0, ..., 0)` solves with nonnegative
/// integers and passes every congruence.
pub fn family_pn(n: usize, bound: Option<i64>, mode: BuildMode) -> Result<PnSearch> {
    if n < 3 {
        return Err(Error::Range(format!("family_pn needs n >= 3, got {n}")));
    }
    let bound = match bound {
        Some(b) => b,
        None => i64::try_from(pn_bound(n)).map_err(|_| Error::Overflow("search bound".into()))?,
    };
    let mut last = String::from("no candidates");
    for m in 1..=bound {
        let mut c = vec![0i64; n + 1];
        c[0] = 1;
        c[1] = m;
        c[2] = m;
        let problem = PrescriptionProblem::new(n, c)?;
        let sol = match solve_p(&problem) {
            Ok(s) => s,
            Err(why) => {
                last = format!("m = {m}: {why}");
                continue;
            }
        };
        let target = problem.target();
        let sz = schwarzenberger(&target.coeff(1), &target.coeff(2), n)?;
        if !sz.is_ok() {
            last = format!("m = {m}: Schwarzenberger {}", sz.name());
            continue;
        }
        let built = build_sequence(&sol, mode)?;
        let certificate = certify(&sol, &built)?;
        return Ok(PnSearch { multiplier: m, run: FamilyRun { solution: sol, built, certificate } });
    }
    Err(Error::SearchExhausted(format!("no multiplier up to {bound} on P^{n}; last failure {last}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_family_first_member() {
        let r = family_p4_odd(1, BuildMode::Full).unwrap();
        assert_eq!(r.certificate.chern.to_string(), "1 + 13*H + 48*H^2");
        assert_eq!(r.certificate.delta, BigInt::from(23));
        assert_eq!(r.certificate.stability, Stability::Stable);
        assert!(r.validated());
        assert!(r.certificate.indecomposable_if_smoothable());
        let j = Value::Object(r.certificate.to_json());
        assert_eq!(j["p"], json!([18, 240]));
        assert_eq!(j["schwarzenberger"], json!("ok"));
    }

    #[test]
    fn even_family_first_member() {
        let r = family_p4_even(1, BuildMode::Sampled { per_stage: 2 }).unwrap();
        assert_eq!(r.certificate.chern.to_string(), "1 + 22*H + 168*H^2");
        let big_t = BigInt::from(7);
        assert_eq!(r.certificate.delta, BigInt::from(3) * &big_t * &big_t + BigInt::from(6) * &big_t - 1);
        assert_eq!(r.certificate.delta, BigInt::from(188));
        assert!(r.validated());
    }

    #[test]
    fn pn_search_on_p3() {
        let s = family_pn(3, None, BuildMode::Full).unwrap();
        assert!(s.run.validated());
        for m in 1..s.multiplier {
            let problem = PrescriptionProblem::new(3, vec![1, m, m, 0]).unwrap();
            let ok = solve_p(&problem).is_ok() && {
                let t = problem.target();
                schwarzenberger(&t.coeff(1), &t.coeff(2), 3).unwrap().is_ok()
            };
            assert!(!ok);
        }
        assert!(matches!(family_pn(3, Some(1), BuildMode::Full), Err(Error::SearchExhausted(_))));
    }
}
