//! Smoothability obstructions read off the factorization of `E ⊆ E^∨∨`.
//!
//! The theorem is stated for a `b`-normalized hull, so the verdict twists
//! `E` by the hull's normalizing shift first. Whether some `c_i` with
//! `i >= 3` vanishes does not depend on the twist.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::chern_engine::chern_general;
use crate::comb::factorial;
use crate::error::{Error, Result};
use crate::multifilt::{big_json, factorize, ElementaryInjection, Multifiltration};
use crate::reflexive_r2::{Normalization, R2Filtration, Stability};
use crate::TruncIntPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionProfile {
    /// Codimension of the support of `E^∨∨ / E`.
    pub q: usize,
    /// Number of `k`-elementary steps, keyed by `k`.
    pub p: BTreeMap<usize, usize>,
    /// The factorization the counts were read from, starting at the hull.
    pub steps: Vec<ElementaryInjection>,
}

impl TorsionProfile {
    pub fn count(&self, k: usize) -> usize {
        self.p.get(&k).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let p: Map<String, Value> = self.p.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({"q": self.q, "p": p})
    }
}

fn check_rank(e: &Multifiltration) -> Result<()> {
    if e.rank() != 2 {
        return Err(Error::Unsupported(format!("obstructions need rank 2, got rank {}", e.rank())));
    }
    Ok(())
}

pub fn torsion_profile(e: &Multifiltration) -> Result<TorsionProfile> {
    check_rank(e)?;
    e.ensure_valid()?;
    let hull = e.reflexive_hull();
    let steps = factorize(e, &hull)?;
    let mut p = BTreeMap::new();
    for s in &steps {
        *p.entry(s.k0).or_insert(0) += 1;
    }
    let q = *p.keys().next().ok_or_else(|| Error::Degenerate("the sheaf is reflexive".into()))?;
    Ok(TorsionProfile { q, p, steps })
}

/// Coefficient of `H^k` in `log(c(E^∨∨) / c(E))`.
pub fn log_ratio_coeff(e: &Multifiltration, k: usize) -> Result<BigRational> {
    let hull = chern_general(&e.reflexive_hull())?;
    let ratio = hull.mul(&chern_general(e)?.inverse()?)?;
    Ok(ratio.log()?.coeff(k))
}

/// The expected leading term of the log ratio, `(-1)^{q-1} (q-1)! p_q`.
pub fn expected_leading_log(profile: &TorsionProfile) -> BigInt {
    let q = profile.q;
    let v = factorial(q as u64 - 1) * BigInt::from(profile.count(q));
    if q % 2 == 0 {
        -v
    } else {
        v
    }
}

/// The log ratio vanishes below `H^q` and its `H^q` term is
/// `(-1)^{q-1} (q-1)! p_q`.
pub fn leading_log_check(e: &Multifiltration) -> Result<bool> {
    let profile = torsion_profile(e)?;
    let hull = chern_general(&e.reflexive_hull())?;
    let log = hull.mul(&chern_general(e)?.inverse()?)?.log()?;
    let below = (1..profile.q).all(|k| log.coeff(k).is_zero());
    Ok(below && log.coeff(profile.q) == BigRational::from_integer(expected_leading_log(&profile)))
}

/// For a profile with only 2- and `>= 4`-steps, the `H^2` and `H^3` parts
/// of the log ratio in terms of `p_2` and the step weights:
/// `c_2(F) - c_2(E) = -p_2` and
/// `c_3(F) - c_3(E) + c_1 (c_2(E) - c_2(F)) = -2 (Σ m_Σ + p_2)`.
pub fn q2_relations(e: &Multifiltration) -> Result<bool> {
    let profile = torsion_profile(e)?;
    if profile.q != 2 || profile.count(3) != 0 {
        return Err(Error::Precondition(format!("needs q = 2 and p_3 = 0, got {}", profile.to_json())));
    }
    let f = chern_general(&e.reflexive_hull())?;
    let c = chern_general(e)?;
    let p2 = BigInt::from(profile.count(2));
    let weights: BigInt = profile.steps.iter().filter(|s| s.k0 == 2).map(|s| BigInt::from(s.m_big_sigma)).sum();
    let first = f.coeff(2) - c.coeff(2) == -p2.clone();
    let lhs = f.coeff(3) - c.coeff(3) + f.coeff(1) * (c.coeff(2) - f.coeff(2));
    let second = lhs == BigInt::from(-2) * (weights + p2);
    Ok(first && second)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructionCase {
    /// `n >= 4` and `q >= 4`.
    Q4,
    /// `n >= 3`, `q = 2`, `p_3 = 0` and a semistable hull.
    Q2,
}

impl ObstructionCase {
    pub fn name(&self) -> &'static str {
        match self {
            ObstructionCase::Q4 => "Q4",
            ObstructionCase::Q2 => "Q2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotSmoothable { case: ObstructionCase, witness: usize, value: BigInt },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub profile: Option<TorsionProfile>,
    pub hull_stability: Stability,
    /// Chern polynomial of `E` twisted so that its hull is `b`-normalized.
    pub normalized_chern: TruncIntPoly,
    pub verdict: Verdict,
}

impl ObstructionReport {
    pub fn to_json(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("profile".into(), self.profile.as_ref().map_or(Value::Null, TorsionProfile::to_json));
        m.insert("hull_stability".into(), json!(self.hull_stability.name()));
        m.insert("normalized_chern".into(), json!(self.normalized_chern.to_string()));
        match &self.verdict {
            Verdict::NotSmoothable { case, witness, value } => {
                m.insert("verdict".into(), json!("not smoothable"));
                m.insert("case".into(), json!(case.name()));
                m.insert("witness".into(), json!(witness));
                m.insert("witness_value".into(), big_json(value));
            }
            Verdict::Inconclusive { reason } => {
                m.insert("verdict".into(), json!("inconclusive"));
                m.insert("reason".into(), json!(reason));
            }
        }
        m
    }
}

pub fn obstruction_verdict(e: &Multifiltration) -> Result<ObstructionReport> {
    check_rank(e)?;
    e.ensure_valid()?;
    let n = e.n();
    let hull = R2Filtration::from_multifiltration(&e.reflexive_hull())?;
    let normalized = e.twist(&hull.normalizing_shift(Normalization::BZero))?;
    let chern = chern_general(&normalized)?;
    let hull_stability = hull.stability();
    let report = |profile, verdict| ObstructionReport {
        profile,
        hull_stability,
        normalized_chern: chern.clone(),
        verdict,
    };
    let profile = match torsion_profile(e) {
        Ok(p) => p,
        Err(Error::Degenerate(_)) => {
            return Ok(report(None, Verdict::Inconclusive { reason: "the sheaf is reflexive".into() }));
        }
        Err(err) => return Err(err),
    };
    let q = profile.q;
    let witness = |case: ObstructionCase, candidates: &[usize]| -> Result<Verdict> {
        for &i in candidates {
            let value = chern.coeff(i);
            if !value.is_zero() {
                return Ok(Verdict::NotSmoothable { case, witness: i, value });
            }
        }
        Err(Error::Consistency(format!(
            "case {} applies but c_i vanishes for i in {candidates:?}",
            case.name()
        )))
    };
    let verdict = if n >= 4 && q >= 4 {
        witness(ObstructionCase::Q4, &[3, q])?
    } else if n >= 3 && q == 2 && profile.count(3) == 0 {
        if hull_stability.is_semistable() {
            witness(ObstructionCase::Q2, &[3])?
        } else {
            Verdict::Inconclusive { reason: "q = 2 but the hull is unstable".into() }
        }
    } else if q == 2 {
        Verdict::Inconclusive { reason: format!("q = 2 with p_3 = {}", profile.count(3)) }
    } else {
        Verdict::Inconclusive { reason: format!("q = {q} on P^{n} is not covered") }
    };
    Ok(report(Some(profile), verdict))
}

/// `true` when the verdict claims an obstruction; a helper for sweeps.
pub fn is_obstructed(report: &ObstructionReport) -> bool {
    matches!(report.verdict, Verdict::NotSmoothable { .. })
}

/// `c_i = 0` for every `i >= 3`.
pub fn higher_chern_vanish(c: &TruncIntPoly) -> bool {
    (3..=c.n()).all(|i| c.coeff(i).is_zero())
}
