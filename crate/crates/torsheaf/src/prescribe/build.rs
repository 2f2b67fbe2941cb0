//! Materializing the drop sequence for a solved prescription.
//!
//! Stage `k` drops the line `L_ρ0` on the cone `σ_k = {0, ..., k-1}` at the
//! classes `(-c_ρ0, 0, p_3, ..., p_{k-1}, j-1)`, `j = 1..p_k`. The regions
//! zeroed by one stage are nested, so any intermediate sheaf is the start
//! with at most one region per stage removed; this is what lets a long
//! stage be checked on samples without replaying it.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{stage_base, PrescriptionSolution};
use crate::chern_engine::{chern_general, chern_trusted, ratio_saturated};
use crate::comb::binomial;
use crate::error::{Error, Result};
use crate::fan::Cone;
use crate::multifilt::{elementary_check, ElementaryInjection, Multifiltration, Sub};
use crate::TruncIntPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduledStep {
    pub k: usize,
    pub j: BigInt,
    pub sigma: Cone,
    pub m0: Vec<i64>,
    pub m_big_sigma: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    /// Replay every drop and check each one.
    Full,
    /// Check the first `per_stage` drops and the last drop of every stage.
    Sampled { per_stage: u64 },
}

#[derive(Clone, Debug)]
pub struct BuiltSequence {
    pub start: Multifiltration,
    pub final_sheaf: Multifiltration,
    pub final_chern: TruncIntPoly,
    pub total_steps: BigInt,
    /// Every step that was materialized and checked, in order.
    pub checked: Vec<(ScheduledStep, ElementaryInjection)>,
}

fn to_i64(x: &BigInt, what: &str) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(format!("{what} = {x} does not fit in 64 bits")))
}

fn step(sol: &PrescriptionSolution, k: usize, j: &BigInt) -> Result<ScheduledStep> {
    let c0 = sol.problem.c_rho0();
    let mut m0 = vec![-c0, 0];
    for i in 3..k {
        m0.push(to_i64(sol.p_k(i), "p")?);
    }
    m0.push(to_i64(&(j - 1), "step index")?);
    let m_big_sigma = stage_base(&BigInt::from(c0), &sol.p, k) + j - 1;
    Ok(ScheduledStep { k, j: j.clone(), sigma: Cone::new(0..k), m0, m_big_sigma })
}

/// The sheaf after the first `j` drops of stage `k`.
fn materialize(start: &Multifiltration, sol: &PrescriptionSolution, k: usize, j: &BigInt) -> Result<Multifiltration> {
    let zero = Sub::zero(2);
    let mut cur = start.clone();
    for i in 3..=k {
        let last = if i == k { j.clone() } else { sol.p_k(i).clone() };
        if last.is_zero() {
            continue;
        }
        let s = step(sol, i, &last)?;
        cur = cur.intersect_region(&s.sigma, &s.m0, &zero)?;
    }
    Ok(cur)
}

/// The sheaf after the first `j` drops of stage `k`, built directly from
/// the start; `j = 0` is the end of stage `k - 1`.
pub fn sheaf_after(sol: &PrescriptionSolution, k: usize, j: &BigInt) -> Result<Multifiltration> {
    if k < 3 || k > sol.problem.n() || j.is_negative() || j > sol.p_k(k) {
        return Err(Error::Range(format!("no step {j} in stage {k}")));
    }
    materialize(&sol.problem.start().to_multifiltration(), sol, k, j)
}

fn check_step(prev: &Multifiltration, next: &Multifiltration, s: &ScheduledStep) -> Result<ElementaryInjection> {
    let fail = |what: String| Error::Consistency(format!("step k = {}, j = {}: {what}", s.k, s.j));
    let inj = match elementary_check(next, prev)? {
        Ok(inj) => inj,
        Err(ne) => return Err(fail(format!("not elementary, {} {}", ne.clause, ne.detail))),
    };
    if !inj.saturated {
        return Err(fail("not saturated".into()));
    }
    if inj.k0 != s.k || inj.sigma0 != s.sigma || inj.m0 != s.m0 {
        return Err(fail(format!("parameters {} {:?}", inj.sigma0, inj.m0)));
    }
    if BigInt::from(inj.m_big_sigma) != s.m_big_sigma {
        return Err(fail(format!("weight {} instead of {}", inj.m_big_sigma, s.m_big_sigma)));
    }
    let ratio = ratio_saturated(s.k, &s.m_big_sigma, prev.n())?;
    if chern_trusted(prev) != chern_trusted(next).mul(&ratio)? {
        return Err(fail("Chern ratio differs from the saturated closed form".into()));
    }
    Ok(inj)
}

/// Product of the saturated ratios of one whole stage, whose weights are
/// `base, base+1, ..., base+p-1`. Interior factors cancel exactly, leaving
/// the ones within `k` of either end.
pub fn stage_ratio(k: usize, base: &BigInt, p: &BigInt, n: usize) -> Result<TruncIntPoly> {
    if k == 0 || k > n {
        return Err(Error::Range(format!("k = {k} outside 1..={n}")));
    }
    let mut out = TruncIntPoly::one(n);
    if p.is_zero() {
        return Ok(out);
    }
    let last = p - 1 + k;
    let mut offsets: BTreeSet<BigInt> = BTreeSet::new();
    for s in 0..k {
        if BigInt::from(s) <= last {
            offsets.insert(BigInt::from(s));
        }
    }
    for u in 1..=k {
        let s = p - 1 + u;
        if s >= BigInt::from(k) {
            offsets.insert(s);
        }
    }
    for s in offsets {
        let mut e = BigInt::zero();
        for i in 0..=k {
            let bi = BigInt::from(i);
            if bi > s || &s - &bi >= *p {
                continue;
            }
            let b = binomial(k as u64, i as u64);
            if i % 2 == 0 {
                e += b;
            } else {
                e -= b;
            }
        }
        if !e.is_zero() {
            out = out.mul(&TruncIntPoly::linear_pow(n, &(base + &s), &e))?;
        }
    }
    Ok(out)
}

pub fn build_sequence(sol: &PrescriptionSolution, mode: BuildMode) -> Result<BuiltSequence> {
    let n = sol.problem.n();
    let start = sol.problem.start().to_multifiltration();
    let zero = Sub::zero(2);
    let mut checked = Vec::new();

    let final_sheaf = match mode {
        BuildMode::Full => {
            let mut cur = start.clone();
            for k in 3..=n {
                let pk = to_i64(sol.p_k(k), "p")?;
                for j in 1..=pk {
                    let s = step(sol, k, &BigInt::from(j))?;
                    let next = cur.apply_elementary(&s.sigma, &s.m0, &zero)?;
                    let inj = check_step(&cur, &next, &s)?;
                    checked.push((s, inj));
                    cur = next;
                }
            }
            if cur != materialize(&start, sol, n, sol.p_k(n))? {
                return Err(Error::Consistency("replayed and direct constructions differ".into()));
            }
            cur
        }
        BuildMode::Sampled { per_stage } => {
            for k in 3..=n {
                let pk = sol.p_k(k).clone();
                let mut js: BTreeSet<BigInt> = BTreeSet::new();
                let mut j = BigInt::one();
                while j <= pk && j <= BigInt::from(per_stage) {
                    js.insert(j.clone());
                    j += 1;
                }
                if !pk.is_zero() {
                    js.insert(pk.clone());
                }
                for j in js {
                    let s = step(sol, k, &j)?;
                    let prev = materialize(&start, sol, k, &(&j - 1))?;
                    let next = materialize(&start, sol, k, &j)?;
                    if next != prev.apply_elementary(&s.sigma, &s.m0, &zero)? {
                        return Err(Error::Consistency(format!("step k = {k}, j = {j} differs from its replay")));
                    }
                    let inj = check_step(&prev, &next, &s)?;
                    checked.push((s, inj));
                }
            }
            materialize(&start, sol, n, sol.p_k(n))?
        }
    };

    if final_sheaf.reflexive_hull() != start {
        return Err(Error::Consistency("the reflexive hull of the result is not the start".into()));
    }
    let start_chern = chern_general(&start)?;
    let final_chern = chern_general(&final_sheaf)?;
    let mut product = TruncIntPoly::one(n);
    for k in 3..=n {
        let base = stage_base(&BigInt::from(sol.problem.c_rho0()), &sol.p, k);
        product = product.mul(&stage_ratio(k, &base, sol.p_k(k), n)?)?;
    }
    if start_chern != final_chern.mul(&product)? {
        return Err(Error::Consistency("product of stage ratios does not close up".into()));
    }
    Ok(BuiltSequence { start, final_sheaf, final_chern, total_steps: sol.total_steps(), checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prescribe::{solve_p, PrescriptionProblem};
    use crate::scalar::big;

    #[test]
    fn stage_ratio_matches_step_product() {
        for k in 3..=5usize {
            for p in 0..9i64 {
                for base in -3..3i64 {
                    let n = 5;
                    let mut direct = TruncIntPoly::one(n);
                    for j in 0..p {
                        direct = direct.mul(&ratio_saturated(k, &big(base + j), n).unwrap()).unwrap();
                    }
                    assert_eq!(stage_ratio(k, &big(base), &big(p), n).unwrap(), direct, "k={k} p={p} base={base}");
                }
            }
        }
    }

    #[test]
    fn full_build_on_p4() {
        let problem = PrescriptionProblem::new(4, vec![1, 6, 6, 0, 0]).unwrap();
        let sol = solve_p(&problem).unwrap();
        let built = build_sequence(&sol, BuildMode::Full).unwrap();
        assert_eq!(built.checked.len(), 258);
        let weights: Vec<BigInt> = built.checked.iter().map(|(s, _)| s.m_big_sigma.clone()).collect();
        assert_eq!(weights, (-1..=256).map(big).collect::<Vec<_>>());
        assert!(built.checked.iter().all(|(s, inj)| inj.k0 == s.k));
        assert_eq!(built.final_chern, problem.target());
        assert_eq!(built.final_chern.to_string(), "1 + 13*H + 48*H^2");
        let sampled = build_sequence(&sol, BuildMode::Sampled { per_stage: 3 }).unwrap();
        assert_eq!(sampled.final_sheaf, built.final_sheaf);
        assert_eq!(sampled.checked.len(), 8);
        assert_eq!(sheaf_after(&sol, 4, &big(240)).unwrap(), built.final_sheaf);
        assert_eq!(sheaf_after(&sol, 4, &big(0)).unwrap(), sheaf_after(&sol, 3, &big(18)).unwrap());
        assert!(sheaf_after(&sol, 3, &big(19)).is_err());
    }

    #[test]
    fn empty_schedule_keeps_the_start() {
        let problem = PrescriptionProblem::new(4, vec![1, 2, 0, 0, 0]).unwrap();
        let sol = solve_p(&problem).unwrap();
        assert!(sol.p.iter().all(|x| x.is_zero()));
        let built = build_sequence(&sol, BuildMode::Full).unwrap();
        assert_eq!(built.final_sheaf, built.start);
        assert!(built.checked.is_empty());
    }
}
