//! Rank-2 reflexive equivariant sheaves on projective space.
//!
//! Each ray carries the filtration `0 ⊂ L_ρ ⊂ Q^2` jumping at `a_ρ` and
//! `b_ρ`; when `a_ρ = b_ρ` the line is irrelevant and dropped.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::comb::binomial;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::multifilt::{self, Multifiltration, Sub};
use crate::scalar::rat;
use crate::TruncIntPoly;

/// A line in the rank-2 fiber, as a primitive integer vector with its first
/// nonzero entry positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line2 {
    p: i64,
    q: i64,
}

impl Line2 {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::Parameter("(0, 0) does not span a line".into()));
        }
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        Ok(if p < 0 || (p == 0 && q < 0) { Line2 { p: -p, q: -q } } else { Line2 { p, q } })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn to_subspace(&self) -> Sub {
        Sub::span(2, vec![vec![rat(self.p, 1), rat(self.q, 1)]]).expect("nonzero vector")
    }

    pub fn from_subspace(s: &Sub) -> Result<Self> {
        let (p, q) = multifilt::line_pair(s).ok_or_else(|| Error::Shape("subspace is not a line of Q^2".into()))?;
        match (p.to_i64(), q.to_i64()) {
            (Some(p), Some(q)) => Line2::new(p, q),
            _ => Err(Error::Overflow("line coordinates exceed 64 bits".into())),
        }
    }
}

impl fmt::Display for Line2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.p, self.q)
    }
}

/// The default pairwise distinct lines: `[1, i]` on ray `i`.
pub fn default_line(ray: usize) -> Line2 {
    Line2 { p: 1, q: ray as i64 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RayData {
    pub a: i64,
    pub b: i64,
    pub line: Option<Line2>,
}

impl RayData {
    pub fn c(&self) -> i64 {
        self.b - self.a
    }

    /// The line, if the filtration actually passes through it.
    pub fn active_line(&self) -> Option<Line2> {
        if self.a < self.b {
            self.line
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    AZero,
    BZero,
}

impl Normalization {
    pub fn name(&self) -> &'static str {
        match self {
            Normalization::AZero => "a_zero",
            Normalization::BZero => "b_zero",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Stability {
    pub fn name(&self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::StrictlySemistable => "strictly semistable",
            Stability::Unstable => "unstable",
        }
    }

    pub fn is_semistable(&self) -> bool {
        !matches!(self, Stability::Unstable)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct R2Filtration {
    fan: Fan,
    rays: Vec<RayData>,
}

impl R2Filtration {
    pub fn new(fan: Fan, rays: Vec<RayData>) -> Result<Self> {
        if rays.len() != fan.ray_count() {
            return Err(Error::Shape(format!("{} rays given on P^{}", rays.len(), fan.n())));
        }
        let mut rays = rays;
        for (i, r) in rays.iter_mut().enumerate() {
            if r.a > r.b {
                return Err(Error::Parameter(format!("ray {i}: a = {} exceeds b = {}", r.a, r.b)));
            }
            if r.a == r.b {
                r.line = None;
            } else if r.line.is_none() {
                return Err(Error::Parameter(format!("ray {i}: a line is required when a < b")));
            }
        }
        Ok(R2Filtration { fan, rays })
    }

    /// `b`-normalized data with `c_ρ = cs[ρ]` and the default lines.
    pub fn from_c(n: usize, cs: &[i64]) -> Result<Self> {
        let lines: Vec<Line2> = (0..cs.len()).map(default_line).collect();
        Self::from_c_lines(n, cs, &lines)
    }

    pub fn from_c_lines(n: usize, cs: &[i64], lines: &[Line2]) -> Result<Self> {
        let fan = Fan::new(n)?;
        if cs.len() != fan.ray_count() || lines.len() != cs.len() {
            return Err(Error::Shape(format!("{} values for {} rays", cs.len(), fan.ray_count())));
        }
        if let Some(c) = cs.iter().find(|c| **c < 0) {
            return Err(Error::Parameter(format!("c_ρ = {c} is negative")));
        }
        let rays = cs.iter().zip(lines).map(|(c, l)| RayData { a: -c, b: 0, line: Some(*l) }).collect();
        Self::new(fan, rays)
    }

    pub fn fan(&self) -> Fan {
        self.fan
    }

    pub fn n(&self) -> usize {
        self.fan.n()
    }

    pub fn rays(&self) -> &[RayData] {
        &self.rays
    }

    pub fn c_values(&self) -> Vec<i64> {
        self.rays.iter().map(RayData::c).collect()
    }

    pub fn a_sum(&self) -> i64 {
        self.rays.iter().map(|r| r.a).sum()
    }

    pub fn b_sum(&self) -> i64 {
        self.rays.iter().map(|r| r.b).sum()
    }

    pub fn c_sum(&self) -> i64 {
        self.rays.iter().map(RayData::c).sum()
    }

    pub fn normalization(&self) -> Option<Normalization> {
        if self.rays.iter().all(|r| r.b == 0) {
            Some(Normalization::BZero)
        } else if self.rays.iter().all(|r| r.a == 0) {
            Some(Normalization::AZero)
        } else {
            None
        }
    }

    /// Shifts every ray so that the chosen endpoint is 0; `c_ρ` is unchanged.
    pub fn normalize(&self, mode: Normalization) -> R2Filtration {
        let rays = self
            .rays
            .iter()
            .map(|r| {
                let d = match mode {
                    Normalization::AZero => r.a,
                    Normalization::BZero => r.b,
                };
                RayData { a: r.a - d, b: r.b - d, line: r.line }
            })
            .collect();
        R2Filtration { fan: self.fan, rays }
    }

    /// Shift per ray that brings the data to the given normalization.
    pub fn normalizing_shift(&self, mode: Normalization) -> Vec<i64> {
        self.rays
            .iter()
            .map(|r| match mode {
                Normalization::AZero => r.a,
                Normalization::BZero => r.b,
            })
            .collect()
    }

    pub fn elementary_symmetric(&self, k: usize) -> BigInt {
        elementary_symmetric(&self.c_values(), k)
    }

    /// Distinct active lines with the total `c_ρ` carried by each.
    pub fn line_weights(&self) -> BTreeMap<Line2, i64> {
        let mut out = BTreeMap::new();
        for r in &self.rays {
            if let Some(l) = r.active_line() {
                *out.entry(l).or_insert(0) += r.c();
            }
        }
        out
    }

    pub fn is_locally_free(&self) -> bool {
        self.line_weights().len() <= 2
    }

    /// `Π_ρ (1 - (b - c_ρ) H) / (1 - b H)^{n-1}`, valid when not locally free.
    pub fn chern_resolution(&self) -> TruncIntPoly {
        let n = self.n();
        let b = BigInt::from(self.b_sum());
        let mut acc = TruncIntPoly::linear_pow(n, &b, &-BigInt::from(n as i64 - 1));
        for r in &self.rays {
            let x = &b - BigInt::from(r.c());
            acc = acc.mul(&TruncIntPoly::linear(n, x)).expect("same n");
        }
        acc
    }

    /// Degrees of the two line bundles when at most two lines are active.
    pub fn split_degrees(&self) -> Option<(i64, i64)> {
        let weights = self.line_weights();
        if weights.len() > 2 {
            return None;
        }
        let lines: Vec<Line2> = weights.keys().copied().collect();
        let degree = |line: Option<Line2>| -> i64 {
            -self
                .rays
                .iter()
                .map(|r| if r.active_line().is_some() && r.active_line() == line { r.a } else { r.b })
                .sum::<i64>()
        };
        Some(match lines.len() {
            0 => (-self.a_sum(), -self.a_sum()),
            1 => (degree(Some(lines[0])), degree(None)),
            _ => (degree(Some(lines[0])), degree(Some(lines[1]))),
        })
    }

    /// Chern polynomial of the direct sum of line bundles, when locally free.
    pub fn chern_split(&self) -> Option<TruncIntPoly> {
        let n = self.n();
        let (d1, d2) = self.split_degrees()?;
        let f = |d: i64| TruncIntPoly::linear(n, BigInt::from(-d));
        Some(f(d1).mul(&f(d2)).expect("same n"))
    }

    pub fn chern_total(&self) -> TruncIntPoly {
        self.chern_split().unwrap_or_else(|| self.chern_resolution())
    }

    /// `Π_ρ (1 + c_ρ H)`, for `b`-normalized data that is not locally free.
    pub fn chern_symmetric(&self) -> Option<TruncIntPoly> {
        if self.normalization() != Some(Normalization::BZero) || self.is_locally_free() {
            return None;
        }
        let coeffs = (0..=self.n()).map(|k| self.elementary_symmetric(k)).collect();
        Some(TruncIntPoly::truncated(self.n(), coeffs))
    }

    /// `c_k = Σ_i C(k-3, i) s_{i+3} b^{k-i-3}`, for `3 <= k <= n`.
    pub fn chern_k_general(&self, k: usize) -> Result<BigInt> {
        if k < 3 || k > self.n() {
            return Err(Error::Range(format!("k = {k} outside 3..={}", self.n())));
        }
        let b = BigInt::from(self.b_sum());
        Ok((0..=k - 3)
            .map(|i| binomial((k - 3) as u64, i as u64) * self.elementary_symmetric(i + 3) * b.pow((k - i - 3) as u32))
            .sum())
    }

    /// `-(1/2) Σ_ρ (a_ρ + b_ρ)`.
    pub fn slope(&self) -> BigRational {
        BigRational::new(BigInt::from(-(self.a_sum() + self.b_sum())), BigInt::from(2))
    }

    pub fn stability(&self) -> Stability {
        let weights = self.line_weights();
        if weights.is_empty() {
            return Stability::StrictlySemistable;
        }
        let c = self.c_sum();
        let mut verdict = Stability::Stable;
        for s in weights.values() {
            if *s > c - s {
                return Stability::Unstable;
            }
            if *s == c - s {
                verdict = Stability::StrictlySemistable;
            }
        }
        verdict
    }

    pub fn discriminant(&self) -> BigInt {
        discriminant(&self.chern_total())
    }

    pub fn normalized_positivity(&self) -> Result<bool> {
        if self.rays.iter().any(|r| r.a != 0) {
            return Err(Error::Precondition("positivity needs a-normalized data".into()));
        }
        Ok(chern_positivity(&self.chern_total()))
    }

    /// Ray filtrations as jump lists.
    pub fn ray_jumps(&self) -> Vec<multifilt::Jumps> {
        self.rays
            .iter()
            .map(|r| match r.active_line() {
                Some(l) => vec![(vec![r.a], l.to_subspace()), (vec![r.b], Sub::full(2))],
                None => vec![(vec![r.a], Sub::full(2))],
            })
            .collect()
    }

    pub fn to_multifiltration(&self) -> Multifiltration {
        Multifiltration::from_ray_filtrations(self.fan, 2, self.ray_jumps()).expect("one filtration per ray")
    }

    /// Reads `(a_ρ, b_ρ, L_ρ)` off the ray filtrations of a rank-2 family.
    pub fn from_multifiltration(m: &Multifiltration) -> Result<Self> {
        if m.rank() != 2 {
            return Err(Error::Unsupported(format!("rank {} families have no rank-2 hull data", m.rank())));
        }
        let mut rays = Vec::new();
        for (cone, jumps) in m.jumps().into_iter().filter(|(c, _)| c.dim() == 1) {
            let bad = || Error::Invalid(format!("ray {cone} does not reach the full space"));
            let r = match jumps.as_slice() {
                [(a, s)] if s.is_full() => RayData { a: a[0], b: a[0], line: None },
                [(a, l), (b, s)] if l.dim() == 1 && s.is_full() => {
                    RayData { a: a[0], b: b[0], line: Some(Line2::from_subspace(l)?) }
                }
                _ => return Err(bad()),
            };
            rays.push(r);
        }
        R2Filtration::new(m.fan(), rays)
    }

    pub fn to_json(&self) -> Map<String, Value> {
        let rays: Vec<Value> = self
            .rays
            .iter()
            .map(|r| match r.line {
                Some(l) => json!({"a": r.a, "b": r.b, "line": [l.p, l.q]}),
                None => json!({"a": r.a, "b": r.b}),
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("n".into(), json!(self.n()));
        obj.insert("normalization".into(), json!(self.normalization().map_or("none", |m| m.name())));
        obj.insert("rays".into(), Value::Array(rays));
        obj
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let fan = Fan::new(multifilt::as_usize(multifilt::field(v, "n")?, "n")?)?;
        let rays = multifilt::field(v, "rays")?
            .as_array()
            .ok_or_else(|| Error::Parse("rays must be an array".into()))?
            .iter()
            .map(|r| {
                let a = multifilt::as_i64(multifilt::field(r, "a")?, "a")?;
                let b = multifilt::as_i64(multifilt::field(r, "b")?, "b")?;
                let line = match r.get("line") {
                    None | Some(Value::Null) => None,
                    Some(l) => match multifilt::int_list(l, "line")?.as_slice() {
                        [p, q] => Some(Line2::new(*p, *q)?),
                        _ => return Err(Error::Parse("line must be [p, q]".into())),
                    },
                };
                Ok(RayData { a, b, line })
            })
            .collect::<Result<Vec<_>>>()?;
        let f = R2Filtration::new(fan, rays)?;
        if let Some(Value::String(declared)) = v.get("normalization") {
            let actual = f.normalization().map_or("none", |m| m.name());
            if declared != actual && !(declared == "none" && actual != "none") {
                return Err(Error::Parse(format!("declared normalization {declared} but data is {actual}")));
            }
        }
        Ok(f)
    }
}

pub fn elementary_symmetric(values: &[i64], k: usize) -> BigInt {
    // e_j of the prefix, updated one value at a time.
    let mut e = vec![BigInt::zero(); k + 1];
    e[0] = BigInt::one();
    for v in values {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * BigInt::from(*v);
            e[j] += add;
        }
    }
    e[k].clone()
}

pub fn discriminant(c: &TruncIntPoly) -> BigInt {
    let c1 = c.coeff(1);
    BigInt::from(4) * c.coeff(2) - &c1 * &c1
}

/// `Σ_{i=0}^{k-3} C(k-3, i) c_{i+3} c_1^{k-i-3} >= 0` for every `3 <= k <= n`.
pub fn chern_positivity(c: &TruncIntPoly) -> bool {
    let c1 = c.coeff(1);
    (3..=c.n()).all(|k| {
        let s: BigInt = (0..=k - 3)
            .map(|i| binomial((k - 3) as u64, i as u64) * c.coeff(i + 3) * c1.pow((k - i - 3) as u32))
            .sum();
        s >= BigInt::zero()
    })
}

/// Nonnegative integers `r_0..r_n` whose elementary symmetric functions
/// `e_1..e_n` are the coefficients of `target`; returned as `b`-normalized
/// data with default lines, `None` when no such integers exist.
pub fn prescribe_reflexive(target: &TruncIntPoly) -> Result<Option<R2Filtration>> {
    let n = target.n();
    if !target.coeff(0).is_one() {
        return Err(Error::Domain("target must have constant term 1".into()));
    }
    let goal: Vec<BigInt> = (0..=n).map(|k| target.coeff(k)).collect();
    if goal.iter().any(|g| g < &BigInt::zero()) {
        return Ok(None);
    }
    let total = goal.get(1).cloned().unwrap_or_default();
    let total = total
        .to_i64()
        .ok_or_else(|| Error::Overflow("c_1 is too large to search".into()))?;
    let mut best: Option<Vec<i64>> = None;
    let mut parts = Vec::new();
    search_partitions(total, total, n + 1, &goal, &mut parts, &mut best);
    match best {
        None => Ok(None),
        Some(mut r) => {
            r.resize(n + 1, 0);
            r.sort_unstable();
            Ok(Some(R2Filtration::from_c(n, &r)?))
        }
    }
}

fn search_partitions(
    rest: i64,
    max_part: i64,
    slots: usize,
    goal: &[BigInt],
    parts: &mut Vec<i64>,
    best: &mut Option<Vec<i64>>,
) {
    let n = goal.len() - 1;
    // Partial sums only grow as parts are added, so any overshoot is final.
    for k in 2..=n {
        if elementary_symmetric(parts, k) > goal[k] {
            return;
        }
    }
    if rest == 0 {
        if (2..=n).all(|k| elementary_symmetric(parts, k) == goal[k]) {
            let mut asc = parts.clone();
            asc.resize(n + 1, 0);
            asc.sort_unstable();
            if best.as_ref().map_or(true, |b| asc < *b) {
                *best = Some(asc);
            }
        }
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        parts.push(p);
        search_partitions(rest - p, p, slots - 1, goal, parts, best);
        parts.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Cone;

    fn poly(n: usize, cs: &[i64]) -> TruncIntPoly {
        TruncIntPoly::from_coeffs(n, cs.iter().map(|c| BigInt::from(*c)).collect()).unwrap()
    }

    fn distinct(n: usize, cs: &[i64]) -> R2Filtration {
        R2Filtration::from_c(n, cs).unwrap()
    }

    #[test]
    fn lines_are_canonical() {
        assert_eq!(Line2::new(-2, -4).unwrap(), Line2::new(1, 2).unwrap());
        assert_eq!(Line2::new(0, -3).unwrap(), Line2::new(0, 1).unwrap());
        assert!(Line2::new(0, 0).is_err());
        let l = Line2::new(3, -2).unwrap();
        assert_eq!(Line2::from_subspace(&l.to_subspace()).unwrap(), l);
    }

    #[test]
    fn normalize_examples() {
        let fan = Fan::new(2).unwrap();
        let line = Some(Line2::new(1, 0).unwrap());
        let f = R2Filtration::new(fan, vec![RayData { a: -3, b: -1, line }; 3]).unwrap();
        let b = f.normalize(Normalization::BZero);
        assert!(b.rays().iter().all(|r| (r.a, r.b) == (-2, 0)));
        assert_eq!(b.normalize(Normalization::BZero), b);
        let a = b.normalize(Normalization::AZero);
        assert!(a.rays().iter().all(|r| (r.a, r.b) == (0, 2)));
        assert_eq!(a.discriminant(), f.discriminant());
    }

    #[test]
    fn chern_examples() {
        assert_eq!(distinct(3, &[1, 1, 1, 1]).chern_total(), poly(3, &[1, 4, 6, 4]));
        assert_eq!(distinct(4, &[1, 6, 6, 0, 0]).chern_total(), poly(4, &[1, 13, 48, 36, 0]));
        assert_eq!(distinct(4, &[1, 7, 7, 7, 0]).chern_total(), poly(4, &[1, 22, 168, 490, 343]));
        let f = distinct(4, &[1, 6, 6, 0, 0]);
        assert_eq!(f.chern_k_general(3).unwrap(), BigInt::from(36));
        assert_eq!(f.chern_k_general(4).unwrap(), BigInt::zero());
        assert!(f.chern_k_general(5).is_err());
        assert_eq!(distinct(4, &[0; 5]).chern_k_general(4).unwrap(), BigInt::zero());
    }

    #[test]
    fn general_coefficients_match_resolution() {
        let fan = Fan::new(5).unwrap();
        let lines: Vec<Option<Line2>> = (0..6).map(|i| Some(default_line(i))).collect();
        let rays = [(-2, 1), (0, 3), (-4, -1), (5, 5), (-1, 2), (0, 1)]
            .iter()
            .zip(lines)
            .map(|(&(a, b), line)| RayData { a, b, line })
            .collect();
        let f = R2Filtration::new(fan, rays).unwrap();
        let c = f.chern_resolution();
        for k in 3..=5 {
            assert_eq!(f.chern_k_general(k).unwrap(), c.coeff(k));
        }
        assert_eq!(c.coeff(1), BigInt::from(-(f.a_sum() + f.b_sum())));
    }

    #[test]
    fn elementary_symmetric_examples() {
        let f = distinct(4, &[1, 6, 6, 0, 0]);
        assert_eq!(f.elementary_symmetric(2), BigInt::from(48));
        assert_eq!(distinct(4, &[1; 5]).elementary_symmetric(4), BigInt::from(5));
        assert_eq!(f.elementary_symmetric(1), BigInt::from(13));
    }

    #[test]
    fn local_freeness() {
        let (l1, l2) = (default_line(1), default_line(2));
        let two = R2Filtration::from_c_lines(3, &[1, 1, 0, 0], &[l1, l2, l1, l2]).unwrap();
        assert!(two.is_locally_free());
        assert_eq!(two.chern_total(), poly(3, &[1, 2, 1, 0]));
        assert!(!distinct(4, &[1, 1, 1, 0, 0]).is_locally_free());
        assert!(distinct(4, &[0; 5]).is_locally_free());
        // Two rays sharing a line: the split bundle, not the product of (1 + c_ρ H).
        let shared = R2Filtration::from_c_lines(3, &[1, 1, 1, 0], &[l1, l1, l2, l2]).unwrap();
        assert!(shared.is_locally_free());
        assert_eq!(shared.chern_total(), poly(3, &[1, 3, 2, 0]));
        assert_eq!(shared.elementary_symmetric(3), BigInt::one());
        assert_eq!(shared.chern_symmetric(), None);
        let f = distinct(4, &[1, 6, 6, 0, 0]);
        assert_eq!(f.chern_symmetric(), Some(f.chern_resolution()));
        assert_eq!(f.normalize(Normalization::AZero).chern_symmetric(), None);
    }

    #[test]
    fn slope_and_stability() {
        assert_eq!(distinct(4, &[1, 6, 6, 0, 0]).slope(), rat(13, 2));
        assert_eq!(distinct(4, &[1, 6, 6, 0, 0]).normalize(Normalization::AZero).slope(), rat(-13, 2));
        assert_eq!(distinct(4, &[0; 5]).slope(), rat(0, 1));
        assert_eq!(distinct(4, &[1, 1, 1, 0, 0]).stability(), Stability::Stable);
        assert_eq!(distinct(4, &[2, 1, 1, 0, 0]).stability(), Stability::StrictlySemistable);
        assert_eq!(distinct(4, &[3, 1, 1, 0, 0]).stability(), Stability::Unstable);
        assert_eq!(distinct(4, &[0; 5]).stability(), Stability::StrictlySemistable);
        assert_eq!(distinct(4, &[0, 4, 0, 0, 0]).stability(), Stability::Unstable);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(distinct(4, &[1, 6, 6, 0, 0]).discriminant(), BigInt::from(23));
        assert_eq!(distinct(4, &[1, 7, 7, 7, 0]).discriminant(), BigInt::from(188));
        let fan = Fan::new(3).unwrap();
        let twisted = R2Filtration::new(fan, vec![RayData { a: 2, b: 2, line: None }; 4]).unwrap();
        assert_eq!(twisted.discriminant(), BigInt::zero());
    }

    #[test]
    fn positivity() {
        let f = distinct(4, &[1, 6, 6, 0, 0]).normalize(Normalization::AZero);
        assert!(f.normalized_positivity().unwrap());
        assert!(distinct(4, &[1, 6, 6, 0, 0]).normalized_positivity().is_err());
        assert!(!chern_positivity(&poly(3, &[1, 0, 0, -1])));
        assert!(distinct(3, &[0; 4]).normalize(Normalization::AZero).normalized_positivity().unwrap());
    }

    #[test]
    fn prescription_search() {
        let f = prescribe_reflexive(&poly(3, &[1, 4, 6, 4])).unwrap().unwrap();
        assert_eq!(f.c_values(), vec![1, 1, 1, 1]);
        let f = prescribe_reflexive(&poly(4, &[1, 13, 48, 36, 0])).unwrap().unwrap();
        assert_eq!(f.c_values(), vec![0, 0, 1, 6, 6]);
        assert_eq!(f.chern_total(), poly(4, &[1, 13, 48, 36, 0]));
        assert!(prescribe_reflexive(&poly(2, &[1, 1, 1])).unwrap().is_none());
    }

    #[test]
    fn multifiltration_round_trip() {
        let f = distinct(4, &[1, 6, 6, 0, 0]);
        let m = f.to_multifiltration();
        assert!(m.is_valid());
        assert_eq!(R2Filtration::from_multifiltration(&m.reflexive_hull()).unwrap(), f);
        let c = Cone::new([0, 1, 2]);
        assert_eq!(m.evaluate(&c, &[-1, 0, 0]).unwrap(), default_line(0).to_subspace());
        assert!(m.evaluate(&c, &[-2, 0, 0]).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let f = distinct(4, &[1, 6, 6, 0, 0]);
        let v = Value::Object(f.to_json());
        assert_eq!(v["normalization"], "b_zero");
        assert_eq!(v["rays"][3], json!({"a": 0, "b": 0}));
        assert_eq!(R2Filtration::from_json(&v).unwrap(), f);
    }
}
