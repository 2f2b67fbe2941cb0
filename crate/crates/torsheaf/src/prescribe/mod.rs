//! Prescribing Chern classes: start from a normalized reflexive sheaf and
//! remove `p_k` saturated `k`-elementary pieces for each `3 <= k <= n`, so
//! that the higher Chern classes cancel and `1 + c1 H + c2 H^2` remains.

mod build;
mod family;

pub use build::{build_sequence, sheaf_after, stage_ratio, BuildMode, BuiltSequence, ScheduledStep};
pub use family::{
    certify, family_p4_even, family_p4_odd, family_p5, family_pn, run, Certificate, FamilyRun, P5Report,
    PnSearch,
};
pub use family::pn_bound;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chern_engine::StirlingA;
use crate::comb::{binomial, factorial, power_sums_from_zero};
use crate::error::{Error, Result};
use crate::reflexive_r2::R2Filtration;
use crate::scalar::{as_integer, rat_int};
use crate::{TruncIntPoly, TruncRatPoly};

/// Start data `(c_ρ)`; the designated ray `ρ0` is ray 0, so `c[0] >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrescriptionProblem {
    n: usize,
    c: Vec<i64>,
}

impl PrescriptionProblem {
    pub fn new(n: usize, c: Vec<i64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::Range(format!("prescription needs n >= 3, got {n}")));
        }
        if c.len() != n + 1 {
            return Err(Error::Shape(format!("{} start values for {} rays", c.len(), n + 1)));
        }
        if c.iter().any(|x| *x < 0) {
            return Err(Error::Parameter(format!("start values {c:?} must be nonnegative")));
        }
        if c[0] < 1 {
            return Err(Error::Parameter("the first start value must be at least 1".into()));
        }
        Ok(PrescriptionProblem { n, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> &[i64] {
        &self.c
    }

    pub fn c_rho0(&self) -> i64 {
        self.c[0]
    }

    /// The b-normalized reflexive sheaf with lines `(1, i)`.
    pub fn start(&self) -> R2Filtration {
        R2Filtration::from_c(self.n, &self.c).expect("validated start data")
    }

    pub fn start_chern(&self) -> TruncIntPoly {
        self.start().chern_total()
    }

    /// `1 + c1 H + c2 H^2` with the start's first two classes.
    pub fn target(&self) -> TruncIntPoly {
        let c = self.start_chern();
        let mut coeffs = vec![BigInt::zero(); self.n + 1];
        coeffs[0] = c.coeff(0);
        coeffs[1] = c.coeff(1);
        coeffs[2] = c.coeff(2);
        TruncIntPoly::truncated(self.n, coeffs)
    }
}

/// Why the triangular system has no solution in nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Infeasible {
    NonInteger { q: usize, value: BigRational },
    Negative { q: usize, value: BigInt },
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasible::NonInteger { q, value } => write!(f, "p_{q} = {value} is not an integer"),
            Infeasible::Negative { q, value } => write!(f, "p_{q} = {value} is negative"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrescriptionSolution {
    pub problem: PrescriptionProblem,
    /// `(p_3, ..., p_n)`.
    pub p: Vec<BigInt>,
}

impl PrescriptionSolution {
    pub fn p_k(&self, k: usize) -> &BigInt {
        &self.p[k - 3]
    }

    pub fn total_steps(&self) -> BigInt {
        self.p.iter().sum()
    }
}

/// `tilde c_q = -q [H^q] (log c - log(1 + c1 H + c2 H^2))` for `3 <= q <= n`.
pub fn tilde_c(c: &TruncIntPoly) -> Result<Vec<BigRational>> {
    let n = c.n();
    if c.coeff(0) != BigInt::from(1) {
        return Err(Error::Domain("constant term must be 1".into()));
    }
    let mut low = vec![BigInt::zero(); n + 1];
    for (k, slot) in low.iter_mut().enumerate().take(3.min(n + 1)) {
        *slot = c.coeff(k);
    }
    let diff: TruncRatPoly = c.log()?.sub(&TruncIntPoly::truncated(n, low).log()?)?;
    Ok((3..=n).map(|q| -diff.coeff(q) * rat_int(&BigInt::from(q))).collect())
}

fn check_stage(p: &[BigInt], k: usize) -> Result<()> {
    if k < 3 || k - 3 >= p.len() {
        return Err(Error::Range(format!("stage k = {k} outside 3..={}", p.len() + 2)));
    }
    Ok(())
}

/// First weight of stage `k`: `-c_ρ0 + sum_{3 <= i < k} p_i`.
pub fn stage_base(c_rho0: &BigInt, p: &[BigInt], k: usize) -> BigInt {
    -c_rho0 + p[..k - 3].iter().sum::<BigInt>()
}

/// `m_Σ^{k,j} = -c_ρ0 + sum_{3 <= i < k} p_i + (j - 1)`.
pub fn weight_schedule(c_rho0: &BigInt, p: &[BigInt], k: usize, j: &BigInt) -> Result<BigInt> {
    check_stage(p, k)?;
    if j < &BigInt::from(1) || j > &p[k - 3] {
        return Err(Error::Range(format!("step j = {j} outside 1..={}", p[k - 3])));
    }
    Ok(stage_base(c_rho0, p, k) + j - 1)
}

/// `S_k^l = sum_{j=1}^{p_k} (m_Σ^{k,j})^l`, by power sums.
pub fn s_kl(c_rho0: &BigInt, p: &[BigInt], k: usize, l: usize) -> Result<BigInt> {
    check_stage(p, k)?;
    let n = p.len() + 2;
    if l > n - k {
        return Err(Error::Range(format!("l = {l} exceeds n - k = {}", n - k)));
    }
    Ok(s_kl_unchecked(c_rho0, p, k, l))
}

fn s_kl_unchecked(c_rho0: &BigInt, p: &[BigInt], k: usize, l: usize) -> BigInt {
    let b = stage_base(c_rho0, p, k);
    let sums = power_sums_from_zero(&p[k - 3], l);
    (0..=l)
        .map(|s| binomial(l as u64, s as u64) * num_traits::pow(b.clone(), l - s) * &sums[s])
        .sum()
}

/// Right-hand side of the stage-`q` equation with the given `p` (all of
/// `p_3..p_q` must be present).
pub fn stage_equation(c_rho0: &BigInt, p: &[BigInt], q: usize) -> BigInt {
    let a = StirlingA::new(q);
    let mut total = BigInt::zero();
    for k in 3..=q {
        for l in k..=q {
            total += binomial(q as u64, l as u64) * a.get(l, k) * s_kl_unchecked(c_rho0, p, k, q - l);
        }
    }
    total
}

/// Solves for `p_3, ..., p_n` one stage at a time.
pub fn solve_p(problem: &PrescriptionProblem) -> std::result::Result<PrescriptionSolution, Infeasible> {
    let n = problem.n();
    let tc = tilde_c(&problem.start_chern()).expect("Chern polynomials have constant term 1");
    let c0 = BigInt::from(problem.c_rho0());
    let a = StirlingA::new(n);
    let mut p: Vec<BigInt> = Vec::with_capacity(n - 2);
    for q in 3..=n {
        p.push(BigInt::zero());
        let known = stage_equation(&c0, &p, q);
        let value = (&tc[q - 3] - rat_int(&known)) / rat_int(&a.get(q, q));
        let Some(pq) = as_integer(&value) else {
            return Err(Infeasible::NonInteger { q, value });
        };
        if pq.is_negative() {
            return Err(Infeasible::Negative { q, value: pq });
        }
        p[q - 3] = pq;
    }
    Ok(PrescriptionSolution { problem: problem.clone(), p })
}

fn classes(c: &TruncIntPoly, upto: usize) -> Result<Vec<BigRational>> {
    if c.n() != upto {
        return Err(Error::Range(format!("closed form is for n = {upto}, got n = {}", c.n())));
    }
    Ok((0..=upto).map(|k| rat_int(&c.coeff(k))).collect())
}

/// `(p_3, p_4)` on `P^4` in closed form.
pub fn solve_p_closed_p4(c: &TruncIntPoly, c_rho0: i64) -> Result<Vec<BigRational>> {
    let c = classes(c, 4)?;
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    let p3 = &c[3] / r(2);
    let p4 = (&c[1] * &c[3] - &c[4]) / r(6) + &c[3] - r(c_rho0 + 1) * &c[3] / r(2) + &c[3] * &c[3] / r(8);
    Ok(vec![p3, p4])
}

/// `(p_3, p_4, p_5)` on `P^5` in closed form, for `c_ρ0 = 1`.
pub fn solve_p_closed_p5(c: &TruncIntPoly) -> Result<Vec<BigRational>> {
    let c = classes(c, 5)?;
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    let (c1, c2, c3, c4, c5) = (&c[1], &c[2], &c[3], &c[4], &c[5]);
    let p3 = c3 / r(2);
    let p4 = (c1 * c3 - c4) / r(6) + c3 * c3 / r(8);
    let p5 = (c5 - c1 * c4 - c3 * c2 + c3 * c1 * c1) / r(24) - c3 * c3 * c4 / r(48) - c1 * c3 * c4 / r(36)
        - c3 * c4 / r(12)
        + c3 * c3 * c3 * c1 / r(48)
        + c1 * c1 * c3 * c3 / r(72)
        + c3 * c3 * c1 / r(12)
        + c1 * c3 / r(12)
        + c3 * c3 * c3 * c3 / r(128)
        + c3 * c3 * c3 / r(24)
        + c3 * c3 / r(16)
        - c3 / r(24)
        + c4 * c4 / r(72)
        - c4 / r(12);
    Ok(vec![p3, p4, p5])
}

/// `(c1 c3 - c4)/3 + c3 + c3^2/4 >= c_ρ0 c3` on `P^4`.
pub fn positivity_check_p4(c: &TruncIntPoly, c_rho0: i64) -> Result<bool> {
    let c = classes(c, 4)?;
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    let lhs = (&c[1] * &c[3] - &c[4]) / r(3) + &c[3] + &c[3] * &c[3] / r(4);
    Ok(lhs >= r(c_rho0) * &c[3])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schwarzenberger {
    Ok,
    Violated { m: usize },
}

impl Schwarzenberger {
    pub fn is_ok(&self) -> bool {
        matches!(self, Schwarzenberger::Ok)
    }

    pub fn name(&self) -> String {
        match self {
            Schwarzenberger::Ok => "ok".into(),
            Schwarzenberger::Violated { m } => format!("violated at m = {m}"),
        }
    }
}

/// Coefficients `e_{m,j}` of the rising factorial `t (t+1) ... (t+m-1)`.
fn rising_coeffs(m: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); m + 1];
    e[0] = BigInt::from(1);
    for i in 0..m {
        // Multiply by (t + i).
        let mut next = vec![BigInt::zero(); m + 1];
        for (j, x) in e.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if j + 1 <= m {
                next[j + 1] += x;
            }
            next[j] += x * BigInt::from(i);
        }
        e = next;
    }
    e
}

/// The left side of the mod-`m!` congruence for `(c1, c2)`.
pub fn schwarzenberger_sum(c1: &BigInt, c2: &BigInt, m: usize) -> BigInt {
    let e = rising_coeffs(m);
    let mut total = BigInt::zero();
    for (j, ej) in e.iter().enumerate().skip(2) {
        for i in 1..=j / 2 {
            let weight = binomial((j - i) as u64, i as u64) + binomial((j - i - 1) as u64, (i - 1) as u64);
            let term = ej * weight * num_traits::pow(c1.clone(), j - 2 * i) * num_traits::pow(c2.clone(), i);
            if i % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    total
}

/// All congruences `2 <= m <= n`; reports the first failing `m`.
pub fn schwarzenberger(c1: &BigInt, c2: &BigInt, n: usize) -> Result<Schwarzenberger> {
    if n < 2 {
        return Err(Error::Range(format!("Schwarzenberger conditions need n >= 2, got {n}")));
    }
    for m in 2..=n {
        if !(schwarzenberger_sum(c1, c2, m) % factorial(m as u64)).is_zero() {
            return Ok(Schwarzenberger::Violated { m });
        }
    }
    Ok(Schwarzenberger::Ok)
}

/// The single congruence `c2 (c2 + 1 - 3 c1 - 2 c1^2) = 0 mod 12` used on `P^4`.
pub fn schwarzenberger_p4_reduced(c1: &BigInt, c2: &BigInt) -> bool {
    let v: BigInt = c2 * (c2 + BigInt::one() - BigInt::from(3) * c1 - BigInt::from(2) * c1 * c1);
    (v % BigInt::from(12)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern_ring::parse_poly;
    use crate::scalar::{big, rat};

    fn problem(c: &[i64]) -> PrescriptionProblem {
        PrescriptionProblem::new(c.len() - 1, c.to_vec()).unwrap()
    }

    #[test]
    fn tilde_c_values() {
        let p = problem(&[1, 6, 6, 0, 0]);
        assert_eq!(tilde_c(&p.start_chern()).unwrap(), vec![rat(-108, 1), rat(1872, 1)]);
        let zero = parse_poly::<BigInt>(5, "1 + 3*H + 2*H^2").unwrap();
        assert!(tilde_c(&zero).unwrap().iter().all(|x| x.is_zero()));
        let c = parse_poly::<BigInt>(5, "1 + 2*H + 7*H^2 - 3*H^3 + 5*H^4 + 11*H^5").unwrap();
        let (c1, c2, c3, c4, c5) = (big(2), big(7), big(-3), big(5), big(11));
        let expected = -(c5 - &c1 * &c4 - &c3 * &c2 + &c3 * &c1 * &c1) * 5;
        assert_eq!(tilde_c(&c).unwrap()[2], rat_int(&expected));
    }

    #[test]
    fn schedule_and_power_sums() {
        let p = vec![big(18), big(240)];
        assert_eq!(weight_schedule(&big(1), &p, 3, &big(1)).unwrap(), big(-1));
        assert_eq!(weight_schedule(&big(1), &p, 3, &big(2)).unwrap(), big(0));
        assert_eq!(weight_schedule(&big(1), &p, 4, &big(1)).unwrap(), big(17));
        assert!(weight_schedule(&big(1), &p, 4, &big(241)).is_err());
        assert!(weight_schedule(&big(1), &p, 5, &big(1)).is_err());
        assert_eq!(s_kl(&big(1), &p, 3, 1).unwrap(), big(135));
        assert_eq!(s_kl(&big(1), &p, 3, 0).unwrap(), big(18));
        assert_eq!(s_kl(&big(1), &[big(0), big(3)], 3, 1).unwrap(), big(0));
        assert!(s_kl(&big(1), &p, 4, 1).is_err());
        // Against direct summation.
        let p = vec![big(7), big(5), big(4)];
        for k in 3..=5 {
            for l in 0..=(5 - k) {
                let direct: BigInt = (1..=p[k - 3].to_string().parse::<i64>().unwrap())
                    .map(|j| num_traits::pow(weight_schedule(&big(2), &p, k, &big(j)).unwrap(), l))
                    .sum();
                assert_eq!(s_kl(&big(2), &p, k, l).unwrap(), direct);
            }
        }
    }

    #[test]
    fn solver_examples() {
        let s = solve_p(&problem(&[1, 6, 6, 0, 0])).unwrap();
        assert_eq!(s.p, vec![big(18), big(240)]);
        assert_eq!(stage_equation(&big(1), &s.p, 4), big(1872));
        let s = solve_p(&problem(&[1, 7, 7, 7, 0])).unwrap();
        assert_eq!(s.p, vec![big(245), big(31752)]);
        assert_eq!(
            solve_p(&problem(&[1, 1, 1, 0, 0])),
            Err(Infeasible::NonInteger { q: 3, value: rat(1, 2) })
        );
    }

    #[test]
    fn closed_forms_agree() {
        for c in [[1, 6, 6, 0, 0], [1, 7, 7, 7, 0]] {
            let p = problem(&c);
            let closed = solve_p_closed_p4(&p.start_chern(), 1).unwrap();
            let solved = solve_p(&p).unwrap();
            assert_eq!(closed, solved.p.iter().map(rat_int).collect::<Vec<_>>());
        }
        let p = problem(&[1, 120, 120, 0, 0, 0]);
        let closed = solve_p_closed_p5(&p.start_chern()).unwrap();
        assert!(closed.iter().all(|x| x.is_integer() && !x.is_negative()));
        assert!(solve_p_closed_p4(&p.start_chern(), 1).is_err());
    }

    #[test]
    fn positivity_examples() {
        assert!(positivity_check_p4(&problem(&[1, 6, 6, 0, 0]).start_chern(), 1).unwrap());
        let c3_zero = parse_poly::<BigInt>(4, "1 + 5*H + 6*H^2").unwrap();
        assert!(positivity_check_p4(&c3_zero, 1).unwrap());
        let synthetic = parse_poly::<BigInt>(4, "1 + 2*H^3 + 100*H^4").unwrap();
        assert!(!positivity_check_p4(&synthetic, 0).unwrap());
    }

    #[test]
    fn schwarzenberger_examples() {
        assert_eq!(schwarzenberger(&big(13), &big(48), 4).unwrap(), Schwarzenberger::Ok);
        assert!(schwarzenberger_p4_reduced(&big(13), &big(48)));
        assert_eq!(big(48) * (big(48) + 1 - 39 - 338), big(-15744));
        assert!(matches!(
            schwarzenberger(&big(0), &big(1), 4).unwrap(),
            Schwarzenberger::Violated { m } if m == 3 || m == 4
        ));
        for a in -6..=6i64 {
            for b in -6..=6i64 {
                for n in 2..=6 {
                    assert!(schwarzenberger(&big(a + b), &big(a * b), n).unwrap().is_ok(), "{a} {b} {n}");
                }
            }
        }
        assert_eq!(rising_coeffs(3), vec![big(0), big(2), big(3), big(1)]);
    }
}
