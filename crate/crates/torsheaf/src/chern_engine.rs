//! Chern polynomials of multifiltrations and the closed-form ratios attached
//! to elementary injections.
//!
//! [`chern_general`] multiplies one linear factor per cone and grid class,
//! with exponent the signed mixed difference of dimensions. The remaining
//! functions are closed forms that tests and the prescription solver compare
//! against it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::comb::binomial;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::multifilt::{indices, ElementaryInjection, Multifiltration};
use crate::{TruncIntPoly, TruncRatPoly};

/// `A_{p,k} = sum_i C(k,i) (-1)^i i^p`, tabulated for `p, k <= max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingA {
    table: Vec<Vec<BigInt>>,
}

impl StirlingA {
    pub fn new(max: usize) -> Self {
        let mut table = vec![vec![BigInt::zero(); max + 1]; max + 1];
        table[0][0] = BigInt::one();
        for p in 1..=max {
            for k in 1..=max {
                table[p][k] = BigInt::from(k) * (&table[p - 1][k] - &table[p - 1][k - 1]);
            }
        }
        StirlingA { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    pub fn get(&self, p: usize, k: usize) -> BigInt {
        if p < k {
            return BigInt::zero();
        }
        self.table[p][k].clone()
    }
}

pub fn stirling_a(p: usize, k: usize) -> BigInt {
    if p < k {
        return BigInt::zero();
    }
    StirlingA::new(p).get(p, k)
}

/// Product of `(1 - x H)^e` over an exponent map.
fn product_of_linears(n: usize, exps: &BTreeMap<BigInt, BigInt>) -> TruncIntPoly {
    exps.iter()
        .filter(|(_, e)| !e.is_zero())
        .fold(TruncIntPoly::one(n), |acc, (x, e)| {
            acc.mul(&TruncIntPoly::linear_pow(n, x, e)).expect("same degree")
        })
}

fn bump(exps: &mut BTreeMap<BigInt, BigInt>, x: BigInt, e: BigInt) {
    if e.is_zero() {
        return;
    }
    let slot = exps.entry(x).or_insert_with(BigInt::zero);
    *slot += e;
}

/// Exponents `(-1)^codim [E^σ](m)` keyed by `<u_σ, m>`, over every cone.
pub fn klyachko_exponents(m: &Multifiltration) -> BTreeMap<BigInt, BigInt> {
    let n = m.n();
    let (pal, tables) = m.parts();
    let mut exps = BTreeMap::new();
    for (cone, t) in tables {
        if cone.dim() == 0 {
            continue;
        }
        let d = cone.dim();
        let sign: i64 = if (n - d) % 2 == 0 { 1 } else { -1 };
        let dims = t.dims();
        for idx in indices(&dims) {
            let mut mixed: i64 = 0;
            for eps in 0u32..(1 << d) {
                let mut j = idx.clone();
                let mut inside = true;
                for (axis, slot) in j.iter_mut().enumerate() {
                    if eps >> axis & 1 == 1 {
                        if *slot == 0 {
                            inside = false;
                            break;
                        }
                        *slot -= 1;
                    }
                }
                if !inside {
                    continue;
                }
                let dim = pal.dim(t.get(&j)) as i64;
                mixed += if eps.count_ones() % 2 == 0 { dim } else { -dim };
            }
            if mixed != 0 {
                let x: i64 = t.corner(&idx).iter().sum();
                bump(&mut exps, BigInt::from(x), BigInt::from(sign * mixed));
            }
        }
    }
    exps
}

/// Total Chern class of a valid multifiltration.
pub fn chern_general(m: &Multifiltration) -> Result<TruncIntPoly> {
    m.ensure_valid()?;
    Ok(chern_trusted(m))
}

/// [`chern_general`] without the validation pass, for multifiltrations built
/// by operations that preserve validity.
pub(crate) fn chern_trusted(m: &Multifiltration) -> TruncIntPoly {
    product_of_linears(m.n(), &klyachko_exponents(m))
}

/// `c(F) / c(E)` for a saturated elementary injection with the given
/// codimension and weight.
pub fn ratio_saturated(k0: usize, m_big_sigma: &BigInt, n: usize) -> Result<TruncIntPoly> {
    if k0 == 0 || k0 > n {
        return Err(Error::Range(format!("k0 = {k0} outside 1..={n}")));
    }
    let mut exps = BTreeMap::new();
    for i in 0..=k0 {
        let b = binomial(k0 as u64, i as u64);
        bump(&mut exps, m_big_sigma + BigInt::from(i), if i % 2 == 0 { b } else { -b });
    }
    Ok(product_of_linears(n, &exps))
}

/// The same ratio as a product over the cofaces of `σ0`.
pub fn ratio_saturated_conewise(fan: &Fan, inj: &ElementaryInjection) -> Result<TruncIntPoly> {
    if !inj.saturated {
        return Err(Error::Domain(format!(
            "injection at {}, {:?} is not saturated",
            inj.sigma0, inj.m0
        )));
    }
    let n = fan.n();
    let mut exps = BTreeMap::new();
    for (cone, ms) in &inj.m_sigma {
        let outer = if fan.codim(cone) % 2 == 0 { 1 } else { -1 };
        for i in 0..=inj.k0 {
            let b = binomial(inj.k0 as u64, i as u64);
            let s = if i % 2 == 0 { outer } else { -outer };
            bump(&mut exps, BigInt::from(*ms + i as i64), b * s);
        }
    }
    Ok(product_of_linears(n, &exps))
}

/// `-sum_{k=k0}^n (sum_{l=k0}^k C(k,l) A_{l,k0} m^{k-l}) H^k / k`.
pub fn log_ratio_saturated(k0: usize, m_big_sigma: &BigInt, n: usize) -> TruncRatPoly {
    let a = StirlingA::new(n.max(k0));
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for (k, slot) in coeffs.iter_mut().enumerate().skip(k0.max(1)) {
        let mut inner = BigInt::zero();
        for l in k0..=k {
            inner += binomial(k as u64, l as u64) * a.get(l, k0) * num_traits::pow(m_big_sigma.clone(), k - l);
        }
        *slot = -BigRational::new(inner, BigInt::from(k));
    }
    TruncRatPoly::truncated(n, coeffs)
}

/// Predicted coefficients of `H^{k0}` and `H^{k0+1}` in `log(c(F)/c(E))`.
pub fn log_ratio_leading(k0: usize, m_big_sigma: &BigInt) -> (BigRational, BigRational) {
    let a = StirlingA::new(k0 + 1);
    let sign = if k0 % 2 == 1 { BigInt::one() } else { -BigInt::one() };
    let lead = sign * crate::comb::factorial(k0.saturating_sub(1) as u64);
    let next = -(BigRational::from_integer(a.get(k0, k0) * m_big_sigma)
        + BigRational::new(a.get(k0 + 1, k0), BigInt::from(k0 + 1)));
    (BigRational::from_integer(lead), next)
}

/// Telescoping product over `m >= a` against its closed form, mod `H^{n+1}`.
///
/// Exponents are accumulated over the window `[a, a+n+2]`; only factors whose
/// contributions all lie in the window are kept, and those beyond `d` must
/// have cancelled.
pub fn identity_product(a: i64, m: i64, d: usize, n: usize) -> Result<bool> {
    if d < 2 || d > n {
        return Err(Error::Precondition(format!("need 2 <= d = {d} <= n = {n}")));
    }
    let window = n as i64 + 2;
    let outer: i64 = if (n - d) % 2 == 0 { 1 } else { -1 };
    let mut alpha: BTreeMap<i64, BigInt> = BTreeMap::new();
    for shift in 0..=window {
        for i in 0..=d {
            let j = shift + i as i64;
            let e = binomial(d as u64, i as u64) * if i % 2 == 0 { outer } else { -outer };
            *alpha.entry(j).or_insert_with(BigInt::zero) += e;
        }
    }
    let mut left = BTreeMap::new();
    for (j, e) in alpha.into_iter().filter(|(j, _)| *j <= window) {
        if j >= d as i64 && !e.is_zero() {
            return Err(Error::Stabilization(format!("exponent {e} at offset {j} did not cancel")));
        }
        bump(&mut left, BigInt::from(m + a + j), e);
    }
    let mut right = BTreeMap::new();
    for i in 0..d {
        let b = binomial(d as u64 - 1, i as u64);
        bump(&mut right, BigInt::from(m + a + i as i64), if i % 2 == 0 { b * outer } else { -b * outer });
    }
    Ok(product_of_linears(n, &left) == product_of_linears(n, &right))
}

/// `sum_{σ0 <= σ} (-1)^codim(σ) m_σ^p == m_Σ^p`, by enumeration of cofaces.
pub fn identity_cone_sum(fan: &Fan, sigma0: &Cone, m_rho: &[i64], p: usize) -> Result<bool> {
    if !fan.is_cone(sigma0) {
        return Err(Error::Shape(format!("{sigma0} is not a cone")));
    }
    if m_rho.len() != fan.ray_count() {
        return Err(Error::Shape(format!("{} weights for {} rays", m_rho.len(), fan.ray_count())));
    }
    if p > fan.codim(sigma0) {
        return Err(Error::Precondition(format!("p = {p} exceeds codim {}", fan.codim(sigma0))));
    }
    let mut total = BigInt::zero();
    for cone in fan.cofaces(sigma0) {
        let ms: i64 = cone.rays().iter().map(|r| m_rho[*r]).sum();
        let term = num_traits::pow(BigInt::from(ms), p);
        if fan.codim(&cone) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    let big: i64 = m_rho.iter().sum();
    Ok(total == num_traits::pow(BigInt::from(big), p))
}
