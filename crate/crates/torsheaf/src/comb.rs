//! Small exact combinatorics shared by several modules.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(e, k)` for an arbitrary integer `e`, i.e. `e (e-1) ... (e-k+1) / k!`.
pub fn gen_binomial(e: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= e - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Stirling numbers of the second kind `S(p, k)` for `0 <= p, k <= max`.
pub fn stirling2_table(max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); max + 1]; max + 1];
    s[0][0] = BigInt::one();
    for p in 1..=max {
        for k in 1..=p {
            s[p][k] = BigInt::from(k) * &s[p - 1][k] + &s[p - 1][k - 1];
        }
    }
    s
}

/// `sum_{j=0}^{count-1} j^s` for every `s <= max_s`, in closed form.
pub fn power_sums_from_zero(count: &BigInt, max_s: usize) -> Vec<BigInt> {
    let st = stirling2_table(max_s);
    (0..=max_s)
        .map(|s| {
            let mut total = BigInt::zero();
            for k in 0..=s {
                if st[s][k].is_zero() {
                    continue;
                }
                total += &st[s][k] * factorial(k as u64) * big_binomial(count, k as u64 + 1);
            }
            total
        })
        .collect()
}

/// `C(n, k)` with a big, nonnegative top argument.
pub fn big_binomial(n: &BigInt, k: u64) -> BigInt {
    if n < &BigInt::from(k) {
        return BigInt::zero();
    }
    gen_binomial(n, k)
}
