//! Truncated polynomial rings `R[H] / <H^{n+1}>`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// An element of `R[H] / <H^{n+1}>`; always exactly `n + 1` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TruncPoly<T> {
    pub fn zero(n: usize) -> Self {
        TruncPoly { coeffs: vec![T::zero(); n + 1] }
    }

    pub fn one(n: usize) -> Self {
        let mut p = Self::zero(n);
        p.coeffs[0] = T::one();
        p
    }

    /// Pads with zeros; errors if a nonzero coefficient lies above degree `n`.
    pub fn from_coeffs(n: usize, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.iter().skip(n + 1).any(|c| !c.is_zero()) {
            return Err(Error::Shape(format!(
                "{} coefficients do not fit modulo H^{}",
                coeffs.len(),
                n + 1
            )));
        }
        Ok(Self::truncated(n, coeffs))
    }

    /// Pads with zeros and silently drops everything above degree `n`.
    pub fn truncated(n: usize, mut coeffs: Vec<T>) -> Self {
        coeffs.resize(n + 1, T::zero());
        TruncPoly { coeffs }
    }

    /// `1 - x H`.
    pub fn linear(n: usize, x: T) -> Self {
        let mut p = Self::one(n);
        if n >= 1 {
            p.coeffs[1] = -x;
        }
        p
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Shape(format!(
                "truncation degrees {} and {} differ",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(TruncPoly {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(TruncPoly {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        TruncPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        TruncPoly { coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n();
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(TruncPoly { coeffs: out })
    }

    /// Multiplicative inverse of `c0`, if `c0` is a unit of the scalar ring.
    fn unit_inverse(c0: &T) -> Option<T> {
        if c0.is_zero() {
            return None;
        }
        let inv = T::one() / c0.clone();
        if (inv.clone() * c0.clone()).is_one() {
            Some(inv)
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv0 = Self::unit_inverse(&self.coeffs[0]).ok_or(Error::NotInvertible)?;
        let n = self.n();
        let mut b = vec![T::zero(); n + 1];
        b[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = T::zero();
            for i in 1..=k {
                acc = acc + self.coeffs[i].clone() * b[k - i].clone();
            }
            b[k] = -(acc * inv0.clone());
        }
        Ok(TruncPoly { coeffs: b })
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one(self.n());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same degree");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same degree");
            }
        }
        result
    }

    pub fn int_pow(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TruncPoly<U> {
        TruncPoly { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl TruncPoly<BigInt> {
    /// `(1 - x H)^e` for any integer `e`, via generalized binomial coefficients.
    pub fn linear_pow(n: usize, x: &BigInt, e: &BigInt) -> Self {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut binom = BigInt::one();
        let mut xpow = BigInt::one();
        for k in 0..=n as u64 {
            if k > 0 {
                binom = binom * (e - BigInt::from(k - 1)) / BigInt::from(k);
                xpow *= -x;
            }
            coeffs.push(&binom * &xpow);
        }
        TruncPoly { coeffs }
    }

    pub fn to_rational(&self) -> TruncPoly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn log(&self) -> Result<TruncPoly<BigRational>> {
        self.to_rational().log()
    }
}

impl TruncPoly<BigRational> {
    /// The integer polynomial with the same coefficients, if all are integral.
    pub fn to_integer(&self) -> Option<TruncPoly<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
            .collect::<Option<Vec<_>>>()
            .map(|coeffs| TruncPoly { coeffs })
    }
}

impl<T: Field> TruncPoly<T> {
    /// Formal logarithm `-sum_{i=1}^n (-1)^i R^i / i` of `1 + R`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        let n = self.n();
        let mut r = self.clone();
        r.coeffs[0] = T::zero();
        let mut out = Self::zero(n);
        let mut power = Self::one(n);
        for i in 1..=n {
            power = power.mul(&r)?;
            let sign = if i % 2 == 1 { T::one() } else { -T::one() };
            let w = sign / T::from_usize(i).expect("small integer");
            out = out.add(&power.scale(&w))?;
        }
        Ok(out)
    }

    /// Truncated `sum_{i=0}^n a^i / i!`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs constant term 0".into()));
        }
        let n = self.n();
        let mut out = Self::one(n);
        let mut term = Self::one(n);
        for i in 1..=n {
            term = term.mul(self)?.scale(&(T::one() / T::from_usize(i).expect("small integer")));
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl<T: Scalar> fmt::Display for TruncPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign_neg = c.is_negative();
            if first {
                if sign_neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if sign_neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*H")?,
                _ => write!(f, "{mag}*H^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses the rendering grammar, e.g. `1 + 13*H + 48*H^2 - 1*H^3`.
pub fn parse_poly<T: Scalar + std::str::FromStr>(n: usize, text: &str) -> Result<TruncPoly<T>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs = vec![T::zero(); n + 1];
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        // A sign splits terms unless it follows '^' or '/' (exponent or fraction).
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'/' {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    for term in terms {
        let (neg, body) = match term.as_bytes()[0] {
            b'+' => (false, &term[1..]),
            b'-' => (true, &term[1..]),
            _ => (false, term),
        };
        let (coef_txt, deg) = match body.find('H') {
            None => (body, 0usize),
            Some(pos) => {
                let coef = body[..pos].trim_end_matches('*');
                let rest = &body[pos + 1..];
                let deg = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in term {term:?}")))?
                };
                (if coef.is_empty() { "1" } else { coef }, deg)
            }
        };
        let mut c: T = coef_txt
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient in term {term:?}")))?;
        if neg {
            c = -c;
        }
        if deg > n {
            if c.is_zero() {
                continue;
            }
            return Err(Error::Shape(format!("degree {deg} exceeds truncation {n}")));
        }
        coeffs[deg] = coeffs[deg].clone() + c;
    }
    Ok(TruncPoly { coeffs })
}
