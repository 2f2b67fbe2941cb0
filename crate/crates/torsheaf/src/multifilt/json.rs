//! JSON encoding of subspaces and multifiltrations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use super::{Multifiltration, Sub};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};

fn parse_err(what: impl Into<String>) -> Error {
    Error::Parse(what.into())
}

pub(crate) fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(format!("{what} must be an integer")))
}

pub(crate) fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

pub(crate) fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field \"{key}\"")))
}

pub(crate) fn int_list(v: &Value, what: &str) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))?
        .iter()
        .map(|x| as_i64(x, what))
        .collect()
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(parse_err("matrix entries must be strings or integers")),
    };
    let bad = || parse_err(format!("bad rational {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p.trim().parse().map_err(|_| bad())?, q))
        }
        None => Ok(BigRational::from_integer(text.trim().parse().map_err(|_| bad())?)),
    }
}

/// Primitive integer representative of a rank-2 line, first nonzero entry positive.
pub(crate) fn line_pair(s: &Sub) -> Option<(BigInt, BigInt)> {
    if s.rank() != 2 || s.dim() != 1 {
        return None;
    }
    let row = &s.rows()[0];
    let den = row[0].denom().lcm(row[1].denom());
    let p = (&row[0] * BigRational::from_integer(den.clone())).to_integer();
    let q = (&row[1] * BigRational::from_integer(den)).to_integer();
    let g = p.gcd(&q);
    let (p, q) = (p / &g, q / &g);
    Some(if p.is_negative() || (p.is_zero() && q.is_negative()) { (-p, -q) } else { (p, q) })
}

pub fn subspace_to_json(s: &Sub) -> Value {
    if s.is_zero() {
        return json!({"kind": "zero"});
    }
    if s.is_full() {
        return json!({"kind": "full"});
    }
    if let Some((p, q)) = line_pair(s) {
        return json!({"kind": "line", "line": [big_json(&p), big_json(&q)]});
    }
    let rows: Vec<Value> = s
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
        .collect();
    json!({"kind": "basis", "rows": rows})
}

pub fn subspace_from_json(v: &Value, rank: usize) -> Result<Sub> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| parse_err("subspace kind must be a string"))?;
    match kind {
        "zero" => Ok(Sub::zero(rank)),
        "full" => Ok(Sub::full(rank)),
        "line" => {
            if rank != 2 {
                return Err(parse_err("kind \"line\" needs rank 2"));
            }
            let pair = field(v, "line")?.as_array().ok_or_else(|| parse_err("line must be [p, q]"))?;
            if pair.len() != 2 {
                return Err(parse_err("line must be [p, q]"));
            }
            let row = vec![parse_rational(&pair[0])?, parse_rational(&pair[1])?];
            if row.iter().all(|x| x.is_zero()) {
                return Err(parse_err("line [0, 0] is not a line"));
            }
            Sub::span(2, vec![row])
        }
        "basis" => {
            let rows = field(v, "rows")?
                .as_array()
                .ok_or_else(|| parse_err("rows must be an array"))?
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| parse_err("each row must be an array"))?
                        .iter()
                        .map(parse_rational)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Sub::span(rank, rows)
        }
        other => Err(parse_err(format!("unknown subspace kind {other:?}"))),
    }
}

/// Exact JSON number for a big integer.
pub fn big_json(x: &BigInt) -> Value {
    serde_json::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

pub fn multifiltration_to_json(m: &Multifiltration) -> Map<String, Value> {
    let cones: Vec<Value> = m
        .jumps()
        .into_iter()
        .map(|(cone, jumps)| {
            let jumps: Vec<Value> = jumps
                .iter()
                .map(|(c, s)| json!({"coords": c, "subspace": subspace_to_json(s)}))
                .collect();
            json!({"rays": cone.rays(), "jumps": jumps})
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("n".into(), json!(m.n()));
    obj.insert("rank".into(), json!(m.rank()));
    obj.insert("cones".into(), Value::Array(cones));
    obj
}

pub fn multifiltration_from_json(v: &Value) -> Result<Multifiltration> {
    let fan = Fan::new(as_usize(field(v, "n")?, "n")?)?;
    let rank = as_usize(field(v, "rank")?, "rank")?;
    if rank == 0 {
        return Err(parse_err("rank must be positive"));
    }
    let cones = field(v, "cones")?
        .as_array()
        .ok_or_else(|| parse_err("cones must be an array"))?
        .iter()
        .map(|c| {
            let rays: Vec<usize> = field(c, "rays")?
                .as_array()
                .ok_or_else(|| parse_err("rays must be an array"))?
                .iter()
                .map(|r| as_usize(r, "ray index"))
                .collect::<Result<_>>()?;
            let cone = Cone::new(rays.iter().copied());
            if cone.dim() != rays.len() {
                return Err(parse_err(format!("repeated ray in {rays:?}")));
            }
            let jumps = field(c, "jumps")?
                .as_array()
                .ok_or_else(|| parse_err("jumps must be an array"))?
                .iter()
                .map(|j| Ok((int_list(field(j, "coords")?, "coords")?, subspace_from_json(field(j, "subspace")?, rank)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok((cone, jumps))
        })
        .collect::<Result<Vec<_>>>()?;
    Multifiltration::from_jumps(fan, rank, cones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_traits::One;

    #[test]
    fn subspace_kinds_round_trip() {
        let line = Sub::span(2, vec![vec![rat(-2, 1), rat(4, 3)]]).unwrap();
        let v = subspace_to_json(&line);
        assert_eq!(v, json!({"kind": "line", "line": [3, -2]}));
        assert_eq!(subspace_from_json(&v, 2).unwrap(), line);
        let plane = Sub::span(3, vec![vec![rat(1, 1), rat(0, 1), rat(-1, 2)], vec![rat(0, 1), rat(1, 1), rat(0, 1)]]).unwrap();
        let v = subspace_to_json(&plane);
        assert_eq!(v, json!({"kind": "basis", "rows": [["1", "0", "-1/2"], ["0", "1", "0"]]}));
        assert_eq!(subspace_from_json(&v, 3).unwrap(), plane);
        assert_eq!(subspace_from_json(&json!({"kind": "zero"}), 2).unwrap(), Sub::zero(2));
        assert!(subspace_from_json(&json!({"kind": "line", "line": [0, 0]}), 2).is_err());
        assert!(subspace_from_json(&json!({"kind": "plane"}), 2).is_err());
    }

    #[test]
    fn vertical_line_is_canonical() {
        let v = Sub::span(2, vec![vec![rat(0, 1), rat(-5, 1)]]).unwrap();
        assert_eq!(line_pair(&v), Some((BigInt::zero(), BigInt::one())));
    }
}
