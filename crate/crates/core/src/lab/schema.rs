//! JSON forms of the objects the CLI reads and writes.
//!
//! * `F_q` element: vector of `e` integers mod `p` (a bare integer is accepted
//!   for prime fields).
//! * polynomial: array of elements, lowest degree first.
//! * element of `F_q(T)`: `{"num": poly, "den": poly}`, `den` defaulting to 1;
//!   a bare polynomial array is also accepted.
//! * module: `{"q": .., "rank": .., "phi_T": [a_1, .., a_r]}`.
//! * element of `F(u)`: `{"u_num": [..], "u_den": [..]}` with coefficients in
//!   `F_q(T)`.
//! * place: `{"kind": "finite", "poly": ..}` or `{"kind": "infinity"}`.

use serde_json::{json, Value};

use crate::algebra::{BaseElem, BaseField, Field, Fq, FqConfig, FqElem, Poly, TowerElem, TowerField};
use crate::drinfeld::DrinfeldModule;
use crate::global_field::Place;
use crate::minimality::DiscDivisor;
use crate::rational::{fmt_rat, parse_rat, Rat};

/// A schema violation at a JSON path.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {msg}")]
pub struct SchemaError {
    pub path: String,
    pub msg: String,
}

pub type SResult<T> = std::result::Result<T, SchemaError>;

fn err<T>(path: &str, msg: impl Into<String>) -> SResult<T> {
    Err(SchemaError { path: path.to_string(), msg: msg.into() })
}

pub fn field_of<'a>(v: &'a Value, path: &str, key: &str) -> SResult<&'a Value> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => err(&format!("{path}.{key}"), "missing field"),
    }
}

pub fn as_u64(v: &Value, path: &str) -> SResult<u64> {
    v.as_u64().map_or_else(|| err(path, "expected a nonnegative integer"), Ok)
}

pub fn as_array<'a>(v: &'a Value, path: &str) -> SResult<&'a Vec<Value>> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

pub fn as_rat(v: &Value, path: &str) -> SResult<Rat> {
    match v {
        Value::String(s) => parse_rat(s).or_else(|e| err(path, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(crate::rational::int(n.as_i64().unwrap())),
        _ => err(path, "expected a rational string \"a/b\""),
    }
}

pub fn parse_field(v: &Value, path: &str) -> SResult<Fq> {
    let p = as_u64(field_of(v, path, "p")?, &format!("{path}.p"))?;
    let e = as_u64(field_of(v, path, "e")?, &format!("{path}.e"))?;
    let m = as_array(field_of(v, path, "modulus")?, &format!("{path}.modulus"))?;
    let mut modulus = Vec::new();
    for (i, c) in m.iter().enumerate() {
        modulus.push(as_u64(c, &format!("{path}.modulus[{i}]"))? as u32);
    }
    let cfg = FqConfig { p: p as u32, e: e as u32, modulus };
    Fq::new(cfg).or_else(|x| err(path, x.to_string()))
}

pub fn field_json(fq: &Fq) -> Value {
    let c = fq.config();
    json!({"p": c.p, "e": c.e, "modulus": c.modulus})
}

pub fn parse_fq_elem(fq: &Fq, v: &Value, path: &str) -> SResult<FqElem> {
    let p = fq.p() as u64;
    let digits: Vec<u32> = match v {
        Value::Number(_) if fq.e() == 1 => {
            let n = as_u64(v, path)?;
            vec![n as u32]
        }
        Value::Array(a) => {
            let mut d = Vec::new();
            for (i, x) in a.iter().enumerate() {
                d.push(as_u64(x, &format!("{path}[{i}]"))? as u32);
            }
            d
        }
        _ => return err(path, "expected an integer vector"),
    };
    if digits.len() != fq.e() as usize {
        return err(path, format!("expected {} coefficients", fq.e()));
    }
    if digits.iter().any(|&d| d as u64 >= p) {
        return err(path, format!("coefficients must be reduced mod {p}"));
    }
    fq.from_coeffs(&digits).or_else(|x| err(path, x.to_string()))
}

pub fn fq_elem_json(fq: &Fq, a: FqElem) -> Value {
    json!(fq.coeffs(a))
}

pub fn parse_poly(f: &BaseField, v: &Value, path: &str) -> SResult<Poly<FqElem>> {
    let a = as_array(v, path)?;
    let mut c = Vec::new();
    for (i, x) in a.iter().enumerate() {
        c.push(parse_fq_elem(f.base(), x, &format!("{path}[{i}]"))?);
    }
    Ok(f.ring().from_coeffs(c))
}

pub fn poly_json(fq: &Fq, p: &Poly<FqElem>) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| fq_elem_json(fq, c)).collect())
}

pub fn parse_elem(f: &BaseField, v: &Value, path: &str) -> SResult<BaseElem> {
    match v {
        Value::Array(_) => Ok(f.from_poly(parse_poly(f, v, path)?)),
        Value::Object(_) => {
            let num = parse_poly(f, field_of(v, path, "num")?, &format!("{path}.num"))?;
            let den = match v.get("den") {
                None => f.ring().one(),
                Some(d) => parse_poly(f, d, &format!("{path}.den"))?,
            };
            if den.is_zero() {
                return err(&format!("{path}.den"), "zero denominator");
            }
            Ok(f.frac(num, den).unwrap())
        }
        _ => err(path, "expected {\"num\", \"den\"} or a coefficient array"),
    }
}

pub fn elem_json(f: &BaseField, x: &BaseElem) -> Value {
    json!({"num": poly_json(f.base(), x.num()), "den": poly_json(f.base(), x.den())})
}

pub fn parse_module(f: &BaseField, v: &Value, path: &str) -> SResult<DrinfeldModule<Fq>> {
    let q = as_u64(field_of(v, path, "q")?, &format!("{path}.q"))?;
    if q != f.base().q() {
        return err(&format!("{path}.q"), format!("field has q = {}", f.base().q()));
    }
    let r = as_u64(field_of(v, path, "rank")?, &format!("{path}.rank"))?;
    let a = as_array(field_of(v, path, "phi_T")?, &format!("{path}.phi_T"))?;
    if a.len() as u64 != r || r == 0 {
        return err(&format!("{path}.phi_T"), format!("expected rank = {r} > 0 coefficients a_1..a_r"));
    }
    let mut coeffs = Vec::new();
    for (i, x) in a.iter().enumerate() {
        coeffs.push(parse_elem(f, x, &format!("{path}.phi_T[{i}]"))?);
    }
    DrinfeldModule::new(f.clone(), coeffs).or_else(|e| err(&format!("{path}.phi_T[{}]", r - 1), e.to_string()))
}

pub fn module_json<K: Field>(m: &DrinfeldModule<K>, elem: impl Fn(&crate::algebra::RatFunc<K::Elem>) -> Value) -> Value {
    json!({"q": m.q(), "rank": m.rank(), "phi_T": m.coeffs().iter().map(elem).collect::<Vec<_>>()})
}

pub fn base_module_json(m: &DrinfeldModule<Fq>) -> Value {
    module_json(m, |x| elem_json(m.field(), x))
}

pub fn parse_tower_elem(f: &TowerField, v: &Value, path: &str) -> SResult<TowerElem> {
    let base = f.base();
    let part = |key: &str| -> SResult<Option<Poly<BaseElem>>> {
        match v.get(key) {
            None => Ok(None),
            Some(a) => {
                let p = format!("{path}.{key}");
                let arr = as_array(a, &p)?;
                let mut c = Vec::new();
                for (i, x) in arr.iter().enumerate() {
                    c.push(parse_elem(base, x, &format!("{p}[{i}]"))?);
                }
                Ok(Some(f.ring().from_coeffs(c)))
            }
        }
    };
    let num = match part("u_num")? {
        Some(n) => n,
        None => return err(&format!("{path}.u_num"), "missing field"),
    };
    let den = part("u_den")?.unwrap_or_else(|| f.ring().one());
    if den.is_zero() {
        return err(&format!("{path}.u_den"), "zero denominator");
    }
    Ok(f.frac(num, den).unwrap())
}

pub fn tower_elem_json(f: &TowerField, x: &TowerElem) -> Value {
    let b = f.base();
    let side = |p: &Poly<BaseElem>| Value::Array(p.coeffs().iter().map(|c| elem_json(b, c)).collect());
    json!({"u_num": side(x.num()), "u_den": side(x.den())})
}

pub fn parse_place(f: &BaseField, v: &Value, path: &str) -> SResult<Place<FqElem>> {
    match field_of(v, path, "kind")?.as_str() {
        Some("infinity") => Ok(Place::Infinity),
        Some("finite") => {
            let p = parse_poly(f, field_of(v, path, "poly")?, &format!("{path}.poly"))?;
            if !f.ring().is_monic(&p) || !crate::algebra::factor::is_irreducible(f.ring(), &p) {
                return err(&format!("{path}.poly"), "place polynomial must be monic irreducible");
            }
            Ok(Place::Finite(p))
        }
        _ => err(&format!("{path}.kind"), "expected \"finite\" or \"infinity\""),
    }
}

pub fn place_json(fq: &Fq, v: &Place<FqElem>) -> Value {
    match v {
        Place::Finite(p) => json!({"kind": "finite", "poly": poly_json(fq, p)}),
        Place::Infinity => json!({"kind": "infinity"}),
    }
}

pub fn divisor_json(fq: &Fq, d: &DiscDivisor) -> Value {
    Value::Array(d.entries.iter().map(|(v, c)| json!({"place": place_json(fq, v), "coeff": fmt_rat(c)})).collect())
}

pub fn rat_json(x: &Rat) -> Value {
    Value::String(fmt_rat(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::base_field;

    #[test]
    fn round_trips() {
        let f = base_field(Fq::prime(3).unwrap());
        let t = f.var();
        let x = f.div(&f.add(&t, &f.one()), &f.mul(&t, &t)).unwrap();
        assert_eq!(parse_elem(&f, &elem_json(&f, &x), "$").unwrap(), x);
        let m = DrinfeldModule::new(f.clone(), vec![x.clone(), t.clone()]).unwrap();
        assert_eq!(parse_module(&f, &base_module_json(&m), "$").unwrap(), m);
        let v = Place::Finite(f.ring().x());
        assert_eq!(parse_place(&f, &place_json(f.base(), &v), "$").unwrap(), v);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let f = base_field(Fq::prime(2).unwrap());
        let bad = json!({"q": 2, "rank": 2, "phi_T": [[[1]], {"num": [[2]]}]});
        let e = parse_module(&f, &bad, "$.module").unwrap_err();
        assert_eq!(e.path, "$.module.phi_T[1].num[0]");
        let zero_lead = json!({"q": 2, "rank": 1, "phi_T": [[]]});
        assert!(parse_module(&f, &zero_lead, "$").is_err());
        assert!(parse_field(&json!({"p": 4, "e": 1, "modulus": [0, 1]}), "$.field").is_err());
    }
}
