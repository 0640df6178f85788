//! Places, valuations and absolute values of `K(var)`, normalized so that
//! `log q = 1` and every place `P` has weight `deg P` (infinity has weight 1).
//!
//! The same code serves `F_q(T)` (with `K = F_q`) and the tower `F(u)` (with
//! `K = F_q(T)`); only `support` needs factorization and so is restricted to
//! the former unless the caller supplies the primes.

mod height;

pub use height::{
    all_polys, bounded_height_set, local_weighted_max,
    enumerate_bounded_height, naive_height, weighted_height, weighted_height_by_places,
};

use crate::algebra::{BaseElem, BaseField, Factorable, Field, Poly, RatField, RatFunc};
use crate::error::{AlgebraError, Result};
use crate::rational::{int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place<E> {
    /// A monic irreducible polynomial.
    Finite(Poly<E>),
    Infinity,
}

impl<E> Place<E> {
    pub fn degree(&self) -> u64 {
        match self {
            Place::Finite(p) => p.deg0() as u64,
            Place::Infinity => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Finite(_))
    }
}

/// Which of the two ground fields a computation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Instance {
    BaseRational,
    Tower,
}

pub fn render_place<K: Field>(f: &RatField<K>, v: &Place<K::Elem>) -> String {
    match v {
        Place::Finite(p) => format!("({})", f.ring().render(p)),
        Place::Infinity => "inf".into(),
    }
}

/// Order of vanishing; `None` stands for `+inf` (only for `x = 0`).
pub fn valuation<K: Field>(f: &RatField<K>, x: &RatFunc<K::Elem>, v: &Place<K::Elem>) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let r = f.ring();
    Some(match v {
        Place::Infinity => x.den().deg0() as i64 - x.num().deg0() as i64,
        Place::Finite(p) => {
            // num and den are coprime, so at most one of them is divisible
            let (a, _) = r.split_power(x.num(), p);
            if a > 0 {
                a as i64
            } else {
                -(r.split_power(x.den(), p).0 as i64)
            }
        }
    })
}

/// `log |x|_v = -v(x) deg v`.
pub fn log_abs<K: Field>(f: &RatField<K>, x: &RatFunc<K::Elem>, v: &Place<K::Elem>) -> Result<Rat> {
    match valuation(f, x, v) {
        None => Err(AlgebraError::Domain("log|0| is -infinity".into())),
        Some(n) => Ok(int(-n * v.degree() as i64)),
    }
}

/// `log |x|_v`, or `None` for `x = 0`.
pub fn log_abs_opt<K: Field>(f: &RatField<K>, x: &RatFunc<K::Elem>, v: &Place<K::Elem>) -> Option<Rat> {
    valuation(f, x, v).map(|n| int(-n * v.degree() as i64))
}

/// Finite places dividing `p` (nonzero), in the order given by the factorizer.
pub fn prime_divisors<K: Factorable>(f: &RatField<K>, p: &Poly<K::Elem>, seed: u64) -> Result<Vec<Poly<K::Elem>>> {
    if p.deg0() == 0 {
        return Ok(Vec::new());
    }
    Ok(K::factor_poly(f.ring(), p, seed)?.into_iter().map(|(g, _)| g).collect())
}

/// Places where `x` has nonzero valuation; finite places first, then
/// infinity when `deg num != deg den`.
pub fn support<K: Factorable>(f: &RatField<K>, x: &RatFunc<K::Elem>) -> Result<Vec<Place<K::Elem>>> {
    if x.is_zero() {
        return Err(AlgebraError::Domain("support of zero".into()));
    }
    let seed = crate::algebra::factor::DEFAULT_FACTOR_SEED;
    let mut primes = prime_divisors(f, x.num(), seed)?;
    primes.extend(prime_divisors(f, x.den(), seed)?);
    let mut out: Vec<Place<K::Elem>> = primes.into_iter().map(Place::Finite).collect();
    if x.num().deg0() != x.den().deg0() {
        out.push(Place::Infinity);
    }
    Ok(out)
}

/// Support for elements given with known prime factors (needed in the tower
/// where no factorizer exists). Fails if the hints do not fully split `x`.
pub fn support_factored<K: Field>(
    f: &RatField<K>,
    x: &RatFunc<K::Elem>,
    primes: &[Poly<K::Elem>],
) -> Result<Vec<Place<K::Elem>>> {
    if x.is_zero() {
        return Err(AlgebraError::Domain("support of zero".into()));
    }
    let r = f.ring();
    let mut out = Vec::new();
    for part in [x.num(), x.den()] {
        let (found, rest) = crate::algebra::factor::split_by_hints(r, part, primes);
        if rest.deg0() > 0 {
            return Err(AlgebraError::UnsupportedField(format!(
                "factor {} not covered by the supplied primes",
                r.render(&rest)
            )));
        }
        out.extend(found.into_iter().map(|(g, _)| Place::Finite(g)));
    }
    if x.num().deg0() != x.den().deg0() {
        out.push(Place::Infinity);
    }
    Ok(out)
}

/// Union of supports of several nonzero elements, plus infinity, without
/// repeats. Zero entries are ignored.
pub fn joint_support<K: Factorable>(f: &RatField<K>, xs: &[&RatFunc<K::Elem>]) -> Result<Vec<Place<K::Elem>>> {
    let mut out: Vec<Place<K::Elem>> = Vec::new();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        for v in support(f, x)? {
            if v.is_finite() && !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out.push(Place::Infinity);
    Ok(out)
}

/// A `g`-th root of `x` in `F_q(T)`, if one exists.
pub fn nth_root(f: &BaseField, x: &BaseElem, g: u64) -> Result<Option<BaseElem>> {
    if g == 0 {
        return Err(AlgebraError::Domain("zeroth root".into()));
    }
    if x.is_zero() || g == 1 {
        return Ok(Some(x.clone()));
    }
    let r = f.ring();
    let fq = f.base();
    let seed = crate::algebra::factor::DEFAULT_FACTOR_SEED;
    let mut parts = Vec::new();
    for p in [x.num(), x.den()] {
        let mut root = r.one();
        if p.deg0() > 0 {
            for (h, m) in crate::algebra::factor::factor(r, p, seed)? {
                if !(m as u64).is_multiple_of(g) {
                    return Ok(None);
                }
                root = r.mul(&root, &r.pow(&h, m as u64 / g));
            }
        }
        parts.push(root);
    }
    let lead = *x.num().lead().unwrap();
    let c = match fq.nonzero_elements().find(|b| fq.pow(b, g) == lead) {
        Some(c) => c,
        None => return Ok(None),
    };
    let num = r.scale(&parts[0], &c);
    Ok(Some(f.frac_coprime(num, parts[1].clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{base_field, Fq, FqElem};

    fn p2(f: &crate::algebra::BaseField, c: &[u32]) -> RatFunc<FqElem> {
        f.from_poly(f.ring().from_coeffs(c.iter().map(|&x| FqElem(x)).collect()))
    }

    #[test]
    fn valuation_examples() {
        let f = base_field(Fq::prime(2).unwrap());
        let t = f.var();
        let pt = Place::Finite(f.ring().x());
        assert_eq!(valuation(&f, &t, &pt), Some(1));
        assert_eq!(valuation(&f, &f.inv(&t).unwrap(), &Place::Infinity), Some(1));
        let x = f.div(&p2(&f, &[0, 1, 1]), &p2(&f, &[1, 1])).unwrap();
        let pt1 = Place::Finite(f.ring().from_coeffs(vec![FqElem(1), FqElem(1)]));
        assert_eq!(valuation(&f, &x, &pt1), Some(0));
        assert_eq!(valuation(&f, &f.zero(), &pt1), None);
    }

    #[test]
    fn log_abs_examples() {
        let f = base_field(Fq::prime(2).unwrap());
        let t = f.var();
        assert_eq!(log_abs(&f, &t, &Place::Infinity).unwrap(), int(1));
        assert_eq!(log_abs(&f, &t, &Place::Finite(f.ring().x())).unwrap(), int(-1));
        let pt1 = Place::Finite(f.ring().from_coeffs(vec![FqElem(1), FqElem(1)]));
        assert_eq!(log_abs(&f, &p2(&f, &[1, 0, 1]), &pt1).unwrap(), int(-2));
        assert!(log_abs(&f, &f.zero(), &pt1).is_err());
    }

    #[test]
    fn support_examples() {
        let f = base_field(Fq::prime(2).unwrap());
        let r = f.ring();
        assert_eq!(support(&f, &f.var()).unwrap(), vec![Place::Finite(r.x()), Place::Infinity]);
        assert!(support(&f, &f.one()).unwrap().is_empty());
        let x = f.div(&p2(&f, &[1, 0, 1]), &f.var()).unwrap();
        let s = support(&f, &x).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.contains(&Place::Finite(r.from_coeffs(vec![FqElem(1), FqElem(1)]))));
        assert!(s.contains(&Place::Finite(r.x())));
        assert!(s.contains(&Place::Infinity));
    }

    #[test]
    fn tower_support_needs_hints() {
        let f = crate::algebra::tower_field(Fq::prime(2).unwrap());
        let u = f.var();
        let x = f.add(&u, &f.one());
        let tower = support_factored(&f, &x, &[f.ring().x()]);
        assert!(matches!(tower, Err(AlgebraError::UnsupportedField(_))));
        let s = support_factored(&f, &x, &[x.num().clone()]).unwrap();
        assert_eq!(s, vec![Place::Finite(x.num().clone()), Place::Infinity]);
    }
}
