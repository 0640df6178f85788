//! The rational function field `K(var)`.

use super::field::Field;
use super::fq::{Fq, FqElem};
use super::poly::{Poly, PolyRing};
use crate::error::{AlgebraError, Result};

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc<E> {
    num: Poly<E>,
    den: Poly<E>,
}

impl<E> RatFunc<E> {
    pub fn num(&self) -> &Poly<E> {
        &self.num
    }

    pub fn den(&self) -> &Poly<E> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `max(deg num, deg den)`.
    pub fn naive_degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }
}

#[derive(Clone, Debug)]
pub struct RatField<K: Field> {
    ring: PolyRing<K>,
}

impl<K: Field> RatField<K> {
    pub fn new(base: K, var: &'static str) -> Self {
        RatField { ring: PolyRing::new(base, var) }
    }

    pub fn ring(&self) -> &PolyRing<K> {
        &self.ring
    }

    pub fn base(&self) -> &K {
        self.ring.base()
    }

    /// Canonical form of `num / den`.
    pub fn frac(&self, num: Poly<K::Elem>, den: Poly<K::Elem>) -> Result<RatFunc<K::Elem>> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.reduce(num, den))
    }

    fn reduce(&self, num: Poly<K::Elem>, den: Poly<K::Elem>) -> RatFunc<K::Elem> {
        let r = &self.ring;
        if num.is_zero() {
            return RatFunc { num, den: r.one() };
        }
        let (num, den) = if r.is_constant(&den) {
            (num, den)
        } else {
            let g = r.gcd(&num, &den);
            if r.is_one(&g) {
                (num, den)
            } else {
                (r.div_exact(&num, &g).unwrap(), r.div_exact(&den, &g).unwrap())
            }
        };
        self.normalize_lead(num, den)
    }

    /// Assumes `gcd(num, den) = 1`; only scales `den` to be monic.
    fn normalize_lead(&self, num: Poly<K::Elem>, den: Poly<K::Elem>) -> RatFunc<K::Elem> {
        let r = &self.ring;
        let l = den.lead().expect("nonzero denominator");
        if self.base().is_one(l) {
            return RatFunc { num, den };
        }
        let inv = self.base().inv(l).unwrap();
        RatFunc { num: r.scale(&num, &inv), den: r.scale(&den, &inv) }
    }

    /// Builds a fraction whose parts are known to be coprime.
    pub fn frac_coprime(&self, num: Poly<K::Elem>, den: Poly<K::Elem>) -> RatFunc<K::Elem> {
        if num.is_zero() {
            return RatFunc { num, den: self.ring.one() };
        }
        self.normalize_lead(num, den)
    }

    pub fn from_poly(&self, p: Poly<K::Elem>) -> RatFunc<K::Elem> {
        RatFunc { num: p, den: self.ring.one() }
    }

    pub fn from_base(&self, c: K::Elem) -> RatFunc<K::Elem> {
        self.from_poly(self.ring.constant(c))
    }

    /// The indeterminate as an element.
    pub fn var(&self) -> RatFunc<K::Elem> {
        self.from_poly(self.ring.x())
    }

    pub fn is_polynomial(&self, a: &RatFunc<K::Elem>) -> bool {
        self.ring.is_one(&a.den)
    }

    pub fn is_constant(&self, a: &RatFunc<K::Elem>) -> bool {
        self.ring.is_constant(&a.num) && self.ring.is_constant(&a.den)
    }

    /// Integer powers, negative exponents allowed for nonzero `a`.
    pub fn powi(&self, a: &RatFunc<K::Elem>, e: i64) -> Result<RatFunc<K::Elem>> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let k = e.unsigned_abs();
        let r = &self.ring;
        Ok(RatFunc { num: r.pow(&base.num, k), den: r.pow(&base.den, k) })
    }
}

impl<K: Field> Field for RatField<K> {
    type Elem = RatFunc<K::Elem>;

    fn zero(&self) -> Self::Elem {
        RatFunc { num: self.ring.zero(), den: self.ring.one() }
    }

    fn one(&self) -> Self::Elem {
        RatFunc { num: self.ring.one(), den: self.ring.one() }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.num.is_zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.ring.is_one(&a.num) && self.ring.is_one(&a.den)
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            let num = r.add(&a.num, &b.num);
            if r.is_one(&a.den) {
                return RatFunc { num, den: a.den.clone() };
            }
            return self.reduce(num, a.den.clone());
        }
        let g = r.gcd(&a.den, &b.den);
        let (ad, bd) = if r.is_one(&g) {
            (a.den.clone(), b.den.clone())
        } else {
            (r.div_exact(&a.den, &g).unwrap(), r.div_exact(&b.den, &g).unwrap())
        };
        let num = r.add(&r.mul(&a.num, &bd), &r.mul(&b.num, &ad));
        let den = r.mul(&a.den, &bd);
        if r.is_one(&g) {
            // a.den and b.den coprime: the sum is already reduced
            self.frac_coprime(num, den)
        } else {
            self.reduce(num, den)
        }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        RatFunc { num: self.ring.neg(&a.num), den: a.den.clone() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        if r.is_one(&a.den) && r.is_one(&b.den) {
            return RatFunc { num: r.mul(&a.num, &b.num), den: a.den.clone() };
        }
        let g1 = r.gcd(&a.num, &b.den);
        let g2 = r.gcd(&b.num, &a.den);
        let an = r.div_exact(&a.num, &g1).unwrap();
        let bd = r.div_exact(&b.den, &g1).unwrap();
        let bn = r.div_exact(&b.num, &g2).unwrap();
        let ad = r.div_exact(&a.den, &g2).unwrap();
        self.frac_coprime(r.mul(&an, &bn), r.mul(&ad, &bd))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.num.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.normalize_lead(a.den.clone(), a.num.clone()))
    }

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        RatFunc { num: self.ring.frobenius(&a.num), den: self.ring.frobenius(&a.den) }
    }

    fn constants(&self) -> &Fq {
        self.ring.base().constants()
    }

    fn embed(&self, c: FqElem) -> Self::Elem {
        self.from_base(self.ring.base().embed(c))
    }

    fn render(&self, a: &Self::Elem) -> String {
        let n = self.ring.render(&a.num);
        if self.ring.is_one(&a.den) {
            if a.num.coeffs().iter().filter(|c| !self.base().is_zero(c)).count() > 1 {
                format!("({n})")
            } else {
                n
            }
        } else {
            format!("({n})/({})", self.ring.render(&a.den))
        }
    }

    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let r = &self.ring;
        RatFunc { num: r.pow(&a.num, e), den: r.pow(&a.den, e) }
    }
}
