//! Dense univariate polynomials over a [`Field`].

use super::field::Field;
use crate::error::{AlgebraError, Result};

/// Coefficients lowest degree first; never has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// Polynomial ring `K[var]`.
#[derive(Clone, Debug)]
pub struct PolyRing<K: Field> {
    base: K,
    var: &'static str,
}

impl<K: Field> PolyRing<K> {
    pub fn new(base: K, var: &'static str) -> Self {
        PolyRing { base, var }
    }

    pub fn base(&self) -> &K {
        &self.base
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<K::Elem>) -> Poly<K::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero(&self) -> Poly<K::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<K::Elem> {
        self.constant(self.base.one())
    }

    pub fn constant(&self, c: K::Elem) -> Poly<K::Elem> {
        self.from_coeffs(vec![c])
    }

    /// The indeterminate.
    pub fn x(&self) -> Poly<K::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn monomial(&self, c: K::Elem, k: usize) -> Poly<K::Elem> {
        if self.base.is_zero(&c) {
            return self.zero();
        }
        let mut v = vec![self.base.zero(); k + 1];
        v[k] = c;
        Poly { coeffs: v }
    }

    pub fn is_one(&self, a: &Poly<K::Elem>) -> bool {
        a.coeffs.len() == 1 && self.base.is_one(&a.coeffs[0])
    }

    pub fn is_constant(&self, a: &Poly<K::Elem>) -> bool {
        a.coeffs.len() <= 1
    }

    pub fn is_monic(&self, a: &Poly<K::Elem>) -> bool {
        a.lead().is_some_and(|c| self.base.is_one(c))
    }

    pub fn add(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o = self.base.add(o, s);
        }
        self.from_coeffs(out)
    }

    pub fn neg(&self, a: &Poly<K::Elem>) -> Poly<K::Elem> {
        Poly { coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    pub fn sub(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.base.zero();
        let out = (0..n)
            .map(|i| self.base.sub(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
            .collect();
        self.from_coeffs(out)
    }

    pub fn mul(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.coeffs.len() == 1 {
            return self.scale(b, &a.coeffs[0]);
        }
        if b.coeffs.len() == 1 {
            return self.scale(a, &b.coeffs[0]);
        }
        self.from_coeffs(self.base.poly_mul(&a.coeffs, &b.coeffs))
    }

    pub fn scale(&self, a: &Poly<K::Elem>, c: &K::Elem) -> Poly<K::Elem> {
        if self.base.is_one(c) {
            return a.clone();
        }
        self.from_coeffs(a.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    /// `a * var^k`.
    pub fn shift(&self, a: &Poly<K::Elem>, k: usize) -> Poly<K::Elem> {
        if a.is_zero() {
            return self.zero();
        }
        let mut v = vec![self.base.zero(); k];
        v.extend(a.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn divrem(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Result<(Poly<K::Elem>, Poly<K::Elem>)> {
        let db = b.degree().ok_or(AlgebraError::DivisionByZero)?;
        if a.coeffs.len() <= db {
            return Ok((self.zero(), a.clone()));
        }
        let lead_inv = self.base.inv(b.lead().unwrap())?;
        let monic_div = self.base.is_one(&lead_inv);
        let mut r = a.coeffs.clone();
        let mut quot = vec![self.base.zero(); a.coeffs.len() - db];
        for top in (db..r.len()).rev() {
            if self.base.is_zero(&r[top]) {
                continue;
            }
            let c = if monic_div { r[top].clone() } else { self.base.mul(&r[top], &lead_inv) };
            let shift = top - db;
            for (i, bi) in b.coeffs.iter().enumerate().take(db) {
                if self.base.is_zero(bi) {
                    continue;
                }
                let t = self.base.mul(&c, bi);
                r[shift + i] = self.base.sub(&r[shift + i], &t);
            }
            r[top] = self.base.zero();
            quot[shift] = c;
        }
        r.truncate(db);
        Ok((self.from_coeffs(quot), self.from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Result<Poly<K::Elem>> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Quotient `a / b`, failing unless the division is exact.
    pub fn div_exact(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Result<Poly<K::Elem>> {
        let (q, r) = self.divrem(a, b)?;
        if !r.is_zero() {
            return Err(AlgebraError::Domain("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, d: &Poly<K::Elem>, a: &Poly<K::Elem>) -> bool {
        match self.rem(a, d) {
            Ok(r) => r.is_zero(),
            Err(_) => a.is_zero(),
        }
    }

    pub fn monic(&self, a: &Poly<K::Elem>) -> Poly<K::Elem> {
        match a.lead() {
            None => self.zero(),
            Some(l) => {
                if self.base.is_one(l) {
                    a.clone()
                } else {
                    let inv = self.base.inv(l).expect("nonzero leading coefficient");
                    self.scale(a, &inv)
                }
            }
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        let (mut x, mut y) = (a.clone(), b.clone());
        if x.coeffs.len() < y.coeffs.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Extended gcd: `(g, s, t)` with `s a + t b = g` monic.
    pub fn xgcd(
        &self,
        a: &Poly<K::Elem>,
        b: &Poly<K::Elem>,
    ) -> (Poly<K::Elem>, Poly<K::Elem>, Poly<K::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = self.base.inv(l).expect("nonzero");
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
        }
    }

    /// Largest `k` with `p^k | a`, and `a / p^k`. `a` must be nonzero.
    pub fn split_power(&self, a: &Poly<K::Elem>, p: &Poly<K::Elem>) -> (u64, Poly<K::Elem>) {
        debug_assert!(!a.is_zero());
        let mut k = 0;
        let mut cur = a.clone();
        if p.deg0() == 0 {
            return (0, cur);
        }
        loop {
            let (q, r) = self.divrem(&cur, p).expect("nonzero divisor");
            if !r.is_zero() {
                return (k, cur);
            }
            k += 1;
            cur = q;
        }
    }

    pub fn eval(&self, a: &Poly<K::Elem>, x: &K::Elem) -> K::Elem {
        let mut acc = self.base.zero();
        for c in a.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self, a: &Poly<K::Elem>) -> Poly<K::Elem> {
        let out = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.base.mul(c, &self.base.embed(self.base.constants().from_int(i as i64))))
            .collect();
        self.from_coeffs(out)
    }

    /// `a^q`: Frobenius on the coefficients, exponents spread by `q`.
    pub fn frobenius(&self, a: &Poly<K::Elem>) -> Poly<K::Elem> {
        if a.coeffs.len() <= 1 {
            return Poly { coeffs: a.coeffs.iter().map(|c| self.base.frobenius(c)).collect() };
        }
        let q = self.base.constants().q() as usize;
        let mut v = vec![self.base.zero(); (a.coeffs.len() - 1) * q + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            v[i * q] = self.base.frobenius(c);
        }
        Poly { coeffs: v }
    }

    /// `a^(q^k)`.
    pub fn frobenius_pow(&self, a: &Poly<K::Elem>, k: u32) -> Poly<K::Elem> {
        let mut out = a.clone();
        for _ in 0..k {
            out = self.frobenius(&out);
        }
        out
    }

    /// `a^e`, splitting `e` into base-`q` digits so that the large part of the
    /// work is done by the Frobenius.
    pub fn pow(&self, a: &Poly<K::Elem>, e: u64) -> Poly<K::Elem> {
        if e == 0 {
            return self.one();
        }
        let q = self.base.constants().q();
        let mut acc = self.one();
        let mut frob = a.clone();
        let mut e = e;
        loop {
            let digit = e % q;
            if digit > 0 {
                let piece = self.pow_small(&frob, digit);
                acc = self.mul(&acc, &piece);
            }
            e /= q;
            if e == 0 {
                return acc;
            }
            frob = self.frobenius(&frob);
        }
    }

    fn pow_small(&self, a: &Poly<K::Elem>, mut e: u64) -> Poly<K::Elem> {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn render(&self, a: &Poly<K::Elem>) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in a.coeffs.iter().enumerate().rev() {
            if self.base.is_zero(c) {
                continue;
            }
            let cs = self.base.render(c);
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, i),
            };
            terms.push(match (i, self.base.is_one(c)) {
                (0, _) => cs,
                (_, true) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        terms.join(" + ")
    }
}
