//! Factorization in `F_q[T]`: squarefree split, distinct-degree split, then
//! Cantor–Zassenhaus equal-degree splitting driven by a seeded generator.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::fq::{Fq, FqElem};
use super::poly::{Poly, PolyRing};
use super::ratfunc::RatField;
use crate::error::{AlgebraError, Result};

/// Seed used when callers do not thread their own.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed;

pub type Factorization<E> = Vec<(Poly<E>, u32)>;

/// Coefficient fields over which `K[var]` can be factored.
pub trait Factorable: Field {
    /// Monic irreducible factors with multiplicities, sorted by degree and
    /// then coefficients. The leading coefficient is dropped.
    fn factor_poly(ring: &PolyRing<Self>, f: &Poly<Self::Elem>, seed: u64) -> Result<Factorization<Self::Elem>>;

    fn is_irreducible_poly(ring: &PolyRing<Self>, f: &Poly<Self::Elem>) -> Result<bool>;
}

impl Factorable for Fq {
    fn factor_poly(ring: &PolyRing<Fq>, f: &Poly<FqElem>, seed: u64) -> Result<Factorization<FqElem>> {
        factor(ring, f, seed)
    }

    fn is_irreducible_poly(ring: &PolyRing<Fq>, f: &Poly<FqElem>) -> Result<bool> {
        Ok(is_irreducible(ring, f))
    }
}

impl<K: Field> Factorable for RatField<K> {
    fn factor_poly(_: &PolyRing<Self>, _: &Poly<Self::Elem>, _: u64) -> Result<Factorization<Self::Elem>> {
        Err(AlgebraError::UnsupportedField(
            "factorization over a rational function field coefficient ring".into(),
        ))
    }

    fn is_irreducible_poly(_: &PolyRing<Self>, _: &Poly<Self::Elem>) -> Result<bool> {
        Err(AlgebraError::UnsupportedField(
            "irreducibility over a rational function field coefficient ring".into(),
        ))
    }
}

pub fn factor(ring: &PolyRing<Fq>, f: &Poly<FqElem>, seed: u64) -> Result<Factorization<FqElem>> {
    if f.is_zero() {
        return Err(AlgebraError::Domain("cannot factor the zero polynomial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Factorization<FqElem> = Vec::new();
    for (sq, mult) in squarefree(ring, &ring.monic(f)) {
        for (g, d) in distinct_degree(ring, &sq) {
            for h in equal_degree(ring, &g, d, &mut rng) {
                out.push((h, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.deg0(), a.0.coeffs()).cmp(&(b.0.deg0(), b.0.coeffs())));
    // squarefree parts of different multiplicity are coprime, so no merging is needed
    Ok(out)
}

/// Squarefree decomposition of a monic `f`: pairs `(g_i, i)` with `f = prod g_i^i`.
pub fn squarefree(ring: &PolyRing<Fq>, f: &Poly<FqElem>) -> Vec<(Poly<FqElem>, u32)> {
    let fq = ring.base();
    let p = fq.p() as usize;
    let mut out = Vec::new();
    if f.deg0() == 0 {
        return out;
    }
    let df = ring.derivative(f);
    let mut c = ring.gcd(f, &df);
    let mut w = ring.div_exact(f, &c).unwrap();
    let mut i = 1u32;
    while !ring.is_one(&w) {
        let y = ring.gcd(&w, &c);
        let fac = ring.div_exact(&w, &y).unwrap();
        if !ring.is_one(&fac) {
            out.push((fac, i));
        }
        w = y;
        c = ring.div_exact(&c, &w).unwrap();
        i += 1;
    }
    if !ring.is_one(&c) {
        // what is left is a p-th power
        let root: Vec<FqElem> = c.coeffs().iter().step_by(p).map(|&a| fq.pth_root(a)).collect();
        let root = ring.from_coeffs(root);
        for (g, m) in squarefree(ring, &root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn mulmod(ring: &PolyRing<Fq>, a: &Poly<FqElem>, b: &Poly<FqElem>, m: &Poly<FqElem>) -> Poly<FqElem> {
    ring.rem(&ring.mul(a, b), m).unwrap()
}

fn powmod(ring: &PolyRing<Fq>, a: &Poly<FqElem>, e: &BigUint, m: &Poly<FqElem>) -> Poly<FqElem> {
    let mut acc = ring.one();
    let base = ring.rem(a, m).unwrap();
    for i in (0..e.bits()).rev() {
        acc = mulmod(ring, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(ring, &acc, &base, m);
        }
    }
    ring.rem(&acc, m).unwrap()
}

/// `a^q mod m`.
fn frob_mod(ring: &PolyRing<Fq>, a: &Poly<FqElem>, m: &Poly<FqElem>) -> Poly<FqElem> {
    ring.rem(&ring.frobenius(a), m).unwrap()
}

fn frob_mod_pow(ring: &PolyRing<Fq>, a: &Poly<FqElem>, m: &Poly<FqElem>, k: usize) -> Poly<FqElem> {
    let q = ring.base().q();
    let mut h = ring.rem(a, m).unwrap();
    for _ in 0..k {
        h = if q <= 64 { frob_mod(ring, &h, m) } else { powmod(ring, &h, &BigUint::from(q), m) };
    }
    h
}

/// Splits a squarefree monic `f` into products of irreducibles of equal degree.
pub fn distinct_degree(ring: &PolyRing<Fq>, f: &Poly<FqElem>) -> Vec<(Poly<FqElem>, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = ring.x();
    let mut h = x.clone();
    let mut d = 1;
    while f.deg0() >= 2 * d {
        h = frob_mod_pow(ring, &h, &f, 1);
        let g = ring.gcd(&ring.sub(&h, &x), &f);
        if !ring.is_one(&g) {
            f = ring.div_exact(&f, &g).unwrap();
            h = ring.rem(&h, &f).unwrap();
            out.push((g, d));
        }
        d += 1;
    }
    if f.deg0() > 0 {
        let n = f.deg0();
        out.push((f, n));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(ring: &PolyRing<Fq>, f: &Poly<FqElem>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<FqElem>> {
    let n = f.deg0();
    if n == d {
        return vec![f.clone()];
    }
    let fq = ring.base();
    let q = fq.q();
    loop {
        let coeffs: Vec<FqElem> = (0..n).map(|_| FqElem(rng.gen_range(0..q as u32))).collect();
        let a = ring.from_coeffs(coeffs);
        if a.deg0() == 0 {
            continue;
        }
        let b = if fq.p() == 2 {
            // absolute trace a + a^2 + ... + a^(2^(e d - 1))
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..(fq.e() as usize * d) {
                t = mulmod(ring, &t, &t, f);
                s = ring.add(&s, &t);
            }
            s
        } else {
            let e = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1;
            ring.sub(&powmod(ring, &a, &e, f), &ring.one())
        };
        let g = ring.gcd(&b, f);
        if g.deg0() > 0 && g.deg0() < n {
            let rest = ring.div_exact(f, &g).unwrap();
            let mut out = equal_degree(ring, &g, d, rng);
            out.extend(equal_degree(ring, &rest, d, rng));
            return out;
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `T^(q^n) = T mod f` and `gcd(T^(q^(n/l)) - T, f) = 1` for
/// every prime `l | n`.
pub fn is_irreducible(ring: &PolyRing<Fq>, f: &Poly<FqElem>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let f = ring.monic(f);
    let x = ring.x();
    for l in prime_divisors(n) {
        let h = frob_mod_pow(ring, &x, &f, n / l);
        if !ring.is_one(&ring.gcd(&ring.sub(&h, &x), &f)) {
            return false;
        }
    }
    let h = frob_mod_pow(ring, &x, &f, n);
    ring.sub(&h, &x).is_zero()
}

/// Multiplies out a factorization (with leading coefficient `lead`).
pub fn expand(ring: &PolyRing<Fq>, lead: FqElem, factors: &[(Poly<FqElem>, u32)]) -> Poly<FqElem> {
    let mut acc = ring.constant(lead);
    for (g, m) in factors {
        acc = ring.mul(&acc, &ring.pow(g, *m as u64));
    }
    acc
}

/// Trial division of `f` by supplied monic primes; works over any coefficient
/// field. Returns the multiplicities and the cofactor.
pub fn split_by_hints<K: Field>(
    ring: &PolyRing<K>,
    f: &Poly<K::Elem>,
    hints: &[Poly<K::Elem>],
) -> (Vec<(Poly<K::Elem>, u32)>, Poly<K::Elem>) {
    let mut rest = f.clone();
    let mut out = Vec::new();
    if f.is_zero() {
        return (out, rest);
    }
    for h in hints {
        let (k, r) = ring.split_power(&rest, h);
        if k > 0 {
            out.push((h.clone(), k as u32));
        }
        rest = r;
    }
    (out, rest)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fq::FqConfig;

    fn ring(p: u32) -> PolyRing<Fq> {
        PolyRing::new(Fq::prime(p).unwrap(), "T")
    }

    fn poly(r: &PolyRing<Fq>, c: &[u32]) -> Poly<FqElem> {
        r.from_coeffs(c.iter().map(|&x| FqElem(x)).collect())
    }

    #[test]
    fn small_examples() {
        let r2 = ring(2);
        assert_eq!(
            factor(&r2, &poly(&r2, &[0, 1, 1]), 1).unwrap(),
            vec![(poly(&r2, &[0, 1]), 1), (poly(&r2, &[1, 1]), 1)]
        );
        assert_eq!(factor(&r2, &poly(&r2, &[1, 0, 1]), 1).unwrap(), vec![(poly(&r2, &[1, 1]), 2)]);
        let r3 = ring(3);
        assert_eq!(factor(&r3, &poly(&r3, &[1, 0, 1]), 1).unwrap(), vec![(poly(&r3, &[1, 0, 1]), 1)]);
        assert!(matches!(factor(&r3, &r3.zero(), 1), Err(AlgebraError::Domain(_))));
    }

    #[test]
    fn pth_powers_and_extension_fields() {
        let r2 = ring(2);
        // (T^2+T+1)^4 * T^3
        let g = poly(&r2, &[1, 1, 1]);
        let f = r2.mul(&r2.pow(&g, 4), &r2.pow(&r2.x(), 3));
        assert_eq!(factor(&r2, &f, 7).unwrap(), vec![(r2.x(), 3), (g, 4)]);

        let f4 = Fq::new(FqConfig { p: 2, e: 2, modulus: vec![1, 1, 1] }).unwrap();
        let r4 = PolyRing::new(f4, "T");
        // T^2+T+1 splits over F_4
        let fac = factor(&r4, &poly(&r4, &[1, 1, 1]), 3).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, m)| g.deg0() == 1 && *m == 1));
    }

    #[test]
    fn rabin_test() {
        let r2 = ring(2);
        assert!(is_irreducible(&r2, &poly(&r2, &[1, 1, 0, 0, 1])));
        assert!(!is_irreducible(&r2, &poly(&r2, &[1, 0, 0, 0, 1])));
        assert!(is_irreducible(&r2, &poly(&r2, &[1, 1, 0, 1])));
    }

    #[test]
    fn tower_is_unsupported() {
        let f = RatField::new(Fq::prime(2).unwrap(), "T");
        let r = PolyRing::new(f, "u");
        let x = r.x();
        assert!(matches!(RatField::factor_poly(&r, &x, 0), Err(AlgebraError::UnsupportedField(_))));
    }
}
