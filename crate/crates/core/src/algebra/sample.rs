//! Seeded random elements for tests and scans.

use rand::Rng;

use super::fq::{Fq, FqElem};
use super::poly::{Poly, PolyRing};
use super::ratfunc::{RatField, RatFunc};
use super::Field;

pub fn random_fq<R: Rng>(fq: &Fq, rng: &mut R) -> FqElem {
    FqElem(rng.gen_range(0..fq.size()))
}

pub fn random_nonzero_fq<R: Rng>(fq: &Fq, rng: &mut R) -> FqElem {
    FqElem(rng.gen_range(1..fq.size()))
}

/// Uniform polynomial of degree at most `deg`.
pub fn random_poly<R: Rng>(ring: &PolyRing<Fq>, deg: usize, rng: &mut R) -> Poly<FqElem> {
    let c = (0..=deg).map(|_| random_fq(ring.base(), rng)).collect();
    ring.from_coeffs(c)
}

/// Nonzero polynomial of exact degree `deg`.
pub fn random_poly_exact<R: Rng>(ring: &PolyRing<Fq>, deg: usize, rng: &mut R) -> Poly<FqElem> {
    let mut c: Vec<FqElem> = (0..deg).map(|_| random_fq(ring.base(), rng)).collect();
    c.push(random_nonzero_fq(ring.base(), rng));
    ring.from_coeffs(c)
}

pub fn random_monic<R: Rng>(ring: &PolyRing<Fq>, deg: usize, rng: &mut R) -> Poly<FqElem> {
    let mut c: Vec<FqElem> = (0..deg).map(|_| random_fq(ring.base(), rng)).collect();
    c.push(FqElem(1));
    ring.from_coeffs(c)
}

/// Random element with numerator and denominator degrees at most `deg`;
/// possibly zero.
pub fn random_ratfunc<R: Rng>(f: &RatField<Fq>, deg: usize, rng: &mut R) -> RatFunc<FqElem> {
    let num = random_poly(f.ring(), deg, rng);
    let d = rng.gen_range(0..=deg);
    let den = random_monic(f.ring(), d, rng);
    f.frac(num, den).unwrap()
}

pub fn random_nonzero_ratfunc<R: Rng>(f: &RatField<Fq>, deg: usize, rng: &mut R) -> RatFunc<FqElem> {
    loop {
        let x = random_ratfunc(f, deg, rng);
        if !f.is_zero(&x) {
            return x;
        }
    }
}
