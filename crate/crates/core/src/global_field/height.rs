use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::Zero;

use super::{joint_support, log_abs_opt, Place};
use crate::algebra::{BaseElem, BaseField, Factorable, Field, RatField, RatFunc};
use crate::error::{AlgebraError, Result};
use crate::rational::{int, lcm_u64, max_rat, Rat};

/// `h(x) = sum_v log+ |x|_v = max(deg num, deg den)`; gcd only.
pub fn naive_height<E>(x: &RatFunc<E>) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    int(x.naive_degree() as i64)
}

/// Height on weighted projective space, `sum_v max_i log|x_i|_v / w_i`,
/// zero coordinates skipped.
///
/// Raising `x_i` to `W / w_i` with `W = lcm(w)` turns this into the ordinary
/// projective height over `W`, and that is `max deg Y_i - deg gcd(Y_i)` once
/// the `Y_i` are the coordinates with a common denominator cleared.
pub fn weighted_height<K: Field>(f: &RatField<K>, coords: &[RatFunc<K::Elem>], weights: &[u64]) -> Result<Rat> {
    if coords.len() != weights.len() {
        return Err(AlgebraError::Domain("coordinate and weight counts differ".into()));
    }
    if weights.contains(&0) {
        return Err(AlgebraError::Domain("weights must be positive".into()));
    }
    let r = f.ring();
    let pts: Vec<(&RatFunc<K::Elem>, u64)> =
        coords.iter().zip(weights).filter(|(x, _)| !x.is_zero()).map(|(x, &w)| (x, w)).collect();
    if pts.is_empty() {
        return Err(AlgebraError::Domain("all coordinates are zero".into()));
    }
    let big_w = lcm_u64(pts.iter().map(|p| p.1));
    let ys: Vec<RatFunc<K::Elem>> = pts.iter().map(|(x, w)| f.pow(x, big_w / w)).collect();
    let mut den = r.one();
    for y in &ys {
        let g = r.gcd(&den, y.den());
        den = r.mul(&den, &r.div_exact(y.den(), &g)?);
    }
    let mut top = 0usize;
    let mut g = r.zero();
    for y in &ys {
        let yi = r.mul(y.num(), &r.div_exact(&den, y.den())?);
        top = top.max(yi.deg0());
        g = r.gcd(&g, &yi);
    }
    Ok(BigRational::new(((top - g.deg0()) as i64).into(), (big_w as i64).into()))
}

/// The same height computed place by place; needs the supports.
pub fn weighted_height_by_places<K: Factorable>(
    f: &RatField<K>,
    coords: &[RatFunc<K::Elem>],
    weights: &[u64],
) -> Result<Rat> {
    let refs: Vec<&RatFunc<K::Elem>> = coords.iter().collect();
    let places = joint_support(f, &refs)?;
    if coords.iter().all(|x| x.is_zero()) {
        return Err(AlgebraError::Domain("all coordinates are zero".into()));
    }
    let mut total = Rat::zero();
    for v in &places {
        total += local_weighted_max(f, coords, weights, v);
    }
    Ok(total)
}

/// `max_i log|x_i|_v / w_i` over nonzero coordinates.
pub fn local_weighted_max<K: Field>(
    f: &RatField<K>,
    coords: &[RatFunc<K::Elem>],
    weights: &[u64],
    v: &Place<K::Elem>,
) -> Rat {
    let mut best: Option<Rat> = None;
    for (x, &w) in coords.iter().zip(weights) {
        if let Some(l) = log_abs_opt(f, x, v) {
            let t = l / int(w as i64);
            best = Some(match best {
                None => t,
                Some(b) => max_rat(&b, &t),
            });
        }
    }
    best.unwrap_or_else(Rat::zero)
}

/// All `x` in `F_q(T)` with `h(x) <= bound`, from coprime pairs `(num, monic den)`.
pub fn enumerate_bounded_height(f: &BaseField, bound: usize) -> Vec<BaseElem> {
    let r = f.ring();
    let mut out = vec![f.zero()];
    let nums = all_polys(f, bound, false);
    let dens = all_polys(f, bound, true);
    for n in nums.iter().filter(|n| !n.is_zero()) {
        for d in &dens {
            if r.is_one(&r.gcd(n, d)) {
                out.push(f.frac_coprime(n.clone(), d.clone()));
            }
        }
    }
    out
}

/// Polynomials of degree at most `deg` (monic ones only if asked; the zero
/// polynomial is included unless `monic`).
pub fn all_polys(f: &BaseField, deg: usize, monic: bool) -> Vec<crate::algebra::Poly<crate::algebra::FqElem>> {
    let r = f.ring();
    let q = f.base().size();
    let mut out = Vec::new();
    if monic {
        for d in 0..=deg {
            let count = (q as u64).pow(d as u32);
            for idx in 0..count {
                let mut c = digits(idx, q, d);
                c.push(crate::algebra::FqElem(1));
                out.push(r.from_coeffs(c));
            }
        }
    } else {
        let count = (q as u64).pow(deg as u32 + 1);
        for idx in 0..count {
            out.push(r.from_coeffs(digits(idx, q, deg + 1)));
        }
    }
    out
}

fn digits(mut idx: u64, q: u32, len: usize) -> Vec<crate::algebra::FqElem> {
    (0..len)
        .map(|_| {
            let d = (idx % q as u64) as u32;
            idx /= q as u64;
            crate::algebra::FqElem(d)
        })
        .collect()
}

/// Set form of the above for cross-checks.
pub fn bounded_height_set(f: &BaseField, bound: usize) -> HashSet<BaseElem> {
    enumerate_bounded_height(f, bound).into_iter().collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sample::{random_nonzero_ratfunc, random_ratfunc};
    use crate::algebra::{base_field, Fq, FqElem};
    use crate::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn naive_height_examples() {
        let f = base_field(Fq::prime(2).unwrap());
        let t = f.var();
        assert_eq!(naive_height(&f.pow(&t, 3)), int(3));
        assert_eq!(naive_height(&f.one()), int(0));
        assert_eq!(naive_height(&f.zero()), int(0));
        let x = f.div(&f.add(&t, &f.one()), &f.pow(&t, 2)).unwrap();
        assert_eq!(naive_height(&x), int(2));
    }

    #[test]
    fn weighted_height_examples() {
        let f = base_field(Fq::prime(2).unwrap());
        let t = f.var();
        assert_eq!(weighted_height(&f, &[f.one()], &[1]).unwrap(), int(0));
        assert_eq!(weighted_height(&f, &[f.one(), t.clone()], &[1, 3]).unwrap(), rat(1, 3));
        let a = f.add(&t, &f.one());
        let scaled = [f.pow(&a, 1), f.mul(&f.pow(&a, 3), &t)];
        assert_eq!(weighted_height(&f, &scaled, &[1, 3]).unwrap(), rat(1, 3));
        assert!(weighted_height(&f, &[f.zero()], &[1]).is_err());
    }

    #[test]
    fn gcd_route_matches_places() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2, 3] {
            let f = base_field(Fq::prime(p).unwrap());
            for _ in 0..60 {
                let w = [p as u64 - 1, (p * p) as u64 - 1];
                let x = [random_ratfunc(&f, 3, &mut rng), random_nonzero_ratfunc(&f, 3, &mut rng)];
                assert_eq!(weighted_height(&f, &x, &w).unwrap(), weighted_height_by_places(&f, &x, &w).unwrap());
            }
        }
    }

    #[test]
    fn bounded_height_enumerators_agree() {
        let f = base_field(Fq::prime(2).unwrap());
        for b in 0..=2 {
            let listed = enumerate_bounded_height(&f, b);
            let set = bounded_height_set(&f, b);
            assert_eq!(listed.len(), set.len());
            // every fraction of bounded-degree parts, reduced, with height <= b
            let polys = all_polys(&f, b, false);
            let mut brute = HashSet::new();
            for n in &polys {
                for d in polys.iter().filter(|d| !d.is_zero()) {
                    let x = f.frac(n.clone(), d.clone()).unwrap();
                    if naive_height(&x) <= int(b as i64) {
                        brute.insert(x);
                    }
                }
            }
            assert_eq!(brute, set);
        }
        // constants only at height 0: 0 and 1
        assert_eq!(enumerate_bounded_height(&f, 0).len(), 2);
        let _ = FqElem(0);
    }
}
