//! Canonical heights, globally (iterate and rescale, with the height
//! difference bounds as error terms) and as a sum of local Green's functions.

use num_traits::Zero;
use serde::Serialize;

use super::green::{green_from_orbit, local_constants, LOCAL_MAX_DEGREE};
use super::interval::{GreenResult, HeightInterval};
use super::orbit::Orbit;
use crate::algebra::{BaseElem, Factorable, Field, Fq, FqElem, Poly, RatFunc};
use crate::drinfeld::DrinfeldModule;
use crate::error::{AlgebraError, Result};
use crate::global_field::{enumerate_bounded_height, joint_support, naive_height, weighted_height, Instance, Place};
use crate::rational::{floor_usize, int, max_rat, rat, Rat};

/// Orbit degree the global method may reach before giving up.
pub const GLOBAL_MAX_DEGREE: u64 = 1 << 20;

/// `h(phi) = h(j_phi) + h(a_r) / (q^r - 1)`.
pub fn h_phi<K: Field>(m: &DrinfeldModule<K>) -> Result<Rat> {
    let hj = weighted_height(m.field(), m.coeffs(), &m.weights())?;
    let qr = m.q().pow(m.rank() as u32) as i64;
    Ok(hj + naive_height(m.leading()) / int(qr - 1))
}

/// `-B_lower <= h_hat(x) - h(x) <= B_upper`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZimmerBounds {
    #[serde(with = "crate::rational::serde_rat")]
    pub c1: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub c2: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub h_phi: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub b_lower: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub b_upper: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub b: Rat,
}

pub fn zimmer_bounds<K: Field>(m: &DrinfeldModule<K>) -> Result<ZimmerBounds> {
    let qr = m.q().pow(m.rank() as u32) as i64;
    let (c1, c2) = match m.instance() {
        Instance::BaseRational => (rat(qr, (qr - 1) * (qr - 1)), rat(1, qr - 1)),
        // every place of F(u) is finite for F_q[T]
        Instance::Tower => (Rat::zero(), Rat::zero()),
    };
    let h = h_phi(m)?;
    // h / (1 - q^-r) = h q^r / (q^r - 1)
    let b_lower = &c1 + &h * rat(qr, qr - 1);
    let b_upper = &h + &c2;
    let b = max_rat(&b_lower, &b_upper);
    Ok(ZimmerBounds { c1, c2, h_phi: h, b_lower, b_upper, b })
}

/// Least `N` with `q^(-rN) B <= tol / 2`.
pub fn iterations_for(m_q: u64, rank: usize, b: &Rat, tol: &Rat) -> usize {
    let qr = int(m_q.pow(rank as u32) as i64);
    let target = tol / int(2);
    let mut n = 0;
    let mut cur = b.clone();
    while cur > target {
        cur /= &qr;
        n += 1;
    }
    n
}

/// `h_hat(x)` within `[q^(-rN)(h(y) - B_lower), q^(-rN)(h(y) + B_upper)]`,
/// `y = phi_{T^N}(x)`, clipped at 0; `N` is chosen so the width is at most `tol`.
pub fn canonical_height<K: Factorable>(m: &DrinfeldModule<K>, x: &RatFunc<K::Elem>, tol: &Rat) -> Result<HeightInterval> {
    if tol <= &Rat::zero() {
        return Err(AlgebraError::Domain("tolerance must be positive".into()));
    }
    if x.is_zero() {
        return Ok(HeightInterval::zero());
    }
    let zb = zimmer_bounds(m)?;
    let n = iterations_for(m.q(), m.rank(), &zb.b, tol);
    canonical_height_at(m, x, n, &zb)
}

/// The global bracket after exactly `n` iterations.
pub fn canonical_height_at<K: Factorable>(
    m: &DrinfeldModule<K>,
    x: &RatFunc<K::Elem>,
    n: usize,
    zb: &ZimmerBounds,
) -> Result<HeightInterval> {
    if x.is_zero() {
        return Ok(HeightInterval::zero());
    }
    let mut orbit = Orbit::new(m, x, GLOBAL_MAX_DEGREE);
    let reached = orbit.extend_to(n);
    let y_h = if reached == n {
        orbit.engine.height(orbit.point(n))
    } else if let Some((a, b)) = orbit.recurrence() {
        // y_n lies on the cycle y_a .. y_(b-1)
        let idx = a + (n - a) % (b - a);
        orbit.engine.height(orbit.point(idx))
    } else {
        return Err(AlgebraError::Resource(format!(
            "orbit degree exceeds {GLOBAL_MAX_DEGREE} before iteration {n}"
        )));
    };
    let scale = num_traits::pow(int(m.q().pow(m.rank() as u32) as i64), n);
    let lo = (&y_h - &zb.b_lower) / &scale;
    let hi = (&y_h + &zb.b_upper) / &scale;
    Ok(HeightInterval::new(lo, hi).clamp_nonneg())
}

/// Places outside of which every `G_v(x)` vanishes: infinity and the
/// supports of `x` and of the coefficients.
pub fn relevant_places(m: &DrinfeldModule<Fq>, x: &BaseElem) -> Result<Vec<Place<FqElem>>> {
    let mut elems: Vec<&BaseElem> = vec![x];
    elems.extend(m.coeffs().iter());
    joint_support(m.field(), &elems)
}

#[derive(Clone, Debug)]
pub struct LocalDecomposition {
    pub total: HeightInterval,
    pub places: Vec<(Place<FqElem>, GreenResult)>,
}

/// `h_hat(x) = sum_v G_v(x)` over [`relevant_places`].
pub fn canonical_height_decomposed(m: &DrinfeldModule<Fq>, x: &BaseElem, n_max: usize) -> Result<LocalDecomposition> {
    if x.is_zero() {
        return Ok(LocalDecomposition { total: HeightInterval::zero(), places: Vec::new() });
    }
    let places = relevant_places(m, x)?;
    let mut orbit = Orbit::new(m, x, LOCAL_MAX_DEGREE);
    let mut total = HeightInterval::zero();
    let mut out = Vec::new();
    for v in places {
        let g = green_from_orbit(&mut orbit, &v, &local_constants(m, &v), n_max);
        total = total.add(&g.value);
        out.push((v, g));
    }
    Ok(LocalDecomposition { total, places: out })
}

pub fn canonical_height_local(m: &DrinfeldModule<Fq>, x: &BaseElem, n_max: usize) -> Result<HeightInterval> {
    Ok(canonical_height_decomposed(m, x, n_max)?.total)
}

/// Iterates until the naive height passes `B_lower` (not torsion) or a value
/// repeats (torsion).
pub fn is_torsion(m: &DrinfeldModule<Fq>, x: &BaseElem) -> Result<bool> {
    let zb = zimmer_bounds(m)?;
    if x.is_zero() {
        return Ok(true);
    }
    let mut orbit = Orbit::new(m, x, u64::MAX);
    let mut n = 0;
    loop {
        if orbit.engine.height(orbit.point(n)) > zb.b_lower {
            return Ok(false);
        }
        if orbit.is_preperiodic() {
            return Ok(true);
        }
        n += 1;
        orbit.extend_to(n);
    }
}

/// Number of elements of `F_q(T)` of height at most `h`.
pub fn count_bounded_height(q: u64, h: usize) -> u128 {
    // nonzero numerators of degree <= h times monic denominators of degree
    // <= h, an upper bound (coprimality ignored)
    let q = q as u128;
    let nums = q.pow(h as u32 + 1) - 1;
    let dens: u128 = (0..=h as u32).map(|d| q.pow(d)).sum();
    1 + nums * dens
}

/// Every torsion point, found among `x` with `h(x) <= B_lower`.
pub fn torsion_submodule(m: &DrinfeldModule<Fq>, max_candidates: u128) -> Result<Vec<BaseElem>> {
    let zb = zimmer_bounds(m)?;
    let h = floor_usize(&zb.b_lower);
    let count = count_bounded_height(m.q(), h);
    if count > max_candidates {
        return Err(AlgebraError::Resource(format!(
            "torsion search up to height {h} needs about {count} candidates (limit {max_candidates})"
        )));
    }
    let mut out = Vec::new();
    for x in enumerate_bounded_height(m.field(), h) {
        if is_torsion(m, &x)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// Least monic `a` of degree at most `max_deg` (by degree, then coefficients
/// read as base-`q` digits) with `phi_a(x) = 0`.
pub fn annihilator(m: &DrinfeldModule<Fq>, x: &BaseElem, max_deg: usize) -> Option<Poly<FqElem>> {
    let f = m.field();
    let ring = crate::algebra::PolyRing::new(f.base().clone(), "T");
    if x.is_zero() {
        return Some(ring.one());
    }
    // phi_a(x) = sum c_k phi_T^k(x) by F_q-linearity
    let mut ys = vec![x.clone()];
    for k in 0..max_deg {
        let next = m.eval_t(&ys[k]);
        ys.push(next);
    }
    let q = f.base().size() as u64;
    for d in 1..=max_deg {
        for idx in 0..q.pow(d as u32) {
            let mut cs = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                cs.push(FqElem((t % q) as u32));
                t /= q;
            }
            cs.push(FqElem(1));
            let mut acc = f.zero();
            for (c, y) in cs.iter().zip(&ys) {
                if c.0 != 0 {
                    acc = f.add(&acc, &f.mul(&f.embed(*c), y));
                }
            }
            if acc.is_zero() {
                return Some(ring.from_coeffs(cs));
            }
        }
    }
    None
}
