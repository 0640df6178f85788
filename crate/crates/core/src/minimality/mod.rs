//! Minimal discriminants and minimal models.
//!
//! At a finite place `P`, conjugating by `P^k` shifts `v(a_j)` by
//! `k (q^j - 1)`, so the least `k` making every coefficient integral is
//! `k* = ceil(max_j -v(a_j) / (q^j - 1))`, and since `c_v` grows with `k` that
//! model also has the least `c_v`.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{BaseElem, Field, Fq, FqElem, Poly};
use crate::drinfeld::{j_phi_v, DrinfeldModule};
use crate::error::{AlgebraError, Result};
use crate::global_field::{render_place, valuation, weighted_height, Place};
use crate::heights::h_phi;
use crate::rational::{ceil, int, lcm_u64, max_rat, rat, Rat};

/// `(D_{phi,v}, k*)` at a finite place `v`.
pub fn local_min_disc<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>) -> Result<(Rat, i64)> {
    if !v.is_finite() {
        return Err(AlgebraError::Domain("minimal discriminant at the infinite place".into()));
    }
    let q = m.q();
    let mut bound: Option<Rat> = None;
    for j in 1..=m.rank() {
        if let Some(val) = valuation(m.field(), m.a(j), v) {
            let b = rat(-val, q.pow(j as u32) as i64 - 1);
            bound = Some(match bound {
                None => b,
                Some(x) => max_rat(&x, &b),
            });
        }
    }
    let k: i64 = ceil(&bound.expect("a_r is nonzero")).try_into().expect("small exponent");
    let r = m.rank() as u32;
    let vr = valuation(m.field(), m.leading(), v).unwrap();
    let qr = q.pow(r) as i64 - 1;
    let disc = rat((vr + k * qr) * v.degree() as i64, qr);
    Ok((disc, k))
}

/// `d = lcm{q^j - 1 : 1 <= j <= r}`.
pub fn d_constant(q: u64, r: u32) -> u64 {
    lcm_u64((1..=r).map(|j| q.pow(j) - 1))
}

/// Rational divisor supported on finite places; coefficients already carry
/// the `deg v` factor.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscDivisor {
    pub entries: Vec<(Place<FqElem>, Rat)>,
}

impl DiscDivisor {
    fn from_entries(entries: Vec<(Place<FqElem>, Rat)>) -> Self {
        DiscDivisor { entries: entries.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Plain sum of coefficients.
    pub fn degree(&self) -> Rat {
        self.entries.iter().map(|(_, c)| c.clone()).sum()
    }

    pub fn coeff(&self, v: &Place<FqElem>) -> Rat {
        self.entries.iter().find(|(p, _)| p == v).map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }
}

/// Finite places where some coefficient has nonzero valuation.
pub fn bad_places(m: &DrinfeldModule<Fq>) -> Result<Vec<Place<FqElem>>> {
    let mut out: Vec<Place<FqElem>> = Vec::new();
    for a in m.coeffs().iter().filter(|a| !a.is_zero()) {
        for v in crate::global_field::support(m.field(), a)? {
            if v.is_finite() && !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out.sort_by_key(place_key);
    Ok(out)
}

fn place_key(v: &Place<FqElem>) -> (usize, Vec<FqElem>) {
    match v {
        Place::Finite(p) => (p.deg0(), p.coeffs().to_vec()),
        Place::Infinity => (usize::MAX, Vec::new()),
    }
}

pub struct GlobalDivisors {
    pub disc: DiscDivisor,
    pub min_disc: DiscDivisor,
    pub weierstrass: DiscDivisor,
}

/// `Delta = sum c_v [v]`, `D = sum D_v [v]` and `a = sum -k*_v deg(v) [v]`,
/// so that `Delta = D + a`. Needs an integral model.
pub fn global_divisors(m: &DrinfeldModule<Fq>) -> Result<GlobalDivisors> {
    let f = m.field();
    let places = bad_places(m)?;
    for v in &places {
        for j in 1..=m.rank() {
            if valuation(f, m.a(j), v).is_some_and(|n| n < 0) {
                return Err(AlgebraError::Precondition(format!(
                    "model is not integral at {}",
                    render_place(f, v)
                )));
            }
        }
    }
    let (mut disc, mut min_disc, mut wei) = (Vec::new(), Vec::new(), Vec::new());
    for v in places {
        let (d, k) = local_min_disc(m, &v)?;
        disc.push((v.clone(), crate::drinfeld::c_v(m, &v)));
        wei.push((v.clone(), int(-k * v.degree() as i64)));
        min_disc.push((v, d));
    }
    Ok(GlobalDivisors {
        disc: DiscDivisor::from_entries(disc),
        min_disc: DiscDivisor::from_entries(min_disc),
        weierstrass: DiscDivisor::from_entries(wei),
    })
}

#[derive(Clone, Debug)]
pub struct MinimalityCertificate {
    /// `(P, k*_P)` over the bad places.
    pub exponents: Vec<(Poly<FqElem>, i64)>,
    /// `beta = prod P^(k*_P)`; the minimal model is the conjugate by `beta`.
    pub beta: BaseElem,
    pub model: DrinfeldModule<Fq>,
}

impl MinimalityCertificate {
    /// Re-runs the local computation on the output model.
    pub fn validate(&self) -> Result<bool> {
        for v in bad_places(&self.model)? {
            if local_min_disc(&self.model, &v)?.1 != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn minimal_global_model(m: &DrinfeldModule<Fq>) -> Result<(DrinfeldModule<Fq>, MinimalityCertificate)> {
    let f = m.field();
    let mut beta = f.one();
    let mut exps = Vec::new();
    for v in bad_places(m)? {
        let (_, k) = local_min_disc(m, &v)?;
        if let Place::Finite(p) = &v {
            if k != 0 {
                beta = f.mul(&beta, &f.powi(&f.from_poly(p.clone()), k)?);
            }
            exps.push((p.clone(), k));
        }
    }
    let model = m.conjugate(&beta)?;
    let cert = MinimalityCertificate { exponents: exps, beta, model: model.clone() };
    Ok((model, cert))
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerNorthcottReport {
    #[serde(with = "crate::rational::serde_rat")]
    pub h_phi: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub h_j: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub deg_min_disc: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub bound: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub slack: Rat,
    /// Rendering of the achieving integral model.
    pub model: String,
    pub models_scanned: usize,
    /// True when no scanned model met the bound.
    pub inconclusive: bool,
}

/// Looks for an integral model with `h(phi) <= 2 max{h(j), deg D}` (genus 0,
/// degree 1 over `F_q(T)`), among conjugates of the minimal model by monic
/// `beta` of degree at most `scan_degree`.
pub fn check_lowernorthcott(m: &DrinfeldModule<Fq>, scan_degree: usize) -> Result<LowerNorthcottReport> {
    let (minimal, _) = minimal_global_model(m)?;
    let f = m.field();
    let h_j = weighted_height(f, m.coeffs(), &m.weights())?;
    let deg_d = global_divisors(&minimal)?.min_disc.degree();
    let bound = int(2) * max_rat(&h_j, &deg_d);
    let mut best: Option<(Rat, DrinfeldModule<Fq>)> = None;
    let mut scanned = 0;
    for beta in crate::global_field::all_polys(f, scan_degree, true) {
        let cand = minimal.conjugate(&f.from_poly(beta))?;
        let h = h_phi(&cand)?;
        scanned += 1;
        if best.as_ref().is_none_or(|(b, _)| h < *b) {
            best = Some((h, cand));
        }
    }
    let (h, model) = best.expect("at least the trivial scaling");
    Ok(LowerNorthcottReport {
        slack: &bound - &h,
        inconclusive: h > bound,
        h_phi: h,
        h_j,
        deg_min_disc: deg_d,
        bound,
        model: model.render(),
        models_scanned: scanned,
    })
}

/// `j_{phi,v} > max{j_{phi,v}, D_{phi,v}} / (d + 1)` whenever `j_{phi,v} > 0`.
pub fn corollary_holds<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>) -> Result<bool> {
    let j = j_phi_v(m, v);
    if j <= int(0) {
        return Ok(true);
    }
    let (d_v, _) = local_min_disc(m, v)?;
    let d = d_constant(m.q(), m.rank() as u32);
    Ok(j.clone() > max_rat(&j, &d_v) / int(d as i64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::base_field;
    use crate::drinfeld::c_v;

    fn setup() -> (crate::algebra::BaseField, DrinfeldModule<Fq>, DrinfeldModule<Fq>, DrinfeldModule<Fq>) {
        let f = base_field(Fq::prime(2).unwrap());
        let t = f.var();
        let car = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
        let psi = DrinfeldModule::new(f.clone(), vec![t.clone()]).unwrap();
        let rk2 = DrinfeldModule::new(f.clone(), vec![f.one(), t]).unwrap();
        (f, car, psi, rk2)
    }

    #[test]
    fn local_examples() {
        let (f, car, psi, rk2) = setup();
        let pt = Place::Finite(f.ring().x());
        assert_eq!(local_min_disc(&car, &pt).unwrap(), (int(0), 0));
        assert_eq!(local_min_disc(&psi, &pt).unwrap(), (int(0), -1));
        assert_eq!(local_min_disc(&rk2, &pt).unwrap(), (rat(1, 3), 0));
        assert_eq!(j_phi_v(&rk2, &pt), rat(1, 3));
        assert!(local_min_disc(&car, &Place::Infinity).is_err());
    }

    #[test]
    fn k_star_matches_search() {
        use crate::algebra::sample::random_nonzero_ratfunc;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f = base_field(Fq::prime(3).unwrap());
        for _ in 0..40 {
            let m = DrinfeldModule::new(
                f.clone(),
                vec![random_nonzero_ratfunc(&f, 2, &mut rng), random_nonzero_ratfunc(&f, 2, &mut rng)],
            )
            .unwrap();
            for v in bad_places(&m).unwrap() {
                let (d, k) = local_min_disc(&m, &v).unwrap();
                let Place::Finite(p) = &v else { unreachable!() };
                // least k in a window whose conjugate is integral at v
                let found = (-20..20)
                    .find(|&k| {
                        let c = m.conjugate(&f.powi(&f.from_poly(p.clone()), k).unwrap()).unwrap();
                        c.coeffs().iter().all(|a| valuation(&f, a, &v).is_none_or(|n| n >= 0))
                    })
                    .unwrap();
                assert_eq!(found, k);
                let c = m.conjugate(&f.powi(&f.from_poly(p.clone()), k).unwrap()).unwrap();
                assert_eq!(c_v(&c, &v), d);
            }
        }
    }

    #[test]
    fn d_constant_examples() {
        assert_eq!(d_constant(2, 1), 1);
        assert_eq!(d_constant(2, 2), 3);
        assert_eq!(d_constant(3, 2), 8);
    }

    #[test]
    fn divisor_examples() {
        let (f, car, psi, rk2) = setup();
        let g = global_divisors(&car).unwrap();
        assert!(g.disc.is_zero() && g.min_disc.is_zero() && g.weierstrass.is_zero());
        let g = global_divisors(&psi).unwrap();
        let pt = Place::Finite(f.ring().x());
        assert_eq!(g.disc.coeff(&pt), int(1));
        assert!(g.min_disc.is_zero());
        assert_eq!(g.weierstrass.coeff(&pt), int(1));
        let g = global_divisors(&rk2).unwrap();
        assert_eq!(g.min_disc.degree(), rat(1, 3));
        assert_eq!(g.disc.degree(), rat(1, 3));
        let bad = DrinfeldModule::new(f.clone(), vec![f.inv(&f.var()).unwrap()]).unwrap();
        assert!(matches!(global_divisors(&bad), Err(AlgebraError::Precondition(_))));
    }

    #[test]
    fn minimal_models() {
        let (_, car, psi, _) = setup();
        let (m, cert) = minimal_global_model(&psi).unwrap();
        assert_eq!(m, car);
        assert!(cert.validate().unwrap());
        assert_eq!(minimal_global_model(&car).unwrap().0, car);
    }

    #[test]
    fn lower_northcott_examples() {
        let (_, car, _, rk2) = setup();
        let r = check_lowernorthcott(&car, 1).unwrap();
        assert_eq!((r.h_phi.clone(), r.slack.clone()), (int(0), int(0)));
        let r = check_lowernorthcott(&rk2, 1).unwrap();
        assert_eq!(r.h_phi, rat(2, 3));
        assert_eq!(r.slack, int(0));
        assert!(!r.inconclusive);
    }
}
