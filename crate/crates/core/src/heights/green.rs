//! Local Green's functions `G_v(x) = lim q^(-rn) log+ |phi_T^n(x)|_v` and local
//! heights `lambda_v(x) = log|x^-1|_v + G_v(x) + c_v`.

use num_traits::Zero;

use super::interval::{GreenResult, HeightInterval};
use super::orbit::Orbit;
use crate::algebra::{Factorable, Field, RatFunc};
use crate::drinfeld::{c_v, j_phi_v, log_b_t, DrinfeldModule};
use crate::error::{AlgebraError, Result};
use crate::global_field::{log_abs, log_abs_opt, Place};
use crate::rational::{int, max_rat, min_rat, pos, Rat};

/// Orbit degree beyond which local iteration stops and reports an interval.
pub const LOCAL_MAX_DEGREE: u64 = 1 << 17;
pub const DEFAULT_N_MAX: usize = 8;

/// Constants of the escape argument at one place.
#[derive(Clone, Debug)]
pub struct LocalConstants {
    pub log_b_t: Rat,
    pub c_v: Rat,
    /// Radius of a disk mapped into itself by `phi_T`: only when `|T|_v <= 1`,
    /// it is `min_i -log|a_i|_v / (q^i - 1)`.
    pub rho: Option<Rat>,
    /// Upper bound for `G_v` on the disk `|y| <= B_T`.
    pub inner_bound: Rat,
    /// `j_v + log+|T|_v / (q^r - 1) + max(0, -c_v)`.
    pub diff_slack: Rat,
}

pub fn local_constants<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>) -> LocalConstants {
    let f = m.field();
    let q = m.q();
    let qr = q.pow(m.rank() as u32);
    let lb = log_b_t(m, v);
    let c = c_v(m, v);
    let rho = if log_abs(f, m.t(), v).unwrap() <= Rat::zero() {
        (1..=m.rank())
            .filter_map(|i| log_abs_opt(f, m.a(i), v).map(|l| -l / int(q.pow(i as u32) as i64 - 1)))
            .reduce(|a, b| min_rat(&a, &b))
    } else {
        None
    };
    // for |y| <= B_T, |phi_T(y)| <= M1 = max |a_i| B_T^(q^i); so
    // sup G <= q^-r max(sup G, log M1 - c) gives sup G <= max(0, (log M1 - c)/q^r)
    let log_m1 = (0..=m.rank())
        .filter_map(|i| log_abs_opt(f, m.a(i), v).map(|l| l + &lb * int(q.pow(i as u32) as i64)))
        .reduce(|a, b| max_rat(&a, &b))
        .unwrap();
    let inner_bound = pos(&((log_m1 - &c) / int(qr as i64)));
    let log_t = log_abs(f, m.t(), v).unwrap();
    let diff_slack = j_phi_v(m, v) + pos(&log_t) / int(qr as i64 - 1) + pos(&-c.clone());
    LocalConstants { log_b_t: lb, c_v: c, rho, inner_bound, diff_slack }
}

/// `G_v(x)` from an orbit shared across places.
///
/// Exact when the orbit escapes `B_T` (closed form), enters the invariant
/// disk, hits zero, or recurs; otherwise `[0, q^(-rN) sup_{|y| <= B_T} G]`
/// with `N` the last iterate computed.
pub fn green_from_orbit<K: Field>(
    orbit: &mut Orbit<'_, K>,
    v: &Place<K::Elem>,
    consts: &LocalConstants,
    n_max: usize,
) -> GreenResult {
    let m = orbit.engine.module();
    let qr = int(m.q().pow(m.rank() as u32) as i64);
    let mut scale = int(1);
    let mut last = 0;
    for n in 0..=n_max {
        if orbit.extend_to(n) < n {
            break;
        }
        last = n;
        let l = match orbit.engine.log_abs(orbit.point(n), v) {
            None => return GreenResult::zero(),
            Some(l) => l,
        };
        if l > consts.log_b_t {
            let value = (l - &consts.c_v) / &scale;
            return GreenResult {
                value: HeightInterval::exact(value),
                escaped_at: Some(n as u32),
                closed_form: true,
            };
        }
        if consts.rho.as_ref().is_some_and(|r| l <= *r) {
            return GreenResult::zero();
        }
        scale *= &qr;
    }
    if orbit.is_preperiodic() {
        return GreenResult::zero();
    }
    // the local height difference bound gives G(y) <= log+|y| + j_v
    // + log+|T|_v / (q^r - 1) + max(0, -c_v) as well
    let by_diff = orbit.engine.log_abs(orbit.point(last), v).map(|l| pos(&l) + &consts.diff_slack);
    let bound = match by_diff {
        Some(b) => min_rat(&b, &consts.inner_bound),
        None => Rat::zero(),
    };
    let denom = num_traits::pow(qr, last);
    GreenResult {
        value: HeightInterval::new(Rat::zero(), bound / denom),
        escaped_at: None,
        closed_form: false,
    }
}

pub fn green_local<K: Factorable>(
    m: &DrinfeldModule<K>,
    v: &Place<K::Elem>,
    x: &RatFunc<K::Elem>,
    n_max: usize,
) -> GreenResult {
    if x.is_zero() {
        return GreenResult::zero();
    }
    let mut orbit = Orbit::new(m, x, LOCAL_MAX_DEGREE);
    green_from_orbit(&mut orbit, v, &local_constants(m, v), n_max)
}

/// `lambda_v(x) = log|x^-1|_v + G_v(x) + c_v`.
pub fn lambda_local<K: Factorable>(
    m: &DrinfeldModule<K>,
    v: &Place<K::Elem>,
    x: &RatFunc<K::Elem>,
    n_max: usize,
) -> Result<HeightInterval> {
    if x.is_zero() {
        return Err(AlgebraError::Domain("local height has a pole at 0".into()));
    }
    let g = green_local(m, v, x, n_max);
    let shift = -log_abs(m.field(), x, v)? + c_v(m, v);
    Ok(g.value.shift(&shift))
}

/// No cancellation in `phi_T(x)` at `v`: `log|phi_T(x)| = max_i log|a_i x^(q^i)|`.
pub fn is_t_generic<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>, x: &RatFunc<K::Elem>) -> Result<bool> {
    let f = m.field();
    let lx = log_abs(f, x, v)?;
    let q = m.q();
    let top = (0..=m.rank())
        .filter_map(|i| log_abs_opt(f, m.a(i), v).map(|l| l + &lx * int(q.pow(i as u32) as i64)))
        .reduce(|a, b| max_rat(&a, &b))
        .unwrap();
    Ok(log_abs_opt(f, &m.eval_t(x), v) == Some(top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{base_field, Fq};
    use crate::rational::rat;

    #[test]
    fn carlitz_green_examples() {
        let m = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
        let f = m.field().clone();
        let t = f.var();
        let t2 = f.mul(&t, &t);
        let g = green_local(&m, &Place::Infinity, &t2, 8);
        assert_eq!(g.value, HeightInterval::exact(int(2)));
        assert_eq!(g.escaped_at, Some(0));
        assert!(g.closed_form);
        assert_eq!(green_local(&m, &Place::Infinity, &t, 8).value, HeightInterval::zero());
        assert_eq!(green_local(&m, &Place::Infinity, &f.zero(), 8).value, HeightInterval::zero());
    }

    #[test]
    fn lambda_examples() {
        let m = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
        let f = m.field().clone();
        let t = f.var();
        let pt = Place::Finite(f.ring().x());
        assert_eq!(lambda_local(&m, &pt, &t, 8).unwrap(), HeightInterval::exact(int(1)));
        assert_eq!(lambda_local(&m, &Place::Infinity, &f.mul(&t, &t), 8).unwrap(), HeightInterval::zero());
        assert!(lambda_local(&m, &pt, &f.zero(), 8).is_err());
    }

    #[test]
    fn t_generic_examples() {
        let m = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
        let f = m.field().clone();
        let t = f.var();
        assert!(is_t_generic(&m, &Place::Infinity, &f.mul(&t, &t)).unwrap());
        assert!(!is_t_generic(&m, &Place::Infinity, &t).unwrap());
    }

    #[test]
    fn rank_two_green_at_bad_place() {
        // phi_T = T x + x^2 + T x^4 at (T): 1/T escapes immediately
        let f = base_field(Fq::prime(2).unwrap());
        let t = f.var();
        let m = DrinfeldModule::new(f.clone(), vec![f.one(), t.clone()]).unwrap();
        let pt = Place::Finite(f.ring().x());
        let g = green_local(&m, &pt, &f.inv(&t).unwrap(), 8);
        // log|1/T| = 1 > log B_T = 5/6, G = 1 - 1/3
        assert_eq!(g.value, HeightInterval::exact(rat(2, 3)));
    }
}
