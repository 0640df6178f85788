//! Per-place invariants of a Drinfeld module.

use serde::{Deserialize, Serialize};

use super::module::DrinfeldModule;
use super::newton::max_root_log;
use crate::algebra::Field;
use crate::error::{AlgebraError, Result};
use crate::global_field::{log_abs, log_abs_opt, Place};
use crate::rational::{int, pos, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionType {
    Good,
    PotentiallyGood,
    PersistentlyBad,
}

fn qr1<K: Field>(m: &DrinfeldModule<K>, j: usize) -> Rat {
    int(m.q().pow(j as u32) as i64 - 1)
}

/// `c_v = log|a_r^-1|_v / (q^r - 1)`.
pub fn c_v<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>) -> Rat {
    let l = log_abs(m.field(), m.leading(), v).expect("a_r is nonzero");
    -l / qr1(m, m.rank())
}

/// `j_{phi,v} = max_j log|a_j|_v / (q^j - 1) + c_v`, over nonzero `a_j`.
pub fn j_phi_v<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>) -> Rat {
    let best = (1..=m.rank())
        .filter_map(|j| log_abs_opt(m.field(), m.a(j), v).map(|l| l / qr1(m, j)))
        .max()
        .expect("a_r is nonzero");
    best + c_v(m, v)
}

/// `log+ |T^-1|_v`.
pub fn log_plus_t_inv<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>) -> Rat {
    pos(&-log_abs(m.field(), m.t(), v).expect("T is nonzero"))
}

/// `log B_T`: the largest `log|xi|` over nonzero `xi` in `phi[T]` plus
/// `log+|T^-1|_v / (q^r - 1)`. The first term is the top slope of the Newton
/// polygon of `phi_T(x)/x = T + a_1 x^(q-1) + ... + a_r x^(q^r - 1)`.
pub fn log_b_t<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>) -> Rat {
    let pts: Vec<(u64, Option<Rat>)> = (0..=m.rank())
        .map(|j| (m.q().pow(j as u32) - 1, log_abs_opt(m.field(), m.a(j), v)))
        .collect();
    let top = max_root_log(&pts).expect("rank is positive");
    top + log_plus_t_inv(m, v) / qr1(m, m.rank())
}

/// Reduction type at a finite place, read off the minimal discriminant.
pub fn reduction_type<K: Field>(m: &DrinfeldModule<K>, v: &Place<K::Elem>) -> Result<ReductionType> {
    if !v.is_finite() {
        return Err(AlgebraError::Domain("reduction type is only defined at finite places".into()));
    }
    let (disc, _) = crate::minimality::local_min_disc(m, v)?;
    Ok(if disc == int(0) {
        ReductionType::Good
    } else if j_phi_v(m, v) == int(0) {
        ReductionType::PotentiallyGood
    } else {
        ReductionType::PersistentlyBad
    })
}
