//! `scan-jplaces`: over every module with coefficients of bounded height and
//! between 1 and `s` persistently bad places, the ratio
//! `h_hat(x) / max{h(j), deg D}` for every non-torsion `x` of bounded height.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::height_cmd::{analyse_module, instance_json, Checks};
use super::schema::{place_json, rat_json};
use super::{default_field, LabError, LabResult};
use crate::algebra::{base_field, BaseElem, Field, Fq};
use crate::drinfeld::{reduction_type, DrinfeldModule, ReductionType};
use crate::global_field::{enumerate_bounded_height, render_place, weighted_height};
use crate::heights::orbit::Orbit;
use crate::heights::{annihilator, canonical_height_local, zimmer_bounds};
use crate::minimality::{bad_places, local_min_disc};
use crate::rational::{int, max_rat, Rat};

#[derive(Clone, Debug)]
pub struct JplacesConfig {
    /// Shuffles the traversal order only; the summary does not depend on it.
    pub seed: u64,
    pub q: u64,
    pub ranks: Vec<usize>,
    pub s: usize,
    pub coeff_bound: usize,
    pub point_bound: usize,
    pub n_max: usize,
    /// Largest annihilator degree searched for torsion points.
    pub max_ann_degree: usize,
    /// Guard on the number of coefficient tuples.
    pub max_modules: u64,
}

#[derive(Debug)]
pub struct JplacesResult {
    pub report: Value,
    /// Least certified lower bound of the ratio; `None` if no module qualified.
    pub epsilon_hat: Option<Rat>,
    pub violations: usize,
}

/// `q^-rn (h(phi_T^n x) - B_lower)` at the first `n` where it is positive,
/// or `None` when the orbit recurs (torsion).
fn certified_lower_bound(m: &DrinfeldModule<Fq>, x: &BaseElem) -> crate::Result<Option<Rat>> {
    let zb = zimmer_bounds(m)?;
    let qr = int(m.q().pow(m.rank() as u32) as i64);
    let mut orbit = Orbit::new(m, x, u64::MAX);
    let mut n = 0;
    let mut scale = int(1);
    loop {
        let h = orbit.engine.height(orbit.point(n));
        if h > zb.b_lower {
            return Ok(Some((h - &zb.b_lower) / scale));
        }
        if orbit.is_preperiodic() {
            return Ok(None);
        }
        n += 1;
        scale *= &qr;
        orbit.extend_to(n);
    }
}

fn all_modules(f: &crate::algebra::BaseField, r: usize, bound: usize) -> Vec<DrinfeldModule<Fq>> {
    let cands = enumerate_bounded_height(f, bound);
    let nonzero: Vec<BaseElem> = cands.iter().filter(|a| !a.is_zero()).cloned().collect();
    let mut tuples: Vec<Vec<BaseElem>> = vec![Vec::new()];
    for j in 1..=r {
        let pool = if j == r { &nonzero } else { &cands };
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |a| {
                    let mut t = t.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
    }
    tuples.into_iter().map(|c| DrinfeldModule::new(f.clone(), c).unwrap()).collect()
}

struct ModuleOutcome {
    checks: Checks,
    record: Option<Value>,
    min_ratio: Option<(Rat, String)>,
    torsion_orders: Vec<usize>,
    torsion_count: usize,
}

fn scan_module(m: &DrinfeldModule<Fq>, points: &[BaseElem], cfg: &JplacesConfig) -> crate::Result<ModuleOutcome> {
    let f = m.field();
    let mut checks = Checks::default();
    let mut bad = Vec::new();
    let mut deg_d = Rat::zero();
    for v in bad_places(m)? {
        deg_d += local_min_disc(m, &v)?.0;
        if reduction_type(m, &v)? == ReductionType::PersistentlyBad {
            bad.push(v);
        }
    }
    let skip = ModuleOutcome { checks: Checks::default(), record: None, min_ratio: None, torsion_orders: vec![], torsion_count: 0 };
    if bad.is_empty() || bad.len() > cfg.s {
        return Ok(skip);
    }
    let h_j = weighted_height(f, m.coeffs(), &m.weights())?;
    let denom = max_rat(&h_j, &deg_d);
    if denom.is_zero() {
        return Ok(skip);
    }
    let module = analyse_module(m, &mut checks)?;

    let mut min_ratio: Option<(Rat, String)> = None;
    let mut torsion_orders = Vec::new();
    let mut torsion_points = Vec::new();
    let mut nontorsion = 0usize;
    for x in points {
        match certified_lower_bound(m, x)? {
            None => {
                let ann = annihilator(m, x, cfg.max_ann_degree);
                if let Some(a) = &ann {
                    torsion_orders.push(a.deg0());
                }
                torsion_points.push(json!({
                    "x": f.render(x),
                    "annihilator": ann.map(|a| f.ring().render(&a)),
                }));
            }
            Some(lb) => {
                nontorsion += 1;
                let local = canonical_height_local(m, x, cfg.n_max)?;
                let lower = max_rat(&lb, &local.lo);
                let ratio = &lower / &denom;
                let blob = instance_json(m, std::slice::from_ref(x), &crate::rational::rat(1, 64), cfg.n_max);
                let before = checks.failures.len();
                checks.record("ratio_positive", ratio > Rat::zero(), || {
                    json!({"module": m.render(), "x": f.render(x), "lower": rat_json(&lower)})
                });
                checks.attach_instance(before, &blob);
                if min_ratio.as_ref().is_none_or(|(r, _)| ratio < *r) {
                    min_ratio = Some((ratio, f.render(x)));
                }
            }
        }
    }
    let record = json!({
        "module": module["module"],
        "module_render": m.render(),
        "persistently_bad": bad.iter().map(|v| json!({"place": place_json(f.base(), v), "render": render_place(f, v)})).collect::<Vec<_>>(),
        "h_j": rat_json(&h_j),
        "deg_min_disc": rat_json(&deg_d),
        "denominator": rat_json(&denom),
        "nontorsion_points": nontorsion,
        "min_ratio": min_ratio.as_ref().map(|(r, _)| rat_json(r)),
        "min_ratio_point": min_ratio.as_ref().map(|(_, x)| x.clone()),
        "torsion": torsion_points,
    });
    Ok(ModuleOutcome { checks, record: Some(record), min_ratio, torsion_count: torsion_points.len(), torsion_orders })
}

pub fn scan_jplaces(cfg: &JplacesConfig) -> LabResult<JplacesResult> {
    let fq = default_field(cfg.q)?;
    let f = base_field(fq);
    let per_coeff = enumerate_bounded_height(&f, cfg.coeff_bound).len() as u64;
    let mut modules = Vec::new();
    for &r in &cfg.ranks {
        if r == 0 {
            return Err(LabError::Algebra(crate::AlgebraError::Config("rank must be positive".into())));
        }
        let count = per_coeff.checked_pow(r as u32).unwrap_or(u64::MAX);
        if count > cfg.max_modules {
            return Err(LabError::Resource(format!(
                "rank {r} enumeration has about {count} modules (limit {})",
                cfg.max_modules
            )));
        }
        modules.extend(all_modules(&f, r, cfg.coeff_bound));
    }
    let points: Vec<BaseElem> = enumerate_bounded_height(&f, cfg.point_bound).into_iter().filter(|x| !x.is_zero()).collect();
    let mut order: Vec<usize> = (0..modules.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));

    let outcomes: Vec<crate::Result<ModuleOutcome>> =
        order.par_iter().map(|&i| scan_module(&modules[i], &points, cfg)).collect();
    let mut per_module: Vec<(usize, ModuleOutcome)> = Vec::new();
    for (&i, o) in order.iter().zip(outcomes) {
        per_module.push((i, o?));
    }
    // aggregate in enumeration order so the summary ignores the shuffle
    per_module.sort_by_key(|(i, _)| *i);

    let mut checks = Checks::default();
    let mut records = Vec::new();
    let mut eps: Option<(Rat, String, String)> = None;
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut max_torsion = 0;
    let mut included = 0;
    for (i, o) in per_module {
        checks.merge(o.checks);
        let Some(rec) = o.record else { continue };
        included += 1;
        max_torsion = max_torsion.max(o.torsion_count);
        for d in o.torsion_orders {
            *histogram.entry(d).or_default() += 1;
        }
        if let Some((r, x)) = o.min_ratio {
            if eps.as_ref().is_none_or(|(e, _, _)| r < *e) {
                eps = Some((r, modules[i].render(), x));
            }
        }
        records.push(rec);
    }
    let violations = checks.failures.len();
    let epsilon_hat = eps.as_ref().map(|(e, _, _)| e.clone());
    let report = json!({
        "command": "scan-jplaces",
        "params": {"seed": cfg.seed, "q": cfg.q, "ranks": cfg.ranks, "s": cfg.s, "coeff_bound": cfg.coeff_bound,
                   "point_bound": cfg.point_bound, "n_max": cfg.n_max},
        "summary": {
            "modules_enumerated": modules.len(),
            "modules_included": included,
            "points_per_module": points.len(),
            "epsilon_hat": eps.as_ref().map(|(e, _, _)| rat_json(e)),
            "epsilon_hat_label": "empirical lower-bound estimate",
            "epsilon_hat_module": eps.as_ref().map(|(_, m, _)| m.clone()),
            "epsilon_hat_point": eps.as_ref().map(|(_, _, x)| x.clone()),
            "max_torsion_points": max_torsion,
            "torsion_annihilator_degrees": histogram.iter().map(|(d, c)| json!({"degree": d, "count": c})).collect::<Vec<_>>(),
            "checks": checks.summary(),
            "violations": violations,
        },
        "counterexamples": checks.failures,
        "records": records,
    });
    Ok(JplacesResult { report, epsilon_hat, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(seed: u64, ranks: Vec<usize>) -> JplacesConfig {
        JplacesConfig {
            seed,
            q: 2,
            ranks,
            s: 8,
            coeff_bound: 1,
            point_bound: 1,
            n_max: 6,
            max_ann_degree: 4,
            max_modules: 1 << 16,
        }
    }

    #[test]
    fn rank_one_over_f2_has_no_persistently_bad_places() {
        let r = scan_jplaces(&cfg(1, vec![1])).unwrap();
        assert_eq!(r.report["summary"]["modules_included"], json!(0));
        assert!(r.epsilon_hat.is_none());
    }

    #[test]
    fn rank_two_ratio_is_positive_and_seed_free() {
        let a = scan_jplaces(&cfg(1, vec![2])).unwrap();
        assert_eq!(a.violations, 0, "{}", a.report["counterexamples"]);
        assert!(a.epsilon_hat.clone().unwrap() > Rat::zero());
        let b = scan_jplaces(&cfg(99, vec![2])).unwrap();
        assert_eq!(a.epsilon_hat, b.epsilon_hat);
        assert_eq!(a.report["summary"], b.report["summary"]);
    }
}
