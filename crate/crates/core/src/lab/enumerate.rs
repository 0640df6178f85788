//! `enumerate`: Drinfeld modules over `F_q(T)` with `h(phi) <= bound`, up to
//! isomorphism over `F_q(T)`.

use serde_json::{json, Value};

use super::height_cmd::Checks;
use super::schema::{base_module_json, rat_json};
use super::{default_field, LabError, LabResult};
use crate::algebra::{base_field, BaseElem, BaseField, Fq};
use crate::drinfeld::DrinfeldModule;
use crate::global_field::enumerate_bounded_height;
use crate::heights::h_phi;
use crate::rational::{floor_usize, int, Rat};

#[derive(Clone, Debug)]
pub struct EnumerateConfig {
    pub q: u64,
    pub r: usize,
    pub bound: Rat,
    /// Guard on the number of coefficient tuples visited.
    pub max_tuples: u64,
}

#[derive(Debug)]
pub struct EnumerateResult {
    pub report: Value,
    pub classes: Vec<DrinfeldModule<Fq>>,
    /// Modules with `h(phi) <= bound` before identifying isomorphic ones.
    pub modules: usize,
    pub violations: usize,
}

/// Candidates for `a_j`: `h(a_j) <= w_j h(phi)` with `w_j = q^j - 1`, since
/// `h(a_j) / w_j <= h(j) + h(a_r) / (q^r - 1)`.
fn candidates(f: &BaseField, q: u64, r: usize, bound: &Rat) -> Vec<Vec<BaseElem>> {
    (1..=r)
        .map(|j| {
            let w = int(q.pow(j as u32) as i64 - 1);
            let all = enumerate_bounded_height(f, floor_usize(&(bound * w)));
            if j == r {
                all.into_iter().filter(|a| !a.is_zero()).collect()
            } else {
                all
            }
        })
        .collect()
}

/// Class representatives in first-seen order along the given traversal.
fn classify(
    f: &BaseField,
    cands: &[Vec<BaseElem>],
    bound: &Rat,
    reverse: bool,
) -> crate::Result<(Vec<DrinfeldModule<Fq>>, usize)> {
    let r = cands.len();
    let sizes: Vec<usize> = cands.iter().map(|c| c.len()).collect();
    let total: usize = sizes.iter().product();
    let mut reps: Vec<DrinfeldModule<Fq>> = Vec::new();
    let mut modules = 0;
    for step in 0..total {
        let mut idx = if reverse { total - 1 - step } else { step };
        let mut coeffs = Vec::with_capacity(r);
        for (j, c) in cands.iter().enumerate() {
            coeffs.push(c[idx % sizes[j]].clone());
            idx /= sizes[j];
        }
        let m = DrinfeldModule::new(f.clone(), coeffs)?;
        if h_phi(&m)? > *bound {
            continue;
        }
        modules += 1;
        let mut seen = false;
        for rep in &reps {
            if rep.l_isomorphism(&m)?.is_some() {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(m);
        }
    }
    Ok((reps, modules))
}

pub fn enumerate_modules(cfg: &EnumerateConfig) -> LabResult<EnumerateResult> {
    if cfg.r == 0 {
        return Err(LabError::Algebra(crate::AlgebraError::Config("rank must be positive".into())));
    }
    let fq = default_field(cfg.q)?;
    let f = base_field(fq);
    let cands = candidates(&f, cfg.q, cfg.r, &cfg.bound);
    let total = cands.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64)).unwrap_or(u64::MAX);
    if total > cfg.max_tuples {
        return Err(LabError::Resource(format!("{total} coefficient tuples exceed the limit {}", cfg.max_tuples)));
    }
    let (classes, modules) = classify(&f, &cands, &cfg.bound, false)?;
    let (rev_classes, rev_modules) = classify(&f, &cands, &cfg.bound, true)?;
    let mut checks = Checks::default();
    checks.record("traversal_order_stable", classes.len() == rev_classes.len() && modules == rev_modules, || {
        json!({"forward": classes.len(), "reverse": rev_classes.len()})
    });
    let violations = checks.failures.len();
    let report = json!({
        "command": "enumerate",
        "params": {"q": cfg.q, "r": cfg.r, "bound": rat_json(&cfg.bound)},
        "tuples_visited": total,
        "modules": modules,
        "classes": classes.len(),
        "representatives": classes.iter().map(|m| json!({
            "module": base_module_json(m),
            "render": m.render(),
            "h_phi": rat_json(&h_phi(m).unwrap()),
        })).collect::<Vec<_>>(),
        "checks": checks.summary(),
        "counterexamples": checks.failures,
    });
    Ok(EnumerateResult { report, classes, modules, violations })
}
