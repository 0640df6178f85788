//! `torsion`: the torsion submodule over `F_q(T)` with annihilators, checked
//! for closure under `phi_T`, scalars and addition.

use std::collections::HashSet;

use serde_json::{json, Value};

use super::height_cmd::Checks;
use super::schema::{base_module_json, elem_json, rat_json};
use super::LabResult;
use crate::algebra::{BaseElem, Field, Fq};
use crate::drinfeld::DrinfeldModule;
use crate::heights::{annihilator, torsion_submodule, zimmer_bounds};

pub fn torsion_report(m: &DrinfeldModule<Fq>, max_candidates: u128, max_ann_degree: usize) -> LabResult<Value> {
    let f = m.field();
    let tors = torsion_submodule(m, max_candidates)?;
    let set: HashSet<&BaseElem> = tors.iter().collect();
    let mut checks = Checks::default();
    let mut elems = Vec::new();
    for x in &tors {
        let ann = annihilator(m, x, max_ann_degree);
        if let Some(a) = &ann {
            let ok = m.field().is_zero(&crate::drinfeld::skew_eval(f, &m.phi_a(a), x));
            checks.record("annihilator_kills", ok, || json!({"x": f.render(x)}));
        }
        let image = m.eval_t(x);
        checks.record("closed_under_phi_t", set.contains(&image), || {
            json!({"x": f.render(x), "phi_T(x)": f.render(&image)})
        });
        for c in f.base().nonzero_elements() {
            let y = f.mul(&f.embed(c), x);
            checks.record("closed_under_scalars", set.contains(&y), || json!({"x": f.render(x)}));
        }
        elems.push(json!({
            "x": elem_json(f, x),
            "render": f.render(x),
            "annihilator": ann.as_ref().map(|a| f.ring().render(a)),
            "annihilator_degree": ann.as_ref().map(|a| a.deg0()),
        }));
    }
    for (i, x) in tors.iter().enumerate() {
        for y in &tors[i..] {
            let s = f.add(x, y);
            checks.record("closed_under_addition", set.contains(&s), || {
                json!({"x": f.render(x), "y": f.render(y)})
            });
        }
    }
    let zb = zimmer_bounds(m)?;
    let report = json!({
        "command": "torsion",
        "module": base_module_json(m),
        "module_render": m.render(),
        "search_height": rat_json(&zb.b_lower),
        "size": tors.len(),
        "elements": elems,
        "checks": checks.summary(),
        "counterexamples": checks.failures,
    });
    if checks.failures.is_empty() {
        Ok(report)
    } else {
        Err(super::LabError::Violation { summary: "torsion set is not a submodule".into(), report })
    }
}
