//! `scan-zimmer`: random (module, point) pairs, every point- and module-level
//! inequality checked on each.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::height_cmd::{analyse_module, analyse_point, instance_json, Checks};
use super::{default_field, LabError, LabResult};
use crate::algebra::sample::{random_nonzero_ratfunc, random_ratfunc};
use crate::algebra::{base_field, BaseElem, Fq};
use crate::drinfeld::DrinfeldModule;
use crate::heights::zimmer_bounds;
use crate::rational::{int, max_rat, Rat};

#[derive(Clone, Debug)]
pub struct ZimmerConfig {
    pub seed: u64,
    pub count: usize,
    pub q: u64,
    pub r: usize,
    /// Degree bound for numerators and denominators of the sampled
    /// coefficients and points.
    pub bound: usize,
    pub tol: Rat,
    pub n_max: usize,
}

/// A module with coefficients of height at most `bound` and two points of
/// height at most `bound` (the second one feeds the ultrametric check).
pub fn sample_instance(
    fq: &Fq,
    r: usize,
    bound: usize,
    rng: &mut ChaCha8Rng,
) -> (DrinfeldModule<Fq>, BaseElem, BaseElem) {
    let f = base_field(fq.clone());
    let mut coeffs: Vec<BaseElem> = (1..r).map(|_| random_ratfunc(&f, bound, rng)).collect();
    coeffs.push(random_nonzero_ratfunc(&f, bound, rng));
    let m = DrinfeldModule::new(f.clone(), coeffs).expect("leading coefficient is nonzero");
    let x = random_nonzero_ratfunc(&f, bound, rng);
    let y = random_ratfunc(&f, bound, rng);
    (m, x, y)
}

#[derive(Debug)]
pub struct ZimmerResult {
    pub report: Value,
    pub max_deviation: Rat,
    pub violations: usize,
}

pub fn scan_zimmer(cfg: &ZimmerConfig) -> LabResult<ZimmerResult> {
    if cfg.count == 0 || cfg.r == 0 {
        return Err(LabError::Algebra(crate::AlgebraError::Config("count and rank must be positive".into())));
    }
    let fq = default_field(cfg.q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<_> = (0..cfg.count).map(|_| sample_instance(&fq, cfg.r, cfg.bound, &mut rng)).collect();
    let results: Vec<crate::Result<(Checks, Value, Rat)>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, (m, x, y))| {
            let mut checks = Checks::default();
            let module = analyse_module(m, &mut checks)?;
            let pt = analyse_point(m, x, Some(y), &cfg.tol, cfg.n_max, &mut checks)?;
            let blob = instance_json(m, &[x.clone(), y.clone()], &cfg.tol, cfg.n_max);
            checks.attach_instance(0, &blob);
            let zb = zimmer_bounds(m)?;
            let record = json!({
                "index": i,
                "module": module["module"],
                "module_render": m.render(),
                "zimmer": zb,
                "point": pt.json,
            });
            Ok((checks, record, pt.deviation))
        })
        .collect();
    let mut checks = Checks::default();
    let mut records = Vec::new();
    let mut max_dev = int(0);
    for r in results {
        let (c, rec, dev) = r?;
        checks.merge(c);
        records.push(rec);
        max_dev = max_rat(&max_dev, &dev);
    }
    let violations = checks.failures.len();
    let report = json!({
        "command": "scan-zimmer",
        "params": {"seed": cfg.seed, "count": cfg.count, "q": cfg.q, "r": cfg.r, "bound": cfg.bound,
                   "tol": super::schema::rat_json(&cfg.tol), "n_max": cfg.n_max},
        "summary": {
            "max_normalized_deviation": super::schema::rat_json(&max_dev),
            "checks": checks.summary(),
            "violations": violations,
        },
        "counterexamples": checks.failures,
        "records": records,
    });
    Ok(ZimmerResult { report, max_deviation: max_dev, violations })
}
