//! `family`: a module over `F_q(T)(u)` and a point, specialized at `u = beta`.
//! The fibre heights `h_hat(x_beta)` are fitted against `h(beta)`; the slope
//! should approach the generic-fibre height.

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::height_cmd::Checks;
use super::schema::{
    as_array, as_rat, elem_json, field_json, field_of, parse_elem, parse_field, parse_tower_elem, rat_json,
    tower_elem_json, SResult,
};
use super::LabResult;
use crate::algebra::{base_field, tower_field, BaseElem, BaseField, Field, Fq, TowerElem, TowerField};
use crate::drinfeld::DrinfeldModule;
use crate::global_field::naive_height;
use crate::heights::{canonical_height, canonical_height_local, is_torsion, HeightInterval};
use crate::rational::{abs, int, max_rat, Rat};

#[derive(Clone, Debug)]
pub struct FamilyConfig {
    pub fq: Fq,
    /// `a_1 .. a_r` in `F_q(T)(u)`.
    pub coeffs: Vec<TowerElem>,
    pub point: TowerElem,
    pub betas: Vec<BaseElem>,
    pub tol: Rat,
    pub n_max: usize,
    /// Allowed `|slope - h_hat| / max(h_hat, 1)`.
    pub slope_tol: Rat,
}

impl FamilyConfig {
    pub fn to_json(&self) -> Value {
        let tf = tower_field(self.fq.clone());
        let bf = tf.base();
        json!({
            "field": field_json(&self.fq),
            "family": {
                "q": self.fq.q(),
                "rank": self.coeffs.len(),
                "phi_T": self.coeffs.iter().map(|a| tower_elem_json(&tf, a)).collect::<Vec<_>>(),
            },
            "point": tower_elem_json(&tf, &self.point),
            "betas": self.betas.iter().map(|b| elem_json(bf, b)).collect::<Vec<_>>(),
            "tol": rat_json(&self.tol),
            "slope_tol": rat_json(&self.slope_tol),
            "n_max": self.n_max,
        })
    }
}

/// `phi_T = T x + u x^2` over `F_2(T)(u)`, `x = 1`, `beta = T^k` for
/// `k = 1..=10`.
pub fn default_family() -> FamilyConfig {
    let fq = Fq::prime(2).unwrap();
    let tf = tower_field(fq.clone());
    let bf = tf.base().clone();
    let u = tf.var();
    let t = bf.var();
    let betas = (1..=10).map(|k| bf.powi(&t, k).unwrap()).collect();
    FamilyConfig {
        fq,
        coeffs: vec![u],
        point: tf.one(),
        betas,
        tol: crate::rational::rat(1, 64),
        n_max: 8,
        slope_tol: crate::rational::rat(1, 10),
    }
}

pub fn parse_family(v: &Value) -> SResult<FamilyConfig> {
    let fq = parse_field(field_of(v, "$", "field")?, "$.field")?;
    let tf = tower_field(fq.clone());
    let fam = field_of(v, "$", "family")?;
    let arr = as_array(field_of(fam, "$.family", "phi_T")?, "$.family.phi_T")?;
    if arr.is_empty() {
        return Err(super::schema::SchemaError { path: "$.family.phi_T".into(), msg: "rank must be positive".into() });
    }
    let mut coeffs = Vec::new();
    for (i, a) in arr.iter().enumerate() {
        coeffs.push(parse_tower_elem(&tf, a, &format!("$.family.phi_T[{i}]"))?);
    }
    if coeffs.last().unwrap().is_zero() {
        let p = format!("$.family.phi_T[{}]", coeffs.len() - 1);
        return Err(super::schema::SchemaError { path: p, msg: "leading coefficient is zero".into() });
    }
    let point = parse_tower_elem(&tf, field_of(v, "$", "point")?, "$.point")?;
    let mut betas = Vec::new();
    for (i, b) in as_array(field_of(v, "$", "betas")?, "$.betas")?.iter().enumerate() {
        betas.push(parse_elem(tf.base(), b, &format!("$.betas[{i}]"))?);
    }
    let tol = match v.get("tol") {
        Some(t) => as_rat(t, "$.tol")?,
        None => crate::rational::rat(1, (fq.q() as i64).pow(6)),
    };
    let slope_tol = match v.get("slope_tol") {
        Some(t) => as_rat(t, "$.slope_tol")?,
        None => crate::rational::rat(1, 10),
    };
    let n_max = match v.get("n_max") {
        Some(n) => super::schema::as_u64(n, "$.n_max")? as usize,
        None => crate::heights::DEFAULT_N_MAX,
    };
    Ok(FamilyConfig { fq, coeffs, point, betas, tol, n_max, slope_tol })
}

/// `a(beta)`, or `None` at a pole.
fn specialize(tf: &TowerField, a: &TowerElem, beta: &BaseElem) -> Option<BaseElem> {
    let bf = tf.base();
    let num = tf.ring().eval(a.num(), beta);
    let den = tf.ring().eval(a.den(), beta);
    bf.div(&num, &den).ok()
}

/// Exact least-squares slope; `None` without two distinct abscissae.
pub(crate) fn least_squares_slope(pts: &[(Rat, Rat)]) -> Option<Rat> {
    let n = int(pts.len() as i64);
    let sx: Rat = pts.iter().map(|(x, _)| x.clone()).sum();
    let sy: Rat = pts.iter().map(|(_, y)| y.clone()).sum();
    let sxx: Rat = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: Rat = pts.iter().map(|(x, y)| x * y).sum();
    let den = &n * &sxx - &sx * &sx;
    if den.is_zero() {
        return None;
    }
    Some((&n * &sxy - &sx * &sy) / den)
}

#[derive(Debug)]
pub struct FamilyResult {
    pub report: Value,
    pub generic: HeightInterval,
    pub slope: Option<Rat>,
    pub violations: usize,
}

fn fibre_height(m: &DrinfeldModule<Fq>, x: &BaseElem, tol: &Rat, n_max: usize) -> crate::Result<HeightInterval> {
    let local = canonical_height_local(m, x, n_max)?;
    if local.exact {
        return Ok(local);
    }
    match canonical_height(m, x, tol) {
        Ok(g) => Ok(g.intersect(&local).unwrap_or(local)),
        Err(crate::AlgebraError::Resource(_)) => Ok(local),
        Err(e) => Err(e),
    }
}

pub fn family_experiment(cfg: &FamilyConfig) -> LabResult<FamilyResult> {
    let tf = tower_field(cfg.fq.clone());
    let bf: BaseField = base_field(cfg.fq.clone());
    let generic_module = DrinfeldModule::new_tower(tf.clone(), cfg.coeffs.clone())?;
    let generic = canonical_height(&generic_module, &cfg.point, &cfg.tol)?;

    let mut warnings = Vec::new();
    let u_free = cfg.coeffs.iter().chain(std::iter::once(&cfg.point)).all(|a| tf.is_constant(a));
    if u_free {
        warnings.push("degenerate family: coefficients and point do not depend on u (isotrivial)".to_string());
    }

    let fibres: Vec<LabResult<Value>> = cfg
        .betas
        .par_iter()
        .map(|beta| {
            let spec: Option<Vec<BaseElem>> = cfg.coeffs.iter().map(|a| specialize(&tf, a, beta)).collect();
            let x = specialize(&tf, &cfg.point, beta);
            let (Some(coeffs), Some(x)) = (spec, x) else {
                return Ok(json!({"beta": bf.render(beta), "skipped": "coefficient or point has a pole"}));
            };
            if coeffs.last().unwrap().is_zero() {
                return Ok(json!({"beta": bf.render(beta), "skipped": "degenerate fibre: a_r(beta) = 0"}));
            }
            let m = DrinfeldModule::new(bf.clone(), coeffs)?;
            let h = fibre_height(&m, &x, &cfg.tol, cfg.n_max)?;
            let torsion = is_torsion(&m, &x)?;
            Ok(json!({
                "beta": bf.render(beta),
                "h_beta": rat_json(&naive_height(beta)),
                "h_hat": serde_json::to_value(&h).unwrap(),
                "h_hat_mid": rat_json(&h.mid()),
                "uncertainty": rat_json(&h.width()),
                "torsion": torsion,
            }))
        })
        .collect();
    let mut rows = Vec::new();
    let mut pts = Vec::new();
    let mut max_torsion_h: Option<Rat> = None;
    for (beta, f) in cfg.betas.iter().zip(fibres) {
        let row = f?;
        if let Some(s) = row.get("skipped") {
            warnings.push(format!("beta = {}: {}", bf.render(beta), s.as_str().unwrap()));
        } else {
            let hb = naive_height(beta);
            let mid = crate::rational::parse_rat(row["h_hat_mid"].as_str().unwrap()).unwrap();
            if row["torsion"] == json!(true) {
                max_torsion_h = Some(max_torsion_h.map_or(hb.clone(), |m| max_rat(&m, &hb)));
            }
            pts.push((hb, mid));
        }
        rows.push(row);
    }
    let slope = least_squares_slope(&pts);
    if slope.is_none() {
        warnings.push("slope undefined: fewer than two distinct h(beta)".to_string());
    }
    let mut checks = Checks::default();
    if let Some(s) = &slope {
        // distance from the slope to the generic interval
        let dist = if generic.contains(s) {
            Rat::zero()
        } else {
            abs(&(s - &generic.lo)).min(abs(&(s - &generic.hi)))
        };
        let allowed = &cfg.slope_tol * max_rat(&generic.hi, &int(1));
        checks.record("slope_matches_generic", dist <= allowed, || {
            json!({"slope": rat_json(s), "generic": serde_json::to_value(&generic).unwrap(), "instance": cfg.to_json()})
        });
    }
    let violations = checks.failures.len();
    let report = json!({
        "command": "family",
        "instance": cfg.to_json(),
        "generic_h_hat": serde_json::to_value(&generic).unwrap(),
        "fibres": rows,
        "slope": slope.as_ref().map(rat_json),
        "max_torsion_h_beta": max_torsion_h.as_ref().map(rat_json),
        "warnings": warnings,
        "checks": checks.summary(),
        "counterexamples": checks.failures,
    });
    Ok(FamilyResult { report, generic, slope, violations })
}
