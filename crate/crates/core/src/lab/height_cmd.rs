//! `height`: full height report for a module and a list of points, with every
//! local and global inequality checked along the way. The scans reuse
//! [`analyse_point`] and [`analyse_module`], so a counterexample blob replays
//! through this command.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::schema::{
    as_array, as_rat, as_u64, base_module_json, divisor_json, elem_json, field_json, field_of, parse_elem, parse_field,
    parse_module, place_json, rat_json, SResult,
};
use super::{LabError, LabResult};
use crate::algebra::{base_field, BaseElem, Field, Fq, FqElem};
use crate::drinfeld::{c_v, j_phi_v, log_b_t, log_plus_t_inv, reduction_type, DrinfeldModule, ReductionType};
use crate::error::{AlgebraError, Result};
use crate::global_field::{log_abs, naive_height, render_place, valuation, Place};
use crate::heights::orbit::Orbit;
use crate::heights::{
    canonical_height, canonical_height_decomposed, green_from_orbit, is_t_generic, is_torsion, local_constants,
    zimmer_bounds, GreenResult, HeightInterval, DEFAULT_N_MAX, LOCAL_MAX_DEGREE,
};
use crate::minimality::{
    bad_places, check_lowernorthcott, corollary_holds, d_constant, global_divisors, local_min_disc,
    minimal_global_model,
};
use crate::rational::{abs, int, max_rat, min_rat, pos, rat, Rat};

#[derive(Clone, Debug)]
pub struct HeightInstance {
    pub module: DrinfeldModule<Fq>,
    pub points: Vec<BaseElem>,
    pub tol: Rat,
    pub n_max: usize,
}

impl HeightInstance {
    pub fn to_json(&self) -> Value {
        instance_json(&self.module, &self.points, &self.tol, self.n_max)
    }
}

pub(crate) fn instance_json(m: &DrinfeldModule<Fq>, points: &[BaseElem], tol: &Rat, n_max: usize) -> Value {
    let f = m.field();
    json!({
        "field": field_json(f.base()),
        "module": base_module_json(m),
        "points": points.iter().map(|x| elem_json(f, x)).collect::<Vec<_>>(),
        "tol": rat_json(tol),
        "n_max": n_max,
    })
}

/// `tol` defaults to `q^-6` and `n_max` to [`DEFAULT_N_MAX`].
pub fn parse_height_instance(v: &Value) -> SResult<HeightInstance> {
    let fq = parse_field(field_of(v, "$", "field")?, "$.field")?;
    let f = base_field(fq);
    let module = parse_module(&f, field_of(v, "$", "module")?, "$.module")?;
    let mut points = Vec::new();
    if let Some(p) = v.get("points") {
        for (i, x) in as_array(p, "$.points")?.iter().enumerate() {
            points.push(parse_elem(&f, x, &format!("$.points[{i}]"))?);
        }
    }
    let tol = match v.get("tol") {
        Some(t) => as_rat(t, "$.tol")?,
        None => rat(1, (f.base().q() as i64).pow(6)),
    };
    if tol <= Rat::zero() {
        return Err(super::schema::SchemaError { path: "$.tol".into(), msg: "tolerance must be positive".into() });
    }
    let n_max = match v.get("n_max") {
        Some(n) => as_u64(n, "$.n_max")? as usize,
        None => DEFAULT_N_MAX,
    };
    Ok(HeightInstance { module, points, tol, n_max })
}

/// Pass/fail tallies per named inequality plus the failing cases.
#[derive(Debug, Default)]
pub(crate) struct Checks {
    pub tally: BTreeMap<&'static str, (u64, u64)>,
    pub failures: Vec<Value>,
}

impl Checks {
    pub fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> Value) {
        let e = self.tally.entry(name).or_default();
        if ok {
            e.0 += 1;
        } else {
            e.1 += 1;
            let mut d = detail();
            d["check"] = json!(name);
            self.failures.push(d);
        }
    }

    pub fn merge(&mut self, other: Checks) {
        for (k, (p, f)) in other.tally {
            let e = self.tally.entry(k).or_default();
            e.0 += p;
            e.1 += f;
        }
        self.failures.extend(other.failures);
    }

    pub fn summary(&self) -> Value {
        let m: serde_json::Map<String, Value> = self
            .tally
            .iter()
            .map(|(k, (p, f))| (k.to_string(), json!({"pass": p, "fail": f})))
            .collect();
        Value::Object(m)
    }

    /// Attaches the replay blob to every failure recorded since `from`.
    pub fn attach_instance(&mut self, from: usize, blob: &Value) {
        for f in &mut self.failures[from..] {
            f["instance"] = blob.clone();
        }
    }
}

fn ival(i: &HeightInterval) -> Value {
    serde_json::to_value(i).unwrap()
}

fn green_at(orbit: Option<&mut Orbit<'_, Fq>>, m: &DrinfeldModule<Fq>, v: &Place<FqElem>, n_max: usize) -> GreenResult {
    match orbit {
        Some(o) => green_from_orbit(o, v, &local_constants(m, v), n_max),
        None => GreenResult::zero(),
    }
}

fn orbit_of<'a>(m: &'a DrinfeldModule<Fq>, x: &BaseElem) -> Option<Orbit<'a, Fq>> {
    (!x.is_zero()).then(|| Orbit::new(m, x, LOCAL_MAX_DEGREE))
}

/// Same value when both are exact; overlapping intervals otherwise.
fn consistent(a: &HeightInterval, b: &HeightInterval) -> bool {
    if a.exact && b.exact {
        a.lo == b.lo
    } else {
        a.intersects(b)
    }
}

/// Result of analysing one point.
pub(crate) struct PointAnalysis {
    pub json: Value,
    /// `|h_hat - h| / bound` at the point of the local interval nearest `h(x)`.
    pub deviation: Rat,
}

/// Heights of `x` by both methods with the per-place decomposition, checking
/// the height sandwich, method agreement, and at each relevant place the
/// escape lower bound, the local height difference, the T-generic bounds, the
/// potentially-good bound and the functional equations of `G` and `lambda`
/// under `phi_T`. `companion` feeds the ultrametric check on `x + companion`.
pub(crate) fn analyse_point(
    m: &DrinfeldModule<Fq>,
    x: &BaseElem,
    companion: Option<&BaseElem>,
    tol: &Rat,
    n_max: usize,
    checks: &mut Checks,
) -> Result<PointAnalysis> {
    let f = m.field();
    let q = m.q() as i64;
    let qr = int(q.pow(m.rank() as u32));
    let qr1 = &qr - int(1);
    let zb = zimmer_bounds(m)?;
    let h = naive_height(x);
    let dec = canonical_height_decomposed(m, x, n_max)?;
    let local = dec.total.clone();
    let (global, global_note) = match canonical_height(m, x, tol) {
        Ok(i) => (Some(i), None),
        Err(AlgebraError::Resource(s)) => (None, Some(s)),
        Err(e) => return Err(e),
    };
    let torsion = is_torsion(m, x)?;
    let xr = f.render(x);

    let lo_b = &h - &zb.b_lower;
    let hi_b = &h + &zb.b_upper;
    checks.record("height_sandwich", local.meets(&lo_b, &hi_b), || {
        json!({"x": xr, "h": rat_json(&h), "h_hat": ival(&local), "range": [rat_json(&lo_b), rat_json(&hi_b)]})
    });
    if let Some(g) = &global {
        checks.record("method_agreement", consistent(g, &local), || {
            json!({"x": xr, "global": ival(g), "local": ival(&local)})
        });
    }
    let torsion_ok = if torsion { local.contains(&Rat::zero()) } else { local.hi > Rat::zero() };
    checks.record("torsion_consistency", torsion_ok, || json!({"x": xr, "torsion": torsion, "local": ival(&local)}));

    let nearest = max_rat(&local.lo, &min_rat(&local.hi, &h));
    let diff = &nearest - &h;
    let deviation = if diff >= Rat::zero() {
        if zb.b_upper.is_zero() { Rat::zero() } else { &diff / &zb.b_upper }
    } else {
        abs(&diff) / &zb.b_lower
    };

    let y1 = m.eval_t(x);
    let mut orbit_y1 = orbit_of(m, &y1);
    let sum = companion.map(|y| f.add(x, y));
    let mut orbit_c = companion.and_then(|y| orbit_of(m, y));
    let mut orbit_s = sum.as_ref().and_then(|s| orbit_of(m, s));

    let mut places = Vec::new();
    for (v, g) in &dec.places {
        let vr = render_place(f, v);
        let j = j_phi_v(m, v);
        let c = c_v(m, v);
        let lt_inv = log_plus_t_inv(m, v);
        let log_t = log_abs(f, m.t(), v)?;
        let gv = &g.value;

        let g1 = green_at(orbit_y1.as_mut(), m, v, n_max);
        checks.record("green_functional_equation", consistent(&g1.value, &gv.scale(&qr)), || {
            json!({"x": xr, "place": vr, "G_x": ival(gv), "G_phi_T_x": ival(&g1.value)})
        });

        if let (Some(oc), Some(_)) = (orbit_c.as_mut(), sum.as_ref()) {
            let gc = green_from_orbit(oc, v, &local_constants(m, v), n_max).value;
            let gs = green_at(orbit_s.as_mut(), m, v, n_max).value;
            let (ok, strict) = if gv.exact && gc.exact && gs.exact {
                let mx = max_rat(&gv.lo, &gc.lo);
                (gs.lo <= mx, gv.lo == gc.lo || gs.lo == mx)
            } else {
                (gs.lo <= max_rat(&gv.hi, &gc.hi), true)
            };
            checks.record("green_ultrametric", ok && strict, || {
                json!({"x": xr, "place": vr, "G_x": ival(gv), "G_y": ival(&gc), "G_sum": ival(&gs)})
            });
        }

        let mut lambda = Value::Null;
        if !x.is_zero() {
            let lx = log_abs(f, x, v)?;
            let lam = gv.shift(&(-lx.clone() + &c));
            lambda = ival(&lam);

            if g.escaped_at == Some(0) {
                let bound = rat(q - 1, 1) / &qr1 * &j;
                checks.record("green_lower_bound", gv.lo >= bound, || {
                    json!({"x": xr, "place": vr, "G": ival(gv), "bound": rat_json(&bound)})
                });
            }

            let d = lam.shift(&-pos(&-lx.clone()));
            let lower = -(&qr / (&qr1 * &qr1)) * pos(&log_t) - &qr / &qr1 * &j - pos(&-c.clone());
            let upper = &j + pos(&log_t) / &qr1 + pos(&c);
            checks.record("local_height_difference", d.meets(&lower, &upper), || {
                json!({"x": xr, "place": vr, "difference": ival(&d), "range": [rat_json(&lower), rat_json(&upper)]})
            });

            if !y1.is_zero() && is_t_generic(m, v, x)? {
                let ly1 = log_abs(f, &y1, v)?;
                let small = &c + &lt_inv / (&qr1 * &qr1);
                if ly1 <= log_b_t(m, v) {
                    checks.record("t_generic_bound", lx <= small, || {
                        json!({"x": xr, "place": vr, "log_x": rat_json(&lx), "bound": rat_json(&small)})
                    });
                }
                if ly1 <= small {
                    let rhs = (int(1) - rat(1, q)) * &j - &lt_inv / (int(q) * &qr1 * &qr1);
                    let lhs = -lx.clone() + &c;
                    checks.record("small_phi_t_bound", lhs >= rhs, || {
                        json!({"x": xr, "place": vr, "lhs": rat_json(&lhs), "rhs": rat_json(&rhs)})
                    });
                }
            }

            if v.is_finite() && reduction_type(m, v)? == ReductionType::PotentiallyGood {
                let (disc, _) = local_min_disc(m, v)?;
                let dd = d_constant(m.q(), m.rank() as u32) as i64;
                if disc > Rat::zero() && dd > 1 {
                    let s = lam.add(gv);
                    let bound = &disc / int(dd - 1);
                    checks.record("potentially_good_bound", s.hi >= bound, || {
                        json!({"x": xr, "place": vr, "lambda_plus_G": ival(&s), "bound": rat_json(&bound)})
                    });
                }
            }

            if !y1.is_zero() {
                // lambda(phi_T x) = q^r lambda(x) - log|phi_T(x) / (a_r x^(q^r))|
                let ly1 = log_abs(f, &y1, v)?;
                let corr = &ly1 - log_abs(f, m.leading(), v)? - &qr * &lx;
                let lhs = g1.value.shift(&(-ly1 + &c));
                let rhs = lam.scale(&qr).shift(&-corr);
                checks.record("lambda_functional_equation", consistent(&lhs, &rhs), || {
                    json!({"x": xr, "place": vr, "lambda_phi_T_x": ival(&lhs), "predicted": ival(&rhs)})
                });
            }
        }
        places.push(json!({
            "place": place_json(f.base(), v),
            "place_render": vr,
            "G": ival(gv),
            "lambda": lambda,
            "escaped_at": g.escaped_at,
            "closed_form": g.closed_form,
        }));
    }

    let json = json!({
        "x": elem_json(f, x),
        "x_render": xr,
        "h": rat_json(&h),
        "torsion": torsion,
        "h_hat_local": ival(&local),
        "h_hat_global": global.as_ref().map(ival),
        "global_note": global_note,
        "decomposition": places,
        "deviation": rat_json(&deviation),
    });
    Ok(PointAnalysis { json, deviation })
}

/// Minimal model and discriminant data of `m`, checking the discriminant
/// sandwich and its corollary at every bad place, that the minimal model is a
/// fixed point, `deg D <= deg Delta` on integral models, covariance of the
/// divisors under conjugation by `T + 1`, and that some integral model has
/// `h(phi) <= 2 max{h(j), deg D}`.
pub(crate) fn analyse_module(m: &DrinfeldModule<Fq>, checks: &mut Checks) -> Result<Value> {
    let f = m.field();
    let fq = f.base();
    let mr = m.render();
    let mut places = Vec::new();
    for v in bad_places(m)? {
        let vr = render_place(f, &v);
        let j = j_phi_v(m, &v);
        let (disc, k) = local_min_disc(m, &v)?;
        let deg = int(v.degree() as i64);
        checks.record("discriminant_sandwich", j <= disc && disc < &j + &deg, || {
            json!({"module": mr, "place": vr, "j": rat_json(&j), "D": rat_json(&disc)})
        });
        checks.record("discriminant_corollary", corollary_holds(m, &v)?, || {
            json!({"module": mr, "place": vr, "j": rat_json(&j), "D": rat_json(&disc)})
        });
        places.push(json!({
            "place": place_json(fq, &v),
            "place_render": vr,
            "j": rat_json(&j),
            "D": rat_json(&disc),
            "k_star": k,
            "reduction": reduction_type(m, &v)?,
        }));
    }

    let (minimal, cert) = minimal_global_model(m)?;
    checks.record("minimal_model_fixed_point", cert.validate()?, || json!({"module": mr}));
    let gd = global_divisors(&minimal)?;
    checks.record("min_disc_below_disc", gd.min_disc.degree() <= gd.disc.degree(), || {
        json!({"module": minimal.render()})
    });
    if let Ok(own) = global_divisors(m) {
        checks.record("min_disc_below_disc", own.min_disc.degree() <= own.disc.degree(), || json!({"module": mr}));
    }

    let beta_poly = f.ring().from_coeffs(vec![fq.one(), fq.one()]);
    let beta = f.from_poly(beta_poly.clone());
    let conj = minimal.conjugate(&beta)?;
    let gc = global_divisors(&conj)?;
    let mut all: Vec<Place<FqElem>> = gd.disc.entries.iter().chain(&gc.disc.entries).map(|(v, _)| v.clone()).collect();
    all.push(Place::Finite(beta_poly));
    all.dedup();
    let covariant = all.iter().all(|v| {
        let shift = int(valuation(f, &beta, v).unwrap_or(0) * v.degree() as i64);
        gc.disc.coeff(v) == gd.disc.coeff(v) + shift && gc.min_disc.coeff(v) == gd.min_disc.coeff(v)
    });
    checks.record("conjugation_covariance", covariant, || json!({"module": minimal.render()}));

    let ln = check_lowernorthcott(m, 1)?;
    checks.record("lower_northcott", !ln.inconclusive, || json!({"module": mr, "report": ln}));

    Ok(json!({
        "module": base_module_json(m),
        "module_render": mr,
        "bad_places": places,
        "min_disc": divisor_json(fq, &gd.min_disc),
        "minimal_model": base_module_json(&minimal),
        "lower_northcott": ln,
    }))
}

pub fn height_report(inst: &HeightInstance) -> LabResult<Value> {
    let m = &inst.module;
    let mut checks = Checks::default();
    let module = analyse_module(m, &mut checks)?;
    let zb = zimmer_bounds(m)?;
    let mut points = Vec::new();
    let n = inst.points.len();
    for (i, x) in inst.points.iter().enumerate() {
        let companion = (n > 1).then(|| &inst.points[(i + 1) % n]);
        points.push(analyse_point(m, x, companion, &inst.tol, inst.n_max, &mut checks)?.json);
    }
    let blob = inst.to_json();
    checks.attach_instance(0, &blob);
    let report = json!({
        "command": "height",
        "module": module,
        "h_phi": rat_json(&zb.h_phi),
        "zimmer": zb,
        "tol": rat_json(&inst.tol),
        "n_max": inst.n_max,
        "points": points,
        "checks": checks.summary(),
        "counterexamples": checks.failures,
    });
    if checks.failures.is_empty() {
        Ok(report)
    } else {
        Err(LabError::Violation { summary: format!("{} failed checks", checks.failures.len()), report })
    }
}
