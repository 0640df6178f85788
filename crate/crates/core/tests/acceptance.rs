//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{field, fq, random_module, rng};
use drinfeld_heights::algebra::sample::{random_nonzero_ratfunc, random_ratfunc};
use drinfeld_heights::algebra::{base_field, Field, Fq};
use drinfeld_heights::drinfeld::{j_phi_v, DrinfeldModule};
use drinfeld_heights::global_field::{log_abs, support, Place};
use drinfeld_heights::heights::{canonical_height, canonical_height_local, is_torsion, torsion_submodule};
use drinfeld_heights::lab::{default_family, family_experiment, scan_jplaces, scan_zimmer, JplacesConfig, ZimmerConfig};
use drinfeld_heights::minimality::{bad_places, global_divisors, local_min_disc, minimal_global_model};
use drinfeld_heights::rational::{abs, int, rat, Rat};
use num_traits::Zero;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e <= limit, || format!("took {e:.1?}, limit {limit:?}"))?;
    Ok(e)
}

fn product_formula() -> Outcome {
    let t0 = Instant::now();
    let mut g = rng(1);
    for i in 0..1000 {
        let f = field([2, 3, 4][i % 3]);
        let x = random_nonzero_ratfunc(&f, 6, &mut g);
        let total: Rat = support(&f, &x).unwrap().iter().map(|v| log_abs(&f, &x, v).unwrap()).sum();
        ensure(total.is_zero(), || format!("sum {} for {}", total, f.render(&x)))?;
    }
    let e = within(t0, Duration::from_secs(5))?;
    Ok(format!("1000 elements over q in {{2,3,4}}, every sum exactly 0, {e:.1?}"))
}

fn carlitz_t_squared() -> Outcome {
    let m = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
    let f = m.field();
    let t2 = f.pow(&f.var(), 2);
    let local = canonical_height_local(&m, &t2, 8).map_err(|e| e.to_string())?;
    ensure(local.exact && local.lo == int(2), || format!("local {}", local.render()))?;
    let mut widths = Vec::new();
    for k in [2, 6, 10] {
        let tol = rat(1, 1 << k);
        let a = canonical_height(&m, &t2, &tol).map_err(|e| e.to_string())?;
        ensure(a.contains(&int(2)) && a.width() <= tol, || format!("tol 2^-{k}: {}", a.render()))?;
        widths.push(a.width());
    }
    ensure(widths.windows(2).all(|w| w[1] < w[0]), || "global interval does not shrink".into())?;
    let image = canonical_height_local(&m, &m.eval_t(&t2), 8).map_err(|e| e.to_string())?;
    ensure(image.exact && image.lo == int(4), || format!("h_hat(phi_T(T^2)) = {}", image.render()))?;
    Ok(format!("local 2 exact, global widths {}, image 4", widths.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" > ")))
}

fn zimmer_scans() -> Outcome {
    let t0 = Instant::now();
    let mut parts = Vec::new();
    for (seed, q, r) in [(1, 2, 1), (2, 2, 2), (3, 3, 1), (4, 3, 2)] {
        let cfg = ZimmerConfig { seed, count: 500, q, r, bound: 3, tol: rat(1, 4), n_max: 8 };
        let res = scan_zimmer(&cfg).map_err(|e| e.to_string())?;
        ensure(res.violations == 0, || format!("q={q} r={r}: {} violations", res.violations))?;
        parts.push(format!("(q={q},r={r}) dev {}", res.max_deviation));
    }
    let e = within(t0, Duration::from_secs(120))?;
    Ok(format!("4 x 500 samples, 0 violations, {}, {e:.1?}", parts.join(", ")))
}

fn discriminant_sandwich() -> Outcome {
    let mut g = rng(4);
    let mut checked = 0;
    for i in 0..300 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 3, 2, &mut g);
        for v in bad_places(&m).map_err(|e| e.to_string())? {
            let j = j_phi_v(&m, &v);
            let (d, _) = local_min_disc(&m, &v).map_err(|e| e.to_string())?;
            ensure(j <= d && d < &j + int(v.degree() as i64), || format!("{} j={j} D={d}", m.render()))?;
            checked += 1;
        }
    }
    let f = field(2);
    let t = f.var();
    let tight = DrinfeldModule::new(f.clone(), vec![f.one(), t.clone()]).unwrap();
    let v = Place::Finite(t.num().clone());
    let (d, _) = local_min_disc(&tight, &v).map_err(|e| e.to_string())?;
    ensure(d == rat(1, 3) && j_phi_v(&tight, &v) == rat(1, 3), || format!("tight case D={d}"))?;
    Ok(format!("300 modules, {checked} bad places, tight case D = j = 1/3"))
}

fn torsion() -> Outcome {
    let m2 = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
    let f = m2.field();
    let tors = torsion_submodule(&m2, 1 << 20).map_err(|e| e.to_string())?;
    let t = f.var();
    for want in [f.zero(), f.one(), t.clone(), f.add(&t, &f.one())] {
        ensure(tors.contains(&want), || format!("{} missing", f.render(&want)))?;
    }
    for x in &tors {
        ensure(tors.contains(&m2.eval_t(x)), || "not closed under phi_T".into())?;
        for y in &tors {
            ensure(tors.contains(&f.add(x, y)), || "not closed under addition".into())?;
        }
    }
    let m3 = DrinfeldModule::carlitz(fq(3));
    let tors3 = torsion_submodule(&m3, 1 << 20).map_err(|e| e.to_string())?;
    ensure(tors3 == vec![m3.field().zero()], || format!("q=3 torsion has {} elements", tors3.len()))?;
    Ok(format!("q=2: {} points, closed; q=3: {{0}}", tors.len()))
}

fn dual_algorithms() -> Outcome {
    let mut g = rng(6);
    let mut exact = 0;
    for i in 0..200 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 2, 2, &mut g);
        let x = random_ratfunc(&f, 2, &mut g);
        let tol = rat(1, 64);
        let a = canonical_height(&m, &x, &tol).map_err(|e| e.to_string())?;
        let l = canonical_height_local(&m, &x, 8).map_err(|e| e.to_string())?;
        ensure(a.width() <= tol && a.intersects(&l), || {
            format!("{} x={}: global {} local {}", m.render(), f.render(&x), a.render(), l.render())
        })?;
        if is_torsion(&m, &x).map_err(|e| e.to_string())? {
            ensure(l.contains(&int(0)), || "torsion point with positive height".into())?;
        }
        exact += l.exact as usize;
    }
    Ok(format!("200 pairs agree within 1/64 ({exact} local values exact)"))
}

fn jplaces() -> Outcome {
    let t0 = Instant::now();
    let mut eps = Vec::new();
    for seed in [1, 2] {
        let cfg = JplacesConfig {
            seed,
            q: 2,
            ranks: vec![1, 2],
            s: 8,
            coeff_bound: 2,
            point_bound: 3,
            n_max: 4,
            max_ann_degree: 8,
            max_modules: 1 << 16,
        };
        let res = scan_jplaces(&cfg).map_err(|e| e.to_string())?;
        ensure(res.violations == 0, || format!("seed {seed}: {} violations", res.violations))?;
        eps.push(res.epsilon_hat.ok_or("no module qualified")?);
    }
    ensure(eps[0] == eps[1] && eps[0] > Rat::zero(), || format!("epsilon_hat {} vs {}", eps[0], eps[1]))?;
    let e = within(t0, Duration::from_secs(600))?;
    Ok(format!("epsilon_hat = {} for both seeds, {e:.1?}", eps[0]))
}

fn family_slope() -> Outcome {
    let res = family_experiment(&default_family()).map_err(|e| e.to_string())?;
    let slope = res.slope.ok_or("slope undefined")?;
    // the generic point 1 of T x + u x^2 has height 1
    ensure(res.generic.contains(&int(1)), || format!("generic {}", res.generic.render()))?;
    let err = abs(&(&slope - int(1)));
    ensure(err <= rat(1, 10) && res.violations == 0, || format!("slope {slope}"))?;
    Ok(format!("slope {slope} (~{:.4}), generic {}", slope_f64(&slope), res.generic.render()))
}

fn slope_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn carlitz_conjugates() -> Outcome {
    let fq2 = Fq::prime(2).unwrap();
    let f = base_field(fq2.clone());
    let car = DrinfeldModule::carlitz(fq2);
    let mut g = rng(9);
    for _ in 0..50 {
        let alpha = random_nonzero_ratfunc(&f, 3, &mut g);
        let psi = car.conjugate(&alpha).map_err(|e| e.to_string())?;
        let (minimal, cert) = minimal_global_model(&psi).map_err(|e| e.to_string())?;
        let gd = global_divisors(&minimal).map_err(|e| e.to_string())?;
        ensure(gd.min_disc.is_zero(), || format!("{}: D = {:?}", psi.render(), gd.min_disc))?;
        ensure(car.l_isomorphism(&psi).map_err(|e| e.to_string())?.is_some(), || "not isomorphic".into())?;
        for v in bad_places(&minimal).map_err(|e| e.to_string())? {
            let (_, k) = local_min_disc(&minimal, &v).map_err(|e| e.to_string())?;
            ensure(k == 0, || format!("k* = {k} on the minimal model"))?;
        }
        ensure(cert.validate().map_err(|e| e.to_string())?, || "certificate rejected".into())?;
    }
    Ok("50 conjugates: D = 0, isomorphic to Carlitz, k* = 0".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("product formula", product_formula),
        ("Carlitz h_hat(T^2)", carlitz_t_squared),
        ("height difference scans", zimmer_scans),
        ("discriminant sandwich", discriminant_sandwich),
        ("torsion of Carlitz", torsion),
        ("global vs local heights", dual_algorithms),
        ("ratio over persistently bad places", jplaces),
        ("family slope", family_slope),
        ("Carlitz conjugates are minimal-trivial", carlitz_conjugates),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
