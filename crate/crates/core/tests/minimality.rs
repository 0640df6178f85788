mod common;

use common::{field, random_module, rng};
use drinfeld_heights::algebra::sample::random_nonzero_ratfunc;
use drinfeld_heights::algebra::Field;
use drinfeld_heights::drinfeld::{c_v, j_phi_v, DrinfeldModule};
use drinfeld_heights::global_field::{valuation, Place};
use drinfeld_heights::minimality::{
    bad_places, corollary_holds, global_divisors, local_min_disc, minimal_global_model,
};
use drinfeld_heights::rational::{int, rat, Rat};

/// Least `c_v` over integral conjugates by powers of the prime, by search.
fn min_disc_by_search(m: &DrinfeldModule<drinfeld_heights::algebra::Fq>, p: &Place<drinfeld_heights::algebra::FqElem>) -> Rat {
    let f = m.field();
    let Place::Finite(pp) = p else { unreachable!() };
    let pi = f.from_poly(pp.clone());
    (-40i64..=40)
        .filter_map(|k| {
            let n = m.conjugate(&f.powi(&pi, k).unwrap()).unwrap();
            let integral = n.coeffs().iter().all(|a| valuation(f, a, p).is_none_or(|e| e >= 0));
            integral.then(|| c_v(&n, p))
        })
        .min()
        .unwrap()
}

#[test]
fn discriminant_sandwich() {
    let mut g = rng(51);
    for i in 0..300 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 3, 2, &mut g);
        for v in bad_places(&m).unwrap() {
            let j = j_phi_v(&m, &v);
            let (d, _) = local_min_disc(&m, &v).unwrap();
            assert_eq!(d, min_disc_by_search(&m, &v));
            assert!(j <= d && d < &j + int(v.degree() as i64), "{} at {:?}", m.render(), v);
            assert!(corollary_holds(&m, &v).unwrap());
        }
    }
}

#[test]
fn tight_case_at_t() {
    // T x + x^2 + T x^4 over F_2: D = j = 1/3 at (T)
    let f = field(2);
    let t = f.var();
    let m = DrinfeldModule::new(f.clone(), vec![f.one(), t.clone()]).unwrap();
    let v = Place::Finite(t.num().clone());
    assert_eq!(j_phi_v(&m, &v), rat(1, 3));
    assert_eq!(local_min_disc(&m, &v).unwrap().0, rat(1, 3));
}

#[test]
fn minimal_model_is_a_fixed_point() {
    let mut g = rng(52);
    for i in 0..100 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 3, 2, &mut g);
        let (minimal, cert) = minimal_global_model(&m).unwrap();
        assert!(cert.validate().unwrap());
        assert!(m.l_isomorphism(&minimal).unwrap().is_some());
        let (again, _) = minimal_global_model(&minimal).unwrap();
        assert_eq!(again, minimal);
        let gd = global_divisors(&minimal).unwrap();
        assert!(gd.min_disc.degree() <= gd.disc.degree());
    }
}

#[test]
fn min_disc_is_conjugation_invariant() {
    let mut g = rng(53);
    for i in 0..100 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 2, 2, &mut g);
        let alpha = random_nonzero_ratfunc(&f, 2, &mut g);
        let (a, _) = minimal_global_model(&m).unwrap();
        let (b, _) = minimal_global_model(&m.conjugate(&alpha).unwrap()).unwrap();
        let (da, db) = (global_divisors(&a).unwrap(), global_divisors(&b).unwrap());
        assert_eq!(da.min_disc, db.min_disc);
        assert_eq!(j_phi_v(&a, &Place::Infinity), j_phi_v(&b, &Place::Infinity));
    }
}
