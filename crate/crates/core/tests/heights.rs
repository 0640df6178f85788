mod common;

use common::{field, random_module, rng};
use drinfeld_heights::algebra::sample::{random_nonzero_ratfunc, random_poly_exact, random_ratfunc};
use drinfeld_heights::algebra::{Field, Fq};
use drinfeld_heights::drinfeld::{skew_eval, DrinfeldModule};
use drinfeld_heights::global_field::{joint_support, log_abs, naive_height};
use drinfeld_heights::heights::{
    canonical_height, canonical_height_local, green_local, is_torsion, lambda_local, relevant_places, torsion_submodule, zimmer_bounds,
    HeightInterval,
};
use drinfeld_heights::rational::{int, max_rat, rat, Rat};

const N: usize = 8;

fn consistent(a: &HeightInterval, b: &HeightInterval) -> bool {
    if a.exact && b.exact {
        a.lo == b.lo
    } else {
        a.intersects(b)
    }
}

#[test]
fn green_functional_equation() {
    let mut g = rng(41);
    for i in 0..200 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 2, 2, &mut g);
        let x = random_nonzero_ratfunc(&f, 2, &mut g);
        let y = m.eval_t(&x);
        let qr = int(m.q().pow(m.rank() as u32) as i64);
        for v in relevant_places(&m, &x).unwrap() {
            let gx = green_local(&m, &v, &x, N).value.scale(&qr);
            let gy = green_local(&m, &v, &y, N).value;
            assert!(consistent(&gx, &gy), "{} x={} at {:?}", m.render(), f.render(&x), v);
        }
    }
}

#[test]
fn green_is_ultrametric() {
    let mut g = rng(42);
    for i in 0..200 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 2, 2, &mut g);
        let x = random_nonzero_ratfunc(&f, 2, &mut g);
        let y = random_nonzero_ratfunc(&f, 2, &mut g);
        let s = f.add(&x, &y);
        if s.is_zero() {
            continue;
        }
        let mut elems: Vec<_> = m.coeffs().iter().collect();
        elems.extend([&x, &y, &s]);
        for v in joint_support(&f, &elems).unwrap() {
            let gs = green_local(&m, &v, &s, N).value;
            let bound = max_rat(&green_local(&m, &v, &x, N).value.hi, &green_local(&m, &v, &y, N).value.hi);
            assert!(gs.lo <= bound);
        }
    }
}

#[test]
fn lambda_functional_equation() {
    // lambda(phi_a x) = |a|^r lambda(x) - log|phi_a(x) / (Delta_a x^(|a|^r))|
    let mut g = rng(43);
    let f = field(2);
    let ring = f.ring();
    let t = ring.x();
    let one = ring.one();
    let polys = [t.clone(), ring.add(&t, &one), ring.mul(&t, &t)];
    for i in 0..60 {
        let m = random_module(&f, 1 + i % 2, 1, &mut g);
        let x = random_nonzero_ratfunc(&f, 2, &mut g);
        for a in &polys {
            let phi_a = m.phi_a(a);
            let y = skew_eval(&f, &phi_a, &x);
            if y.is_zero() {
                continue;
            }
            let big = m.q().pow((m.rank() * a.deg0()) as u32);
            let delta = phi_a.coeffs().last().unwrap().clone();
            let ratio = f.div(&y, &f.mul(&delta, &f.pow(&x, big))).unwrap();
            let mut elems: Vec<_> = m.coeffs().iter().collect();
            elems.extend([&x, &y]);
            for v in joint_support(&f, &elems).unwrap() {
                let lhs = lambda_local(&m, &v, &y, N).unwrap();
                let rhs = lambda_local(&m, &v, &x, N)
                    .unwrap()
                    .scale(&int(big as i64))
                    .shift(&-log_abs(&f, &ratio, &v).unwrap());
                assert!(consistent(&lhs, &rhs), "{} x={} a={}", m.render(), f.render(&x), ring.render(a));
            }
        }
    }
}

#[test]
fn lambda_is_isomorphism_invariant() {
    // psi = conjugate(phi, alpha) has lambda_psi(x) = lambda_phi(alpha x)
    let mut g = rng(44);
    for i in 0..50 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 2, 2, &mut g);
        let alpha = random_nonzero_ratfunc(&f, 2, &mut g);
        let psi = m.conjugate(&alpha).unwrap();
        let x = random_nonzero_ratfunc(&f, 2, &mut g);
        let ax = f.mul(&alpha, &x);
        let mut elems: Vec<_> = m.coeffs().iter().collect();
        elems.extend([&x, &alpha]);
        for v in joint_support(&f, &elems).unwrap() {
            let l_psi = lambda_local(&psi, &v, &x, N).unwrap();
            let l_phi = lambda_local(&m, &v, &ax, N).unwrap();
            assert!(consistent(&l_psi, &l_phi));
        }
    }
}

#[test]
fn global_and_local_methods_agree() {
    let mut g = rng(45);
    for i in 0..200 {
        let f = field([2, 3][i % 2]);
        let m = random_module(&f, 1 + i % 2, 2, &mut g);
        let x = random_ratfunc(&f, 2, &mut g);
        let tol = rat(1, 16);
        let global = canonical_height(&m, &x, &tol).unwrap();
        assert!(global.width() <= tol);
        let local = canonical_height_local(&m, &x, N).unwrap();
        assert!(global.intersects(&local), "{} x={}", m.render(), f.render(&x));
        let zb = zimmer_bounds(&m).unwrap();
        let h = naive_height(&x);
        assert!(local.meets(&(&h - &zb.b_lower), &(&h + &zb.b_upper)));
        if is_torsion(&m, &x).unwrap() {
            assert!(local.contains(&int(0)));
        }
    }
}

#[test]
fn global_height_scales_along_orbits() {
    let mut g = rng(46);
    for i in 0..50 {
        let f = field(2);
        let m = random_module(&f, 1 + i % 2, 1, &mut g);
        let x = random_nonzero_ratfunc(&f, 1, &mut g);
        let qr = int(m.q().pow(m.rank() as u32) as i64);
        let tol = rat(1, 8);
        let hx = canonical_height(&m, &x, &tol).unwrap().scale(&qr);
        let hy = canonical_height(&m, &m.eval_t(&x), &(&tol * &qr)).unwrap();
        assert!(hx.intersects(&hy));
    }
}

#[test]
fn carlitz_height_difference() {
    // for Carlitz over F_2, -2 <= h_hat - h <= 1
    let m = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
    let f = m.field().clone();
    let mut g = rng(47);
    for _ in 0..100 {
        let x = random_ratfunc(&f, 3, &mut g);
        let h = naive_height(&x);
        let local = canonical_height_local(&m, &x, N).unwrap();
        assert!(local.meets(&(&h - int(2)), &(&h + int(1))));
    }
    let t2 = f.pow(&f.var(), 2);
    assert_eq!(canonical_height_local(&m, &t2, N).unwrap(), HeightInterval::exact(int(2)));
}

#[test]
fn torsion_is_a_submodule() {
    let f = field(2);
    let mut g = rng(48);
    for _ in 0..5 {
        let t = f.var();
        let a1 = f.from_poly(random_poly_exact(f.ring(), 1, &mut g));
        let m = DrinfeldModule::new(f.clone(), vec![a1, f.add(&t, &f.one())]).unwrap();
        let tors = torsion_submodule(&m, 1 << 20).unwrap();
        for x in &tors {
            assert!(tors.contains(&m.eval_t(x)));
            for y in &tors {
                assert!(tors.contains(&f.add(x, y)));
            }
            assert_eq!(canonical_height_local(&m, x, N).unwrap().lo, Rat::from_integer(0.into()));
        }
    }
}
