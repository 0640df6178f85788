mod common;

use std::collections::HashSet;

use common::{field, rng};
use drinfeld_heights::algebra::sample::{random_nonzero_ratfunc, random_ratfunc};
use drinfeld_heights::algebra::Field;
use drinfeld_heights::global_field::{
    all_polys, enumerate_bounded_height, log_abs, naive_height, support, weighted_height, weighted_height_by_places,
};
use drinfeld_heights::rational::{max_rat, Rat};
use num_traits::Zero;
use rand::Rng;

#[test]
fn product_formula() {
    let mut g = rng(21);
    for i in 0..1000 {
        let f = field([2, 3, 4][i % 3]);
        let x = random_nonzero_ratfunc(&f, 6, &mut g);
        let places = support(&f, &x).unwrap();
        assert_eq!(places.is_empty(), naive_height(&x).is_zero());
        let total: Rat = places.iter().map(|v| log_abs(&f, &x, v).unwrap()).sum();
        assert!(total.is_zero(), "{}", f.render(&x));
    }
}

#[test]
fn naive_height_is_subadditive() {
    let f = field(3);
    let mut g = rng(22);
    for _ in 0..300 {
        let x = random_ratfunc(&f, 4, &mut g);
        let y = random_ratfunc(&f, 4, &mut g);
        let bound = naive_height(&x) + naive_height(&y);
        assert!(naive_height(&f.mul(&x, &y)) <= bound);
        assert!(naive_height(&f.add(&x, &y)) <= bound);
    }
}

#[test]
fn weighted_height_ignores_weighted_scaling() {
    let mut g = rng(23);
    for i in 0..200 {
        let f = field([2, 3][i % 2]);
        let q = f.base().q();
        let n = g.gen_range(1..=3);
        let weights: Vec<u64> = (1..=n).map(|j| q.pow(j) - 1).collect();
        let mut coords: Vec<_> = (0..n).map(|_| random_ratfunc(&f, 3, &mut g)).collect();
        coords[n as usize - 1] = random_nonzero_ratfunc(&f, 3, &mut g);
        let alpha = random_nonzero_ratfunc(&f, 2, &mut g);
        let scaled: Vec<_> = coords.iter().zip(&weights).map(|(x, &w)| f.mul(&f.pow(&alpha, w), x)).collect();
        let h = weighted_height(&f, &coords, &weights).unwrap();
        assert_eq!(weighted_height(&f, &scaled, &weights).unwrap(), h);
        assert_eq!(weighted_height_by_places(&f, &coords, &weights).unwrap(), h);
    }
}

#[test]
fn bounded_height_enumerators_agree() {
    for (q, bound) in [(2, 3), (3, 2), (4, 1)] {
        let f = field(q);
        let listed = enumerate_bounded_height(&f, bound);
        let set: HashSet<_> = listed.iter().cloned().collect();
        assert_eq!(set.len(), listed.len());
        // every pair (num, monic den) without the coprimality filter
        let mut brute = HashSet::new();
        for n in all_polys(&f, bound, false) {
            for d in all_polys(&f, bound, true) {
                brute.insert(f.frac(n.clone(), d).unwrap());
            }
        }
        assert_eq!(set, brute);
        let hb = Rat::from_integer((bound as i64).into());
        assert!(listed.iter().all(|x| naive_height(x) <= hb));
    }
}

#[test]
fn absolute_values_are_ultrametric() {
    let f = field(2);
    let mut g = rng(24);
    for _ in 0..200 {
        let x = random_nonzero_ratfunc(&f, 4, &mut g);
        let y = random_nonzero_ratfunc(&f, 4, &mut g);
        let s = f.add(&x, &y);
        if s.is_zero() {
            continue;
        }
        for v in support(&f, &f.mul(&f.mul(&x, &y), &s)).unwrap() {
            let m = max_rat(&log_abs(&f, &x, &v).unwrap(), &log_abs(&f, &y, &v).unwrap());
            assert!(log_abs(&f, &s, &v).unwrap() <= m);
        }
    }
}
