#![allow(dead_code)]

use drinfeld_heights::algebra::sample::{random_nonzero_ratfunc, random_ratfunc};
use drinfeld_heights::algebra::{base_field, BaseElem, BaseField, Fq, FqConfig};
use drinfeld_heights::drinfeld::DrinfeldModule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fq(q: u64) -> Fq {
    match q {
        4 => Fq::new(FqConfig { p: 2, e: 2, modulus: vec![1, 1, 1] }).unwrap(),
        8 => Fq::new(FqConfig { p: 2, e: 3, modulus: vec![1, 1, 0, 1] }).unwrap(),
        9 => Fq::new(FqConfig { p: 3, e: 2, modulus: vec![1, 0, 1] }).unwrap(),
        p => Fq::prime(p as u32).unwrap(),
    }
}

pub fn field(q: u64) -> BaseField {
    base_field(fq(q))
}

pub fn random_module(f: &BaseField, r: usize, deg: usize, rng: &mut ChaCha8Rng) -> DrinfeldModule<Fq> {
    let mut coeffs: Vec<BaseElem> = (1..r).map(|_| random_ratfunc(f, deg, rng)).collect();
    coeffs.push(random_nonzero_ratfunc(f, deg, rng));
    DrinfeldModule::new(f.clone(), coeffs).unwrap()
}
