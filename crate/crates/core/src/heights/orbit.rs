//! Exact forward orbits `x, phi_T(x), phi_T(phi_T(x)), ...`.
//!
//! The primes dividing a denominator in the orbit all divide `den(x)` or some
//! `den(a_i)`, so when that finite set is known the denominator is kept as an
//! exponent vector over it and reduction is repeated division by those small
//! primes rather than a gcd with a huge numerator. Without the primes (the
//! tower) the orbit falls back to plain field arithmetic.

use std::collections::HashMap;

use crate::algebra::{Factorable, Field, Poly, PolyRing, RatFunc};
use crate::drinfeld::DrinfeldModule;
use crate::global_field::{log_abs_opt, Place};
use crate::rational::{int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pt<E> {
    /// `num / prod P_k^(exps_k)`, reduced.
    Factored { num: Poly<E>, exps: Vec<u64> },
    Plain(RatFunc<E>),
}

impl<E> Pt<E> {
    pub fn is_zero(&self) -> bool {
        match self {
            Pt::Factored { num, .. } => num.is_zero(),
            Pt::Plain(x) => x.is_zero(),
        }
    }
}

struct Term<E> {
    num: Poly<E>,
    exps: Vec<u64>,
}

pub struct OrbitEngine<'a, K: Field> {
    m: &'a DrinfeldModule<K>,
    primes: Option<Vec<Poly<K::Elem>>>,
    /// `a_0 = T, a_1, ..., a_r` split over the primes; `None` for zero terms.
    terms: Vec<Option<Term<K::Elem>>>,
}

impl<'a, K: Factorable> OrbitEngine<'a, K> {
    pub fn new(m: &'a DrinfeldModule<K>, x: &RatFunc<K::Elem>) -> Self {
        let primes = Self::collect_primes(m, x);
        let mut engine = OrbitEngine { m, primes, terms: Vec::new() };
        if let Some(ps) = &engine.primes {
            let terms = (0..=m.rank())
                .map(|j| {
                    let a = m.a(j);
                    if a.is_zero() {
                        None
                    } else {
                        Some(Term { num: a.num().clone(), exps: split_den(m.field().ring(), a.den(), ps) })
                    }
                })
                .collect();
            engine.terms = terms;
        }
        engine
    }

    fn collect_primes(m: &DrinfeldModule<K>, x: &RatFunc<K::Elem>) -> Option<Vec<Poly<K::Elem>>> {
        let ring = m.field().ring();
        let mut out: Vec<Poly<K::Elem>> = Vec::new();
        let dens = std::iter::once(x.den()).chain((0..=m.rank()).map(|j| m.a(j).den()));
        for d in dens {
            if d.deg0() == 0 {
                continue;
            }
            let fac = K::factor_poly(ring, d, crate::algebra::factor::DEFAULT_FACTOR_SEED).ok()?;
            for (p, _) in fac {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        Some(out)
    }
}

fn split_den<K: Field>(ring: &PolyRing<K>, den: &Poly<K::Elem>, primes: &[Poly<K::Elem>]) -> Vec<u64> {
    let mut rest = den.clone();
    primes
        .iter()
        .map(|p| {
            let (k, r) = ring.split_power(&rest, p);
            rest = r;
            k
        })
        .collect()
}

impl<K: Field> OrbitEngine<'_, K> {
    pub fn module(&self) -> &DrinfeldModule<K> {
        self.m
    }

    pub fn start(&self, x: &RatFunc<K::Elem>) -> Pt<K::Elem> {
        match &self.primes {
            Some(ps) => Pt::Factored {
                num: x.num().clone(),
                exps: split_den(self.m.field().ring(), x.den(), ps),
            },
            None => Pt::Plain(x.clone()),
        }
    }

    pub fn to_elem(&self, p: &Pt<K::Elem>) -> RatFunc<K::Elem> {
        match p {
            Pt::Plain(x) => x.clone(),
            Pt::Factored { num, exps } => {
                let ring = self.m.field().ring();
                let ps = self.primes.as_ref().unwrap();
                let mut den = ring.one();
                for (p, &e) in ps.iter().zip(exps) {
                    if e > 0 {
                        den = ring.mul(&den, &ring.pow(p, e));
                    }
                }
                self.m.field().frac_coprime(num.clone(), den)
            }
        }
    }

    fn den_degree(&self, exps: &[u64]) -> u64 {
        let ps = self.primes.as_ref().unwrap();
        ps.iter().zip(exps).map(|(p, &e)| p.deg0() as u64 * e).sum()
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self, p: &Pt<K::Elem>) -> u64 {
        match p {
            Pt::Plain(x) => x.naive_degree() as u64,
            Pt::Factored { num, exps } => {
                if num.is_zero() {
                    0
                } else {
                    (num.deg0() as u64).max(self.den_degree(exps))
                }
            }
        }
    }

    pub fn height(&self, p: &Pt<K::Elem>) -> Rat {
        int(self.degree(p) as i64)
    }

    /// `log |p|_v`, `None` at zero.
    pub fn log_abs(&self, p: &Pt<K::Elem>, v: &Place<K::Elem>) -> Option<Rat> {
        match p {
            Pt::Plain(x) => log_abs_opt(self.m.field(), x, v),
            Pt::Factored { num, exps } => {
                if num.is_zero() {
                    return None;
                }
                let ring = self.m.field().ring();
                match v {
                    Place::Infinity => Some(int(num.deg0() as i64 - self.den_degree(exps) as i64)),
                    Place::Finite(pp) => {
                        let ps = self.primes.as_ref().unwrap();
                        if let Some(k) = ps.iter().position(|p| p == pp) {
                            if exps[k] > 0 {
                                return Some(int((exps[k] * pp.deg0() as u64) as i64));
                            }
                        }
                        let (k, _) = ring.split_power(num, pp);
                        Some(int(-((k * pp.deg0() as u64) as i64)))
                    }
                }
            }
        }
    }

    /// `phi_T(p)`.
    pub fn step(&self, p: &Pt<K::Elem>) -> Pt<K::Elem> {
        match p {
            Pt::Plain(x) => Pt::Plain(self.m.eval_t(x)),
            Pt::Factored { num, exps } => self.step_factored(num, exps),
        }
    }

    fn step_factored(&self, n: &Poly<K::Elem>, e: &[u64]) -> Pt<K::Elem> {
        let ring = self.m.field().ring();
        let ps = self.primes.as_ref().unwrap();
        let q = self.m.q();
        if n.is_zero() {
            return Pt::Factored { num: n.clone(), exps: vec![0; ps.len()] };
        }
        // denominator exponents of each term a_i n^(q^i) / den^(q^i)
        let mut shapes: Vec<(usize, Vec<u64>)> = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            if let Some(t) = t {
                let qi = q.pow(i as u32);
                shapes.push((i, t.exps.iter().zip(e).map(|(f, e)| f + e * qi).collect()));
            }
        }
        let mut top = vec![0u64; ps.len()];
        for (_, g) in &shapes {
            for (a, b) in top.iter_mut().zip(g) {
                *a = (*a).max(*b);
            }
        }
        let mut acc = ring.zero();
        let mut npow = n.clone();
        let mut at = 0usize;
        for (i, g) in &shapes {
            while at < *i {
                npow = ring.frobenius(&npow);
                at += 1;
            }
            let t = self.terms[*i].as_ref().unwrap();
            let mut piece = ring.mul(&t.num, &npow);
            for ((p, &hi), &gk) in ps.iter().zip(&top).zip(g) {
                if hi > gk {
                    piece = ring.mul(&piece, &ring.pow(p, hi - gk));
                }
            }
            acc = ring.add(&acc, &piece);
        }
        if acc.is_zero() {
            return Pt::Factored { num: acc, exps: vec![0; ps.len()] };
        }
        for (p, ek) in ps.iter().zip(top.iter_mut()) {
            while *ek > 0 {
                let (qt, r) = ring.divrem(&acc, p).unwrap();
                if !r.is_zero() {
                    break;
                }
                acc = qt;
                *ek -= 1;
            }
        }
        Pt::Factored { num: acc, exps: top }
    }
}

/// A lazily extended orbit with recurrence detection.
pub struct Orbit<'a, K: Field> {
    pub engine: OrbitEngine<'a, K>,
    points: Vec<Pt<K::Elem>>,
    seen: HashMap<Pt<K::Elem>, usize>,
    /// `(m, n)` with `y_m = y_n`, `m < n`.
    recurrence: Option<(usize, usize)>,
    max_degree: u64,
}

impl<'a, K: Factorable> Orbit<'a, K> {
    pub fn new(m: &'a DrinfeldModule<K>, x: &RatFunc<K::Elem>, max_degree: u64) -> Self {
        let engine = OrbitEngine::new(m, x);
        let start = engine.start(x);
        let mut seen = HashMap::new();
        seen.insert(start.clone(), 0);
        Orbit { engine, points: vec![start], seen, recurrence: None, max_degree }
    }
}

impl<K: Field> Orbit<'_, K> {
    /// Extends the orbit through index `n`. Returns the last available index,
    /// which is smaller than `n` if the degree guard stopped it or the orbit
    /// recurred (all later points are then known anyway).
    pub fn extend_to(&mut self, n: usize) -> usize {
        while self.points.len() <= n {
            if self.recurrence.is_some() {
                break;
            }
            let last = self.points.last().unwrap();
            let deg = self.engine.degree(last);
            // the next point has degree about q^r times this one
            if deg.saturating_mul(self.engine.m.q().pow(self.engine.m.rank() as u32)) > self.max_degree {
                break;
            }
            let next = self.engine.step(last);
            let idx = self.points.len();
            if let Some(&m) = self.seen.get(&next) {
                self.recurrence = Some((m, idx));
            } else {
                self.seen.insert(next.clone(), idx);
            }
            self.points.push(next);
        }
        self.points.len() - 1
    }

    pub fn point(&self, n: usize) -> &Pt<K::Elem> {
        &self.points[n]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn recurrence(&self) -> Option<(usize, usize)> {
        self.recurrence
    }

    /// The orbit is finite, so `x` is torsion.
    pub fn is_preperiodic(&self) -> bool {
        self.recurrence.is_some()
    }
}
