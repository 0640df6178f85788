use crate::algebra::{BaseElem, BaseField, Field, Fq, FqElem, Poly, RatField, RatFunc};
use crate::error::{AlgebraError, Result};
use crate::global_field::Instance;

use super::skew::{skew_add, skew_from, skew_mul, skew_scalar, SkewPoly};

/// A rank `r` Drinfeld `F_q[T]`-module over `K(var)`, given by
/// `phi_T = t x + a_1 x^q + ... + a_r x^(q^r)` where `t` is the image of `T`.
#[derive(Clone, Debug)]
pub struct DrinfeldModule<K: Field> {
    field: RatField<K>,
    instance: Instance,
    t: RatFunc<K::Elem>,
    coeffs: Vec<RatFunc<K::Elem>>,
}

impl<K: Field> PartialEq for DrinfeldModule<K> {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t && self.coeffs == other.coeffs
    }
}

impl DrinfeldModule<Fq> {
    /// Module over `F_q(T)` with `T` mapping to the indeterminate.
    pub fn new(field: BaseField, coeffs: Vec<BaseElem>) -> Result<Self> {
        let t = field.var();
        Self::with_image(field, Instance::BaseRational, t, coeffs)
    }

    /// `phi_T = T x + x^q`.
    pub fn carlitz(fq: Fq) -> Self {
        let f = crate::algebra::base_field(fq);
        let one = f.one();
        Self::new(f, vec![one]).unwrap()
    }
}

impl DrinfeldModule<RatField<Fq>> {
    /// Module over the tower `F(u)`, `T` mapping to the constant `T` of `F`.
    pub fn new_tower(field: crate::algebra::TowerField, coeffs: Vec<crate::algebra::TowerElem>) -> Result<Self> {
        let t = field.from_base(field.base().var());
        Self::with_image(field, Instance::Tower, t, coeffs)
    }
}

impl<K: Field> DrinfeldModule<K> {
    pub fn with_image(
        field: RatField<K>,
        instance: Instance,
        t: RatFunc<K::Elem>,
        coeffs: Vec<RatFunc<K::Elem>>,
    ) -> Result<Self> {
        match coeffs.last() {
            None => return Err(AlgebraError::Domain("rank must be positive".into())),
            Some(a) if a.is_zero() => {
                return Err(AlgebraError::Domain("leading coefficient a_r must be nonzero".into()))
            }
            _ => {}
        }
        Ok(DrinfeldModule { field, instance, t, coeffs })
    }

    pub fn field(&self) -> &RatField<K> {
        &self.field
    }

    pub fn instance(&self) -> Instance {
        self.instance
    }

    pub fn q(&self) -> u64 {
        self.field.constants().q()
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_1, ..., a_r`.
    pub fn coeffs(&self) -> &[RatFunc<K::Elem>] {
        &self.coeffs
    }

    /// Image of `T`.
    pub fn t(&self) -> &RatFunc<K::Elem> {
        &self.t
    }

    /// `a_j` with `a_0 = T`.
    pub fn a(&self, j: usize) -> &RatFunc<K::Elem> {
        if j == 0 {
            &self.t
        } else {
            &self.coeffs[j - 1]
        }
    }

    pub fn leading(&self) -> &RatFunc<K::Elem> {
        self.coeffs.last().unwrap()
    }

    /// `q^j - 1` for `j = 1..=r`.
    pub fn weights(&self) -> Vec<u64> {
        let q = self.q();
        (1..=self.rank() as u32).map(|j| q.pow(j) - 1).collect()
    }

    pub fn phi_t(&self) -> SkewPoly<RatFunc<K::Elem>> {
        let mut c = vec![self.t.clone()];
        c.extend(self.coeffs.iter().cloned());
        skew_from(&self.field, c)
    }

    /// `phi_a` by Horner's rule in `phi_T`.
    pub fn phi_a(&self, a: &Poly<FqElem>) -> SkewPoly<RatFunc<K::Elem>> {
        let f = &self.field;
        let pt = self.phi_t();
        let mut acc = skew_from(f, Vec::new());
        for c in a.coeffs().iter().rev() {
            acc = skew_mul(f, &pt, &acc);
            acc = skew_add(f, &acc, &skew_scalar(f, f.embed(*c)));
        }
        acc
    }

    /// `phi_T(x)`.
    pub fn eval_t(&self, x: &RatFunc<K::Elem>) -> RatFunc<K::Elem> {
        let f = &self.field;
        let mut acc = f.mul(&self.t, x);
        let mut xp = x.clone();
        for a in &self.coeffs {
            xp = f.frobenius(&xp);
            if !a.is_zero() {
                acc = f.add(&acc, &f.mul(a, &xp));
            }
        }
        acc
    }

    /// The module `psi` with `phi_T(alpha x) = alpha psi_T(x)`, i.e.
    /// `b_j = alpha^(q^j - 1) a_j`.
    pub fn conjugate(&self, alpha: &RatFunc<K::Elem>) -> Result<Self> {
        let f = &self.field;
        if alpha.is_zero() {
            return Err(AlgebraError::Domain("conjugation by zero".into()));
        }
        let mut pw = alpha.clone();
        let mut coeffs = Vec::with_capacity(self.rank());
        // alpha^(q^j - 1) = prod_{i<j} alpha^(q^i (q-1))
        let base = f.pow(alpha, self.q() - 1);
        let mut step = base.clone();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j == 0 {
                pw = base.clone();
            } else {
                step = f.frobenius(&step);
                pw = f.mul(&pw, &step);
            }
            coeffs.push(f.mul(&pw, a));
        }
        Ok(DrinfeldModule { field: self.field.clone(), instance: self.instance, t: self.t.clone(), coeffs })
    }

    pub fn j_invariant(&self) -> WeightedPoint<K::Elem> {
        WeightedPoint { coords: self.coeffs.clone(), weights: self.weights() }
    }

    pub fn render(&self) -> String {
        super::skew::skew_render(&self.field, &self.phi_t())
    }
}

/// A point of weighted projective space.
#[derive(Clone, Debug)]
pub struct WeightedPoint<E> {
    pub coords: Vec<RatFunc<E>>,
    pub weights: Vec<u64>,
}

/// `(g, c)` with `sum c_i w_i = g = gcd(w)`.
pub fn bezout(ws: &[u64]) -> (u64, Vec<i64>) {
    let mut g = 0i64;
    let mut cs: Vec<i64> = Vec::with_capacity(ws.len());
    for (i, &w) in ws.iter().enumerate() {
        // extended Euclid on (g, w)
        let (mut r0, mut r1) = (g, w as i64);
        let (mut s0, mut s1) = (1i64, 0i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let qt = r0 / r1;
            (r0, r1) = (r1, r0 - qt * r1);
            (s0, s1) = (s1, s0 - qt * s1);
            (t0, t1) = (t1, t0 - qt * t1);
        }
        for c in cs.iter_mut().take(i) {
            *c *= s0;
        }
        cs.push(t0);
        g = r0;
    }
    (g as u64, cs)
}

impl<E: PartialEq> WeightedPoint<E> {
    /// Equality in weighted projective space over the separable closure.
    ///
    /// With `r_i = y_i / x_i` on the common support, `g = gcd(w_i)` and
    /// `sum c_i w_i = g`, the points agree iff `r_i = beta^(w_i / g)` for
    /// `beta = prod r_i^(c_i)`: then any `g`-th root of `beta` scales one
    /// point to the other, and `g` is prime to the characteristic.
    pub fn equals<K: Field<Elem = E>>(&self, field: &RatField<K>, other: &Self) -> bool {
        if self.weights != other.weights || self.coords.len() != other.coords.len() {
            return false;
        }
        let mut ratios = Vec::new();
        let mut ws = Vec::new();
        for ((x, y), &w) in self.coords.iter().zip(&other.coords).zip(&self.weights) {
            match (x.is_zero(), y.is_zero()) {
                (true, true) => continue,
                (false, false) => {
                    ratios.push(field.div(y, x).unwrap());
                    ws.push(w);
                }
                _ => return false,
            }
        }
        if ws.is_empty() {
            return true;
        }
        let (g, cs) = bezout(&ws);
        let mut beta = field.one();
        for (r, &c) in ratios.iter().zip(&cs) {
            beta = field.mul(&beta, &field.powi(r, c).unwrap());
        }
        ratios.iter().zip(&ws).all(|(r, &w)| field.pow(&beta, w / g) == *r)
    }
}

impl<K: Field> DrinfeldModule<K> {
    /// Same `j`-invariant, i.e. isomorphic over the separable closure.
    pub fn same_j(&self, other: &Self) -> bool {
        self.j_invariant().equals(&self.field, &other.j_invariant())
    }
}

impl DrinfeldModule<Fq> {
    /// Some `alpha` in `F_q(T)` with `other = self.conjugate(alpha)`, if any.
    pub fn l_isomorphism(&self, other: &Self) -> Result<Option<BaseElem>> {
        let f = &self.field;
        if self.rank() != other.rank() || self.q() != other.q() {
            return Ok(None);
        }
        if !self.same_j(other) {
            return Ok(None);
        }
        let ws = self.weights();
        let mut ratios = Vec::new();
        let mut live = Vec::new();
        for ((a, b), &w) in self.coeffs.iter().zip(&other.coeffs).zip(&ws) {
            if !a.is_zero() {
                ratios.push(f.div(b, a)?);
                live.push(w);
            }
        }
        let (g, cs) = bezout(&live);
        let mut beta = f.one();
        for (r, &c) in ratios.iter().zip(&cs) {
            beta = f.mul(&beta, &f.powi(r, c)?);
        }
        // alpha^g = beta; any g-th root works since r_i = beta^(w_i/g)
        crate::global_field::nth_root(f, &beta, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::base_field;
    use crate::drinfeld::skew::skew_identity;

    #[test]
    fn bezout_coefficients() {
        for ws in [vec![1u64, 3], vec![2, 8], vec![3, 15, 63], vec![8, 26], vec![6, 10, 15]] {
            let (g, c) = bezout(&ws);
            let s: i64 = ws.iter().zip(&c).map(|(&w, &c)| w as i64 * c).sum();
            assert_eq!(s, g as i64);
            assert!(ws.iter().all(|w| w % g == 0));
        }
    }

    #[test]
    fn phi_a_examples() {
        let m = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
        let f = m.field().clone();
        let a = crate::algebra::PolyRing::new(Fq::prime(2).unwrap(), "T");
        let t = f.var();
        assert_eq!(m.phi_a(&a.one()), skew_identity(&f));
        let tp1 = a.from_coeffs(vec![FqElem(1), FqElem(1)]);
        assert_eq!(m.phi_a(&tp1), skew_from(&f, vec![f.add(&t, &f.one()), f.one()]));
        let t2 = f.mul(&t, &t);
        assert_eq!(
            m.phi_a(&a.monomial(FqElem(1), 2)),
            skew_from(&f, vec![t2.clone(), f.add(&t, &t2), f.one()])
        );
    }

    #[test]
    fn conjugation_examples() {
        let m = DrinfeldModule::carlitz(Fq::prime(2).unwrap());
        let f = m.field().clone();
        let t = f.var();
        assert_eq!(m.conjugate(&f.one()).unwrap(), m);
        let c = m.conjugate(&f.inv(&t).unwrap()).unwrap();
        assert_eq!(c.coeffs()[0], f.inv(&t).unwrap());
        assert!(m.conjugate(&f.zero()).is_err());
        let psi = m.conjugate(&t).unwrap();
        assert_eq!(psi.coeffs()[0], t);
    }

    #[test]
    fn weighted_equality_needs_more_than_cross_products() {
        // weights (2, 8) over F_3: (1, 1) and (1, -1) pass pairwise
        // cross-multiplication but no alpha has alpha^2 = 1 and alpha^8 = -1
        let f = base_field(Fq::prime(3).unwrap());
        let x = WeightedPoint { coords: vec![f.one(), f.one()], weights: vec![2, 8] };
        let y = WeightedPoint { coords: vec![f.one(), f.neg(&f.one())], weights: vec![2, 8] };
        assert!(!x.equals(&f, &y));
        assert!(x.equals(&f, &x));
    }

    #[test]
    fn l_isomorphism_recovers_scaling() {
        let fq = Fq::prime(3).unwrap();
        let f = base_field(fq.clone());
        let t = f.var();
        let m = DrinfeldModule::new(f.clone(), vec![f.add(&t, &f.one()), t.clone()]).unwrap();
        let alpha = f.div(&f.add(&t, &f.one()), &f.mul(&t, &t)).unwrap();
        let n = m.conjugate(&alpha).unwrap();
        let beta = m.l_isomorphism(&n).unwrap().expect("isomorphic");
        assert_eq!(m.conjugate(&beta).unwrap(), n);
        let other = DrinfeldModule::new(f.clone(), vec![f.one(), t.clone()]).unwrap();
        assert_eq!(m.l_isomorphism(&other).unwrap(), None);
    }
}
