//! Additive polynomials `sum c_i x^(q^i)` over a field `L`, with composition
//! as multiplication: `c x^(q^i) o d x^(q^j) = c d^(q^i) x^(q^(i+j))`.

use crate::algebra::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewPoly<E> {
    coeffs: Vec<E>,
}

impl<E> SkewPoly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `i` with `c_i != 0`.
    pub fn skew_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

pub fn skew_from<F: Field>(f: &F, mut coeffs: Vec<F::Elem>) -> SkewPoly<F::Elem> {
    while coeffs.last().is_some_and(|c| f.is_zero(c)) {
        coeffs.pop();
    }
    SkewPoly { coeffs }
}

/// The identity map `x`.
pub fn skew_identity<F: Field>(f: &F) -> SkewPoly<F::Elem> {
    SkewPoly { coeffs: vec![f.one()] }
}

pub fn skew_scalar<F: Field>(f: &F, c: F::Elem) -> SkewPoly<F::Elem> {
    skew_from(f, vec![c])
}

pub fn skew_add<F: Field>(f: &F, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> SkewPoly<F::Elem> {
    let n = a.coeffs.len().max(b.coeffs.len());
    let z = f.zero();
    let c = (0..n)
        .map(|i| f.add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
        .collect();
    skew_from(f, c)
}

/// `a o b`.
pub fn skew_mul<F: Field>(f: &F, a: &SkewPoly<F::Elem>, b: &SkewPoly<F::Elem>) -> SkewPoly<F::Elem> {
    if a.is_zero() || b.is_zero() {
        return SkewPoly { coeffs: Vec::new() };
    }
    let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    // twisted[j] holds b_j^(q^i) for the current i
    let mut twisted = b.coeffs.clone();
    for (i, ai) in a.coeffs.iter().enumerate() {
        if i > 0 {
            twisted = twisted.iter().map(|c| f.frobenius(c)).collect();
        }
        if f.is_zero(ai) {
            continue;
        }
        for (j, bj) in twisted.iter().enumerate() {
            if f.is_zero(bj) {
                continue;
            }
            out[i + j] = f.add(&out[i + j], &f.mul(ai, bj));
        }
    }
    skew_from(f, out)
}

pub fn skew_eval<F: Field>(f: &F, a: &SkewPoly<F::Elem>, x: &F::Elem) -> F::Elem {
    let mut acc = f.zero();
    let mut xp = x.clone();
    for (i, c) in a.coeffs.iter().enumerate() {
        if i > 0 {
            xp = f.frobenius(&xp);
        }
        if !f.is_zero(c) {
            acc = f.add(&acc, &f.mul(c, &xp));
        }
    }
    acc
}

pub fn skew_render<F: Field>(f: &F, a: &SkewPoly<F::Elem>) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let q = f.constants().q();
    let mut terms = Vec::new();
    for (i, c) in a.coeffs.iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        let mono = if i == 0 { "x".to_string() } else { format!("x^{}", q.pow(i as u32)) };
        terms.push(if f.is_one(c) { mono } else { format!("{}*{}", f.render(c), mono) });
    }
    terms.join(" + ")
}
