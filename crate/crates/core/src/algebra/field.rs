use std::fmt::Debug;
use std::hash::Hash;

use super::fq::{Fq, FqElem};
use crate::error::Result;

/// A field given as a context object; elements are plain values and every
/// operation goes through the context.
///
/// `frobenius` is the `q`-power map where `q` is the size of the constant
/// field `F_q` (it fixes constants and is a ring endomorphism).
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;

    /// The constant field `F_q`.
    fn constants(&self) -> &Fq;
    fn embed(&self, c: FqElem) -> Self::Elem;

    /// True for `F_q` itself; polynomial factorization is only offered there.
    fn is_finite(&self) -> bool {
        false
    }

    /// Short human readable rendering of an element.
    fn render(&self, a: &Self::Elem) -> String;

    /// Product of dense coefficient vectors (lowest degree first, no trailing
    /// zeros required). Finite fields override this with a faster kernel.
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.is_zero(y) {
                    continue;
                }
                let t = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &t);
            }
        }
        out
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}
