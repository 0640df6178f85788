//! The finite field `F_q`, `q = p^e`, given by an explicit irreducible
//! modulus over `F_p`. Elements are packed as `sum c_i p^i`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{AlgebraError, Result};

/// Packed element of `F_q`; only meaningful relative to an [`Fq`] context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqConfig {
    pub p: u32,
    pub e: u32,
    /// Monic irreducible modulus over `F_p`, lowest coefficient first.
    pub modulus: Vec<u32>,
}

impl FqConfig {
    pub fn prime(p: u32) -> Self {
        FqConfig { p, e: 1, modulus: vec![0, 1] }
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if p < 2 || !is_prime(p) {
            return Err(AlgebraError::Config(format!("p = {p} is not prime")));
        }
        if p >= 1 << 16 {
            return Err(AlgebraError::Config(format!("p = {p} too large")));
        }
        if self.e == 0 {
            return Err(AlgebraError::Config("e must be positive".into()));
        }
        if self.q() > 1 << 16 {
            return Err(AlgebraError::Config(format!("q = {} too large", self.q())));
        }
        if self.modulus.len() != self.e as usize + 1 {
            return Err(AlgebraError::Config(format!(
                "modulus must have e+1 = {} coefficients",
                self.e + 1
            )));
        }
        if self.modulus.iter().any(|&c| c >= p) {
            return Err(AlgebraError::Config("modulus coefficients must be reduced mod p".into()));
        }
        if *self.modulus.last().unwrap() != 1 {
            return Err(AlgebraError::Config("modulus must be monic".into()));
        }
        if self.e > 1 && !prime_poly_irreducible(&self.modulus, p) {
            return Err(AlgebraError::Config("modulus is reducible over F_p".into()));
        }
        Ok(())
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_fp(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let t = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        trim(&mut r);
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

/// Trial division by every monic polynomial of degree `<= deg/2`.
fn prime_poly_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if rem_fp(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[derive(Debug)]
struct Inner {
    cfg: FqConfig,
    q: u32,
    /// exp[k] = g^k for a primitive element g (k in 0..q-1), extension fields only.
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u16>,
}

/// Context for `F_q`.
#[derive(Clone)]
pub struct Fq {
    inner: Arc<Inner>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.cfg == other.inner.cfg
    }
}

impl Eq for Fq {}

impl Fq {
    pub fn new(cfg: FqConfig) -> Result<Self> {
        cfg.validate()?;
        let p = cfg.p;
        let q = cfg.q() as u32;
        let mut inner = Inner { cfg: cfg.clone(), q, exp: Vec::new(), log: Vec::new(), add_table: Vec::new() };
        if cfg.e > 1 {
            let digits_add = |a: u32, b: u32| -> u32 {
                let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
                for _ in 0..cfg.e {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out
            };
            if q <= 256 {
                let mut table = vec![0u16; (q * q) as usize];
                for a in 0..q {
                    for b in 0..q {
                        table[(a * q + b) as usize] = digits_add(a, b) as u16;
                    }
                }
                inner.add_table = table;
            }
            let (exp, log) = build_log_tables(&cfg);
            inner.exp = exp;
            inner.log = log;
        }
        Ok(Fq { inner: Arc::new(inner) })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Fq::new(FqConfig::prime(p))
    }

    pub fn config(&self) -> &FqConfig {
        &self.inner.cfg
    }

    pub fn p(&self) -> u32 {
        self.inner.cfg.p
    }

    pub fn e(&self) -> u32 {
        self.inner.cfg.e
    }

    pub fn q(&self) -> u64 {
        self.inner.q as u64
    }

    pub fn size(&self) -> u32 {
        self.inner.q
    }

    pub fn elem(&self, v: u32) -> Result<FqElem> {
        if v >= self.inner.q {
            return Err(AlgebraError::Config(format!("{v} is not an element of F_{}", self.inner.q)));
        }
        Ok(FqElem(v))
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        let p = self.p() as i64;
        FqElem(n.rem_euclid(p) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem> {
        let p = self.p();
        if coeffs.len() > self.e() as usize {
            return Err(AlgebraError::Config(format!(
                "element of F_{} needs at most {} coordinates",
                self.q(),
                self.e()
            )));
        }
        let mut v = 0u32;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= p {
                return Err(AlgebraError::Config(format!("coordinate {c} not reduced mod {p}")));
            }
            v += c * p.pow(i as u32);
        }
        Ok(FqElem(v))
    }

    pub fn coeffs(&self, a: FqElem) -> Vec<u32> {
        let p = self.p();
        let mut v = a.0;
        (0..self.e())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// The class of `x` (the image of the modulus variable).
    pub fn generator(&self) -> FqElem {
        if self.e() == 1 {
            FqElem(1)
        } else {
            FqElem(self.p())
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.inner.q).map(FqElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqElem> {
        (1..self.inner.q).map(FqElem)
    }

    /// `a^(1/p)`, the inverse of the absolute Frobenius.
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        self.pow(&a, self.q() / self.p() as u64)
    }

    #[inline]
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if inner.cfg.e == 1 {
            let s = a + b;
            if s >= inner.cfg.p {
                s - inner.cfg.p
            } else {
                s
            }
        } else if !inner.add_table.is_empty() {
            inner.add_table[(a * inner.q + b) as usize] as u32
        } else {
            let p = inner.cfg.p;
            let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
            for _ in 0..inner.cfg.e {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    fn neg_raw(&self, a: u32) -> u32 {
        let inner = &*self.inner;
        let p = inner.cfg.p;
        if inner.cfg.e == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else {
            let (mut a, mut out, mut place) = (a, 0u32, 1u32);
            for _ in 0..inner.cfg.e {
                out += ((p - a % p) % p) * place;
                a /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if inner.cfg.e == 1 {
            ((a as u64 * b as u64) % inner.cfg.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let k = (inner.log[a as usize] + inner.log[b as usize]) % (inner.q - 1);
            inner.exp[k as usize]
        }
    }
}

/// Multiplication in `F_p[x]/(modulus)` on packed values, used only to
/// build the log tables.
fn slow_mul(cfg: &FqConfig, a: u32, b: u32) -> u32 {
    let p = cfg.p;
    let e = cfg.e as usize;
    let unpack = |mut v: u32| -> Vec<u32> {
        (0..e)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    };
    let (x, y) = (unpack(a), unpack(b));
    let mut prod = vec![0u32; 2 * e];
    for i in 0..e {
        for j in 0..e {
            prod[i + j] = ((prod[i + j] as u64 + x[i] as u64 * y[j] as u64) % p as u64) as u32;
        }
    }
    let r = rem_fp(&prod, &cfg.modulus, p);
    r.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn build_log_tables(cfg: &FqConfig) -> (Vec<u32>, Vec<u32>) {
    let q = cfg.q() as u32;
    let order = q - 1;
    for g in 2..q {
        let mut exp = Vec::with_capacity(order as usize);
        let mut x = 1u32;
        let mut ok = true;
        for k in 0..order {
            if k > 0 && x == 1 {
                ok = false;
                break;
            }
            exp.push(x);
            x = slow_mul(cfg, x, g);
        }
        if ok && x == 1 {
            let mut log = vec![0u32; q as usize];
            for (k, &v) in exp.iter().enumerate() {
                log[v as usize] = k as u32;
            }
            return (exp, log);
        }
    }
    // q = 2 cannot reach here since e > 1; any other field has a primitive element.
    unreachable!("multiplicative group of a finite field is cyclic")
}

impl Field for Fq {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem(0)
    }
    fn one(&self) -> FqElem {
        FqElem(1)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }
    fn is_one(&self, a: &FqElem) -> bool {
        a.0 == 1
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.add_raw(a.0, b.0))
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(self.neg_raw(a.0))
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.mul_raw(a.0, b.0))
    }
    fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        let inner = &*self.inner;
        if inner.cfg.e == 1 {
            Ok(FqElem(pow_mod(a.0, inner.cfg.p - 2, inner.cfg.p)))
        } else {
            let k = (inner.q - 1 - inner.log[a.0 as usize]) % (inner.q - 1);
            Ok(FqElem(inner.exp[k as usize]))
        }
    }
    fn frobenius(&self, a: &FqElem) -> FqElem {
        *a
    }
    fn constants(&self) -> &Fq {
        self
    }
    fn embed(&self, c: FqElem) -> FqElem {
        c
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn render(&self, a: &FqElem) -> String {
        if self.e() == 1 {
            a.0.to_string()
        } else {
            let terms: Vec<String> = self
                .coeffs(*a)
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| match (i, c) {
                    (0, c) => c.to_string(),
                    (1, 1) => "g".to_string(),
                    (1, c) => format!("{c}g"),
                    (i, 1) => format!("g^{i}"),
                    (i, c) => format!("{c}g^{i}"),
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                format!("({})", terms.join("+"))
            }
        }
    }

    fn poly_mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let n = a.len() + b.len() - 1;
        if self.e() == 1 {
            let p = self.p() as u64;
            let a: Vec<u64> = a.iter().map(|x| x.0 as u64).collect();
            let b: Vec<u64> = b.iter().map(|x| x.0 as u64).collect();
            prime_poly_mul(&a, &b, p).into_iter().map(|v| FqElem(v as u32)).collect()
        } else {
            let mut out = vec![0u32; n];
            for (i, x) in a.iter().enumerate() {
                if x.0 == 0 {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    if y.0 == 0 {
                        continue;
                    }
                    let t = self.mul_raw(x.0, y.0);
                    out[i + j] = self.add_raw(out[i + j], t);
                }
            }
            out.into_iter().map(FqElem).collect()
        }
    }
}

const KARATSUBA_CUTOFF: usize = 48;

/// Schoolbook product over `F_p`, reduced. Rows come from the operand with
/// fewer nonzero coefficients, so sparse inputs are cheap.
fn schoolbook_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // rows accumulated between reductions without overflowing a u64
    let per_row = (p - 1) * (p - 1);
    let max_rows = (u64::MAX - p).checked_div(per_row).map_or(usize::MAX, |n| n.min(1 << 30) as usize);
    let nnz = |v: &[u64]| v.iter().filter(|&&x| x != 0).count();
    let (rows, cols) = if nnz(a) <= nnz(b) { (a, b) } else { (b, a) };
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    let mut pending = 0usize;
    for (i, &x) in rows.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (slot, &y) in acc[i..i + cols.len()].iter_mut().zip(cols) {
            *slot += x * y;
        }
        pending += 1;
        if pending >= max_rows {
            acc.iter_mut().for_each(|v| *v %= p);
            pending = 0;
        }
    }
    if pending > 0 {
        acc.iter_mut().for_each(|v| *v %= p);
    }
    acc
}

/// Karatsuba on equal-length inputs; the result has length `2n - 1`.
fn karatsuba_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len();
    if n < KARATSUBA_CUTOFF {
        return schoolbook_mod(a, b, p);
    }
    let m = n / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba_mod(a0, b0, p);
    let z2 = karatsuba_mod(a1, b1, p);
    let sum = |lo: &[u64], hi: &[u64]| -> Vec<u64> {
        let mut s = hi.to_vec();
        for (x, &y) in s.iter_mut().zip(lo) {
            *x = (*x + y) % p;
        }
        s
    };
    let mut z1 = karatsuba_mod(&sum(a0, a1), &sum(b0, b1), p);
    for (i, x) in z1.iter_mut().enumerate() {
        let sub = z0.get(i).copied().unwrap_or(0) + z2.get(i).copied().unwrap_or(0);
        *x = (*x + 2 * p - sub) % p;
    }
    let mut out = vec![0u64; 2 * n - 1];
    for (i, &x) in z0.iter().enumerate() {
        out[i] = x;
    }
    for (i, &x) in z2.iter().enumerate() {
        out[i + 2 * m] = x;
    }
    for (i, &x) in z1.iter().enumerate() {
        out[i + m] = (out[i + m] + x) % p;
    }
    out
}

/// Product over `F_p`. Sparse operands go to the schoolbook kernel; dense
/// ones to Karatsuba, with unbalanced inputs cut into square blocks.
fn prime_poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let k = short.len();
    let sparsest = a.iter().filter(|&&x| x != 0).count().min(b.iter().filter(|&&x| x != 0).count());
    // Karatsuba on k x k blocks costs about 3 k^1.58 per block of the long side
    if k < KARATSUBA_CUTOFF || (sparsest as f64) < 3.0 * (k as f64).powf(0.585) {
        return schoolbook_mod(a, b, p);
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    let mut block = vec![0u64; k];
    for (c, chunk) in long.chunks(k).enumerate() {
        block[..chunk.len()].copy_from_slice(chunk);
        block[chunk.len()..].iter_mut().for_each(|x| *x = 0);
        let prod = karatsuba_mod(short, &block, p);
        for (slot, x) in out[c * k..].iter_mut().zip(prod) {
            *slot = (*slot + x) % p;
        }
    }
    out
}

/// Arithmetic selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    /// Inverse of the second operand.
    Inv,
    /// First operand raised to `q^k`.
    FrobeniusPow(u32),
    /// First operand raised to an integer exponent.
    Pow(u64),
}

/// Checked element arithmetic on elements tagged with their field.
pub fn field_arith(a: (&Fq, FqElem), b: (&Fq, FqElem), op: FieldOp) -> Result<FqElem> {
    let (fa, xa) = a;
    let (fb, xb) = b;
    if fa != fb {
        return Err(AlgebraError::Config("operands live in different fields".into()));
    }
    fa.elem(xa.0)?;
    fa.elem(xb.0)?;
    Ok(match op {
        FieldOp::Add => fa.add(&xa, &xb),
        FieldOp::Mul => fa.mul(&xa, &xb),
        FieldOp::Inv => fa.inv(&xb)?,
        FieldOp::FrobeniusPow(k) => {
            let mut x = xa;
            for _ in 0..k {
                x = fa.pow(&x, fa.q());
            }
            x
        }
        FieldOp::Pow(e) => fa.pow(&xa, e),
    })
}
