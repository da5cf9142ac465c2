//! Prime-power finite fields `F_{p^n}` with table-driven arithmetic.
//!
//! Every element is stored as its enumeration index: the coefficient vector
//! `(c_0, …, c_{n-1})` over `F_p` read as a base-`p` number with `c_0` the
//! least significant digit. Index 0 is zero and index 1 is one. Multiplication
//! goes through discrete log/antilog tables built once per context, so a
//! context is immutable after construction and can be shared freely between
//! threads.

use std::fmt;

use thiserror::Error;

use crate::fp_poly;

/// Default bound on the number of elements of a single context.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field size {size} exceeds the size cap {cap}")]
    SizeCapExceeded { size: u128, cap: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("{0} is not the order of a subfield")]
    BadSubfieldOrder(u64),
    #[error("coefficient vector is not a valid element")]
    BadCoefficients,
    #[error("operation {0:?} needs a field element operand")]
    BadOperand(FieldOp),
}

/// Identity of a field context. Contexts are deterministic functions of
/// `(p, n)`, so two contexts with equal ids represent elements identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId {
    pub p: u32,
    pub n: u32,
}

/// An element of some [`FieldCtx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Felt {
    field: FieldId,
    idx: u32,
}

impl Felt {
    pub fn field(&self) -> FieldId {
        self.field
    }

    /// Position in the canonical enumeration of the owning field.
    pub fn index(&self) -> u32 {
        self.idx
    }

    pub fn is_zero(&self) -> bool {
        self.idx == 0
    }

    /// Coefficients over `F_p`, `coeffs[i]` multiplying the `i`-th basis power.
    pub fn coeffs(&self) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.field.n as usize);
        let mut x = self.idx;
        for _ in 0..self.field.n {
            v.push(x % self.field.p);
            x /= self.field.p;
        }
        v
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.n == 1 {
            write!(f, "{}", self.idx)
        } else {
            let c: Vec<String> = self.coeffs().iter().map(|d| d.to_string()).collect();
            write!(f, "[{}]", c.join(","))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow,
}

/// Second argument of [`FieldCtx::fe_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    Elem(Felt),
    Exp(i64),
    None,
}

pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus `c_0 + c_1 w + … + w^n`; empty for prime fields.
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^n`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut n = 0u32;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p, n))
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl FieldCtx {
    /// Builds `F_{p^n}` under the default size cap.
    pub fn new(p: u64, n: u32) -> Result<FieldCtx, FieldError> {
        Self::with_cap(p, n, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(p: u64, n: u32, cap: u64) -> Result<FieldCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::DegreeZero);
        }
        let size = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
        if size > cap as u128 || size > u32::MAX as u128 {
            return Err(FieldError::SizeCapExceeded { size, cap });
        }
        let p = p as u32;
        let q = size as u32;
        let modulus = if n == 1 {
            Vec::new()
        } else {
            fp_poly::first_irreducible(p, n as usize)
        };
        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.build_tables();
        Ok(ctx)
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..self.q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.raw_pow(g, order / r) != 1 || order == 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for k in 0..order as u32 {
            exp.push(x);
            log[x as usize] = k;
            x = self.raw_mul(x, generator);
        }
        debug_assert_eq!(x, 1);
        self.generator = generator;
        self.exp = exp;
        self.log = log;
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    /// Schoolbook product reduced by the modulus; used only while building tables.
    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.n == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let n = self.n as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let m = self.modulus[i] as u64;
                prod[k - n + i] = (prod[k - n + i] + (p - c) * m) % p;
            }
            prod[k] = 0;
        }
        let r: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.undigits(&r)
    }

    fn raw_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn id(&self) -> FieldId {
        FieldId {
            p: self.p,
            n: self.n,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Full monic modulus `c_0..c_n` (leading 1 included), `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.n > 1).then_some(self.modulus.as_slice())
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> Felt {
        self.wrap(self.generator)
    }

    #[inline]
    fn wrap(&self, idx: u32) -> Felt {
        Felt {
            field: self.id(),
            idx,
        }
    }

    pub fn zero(&self) -> Felt {
        self.wrap(0)
    }

    pub fn one(&self) -> Felt {
        self.wrap(1)
    }

    /// The image of an integer under `Z -> F_p ⊂ F_q`.
    pub fn from_int(&self, v: i64) -> Felt {
        self.wrap(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Felt, FieldError> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::BadCoefficients);
        }
        Ok(self.wrap(self.undigits(coeffs)))
    }

    /// Element at position `idx` of the canonical enumeration.
    pub fn element(&self, idx: u32) -> Felt {
        assert!(
            idx < self.q,
            "index {idx} out of range for field of order {}",
            self.q
        );
        self.wrap(idx)
    }

    pub fn elements(&self) -> impl Iterator<Item = Felt> + '_ {
        (0..self.q).map(move |i| self.wrap(i))
    }

    /// `g^k` for the table generator `g`.
    pub fn exp_generator(&self, k: u64) -> Felt {
        self.wrap(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    /// Discrete log to the table generator; `None` for zero.
    pub fn log(&self, a: Felt) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.idx as usize])
    }

    /// The value in `[0, p)` when `a` lies in the prime field.
    pub fn prime_value(&self, a: Felt) -> Option<u32> {
        (a.idx < self.p).then_some(a.idx)
    }

    pub fn contains(&self, a: Felt) -> bool {
        a.field == self.id()
    }

    fn check(&self, a: Felt) -> Result<(), FieldError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        debug_assert!(self.contains(a) && self.contains(b));
        if self.p == 2 {
            return self.wrap(a.idx ^ b.idx);
        }
        if self.n == 1 {
            return self.wrap((a.idx + b.idx) % self.p);
        }
        let (mut x, mut y, mut place, mut r) = (a.idx, b.idx, 1u32, 0u32);
        for _ in 0..self.n {
            r += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        self.wrap(r)
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        debug_assert!(self.contains(a));
        if self.p == 2 {
            return a;
        }
        let (mut x, mut place, mut r) = (a.idx, 1u32, 0u32);
        for _ in 0..self.n {
            r += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place = place.wrapping_mul(self.p);
        }
        self.wrap(r)
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.idx == 0 || b.idx == 0 {
            return self.zero();
        }
        let s = self.log[a.idx as usize] as u64 + self.log[b.idx as usize] as u64;
        self.wrap(self.exp[(s % (self.q as u64 - 1)) as usize])
    }

    pub fn inv(&self, a: Felt) -> Result<Felt, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let m = self.q - 1;
        let l = self.log[a.idx as usize];
        Ok(self.wrap(self.exp[((m - l) % m) as usize]))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt, FieldError> {
        self.check(a)?;
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer `e`; `0^0 = 1`, negative powers of zero fail.
    pub fn pow(&self, a: Felt, e: i64) -> Result<Felt, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return match e.cmp(&0) {
                std::cmp::Ordering::Less => Err(FieldError::DivisionByZero),
                std::cmp::Ordering::Equal => Ok(self.one()),
                std::cmp::Ordering::Greater => Ok(self.zero()),
            };
        }
        let m = (self.q - 1) as i128;
        let k = (self.log[a.idx as usize] as i128 * e as i128).rem_euclid(m);
        Ok(self.wrap(self.exp[k as usize]))
    }

    /// `a^e` for a nonnegative exponent of any size.
    pub fn pow_u128(&self, a: Felt, e: u128) -> Felt {
        if a.is_zero() {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let m = (self.q - 1) as u128;
        let k = (self.log[a.idx as usize] as u128 * (e % m)) % m;
        self.wrap(self.exp[k as usize])
    }

    /// Checked arithmetic entry point: validates contexts, operands and zero division.
    pub fn fe_arith(&self, op: FieldOp, a: Felt, b: Operand) -> Result<Felt, FieldError> {
        self.check(a)?;
        let elem = |b: Operand| match b {
            Operand::Elem(x) => self.check(x).map(|_| x),
            _ => Err(FieldError::BadOperand(op)),
        };
        match op {
            FieldOp::Add => Ok(self.add(a, elem(b)?)),
            FieldOp::Sub => Ok(self.sub(a, elem(b)?)),
            FieldOp::Mul => Ok(self.mul(a, elem(b)?)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Pow => match b {
                Operand::Exp(e) => self.pow(a, e),
                _ => Err(FieldError::BadOperand(op)),
            },
        }
    }

    /// Degree `m` of the subfield of order `sub_order = p^m`, if it exists.
    fn subfield_degree(&self, sub_order: u64) -> Result<u32, FieldError> {
        let bad = FieldError::BadSubfieldOrder(sub_order);
        let mut m = 0u32;
        let mut r = sub_order;
        while r > 1 && r.is_multiple_of(self.p as u64) {
            r /= self.p as u64;
            m += 1;
        }
        if r != 1 || m == 0 || !self.n.is_multiple_of(m) {
            return Err(bad);
        }
        Ok(m)
    }

    /// `a ↦ a^{sub_order}`, the Frobenius map relative to the subfield of that order.
    pub fn frobenius(&self, a: Felt, sub_order: u64) -> Result<Felt, FieldError> {
        self.check(a)?;
        self.subfield_degree(sub_order)?;
        Ok(self.pow_u128(a, sub_order as u128))
    }

    /// Trace from this field down to the subfield of order `sub_order`.
    pub fn trace(&self, a: Felt, sub_order: u64) -> Result<Felt, FieldError> {
        self.check(a)?;
        let m = self.subfield_degree(sub_order)?;
        let mut acc = self.zero();
        let mut conj = a;
        for _ in 0..self.n / m {
            acc = self.add(acc, conj);
            conj = self.pow_u128(conj, sub_order as u128);
        }
        Ok(acc)
    }

    /// Norm from this field down to the subfield of order `sub_order`.
    pub fn norm(&self, a: Felt, sub_order: u64) -> Result<Felt, FieldError> {
        self.check(a)?;
        let m = self.subfield_degree(sub_order)?;
        let mut acc = self.one();
        let mut conj = a;
        for _ in 0..self.n / m {
            acc = self.mul(acc, conj);
            conj = self.pow_u128(conj, sub_order as u128);
        }
        Ok(acc)
    }

    /// Squareness in this field. Zero is a square; in characteristic 2 everything is.
    pub fn is_square(&self, a: Felt) -> bool {
        debug_assert!(self.contains(a));
        if a.is_zero() || self.p == 2 {
            return true;
        }
        self.log[a.idx as usize].is_multiple_of(2)
    }

    /// A square root, if one exists.
    pub fn sqrt(&self, a: Felt) -> Option<Felt> {
        if a.is_zero() {
            return Some(a);
        }
        let m = self.q as u64 - 1;
        let l = self.log[a.idx as usize] as u64;
        if self.p == 2 {
            // squaring is a bijection; halve the log modulo an odd group order
            let half = (l * m.div_ceil(2)) % m;
            return Some(self.exp_generator(half));
        }
        l.is_multiple_of(2).then(|| self.exp_generator(l / 2))
    }
}

/// `F_q` together with `F_{q^2}` and a fixed embedding between them.
///
/// `F_{q^2}` is a single degree-`2n` extension of `F_p`. The embedding sends the
/// basis root of the `F_q` modulus to its first root (in enumeration order)
/// inside `F_{q^2}`, and its image is checked to be exactly the fixed field of
/// `x ↦ x^q`.
#[derive(Debug)]
pub struct QuadraticExtension {
    base: FieldCtx,
    ext: FieldCtx,
    to_ext: Vec<u32>,
    to_base: Vec<u32>,
}

const NOT_IN_BASE: u32 = u32::MAX;

impl QuadraticExtension {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        Self::with_cap(q, DEFAULT_SIZE_CAP)
    }

    /// `cap` bounds the size `q^2` of the larger field.
    pub fn with_cap(q: u64, cap: u64) -> Result<Self, FieldError> {
        let (p, n) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let size = (q as u128) * (q as u128);
        if size > cap as u128 {
            return Err(FieldError::SizeCapExceeded { size, cap });
        }
        let base = FieldCtx::with_cap(p, n, cap)?;
        let ext = FieldCtx::with_cap(p, 2 * n, cap)?;

        let root = match base.modulus() {
            None => ext.one(),
            Some(m) => ext
                .elements()
                .find(|&r| {
                    let v = m.iter().rev().fold(ext.zero(), |acc, &c| {
                        ext.add(ext.mul(acc, r), ext.from_int(c as i64))
                    });
                    v.is_zero()
                })
                .expect("base modulus splits in the quadratic extension"),
        };
        let mut powers = vec![ext.one()];
        for _ in 1..n {
            let last = *powers.last().unwrap();
            powers.push(ext.mul(last, root));
        }
        let mut to_ext = Vec::with_capacity(base.q as usize);
        let mut to_base = vec![NOT_IN_BASE; ext.q as usize];
        for a in base.elements() {
            let img = if n == 1 {
                ext.from_int(a.idx as i64)
            } else {
                a.coeffs()
                    .iter()
                    .zip(&powers)
                    .fold(ext.zero(), |acc, (&c, &w)| {
                        ext.add(acc, ext.mul(ext.from_int(c as i64), w))
                    })
            };
            to_ext.push(img.idx);
            to_base[img.idx as usize] = a.idx;
        }
        let fixed = ext
            .elements()
            .filter(|&x| ext.pow_u128(x, q as u128) == x)
            .count();
        assert_eq!(fixed as u64, q, "subfield must be the Frobenius-fixed set");
        debug_assert!(
            ext.elements()
                .all(|x| (ext.pow_u128(x, q as u128) == x)
                    == (to_base[x.idx as usize] != NOT_IN_BASE))
        );
        Ok(QuadraticExtension {
            base,
            ext,
            to_ext,
            to_base,
        })
    }

    /// `F_q`.
    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    /// `F_{q^2}`.
    pub fn ext(&self) -> &FieldCtx {
        &self.ext
    }

    pub fn q(&self) -> u64 {
        self.base.order()
    }

    pub fn is_odd(&self) -> bool {
        self.base.p != 2
    }

    pub fn embed(&self, a: Felt) -> Felt {
        assert!(self.base.contains(a), "element is not in the base field");
        self.ext.wrap(self.to_ext[a.idx as usize])
    }

    /// Inverse of [`embed`](Self::embed); `None` outside `F_q`.
    pub fn restrict(&self, x: Felt) -> Option<Felt> {
        assert!(
            self.ext.contains(x),
            "element is not in the extension field"
        );
        let b = self.to_base[x.idx as usize];
        (b != NOT_IN_BASE).then(|| self.base.wrap(b))
    }

    pub fn in_base(&self, x: Felt) -> bool {
        self.restrict(x).is_some()
    }

    /// `F_q^*` embedded in `F_{q^2}`, ordered by base-field enumeration.
    pub fn base_units(&self) -> impl Iterator<Item = Felt> + '_ {
        self.base.elements().skip(1).map(|a| self.embed(a))
    }
}
