//! Dense univariate polynomials over a [`FieldCtx`].

use std::fmt;

use thiserror::Error;

use crate::field::{Felt, FieldCtx, FieldError, FieldId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `coeffs[i]` multiplies `x^i`; the leading coefficient is nonzero unless the
/// polynomial is zero, in which case `coeffs` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyFq {
    field: FieldId,
    coeffs: Vec<Felt>,
}

impl PolyFq {
    pub fn new(ctx: &FieldCtx, mut coeffs: Vec<Felt>) -> Result<Self, PolyError> {
        if coeffs.iter().any(|c| !ctx.contains(*c)) {
            return Err(PolyError::ContextMismatch);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(PolyFq {
            field: ctx.id(),
            coeffs,
        })
    }

    /// Coefficients given as integers reduced into the prime field.
    pub fn from_ints(ctx: &FieldCtx, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&v| ctx.from_int(v)).collect();
        Self::new(ctx, c).expect("prime-field coefficients")
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        PolyFq {
            field: ctx.id(),
            coeffs: Vec::new(),
        }
    }

    /// `c·x^k`.
    pub fn monomial(ctx: &FieldCtx, c: Felt, k: usize) -> Result<Self, PolyError> {
        let mut v = vec![ctx.zero(); k + 1];
        v[k] = c;
        Self::new(ctx, v)
    }

    /// Sum of `c·x^k` over `(k, c)` pairs; repeated exponents add up.
    pub fn from_terms(ctx: &FieldCtx, terms: &[(usize, Felt)]) -> Result<Self, PolyError> {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut v = vec![ctx.zero(); deg + 1];
        for &(k, c) in terms {
            if !ctx.contains(c) {
                return Err(PolyError::ContextMismatch);
            }
            v[k] = ctx.add(v[k], c);
        }
        Self::new(ctx, v)
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn coeffs(&self) -> &[Felt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<Felt> {
        self.coeffs.get(k).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Felt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, &c)| (k, c))
    }

    fn check(&self, ctx: &FieldCtx) -> Result<(), PolyError> {
        if ctx.id() == self.field {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    /// Exact evaluation at `a`.
    pub fn eval(&self, ctx: &FieldCtx, a: Felt) -> Result<Felt, PolyError> {
        self.check(ctx)?;
        if !ctx.contains(a) {
            return Err(PolyError::ContextMismatch);
        }
        Ok(self.eval_unchecked(ctx, a))
    }

    /// Horner's rule, or a term-wise sum of table powers when the polynomial
    /// is sparse. Both are exact; the caller guarantees matching contexts.
    pub fn eval_unchecked(&self, ctx: &FieldCtx, a: Felt) -> Felt {
        let nonzero = self.coeffs.iter().filter(|c| !c.is_zero()).count();
        if nonzero * 4 < self.coeffs.len() {
            self.terms().fold(ctx.zero(), |acc, (k, c)| {
                ctx.add(acc, ctx.mul(c, ctx.pow_u128(a, k as u128)))
            })
        } else {
            self.coeffs
                .iter()
                .rev()
                .fold(ctx.zero(), |acc, &c| ctx.add(ctx.mul(acc, a), c))
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Result<Self, PolyError> {
        self.check(ctx)?;
        other.check(ctx)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|k| {
                let a = self.coeff(k).unwrap_or(ctx.zero());
                let b = other.coeff(k).unwrap_or(ctx.zero());
                ctx.add(a, b)
            })
            .collect();
        Self::new(ctx, v)
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Self) -> Result<Self, PolyError> {
        let neg = Self::new(ctx, other.coeffs.iter().map(|&c| ctx.neg(c)).collect())?;
        self.add(ctx, &neg)
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Self) -> Result<Self, PolyError> {
        self.check(ctx)?;
        other.check(ctx)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(ctx));
        }
        let mut v = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = ctx.add(v[i + j], ctx.mul(a, b));
            }
        }
        Self::new(ctx, v)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &Self) -> Result<(Self, Self), PolyError> {
        self.check(ctx)?;
        divisor.check(ctx)?;
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = ctx.inv(divisor.coeffs[dd])?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(ctx), self.clone()));
        }
        let mut quot = vec![ctx.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = ctx.mul(r[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for (i, &m) in divisor.coeffs.iter().enumerate() {
                r[k - dd + i] = ctx.sub(r[k - dd + i], ctx.mul(c, m));
            }
        }
        r.truncate(dd);
        Ok((Self::new(ctx, quot)?, Self::new(ctx, r)?))
    }

    pub fn rem(&self, ctx: &FieldCtx, divisor: &Self) -> Result<Self, PolyError> {
        Ok(self.div_rem(ctx, divisor)?.1)
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self, ctx: &FieldCtx) -> Result<Self, PolyError> {
        match self.coeffs.last() {
            None => Ok(self.clone()),
            Some(&lead) => {
                let inv = ctx.inv(lead)?;
                Self::new(ctx, self.coeffs.iter().map(|&c| ctx.mul(c, inv)).collect())
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, ctx: &FieldCtx, other: &Self) -> Result<Self, PolyError> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ctx, &b)?;
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| ctx.mul(ctx.from_int(k as i64), c))
            .collect();
        Self::new(ctx, v).expect("same field")
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, ctx: &FieldCtx, mut e: u128, modulus: &Self) -> Result<Self, PolyError> {
        let mut base = self.rem(ctx, modulus)?;
        let mut acc = Self::new(ctx, vec![ctx.one()])?.rem(ctx, modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base)?.rem(ctx, modulus)?;
            }
            base = base.mul(ctx, &base)?.rem(ctx, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Distinct roots in the coefficient field, ascending in enumeration order.
    pub fn find_roots(&self, ctx: &FieldCtx) -> Result<Vec<Felt>, PolyError> {
        self.check(ctx)?;
        match self.degree() {
            None | Some(0) => Err(PolyError::ConstantPolynomial),
            _ => Ok(ctx
                .elements()
                .filter(|&a| self.eval_unchecked(ctx, a).is_zero())
                .collect()),
        }
    }

    /// Irreducibility over the coefficient field. Degrees up to 3 reduce to
    /// root absence; higher degrees use `gcd(f, x^{q^i} - x) = 1` for `i ≤ deg/2`.
    pub fn is_irreducible(&self, ctx: &FieldCtx) -> Result<bool, PolyError> {
        self.check(ctx)?;
        let d = match self.degree() {
            None | Some(0) => return Err(PolyError::ConstantPolynomial),
            Some(d) => d,
        };
        if d == 1 {
            return Ok(true);
        }
        if d <= 3 {
            return Ok(self.find_roots(ctx)?.is_empty());
        }
        let x = Self::monomial(ctx, ctx.one(), 1)?;
        let mut h = x.rem(ctx, self)?;
        for _ in 1..=d / 2 {
            h = h.pow_mod(ctx, ctx.order() as u128, self)?;
            let g = self.gcd(ctx, &h.sub(ctx, &x)?)?;
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Discriminant of the monic cubic `x³ + b x² + c x + d`:
/// `-4c³ - 27d² + b²c² - 4b³d + 18bcd`.
pub fn cubic_discriminant(ctx: &FieldCtx, b: Felt, c: Felt, d: Felt) -> Felt {
    let k = |v: i64| ctx.from_int(v);
    let m = |x: Felt, y: Felt| ctx.mul(x, y);
    let (b2, c2) = (m(b, b), m(c, c));
    let terms = [
        m(k(-4), m(c2, c)),
        m(k(-27), m(d, d)),
        m(b2, c2),
        m(k(-4), m(m(b2, b), d)),
        m(k(18), m(m(b, c), d)),
    ];
    terms.into_iter().fold(ctx.zero(), |acc, t| ctx.add(acc, t))
}

/// Displays with the variable `x`, highest power first.
pub struct PolyDisplay<'a>(pub &'a PolyFq);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, Felt)> = self.0.terms().collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .rev()
            .map(|&(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
