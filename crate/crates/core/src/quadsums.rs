//! Closed-form binomial sums over odd `F_q` governed by `x² + x - z`.
//!
//! For `z ∈ F_q^*`:
//!
//! * `Σ_{0≤k≤q/2} C(-k,k) z^k` is `1/2`, `1` or `0` as `x² + x - z` has a
//!   double root, two roots in `F_q`, or no root in `F_q`;
//! * with two distinct roots, `Σ_{0≤k≤(q-1)/2} C(-k,k+1) z^k = 1` and
//!   `Σ_{0≤k≤(q-1)/2} (k+1) C(-k,k+1) z^k = 2z/(1+4z)`.
//!
//! Negative-top binomials are evaluated as `C(-m, j) = (-1)^j C(m+j-1, j)`
//! over the integers and only then reduced mod `p`.

use thiserror::Error;

use crate::binomial::BinomialTable;
use crate::field::{Felt, FieldCtx, FieldError, QuadraticExtension};
use crate::poly::PolyFq;
use crate::pp::{BalancedSumEvaluator, ExponentSplit, PpError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadSumError {
    #[error("z must be nonzero")]
    ZeroZ,
    #[error("the sums are defined for odd characteristic only")]
    EvenCharacteristic,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Pp(#[from] PpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadKind {
    DoubleRoot,
    Split,
    Inert,
}

impl QuadKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            QuadKind::DoubleRoot => "double-root",
            QuadKind::Split => "split",
            QuadKind::Inert => "inert",
        }
    }
}

/// Factorization type of `x² + x - z` over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadClass {
    pub kind: QuadKind,
    /// Distinct roots in `F_q`, ascending; empty when inert.
    pub roots: Vec<Felt>,
    /// `1 + 4z`.
    pub disc: Felt,
}

/// Per-field evaluator; holds the binomial memo for tops up to `q`.
pub struct QuadSums<'a> {
    ctx: &'a FieldCtx,
    table: BinomialTable,
}

impl<'a> QuadSums<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Result<Self, QuadSumError> {
        if ctx.characteristic() == 2 {
            return Err(QuadSumError::EvenCharacteristic);
        }
        Ok(QuadSums {
            ctx,
            table: BinomialTable::new(ctx.order() as usize + 1),
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.ctx
    }

    fn check_z(&self, z: Felt) -> Result<(), QuadSumError> {
        if !self.ctx.contains(z) {
            return Err(FieldError::ContextMismatch.into());
        }
        if z.is_zero() {
            return Err(QuadSumError::ZeroZ);
        }
        Ok(())
    }

    /// `C(n, k)` with `n` possibly negative, reduced into `F_p ⊂ F_q`.
    fn binom(&self, n: i64, k: i64) -> Felt {
        let p = self.ctx.characteristic();
        self.ctx.from_int(self.table.get_mod(n, k, p) as i64)
    }

    pub fn classify(&self, z: Felt) -> Result<QuadClass, QuadSumError> {
        self.check_z(z)?;
        let f = self.ctx;
        let disc = f.add(f.one(), f.mul(f.from_int(4), z));
        let quad = PolyFq::new(f, vec![f.neg(z), f.one(), f.one()]).expect("same field");
        let roots = quad.find_roots(f).expect("degree 2");
        let kind = if disc.is_zero() {
            QuadKind::DoubleRoot
        } else if f.is_square(disc) {
            QuadKind::Split
        } else {
            QuadKind::Inert
        };
        debug_assert_eq!(
            roots.len(),
            match kind {
                QuadKind::DoubleRoot => 1,
                QuadKind::Split => 2,
                QuadKind::Inert => 0,
            }
        );
        Ok(QuadClass { kind, roots, disc })
    }

    /// `Σ_{0≤k≤q/2} C(-k, k) z^k`.
    pub fn central_sum(&self, z: Felt) -> Result<Felt, QuadSumError> {
        self.check_z(z)?;
        let kmax = (self.ctx.order() / 2) as i64;
        Ok(self.series(z, kmax, |k| self.binom(-k, k)))
    }

    /// `Σ_{0≤k≤(q-1)/2} C(-k, k+1) z^k`.
    pub fn shifted_sum(&self, z: Felt) -> Result<Felt, QuadSumError> {
        self.check_z(z)?;
        let kmax = ((self.ctx.order() - 1) / 2) as i64;
        Ok(self.series(z, kmax, |k| self.binom(-k, k + 1)))
    }

    /// `Σ_{0≤k≤(q-1)/2} (k+1) C(-k, k+1) z^k`.
    pub fn weighted_sum(&self, z: Felt) -> Result<Felt, QuadSumError> {
        self.check_z(z)?;
        let kmax = ((self.ctx.order() - 1) / 2) as i64;
        let f = self.ctx;
        Ok(self.series(z, kmax, |k| f.mul(f.from_int(k + 1), self.binom(-k, k + 1))))
    }

    fn series(&self, z: Felt, kmax: i64, coef: impl Fn(i64) -> Felt) -> Felt {
        let f = self.ctx;
        let mut zk = f.one();
        let mut acc = f.zero();
        for k in 0..=kmax {
            acc = f.add(acc, f.mul(coef(k), zk));
            zk = f.mul(zk, z);
        }
        acc
    }

    /// The value the first sum takes for a given class.
    pub fn central_expected(&self, kind: QuadKind) -> Felt {
        let f = self.ctx;
        match kind {
            QuadKind::DoubleRoot => f.inv(f.from_int(2)).expect("odd characteristic"),
            QuadKind::Split => f.one(),
            QuadKind::Inert => f.zero(),
        }
    }

    /// `2z / (1 + 4z)`; `None` when `1 + 4z = 0`.
    pub fn weighted_expected(&self, z: Felt) -> Option<Felt> {
        let f = self.ctx;
        let den = f.add(f.one(), f.mul(f.from_int(4), z));
        f.div(f.mul(f.from_int(2), z), den).ok()
    }
}

/// Evaluation of all three sums at one `z`, with the asserted expectations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSumRow {
    pub z: Felt,
    pub class: QuadClass,
    pub central: Felt,
    pub shifted: Felt,
    pub weighted: Felt,
    pub central_expected: Felt,
    /// Expected values of the second and third sums; only set for split `z`.
    pub shifted_expected: Option<Felt>,
    pub weighted_expected: Option<Felt>,
}

impl QuadSumRow {
    pub fn holds(&self) -> bool {
        self.central == self.central_expected
            && self.shifted_expected.is_none_or(|e| e == self.shifted)
            && self.weighted_expected.is_none_or(|e| e == self.weighted)
    }
}

pub fn evaluate_row(sums: &QuadSums<'_>, z: Felt) -> Result<QuadSumRow, QuadSumError> {
    let class = sums.classify(z)?;
    let split = class.kind == QuadKind::Split;
    Ok(QuadSumRow {
        z,
        central: sums.central_sum(z)?,
        shifted: sums.shifted_sum(z)?,
        weighted: sums.weighted_sum(z)?,
        central_expected: sums.central_expected(class.kind),
        shifted_expected: split.then(|| sums.ctx().one()),
        weighted_expected: if split {
            sums.weighted_expected(z)
        } else {
            None
        },
        class,
    })
}

/// Every `z ∈ F_q^*` in enumeration order.
pub fn sweep(ctx: &FieldCtx) -> Result<Vec<QuadSumRow>, QuadSumError> {
    let sums = QuadSums::new(ctx)?;
    ctx.elements()
        .skip(1)
        .map(|z| evaluate_row(&sums, z))
        .collect()
}

/// Both sides of the reductions of the power sums at `s = (q-1)q` and
/// `s = 1 + (q-2)q` to the lemma sums, with `z = t^{-2}`:
///
/// * `rhs(0, q-1, t) = -t (Σ C(-k,k) z^k - 1)`;
/// * `rhs(1, q-2, t) = -4 Σ (k+1) C(-k,k+1) z^k + 3 Σ C(-k,k+1) z^k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeRow {
    pub t: Felt,
    pub z: Felt,
    pub first_power_sum: Felt,
    pub first_lemma_side: Felt,
    pub second_power_sum: Felt,
    pub second_lemma_side: Felt,
}

impl BridgeRow {
    pub fn holds(&self) -> bool {
        self.first_power_sum == self.first_lemma_side
            && self.second_power_sum == self.second_lemma_side
    }
}

pub fn bridge(
    qe: &QuadraticExtension,
    closed: &BalancedSumEvaluator<'_>,
    sums: &QuadSums<'_>,
    t: Felt,
) -> Result<BridgeRow, QuadSumError> {
    let f = qe.base();
    if !f.contains(t) {
        return Err(FieldError::ContextMismatch.into());
    }
    let q = qe.q();
    let t_inv = f.inv(t).map_err(|_| PpError::ZeroT)?;
    let z = f.mul(t_inv, t_inv);
    let first_power_sum = closed.rhs(ExponentSplit::balanced(q, 0)?, t)?;
    let first_lemma_side = f.neg(f.mul(t, f.sub(sums.central_sum(z)?, f.one())));
    let second_power_sum = closed.rhs(ExponentSplit::balanced(q, 1)?, t)?;
    let second_lemma_side = f.add(
        f.sub(
            f.mul(f.from_int(3), sums.shifted_sum(z)?),
            f.mul(f.from_int(4), sums.weighted_sum(z)?),
        ),
        f.one(),
    );
    Ok(BridgeRow {
        t,
        z,
        first_power_sum,
        first_lemma_side,
        second_power_sum,
        second_lemma_side,
    })
}
