//! The integer sequence `H(a)`, the rational sequence `S(a)`, and the
//! congruences that tie them to the trinomial power sums.
//!
//! `H(a)` has two double-sum forms, a restricted one
//!
//! ```text
//! H(a) = (-2)^⌊(a-1)/2⌋ Σ_{0≤k≤(a-1)/2} Σ_{0≤i≤a-2k-1} C(a,i) C(2k-a,k) C(2a-2k-i-1,a) 2^{-k}
//! ```
//!
//! and an unrestricted one
//!
//! ```text
//! H(a) = Σ_{j,i≥0} C(a,i) C(⌊a/2⌋+j, 2j+e) C(2j+e+i, a) (-2)^j,   e = 2{(a-1)/2}.
//! ```
//!
//! `S(a)` is
//!
//! ```text
//! Σ_{0≤j≤(a-1)/2} Σ_{0≤i≤m} (-2)^j C(a,i) C(a+m-i, m-i) [C(⌊a/2⌋+j, m) + C(⌊a/2⌋+1/2+j, m)],  m = 2j+e,
//! ```
//!
//! a rational with power-of-two denominator. Everything is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::binomial::{floor_half, is_power_of_two, twice_frac_half};
use crate::field::{prime_power, Felt, FieldError, QuadraticExtension};

pub use crate::binomial::gen_binomial;

pub type ExactRational = BigRational;

/// Default largest argument accepted by [`HsEvaluator`].
pub const DEFAULT_A_CAP: u64 = 1200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HsError {
    #[error("argument {a} exceeds the cap {cap}")]
    CapExceeded { a: u64, cap: u64 },
    #[error("denominator is divisible by {0}")]
    DenominatorDivisibleByP(u64),
    #[error("q = {0} is not a prime power congruent to 1 mod 8")]
    BadQ(u64),
    #[error("t^2 != -2")]
    BadT,
    #[error("alpha + beta must equal q - 1")]
    BadSplit,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HForm {
    Restricted,
    Unrestricted,
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `C(a, i)` for `0 ≤ i ≤ a`.
fn pascal_row(a: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(a as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 0..a {
        c = c * int((a - i) as i64) / int(i as i64 + 1);
        row.push(c.clone());
    }
    row
}

/// `C(n, a)` for `0 ≤ n ≤ n_max`.
fn pascal_column(a: u64, n_max: u64) -> Vec<BigInt> {
    let mut col = vec![BigInt::zero(); n_max as usize + 1];
    if a > n_max {
        return col;
    }
    let mut c = BigInt::one();
    col[a as usize] = c.clone();
    for n in a + 1..=n_max {
        // C(n, a) = C(n-1, a) n / (n - a)
        c = c * int(n as i64) / int((n - a) as i64);
        col[n as usize] = c.clone();
    }
    col
}

/// `C(n, k)` for integer `n ≥ 0`, from scratch.
fn small_binom(n: i64, k: i64) -> BigInt {
    crate::binomial::binom(n, k)
}

/// Exact evaluator for `H` and `S` with an argument cap.
#[derive(Debug, Clone)]
pub struct HsEvaluator {
    cap: u64,
}

impl Default for HsEvaluator {
    fn default() -> Self {
        HsEvaluator { cap: DEFAULT_A_CAP }
    }
}

impl HsEvaluator {
    pub fn new(cap: u64) -> Self {
        HsEvaluator { cap }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn check(&self, a: u64) -> Result<(), HsError> {
        if a > self.cap {
            Err(HsError::CapExceeded { a, cap: self.cap })
        } else {
            Ok(())
        }
    }

    pub fn h(&self, a: u64, form: HForm) -> Result<ExactRational, HsError> {
        self.check(a)?;
        Ok(match form {
            HForm::Restricted => h_restricted(a),
            HForm::Unrestricted => BigRational::from_integer(h_unrestricted(a)),
        })
    }

    /// `H(a)` as an integer (unrestricted form).
    pub fn h_int(&self, a: u64) -> Result<BigInt, HsError> {
        self.check(a)?;
        Ok(h_unrestricted(a))
    }

    pub fn s(&self, a: u64) -> Result<ExactRational, HsError> {
        self.check(a)?;
        Ok(s_value(a))
    }
}

fn h_restricted(a: u64) -> ExactRational {
    let a_i = a as i64;
    // K = ⌊(a-1)/2⌋; k runs over 0..=K, so 2^{K-k} keeps the inner sum integral
    let kk = floor_half(a_i - 1);
    if kk < 0 {
        return BigRational::zero();
    }
    let row = pascal_row(a);
    let col = pascal_column(a, 2 * a);
    let mut acc = BigInt::zero();
    for k in 0..=kk {
        let mid = small_binom(2 * k - a_i, k);
        let scale = BigInt::one() << (kk - k) as usize;
        let mut inner = BigInt::zero();
        for i in 0..=(a_i - 2 * k - 1) {
            let top = (2 * a_i - 2 * k - i - 1) as usize;
            inner += &row[i as usize] * &col[top];
        }
        acc += inner * mid * scale;
    }
    // (-2)^K · Σ … 2^{-k}  =  (-2)^K / 2^K · Σ … 2^{K-k}
    let sign = if kk % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    BigRational::from_integer(sign * acc)
}

fn h_unrestricted(a: u64) -> BigInt {
    let a_i = a as i64;
    let e = twice_frac_half(a_i - 1);
    let h = a_i / 2;
    let row = pascal_row(a);
    let col = pascal_column(a, 2 * a + 2);
    let mut acc = BigInt::zero();
    let mut pow = BigInt::one();
    let mut j = 0i64;
    // C(h+j, 2j+e) vanishes once 2j+e > h+j
    while j <= h - e {
        let m = 2 * j + e;
        let mid = small_binom(h + j, m);
        let mut inner = BigInt::zero();
        for i in 0..=a_i {
            let top = (m + i) as usize;
            if top < col.len() {
                inner += &row[i as usize] * &col[top];
            }
        }
        acc += inner * mid * &pow;
        pow *= -2;
        j += 1;
    }
    acc
}

/// `S(a)` in `O(a)` big-number operations.
///
/// The inner sum `Σ_i C(a,i) C(a+m-i, m-i)` is the coefficient `g_m` of
/// `(1+x)^a (1-x)^{-(a+1)}`, which satisfies
/// `(m+1) g_{m+1} = (2a+1) g_m + m g_{m-1}`. Both bracketed binomials advance
/// from `j` to `j+1` through `C(Y+1, K+2) = C(Y, K) (Y+1)(Y-K) / ((K+1)(K+2))`.
fn s_value(a: u64) -> ExactRational {
    let a_i = a as i64;
    if a == 0 {
        return BigRational::zero();
    }
    let e = twice_frac_half(a_i - 1);
    let h = a_i / 2;
    let jmax = floor_half(a_i - 1);
    let mmax = (2 * jmax + e) as usize;

    let mut g = Vec::with_capacity(mmax + 2);
    g.push(BigInt::one());
    g.push(int(2 * a_i + 1));
    for m in 1..mmax {
        let next = (int(2 * a_i + 1) * &g[m] + int(m as i64) * &g[m - 1]) / int(m as i64 + 1);
        g.push(next);
    }

    let half = BigRational::new(int(1), int(2));
    let r = |v: i64| BigRational::from_integer(int(v));
    // j = 0: C(h, e) and C(h + 1/2, e)
    let (mut int_binom, mut half_binom) = if e == 0 {
        (BigRational::one(), BigRational::one())
    } else {
        (r(h), r(h) + &half)
    };
    let mut acc = BigRational::zero();
    let mut pow = BigInt::one();
    for j in 0..=jmax {
        let m = 2 * j + e;
        let bracket = &int_binom + &half_binom;
        acc += bracket * BigRational::from_integer(&g[m as usize] * &pow);
        // advance Y = h+j (resp. h+1/2+j), K = m
        let den = r((m + 1) * (m + 2));
        let y_int = r(h + j);
        let y_half = r(h + j) + &half;
        int_binom = int_binom * (&y_int + r(1)) * (&y_int - r(m)) / &den;
        half_binom = half_binom * (&y_half + r(1)) * (&y_half - r(m)) / &den;
        pow *= -2;
    }
    acc
}

/// `x mod p` for a rational whose denominator is prime to `p`.
pub fn rational_mod(x: &ExactRational, p: u64) -> Result<u64, HsError> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(HsError::DenominatorDivisibleByP(p));
    }
    let num = x.numer().mod_floor(&pb);
    let den_inv = den.modpow(&(&pb - BigInt::from(2)), &pb);
    // p need not be prime for the contract, but every caller passes a prime
    Ok(((num * den_inv) % &pb).to_u64().expect("fits"))
}

/// Which subsequence an annihilator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecParity {
    /// `H(2n)`
    Even,
    /// `H(2n+1)`
    Odd,
}

/// One coefficient of an operator: `scale · Π factors`, each factor a
/// polynomial in `n` with ascending integer coefficients.
#[derive(Debug, Clone, Copy)]
pub struct CoeffPoly {
    pub scale: i64,
    pub factors: &'static [&'static [i64]],
}

impl CoeffPoly {
    pub fn eval(&self, n: u64) -> BigInt {
        let nb = BigInt::from(n);
        self.factors
            .iter()
            .fold(BigInt::from(self.scale), |acc, f| {
                let v = f
                    .iter()
                    .rev()
                    .fold(BigInt::zero(), |s, &c| s * &nb + BigInt::from(c));
                acc * v
            })
    }
}

/// Order-4 operator `Σ_k c_k(n) N^k` with `N F(n) = F(n+1)`.
#[derive(Debug, Clone, Copy)]
pub struct RecOperator {
    pub parity: RecParity,
    /// `coeffs[k]` multiplies `N^k`.
    pub coeffs: [CoeffPoly; 5],
}

const fn cp(scale: i64, factors: &'static [&'static [i64]]) -> CoeffPoly {
    CoeffPoly { scale, factors }
}

/// Annihilator of `H(2n)`.
pub const OPERATOR_EVEN: RecOperator = RecOperator {
    parity: RecParity::Even,
    coeffs: [
        cp(
            1,
            &[
                &[1, 1],
                &[2, 1],
                &[1, 2],
                &[3, 2],
                &[42339, 64064, 35848, 8800, 800],
            ],
        ),
        cp(
            8,
            &[
                &[2, 1],
                &[3, 2],
                &[1610409, 5182411, 6622148, 4328408, 1534248, 280800, 20800],
            ],
        ),
        cp(
            2,
            &[&[
                1777193487,
                7186386537,
                12405568049,
                11978835516,
                7092508484,
                2641104576,
                604784576,
                77932800,
                4329600,
            ]],
        ),
        cp(
            8,
            &[
                &[3, 1],
                &[5, 2],
                &[1662798, 5262881, 6660272, 4334056, 1534248, 280800, 20800],
            ],
        ),
        cp(
            1,
            &[
                &[3, 1],
                &[4, 1],
                &[5, 2],
                &[7, 2],
                &[6123, 15568, 14248, 5600, 800],
            ],
        ),
    ],
};

/// Annihilator of `H(2n+1)`.
pub const OPERATOR_ODD: RecOperator = RecOperator {
    parity: RecParity::Odd,
    coeffs: [
        cp(
            1,
            &[
                &[1, 1],
                &[2, 1],
                &[3, 2],
                &[5, 2],
                &[84483, 106912, 50248, 10400, 800],
            ],
        ),
        cp(
            8,
            &[
                &[2, 1],
                &[5, 2],
                &[6503193, 15909639, 15786632, 8150904, 2314248, 343200, 20800],
            ],
        ),
        cp(
            2,
            &[&[
                10505025027,
                33069872253,
                44933987909,
                34456630164,
                16323110084,
                4894912704,
                907856576,
                95251200,
                4329600,
            ]],
        ),
        cp(
            8,
            &[
                &[3, 1],
                &[7, 2],
                &[6606054, 16032469, 15833228, 8156552, 2314248, 343200, 20800],
            ],
        ),
        cp(
            1,
            &[
                &[3, 1],
                &[4, 1],
                &[7, 2],
                &[9, 2],
                &[18219, 34416, 23848, 7200, 800],
            ],
        ),
    ],
};

impl RecOperator {
    pub fn for_parity(parity: RecParity) -> &'static RecOperator {
        match parity {
            RecParity::Even => &OPERATOR_EVEN,
            RecParity::Odd => &OPERATOR_ODD,
        }
    }

    fn offset(&self) -> u64 {
        match self.parity {
            RecParity::Even => 0,
            RecParity::Odd => 1,
        }
    }

    /// `Σ_k c_k(n) H(b + 2(n+k))` with `H` read from `h`, indexed by argument.
    pub fn apply(&self, n: u64, h: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let a = self.offset() + 2 * (n + k as u64);
            acc += c.eval(n) * &h[a as usize];
        }
        acc
    }

    /// Largest argument of `H` touched by [`RecOperator::apply`] at `n`.
    pub fn reach(&self, n: u64) -> u64 {
        self.offset() + 2 * (n + 4)
    }

    /// Canonical text of the coefficient data, one line per coefficient.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for c in self.coeffs.iter().rev() {
            let fs: Vec<String> = c
                .factors
                .iter()
                .map(|f| {
                    f.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            s.push_str(&format!("{};{}\n", c.scale, fs.join("|")));
        }
        s
    }
}

/// `Σ_{k=0}^{4} c_k(n) H(b + 2(n+k))`, `b` the parity offset. Zero when the
/// operator annihilates the subsequence.
pub fn recurrence_residual(ev: &HsEvaluator, parity: RecParity, n: u64) -> Result<BigInt, HsError> {
    let op = RecOperator::for_parity(parity);
    ev.check(op.reach(n))?;
    let mut acc = BigInt::zero();
    for (k, c) in op.coeffs.iter().enumerate() {
        let a = op.offset() + 2 * (n + k as u64);
        acc += c.eval(n) * h_unrestricted(a);
    }
    Ok(acc)
}

/// `H(0), …, H(a_max)` computed in parallel, in order.
pub fn h_values(ev: &HsEvaluator, a_max: u64) -> Result<Vec<BigInt>, HsError> {
    ev.check(a_max)?;
    Ok((0..=a_max).into_par_iter().map(h_unrestricted).collect())
}

/// `S(0), …, S(a_max)` computed in parallel, in order.
pub fn s_values(ev: &HsEvaluator, a_max: u64) -> Result<Vec<ExactRational>, HsError> {
    ev.check(a_max)?;
    Ok((0..=a_max).into_par_iter().map(s_value).collect())
}

/// Outcome of a congruence sweep over a range of arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub q: u64,
    pub p: u64,
    /// `(argument, residue)` for every argument checked, ascending.
    pub residues: Vec<(u64, u64)>,
    pub first_failure: Option<u64>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn q_one_mod_eight(q: u64) -> Result<u64, HsError> {
    match prime_power(q) {
        Some((p, _)) if q % 8 == 1 => Ok(p),
        _ => Err(HsError::BadQ(q)),
    }
}

fn int_mod(v: &BigInt, p: u64) -> u64 {
    crate::binomial::reduce_mod(v, p)
}

/// `H(α) + H(β) ≡ 0 (mod p)` for all `α + β = q - 1`; residues indexed by `α`.
pub fn h_pair_congruence(ev: &HsEvaluator, q: u64) -> Result<CongruenceReport, HsError> {
    let p = q_one_mod_eight(q)?;
    ev.check(q - 1)?;
    let hs: Vec<u64> = (0..q)
        .into_par_iter()
        .map(|a| int_mod(&h_unrestricted(a), p))
        .collect();
    let residues: Vec<(u64, u64)> = (0..q)
        .map(|alpha| {
            (
                alpha,
                (hs[alpha as usize] + hs[(q - 1 - alpha) as usize]) % p,
            )
        })
        .collect();
    let first_failure = residues.iter().find(|r| r.1 != 0).map(|r| r.0);
    Ok(CongruenceReport {
        q,
        p,
        residues,
        first_failure,
    })
}

/// `S(a) ≡ 0 (mod p)` for `(q-1)/2 ≤ a ≤ q-1`.
pub fn s_congruence(ev: &HsEvaluator, q: u64) -> Result<CongruenceReport, HsError> {
    let p = q_one_mod_eight(q)?;
    ev.check(q - 1)?;
    let range: Vec<u64> = ((q - 1) / 2..q).collect();
    let residues = range
        .into_par_iter()
        .map(|a| rational_mod(&s_value(a), p).map(|r| (a, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let first_failure = residues.iter().find(|r| r.1 != 0).map(|r| r.0);
    Ok(CongruenceReport {
        q,
        p,
        residues,
        first_failure,
    })
}

/// `H(a) + H(q-1-a) - S(a) (mod p)` for `(q-1)/2 ≤ a ≤ q-1`, any odd `q`;
/// every residue should be zero.
pub fn h_s_link(ev: &HsEvaluator, q: u64) -> Result<CongruenceReport, HsError> {
    let p = match prime_power(q) {
        Some((p, _)) if p != 2 => p,
        _ => return Err(HsError::BadQ(q)),
    };
    ev.check(q - 1)?;
    let range: Vec<u64> = ((q - 1) / 2..q).collect();
    let residues = range
        .into_par_iter()
        .map(|a| {
            let hsum = int_mod(&(h_unrestricted(a) + h_unrestricted(q - 1 - a)), p);
            let s = rational_mod(&s_value(a), p)?;
            Ok((a, (hsum + p - s) % p))
        })
        .collect::<Result<Vec<_>, HsError>>()?;
    let first_failure = residues.iter().find(|r| r.1 != 0).map(|r| r.0);
    Ok(CongruenceReport {
        q,
        p,
        residues,
        first_failure,
    })
}

/// The residue pattern conjectured for `S(a) mod 3`: 0 when `a = 0` or
/// `3^{2k+1} ≤ a ≤ 3^{2k+2} - 1`, otherwise 2 (that is, -1).
pub fn conjectured_residue(a: u64) -> u64 {
    if a == 0 {
        return 0;
    }
    let mut lo = 3u64;
    while lo <= a {
        let hi = lo * 3 - 1;
        if a <= hi {
            return 0;
        }
        lo *= 9;
    }
    2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternScanReport {
    /// `S(a) mod 3` for `0 ≤ a ≤ a_max`.
    pub residues: Vec<u64>,
    pub first_counterexample: Option<u64>,
}

/// Compares `S(a) mod 3` with the conjectured pattern. Never fails on a
/// mismatch; it only records it.
pub fn s_mod3_scan(ev: &HsEvaluator, a_max: u64) -> Result<PatternScanReport, HsError> {
    ev.check(a_max)?;
    let residues = (0..=a_max)
        .into_par_iter()
        .map(|a| rational_mod(&s_value(a), 3))
        .collect::<Result<Vec<_>, _>>()?;
    let first_counterexample = residues
        .iter()
        .enumerate()
        .find(|(a, &r)| r != conjectured_residue(*a as u64))
        .map(|(a, _)| a as u64);
    Ok(PatternScanReport {
        residues,
        first_counterexample,
    })
}

/// `I₁` and `I₂` evaluated directly from their restricted triple sums and
/// through `H`, in `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeReport {
    pub alpha: u64,
    pub beta: u64,
    pub i1_direct: Felt,
    pub i1_from_h: Felt,
    pub i2_direct: Felt,
    pub i2_from_h: Felt,
    /// `(-1)^β t^{2{(β-1)/2}} H(β)` and its `α` counterpart.
    pub i1_short_form: Felt,
    pub i2_short_form: Felt,
}

impl BridgeReport {
    pub fn i1_matches(&self) -> bool {
        self.i1_direct == self.i1_from_h && self.i1_from_h == self.i1_short_form
    }

    pub fn i2_matches(&self) -> bool {
        self.i2_direct == self.i2_from_h && self.i2_from_h == self.i2_short_form
    }
}

/// `t` is an element of the base field `F_q` of `qe` with `t² = -2`.
pub fn bridge_i1_i2(
    qe: &QuadraticExtension,
    alpha: u64,
    beta: u64,
    t: Felt,
) -> Result<BridgeReport, HsError> {
    let f = qe.base();
    let q = qe.q();
    if !f.contains(t) {
        return Err(FieldError::ContextMismatch.into());
    }
    if f.characteristic() == 2 || f.mul(t, t) != f.from_int(-2) {
        return Err(HsError::BadT);
    }
    if alpha + beta != q - 1 {
        return Err(HsError::BadSplit);
    }
    let p = f.characteristic();
    let t_inv = f.inv(t)?;
    let (a, b) = (alpha as i64, beta as i64);
    let mut i1 = f.zero();
    let mut i2 = f.zero();
    for i in 0..=a {
        let ci = small_binom(a, i);
        for j in 0..=b {
            let m = i + j;
            let cij = &ci * small_binom(b, j);
            if cij.is_zero() {
                continue;
            }
            let tp = f.pow(t_inv, m)?;
            for (target, slot) in [(0i64, &mut i1), (q as i64 + 1, &mut i2)] {
                let twice_k = a + 1 + m - target;
                if twice_k < 0 || twice_k % 2 != 0 || twice_k / 2 > m {
                    continue;
                }
                let k = twice_k / 2;
                let mut coef = &cij * small_binom(m, k);
                if (k + j) % 2 == 1 {
                    coef = -coef;
                }
                let term = f.mul(f.from_int(int_mod(&coef, p) as i64), tp);
                *slot = f.add(*slot, term);
            }
        }
    }
    let via_h = |x: i64| -> Result<(Felt, Felt), HsError> {
        let hx = f.from_int(int_mod(&h_unrestricted(x as u64), p) as i64);
        let sign = if x % 2 == 0 { f.one() } else { f.from_int(-1) };
        let long = f.mul(
            f.mul(sign, f.pow(t, x - 1)?),
            f.mul(f.pow(f.from_int(-2), -floor_half(x - 1))?, hx),
        );
        let short = f.mul(f.mul(sign, f.pow(t, twice_frac_half(x - 1))?), hx);
        Ok((long, short))
    };
    let (i1_from_h, i1_short_form) = via_h(b)?;
    let (i2_from_h, i2_short_form) = via_h(a)?;
    Ok(BridgeReport {
        alpha,
        beta,
        i1_direct: i1,
        i1_from_h,
        i2_direct: i2,
        i2_from_h,
        i1_short_form,
        i2_short_form,
    })
}

/// Whether the denominator of `x` is a power of two.
pub fn has_dyadic_denominator(x: &ExactRational) -> bool {
    is_power_of_two(x.denom())
}

/// `true` when `x` is an integer.
pub fn is_integral(x: &ExactRational) -> bool {
    x.denom().is_one() || x.numer().is_zero() || x.denom().abs().is_one()
}
