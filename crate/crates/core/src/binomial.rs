//! Exact binomial coefficients.
//!
//! Integer tops go through a Pascal-triangle memo; negative tops use
//! `C(-m, j) = (-1)^j C(m + j - 1, j)`. Rational tops use the falling
//! factorial directly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rows `0..=max_n` of Pascal's triangle, exact.
///
/// Built once and only read afterwards, so one table can serve many workers.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomialTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        BinomialTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, k)` for any integer `n`; zero when `k < 0`.
    pub fn get(&self, n: i64, k: i64) -> BigInt {
        if k < 0 {
            return BigInt::zero();
        }
        if n >= 0 {
            if k > n {
                return BigInt::zero();
            }
            match self.rows.get(n as usize) {
                Some(row) => row[k as usize].clone(),
                None => binom(n, k),
            }
        } else {
            let v = self.get(k - n - 1, k);
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        }
    }

    /// `C(n, k) mod p` in `[0, p)`.
    pub fn get_mod(&self, n: i64, k: i64, p: u64) -> u64 {
        reduce_mod(&self.get(n, k), p)
    }
}

/// `v mod p` in `[0, p)`.
pub fn reduce_mod(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((v % &m) + &m) % &m;
    r.to_u64().expect("residue fits")
}

/// `C(n, k)` without a table.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n < 0 {
        let v = binom(k - n - 1, k);
        return if k % 2 == 0 { v } else { -v };
    }
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial `top (top-1) … (top-k+1) / k!` for rational `top`.
pub fn gen_binomial(top: &BigRational, k: u64) -> BigRational {
    let mut num = BigRational::one();
    let mut fact = BigInt::one();
    for i in 0..k {
        num *= top - BigRational::from_integer(BigInt::from(i));
        fact *= BigInt::from(i + 1);
    }
    num / BigRational::from_integer(fact)
}

/// `⌊x⌋` for a half-integer `x = h/2`.
pub fn floor_half(h: i64) -> i64 {
    h.div_euclid(2)
}

/// `2{x}` for a half-integer `x = h/2`: 0 when `x` is an integer, else 1.
pub fn twice_frac_half(h: i64) -> i64 {
    h.rem_euclid(2)
}

pub fn is_power_of_two(v: &BigInt) -> bool {
    v.is_positive() && (v & (v - BigInt::one())).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn generalized_examples() {
        assert_eq!(gen_binomial(&rat(3, 2), 1), rat(3, 2));
        assert_eq!(gen_binomial(&rat(-1, 1), 1), rat(-1, 1));
        assert_eq!(gen_binomial(&rat(5, 1), 2), rat(10, 1));
        assert_eq!(gen_binomial(&rat(1, 2), 0), rat(1, 1));
        // C(1/2, 2) = (1/2)(-1/2)/2
        assert_eq!(gen_binomial(&rat(1, 2), 2), rat(-1, 8));
    }

    #[test]
    fn table_matches_direct_formula() {
        let t = BinomialTable::new(40);
        for n in -30i64..=45 {
            for k in -2i64..=50 {
                assert_eq!(t.get(n, k), binom(n, k), "C({n},{k})");
                if k >= 0 {
                    let g = gen_binomial(&rat(n, 1), k as u64);
                    assert_eq!(g, BigRational::from_integer(binom(n, k)));
                }
            }
        }
    }

    #[test]
    fn negative_top_rule() {
        // C(-k, k) = (-1)^k C(2k-1, k)
        assert_eq!(binom(-3, 3), BigInt::from(-10));
        assert_eq!(binom(-1, 0), BigInt::one());
        assert_eq!(binom(-2, 5), BigInt::from(-6));
    }

    #[test]
    fn half_integer_helpers() {
        assert_eq!(floor_half(-1), -1);
        assert_eq!(twice_frac_half(-1), 1);
        assert_eq!(floor_half(7), 3);
        assert_eq!(twice_frac_half(6), 0);
        assert!(is_power_of_two(&BigInt::from(64)));
        assert!(!is_power_of_two(&BigInt::from(96)));
        assert_eq!(reduce_mod(&BigInt::from(-7), 5), 3);
    }
}
