//! The trinomial family over `F_{q^2}` and its permutation criteria.
//!
//! For odd `q` the trinomial `-x + t x^q + x^{2q-1}` permutes `F_{q^2}` exactly
//! when `q ≡ 1 (mod 8)` and `t² = -2`. For even `q > 2`, `x + t x^q + x^{2q-1}`
//! permutes exactly when `Tr_{F_q/F_2}(1/t) = 0`.

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{prime_power, Felt, FieldCtx, FieldError, QuadraticExtension};
use crate::poly::PolyFq;
use crate::pp::{self, PPVerdict, Parity, PpError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrinomialError {
    #[error("q must exceed 2")]
    QTooSmall,
    #[error("t must be nonzero")]
    ZeroT,
    #[error("t does not lie in F_q")]
    TNotInBaseField,
    #[error("i must be nonzero mod p")]
    ZeroI,
    #[error("q = {0} must be an odd prime power")]
    NotOddPrimePower(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Pp(#[from] PpError),
}

#[derive(Debug, Clone)]
pub struct TrinomialCase {
    pub q: u64,
    pub parity: Parity,
    /// The coefficient in `F_{q^2}`.
    pub t: Felt,
    /// The same coefficient in the `F_q` context.
    pub t_base: Felt,
    pub f: PolyFq,
    pub predicted: bool,
    pub observed: Option<PPVerdict>,
}

impl TrinomialCase {
    pub fn mismatch(&self) -> bool {
        self.observed
            .as_ref()
            .is_some_and(|v| v.is_pp != self.predicted)
    }
}

fn check_t(qe: &QuadraticExtension, t: Felt) -> Result<Felt, TrinomialError> {
    let ext = qe.ext();
    if !ext.contains(t) {
        return Err(FieldError::ContextMismatch.into());
    }
    if t.is_zero() {
        return Err(TrinomialError::ZeroT);
    }
    // membership via the Frobenius fixed points, not the embedding tables
    if ext.frobenius(t, qe.q())? != t {
        return Err(TrinomialError::TNotInBaseField);
    }
    Ok(qe.restrict(t).expect("fixed points of x^q form F_q"))
}

/// `-x + t x^q + x^{2q-1}` for odd `q`, `x + t x^q + x^{2q-1}` for even `q`.
pub fn build_trinomial(qe: &QuadraticExtension, t: Felt) -> Result<PolyFq, TrinomialError> {
    if qe.q() <= 2 {
        return Err(TrinomialError::QTooSmall);
    }
    check_t(qe, t)?;
    let ext = qe.ext();
    let q = qe.q() as usize;
    let lin = match Parity::of(qe) {
        Parity::Odd => ext.from_int(-1),
        Parity::Even => ext.one(),
    };
    Ok(
        PolyFq::from_terms(ext, &[(1, lin), (q, t), (2 * q - 1, ext.one())])
            .map_err(PpError::from)?,
    )
}

/// The closed-form permutation criterion.
pub fn predict_pp(qe: &QuadraticExtension, t: Felt) -> Result<bool, TrinomialError> {
    let tb = check_t(qe, t)?;
    let base = qe.base();
    Ok(match Parity::of(qe) {
        Parity::Odd => qe.q() % 8 == 1 && base.mul(tb, tb) == base.from_int(-2),
        Parity::Even => base.trace(base.inv(tb)?, 2)?.is_zero(),
    })
}

/// Prediction and brute force for a single `t ∈ F_q^*` (given in `F_{q^2}`).
pub fn evaluate_case(qe: &QuadraticExtension, t: Felt) -> Result<TrinomialCase, TrinomialError> {
    let f = build_trinomial(qe, t)?;
    let predicted = predict_pp(qe, t)?;
    let observed = pp::is_permutation_bruteforce(qe.ext(), &f)?;
    Ok(TrinomialCase {
        q: qe.q(),
        parity: Parity::of(qe),
        t,
        t_base: qe.restrict(t).expect("checked"),
        f,
        predicted,
        observed: Some(observed),
    })
}

/// Every `t ∈ F_q^*`, in base-field enumeration order.
pub fn cross_validate(qe: &QuadraticExtension) -> Result<Vec<TrinomialCase>, TrinomialError> {
    if qe.q() <= 2 {
        return Err(TrinomialError::QTooSmall);
    }
    let ts: Vec<Felt> = qe.base_units().collect();
    ts.into_par_iter().map(|t| evaluate_case(qe, t)).collect()
}

/// Whether `(q^{2i+1} - q - 1, 2; q)` is desirable, by the arithmetic criterion:
/// `p ≡ 1, 3 (mod 8)`, `q ≡ 1 (mod 8)` and `i² = -1/2` in `F_p`.
pub fn desirable_triple_check(q: u64, i: u64) -> Result<bool, TrinomialError> {
    let (p, _) = prime_power(q).ok_or(TrinomialError::NotOddPrimePower(q))?;
    if p == 2 {
        return Err(TrinomialError::NotOddPrimePower(q));
    }
    if i.is_multiple_of(p) {
        return Err(TrinomialError::ZeroI);
    }
    let fp = FieldCtx::with_cap(p, 1, u64::MAX)?;
    let iv = fp.from_int((i % p) as i64);
    let minus_half = fp.neg(fp.inv(fp.from_int(2))?);
    Ok(matches!(p % 8, 1 | 3) && q % 8 == 1 && fp.mul(iv, iv) == minus_half)
}

/// The same question through the trinomial criterion: rescaling
/// `ix - x^q - ix^{2q-1}` gives `-x + (1/i) x^q + x^{2q-1}`.
pub fn desirable_triple_via_trinomial(
    qe: &QuadraticExtension,
    i: u64,
) -> Result<bool, TrinomialError> {
    let ext = qe.ext();
    let p = ext.characteristic();
    if p == 2 {
        return Err(TrinomialError::NotOddPrimePower(qe.q()));
    }
    if i.is_multiple_of(p) {
        return Err(TrinomialError::ZeroI);
    }
    let t = ext.inv(ext.from_int((i % p) as i64))?;
    predict_pp(qe, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_both_parities() {
        let qe3 = QuadraticExtension::new(3).unwrap();
        let f = build_trinomial(&qe3, qe3.ext().one()).unwrap();
        let e3 = qe3.ext();
        assert_eq!(
            f.terms().collect::<Vec<_>>(),
            vec![(1, e3.from_int(-1)), (3, e3.one()), (5, e3.one())]
        );
        let qe4 = QuadraticExtension::new(4).unwrap();
        let e4 = qe4.ext();
        let f = build_trinomial(&qe4, e4.one()).unwrap();
        assert_eq!(
            f.terms().collect::<Vec<_>>(),
            vec![(1, e4.one()), (4, e4.one()), (7, e4.one())]
        );
        let qe2 = QuadraticExtension::new(2).unwrap();
        assert_eq!(
            build_trinomial(&qe2, qe2.ext().one()).unwrap_err(),
            TrinomialError::QTooSmall
        );
    }

    #[test]
    fn rejects_bad_t() {
        let qe = QuadraticExtension::new(5).unwrap();
        let ext = qe.ext();
        assert_eq!(
            build_trinomial(&qe, ext.zero()).unwrap_err(),
            TrinomialError::ZeroT
        );
        let outside = ext.elements().find(|&x| !qe.in_base(x)).unwrap();
        assert_eq!(
            predict_pp(&qe, outside).unwrap_err(),
            TrinomialError::TNotInBaseField
        );
    }

    #[test]
    fn predictions() {
        let qe17 = QuadraticExtension::new(17).unwrap();
        assert!(predict_pp(&qe17, qe17.ext().from_int(7)).unwrap());
        let qe13 = QuadraticExtension::new(13).unwrap();
        assert!(qe13.base_units().all(|t| !predict_pp(&qe13, t).unwrap()));
        let qe4 = QuadraticExtension::new(4).unwrap();
        assert!(predict_pp(&qe4, qe4.ext().one()).unwrap());
    }

    #[test]
    fn cross_validate_small_fields() {
        let qe5 = QuadraticExtension::new(5).unwrap();
        let cases = cross_validate(&qe5).unwrap();
        assert_eq!(cases.len(), 4);
        assert!(cases
            .iter()
            .all(|c| !c.predicted && !c.observed.as_ref().unwrap().is_pp));

        let qe9 = QuadraticExtension::new(9).unwrap();
        let cases = cross_validate(&qe9).unwrap();
        let b = qe9.base();
        let pp: Vec<Felt> = cases
            .iter()
            .filter(|c| c.observed.as_ref().unwrap().is_pp)
            .map(|c| c.t_base)
            .collect();
        assert_eq!(pp, vec![b.from_int(1), b.from_int(2)]);
        assert!(cases.iter().all(|c| !c.mismatch()));

        let qe4 = QuadraticExtension::new(4).unwrap();
        let cases = cross_validate(&qe4).unwrap();
        let b4 = qe4.base();
        let flags: Vec<(Felt, bool)> = cases.iter().map(|c| (c.t_base, c.predicted)).collect();
        assert_eq!(
            flags,
            vec![
                (b4.one(), true),
                (b4.from_coeffs(&[0, 1]).unwrap(), false),
                (b4.from_coeffs(&[1, 1]).unwrap(), false)
            ]
        );
        assert!(cases.iter().all(|c| !c.mismatch()));
    }

    #[test]
    fn desirable_triple_examples() {
        assert!(desirable_triple_check(9, 1).unwrap());
        assert!(desirable_triple_check(17, 5).unwrap());
        for i in 1..5 {
            assert!(!desirable_triple_check(25, i).unwrap());
        }
        assert_eq!(
            desirable_triple_check(9, 3).unwrap_err(),
            TrinomialError::ZeroI
        );
        assert!(desirable_triple_check(8, 1).is_err());
    }

    #[test]
    fn desirable_triple_agrees_with_trinomial_route() {
        for q in [9u64, 17, 25, 27, 41] {
            let qe = QuadraticExtension::new(q).unwrap();
            let p = qe.ext().characteristic();
            for i in 1..p {
                assert_eq!(
                    desirable_triple_check(q, i).unwrap(),
                    desirable_triple_via_trinomial(&qe, i).unwrap(),
                    "q={q}, i={i}"
                );
            }
        }
    }
}
