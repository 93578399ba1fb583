//! Exact arithmetic at a quadratic irrationality such as `a = √2`.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Reduces `p` modulo the monic quadratic `m`, returning `(c₀, c₁)` with
/// `p ≡ c₀ + c₁·a (mod m)`.
pub fn eval_mod_quadratic(p: &Poly, m: &Poly) -> Result<(BigRational, BigRational)> {
    if m.degree() != Some(2) || !m.leading().is_some_and(One::is_one) {
        return Err(Error::NonQuadraticModulus);
    }
    let (_, r) = p.divrem(m)?;
    Ok((r.coeff(0), r.coeff(1)))
}

/// Sign of `c₀ + c₁·√d` for a positive rational `d`, decided exactly.
pub fn sign_at_sqrt(c0: &BigRational, c1: &BigRational, d: &BigRational) -> Ordering {
    let s0 = c0.cmp(&BigRational::zero());
    let s1 = c1.cmp(&BigRational::zero());
    if s1 == Ordering::Equal || s0 == s1 {
        return if s0 == Ordering::Equal { s1 } else { s0 };
    }
    if s0 == Ordering::Equal {
        return s1;
    }
    // opposite signs: the larger square wins
    let lhs = c0 * c0;
    let rhs = c1 * c1 * d;
    match lhs.cmp(&rhs) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => s0,
        Ordering::Less => s1,
    }
}

/// Sign of `p(√d)` for `d > 0`.
pub fn sign_of_poly_at_sqrt(p: &Poly, d: &BigRational) -> Ordering {
    debug_assert!(d.is_positive());
    let m = Poly::new(vec![-d.clone(), BigRational::zero(), BigRational::one()]);
    let (c0, c1) = eval_mod_quadratic(p, &m).expect("monic quadratic");
    sign_at_sqrt(&c0, &c1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn sqrt2_mod() -> Poly {
        p(&[-2, 0, 1])
    }

    #[test]
    fn cube_reduces_to_two_a() {
        assert_eq!(
            eval_mod_quadratic(&p(&[0, 0, 0, 1]), &sqrt2_mod()).unwrap(),
            (int(0), int(2))
        );
    }

    #[test]
    fn multiple_of_modulus_vanishes() {
        // 2a(a² - 2)
        let q = &p(&[0, 2]) * &sqrt2_mod();
        assert_eq!(
            eval_mod_quadratic(&q, &sqrt2_mod()).unwrap(),
            (int(0), int(0))
        );
    }

    #[test]
    fn constant_survives() {
        assert_eq!(
            eval_mod_quadratic(&p(&[-1, 0, 1]), &sqrt2_mod()).unwrap(),
            (int(1), int(0))
        );
    }

    #[test]
    fn modulus_must_be_monic_quadratic() {
        assert_eq!(
            eval_mod_quadratic(&p(&[1]), &p(&[-2, 0, 2])),
            Err(Error::NonQuadraticModulus)
        );
        assert_eq!(
            eval_mod_quadratic(&p(&[1]), &p(&[1, 1])),
            Err(Error::NonQuadraticModulus)
        );
    }

    #[test]
    fn signs_at_root_two() {
        let d = int(2);
        // 3 - 2√2 > 0, 1 - √2 < 0, 4 - 2√2·√2... i.e. 2 - √2·√2 = 0 handled by reduction
        assert_eq!(sign_at_sqrt(&int(3), &int(-2), &d), Ordering::Greater);
        assert_eq!(sign_at_sqrt(&int(1), &int(-1), &d), Ordering::Less);
        assert_eq!(sign_at_sqrt(&int(-3), &int(2), &d), Ordering::Less);
        assert_eq!(sign_at_sqrt(&int(0), &int(0), &d), Ordering::Equal);
        assert_eq!(sign_at_sqrt(&int(0), &int(-5), &d), Ordering::Less);
        assert_eq!(sign_of_poly_at_sqrt(&p(&[-2, 0, 1]), &d), Ordering::Equal);
        assert_eq!(sign_of_poly_at_sqrt(&p(&[-1, 0, 1]), &d), Ordering::Greater);
    }
}
