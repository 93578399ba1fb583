//! Polynomials in `x` whose coefficients are integer polynomials in a
//! parameter `a`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::poly::Poly;

/// `Σ c[i][j]·xⁱ·aʲ` over ℤ.
///
/// Both the outer (`x`) and every inner (`a`) vector are trimmed of trailing
/// zeros, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivarPoly {
    coeffs: Vec<Vec<BigInt>>,
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn upoly_add_into(acc: &mut Vec<BigInt>, p: &[BigInt], scale: &BigInt) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (a, c) in acc.iter_mut().zip(p) {
        if !c.is_zero() {
            *a += c * scale;
        }
    }
}

fn upoly_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += a * b;
            }
        }
    }
    trim(&mut out);
    out
}

/// `p / q` in ℤ[a] when the division is exact.
fn upoly_exact_div(p: &[BigInt], q: &[BigInt]) -> Option<Vec<BigInt>> {
    let dq = q.len().checked_sub(1)?;
    if p.is_empty() {
        return Some(Vec::new());
    }
    if p.len() < q.len() {
        return None;
    }
    let lead = &q[dq];
    let mut rem = p.to_vec();
    let mut quot = vec![BigInt::zero(); p.len() - dq];
    for k in (0..quot.len()).rev() {
        let (c, r) = rem[k + dq].div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, qc) in q.iter().enumerate() {
            rem[k + j] -= &c * qc;
        }
        quot[k] = c;
    }
    rem.iter().all(Zero::is_zero).then(|| {
        trim(&mut quot);
        quot
    })
}

fn upoly_eval(p: &[BigInt], a: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * a + BigRational::from_integer(c.clone())
    })
}

impl BivarPoly {
    /// From `c[i][j]`, the coefficient of `xⁱaʲ`.
    pub fn new(mut coeffs: Vec<Vec<BigInt>>) -> Self {
        coeffs.iter_mut().for_each(trim);
        while coeffs.last().is_some_and(Vec::is_empty) {
            coeffs.pop();
        }
        BivarPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[&[i64]]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|row| row.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
        )
    }

    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[&[1]])
    }

    pub fn x() -> Self {
        Self::from_i64(&[&[], &[1]])
    }

    pub fn a() -> Self {
        Self::from_i64(&[&[0, 1]])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn raw(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_a(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .filter_map(|c| c.len().checked_sub(1))
            .max()
    }

    /// Number of nonzero integer coefficients.
    pub fn terms(&self) -> usize {
        self.coeffs
            .iter()
            .map(|c| c.iter().filter(|v| !v.is_zero()).count())
            .sum()
    }

    /// Coefficient of `xᵏ` as a polynomial in `a`.
    pub fn x_coeff(&self, k: usize) -> Poly {
        match self.coeffs.get(k) {
            None => Poly::zero(),
            Some(c) => Poly::new(
                c.iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect(),
            ),
        }
    }

    pub fn x_coeffs(&self) -> Vec<Poly> {
        (0..self.coeffs.len()).map(|k| self.x_coeff(k)).collect()
    }

    /// Polynomial in `x` obtained by fixing `a`.
    pub fn at_a(&self, a: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| upoly_eval(c, a)).collect())
    }

    /// Polynomial in `a` obtained by fixing `x`.
    pub fn at_x(&self, x: &BigRational) -> Poly {
        let mut acc = Poly::zero();
        for k in (0..self.coeffs.len()).rev() {
            acc = &acc.scale(x) + &self.x_coeff(k);
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> BivarPoly {
        if c.is_zero() {
            return BivarPoly::zero();
        }
        BivarPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|v| v * c).collect())
                .collect(),
        }
    }

    /// Positive gcd of all integer coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for v in self.coeffs.iter().flatten() {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content.
    pub fn primitive(&self) -> (BigInt, BivarPoly) {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return (g.max(BigInt::one()), self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|v| v / &g).collect())
            .collect();
        (g, BivarPoly { coeffs })
    }

    /// `D(P) = P'P + xP''P − x(P')²` with derivatives in `x`, computed as
    /// `Σ_{i<j} (j−i)²·pᵢ·pⱼ·x^{i+j−1}`.
    pub fn d_op(&self) -> BivarPoly {
        let n = self.coeffs.len();
        if n < 2 {
            return BivarPoly::zero();
        }
        let mut out = vec![Vec::new(); 2 * n - 3];
        for i in 0..n {
            if self.coeffs[i].is_empty() {
                continue;
            }
            for j in i + 1..n {
                if self.coeffs[j].is_empty() {
                    continue;
                }
                let w = BigInt::from((j - i) * (j - i));
                let prod = upoly_mul(&self.coeffs[i], &self.coeffs[j]);
                upoly_add_into(&mut out[i + j - 1], &prod, &w);
            }
        }
        BivarPoly::new(out)
    }

    /// `self / divisor` when the quotient lies in ℤ[a][x].
    pub fn exact_div(&self, divisor: &BivarPoly) -> Option<BivarPoly> {
        let d = divisor.degree_x()?;
        if self.is_zero() {
            return Some(BivarPoly::zero());
        }
        let n = self.degree_x().unwrap();
        if n < d {
            return None;
        }
        let lead = &divisor.coeffs[d];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Vec::new(); n - d + 1];
        let minus_one = -BigInt::one();
        for k in (0..=n - d).rev() {
            if rem[k + d].is_empty() {
                continue;
            }
            let c = upoly_exact_div(&rem[k + d], lead)?;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_empty() {
                    upoly_add_into(&mut rem[k + j], &upoly_mul(&c, dc), &minus_one);
                    trim(&mut rem[k + j]);
                }
            }
            quot[k] = c;
        }
        rem.iter().all(Vec::is_empty).then(|| BivarPoly::new(quot))
    }

    pub fn pow(&self, e: u32) -> BivarPoly {
        (0..e).fold(BivarPoly::one(), |acc, _| &acc * self)
    }

    /// Embeds a univariate polynomial in `x` with integer coefficients.
    pub fn from_x_poly(p: &Poly) -> Option<BivarPoly> {
        let rows = p
            .coeffs()
            .iter()
            .map(|c| c.is_integer().then(|| vec![c.to_integer()]))
            .collect::<Option<Vec<_>>>()?;
        Some(BivarPoly::new(rows))
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.coeffs.clone();
        if out.len() < rhs.coeffs.len() {
            out.resize(rhs.coeffs.len(), Vec::new());
        }
        let one = BigInt::one();
        for (o, r) in out.iter_mut().zip(&rhs.coeffs) {
            upoly_add_into(o, r, &one);
        }
        BivarPoly::new(out)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        self.scale(&-BigInt::one())
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self + &(-rhs)
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        if self.is_zero() || rhs.is_zero() {
            return BivarPoly::zero();
        }
        let mut out = vec![Vec::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        let one = BigInt::one();
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            for (j, q) in rhs.coeffs.iter().enumerate() {
                if !q.is_empty() {
                    upoly_add_into(&mut out[i + j], &upoly_mul(p, q), &one);
                }
            }
        }
        BivarPoly::new(out)
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let inner = format!(
                "{}",
                Poly::new(
                    row.iter()
                        .map(|v| BigRational::from_integer(v.clone()))
                        .collect()
                )
            )
            .replace('x', "a");
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({inner})")?,
                1 => write!(f, "({inner})x")?,
                _ => write!(f, "({inner})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({self})")
    }
}

/// JSON: an array indexed by the power of `x`, each entry an array of
/// decimal strings indexed by the power of `a`.
impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn family_p() -> BivarPoly {
        // 1 + a·x + x²
        BivarPoly::from_i64(&[&[1], &[0, 1], &[1]])
    }

    #[test]
    fn d_op_of_family_is_a_plus_4x_plus_ax2() {
        let expect = BivarPoly::from_i64(&[&[0, 1], &[4], &[0, 1]]);
        assert_eq!(family_p().d_op(), expect);
    }

    #[test]
    fn d_op_matches_univariate_after_specialization() {
        let p = &family_p().pow(3) - &BivarPoly::a().scale(&BigInt::from(2));
        for a in [int(0), ratio(3, 2), int(-5)] {
            assert_eq!(p.d_op().at_a(&a), p.at_a(&a).d_op());
        }
    }

    #[test]
    fn exact_division_round_trip() {
        let p = family_p();
        let q = &BivarPoly::x() + &BivarPoly::a();
        let prod = &p * &q;
        assert_eq!(prod.exact_div(&q), Some(p.clone()));
        assert_eq!(prod.exact_div(&p), Some(q.clone()));
        assert_eq!(p.exact_div(&q), None);
        // quotient coefficient not integral in a
        let two_x = BivarPoly::from_i64(&[&[], &[2]]);
        assert_eq!(BivarPoly::x().exact_div(&two_x), None);
    }

    #[test]
    fn content_and_primitive() {
        let p = BivarPoly::from_i64(&[&[4, 8], &[], &[-12]]);
        let (c, q) = p.primitive();
        assert_eq!(c, BigInt::from(4));
        assert_eq!(q, BivarPoly::from_i64(&[&[1, 2], &[], &[-3]]));
    }

    #[test]
    fn specialization_in_both_variables() {
        let p = family_p();
        assert_eq!(p.at_a(&int(2)), Poly::from_ints(&[1, 2, 1]));
        assert_eq!(p.at_x(&int(1)), Poly::from_ints(&[2, 1]));
        assert_eq!(p.x_coeff(1), Poly::from_ints(&[0, 1]));
        assert_eq!(p.terms(), 3);
        assert_eq!((p.degree_x(), p.degree_a()), (Some(2), Some(1)));
    }

    #[test]
    fn display_and_json() {
        assert_eq!(family_p().to_string(), "(1) + (a)x + (1)x^2");
        assert_eq!(
            serde_json::to_string(&family_p()).unwrap(),
            r#"[["1"],["0","1"],["1"]]"#
        );
    }

    fn small_bivar() -> impl Strategy<Value = BivarPoly> {
        prop::collection::vec(prop::collection::vec(-5i64..6, 0..4), 1..4).prop_map(|rows| {
            BivarPoly::new(
                rows.into_iter()
                    .map(|r| r.into_iter().map(BigInt::from).collect())
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_ops_commute_with_specialization(p in small_bivar(), q in small_bivar(), n in -6i64..7, d in 1i64..5) {
            let a = ratio(n, d);
            prop_assert_eq!((&p * &q).at_a(&a), &p.at_a(&a) * &q.at_a(&a));
            prop_assert_eq!((&p - &q).at_a(&a), &p.at_a(&a) - &q.at_a(&a));
            prop_assert_eq!(p.d_op().at_a(&a), p.at_a(&a).d_op());
        }

        #[test]
        fn product_divides_exactly(p in small_bivar(), q in small_bivar()) {
            prop_assume!(!q.is_zero());
            prop_assert_eq!((&p * &q).exact_div(&q), Some(p));
        }
    }
}
