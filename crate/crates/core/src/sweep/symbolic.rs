//! Ricci iterates of the family `log(1 + a·x + x²)` with `a` kept symbolic.
//!
//! A density is held as `scale · num / ∏ fᵢ^eᵢ`. Since
//! `w = −2(x·(log v)')'` and `(x·(log f)')' = D(f)/f²`, the Ricci density is
//! `−2·D(num)/num² + Σ 2eᵢ·D(fᵢ)/fᵢ²`, whose denominator `num²·∏ fᵢ²` is known
//! in factored form. Common factors are removed by trial exact division by
//! those factors, and integer content by a gcd.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::radial::RadialDensity;
use crate::sweep::bivar::BivarPoly;

/// Largest supported iteration depth.
pub const MAX_DEPTH: usize = 4;

/// Default cap on the estimated coefficient count of one Ricci step.
pub const DEFAULT_SIZE_LIMIT: usize = 200_000;

/// `scale · num / ∏ fᵢ^eᵢ` with `num` primitive over ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredDensity {
    pub scale: BigInt,
    pub num: BivarPoly,
    pub factors: Vec<(BivarPoly, u32)>,
}

fn family_p() -> BivarPoly {
    BivarPoly::from_i64(&[&[1], &[0, 1], &[1]])
}

impl FactoredDensity {
    /// Density `D(P)/P²` of `log P` for `P = 1 + a·x + x²`.
    pub fn family() -> Self {
        let p = family_p();
        let (scale, num) = p.d_op().primitive();
        FactoredDensity {
            scale,
            num,
            factors: vec![(p, 2)],
        }
    }

    /// `scale · num`, expanded.
    pub fn numerator(&self) -> BivarPoly {
        self.num.scale(&self.scale)
    }

    /// `∏ fᵢ^eᵢ`, expanded.
    pub fn denominator(&self) -> BivarPoly {
        self.factors
            .iter()
            .fold(BivarPoly::one(), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn den_degree_x(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, e)| f.degree_x().unwrap_or(0) * *e as usize)
            .sum()
    }

    fn den_degree_a(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, e)| f.degree_a().unwrap_or(0) * *e as usize)
            .sum()
    }

    /// The density at a rational parameter value, reduced.
    pub fn at(&self, a: &BigRational) -> Result<RadialDensity> {
        let num = self.numerator().at_a(a);
        let den = self.denominator().at_a(a);
        RadialDensity::from_parts(num, den)
    }

    /// Estimated coefficient count of the next Ricci numerator.
    fn next_size_estimate(&self) -> usize {
        let dx = 2 * self.num.degree_x().unwrap_or(0) + 2 * self.den_degree_x();
        let da = 2 * self.num.degree_a().unwrap_or(0) + 2 * self.den_degree_a();
        (dx + 1).saturating_mul(da + 1)
    }

    /// The Ricci density, or `None` when it vanishes identically.
    pub fn ricci(&self, size_limit: usize) -> Result<Option<FactoredDensity>> {
        let size = self.next_size_estimate();
        if size > size_limit {
            return Err(Error::SizeLimit {
                size,
                limit: size_limit,
            });
        }
        let active: Vec<&(BivarPoly, u32)> = self.factors.iter().filter(|(_, e)| *e > 0).collect();
        let squares: Vec<BivarPoly> = active.iter().map(|(f, _)| f.pow(2)).collect();
        let num_sq = self.num.pow(2);
        let all_squares = squares.iter().fold(BivarPoly::one(), |acc, s| &acc * s);
        let mut total = (&self.num.d_op() * &all_squares).scale(&BigInt::from(-2));
        for (i, (f, e)) in active.iter().enumerate() {
            let others = squares
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(num_sq.clone(), |acc, (_, s)| &acc * s);
            total = &total + &(&f.d_op() * &others).scale(&BigInt::from(2 * e));
        }
        if total.is_zero() {
            return Ok(None);
        }
        let mut factors = vec![(self.num.clone(), 2)];
        factors.extend(active.iter().map(|(f, _)| (f.clone(), 2)));
        for (f, e) in factors.iter_mut() {
            if f.degree_x().unwrap_or(0) == 0 {
                continue;
            }
            while *e > 0 {
                match total.exact_div(f) {
                    Some(q) => {
                        total = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        factors.retain(|(_, e)| *e > 0);
        let (scale, num) = total.primitive();
        Ok(Some(FactoredDensity {
            scale,
            num,
            factors,
        }))
    }
}

/// Degrees of one iterate, before and after reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub k: usize,
    pub num_deg_x: usize,
    pub den_deg_x: usize,
    pub num_deg_a: usize,
    pub den_deg_a: usize,
    /// `deg_x` of `(A·B)²` for the previous iterate `A/B`: the denominator of
    /// the Ricci formula before any cancellation.
    pub unreduced_den_deg_x: usize,
    pub unreduced_num_deg_x: usize,
    pub terms: usize,
}

/// One symbolic iterate, in factored and expanded form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicStep {
    pub k: usize,
    pub numerator: BivarPoly,
    pub denominator: BivarPoly,
    pub degrees: DegreeRow,
    #[serde(skip)]
    pub factored: FactoredDensity,
}

/// Iterates `1..=k` of the Ricci map on the family's density.
pub fn symbolic_iterate(k: usize, size_limit: usize) -> Result<Vec<SymbolicStep>> {
    if k == 0 || k > MAX_DEPTH {
        return Err(Error::DepthOutOfRange(k));
    }
    let mut current = FactoredDensity::family();
    let mut steps = Vec::with_capacity(k);
    for j in 1..=k {
        let prev_num = current.num.degree_x().unwrap_or(0);
        let prev_den = current.den_degree_x();
        let next = current.ricci(size_limit)?.ok_or(Error::NotAMetric)?;
        let numerator = next.numerator();
        let denominator = next.denominator();
        let degrees = DegreeRow {
            k: j,
            num_deg_x: numerator.degree_x().unwrap_or(0),
            den_deg_x: denominator.degree_x().unwrap_or(0),
            num_deg_a: numerator.degree_a().unwrap_or(0),
            den_deg_a: denominator.degree_a().unwrap_or(0),
            unreduced_den_deg_x: 2 * (prev_num + prev_den),
            unreduced_num_deg_x: 2 * (prev_num + prev_den) - 2,
            terms: numerator.terms() + denominator.terms(),
        };
        steps.push(SymbolicStep {
            k: j,
            numerator,
            denominator,
            degrees,
            factored: next.clone(),
        });
        current = next;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{hessian_density, ricci, RadialLogPotential};
    use crate::rational::{int, ratio};

    fn a_poly() -> BivarPoly {
        // a + 4x + a·x²
        BivarPoly::from_i64(&[&[0, 1], &[4], &[0, 1]])
    }

    #[test]
    fn first_iterate_closed_form() {
        let step = &symbolic_iterate(1, DEFAULT_SIZE_LIMIT).unwrap()[0];
        let (a, p) = (a_poly(), family_p());
        let bracket = &a.pow(3).scale(&BigInt::from(2))
            - &(&BivarPoly::a() * &p.pow(3)).scale(&BigInt::from(4));
        assert_eq!(step.numerator, bracket.scale(&BigInt::from(2)));
        assert_eq!(step.denominator, &a.pow(2) * &p.pow(2));
        assert_eq!((step.degrees.num_deg_x, step.degrees.den_deg_x), (6, 8));
    }

    #[test]
    fn second_iterate_degrees() {
        let steps = symbolic_iterate(2, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(
            (steps[1].degrees.num_deg_x, steps[1].degrees.den_deg_x),
            (18, 20)
        );
        assert!(steps[1].degrees.unreduced_den_deg_x > 20);
    }

    #[test]
    fn degree_growth_within_composition_bound() {
        let steps = symbolic_iterate(3, DEFAULT_SIZE_LIMIT).unwrap();
        let mut prev = (2, 4);
        for s in &steps {
            let d = &s.degrees;
            assert!(
                d.num_deg_x <= 3 * prev.0 + 2 && d.den_deg_x <= 3 * prev.1 + 2,
                "{d:?}"
            );
            assert_eq!(d.den_deg_x, d.num_deg_x + 2);
            prev = (d.num_deg_x, d.den_deg_x);
        }
    }

    #[test]
    fn fixed_point_at_two() {
        let steps = symbolic_iterate(2, DEFAULT_SIZE_LIMIT).unwrap();
        for s in &steps {
            let v = s.factored.at(&int(2)).unwrap();
            assert_eq!(v, RadialDensity::fubini_study(4));
        }
    }

    #[test]
    fn specialization_commutes_with_ricci() {
        let steps = symbolic_iterate(2, DEFAULT_SIZE_LIMIT).unwrap();
        for a in [ratio(3, 2), ratio(7, 4), ratio(13, 9), int(1), int(3)] {
            let mut v = hessian_density(&RadialLogPotential::family(&a)).unwrap();
            for s in &steps {
                v = ricci(&v).unwrap();
                assert_eq!(s.factored.at(&a).unwrap(), v, "a = {a}, k = {}", s.k);
            }
        }
    }

    #[test]
    fn depth_and_size_guards() {
        assert_eq!(
            symbolic_iterate(0, DEFAULT_SIZE_LIMIT),
            Err(Error::DepthOutOfRange(0))
        );
        assert_eq!(
            symbolic_iterate(5, DEFAULT_SIZE_LIMIT),
            Err(Error::DepthOutOfRange(5))
        );
        assert!(matches!(
            symbolic_iterate(3, 500),
            Err(Error::SizeLimit { limit: 500, .. })
        ));
    }
}
