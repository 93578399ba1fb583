//! Projective inducedness of radial metrics, Ricci potentials and Bochner
//! coordinates.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::radial::{hessian_density, RadialLogPotential};
use crate::ratfunc::RatFunc;
use crate::rational::{format_rational, int, serde_rational, serde_rational_vec};

/// Coefficients `a_j = |α_j|²` of a monomial map
/// `[z₀:z₁] ↦ [α₀z₀ⁿ : α₁z₁z₀ⁿ⁻¹ : … : αₙz₁ⁿ]` into CPⁿ, normalized to
/// `a₀ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingData {
    pub n: usize,
    #[serde(with = "serde_rational_vec")]
    pub a: Vec<BigRational>,
    /// Every `a_j > 0`, i.e. the map is full.
    pub full: bool,
}

impl EmbeddingData {
    pub fn polynomial(&self) -> Poly {
        Poly::new(self.a.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Inducedness {
    Induced(EmbeddingData),
    /// `f/h` does not reduce to a polynomial.
    NotPolynomial,
    /// `f/h = Q` with `Q`'s coefficient of `x^j` negative.
    NegativeCoefficient {
        j: usize,
    },
    /// `f/h` is constant: the potential carries no metric.
    Constant,
}

impl Inducedness {
    pub fn embedding(&self) -> Option<&EmbeddingData> {
        match self {
            Inducedness::Induced(e) => Some(e),
            _ => None,
        }
    }
}

/// Decides whether the radial metric with potential `log(f/h)` is induced by
/// a monomial holomorphic map into a finite-dimensional projective space.
///
/// Necessity: a projectively induced potential equals `log Σ|φ_j|²` up to
/// a pluriharmonic term, which for radial potentials normalized at the origin
/// forces `f/h` to be a polynomial `Q`. Sufficiency: a polynomial with
/// nonnegative coefficients and `Q(0) = 1` is `Σ a_j |z|^{2j}`, realized by the
/// monomial map with `|α_j|² = a_j`.
pub fn is_projectively_induced_radial(pot: &RadialLogPotential) -> Inducedness {
    let q = RatFunc::new(pot.f().clone(), pot.h().clone()).expect("h nonzero");
    if !q.den().is_constant() {
        return Inducedness::NotPolynomial;
    }
    let poly = q.num().scale(&q.den().coeff(0).recip());
    if poly.is_constant() {
        return Inducedness::Constant;
    }
    if let Some(j) = poly.coeffs().iter().position(|c| c.is_negative()) {
        return Inducedness::NegativeCoefficient { j };
    }
    let a = poly.coeffs().to_vec();
    Inducedness::Induced(EmbeddingData {
        n: a.len() - 1,
        full: a.iter().all(|c| c.is_positive()),
        a,
    })
}

/// `Q = (1 + s·x)ⁿ` with `s > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialMatch {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub scale: BigRational,
}

/// Detects `Q = (1 + s·x)ⁿ`, i.e. `log Q` is `n·ω_FS` in the coordinate
/// `√s·z`. `s = 1` is the untwisted multiple `n·g_FS`.
pub fn binomial_test(q: &Poly) -> Result<Option<BinomialMatch>> {
    if q.coeff(0) != BigRational::one() {
        return Err(Error::Unnormalized);
    }
    let Some(n) = q.degree().filter(|&n| n > 0) else {
        return Ok(None);
    };
    let s = q.coeff(1) / int(n as i64);
    if !s.is_positive() {
        return Ok(None);
    }
    let candidate = Poly::new(vec![BigRational::one(), s.clone()]).pow(n as u32);
    Ok((&candidate == q).then_some(BinomialMatch { n, scale: s }))
}

/// A potential whose form is the Ricci form of `pot`'s form, normalized to
/// diastasis type at the origin.
///
/// With `v = A/B` the Ricci form is `(i/2)∂∂̄ log(B²/A²)`; the constants are
/// fixed by `f̃(0) = h̃(0) = 1`.
pub fn ricci_potential(pot: &RadialLogPotential) -> Result<RadialLogPotential> {
    let v = hessian_density(pot)?;
    let (a, b) = (v.num(), v.den());
    let (a0, b0) = (a.coeff(0), b.coeff(0));
    if a0.is_zero() || b0.is_zero() {
        return Err(Error::NonPositiveAtOrigin);
    }
    // w(0) = −2·(A'(0)/A(0) − B'(0)/B(0)) since D(P)(0) = P'(0)·P(0)
    let w0 = (b.coeff(1) / &b0 - a.coeff(1) / &a0) * int(2);
    if !w0.is_positive() {
        return Err(Error::NonPositiveAtOrigin);
    }
    let f = b.scale(&b0.recip()).pow(2);
    let h = a.scale(&a0.recip()).pow(2);
    // A and B are coprime, hence so are their squares
    Ok(RadialLogPotential::from_coprime(f, h))
}

/// The homothety `w = √c·z` to Bochner coordinates of a radial potential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BochnerScale {
    #[serde(with = "serde_rational")]
    pub c: BigRational,
    pub normalized_potential: RadialLogPotential,
}

/// For a radial diastasis `φ(x) = c·x + O(x²)` the Bochner coordinate is
/// `w = √c·z`, and the potential in that coordinate is `φ(x/c)`.
pub fn bochner_scale(pot: &RadialLogPotential) -> Result<BochnerScale> {
    let c = pot.f().coeff(1) - pot.h().coeff(1);
    if !c.is_positive() {
        return Err(Error::NonPositiveMetricAtOrigin(format_rational(&c)));
    }
    let inv = c.recip();
    let zero = BigRational::zero();
    let normalized_potential = RadialLogPotential::new(
        pot.f().compose_linear(&inv, &zero),
        pot.h().compose_linear(&inv, &zero),
    )?;
    Ok(BochnerScale {
        c,
        normalized_potential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{hessian_density, ricci, RadialDensity};
    use crate::rational::ratio;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn log_poly(c: &[i64]) -> RadialLogPotential {
        RadialLogPotential::log_poly(p(c)).unwrap()
    }

    #[test]
    fn binomial_power_is_induced() {
        let pot = RadialLogPotential::log_poly(p(&[1, 1]).pow(4)).unwrap();
        let e = is_projectively_induced_radial(&pot);
        let e = e.embedding().unwrap();
        assert_eq!(e.n, 4);
        assert_eq!(e.a, [1, 4, 6, 4, 1].map(int).to_vec());
        assert!(e.full);
    }

    #[test]
    fn ricci_of_generic_member_not_polynomial() {
        let pot = RadialLogPotential::family(&ratio(3, 2));
        let rp = ricci_potential(&pot).unwrap();
        assert_eq!(
            is_projectively_induced_radial(&rp),
            Inducedness::NotPolynomial
        );
        // the half-scale potential log(P²/D) is not polynomial either
        let pa = pot.f().clone();
        let d = pa.d_op();
        let half = RadialLogPotential::normalized(&pa * &pa, d).unwrap();
        assert_eq!(
            is_projectively_induced_radial(&half),
            Inducedness::NotPolynomial
        );
    }

    #[test]
    fn non_full_monomial_embedding() {
        let e = is_projectively_induced_radial(&log_poly(&[1, 0, 0, 1]));
        let e = e.embedding().unwrap();
        assert_eq!(e.a, [1, 0, 0, 1].map(int).to_vec());
        assert!(!e.full);
        assert_eq!(
            serde_json::to_string(e).unwrap(),
            r#"{"n":3,"a":["1","0","0","1"],"full":false}"#
        );
    }

    #[test]
    fn negative_coefficient_and_constant() {
        assert_eq!(
            is_projectively_induced_radial(&log_poly(&[1, -1, 1])),
            Inducedness::NegativeCoefficient { j: 1 }
        );
        assert_eq!(
            is_projectively_induced_radial(&log_poly(&[1])),
            Inducedness::Constant
        );
        let quotient = RadialLogPotential::new(p(&[1, 2, 1]), p(&[1, 1])).unwrap();
        assert!(is_projectively_induced_radial(&quotient)
            .embedding()
            .is_some());
        let hyp = RadialLogPotential::new(Poly::one(), p(&[1, -1])).unwrap();
        assert_eq!(
            is_projectively_induced_radial(&hyp),
            Inducedness::NotPolynomial
        );
    }

    #[test]
    fn binomial_detection() {
        assert_eq!(
            binomial_test(&p(&[1, 3, 3, 1])).unwrap(),
            Some(BinomialMatch {
                n: 3,
                scale: int(1)
            })
        );
        assert_eq!(
            binomial_test(&p(&[1, 2, 1])).unwrap(),
            Some(BinomialMatch {
                n: 2,
                scale: int(1)
            })
        );
        let q = Poly::new(vec![int(1), ratio(3, 2), int(1)]);
        assert_eq!(binomial_test(&q).unwrap(), None);
        assert_eq!(
            binomial_test(&p(&[1, 4, 4])).unwrap(),
            Some(BinomialMatch {
                n: 2,
                scale: int(2)
            })
        );
        assert_eq!(binomial_test(&p(&[1, -2, 1])).unwrap(), None);
        assert_eq!(binomial_test(&p(&[2, 1])), Err(Error::Unnormalized));
    }

    #[test]
    fn ricci_potential_of_fubini_study() {
        let rp = ricci_potential(&log_poly(&[1, 1])).unwrap();
        assert_eq!(rp, RadialLogPotential::log_poly(p(&[1, 1]).pow(4)).unwrap());
    }

    #[test]
    fn ricci_potential_of_family_member() {
        // log(P⁴/(D/a)²): the (i/2)-convention square of the displayed log(P²/D)
        let a = ratio(3, 2);
        let pot = RadialLogPotential::family(&a);
        let pa = pot.f().clone();
        let d = pa.d_op().scale(&a.recip());
        let want = RadialLogPotential::new(pa.pow(4), d.pow(2)).unwrap();
        assert_eq!(ricci_potential(&pot).unwrap(), want);
    }

    #[test]
    fn ricci_potential_round_trip() {
        let cases: [&[i64]; 5] = [
            &[1, 1],
            &[1, 3, 1],
            &[1, 4, 5, 1],
            &[1, 1, 0, 2],
            &[1, 4, 1, 1, 3],
        ];
        for c in cases {
            let pot = log_poly(c);
            let w = ricci(&hessian_density(&pot).unwrap()).unwrap();
            let rp = ricci_potential(&pot).unwrap();
            assert_eq!(hessian_density(&rp).unwrap(), w, "potential {pot}");
            assert_eq!(rp.f().coeff(0), int(1));
            assert_eq!(rp.h().coeff(0), int(1));
        }
    }

    #[test]
    fn ricci_potential_rejects_negative_origin() {
        // a = 1: first Ricci density is negative at the origin
        let pot = RadialLogPotential::family(&int(1));
        assert_eq!(ricci_potential(&pot), Err(Error::NonPositiveAtOrigin));
    }

    #[test]
    fn bochner_scales() {
        let b = bochner_scale(&RadialLogPotential::family(&int(2))).unwrap();
        assert_eq!(b.c, int(2));
        assert_eq!(
            b.normalized_potential.f(),
            &Poly::new(vec![int(1), int(1), ratio(1, 4)])
        );
        let b = bochner_scale(&log_poly(&[1, 1])).unwrap();
        assert_eq!(b.c, int(1));
        assert_eq!(b.normalized_potential, log_poly(&[1, 1]));
        let b = bochner_scale(&RadialLogPotential::log_poly(p(&[1, 1]).pow(4)).unwrap()).unwrap();
        assert_eq!(b.c, int(4));
        let again = bochner_scale(&b.normalized_potential).unwrap();
        assert_eq!(again.c, int(1));
        assert_eq!(again.normalized_potential, b.normalized_potential);
    }

    #[test]
    fn bochner_rejects_nonpositive_origin() {
        let pot = RadialLogPotential::log_poly(p(&[1, -1, 1])).unwrap();
        assert!(matches!(
            bochner_scale(&pot),
            Err(Error::NonPositiveMetricAtOrigin(_))
        ));
        let hyp = RadialLogPotential::new(Poly::one(), p(&[1, -1])).unwrap();
        assert_eq!(bochner_scale(&hyp).unwrap().c, int(1));
    }

    #[test]
    fn necessity_reproduces_density() {
        let pot = RadialLogPotential::new(p(&[1, 2, 1]).pow(2), p(&[1, 1])).unwrap();
        let e = is_projectively_induced_radial(&pot);
        let q = e.embedding().unwrap().polynomial();
        let from_q = hessian_density(&RadialLogPotential::log_poly(q).unwrap()).unwrap();
        assert_eq!(from_q, hessian_density(&pot).unwrap());
        assert_eq!(from_q, RadialDensity::fubini_study(3));
    }
}
