//! Radial Kähler forms on CP¹, their Ricci forms and the Kähler–Ricci
//! iteration.
//!
//! Convention: a form is `ω = (i/2)·v(x)·dz∧dz̄` with `x = |z|²` on the chart
//! `{z₀ ≠ 0}`. For a potential `φ(x)` the density is `v = (x·φ')'`, and the
//! Ricci form `-i∂∂̄ log v` has density `w = -2·(x·(log v)')'`. Formulas
//! written with an `i` prefactor instead of `i/2` carry half of `w`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::positivity::{is_positive_on_nonneg_axis, nonneg_roots, Positivity, ZeroLocation};
use crate::ratfunc::RatFunc;
use crate::rational::int;

/// The density `v` of a radial (1,1)-form, never identically zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RadialDensity {
    v: RatFunc,
}

impl RadialDensity {
    pub fn new(v: RatFunc) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::NotAMetric);
        }
        Ok(RadialDensity { v })
    }

    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        Self::new(RatFunc::new(num, den)?)
    }

    /// `n/(1+x)²`, the density of `n·ω_FS`.
    pub fn fubini_study(n: i64) -> Self {
        Self::from_parts(Poly::constant(int(n)), Poly::from_ints(&[1, 2, 1])).expect("nonzero")
    }

    pub fn ratfunc(&self) -> &RatFunc {
        &self.v
    }

    pub fn num(&self) -> &Poly {
        self.v.num()
    }

    pub fn den(&self) -> &Poly {
        self.v.den()
    }

    pub fn scale(&self, c: &BigRational) -> Result<Self> {
        Self::new(self.v.scale(c))
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        self.v.eval(x)
    }
}

impl<'de> Deserialize<'de> for RadialDensity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = RatFunc::deserialize(d)?;
        RadialDensity::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RadialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.v.fmt(f)
    }
}

impl fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialDensity({})", self.v)
    }
}

/// The potential `φ(x) = log(f(x)/h(x))`, normalized so `f(0) = h(0) = 1`
/// and `gcd(f, h) = 1`. The normalization makes `φ` the diastasis at the
/// origin: `φ(0) = 0` and, being a function of `|z|²` alone, it has no
/// purely holomorphic terms.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RadialLogPotential {
    f: Poly,
    h: Poly,
}

impl RadialLogPotential {
    /// Validates and reduces. Both polynomials must take the value 1 at 0.
    pub fn new(f: Poly, h: Poly) -> Result<Self> {
        if f.coeff(0) != BigRational::one() || h.coeff(0) != BigRational::one() {
            return Err(Error::Unnormalized);
        }
        let g = f.gcd(&h);
        if g.is_constant() {
            return Ok(RadialLogPotential { f, h });
        }
        // g(0) ≠ 0 because f(0) ≠ 0
        let g = g.scale(&g.coeff(0).recip());
        Ok(RadialLogPotential {
            f: f.exact_div(&g).expect("gcd divides"),
            h: h.exact_div(&g).expect("gcd divides"),
        })
    }

    /// Skips the gcd; the caller guarantees `f(0) = h(0) = 1` and coprimality.
    pub(crate) fn from_coprime(f: Poly, h: Poly) -> Self {
        debug_assert!(f.coeff(0) == BigRational::one() && h.coeff(0) == BigRational::one());
        RadialLogPotential { f, h }
    }

    /// Rescales `f` and `h` by their values at the origin first; the
    /// potential changes by an additive constant, the form not at all.
    pub fn normalized(f: Poly, h: Poly) -> Result<Self> {
        let (f0, h0) = (f.coeff(0), h.coeff(0));
        if f0.is_zero() || h0.is_zero() {
            return Err(Error::InvalidPotential(
                "log(f/h) must be defined at the origin".into(),
            ));
        }
        if f0.is_negative() != h0.is_negative() {
            return Err(Error::InvalidPotential(
                "f/h must be positive at the origin".into(),
            ));
        }
        Self::new(f.scale(&f0.recip()), h.scale(&h0.recip()))
    }

    /// `log P`.
    pub fn log_poly(p: Poly) -> Result<Self> {
        Self::new(p, Poly::one())
    }

    /// `log(1 + a·x + x²)`.
    pub fn family(a: &BigRational) -> Self {
        Self::log_poly(Poly::new(vec![
            BigRational::one(),
            a.clone(),
            BigRational::one(),
        ]))
        .expect("normalized")
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }
}

#[derive(Deserialize)]
struct RawPotential {
    f: Poly,
    #[serde(default = "Poly::one")]
    h: Poly,
}

impl<'de> Deserialize<'de> for RadialLogPotential {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPotential::deserialize(d)?;
        RadialLogPotential::new(raw.f, raw.h).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RadialLogPotential {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h.is_one_poly() {
            write!(fm, "log({})", self.f)
        } else {
            write!(fm, "log(({}) / ({}))", self.f, self.h)
        }
    }
}

impl fmt::Debug for RadialLogPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialLogPotential({self})")
    }
}

/// Density of `(i/2)∂∂̄ log(f/h)`:
/// `(D(f)·h² − D(h)·f²) / (f·h)²` with `D(P) = P'P + xP''P − x(P')²`.
pub fn hessian_density(pot: &RadialLogPotential) -> Result<RadialDensity> {
    let (f, h) = (&pot.f, &pot.h);
    let num = &(&f.d_op() * &(h * h)) - &(&h.d_op() * &(f * f));
    let fh = f * h;
    RadialDensity::from_parts(num, &fh * &fh)
}

/// Density of the Ricci form of `(i/2)·v·dz∧dz̄`, or `None` when the form is
/// Ricci-flat.
///
/// For `v = A/B`: `w = −2·(D(A)·B² − D(B)·A²) / (A·B)²`. Scaling `v` by any
/// nonzero constant (including `−1`) leaves `w` unchanged.
pub fn ricci(v: &RadialDensity) -> Option<RadialDensity> {
    let (a, b) = (v.num(), v.den());
    let inner = &(&a.d_op() * &(b * b)) - &(&b.d_op() * &(a * a));
    let num = inner.scale(&int(-2));
    if num.is_zero() {
        return None;
    }
    let ab = a * b;
    Some(RadialDensity::from_parts(num, &ab * &ab).expect("nonzero denominator"))
}

/// Outcome of the CP¹ extension test for a density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum KahlerStatus {
    Kahler,
    /// The density is `≥ 0` but vanishes at the listed points of `[0, ∞)`.
    DegenerateAtFiniteX {
        zeros: Vec<ZeroLocation>,
    },
    /// Degree gap above 2: the form vanishes at `[0:1]`.
    DegenerateAtInfinity,
    /// Degree gap below 2: the form blows up at `[0:1]`.
    SingularAtInfinity,
    /// The denominator vanishes on `[0, ∞)`.
    PoleAtFiniteX {
        zeros: Vec<ZeroLocation>,
    },
    /// `v(witness) < 0`, or `v < 0` near infinity when `witness` is absent.
    NotPositive {
        #[serde(with = "crate::rational::serde_option_rational")]
        witness: Option<BigRational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KahlerVerdict {
    #[serde(flatten)]
    pub status: KahlerStatus,
    /// `deg(den) − deg(num)` of the reduced density.
    pub degree_gap: i64,
}

impl KahlerVerdict {
    pub fn is_kahler(&self) -> bool {
        self.status == KahlerStatus::Kahler
    }
}

/// Decides whether `(i/2)·v·dz∧dz̄` extends to a Kähler form on CP¹.
///
/// That holds iff the numerator is strictly positive on `[0, ∞)`, the
/// denominator has no zero there, and `deg(den) − deg(num) = 2` with a
/// positive leading ratio, so that the density `v(1/y)/y²` in the chart at
/// infinity extends positively through `y = 0`.
pub fn check_kahler_cp1(v: &RadialDensity) -> KahlerVerdict {
    let degree_gap = v.ratfunc().degree_gap().expect("nonzero density");
    let verdict = |status| KahlerVerdict { status, degree_gap };
    let num_sign = is_positive_on_nonneg_axis(v.num()).expect("nonzero");
    let den_sign = is_positive_on_nonneg_axis(v.den()).expect("nonzero");
    match (&num_sign, &den_sign) {
        (_, Positivity::NotNonNeg { .. }) | (_, Positivity::NonNegWithZeros { .. }) => {
            // a sign change or zero of the denominator is a pole either way
            let zeros = nonneg_roots(v.den());
            return verdict(KahlerStatus::PoleAtFiniteX { zeros });
        }
        (Positivity::NotNonNeg { witness }, _) => {
            return verdict(KahlerStatus::NotPositive {
                witness: Some(witness.clone()),
            })
        }
        (Positivity::NonNegWithZeros { zeros }, _) => {
            return verdict(KahlerStatus::DegenerateAtFiniteX {
                zeros: zeros.clone(),
            })
        }
        (Positivity::StrictlyPositive, Positivity::StrictlyPositive) => {}
    }
    let ratio_positive = v.ratfunc().leading_ratio().is_some_and(|r| r.is_positive());
    let status = if !ratio_positive {
        KahlerStatus::NotPositive { witness: None }
    } else if degree_gap > 2 {
        KahlerStatus::DegenerateAtInfinity
    } else if degree_gap < 2 {
        KahlerStatus::SingularAtInfinity
    } else {
        KahlerStatus::Kahler
    };
    verdict(status)
}

/// Which of `±ρ` the iteration requires to be positive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> BigRational {
        match self {
            Sign::Plus => BigRational::one(),
            Sign::Minus => -BigRational::one(),
        }
    }
}

/// The orbit `ρ⁰, ρ¹, …` of the Kähler–Ricci iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterationOrbit {
    pub densities: Vec<RadialDensity>,
    pub verdicts: Vec<KahlerVerdict>,
    /// First index whose (signed) density is not Kähler on CP¹.
    pub halted_at: Option<usize>,
    /// Index whose Ricci form vanished identically, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ricci_flat_at: Option<usize>,
}

impl IterationOrbit {
    pub fn all_kahler(&self) -> bool {
        self.halted_at.is_none() && self.ricci_flat_at.is_none()
    }
}

/// Runs the Kähler–Ricci iteration up to `ρ^{k_max}`.
///
/// `ρ⁰ = v0` is checked as given; for `l ≥ 1` the form `sign·ρˡ` must be
/// Kähler before `ρ^{l+1}` is taken. The orbit stops at the first failure.
pub fn iterate(v0: &RadialDensity, k_max: usize, sign: Sign) -> IterationOrbit {
    let mut orbit = IterationOrbit {
        densities: vec![v0.clone()],
        verdicts: vec![check_kahler_cp1(v0)],
        halted_at: None,
        ricci_flat_at: None,
    };
    if !orbit.verdicts[0].is_kahler() {
        orbit.halted_at = Some(0);
        return orbit;
    }
    for k in 1..=k_max {
        let Some(next) = ricci(orbit.densities.last().unwrap()) else {
            orbit.ricci_flat_at = Some(k);
            return orbit;
        };
        let signed = next.scale(&sign.factor()).expect("nonzero");
        let verdict = check_kahler_cp1(&signed);
        let ok = verdict.is_kahler();
        orbit.densities.push(next);
        orbit.verdicts.push(verdict);
        if !ok {
            orbit.halted_at = Some(k);
            break;
        }
    }
    orbit
}

/// `Some(λ)` iff `ricci(v) = λ·v` exactly (`λ = 0` when Ricci-flat).
pub fn is_einstein(v: &RadialDensity) -> Option<BigRational> {
    // radial Kähler–Einstein metrics on CP¹ are c/(1 + b·x)²
    let round_shape = v.num().degree() == Some(0) && v.den().degree() == Some(2);
    if !round_shape && check_kahler_cp1(v).is_kahler() {
        return None;
    }
    match ricci(v) {
        None => Some(BigRational::zero()),
        Some(w) => w.ratfunc().div(v.ratfunc()).ok()?.as_constant(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn family_density(a: BigRational) -> RadialDensity {
        hessian_density(&RadialLogPotential::family(&a)).unwrap()
    }

    #[test]
    fn fixed_point_member_of_family() {
        // D((1+x)²) = 2(1+x)²
        assert_eq!(family_density(int(2)), RadialDensity::fubini_study(2));
    }

    #[test]
    fn symbolic_family_density_at_sample() {
        // (a + 4x + ax²)/(1 + ax + x²)² at a = 3/2
        let a = ratio(3, 2);
        let want = RadialDensity::from_parts(
            Poly::new(vec![a.clone(), int(4), a.clone()]),
            Poly::new(vec![int(1), a.clone(), int(1)]).pow(2),
        )
        .unwrap();
        assert_eq!(family_density(a), want);
    }

    #[test]
    fn fubini_study_potential() {
        let pot = RadialLogPotential::log_poly(p(&[1, 1])).unwrap();
        assert_eq!(
            hessian_density(&pot).unwrap(),
            RadialDensity::fubini_study(1)
        );
    }

    #[test]
    fn constant_potential_is_not_a_metric() {
        let pot = RadialLogPotential::log_poly(Poly::one()).unwrap();
        assert_eq!(hessian_density(&pot), Err(Error::NotAMetric));
    }

    #[test]
    fn potential_normalization() {
        assert_eq!(
            RadialLogPotential::new(p(&[2, 1]), Poly::one()),
            Err(Error::Unnormalized)
        );
        let pot = RadialLogPotential::new(p(&[1, 2, 1]), p(&[1, 1])).unwrap();
        assert_eq!(pot.f(), &p(&[1, 1]));
        assert!(pot.h().is_one_poly());
        let pot = RadialLogPotential::normalized(p(&[3, 3]), p(&[2])).unwrap();
        assert_eq!(pot.f(), &p(&[1, 1]));
    }

    #[test]
    fn ricci_of_fubini_study() {
        let w = ricci(&RadialDensity::fubini_study(1)).unwrap();
        assert_eq!(w, RadialDensity::fubini_study(4));
    }

    #[test]
    fn ricci_matches_closed_form_at_sample_points() {
        for a in [ratio(3, 2), ratio(7, 4), int(1), int(3)] {
            let pa = Poly::new(vec![int(1), a.clone(), int(1)]);
            let aa = Poly::new(vec![a.clone(), int(4), a.clone()]);
            let bracket = &aa.pow(3).scale(&int(2)) - &pa.pow(3).scale(&(&a * int(4)));
            let want =
                RadialDensity::from_parts(bracket.scale(&int(2)), &aa.pow(2) * &pa.pow(2)).unwrap();
            assert_eq!(ricci(&family_density(a)).unwrap(), want);
        }
    }

    #[test]
    fn ricci_ignores_constant_factor() {
        let v = family_density(ratio(3, 2));
        for c in [ratio(5, 3), ratio(-2, 7), int(100)] {
            assert_eq!(ricci(&v.scale(&c).unwrap()), ricci(&v));
        }
    }

    #[test]
    fn flat_plane_is_ricci_flat() {
        let v = RadialDensity::from_parts(p(&[1]), p(&[1])).unwrap();
        assert!(ricci(&v).is_none());
        assert_eq!(is_einstein(&v), Some(int(0)));
    }

    #[test]
    fn kahler_verdicts() {
        let fs = check_kahler_cp1(&RadialDensity::fubini_study(1));
        assert_eq!(fs.status, KahlerStatus::Kahler);
        assert_eq!(fs.degree_gap, 2);

        let first = ricci(&family_density(ratio(3, 2))).unwrap();
        assert!(check_kahler_cp1(&first).is_kahler());

        // at a = 1 the constant term 4a(a² − 2) = −4 is negative
        let first = ricci(&family_density(int(1))).unwrap();
        let verdict = check_kahler_cp1(&first);
        assert_eq!(
            verdict.status,
            KahlerStatus::NotPositive {
                witness: Some(int(0))
            }
        );
        assert_eq!(first.num().coeff(0) / first.den().coeff(0), int(-4));
    }

    #[test]
    fn degree_gap_failures() {
        let flat = RadialDensity::from_parts(p(&[1]), p(&[1])).unwrap();
        assert_eq!(
            check_kahler_cp1(&flat).status,
            KahlerStatus::SingularAtInfinity
        );
        let fast = RadialDensity::from_parts(p(&[1]), p(&[1, 0, 0, 1])).unwrap();
        assert_eq!(
            check_kahler_cp1(&fast).status,
            KahlerStatus::DegenerateAtInfinity
        );
        let pole = RadialDensity::from_parts(p(&[1]), p(&[1, -2, 1])).unwrap();
        assert!(matches!(
            check_kahler_cp1(&pole).status,
            KahlerStatus::PoleAtFiniteX { .. }
        ));
        let vanishing = RadialDensity::from_parts(p(&[0, 1]), p(&[1, 0, 0, 1])).unwrap();
        assert!(matches!(
            check_kahler_cp1(&vanishing).status,
            KahlerStatus::DegenerateAtFiniteX { .. }
        ));
        let negative = RadialDensity::from_parts(p(&[-1]), p(&[1, 2, 1])).unwrap();
        assert!(matches!(
            check_kahler_cp1(&negative).status,
            KahlerStatus::NotPositive { .. }
        ));
    }

    #[test]
    fn orbit_of_fixed_point() {
        let orbit = iterate(&family_density(int(2)), 3, Sign::Plus);
        let want = [2, 4, 4, 4].map(RadialDensity::fubini_study);
        assert_eq!(orbit.densities, want);
        assert!(orbit.verdicts.iter().all(KahlerVerdict::is_kahler));
        assert_eq!(orbit.halted_at, None);
    }

    #[test]
    fn orbit_halts_when_not_positive() {
        let orbit = iterate(&family_density(int(1)), 2, Sign::Plus);
        assert_eq!(orbit.halted_at, Some(1));
        assert_eq!(orbit.densities.len(), 2);
        assert_eq!(orbit.verdicts.len(), 2);
    }

    #[test]
    fn orbit_of_depth_zero() {
        let v = RadialDensity::fubini_study(1);
        let orbit = iterate(&v, 0, Sign::Plus);
        assert_eq!(orbit.densities, vec![v]);
        assert!(orbit.verdicts[0].is_kahler());
    }

    #[test]
    fn negative_sign_halts_on_cp1() {
        let orbit = iterate(&RadialDensity::fubini_study(1), 2, Sign::Minus);
        assert_eq!(orbit.halted_at, Some(1));
    }

    #[test]
    fn einstein_constants() {
        assert_eq!(is_einstein(&RadialDensity::fubini_study(1)), Some(int(4)));
        assert_eq!(is_einstein(&RadialDensity::fubini_study(2)), Some(int(2)));
        assert_eq!(
            is_einstein(&ricci(&family_density(ratio(3, 2))).unwrap()),
            None
        );
    }

    #[test]
    fn json_shapes() {
        let orbit = iterate(&RadialDensity::fubini_study(1), 1, Sign::Plus);
        let s = serde_json::to_string(&orbit).unwrap();
        assert_eq!(
            s,
            r#"{"densities":[{"num":["1"],"den":["1","2","1"]},{"num":["4"],"den":["1","2","1"]}],"verdicts":[{"status":"kahler","degree_gap":2},{"status":"kahler","degree_gap":2}],"halted_at":null}"#
        );
        let pot: RadialLogPotential = serde_json::from_str(r#"{"f":[1,2,1],"h":[1]}"#).unwrap();
        assert_eq!(pot, RadialLogPotential::family(&int(2)));
        assert!(serde_json::from_str::<RadialLogPotential>(r#"{"f":[2,1]}"#).is_err());
    }
}
