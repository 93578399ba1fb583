//! Volumes of radial forms on CP¹ and on discs.
//!
//! The symplectic volume of `(i/2)·v·dz∧dz̄` is `π·∫₀^∞ v(x) dx`. Finiteness
//! is decided exactly from the degree gap. The finite part `[0, T]` is
//! integrated numerically after `x = t/(1−t)`, the tail `[T, ∞)` exactly from
//! the first two Laurent terms at infinity plus a rigorous remainder bound.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::induced::bochner_scale;
use crate::poly::Poly;
use crate::positivity::{is_positive_on_nonneg_axis, Positivity};
use crate::quadrature::{integrate, Quadrature};
use crate::radial::{check_kahler_cp1, hessian_density, ricci, RadialDensity, RadialLogPotential};
use crate::rational::{format_rational, int, to_f64};
use crate::sturm::{isolate_roots, positive_root_bound, refine, SturmChain};

/// Target for the quadrature error estimate of `∫₀^T v`.
const QUAD_TOL: f64 = 1e-12;
const MAX_PANELS: usize = 20_000;
/// Target for the analytic tail remainder `∫_T^∞ |R|`.
const TAIL_TOL: (i64, i64) = (1, 1_000_000_000_000);

/// Decimal rendering used in every report: shortest round-trip form, with an
/// exponent outside `[1e-6, 1e15)`.
pub fn format_decimal(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-6..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn ser_decimal<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_decimal(*x))
}

fn ser_opt_decimal<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&format_decimal(*x)),
        None => s.serialize_none(),
    }
}

fn ser_opt_rational<S: Serializer>(
    r: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

/// `π·∫₀^∞ v dx`, with an absolute error bound when finite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeReport {
    pub finite: bool,
    #[serde(
        serialize_with = "ser_opt_decimal",
        skip_serializing_if = "Option::is_none"
    )]
    pub value: Option<f64>,
    #[serde(
        serialize_with = "ser_opt_decimal",
        skip_serializing_if = "Option::is_none"
    )]
    pub err: Option<f64>,
    #[serde(
        serialize_with = "ser_opt_rational",
        skip_serializing_if = "Option::is_none"
    )]
    pub tail_cut: Option<BigRational>,
}

impl VolumeReport {
    fn infinite() -> Self {
        VolumeReport {
            finite: false,
            value: None,
            err: None,
            tail_cut: None,
        }
    }
}

/// Coefficients of `v = num/den` in `f64`, both scaled by the largest
/// denominator coefficient, in `x` and reversed (in `y = 1/x`).
struct FloatDensity {
    num: Vec<f64>,
    den: Vec<f64>,
    gap: i32,
}

impl FloatDensity {
    fn new(num: &Poly, den: &Poly) -> Self {
        let s = den
            .coeffs()
            .iter()
            .map(|c| c.abs())
            .max()
            .expect("nonzero denominator");
        let conv = |p: &Poly| {
            p.coeffs()
                .iter()
                .map(|c| to_f64(&(c / &s)))
                .collect::<Vec<_>>()
        };
        FloatDensity {
            num: conv(num),
            den: conv(den),
            gap: (den.degree().unwrap() - num.degree().unwrap()) as i32,
        }
    }

    /// Horner value and the matching sum of absolute terms.
    fn horner(c: &[f64], x: f64, reversed: bool) -> (f64, f64) {
        let (mut v, mut a) = (0.0f64, 0.0f64);
        let ax = x.abs();
        let mut step = |ci: f64| {
            v = v * x + ci;
            a = a * ax + ci.abs();
        };
        if reversed {
            c.iter().for_each(|&ci| step(ci));
        } else {
            c.iter().rev().for_each(|&ci| step(ci));
        }
        (v, a)
    }

    /// `v(x(t))·x'(t)` and a bound on its rounding error per unit `ε`.
    fn integrand(&self, t: f64) -> (f64, f64) {
        let rounding = (self.num.len() + self.den.len() + 4) as f64;
        if t <= 0.5 {
            let x = t / (1.0 - t);
            let jac = 1.0 / ((1.0 - t) * (1.0 - t));
            let (n, na) = Self::horner(&self.num, x, false);
            let (d, da) = Self::horner(&self.den, x, false);
            let val = n / d * jac;
            (
                val,
                rounding * (na / d.abs() + n.abs() * da / (d * d)) * jac,
            )
        } else {
            // v = y^g·N*(y)/M*(y) with y = 1/x = (1−t)/t, and
            // y^g·x'(t) = (1−t)^(g−2)/t^g
            let y = (1.0 - t) / t;
            let w = (1.0 - t).powi(self.gap - 2) / t.powi(self.gap);
            let (n, na) = Self::horner(&self.num, y, true);
            let (d, da) = Self::horner(&self.den, y, true);
            let val = n / d * w;
            (val, rounding * (na / d.abs() + n.abs() * da / (d * d)) * w)
        }
    }

    fn integrate_to(&self, t_end: f64) -> (Quadrature, f64) {
        let q = integrate(|t| self.integrand(t).0, 0.0, t_end, QUAD_TOL, MAX_PANELS);
        let envelope = integrate(|t| self.integrand(t).1, 0.0, t_end, 1e-3, 2_000);
        (q, envelope.value.abs() * f64::EPSILON)
    }
}

/// Exact data of `v` near infinity: `v = e₀·x^(−g) + e₁·x^(−g−1) + R(x)`
/// with `R(x) = y^(g+2)·S(y)/M(y)`, `y = 1/x`, `M` the reversed denominator.
struct Laurent {
    gap: usize,
    e0: BigRational,
    e1: BigRational,
    s: Poly,
    m: Poly,
}

fn reversed(p: &Poly) -> Poly {
    let mut c = p.coeffs().to_vec();
    c.reverse();
    Poly::new(c)
}

impl Laurent {
    fn new(num: &Poly, den: &Poly) -> Self {
        let gap = den.degree().unwrap() - num.degree().unwrap();
        let (n, m) = (reversed(num), reversed(den));
        let m0 = m.coeff(0);
        let e0 = n.coeff(0) / &m0;
        let e1 = (n.coeff(1) - &e0 * m.coeff(1)) / &m0;
        let head = Poly::new(vec![e0.clone(), e1.clone()]);
        let q = &n - &(&head * &m);
        let s = Poly::new(q.coeffs().iter().skip(2).cloned().collect());
        Laurent { gap, e0, e1, s, m }
    }

    /// `∫_T^∞ (e₀x^(−g) + e₁x^(−g−1)) dx`, exact.
    fn tail_integral(&self, t: &BigRational) -> BigRational {
        let g = self.gap as i32;
        let p = |k: i32| num_traits::pow(t.clone(), k as usize).recip();
        &self.e0 * p(g - 1) / int(g as i64 - 1) + &self.e1 * p(g) / int(g as i64)
    }

    /// Rigorous bound for `∫_T^∞ |R|`, or `None` when `T` is too small for
    /// the reversed denominator to stay above half its value at `y = 0`.
    fn remainder_bound(&self, t: &BigRational) -> Option<BigRational> {
        let y = t.recip();
        let powers = |p: &Poly| -> Vec<BigRational> {
            let mut acc = BigRational::one();
            p.coeffs()
                .iter()
                .map(|c| {
                    let term = c.abs() * &acc;
                    acc *= &y;
                    term
                })
                .collect()
        };
        let m_terms = powers(&self.m);
        let m0 = m_terms[0].clone();
        let rest: BigRational = m_terms[1..].iter().sum();
        let lower = &m0 - rest;
        if &lower * int(2) < m0 {
            return None;
        }
        let s_sup: BigRational = powers(&self.s).into_iter().sum();
        let k = self.gap as i64 + 1;
        Some(s_sup / lower * num_traits::pow(y, k as usize) / int(k))
    }
}

fn tail_cut(l: &Laurent, min_cut: &BigRational) -> (BigRational, BigRational) {
    let tol = BigRational::new(TAIL_TOL.0.into(), TAIL_TOL.1.into());
    let mut t = BigRational::one();
    while &t < min_cut {
        t *= int(2);
    }
    loop {
        if let Some(b) = l.remainder_bound(&t) {
            if b <= tol {
                return (t, b);
            }
        }
        t *= int(2);
    }
}

fn check_denominator(v: &RadialDensity) -> Result<()> {
    match is_positive_on_nonneg_axis(v.den())? {
        Positivity::StrictlyPositive => Ok(()),
        _ => Err(Error::SingularDensity),
    }
}

fn volume_impl(v: &RadialDensity, min_cut: &BigRational) -> Result<VolumeReport> {
    check_denominator(v)?;
    let gap = v.ratfunc().degree_gap().expect("nonzero density");
    if gap < 2 {
        return Ok(VolumeReport::infinite());
    }
    let laurent = Laurent::new(v.num(), v.den());
    let (cut, remainder) = tail_cut(&laurent, min_cut);
    let tail = to_f64(&laurent.tail_integral(&cut));
    let fd = FloatDensity::new(v.num(), v.den());
    let t_end = to_f64(&(&cut / (&cut + BigRational::one())));
    let (q, rounding) = fd.integrate_to(t_end);
    let value = PI * (q.value + tail);
    let err = PI * (q.err + rounding + to_f64(&remainder) + tail.abs() * f64::EPSILON)
        + 4.0 * f64::EPSILON * value.abs();
    Ok(VolumeReport {
        finite: true,
        value: Some(value),
        err: Some(err),
        tail_cut: Some(cut),
    })
}

/// Symplectic volume of a nonnegative density.
pub fn symplectic_volume(v: &RadialDensity) -> Result<VolumeReport> {
    symplectic_volume_with_cut(v, &BigRational::one())
}

/// As [`symplectic_volume`], with the tail cut at least `min_cut`.
pub fn symplectic_volume_with_cut(
    v: &RadialDensity,
    min_cut: &BigRational,
) -> Result<VolumeReport> {
    match is_positive_on_nonneg_axis(v.num())? {
        Positivity::NotNonNeg { .. } => Err(Error::NegativeDensity),
        _ => volume_impl(v, min_cut),
    }
}

/// `π·∫₀^∞ v dx` for a density of either sign.
pub fn signed_volume(v: &RadialDensity) -> Result<VolumeReport> {
    volume_impl(v, &BigRational::one())
}

/// `π·∫₀^X v dx` by quadrature alone, for any `X ≥ 0` and either sign.
pub fn partial_integral(v: &RadialDensity, x_max: f64) -> Result<f64> {
    check_denominator(v)?;
    let fd = FloatDensity::new(v.num(), v.den());
    let t_end = x_max / (1.0 + x_max);
    Ok(PI * fd.integrate_to(t_end).0.value)
}

/// Deviation of the Ricci form's total mass from `4π`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernCheck {
    #[serde(serialize_with = "ser_decimal")]
    pub residual: f64,
    /// Error bound of the underlying volume computation.
    #[serde(serialize_with = "ser_decimal")]
    pub err: f64,
}

/// `|π·∫ ricci(v) − 4π|` for a density that is Kähler on CP¹.
pub fn chern_check(v: &RadialDensity) -> Result<ChernCheck> {
    if !check_kahler_cp1(v).is_kahler() {
        return Err(Error::NotKahler);
    }
    let w = ricci(v).ok_or(Error::NotKahler)?;
    let report = signed_volume(&w)?;
    let value = report.value.ok_or(Error::NotKahler)?;
    Ok(ChernCheck {
        residual: (value - 4.0 * PI).abs(),
        err: report.err.unwrap_or(0.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VolumeClass {
    Infinite,
    Finite {
        #[serde(serialize_with = "ser_decimal")]
        value: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeBasis {
    /// The Bochner coordinate `w = √c·z` is defined on all of `ℂ`.
    BochnerChartCoversPlane,
    /// The potential lives on `|z|² < r`, whose Bochner image is the disc
    /// `|w|² < c·r`.
    BochnerImageDisc,
    QuadratureOfLiteralIntegral,
}

/// Lebesgue volume of the image of the Bochner coordinates, together with the
/// plain integral of the form's density for comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EuclideanVolumeVerdict {
    pub classification: VolumeClass,
    pub basis: VolumeBasis,
    #[serde(with = "crate::rational::serde_rational")]
    pub bochner_scale: BigRational,
    /// Enclosure of the squared radius `r` of the domain `|z|² < r`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_radius_sq: Option<RadiusEnclosure>,
    /// `π·∫₀^∞ v dx` for the potential's own density.
    pub literal_integral: Option<VolumeReport>,
    /// The literal integral is finite while the volume is infinite.
    pub discrepancy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusEnclosure {
    #[serde(with = "crate::rational::serde_rational")]
    pub lo: BigRational,
    #[serde(with = "crate::rational::serde_rational")]
    pub hi: BigRational,
}

/// Smallest positive root of `f·h`, where `log(f/h)` stops being defined.
fn domain_radius_sq(pot: &RadialLogPotential) -> Option<RadiusEnclosure> {
    let p = pot.f() * pot.h();
    let chain = SturmChain::new(&p).ok()?;
    let first = isolate_roots(&chain, &BigRational::zero(), &positive_root_bound(&p))
        .into_iter()
        .next()?;
    let width = BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 30));
    let iv = refine(&chain, &first, &width);
    if p.sign_at(&iv.hi) == 0 {
        return Some(RadiusEnclosure {
            lo: iv.hi.clone(),
            hi: iv.hi,
        });
    }
    Some(RadiusEnclosure {
        lo: iv.lo,
        hi: iv.hi,
    })
}

/// Bochner–Euclidean volume of the radial form `(i/2)∂∂̄ pot`.
///
/// With `on_cp1` the form lives on CP¹ and the Bochner chart is the whole
/// affine chart, so the volume is infinite. Otherwise the domain is the disc
/// `|z|² < r` bounded by the first positive singularity of the potential, or
/// all of `ℂ` when there is none.
pub fn euclidean_volume(pot: &RadialLogPotential, on_cp1: bool) -> Result<EuclideanVolumeVerdict> {
    let scale = bochner_scale(pot)?;
    let literal_integral = hessian_density(pot)
        .ok()
        .and_then(|v| signed_volume(&v).ok());
    let radius = if on_cp1 { None } else { domain_radius_sq(pot) };
    let (classification, basis) = match &radius {
        None => (VolumeClass::Infinite, VolumeBasis::BochnerChartCoversPlane),
        Some(r) => {
            let mid = (&r.lo + &r.hi) / int(2);
            let value = PI * to_f64(&(&scale.c * mid));
            (VolumeClass::Finite { value }, VolumeBasis::BochnerImageDisc)
        }
    };
    let discrepancy = classification == VolumeClass::Infinite
        && literal_integral.as_ref().is_some_and(|l| l.finite);
    Ok(EuclideanVolumeVerdict {
        classification,
        basis,
        bochner_scale: scale.c,
        domain_radius_sq: radius,
        literal_integral,
        discrepancy,
    })
}
