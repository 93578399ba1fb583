//! Certified parameter intervals for the iterates of the family.
//!
//! On an interval `[lo, hi]` of `a`, a polynomial `c(a)` is certified positive
//! by `c(lo) > 0` and a Sturm count of zero roots in `(lo, hi]`. When every
//! `x`-coefficient of an iterate's numerator and of every denominator factor
//! is positive, the iterate is Kähler for every `a` in the interval.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadratic::{eval_mod_quadratic, sign_at_sqrt};
use crate::radial::{iterate, KahlerStatus, RadialDensity, Sign};
use crate::rational::{format_rational, int, ratio, serde_rational};
use crate::sturm::{ExtendedRational, SturmChain};
use crate::sweep::bivar::BivarPoly;
use crate::sweep::symbolic::{symbolic_iterate, FactoredDensity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalProperty {
    /// All coefficients certified positive on the closed interval.
    AllXCoeffsPositive,
    /// Exact pointwise checks passed at every sample of a leaf interval.
    KahlerAtAllSamples,
    /// The iteration fails for every `a` in the interval, or at every
    /// sample of a leaf.
    NotKahler,
    /// A leaf whose samples disagree: it contains the boundary of the locus.
    Mixed,
    /// Coefficient positivity failed at a coefficient that does not decide
    /// the sign of the polynomial.
    Inconclusive,
}

impl IntervalProperty {
    pub fn is_kahler(self) -> bool {
        matches!(self, Self::AllXCoeffsPositive | Self::KahlerAtAllSamples)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AllXCoeffsPositive => "all_x_coeffs_positive",
            Self::KahlerAtAllSamples => "kahler_at_all_samples",
            Self::NotKahler => "not_kahler",
            Self::Mixed => "mixed",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// Sturm data certifying one coefficient `c(a) > 0` on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffCertificate {
    pub poly: String,
    pub power: usize,
    #[serde(with = "serde_rational")]
    pub value_at_lo: BigRational,
    pub variations_lo: usize,
    pub variations_hi: usize,
}

/// Why a coefficient could not be certified positive: `c(a) ≤ 0`, or `c`
/// touches zero without a sign change inside `(root_lo, root_hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffFailure {
    pub poly: String,
    pub power: usize,
    #[serde(with = "serde_rational")]
    pub a: BigRational,
    #[serde(with = "serde_rational")]
    pub value: BigRational,
}

/// Per-`a` outcome of the exact orbit check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sample {
    #[serde(with = "serde_rational")]
    pub a: BigRational,
    pub kahler: bool,
    /// First iterate that is not Kähler.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halted_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    CoeffSturm {
        coeffs: Vec<CoeffCertificate>,
    },
    CoeffNotPositive(CoeffFailure),
    /// `N_j(a, x) < 0 < D_j(a, x)` for every `a` in the interval, certified
    /// by Sturm counts of both sides as polynomials in `a`. `x` absent means
    /// the leading coefficients (behaviour near `x = ∞`).
    NegativeAt {
        iterate: usize,
        #[serde(with = "crate::rational::serde_option_rational")]
        x: Option<BigRational>,
        num: CoeffCertificate,
        den: CoeffCertificate,
    },
    Samples {
        samples: Vec<Sample>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedInterval {
    #[serde(with = "serde_rational")]
    pub lo: BigRational,
    #[serde(with = "serde_rational")]
    pub hi: BigRational,
    pub k: usize,
    pub property: IntervalProperty,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl CertifiedInterval {
    /// Short human-readable witness for tables.
    pub fn witness(&self) -> String {
        match &self.certificate {
            None => String::new(),
            Some(Certificate::CoeffSturm { coeffs }) => format!("sturm:{}coeffs", coeffs.len()),
            Some(Certificate::CoeffNotPositive(f)) => format!(
                "{}[x^{}](a={})={}",
                f.poly,
                f.power,
                format_rational(&f.a),
                format_rational(&f.value)
            ),
            Some(Certificate::NegativeAt { iterate, x, .. }) => match x {
                Some(x) => format!("rho^{iterate}(x={})<0", format_rational(x)),
                None => format!("rho^{iterate}(x=inf)<0"),
            },
            Some(Certificate::Samples { samples }) => samples
                .iter()
                .map(|s| match s.halted_at {
                    None => format!("a={}:ok", format_rational(&s.a)),
                    Some(j) => format!("a={}:halt@{j}", format_rational(&s.a)),
                })
                .collect::<Vec<_>>()
                .join(" "),
        }
    }

    /// `a_lo,a_hi,k,verdict,witness`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            format_rational(&self.lo),
            format_rational(&self.hi),
            self.k,
            self.property.as_str(),
            self.witness()
        )
    }

    pub fn strip_evidence(&mut self) {
        self.certificate = None;
    }
}

fn certify_positive(
    label: &str,
    power: usize,
    c: &Poly,
    lo: &BigRational,
    hi: &BigRational,
) -> std::result::Result<CoeffCertificate, Box<CoeffFailure>> {
    let fail = |a: BigRational| {
        Box::new(CoeffFailure {
            poly: label.to_string(),
            power,
            value: c.eval(&a),
            a,
        })
    };
    let at_lo = c.eval(lo);
    if !at_lo.is_positive() {
        return Err(fail(lo.clone()));
    }
    let chain = SturmChain::new(c).expect("nonzero: positive at lo");
    let vlo = chain.variations(&ExtendedRational::Finite(lo.clone()));
    let vhi = chain.variations(&ExtendedRational::Finite(hi.clone()));
    if vlo == vhi {
        return Ok(CoeffCertificate {
            poly: label.to_string(),
            power,
            value_at_lo: at_lo,
            variations_lo: vlo,
            variations_hi: vhi,
        });
    }
    // locate a point with c ≤ 0, or the closest approach to a touching root
    let (mut l, mut h) = (lo.clone(), hi.clone());
    loop {
        if !c.eval(&h).is_positive() {
            return Err(fail(h));
        }
        let m = (&l + &h) / int(2);
        if !c.eval(&m).is_positive() {
            return Err(fail(m));
        }
        if chain.count_finite(&l, &m) > 0 {
            h = m;
        } else {
            l = m;
        }
        if (&h - &l) < ratio(1, 1 << 40) {
            return Err(fail((&l + &h) / int(2)));
        }
    }
}

fn certify_all(
    label: &str,
    p: &BivarPoly,
    lo: &BigRational,
    hi: &BigRational,
    out: &mut Vec<CoeffCertificate>,
) -> std::result::Result<(), Box<CoeffFailure>> {
    for (power, c) in p.x_coeffs().iter().enumerate() {
        out.push(certify_positive(label, power, c, lo, hi)?);
    }
    Ok(())
}

/// Certifies every `x`-coefficient of `n` positive on `[lo, hi]`.
///
/// On failure the certificate names a coefficient and a rational `a` where
/// it is not positive; the property is `NotKahler` when that coefficient is
/// the constant or leading one and negative there (then `n(a, ·)` is negative
/// at `x = 0` or near infinity), `Inconclusive` otherwise.
pub fn coeff_positivity_interval(
    n: &BivarPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<CertifiedInterval> {
    if lo >= hi {
        return Err(Error::InvalidInterval);
    }
    let mut coeffs = Vec::new();
    let (property, certificate) = match certify_all("N", n, lo, hi, &mut coeffs) {
        Ok(()) => (
            IntervalProperty::AllXCoeffsPositive,
            Certificate::CoeffSturm { coeffs },
        ),
        Err(f) => {
            let decisive = f.power == 0 || Some(f.power) == n.degree_x();
            let property = if decisive && f.value.is_negative() {
                IntervalProperty::NotKahler
            } else {
                IntervalProperty::Inconclusive
            };
            (property, Certificate::CoeffNotPositive(*f))
        }
    };
    Ok(CertifiedInterval {
        lo: lo.clone(),
        hi: hi.clone(),
        k: 0,
        property,
        certificate: Some(certificate),
    })
}

/// Exact values `c₀ + c₁·√d` of every `x`-coefficient at `a = √d`, with
/// their signs.
pub fn x_coeffs_at_sqrt(
    n: &BivarPoly,
    d: &BigRational,
) -> Vec<(BigRational, BigRational, Ordering)> {
    let m = Poly::new(vec![-d.clone(), BigRational::zero(), BigRational::one()]);
    n.x_coeffs()
        .iter()
        .map(|c| {
            let (c0, c1) = eval_mod_quadratic(c, &m).expect("monic quadratic modulus");
            let s = sign_at_sqrt(&c0, &c1, d);
            (c0, c1, s)
        })
        .collect()
}

/// Options for [`kahler_interval`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    pub lo: BigRational,
    pub hi: BigRational,
    pub size_limit: usize,
    /// Worker threads; the result does not depend on it.
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            lo: int(1),
            hi: int(2),
            size_limit: crate::sweep::symbolic::DEFAULT_SIZE_LIMIT,
            jobs: 1,
        }
    }
}

/// A maximal run of adjacent Kähler intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    #[serde(with = "serde_rational")]
    pub lo: BigRational,
    #[serde(with = "serde_rational")]
    pub hi: BigRational,
    /// Every piece carries a coefficient certificate (not only samples).
    pub fully_certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub resolution: BigRational,
    #[serde(with = "serde_rational")]
    pub window_lo: BigRational,
    #[serde(with = "serde_rational")]
    pub window_hi: BigRational,
    /// Merged Kähler region.
    pub inner: Vec<Run>,
    /// Every interval of the final partition, in order.
    pub intervals: Vec<CertifiedInterval>,
}

impl SweepReport {
    /// The intervals outside the Kähler region.
    pub fn outer(&self) -> impl Iterator<Item = &CertifiedInterval> {
        self.intervals.iter().filter(|i| !i.property.is_kahler())
    }

    pub fn strip_evidence(&mut self) {
        self.intervals
            .iter_mut()
            .for_each(CertifiedInterval::strip_evidence);
    }
}

/// The family's density and its first `k` iterates, symbolically.
struct Orbit {
    densities: Vec<FactoredDensity>,
    /// Distinct polynomials whose coefficients certify the whole orbit:
    /// every numerator and every denominator factor.
    certify: Vec<(String, BivarPoly)>,
}

impl Orbit {
    fn new(k: usize, size_limit: usize) -> Result<Self> {
        let mut densities = vec![FactoredDensity::family()];
        densities.extend(
            symbolic_iterate(k, size_limit)?
                .into_iter()
                .map(|s| s.factored),
        );
        let mut certify: Vec<(String, BivarPoly)> = Vec::new();
        for (j, d) in densities.iter().enumerate() {
            for (f, _) in &d.factors {
                if !certify.iter().any(|(_, g)| g == f) {
                    certify.push((format!("F{}", certify.len()), f.clone()));
                }
            }
            if !certify.iter().any(|(_, g)| *g == d.num) {
                certify.push((format!("N{j}"), d.num.clone()));
            }
        }
        Ok(Orbit { densities, certify })
    }

    fn k(&self) -> usize {
        self.densities.len() - 1
    }

    fn coefficient_certificate(&self, lo: &BigRational, hi: &BigRational) -> Option<Certificate> {
        // positive coefficients give the degree gap of the symbolic pair
        if self
            .densities
            .iter()
            .any(|d| d.den_degree_x() != d.num.degree_x().unwrap_or(0) + 2)
        {
            return None;
        }
        let mut coeffs = Vec::new();
        for (label, p) in &self.certify {
            certify_all(label, p, lo, hi, &mut coeffs).ok()?;
        }
        Some(Certificate::CoeffSturm { coeffs })
    }

    fn negative_certificate(&self, lo: &BigRational, hi: &BigRational) -> Option<Certificate> {
        let mut points: Vec<Option<BigRational>> = vec![Some(BigRational::zero())];
        points.extend(
            [ratio(1, 4), ratio(1, 2), int(1), int(2), int(4)]
                .into_iter()
                .map(Some),
        );
        points.push(None);
        for (j, d) in self.densities.iter().enumerate() {
            let den = d.denominator();
            for x in &points {
                let (n_a, d_a) = match x {
                    Some(x) => (d.num.at_x(x), den.at_x(x)),
                    None => (
                        d.num.x_coeff(d.num.degree_x().unwrap_or(0)),
                        den.x_coeff(den.degree_x().unwrap_or(0)),
                    ),
                };
                if n_a.is_zero() {
                    continue;
                }
                let Ok(num) = certify_positive("-N", 0, &-&n_a, lo, hi) else {
                    continue;
                };
                let Ok(den) = certify_positive("D", 0, &d_a, lo, hi) else {
                    continue;
                };
                return Some(Certificate::NegativeAt {
                    iterate: j,
                    x: x.clone(),
                    num,
                    den,
                });
            }
        }
        None
    }

    fn sample(&self, a: &BigRational) -> Sample {
        let v0: RadialDensity = self.densities[0].at(a).expect("family density is nonzero");
        let orbit = iterate(&v0, self.k(), Sign::Plus);
        let halted_at = orbit.halted_at.or(orbit.ricci_flat_at);
        let kahler = halted_at.is_none()
            && orbit
                .verdicts
                .iter()
                .all(|v| v.status == KahlerStatus::Kahler);
        Sample {
            a: a.clone(),
            kahler,
            halted_at,
        }
    }

    fn classify(
        &self,
        lo: &BigRational,
        hi: &BigRational,
        resolution: &BigRational,
        out: &mut Vec<CertifiedInterval>,
    ) {
        let piece = |property, certificate| CertifiedInterval {
            lo: lo.clone(),
            hi: hi.clone(),
            k: self.k(),
            property,
            certificate: Some(certificate),
        };
        if let Some(c) = self.coefficient_certificate(lo, hi) {
            out.push(piece(IntervalProperty::AllXCoeffsPositive, c));
            return;
        }
        if let Some(c) = self.negative_certificate(lo, hi) {
            out.push(piece(IntervalProperty::NotKahler, c));
            return;
        }
        if hi - lo > *resolution {
            let mid = (lo + hi) / int(2);
            self.classify(lo, &mid, resolution, out);
            self.classify(&mid, hi, resolution, out);
            return;
        }
        let mid = (lo + hi) / int(2);
        let samples: Vec<Sample> = [lo, &mid, hi].into_iter().map(|a| self.sample(a)).collect();
        let good = samples.iter().filter(|s| s.kahler).count();
        let property = match good {
            3 => IntervalProperty::KahlerAtAllSamples,
            0 => IntervalProperty::NotKahler,
            _ => IntervalProperty::Mixed,
        };
        out.push(piece(property, Certificate::Samples { samples }));
    }
}

/// Number of equal pieces the window is cut into before any certification,
/// so the partition does not depend on the worker count.
const INITIAL_PIECES: usize = 16;

/// Partitions the window into certified intervals for the `k`-th iterate.
///
/// Each interval is first tried with coefficient positivity, then with a
/// whole-interval negativity certificate; otherwise it is bisected until it
/// is no wider than `resolution`, and leaves are settled by exact orbit
/// checks at their endpoints and midpoint.
pub fn kahler_interval(
    k: usize,
    resolution: &BigRational,
    opts: &SweepOptions,
) -> Result<SweepReport> {
    if !(1..=3).contains(&k) {
        return Err(Error::DepthOutOfRange(k));
    }
    if !resolution.is_positive() || opts.lo >= opts.hi {
        return Err(Error::InvalidInterval);
    }
    let orbit = Orbit::new(k, opts.size_limit)?;
    let step = (&opts.hi - &opts.lo) / int(INITIAL_PIECES as i64);
    let bounds: Vec<(BigRational, BigRational)> = (0..INITIAL_PIECES)
        .map(|i| {
            let lo = &opts.lo + &step * int(i as i64);
            let hi = if i + 1 == INITIAL_PIECES {
                opts.hi.clone()
            } else {
                &opts.lo + &step * int(i as i64 + 1)
            };
            (lo, hi)
        })
        .collect();
    let jobs = opts.jobs.clamp(1, INITIAL_PIECES);
    let mut parts: Vec<Vec<CertifiedInterval>> = vec![Vec::new(); INITIAL_PIECES];
    if jobs == 1 {
        for ((lo, hi), out) in bounds.iter().zip(parts.iter_mut()) {
            orbit.classify(lo, hi, resolution, out);
        }
    } else {
        let chunk = INITIAL_PIECES.div_ceil(jobs);
        std::thread::scope(|s| {
            for (bs, outs) in bounds.chunks(chunk).zip(parts.chunks_mut(chunk)) {
                let orbit = &orbit;
                s.spawn(move || {
                    for ((lo, hi), out) in bs.iter().zip(outs.iter_mut()) {
                        orbit.classify(lo, hi, resolution, out);
                    }
                });
            }
        });
    }
    let intervals: Vec<CertifiedInterval> = parts.into_iter().flatten().collect();
    Ok(SweepReport {
        k,
        resolution: resolution.clone(),
        window_lo: opts.lo.clone(),
        window_hi: opts.hi.clone(),
        inner: merge_runs(&intervals),
        intervals,
    })
}

fn merge_runs(intervals: &[CertifiedInterval]) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for iv in intervals.iter().filter(|i| i.property.is_kahler()) {
        let certified = iv.property == IntervalProperty::AllXCoeffsPositive;
        match runs.last_mut() {
            Some(r) if r.hi == iv.lo => {
                r.hi = iv.hi.clone();
                r.fully_certified &= certified;
            }
            _ => runs.push(Run {
                lo: iv.lo.clone(),
                hi: iv.hi.clone(),
                fully_certified: certified,
            }),
        }
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::symbolic::DEFAULT_SIZE_LIMIT;

    fn first_numerator() -> BivarPoly {
        symbolic_iterate(1, DEFAULT_SIZE_LIMIT).unwrap()[0]
            .numerator
            .clone()
    }

    fn sqrt2() -> BigRational {
        int(2)
    }

    #[test]
    fn first_iterate_positive_up_to_two() {
        let c = coeff_positivity_interval(&first_numerator(), &ratio(707_107, 500_000), &int(2))
            .unwrap();
        assert_eq!(c.property, IntervalProperty::AllXCoeffsPositive);
        let Some(Certificate::CoeffSturm { coeffs }) = &c.certificate else {
            panic!()
        };
        assert_eq!(coeffs.len(), 7);
        assert!(coeffs.iter().all(|c| c.variations_lo == c.variations_hi));
    }

    #[test]
    fn boundary_coefficients_vanish_at_sqrt_two() {
        let vals = x_coeffs_at_sqrt(&first_numerator(), &sqrt2());
        assert_eq!(vals.len(), 7);
        for k in [0, 6] {
            assert!(
                vals[k].0.is_zero() && vals[k].1.is_zero(),
                "x^{k}: {:?}",
                vals[k]
            );
        }
        assert!(vals[1..6].iter().all(|v| v.2 == Ordering::Greater));
    }

    #[test]
    fn counterexample_at_one() {
        let c = coeff_positivity_interval(&first_numerator(), &int(1), &int(2)).unwrap();
        assert_eq!(c.property, IntervalProperty::NotKahler);
        let Some(Certificate::CoeffNotPositive(f)) = &c.certificate else {
            panic!()
        };
        assert_eq!((f.power, &f.a, &f.value), (0, &int(1), &int(-4)));
    }

    #[test]
    fn invalid_interval() {
        assert_eq!(
            coeff_positivity_interval(&first_numerator(), &int(2), &int(2)),
            Err(Error::InvalidInterval)
        );
    }

    #[test]
    fn first_iterate_sweep() {
        let res = ratio(1, 1000);
        let r = kahler_interval(1, &res, &SweepOptions::default()).unwrap();
        assert_eq!(r.inner.len(), 1);
        let run = &r.inner[0];
        assert_eq!(run.hi, int(2));
        // √2 < lo ≤ √2 + resolution
        assert!(&run.lo * &run.lo > int(2));
        let lo_minus = &run.lo - &res;
        assert!(&lo_minus * &lo_minus < int(2));
        // every interval left of √2 is certified or sampled non-Kähler
        let below: Vec<_> = r
            .intervals
            .iter()
            .filter(|i| &i.hi * &i.hi < int(2))
            .collect();
        assert!(!below.is_empty());
        assert!(below
            .iter()
            .all(|i| i.property == IntervalProperty::NotKahler));
        // partition covers the window without gaps
        assert_eq!(r.intervals.first().unwrap().lo, int(1));
        assert!(r.intervals.windows(2).all(|w| w[0].hi == w[1].lo));
    }

    #[test]
    fn sweep_is_independent_of_jobs() {
        let res = ratio(1, 200);
        let one = kahler_interval(1, &res, &SweepOptions::default()).unwrap();
        let four = kahler_interval(
            1,
            &res,
            &SweepOptions {
                jobs: 4,
                ..SweepOptions::default()
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn csv_rows() {
        let r = kahler_interval(1, &ratio(1, 8), &SweepOptions::default()).unwrap();
        let row = r.intervals.last().unwrap().csv_row();
        assert!(
            row.starts_with("31/16,2,1,all_x_coeffs_positive,sturm:"),
            "{row}"
        );
        let first = r.intervals[0].csv_row();
        assert!(
            first.starts_with("1,17/16,1,not_kahler,rho^1(x=0)<0"),
            "{first}"
        );
    }
}
