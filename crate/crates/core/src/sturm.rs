//! Sturm sequences: exact real-root counting and isolation.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{sign_of, Poly};
use crate::rational::{int, serde_rational};

/// A point of the extended real line with rational finite part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedRational {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl From<BigRational> for ExtendedRational {
    fn from(r: BigRational) -> Self {
        ExtendedRational::Finite(r)
    }
}

impl ExtendedRational {
    fn lt(&self, other: &ExtendedRational) -> bool {
        use ExtendedRational::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => false,
            (NegInf, _) | (_, PosInf) => true,
            (_, NegInf) | (PosInf, _) => false,
            (Finite(a), Finite(b)) => a < b,
        }
    }
}

/// The signed remainder sequence `p, p', -rem(p, p'), …` of a square-free
/// polynomial, each element scaled by a positive constant to be primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    /// Builds the chain of the square-free part of `p`, so counts are of
    /// distinct roots.
    pub fn new(p: &Poly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self::of_squarefree(p.squarefree_part()))
    }

    /// Chain of a polynomial already known to be square-free.
    pub fn of_squarefree(p: Poly) -> Self {
        let mut chain = vec![positive_primitive(&p)];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(positive_primitive(&d));
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]).expect("nonzero");
            if r.is_zero() {
                break;
            }
            chain.push(positive_primitive(&-&r));
        }
        SturmChain { chain }
    }

    pub fn polys(&self) -> &[Poly] {
        &self.chain
    }

    /// The square-free polynomial heading the chain.
    pub fn head(&self) -> &Poly {
        &self.chain[0]
    }

    /// Sign variations of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &ExtendedRational) -> usize {
        let signs = self.chain.iter().map(|p| match x {
            ExtendedRational::Finite(r) => p.sign_at(r),
            ExtendedRational::PosInf => p.leading().map_or(0, sign_of),
            ExtendedRational::NegInf => {
                let s = p.leading().map_or(0, sign_of);
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        });
        let mut count = 0;
        let mut prev = 0i8;
        for s in signs {
            if s == 0 {
                continue;
            }
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &ExtendedRational, hi: &ExtendedRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    pub fn count_finite(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.count(&lo.clone().into(), &hi.clone().into())
    }
}

fn positive_primitive(p: &Poly) -> Poly {
    // dividing by the positive content keeps every sign
    let c = p.content();
    if c.is_zero() {
        return Poly::zero();
    }
    p.scale(&c.recip())
}

/// Number of distinct real roots of `p` in `(lo, hi]`; endpoints may be
/// infinite.
pub fn sturm_count_roots(p: &Poly, lo: &ExtendedRational, hi: &ExtendedRational) -> Result<usize> {
    if !lo.lt(hi) {
        return Err(Error::InvalidInterval);
    }
    Ok(SturmChain::new(p)?.count(lo, hi))
}

/// A half-open interval `(lo, hi]` holding `root_count` distinct roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatingInterval {
    #[serde(with = "serde_rational")]
    pub lo: BigRational,
    #[serde(with = "serde_rational")]
    pub hi: BigRational,
    pub root_count: usize,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Isolates the distinct real roots of the chain head in `(lo, hi]` into
/// intervals with exactly one root each, sorted left to right. A root that
/// lands exactly on a bisection point is the `hi` end of its interval.
pub fn isolate_roots(
    chain: &SturmChain,
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<IsolatingInterval> {
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), chain.count_finite(lo, hi))];
    // depth-first, right half pushed first so output stays ordered
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(IsolatingInterval {
                lo: a,
                hi: b,
                root_count: 1,
            }),
            _ => {
                let m = (&a + &b) / int(2);
                let left = chain.count_finite(&a, &m);
                stack.push((m.clone(), b, n - left));
                stack.push((a, m, left));
            }
        }
    }
    out
}

/// Shrinks an isolating interval (one root) by bisection until its width is
/// at most `width`, or the root is found exactly.
pub fn refine(
    chain: &SturmChain,
    iv: &IsolatingInterval,
    width: &BigRational,
) -> IsolatingInterval {
    let mut iv = iv.clone();
    while &iv.width() > width {
        if chain.head().sign_at(&iv.hi) == 0 {
            break;
        }
        let m = (&iv.lo + &iv.hi) / int(2);
        if chain.count_finite(&iv.lo, &m) == 1 {
            iv.hi = m;
        } else {
            iv.lo = m;
        }
    }
    iv
}

/// Upper bound for positive roots, a power of two.
pub(crate) fn positive_root_bound(p: &Poly) -> BigRational {
    let b = p.cauchy_bound();
    let mut t = BigRational::one();
    while t <= b {
        t *= int(2);
    }
    t
}

/// A root located either exactly or strictly inside an interval whose
/// endpoints are not roots of the chain head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootEnclosure {
    Exact(BigRational),
    Open(BigRational, BigRational),
}

/// Tightens an isolating interval until neither endpoint is a root.
pub fn enclose(chain: &SturmChain, iv: &IsolatingInterval) -> RootEnclosure {
    let head = chain.head();
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    loop {
        if head.sign_at(&hi) == 0 {
            return RootEnclosure::Exact(hi);
        }
        if head.sign_at(&lo) != 0 {
            return RootEnclosure::Open(lo, hi);
        }
        let m = (&lo + &hi) / int(2);
        if chain.count_finite(&lo, &m) == 1 {
            hi = m;
        } else {
            lo = m;
        }
    }
}

/// Non-root points `l < r < h` around the exact root `r` with no other root of
/// the chain head in `[l, h]`, and `l > floor`.
pub fn flank(
    chain: &SturmChain,
    r: &BigRational,
    floor: &BigRational,
) -> (BigRational, BigRational) {
    let head = chain.head();
    let mut eps = if r > floor {
        (r - floor) / int(2)
    } else {
        BigRational::one()
    };
    loop {
        let (l, h) = (r - &eps, r + &eps);
        if chain.count_finite(&l, &h) == 1 && head.sign_at(&l) != 0 && head.sign_at(&h) != 0 {
            return (l, h);
        }
        eps /= int(2);
    }
}
