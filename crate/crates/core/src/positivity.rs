//! Exact positivity of a polynomial on the half-line `[0, ∞)`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{int, serde_rational};
use crate::sturm::IsolatingInterval;
use crate::sturm::{enclose, flank, isolate_roots, positive_root_bound, RootEnclosure, SturmChain};

/// Where a polynomial vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroLocation {
    Exact {
        #[serde(with = "serde_rational")]
        at: BigRational,
    },
    Isolated(IsolatingInterval),
}

impl ZeroLocation {
    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            ZeroLocation::Exact { at } => Some(at),
            ZeroLocation::Isolated(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Positivity {
    StrictlyPositive,
    /// `p ≥ 0` on `[0, ∞)`, vanishing at the listed places.
    NonNegWithZeros {
        zeros: Vec<ZeroLocation>,
    },
    /// `p(witness) < 0` for the rational `witness ≥ 0`.
    NotNonNeg {
        #[serde(with = "serde_rational")]
        witness: BigRational,
    },
}

impl Positivity {
    pub fn is_strictly_positive(&self) -> bool {
        matches!(self, Positivity::StrictlyPositive)
    }
}

/// Decides the sign behaviour of `p` on `[0, ∞)`.
///
/// `p` only changes sign at roots of odd multiplicity, so `p ≥ 0` there iff
/// its leading coefficient is positive and no odd-multiplicity root lies in
/// `(0, ∞)`. Zeros are the roots of the square-free part in `[0, ∞)`.
pub fn is_positive_on_nonneg_axis(p: &Poly) -> Result<Positivity> {
    let lead = p.leading().ok_or(Error::ZeroPolynomial)?;
    let at_zero = p.coeff(0);
    if at_zero.is_negative() {
        return Ok(Positivity::NotNonNeg { witness: int(0) });
    }
    let bound = positive_root_bound(p);
    if lead.is_negative() {
        return Ok(Positivity::NotNonNeg { witness: bound });
    }
    let zero = BigRational::zero();
    let chain = SturmChain::new(p)?;
    let roots = isolate_roots(&chain, &zero, &bound);
    if roots.is_empty() && !at_zero.is_zero() {
        return Ok(Positivity::StrictlyPositive);
    }
    // odd-multiplicity factor: product of the odd-indexed Yun factors
    let odd = p
        .squarefree_decomposition()
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == 0)
        .fold(Poly::one(), |acc, (_, s)| &acc * s);
    let odd_chain = SturmChain::of_squarefree(odd);
    for iv in &roots {
        if odd_chain.count_finite(&iv.lo, &iv.hi) == 0 {
            continue;
        }
        let (l, h) = match enclose(&chain, iv) {
            RootEnclosure::Open(l, h) => (l, h),
            RootEnclosure::Exact(r) => flank(&chain, &r, &zero),
        };
        let witness = if p.sign_at(&l) < 0 { l } else { h };
        debug_assert!(p.sign_at(&witness) < 0);
        return Ok(Positivity::NotNonNeg { witness });
    }
    let mut zeros = Vec::new();
    if at_zero.is_zero() {
        zeros.push(ZeroLocation::Exact { at: zero.clone() });
    }
    for iv in roots {
        match enclose(&chain, &iv) {
            RootEnclosure::Exact(at) => zeros.push(ZeroLocation::Exact { at }),
            RootEnclosure::Open(..) => zeros.push(ZeroLocation::Isolated(iv)),
        }
    }
    Ok(Positivity::NonNegWithZeros { zeros })
}

/// Distinct roots of `p` in `[0, ∞)`, left to right.
pub fn nonneg_roots(p: &Poly) -> Vec<ZeroLocation> {
    if p.is_zero() {
        return Vec::new();
    }
    let zero = BigRational::zero();
    let mut out = Vec::new();
    if p.coeff(0).is_zero() {
        out.push(ZeroLocation::Exact { at: zero.clone() });
    }
    let chain = SturmChain::new(p).expect("nonzero");
    for iv in isolate_roots(&chain, &zero, &positive_root_bound(p)) {
        out.push(match enclose(&chain, &iv) {
            RootEnclosure::Exact(at) => ZeroLocation::Exact { at },
            RootEnclosure::Open(..) => ZeroLocation::Isolated(iv),
        });
    }
    out
}
