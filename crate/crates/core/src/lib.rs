//! Exact Kähler–Ricci iterations of radial Kähler metrics on CP¹.
//!
//! A radial form `ω = (i/2)·v(|z|²)·dz∧dz̄` on the affine chart of CP¹ is
//! stored as a reduced rational function `v`. The crate computes Ricci forms
//! exactly, certifies when iterates stay Kähler, detects Kähler–Einstein
//! fixed points and projective inducedness, and sweeps the family
//! `log(1 + a·x + x²)` for certified intervals of the parameter.

pub mod error;
pub mod expr;
pub mod induced;
pub mod poly;
pub mod positivity;
pub mod quadratic;
pub mod quadrature;
pub mod radial;
pub mod ratfunc;
pub mod rational;
pub mod sturm;
pub mod sweep;
pub mod volume;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::Poly;
pub use positivity::{is_positive_on_nonneg_axis, Positivity, ZeroLocation};
pub use radial::{
    IterationOrbit, KahlerStatus, KahlerVerdict, RadialDensity, RadialLogPotential, Sign,
};
pub use ratfunc::RatFunc;
pub use sturm::{sturm_count_roots, ExtendedRational, IsolatingInterval, SturmChain};
