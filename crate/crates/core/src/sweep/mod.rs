//! Symbolic sweeps of the family `log(1 + a·x + x²)` over the parameter `a`.

pub mod bivar;
pub mod certify;
pub mod symbolic;

pub use bivar::BivarPoly;
pub use certify::{
    coeff_positivity_interval, kahler_interval, x_coeffs_at_sqrt, CertifiedInterval,
    IntervalProperty, SweepOptions, SweepReport,
};
pub use symbolic::{
    symbolic_iterate, DegreeRow, FactoredDensity, SymbolicStep, DEFAULT_SIZE_LIMIT, MAX_DEPTH,
};
