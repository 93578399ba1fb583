//! Benchmark fixtures.

use ricci_orbit::radial::{hessian_density, ricci};
use ricci_orbit::rational::ratio;
use ricci_orbit::{RadialDensity, RadialLogPotential};

/// Density of `log(1 + a·x + x²)`.
pub fn family_density(p: i64, q: i64) -> RadialDensity {
    hessian_density(&RadialLogPotential::family(&ratio(p, q))).expect("family is a metric")
}

/// `ρ^k` of the family density at `a = p/q`.
pub fn family_iterate(p: i64, q: i64, k: usize) -> RadialDensity {
    let mut v = family_density(p, q);
    for _ in 0..k {
        v = ricci(&v).expect("not Ricci-flat");
    }
    v
}
