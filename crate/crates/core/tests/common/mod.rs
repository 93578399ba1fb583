use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use ricci_orbit::radial::hessian_density;
use ricci_orbit::rational::{int, ratio};
use ricci_orbit::{BigInt, BigRational, Poly, RadialDensity, RadialLogPotential};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ max_num`, `1 ≤ q ≤ max_den`.
pub fn signed_rational(rng: &mut StdRng, max_num: i64, max_den: i64) -> BigRational {
    ratio(
        rng.gen_range(-max_num..=max_num),
        rng.gen_range(1..=max_den),
    )
}

/// `p/q` with `1 ≤ p ≤ max_num`, `1 ≤ q ≤ max_den`.
pub fn positive_rational(rng: &mut StdRng, max_num: i64, max_den: i64) -> BigRational {
    ratio(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

/// Rational strictly inside `(lo, hi)` with denominator at most 400.
pub fn rational_between(rng: &mut StdRng, lo: &BigRational, hi: &BigRational) -> BigRational {
    loop {
        let q = rng.gen_range(2..=400i64);
        let scaled_lo = (lo * int(q)).floor().to_integer();
        let p = scaled_lo + BigInt::from(rng.gen_range(1..=q));
        let a = BigRational::new(p, BigInt::from(q));
        if lo < &a && &a < hi {
            return a;
        }
    }
}

/// Signed coefficients, exact degree `deg`.
pub fn random_poly(rng: &mut StdRng, deg: usize) -> Poly {
    let mut c: Vec<BigRational> = (0..=deg).map(|_| signed_rational(rng, 9, 4)).collect();
    while c[deg] == int(0) {
        c[deg] = signed_rational(rng, 9, 4);
    }
    Poly::new(c)
}

/// Signed coefficients with `P(0) = 1`, exact degree `deg`.
pub fn normalized_poly(rng: &mut StdRng, deg: usize) -> Poly {
    let mut c = random_poly(rng, deg).into_coeffs();
    c[0] = int(1);
    Poly::new(c)
}

/// `P(0) = 1` and every coefficient positive, exact degree `deg`.
pub fn positive_poly(rng: &mut StdRng, deg: usize) -> Poly {
    let mut c = vec![int(1)];
    c.extend((1..=deg).map(|_| positive_rational(rng, 9, 4)));
    Poly::new(c)
}

pub fn poly(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

pub fn family_density(a: &BigRational) -> RadialDensity {
    hessian_density(&RadialLogPotential::family(a)).unwrap()
}

/// `a` with `a² > 2` and `a < 2`.
pub fn rational_above_sqrt2(rng: &mut StdRng) -> BigRational {
    loop {
        let q = rng.gen_range(2..=60);
        let p = rng.gen_range(q + 1..2 * q);
        let a = ratio(p, q);
        if &a * &a > int(2) {
            return a;
        }
    }
}

pub fn binomial(n: u64, j: u64) -> i64 {
    (0..j).fold(1u64, |acc, i| acc * (n - i) / (i + 1)) as i64
}
