//! Seeded random inputs for property checks and the acceptance suite.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::chow::{Modulus, Variant};
use crate::fields::{FunctionField, NumberField, Poly, RatFunc};

pub use rand_chacha::ChaCha8Rng as SeededRng;

/// Default seed for reproducible suites.
pub const DEFAULT_SEED: u64 = 0x7a3e_c40d;

pub fn rng(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Polynomial of degree at most `max_deg` with uniformly random coefficients.
pub fn random_poly<R: Rng>(k: &FunctionField, rng: &mut R, max_deg: usize) -> Poly {
    let q = k.q();
    let deg = rng.gen_range(0..=max_deg);
    Poly::new((0..=deg).map(|_| rng.gen_range(0..q)).collect())
}

/// Nonzero rational function with numerator and denominator of degree at most `max_deg`.
pub fn random_ratfunc<R: Rng>(k: &FunctionField, rng: &mut R, max_deg: usize) -> RatFunc {
    loop {
        let n = random_poly(k, rng, max_deg);
        let d = random_poly(k, rng, max_deg);
        if n.is_zero() || d.is_zero() {
            continue;
        }
        return k.elem(n, d).expect("nonzero denominator");
    }
}

/// Nonzero rational with numerator and denominator bounded by `bound` in absolute value.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    loop {
        let n = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(1..=bound);
        if n != 0 {
            return BigRational::new(n.into(), d.into());
        }
    }
}

/// Random element of the ring of integers with coordinates in `[-bound, bound]`.
pub fn random_integral<F: NumberField, R: Rng>(field: &F, rng: &mut R, bound: i64) -> F::Elem {
    field
        .integral_basis()
        .iter()
        .fold(field.from_i64(0), |acc, b| field.add(&acc, &field.mul(b, &field.from_i64(rng.gen_range(-bound..=bound)))))
}

/// Random element of the relation group of `m`: a quotient `(1 + Mx)/(1 + My)`
/// where `M` is the product of the primes under the modulus, retried until it is
/// totally positive for narrow moduli.
pub fn random_relation_member<F: NumberField, R: Rng>(field: &F, m: &Modulus<F>, rng: &mut R, bound: i64) -> F::Elem {
    let big_m: BigInt = m.places().iter().map(|v| BigInt::from(field.residue_characteristic(v))).product();
    let scale = field.from_i64(i64::try_from(big_m).expect("modulus fits in i64"));
    loop {
        let x = field.add(&field.one(), &field.mul(&scale, &random_integral(field, rng, bound)));
        let y = field.add(&field.one(), &field.mul(&scale, &random_integral(field, rng, bound)));
        if field.is_zero(&x) || field.is_zero(&y) {
            continue;
        }
        let f = field.div(&x, &y).expect("nonzero");
        if m.variant() == Variant::Narrow && !field.is_totally_positive(&f) {
            continue;
        }
        return f;
    }
}
