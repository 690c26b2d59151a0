use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use tamechow::chow::{
    chrelfinite_check, check_relation_vanishes, parse_modulus, random_relation_members, relative_chow, Variant,
};
use tamechow::fields::arith::{euler_phi, is_squarefree, primes_up_to};
use tamechow::fields::{PrimePlace, QuadraticField, RationalField};
use tamechow::ksymbols::{boundary_div, ZeroCycle};
use tamechow::reciprocity::{rec, GaloisTarget};
use tamechow::sample;

#[test]
fn orders_are_phi_and_half_phi() {
    for m in (1..=200u64).filter(|&m| is_squarefree(m as i64)) {
        let n = relative_chow(&RationalField, &parse_modulus(&RationalField, &m.to_string(), Variant::Narrow).unwrap())
            .unwrap();
        let o = relative_chow(&RationalField, &parse_modulus(&RationalField, &m.to_string(), Variant::Ordinary).unwrap())
            .unwrap();
        let phi = euler_phi(m);
        assert_eq!(n.order(), BigInt::from(phi), "m={m}");
        assert_eq!(o.order(), BigInt::from(if m > 2 { phi / 2 } else { phi }), "m={m}");
    }
}

#[test]
fn monotone_along_divisor_chains() {
    for chain in [[1u64, 7, 35, 105], [2, 6, 30, 210], [1, 3, 33, 165]] {
        for v in [Variant::Narrow, Variant::Ordinary] {
            let groups: Vec<_> = chain
                .iter()
                .map(|m| relative_chow(&RationalField, &parse_modulus(&RationalField, &m.to_string(), v).unwrap()).unwrap())
                .collect();
            for w in groups.windows(2) {
                let (small, big) = (&w[0], &w[1]);
                assert!(big.order().is_multiple_of(&small.order()));
                for p in primes_up_to(100).into_iter().filter(|p| chain[3] % p != 0) {
                    let pl = PrimePlace::new(p).unwrap();
                    let a = small.group().element_order(&small.prime_class(&pl).unwrap());
                    let b = big.group().element_order(&big.prime_class(&pl).unwrap());
                    assert!(b.is_multiple_of(&a), "p={p} chain={chain:?}");
                }
            }
        }
    }
}

#[test]
fn quadratic_monotonicity_and_exactness() {
    let k = QuadraticField::new(-5).unwrap();
    let small = relative_chow(&k, &parse_modulus(&k, "(3, 1+sqrt(-5))", Variant::Ordinary).unwrap()).unwrap();
    let big = relative_chow(&k, &parse_modulus(&k, "3, 7", Variant::Ordinary).unwrap()).unwrap();
    assert!(big.order().is_multiple_of(&small.order()));
    for m in ["1", "3", "(7, 3+sqrt(-5))", "3, 7"] {
        let md = parse_modulus(&k, m, Variant::Ordinary).unwrap();
        assert!(chrelfinite_check(&k, &md).unwrap().passed(), "{m}");
    }
    let r = QuadraticField::new(3).unwrap();
    for v in [Variant::Narrow, Variant::Ordinary] {
        let md = parse_modulus(&r, "(11, 5+sqrt(3)), 13", v).unwrap();
        assert!(chrelfinite_check(&r, &md).unwrap().passed());
    }
}

#[test]
fn relation_members_vanish_in_quadratic_fields() {
    let mut rng = sample::rng(11);
    for (d, m) in [(-1, "(5, 2+i), 3"), (-5, "(3, 1+sqrt(-5))"), (3, "13"), (5, "11")] {
        let k = QuadraticField::new(d).unwrap();
        for v in [Variant::Narrow, Variant::Ordinary] {
            let md = parse_modulus(&k, m, v).unwrap();
            let g = relative_chow(&k, &md).unwrap();
            for f in random_relation_members(&k, &md, &mut rng, 30, 15) {
                assert!(check_relation_vanishes(&f, &g).unwrap(), "d={d} m={m} f={f}");
            }
        }
    }
}

#[test]
fn kernel_soundness_of_rec() {
    let mut rng = sample::rng(3);
    for m in [7u64, 15, 30, 105, 143] {
        for v in [Variant::Narrow, Variant::Ordinary] {
            let md = parse_modulus(&RationalField, &m.to_string(), v).unwrap();
            let t = GaloisTarget::new(&md);
            for f in random_relation_members(&RationalField, &md, &mut rng, 100, 500) {
                let c = boundary_div(&RationalField, &f).unwrap();
                assert!(t.group().is_zero(&rec(&c, &md).unwrap()), "m={m} f={f}");
            }
        }
    }
}

proptest! {
    #[test]
    fn cycle_class_is_additive(a in prop::collection::vec((0usize..15, -3i64..=3), 0..6),
                                b in prop::collection::vec((0usize..15, -3i64..=3), 0..6)) {
        let md = parse_modulus(&RationalField, "105", Variant::Narrow).unwrap();
        let g = relative_chow(&RationalField, &md).unwrap();
        let primes: Vec<PrimePlace> = primes_up_to(100).into_iter().filter(|p| 105 % p != 0)
            .map(|p| PrimePlace::new(p).unwrap()).collect();
        let cyc = |v: &[(usize, i64)]| ZeroCycle::from_terms(v.iter().map(|&(i, n)| (primes[i], n)));
        let (ca, cb) = (cyc(&a), cyc(&b));
        let sum = g.cycle_class(&ca.add(&cb)).unwrap();
        let parts = g.group().add(&g.cycle_class(&ca).unwrap(), &g.cycle_class(&cb).unwrap());
        prop_assert_eq!(sum, parts);
        let t = GaloisTarget::new(&md);
        let r = rec(&ca.add(&cb), &md).unwrap();
        prop_assert_eq!(r, t.group().add(&rec(&ca, &md).unwrap(), &rec(&cb, &md).unwrap()));
    }
}
