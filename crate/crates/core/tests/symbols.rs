use num_rational::BigRational;
use proptest::prelude::*;
use tamechow::fields::{FunctionField, GlobalField, PrimePlace, RationalField};
use tamechow::ksymbols::{
    boundary_div, boundary_k2, cycle_degree, hilbert_product_check, k2q_components, rational_product_formula,
    tame_symbol, u_filtration_k2_class, weil_product, K2Level, SteinbergSymbol, ZeroCycle,
};
use tamechow::sample;

fn q(s: &str) -> BigRational {
    RationalField.parse_elem(s).unwrap()
}

fn qsym(f: &str, g: &str) -> SteinbergSymbol<BigRational> {
    SteinbergSymbol::new(&RationalField, q(f), q(g)).unwrap()
}

fn p(n: u64) -> PrimePlace {
    PrimePlace::new(n).unwrap()
}

#[test]
fn tame_symbol_examples() {
    let t = tame_symbol(&RationalField, &p(5), &qsym("5", "2")).unwrap();
    assert_eq!(t.0.coeff(0), 3);
    assert_eq!(tame_symbol(&RationalField, &p(7), &qsym("2", "3")).unwrap().0.coeff(0), 1);
    let k = FunctionField::new(3).unwrap();
    let s = SteinbergSymbol::parse(&k, "t;t+1").unwrap();
    let v = k.parse_place("t+1").unwrap();
    assert_eq!(tame_symbol(&k, &v, &s).unwrap().0.coeff(0), 2);
}

#[test]
fn boundary_examples() {
    let d = boundary_div(&RationalField, &q("12/5")).unwrap();
    assert_eq!(d, ZeroCycle::from_terms([(p(2), 2), (p(3), 1), (p(5), -1)]));
    assert!(boundary_div(&RationalField, &q("1")).unwrap().is_zero());
    let k = FunctionField::new(3).unwrap();
    let d = boundary_div(&k, &k.parse_elem("t/(t+1)").unwrap()).unwrap();
    let expect = ZeroCycle::from_terms([(k.parse_place("t").unwrap(), 1), (k.parse_place("t+1").unwrap(), -1)]);
    assert_eq!(d, expect);

    let b = boundary_k2(&RationalField, &qsym("2", "3")).unwrap();
    assert_eq!(b.into_iter().collect::<Vec<_>>(), vec![(p(2), 1), (p(3), 2)]);
    let s = SteinbergSymbol::parse(&k, "t;t+1").unwrap();
    let b = boundary_k2(&k, &s).unwrap();
    let got: Vec<(String, u64)> = b.iter().map(|(v, x)| (k.place_to_string(v), *x)).collect();
    assert_eq!(got, vec![("(t)".into(), 1), ("(t+1)".into(), 2), ("inf".into(), 2)]);
    assert_eq!(weil_product(&k, &s).unwrap(), 1);
}

#[test]
fn k2q_examples() {
    let c = k2q_components(&qsym("-1", "-1")).unwrap();
    assert_eq!((c.sign, c.odd.len()), (-1, 0));
    let c = k2q_components(&qsym("2", "3")).unwrap();
    assert_eq!(c.odd.get(&3), Some(&2));
    assert!(hilbert_product_check(&q("3"), &q("5")).unwrap());
    assert!(hilbert_product_check(&q("-1"), &q("-1")).unwrap());
    assert!(hilbert_product_check(&q("1"), &q("-7/3")).unwrap());
}

#[test]
fn filtration_examples() {
    let (t, l) = u_filtration_k2_class(&RationalField, &p(5), &qsym("26", "2")).unwrap();
    assert_eq!((t.0.coeff(0), l), (1, K2Level::AtLeastOne));
    let (t, l) = u_filtration_k2_class(&RationalField, &p(5), &qsym("5", "2")).unwrap();
    assert_eq!((t.0.coeff(0), l), (3, K2Level::Zero));
    let (t, l) = u_filtration_k2_class(&RationalField, &p(5), &qsym("2", "3")).unwrap();
    assert_eq!((t.0.coeff(0), l), (1, K2Level::Zero));
}

#[test]
fn weil_reciprocity_for_constants_and_negatives() {
    let mut rng = sample::rng(9);
    for qq in [2u64, 4, 7, 8, 25] {
        let k = FunctionField::new(qq).unwrap();
        for _ in 0..40 {
            let f = sample::random_ratfunc(&k, &mut rng, 5);
            let c = sample::random_ratfunc(&k, &mut rng, 0);
            let s = SteinbergSymbol::new(&k, c, f.clone()).unwrap();
            assert_eq!(weil_product(&k, &s).unwrap(), 1);
            let s = SteinbergSymbol::new(&k, f.clone(), k.neg(&f)).unwrap();
            assert_eq!(weil_product(&k, &s).unwrap(), 1);
            assert_eq!(cycle_degree(&k, &boundary_div(&k, &f).unwrap()), 0);
        }
    }
}

proptest! {
    #[test]
    fn hilbert_products_are_one(a in -5000i64..5000, b in 1i64..5000, c in -5000i64..5000, d in 1i64..5000) {
        prop_assume!(a != 0 && c != 0);
        let x = BigRational::new(a.into(), b.into());
        let y = BigRational::new(c.into(), d.into());
        prop_assert!(hilbert_product_check(&x, &y).unwrap());
        prop_assert!(rational_product_formula(&x).unwrap());
    }

    #[test]
    fn divisor_map_is_a_homomorphism(a in 1i64..10_000, b in 1i64..10_000, c in 1i64..10_000) {
        let x = BigRational::new(a.into(), b.into());
        let y = BigRational::new(c.into(), 7.into());
        let lhs = boundary_div(&RationalField, &(&x * &y)).unwrap();
        let rhs = boundary_div(&RationalField, &x).unwrap().add(&boundary_div(&RationalField, &y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn k2q_components_are_multiplicative(a in 1i64..500, b in 1i64..500, c in 1i64..500) {
        let f1 = BigRational::from_integer(a.into());
        let f2 = BigRational::from_integer((-b).into());
        let g = BigRational::from_integer(c.into());
        let s12 = SteinbergSymbol::new(&RationalField, &f1 * &f2, g.clone()).unwrap();
        let s1 = SteinbergSymbol::new(&RationalField, f1, g.clone()).unwrap();
        let s2 = SteinbergSymbol::new(&RationalField, f2, g).unwrap();
        let (c12, c1, c2) = (k2q_components(&s12).unwrap(), k2q_components(&s1).unwrap(), k2q_components(&s2).unwrap());
        prop_assert_eq!(c12.sign, c1.sign * c2.sign);
        for (pp, t) in &c12.odd {
            let x = c1.odd.get(pp).copied().unwrap_or(1) * c2.odd.get(pp).copied().unwrap_or(1) % pp;
            prop_assert_eq!(*t, x);
        }
    }
}
