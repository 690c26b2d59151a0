use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;
use tamechow::lattice::{cokernel_invariants, induced_hom, smith_normal_form, FinAbGroup, IntMatrix, Presentation};
use tamechow::oracles::cokernel_by_enumeration;
use tamechow::Error;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-10i64..=10, 4), 4)
}

#[test]
fn documented_examples() {
    let id = IntMatrix::identity(3);
    assert!(cokernel_invariants(&id, 3).unwrap().is_trivial());
    let a = IntMatrix::from_rows(&[vec![6]]).unwrap();
    assert_eq!(cokernel_invariants(&a, 1).unwrap().invariant_factors(), ints(&[6]));
    let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
    assert_eq!(smith_normal_form(&a).diagonal(), ints(&[1, 6]));
    let a = IntMatrix::from_rows(&[vec![2, 1], vec![0, 2]]).unwrap();
    assert_eq!(smith_normal_form(&a).diagonal(), ints(&[1, 4]));
}

#[test]
fn empty_conventions() {
    assert!(Presentation::new(0, IntMatrix::zeros(0, 0)).quotient().unwrap().group.is_trivial());
    assert!(matches!(cokernel_invariants(&IntMatrix::zeros(1, 0), 1), Err(Error::InfiniteCokernel { .. })));
}

#[test]
fn induced_hom_examples() {
    let src = Presentation::free_cyclic(&ints(&[7]));
    let z14 = FinAbGroup::from_invariant_factors(ints(&[14])).unwrap();
    assert!(induced_hom(&src, &z14, &[ints(&[2])]).is_ok());
    assert_eq!(induced_hom(&src, &z14, &[ints(&[1])]).unwrap_err(), Error::RelationViolated(0));
    let trivial = Presentation::new(0, IntMatrix::zeros(0, 0));
    assert!(induced_hom(&trivial, &z14, &[]).is_ok());
}

proptest! {
    #[test]
    fn snf_transforms_are_exact(rows in matrix()) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert_eq!(s.u.determinant().unwrap().magnitude().clone(), 1u32.into());
        prop_assert_eq!(s.v.determinant().unwrap().magnitude().clone(), 1u32.into());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
    }

    #[test]
    fn order_matches_coset_count(rows in matrix()) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let det = a.determinant().unwrap();
        let bound: num_bigint::BigUint = 2000u32.into();
        prop_assume!(!det.is_zero() && det.magnitude() <= &bound);
        let g = cokernel_invariants(&a, 4).unwrap();
        let slow = cokernel_by_enumeration(&a).unwrap();
        prop_assert_eq!(g.invariant_factors(), slow.as_slice());
    }

    #[test]
    fn unimodular_invariance(rows in matrix(), i in 0usize..4, j in 0usize..4, k in -3i64..=3) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        prop_assume!(!a.determinant().unwrap().is_zero());
        let base = cokernel_invariants(&a, 4).unwrap();
        let mut b = a.clone();
        b.swap_rows(i, j);
        b.swap_cols(j, (i + 1) % 4);
        if i != j {
            b.add_col_multiple(i, j, &BigInt::from(k));
        }
        prop_assert_eq!(cokernel_invariants(&b, 4).unwrap(), base);
    }
}
