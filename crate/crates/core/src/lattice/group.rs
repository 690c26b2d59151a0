use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::snf::smith_normal_form;
use super::IntMatrix;
use crate::error::{Error, Result};

/// Element of a [`FinAbGroup`], given by coordinates against the invariant
/// factor generators.
pub type GroupElem = Vec<BigInt>;

/// Finite abelian group `Z/d1 x ... x Z/dk` with `d1 | d2 | ... | dk`, every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FinAbGroup {
    invariant_factors: Vec<BigInt>,
    generator_images: BTreeMap<String, GroupElem>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Validates the divisibility chain; factors equal to 1 are rejected, not dropped.
    pub fn from_invariant_factors(factors: Vec<BigInt>) -> Result<Self> {
        if let Some(bad) = factors.iter().find(|d| **d < BigInt::from(2)) {
            return Err(Error::Invalid(format!("invariant factor {bad} is not >= 2")));
        }
        if factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::Invalid(format!("invariant factors {factors:?} do not form a divisibility chain")));
        }
        Ok(FinAbGroup { invariant_factors: factors, generator_images: BTreeMap::new() })
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn zero(&self) -> GroupElem {
        vec![BigInt::zero(); self.rank()]
    }

    pub fn reduce(&self, v: &[BigInt]) -> GroupElem {
        assert_eq!(v.len(), self.rank(), "coordinate vector has wrong length");
        v.iter().zip(&self.invariant_factors).map(|(x, d)| x.mod_floor(d)).collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> GroupElem {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, a: &[BigInt], k: &BigInt) -> GroupElem {
        let s: Vec<BigInt> = a.iter().map(|x| x * k).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[BigInt]) -> GroupElem {
        self.scale(a, &BigInt::from(-1))
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        a.iter().zip(&self.invariant_factors).all(|(x, d)| x.is_multiple_of(d))
    }

    pub fn element_order(&self, a: &[BigInt]) -> BigInt {
        a.iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| d / x.gcd(d))
            .fold(BigInt::one(), |acc, o| acc.lcm(&o))
    }

    /// Quotient of this group by the subgroup generated by `elems`.
    pub fn quotient_by(&self, elems: &[GroupElem]) -> Result<Quotient> {
        let k = self.rank();
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(k + elems.len());
        for (i, d) in self.invariant_factors.iter().enumerate() {
            let mut c = vec![BigInt::zero(); k];
            c[i] = d.clone();
            cols.push(c);
        }
        cols.extend(elems.iter().cloned());
        Presentation::new(k, IntMatrix::from_columns(k, &cols)?).quotient()
    }

    /// Order of the subgroup generated by `elems`.
    pub fn subgroup_order(&self, elems: &[GroupElem]) -> Result<BigInt> {
        let q = self.quotient_by(elems)?;
        Ok(self.order() / q.group.order())
    }

    /// Integer coefficients `x` with `sum x_j * gens[j] == target`, if any.
    pub fn express(&self, gens: &[GroupElem], target: &[BigInt]) -> Option<Vec<BigInt>> {
        let k = self.rank();
        let mut cols: Vec<Vec<BigInt>> = gens.to_vec();
        for (i, d) in self.invariant_factors.iter().enumerate() {
            let mut c = vec![BigInt::zero(); k];
            c[i] = d.clone();
            cols.push(c);
        }
        let a = IntMatrix::from_columns(k, &cols).ok()?;
        let z = solve_integer(&a, target)?;
        Some(z[..gens.len()].to_vec())
    }

    pub fn set_generator_image(&mut self, name: impl Into<String>, v: GroupElem) {
        let v = self.reduce(&v);
        self.generator_images.insert(name.into(), v);
    }

    pub fn generator_images(&self) -> &BTreeMap<String, GroupElem> {
        &self.generator_images
    }

    /// Enumerates every element; intended for small groups only.
    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out = vec![self.zero()];
        for (i, d) in self.invariant_factors.iter().enumerate() {
            let mut next = Vec::new();
            for e in &out {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut e2 = e.clone();
                    e2[i] = k.clone();
                    next.push(e2);
                    k += 1;
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.invariant_factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for FinAbGroup {
    // integers go out as strings so that large orders survive JSON consumers
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let factors: Vec<String> = self.invariant_factors.iter().map(ToString::to_string).collect();
        let mut st = serializer.serialize_struct("FinAbGroup", 2)?;
        st.serialize_field("invariant_factors", &factors)?;
        st.serialize_field("order", &self.order().to_string())?;
        st.end()
    }
}

/// Abelian group given by generators and relations: `Z^generators / column-span(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relations: IntMatrix,
}

impl Presentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation matrix needs one row per generator");
        Presentation { generators, relations }
    }

    pub fn free_cyclic(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let mut rel = IntMatrix::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            rel[(i, i)] = d.clone();
        }
        Presentation::new(n, rel)
    }

    pub fn quotient(&self) -> Result<Quotient> {
        let snf = smith_normal_form(&self.relations);
        if snf.rank < self.generators {
            return Err(Error::InfiniteCokernel { rank: snf.rank, ambient: self.generators });
        }
        let diag = snf.diagonal();
        let kept: Vec<usize> = (0..self.generators).filter(|&i| !diag[i].is_one()).collect();
        let factors: Vec<BigInt> = kept.iter().map(|&i| diag[i].clone()).collect();
        let mut projection = IntMatrix::zeros(kept.len(), self.generators);
        for (r, &i) in kept.iter().enumerate() {
            for j in 0..self.generators {
                projection[(r, j)] = snf.u[(i, j)].clone();
            }
        }
        let group = FinAbGroup::from_invariant_factors(factors)?;
        Ok(Quotient { group, projection })
    }
}

/// The finite group presented by a [`Presentation`], together with the map
/// sending generator-coefficient vectors to group coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FinAbGroup,
    pub projection: IntMatrix,
}

impl Quotient {
    pub fn class_of(&self, v: &[BigInt]) -> GroupElem {
        self.group.reduce(&self.projection.mul_vec(v))
    }

    pub fn generator_class(&self, i: usize) -> GroupElem {
        self.group.reduce(&self.projection.column(i))
    }
}

/// Invariant factors of `Z^ambient_rank / column-span(a)`.
pub fn cokernel_invariants(a: &IntMatrix, ambient_rank: usize) -> Result<FinAbGroup> {
    if a.rows() != ambient_rank {
        return Err(Error::DimensionMismatch(format!(
            "relation matrix has {} rows, ambient rank is {ambient_rank}",
            a.rows()
        )));
    }
    Ok(Presentation::new(ambient_rank, a.clone()).quotient()?.group)
}

/// Solves `a x = b` over the integers.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            let d = &s.d[(i, i)];
            if !c.is_multiple_of(d) {
                return None;
            }
            y[i] = c / d;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// A basis of the integer kernel `{x : a x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a);
    (s.rank..a.cols()).map(|j| s.v.column(j)).collect()
}

/// Homomorphism out of a presented group, stored as the images of its generators.
#[derive(Clone, Debug)]
pub struct Hom {
    target: FinAbGroup,
    images: Vec<GroupElem>,
}

/// Validates that `images` respects every relation of `source` and returns the map.
pub fn induced_hom(source: &Presentation, target: &FinAbGroup, images: &[GroupElem]) -> Result<Hom> {
    if images.len() != source.generators {
        return Err(Error::DimensionMismatch(format!(
            "{} images for {} generators",
            images.len(),
            source.generators
        )));
    }
    if let Some(bad) = images.iter().find(|v| v.len() != target.rank()) {
        return Err(Error::DimensionMismatch(format!(
            "image has {} coordinates, target rank is {}",
            bad.len(),
            target.rank()
        )));
    }
    let hom = Hom { target: target.clone(), images: images.iter().map(|v| target.reduce(v)).collect() };
    for r in 0..source.relations.cols() {
        if !target.is_zero(&hom.apply(&source.relations.column(r))) {
            return Err(Error::RelationViolated(r));
        }
    }
    Ok(hom)
}

impl Hom {
    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn images(&self) -> &[GroupElem] {
        &self.images
    }

    /// Image of the element with generator coefficients `v`.
    pub fn apply(&self, v: &[BigInt]) -> GroupElem {
        assert_eq!(v.len(), self.images.len());
        let mut acc = self.target.zero();
        for (c, img) in v.iter().zip(&self.images) {
            if !c.is_zero() {
                acc = self.target.add(&acc, &self.target.scale(img, c));
            }
        }
        acc
    }

    pub fn image_order(&self) -> Result<BigInt> {
        self.target.subgroup_order(&self.images)
    }

    /// Bijectivity check against the source presentation (orders must agree
    /// and the images must generate the target).
    pub fn is_bijective(&self, source: &Presentation) -> Result<bool> {
        let src = source.quotient()?.group.order();
        let tgt = self.target.order();
        Ok(src == tgt && self.image_order()? == tgt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel_invariants(&IntMatrix::identity(3), 3).unwrap();
        assert!(g.is_trivial());
        let g = cokernel_invariants(&IntMatrix::from_rows(&[vec![6]]).unwrap(), 1).unwrap();
        assert_eq!(g.invariant_factors(), ints(&[6]).as_slice());
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let g = cokernel_invariants(&a, 2).unwrap();
        assert_eq!(g.invariant_factors(), ints(&[6]).as_slice());
    }

    #[test]
    fn empty_conventions() {
        let g = cokernel_invariants(&IntMatrix::zeros(0, 0), 0).unwrap();
        assert!(g.is_trivial());
        let g = cokernel_invariants(&IntMatrix::zeros(0, 5), 0).unwrap();
        assert!(g.is_trivial());
        assert!(matches!(
            cokernel_invariants(&IntMatrix::zeros(2, 0), 2),
            Err(Error::InfiniteCokernel { rank: 0, ambient: 2 })
        ));
        let a = IntMatrix::from_rows(&[vec![2], vec![0]]).unwrap();
        assert!(matches!(cokernel_invariants(&a, 2), Err(Error::InfiniteCokernel { .. })));
    }

    #[test]
    fn induced_hom_examples() {
        let source = Presentation::free_cyclic(&ints(&[7]));
        let target = FinAbGroup::from_invariant_factors(ints(&[14])).unwrap();
        let h = induced_hom(&source, &target, &[ints(&[2])]).unwrap();
        assert_eq!(h.apply(&ints(&[3])), ints(&[6]));
        assert_eq!(induced_hom(&source, &target, &[ints(&[1])]).unwrap_err(), Error::RelationViolated(0));

        let trivial = Presentation::new(0, IntMatrix::zeros(0, 0));
        let h = induced_hom(&trivial, &target, &[]).unwrap();
        assert_eq!(h.apply(&[]), ints(&[0]));
    }

    #[test]
    fn quotient_classes_and_orders() {
        // Z/4 x Z/2 presented as diag(4, 2); element (1, 1) has order 4
        let g = FinAbGroup::from_invariant_factors(ints(&[2, 4])).unwrap();
        assert_eq!(g.order(), BigInt::from(8));
        assert_eq!(g.element_order(&ints(&[1, 1])), BigInt::from(4));
        assert_eq!(g.subgroup_order(&[ints(&[1, 2])]).unwrap(), BigInt::from(2));
        assert_eq!(g.elements().len(), 8);
        let x = g.express(&[ints(&[1, 0]), ints(&[0, 1])], &ints(&[1, 3])).unwrap();
        assert_eq!(g.reduce(&[x[0].clone(), x[1].clone()]), ints(&[1, 3]));
        assert!(g.express(&[ints(&[0, 2])], &ints(&[0, 1])).is_none());
    }

    #[test]
    fn kernel_and_solve() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 6]]).unwrap();
        let ker = integer_kernel(&a);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(a.mul_vec(k)[0].is_zero());
        }
        assert!(solve_integer(&a, &ints(&[3])).is_none());
        let x = solve_integer(&a, &ints(&[10])).unwrap();
        assert_eq!(a.mul_vec(&x), ints(&[10]));
    }

    #[test]
    fn rejects_bad_chains() {
        assert!(FinAbGroup::from_invariant_factors(ints(&[2, 3])).is_err());
        assert!(FinAbGroup::from_invariant_factors(ints(&[1, 3])).is_err());
    }

    #[test]
    fn json_shape() {
        let g = FinAbGroup::from_invariant_factors(ints(&[2, 4])).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"invariant_factors":["2","4"],"order":"8"}"#);
        let abs = g.reduce(&ints(&[-1, 9]));
        assert_eq!(abs, ints(&[1, 1]));
        assert!(abs.iter().all(|x| x.sign() != num_bigint::Sign::Minus));
    }
}
