//! Global fields of the three supported kinds, their finite places,
//! valuations, residue maps and unit filtrations.

pub mod arith;
mod expr;
mod finite;
pub mod forms;
mod fqpoly;
mod function;
mod quadratic;
mod rational;
mod residue;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

pub use finite::FiniteField;
pub use fqpoly::Poly;
pub use function::{FunctionField, FunctionPlace, RatFunc};
pub use quadratic::{Ideal, Integral, QuadElem, QuadPrime, QuadraticField, Splitting};
pub use rational::{parse_rational, PrimePlace, RationalField};
pub use residue::{DiscreteLog, ResidueElem, ResidueField};

use crate::error::{Error, Result};
use crate::lattice::{FinAbGroup, GroupElem};

/// Field operations, finite places and their residue maps.
pub trait GlobalField: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;
    type Place: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display;

    fn describe(&self) -> String;

    /// Human-readable place name; defaults to `Display`.
    fn place_to_string(&self, v: &Self::Place) -> String {
        v.to_string()
    }

    fn elem_to_string(&self, x: &Self::Elem) -> String {
        x.to_string()
    }

    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    fn pow(&self, x: &Self::Elem, e: i64) -> Result<Self::Elem> {
        let mut base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        Ok(acc)
    }

    fn is_one(&self, x: &Self::Elem) -> bool {
        *x == self.one()
    }

    /// Normalized discrete valuation at a finite place.
    fn valuation(&self, v: &Self::Place, x: &Self::Elem) -> Result<i64>;

    fn residue_field(&self, v: &Self::Place) -> ResidueField;

    /// Image in the residue field; `x` must be a unit at `v`.
    fn residue(&self, v: &Self::Place, x: &Self::Elem) -> Result<ResidueElem>;

    /// An element that is integral at `v` with the given residue.
    fn lift_residue(&self, v: &Self::Place, r: &ResidueElem) -> Self::Elem;

    /// Places where `x` has nonzero valuation, sorted.
    fn support(&self, x: &Self::Elem) -> Result<Vec<Self::Place>>;

    /// Degree of the residue field over the base (F_p, or F_q for F_q(t)).
    fn place_degree(&self, v: &Self::Place) -> usize {
        self.residue_field(v).degree()
    }

    /// Element with prescribed nonzero residues at distinct places (no
    /// postcondition checking here; see [`weak_approx`]).
    fn approximate(&self, targets: &[(Self::Place, ResidueElem)]) -> Result<Self::Elem>;

    /// All finite places of norm (number fields) or degree (function fields)
    /// up to `bound`, in a deterministic order.
    fn enumerate_places(&self, bound: u64) -> Result<Vec<Self::Place>>;

    fn parse_place(&self, s: &str) -> Result<Self::Place>;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;

    /// Number of real embeddings.
    fn real_places(&self) -> usize {
        0
    }

    /// Whether `x` is positive at the `i`-th real embedding.
    fn is_positive_at(&self, _i: usize, _x: &Self::Elem) -> bool {
        unreachable!("field has no real places")
    }

    fn is_totally_positive(&self, x: &Self::Elem) -> bool {
        (0..self.real_places()).all(|i| self.is_positive_at(i, x))
    }

    /// Narrow (totally positive) moduli make sense only for number fields.
    fn supports_narrow(&self) -> bool;
}

/// Number fields (ℚ and quadratic fields): the data the ray class
/// sequence needs beyond [`GlobalField`].
pub trait NumberField: GlobalField {
    /// Places above the rational prime `p`, with ramification indices.
    fn places_over(&self, p: u64) -> Result<Vec<(Self::Place, u32)>>;

    /// The rational prime below `v`.
    fn residue_characteristic(&self, v: &Self::Place) -> u64;

    /// Absolute norm of `v`.
    fn place_norm(&self, v: &Self::Place) -> u64 {
        self.residue_characteristic(v).pow(self.place_degree(v) as u32)
    }

    /// The ideal class group.
    fn class_group(&self) -> &FinAbGroup;

    /// Class of the prime ideal of `v` in [`NumberField::class_group`].
    fn place_class(&self, v: &Self::Place) -> Result<GroupElem>;

    /// A generator of `∏ v^e` when that ideal is principal.
    fn generator_of(&self, factors: &[(Self::Place, u64)]) -> Result<Option<Self::Elem>>;

    /// Generators of the unit group of the ring of integers.
    fn unit_generators(&self) -> Vec<Self::Elem>;

    /// A ℤ-basis of the ring of integers.
    fn integral_basis(&self) -> Vec<Self::Elem>;

    /// An element `≡ 1 mod m` that is negative at the `i`-th real embedding
    /// and positive at the others.
    fn sign_witness(&self, i: usize, m: &num_bigint::BigInt) -> Self::Elem;
}

/// Level in the filtration `U^0 ⊇ U^1 ⊇ U^2 ⊇ ...` of the units at a place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum UnitFiltrationLevel {
    /// Largest `i` with `x` in `U^i`.
    Exact(u32),
    /// `x = 1`, which lies in every `U^i`.
    Infinite,
}

impl UnitFiltrationLevel {
    pub fn is_principal(self) -> bool {
        self != UnitFiltrationLevel::Exact(0)
    }
}

/// Largest `i` with `x ∈ U^i` at `v`; `x` must be a unit at `v`.
pub fn principal_unit_level<F: GlobalField>(field: &F, v: &F::Place, x: &F::Elem) -> Result<UnitFiltrationLevel> {
    if field.is_zero(x) {
        return Err(Error::ZeroElement);
    }
    if field.valuation(v, x)? != 0 {
        return Err(Error::NotAUnit(field.place_to_string(v)));
    }
    let kv = field.residue_field(v);
    if !kv.is_one(&field.residue(v, x)?) {
        return Ok(UnitFiltrationLevel::Exact(0));
    }
    let y = field.sub(x, &field.one());
    if field.is_zero(&y) {
        return Ok(UnitFiltrationLevel::Infinite);
    }
    Ok(UnitFiltrationLevel::Exact(field.valuation(v, &y)? as u32))
}

/// Norm from the residue field of `v` to its base field.
pub fn residue_norm<F: GlobalField>(field: &F, v: &F::Place, a: &ResidueElem) -> u64 {
    field.residue_field(v).norm(a)
}

/// Element with valuation 0 and the prescribed residue at each listed place.
pub fn weak_approx<F: GlobalField>(field: &F, targets: &[(F::Place, ResidueElem)]) -> Result<F::Elem> {
    for (i, (v, t)) in targets.iter().enumerate() {
        if targets[..i].iter().any(|(w, _)| w == v) {
            return Err(Error::DuplicatePlace(field.place_to_string(v)));
        }
        if field.residue_field(v).is_zero(t) {
            return Err(Error::Invalid(format!("target residue at {} must be nonzero", field.place_to_string(v))));
        }
    }
    let f = field.approximate(targets)?;
    debug_assert!(targets.iter().all(|(v, t)| field.residue(v, &f).as_ref() == Ok(t)));
    Ok(f)
}

/// The kinds of global field this crate supports, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Quadratic(i64),
    Function(u64),
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(d) = s.strip_prefix("Qsqrt:") {
            let d = d.parse().map_err(|_| Error::Parse(format!("bad discriminant in {s:?}")))?;
            return Ok(FieldSpec::Quadratic(d));
        }
        if let Some(q) = s.strip_prefix("Fq:") {
            let q = q.parse().map_err(|_| Error::Parse(format!("bad field order in {s:?}")))?;
            return Ok(FieldSpec::Function(q));
        }
        Err(Error::Parse(format!("unknown field {s:?}; expected Q, Qsqrt:<d> or Fq:<q>")))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Quadratic(d) => write!(f, "Qsqrt:{d}"),
            FieldSpec::Function(q) => write!(f, "Fq:{q}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("Qsqrt:-5".parse::<FieldSpec>().unwrap(), FieldSpec::Quadratic(-5));
        assert_eq!("Fq:9".parse::<FieldSpec>().unwrap(), FieldSpec::Function(9));
        assert!("R".parse::<FieldSpec>().is_err());
    }
}
