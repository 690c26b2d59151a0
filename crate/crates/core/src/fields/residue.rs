use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::arith::factor_u64;
use super::finite::FiniteField;
use super::fqpoly::{big_pow, Poly};

/// Residue field of a finite place: `base[x] / (modulus)` with `modulus`
/// monic irreducible over the base field (F_p for number fields, F_q for F_q(t)).
#[derive(Clone, Debug)]
pub struct ResidueField {
    base: Arc<FiniteField>,
    modulus: Poly,
}

/// Element of a [`ResidueField`], a reduced polynomial in the residue generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElem(pub Poly);

impl ResidueField {
    pub fn new(base: Arc<FiniteField>, modulus: Poly) -> Self {
        assert!(modulus.is_monic() && modulus.deg() >= 1, "residue modulus must be monic of positive degree");
        ResidueField { base, modulus }
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteField> {
        &self.base
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    /// Number of elements, `|base|^degree`.
    pub fn size(&self) -> BigUint {
        big_pow(self.base.order(), self.degree())
    }

    pub fn unit_group_order(&self) -> BigUint {
        self.size() - 1u32
    }

    pub fn one(&self) -> ResidueElem {
        ResidueElem(Poly::one())
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem(Poly::zero())
    }

    pub fn from_base(&self, c: u64) -> ResidueElem {
        ResidueElem(Poly::constant(c))
    }

    pub fn from_poly(&self, p: &Poly) -> ResidueElem {
        ResidueElem(p.rem(&self.base, &self.modulus))
    }

    pub fn is_zero(&self, a: &ResidueElem) -> bool {
        a.0.is_zero()
    }

    pub fn is_one(&self, a: &ResidueElem) -> bool {
        a.0.is_one()
    }

    pub fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueElem(a.0.add(&self.base, &b.0))
    }

    pub fn sub(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueElem(a.0.sub(&self.base, &b.0))
    }

    pub fn neg(&self, a: &ResidueElem) -> ResidueElem {
        ResidueElem(a.0.neg(&self.base))
    }

    pub fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueElem(a.0.mul_mod(&self.base, &b.0, &self.modulus))
    }

    pub fn inv(&self, a: &ResidueElem) -> Option<ResidueElem> {
        a.0.inv_mod(&self.base, &self.modulus).map(ResidueElem)
    }

    pub fn pow(&self, a: &ResidueElem, e: &BigUint) -> ResidueElem {
        ResidueElem(a.0.pow_mod(&self.base, e, &self.modulus))
    }

    /// `a^e` for a signed exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_i64(&self, a: &ResidueElem, e: i64) -> ResidueElem {
        let b = if e < 0 { self.inv(a).expect("negative power of zero") } else { a.clone() };
        self.pow(&b, &BigUint::from(e.unsigned_abs()))
    }

    /// Norm to the base field, `a^((Q-1)/(q-1))` with `Q = q^degree`.
    pub fn norm(&self, a: &ResidueElem) -> u64 {
        if self.degree() == 1 {
            return a.0.coeff(0);
        }
        let q = self.base.order();
        let e = (self.size() - 1u32) / BigUint::from(q - 1);
        let n = self.pow(a, &e);
        debug_assert!(n.0.degree().is_none_or(|d| d == 0), "norm must land in the base field");
        n.0.coeff(0)
    }

    /// Elements as base-field constants when the residue degree is 1.
    pub fn as_base(&self, a: &ResidueElem) -> Option<u64> {
        (a.0.degree().is_none_or(|d| d == 0)).then(|| a.0.coeff(0))
    }

    /// Enumerates all nonzero elements; only for small fields.
    pub fn units(&self) -> Vec<ResidueElem> {
        let q = self.base.order();
        let n = self.degree();
        let total = self.size().to_u64().expect("enumerable residue field");
        (1..total)
            .map(|mut code| {
                let mut cs = Vec::with_capacity(n);
                for _ in 0..n {
                    cs.push(code % q);
                    code /= q;
                }
                ResidueElem(Poly::new(cs))
            })
            .collect()
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: &ResidueElem) -> BigUint {
        let n = self.unit_group_order();
        let nn = n.to_u64().expect("unit group order fits in u64");
        let mut ord = nn;
        for (p, _) in factor_u64(nn) {
            while ord.is_multiple_of(p) && self.is_one(&self.pow(a, &BigUint::from(ord / p))) {
                ord /= p;
            }
        }
        BigUint::from(ord)
    }

    /// Smallest generator of the unit group in the enumeration order.
    pub fn primitive_element(&self) -> ResidueElem {
        let n = self.unit_group_order();
        let nn = n.to_u64().expect("unit group order fits in u64");
        let primes: Vec<u64> = factor_u64(nn).into_iter().map(|(p, _)| p).collect();
        let q = self.base.order();
        let deg = self.degree();
        let mut code: u64 = 1;
        loop {
            let mut c = code;
            let mut cs = Vec::with_capacity(deg);
            for _ in 0..deg {
                cs.push(c % q);
                c /= q;
            }
            let a = ResidueElem(Poly::new(cs));
            if !self.is_zero(&a) && primes.iter().all(|&p| !self.is_one(&self.pow(&a, &BigUint::from(nn / p)))) {
                return a;
            }
            code += 1;
        }
    }

    pub fn elem_to_string(&self, a: &ResidueElem) -> String {
        if self.degree() == 1 {
            return self.base.element_to_string(a.0.coeff(0));
        }
        a.0.to_string_in(&self.base, "a")
    }
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        *self.base == *other.base && self.modulus == other.modulus
    }
}

impl Eq for ResidueField {}

impl fmt::Display for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}[a]/({})", self.base, self.modulus.to_string_in(&self.base, "a"))
        }
    }
}

/// Discrete logarithm table for the unit group of a small residue field.
#[derive(Clone, Debug)]
pub struct DiscreteLog {
    field: ResidueField,
    generator: ResidueElem,
    order: u64,
    table: HashMap<ResidueElem, u64>,
}

/// Residue fields larger than this are refused by [`DiscreteLog::new`].
pub const MAX_DLOG_TABLE: u64 = 2_000_000;

impl DiscreteLog {
    pub fn new(field: ResidueField) -> Option<Self> {
        let order = field.unit_group_order().to_u64()?;
        if order > MAX_DLOG_TABLE {
            return None;
        }
        let generator = field.primitive_element();
        let mut table = HashMap::with_capacity(order as usize);
        let mut x = field.one();
        for i in 0..order {
            table.insert(x.clone(), i);
            x = field.mul(&x, &generator);
        }
        debug_assert!(field.is_one(&x));
        Some(DiscreteLog { field, generator, order, table })
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn generator(&self) -> &ResidueElem {
        &self.generator
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn log(&self, a: &ResidueElem) -> Option<u64> {
        self.table.get(a).copied()
    }
}
