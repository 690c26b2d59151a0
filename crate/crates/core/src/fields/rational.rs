use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith::{big_mod, factor_big, inv_mod, is_prime, primes_up_to, valuation_big};
use super::{FiniteField, GlobalField, Poly, ResidueElem, ResidueField};
use crate::error::{Error, Result};

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

/// The place of Q attached to a rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePlace(u64);

impl PrimePlace {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimePlace(p))
        } else {
            Err(Error::Invalid(format!("{p} is not prime")))
        }
    }

    pub fn prime(self) -> u64 {
        self.0
    }
}

impl fmt::Display for PrimePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s.as_str(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

impl RationalField {
    fn prime_field(p: u64) -> Arc<FiniteField> {
        Arc::new(FiniteField::prime(p).expect("place carries a prime"))
    }
}

impl GlobalField for RationalField {
    type Elem = BigRational;
    type Place = PrimePlace;

    fn describe(&self) -> String {
        "Q".into()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }

    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }

    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }

    fn inv(&self, x: &BigRational) -> Result<BigRational> {
        if x.is_zero() {
            Err(Error::ZeroElement)
        } else {
            Ok(x.recip())
        }
    }

    fn valuation(&self, v: &PrimePlace, x: &BigRational) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(valuation_big(x.numer(), v.0) - valuation_big(x.denom(), v.0))
    }

    fn residue_field(&self, v: &PrimePlace) -> ResidueField {
        ResidueField::new(Self::prime_field(v.0), Poly::x())
    }

    fn residue(&self, v: &PrimePlace, x: &BigRational) -> Result<ResidueElem> {
        if self.valuation(v, x)? != 0 {
            return Err(Error::NotAUnit(v.to_string()));
        }
        let p = v.0;
        let n = big_mod(x.numer(), p);
        let d = inv_mod(big_mod(x.denom(), p), p).expect("denominator is a unit");
        Ok(ResidueElem(Poly::constant(super::arith::mul_mod(n, d, p))))
    }

    fn lift_residue(&self, _v: &PrimePlace, r: &ResidueElem) -> BigRational {
        BigRational::from_integer(r.0.coeff(0).into())
    }

    fn support(&self, x: &BigRational) -> Result<Vec<PrimePlace>> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut ps: Vec<PrimePlace> = factor_big(x.numer())?
            .into_iter()
            .chain(factor_big(x.denom())?)
            .map(|(p, _)| PrimePlace(p))
            .collect();
        ps.sort();
        ps.dedup();
        Ok(ps)
    }

    fn approximate(&self, targets: &[(PrimePlace, ResidueElem)]) -> Result<BigRational> {
        let mut x = BigInt::zero();
        let mut m = BigInt::one();
        for (v, t) in targets {
            let p = BigInt::from(v.0);
            let r = BigInt::from(t.0.coeff(0));
            // x + m*k ≡ r (mod p)
            let minv = BigInt::from(inv_mod(big_mod(&m, v.0), v.0).expect("distinct primes"));
            let k = ((r - &x) * minv).mod_floor(&p);
            x += &m * k;
            m *= p;
        }
        if targets.is_empty() {
            x = BigInt::one();
        }
        Ok(BigRational::from_integer(x))
    }

    fn enumerate_places(&self, bound: u64) -> Result<Vec<PrimePlace>> {
        Ok(primes_up_to(bound).into_iter().map(PrimePlace).collect())
    }

    fn parse_place(&self, s: &str) -> Result<PrimePlace> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        let p: u64 = t.parse().map_err(|_| Error::Parse(format!("bad place {s:?}")))?;
        PrimePlace::new(p)
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }

    fn real_places(&self) -> usize {
        1
    }

    fn is_positive_at(&self, _i: usize, x: &BigRational) -> bool {
        x.is_positive()
    }

    fn supports_narrow(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{principal_unit_level, weak_approx, UnitFiltrationLevel};

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn valuation_and_residue_examples() {
        let k = RationalField;
        let p3 = PrimePlace::new(3).unwrap();
        assert_eq!(k.valuation(&p3, &q("18/5")).unwrap(), 2);
        assert_eq!(k.valuation(&p3, &q("0")), Err(Error::ZeroElement));
        let p7 = PrimePlace::new(7).unwrap();
        assert_eq!(k.residue(&p7, &q("10/3")).unwrap(), ResidueElem(Poly::constant(1)));
        assert_eq!(k.residue(&p7, &q("1")).unwrap(), ResidueElem(Poly::one()));
        assert!(matches!(k.residue(&p7, &q("14")), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn unit_levels() {
        let k = RationalField;
        let p5 = PrimePlace::new(5).unwrap();
        assert_eq!(principal_unit_level(&k, &p5, &q("26")).unwrap(), UnitFiltrationLevel::Exact(2));
        assert_eq!(principal_unit_level(&k, &p5, &q("6")).unwrap(), UnitFiltrationLevel::Exact(1));
        assert_eq!(principal_unit_level(&k, &p5, &q("2")).unwrap(), UnitFiltrationLevel::Exact(0));
        assert_eq!(principal_unit_level(&k, &p5, &q("1")).unwrap(), UnitFiltrationLevel::Infinite);
        assert!(principal_unit_level(&k, &p5, &q("10")).is_err());
    }

    #[test]
    fn crt_example() {
        let k = RationalField;
        let t = vec![
            (PrimePlace::new(3).unwrap(), ResidueElem(Poly::constant(2))),
            (PrimePlace::new(5).unwrap(), ResidueElem(Poly::constant(3))),
        ];
        assert_eq!(weak_approx(&k, &t).unwrap(), q("8"));
        let single = vec![(PrimePlace::new(7).unwrap(), ResidueElem(Poly::one()))];
        assert_eq!(weak_approx(&k, &single).unwrap(), q("1"));
    }

    #[test]
    fn places_up_to_ten() {
        let ps: Vec<String> = RationalField.enumerate_places(10).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, vec!["(2)", "(3)", "(5)", "(7)"]);
    }
}
