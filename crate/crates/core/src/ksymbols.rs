//! Tame symbols, boundary maps and reciprocity checks for K₁ and K₂ of
//! global fields.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fields::arith::{big_mod, legendre};
use crate::fields::{
    principal_unit_level, residue_norm, FunctionField, GlobalField, RationalField, ResidueElem,
};

/// A finite formal sum of places with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCycle<P: Ord> {
    terms: BTreeMap<P, i64>,
}

impl<P: Ord + Clone> Default for ZeroCycle<P> {
    fn default() -> Self {
        ZeroCycle { terms: BTreeMap::new() }
    }
}

impl<P: Ord + Clone> ZeroCycle<P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(p: P) -> Self {
        Self::from_terms([(p, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (P, i64)>) -> Self {
        let mut c = Self::new();
        for (p, n) in terms {
            c.add_term(p, n);
        }
        c
    }

    pub fn add_term(&mut self, p: P, n: i64) {
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.clone();
        for (p, n) in &other.terms {
            c.add_term(p.clone(), *n);
        }
        c
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, n)| (p.clone(), n * k)))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &P) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, i64)> {
        self.terms.iter().map(|(p, n)| (p, *n))
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.terms.keys()
    }
}

impl<P: Ord + fmt::Display> fmt::Display for ZeroCycle<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, n)| match n {
                1 => format!("[{p}]"),
                -1 => format!("-[{p}]"),
                _ => format!("{n}[{p}]"),
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// The symbol `{f, g}` in K₂ of a global field.
#[derive(Clone, Debug, PartialEq)]
pub struct SteinbergSymbol<E> {
    pub f: E,
    pub g: E,
}

impl<E: Clone> SteinbergSymbol<E> {
    pub fn new<F: GlobalField<Elem = E>>(field: &F, f: E, g: E) -> Result<Self> {
        if field.is_zero(&f) || field.is_zero(&g) {
            return Err(Error::ZeroElement);
        }
        Ok(SteinbergSymbol { f, g })
    }

    /// Parses `"f;g"`.
    pub fn parse<F: GlobalField<Elem = E>>(field: &F, s: &str) -> Result<Self> {
        let (f, g) = s.split_once(';').ok_or_else(|| Error::Parse(format!("symbol {s:?} must look like \"f;g\"")))?;
        Self::new(field, field.parse_elem(f)?, field.parse_elem(g)?)
    }
}

/// `d_v{f,g} = (−1)^{v(f)v(g)} f^{v(g)} g^{−v(f)}` reduced at `v`.
pub fn tame_symbol<F: GlobalField>(field: &F, v: &F::Place, s: &SteinbergSymbol<F::Elem>) -> Result<ResidueElem> {
    let a = field.valuation(v, &s.f)?;
    let b = field.valuation(v, &s.g)?;
    let mut x = field.mul(&field.pow(&s.f, b)?, &field.pow(&s.g, -a)?);
    if (a * b) % 2 != 0 {
        x = field.neg(&x);
    }
    field.residue(v, &x)
}

/// The divisor `Σ v(f)·[v]`; over F_q(t) this includes the place at infinity.
pub fn boundary_div<F: GlobalField>(field: &F, f: &F::Elem) -> Result<ZeroCycle<F::Place>> {
    let mut c = ZeroCycle::new();
    for v in field.support(f)? {
        let n = field.valuation(&v, f)?;
        c.add_term(v, n);
    }
    Ok(c)
}

/// Places where `f` or `g` has nonzero valuation.
pub fn symbol_support<F: GlobalField>(field: &F, s: &SteinbergSymbol<F::Elem>) -> Result<Vec<F::Place>> {
    let mut places = field.support(&s.f)?;
    places.extend(field.support(&s.g)?);
    places.sort();
    places.dedup();
    Ok(places)
}

/// `v ↦ N_{k(v)/base}(d_v{f,g})` over the union of the supports of `f` and `g`;
/// every other place contributes 1 and is omitted.
pub fn boundary_k2<F: GlobalField>(field: &F, s: &SteinbergSymbol<F::Elem>) -> Result<BTreeMap<F::Place, u64>> {
    let mut out = BTreeMap::new();
    for v in symbol_support(field, s)? {
        let t = tame_symbol(field, &v, s)?;
        out.insert(v.clone(), residue_norm(field, &v, &t));
    }
    Ok(out)
}

/// `∏_v N(d_v{f,g})` over all places of F_q(t), infinity included.
pub fn weil_product(field: &FunctionField, s: &SteinbergSymbol<<FunctionField as GlobalField>::Elem>) -> Result<u64> {
    let base = field.constants();
    Ok(boundary_k2(field, s)?.values().fold(base.one(), |acc, &x| base.mul(acc, x)))
}

/// Splits a nonzero rational into `(2-adic valuation, odd part mod 8)`.
fn two_adic_parts(x: &BigRational) -> (i64, u64) {
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    let mut alpha = 0i64;
    let two = BigInt::from(2);
    while n.is_even() {
        n /= &two;
        alpha += 1;
    }
    while d.is_even() {
        d /= &two;
        alpha -= 1;
    }
    // d odd, so d⁻¹ ≡ d (mod 8)
    let u = (big_mod(&n, 8) * big_mod(&d, 8)) % 8;
    (alpha, u)
}

/// The quadratic Hilbert symbol `(a, b)₂` for nonzero rationals.
pub fn hilbert_symbol_2(a: &BigRational, b: &BigRational) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (alpha, u) = two_adic_parts(a);
    let (beta, v) = two_adic_parts(b);
    let eps = |x: u64| ((x - 1) / 2) % 2;
    let omega = |x: u64| ((x * x - 1) / 8) % 2;
    let e = eps(u) * eps(v) + (alpha.rem_euclid(2) as u64) * omega(v) + (beta.rem_euclid(2) as u64) * omega(u);
    Ok(if e.is_multiple_of(2) { 1 } else { -1 })
}

/// `(a, b)_∞`: −1 exactly when both are negative.
pub fn hilbert_symbol_inf(a: &BigRational, b: &BigRational) -> i8 {
    if a.is_negative() && b.is_negative() {
        -1
    } else {
        1
    }
}

/// Decomposition of `{a, b}` in K₂(ℚ) ≅ {±1} ⊕ ⊕_{p odd} 𝔽_p^×.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K2QComponents {
    /// The 2-adic Hilbert symbol.
    pub sign: i8,
    /// Tame symbols at odd primes; trivial components are left out.
    pub odd: BTreeMap<u64, u64>,
}

pub fn k2q_components(s: &SteinbergSymbol<BigRational>) -> Result<K2QComponents> {
    let sign = hilbert_symbol_2(&s.f, &s.g)?;
    let mut odd = BTreeMap::new();
    for v in symbol_support(&RationalField, s)? {
        if v.prime() == 2 {
            continue;
        }
        let t = tame_symbol(&RationalField, &v, s)?.0.coeff(0);
        if t != 1 {
            odd.insert(v.prime(), t);
        }
    }
    Ok(K2QComponents { sign, odd })
}

/// Local factors entering the product formula for `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertProduct {
    pub infinite: i8,
    pub two: i8,
    pub odd: BTreeMap<u64, i8>,
}

impl HilbertProduct {
    pub fn product(&self) -> i8 {
        self.infinite * self.two * self.odd.values().product::<i8>()
    }
}

pub fn hilbert_product(a: &BigRational, b: &BigRational) -> Result<HilbertProduct> {
    let s = SteinbergSymbol::new(&RationalField, a.clone(), b.clone())?;
    let mut odd = BTreeMap::new();
    for v in symbol_support(&RationalField, &s)? {
        let p = v.prime();
        if p == 2 {
            continue;
        }
        let t = tame_symbol(&RationalField, &v, &s)?.0.coeff(0);
        odd.insert(p, legendre(t, p) as i8);
    }
    Ok(HilbertProduct { infinite: hilbert_symbol_inf(a, b), two: hilbert_symbol_2(a, b)?, odd })
}

/// Whether `(a,b)_∞ · (a,b)₂ · ∏_{p odd} χ_p(d_p{a,b}) = 1`.
pub fn hilbert_product_check(a: &BigRational, b: &BigRational) -> Result<bool> {
    Ok(hilbert_product(a, b)?.product() == 1)
}

/// Coarse position of a symbol in the filtration `U⁰K₂ ⊇ U¹K₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum K2Level {
    /// No sufficient condition for `U¹` applies.
    Zero,
    /// Both entries are units and one is a principal unit, so the symbol
    /// lies in `U¹K₂`.
    AtLeastOne,
}

impl fmt::Display for K2Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K2Level::Zero => write!(f, "0"),
            K2Level::AtLeastOne => write!(f, ">=1"),
        }
    }
}

pub fn u_filtration_k2_class<F: GlobalField>(
    field: &F,
    v: &F::Place,
    s: &SteinbergSymbol<F::Elem>,
) -> Result<(ResidueElem, K2Level)> {
    let tame = tame_symbol(field, v, s)?;
    let units = field.valuation(v, &s.f)? == 0 && field.valuation(v, &s.g)? == 0;
    let level = if units
        && (principal_unit_level(field, v, &s.f)?.is_principal() || principal_unit_level(field, v, &s.g)?.is_principal())
    {
        K2Level::AtLeastOne
    } else {
        K2Level::Zero
    };
    Ok((tame, level))
}

/// Sum of the coefficients of a cycle weighted by place degree; zero for
/// principal divisors on a proper curve.
pub fn cycle_degree<F: GlobalField>(field: &F, c: &ZeroCycle<F::Place>) -> i64 {
    c.iter().map(|(v, n)| n * field.place_degree(v) as i64).sum()
}

/// `|f| = ∏ p^{v_p(f)}` for rationals.
pub fn rational_product_formula(f: &BigRational) -> Result<bool> {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for (v, n) in boundary_div(&RationalField, f)?.iter() {
        let p = BigInt::from(v.prime());
        let k = n.unsigned_abs().to_usize().expect("small exponent");
        if n > 0 {
            num *= num_traits::pow(p, k);
        } else {
            den *= num_traits::pow(p, k);
        }
    }
    Ok(BigRational::new(num, den) == f.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_rational, Poly, PrimePlace};

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn qsym(a: &str, b: &str) -> SteinbergSymbol<BigRational> {
        SteinbergSymbol::new(&RationalField, q(a), q(b)).unwrap()
    }

    #[test]
    fn tame_symbol_examples() {
        let p5 = PrimePlace::new(5).unwrap();
        assert_eq!(tame_symbol(&RationalField, &p5, &qsym("5", "2")).unwrap(), ResidueElem(Poly::constant(3)));
        assert_eq!(tame_symbol(&RationalField, &p5, &qsym("3", "2")).unwrap(), ResidueElem(Poly::one()));
        let k = FunctionField::new(3).unwrap();
        let s = SteinbergSymbol::parse(&k, "t;t+1").unwrap();
        let v = k.parse_place("t+1").unwrap();
        assert_eq!(tame_symbol(&k, &v, &s).unwrap(), ResidueElem(Poly::constant(2)));
    }

    #[test]
    fn boundary_examples() {
        let c = boundary_div(&RationalField, &q("12/5")).unwrap();
        assert_eq!(c.to_string(), "2[(2)] + [(3)] - [(5)]");
        assert!(boundary_div(&RationalField, &q("1")).unwrap().is_zero());
        let k = FunctionField::new(3).unwrap();
        let c = boundary_div(&k, &k.parse_elem("t/(t+1)").unwrap()).unwrap();
        assert_eq!(c.to_string(), "[(t)] - [(t+1)]");

        let b = boundary_k2(&RationalField, &qsym("2", "3")).unwrap();
        let got: Vec<(u64, u64)> = b.iter().map(|(v, x)| (v.prime(), *x)).collect();
        assert_eq!(got, vec![(2, 1), (3, 2)]);

        let s = SteinbergSymbol::parse(&k, "t;t+1").unwrap();
        let b = boundary_k2(&k, &s).unwrap();
        let got: Vec<(String, u64)> = b.iter().map(|(v, x)| (k.place_to_string(v), *x)).collect();
        assert_eq!(got, vec![("(t)".into(), 1), ("(t+1)".into(), 2), ("inf".into(), 2)]);
        assert_eq!(weil_product(&k, &s).unwrap(), 1);
    }

    #[test]
    fn k2q_examples() {
        let c = k2q_components(&qsym("-1", "-1")).unwrap();
        assert_eq!(c.sign, -1);
        assert!(c.odd.is_empty());
        let c = k2q_components(&qsym("2", "3")).unwrap();
        assert_eq!(c.odd.get(&3), Some(&2));
        assert_eq!(c.sign, hilbert_symbol_2(&q("2"), &q("3")).unwrap());
    }

    #[test]
    fn hilbert_examples() {
        assert!(hilbert_product_check(&q("3"), &q("5")).unwrap());
        let h = hilbert_product(&q("3"), &q("5")).unwrap();
        assert_eq!((h.infinite, h.two), (1, 1));
        assert_eq!(h.odd.values().copied().collect::<Vec<_>>(), vec![-1, -1]);
        let h = hilbert_product(&q("-1"), &q("-1")).unwrap();
        assert_eq!((h.infinite, h.two), (-1, -1));
        assert!(hilbert_product_check(&q("1"), &q("-7/12")).unwrap());
    }

    #[test]
    fn filtration_examples() {
        let p5 = PrimePlace::new(5).unwrap();
        let (t, l) = u_filtration_k2_class(&RationalField, &p5, &qsym("26", "2")).unwrap();
        assert_eq!((t, l), (ResidueElem(Poly::one()), K2Level::AtLeastOne));
        let (t, l) = u_filtration_k2_class(&RationalField, &p5, &qsym("5", "2")).unwrap();
        assert_eq!((t, l), (ResidueElem(Poly::constant(3)), K2Level::Zero));
        let (t, l) = u_filtration_k2_class(&RationalField, &p5, &qsym("2", "3")).unwrap();
        assert_eq!((t, l), (ResidueElem(Poly::one()), K2Level::Zero));
    }
}
