//! The reciprocity map over `Q`: the class of a prime `p ∤ m` goes to its
//! Frobenius `ζ_m ↦ ζ_m^p` in `Gal(Q(ζ_m)/Q) ≅ (Z/m)^×`, or to the image in
//! `(Z/m)^×/{±1}` (the Galois group of the maximal real subfield) for the
//! ordinary variant.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::chow::{relative_chow, Modulus, RayClassGroup, Variant};
use crate::error::{Error, Result};
use crate::fields::arith::{factor_u64, is_prime, multiplicative_order, primes_up_to, primitive_root};
use crate::fields::{FiniteField, Poly, PrimePlace, RationalField};
use crate::ksymbols::ZeroCycle;
use crate::lattice::{induced_hom, integer_kernel, FinAbGroup, GroupElem, IntMatrix, Presentation, Quotient};

/// `Gal(Q(ζ_m)/Q)` or its real subfield's group, presented on one primitive
/// root per prime divisor of `m`.
#[derive(Clone, Debug)]
pub struct GaloisTarget {
    m: u64,
    variant: Variant,
    primes: Vec<u64>,
    roots: Vec<u64>,
    quotient: Quotient,
}

impl GaloisTarget {
    pub fn new(modulus: &Modulus<RationalField>) -> Self {
        let primes: Vec<u64> = modulus.places().iter().map(|v| v.prime()).collect();
        let m = primes.iter().product();
        let roots: Vec<u64> = primes.iter().map(|&l| primitive_root(l)).collect();
        let n = primes.len();
        let mut cols: Vec<Vec<BigInt>> = primes
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let mut c = vec![BigInt::zero(); n];
                c[i] = BigInt::from(l - 1);
                c
            })
            .collect();
        let mut t = GaloisTarget {
            m,
            variant: modulus.variant(),
            primes,
            roots,
            quotient: Presentation::free_cyclic(&[]).quotient().expect("trivial"),
        };
        if t.variant == Variant::Ordinary && m > 1 {
            cols.push(t.logs(m - 1));
        }
        t.quotient = Presentation::new(n, IntMatrix::from_columns(n, &cols).expect("square"))
            .quotient()
            .expect("finite");
        t
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.quotient.group
    }

    /// Discrete logs of `a` to the chosen primitive roots, one per prime.
    fn logs(&self, a: u64) -> Vec<BigInt> {
        self.primes
            .iter()
            .zip(&self.roots)
            .map(|(&l, &g)| {
                let target = a % l;
                let mut x = 1 % l;
                let mut e = 0u64;
                while x != target {
                    x = x * g % l;
                    e += 1;
                    assert!(e < l, "{a} is not a unit mod {l}");
                }
                BigInt::from(e)
            })
            .collect()
    }

    /// Class of the automorphism `ζ ↦ ζ^a` for `gcd(a, m) = 1`.
    pub fn class_of_residue(&self, a: u64) -> Result<GroupElem> {
        if self.primes.iter().any(|&l| a.is_multiple_of(l)) {
            return Err(Error::PlaceInModulus(format!("({a})")));
        }
        Ok(self.quotient.class_of(&self.logs(a)))
    }

    pub fn frobenius(&self, v: &PrimePlace) -> Result<FrobeniusElement> {
        let p = v.prime();
        if self.primes.contains(&p) {
            return Err(Error::PlaceInModulus(v.to_string()));
        }
        Ok(FrobeniusElement { place: *v, residue: p % self.m.max(1), target_class: self.class_of_residue(p)? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusElement {
    pub place: PrimePlace,
    /// `p mod m`.
    pub residue: u64,
    pub target_class: GroupElem,
}

pub fn frobenius_class(v: &PrimePlace, m: &Modulus<RationalField>) -> Result<FrobeniusElement> {
    GaloisTarget::new(m).frobenius(v)
}

/// `Σ n_p Frob_p` for a cycle off the modulus.
pub fn rec(c: &ZeroCycle<PrimePlace>, m: &Modulus<RationalField>) -> Result<GroupElem> {
    let t = GaloisTarget::new(m);
    rec_in(&t, c)
}

pub fn rec_in(t: &GaloisTarget, c: &ZeroCycle<PrimePlace>) -> Result<GroupElem> {
    let g = t.group();
    let mut acc = g.zero();
    for (v, n) in c.iter() {
        if t.primes.contains(&v.prime()) {
            return Err(Error::SupportMeetsModulus(v.to_string()));
        }
        let f = t.frobenius(v)?;
        acc = g.add(&acc, &g.scale(&f.target_class, &BigInt::from(n)));
    }
    Ok(acc)
}

/// Outcome of [`verify_rec_isomorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecReport {
    pub modulus: u64,
    pub variant: Variant,
    pub chow_factors: Vec<BigInt>,
    pub target_factors: Vec<BigInt>,
    /// Primes whose classes were used as generators.
    pub generators: Vec<u64>,
    pub generators_found: bool,
    pub factors_match: bool,
    pub well_defined: bool,
    pub bijective: bool,
    /// Primes `p ≤ 50` where transported `cycle_class` disagreed with Frobenius.
    pub transport_failures: Vec<u64>,
}

impl RecReport {
    pub fn passed(&self) -> bool {
        self.generators_found && self.factors_match && self.well_defined && self.bijective && self.transport_failures.is_empty()
    }
}

/// Primes up to this bound are checked against the transported class.
pub const TRANSPORT_BOUND: u64 = 50;

pub fn verify_rec_isomorphism(m: &Modulus<RationalField>) -> Result<RecReport> {
    let g = relative_chow(&RationalField, m)?;
    let t = GaloisTarget::new(m);
    let mm = t.modulus();
    let chow_factors = g.invariant_factors().to_vec();
    let target_factors = t.group().invariant_factors().to_vec();

    let gg = g.group();
    let order = gg.order();
    let cap = (10 * mm).max(100);
    let mut generators = Vec::new();
    let mut classes: Vec<GroupElem> = Vec::new();
    let mut reached = BigInt::from(1);
    for p in primes_up_to(cap) {
        if reached == order {
            break;
        }
        if mm.is_multiple_of(p) {
            continue;
        }
        let c = g.prime_class(&PrimePlace::new(p)?)?;
        let mut trial = classes.clone();
        trial.push(c.clone());
        let o = gg.subgroup_order(&trial)?;
        if o > reached {
            generators.push(p);
            classes.push(c);
            reached = o;
        }
    }
    let generators_found = reached == order;
    let mut report = RecReport {
        modulus: mm,
        variant: m.variant(),
        factors_match: chow_factors == target_factors,
        chow_factors,
        target_factors,
        generators: generators.clone(),
        generators_found,
        well_defined: false,
        bijective: false,
        transport_failures: Vec::new(),
    };
    if !generators_found {
        return Ok(report);
    }

    let source = generated_presentation(gg, &classes)?;
    let images = generators
        .iter()
        .map(|&p| Ok(t.frobenius(&PrimePlace::new(p)?)?.target_class))
        .collect::<Result<Vec<_>>>()?;
    let hom = match induced_hom(&source, t.group(), &images) {
        Ok(h) => h,
        Err(Error::RelationViolated(_)) => return Ok(report),
        Err(e) => return Err(e),
    };
    report.well_defined = true;
    report.bijective = hom.is_bijective(&source)?;
    report.transport_failures = transport_failures(&g, &t, &classes, |x| hom.apply(x))?;
    Ok(report)
}

/// Presentation of the subgroup generated by `classes` (all of `g` when they
/// generate) on those generators.
fn generated_presentation(g: &FinAbGroup, classes: &[GroupElem]) -> Result<Presentation> {
    let k = classes.len();
    let r = g.rank();
    let mut cols = classes.to_vec();
    for (i, d) in g.invariant_factors().iter().enumerate() {
        let mut c = vec![BigInt::zero(); r];
        c[i] = d.clone();
        cols.push(c);
    }
    let rels: Vec<Vec<BigInt>> = integer_kernel(&IntMatrix::from_columns(r, &cols)?)
        .into_iter()
        .map(|v| v[..k].to_vec())
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    Ok(Presentation::new(k, IntMatrix::from_columns(k, &rels)?))
}

fn transport_failures(
    g: &RayClassGroup<RationalField>,
    t: &GaloisTarget,
    classes: &[GroupElem],
    apply: impl Fn(&[BigInt]) -> GroupElem,
) -> Result<Vec<u64>> {
    let mut bad = Vec::new();
    for p in primes_up_to(TRANSPORT_BOUND) {
        if t.modulus().is_multiple_of(p) {
            continue;
        }
        let v = PrimePlace::new(p)?;
        let c = g.cycle_class(&ZeroCycle::point(v))?;
        let x = g
            .group()
            .express(classes, &c)
            .ok_or_else(|| Error::Invalid("chosen classes do not generate".into()))?;
        if !t.group().is_zero(&t.group().add(&apply(&x), &t.group().neg(&t.frobenius(&v)?.target_class))) {
            bad.push(p);
        }
    }
    Ok(bad)
}

/// Exact division of integer polynomials (low degree first) by a monic divisor.
fn div_exact_z(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    assert_eq!(den[dn], 1);
    let mut q = vec![0i64; rem.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact division");
    q
}

/// The `m`-th cyclotomic polynomial over `Z`, lowest coefficient first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    let mut f = vec![0i64; m as usize + 1];
    f[0] = -1;
    f[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            f = div_exact_z(&f, &cyclotomic_polynomial(d));
        }
    }
    f
}

/// Minimal polynomial of `ζ_m + ζ_m^{-1}` over `Z`, lowest coefficient first.
pub fn real_cyclotomic_polynomial(m: u64) -> Vec<i64> {
    match m {
        1 => return vec![-2, 1],
        2 => return vec![2, 1],
        _ => {}
    }
    let phi = cyclotomic_polynomial(m);
    let n = (phi.len() - 1) / 2;
    // x^{-n} Φ(x) = c_n + Σ_k c_{n+k} (x^k + x^{-k}) and x^k + x^{-k} = D_k(x + 1/x)
    let mut out = vec![0i64; n + 1];
    out[0] = phi[n];
    let mut prev = vec![2i64];
    let mut cur = vec![0i64, 1];
    for k in 1..=n {
        for (i, &c) in cur.iter().enumerate() {
            out[i] += phi[n + k] * c;
        }
        let mut next = vec![0i64; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    out
}

/// Degrees of the irreducible factors of an integer polynomial reduced mod `p`.
fn factor_degrees_mod_p(f: &[i64], p: u64) -> Result<Vec<usize>> {
    let k = FiniteField::prime(p)?;
    let g = Poly::new(f.iter().map(|&c| k.from_i64(c)).collect());
    let mut out = Vec::new();
    for (prod, d) in g.distinct_degree_factorization(&k) {
        out.extend(std::iter::repeat_n(d, prod.deg() / d));
    }
    Ok(out)
}

fn order_check_input(p: u64, m: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if m == 0 || factor_u64(m).iter().any(|&(_, e)| e > 1) {
        return Err(Error::Invalid(format!("{m} is not squarefree")));
    }
    if m.is_multiple_of(p) {
        return Err(Error::PlaceInModulus(format!("({p})")));
    }
    Ok(())
}

/// The order of `p` in `(Z/m)^×` equals the common degree of the irreducible
/// factors of `Φ_m` mod `p`.
pub fn frobenius_order_check(p: u64, m: u64) -> Result<bool> {
    order_check_input(p, m)?;
    let ord = multiplicative_order(p % m, m) as usize;
    let degs = factor_degrees_mod_p(&cyclotomic_polynomial(m), p)?;
    Ok(degs.iter().all(|&d| d == ord))
}

/// Ordinary variant: the order of `p` in `(Z/m)^×/{±1}` against the factor
/// degrees of the real cyclotomic polynomial mod `p`.
pub fn real_frobenius_order_check(p: u64, m: u64) -> Result<bool> {
    order_check_input(p, m)?;
    let ord = plus_minus_order(p % m, m) as usize;
    let degs = factor_degrees_mod_p(&real_cyclotomic_polynomial(m), p)?;
    Ok(degs.iter().all(|&d| d == ord))
}

/// Order of `a` in `(Z/m)^×/{±1}`.
pub fn plus_minus_order(a: u64, m: u64) -> u64 {
    if m <= 2 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 && x != m - 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Order of the Frobenius of `p` in the target for the given variant.
pub fn frobenius_order(p: u64, m: u64, variant: Variant) -> u64 {
    match variant {
        Variant::Narrow => multiplicative_order(p % m.max(1), m.max(1)),
        Variant::Ordinary => plus_minus_order(p, m),
    }
}

/// Cheap consistency check used by sweeps: the Frobenius class has the order
/// of `p` in the target.
pub fn frobenius_class_order_matches(t: &GaloisTarget, p: u64) -> Result<bool> {
    let f = t.frobenius(&PrimePlace::new(p)?)?;
    let o = t.group().element_order(&f.target_class).to_u64().unwrap_or(0);
    Ok(o == frobenius_order(p, t.modulus(), t.variant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::parse_modulus;

    fn m(s: &str, v: Variant) -> Modulus<RationalField> {
        parse_modulus(&RationalField, s, v).unwrap()
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(7), vec![1; 7]);
        assert_eq!(cyclotomic_polynomial(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        // ζ_5 + ζ_5^{-1} is a root of y² + y − 1
        assert_eq!(real_cyclotomic_polynomial(5), vec![-1, 1, 1]);
        // 2cos(2π/7): y³ + y² − 2y − 1
        assert_eq!(real_cyclotomic_polynomial(7), vec![-1, -2, 1, 1]);
        assert_eq!(real_cyclotomic_polynomial(4), vec![0, 1]);
    }

    #[test]
    fn frobenius_examples() {
        let t = GaloisTarget::new(&m("7", Variant::Narrow));
        let f = t.frobenius(&PrimePlace::new(2).unwrap()).unwrap();
        assert_eq!(f.residue, 2);
        assert_eq!(t.group().element_order(&f.target_class), BigInt::from(3));
        assert!(matches!(
            frobenius_class(&PrimePlace::new(13).unwrap(), &m("13", Variant::Narrow)),
            Err(Error::PlaceInModulus(_))
        ));
        let f = frobenius_class(&PrimePlace::new(29).unwrap(), &m("7", Variant::Narrow)).unwrap();
        assert!(t.group().is_zero(&f.target_class));
    }

    #[test]
    fn rec_examples() {
        let md = m("7", Variant::Narrow);
        let p = |n| PrimePlace::new(n).unwrap();
        let t = GaloisTarget::new(&md);
        assert!(t.group().is_zero(&rec(&ZeroCycle::from_terms([(p(2), 1), (p(11), 1)]), &md).unwrap()));
        assert!(t.group().is_zero(&rec(&ZeroCycle::new(), &md).unwrap()));
        assert!(t.group().is_zero(&rec(&ZeroCycle::from_terms([(p(2), 3)]), &md).unwrap()));
        assert!(matches!(rec(&ZeroCycle::point(p(7)), &md), Err(Error::SupportMeetsModulus(_))));
    }

    #[test]
    fn isomorphism_examples() {
        for (s, v) in [("1", Variant::Narrow), ("7", Variant::Narrow), ("7", Variant::Ordinary), ("15", Variant::Narrow)] {
            let r = verify_rec_isomorphism(&m(s, v)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert_eq!(verify_rec_isomorphism(&m("15", Variant::Narrow)).unwrap().generators, vec![2, 7]);
    }

    #[test]
    fn order_checks() {
        assert!(frobenius_order_check(2, 7).unwrap());
        assert!(frobenius_order_check(3, 5).unwrap());
        assert!(frobenius_order_check(11, 5).unwrap());
        assert!(real_frobenius_order_check(2, 7).unwrap());
        assert!(frobenius_order_check(7, 7).is_err());
        for mm in [3u64, 10, 21, 30, 77] {
            for p in primes_up_to(60) {
                if mm % p != 0 {
                    assert!(frobenius_order_check(p, mm).unwrap(), "p={p} m={mm}");
                    assert!(real_frobenius_order_check(p, mm).unwrap(), "real p={p} m={mm}");
                }
            }
        }
    }
}
