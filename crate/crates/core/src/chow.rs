//! Relative Chow groups of zero-cycles on `Spec O_k` for `k = Q` or a quadratic
//! field, computed as ray class groups through the exact sequence
//!
//! ```text
//! O^× → ⊕_y k(y)^× × {±1}^r → CH₀(X, D) → Cl(k) → 0
//! ```
//!
//! The group is presented on generators `[P_1..P_k | g_y | s_i]`: primes whose
//! classes generate `Cl`, one discrete-log generator per place of the modulus,
//! and one sign per real embedding (narrow variant only).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::arith::{factor_u64, primes_up_to};
use crate::fields::{weak_approx, DiscreteLog, FunctionField, FunctionPlace, GlobalField, NumberField, Poly};
use crate::ksymbols::{boundary_div, weil_product, SteinbergSymbol, ZeroCycle};
use crate::lattice::{
    induced_hom, integer_kernel, FinAbGroup, GroupElem, IntMatrix, Presentation, Quotient,
};
use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Real places split completely: no sign conditions.
    Ordinary,
    /// Relations must be totally positive.
    Narrow,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ordinary" | "ord" => Ok(Variant::Ordinary),
            "narrow" | "totally-positive" => Ok(Variant::Narrow),
            other => Err(Error::Parse(format!("unknown variant {other:?} (expected ordinary or narrow)"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Ordinary => "ordinary",
            Variant::Narrow => "narrow",
        })
    }
}

/// A squarefree effective divisor given by distinct finite places.
#[derive(Clone, Debug)]
pub struct Modulus<F: GlobalField> {
    places: Vec<F::Place>,
    variant: Variant,
}

impl<F: GlobalField> Modulus<F> {
    pub fn places(&self) -> &[F::Place] {
        &self.places
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn contains(&self, v: &F::Place) -> bool {
        self.places.contains(v)
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Modulus { places: self.places.clone(), variant }
    }

    pub fn describe(&self, field: &F) -> String {
        if self.places.is_empty() {
            return "1".into();
        }
        self.places.iter().map(|v| field.place_to_string(v)).collect::<Vec<_>>().join(", ")
    }
}

pub fn make_modulus<F: GlobalField>(field: &F, places: Vec<F::Place>, variant: Variant) -> Result<Modulus<F>> {
    if variant == Variant::Narrow && !field.supports_narrow() {
        return Err(Error::NarrowUnsupported);
    }
    let mut seen = BTreeSet::new();
    for v in &places {
        if !seen.insert(v.clone()) {
            return Err(Error::DuplicatePlace(field.place_to_string(v)));
        }
    }
    let mut places = places;
    places.sort();
    Ok(Modulus { places, variant })
}

/// Splits on commas that are not nested inside parentheses.
pub fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|t| !t.is_empty());
    out
}

/// Parses a comma-separated list of places.
///
/// A bare integer `n` stands for the divisor of `n O_k`: it must be squarefree
/// and unramified. `1` and the empty string give the empty modulus.
pub fn parse_modulus<F: NumberField>(field: &F, s: &str, variant: Variant) -> Result<Modulus<F>> {
    let mut places = Vec::new();
    for tok in split_top_level(s) {
        if let Ok(n) = tok.parse::<u64>() {
            if n == 0 {
                return Err(Error::Invalid("modulus 0".into()));
            }
            for (p, e) in factor_u64(n) {
                if e > 1 {
                    return Err(Error::Invalid(format!("{n} is not squarefree")));
                }
                for (v, ram) in field.places_over(p)? {
                    if ram > 1 {
                        return Err(Error::Invalid(format!(
                            "{p} ramifies in {}; {n} O_k is not squarefree (give the place {} instead)",
                            field.describe(),
                            field.place_to_string(&v)
                        )));
                    }
                    places.push(v);
                }
            }
        } else {
            places.push(field.parse_place(tok)?);
        }
    }
    make_modulus(field, places, variant)
}

/// Parses a modulus of places for any global field.
pub fn parse_places<F: GlobalField>(field: &F, s: &str, variant: Variant) -> Result<Modulus<F>> {
    let places = split_top_level(s)
        .into_iter()
        .filter(|t| *t != "1")
        .map(|t| field.parse_place(t))
        .collect::<Result<Vec<_>>>()?;
    make_modulus(field, places, variant)
}

/// Membership in the relation group: `f` is a unit with residue 1 at every place
/// of the modulus, and totally positive in the narrow variant.
pub fn relation_member<F: GlobalField>(field: &F, f: &F::Elem, m: &Modulus<F>) -> Result<bool> {
    if field.is_zero(f) {
        return Err(Error::ZeroElement);
    }
    for y in &m.places {
        if field.valuation(y, f)? != 0 {
            return Ok(false);
        }
        let r = field.residue(y, f)?;
        if !field.residue_field(y).is_one(&r) {
            return Ok(false);
        }
    }
    Ok(m.variant == Variant::Ordinary || field.is_totally_positive(f))
}

/// Above this many primes scanned, the class group generator search gives up.
const MAX_GENERATOR_SEARCH: u64 = 100_000;

/// `CH₀(X, D)` for `X = Spec O_k` and the modulus `D`.
#[derive(Clone, Debug)]
pub struct RayClassGroup<F: NumberField> {
    field: F,
    modulus: Modulus<F>,
    s_primes: Vec<F::Place>,
    s_classes: Vec<GroupElem>,
    locals: Vec<DiscreteLog>,
    signs: usize,
    presentation: Presentation,
    quotient: Quotient,
}

pub fn relative_chow<F: NumberField>(field: &F, m: &Modulus<F>) -> Result<RayClassGroup<F>> {
    let cl = field.class_group().clone();
    let h = cl.order();

    let mut s_primes = Vec::new();
    let mut s_classes: Vec<GroupElem> = Vec::new();
    let mut reached = BigInt::one();
    let mut bound = 64;
    'search: while reached < h {
        if bound > MAX_GENERATOR_SEARCH {
            return Err(Error::OutOfSupportedRange("class group generators not found".into()));
        }
        for p in primes_up_to(bound).into_iter().filter(|&p| p > bound / 2 || bound == 64) {
            for (v, _) in field.places_over(p)? {
                if m.contains(&v) {
                    continue;
                }
                let c = field.place_class(&v)?;
                let mut trial = s_classes.clone();
                trial.push(c.clone());
                let o = cl.subgroup_order(&trial)?;
                if o > reached {
                    s_primes.push(v);
                    s_classes.push(c);
                    reached = o;
                    if reached == h {
                        break 'search;
                    }
                }
            }
        }
        bound *= 2;
    }

    let locals = m
        .places
        .iter()
        .map(|y| {
            DiscreteLog::new(field.residue_field(y)).ok_or_else(|| {
                Error::OutOfSupportedRange(format!("residue field at {} too large", field.place_to_string(y)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let signs = if m.variant == Variant::Narrow { field.real_places() } else { 0 };

    let mut g = RayClassGroup {
        field: field.clone(),
        modulus: m.clone(),
        s_primes,
        s_classes,
        locals,
        signs,
        presentation: Presentation::new(0, IntMatrix::zeros(0, 0)),
        quotient: Presentation::new(0, IntMatrix::zeros(0, 0)).quotient()?,
    };
    let k = g.s_primes.len();
    let n = g.generator_count();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    let unit = |i: usize, d: BigInt| {
        let mut c = vec![BigInt::zero(); n];
        c[i] = d;
        c
    };
    for (j, dl) in g.locals.iter().enumerate() {
        cols.push(unit(k + j, BigInt::from(dl.order())));
    }
    for i in 0..g.signs {
        cols.push(unit(k + g.locals.len() + i, BigInt::from(2)));
    }
    for u in field.unit_generators() {
        cols.push(g.psi(&u)?);
    }
    for w in g.principal_lattice(&cl, &h)? {
        let factors: Vec<(F::Place, u64)> = g
            .s_primes
            .iter()
            .zip(&w)
            .filter(|(_, e)| **e > 0)
            .map(|(p, e)| (p.clone(), *e))
            .collect();
        let alpha = field.generator_of(&factors)?.ok_or_else(|| {
            Error::Invalid("ideal in the principal lattice has no generator".into())
        })?;
        let psi = g.psi(&alpha)?;
        let mut col: Vec<BigInt> = w.iter().map(|&e| BigInt::from(e)).collect();
        col.extend(psi[k..].iter().map(|x| -x));
        cols.push(col);
    }
    g.presentation = Presentation::new(n, IntMatrix::from_columns(n, &cols)?);
    g.quotient = g.presentation.quotient()?;
    Ok(g)
}

impl<F: NumberField> RayClassGroup<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn modulus(&self) -> &Modulus<F> {
        &self.modulus
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.quotient.group
    }

    pub fn order(&self) -> BigInt {
        self.quotient.group.order()
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        self.quotient.group.invariant_factors()
    }

    /// The presentation on `[S primes | local generators | signs]`.
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// Places chosen so that their classes generate the class group.
    pub fn class_group_generators(&self) -> &[F::Place] {
        &self.s_primes
    }

    pub fn generator_count(&self) -> usize {
        self.s_primes.len() + self.locals.len() + self.signs
    }

    /// Raw coordinates of the principal ideal `(β)` for `β` prime to the modulus.
    fn psi(&self, beta: &F::Elem) -> Result<Vec<BigInt>> {
        let k = self.s_primes.len();
        let mut out = vec![BigInt::zero(); self.generator_count()];
        for (j, (y, dl)) in self.modulus.places.iter().zip(&self.locals).enumerate() {
            let r = self.field.residue(y, beta)?;
            let l = dl.log(&r).ok_or_else(|| Error::NotAUnit(self.field.place_to_string(y)))?;
            out[k + j] = BigInt::from(l);
        }
        for i in 0..self.signs {
            if !self.field.is_positive_at(i, beta) {
                out[k + self.locals.len() + i] = BigInt::one();
            }
        }
        Ok(out)
    }

    /// Nonnegative generators of `{w ∈ Z^k : Σ w_i [P_i] = 0 in Cl}`.
    fn principal_lattice(&self, cl: &FinAbGroup, h: &BigInt) -> Result<Vec<Vec<u64>>> {
        let k = self.s_primes.len();
        if k == 0 {
            return Ok(Vec::new());
        }
        let r = cl.rank();
        let mut cols: Vec<Vec<BigInt>> = self.s_classes.clone();
        for (i, d) in cl.invariant_factors().iter().enumerate() {
            let mut c = vec![BigInt::zero(); r];
            c[i] = d.clone();
            cols.push(c);
        }
        let a = IntMatrix::from_columns(r, &cols)?;
        let h64 = h.to_u64().ok_or_else(|| Error::OutOfSupportedRange("class number".into()))?;
        let mut out = Vec::new();
        for v in integer_kernel(&a) {
            let w = &v[..k];
            if w.iter().all(Zero::is_zero) {
                continue;
            }
            let most_negative = w.iter().filter(|x| x.is_negative()).map(|x| -x).max().unwrap_or_default();
            let shift = most_negative.div_ceil(h) * h;
            let w: Vec<u64> = w
                .iter()
                .map(|x| (x + &shift).to_u64().ok_or_else(|| Error::OutOfSupportedRange("exponent".into())))
                .collect::<Result<_>>()?;
            out.push(w);
        }
        for j in 0..k {
            let mut w = vec![0u64; k];
            w[j] = h64;
            out.push(w);
        }
        Ok(out)
    }

    /// Raw coordinates of the class of a place off the modulus.
    pub fn prime_class_raw(&self, v: &F::Place) -> Result<Vec<BigInt>> {
        if self.modulus.contains(v) {
            return Err(Error::SupportMeetsModulus(self.field.place_to_string(v)));
        }
        let cl = self.field.class_group();
        let k = self.s_primes.len();
        let mut exps: Vec<BigInt> = vec![BigInt::zero(); k];
        if k > 0 {
            let c = self.field.place_class(v)?;
            let x = cl
                .express(&self.s_classes, &cl.neg(&c))
                .ok_or_else(|| Error::Invalid("class group generators do not generate".into()))?;
            let h = cl.order();
            let most_negative = x.iter().filter(|e| e.is_negative()).map(|e| -e).max().unwrap_or_default();
            let shift = most_negative.div_ceil(&h) * &h;
            exps = x.iter().map(|e| e + &shift).collect();
        }
        let mut factors = vec![(v.clone(), 1u64)];
        for (p, e) in self.s_primes.iter().zip(&exps) {
            let e = e.to_u64().ok_or_else(|| Error::OutOfSupportedRange("exponent".into()))?;
            if e > 0 {
                factors.push((p.clone(), e));
            }
        }
        let beta = self
            .field
            .generator_of(&factors)?
            .ok_or_else(|| Error::Invalid("expected a principal ideal".into()))?;
        let mut raw = self.psi(&beta)?;
        for (i, e) in exps.into_iter().enumerate() {
            raw[i] = -e;
        }
        Ok(raw)
    }

    pub fn prime_class(&self, v: &F::Place) -> Result<GroupElem> {
        Ok(self.quotient.class_of(&self.prime_class_raw(v)?))
    }

    pub fn cycle_class_raw(&self, c: &ZeroCycle<F::Place>) -> Result<Vec<BigInt>> {
        if let Some(bad) = c.support().find(|v| self.modulus.contains(v)) {
            return Err(Error::SupportMeetsModulus(self.field.place_to_string(bad)));
        }
        let mut acc = vec![BigInt::zero(); self.generator_count()];
        for (v, n) in c.iter() {
            let raw = self.prime_class_raw(v)?;
            for (a, r) in acc.iter_mut().zip(raw) {
                *a += r * n;
            }
        }
        Ok(acc)
    }

    pub fn cycle_class(&self, c: &ZeroCycle<F::Place>) -> Result<GroupElem> {
        Ok(self.quotient.class_of(&self.cycle_class_raw(c)?))
    }

    /// The class of the principal ideal `(β)` for `β` prime to the modulus,
    /// read off from residues and signs alone.
    pub fn principal_class(&self, beta: &F::Elem) -> Result<GroupElem> {
        Ok(self.quotient.class_of(&self.psi(beta)?))
    }

    /// Images in `Cl` of the presentation generators.
    pub fn class_group_images(&self) -> Vec<GroupElem> {
        let cl = self.field.class_group();
        let mut out = self.s_classes.clone();
        out.resize(self.generator_count(), cl.zero());
        out
    }
}

/// `cycle_class(div f) == 0` for a relation member `f`.
pub fn check_relation_vanishes<F: NumberField>(f: &F::Elem, g: &RayClassGroup<F>) -> Result<bool> {
    if !relation_member(&g.field, f, &g.modulus)? {
        return Err(Error::NotARelation);
    }
    let c = boundary_div(&g.field, f)?;
    Ok(g.group().is_zero(&g.cycle_class(&c)?))
}

/// Order bookkeeping for `⊕_y k(y)^× (× signs) → CH₀(X,D) → Cl → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequenceReport {
    pub ray_order: BigInt,
    pub class_number: BigInt,
    pub kernel_order: BigInt,
    pub local_order: BigInt,
    /// `CH₀(X,D) → Cl` respects the relations and is onto.
    pub surjective: bool,
    /// The lifts of residue-field generators die in `Cl`.
    pub lifts_in_kernel: bool,
    /// The lifts generate the kernel.
    pub lifts_generate_kernel: bool,
    /// `|ker|` divides the order of the local term.
    pub divides: bool,
}

impl ExactSequenceReport {
    pub fn passed(&self) -> bool {
        self.surjective && self.lifts_in_kernel && self.lifts_generate_kernel && self.divides
    }
}

pub fn chrelfinite_check<F: NumberField>(field: &F, m: &Modulus<F>) -> Result<ExactSequenceReport> {
    let g = relative_chow(field, m)?;
    let cl = field.class_group();
    let hom = induced_hom(&g.presentation, cl, &g.class_group_images());
    let surjective = match &hom {
        Ok(h) => h.image_order()? == cl.order(),
        Err(Error::RelationViolated(_)) => false,
        Err(e) => return Err(e.clone()),
    };
    let ray_order = g.order();
    let class_number = cl.order();
    let (kernel_order, exact) = ray_order.div_rem(&class_number);

    let mut lifts = Vec::new();
    for (j, (y, dl)) in m.places.iter().zip(&g.locals).enumerate() {
        let targets: Vec<_> = m
            .places
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let r = if i == j { dl.generator().clone() } else { field.residue_field(z).one() };
                (z.clone(), r)
            })
            .collect();
        let lambda = weak_approx(field, &targets)?;
        debug_assert_eq!(field.residue(y, &lambda)?, *dl.generator());
        lifts.push(lambda);
    }
    if m.variant == Variant::Narrow {
        let big_m: BigInt = m.places.iter().map(|v| BigInt::from(field.residue_characteristic(v))).product();
        for i in 0..field.real_places() {
            lifts.push(field.sign_witness(i, &big_m));
        }
    }
    let mut in_kernel = true;
    let mut classes = Vec::new();
    for lambda in &lifts {
        let raw = g.cycle_class_raw(&boundary_div(field, lambda)?)?;
        if let Ok(h) = &hom {
            in_kernel &= cl.is_zero(&h.apply(&raw));
        }
        classes.push(g.quotient.class_of(&raw));
    }
    let generated = g.group().subgroup_order(&classes)?;
    let local_order: BigInt = g.locals.iter().map(|d| BigInt::from(d.order())).product::<BigInt>()
        * BigInt::from(2).pow(g.signs as u32);
    Ok(ExactSequenceReport {
        divides: exact.is_zero() && local_order.is_multiple_of(&kernel_order),
        lifts_generate_kernel: exact.is_zero() && generated == kernel_order,
        lifts_in_kernel: hom.is_ok() && in_kernel,
        surjective,
        ray_order,
        class_number,
        kernel_order,
        local_order,
    })
}

/// Result of the function-field Moore reciprocity harness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreReport {
    pub q: u64,
    pub samples: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    /// `(place, norm map onto F_q^× is surjective)`.
    pub norm_checks: Vec<(String, bool)>,
}

impl MooreReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.norm_checks.iter().all(|(_, ok)| *ok)
    }
}

/// Degree bound for random rational functions in the Moore harness.
pub const MOORE_MAX_DEGREE: usize = 6;

pub fn sk1_moore_check(q: u64, samples: usize, seed: u64) -> Result<MooreReport> {
    let k = FunctionField::new(q)?;
    let mut rng = sample::rng(seed);
    let mut failures = 0;
    let mut first_failure = None;
    for _ in 0..samples {
        let f = sample::random_ratfunc(&k, &mut rng, MOORE_MAX_DEGREE);
        let g = sample::random_ratfunc(&k, &mut rng, MOORE_MAX_DEGREE);
        let s = SteinbergSymbol::new(&k, f, g)?;
        let w = weil_product(&k, &s)?;
        if w != 1 {
            failures += 1;
            first_failure.get_or_insert_with(|| {
                format!("{{{}, {}}} has product {}", k.elem_to_string(&s.f), k.elem_to_string(&s.g), w)
            });
        }
    }
    let mut norm_checks = Vec::new();
    let mut places = vec![FunctionPlace::Finite(Poly::x())];
    places.extend(k.irreducibles_of_degree(2).into_iter().next().map(FunctionPlace::Finite));
    for y in places {
        norm_checks.push((k.place_to_string(&y), norm_surjective(&k, &y)));
    }
    Ok(MooreReport { q, samples, failures, first_failure, norm_checks })
}

/// Enumerates `N: k(y)^× → F_q^×` and checks every element is hit.
fn norm_surjective(k: &FunctionField, y: &FunctionPlace) -> bool {
    let ky = k.residue_field(y);
    let image: BTreeSet<u64> = ky.units().iter().map(|a| ky.norm(a)).collect();
    image.len() as u64 == k.q() - 1
}

/// Random relation members for `m`, as used by the soundness sweeps.
pub fn random_relation_members<F: NumberField, R: Rng>(
    field: &F,
    m: &Modulus<F>,
    rng: &mut R,
    count: usize,
    bound: i64,
) -> Vec<F::Elem> {
    (0..count).map(|_| sample::random_relation_member(field, m, rng, bound)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimePlace, QuadraticField, RationalField};
    use num_rational::BigRational;

    fn q_mod(s: &str, v: Variant) -> Modulus<RationalField> {
        parse_modulus(&RationalField, s, v).unwrap()
    }

    fn factors(g: &RayClassGroup<impl NumberField>) -> Vec<i64> {
        g.invariant_factors().iter().map(|d| d.to_i64().unwrap()).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn modulus_validation() {
        let q = RationalField;
        let p7 = PrimePlace::new(7).unwrap();
        assert!(make_modulus(&q, vec![p7], Variant::Narrow).is_ok());
        let p3 = PrimePlace::new(3).unwrap();
        assert!(matches!(make_modulus(&q, vec![p3, p3], Variant::Ordinary), Err(Error::DuplicatePlace(_))));
        let k = FunctionField::new(3).unwrap();
        assert_eq!(parse_places(&k, "t", Variant::Narrow).unwrap_err(), Error::NarrowUnsupported);
        assert!(matches!(parse_modulus(&q, "12", Variant::Narrow), Err(Error::Invalid(_))));
        assert!(q_mod("1", Variant::Narrow).is_empty());
        assert_eq!(q_mod("30", Variant::Narrow).places().len(), 3);
    }

    #[test]
    fn relation_membership() {
        let q = RationalField;
        let m = q_mod("7", Variant::Ordinary);
        assert!(relation_member(&q, &rat(15, 8), &m).unwrap());
        assert!(!relation_member(&q, &rat(3, 1), &m).unwrap());
        let n = m.with_variant(Variant::Narrow);
        assert!(relation_member(&q, &rat(8, 15), &n).unwrap());
        assert!(!relation_member(&q, &rat(-8, 15), &n).unwrap());
    }

    #[test]
    fn rational_ray_groups() {
        let q = RationalField;
        assert_eq!(factors(&relative_chow(&q, &q_mod("7", Variant::Narrow)).unwrap()), vec![6]);
        assert_eq!(factors(&relative_chow(&q, &q_mod("7", Variant::Ordinary)).unwrap()), vec![3]);
        assert_eq!(factors(&relative_chow(&q, &q_mod("15", Variant::Narrow)).unwrap()), vec![2, 4]);
        assert!(relative_chow(&q, &q_mod("1", Variant::Narrow)).unwrap().group().is_trivial());
    }

    #[test]
    fn cycle_classes_over_q() {
        let q = RationalField;
        let g = relative_chow(&q, &q_mod("7", Variant::Narrow)).unwrap();
        let p = |n| PrimePlace::new(n).unwrap();
        let c = ZeroCycle::from_terms([(p(2), 1), (p(11), 1)]);
        assert!(g.group().is_zero(&g.cycle_class(&c).unwrap()));
        assert!(g.group().is_zero(&g.cycle_class(&ZeroCycle::new()).unwrap()));
        assert_eq!(g.group().element_order(&g.prime_class(&p(2)).unwrap()), BigInt::from(3));
        assert!(check_relation_vanishes(&rat(15, 8), &g).unwrap());
        let g15 = relative_chow(&q, &q_mod("15", Variant::Narrow)).unwrap();
        assert!(matches!(g15.cycle_class(&ZeroCycle::point(p(3))), Err(Error::SupportMeetsModulus(_))));
    }

    #[test]
    fn quadratic_ray_groups() {
        let k = QuadraticField::new(-5).unwrap();
        let g = relative_chow(&k, &parse_modulus(&k, "1", Variant::Ordinary).unwrap()).unwrap();
        assert_eq!(factors(&g), vec![2]);
        // (3) splits in Q(√-5): (O/3)^× ≅ (Z/2)², units ±1, class number 2
        let m = parse_modulus(&k, "3", Variant::Ordinary).unwrap();
        let g = relative_chow(&k, &m).unwrap();
        assert_eq!(g.order(), BigInt::from(4));
        let gi = QuadraticField::new(-1).unwrap();
        let m = parse_modulus(&gi, "(5, 2+i)", Variant::Ordinary).unwrap();
        // (Z/5)^× modulo the image of <i>, which has order 4
        assert!(relative_chow(&gi, &m).unwrap().group().is_trivial());
        let r2 = QuadraticField::new(2).unwrap();
        let n = parse_modulus(&r2, "7", Variant::Narrow).unwrap();
        let o = n.with_variant(Variant::Ordinary);
        let gn = relative_chow(&r2, &n).unwrap();
        let go = relative_chow(&r2, &o).unwrap();
        assert!(gn.order().is_multiple_of(&go.order()));
    }

    #[test]
    fn exact_sequence_examples() {
        let q = RationalField;
        let r = chrelfinite_check(&q, &q_mod("15", Variant::Ordinary)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.kernel_order, BigInt::from(4));
        assert_eq!(r.local_order, BigInt::from(8));
        assert!(chrelfinite_check(&q, &q_mod("1", Variant::Narrow)).unwrap().passed());
        let k = QuadraticField::new(-5).unwrap();
        let m = parse_modulus(&k, "(3, 1+sqrt(-5))", Variant::Ordinary).unwrap();
        let r = chrelfinite_check(&k, &m).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.class_number, BigInt::from(2));
    }

    #[test]
    fn random_relations_vanish_over_quadratic_fields() {
        let mut rng = sample::rng(5);
        for (d, m, v) in [(-5, "3", Variant::Ordinary), (2, "7", Variant::Narrow), (10, "(3, 1+sqrt(10))", Variant::Narrow)] {
            let k = QuadraticField::new(d).unwrap();
            let m = parse_modulus(&k, m, v).unwrap();
            let g = relative_chow(&k, &m).unwrap();
            for f in random_relation_members(&k, &m, &mut rng, 40, 20) {
                assert!(check_relation_vanishes(&f, &g).unwrap(), "d={d} f={f}");
            }
        }
    }

    #[test]
    fn moore_harness() {
        let r = sk1_moore_check(3, 100, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.norm_checks.len(), 2);
        assert!(sk1_moore_check(2, 20, 1).unwrap().passed());
        assert!(sk1_moore_check(9, 20, 1).unwrap().passed());
    }
}
