//! The acceptance suite: one exact check per criterion, each with a wall-clock
//! limit. Shared by the `acceptance` test target and the CLI `selftest`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::chow::{chrelfinite_check, check_relation_vanishes, parse_modulus, relative_chow, sk1_moore_check, Modulus, Variant};
use crate::error::Result;
use crate::fields::arith::{is_squarefree, primes_up_to};
use crate::fields::{FunctionField, GlobalField, NumberField, PrimePlace, QuadraticField, RationalField};
use crate::ksymbols::{hilbert_product_check, symbol_support, tame_symbol, weil_product, SteinbergSymbol};
use crate::lattice::{cokernel_invariants, IntMatrix};
use crate::oracles::{
    analytic_class_number, check_fundamental_unit, cokernel_by_enumeration, units_mod_invariants,
    units_mod_plus_minus_invariants, IdealClassOracle,
};
use crate::reciprocity::{
    frobenius_class_order_matches, frobenius_order_check, real_frobenius_order_check, verify_rec_isomorphism, GaloisTarget,
};
use crate::sample;

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionResult {
    pub fn within_limit(&self) -> bool {
        self.elapsed <= self.limit
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_limit()
    }

    pub fn line(&self) -> String {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        let timing = if self.within_limit() { "" } else { " TIME LIMIT EXCEEDED" };
        format!(
            "[{status}] {}. {}: {} ({:.2}s, limit {}s){timing}",
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

type Check = fn(u64) -> std::result::Result<String, String>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub limit: Duration,
    check: Check,
}

impl Criterion {
    pub fn run(&self, seed: u64) -> CriterionResult {
        let start = Instant::now();
        let outcome = (self.check)(seed);
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        CriterionResult { id: self.id, name: self.name, passed, detail, elapsed, limit: self.limit }
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, check| Criterion { id, name, limit: Duration::from_secs(secs), check };
    vec![
        c(1, "ray class identification", 10, ray_class_identification),
        c(2, "reciprocity isomorphism", 30, reciprocity_isomorphism),
        c(3, "presentation soundness", 10, presentation_soundness),
        c(4, "Weil reciprocity", 20, weil_reciprocity),
        c(5, "Hilbert product formula", 5, hilbert_products),
        c(6, "exact sequence", 10, exact_sequence),
        c(7, "symbol axioms", 10, symbol_axioms),
        c(8, "SNF oracle", 10, snf_oracle),
        c(9, "quadratic oracles", 10, quadratic_oracles),
    ]
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    criteria().iter().map(|c| c.run(seed)).collect()
}

fn squarefree_up_to(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(|&m| is_squarefree(m as i64))
}

fn q_modulus(m: u64, v: Variant) -> Result<Modulus<RationalField>> {
    parse_modulus(&RationalField, &m.to_string(), v)
}

fn fail<T>(e: impl std::fmt::Display) -> std::result::Result<T, String> {
    Err(e.to_string())
}

fn ray_class_identification(_seed: u64) -> std::result::Result<String, String> {
    let mut count = 0;
    for m in squarefree_up_to(200) {
        for v in [Variant::Narrow, Variant::Ordinary] {
            let g = relative_chow(&RationalField, &q_modulus(m, v).map_err(|e| e.to_string())?)
                .map_err(|e| format!("m={m} {v}: {e}"))?;
            let expect = match v {
                Variant::Narrow => units_mod_invariants(m),
                Variant::Ordinary => units_mod_plus_minus_invariants(m),
            };
            if g.invariant_factors() != expect.as_slice() {
                return fail(format!("m={m} {v}: computed {:?}, oracle {:?}", g.invariant_factors(), expect));
            }
            count += 1;
        }
    }
    Ok(format!("{count} (modulus, variant) pairs match (Z/m)^x and its +-1 quotient"))
}

fn reciprocity_isomorphism(_seed: u64) -> std::result::Result<String, String> {
    let mut moduli = 0;
    let mut primes_checked = 0;
    for m in squarefree_up_to(100) {
        for v in [Variant::Narrow, Variant::Ordinary] {
            let md = q_modulus(m, v).map_err(|e| e.to_string())?;
            let r = verify_rec_isomorphism(&md).map_err(|e| format!("m={m} {v}: {e}"))?;
            if !r.passed() {
                return fail(format!("m={m} {v}: {r:?}"));
            }
            let t = GaloisTarget::new(&md);
            let ps: Vec<u64> = primes_up_to(1000).into_iter().filter(|p| m % p != 0).take(25).collect();
            for p in ps {
                let place = PrimePlace::new(p).map_err(|e| e.to_string())?;
                let f = t.frobenius(&place).map_err(|e| e.to_string())?;
                let expect = t.class_of_residue(p % m).map_err(|e| e.to_string())?;
                let degrees_ok = match v {
                    Variant::Narrow => frobenius_order_check(p, m),
                    Variant::Ordinary => real_frobenius_order_check(p, m),
                }
                .map_err(|e| e.to_string())?;
                let order_ok = frobenius_class_order_matches(&t, p).map_err(|e| e.to_string())?;
                if f.residue != p % m || f.target_class != expect || !degrees_ok || !order_ok {
                    return fail(format!("m={m} {v} p={p}: Frobenius order or factor degree mismatch"));
                }
                primes_checked += 1;
            }
            moduli += 1;
        }
    }
    Ok(format!("{moduli} isomorphisms verified, {primes_checked} Frobenius orders match cyclotomic factor degrees"))
}

fn presentation_soundness(seed: u64) -> std::result::Result<String, String> {
    let mut rng = sample::rng(seed);
    let mut total = 0;
    for m in [7u64, 15, 30, 105] {
        for v in [Variant::Narrow, Variant::Ordinary] {
            let md = q_modulus(m, v).map_err(|e| e.to_string())?;
            let g = relative_chow(&RationalField, &md).map_err(|e| e.to_string())?;
            for _ in 0..500 {
                let f = sample::random_relation_member(&RationalField, &md, &mut rng, 1000);
                match check_relation_vanishes(&f, &g) {
                    Ok(true) => total += 1,
                    Ok(false) => return fail(format!("m={m} {v}: class of div({f}) is nonzero")),
                    Err(e) => return fail(format!("m={m} {v} f={f}: {e}")),
                }
            }
        }
    }
    Ok(format!("{total} relation members have vanishing divisor class"))
}

fn weil_reciprocity(seed: u64) -> std::result::Result<String, String> {
    let mut rng = sample::rng(seed);
    let mut total = 0;
    for q in [2u64, 3, 5, 9] {
        let k = FunctionField::new(q).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let f = sample::random_ratfunc(&k, &mut rng, 6);
            let g = sample::random_ratfunc(&k, &mut rng, 6);
            let s = SteinbergSymbol::new(&k, f, g).map_err(|e| e.to_string())?;
            let w = weil_product(&k, &s).map_err(|e| e.to_string())?;
            if w != 1 {
                return fail(format!("q={q}: product {w} for {{{}, {}}}", k.elem_to_string(&s.f), k.elem_to_string(&s.g)));
            }
            total += 1;
        }
    }
    let moore = sk1_moore_check(3, 100, seed).map_err(|e| e.to_string())?;
    if !moore.passed() {
        return fail(format!("Moore harness: {moore:?}"));
    }
    Ok(format!("{total} symbols over F_q(t), q in {{2,3,5,9}}, have trivial norm product"))
}

fn hilbert_products(seed: u64) -> std::result::Result<String, String> {
    let mut rng = sample::rng(seed);
    for _ in 0..500 {
        let a = sample::random_rational(&mut rng, 10_000);
        let b = sample::random_rational(&mut rng, 10_000);
        match hilbert_product_check(&a, &b) {
            Ok(true) => {}
            Ok(false) => return fail(format!("product of Hilbert symbols ({a},{b}) is -1")),
            Err(e) => return fail(format!("({a},{b}): {e}")),
        }
    }
    Ok("500 rational pairs satisfy the product formula".into())
}

fn chrel<F: NumberField>(field: &F, m: &str, v: Variant) -> std::result::Result<String, String> {
    let md = parse_modulus(field, m, v).map_err(|e| format!("{} {m}: {e}", field.describe()))?;
    let r = chrelfinite_check(field, &md).map_err(|e| format!("{} {m}: {e}", field.describe()))?;
    if !r.passed() {
        return fail(format!("{} m={m} {v}: {r:?}", field.describe()));
    }
    Ok(format!("{}:{m}:{v}", field.describe()))
}

fn exact_sequence(_seed: u64) -> std::result::Result<String, String> {
    let mut count = 0;
    for m in ["7", "15", "30", "105"] {
        for v in [Variant::Narrow, Variant::Ordinary] {
            chrel(&RationalField, m, v)?;
            count += 1;
        }
    }
    let gi = QuadraticField::new(-1).map_err(|e| e.to_string())?;
    for m in ["(2, 1+i)", "(5, 2+i)", "3"] {
        chrel(&gi, m, Variant::Ordinary)?;
        count += 1;
    }
    let k5 = QuadraticField::new(-5).map_err(|e| e.to_string())?;
    for m in ["(2, 1+sqrt(-5))", "(3, 1+sqrt(-5))", "7"] {
        chrel(&k5, m, Variant::Ordinary)?;
        count += 1;
    }
    Ok(format!("{count} moduli over Q, Q(i), Q(sqrt(-5)) give exact sequences"))
}

/// Checks bimultiplicativity in both slots and `{f, 1-f} = 1` at the given places.
fn symbol_axioms_at<F: GlobalField>(
    k: &F,
    f1: &F::Elem,
    f2: &F::Elem,
    g: &F::Elem,
    extra: &[F::Place],
) -> std::result::Result<(), String> {
    let err = |e: crate::Error| e.to_string();
    let sym = |a: &F::Elem, b: &F::Elem| SteinbergSymbol::new(k, a.clone(), b.clone()).map_err(err);
    let f12 = k.mul(f1, f2);
    let mut places = symbol_support(k, &sym(&f12, g)?).map_err(err)?;
    places.extend(symbol_support(k, &sym(f1, f2)?).map_err(err)?);
    places.extend(extra.iter().cloned());
    places.sort();
    places.dedup();
    let one_minus = k.sub(&k.one(), f1);
    for v in &places {
        let kv = k.residue_field(v);
        let ts = |a: &F::Elem, b: &F::Elem| tame_symbol(k, v, &sym(a, b)?).map_err(err);
        if ts(&f12, g)? != kv.mul(&ts(f1, g)?, &ts(f2, g)?) {
            return fail(format!("first slot not multiplicative at {}", k.place_to_string(v)));
        }
        if ts(g, &f12)? != kv.mul(&ts(g, f1)?, &ts(g, f2)?) {
            return fail(format!("second slot not multiplicative at {}", k.place_to_string(v)));
        }
        if !k.is_zero(&one_minus) && !kv.is_one(&ts(f1, &one_minus)?) {
            return fail(format!("Steinberg relation fails at {}", k.place_to_string(v)));
        }
    }
    Ok(())
}

fn number_field_instance<F: NumberField, R: Rng>(
    k: &F,
    rng: &mut R,
    places: &[F::Place],
) -> std::result::Result<(), String> {
    let mut elem = || loop {
        let a = sample::random_integral(k, rng, 30);
        let b = sample::random_integral(k, rng, 30);
        if !k.is_zero(&a) && !k.is_zero(&b) {
            return k.div(&a, &b).expect("nonzero");
        }
    };
    let (f1, f2, g) = (elem(), elem(), elem());
    let extra: Vec<F::Place> = places.choose(rng).into_iter().cloned().collect();
    symbol_axioms_at(k, &f1, &f2, &g, &extra).map_err(|e| format!("{}: {e} for ({f1}, {f2}, {g})", k.describe()))
}

fn symbol_axioms(seed: u64) -> std::result::Result<String, String> {
    let mut rng = sample::rng(seed);
    let e = |e: crate::Error| e.to_string();
    let q = RationalField;
    let q_places = q.enumerate_places(50).map_err(e)?;
    let k5 = QuadraticField::new(-5).map_err(e)?;
    let k5_places = k5.enumerate_places(30).map_err(e)?;
    let k2 = QuadraticField::new(2).map_err(e)?;
    let k2_places = k2.enumerate_places(30).map_err(e)?;
    let fqs = [FunctionField::new(3).map_err(e)?, FunctionField::new(4).map_err(e)?];
    let fq_places: Vec<_> = fqs.iter().map(|k| k.enumerate_places(2)).collect::<Result<_>>().map_err(e)?;
    for i in 0..1000 {
        match i % 5 {
            0 => number_field_instance(&q, &mut rng, &q_places)?,
            1 => number_field_instance(&k5, &mut rng, &k5_places)?,
            2 => number_field_instance(&k2, &mut rng, &k2_places)?,
            j => {
                let k = &fqs[j - 3];
                let f1 = sample::random_ratfunc(k, &mut rng, 4);
                let f2 = sample::random_ratfunc(k, &mut rng, 4);
                let g = sample::random_ratfunc(k, &mut rng, 4);
                let extra: Vec<_> = fq_places[j - 3].choose(&mut rng).into_iter().cloned().collect();
                symbol_axioms_at(k, &f1, &f2, &g, &extra).map_err(|err| format!("F_{}(t): {err}", k.q()))?;
            }
        }
    }
    Ok("1000 instances over Q, Q(sqrt(-5)), Q(sqrt(2)), F_3(t), F_4(t)".into())
}

fn snf_oracle(seed: u64) -> std::result::Result<String, String> {
    let mut rng = sample::rng(seed);
    let mut done = 0;
    while done < 200 {
        let rows: Vec<Vec<i64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(-10..=10)).collect()).collect();
        let a = IntMatrix::from_rows(&rows).map_err(|e| e.to_string())?;
        let det = a.determinant().map_err(|e| e.to_string())?.to_i64().unwrap_or(i64::MAX);
        if det == 0 || det.abs() > 2000 {
            continue;
        }
        let fast = cokernel_invariants(&a, 4).map_err(|e| e.to_string())?;
        let slow = cokernel_by_enumeration(&a).map_err(|e| e.to_string())?;
        if fast.invariant_factors() != slow.as_slice() {
            return fail(format!("{rows:?}: SNF gives {:?}, enumeration gives {slow:?}", fast.invariant_factors()));
        }
        done += 1;
    }
    Ok("200 random 4x4 matrices agree with coset enumeration".into())
}

fn quadratic_oracles(_seed: u64) -> std::result::Result<String, String> {
    let mut fields = 0;
    for d in -50i64..=50 {
        if d == 0 || d == 1 || !is_squarefree(d) {
            continue;
        }
        let k = QuadraticField::new(d).map_err(|e| e.to_string())?;
        let forms = k.class_group().invariant_factors().to_vec();
        let ideals = IdealClassOracle::new(&k).class_group().map_err(|e| e.to_string())?;
        if forms != ideals {
            return fail(format!("d={d}: forms give {forms:?}, ideals give {ideals:?}"));
        }
        let h: BigInt = forms.iter().product();
        if BigInt::from(analytic_class_number(&k)) != h {
            return fail(format!("d={d}: analytic class number disagrees with {h}"));
        }
        if k.is_real() && !check_fundamental_unit(&k) {
            return fail(format!("d={d}: fundamental unit {:?} is not the Pell minimum", k.fundamental_unit()));
        }
        fields += 1;
    }
    Ok(format!("{fields} fields: form and ideal class groups agree, units minimal"))
}
