//! Primitive binary quadratic forms `ax² + bxy + cy²` of fundamental
//! discriminant: reduction, Dirichlet composition and the form class group.
//!
//! Definite forms are reduced in the classical Gauss sense. Indefinite forms
//! use the normalized `rho` operator; the reduced forms of one class make up
//! a single `rho` cycle.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{FinAbGroup, GroupElem, IntMatrix, Presentation, Quotient};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// Integer 2×2 matrix acting on form variables: `f·M` is `v ↦ f(Mv)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[BigInt; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]])
    }

    fn translation(k: &BigInt) -> Self {
        Mat2([[BigInt::one(), k.clone()], [BigInt::zero(), BigInt::one()]])
    }

    fn swap() -> Self {
        Mat2([[BigInt::zero(), -BigInt::one()], [BigInt::one(), BigInt::zero()]])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let m = &self.0;
        let n = &o.0;
        let e = |i: usize, j: usize| &m[i][0] * &n[0][j] + &m[i][1] * &n[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn det(&self) -> BigInt {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Form { a: a.into(), b: b.into(), c: c.into() }
    }

    /// The form `(1, δ, (δ² − D)/4)` with `δ ≡ D (mod 2)`, or its indefinite
    /// reduced counterpart when `D > 0`.
    pub fn principal(disc: i64) -> Form {
        let d = BigInt::from(disc);
        let delta = BigInt::from(disc.rem_euclid(2));
        let c = (&delta * &delta - &d) / 4;
        Form { a: BigInt::one(), b: delta, c }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// `v ↦ f(Mv)`.
    pub fn transform(&self, m: &Mat2) -> Form {
        let [[p, q], [r, s]] = &m.0;
        let a = self.eval(p, r);
        let c = self.eval(q, s);
        let b = BigInt::from(2) * &self.a * p * q + &self.b * (p * s + q * r) + BigInt::from(2) * &self.c * r * s;
        Form { a, b, c }
    }

    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d.is_negative() {
            self.a.is_positive()
                && -&self.a < self.b
                && self.b <= self.a
                && self.a <= self.c
                && !(self.a == self.c && self.b.is_negative())
        } else {
            let s = d.sqrt();
            let two_a = BigInt::from(2) * self.a.abs();
            self.b.is_positive() && self.b <= s && &two_a + &self.b > s && &two_a - &self.b <= s
        }
    }

    fn translate(&self, k: &BigInt) -> Form {
        let b = &self.b + BigInt::from(2) * &self.a * k;
        let c = (&b * &b - self.discriminant()) / (BigInt::from(4) * &self.a);
        Form { a: self.a.clone(), b, c }
    }

    fn swapped(&self) -> Form {
        Form { a: self.c.clone(), b: -&self.b, c: self.a.clone() }
    }

    /// One step of the normalized reduction operator for indefinite forms.
    pub fn rho(&self) -> (Form, Mat2) {
        let d = self.discriminant();
        let s = d.sqrt();
        let c_abs = self.c.abs();
        let m = BigInt::from(2) * &c_abs;
        // r ≡ -b mod 2|c|
        let base = (-&self.b).mod_floor(&m);
        let r = if c_abs > s {
            if base > c_abs { base - &m } else { base }
        } else {
            // largest r <= s in the residue class
            &s - (&s - &base).mod_floor(&m)
        };
        let shift = (&r + &self.b) / (BigInt::from(2) * &self.c);
        let next = Form { a: self.c.clone(), b: r.clone(), c: (&r * &r - &d) / (BigInt::from(4) * &self.c) };
        let mat = Mat2([[BigInt::zero(), -BigInt::one()], [BigInt::one(), shift]]);
        debug_assert_eq!(self.transform(&mat), next);
        (next, mat)
    }

    /// Reduced form in the same proper class, with `reduced = self·M`.
    pub fn reduce(&self) -> (Form, Mat2) {
        if self.discriminant().is_negative() {
            self.reduce_definite()
        } else {
            let mut f = self.clone();
            let mut m = Mat2::identity();
            while !f.is_reduced() {
                let (g, step) = f.rho();
                f = g;
                m = m.mul(&step);
            }
            (f, m)
        }
    }

    fn reduce_definite(&self) -> (Form, Mat2) {
        assert!(self.a.is_positive(), "definite forms must be positive");
        let mut f = self.clone();
        let mut m = Mat2::identity();
        loop {
            // b into (-a, a]
            let two_a = BigInt::from(2) * &f.a;
            let k = (&f.a - &f.b).div_floor(&two_a);
            if !k.is_zero() {
                f = f.translate(&k);
                m = m.mul(&Mat2::translation(&k));
            }
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                f = f.swapped();
                m = m.mul(&Mat2::swap());
                continue;
            }
            return (f, m);
        }
    }

    /// Dirichlet composition; both forms must have positive leading coefficient.
    pub fn compose(&self, other: &Form) -> Form {
        let d = self.discriminant();
        debug_assert_eq!(d, other.discriminant());
        assert!(self.a.is_positive() && other.a.is_positive());
        let (a1, b1, a2, b2) = (&self.a, &self.b, &other.a, &other.b);
        let half = (b1 + b2) / 2;
        let e = a1.gcd(a2).gcd(&half);
        let big_a = a1 * a2 / (&e * &e);
        let m1 = BigInt::from(2) * a1 / &e;
        let m2 = BigInt::from(2) * a2 / &e;
        let four_a = BigInt::from(4) * &big_a;
        let mut bb = BigInt::zero();
        let limit = BigInt::from(2) * &big_a;
        while bb < limit {
            if (&bb - b1).mod_floor(&m1).is_zero()
                && (&bb - b2).mod_floor(&m2).is_zero()
                && (&bb * &bb - &d).mod_floor(&four_a).is_zero()
            {
                let c = (&bb * &bb - &d) / &four_a;
                return Form { a: big_a, b: bb, c };
            }
            bb += 1;
        }
        unreachable!("Dirichlet composition always has a solution")
    }

    /// A properly equivalent form with positive leading coefficient.
    pub fn with_positive_a(&self) -> Form {
        if self.a.is_positive() {
            return self.clone();
        }
        let (g, _) = self.rho();
        assert!(g.a.is_positive(), "rho alternates the sign of a on reduced indefinite forms");
        g
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All reduced forms of discriminant `disc`, primitive ones only.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let mut out = Vec::new();
    if disc < 0 {
        let amax = ((-disc) / 3).sqrt();
        for a in 1..=amax {
            for b in -a + 1..=a {
                if (b - disc).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let f = Form::new(a, b, c);
                if c >= a && f.is_reduced() && a.gcd(&b).gcd(&c) == 1 {
                    out.push(f);
                }
            }
        }
    } else {
        let s = disc.sqrt();
        for b in 1..=s {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let ac = (b * b - disc) / 4; // negative
            let n = -ac;
            for a in 1..=n {
                if n % a != 0 {
                    continue;
                }
                for sa in [a, -a] {
                    let c = ac / sa;
                    let f = Form::new(sa, b, c);
                    if f.is_reduced() && sa.abs().gcd(&b).gcd(&c.abs()) == 1 {
                        out.push(f);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The class group of primitive forms of a fundamental discriminant.
///
/// For `disc > 0` the `wide` flag quotients by the class of the form
/// `(-1, δ, ...)`, which yields the ideal class group (in the wide sense) rather
/// than the narrow one.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    disc: i64,
    classes: Vec<Form>,
    index: HashMap<Form, usize>,
    quotient: Quotient,
    cycles: Vec<Vec<Form>>,
}

impl FormClassGroup {
    pub fn new(disc: i64, wide: bool) -> Result<Self> {
        if disc == 0 || disc.rem_euclid(4) > 1 {
            return Err(Error::Invalid(format!("{disc} is not a discriminant")));
        }
        let forms = reduced_forms(disc);
        let mut index: HashMap<Form, usize> = HashMap::new();
        let mut classes = Vec::new();
        let mut cycles = Vec::new();
        for f in forms {
            if index.contains_key(&f) {
                continue;
            }
            let id = classes.len();
            let mut cycle = vec![f.clone()];
            if disc > 0 {
                let mut g = f.rho().0;
                while g != f {
                    cycle.push(g.clone());
                    g = g.rho().0;
                }
            }
            for g in &cycle {
                index.insert(g.clone(), id);
            }
            classes.push(f.with_positive_a_in(&cycle));
            cycles.push(cycle);
        }
        let h = classes.len();
        let lookup = |f: &Form| -> usize {
            let r = f.reduce().0;
            *index.get(&r).expect("every reduced form is enumerated")
        };
        let identity = lookup(&Form::principal(disc));
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        let unit = |i: usize| -> Vec<BigInt> {
            let mut v = vec![BigInt::zero(); h];
            v[i] = BigInt::one();
            v
        };
        cols.push(unit(identity));
        for i in 0..h {
            for j in i..h {
                let k = lookup(&classes[i].compose(&classes[j]));
                let mut v = vec![BigInt::zero(); h];
                v[i] += 1;
                v[j] += 1;
                v[k] -= 1;
                cols.push(v);
            }
        }
        if wide && disc > 0 {
            let delta = disc.rem_euclid(2);
            let neg = Form::new(-1, delta, (disc - delta * delta) / 4);
            cols.push(unit(lookup(&neg)));
        }
        let rel = IntMatrix::from_columns(h, &cols)?;
        let quotient = Presentation::new(h, rel).quotient()?;
        Ok(FormClassGroup { disc, classes, index, quotient, cycles })
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.quotient.group
    }

    /// Number of proper equivalence classes (before any wide quotient).
    pub fn form_class_count(&self) -> usize {
        self.classes.len()
    }

    /// One representative with positive leading coefficient per proper class.
    pub fn representatives(&self) -> &[Form] {
        &self.classes
    }

    pub fn cycles(&self) -> &[Vec<Form>] {
        &self.cycles
    }

    pub fn class_index(&self, f: &Form) -> Result<usize> {
        if f.discriminant() != BigInt::from(self.disc) {
            return Err(Error::DimensionMismatch(format!("form {f} has the wrong discriminant")));
        }
        let r = f.reduce().0;
        self.index.get(&r).copied().ok_or_else(|| Error::Invalid(format!("form {f} is not primitive")))
    }

    pub fn class_of(&self, f: &Form) -> Result<GroupElem> {
        Ok(self.quotient.generator_class(self.class_index(f)?))
    }
}

impl Form {
    fn with_positive_a_in(&self, cycle: &[Form]) -> Form {
        cycle.iter().find(|g| g.a.is_positive()).cloned().unwrap_or_else(|| self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(disc: i64) -> usize {
        FormClassGroup::new(disc, true).unwrap().group().order().try_into().unwrap()
    }

    #[test]
    fn imaginary_class_numbers() {
        assert_eq!(h(-4), 1);
        assert_eq!(h(-3), 1);
        assert_eq!(h(-20), 2);
        assert_eq!(h(-23), 3);
        assert_eq!(h(-56), 4);
        assert_eq!(h(-84), 4);
        let g = FormClassGroup::new(-84, true).unwrap();
        assert_eq!(g.group().invariant_factors(), &[BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn real_class_numbers() {
        assert_eq!(h(8), 1);
        assert_eq!(h(5), 1);
        assert_eq!(h(12), 1);
        assert_eq!(h(40), 2);
        assert_eq!(h(229), 3);
        // narrow class number of Q(sqrt 3) is 2
        let narrow = FormClassGroup::new(12, false).unwrap();
        assert_eq!(narrow.group().order(), BigInt::from(2));
    }

    #[test]
    fn rho_preserves_discriminant_and_cycles() {
        for f in reduced_forms(40) {
            let (g, m) = f.rho();
            assert!(g.is_reduced());
            assert_eq!(g.discriminant(), BigInt::from(40));
            assert_eq!(m.det(), BigInt::one());
        }
    }

    #[test]
    fn reduction_tracks_transformation() {
        let f = Form::new(35, 61, 27);
        let (r, m) = f.reduce();
        assert_eq!(f.transform(&m), r);
        assert!(r.is_reduced());
        assert_eq!(m.det(), BigInt::one());
        let g = Form::new(6, 7, -1);
        let (r, m) = g.reduce();
        assert_eq!(g.transform(&m), r);
        assert!(r.is_reduced());
    }
}
