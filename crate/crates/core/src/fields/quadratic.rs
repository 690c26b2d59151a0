use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{big_mod, factor_big, inv_mod, is_prime, is_squarefree, primes_up_to, sqrt_mod, valuation_big};
use super::expr::ExprParser;
use super::forms::{Form, FormClassGroup};
use super::{FiniteField, GlobalField, NumberField, Poly, ResidueElem, ResidueField};
use crate::error::{Error, Result};
use crate::lattice::{solve_integer, FinAbGroup, GroupElem, IntMatrix};

/// Largest `|d|` accepted by [`QuadraticField::new`].
pub const MAX_ABS_D: i64 = 200;

/// The quadratic field ℚ(√d) with ring of integers ℤ[ω], where
/// `ω = (1+√d)/2` when `d ≡ 1 (mod 4)` and `ω = √d` otherwise.
#[derive(Clone, Debug)]
pub struct QuadraticField {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    d: i64,
    disc: i64,
    // ω² = tω − n
    t: i64,
    n: i64,
    classes: FormClassGroup,
    unit: Option<Integral>,
}

/// The element `(a + b√d)/c`, with `c > 0` and `gcd(a, b, c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: i64,
}

/// An algebraic integer `x + yω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Integral {
    pub x: BigInt,
    pub y: BigInt,
}

/// A nonzero ideal in Hermite normal form: the ℤ-span of `a` and `b + cω`,
/// with `c | a`, `c | b` and `0 ≤ b < a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal of the ring of integers.
#[derive(Clone, Debug)]
pub struct QuadPrime {
    p: u64,
    splitting: Splitting,
    ideal: Ideal,
    // image of ω in the residue field for degree-1 primes
    root: Option<u64>,
    // integral s with s·P ⊆ (p) and v_P(s) = v_P(p) − 1
    strip: Integral,
    label: String,
}

impl Integral {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Integral { x: x.into(), y: y.into() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl Ideal {
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn unit() -> Ideal {
        Ideal { a: BigInt::one(), b: BigInt::zero(), c: BigInt::one() }
    }

    /// Index in the ring of integers.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    /// HNF of the ℤ-lattice spanned by the given coordinate vectors; `None`
    /// when the span does not have rank 2.
    fn from_lattice(vecs: &[(BigInt, BigInt)]) -> Option<Ideal> {
        let mut a = BigInt::zero();
        let mut piv: Option<(BigInt, BigInt)> = None;
        for (x, y) in vecs {
            if y.is_zero() {
                a = a.gcd(x);
                continue;
            }
            piv = Some(match piv {
                None => (x.clone(), y.clone()),
                Some((px, py)) => {
                    let eg = py.extended_gcd(y);
                    let g = eg.gcd;
                    let nx = &eg.x * &px + &eg.y * x;
                    let other = (y / &g) * &px - (&py / &g) * x;
                    a = a.gcd(&other);
                    (nx, g)
                }
            });
        }
        let (mut px, mut py) = piv?;
        if py.is_negative() {
            px = -px;
            py = -py;
        }
        if a.is_zero() {
            return None;
        }
        let b = px.mod_floor(&a);
        Some(Ideal { a, b, c: py })
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}+{}w]", self.a, self.b, self.c)
    }
}

impl QuadPrime {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn splitting(&self) -> Splitting {
        self.splitting
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ramification(&self) -> u32 {
        if self.splitting == Splitting::Ramified { 2 } else { 1 }
    }

    pub fn degree(&self) -> u32 {
        if self.splitting == Splitting::Inert { 2 } else { 1 }
    }

    pub fn norm(&self) -> u64 {
        self.p.pow(self.degree())
    }

    fn sort_key(&self) -> (u64, u64, &BigInt) {
        (self.norm(), self.p, &self.ideal.b)
    }
}

impl PartialEq for QuadPrime {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ideal == other.ideal
    }
}

impl Eq for QuadPrime {}

impl Hash for QuadPrime {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.ideal.hash(state);
    }
}

impl Ord for QuadPrime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for QuadPrime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl QuadElem {
    fn normalized(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: i64) -> QuadElem {
        assert!(!c.is_zero(), "zero denominator");
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if a.is_zero() && b.is_zero() {
            c = BigInt::one();
        }
        QuadElem { a, b, c, d }
    }

    /// Rational part numerator.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coefficient of √d in the numerator.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn denominator(&self) -> &BigInt {
        &self.c
    }

    /// Field norm as an exact fraction `(num, den)`.
    pub fn norm(&self) -> (BigInt, BigInt) {
        let num = &self.a * &self.a - BigInt::from(self.d) * &self.b * &self.b;
        (num, &self.c * &self.c)
    }
}

fn symbol(d: i64) -> String {
    if d == -1 { "i".into() } else { format!("sqrt({d})") }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = symbol(self.d);
        let irr = if self.b.is_zero() {
            String::new()
        } else if self.b.is_one() {
            sym.clone()
        } else if self.b == -BigInt::one() {
            format!("-{sym}")
        } else if self.d == -1 {
            format!("{}{sym}", self.b)
        } else {
            format!("{}*{sym}", self.b)
        };
        let (num, terms) = match (self.a.is_zero(), irr.is_empty()) {
            (_, true) => (self.a.to_string(), 1),
            (true, false) => (irr, 1),
            (false, false) => {
                let sep = if irr.starts_with('-') { "" } else { "+" };
                (format!("{}{sep}{irr}", self.a), 2)
            }
        };
        if self.c.is_one() {
            write!(f, "{num}")
        } else if terms == 2 {
            write!(f, "({num})/{}", self.c)
        } else {
            write!(f, "{num}/{}", self.c)
        }
    }
}

/// Sign of `a + b√d` for `d > 0`.
fn real_sign(a: &BigInt, b: &BigInt, d: i64) -> Ordering {
    let zero = BigInt::zero();
    match (a.cmp(&zero), b.cmp(&zero)) {
        (sa, Ordering::Equal) => sa,
        (Ordering::Equal, sb) => sb,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(b * b * BigInt::from(d))),
        (Ordering::Less, Ordering::Greater) => (b * b * BigInt::from(d)).cmp(&(a * a)),
    }
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::Invalid(format!("d = {d} must be a squarefree integer other than 0 and 1")));
        }
        if d.abs() > MAX_ABS_D {
            return Err(Error::OutOfSupportedRange(format!("|d| = {} exceeds {MAX_ABS_D}", d.abs())));
        }
        let (t, n, disc) = if d.rem_euclid(4) == 1 { (1, (1 - d) / 4, d) } else { (0, -d, 4 * d) };
        let classes = FormClassGroup::new(disc, true)?;
        let unit = (d > 0).then(|| fundamental_unit_cf(t, n, disc));
        Ok(QuadraticField { inner: Arc::new(Inner { d, disc, t, n, classes, unit }) })
    }

    pub fn d(&self) -> i64 {
        self.inner.d
    }

    /// Field discriminant.
    pub fn discriminant(&self) -> i64 {
        self.inner.disc
    }

    pub fn is_real(&self) -> bool {
        self.inner.d > 0
    }

    /// `(a + b√d)/c`.
    pub fn elem(&self, a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> QuadElem {
        QuadElem::normalized(a.into(), b.into(), c.into(), self.inner.d)
    }

    pub fn omega(&self) -> QuadElem {
        self.from_integral(&Integral::new(0, 1))
    }

    fn omega_symbol(&self) -> String {
        match self.inner.d {
            -1 => "i".into(),
            d if d.rem_euclid(4) == 1 => "w".into(),
            d => format!("sqrt({d})"),
        }
    }

    pub fn from_integral(&self, u: &Integral) -> QuadElem {
        if self.inner.t == 1 {
            self.elem(BigInt::from(2) * &u.x + &u.y, u.y.clone(), 2)
        } else {
            self.elem(u.x.clone(), u.y.clone(), 1)
        }
    }

    /// Writes `x = β/L` with `β` integral and `L` a positive integer.
    pub fn integral_parts(&self, x: &QuadElem) -> (Integral, BigInt) {
        let beta = if self.inner.t == 1 {
            Integral { x: &x.a - &x.b, y: BigInt::from(2) * &x.b }
        } else {
            Integral { x: x.a.clone(), y: x.b.clone() }
        };
        (beta, x.c.clone())
    }

    pub fn as_integral(&self, x: &QuadElem) -> Option<Integral> {
        let (beta, l) = self.integral_parts(x);
        (beta.x.is_multiple_of(&l) && beta.y.is_multiple_of(&l)).then(|| Integral { x: beta.x / &l, y: beta.y / &l })
    }

    pub fn int_mul(&self, u: &Integral, v: &Integral) -> Integral {
        let (t, n) = (BigInt::from(self.inner.t), BigInt::from(self.inner.n));
        Integral {
            x: &u.x * &v.x - &n * &u.y * &v.y,
            y: &u.x * &v.y + &v.x * &u.y + &t * &u.y * &v.y,
        }
    }

    pub fn int_norm(&self, u: &Integral) -> BigInt {
        &u.x * &u.x + BigInt::from(self.inner.t) * &u.x * &u.y + BigInt::from(self.inner.n) * &u.y * &u.y
    }

    pub fn int_conj(&self, u: &Integral) -> Integral {
        Integral { x: &u.x + BigInt::from(self.inner.t) * &u.y, y: -&u.y }
    }

    // ---- ideals ----

    /// The ideal generated by the given elements; `None` if they are all zero.
    pub fn ideal_from_gens(&self, gens: &[Integral]) -> Option<Ideal> {
        let w = Integral::new(0, 1);
        let mut vecs = Vec::with_capacity(2 * gens.len());
        for g in gens {
            let gw = self.int_mul(g, &w);
            vecs.push((g.x.clone(), g.y.clone()));
            vecs.push((gw.x, gw.y));
        }
        Ideal::from_lattice(&vecs)
    }

    pub fn principal_ideal(&self, u: &Integral) -> Result<Ideal> {
        self.ideal_from_gens(std::slice::from_ref(u)).ok_or(Error::ZeroElement)
    }

    fn basis(&self, i: &Ideal) -> [Integral; 2] {
        [Integral { x: i.a.clone(), y: BigInt::zero() }, Integral { x: i.b.clone(), y: i.c.clone() }]
    }

    pub fn ideal_mul(&self, i: &Ideal, j: &Ideal) -> Ideal {
        let mut gens = Vec::with_capacity(4);
        for u in self.basis(i) {
            for v in self.basis(j) {
                gens.push(self.int_mul(&u, &v));
            }
        }
        self.ideal_from_gens(&gens).expect("product of nonzero ideals is nonzero")
    }

    pub fn ideal_pow(&self, i: &Ideal, mut e: u64) -> Ideal {
        let mut acc = Ideal::unit();
        let mut base = i.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.ideal_mul(&acc, &base);
            }
            base = self.ideal_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn ideal_contains(&self, i: &Ideal, u: &Integral) -> bool {
        if !u.y.is_multiple_of(&i.c) {
            return false;
        }
        let k = &u.y / &i.c;
        (&u.x - k * &i.b).is_multiple_of(&i.a)
    }

    pub fn ideal_conj(&self, i: &Ideal) -> Ideal {
        let [u, v] = self.basis(i);
        self.ideal_from_gens(&[u, self.int_conj(&v)]).expect("nonzero ideal")
    }

    // ---- primes ----

    fn make_prime(&self, p: u64, splitting: Splitting, root: Option<u64>, other_root: Option<u64>) -> QuadPrime {
        let pb = BigInt::from(p);
        let (ideal, strip) = match splitting {
            Splitting::Inert => (Ideal { a: pb.clone(), b: BigInt::zero(), c: pb.clone() }, Integral::new(1, 0)),
            Splitting::Split => {
                let r = root.expect("split primes carry a root");
                let ideal = self.ideal_from_gens(&[Integral::new(p, 0), Integral::new(-BigInt::from(r), 1)]).expect("nonzero");
                let s = Integral::new(-BigInt::from(other_root.expect("conjugate root")), 1);
                (ideal, s)
            }
            Splitting::Ramified => {
                let r = root.expect("ramified primes carry a root");
                let ideal = self.ideal_from_gens(&[Integral::new(p, 0), Integral::new(-BigInt::from(r), 1)]).expect("nonzero");
                let mut pi = Integral::new(-BigInt::from(r), 1);
                if valuation_big(&self.int_norm(&pi), p) != 1 {
                    pi = Integral::new(-BigInt::from(r) - &pb, 1);
                }
                assert_eq!(valuation_big(&self.int_norm(&pi), p), 1, "uniformizer at a ramified prime");
                (ideal, pi)
            }
        };
        let label = match splitting {
            Splitting::Inert => format!("({p})"),
            _ if ideal.b.is_zero() => format!("({p}, {})", self.omega_symbol()),
            _ => format!("({p}, {}+{})", ideal.b, self.omega_symbol()),
        };
        QuadPrime { p, splitting, ideal, root, strip, label }
    }

    /// Primes above `p` with their ramification index and residue degree.
    pub fn factor_rational_prime(&self, p: u64) -> Result<Vec<(QuadPrime, u32, u32)>> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        let t = self.inner.t.rem_euclid(p as i64) as u64;
        let n = self.inner.n.rem_euclid(p as i64) as u64;
        // roots of X² − tX + n mod p
        let roots: Vec<u64> = if p == 2 {
            (0..2).filter(|&x| (x * x + (2 - t) * x + n).is_multiple_of(2)).collect()
        } else {
            let disc = self.inner.disc.rem_euclid(p as i64) as u64;
            let inv2 = inv_mod(2, p).expect("p odd");
            match sqrt_mod(disc, p) {
                None => vec![],
                Some(0) => vec![(t * inv2) % p],
                Some(s) => {
                    let r1 = ((t + s) % p) * inv2 % p;
                    let r2 = ((t + p - s) % p) * inv2 % p;
                    vec![r1, r2]
                }
            }
        };
        let ramified = self.inner.disc.rem_euclid(p as i64) == 0;
        let mut out = match (roots.len(), ramified) {
            (0, _) => vec![(self.make_prime(p, Splitting::Inert, None, None), 1, 2)],
            (_, true) => vec![(self.make_prime(p, Splitting::Ramified, Some(roots[0]), None), 2, 1)],
            (2, false) => vec![
                (self.make_prime(p, Splitting::Split, Some(roots[0]), Some(roots[1])), 1, 1),
                (self.make_prime(p, Splitting::Split, Some(roots[1]), Some(roots[0])), 1, 1),
            ],
            _ => unreachable!("a double root means p divides the discriminant"),
        };
        out.sort_by(|x, y| x.0.cmp(&y.0));
        Ok(out)
    }

    fn in_prime(&self, v: &QuadPrime, u: &Integral) -> bool {
        match v.root {
            None => big_mod(&u.x, v.p) == 0 && big_mod(&u.y, v.p) == 0,
            Some(r) => (&u.x + &u.y * BigInt::from(r)).is_multiple_of(&BigInt::from(v.p)),
        }
    }

    fn strip_once(&self, v: &QuadPrime, u: &Integral) -> Integral {
        let w = self.int_mul(u, &v.strip);
        let p = BigInt::from(v.p);
        debug_assert!(w.x.is_multiple_of(&p) && w.y.is_multiple_of(&p));
        Integral { x: w.x / &p, y: w.y / &p }
    }

    fn int_valuation(&self, v: &QuadPrime, u: &Integral) -> i64 {
        assert!(!u.is_zero());
        let mut k = 0;
        let mut w = u.clone();
        while self.in_prime(v, &w) {
            w = self.strip_once(v, &w);
            k += 1;
        }
        k
    }

    fn int_residue(&self, v: &QuadPrime, u: &Integral) -> ResidueElem {
        let p = v.p;
        match v.root {
            Some(r) => ResidueElem(Poly::constant((big_mod(&u.x, p) + big_mod(&u.y, p) * r % p) % p)),
            None => ResidueElem(Poly::new(vec![big_mod(&u.x, p), big_mod(&u.y, p)])),
        }
    }

    // ---- class group and units ----

    pub fn form_class_group(&self) -> &FormClassGroup {
        &self.inner.classes
    }

    /// The norm form of the primitive part of `i` with respect to its HNF basis.
    pub fn norm_form(&self, i: &Ideal) -> Form {
        let a = &i.a / &i.c;
        let b = &i.b / &i.c;
        let (t, n) = (BigInt::from(self.inner.t), BigInt::from(self.inner.n));
        let c = (&b * &b + &t * &b + &n) / &a;
        Form { b: BigInt::from(2) * &b + &t, a, c }
    }

    pub fn ideal_class(&self, i: &Ideal) -> Result<GroupElem> {
        self.inner.classes.class_of(&self.norm_form(i))
    }

    /// A generator of `i` if it is principal.
    pub fn principal_generator(&self, i: &Ideal) -> Option<Integral> {
        let f = self.norm_form(i);
        let (r, m) = f.reduce();
        let xy = if self.inner.disc < 0 {
            (r == Form::principal(self.inner.disc)).then(|| (m.0[0][0].clone(), m.0[1][0].clone()))
        } else {
            let mut g = r.clone();
            let mut acc = m;
            loop {
                if g.a.abs().is_one() {
                    break Some((acc.0[0][0].clone(), acc.0[1][0].clone()));
                }
                let (h, step) = g.rho();
                acc = acc.mul(&step);
                g = h;
                if g == r {
                    break None;
                }
            }
        }?;
        let (x, y) = xy;
        let ap = &i.a / &i.c;
        let bp = &i.b / &i.c;
        let alpha = Integral { x: &i.c * (&x * &ap + &y * &bp), y: &i.c * &y };
        debug_assert_eq!(self.int_norm(&alpha).abs(), i.norm());
        debug_assert_eq!(self.principal_ideal(&alpha).ok().as_ref(), Some(i));
        Some(alpha)
    }

    /// The fundamental unit `ε > 1` of a real field.
    pub fn fundamental_unit(&self) -> Option<QuadElem> {
        self.inner.unit.as_ref().map(|u| self.from_integral(u))
    }

    pub fn fundamental_unit_integral(&self) -> Option<&Integral> {
        self.inner.unit.as_ref()
    }

    /// Generator of the torsion units.
    pub fn root_of_unity(&self) -> QuadElem {
        match self.inner.d {
            -1 => self.from_integral(&Integral::new(0, 1)),
            // ω = (1+√−3)/2 has order 6
            -3 => self.from_integral(&Integral::new(0, 1)),
            _ => self.elem(-1, 0, 1),
        }
    }

    pub fn torsion_order(&self) -> u32 {
        match self.inner.d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }
}

/// First convergent `p/q` of ω with `N(p − qω) = ±1` gives the fundamental
/// unit `(p − qω)'`.
fn fundamental_unit_cf(t: i64, n: i64, disc: i64) -> Integral {
    let s = disc.sqrt();
    let (mut pp, mut qq) = (t, 2i64);
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    let (tb, nb) = (BigInt::from(t), BigInt::from(n));
    loop {
        let a = (pp + s).div_euclid(qq);
        let p = BigInt::from(a) * &p1 + &p2;
        let q = BigInt::from(a) * &q1 + &q2;
        let norm = &p * &p - &tb * &p * &q + &nb * &q * &q;
        if norm.abs().is_one() {
            return Integral { x: &p - &q * &tb, y: q };
        }
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
        pp = a * qq - pp;
        qq = (disc - pp * pp) / qq;
    }
}

impl GlobalField for QuadraticField {
    type Elem = QuadElem;
    type Place = QuadPrime;

    fn describe(&self) -> String {
        format!("Q(sqrt({}))", self.inner.d)
    }

    fn one(&self) -> QuadElem {
        self.elem(1, 0, 1)
    }

    fn from_i64(&self, n: i64) -> QuadElem {
        self.elem(n, 0, 1)
    }

    fn is_zero(&self, x: &QuadElem) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }

    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::normalized(&x.a * &y.c + &y.a * &x.c, &x.b * &y.c + &y.b * &x.c, &x.c * &y.c, x.d)
    }

    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem { a: -&x.a, b: -&x.b, c: x.c.clone(), d: x.d }
    }

    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        let d = BigInt::from(x.d);
        QuadElem::normalized(&x.a * &y.a + d * &x.b * &y.b, &x.a * &y.b + &x.b * &y.a, &x.c * &y.c, x.d)
    }

    fn inv(&self, x: &QuadElem) -> Result<QuadElem> {
        if self.is_zero(x) {
            return Err(Error::ZeroElement);
        }
        let den = &x.a * &x.a - BigInt::from(x.d) * &x.b * &x.b;
        Ok(QuadElem::normalized(&x.c * &x.a, -(&x.c * &x.b), den, x.d))
    }

    fn valuation(&self, v: &QuadPrime, x: &QuadElem) -> Result<i64> {
        if self.is_zero(x) {
            return Err(Error::ZeroElement);
        }
        let (beta, l) = self.integral_parts(x);
        Ok(self.int_valuation(v, &beta) - self.int_valuation(v, &Integral { x: l, y: BigInt::zero() }))
    }

    fn residue_field(&self, v: &QuadPrime) -> ResidueField {
        let base = Arc::new(FiniteField::prime(v.p).expect("prime"));
        let modulus = match v.root {
            Some(_) => Poly::x(),
            None => {
                let p = v.p as i64;
                Poly::new(vec![self.inner.n.rem_euclid(p) as u64, (-self.inner.t).rem_euclid(p) as u64, 1])
            }
        };
        ResidueField::new(base, modulus)
    }

    fn residue(&self, v: &QuadPrime, x: &QuadElem) -> Result<ResidueElem> {
        if self.valuation(v, x)? != 0 {
            return Err(Error::NotAUnit(v.to_string()));
        }
        let (mut beta, l) = self.integral_parts(x);
        let mut l = Integral { x: l, y: BigInt::zero() };
        while self.in_prime(v, &l) {
            l = self.strip_once(v, &l);
            beta = self.strip_once(v, &beta);
        }
        let k = self.residue_field(v);
        let num = self.int_residue(v, &beta);
        let den = k.inv(&self.int_residue(v, &l)).expect("stripped denominator is a unit");
        Ok(k.mul(&num, &den))
    }

    fn lift_residue(&self, v: &QuadPrime, r: &ResidueElem) -> QuadElem {
        match v.root {
            Some(_) => self.elem(r.0.coeff(0), 0, 1),
            None => self.from_integral(&Integral::new(r.0.coeff(0), r.0.coeff(1))),
        }
    }

    fn support(&self, x: &QuadElem) -> Result<Vec<QuadPrime>> {
        if self.is_zero(x) {
            return Err(Error::ZeroElement);
        }
        let (beta, l) = self.integral_parts(x);
        let mut ps: Vec<u64> =
            factor_big(&self.int_norm(&beta))?.into_iter().chain(factor_big(&l)?).map(|(p, _)| p).collect();
        ps.sort_unstable();
        ps.dedup();
        let mut out = Vec::new();
        for p in ps {
            for (v, _, _) in self.factor_rational_prime(p)? {
                if self.valuation(&v, x)? != 0 {
                    out.push(v);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn approximate(&self, targets: &[(QuadPrime, ResidueElem)]) -> Result<QuadElem> {
        if targets.is_empty() {
            return Ok(self.one());
        }
        let mut acc = Integral::new(0, 0);
        for (i, (v, r)) in targets.iter().enumerate() {
            let others = targets
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(Ideal::unit(), |m, (_, (w, _))| self.ideal_mul(&m, &w.ideal));
            // e ∈ others with e ≡ 1 mod v
            let [u1, u2] = self.basis(&others);
            let [w1, w2] = self.basis(&v.ideal);
            let cols: Vec<Vec<BigInt>> = [&u1, &u2, &w1, &w2].iter().map(|g| vec![g.x.clone(), g.y.clone()]).collect();
            let a = IntMatrix::from_columns(2, &cols)?;
            let k = solve_integer(&a, &[BigInt::one(), BigInt::zero()])
                .ok_or_else(|| Error::Invalid("places in weak approximation must be distinct".into()))?;
            let e = Integral { x: &k[0] * &u1.x + &k[1] * &u2.x, y: &k[1] * &u2.y };
            let (lift, _) = self.integral_parts(&self.lift_residue(v, r));
            let term = self.int_mul(&lift, &e);
            acc = Integral { x: acc.x + term.x, y: acc.y + term.y };
        }
        Ok(self.from_integral(&acc))
    }

    fn enumerate_places(&self, bound: u64) -> Result<Vec<QuadPrime>> {
        let mut out = Vec::new();
        for p in primes_up_to(bound) {
            for (v, _, _) in self.factor_rational_prime(p)? {
                if v.norm() <= bound {
                    out.push(v);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn parse_place(&self, s: &str) -> Result<QuadPrime> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("place {s:?} must be written in parentheses")))?;
        let parts: Vec<&str> = inner.split(',').collect();
        let mut gens = Vec::new();
        for part in &parts {
            let e = self.parse_elem(part)?;
            gens.push(self.as_integral(&e).ok_or_else(|| Error::Parse(format!("{part:?} is not an algebraic integer")))?);
        }
        let ideal = self.ideal_from_gens(&gens).ok_or(Error::ZeroElement)?;
        let norm = ideal.norm();
        let fac = factor_big(&norm)?;
        if fac.len() == 1 && fac[0].1 <= 2 {
            for (v, _, _) in self.factor_rational_prime(fac[0].0)? {
                if v.ideal == ideal {
                    return Ok(v);
                }
            }
        }
        Err(Error::Invalid(format!("{s:?} is not a prime ideal of {}", self.describe())))
    }

    fn parse_elem(&self, s: &str) -> Result<QuadElem> {
        const ROOT: char = '\u{e000}';
        let d = self.inner.d;
        // rewrite sqrt(d) and √d to a private placeholder
        let mut src = String::new();
        let mut rest = s;
        while !rest.is_empty() {
            let radical = if let Some(r) = rest.strip_prefix("sqrt(") {
                let close = r.find(')').ok_or_else(|| Error::Parse(format!("unclosed sqrt( in {s:?}")))?;
                Some((&r[..close], &r[close + 1..]))
            } else if let Some(r) = rest.strip_prefix('√') {
                let r = r.trim_start();
                if let Some(r2) = r.strip_prefix('(') {
                    let close = r2.find(')').ok_or_else(|| Error::Parse(format!("unclosed √( in {s:?}")))?;
                    Some((&r2[..close], &r2[close + 1..]))
                } else {
                    let end = r
                        .char_indices()
                        .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                        .map_or(r.len(), |(i, _)| i);
                    Some((&r[..end], &r[end..]))
                }
            } else {
                None
            };
            match radical {
                Some((arg, tail)) => {
                    let k: i64 = arg.trim().parse().map_err(|_| Error::Parse(format!("bad radicand {arg:?}")))?;
                    if k != d {
                        return Err(Error::Parse(format!("sqrt({k}) is not in {}", self.describe())));
                    }
                    src.push(ROOT);
                    rest = tail;
                }
                None => {
                    let c = rest.chars().next().expect("nonempty");
                    src.push(c);
                    rest = &rest[c.len_utf8()..];
                }
            }
        }
        let number = |n: &BigInt| self.elem(n.clone(), 0, 1);
        let symbol = |c: char| match c {
            ROOT => Some(self.elem(0, 1, 1)),
            'i' if d == -1 => Some(self.elem(0, 1, 1)),
            'w' => Some(self.omega()),
            _ => None,
        };
        ExprParser::parse(self, &src, &number, &symbol)
    }

    fn real_places(&self) -> usize {
        if self.inner.d > 0 { 2 } else { 0 }
    }

    fn is_positive_at(&self, i: usize, x: &QuadElem) -> bool {
        let b = if i == 0 { x.b.clone() } else { -&x.b };
        real_sign(&x.a, &b, x.d) == Ordering::Greater
    }

    fn supports_narrow(&self) -> bool {
        true
    }
}

impl NumberField for QuadraticField {
    fn places_over(&self, p: u64) -> Result<Vec<(QuadPrime, u32)>> {
        Ok(self.factor_rational_prime(p)?.into_iter().map(|(v, e, _)| (v, e)).collect())
    }

    fn residue_characteristic(&self, v: &QuadPrime) -> u64 {
        v.p
    }

    fn class_group(&self) -> &FinAbGroup {
        self.inner.classes.group()
    }

    fn place_class(&self, v: &QuadPrime) -> Result<GroupElem> {
        self.ideal_class(&v.ideal)
    }

    fn generator_of(&self, factors: &[(QuadPrime, u64)]) -> Result<Option<QuadElem>> {
        let ideal = factors.iter().fold(Ideal::unit(), |acc, (v, e)| self.ideal_mul(&acc, &self.ideal_pow(&v.ideal, *e)));
        Ok(self.principal_generator(&ideal).map(|g| self.from_integral(&g)))
    }

    fn unit_generators(&self) -> Vec<QuadElem> {
        let mut out = vec![self.root_of_unity()];
        out.extend(self.fundamental_unit());
        out
    }

    fn integral_basis(&self) -> Vec<QuadElem> {
        vec![self.one(), self.omega()]
    }

    fn sign_witness(&self, i: usize, m: &BigInt) -> QuadElem {
        assert!(i < self.real_places());
        // 1 ∓ 2m√d
        let b = BigInt::from(2) * m;
        self.elem(1, if i == 0 { -b } else { b }, 1)
    }
}

impl NumberField for super::RationalField {
    fn places_over(&self, p: u64) -> Result<Vec<(super::PrimePlace, u32)>> {
        Ok(vec![(super::PrimePlace::new(p)?, 1)])
    }

    fn residue_characteristic(&self, v: &super::PrimePlace) -> u64 {
        v.prime()
    }

    fn class_group(&self) -> &FinAbGroup {
        static TRIVIAL: std::sync::OnceLock<FinAbGroup> = std::sync::OnceLock::new();
        TRIVIAL.get_or_init(FinAbGroup::trivial)
    }

    fn place_class(&self, _v: &super::PrimePlace) -> Result<GroupElem> {
        Ok(Vec::new())
    }

    fn generator_of(&self, factors: &[(super::PrimePlace, u64)]) -> Result<Option<num_rational::BigRational>> {
        let mut n = BigInt::one();
        for (v, e) in factors {
            n *= num_traits::pow(BigInt::from(v.prime()), e.to_usize().expect("small exponent"));
        }
        Ok(Some(num_rational::BigRational::from_integer(n)))
    }

    fn unit_generators(&self) -> Vec<num_rational::BigRational> {
        vec![num_rational::BigRational::from_integer(-BigInt::one())]
    }

    fn integral_basis(&self) -> Vec<num_rational::BigRational> {
        vec![num_rational::BigRational::one()]
    }

    fn sign_witness(&self, i: usize, m: &BigInt) -> num_rational::BigRational {
        assert_eq!(i, 0);
        num_rational::BigRational::from_integer(BigInt::one() - BigInt::from(2) * m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::weak_approx;

    fn gaussian() -> QuadraticField {
        QuadraticField::new(-1).unwrap()
    }

    #[test]
    fn splitting_in_gaussian_integers() {
        let k = gaussian();
        let f5 = k.factor_rational_prime(5).unwrap();
        assert_eq!(f5.len(), 2);
        assert!(f5.iter().all(|(_, e, f)| *e == 1 && *f == 1));
        let f3 = k.factor_rational_prime(3).unwrap();
        assert_eq!((f3.len(), f3[0].1, f3[0].2), (1, 1, 2));
        let f2 = k.factor_rational_prime(2).unwrap();
        assert_eq!((f2.len(), f2[0].1, f2[0].2), (1, 2, 1));
        assert_eq!(f2[0].0.to_string(), "(2, 1+i)");
        assert_eq!(f3[0].0.to_string(), "(3)");
    }

    #[test]
    fn places_of_gaussian_up_to_five() {
        let k = gaussian();
        let ps = k.enumerate_places(5).unwrap();
        let names: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, vec!["(2, 1+i)", "(5, 2+i)", "(5, 3+i)"]);
        assert_eq!(k.parse_place("(2+i)").unwrap(), ps[1]);
        assert_eq!(k.parse_place("(1+i)").unwrap(), ps[0]);
        assert_eq!(k.parse_place("(5, 3+i)").unwrap(), ps[2]);
        assert!(k.parse_place("(5)").is_err());
    }

    #[test]
    fn norms_multiply_to_p_squared() {
        for d in [-5, -1, -3, 2, 5, 3, 7, -23, 10, 13] {
            let k = QuadraticField::new(d).unwrap();
            for p in primes_up_to(60) {
                let fac = k.factor_rational_prime(p).unwrap();
                let prod: u64 = fac.iter().map(|(v, e, _)| v.norm().pow(*e)).product();
                assert_eq!(prod, p * p, "d={d} p={p}");
                for (v, e, _) in &fac {
                    assert_eq!(k.valuation(v, &k.from_i64(p as i64)).unwrap(), *e as i64);
                }
            }
        }
    }

    #[test]
    fn valuation_and_residue_of_gaussian_elements() {
        let k = gaussian();
        let x = k.parse_elem("(2+i)^3*(1+i)/3").unwrap();
        let v5 = k.parse_place("(2+i)").unwrap();
        let v5b = k.parse_place("(2-i)").unwrap();
        let v2 = k.parse_place("(1+i)").unwrap();
        let v3 = k.parse_place("(3)").unwrap();
        assert_eq!(k.valuation(&v5, &x).unwrap(), 3);
        assert_eq!(k.valuation(&v5b, &x).unwrap(), 0);
        assert_eq!(k.valuation(&v2, &x).unwrap(), 1);
        assert_eq!(k.valuation(&v3, &x).unwrap(), -1);
        let i = k.parse_elem("i").unwrap();
        let r = k.residue(&v3, &i).unwrap();
        let kv = k.residue_field(&v3);
        assert_eq!(kv.element_order(&r), 4u32.into());
        // sorted by norm: 2, 5, 9
        assert_eq!(k.support(&x).unwrap(), vec![v2, v5, v3]);
    }

    #[test]
    fn residues_are_multiplicative() {
        let k = QuadraticField::new(-5).unwrap();
        let xs = ["1+sqrt(-5)", "3/2", "7-2*sqrt(-5)", "(2+sqrt(-5))/11"].map(|s| k.parse_elem(s).unwrap());
        for p in [3u64, 7, 11, 13, 29] {
            for (v, _, _) in k.factor_rational_prime(p).unwrap() {
                let kv = k.residue_field(&v);
                for x in &xs {
                    for y in &xs {
                        let (Ok(rx), Ok(ry)) = (k.residue(&v, x), k.residue(&v, y)) else { continue };
                        assert_eq!(k.residue(&v, &k.mul(x, y)).unwrap(), kv.mul(&rx, &ry));
                    }
                }
            }
        }
    }

    #[test]
    fn class_groups_and_units() {
        assert!(NumberField::class_group(&gaussian()).is_trivial());
        let k = QuadraticField::new(-5).unwrap();
        assert_eq!(NumberField::class_group(&k).invariant_factors(), &[BigInt::from(2)]);
        let k2 = QuadraticField::new(2).unwrap();
        assert!(NumberField::class_group(&k2).is_trivial());
        assert_eq!(k2.fundamental_unit().unwrap().to_string(), "1+sqrt(2)");
        assert_eq!(QuadraticField::new(5).unwrap().fundamental_unit().unwrap().to_string(), "(1+sqrt(5))/2");
        assert_eq!(QuadraticField::new(3).unwrap().fundamental_unit().unwrap().to_string(), "2+sqrt(3)");
    }

    #[test]
    fn principal_generators() {
        let k = QuadraticField::new(-5).unwrap();
        let v3 = k.factor_rational_prime(3).unwrap();
        assert!(k.principal_generator(v3[0].0.ideal()).is_none());
        let sq = k.ideal_pow(v3[0].0.ideal(), 2);
        let g = k.principal_generator(&sq).unwrap();
        assert_eq!(k.int_norm(&g), BigInt::from(9));
        let prod = k.ideal_mul(v3[0].0.ideal(), v3[1].0.ideal());
        assert_eq!(prod, k.principal_ideal(&Integral::new(3, 0)).unwrap());
        let k10 = QuadraticField::new(10).unwrap();
        let v3 = k10.factor_rational_prime(3).unwrap();
        assert!(k10.principal_generator(v3[0].0.ideal()).is_none());
        let g = k10.principal_generator(&k10.ideal_pow(v3[0].0.ideal(), 2)).unwrap();
        assert_eq!(k10.int_norm(&g).abs(), BigInt::from(9));
    }

    #[test]
    fn weak_approximation_in_quadratic_fields() {
        let k = QuadraticField::new(-5).unwrap();
        let mut targets = Vec::new();
        for p in [2u64, 3, 7, 11] {
            for (v, _, _) in k.factor_rational_prime(p).unwrap() {
                let kv = k.residue_field(&v);
                let r = kv.primitive_element();
                targets.push((v, r));
            }
        }
        let f = weak_approx(&k, &targets).unwrap();
        for (v, r) in &targets {
            assert_eq!(&k.residue(v, &f).unwrap(), r);
        }
    }

    #[test]
    fn real_signs() {
        let k = QuadraticField::new(2).unwrap();
        let x = k.parse_elem("1-sqrt(2)").unwrap();
        assert!(!k.is_positive_at(0, &x));
        assert!(k.is_positive_at(1, &x));
        let e = k.fundamental_unit().unwrap();
        assert!(k.is_positive_at(0, &e) && !k.is_positive_at(1, &e));
    }
}
