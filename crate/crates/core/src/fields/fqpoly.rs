//! Dense univariate polynomials over a [`FiniteField`], with exact division,
//! gcds and Cantor–Zassenhaus factorization.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::finite::FiniteField;

/// Coefficients low degree first; never carries trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: u64) -> Self {
        Poly::new(vec![c])
    }

    /// The variable `t`.
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn monomial(c: u64, n: usize) -> Self {
        let mut v = vec![0; n + 1];
        v[n] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, f: &FiniteField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, f: &FiniteField) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, f: &FiniteField, other: &Poly) -> Poly {
        self.add(f, &other.neg(f))
    }

    pub fn scale(&self, f: &FiniteField, c: u64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &FiniteField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, f: &FiniteField, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    pub fn div_rem(&self, f: &FiniteField, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dn = divisor.deg();
        let inv_lead = f.inv(divisor.lead()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dn];
        for i in (dn..rem.len()).rev() {
            let c = f.mul(rem[i], inv_lead);
            if c == 0 {
                continue;
            }
            quot[i - dn] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - dn + j] = f.sub(rem[i - dn + j], f.mul(c, d));
            }
        }
        rem.truncate(dn);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, f: &FiniteField, divisor: &Poly) -> Poly {
        self.div_rem(f, divisor).1
    }

    /// Exact quotient; panics when the division leaves a remainder.
    pub fn div_exact(&self, f: &FiniteField, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(f, divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, f: &FiniteField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.lead()).expect("nonzero lead"))
    }

    pub fn gcd(&self, f: &FiniteField, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, f: &FiniteField, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(f, &q.mul(f, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(f, &q.mul(f, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(r0.lead()).expect("nonzero lead");
        (r0.scale(f, c), s0.scale(f, c), t0.scale(f, c))
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inv_mod(&self, f: &FiniteField, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(f, m).ext_gcd(f, m);
        g.is_one().then(|| s.rem(f, m))
    }

    pub fn mul_mod(&self, f: &FiniteField, other: &Poly, m: &Poly) -> Poly {
        self.mul(f, other).rem(f, m)
    }

    pub fn pow_mod(&self, f: &FiniteField, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one().rem(f, m);
        let base = self.rem(f, m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(f, &acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(f, &base, m);
            }
        }
        acc
    }

    pub fn eval(&self, f: &FiniteField, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self, f: &FiniteField) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_i64((i as u64 % f.characteristic()) as i64), c))
                .collect(),
        )
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, f: &FiniteField) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        let m = self.monic(f);
        let q = BigUint::from(f.order());
        let x = Poly::x();
        let mut h = x.clone();
        for i in 1..=n {
            h = h.pow_mod(f, &q, &m);
            if i <= n / 2 && !h.sub(f, &x).gcd(f, &m).is_one() {
                return false;
            }
        }
        h.sub(f, &x).rem(f, &m).is_zero()
    }

    fn pth_root_poly(&self, f: &FiniteField) -> Poly {
        let p = f.characteristic() as usize;
        Poly::new(self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect())
    }

    fn squarefree_decomposition(&self, f: &FiniteField) -> Vec<(Poly, u32)> {
        let p = f.characteristic() as u32;
        let mut out = Vec::new();
        let mut c = self.gcd(f, &self.derivative(f));
        let mut w = self.div_exact(f, &c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(f, &c);
            let fac = w.div_exact(f, &y);
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.div_exact(f, &w);
            i += 1;
        }
        if !c.is_one() {
            for (g, e) in c.pth_root_poly(f).squarefree_decomposition(f) {
                out.push((g, e * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(product of all irreducible factors of degree d, d)`.
    pub fn distinct_degree_factorization(&self, f: &FiniteField) -> Vec<(Poly, usize)> {
        let q = BigUint::from(f.order());
        let x = Poly::x();
        let mut rest = self.monic(f);
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().is_some_and(|n| n >= 2 * d) {
            h = h.pow_mod(f, &q, &rest);
            let g = h.sub(f, &x).gcd(f, &rest);
            if !g.is_one() {
                rest = rest.div_exact(f, &g);
                h = h.rem(f, &rest);
                out.push((g, d));
            }
            d += 1;
        }
        if rest.degree().is_some_and(|n| n > 0) {
            let n = rest.deg();
            out.push((rest, n));
        }
        out
    }

    fn equal_degree_split(&self, f: &FiniteField, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
        let n = self.deg();
        if n == d {
            out.push(self.clone());
            return;
        }
        let q = f.order();
        loop {
            let a = Poly::new((0..n).map(|_| rng.gen_range(0..q)).collect());
            if a.degree().is_none_or(|k| k == 0) {
                continue;
            }
            let b = if q % 2 == 1 {
                let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
                a.pow_mod(f, &e, self).sub(f, &Poly::one())
            } else {
                // absolute trace to F_2
                let k = f.degree() as usize * d;
                let mut acc = a.rem(f, self);
                let mut term = acc.clone();
                for _ in 1..k {
                    term = term.mul_mod(f, &term, self);
                    acc = acc.add(f, &term);
                }
                acc
            };
            let g = b.gcd(f, self);
            if g.degree().is_some_and(|k| k > 0 && k < n) {
                let h = self.div_exact(f, &g);
                g.equal_degree_split(f, d, rng, out);
                h.equal_degree_split(f, d, rng, out);
                return;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities, sorted.
    /// Returns the leading coefficient alongside.
    pub fn factor(&self, f: &FiniteField) -> (u64, Vec<(Poly, u32)>) {
        assert!(!self.is_zero(), "cannot factor zero");
        let lead = self.lead();
        let m = self.monic(f);
        let mut rng = ChaCha8Rng::seed_from_u64(0x7a3e_5c11);
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (sf, e) in m.squarefree_decomposition(f) {
            for (g, d) in sf.distinct_degree_factorization(f) {
                let mut parts = Vec::new();
                g.equal_degree_split(f, d, &mut rng, &mut parts);
                out.extend(parts.into_iter().map(|p| (p, e)));
            }
        }
        out.sort();
        (lead, out)
    }

    /// All monic polynomials of degree `n`.
    pub fn monics_of_degree(f: &FiniteField, n: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = f.order();
        let count = q.checked_pow(n as u32).expect("enumeration size fits in u64");
        (0..count).map(move |mut code| {
            let mut cs = Vec::with_capacity(n + 1);
            for _ in 0..n {
                cs.push(code % q);
                code /= q;
            }
            cs.push(1);
            Poly::new(cs)
        })
    }

    pub fn to_string_in(&self, f: &FiniteField, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = f.element_to_string(c);
            let cs = if cs.contains('+') && i > 0 { format!("({cs})") } else { cs };
            let coeff = if c == 1 && i > 0 { String::new() } else { cs };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}{var}"),
                _ => format!("{coeff}{var}^{i}"),
            });
        }
        terms.join("+")
    }
}

pub(crate) fn big_pow(q: u64, n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..n {
        acc *= q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(f: &FiniteField, roots: &[u64]) -> Poly {
        roots.iter().fold(Poly::one(), |acc, &r| acc.mul(f, &Poly::new(vec![f.neg(r), 1])))
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree n over F_q: (1/n) sum_{d|n} mu(d) q^(n/d)
        let cases: &[(u64, usize, usize)] = &[(2, 1, 2), (2, 2, 1), (2, 3, 2), (2, 4, 3), (3, 2, 3), (4, 2, 6), (9, 2, 36)];
        for &(q, n, expected) in cases {
            let f = FiniteField::new(q).unwrap();
            let count = Poly::monics_of_degree(&f, n).filter(|p| p.is_irreducible(&f)).count();
            assert_eq!(count, expected, "q={q} n={n}");
        }
    }

    #[test]
    fn factor_reconstructs() {
        for q in [2u64, 3, 4, 5, 8, 9, 27, 49, 81] {
            let f = FiniteField::new(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            for _ in 0..30 {
                let n = rng.gen_range(1..9);
                let p = Poly::new((0..=n).map(|_| rng.gen_range(0..q)).collect());
                if p.is_zero() {
                    continue;
                }
                let (lead, fs) = p.factor(&f);
                let mut prod = Poly::constant(lead);
                for (g, e) in &fs {
                    assert!(g.is_irreducible(&f) && g.is_monic());
                    prod = prod.mul(&f, &g.pow(&f, *e as u64));
                }
                assert_eq!(prod, p, "q={q}");
            }
        }
    }

    #[test]
    fn factor_handles_pth_powers() {
        let f = FiniteField::new(3).unwrap();
        // (t+1)^3 (t^2+1)^2
        let p = from_roots(&f, &[2, 2, 2]).mul(&f, &Poly::new(vec![1, 0, 1]).pow(&f, 2));
        let (_, fs) = p.factor(&f);
        assert_eq!(fs, vec![(Poly::new(vec![1, 1]), 3), (Poly::new(vec![1, 0, 1]), 2)]);
    }

    #[test]
    fn ext_gcd_identity() {
        let f = FiniteField::new(7).unwrap();
        let a = from_roots(&f, &[1, 2, 3]);
        let b = from_roots(&f, &[3, 4]);
        let (g, s, t) = a.ext_gcd(&f, &b);
        assert_eq!(g, Poly::new(vec![4, 1]));
        assert_eq!(s.mul(&f, &a).add(&f, &t.mul(&f, &b)), g);
    }

    #[test]
    fn display() {
        let f = FiniteField::new(3).unwrap();
        assert_eq!(Poly::new(vec![1, 1, 1]).to_string_in(&f, "t"), "t^2+t+1");
        assert_eq!(Poly::new(vec![0, 2]).to_string_in(&f, "t"), "2t");
    }
}
