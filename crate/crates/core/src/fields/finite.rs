//! The finite field F_q: plain modular arithmetic for prime q, log/exp
//! tables over a fixed defining polynomial when q = p^k with k >= 2.

use std::fmt;

use super::arith::{inv_mod, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Largest extension field order supported.
pub const MAX_EXTENSION_ORDER: u64 = 81;

/// Conway polynomials for every p^k <= 81 with k >= 2, coefficients low degree first.
const CONWAY: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

#[derive(Clone, Debug)]
struct Tables {
    exp: Vec<u64>,
    log: Vec<u32>,
}

/// Elements are `u64` codes: the residue itself when q is prime, otherwise
/// the base-p digits of the coefficient vector over the defining polynomial.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    degree: u32,
    order: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for FiniteField {}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, k))
}

impl FiniteField {
    /// The prime field F_p (any 64-bit prime).
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(FiniteField { p, degree: 1, order: p, modulus: vec![0, 1], tables: None })
    }

    /// F_q for a prime power q; non-prime q must be at most 81.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        if k == 1 {
            return Self::prime(p);
        }
        if q > MAX_EXTENSION_ORDER {
            return Err(Error::OutOfSupportedRange(format!("F_{q}: extension fields limited to q <= 81")));
        }
        let modulus = CONWAY
            .iter()
            .find(|(pp, kk, _)| *pp == p && *kk == k)
            .map(|(_, _, m)| m.to_vec())
            .expect("defining polynomial tabulated for every q <= 81");
        let mut field = FiniteField { p, degree: k, order: q, modulus, tables: None };
        field.tables = Some(field.build_tables());
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.order as usize;
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut x = 1u64;
        for i in 0..q - 1 {
            assert_eq!(log[x as usize], u32::MAX, "defining polynomial for F_{q} is not primitive");
            exp.push(x);
            log[x as usize] = i as u32;
            x = self.times_generator(x);
        }
        assert_eq!(x, 1, "generator order mismatch in F_{q}");
        Tables { exp, log }
    }

    fn digits(&self, mut x: u64) -> Vec<u64> {
        (0..self.degree)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn pack_digits(&self, ds: &[u64]) -> u64 {
        ds.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Multiplication by the class of X, by shifting and reducing with the defining polynomial.
    fn times_generator(&self, x: u64) -> u64 {
        let k = self.degree as usize;
        let mut ds = self.digits(x);
        let top = ds[k - 1];
        ds.rotate_right(1);
        ds[0] = 0;
        for (i, d) in ds.iter_mut().enumerate() {
            let sub = (top * self.modulus[i]) % self.p;
            *d = (*d + self.p - sub) % self.p;
        }
        self.pack_digits(&ds)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree == 1
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.degree == 1 {
            let s = a as u128 + b as u128;
            return (s % self.p as u128) as u64;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack_digits(&s)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.degree == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let s: Vec<u64> = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.pack_digits(&s)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            None => mul_mod(a, b, self.p),
            Some(t) => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let e = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % (self.order - 1);
                t.exp[e as usize]
            }
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            None => inv_mod(a, self.p),
            Some(t) => {
                let l = t.log[a as usize] as u64;
                Some(t.exp[((self.order - 1 - l) % (self.order - 1)) as usize])
            }
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        match &self.tables {
            None => pow_mod(a, e, self.p),
            Some(t) => {
                if a == 0 {
                    return u64::from(e == 0);
                }
                let l = t.log[a as usize] as u128 * e as u128 % (self.order - 1) as u128;
                t.exp[l as usize]
            }
        }
    }

    /// The p-th root (inverse Frobenius), `a^(q/p)`.
    pub fn pth_root(&self, a: u64) -> u64 {
        self.pow(a, self.order / self.p)
    }

    /// Iterator over all nonzero elements.
    pub fn units(&self) -> impl Iterator<Item = u64> {
        1..self.order
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u64) -> u64 {
        assert_ne!(a, 0);
        let n = self.order - 1;
        let mut ord = n;
        for (p, _) in super::arith::factor_u64(n) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == 1 {
                ord /= p;
            }
        }
        ord
    }

    /// Quadratic character on F_q^x, as +1 or -1 (q odd).
    pub fn quadratic_character(&self, a: u64) -> i32 {
        assert!(a != 0 && self.p != 2);
        if self.pow(a, (self.order - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn element_to_string(&self, a: u64) -> String {
        if self.degree == 1 {
            return a.to_string();
        }
        let ds = self.digits(a);
        let mut terms = Vec::new();
        for (i, &d) in ds.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let coeff = if d == 1 && i > 0 { String::new() } else { d.to_string() };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}z"),
                _ => format!("{coeff}z^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// The class z of X in F_p[X]/(m(X)); `None` for prime fields.
    pub fn generator(&self) -> Option<u64> {
        (self.degree > 1).then_some(self.p)
    }

    /// The element `sum c_i z^i`; only the constant term is allowed in a prime field.
    pub fn from_z_poly(&self, coeffs: &[i64]) -> Option<u64> {
        let z = match self.generator() {
            Some(z) => z,
            None if coeffs.iter().skip(1).all(|&c| c == 0) => {
                return Some(self.from_i64(coeffs.first().copied().unwrap_or(0)))
            }
            None => return None,
        };
        let mut acc = 0;
        let mut zpow = 1;
        for &c in coeffs {
            acc = self.add(acc, self.mul(self.from_i64(c), zpow));
            zpow = self.mul(zpow, z);
        }
        Some(acc)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_supported_order_builds() {
        for q in 2..=81u64 {
            if let Some((p, k)) = prime_power(q) {
                let f = FiniteField::new(q).unwrap();
                assert_eq!((f.characteristic(), f.degree(), f.order()), (p, k, q));
                for a in f.units() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "inverse in F_{q}");
                    assert_eq!(f.add(a, f.neg(a)), 0);
                }
            }
        }
        assert!(FiniteField::new(6).is_err());
        assert!(FiniteField::new(128).is_err());
        assert!(FiniteField::new(83).is_ok());
    }

    #[test]
    fn field_axioms_f9() {
        let f = FiniteField::new(9).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
        }
        let z = f.from_z_poly(&[0, 1]).unwrap();
        assert_eq!(f.element_order(z), 8);
        assert_eq!(f.element_to_string(z), "z");
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        for q in [4u64, 8, 9, 25, 27, 49, 64, 81] {
            let f = FiniteField::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.pow(f.pth_root(a), f.characteristic()), a);
            }
        }
    }
}
