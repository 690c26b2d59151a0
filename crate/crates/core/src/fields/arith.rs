//! Machine- and big-integer number theory helpers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) == 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Reduces a big integer into `[0, m)`.
pub fn big_mod(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn push_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    push_factors(d, out);
    push_factors(n / d, out);
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    push_factors(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Factorization of a nonzero big integer (sign ignored). Prime factors must fit in 64 bits.
pub fn factor_big(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut m: BigUint = n.magnitude().clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while m.bits() > 63 {
        if p > 1_000_000 {
            return Err(Error::OutOfSupportedRange(format!("cannot factor {n}: cofactor exceeds 64 bits")));
        }
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let rest = m.to_u64().expect("cofactor fits");
    if rest > 1 {
        for (q, e) in factor_u64(rest) {
            match out.iter_mut().find(|(r, _)| *r == q) {
                Some((_, f)) => *f += e,
                None => out.push((q, e)),
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// p-adic valuation of a nonzero big integer.
pub fn valuation_big(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    factor_u64(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n).iter().fold(1, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert!(m >= 1);
    if m == 1 {
        return 1;
    }
    assert_eq!(a.gcd(&m), 1, "{a} is not a unit mod {m}");
    let mut ord = euler_phi(m);
    for (p, _) in factor_u64(ord) {
        while ord.is_multiple_of(p) && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Legendre symbol `(a/p)` for an odd prime `p`, as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d/n)` for `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut result = 1;
    let mut n = n;
    while n.is_multiple_of(2) {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        // (d/2) = 1 for d = ±1 mod 8, -1 for d = ±3 mod 8
        if matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    for (p, e) in factor_u64(n) {
        let l = legendre(d.rem_euclid(p as i64) as u64, p);
        if e % 2 == 1 {
            result *= l;
        } else if l == 0 {
            return 0;
        }
    }
    result
}

/// A square root of `a` modulo the odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = factor_u64(p - 1);
    (2..p).find(|&g| fs.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1)).expect("prime has a primitive root")
}

pub fn to_u64_prime(n: &BigInt) -> Result<u64> {
    match (n.sign(), n.to_u64()) {
        (Sign::Plus, Some(p)) if is_prime(p) => Ok(p),
        _ => Err(Error::Invalid(format!("{n} is not a prime"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_and_factoring() {
        assert!(is_prime(2) && is_prime(97) && is_prime(1_000_000_007));
        assert!(!is_prime(1) && !is_prime(91) && !is_prime(3_215_031_751));
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1_000_000_007 * 998_244_353), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        let n = BigInt::from(2u64).pow(70) * 3;
        assert_eq!(factor_big(&n).unwrap(), vec![(2, 70), (3, 1)]);
    }

    #[test]
    fn symbols_and_roots() {
        assert_eq!(legendre(2, 3), -1);
        assert_eq!(legendre(3, 5), -1);
        assert_eq!(legendre(4, 7), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-20, 3), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in 1..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                }
            }
        }
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 7), 3);
        assert_eq!(multiplicative_order(3, 5), 4);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(primitive_root(7), 3);
        assert!(is_squarefree(30) && !is_squarefree(12) && is_squarefree(-5));
    }
}
