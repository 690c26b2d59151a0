//! Independent classical recomputations used to cross-check the main
//! algorithms. Everything here is brute force and meant for small inputs.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fields::arith::{factor_u64, kronecker, primes_up_to};
use crate::fields::{Ideal, Integral, QuadElem, QuadraticField};
use crate::lattice::IntMatrix;

/// Invariant factors from a list of prime powers `(p, e)` (elementary divisors).
pub fn from_elementary_divisors(divisors: &[(u64, u32)]) -> Vec<BigInt> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for &(p, e) in divisors.iter().filter(|(_, e)| *e > 0) {
        by_prime.entry(p).or_default().push(e);
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![BigInt::one(); len];
    for (p, mut es) in by_prime {
        es.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in es.into_iter().enumerate() {
            // largest exponents go to the last invariant factor
            out[len - 1 - i] *= BigInt::from(p).pow(e);
        }
    }
    out
}

/// Invariant factors of a product of cyclic groups of the given orders.
pub fn invariants_of_cyclic_product(orders: &[u64]) -> Vec<BigInt> {
    let divisors: Vec<(u64, u32)> = orders.iter().flat_map(|&n| factor_u64(n)).collect();
    from_elementary_divisors(&divisors)
}

/// Invariant factors of an abelian group of the given order from the counts
/// `count(k) = #{x : k·x = 0}`.
pub fn invariants_from_torsion_counts(order: u64, count: impl Fn(u64) -> u64) -> Vec<BigInt> {
    let mut divisors = Vec::new();
    for (p, v) in factor_u64(order) {
        let log = |n: u64| -> u32 {
            let mut e = 0;
            let mut n = n;
            while n > 1 {
                debug_assert_eq!(n % p, 0);
                n /= p;
                e += 1;
            }
            e
        };
        // a_j = dim of the p^j-torsion; a_j − a_{j−1} factors have order ≥ p^j
        let mut prev = 0;
        let mut a = Vec::new();
        for j in 1..=v {
            let aj = log(count(p.pow(j)));
            a.push(aj);
            if aj == v {
                break;
            }
        }
        let mut at_least: Vec<u32> = a.iter().map(|&aj| {
            let d = aj - prev;
            prev = aj;
            d
        }).collect();
        at_least.push(0);
        for j in 0..at_least.len() - 1 {
            let exactly = at_least[j] - at_least[j + 1];
            for _ in 0..exactly {
                divisors.push((p, j as u32 + 1));
            }
        }
    }
    from_elementary_divisors(&divisors)
}

/// `(Z/m)^×` for squarefree `m`, by CRT into cyclic factors `Z/(ℓ−1)`.
pub fn units_mod_invariants(m: u64) -> Vec<BigInt> {
    let orders: Vec<u64> = factor_u64(m).into_iter().map(|(l, _)| l - 1).collect();
    invariants_of_cyclic_product(&orders)
}

/// `(Z/m)^×/{±1}` by enumerating residues.
pub fn units_mod_plus_minus_invariants(m: u64) -> Vec<BigInt> {
    if m <= 2 {
        return Vec::new();
    }
    let units: Vec<u64> = (1..m).filter(|a| a.gcd(&m) == 1).collect();
    let order = units.len() as u64 / 2;
    let pow = |a: u64, k: u64| (0..k).fold(1 % m, |acc, _| acc * a % m);
    invariants_from_torsion_counts(order, |k| {
        units.iter().filter(|&&a| {
            let x = pow(a, k);
            x == 1 || x == m - 1
        }).count() as u64
            / 2
    })
}

/// Structure of `Z^n / A Z^n` for a nonsingular square `A`, by enumerating the
/// image of `v ↦ adj(A) v mod |det A|`.
pub fn cokernel_by_enumeration(a: &IntMatrix) -> Result<Vec<BigInt>> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch("square matrix required".into()));
    }
    let det = a.determinant()?.abs();
    if det.is_zero() {
        return Err(Error::InfiniteCokernel { rank: n.saturating_sub(1), ambient: n });
    }
    let d = det.to_u64().filter(|&d| d <= 1_000_000).ok_or_else(|| Error::OutOfSupportedRange("determinant".into()))?;
    if d == 1 {
        return Ok(Vec::new());
    }
    let gens: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let c = cofactor(a, j, i)?;
                    Ok(c.mod_floor(&det).to_u64().expect("reduced"))
                })
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<_>>()?;
    let zero = vec![0u64; n];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % d).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let elems: Vec<Vec<u64>> = seen.into_iter().collect();
    let order = elems.len() as u64;
    Ok(invariants_from_torsion_counts(order, |k| {
        elems.iter().filter(|x| x.iter().all(|&c| (c * k) % d == 0)).count() as u64
    }))
}

/// `(-1)^{i+j} det(A without row i, column j)`.
fn cofactor(a: &IntMatrix, i: usize, j: usize) -> Result<BigInt> {
    let n = a.rows();
    if n == 1 {
        return Ok(BigInt::one());
    }
    let rows: Vec<Vec<BigInt>> = (0..n)
        .filter(|&r| r != i)
        .map(|r| (0..n).filter(|&c| c != j).map(|c| a[(r, c)].clone()).collect())
        .collect();
    let m = IntMatrix::from_rows(&rows)?;
    let det = m.determinant()?;
    Ok(if (i + j).is_multiple_of(2) { det } else { -det })
}

/// `ω` data `(t, n)` with `ω² = tω − n`, derived from `d` alone.
fn omega_data(d: i64) -> (i128, i128) {
    if d.rem_euclid(4) == 1 {
        (1, (1 - d as i128) / 4)
    } else {
        (0, -(d as i128))
    }
}

/// Fundamental unit `(T + U√d)/2` (or `T + U√d`) from the smallest `U > 0`
/// solving the Pell-type equation, found by direct search.
pub fn pell_fundamental_unit(d: i64) -> Option<(u128, u128, u128)> {
    if d <= 1 {
        return None;
    }
    let (k, denom) = if d.rem_euclid(4) == 1 { (4i128, 2u128) } else { (1, 1) };
    let d = d as i128;
    for u in 1i128..10_000_000 {
        for s in [-k, k] {
            let v = d * u * u + s;
            if v > 0 {
                let t = v.sqrt();
                if t * t == v {
                    return Some((t as u128, u as u128, denom));
                }
            }
        }
    }
    None
}

/// Checks the computed fundamental unit: norm ±1 and equal to the Pell minimum.
pub fn check_fundamental_unit(k: &QuadraticField) -> bool {
    let Some(eps) = k.fundamental_unit() else {
        return !k.is_real();
    };
    let (n, den) = eps.norm();
    if n.abs() != den {
        return false;
    }
    let Some((t, u, c)) = pell_fundamental_unit(k.d()) else { return false };
    let expect: QuadElem = k.elem(BigInt::from(t), BigInt::from(u), BigInt::from(c));
    eps == expect
}

/// Analytic class number via Dirichlet's formula.
pub fn analytic_class_number(k: &QuadraticField) -> u64 {
    let disc = k.discriminant();
    let dd = disc.unsigned_abs();
    let chi = |j: u64| kronecker(disc, j) as f64;
    let h = if disc < 0 {
        let w = k.torsion_order() as f64;
        -(w / (2.0 * dd as f64)) * (1..dd).map(|j| chi(j) * j as f64).sum::<f64>()
    } else {
        let eps = unit_value(k.d());
        let s: f64 = (1..dd).map(|j| chi(j) * (PI * j as f64 / dd as f64).sin().ln()).sum();
        -s / (2.0 * eps.ln())
    };
    h.round() as u64
}

fn unit_value(d: i64) -> f64 {
    let (t, u, c) = pell_fundamental_unit(d).expect("real field");
    (t as f64 + u as f64 * (d as f64).sqrt()) / c as f64
}

/// Class group of a quadratic field from ideals below the Minkowski bound,
/// with principality decided by bounded search for a generator.
pub struct IdealClassOracle<'a> {
    k: &'a QuadraticField,
    t: i128,
    disc: i128,
    unit: f64,
}

impl<'a> IdealClassOracle<'a> {
    pub fn new(k: &'a QuadraticField) -> Self {
        let (t, n) = omega_data(k.d());
        IdealClassOracle { k, t, disc: t * t - 4 * n, unit: if k.is_real() { unit_value(k.d()) } else { 1.0 } }
    }

    fn minkowski_bound(&self) -> f64 {
        let dd = (self.disc.abs()) as f64;
        if self.disc < 0 { 2.0 / PI * dd.sqrt() } else { 0.5 * dd.sqrt() }
    }

    /// Searches for `x + yω ∈ I` with `|N| = N(I)`, using `(2x+ty)² = 4N + D y²`.
    pub fn is_principal(&self, i: &Ideal) -> bool {
        let norm = i.norm().to_i128().expect("small ideal");
        let y_max = if self.disc < 0 {
            ((4 * norm / -self.disc) as f64).sqrt() as i128 + 1
        } else {
            // a balanced generator has |α|, |α'| ≤ sqrt(N ε)
            let b = (norm as f64 * self.unit).sqrt() + 1e-6;
            (2.0 * b / (self.disc as f64).sqrt()) as i128 + 1
        };
        let signs: &[i128] = if self.disc < 0 { &[1] } else { &[1, -1] };
        for y in -y_max..=y_max {
            for &s in signs {
                let v = 4 * s * norm + self.disc * y * y;
                if v < 0 {
                    continue;
                }
                let r = v.sqrt();
                if r * r != v {
                    continue;
                }
                for z in [r, -r] {
                    let twice = z - self.t * y;
                    if twice.rem_euclid(2) == 0 && self.k.ideal_contains(i, &Integral::new(twice / 2, y)) {
                        return true;
                    }
                }
            }
        }
        false
    }

    pub fn equivalent(&self, i: &Ideal, j: &Ideal) -> bool {
        self.is_principal(&self.k.ideal_mul(i, &self.k.ideal_conj(j)))
    }

    /// Invariant factors of the class group.
    pub fn class_group(&self) -> Result<Vec<BigInt>> {
        let mut gens = Vec::new();
        for p in primes_up_to(self.minkowski_bound().floor() as u64) {
            for (q, _, _) in self.k.factor_rational_prime(p)? {
                gens.push(q.ideal().clone());
            }
        }
        // reps[i] with table[i][g] = index of reps[i]·gens[g]
        let mut reps = vec![Ideal::unit()];
        let mut table: Vec<Vec<usize>> = Vec::new();
        let mut next = 0;
        while next < reps.len() {
            let mut row = Vec::with_capacity(gens.len());
            for g in &gens {
                let x = self.k.ideal_mul(&reps[next], g);
                let idx = match reps.iter().position(|r| self.equivalent(&x, r)) {
                    Some(j) => j,
                    None => {
                        reps.push(x);
                        reps.len() - 1
                    }
                };
                row.push(idx);
            }
            table.push(row);
            next += 1;
        }
        let h = reps.len();
        // a word in the generators for each representative
        let mut words: Vec<Option<Vec<usize>>> = vec![None; h];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (g, &j) in table[i].iter().enumerate() {
                if words[j].is_none() {
                    let mut w = words[i].clone().expect("visited");
                    w.push(g);
                    words[j] = Some(w);
                    queue.push_back(j);
                }
            }
        }
        let mul = |i: usize, j: usize| words[j].as_ref().expect("reachable").iter().fold(i, |acc, &g| table[acc][g]);
        let pow = |i: usize, k: u64| (0..k).fold(0usize, |acc, _| mul(acc, i));
        Ok(invariants_from_torsion_counts(h as u64, |k| (0..h).filter(|&i| pow(i, k) == 0).count() as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::NumberField;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unit_group_structures() {
        assert_eq!(units_mod_invariants(15), ints(&[2, 4]));
        assert_eq!(units_mod_invariants(7), ints(&[6]));
        assert_eq!(units_mod_invariants(1), ints(&[]));
        assert_eq!(units_mod_plus_minus_invariants(7), ints(&[3]));
        assert_eq!(units_mod_plus_minus_invariants(15), ints(&[4]));
        assert_eq!(units_mod_plus_minus_invariants(105), ints(&[2, 12]));
    }

    #[test]
    fn coset_enumeration() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(cokernel_by_enumeration(&a).unwrap(), ints(&[6]));
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![0, 2]]).unwrap();
        assert_eq!(cokernel_by_enumeration(&a).unwrap(), ints(&[4]));
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(cokernel_by_enumeration(&a).unwrap(), ints(&[2, 2]));
    }

    #[test]
    fn pell_units() {
        assert_eq!(pell_fundamental_unit(2), Some((1, 1, 1)));
        assert_eq!(pell_fundamental_unit(5), Some((1, 1, 2)));
        assert_eq!(pell_fundamental_unit(3), Some((2, 1, 1)));
        assert_eq!(pell_fundamental_unit(46), Some((24335, 3588, 1)));
    }

    #[test]
    fn class_numbers_three_ways() {
        for d in [-5, -14, -21, -23, -26, -47, 10, 15, 79] {
            let k = QuadraticField::new(d).unwrap();
            let forms = k.class_group().order();
            let ideals = IdealClassOracle::new(&k).class_group().unwrap();
            assert_eq!(ideals, k.class_group().invariant_factors(), "d={d}");
            assert_eq!(BigInt::from(analytic_class_number(&k)), forms, "d={d}");
        }
    }
}
