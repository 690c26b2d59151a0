use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::arith::big_mod;
use super::expr::ExprParser;
use super::{FiniteField, GlobalField, Poly, ResidueElem, ResidueField};
use crate::error::{Error, Result};

/// The rational function field F_q(t).
#[derive(Clone, Debug)]
pub struct FunctionField {
    base: Arc<FiniteField>,
}

/// Reduced fraction `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// A place of F_q(t): a monic irreducible polynomial, or the place at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunctionPlace {
    Finite(Poly),
    Infinity,
}

impl Ord for FunctionPlace {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FunctionPlace::Finite(a), FunctionPlace::Finite(b)) => a.cmp(b),
            (FunctionPlace::Finite(_), FunctionPlace::Infinity) => Ordering::Less,
            (FunctionPlace::Infinity, FunctionPlace::Finite(_)) => Ordering::Greater,
            (FunctionPlace::Infinity, FunctionPlace::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for FunctionPlace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficients print as their internal codes, which agree with the field
/// elements when q is prime. [`GlobalField::place_to_string`] uses the `z`
/// notation for extension fields.
impl fmt::Display for FunctionPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionPlace::Infinity => write!(f, "inf"),
            FunctionPlace::Finite(p) => write!(f, "({})", code_string(p)),
        }
    }
}

fn code_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        terms.push(match i {
            0 => coeff,
            1 => format!("{coeff}t"),
            _ => format!("{coeff}t^{i}"),
        });
    }
    terms.join("+")
}

impl FunctionField {
    pub fn new(q: u64) -> Result<Self> {
        Ok(FunctionField { base: Arc::new(FiniteField::new(q)?) })
    }

    pub fn constants(&self) -> &FiniteField {
        &self.base
    }

    pub fn q(&self) -> u64 {
        self.base.order()
    }

    pub fn elem(&self, num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::ZeroElement);
        }
        let f = &*self.base;
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one() });
        }
        let g = num.gcd(f, &den);
        let (num, den) = (num.div_exact(f, &g), den.div_exact(f, &g));
        let c = f.inv(den.lead()).expect("nonzero lead");
        Ok(RatFunc { num: num.scale(f, c), den: den.scale(f, c) })
    }

    pub fn poly(&self, p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(&self, c: u64) -> RatFunc {
        self.poly(Poly::constant(c))
    }

    pub fn t(&self) -> RatFunc {
        self.poly(Poly::x())
    }

    /// Degree of a place over F_q (1 for infinity).
    pub fn degree_of(&self, v: &FunctionPlace) -> usize {
        match v {
            FunctionPlace::Infinity => 1,
            FunctionPlace::Finite(p) => p.deg(),
        }
    }

    /// Monic irreducible polynomials of the given degree.
    pub fn irreducibles_of_degree(&self, n: usize) -> Vec<Poly> {
        Poly::monics_of_degree(&self.base, n).filter(|p| p.is_irreducible(&self.base)).collect()
    }

    fn ord_poly(&self, pi: &Poly, x: &Poly) -> i64 {
        let f = &*self.base;
        let mut n = 0;
        let mut y = x.clone();
        loop {
            let (q, r) = y.div_rem(f, pi);
            if !r.is_zero() {
                return n;
            }
            y = q;
            n += 1;
        }
    }
}

impl RatFunc {
    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", code_string(&self.num))
        } else {
            write!(f, "({})/({})", code_string(&self.num), code_string(&self.den))
        }
    }
}

impl GlobalField for FunctionField {
    type Elem = RatFunc;
    type Place = FunctionPlace;

    fn describe(&self) -> String {
        format!("F_{}(t)", self.q())
    }

    fn place_to_string(&self, v: &FunctionPlace) -> String {
        match v {
            FunctionPlace::Infinity => "inf".into(),
            FunctionPlace::Finite(p) => format!("({})", p.to_string_in(&self.base, "t")),
        }
    }

    fn elem_to_string(&self, x: &RatFunc) -> String {
        let n = x.num.to_string_in(&self.base, "t");
        if x.den.is_one() {
            n
        } else {
            format!("({n})/({})", x.den.to_string_in(&self.base, "t"))
        }
    }

    fn one(&self) -> RatFunc {
        self.constant(1)
    }

    fn from_i64(&self, n: i64) -> RatFunc {
        self.constant(self.base.from_i64(n))
    }

    fn is_zero(&self, x: &RatFunc) -> bool {
        x.num.is_zero()
    }

    fn add(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        let f = &*self.base;
        let num = x.num.mul(f, &y.den).add(f, &y.num.mul(f, &x.den));
        self.elem(num, x.den.mul(f, &y.den)).expect("nonzero denominator")
    }

    fn neg(&self, x: &RatFunc) -> RatFunc {
        RatFunc { num: x.num.neg(&self.base), den: x.den.clone() }
    }

    fn mul(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        let f = &*self.base;
        self.elem(x.num.mul(f, &y.num), x.den.mul(f, &y.den)).expect("nonzero denominator")
    }

    fn inv(&self, x: &RatFunc) -> Result<RatFunc> {
        if x.num.is_zero() {
            return Err(Error::ZeroElement);
        }
        self.elem(x.den.clone(), x.num.clone())
    }

    fn valuation(&self, v: &FunctionPlace, x: &RatFunc) -> Result<i64> {
        if x.num.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(match v {
            FunctionPlace::Infinity => x.den.deg() as i64 - x.num.deg() as i64,
            FunctionPlace::Finite(pi) => self.ord_poly(pi, &x.num) - self.ord_poly(pi, &x.den),
        })
    }

    fn residue_field(&self, v: &FunctionPlace) -> ResidueField {
        match v {
            FunctionPlace::Infinity => ResidueField::new(self.base.clone(), Poly::x()),
            FunctionPlace::Finite(pi) => ResidueField::new(self.base.clone(), pi.clone()),
        }
    }

    fn residue(&self, v: &FunctionPlace, x: &RatFunc) -> Result<ResidueElem> {
        if self.valuation(v, x)? != 0 {
            return Err(Error::NotAUnit(self.place_to_string(v)));
        }
        let f = &*self.base;
        match v {
            FunctionPlace::Infinity => {
                let c = f.mul(x.num.lead(), f.inv(x.den.lead()).expect("nonzero lead"));
                Ok(ResidueElem(Poly::constant(c)))
            }
            FunctionPlace::Finite(_) => {
                let k = self.residue_field(v);
                let n = k.from_poly(&x.num);
                let d = k.from_poly(&x.den);
                Ok(k.mul(&n, &k.inv(&d).expect("denominator is a unit")))
            }
        }
    }

    fn lift_residue(&self, _v: &FunctionPlace, r: &ResidueElem) -> RatFunc {
        self.poly(r.0.clone())
    }

    fn support(&self, x: &RatFunc) -> Result<Vec<FunctionPlace>> {
        if x.num.is_zero() {
            return Err(Error::ZeroElement);
        }
        let f = &*self.base;
        let mut out: Vec<FunctionPlace> = Vec::new();
        for p in [&x.num, &x.den] {
            if p.deg() > 0 {
                out.extend(p.factor(f).1.into_iter().map(|(g, _)| FunctionPlace::Finite(g)));
            }
        }
        if x.num.deg() != x.den.deg() {
            out.push(FunctionPlace::Infinity);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn approximate(&self, targets: &[(FunctionPlace, ResidueElem)]) -> Result<RatFunc> {
        let f = &*self.base;
        let finite: Vec<(&Poly, &ResidueElem)> = targets
            .iter()
            .filter_map(|(v, r)| match v {
                FunctionPlace::Finite(pi) => Some((pi, r)),
                FunctionPlace::Infinity => None,
            })
            .collect();
        let at_infinity = targets.iter().find(|(v, _)| *v == FunctionPlace::Infinity).map(|(_, r)| r.0.coeff(0));

        // CRT in F_q[t]: h ≡ r_i mod pi_i
        let mut h = Poly::zero();
        let mut m = Poly::one();
        for (pi, r) in &finite {
            let minv = m.inv_mod(f, pi).expect("distinct irreducibles are coprime");
            let k = r.0.sub(f, &h).mul_mod(f, &minv, pi);
            h = h.add(f, &m.mul(f, &k));
            m = m.mul(f, pi);
        }
        let Some(c) = at_infinity else {
            if finite.is_empty() {
                return Ok(self.one());
            }
            return Ok(self.poly(h));
        };
        // Value c at infinity: N/Q with deg N = deg Q = n, Q coprime to m,
        // N ≡ h*Q mod m and lead(N) = c * lead(Q).
        let n = m.deg() + 1;
        let q_den = Poly::monics_of_degree(f, n)
            .find(|cand| cand.gcd(f, &m).is_one())
            .expect("a monic polynomial coprime to the modulus exists");
        let n0 = h.mul(f, &q_den).rem(f, &m);
        let num = n0.add(f, &m.mul(f, &Poly::monomial(c, n - m.deg())));
        self.elem(num, q_den)
    }

    fn enumerate_places(&self, bound: u64) -> Result<Vec<FunctionPlace>> {
        let mut out = Vec::new();
        for n in 1..=bound as usize {
            if self.q().checked_pow(n as u32).is_none_or(|c| c > 50_000_000) {
                return Err(Error::OutOfSupportedRange(format!("degree bound {bound} too large for F_{}", self.q())));
            }
            out.extend(self.irreducibles_of_degree(n).into_iter().map(FunctionPlace::Finite));
        }
        out.push(FunctionPlace::Infinity);
        Ok(out)
    }

    fn parse_place(&self, s: &str) -> Result<FunctionPlace> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(FunctionPlace::Infinity);
        }
        let x = self.parse_elem(t)?;
        if !x.den.is_one() || !x.num.is_monic() || !x.num.is_irreducible(&self.base) {
            return Err(Error::Invalid(format!("{s:?} is not a monic irreducible polynomial")));
        }
        Ok(FunctionPlace::Finite(x.num))
    }

    fn parse_elem(&self, s: &str) -> Result<RatFunc> {
        let base = self.constants();
        let number = |n: &BigInt| self.constant(base.from_i64(big_mod(n, base.characteristic()) as i64));
        let symbol = |c: char| match c {
            't' => Some(self.t()),
            'z' => base.generator().map(|z| self.constant(z)),
            _ => None,
        };
        ExprParser::parse(self, s, &number, &symbol)
    }

    fn supports_narrow(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::weak_approx;

    #[test]
    fn valuations_at_finite_and_infinite_places() {
        let k = FunctionField::new(3).unwrap();
        let x = k.parse_elem("t^2/(t+1)").unwrap();
        let t = k.parse_place("t").unwrap();
        assert_eq!(k.valuation(&t, &x).unwrap(), 2);
        let y = k.parse_elem("t+1").unwrap();
        assert_eq!(k.valuation(&FunctionPlace::Infinity, &y).unwrap(), -1);
    }

    #[test]
    fn residue_at_t_plus_one() {
        let k = FunctionField::new(3).unwrap();
        let v = k.parse_place("t+1").unwrap();
        let r = k.residue(&v, &k.t()).unwrap();
        assert_eq!(r, ResidueElem(Poly::constant(2)));
        assert_eq!(k.residue(&v, &k.one()).unwrap(), ResidueElem(Poly::one()));
    }

    #[test]
    fn places_of_f2_up_to_degree_two() {
        let k = FunctionField::new(2).unwrap();
        let ps: Vec<String> = k.enumerate_places(2).unwrap().iter().map(|p| k.place_to_string(p)).collect();
        assert_eq!(ps, vec!["(t)", "(t+1)", "(t^2+t+1)", "inf"]);
    }

    #[test]
    fn crt_in_f3t() {
        let k = FunctionField::new(3).unwrap();
        let t0 = k.parse_place("t").unwrap();
        let t1 = k.parse_place("t+1").unwrap();
        let targets = vec![(t0.clone(), ResidueElem(Poly::constant(2))), (t1.clone(), ResidueElem(Poly::constant(1)))];
        let f = weak_approx(&k, &targets).unwrap();
        assert_eq!(k.residue(&t0, &f).unwrap(), targets[0].1);
        assert_eq!(k.residue(&t1, &f).unwrap(), targets[1].1);
        // t+2 is the lowest-degree solution
        assert_eq!(f, k.parse_elem("t+2").unwrap());
    }

    #[test]
    fn approximation_with_infinity() {
        let k = FunctionField::new(5).unwrap();
        let t0 = k.parse_place("t").unwrap();
        let targets = vec![(t0.clone(), ResidueElem(Poly::constant(3))), (FunctionPlace::Infinity, ResidueElem(Poly::constant(4)))];
        let f = weak_approx(&k, &targets).unwrap();
        assert_eq!(k.residue(&t0, &f).unwrap(), targets[0].1);
        assert_eq!(k.residue(&FunctionPlace::Infinity, &f).unwrap(), targets[1].1);
    }

    #[test]
    fn parser_handles_extension_constants() {
        let k = FunctionField::new(9).unwrap();
        let x = k.parse_elem("(z+1)t^2 + z t - 1").unwrap();
        assert_eq!(x.numer().deg(), 2);
        assert!(FunctionField::new(3).unwrap().parse_elem("z").is_err());
        assert!(k.parse_elem("1/0").is_err());
        assert!(k.parse_place("t^2").is_err());
    }
}
