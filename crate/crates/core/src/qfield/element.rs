use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{rat_int, rat_root};
use crate::error::{Error, Result};

/// An element `a + b·√m` of `ℚ(√m)`; over `ℚ` (`m = 1`) `b` is always zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    pub(crate) m: i64,
    pub a: BigRational,
    pub b: BigRational,
}

impl FieldElement {
    pub fn new(m: i64, a: BigRational, b: BigRational) -> Self {
        if m == 1 {
            assert!(b.is_zero(), "rational field element with irrational part");
        }
        FieldElement { m, a, b }
    }

    pub fn from_rational(m: i64, a: BigRational) -> Self {
        FieldElement { m, a, b: BigRational::zero() }
    }

    pub fn from_int(m: i64, n: i64) -> Self {
        Self::from_rational(m, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(m: i64, n: &BigInt) -> Self {
        Self::from_rational(m, rat_int(n))
    }

    pub fn zero(m: i64) -> Self {
        Self::from_int(m, 0)
    }

    pub fn one(m: i64) -> Self {
        Self::from_int(m, 1)
    }

    /// `√m` itself.
    pub fn sqrt_m(m: i64) -> Self {
        assert!(m != 1);
        FieldElement { m, a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn field_m(&self) -> i64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        FieldElement { m: self.m, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.m))
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        FieldElement { m: self.m, a: &self.a / &n, b: -&self.b / &n }
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FieldElement { m: self.m, a: &self.a * c, b: &self.b * c }
    }

    /// Exact square root in the field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let m = BigRational::from_integer(BigInt::from(self.m));
        if self.b.is_zero() {
            if let Some(r) = rat_root(&self.a, 2) {
                return Some(Self::from_rational(self.m, r));
            }
            if self.m == 1 {
                return None;
            }
            // a = m·d² gives (d·√m)²
            let d2 = &self.a / &m;
            let d = rat_root(&d2, 2)?;
            return Some(FieldElement { m: self.m, a: BigRational::zero(), b: d });
        }
        // (c + d√m)² = a + b√m ⇒ c² = (a ± √N)/2 with N = a² − m b²
        let n = rat_root(&self.norm(), 2)?;
        let two = BigRational::from_integer(BigInt::from(2));
        for c2 in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if c2.is_zero() {
                continue;
            }
            if let Some(c) = rat_root(&c2, 2) {
                let d = &self.b / (&two * &c);
                let cand = FieldElement { m: self.m, a: c, b: d };
                if &(&cand * &cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// Least common denominator of both coordinates.
    pub fn denominator(&self) -> BigInt {
        num_integer::Integer::lcm(self.a.denom(), self.b.denom())
    }

    /// Parses `a`, `a+b*sqrt(m)`, `b*sqrt(m)`, `sqrt(m)`, with rationals `p/q`.
    pub fn parse(m: i64, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("cannot parse field element '{s}'"));
        if s.is_empty() {
            return Err(bad());
        }
        // split into signed terms
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut depth = 0;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > 0 && !cur.ends_with('*') && !cur.ends_with('/') => {
                    terms.push(std::mem::take(&mut cur));
                }
                _ => {}
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut out = Self::zero(m);
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, t.trim_start_matches('+').to_string()),
            };
            let term = if let Some(idx) = body.find("sqrt(") {
                let inner = body[idx + 5..].trim_end_matches(')');
                let root: i64 = inner.parse().map_err(|_| bad())?;
                if root != m {
                    return Err(Error::Parse(format!("sqrt({root}) does not match field sqrt({m})")));
                }
                let coeff = body[..idx].trim_end_matches('*');
                let c = if coeff.is_empty() { BigRational::one() } else { parse_rational(coeff).ok_or_else(bad)? };
                if m == 1 {
                    Self::from_rational(m, c)
                } else {
                    FieldElement { m, a: BigRational::zero(), b: c }
                }
            } else {
                Self::from_rational(m, parse_rational(&body).ok_or_else(bad)?)
            };
            out = if neg { &out - &term } else { &out + &term };
        }
        Ok(out)
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let bpart = if self.b.is_one() {
            format!("sqrt({})", self.m)
        } else if (-&self.b).is_one() {
            format!("-sqrt({})", self.m)
        } else {
            format!("{}*sqrt({})", self.b, self.m)
        };
        if self.a.is_zero() {
            write!(f, "{bpart}")
        } else if self.b.is_positive() {
            write!(f, "{}+{}", self.a, bpart)
        } else {
            write!(f, "{}{}", self.a, bpart)
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                debug_assert_eq!(self.m, rhs.m, "mixing elements of different fields");
                let f: fn(&FieldElement, &FieldElement) -> FieldElement = $body;
                f(self, rhs)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |x, y| FieldElement { m: x.m, a: &x.a + &y.a, b: &x.b + &y.b });
binop!(Sub, sub, |x, y| FieldElement { m: x.m, a: &x.a - &y.a, b: &x.b - &y.b });
binop!(Mul, mul, |x, y| {
    if x.a.is_integer() && x.b.is_integer() && y.a.is_integer() && y.b.is_integer() {
        // integral fast path, no gcd normalization
        let (xa, xb, ya, yb) = (x.a.numer(), x.b.numer(), y.a.numer(), y.b.numer());
        let a = xa * ya + xb * yb * BigInt::from(x.m);
        let b = if x.m == 1 { BigInt::zero() } else { xa * yb + xb * ya };
        return FieldElement { m: x.m, a: BigRational::from_integer(a), b: BigRational::from_integer(b) };
    }
    let m = BigRational::from_integer(BigInt::from(x.m));
    if x.m == 1 {
        return FieldElement { m: 1, a: &x.a * &y.a, b: BigRational::zero() };
    }
    FieldElement { m: x.m, a: &x.a * &y.a + &x.b * &y.b * m, b: &x.a * &y.b + &x.b * &y.a }
});
binop!(Div, div, |x, y| x * &y.inv());

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { m: self.m, a: -&self.a, b: -&self.b }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn arithmetic_and_norm() {
        let x = FieldElement::parse(-79, "-55/9+16/27*sqrt(-79)").unwrap();
        assert_eq!(x.a, rat(-55, 9));
        assert_eq!(x.b, rat(16, 27));
        let y = &x * &x.inv();
        assert!(y.is_one());
        assert_eq!((&x * &x.conj()).a, x.norm());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["3", "-1/2+7/4*sqrt(2)", "sqrt(2)", "-sqrt(2)", "1-2*sqrt(2)"] {
            let x = FieldElement::parse(2, s).unwrap();
            assert_eq!(FieldElement::parse(2, &x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn square_roots() {
        let x = FieldElement::parse(2, "3+2*sqrt(2)").unwrap();
        let r = x.sqrt().unwrap();
        assert_eq!(&r * &r, x);
        assert!(FieldElement::from_int(2, 3).sqrt().is_none());
        assert_eq!(FieldElement::from_int(2, 8).sqrt().unwrap(), FieldElement::parse(2, "2*sqrt(2)").unwrap());
    }
}
