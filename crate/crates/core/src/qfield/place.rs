//! Finite places of `ℚ` and of quadratic fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::element::FieldElement;
use super::fq::{Fe, Fq};
use crate::arith::{bigmod_u64, hensel_sqrt, int_val, is_prime_u64, kronecker, rat_int, rat_mod, sqrt_mod_prime};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Rational,
    Split,
    Inert,
    Ramified,
}

/// A prime ideal; for split `ℓ` the two places are told apart by the
/// lattice parameter `b` of `[ℓ, (b+√D)/2]` (the smaller `b` has index 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub l: u64,
    pub idx: u8,
    pub kind: Splitting,
    pub m: i64,
    /// `b` of the two-element lattice `[N𝔭, (b+√D)/2]` (split and ramified).
    pub lat_b: i64,
    /// `√m` modulo `ℓ` (modulo 4 when `ℓ = 2`), split places only.
    root: i64,
}

fn disc_of(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

impl Place {
    pub fn above(m: i64, l: u64) -> Result<Vec<Place>> {
        if !is_prime_u64(l) {
            return Err(Error::NotPrime(l.to_string()));
        }
        let base = Place { l, idx: 0, kind: Splitting::Rational, m, lat_b: 0, root: 0 };
        if m == 1 {
            return Ok(vec![base]);
        }
        let d = disc_of(m);
        let li = l as i64;
        match kronecker(&BigInt::from(d), l) {
            0 => {
                let lat_b = if l == 2 {
                    if m.rem_euclid(4) == 2 {
                        0
                    } else {
                        2
                    }
                } else if d % 2 == 0 {
                    0
                } else {
                    li
                };
                Ok(vec![Place { kind: Splitting::Ramified, lat_b, ..base }])
            }
            -1 => Ok(vec![Place { kind: Splitting::Inert, ..base }]),
            _ => {
                let mut out = Vec::new();
                if l == 2 {
                    for (b, s) in [(1, 3), (3, 1)] {
                        out.push(Place { kind: Splitting::Split, lat_b: b, root: s, ..base.clone() });
                    }
                } else {
                    let t = sqrt_mod_prime(bigmod_u64(&BigInt::from(d), l), l).unwrap() as i64;
                    let mut bs: Vec<i64> = [t, li - t]
                        .iter()
                        .map(|&t| {
                            // b ≡ −t mod ℓ, b ≡ D mod 2
                            let b = (li - t) % li;
                            if (b - d).rem_euclid(2) == 0 {
                                b
                            } else {
                                b + li
                            }
                        })
                        .collect();
                    bs.sort();
                    for b in bs {
                        let s = if d == m {
                            (-b).rem_euclid(li)
                        } else {
                            let inv2 = (li + 1) / 2;
                            ((-b).rem_euclid(li) * inv2) % li
                        };
                        out.push(Place { kind: Splitting::Split, lat_b: b, root: s, ..base.clone() });
                    }
                }
                for (i, p) in out.iter_mut().enumerate() {
                    p.idx = i as u8;
                }
                Ok(out)
            }
        }
    }

    /// Residue degree.
    pub fn f(&self) -> u32 {
        if self.kind == Splitting::Inert {
            2
        } else {
            1
        }
    }

    /// Ramification index over `ℚ`.
    pub fn e(&self) -> i64 {
        if self.kind == Splitting::Ramified {
            2
        } else {
            1
        }
    }

    pub fn norm(&self) -> u64 {
        self.l.pow(self.f())
    }

    pub fn residue_field(&self) -> Fq {
        if self.kind == Splitting::Inert {
            Fq::quadratic(self.l, if self.l == 2 { 0 } else { bigmod_u64(&BigInt::from(self.m), self.l) })
        } else {
            Fq::prime(self.l)
        }
    }

    /// The conjugate place (itself unless split).
    pub fn conjugate(&self) -> Place {
        if self.kind != Splitting::Split {
            return self.clone();
        }
        Place::above(self.m, self.l).unwrap().into_iter().find(|p| p.idx != self.idx).unwrap()
    }

    /// A global element of valuation one at this place.
    pub fn uniformizer(&self) -> FieldElement {
        match self.kind {
            Splitting::Ramified => {
                if self.l == 2 && self.m.rem_euclid(4) == 3 {
                    &FieldElement::one(self.m) + &FieldElement::sqrt_m(self.m)
                } else {
                    FieldElement::sqrt_m(self.m)
                }
            }
            _ => FieldElement::from_int(self.m, self.l as i64),
        }
    }

    /// `√m` in `ℤ/ℓ^k` at a split place.
    fn root_mod(&self, k: u32) -> BigInt {
        hensel_sqrt(&BigInt::from(self.m), self.l, k, &BigInt::from(self.root))
    }

    fn scaled(x: &FieldElement) -> (BigInt, BigInt, BigInt) {
        let d = x.denominator();
        let dr = rat_int(&d);
        ((&x.a * &dr).to_integer(), (&x.b * &dr).to_integer(), d)
    }

    pub fn valuation(&self, x: &FieldElement) -> i64 {
        assert!(!x.is_zero(), "valuation of zero");
        match self.kind {
            Splitting::Rational => crate::arith::rat_val(&x.a, self.l),
            Splitting::Inert => crate::arith::rat_val(&x.norm(), self.l) / 2,
            Splitting::Ramified => crate::arith::rat_val(&x.norm(), self.l),
            Splitting::Split => {
                let (a, b, d) = Self::scaled(x);
                let dv = int_val(&d, self.l);
                if b.is_zero() {
                    return int_val(&a, self.l) - dv;
                }
                let n = &a * &a - BigInt::from(self.m) * &b * &b;
                let k = int_val(&n, self.l) as u32 + 1;
                let s = self.root_mod(k);
                let lk = BigInt::from(self.l).pow(k);
                let y = (a + b * s).mod_floor(&lk);
                int_val(&y, self.l) - dv
            }
        }
    }

    /// Image in `ℤ/ℓ^k` of an element integral at a degree-one split or rational place.
    pub fn image_mod(&self, x: &FieldElement, k: u32) -> BigInt {
        let lk = BigInt::from(self.l).pow(k);
        match self.kind {
            Splitting::Rational => rat_mod(&x.a, &lk),
            Splitting::Split => {
                let (a, b, d) = Self::scaled(x);
                let e = int_val(&d, self.l) as u32;
                let prec = k + e;
                let lp = BigInt::from(self.l).pow(prec);
                let s = self.root_mod(prec);
                let y = (a + b * s).mod_floor(&lp);
                let le = BigInt::from(self.l).pow(e);
                assert!((&y % &le).is_zero(), "element not integral at place {self}");
                let y = y / le;
                let du = &d / BigInt::from(self.l).pow(e);
                rat_mod(&BigRational::new(y, du), &lk)
            }
            _ => panic!("image_mod needs a degree-one unramified place"),
        }
    }

    /// Reduction into the residue field; `x` must be integral here.
    pub fn residue(&self, x: &FieldElement) -> Fe {
        let l = self.l;
        let lb = BigInt::from(l);
        let red = |r: &BigRational| -> u64 { bigmod_u64(&rat_mod(r, &lb), l) };
        match self.kind {
            Splitting::Rational | Splitting::Split => Fe(bigmod_u64(&self.image_mod(x, 1), l), 0),
            Splitting::Inert => {
                if l == 2 {
                    let u = &x.a - &x.b;
                    let w = &x.b * BigRational::from_integer(BigInt::from(2));
                    Fe(red(&u), red(&w))
                } else {
                    Fe(red(&x.a), red(&x.b))
                }
            }
            Splitting::Ramified => {
                if l == 2 && self.m.rem_euclid(4) == 3 {
                    Fe(red(&(&x.a + &x.b)), 0)
                } else {
                    Fe(red(&x.a), 0)
                }
            }
        }
    }

    /// A small global representative of a residue class.
    pub fn lift(&self, c: Fe) -> FieldElement {
        let m = self.m;
        let u = FieldElement::from_int(m, c.0 as i64);
        if self.kind != Splitting::Inert {
            return u;
        }
        let gen = if self.l == 2 {
            let h = BigRational::new(BigInt::one(), BigInt::from(2));
            FieldElement::new(m, h.clone(), h)
        } else {
            FieldElement::sqrt_m(m)
        };
        &u + &gen.scale(&BigRational::from_integer(BigInt::from(c.1)))
    }

    /// A small global `y` with `v(x − y) ≥ n`, for `x` integral here.
    pub fn truncate(&self, x: &FieldElement, n: i64) -> FieldElement {
        let m = self.m;
        if n <= 0 {
            return FieldElement::zero(m);
        }
        let n = n as u32;
        match self.kind {
            Splitting::Rational | Splitting::Split => FieldElement::from_bigint(m, &self.image_mod(x, n)),
            Splitting::Inert | Splitting::Ramified => {
                let k = if self.kind == Splitting::Ramified { n.div_ceil(2) } else { n };
                let lk = BigInt::from(self.l).pow(k);
                if self.kind == Splitting::Inert && self.l == 2 {
                    let u = rat_mod(&(&x.a - &x.b), &lk);
                    let w = rat_mod(&(&x.b * BigRational::from_integer(BigInt::from(2))), &lk);
                    let h = BigRational::new(BigInt::one(), BigInt::from(2));
                    let om = FieldElement::new(m, h.clone(), h);
                    return &FieldElement::from_bigint(m, &u) + &om.scale(&rat_int(&w));
                }
                FieldElement::new(m, rat_int(&rat_mod(&x.a, &lk)), rat_int(&rat_mod(&x.b, &lk)))
            }
        }
    }

    /// Generators `(ℓ, π)` of the prime ideal, as strings.
    pub fn generators(&self) -> (String, String) {
        let d = disc_of(self.m);
        let second = match self.kind {
            Splitting::Rational | Splitting::Inert => return (self.l.to_string(), self.l.to_string()),
            _ if d == self.m => format!("({}+sqrt({}))/2", self.lat_b, self.m),
            _ if self.lat_b == 0 => format!("sqrt({})", self.m),
            _ => format!("{}+sqrt({})", self.lat_b / 2, self.m),
        };
        (self.l.to_string(), second)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Splitting::Rational | Splitting::Inert => write!(f, "({})", self.l),
            _ => {
                let (a, b) = self.generators();
                write!(f, "({a}, {b})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(m: i64, s: &str) -> FieldElement {
        FieldElement::parse(m, s).unwrap()
    }

    #[test]
    fn splitting_types() {
        let p = Place::above(-79, 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].to_string(), "(2, (1+sqrt(-79))/2)");
        let r = Place::above(-79, 79).unwrap();
        assert_eq!(r[0].kind, Splitting::Ramified);
        assert_eq!(Place::above(-47, 11).unwrap()[0].kind, Splitting::Inert);
        assert!(Place::above(-47, 15).is_err());
    }

    #[test]
    fn valuations_at_split_two() {
        let p = Place::above(-79, 2).unwrap();
        let g = el(-79, "1/2+1/2*sqrt(-79)");
        // (1+√−79)/2 ∈ 𝔭 with norm 20 = 2²·5
        assert_eq!(p[0].valuation(&g) + p[1].valuation(&g), 2);
        assert!(p[0].valuation(&g) >= 1);
        assert_eq!(p[0].valuation(&FieldElement::from_int(-79, 2)), 1);
        let r = &Place::above(-79, 79).unwrap()[0];
        assert_eq!(r.valuation(&FieldElement::sqrt_m(-79)), 1);
    }

    #[test]
    fn residue_and_truncate() {
        for (m, l) in [(-47i64, 11u64), (-47, 2), (2, 7), (2, 2), (-79, 79), (3, 2), (-79, 2)] {
            for place in Place::above(m, l).unwrap() {
                let x = el(m, "3/5+7/5*sqrt(_)".replace('_', &m.to_string()).as_str());
                let x = if l == 5 { x.inv() } else { x };
                let t = place.truncate(&x, 4);
                let diff = &x - &t;
                assert!(diff.is_zero() || place.valuation(&diff) >= 4, "{place}");
                let k = place.residue_field();
                assert_eq!(place.residue(&place.lift(place.residue(&x))), place.residue(&x));
                let y = el(m, "2-sqrt(_)".replace('_', &m.to_string()).as_str());
                let prod = place.residue(&(&x * &y));
                assert_eq!(prod, k.mul(place.residue(&x), place.residue(&y)), "{place}");
            }
        }
    }
}
