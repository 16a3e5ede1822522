//! Fractional ideals: factored divisors and lattice ideals with tracked generators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::FieldElement;
use super::place::{Place, Splitting};
use super::QuadField;
use crate::arith::{factor, isqrt, rat_int};

/// A fractional ideal in factored form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FracIdeal {
    pub exps: BTreeMap<Place, i64>,
}

impl FracIdeal {
    pub fn one() -> Self {
        FracIdeal::default()
    }

    pub fn prime(p: &Place) -> Self {
        Self::prime_pow(p, 1)
    }

    pub fn prime_pow(p: &Place, e: i64) -> Self {
        let mut exps = BTreeMap::new();
        if e != 0 {
            exps.insert(p.clone(), e);
        }
        FracIdeal { exps }
    }

    /// The rational primes at which a nonzero element can have nonzero valuation.
    pub fn support_primes(field: &QuadField, x: &FieldElement) -> Vec<u64> {
        let d = field.integral_denominator(x);
        let y = x.scale(&rat_int(&d));
        let n = y.norm().to_integer();
        let mut ps: Vec<u64> = Vec::new();
        for k in [d, n] {
            if k.abs() > BigInt::one() {
                ps.extend(factor(&k).into_iter().map(|(p, _)| p.to_u64().expect("prime exceeds u64")));
            }
        }
        ps.sort();
        ps.dedup();
        ps
    }

    /// The principal ideal `(x)`.
    pub fn principal(field: &QuadField, x: &FieldElement) -> Self {
        let mut exps = BTreeMap::new();
        for l in Self::support_primes(field, x) {
            for p in field.places_above(l).unwrap() {
                let v = p.valuation(x);
                if v != 0 {
                    exps.insert(p, v);
                }
            }
        }
        FracIdeal { exps }
    }

    pub fn valuation(&self, p: &Place) -> i64 {
        *self.exps.get(p).unwrap_or(&0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (p, e) in &other.exps {
            let x = exps.entry(p.clone()).or_insert(0);
            *x += e;
            if *x == 0 {
                exps.remove(p);
            }
        }
        FracIdeal { exps }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        FracIdeal { exps: self.exps.iter().map(|(p, e)| (p.clone(), e * k)).collect() }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Absolute norm as a rational number.
    pub fn norm(&self) -> BigRational {
        let mut n = BigRational::one();
        for (p, e) in &self.exps {
            let q = BigRational::from_integer(BigInt::from(p.norm()));
            n *= if *e >= 0 { q.pow(*e as i32) } else { q.recip().pow((-e) as i32) };
        }
        n
    }

    /// Drop the primes in `s`.
    pub fn away_from(&self, s: &[Place]) -> Self {
        FracIdeal { exps: self.exps.iter().filter(|(p, _)| !s.contains(p)).map(|(p, e)| (p.clone(), *e)).collect() }
    }

    pub fn to_lattice(&self, field: &QuadField) -> Ideal {
        let mut acc = Ideal::unit(field);
        for (p, e) in &self.exps {
            let f = Ideal::from_place(field, p).pow(*e);
            acc = acc.mul(&f).reduced();
        }
        acc
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "(1)");
        }
        let parts: Vec<String> =
            self.exps.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// `γ · [a, (b+√D)/2]` with `a > 0` and `b² ≡ D mod 4a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub field: QuadField,
    pub a: BigInt,
    pub b: BigInt,
    pub gamma: FieldElement,
}

impl Ideal {
    fn delta(field: &QuadField) -> BigInt {
        BigInt::from(field.disc().rem_euclid(2))
    }

    pub fn unit(field: &QuadField) -> Ideal {
        Ideal { field: field.clone(), a: BigInt::one(), b: Self::delta(field), gamma: field.one() }
    }

    pub fn principal(field: &QuadField, x: &FieldElement) -> Ideal {
        Ideal { gamma: x.clone(), ..Self::unit(field) }
    }

    pub fn from_place(field: &QuadField, p: &Place) -> Ideal {
        match p.kind {
            Splitting::Rational | Splitting::Inert => Self::principal(field, &field.int(p.l as i64)),
            _ => Ideal { field: field.clone(), a: BigInt::from(p.l), b: BigInt::from(p.lat_b), gamma: field.one() },
        }
    }

    fn disc(&self) -> BigInt {
        BigInt::from(self.field.disc())
    }

    /// `(b + √D)/2` as a field element.
    fn beta(&self, b: &BigInt) -> FieldElement {
        let m = self.field.m();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let sq = if self.field.disc() == m { half.clone() } else { BigRational::one() };
        FieldElement::new(m, rat_int(b) * &half, sq)
    }

    fn c(&self) -> BigInt {
        (&self.b * &self.b - self.disc()) / (BigInt::from(4) * &self.a)
    }

    fn normalize_b(&mut self) {
        let two_a = BigInt::from(2) * &self.a;
        let mut b = self.b.mod_floor(&two_a);
        if b > self.a {
            b -= &two_a;
        }
        self.b = b;
    }

    pub fn mul(&self, other: &Ideal) -> Ideal {
        let field = &self.field;
        if field.is_rational() {
            return Ideal::principal(field, &(&self.gamma * &other.gamma));
        }
        let g1 = [field.bigint(&self.a), self.beta(&self.b)];
        let g2 = [field.bigint(&other.a), other.beta(&other.b)];
        let mut vecs = Vec::new();
        for x in &g1 {
            for y in &g2 {
                vecs.push(field.to_omega(&(x * y)).expect("lattice product not integral"));
            }
        }
        // Hermite form of the ℤ-span in (1, ω) coordinates
        let mut piv = (BigInt::zero(), BigInt::zero());
        let mut xs: Vec<BigInt> = Vec::new();
        for (x, y) in vecs {
            if y.is_zero() {
                xs.push(x);
                continue;
            }
            if piv.1.is_zero() {
                xs.push(piv.0.clone());
                piv = (x, y);
                continue;
            }
            let e = piv.1.extended_gcd(&y);
            let g = e.gcd;
            let new = (&e.x * &piv.0 + &e.y * &x, &e.x * &piv.1 + &e.y * &y);
            let fa = &y / &g;
            let fb = &piv.1 / &g;
            xs.push(&fa * &piv.0 - &fb * &x);
            piv = new;
        }
        let big_a = xs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let (mut bx, mut cy) = piv;
        if cy.is_negative() {
            bx = -bx;
            cy = -cy;
        }
        assert!(!big_a.is_zero() && !cy.is_zero(), "degenerate lattice product");
        let bx = bx.mod_floor(&big_a);
        debug_assert!((&big_a % &cy).is_zero() && (&bx % &cy).is_zero());
        let a = &big_a / &cy;
        let b = BigInt::from(2) * (&bx / &cy) + Self::delta(field);
        let gamma = &(&self.gamma * &other.gamma) * &field.bigint(&cy);
        let mut out = Ideal { field: field.clone(), a, b, gamma };
        out.normalize_b();
        out
    }

    pub fn inv(&self) -> Ideal {
        let field = &self.field;
        let gamma = &self.gamma.inv() * &field.rational(BigRational::new(BigInt::one(), self.a.clone()));
        let mut out = Ideal { field: field.clone(), a: self.a.clone(), b: -&self.b, gamma };
        out.normalize_b();
        out
    }

    pub fn pow(&self, e: i64) -> Ideal {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Ideal::unit(&self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).reduced();
            }
            b = b.mul(&b).reduced();
            e >>= 1;
        }
        acc
    }

    /// One reduction step `[a, β] = (a/β̄)·[|c|, (−b+√D)/2]`.
    fn rho(&mut self, track: bool) {
        let c = self.c();
        if track {
            let beta_bar = self.beta(&self.b).conj();
            self.gamma = &self.gamma * &(&self.field.bigint(&self.a) / &beta_bar);
        }
        self.a = c.abs();
        self.b = -&self.b;
        if self.field.is_real() {
            self.normalize_real();
        } else {
            self.normalize_b();
        }
    }

    fn normalize_real(&mut self) {
        let d = self.disc();
        let s = isqrt(&d);
        let two_a = BigInt::from(2) * &self.a;
        if &self.a * &self.a < d {
            self.b = &s - (&s - &self.b).mod_floor(&two_a);
        } else {
            self.normalize_b();
        }
    }

    fn is_reduced_real(&self) -> bool {
        let d = self.disc();
        let b = &self.b;
        if !b.is_positive() || b * b >= d {
            return false;
        }
        let two_a = BigInt::from(2) * &self.a;
        let lo = &two_a + b;
        let hi = &two_a - b;
        &lo * &lo > d && (hi.is_negative() || &hi * &hi < d)
    }

    fn reduce_in_place(&mut self, track: bool) {
        if self.field.is_rational() {
            return;
        }
        if self.field.is_real() {
            self.normalize_real();
            let mut guard = 0;
            while !self.is_reduced_real() {
                self.rho(track);
                guard += 1;
                assert!(guard < 100_000, "real reduction did not terminate");
            }
            return;
        }
        self.normalize_b();
        loop {
            let c = self.c();
            if self.a > c {
                self.rho(track);
                continue;
            }
            if self.a == c && self.b.is_negative() {
                self.rho(track);
            }
            break;
        }
    }

    /// An equivalent reduced lattice, keeping the ideal itself unchanged.
    pub fn reduced(&self) -> Ideal {
        let mut x = self.clone();
        x.reduce_in_place(true);
        x
    }

    /// Canonical key of the ideal class.
    pub fn class_key(&self) -> (BigInt, BigInt) {
        if self.field.is_rational() {
            return (BigInt::one(), BigInt::zero());
        }
        let mut x = self.clone();
        x.reduce_in_place(false);
        if !self.field.is_real() {
            return (x.a, x.b);
        }
        let start = (x.a.clone(), x.b.clone());
        let mut best = start.clone();
        loop {
            x.rho(false);
            let k = (x.a.clone(), x.b.clone());
            if k == start {
                return best;
            }
            if k < best {
                best = k;
            }
        }
    }

    /// A generator when the ideal is principal.
    pub fn generator(&self) -> Option<FieldElement> {
        if self.field.is_rational() {
            return Some(self.gamma.clone());
        }
        let mut x = self.reduced();
        if x.a.is_one() {
            return Some(x.gamma);
        }
        if !self.field.is_real() {
            return None;
        }
        let start = (x.a.clone(), x.b.clone());
        loop {
            x.rho(true);
            if x.a.is_one() {
                return Some(x.gamma);
            }
            if (x.a.clone(), x.b.clone()) == start {
                return None;
            }
        }
    }

    pub fn norm(&self) -> BigRational {
        rat_int(&self.a) * self.gamma.norm().abs()
    }
}

/// Principality test for a factored ideal; returns a generator.
pub fn is_principal(field: &QuadField, i: &FracIdeal) -> Option<FieldElement> {
    i.to_lattice(field).generator()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_above_two_has_order_five() {
        let k = QuadField::new(-79).unwrap();
        let p = &k.places_above(2).unwrap()[0];
        let i = FracIdeal::prime(p);
        for e in 1..5 {
            assert!(is_principal(&k, &i.pow(e)).is_none());
        }
        let g = is_principal(&k, &i.pow(5)).unwrap();
        assert_eq!(FracIdeal::principal(&k, &g), i.pow(5));
    }

    #[test]
    fn principal_in_real_field() {
        let k = QuadField::new(2).unwrap();
        for l in [2u64, 7, 17, 3] {
            for p in k.places_above(l).unwrap() {
                let g = is_principal(&k, &FracIdeal::prime(&p)).unwrap();
                assert_eq!(FracIdeal::principal(&k, &g), FracIdeal::prime(&p));
            }
        }
    }

    #[test]
    fn lattice_product_matches_factored() {
        let k = QuadField::new(-47).unwrap();
        let p2 = &k.places_above(2).unwrap()[0];
        let p3 = &k.places_above(3).unwrap()[1];
        let i = FracIdeal::prime_pow(p2, 3).mul(&FracIdeal::prime_pow(p3, -2));
        let lat = i.to_lattice(&k);
        assert_eq!(lat.norm(), i.norm());
        let x = k.parse("3/2+1/2*sqrt(-47)").unwrap();
        let j = FracIdeal::principal(&k, &x);
        assert_eq!(j.to_lattice(&k).generator().map(|g| FracIdeal::principal(&k, &g)), Some(j));
    }
}
