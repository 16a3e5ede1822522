//! `ℚ` and quadratic fields: elements, places, ideals, class groups, units.

pub mod classgroup;
pub mod element;
pub mod fq;
pub mod ideal;
pub mod local;
pub mod place;
pub mod selmer_basis;
pub mod units;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{is_squarefree, rat_int};
use crate::error::{Error, Result};
pub use element::FieldElement;
pub use place::{Place, Splitting};

/// `ℚ(√m)` for squarefree `m ≠ 1`, or `ℚ` itself when `m = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    m: i64,
}

impl QuadField {
    pub fn rationals() -> QuadField {
        QuadField { m: 1 }
    }

    /// Accepts a squarefree `D ≠ 0, 1` or a fundamental discriminant `4m`.
    pub fn new(d: i64) -> Result<QuadField> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidField(format!("D = {d} does not define a quadratic field")));
        }
        if is_squarefree(&BigInt::from(d)) {
            return Ok(QuadField { m: d });
        }
        if d % 4 == 0 {
            let m = d / 4;
            let r = m.rem_euclid(4);
            if (r == 2 || r == 3) && is_squarefree(&BigInt::from(m)) {
                return Ok(QuadField { m });
            }
        }
        Err(Error::InvalidField(format!("D = {d} is neither squarefree nor a fundamental discriminant")))
    }

    pub fn from_m(m: i64) -> QuadField {
        if m == 1 {
            QuadField::rationals()
        } else {
            QuadField::new(m).expect("invalid squarefree parameter")
        }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn is_rational(&self) -> bool {
        self.m == 1
    }

    pub fn degree(&self) -> u32 {
        if self.m == 1 {
            1
        } else {
            2
        }
    }

    pub fn is_real(&self) -> bool {
        self.m > 1
    }

    pub fn is_imaginary(&self) -> bool {
        self.m < 0
    }

    /// Fundamental discriminant; `1` for `ℚ`.
    pub fn disc(&self) -> i64 {
        if self.m == 1 {
            1
        } else if self.m.rem_euclid(4) == 1 {
            self.m
        } else {
            4 * self.m
        }
    }

    /// Number of archimedean places.
    pub fn infinite_places(&self) -> usize {
        match self.m {
            1 => 1,
            m if m > 0 => 2,
            _ => 1,
        }
    }

    /// Order of the roots of unity.
    pub fn torsion_order(&self) -> u32 {
        match self.m {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// Whether `K` contains the `p`-th roots of unity (odd `p`).
    pub fn has_mu_p(&self, p: u64) -> bool {
        p == 3 && self.m == -3
    }

    pub fn elt(&self, a: BigRational, b: BigRational) -> FieldElement {
        FieldElement::new(self.m, a, b)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_int(self.m, n)
    }

    pub fn bigint(&self, n: &BigInt) -> FieldElement {
        FieldElement::from_bigint(self.m, n)
    }

    pub fn rational(&self, r: BigRational) -> FieldElement {
        FieldElement::from_rational(self.m, r)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.m)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self.m)
    }

    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        FieldElement::parse(self.m, s)
    }

    pub fn sqrt_m(&self) -> FieldElement {
        FieldElement::sqrt_m(self.m)
    }

    /// `ω` with `O_K = ℤ[ω]`: `(1+√m)/2` if `m ≡ 1 mod 4`, else `√m`.
    pub fn omega(&self) -> FieldElement {
        if self.m == 1 {
            return self.zero();
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if self.m.rem_euclid(4) == 1 {
            self.elt(half.clone(), half)
        } else {
            self.sqrt_m()
        }
    }

    pub fn from_omega(&self, x: &BigInt, y: &BigInt) -> FieldElement {
        if self.m == 1 {
            return self.bigint(x);
        }
        &self.bigint(x) + &self.omega().scale(&rat_int(y))
    }

    /// Coordinates `(x, y)` of `x + y·ω`, when both are rational integers.
    pub fn to_omega(&self, z: &FieldElement) -> Option<(BigInt, BigInt)> {
        let (x, y) = if self.m == 1 {
            (z.a.clone(), BigRational::zero())
        } else if self.m.rem_euclid(4) == 1 {
            let y = &z.b * BigRational::from_integer(BigInt::from(2));
            (&z.a - &z.b, y)
        } else {
            (z.a.clone(), z.b.clone())
        };
        if x.is_integer() && y.is_integer() {
            Some((x.to_integer(), y.to_integer()))
        } else {
            None
        }
    }

    pub fn is_integral(&self, z: &FieldElement) -> bool {
        self.to_omega(z).is_some()
    }

    /// Smallest positive integer `d` with `d·z` integral.
    pub fn integral_denominator(&self, z: &FieldElement) -> BigInt {
        let base = z.denominator();
        let two = BigInt::from(2);
        if base.is_even() {
            let half: BigInt = &base / &two;
            if self.is_integral(&z.scale(&rat_int(&half))) {
                return half;
            }
        }
        base
    }

    /// Places of `K` above the rational prime `ℓ`.
    pub fn places_above(&self, l: u64) -> Result<Vec<Place>> {
        Place::above(self.m, l)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "Q")
        } else {
            write!(f, "Q(sqrt({}))", self.m)
        }
    }
}
