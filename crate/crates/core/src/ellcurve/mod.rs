//! Weierstrass models over `ℚ` or a quadratic field, the group law, and local data.

mod components;
mod tate;
#[cfg(test)]
mod tests;

pub use components::{component_index, e_v_of_o, e_v_of_q, ComponentIndex};
pub use tate::{local_data, Kodaira, LocalData};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::qfield::{FieldElement, QuadField};

/// `(r, s, t, u)` with `x = u²x' + r`, `y = u³y' + su²x' + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    pub r: FieldElement,
    pub s: FieldElement,
    pub t: FieldElement,
    pub u: FieldElement,
}

impl Transform {
    pub fn identity(m: i64) -> Transform {
        Transform {
            r: FieldElement::zero(m),
            s: FieldElement::zero(m),
            t: FieldElement::zero(m),
            u: FieldElement::one(m),
        }
    }

    /// First `self`, then `next` on the resulting model.
    pub fn then(&self, next: &Transform) -> Transform {
        let u2 = &self.u * &self.u;
        Transform {
            r: &self.r + &(&u2 * &next.r),
            s: &self.s + &(&self.u * &next.s),
            t: &(&self.t + &(&(&u2 * &self.u) * &next.t)) + &(&(&self.s * &u2) * &next.r),
            u: &self.u * &next.u,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub field: QuadField,
    pub a1: FieldElement,
    pub a2: FieldElement,
    pub a3: FieldElement,
    pub a4: FieldElement,
    pub a6: FieldElement,
    pub b2: FieldElement,
    pub b4: FieldElement,
    pub b6: FieldElement,
    pub b8: FieldElement,
    pub c4: FieldElement,
    pub c6: FieldElement,
    pub disc: FieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(FieldElement, FieldElement),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&FieldElement> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&FieldElement> {
        match self {
            Point::Infinity => None,
            Point::Affine(_, y) => Some(y),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl WeierstrassModel {
    pub fn new(field: &QuadField, a: [FieldElement; 5]) -> Result<WeierstrassModel> {
        let [a1, a2, a3, a4, a6] = a;
        let b2 = &(&a1 * &a1) + &a2.scale(&ri(4));
        let b4 = &(&a1 * &a3) + &a4.scale(&ri(2));
        let b6 = &(&a3 * &a3) + &a6.scale(&ri(4));
        let b8 =
            &(&(&(&(&a1 * &a1) * &a6) + &(&a2 * &a6).scale(&ri(4))) - &(&(&a1 * &a3) * &a4)) + &(&(&a2 * &a3) * &a3);
        let b8 = &b8 - &(&a4 * &a4);
        let c4 = &(&b2 * &b2) - &b4.scale(&ri(24));
        let c6 = &(&(&b2 * &b4).scale(&ri(36)) - &(&(&b2 * &b2) * &b2)) - &b6.scale(&ri(216));
        let disc = &(&(&(-&(&(&b2 * &b2) * &b8)) - &(&(&b4 * &b4) * &b4).scale(&ri(8))) - &(&b6 * &b6).scale(&ri(27)))
            + &(&(&b2 * &b4) * &b6).scale(&ri(9));
        if disc.is_zero() {
            return Err(Error::Singular);
        }
        Ok(WeierstrassModel { field: field.clone(), a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, disc })
    }

    pub fn from_ints(field: &QuadField, a: [i64; 5]) -> Result<WeierstrassModel> {
        WeierstrassModel::new(field, a.map(|x| field.int(x)))
    }

    /// Parses five comma-separated coefficients, optionally in brackets.
    pub fn parse(field: &QuadField, s: &str) -> Result<WeierstrassModel> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("expected five coefficients in {s:?}")));
        }
        let mut a = Vec::with_capacity(5);
        for p in parts {
            a.push(field.parse(p)?);
        }
        WeierstrassModel::new(field, a.try_into().unwrap())
    }

    pub fn m(&self) -> i64 {
        self.field.m()
    }

    pub fn a_invariants(&self) -> [FieldElement; 5] {
        [self.a1.clone(), self.a2.clone(), self.a3.clone(), self.a4.clone(), self.a6.clone()]
    }

    pub fn j_invariant(&self) -> FieldElement {
        &(&(&self.c4 * &self.c4) * &self.c4) / &self.disc
    }

    /// The model in the primed coordinates of `tr`.
    pub fn transform(&self, tr: &Transform) -> WeierstrassModel {
        let Transform { r, s, t, u } = tr;
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let ui = u.inv();
        let u2 = &ui * &ui;
        let u3 = &u2 * &ui;
        let u4 = &u2 * &u2;
        let n1 = a1 + &s.scale(&ri(2));
        let n2 = &(&(a2 - &(s * a1)) + &r.scale(&ri(3))) - &(s * s);
        let n3 = &(a3 + &(r * a1)) + &t.scale(&ri(2));
        let n4 = &(&(&(a4 - &(s * a3)) + &(r * a2).scale(&ri(2))) - &(&(t + &(r * s)) * a1)) + &(r * r).scale(&ri(3));
        let n4 = &n4 - &(s * t).scale(&ri(2));
        let n6 = &(&(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r)) - &(t * a3)) - &(t * t);
        let n6 = &n6 - &(&(r * t) * a1);
        let out = [&n1 * &ui, &n2 * &u2, &n3 * &u3, &n4 * &u4, &n6 * &(&u4 * &u2)];
        WeierstrassModel::new(&self.field, out).expect("isomorphic model is nonsingular")
    }

    /// Image of a point in the coordinates of `tr`.
    pub fn transform_point(&self, tr: &Transform, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let ui = tr.u.inv();
                let u2 = &ui * &ui;
                let x2 = &(x - &tr.r) * &u2;
                let y2 = &(&(y - &tr.t) - &(&tr.s * &(x - &tr.r))) * &(&u2 * &ui);
                Point::Affine(x2, y2)
            }
        }
    }

    /// Inverse of [`transform_point`](Self::transform_point).
    pub fn untransform_point(tr: &Transform, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let u2 = &tr.u * &tr.u;
                let xn = &(&u2 * x) + &tr.r;
                let yn = &(&(&(&u2 * &tr.u) * y) + &(&(&tr.s * &u2) * x)) + &tr.t;
                Point::Affine(xn, yn)
            }
        }
    }

    pub fn is_on(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let lhs = &(&(y * y) + &(&(&self.a1 * x) * y)) + &(&self.a3 * y);
                let rhs = &(&(&(&(x * x) * x) + &(&self.a2 * &(x * x))) + &(&self.a4 * x)) + &self.a6;
                lhs == rhs
            }
        }
    }

    pub fn point(&self, x: FieldElement, y: FieldElement) -> Result<Point> {
        let p = Point::Affine(x, y);
        if !self.is_on(&p) {
            return Err(Error::NotOnCurve(p.to_string()));
        }
        Ok(p)
    }

    /// Parses `(x, y)`, `x,y` or `O`.
    pub fn parse_point(&self, s: &str) -> Result<Point> {
        let t = s.trim();
        if t == "O" || t == "0" || t.eq_ignore_ascii_case("infinity") {
            return Ok(Point::Infinity);
        }
        let body = t.trim_start_matches('(').trim_end_matches(')');
        let (xs, ys) = split_top_comma(body).ok_or_else(|| Error::Parse(format!("point {s:?}")))?;
        self.point(self.field.parse(xs.trim())?, self.field.parse(ys.trim())?)
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), &(&(-y) - &(&self.a1 * x)) - &self.a3),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(a, b), Point::Affine(c, d)) => (a, b, c, d),
        };
        let (lam, nu) = if x1 == x2 {
            let s = &(&(y1 + y2) + &(&self.a1 * x2)) + &self.a3;
            if s.is_zero() {
                return Point::Infinity;
            }
            let num = &(&(&(x1 * x1).scale(&ri(3)) + &(&self.a2 * x1).scale(&ri(2))) + &self.a4) - &(&self.a1 * y1);
            let den = &(y1.scale(&ri(2)) + (&self.a1 * x1)) + &self.a3;
            let lam = &num / &den;
            let nu =
                &(&(&(&(-&(&(x1 * x1) * x1)) + &(&self.a4 * x1)) + &self.a6.scale(&ri(2))) - &(&self.a3 * y1)) / &den;
            (lam, nu)
        } else {
            let lam = &(y2 - y1) / &(x2 - x1);
            let nu = &(&(y1 * x2) - &(y2 * x1)) / &(x2 - x1);
            (lam, nu)
        };
        let x3 = &(&(&(&lam * &lam) + &(&self.a1 * &lam)) - &self.a2) - &(x1 + x2);
        let y3 = &(&(-&(&(&lam + &self.a1) * &x3)) - &nu) - &self.a3;
        Point::Affine(x3, y3)
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, n: i64, p: &Point) -> Point {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// Exact order of a torsion point, if at most `bound`.
    pub fn order(&self, p: &Point, bound: u64) -> Option<u64> {
        let mut q = p.clone();
        for k in 1..=bound {
            if q.is_infinity() {
                return Some(k);
            }
            q = self.add(&q, p);
        }
        None
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}, {}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}
