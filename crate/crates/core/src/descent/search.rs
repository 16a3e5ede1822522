//! Search for points of `E'` over quadratic fields with small rational `x`,
//! reporting `ψ(Q)` for those of infinite order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::arith::factor;
use crate::ellcurve::{Point, WeierstrassModel};
use crate::error::{Error, Result};
use crate::isogeny::IsogenyContext;
use crate::logpic::LogPic;
use crate::pairing::{psi_with, CurvePairing};
use crate::qfield::{FieldElement, QuadField};

#[derive(Clone, Debug, Serialize)]
pub struct SearchHit {
    /// `m` with `K = ℚ(√m)`.
    pub m: i64,
    pub disc: i64,
    pub point: String,
    pub psi: Option<String>,
    pub psi_nonzero: Option<bool>,
    pub error: Option<String>,
}

/// Signed squarefree part of a nonzero rational.
fn squarefree_part(x: &BigRational) -> BigInt {
    let n = x.numer() * x.denom();
    let mut out = BigInt::from(if n.is_negative() { -1 } else { 1 });
    for (l, e) in factor(&n) {
        if e % 2 == 1 {
            out *= l;
        }
    }
    out
}

/// The base change of a curve over `ℚ`.
pub fn base_change(e: &WeierstrassModel, k: &QuadField) -> Result<WeierstrassModel> {
    let a = e.a_invariants().map(|c| FieldElement::from_rational(k.m(), c.a.clone()));
    WeierstrassModel::new(k, a)
}

pub fn base_change_point(q: &Point, k: &QuadField) -> Point {
    match q {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => Point::Affine(
            FieldElement::from_rational(k.m(), x.a.clone()),
            FieldElement::from_rational(k.m(), y.a.clone()),
        ),
    }
}

/// Whether `x(Q)` meets the valuation bounds every torsion point meets on an integral model.
fn could_be_torsion(k: &QuadField, q: &Point) -> Result<bool> {
    let x = match q {
        Point::Infinity => return Ok(true),
        Point::Affine(x, _) => x,
    };
    let den = k.integral_denominator(x);
    if den.abs() == BigInt::from(1) {
        return Ok(true);
    }
    for (l, _) in factor(&den) {
        let l = l.to_u64().ok_or_else(|| Error::Bound("denominator prime too large".into()))?;
        for v in k.places_above(l)? {
            let vx = v.valuation(x);
            let e = v.e();
            let floor = match l {
                2 => -2 * e,
                3 => -2 * (e / 2),
                _ => 0,
            };
            if vx < floor {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `q` has finite order, looking at multiples up to `bound`.
pub fn is_torsion(e: &WeierstrassModel, q: &Point, bound: u64) -> Result<bool> {
    let mut r = q.clone();
    for _ in 0..bound {
        if r.is_infinity() {
            return Ok(true);
        }
        if !could_be_torsion(&e.field, &r)? {
            return Ok(false);
        }
        r = e.add(&r, q);
    }
    Ok(r.is_infinity())
}

/// Points `(x, y)` with `x = a/b`, `|a|, b ≤ xbound`, and `y` in a quadratic field,
/// on the integral curve `E'/ℚ` with `P` of order `p`. Fields with `|disc| > disc_bound` are skipped.
pub fn quadratic_point_search(
    e: &WeierstrassModel,
    pt: &Point,
    p: u64,
    xbound: i64,
    disc_bound: u64,
    imaginary_only: bool,
) -> Result<Vec<SearchHit>> {
    if !e.field.is_rational() {
        return Err(Error::Input("point search needs a curve over Q".into()));
    }
    let mut xs: Vec<BigRational> = vec![];
    for b in 1..=xbound {
        for a in -xbound..=xbound {
            if a.gcd(&b) == 1 {
                xs.push(BigRational::new(a.into(), b.into()));
            }
        }
    }
    xs.sort();
    let mut cache: BTreeMap<i64, Result<(IsogenyContext, CurvePairing, LogPic)>> = BTreeMap::new();
    let mut out = vec![];
    for x in xs {
        let xe = FieldElement::from_rational(1, x.clone());
        let lin = &(&e.a1 * &xe) + &e.a3;
        let g = &(&(&(&(&xe * &xe) * &xe) + &(&e.a2 * &(&xe * &xe))) + &(&e.a4 * &xe)) + &e.a6;
        let disc = &(&lin * &lin) + &(&FieldElement::from_int(1, 4) * &g);
        if disc.is_zero() {
            continue;
        }
        let d = squarefree_part(&disc.a);
        let m = match d.to_i64() {
            Some(m) if m != 1 => m,
            _ => continue,
        };
        if imaginary_only && m > 0 {
            continue;
        }
        let k = QuadField::from_m(m);
        if k.disc().unsigned_abs() > disc_bound {
            continue;
        }
        let ek = base_change(e, &k)?;
        let (xk, dk) = (FieldElement::from_rational(m, x.clone()), FieldElement::from_rational(m, disc.a.clone()));
        let root = dk.sqrt().ok_or_else(|| Error::Inconsistent("discriminant is not a square in K".into()))?;
        let lk = FieldElement::from_rational(m, lin.a.clone());
        let y = &(&root - &lk) * &FieldElement::from_int(m, 2).inv();
        let q = ek.point(xk, y)?;
        if is_torsion(&ek, &q, 12 * p)? {
            continue;
        }
        let entry = cache.entry(m).or_insert_with(|| {
            let ctx = IsogenyContext::new(&ek, &base_change_point(pt, &k), p)?;
            let cp = CurvePairing::new(&ctx.e_prime)?;
            let lp = LogPic::new(&k, &ctx.s1)?;
            Ok((ctx, cp, lp))
        });
        let mut hit = SearchHit { m, disc: k.disc(), point: q.to_string(), psi: None, psi_nonzero: None, error: None };
        match entry {
            Err(err) => hit.error = Some(err.to_string()),
            Ok((ctx, cp, lp)) => match psi_with(cp, ctx, &q).and_then(|d| Ok((lp.display(&d)?, lp.is_zero(&d)))) {
                Ok((s, z)) => {
                    hit.psi = Some(s);
                    hit.psi_nonzero = Some(!z);
                }
                Err(err) => hit.error = Some(err.to_string()),
            },
        }
        out.push(hit);
    }
    Ok(out)
}
