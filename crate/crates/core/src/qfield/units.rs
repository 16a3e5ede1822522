//! Unit groups of quadratic orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::element::FieldElement;
use super::QuadField;
use crate::arith::isqrt;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub torsion: u32,
    pub fundamental: Option<FieldElement>,
}

impl UnitGroup {
    pub fn new(field: &QuadField) -> UnitGroup {
        UnitGroup {
            torsion: field.torsion_order(),
            fundamental: if field.is_real() { Some(fundamental_unit(field).unwrap()) } else { None },
        }
    }

    /// Generators of `O_K^× / (O_K^×)^p` for odd `p`.
    pub fn mod_p_generators(&self, field: &QuadField, p: u64) -> Vec<FieldElement> {
        let mut out = Vec::new();
        if field.has_mu_p(p) {
            // ζ₃ = (−1+√−3)/2
            out.push(field.parse("-1/2+1/2*sqrt(-3)").unwrap());
        }
        if let Some(e) = &self.fundamental {
            out.push(e.clone());
        }
        out
    }
}

fn floor_quad(p: &BigInt, q: &BigInt, s: &BigInt) -> BigInt {
    // ⌊(p + √d)/q⌋ with s = ⌊√d⌋, √d irrational
    if q.is_positive() {
        (p + s).div_floor(q)
    } else {
        -((p + s).div_floor(&-q) + BigInt::one())
    }
}

/// The fundamental unit `ε > 1` from the continued fraction of `√m` or `(1+√m)/2`.
pub fn fundamental_unit(field: &QuadField) -> Result<FieldElement> {
    if !field.is_real() {
        return Err(Error::InvalidField(format!("{field} has no fundamental unit")));
    }
    let m = field.m();
    let d = BigInt::from(m);
    let s = isqrt(&d);
    let one_mod_4 = m.rem_euclid(4) == 1;
    let (mut pk, mut qk) = if one_mod_4 { (BigInt::one(), BigInt::from(2)) } else { (BigInt::from(0), BigInt::one()) };
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::from(0));
    let omega = field.omega();
    loop {
        let a = floor_quad(&pk, &qk, &s);
        let h = &a * &h1 + &h0;
        let k = &a * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h);
        k0 = std::mem::replace(&mut k1, k);
        let cand = if one_mod_4 {
            // h − k·ω̄ has the same norm as h − k·ω
            &field.bigint(&h1) - &omega.conj().scale(&crate::arith::rat_int(&k1))
        } else {
            field.elt(crate::arith::rat_int(&h1), crate::arith::rat_int(&k1))
        };
        if cand.norm().abs().is_one() {
            return Ok(cand);
        }
        let p_next = &a * &qk - &pk;
        let q_next = (&d - &p_next * &p_next) / &qk;
        pk = p_next;
        qk = q_next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_units() {
        let cases = [
            (2, "1+sqrt(2)"),
            (5, "1/2+1/2*sqrt(5)"),
            (3, "2+sqrt(3)"),
            (13, "3/2+1/2*sqrt(13)"),
            (94, "2143295+221064*sqrt(94)"),
        ];
        for (m, e) in cases {
            let k = QuadField::new(m).unwrap();
            assert_eq!(fundamental_unit(&k).unwrap(), k.parse(e).unwrap(), "m = {m}");
        }
        assert!(fundamental_unit(&QuadField::new(-5).unwrap()).is_err());
    }
}
