//! Class groups from prime-ideal relations and Smith normal form.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ideal::{FracIdeal, Ideal};
use super::place::Place;
use super::QuadField;
use crate::abelian::Smith;
use crate::arith::{isqrt, primes_up_to};
use crate::error::{Error, Result};

pub const MAX_ABS_DISC: i64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub field: QuadField,
    /// Nontrivial elementary divisors `d₁ | d₂ | …`.
    pub invariants: Vec<u64>,
    /// Generating ideals, one per invariant.
    pub generators: Vec<FracIdeal>,
    base: Vec<Place>,
    table: HashMap<(BigInt, BigInt), Vec<i64>>,
    smith: Smith,
    keep: Vec<usize>,
}

impl ClassGroup {
    pub fn new(field: &QuadField) -> Result<ClassGroup> {
        let d = field.disc();
        if d.abs() > MAX_ABS_DISC {
            return Err(Error::Bound(format!("|D| = {} exceeds {MAX_ABS_DISC}", d.abs())));
        }
        if field.is_rational() {
            return Ok(ClassGroup {
                field: field.clone(),
                invariants: vec![],
                generators: vec![],
                base: vec![],
                table: HashMap::from([((BigInt::one(), BigInt::zero()), vec![])]),
                smith: Smith::new(&[], 0),
                keep: vec![],
            });
        }
        // Minkowski bound: (2/π)√|D| or ½√D
        let root = isqrt(&BigInt::from(d.abs())).to_u64().unwrap() + 1;
        let bound = if d < 0 { (root * 2).div_ceil(3) + 1 } else { root / 2 + 1 };
        let mut base = Vec::new();
        for l in primes_up_to(bound) {
            let p = field.places_above(l)?.remove(0);
            if p.kind != super::Splitting::Inert {
                base.push(p);
            }
        }
        let n = base.len();
        let mut table: HashMap<(BigInt, BigInt), Vec<i64>> = HashMap::new();
        let mut elems: Vec<(Ideal, Vec<i64>)> = vec![(Ideal::unit(field), vec![0; n])];
        table.insert(Ideal::unit(field).class_key(), vec![0; n]);
        let mut relations = Vec::new();
        for (i, p) in base.iter().enumerate() {
            let g = Ideal::from_place(field, p);
            let mut cur = g.clone();
            let mut k = 1i64;
            let hit = loop {
                if let Some(v) = table.get(&cur.class_key()) {
                    break v.clone();
                }
                cur = cur.mul(&g).reduced();
                k += 1;
            };
            let mut rel: Vec<BigInt> = hit.iter().map(|x| BigInt::from(-x)).collect();
            rel[i] += BigInt::from(k);
            relations.push(rel);
            if k > 1 {
                let old = elems.clone();
                let mut gj = Ideal::unit(field);
                for j in 1..k {
                    gj = gj.mul(&g).reduced();
                    for (h, v) in &old {
                        let e = h.mul(&gj).reduced();
                        let mut w = v.clone();
                        w[i] += j;
                        table.insert(e.class_key(), w.clone());
                        elems.push((e, w));
                    }
                }
            }
        }
        let smith = Smith::new(&relations, n);
        let keep = smith.nontrivial();
        let invariants: Vec<u64> = keep.iter().map(|&i| smith.diag[i].to_u64().unwrap()).collect();
        let generators = keep
            .iter()
            .map(|&i| {
                let mut id = FracIdeal::one();
                for (j, p) in base.iter().enumerate() {
                    let e = smith.v_inv[i][j].to_i64().unwrap();
                    id = id.mul(&FracIdeal::prime_pow(p, e));
                }
                id
            })
            .collect();
        Ok(ClassGroup { field: field.clone(), invariants, generators, base, table, smith, keep })
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    /// Coordinates of the class of a lattice ideal, each modulo its invariant.
    pub fn dlog_lattice(&self, id: &Ideal) -> Vec<u64> {
        let v = self.table.get(&id.class_key()).expect("class missing from table");
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let c = self.smith.coords(&big);
        self.keep.iter().map(|&i| c[i].to_u64().unwrap()).collect()
    }

    pub fn dlog(&self, id: &FracIdeal) -> Vec<u64> {
        self.dlog_lattice(&id.to_lattice(&self.field))
    }

    /// `p`-rank of the class group.
    pub fn p_rank(&self, p: u64) -> usize {
        self.invariants.iter().filter(|&&d| d % p == 0).count()
    }

    pub fn factor_base(&self) -> &[Place] {
        &self.base
    }
}

/// Number of reduced primitive forms of negative discriminant `d`.
pub fn count_reduced_forms(d: i64) -> u64 {
    assert!(d < 0);
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_groups() {
        let k = QuadField::new(-79).unwrap();
        let cl = ClassGroup::new(&k).unwrap();
        assert_eq!(cl.invariants, vec![5]);
        let p = &k.places_above(2).unwrap()[0];
        assert_ne!(cl.dlog(&FracIdeal::prime(p)), vec![0]);
        assert_eq!(ClassGroup::new(&QuadField::new(2).unwrap()).unwrap().order(), 1);
        assert_eq!(ClassGroup::new(&QuadField::new(-47).unwrap()).unwrap().order(), 5);
        assert_eq!(ClassGroup::new(&QuadField::new(-5).unwrap()).unwrap().invariants, vec![2]);
        assert_eq!(ClassGroup::new(&QuadField::new(-21).unwrap()).unwrap().invariants, vec![2, 2]);
        assert_eq!(ClassGroup::new(&QuadField::new(79).unwrap()).unwrap().order(), 3);
    }

    #[test]
    fn forms_oracle_agrees() {
        for m in [-5i64, -14, -23, -47, -71, -79, -89, -199, -223, -401, -1151] {
            let k = QuadField::new(m).unwrap();
            assert_eq!(ClassGroup::new(&k).unwrap().order(), count_reduced_forms(k.disc()), "m = {m}");
        }
    }

    #[test]
    fn dlog_is_additive() {
        let k = QuadField::new(-199).unwrap();
        let cl = ClassGroup::new(&k).unwrap();
        let ps: Vec<Place> = [2u64, 5, 7, 11].iter().flat_map(|&l| k.places_above(l).unwrap()).collect();
        for a in &ps {
            for b in &ps {
                let x = cl.dlog(&FracIdeal::prime(a));
                let y = cl.dlog(&FracIdeal::prime(b));
                let z = cl.dlog(&FracIdeal::prime(a).mul(&FracIdeal::prime(b)));
                let sum: Vec<u64> = x.iter().zip(&y).zip(&cl.invariants).map(|((u, v), d)| (u + v) % d).collect();
                assert_eq!(z, sum);
            }
        }
    }
}
