//! S-units, `S`-class groups and the group `H¹(O_{K,S}, μ_p) ⊂ K^×/p`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::classgroup::ClassGroup;
use super::element::FieldElement;
use super::ideal::{is_principal, FracIdeal};
use super::local::LocalUnitsModP;
use super::place::{Place, Splitting};
use super::units::UnitGroup;
use super::QuadField;
use crate::abelian::{rank_mod_p, Smith};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Unit,
    Class,
}

/// The subgroup of `Cl(K)` generated by a place set, with exponent witnesses.
#[derive(Clone, Debug)]
pub struct SClassData {
    pub s: Vec<Place>,
    pub cl: ClassGroup,
    /// `dlog → exponents over S` for every class in `⟨S⟩`.
    span: HashMap<Vec<u64>, Vec<i64>>,
    /// Basis of `{k ∈ ℤ^S : ∏ v^k principal}`.
    pub relations: Vec<Vec<i64>>,
}

fn add_mod(x: &[u64], y: &[u64], d: &[u64]) -> Vec<u64> {
    x.iter().zip(y).zip(d).map(|((a, b), m)| (a + b) % m).collect()
}

impl SClassData {
    pub fn new(field: &QuadField, s: &[Place]) -> Result<SClassData> {
        let cl = ClassGroup::new(field)?;
        let d = cl.invariants.clone();
        let zero = vec![0u64; d.len()];
        let mut span: HashMap<Vec<u64>, Vec<i64>> = HashMap::from([(zero.clone(), vec![0; s.len()])]);
        let mut relations = Vec::new();
        for (i, v) in s.iter().enumerate() {
            let c = cl.dlog(&FracIdeal::prime(v));
            let mut cur = c.clone();
            let mut k = 1i64;
            let hit = loop {
                if let Some(w) = span.get(&cur) {
                    break w.clone();
                }
                cur = add_mod(&cur, &c, &d);
                k += 1;
            };
            let mut rel: Vec<i64> = hit.iter().map(|x| -x).collect();
            rel[i] += k;
            relations.push(rel);
            if k > 1 {
                let old: Vec<(Vec<u64>, Vec<i64>)> = span.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
                let mut cj = zero.clone();
                for j in 1..k {
                    cj = add_mod(&cj, &c, &d);
                    for (h, w) in &old {
                        let mut w2 = w.clone();
                        w2[i] += j;
                        span.entry(add_mod(h, &cj, &d)).or_insert(w2);
                    }
                }
            }
        }
        Ok(SClassData { s: s.to_vec(), cl, span, relations })
    }

    /// Exponents `k` with `[I] = [∏ v^k]`, if the class of `I` lies in `⟨S⟩`.
    pub fn in_span(&self, i: &FracIdeal) -> Option<Vec<i64>> {
        self.span.get(&self.cl.dlog(i)).cloned()
    }

    pub fn s_ideal(&self, k: &[i64]) -> FracIdeal {
        self.s.iter().zip(k).fold(FracIdeal::one(), |acc, (v, &e)| acc.mul(&FracIdeal::prime_pow(v, e)))
    }

    fn s_smith(&self) -> Smith {
        let d = &self.cl.invariants;
        let n = d.len();
        let mut rels: Vec<Vec<BigInt>> = Vec::new();
        for (i, di) in d.iter().enumerate() {
            let mut r = vec![BigInt::from(0); n];
            r[i] = BigInt::from(*di);
            rels.push(r);
        }
        for v in &self.s {
            rels.push(self.cl.dlog(&FracIdeal::prime(v)).iter().map(|&x| BigInt::from(x)).collect());
        }
        Smith::new(&rels, n)
    }

    /// Coordinates of the class of `I` in `Cl(O_{K,S})`, matching [`s_class_group`](Self::s_class_group).
    pub fn s_class_coords(&self, i: &FracIdeal) -> Vec<u64> {
        let sm = self.s_smith();
        let x: Vec<BigInt> = self.cl.dlog(i).iter().map(|&c| BigInt::from(c)).collect();
        let c = sm.coords(&x);
        sm.nontrivial().iter().map(|&j| c[j].to_u64().unwrap()).collect()
    }

    /// Structure of `Cl(O_{K,S}) = Cl(K)/⟨S⟩` with generator ideals.
    pub fn s_class_group(&self) -> (Vec<u64>, Vec<FracIdeal>) {
        let d = &self.cl.invariants;
        let n = d.len();
        let mut rels: Vec<Vec<BigInt>> = Vec::new();
        for (i, di) in d.iter().enumerate() {
            let mut r = vec![BigInt::from(0); n];
            r[i] = BigInt::from(*di);
            rels.push(r);
        }
        for v in &self.s {
            rels.push(self.cl.dlog(&FracIdeal::prime(v)).iter().map(|&x| BigInt::from(x)).collect());
        }
        let sm = Smith::new(&rels, n);
        let mut inv = Vec::new();
        let mut gens = Vec::new();
        for j in sm.nontrivial() {
            inv.push(sm.diag[j].to_u64().unwrap());
            let mut id = FracIdeal::one();
            for (i, g) in self.cl.generators.iter().enumerate() {
                id = id.mul(&g.pow(sm.v_inv[j][i].to_i64().unwrap()));
            }
            gens.push(id);
        }
        (inv, gens)
    }

    /// Ideals `I_c` whose classes form a basis of `Cl(O_{K,S})[p]`.
    pub fn s_class_p_torsion(&self, p: u64) -> Vec<FracIdeal> {
        let (inv, gens) = self.s_class_group();
        inv.iter().zip(gens).filter(|(d, _)| *d % p == 0).map(|(d, g)| g.pow((d / p) as i64)).collect()
    }

    /// `γ` with `(γ) = I^p · ∏ v^(−k)` for an ideal `I` that is `p`-torsion in `Cl(O_{K,S})`.
    pub fn class_generator(&self, i: &FracIdeal, p: u64) -> (FieldElement, Vec<i64>) {
        let ip = i.pow(p as i64);
        let k = self.in_span(&ip).expect("ideal not p-torsion in the S-class group");
        let j = ip.mul(&self.s_ideal(&k).inv());
        (is_principal(&self.cl.field, &j).expect("expected principal ideal"), k)
    }

    /// Generators of `O_{K,S}^×` modulo torsion and their divisor exponents on `S`.
    pub fn s_unit_generators(&self) -> Vec<(FieldElement, Vec<i64>)> {
        self.relations
            .iter()
            .map(|r| (is_principal(&self.cl.field, &self.s_ideal(r)).expect("relation not principal"), r.clone()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct FieldSelmerBasis {
    pub field: QuadField,
    pub s: Vec<Place>,
    pub p: u64,
    pub elements: Vec<(FieldElement, Part)>,
    pub sdata: SClassData,
}

impl FieldSelmerBasis {
    pub fn new(field: &QuadField, s: &[Place], p: u64) -> Result<FieldSelmerBasis> {
        let sdata = SClassData::new(field, s)?;
        let mut elements: Vec<(FieldElement, Part)> =
            UnitGroup::new(field).mod_p_generators(field, p).into_iter().map(|u| (u, Part::Unit)).collect();
        for (g, _) in sdata.s_unit_generators() {
            elements.push((g, Part::Unit));
        }
        for i in sdata.s_class_p_torsion(p) {
            let (g, _) = sdata.class_generator(&i, p);
            elements.push((g, Part::Class));
        }
        Ok(FieldSelmerBasis { field: field.clone(), s: s.to_vec(), p, elements, sdata })
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn reps(&self) -> Vec<FieldElement> {
        self.elements.iter().map(|(x, _)| x.clone()).collect()
    }
}

/// Auxiliary degree-one places with `N𝔮 ≡ 1 mod p` avoiding the given primes.
pub fn auxiliary_places(field: &QuadField, p: u64, avoid: &[u64], count: usize) -> Vec<Place> {
    let mut out = Vec::new();
    let mut l = p + 1;
    while out.len() < count {
        l += 1;
        if (l - 1) % p != 0 || avoid.contains(&l) || !crate::arith::is_prime_u64(l) {
            continue;
        }
        for v in field.places_above(l).unwrap() {
            if matches!(v.kind, Splitting::Split | Splitting::Rational) {
                out.push(v);
            }
        }
    }
    out
}

/// Frobenius characters of elements at many auxiliary places: a matrix over `𝔽_p`.
pub fn character_matrix(field: &QuadField, xs: &[FieldElement], p: u64, count: usize) -> Vec<Vec<u64>> {
    let mut avoid: Vec<u64> = vec![p];
    for x in xs {
        avoid.extend(FracIdeal::support_primes(field, x));
    }
    let places = auxiliary_places(field, p, &avoid, count);
    let locals: Vec<LocalUnitsModP> = places.iter().map(|v| LocalUnitsModP::new(v, p)).collect();
    xs.iter().map(|x| locals.iter().map(|l| l.coords(x)[0]).collect()).collect()
}

/// Lower bound for the `𝔽_p`-rank of the span of `xs` in `K^×/p`; exact unless
/// the auxiliary places fail to separate.
pub fn rank_in_k_mod_p(field: &QuadField, xs: &[FieldElement], p: u64) -> usize {
    if xs.is_empty() {
        return 0;
    }
    let m = character_matrix(field, xs, p, 24 + 4 * xs.len());
    rank_mod_p(&m, p)
}

/// Whether `x` is trivial in `K^×/p`: divisor divisible by `p` and all auxiliary characters zero.
pub fn is_pth_power_global(field: &QuadField, x: &FieldElement, p: u64) -> bool {
    if FracIdeal::principal(field, x).exps.values().any(|e| e % p as i64 != 0) {
        return false;
    }
    character_matrix(field, std::slice::from_ref(x), p, 40)[0].iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selmer_basis_dimensions() {
        let k = QuadField::new(-47).unwrap();
        let s = k.places_above(11).unwrap();
        let b = FieldSelmerBasis::new(&k, &s, 5).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(rank_in_k_mod_p(&k, &b.reps(), 5), 2);
        let k2 = QuadField::new(2).unwrap();
        let b2 = FieldSelmerBasis::new(&k2, &k2.places_above(11).unwrap(), 5).unwrap();
        assert_eq!(b2.dim(), 2);
        let k3 = QuadField::new(-7).unwrap();
        assert_eq!(FieldSelmerBasis::new(&k3, &[], 5).unwrap().dim(), 0);
    }

    #[test]
    fn representatives_have_p_divisible_valuations_outside_s() {
        let k = QuadField::new(-47).unwrap();
        let s = k.places_above(11).unwrap();
        let b = FieldSelmerBasis::new(&k, &s, 5).unwrap();
        for x in b.reps() {
            for (v, e) in FracIdeal::principal(&k, &x).exps {
                assert!(s.contains(&v) || e % 5 == 0);
            }
        }
    }
}
