//! The logarithmic class group `logPic(X, S)`: divisors with rational
//! coefficients above `S` and integral ones elsewhere, modulo principal divisors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::qfield::ideal::{is_principal, FracIdeal};
use crate::qfield::selmer_basis::{rank_in_k_mod_p, SClassData};
use crate::qfield::units::UnitGroup;
use crate::qfield::{FieldElement, Place, QuadField};

/// A finitely supported divisor with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogDivisor {
    pub coeffs: BTreeMap<Place, BigRational>,
}

impl LogDivisor {
    pub fn zero() -> LogDivisor {
        LogDivisor::default()
    }

    pub fn single(v: &Place, c: BigRational) -> LogDivisor {
        let mut d = LogDivisor::zero();
        d.add_at(v, &c);
        d
    }

    pub fn from_ideal(i: &FracIdeal) -> LogDivisor {
        LogDivisor { coeffs: i.exps.iter().map(|(v, &e)| (v.clone(), BigRational::from_integer(e.into()))).collect() }
    }

    pub fn principal(field: &QuadField, x: &FieldElement) -> LogDivisor {
        LogDivisor::from_ideal(&FracIdeal::principal(field, x))
    }

    pub fn coeff(&self, v: &Place) -> BigRational {
        self.coeffs.get(v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_at(&mut self, v: &Place, c: &BigRational) {
        let n = self.coeff(v) + c;
        if n.is_zero() {
            self.coeffs.remove(v);
        } else {
            self.coeffs.insert(v.clone(), n);
        }
    }

    pub fn add(&self, o: &LogDivisor) -> LogDivisor {
        let mut d = self.clone();
        for (v, c) in &o.coeffs {
            d.add_at(v, c);
        }
        d
    }

    pub fn neg(&self) -> LogDivisor {
        LogDivisor { coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &LogDivisor) -> LogDivisor {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigRational) -> LogDivisor {
        if k.is_zero() {
            return LogDivisor::zero();
        }
        LogDivisor { coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// The divisor as an ideal, if integral.
    pub fn to_ideal(&self) -> Option<FracIdeal> {
        if !self.is_integral() {
            return None;
        }
        let mut i = FracIdeal::one();
        for (v, c) in &self.coeffs {
            i = i.mul(&FracIdeal::prime_pow(v, c.to_integer().to_i64()?));
        }
        Some(i)
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.coeffs.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Asserts every denominator divides `bound`.
    pub fn check_denominators(&self, bound: u64) -> Result<()> {
        let b = BigInt::from(bound);
        match self.coeffs.iter().find(|(_, c)| !(&b % c.denom()).is_zero()) {
            None => Ok(()),
            Some((v, c)) => {
                Err(Error::Inconsistent(format!("coefficient {} at {} exceeds denominator bound {}", c, v, bound)))
            }
        }
    }

    /// Drops the coefficients at the given places.
    pub fn away_from(&self, s: &[Place]) -> LogDivisor {
        LogDivisor {
            coeffs: self.coeffs.iter().filter(|(v, _)| !s.contains(v)).map(|(v, c)| (v.clone(), c.clone())).collect(),
        }
    }

    pub fn to_json(&self, s: &[Place]) -> serde_json::Value {
        let coeffs: Vec<_> = self
            .coeffs
            .iter()
            .map(|(v, c)| json!({"place": v.to_string(), "num": c.numer().to_string(), "den": c.denom().to_string()}))
            .collect();
        json!({"S": s.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "coeffs": coeffs})
    }
}

impl fmt::Display for LogDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (v, c)) in self.coeffs.iter().enumerate() {
            let (sign, a) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {} ", sign)?,
            }
            if a.is_one() {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{} {}", a, v)?;
            }
        }
        Ok(())
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(c: &BigRational) -> BigRational {
    c - BigRational::from_integer(c.floor().to_integer())
}

/// The ambient group `logPic(X, S)` for a quadratic field.
#[derive(Clone, Debug)]
pub struct LogPic {
    pub field: QuadField,
    pub s: Vec<Place>,
    pub sdata: SClassData,
}

/// Generators of `logPic(X, S)[p]` following `0 → ⊕(ℤ/p) → logPic[p] → Cl(O_{K,S})[p] → 0`.
#[derive(Clone, Debug)]
pub struct LogPicTorsion {
    pub p: u64,
    /// `(1/p)·div(ε)` for a basis `ε` of the `S`-units modulo units.
    pub local: Vec<LogDivisor>,
    /// Lifts `I_c − (1/p)·Σ k_v v` of a basis of `Cl(O_{K,S})[p]`.
    pub class_lifts: Vec<LogDivisor>,
}

impl LogPicTorsion {
    pub fn generators(&self) -> Vec<LogDivisor> {
        self.local.iter().chain(self.class_lifts.iter()).cloned().collect()
    }

    pub fn dim(&self) -> usize {
        self.local.len() + self.class_lifts.len()
    }
}

impl LogPic {
    pub fn new(field: &QuadField, s: &[Place]) -> Result<LogPic> {
        Ok(LogPic { field: field.clone(), s: s.to_vec(), sdata: SClassData::new(field, s)? })
    }

    /// Checks the integrality promise away from `S`.
    pub fn element(&self, d: LogDivisor) -> Result<LogDivisor> {
        match d.coeffs.iter().find(|(v, c)| !self.s.contains(v) && !c.is_integer()) {
            None => Ok(d),
            Some((v, c)) => Err(Error::Input(format!("non-integral coefficient {} at {} outside S", c, v))),
        }
    }

    pub fn is_zero(&self, d: &LogDivisor) -> bool {
        match d.to_ideal() {
            Some(i) => is_principal(&self.field, &i).is_some(),
            None => false,
        }
    }

    pub fn equal(&self, a: &LogDivisor, b: &LogDivisor) -> bool {
        self.is_zero(&a.sub(b))
    }

    /// Fractional parts of the coefficients at `S`.
    pub fn nu(&self, d: &LogDivisor) -> Vec<BigRational> {
        self.s.iter().map(|v| frac(&d.coeff(v))).collect()
    }

    /// The class in `Cl(O_{K,S})` of the part away from `S`.
    pub fn project_to_s_class_group(&self, d: &LogDivisor) -> Result<Vec<u64>> {
        let i =
            d.away_from(&self.s).to_ideal().ok_or_else(|| Error::Input("non-integral coefficient outside S".into()))?;
        Ok(self.sdata.s_class_coords(&i))
    }

    /// Invariants of `Cl(O_{K,S})`, in the order of [`project_to_s_class_group`](Self::project_to_s_class_group).
    pub fn s_class_invariants(&self) -> Vec<u64> {
        self.sdata.s_class_group().0
    }

    /// The class of `Σ n_v v` in `Cl(K)/p`, as coordinates on the factors of order divisible by `p`.
    pub fn theta(&self, residues: &[u64], p: u64) -> Vec<u64> {
        let i = self
            .s
            .iter()
            .zip(residues)
            .fold(FracIdeal::one(), |acc, (v, &n)| acc.mul(&FracIdeal::prime_pow(v, n as i64)));
        let cl = &self.sdata.cl;
        cl.dlog(&i).iter().zip(&cl.invariants).filter(|(_, d)| *d % p == 0).map(|(c, _)| c % p).collect()
    }

    /// `dim im θ`.
    pub fn theta_rank(&self, p: u64) -> usize {
        let rows: Vec<Vec<u64>> = (0..self.s.len())
            .map(|i| {
                let mut e = vec![0; self.s.len()];
                e[i] = 1;
                self.theta(&e, p)
            })
            .collect();
        crate::abelian::rank_mod_p(&rows, p)
    }

    /// `γ` with `div(γ) = p·d`, for a `p`-torsion class; unique up to units and `p`-th powers.
    pub fn kummer_element(&self, d: &LogDivisor, p: u64) -> Result<FieldElement> {
        let pd = d.scale(&BigRational::from_integer(p.into()));
        let i = pd.to_ideal().ok_or_else(|| Error::Input("class is not p-torsion: p·d is not integral".into()))?;
        is_principal(&self.field, &i).ok_or_else(|| Error::Input("class is not p-torsion: p·d is not principal".into()))
    }

    /// `F_p`-rank of the subgroup of `logPic[p]` spanned by `ds`.
    pub fn rank(&self, ds: &[LogDivisor], p: u64) -> Result<usize> {
        let units = UnitGroup::new(&self.field).mod_p_generators(&self.field, p);
        let mut xs = units.clone();
        for d in ds {
            xs.push(self.kummer_element(d, p)?);
        }
        Ok(rank_in_k_mod_p(&self.field, &xs, p) - rank_in_k_mod_p(&self.field, &units, p))
    }

    pub fn torsion_presentation(&self, p: u64) -> LogPicTorsion {
        let pinv = BigRational::new(BigInt::one(), p.into());
        let local = self
            .sdata
            .s_unit_generators()
            .iter()
            .map(|(eps, _)| LogDivisor::principal(&self.field, eps).scale(&pinv))
            .collect();
        let class_lifts = self
            .sdata
            .s_class_p_torsion(p)
            .iter()
            .map(|ic| {
                let (_, k) = self.sdata.class_generator(ic, p);
                let s_part = self.s.iter().zip(&k).fold(LogDivisor::zero(), |acc, (v, &e)| {
                    acc.add(&LogDivisor::single(v, BigRational::from_integer(e.into())))
                });
                LogDivisor::from_ideal(ic).sub(&s_part.scale(&pinv))
            })
            .collect();
        LogPicTorsion { p, local, class_lifts }
    }

    /// `#S + dim Cl(O_{K,S})[p]`.
    pub fn torsion_dim(&self, p: u64) -> usize {
        self.s.len() + self.s_class_invariants().iter().filter(|d| *d % p == 0).count()
    }

    /// Canonical form: fractional parts at `S` and the class in `Cl(K)` of what remains.
    /// Two elements are equal exactly when their normal forms agree.
    pub fn normal_form(&self, d: &LogDivisor) -> Result<(Vec<BigRational>, Vec<u64>)> {
        let d = self.element(d.clone())?;
        let nu = self.nu(&d);
        let mut rest = d;
        for (v, c) in self.s.iter().zip(&nu) {
            rest.add_at(v, &-c);
        }
        let i = rest.to_ideal().expect("integral after removing fractional parts");
        Ok((nu, self.sdata.cl.dlog(&i)))
    }

    /// A readable representative: the fractional parts at `S`, plus an
    /// integral ideal of the remaining class when it is nontrivial.
    pub fn display(&self, d: &LogDivisor) -> Result<String> {
        let (nu, cls) = self.normal_form(d)?;
        let mut frac_part = LogDivisor::zero();
        for (v, c) in self.s.iter().zip(&nu) {
            frac_part.add_at(v, c);
        }
        let mut out = if frac_part.coeffs.is_empty() { String::new() } else { frac_part.to_string() };
        if cls.iter().any(|&c| c != 0) {
            let cl = &self.sdata.cl;
            let ideal = cls.iter().zip(&cl.generators).fold(FracIdeal::one(), |acc, (&k, g)| acc.mul(&g.pow(k as i64)));
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("[{}]", LogDivisor::from_ideal(&ideal)));
        }
        if out.is_empty() {
            out.push('0');
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn field(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    fn places(k: &QuadField, l: u64) -> Vec<Place> {
        k.places_above(l).unwrap()
    }

    #[test]
    fn principal_divisors_vanish() {
        let k = field(-79);
        let lp = LogPic::new(&k, &[]).unwrap();
        for s in ["3+sqrt(-79)", "7/2-1/3*sqrt(-79)", "11"] {
            let x = k.parse(s).unwrap();
            assert!(lp.is_zero(&LogDivisor::principal(&k, &x)));
        }
        let ps = places(&k, 2);
        let d = LogDivisor::single(&ps[0], rat(1, 1)).add(&LogDivisor::single(&ps[1], rat(1, 1)));
        assert!(lp.is_zero(&d.sub(&LogDivisor::principal(&k, &k.int(2)))));
        assert!(!lp.is_zero(&LogDivisor::single(&ps[0], rat(1, 1))));
        assert!(!lp.is_zero(&LogDivisor::single(&ps[0], rat(1, 5))));
    }

    #[test]
    fn nu_is_additive_and_kills_integral_divisors() {
        let k = field(-79);
        let ps = places(&k, 2);
        let lp = LogPic::new(&k, &ps).unwrap();
        let a = LogDivisor::single(&ps[0], rat(4, 5)).add(&LogDivisor::single(&ps[1], rat(4, 5)));
        let b = LogDivisor::single(&ps[0], rat(7, 4)).add(&LogDivisor::single(&ps[1], rat(-1, 4)));
        assert_eq!(lp.nu(&a), vec![rat(4, 5), rat(4, 5)]);
        let sum: Vec<_> = lp.nu(&a).iter().zip(lp.nu(&b)).map(|(x, y)| frac(&(x + y))).collect();
        assert_eq!(lp.nu(&a.add(&b)), sum);
        assert!(lp.nu(&LogDivisor::single(&ps[0], rat(-3, 1))).iter().all(|x| x.is_zero()));
        assert_eq!(a.to_string(), format!("4/5 {} + 4/5 {}", ps[0], ps[1]));
    }

    #[test]
    fn projection_is_a_homomorphism() {
        let k = field(-47);
        let s = places(&k, 2);
        let lp = LogPic::new(&k, &s[..1]).unwrap();
        let q3 = places(&k, 3);
        let a = LogDivisor::single(&q3[0], rat(1, 1)).add(&LogDivisor::single(&s[0], rat(2, 5)));
        let b = LogDivisor::single(&q3[1], rat(2, 1));
        let inv = lp.s_class_invariants();
        let pa = lp.project_to_s_class_group(&a).unwrap();
        let pb = lp.project_to_s_class_group(&b).unwrap();
        let pab = lp.project_to_s_class_group(&a.add(&b)).unwrap();
        let want: Vec<u64> = pa.iter().zip(&pb).zip(&inv).map(|((x, y), d)| (x + y) % d).collect();
        assert_eq!(pab, want);
        assert!(lp.project_to_s_class_group(&LogDivisor::single(&s[0], rat(3, 5))).unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn theta_examples() {
        let k = field(-47);
        let s = places(&k, 11);
        assert_eq!(s.len(), 1);
        let lp = LogPic::new(&k, &s).unwrap();
        assert_eq!(lp.theta(&[1], 5), vec![0]);
        assert_eq!(lp.theta_rank(5), 0);
        // 2 splits in Q(√−47) with class of order 5
        let s2 = places(&k, 2);
        let lp2 = LogPic::new(&k, &s2[..1]).unwrap();
        assert_ne!(lp2.theta(&[1], 5), vec![0]);
        assert_eq!(lp2.theta_rank(5), 1);
        assert_eq!(lp2.theta(&[0], 5), vec![0]);
    }

    fn check_presentation(k: &QuadField, s: &[Place], p: u64) -> usize {
        let lp = LogPic::new(k, s).unwrap();
        let t = lp.torsion_presentation(p);
        let pq = BigRational::from_integer(p.into());
        for g in t.generators() {
            assert!(lp.is_zero(&g.scale(&pq)), "p·g = 0 for {}", g);
            lp.element(g.clone()).unwrap();
        }
        let h = lp.sdata.cl.p_rank(p);
        let dim = lp.torsion_dim(p);
        assert_eq!(dim, h + s.len() - lp.theta_rank(p));
        assert_eq!(t.dim(), dim);
        assert_eq!(lp.rank(&t.generators(), p).unwrap(), dim, "rank over {:?}", s);
        dim
    }

    #[test]
    fn torsion_presentation_examples() {
        let k = field(-47);
        assert_eq!(check_presentation(&k, &places(&k, 11), 5), 2);
        let k = field(8);
        assert_eq!(check_presentation(&k, &places(&k, 11), 5), 1);
        let k = field(-7);
        assert_eq!(check_presentation(&k, &[], 5), 0);
    }

    #[test]
    fn exactness_over_many_triples() {
        let mut n = 0;
        for (d, ls, p) in [
            (-47, vec![11], 5),
            (-47, vec![2], 5),
            (-47, vec![2, 3], 5),
            (-79, vec![2], 5),
            (-79, vec![2, 79], 5),
            (-23, vec![2], 3),
            (-23, vec![3], 3),
            (-31, vec![2], 3),
            (-31, vec![5, 7], 3),
            (-59, vec![3], 3),
            (-71, vec![2], 7),
            (-71, vec![3], 7),
            (-71, vec![5], 5),
            (-4, vec![5], 5),
            (8, vec![7], 7),
            (12, vec![11], 5),
            (-83, vec![3], 3),
            (-107, vec![3], 3),
            (-199, vec![2], 3),
            (-199, vec![2, 5], 3),
            (229, vec![3], 3),
            (-151, vec![2], 7),
        ] {
            let k = field(d);
            let s: Vec<Place> = ls.iter().flat_map(|&l| places(&k, l)).collect();
            check_presentation(&k, &s, p);
            n += 1;
        }
        assert!(n >= 20);
    }

    #[test]
    fn class_group_torsion_includes_with_trivial_nu() {
        let k = field(-47);
        let s = places(&k, 11);
        let lp = LogPic::new(&k, &s).unwrap();
        let cl = &lp.sdata.cl;
        let j = cl.generators[0].clone();
        let d = LogDivisor::from_ideal(&j);
        assert!(lp.nu(&d).iter().all(|c| c.is_zero()));
        // natural map Cl(K)[5] → Cl(O_S)[5] is an isomorphism here since (11) is principal
        let c = lp.project_to_s_class_group(&d).unwrap();
        assert!(c.iter().any(|&x| x != 0));
        // Cl(⟨S⟩)[p] = 0, so Cl(K)[p] together with the local part is a basis
        let t = lp.torsion_presentation(5);
        let mut basis = t.local.clone();
        basis.push(d);
        assert_eq!(lp.rank(&basis, 5).unwrap(), t.dim());
    }

    #[test]
    fn denominators_and_integrality() {
        let k = field(-47);
        let s = places(&k, 11);
        let lp = LogPic::new(&k, &s).unwrap();
        let q = places(&k, 3);
        assert!(lp.element(LogDivisor::single(&q[0], rat(1, 5))).is_err());
        let d = LogDivisor::single(&s[0], rat(1, 5));
        assert!(lp.element(d.clone()).is_ok());
        assert!(d.check_denominators(10).is_ok());
        assert!(d.check_denominators(3).is_err());
        let j = d.to_json(&s);
        assert_eq!(j["coeffs"][0]["den"], "5");
    }
}
