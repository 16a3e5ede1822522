//! The degree-`p` isogeny `φ: E → E'` with `ker φ̂ = ⟨P⟩`, Néron scalings, and
//! the forward/backward classification of places.

pub mod poly;
mod velu;

pub use velu::{division_polynomials, dual_kernel, KernelIsogeny};

use serde::Serialize;
use serde_json::json;

use crate::arith::{is_prime_u64, rat_support};
use crate::ellcurve::{local_data, Kodaira, LocalData, Point, WeierstrassModel};
use crate::error::{Error, Result};
use crate::qfield::local::{local_degree, local_mu_p};
use crate::qfield::{FieldElement, Place, QuadField};
use num_rational::BigRational;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaceClass {
    ForwardSplitMult,
    BackwardSplitMult,
    BackwardNonsplitMult,
    ForwardAtP,
    BackwardAtP,
    Neutral,
}

impl PlaceClass {
    pub fn in_s1(&self) -> bool {
        *self == PlaceClass::ForwardSplitMult
    }

    pub fn in_s2(&self) -> bool {
        matches!(self, PlaceClass::BackwardSplitMult | PlaceClass::BackwardNonsplitMult | PlaceClass::BackwardAtP)
    }
}

/// Which of the two isogenies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Phi,
    PhiHat,
}

#[derive(Clone, Debug)]
pub struct PlaceInfo {
    pub place: Place,
    pub above_p: bool,
    /// Local data of `E`.
    pub ld: LocalData,
    /// Local data of `E'`.
    pub ld_prime: LocalData,
    pub a_phi: i64,
    pub a_phihat: i64,
    pub class: PlaceClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<Hypothesis>,
    pub warnings: Vec<String>,
}

impl HypothesisReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|h| h.ok)
    }

    pub fn get(&self, name: &str) -> Option<&Hypothesis> {
        self.checks.iter().find(|h| h.name == name)
    }

    /// The first violated hypothesis as an error.
    pub fn require(&self) -> Result<()> {
        match self.checks.iter().find(|h| !h.ok) {
            None => Ok(()),
            Some(h) => Err(Error::Hypothesis { name: h.name.into(), detail: h.detail.clone() }),
        }
    }
}

pub const HYP_ODD: &str = "p-odd-prime";
pub const HYP_ORDER: &str = "P-order-p";
pub const HYP_NO_IV: &str = "no-IV-fibre-at-p3";
pub const HYP_AT_P: &str = "forward-or-backward-above-p";
pub const HYP_MU_P: &str = "no-mu-p-at-backward-p";

#[derive(Clone, Debug)]
pub struct IsogenyContext {
    pub p: u64,
    pub field: QuadField,
    pub e_prime: WeierstrassModel,
    pub pt: Point,
    pub e: WeierstrassModel,
    /// `φ̂: E' → E`, normalized.
    pub phihat: KernelIsogeny,
    /// `φ: E → E'` with `φ ∘ φ̂ = [p]`.
    pub phi: KernelIsogeny,
    pub places: Vec<PlaceInfo>,
    pub s1: Vec<Place>,
    pub s2: Vec<Place>,
    pub hypotheses: HypothesisReport,
}

/// `E = E'/⟨P⟩` with the map `φ̂`.
pub fn velu_quotient(e_prime: &WeierstrassModel, pt: &Point, p: u64) -> Result<(WeierstrassModel, KernelIsogeny)> {
    let iso = KernelIsogeny::from_point(e_prime, pt, p)?;
    Ok((iso.codomain.clone(), iso))
}

/// `φ: E → E'` from the kernel polynomial of `φ̂(E'[p])`.
pub fn dual_isogeny(phihat: &KernelIsogeny) -> Result<KernelIsogeny> {
    let ker = dual_kernel(phihat)?;
    let p = FieldElement::from_int(phihat.domain.m(), phihat.degree as i64);
    KernelIsogeny::new(&phihat.codomain, ker).with_target(&phihat.domain, &p)
}

/// Places dividing `p` or the discriminant.
fn relevant_places(field: &QuadField, e: &WeierstrassModel, p: u64) -> Result<Vec<Place>> {
    let mut ls: Vec<u64> = rat_support(&e.disc.norm()).iter().filter_map(|l| l.to_u64()).collect();
    for c in e.a_invariants() {
        ls.extend(rat_support(&BigRational::from_integer(c.denominator())).iter().filter_map(|l| l.to_u64()));
    }
    ls.push(p);
    ls.sort_unstable();
    ls.dedup();
    let mut out = vec![];
    for l in ls {
        out.extend(field.places_above(l)?);
    }
    Ok(out)
}

/// Classification from local data and scalings.
pub fn classify(
    p: u64,
    ld: &LocalData,
    ldp: &LocalData,
    a_phi: i64,
    a_phihat: i64,
    above_p: bool,
) -> Result<PlaceClass> {
    let v = &ld.place;
    if above_p {
        return Ok(if a_phihat == 0 {
            if ld.split == Some(true) {
                PlaceClass::ForwardSplitMult
            } else {
                PlaceClass::ForwardAtP
            }
        } else if a_phi == 0 {
            PlaceClass::BackwardAtP
        } else {
            PlaceClass::Neutral
        });
    }
    let (m, mp, p) = (ld.m as u64, ldp.m as u64, p);
    match ld.split {
        None => Ok(PlaceClass::Neutral),
        Some(true) if p * m == mp => Ok(PlaceClass::ForwardSplitMult),
        Some(true) if m == p * mp => Ok(PlaceClass::BackwardSplitMult),
        Some(false) if m == p * mp => Ok(PlaceClass::BackwardNonsplitMult),
        Some(false) if p * m == mp => Err(Error::Inconsistent(format!("forward non-split multiplicative place {}", v))),
        _ => Err(Error::Inconsistent(format!("component counts {} and {} at {} are not related by {}", m, mp, v, p))),
    }
}

impl IsogenyContext {
    pub fn new(e_prime: &WeierstrassModel, pt: &Point, p: u64) -> Result<IsogenyContext> {
        if p % 2 == 0 || !is_prime_u64(p) {
            return Err(Error::Hypothesis { name: HYP_ODD.into(), detail: format!("{} is not an odd prime", p) });
        }
        if !e_prime.is_on(pt) || e_prime.order(pt, p) != Some(p) {
            return Err(Error::Hypothesis {
                name: HYP_ORDER.into(),
                detail: format!("{} is not a point of order {}", pt, p),
            });
        }
        let (e, phihat) = velu_quotient(e_prime, pt, p)?;
        let phi = dual_isogeny(&phihat)?;
        let field = e_prime.field.clone();
        let mut places = vec![];
        for v in relevant_places(&field, e_prime, p)? {
            places.push(Self::place_info(p, &e, e_prime, &v)?);
        }
        let s1: Vec<Place> = places.iter().filter(|i| i.class.in_s1()).map(|i| i.place.clone()).collect();
        let s2: Vec<Place> = places.iter().filter(|i| i.class.in_s2()).map(|i| i.place.clone()).collect();
        let mut ctx = IsogenyContext {
            p,
            field,
            e_prime: e_prime.clone(),
            pt: pt.clone(),
            e,
            phihat,
            phi,
            places,
            s1,
            s2,
            hypotheses: HypothesisReport::default(),
        };
        ctx.hypotheses = ctx.check_hypotheses();
        Ok(ctx)
    }

    fn place_info(p: u64, e: &WeierstrassModel, e_prime: &WeierstrassModel, v: &Place) -> Result<PlaceInfo> {
        let ld = local_data(e, v);
        let ld_prime = local_data(e_prime, v);
        let above_p = v.l == p;
        let vp = if above_p { v.e() } else { 0 };
        let (a_phi, a_phihat) = neron_scalings(&ld, &ld_prime, vp);
        if a_phi < 0 || a_phihat < 0 {
            return Err(Error::Inconsistent(format!("negative Néron scaling at {}", v)));
        }
        let class = classify(p, &ld, &ld_prime, a_phi, a_phihat, above_p)?;
        Ok(PlaceInfo { place: v.clone(), above_p, ld, ld_prime, a_phi, a_phihat, class })
    }

    pub fn info(&self, v: &Place) -> Option<&PlaceInfo> {
        self.places.iter().find(|i| &i.place == v)
    }

    /// Local data at any place, computed on demand away from the table.
    pub fn local(&self, v: &Place) -> (LocalData, LocalData) {
        match self.info(v) {
            Some(i) => (i.ld.clone(), i.ld_prime.clone()),
            None => (local_data(&self.e, v), local_data(&self.e_prime, v)),
        }
    }

    pub fn neron_scaling(&self, which: Which, v: &Place) -> i64 {
        let (ld, ldp) = self.local(v);
        let vp = if v.l == self.p { v.e() } else { 0 };
        let (a, ah) = neron_scalings(&ld, &ldp, vp);
        match which {
            Which::Phi => a,
            Which::PhiHat => ah,
        }
    }

    pub fn classify_place(&self, v: &Place) -> Result<PlaceClass> {
        match self.info(v) {
            Some(i) => Ok(i.class),
            None => Self::place_info(self.p, &self.e, &self.e_prime, v).map(|i| i.class),
        }
    }

    pub fn build_s1_s2(&self) -> (Vec<Place>, Vec<Place>) {
        (self.s1.clone(), self.s2.clone())
    }

    pub fn check_hypotheses(&self) -> HypothesisReport {
        let mut r = HypothesisReport::default();
        r.checks.push(Hypothesis { name: HYP_ODD, ok: true, detail: format!("p = {}", self.p) });
        r.checks.push(Hypothesis {
            name: HYP_ORDER,
            ok: true,
            detail: format!("P = {} has order {}", self.pt, self.p),
        });
        let bad_iv: Vec<String> = if self.p == 3 {
            self.places
                .iter()
                .flat_map(|i| [(&i.ld, "E"), (&i.ld_prime, "E'")])
                .filter(|(ld, _)| matches!(ld.kodaira, Kodaira::IV | Kodaira::IVStar))
                .map(|(ld, c)| format!("{} of {} at {}", ld.kodaira, c, ld.place))
                .collect()
        } else {
            vec![]
        };
        r.checks.push(Hypothesis { name: HYP_NO_IV, ok: bad_iv.is_empty(), detail: bad_iv.join(", ") });
        let at_p: Vec<&PlaceInfo> = self.places.iter().filter(|i| i.above_p).collect();
        let neither: Vec<String> = at_p
            .iter()
            .filter(|i| i.a_phi > 0 && i.a_phihat > 0)
            .map(|i| format!("{} has a_phi = {}, a_phihat = {}", i.place, i.a_phi, i.a_phihat))
            .collect();
        r.checks.push(Hypothesis { name: HYP_AT_P, ok: neither.is_empty(), detail: neither.join(", ") });
        let mu: Vec<String> = at_p
            .iter()
            .filter(|i| i.class == PlaceClass::BackwardAtP && local_mu_p(&i.place, self.p))
            .map(|i| format!("mu_p lies in the completion at backward place {}", i.place))
            .collect();
        r.checks.push(Hypothesis { name: HYP_MU_P, ok: mu.is_empty(), detail: mu.join(", ") });
        for i in &at_p {
            if i.ld.kodaira.is_additive() || i.ld_prime.kodaira.is_additive() {
                r.warnings
                    .push(format!("additive reduction at {} above p: classified by Néron scalings only", i.place));
            }
        }
        r
    }

    /// `#E'(K_v)/φE(K_v)` or `#E(K_v)/φ̂E'(K_v)`.
    pub fn local_cokernel_order(&self, v: &Place, which: Which) -> Result<u64> {
        let i = self.info(v).ok_or_else(|| Error::Input(format!("unclassified place {}", v)))?;
        let q = v.norm();
        let (num, den) = match which {
            Which::Phi => {
                let mu = if local_mu_p(v, self.p) { self.p } else { 1 };
                (q.pow(i.a_phi as u32) * mu * i.ld_prime.c as u64, i.ld.c as u64)
            }
            Which::PhiHat => (q.pow(i.a_phihat as u32) * self.p * i.ld.c as u64, i.ld_prime.c as u64),
        };
        if num % den != 0 {
            return Err(Error::Inconsistent(format!("non-integral cokernel order at {}", v)));
        }
        Ok(num / den)
    }

    /// Case formula from the classification at `v | p`.
    pub fn cokernel_order_at_p(&self, v: &Place, which: Which) -> Result<u64> {
        let i = self
            .info(v)
            .filter(|i| i.above_p)
            .ok_or_else(|| Error::Input(format!("{} is not a classified place above p", v)))?;
        let n = local_degree(v);
        let p = self.p;
        Ok(match (which, i.class) {
            (Which::Phi, PlaceClass::ForwardSplitMult) => p.pow(n + 1),
            (Which::Phi, PlaceClass::BackwardAtP) => 1,
            (Which::Phi, _) => p.pow(n),
            (Which::PhiHat, PlaceClass::ForwardSplitMult) => 1,
            (Which::PhiHat, PlaceClass::BackwardAtP) => p.pow(n + 1),
            (Which::PhiHat, _) => p,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let places: Vec<_> = self
            .places
            .iter()
            .map(|i| {
                json!({
                    "v": i.place.to_string(),
                    "kodaira": i.ld.kodaira,
                    "kodaira'": i.ld_prime.kodaira,
                    "class": i.class,
                    "a_phi": i.a_phi,
                    "a_phihat": i.a_phihat,
                    "c": i.ld.c,
                    "c'": i.ld_prime.c,
                })
            })
            .collect();
        json!({
            "p": self.p,
            "curves": {"E": self.e.to_string(), "E'": self.e_prime.to_string()},
            "P": self.pt.to_string(),
            "places": places,
            "S1": self.s1.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "S2": self.s2.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "hypotheses": self.hypotheses,
        })
    }
}

/// `(a_v(φ), a_v(φ̂))` from the minimalizing scalings; `φ̂*ω = ω'` and `φ*ω' = pω` on the given models.
fn neron_scalings(ld: &LocalData, ldp: &LocalData, vp: i64) -> (i64, i64) {
    let ah = ld.vu - ldp.vu;
    (vp - ah, ah)
}
