//! The logarithmic class group pairing computed from denominator ideals and
//! fibral corrections, and the class-invariant map `ψ(Q) = ⟨P, Q⟩^log`.

pub mod fibral;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::arith::rat_support;
use crate::ellcurve::{
    component_index, e_v_of_o, e_v_of_q, local_data, ComponentIndex, Kodaira, LocalData, Point, WeierstrassModel,
};
use crate::error::{Error, Result};
use crate::isogeny::IsogenyContext;
use crate::logpic::{frac, LogDivisor, LogPic};
use crate::qfield::{Place, QuadField};

pub use fibral::{fibral_coeffs, g_q, intersection_matrix, verify_gq, FibralCorrection};

/// `⟨Q, R⟩^log` with its two parts kept apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingResult {
    pub total: LogDivisor,
    /// `e(Q+R) − e(Q) − e(R) + e(O)`.
    pub denominator: LogDivisor,
    /// `(−R)*[F_Q]` at each bad place where it is nonzero.
    pub fibral: BTreeMap<Place, BigRational>,
    /// Non-split `I_n` places with `n` even that contributed.
    pub flagged: Vec<Place>,
}

impl PairingResult {
    pub fn to_json(&self, z: &[Place]) -> serde_json::Value {
        let fib: Vec<_> =
            self.fibral.iter().map(|(v, c)| json!({"place": v.to_string(), "value": c.to_string()})).collect();
        json!({
            "total": self.total.to_json(z),
            "denominator_part": self.denominator.to_json(z),
            "fibral_part": fib,
            "flagged_nonsplit_even": self.flagged.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Local data of a curve at every place where it is bad or the model is not minimal.
#[derive(Clone, Debug)]
pub struct CurvePairing {
    pub field: QuadField,
    pub e: WeierstrassModel,
    pub locals: Vec<LocalData>,
    /// Places where the `I_n` labelling is reversed.
    flipped: BTreeSet<Place>,
}

fn support_places(field: &QuadField, x: &BigRational) -> Result<Vec<Place>> {
    let mut out = vec![];
    for l in rat_support(x) {
        let l = l.to_u64().ok_or_else(|| Error::Bound(format!("prime {} too large", l)))?;
        out.extend(field.places_above(l)?);
    }
    Ok(out)
}

impl CurvePairing {
    pub fn new(e: &WeierstrassModel) -> Result<CurvePairing> {
        let field = e.field.clone();
        let mut places = support_places(&field, &e.disc.norm())?;
        for c in e.a_invariants() {
            places.extend(support_places(&field, &BigRational::from_integer(c.denominator()))?);
        }
        places.sort();
        places.dedup();
        let locals = places.iter().map(|v| local_data(e, v)).collect();
        Ok(CurvePairing { field, e: e.clone(), locals, flipped: BTreeSet::new() })
    }

    /// The same curve with the `I_n` orientation at `v` reversed.
    pub fn with_flipped(&self, v: &Place) -> CurvePairing {
        let mut c = self.clone();
        if !c.flipped.remove(v) {
            c.flipped.insert(v.clone());
        }
        c
    }

    /// Places of bad reduction `Z`.
    pub fn bad_places(&self) -> Vec<Place> {
        self.locals.iter().filter(|ld| !ld.is_good()).map(|ld| ld.place.clone()).collect()
    }

    pub fn local(&self, v: &Place) -> Option<&LocalData> {
        self.locals.iter().find(|ld| &ld.place == v)
    }

    /// `logPic(X, Z)`.
    pub fn logpic(&self) -> Result<LogPic> {
        LogPic::new(&self.field, &self.bad_places())
    }

    /// `e(Q) = Σ e_v(Q)·v`, and `e(O) = Σ v(u_v)·v`.
    pub fn denominator_divisor(&self, q: &Point) -> Result<LogDivisor> {
        let mut d = LogDivisor::zero();
        let x = match q {
            Point::Infinity => {
                for ld in &self.locals {
                    d.add_at(&ld.place, &BigRational::from_integer(e_v_of_o(ld).into()));
                }
                return Ok(d);
            }
            Point::Affine(x, _) => x,
        };
        for ld in &self.locals {
            d.add_at(&ld.place, &BigRational::from_integer(e_v_of_q(ld, &self.e, q)?.into()));
        }
        if x.is_zero() {
            return Ok(d);
        }
        for v in support_places(&self.field, &BigRational::from_integer(x.denominator()))? {
            if self.local(&v).is_some() {
                continue;
            }
            let vx = v.valuation(x);
            if vx < 0 {
                if vx % 2 != 0 {
                    return Err(Error::Inconsistent(format!("odd valuation of x at {}", v)));
                }
                d.add_at(&v, &BigRational::from_integer((-vx / 2).into()));
            }
        }
        Ok(d)
    }

    /// Component met by `q` at the bad place of `ld`, after any orientation flip.
    pub fn component(&self, ld: &LocalData, q: &Point) -> Result<ComponentIndex> {
        let c = component_index(ld, &self.e, q)?;
        Ok(match ld.kodaira {
            Kodaira::I(_) if self.flipped.contains(&ld.place) => c.neg(),
            _ => c,
        })
    }

    fn bad_local(&self, v: &Place) -> Result<&LocalData> {
        self.local(v)
            .filter(|ld| !ld.is_good())
            .ok_or_else(|| Error::Input(format!("{} is not a place of bad reduction", v)))
    }

    /// `F_Q` at `v`.
    pub fn fibral_f(&self, q: &Point, v: &Place) -> Result<FibralCorrection> {
        let ld = self.bad_local(v)?;
        FibralCorrection::new(v, ld.kodaira, self.component(ld, q)?.label)
    }

    /// `(−R)*[F_Q]` at `v`: the coefficient of `F_Q` on the component of `−R`.
    pub fn pullback_fibral(&self, q: &Point, r: &Point, v: &Place) -> Result<BigRational> {
        let ld = self.bad_local(v)?;
        let f = self.fibral_f(q, v)?;
        Ok(f.at(self.component(ld, &self.e.neg(r))?.label))
    }

    pub fn log_pairing(&self, q: &Point, r: &Point) -> Result<PairingResult> {
        let e = |pt: &Point| self.denominator_divisor(pt);
        let qr = self.e.add(q, r);
        let denominator = e(&qr)?.sub(&e(q)?).sub(&e(r)?).add(&e(&Point::Infinity)?);
        let mut total = denominator.clone();
        let mut fibral = BTreeMap::new();
        let mut flagged = vec![];
        for ld in self.locals.iter().filter(|ld| !ld.is_good()) {
            let c = self.pullback_fibral(q, r, &ld.place)?;
            if c.is_zero() {
                continue;
            }
            if let (Kodaira::I(n), Some(false)) = (ld.kodaira, ld.split) {
                if n % 2 == 0 {
                    flagged.push(ld.place.clone());
                }
            }
            total.add_at(&ld.place, &c);
            fibral.insert(ld.place.clone(), c);
        }
        Ok(PairingResult { total, denominator, fibral, flagged })
    }

    /// Local monodromy pairings in `ℚ/ℤ` at the bad places, from component labels.
    pub fn monodromy_pairing(&self, q: &Point, r: &Point) -> Result<BTreeMap<Place, BigRational>> {
        let mut out = BTreeMap::new();
        for ld in self.locals.iter().filter(|ld| !ld.is_good()) {
            let val = match ld.kodaira {
                Kodaira::I(n) => {
                    let (j, k) = (self.component(ld, r)?.label, self.component(ld, q)?.label);
                    frac(&BigRational::new((j as u64 * k as u64).into(), n.into()))
                }
                _ => frac(&self.pullback_fibral(q, r, &ld.place)?),
            };
            out.insert(ld.place.clone(), val);
        }
        Ok(out)
    }

    /// `⟨Q, R⟩^cl_S` as coordinates in `Cl(O_{K,S})`.
    pub fn class_pairing_s(&self, q: &Point, r: &Point, s: &[Place]) -> Result<Vec<u64>> {
        let d = self.log_pairing(q, r)?.total;
        let lp = LogPic::new(&self.field, s)?;
        lp.project_to_s_class_group(&d)
            .map_err(|_| Error::Input(format!("points are not monodromy-orthogonal outside S: {}", d.away_from(s))))
    }
}

/// `ψ(Q) = ⟨P, Q⟩^log` in `logPic(X, S₁)[p]`, for `Q ∈ E'(K)`.
pub fn psi(ctx: &IsogenyContext, q: &Point) -> Result<LogDivisor> {
    psi_with(&CurvePairing::new(&ctx.e_prime)?, ctx, q)
}

/// As [`psi`], reusing the local data of `E'`.
pub fn psi_with(cp: &CurvePairing, ctx: &IsogenyContext, q: &Point) -> Result<LogDivisor> {
    let d = cp.log_pairing(&ctx.pt, q)?.total;
    let lp = LogPic::new(&ctx.field, &ctx.s1)?;
    let d = lp.element(d).map_err(|e| Error::Inconsistent(format!("ψ(Q) is not supported on S1: {}", e)))?;
    lp.kummer_element(&d, ctx.p).map_err(|e| Error::Inconsistent(format!("ψ(Q) is not {}-torsion: {}", ctx.p, e)))?;
    Ok(d)
}

/// `ψ^mono(Q)`: the fractional parts of `ψ(Q)` at the places of `S₁`.
pub fn psi_mono(ctx: &IsogenyContext, q: &Point) -> Result<Vec<BigRational>> {
    let d = psi(ctx, q)?;
    Ok(LogPic::new(&ctx.field, &ctx.s1)?.nu(&d))
}

/// `ψ^cl_{S₁}(Q)` in `Cl(O_{K,S₁})`.
pub fn psi_cl_s1(ctx: &IsogenyContext, q: &Point) -> Result<Vec<u64>> {
    let d = psi(ctx, q)?;
    LogPic::new(&ctx.field, &ctx.s1)?.project_to_s_class_group(&d)
}
