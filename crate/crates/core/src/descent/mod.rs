//! `φ`-descent: the Selmer group inside `H¹(U₁, μ_p) ⊂ K^×/p`, dual dimensions,
//! the Kummer map, the factorization `ψ = ψ_Sel ∘ κ` and bounds for `Ш[φ]`.

pub mod kummer;
pub mod search;
#[cfg(test)]
mod tests;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::json;

use crate::abelian::kernel_mod_p;
use crate::ellcurve::Point;
use crate::error::{Error, Result};
use crate::isogeny::IsogenyContext;
use crate::logpic::{LogDivisor, LogPic};
use crate::pairing::CurvePairing;
use crate::qfield::local::{is_local_pth_power, local_degree, LocalUnitsModP};
use crate::qfield::selmer_basis::{rank_in_k_mod_p, FieldSelmerBasis};
use crate::qfield::units::UnitGroup;
use crate::qfield::{FieldElement, Place, QuadField};

pub use kummer::{KummerClass, KummerMethod, MillerFunction};
pub use search::{quadratic_point_search, SearchHit};

/// `Sel^φ(E/K)` as the kernel of localization `H¹(U₁, μ_p) → ⊕_{v ∈ S₂} O_v^×/p`.
#[derive(Clone, Debug)]
pub struct SelmerGroup {
    pub p: u64,
    pub s1: Vec<Place>,
    pub s2: Vec<Place>,
    /// Basis of `H¹(U₁, μ_p)`.
    pub h1_basis: Vec<FieldElement>,
    /// Rows are local coordinates at `S₂`, columns the `H¹` basis.
    pub matrix: Vec<Vec<u64>>,
    /// Kernel vectors in `H¹` coordinates.
    pub kernel: Vec<Vec<u64>>,
    pub basis: Vec<FieldElement>,
}

impl SelmerGroup {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Membership of a class of `K^×/p`: `p`-divisible valuations off `S₁`
    /// and locally a `p`-th power at `S₂`.
    pub fn contains(&self, x: &FieldElement) -> bool {
        in_h1(x, &self.s1, self.p) && self.s2.iter().all(|v| is_local_pth_power(x, v, self.p))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = |v: &[Place]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "S1": s(&self.s1),
            "S2": s(&self.s2),
            "h1_basis": self.h1_basis.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "matrix": self.matrix,
            "selmer_basis": self.basis.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Whether `v(x) ≡ 0 mod p` at every finite place outside `s`.
pub fn in_h1(x: &FieldElement, s: &[Place], p: u64) -> bool {
    let d = LogDivisor::principal(&QuadField::from_m(x.field_m()), x);
    d.away_from(s).coeffs.values().all(|c| (c.to_integer() % BigInt::from(p)) == BigInt::from(0))
}

fn combine(xs: &[FieldElement], k: &[u64], m: i64) -> FieldElement {
    xs.iter().zip(k).fold(FieldElement::one(m), |acc, (x, &e)| if e == 0 { acc } else { &acc * &x.pow(e as i64) })
}

pub fn selmer_phi(ctx: &IsogenyContext) -> Result<SelmerGroup> {
    let p = ctx.p;
    let m = ctx.field.m();
    let h1 = FieldSelmerBasis::new(&ctx.field, &ctx.s1, p)?.reps();
    let mut matrix = vec![];
    for v in &ctx.s2 {
        let loc = LocalUnitsModP::new(v, p);
        let cols: Vec<Vec<u64>> = h1.iter().map(|x| loc.coords(x)).collect();
        for r in 0..loc.dim {
            matrix.push(cols.iter().map(|c| c[r]).collect());
        }
    }
    let kernel = kernel_mod_p(&matrix, h1.len(), p);
    let basis = kernel.iter().map(|k| combine(&h1, k, m)).collect();
    Ok(SelmerGroup { p, s1: ctx.s1.clone(), s2: ctx.s2.clone(), h1_basis: h1, matrix, kernel, basis })
}

/// `n_v = [K_v : ℚ_p]` above `p`, else `1`.
pub fn n_v(v: &Place, p: u64) -> usize {
    if v.l == p {
        local_degree(v) as usize
    } else {
        1
    }
}

/// `dim O_v^×/p` for `v ∈ S₂`: `n_v` above `p` (no `μ_p` there by hypothesis),
/// and away from `p` one or zero as `μ_p ⊂ K_v` or not. The latter is zero at
/// backward non-split places, where `#k_v ≡ −1 mod p`.
pub fn s2_local_dim(v: &Place, p: u64) -> usize {
    if v.l == p {
        n_v(v, p)
    } else {
        ((v.norm() - 1) % p == 0) as usize
    }
}

fn defect(ctx: &IsogenyContext, local: impl Fn(&Place, u64) -> usize) -> i64 {
    let k = &ctx.field;
    let s2: usize = ctx.s2.iter().map(|v| local(v, ctx.p)).sum();
    ctx.s1.len() as i64 + k.infinite_places() as i64 - s2 as i64 + k.has_mu_p(ctx.p) as i64 - 1
}

/// `dim Sel^φ − dim Sel^φ̂ = #S₁ + #{v | ∞} − Σ_{S₂} dim O_v^×/p + dim μ_p(K) − 1`.
pub fn duality_defect(ctx: &IsogenyContext) -> i64 {
    defect(ctx, s2_local_dim)
}

/// The same count with `n_v = 1` at every `v ∈ S₂` away from `p`. It differs
/// from [`duality_defect`] exactly when `S₂` has backward non-split places.
pub fn duality_defect_uniform(ctx: &IsogenyContext) -> i64 {
    defect(ctx, n_v)
}

/// `dim Cl(O_{K,S₁})/p`.
pub fn s1_class_rank(ctx: &IsogenyContext) -> Result<usize> {
    let lp = LogPic::new(&ctx.field, &ctx.s1)?;
    Ok(lp.s_class_invariants().iter().filter(|d| *d % ctx.p == 0).count())
}

pub fn selmer_phihat_dim(ctx: &IsogenyContext, sel: &SelmerGroup) -> Result<usize> {
    let d = sel.dim() as i64 - duality_defect(ctx);
    if d < 0 {
        return Err(Error::Inconsistent(format!("negative dual Selmer dimension {}", d)));
    }
    let seq = selmer_phihat_dim_from_sequence(ctx, sel)? as i64;
    if seq != d {
        return Err(Error::Inconsistent(format!(
            "dual Selmer dimension {} differs from {} read off the exact sequence",
            d, seq
        )));
    }
    Ok(d as usize)
}

/// `dim Sel^φ̂` read off the exact sequence
/// `0 → Sel^φ → H¹(U₁, μ_p) → ⊕_{S₂} O_v^×/p → (Sel^φ̂)^∨ → Cl(O_{K,S₁})/p → 0`.
pub fn selmer_phihat_dim_from_sequence(ctx: &IsogenyContext, sel: &SelmerGroup) -> Result<usize> {
    let local: usize = ctx.s2.iter().map(|v| LocalUnitsModP::new(v, ctx.p).dim).sum();
    let rank = sel.h1_basis.len() - sel.dim();
    Ok(local - rank + s1_class_rank(ctx)?)
}

/// `dim Sel^p(E/K)` when `S₂ = ∅`, `S₁ ≠ ∅` and `dim Cl(O_{K,S₁})/p ≤ 1`.
pub fn sel_p_dim_if_applicable(ctx: &IsogenyContext) -> Result<Option<usize>> {
    if !ctx.s2.is_empty() || ctx.s1.is_empty() {
        return Ok(None);
    }
    let c = s1_class_rank(ctx)?;
    if c > 1 {
        return Ok(None);
    }
    Ok(Some(2 * c + ctx.s1.len() + ctx.field.infinite_places() - 2))
}

/// `ρ(x) = (1/p)·div(x)` in `logPic(X, S₁)[p]`.
pub fn psi_sel(ctx: &IsogenyContext, x: &FieldElement) -> Result<LogDivisor> {
    if !in_h1(x, &ctx.s1, ctx.p) {
        return Err(Error::Input(format!("{} is not in H^1(U_1, mu_{})", x, ctx.p)));
    }
    let d = LogDivisor::principal(&ctx.field, x);
    Ok(d.scale(&BigRational::new(BigInt::one(), ctx.p.into())))
}

/// Dimensions in the kernel–cokernel sequence of `ψ = ψ_Sel ∘ κ` on the
/// subgroup generated by `known` points, and the resulting bounds on `Ш(E/K)[φ]`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KernelCokernel {
    pub sel_phi: usize,
    /// `dim` of the image of the known points under `κ`.
    pub kappa_rank: usize,
    pub psi_rank: usize,
    pub logpic_torsion_dim: usize,
    pub ker_psi: usize,
    pub ker_psi_sel: usize,
    pub coker_psi: usize,
    pub coker_psi_sel: usize,
    pub sha_lower: usize,
    pub sha_upper: usize,
    /// `dim O_K^×/p`, the middle term when `S₂ = ∅`.
    pub units_mod_p: Option<usize>,
}

pub fn kernel_cokernel_report(ctx: &IsogenyContext, known: &[Point]) -> Result<KernelCokernel> {
    let p = ctx.p;
    let sel = selmer_phi(ctx)?;
    let f = MillerFunction::new(&ctx.e_prime, &ctx.pt, p)?;
    let kappas: Vec<FieldElement> = known.iter().map(|q| f.kummer(q).value).collect();
    for (q, x) in known.iter().zip(&kappas) {
        if !sel.contains(x) {
            return Err(Error::Inconsistent(format!("κ({}) is not in the Selmer group", q)));
        }
    }
    let kappa_rank = rank_in_k_mod_p(&ctx.field, &kappas, p);
    let lp = LogPic::new(&ctx.field, &ctx.s1)?;
    let cp = CurvePairing::new(&ctx.e_prime)?;
    let psis: Vec<LogDivisor> = known.iter().map(|q| crate::pairing::psi_with(&cp, ctx, q)).collect::<Result<_>>()?;
    let psi_rank = lp.rank(&psis, p)?;
    let rho: Vec<LogDivisor> = sel.basis.iter().map(|x| psi_sel(ctx, x)).collect::<Result<_>>()?;
    let im_sel = lp.rank(&rho, p)?;
    let t = lp.torsion_dim(p);
    let ker_psi = kappa_rank - psi_rank;
    let ker_psi_sel = sel.dim() - im_sel;
    let (coker_psi, coker_psi_sel) = (t - psi_rank, t - im_sel);
    let sha_upper = sel.dim() - kappa_rank;
    let units_mod_p = if ctx.s2.is_empty() {
        let u = UnitGroup::new(&ctx.field).mod_p_generators(&ctx.field, p);
        Some(rank_in_k_mod_p(&ctx.field, &u, p))
    } else {
        None
    };
    debug_assert_eq!(sha_upper + ker_psi + coker_psi_sel, ker_psi_sel + coker_psi);
    Ok(KernelCokernel {
        sel_phi: sel.dim(),
        kappa_rank,
        psi_rank,
        logpic_torsion_dim: t,
        ker_psi,
        ker_psi_sel,
        coker_psi,
        coker_psi_sel,
        sha_lower: 0,
        sha_upper,
        units_mod_p,
    })
}
