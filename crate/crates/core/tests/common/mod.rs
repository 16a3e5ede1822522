//! Fixtures and property checks shared by the property suites and the acceptance run.
#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use pdescent_core::descent::{psi_sel, MillerFunction};
use pdescent_core::ellcurve::{Kodaira, Point, WeierstrassModel};
use pdescent_core::isogeny::IsogenyContext;
use pdescent_core::logpic::LogPic;
use pdescent_core::pairing::fibral::verify_gq;
use pdescent_core::pairing::{psi, CurvePairing};
use pdescent_core::qfield::local::{is_local_pth_power, is_local_pth_power_brute};
use pdescent_core::qfield::selmer_basis::rank_in_k_mod_p;
use pdescent_core::qfield::{FieldElement, Place, QuadField};

pub const C11A1: [i64; 5] = [0, -1, 1, -10, -20];
pub const C11A3: [i64; 5] = [0, -1, 1, 0, 0];
pub const C35A1: [i64; 5] = [0, 1, 1, 9, 1];
pub const C158C1: [i64; 5] = [1, 1, 1, -420, 3109];

pub fn field(d: i64) -> QuadField {
    if d == 1 {
        QuadField::rationals()
    } else {
        QuadField::new(d).unwrap()
    }
}

pub fn ctx(d: i64, a: [i64; 5], p_str: &str, p: u64) -> IsogenyContext {
    let e = WeierstrassModel::from_ints(&field(d), a).unwrap();
    let pt = e.parse_point(p_str).unwrap();
    IsogenyContext::new(&e, &pt, p).unwrap()
}

pub fn combo(e: &WeierstrassModel, gens: &[Point], c: &[i64]) -> Point {
    gens.iter().zip(c).fold(Point::Infinity, |acc, (g, &n)| e.add(&acc, &e.mul(n, g)))
}

/// 158c1 over `ℚ(√−79)` with `P` and `Q`.
pub struct Worked {
    pub cp: CurvePairing,
    pub lp: LogPic,
    pub gens: [Point; 2],
}

pub fn worked() -> &'static Worked {
    static W: OnceLock<Worked> = OnceLock::new();
    W.get_or_init(|| {
        let e = WeierstrassModel::from_ints(&field(-79), C158C1).unwrap();
        let p = e.parse_point("(13, -15)").unwrap();
        let q = e.parse_point("(101/9, -55/9+16/27*sqrt(-79))").unwrap();
        let cp = CurvePairing::new(&e).unwrap();
        let lp = cp.logpic().unwrap();
        Worked { cp, lp, gens: [p, q] }
    })
}

/// 11a1 over `ℚ(√−47)` with `P`, `Q₁`, `Q₂`.
pub struct Minus47 {
    pub ctx: IsogenyContext,
    pub f: MillerFunction,
    pub lp: LogPic,
    pub gens: [Point; 3],
}

pub fn minus_47() -> &'static Minus47 {
    static W: OnceLock<Minus47> = OnceLock::new();
    W.get_or_init(|| {
        let ctx = ctx(-47, C11A1, "(5, 5)", 5);
        let f = MillerFunction::new(&ctx.e_prime, &ctx.pt, 5).unwrap();
        let lp = LogPic::new(&ctx.field, &ctx.s1).unwrap();
        let e = &ctx.e_prime;
        let q1 = e.parse_point("(4, -1/2+1/2*sqrt(-47))").unwrap();
        let q2 = e.parse_point("(-2, -1/2+1/2*sqrt(-47))").unwrap();
        let gens = [ctx.pt.clone(), q1, q2];
        Minus47 { ctx, f, lp, gens }
    })
}

pub fn small() -> impl Strategy<Value = i64> {
    -2i64..=2
}

pub fn tiny() -> impl Strategy<Value = i64> {
    -1i64..=1
}

type Check = Result<(), TestCaseError>;

pub fn check_bilinear(a: &[i64], b: &[i64], c: &[i64]) -> Check {
    let w = worked();
    let e = &w.cp.e;
    let (x, y, z) = (combo(e, &w.gens, a), combo(e, &w.gens, b), combo(e, &w.gens, c));
    let pair = |s: &Point, t: &Point| w.cp.log_pairing(s, t).unwrap().total;
    let xy = pair(&x, &y);
    prop_assert!(w.lp.equal(&xy, &pair(&y, &x)), "symmetry fails for {} {}", x, y);
    prop_assert!(
        w.lp.equal(&pair(&e.add(&x, &z), &y), &xy.add(&pair(&z, &y))),
        "linearity fails for {} {} {}",
        x,
        z,
        y
    );
    Ok(())
}

pub fn check_monodromy(a: &[i64], b: &[i64]) -> Check {
    let w = worked();
    let e = &w.cp.e;
    let (x, y) = (combo(e, &w.gens, a), combo(e, &w.gens, b));
    let mono = w.cp.monodromy_pairing(&x, &y).unwrap();
    let nu = w.lp.nu(&w.cp.log_pairing(&x, &y).unwrap().total);
    prop_assert_eq!(mono.values().cloned().collect::<Vec<_>>(), nu);
    Ok(())
}

pub fn check_flip(a: &[i64], b: &[i64], which: usize) -> Check {
    let w = worked();
    let e = &w.cp.e;
    let (x, y) = (combo(e, &w.gens, a), combo(e, &w.gens, b));
    let bad = w.cp.bad_places();
    let v: &Place = &bad[which % bad.len()];
    let flipped = w.cp.with_flipped(v);
    let s = w.cp.log_pairing(&x, &y).unwrap().total;
    let t = flipped.log_pairing(&x, &y).unwrap().total;
    prop_assert!(w.lp.equal(&s, &t));
    Ok(())
}

pub fn check_kummer_hom(a: &[i64], b: &[i64]) -> Check {
    let w = minus_47();
    let e = &w.ctx.e_prime;
    let (x, y) = (combo(e, &w.gens, a), combo(e, &w.gens, b));
    let k = |q: &Point| w.f.kummer(q).value;
    let quot = &(&k(&e.add(&x, &y)) * &k(&x).inv()) * &k(&y).inv();
    prop_assert_eq!(rank_in_k_mod_p(&w.ctx.field, &[quot], 5), 0);
    Ok(())
}

pub fn check_psi_factors(a: &[i64]) -> Check {
    let w = minus_47();
    let q = combo(&w.ctx.e_prime, &w.gens, a);
    let lhs = psi_sel(&w.ctx, &w.f.kummer(&q).value).unwrap();
    let rhs = psi(&w.ctx, &q).unwrap();
    prop_assert!(w.lp.equal(&lhs, &rhs), "ρκ = {}, ψ = {} at {}", lhs, rhs, q);
    Ok(())
}

/// `(m, ℓ, p)`: split, inert and ramified places, above and away from `p`.
pub const PLACE_CASES: [(i64, u64, u64); 10] = [
    (1, 5, 5),
    (-1, 5, 5),
    (2, 5, 5),
    (5, 5, 5),
    (-47, 11, 5),
    (-47, 7, 3),
    (1, 3, 3),
    (-3, 3, 3),
    (2, 3, 3),
    (1, 11, 5),
];

pub fn check_local_power(case: usize, which: usize, a: i64, b: i64) -> Check {
    let (m, l, p) = PLACE_CASES[case % PLACE_CASES.len()];
    let places = Place::above(m, l).unwrap();
    let v = &places[which % places.len()];
    let x = if m == 1 {
        FieldElement::from_int(m, a * 41 + b)
    } else {
        &FieldElement::from_int(m, a) + &(&FieldElement::from_int(m, b) * &FieldElement::sqrt_m(m))
    };
    prop_assume!(!x.is_zero());
    prop_assert_eq!(is_local_pth_power(&x, v, p), is_local_pth_power_brute(&x, v, p), "x = {} at {}", x, v);
    Ok(())
}

/// Every `G_Q` table listed: `I_n` for `n ≤ 50`, `I_n*` for `n ≤ 20`, and the additive types.
pub fn all_fibral_tables() -> Vec<(Kodaira, u32)> {
    let mut out = vec![];
    for n in 2..=50 {
        out.extend((1..n).map(|k| (Kodaira::I(n), k)));
    }
    for n in 0..=20 {
        out.extend((1..4).map(|k| (Kodaira::IStar(n), k)));
    }
    out.extend([
        (Kodaira::III, 1),
        (Kodaira::IIIStar, 1),
        (Kodaira::IV, 1),
        (Kodaira::IV, 2),
        (Kodaira::IVStar, 1),
        (Kodaira::IVStar, 2),
    ]);
    out
}

pub fn check_fibral(kod: Kodaira, k: u32) -> Check {
    verify_gq(kod, k).map_err(|e| TestCaseError::fail(e.to_string()))
}
