//! Tate's algorithm at a finite place, with exact global coefficients.

use std::fmt;

use serde::Serialize;

use super::{Transform, WeierstrassModel};
use crate::qfield::fq::{Fe, Fq};
use crate::qfield::{FieldElement, Place};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kodaira {
    /// `I₀` is good reduction.
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    /// Number of irreducible components of the special fibre.
    pub fn components(&self) -> u32 {
        match *self {
            Kodaira::I(0) => 1,
            Kodaira::I(n) => n,
            Kodaira::IStar(n) => 5 + n,
            Kodaira::II => 1,
            Kodaira::III => 2,
            Kodaira::IV => 3,
            Kodaira::IVStar => 7,
            Kodaira::IIIStar => 8,
            Kodaira::IIStar => 9,
        }
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self, Kodaira::I(n) if *n > 0)
    }

    pub fn is_good(&self) -> bool {
        *self == Kodaira::I(0)
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, Kodaira::I(_))
    }

    /// Sum of two component labels in the geometric component group.
    pub fn add_labels(&self, a: u32, b: u32) -> u32 {
        match *self {
            Kodaira::I(n) if n > 0 => (a + b) % n,
            Kodaira::III | Kodaira::IIIStar => (a + b) % 2,
            Kodaira::IV | Kodaira::IVStar => (a + b) % 3,
            Kodaira::IStar(n) if n % 2 == 1 => {
                // ℤ/4 with Γ₁ ↦ 2, Γ₂ ↦ 1, Γ₃ ↦ 3
                let to = [0u32, 2, 1, 3];
                let from = [0u32, 2, 1, 3];
                from[((to[a as usize] + to[b as usize]) % 4) as usize]
            }
            Kodaira::IStar(_) => a ^ b,
            _ => 0,
        }
    }

    /// Order of the geometric component group.
    pub fn phi_order(&self) -> u32 {
        match *self {
            Kodaira::I(0) => 1,
            Kodaira::I(n) => n,
            Kodaira::IStar(_) => 4,
            Kodaira::III | Kodaira::IIIStar => 2,
            Kodaira::IV | Kodaira::IVStar => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for Kodaira {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// How to read off the component of a point; coordinates are in `model`.
#[derive(Clone, Debug)]
pub(crate) enum Recipe {
    None,
    /// Any point of singular reduction lies on `Γ₁`.
    Singular,
    /// Node translated to the critical point; `slope` orients split fibres.
    Node {
        model: Transform,
        slope: Option<Fe>,
    },
    /// `y/π^k` reduces to one of `roots` (`Γ₁, Γ₂, …`).
    YRoots {
        model: Transform,
        k: i64,
        roots: Vec<Fe>,
    },
    /// `x/π` reduces to one of `roots`.
    XRoots {
        model: Transform,
        roots: Vec<Fe>,
    },
    /// `I_n*`: `x/π ≢ 0` gives `Γ₁`; else `y/my` or `x/mx` picks `Γ₂, Γ₃`.
    Star {
        model: Transform,
        far_y: bool,
        k: i64,
        roots: Vec<Fe>,
    },
}

#[derive(Clone, Debug)]
pub struct LocalData {
    pub place: Place,
    pub kodaira: Kodaira,
    /// Number of components `m_v`.
    pub m: u32,
    /// Tamagawa number `c_v`.
    pub c: u32,
    /// Split flag for multiplicative reduction.
    pub split: Option<bool>,
    /// Conductor exponent.
    pub f: u32,
    /// Valuation of the minimal discriminant.
    pub v_disc: i64,
    /// Scaling of the minimalizing transformation; `e_v(O) = v(u)`.
    pub u: FieldElement,
    pub vu: i64,
    /// Input model to local minimal model.
    pub transform: Transform,
    pub minimal: WeierstrassModel,
    pub(crate) recipe: Recipe,
}

#[derive(Serialize)]
struct LocalDataJson<'a> {
    place: String,
    kodaira: Kodaira,
    m: u32,
    c: u32,
    split: Option<bool>,
    vu: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    extra: Option<&'a str>,
}

impl LocalData {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(LocalDataJson {
            place: self.place.to_string(),
            kodaira: self.kodaira,
            m: self.m,
            c: self.c,
            split: self.split,
            vu: self.vu,
            extra: None,
        })
        .unwrap()
    }

    pub fn is_good(&self) -> bool {
        self.kodaira.is_good()
    }
}

/// Residue arithmetic at one place.
pub(crate) struct Loc<'a> {
    pub v: &'a Place,
    pub k: Fq,
    pub pi: FieldElement,
    pub m: i64,
}

impl<'a> Loc<'a> {
    pub fn new(v: &'a Place) -> Loc<'a> {
        Loc { v, k: v.residue_field(), pi: v.uniformizer(), m: v.m }
    }

    pub fn val(&self, x: &FieldElement) -> i64 {
        if x.is_zero() {
            i64::MAX
        } else {
            self.v.valuation(x)
        }
    }

    pub fn div(&self, x: &FieldElement) -> bool {
        self.val(x) > 0
    }

    pub fn red(&self, x: &FieldElement) -> Fe {
        self.v.residue(x)
    }

    pub fn lift(&self, c: Fe) -> FieldElement {
        self.v.lift(c)
    }

    pub fn preduce(&self, x: &FieldElement) -> FieldElement {
        self.lift(self.red(x))
    }

    pub fn pinv(&self, x: &FieldElement) -> FieldElement {
        self.lift(self.k.inv(self.red(x)))
    }

    /// Lift of the `e`-th root in the residue field, `e` the characteristic.
    pub fn proot(&self, x: &FieldElement, e: u64) -> FieldElement {
        let c = self.red(x);
        let r = if e == 2 {
            self.k.sqrt(c).expect("squares are surjective in characteristic 2")
        } else {
            self.k.cbrt_char3(c)
        };
        self.lift(r)
    }

    pub fn pi_pow(&self, k: i64) -> FieldElement {
        self.pi.pow(k)
    }

    /// Roots in `k_v` of `aX² + bX + c`, sorted.
    pub fn quad_roots(&self, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> Vec<Fe> {
        let poly = vec![self.red(c), self.red(b), self.red(a)];
        self.k.roots(&poly)
    }

    /// Whether `aX² + bX + c` has a root in `k_v` (degenerate cases included).
    pub fn has_quad_root(&self, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> bool {
        if !self.div(a) {
            return !self.quad_roots(a, b, c).is_empty();
        }
        !self.div(b) || self.div(c)
    }

    pub fn cubic_roots(&self, b: &FieldElement, c: &FieldElement, d: &FieldElement) -> Vec<Fe> {
        let poly = vec![self.red(d), self.red(c), self.red(b), self.k.one()];
        self.k.roots(&poly)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_int(self.m, n)
    }
}

fn rst(r: FieldElement, s: FieldElement, t: FieldElement, m: i64) -> Transform {
    Transform { r, s, t, u: FieldElement::one(m) }
}

struct State {
    model: WeierstrassModel,
    total: Transform,
}

impl State {
    fn apply(&mut self, tr: Transform) {
        self.model = self.model.transform(&tr);
        self.total = self.total.then(&tr);
    }
}

/// Runs Tate's algorithm for `e` at the finite place `v`.
pub fn local_data(e: &WeierstrassModel, v: &Place) -> LocalData {
    let lc = Loc::new(v);
    let m = lc.m;
    let p = v.l;
    let zero = || FieldElement::zero(m);
    let mut st = State { model: e.clone(), total: Transform::identity(m) };
    // integral model first
    let mut k = 0i64;
    for (i, a) in [(1i64, &e.a1), (2, &e.a2), (3, &e.a3), (4, &e.a4), (6, &e.a6)] {
        let va = lc.val(a);
        if va < 0 {
            k = k.max((-va + i - 1) / i);
        }
    }
    if k > 0 {
        st.apply(Transform { r: zero(), s: zero(), t: zero(), u: lc.pi_pow(-k) });
    }
    let half = if p != 2 { lc.pinv(&lc.int(2)) } else { zero() };
    loop {
        let c = st.model.clone();
        let vd = lc.val(&c.disc);
        if vd == 0 {
            return finish(&lc, st, Kodaira::I(0), 1, None, 0, 0, Recipe::None);
        }
        // move the singular point to (0, 0)
        let (r, t) = if p == 2 {
            if lc.div(&c.b2) {
                let r = lc.proot(&c.a4, 2);
                let t = lc.proot(&(&(&(&(&(&r + &c.a2) * &r) + &c.a4) * &r) + &c.a6), 2);
                (r, t)
            } else {
                let inv = lc.pinv(&c.a1);
                let r = lc.preduce(&(&inv * &c.a3));
                let t = lc.preduce(&(&inv * &(&c.a4 + &(&r * &r))));
                (r, t)
            }
        } else if p == 3 {
            let r = if lc.div(&c.b2) { lc.proot(&-&c.b6, 3) } else { lc.preduce(&-&(&lc.pinv(&c.b2) * &c.b4)) };
            let t = lc.preduce(&(&(&c.a1 * &r) + &c.a3));
            (r, t)
        } else {
            let r = if lc.div(&c.c4) {
                lc.preduce(&-&(&lc.pinv(&lc.int(12)) * &c.b2))
            } else {
                let den = &lc.int(12) * &c.c4;
                lc.preduce(&-&(&lc.pinv(&den) * &(&c.c6 + &(&c.b2 * &c.c4))))
            };
            let t = lc.preduce(&-&(&half * &(&(&c.a1 * &r) + &c.a3)));
            (r, t)
        };
        st.apply(rst(r, zero(), t, m));
        let c = st.model.clone();
        if !lc.div(&c.c4) {
            let split = lc.has_quad_root(&lc.int(1), &c.a1, &-&c.a2);
            let n = vd as u32;
            let cp = if split {
                n
            } else if n % 2 == 0 {
                2
            } else {
                1
            };
            let node = critical_point(&lc, &c, vd + 2);
            let slope = if split { Some(lc.quad_roots(&lc.int(1), &node.1, &-&node.2)[0]) } else { None };
            let model = st.total.then(&node.0);
            return finish(&lc, st, Kodaira::I(n), cp, Some(split), 1, vd, Recipe::Node { model, slope });
        }
        if lc.val(&c.a6) < 2 {
            return finish(&lc, st, Kodaira::II, 1, None, vd as u32, vd, Recipe::None);
        }
        if lc.val(&c.b8) < 3 {
            return finish(&lc, st, Kodaira::III, 2, None, (vd - 1) as u32, vd, Recipe::Singular);
        }
        let (s, t) = if p == 2 {
            (lc.proot(&c.a2, 2), &lc.pi * &lc.proot(&(&c.a6 / &lc.pi_pow(2)), 2))
        } else if p == 3 {
            (c.a1.clone(), c.a3.clone())
        } else {
            (-&(&c.a1 * &half), -&(&c.a3 * &half))
        };
        let step = rst(zero(), s, t, m);
        if lc.val(&c.b6) < 3 {
            let cp = if lc.has_quad_root(&lc.int(1), &(&c.a3 / &lc.pi), &-&(&c.a6 / &lc.pi_pow(2))) { 3 } else { 1 };
            let model = st.total.then(&step);
            let c2 = c.transform(&step);
            let roots = lc.quad_roots(&lc.int(1), &(&c2.a3 / &lc.pi), &-&(&c2.a6 / &lc.pi_pow(2)));
            return finish(&lc, st, Kodaira::IV, cp, None, (vd - 2) as u32, vd, Recipe::YRoots { model, k: 1, roots });
        }
        st.apply(step);
        let c = st.model.clone();
        let b = &c.a2 / &lc.pi;
        let cc = &c.a4 / &lc.pi_pow(2);
        let d = &c.a6 / &lc.pi_pow(3);
        let w = &(&(&(&(&lc.int(27) * &(&d * &d)) - &(&(&b * &b) * &(&cc * &cc)))
            + &(&lc.int(4) * &(&(&b * &b) * &(&b * &d))))
            - &(&lc.int(18) * &(&(&b * &cc) * &d)))
            + &(&lc.int(4) * &(&(&cc * &cc) * &cc));
        let x = &(&lc.int(3) * &cc) - &(&b * &b);
        let sw = if lc.div(&w) {
            if lc.div(&x) {
                3
            } else {
                2
            }
        } else {
            1
        };
        if sw == 1 {
            let roots = lc.cubic_roots(&b, &cc, &d);
            let cp = 1 + roots.len() as u32;
            let model = st.total.clone();
            return finish(&lc, st, Kodaira::IStar(0), cp, None, (vd - 4) as u32, vd, Recipe::XRoots { model, roots });
        }
        if sw == 2 {
            let r = if p == 2 {
                lc.proot(&cc, 2)
            } else if p == 3 {
                &cc * &lc.pinv(&b)
            } else {
                &(&(&b * &cc) - &(&lc.int(9) * &d)) * &lc.pinv(&(&lc.int(2) * &x))
            };
            st.apply(rst(&lc.pi * &lc.preduce(&r), zero(), zero(), m));
            let (mut ix, mut iy) = (3i64, 3i64);
            let (cp, far_y, roots) = loop {
                let c = st.model.clone();
                let mx = lc.pi_pow(ix - 1);
                let my = lc.pi_pow(iy - 1);
                let a3t = &c.a3 / &my;
                let a6t = &c.a6 / &(&mx * &my);
                if !lc.div(&(&(&a3t * &a3t) + &(&lc.int(4) * &a6t))) {
                    let roots = lc.quad_roots(&lc.int(1), &a3t, &-&a6t);
                    break (if roots.is_empty() { 2 } else { 4 }, true, roots);
                }
                let t = if p == 2 { &my * &lc.proot(&a6t, 2) } else { &my * &lc.preduce(&-&(&a3t * &half)) };
                st.apply(rst(zero(), zero(), t, m));
                iy += 1;
                let c = st.model.clone();
                let my = lc.pi_pow(iy - 1);
                let a2t = &c.a2 / &lc.pi;
                let a4t = &c.a4 / &(&lc.pi * &mx);
                let a6t = &c.a6 / &(&mx * &my);
                if !lc.div(&(&(&a4t * &a4t) - &(&lc.int(4) * &(&a6t * &a2t)))) {
                    let roots = lc.quad_roots(&a2t, &a4t, &a6t);
                    break (if roots.is_empty() { 2 } else { 4 }, false, roots);
                }
                let r = if p == 2 {
                    &mx * &lc.proot(&(&a6t * &lc.pinv(&a2t)), 2)
                } else {
                    &mx * &lc.preduce(&-&(&a4t * &lc.pinv(&(&lc.int(2) * &a2t))))
                };
                st.apply(rst(r, zero(), zero(), m));
                ix += 1;
            };
            let n = (ix + iy - 5) as u32;
            let k = if far_y { iy - 1 } else { ix - 1 };
            let model = st.total.clone();
            let fp = (vd - n as i64 - 4) as u32;
            return finish(&lc, st, Kodaira::IStar(n), cp, None, fp, vd, Recipe::Star { model, far_y, k, roots });
        }
        // triple root
        let r = if p == 2 {
            b.clone()
        } else if p == 3 {
            lc.proot(&-&d, 3)
        } else {
            &-&b * &lc.pinv(&lc.int(3))
        };
        st.apply(rst(&lc.pi * &lc.preduce(&r), zero(), zero(), m));
        let c = st.model.clone();
        let x3 = &c.a3 / &lc.pi_pow(2);
        let x6 = &c.a6 / &lc.pi_pow(4);
        if !lc.div(&(&(&x3 * &x3) + &(&lc.int(4) * &x6))) {
            let roots = lc.quad_roots(&lc.int(1), &x3, &-&x6);
            let cp = if roots.is_empty() { 1 } else { 3 };
            let model = st.total.clone();
            return finish(
                &lc,
                st,
                Kodaira::IVStar,
                cp,
                None,
                (vd - 6) as u32,
                vd,
                Recipe::YRoots { model, k: 2, roots },
            );
        }
        let t =
            if p == 2 { -&(&lc.pi_pow(2) * &lc.proot(&x6, 2)) } else { &lc.pi_pow(2) * &lc.preduce(&-&(&x3 * &half)) };
        st.apply(rst(zero(), zero(), t, m));
        let c = st.model.clone();
        if lc.val(&c.a4) < 4 {
            return finish(&lc, st, Kodaira::IIIStar, 2, None, (vd - 7) as u32, vd, Recipe::Singular);
        }
        if lc.val(&c.a6) < 6 {
            return finish(&lc, st, Kodaira::IIStar, 1, None, (vd - 8) as u32, vd, Recipe::None);
        }
        // not minimal: scale by π and start over
        let pi = lc.pi.clone();
        st.apply(Transform { r: zero(), s: zero(), t: zero(), u: pi });
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    lc: &Loc,
    st: State,
    kod: Kodaira,
    c: u32,
    split: Option<bool>,
    f: u32,
    vd: i64,
    recipe: Recipe,
) -> LocalData {
    let u = st.total.u.clone();
    let vu = lc.v.valuation(&u);
    LocalData {
        place: lc.v.clone(),
        kodaira: kod,
        m: kod.components(),
        c,
        split,
        f,
        v_disc: vd,
        u,
        vu,
        transform: st.total,
        minimal: st.model,
        recipe,
    }
}

/// Translation to the critical point of `F(x, y)` near the node at `(0, 0)`,
/// to precision `n`; also returns `a1, a2` of the translated model.
fn critical_point(lc: &Loc, c: &WeierstrassModel, n: i64) -> (Transform, FieldElement, FieldElement) {
    let m = lc.m;
    let (mut x, mut y) = (FieldElement::zero(m), FieldElement::zero(m));
    for _ in 0..64 {
        let fy = &(&(&lc.int(2) * &y) + &(&c.a1 * &x)) + &c.a3;
        let fx = &(&(&(&c.a1 * &y) - &(&lc.int(3) * &(&x * &x))) - &(&lc.int(2) * &(&c.a2 * &x))) - &c.a4;
        if lc.val(&fx) >= n && lc.val(&fy) >= n {
            break;
        }
        let jxx = &(-&(&lc.int(6) * &x)) - &(&lc.int(2) * &c.a2);
        let det = &(&lc.int(2) * &jxx) - &(&c.a1 * &c.a1);
        let di = det.inv();
        let dx = &(&(&lc.int(2) * &fx) - &(&c.a1 * &fy)) * &di;
        let dy = &(&(&jxx * &fy) - &(&c.a1 * &fx)) * &di;
        x = lc.v.truncate(&(&x - &dx), n);
        y = lc.v.truncate(&(&y - &dy), n);
    }
    let tr = Transform { r: x, s: FieldElement::zero(m), t: y, u: FieldElement::one(m) };
    let c2 = c.transform(&tr);
    (tr, c2.a1, c2.a2)
}
