//! Component of the Néron special fibre met by a point, and denominator valuations.

use serde::Serialize;

use super::tate::{Kodaira, Loc, LocalData, Recipe};
use super::{Point, WeierstrassModel};
use crate::error::{Error, Result};
use crate::qfield::fq::Fe;

/// Label of a component: `j ∈ ℤ/n` for `I_n`, else `Γ_label` as in the fibral tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ComponentIndex {
    pub kodaira: Kodaira,
    pub label: u32,
}

impl ComponentIndex {
    pub fn identity(kodaira: Kodaira) -> ComponentIndex {
        ComponentIndex { kodaira, label: 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.label == 0
    }

    pub fn add(&self, other: &ComponentIndex) -> ComponentIndex {
        ComponentIndex { kodaira: self.kodaira, label: self.kodaira.add_labels(self.label, other.label) }
    }

    pub fn neg(&self) -> ComponentIndex {
        let k = self.kodaira;
        let mut x = ComponentIndex::identity(k);
        for _ in 1..k.phi_order() {
            x = x.add(self);
        }
        x
    }

    /// Order in the component group.
    pub fn order(&self) -> u32 {
        let mut x = *self;
        let mut k = 1;
        while !x.is_identity() {
            x = x.add(self);
            k += 1;
        }
        k
    }
}

fn root_index(roots: &[Fe], z: Fe) -> Result<u32> {
    roots
        .iter()
        .position(|&r| r == z)
        .map(|i| i as u32 + 1)
        .ok_or_else(|| Error::Inconsistent("point reduces off the expected components".into()))
}

/// Which component of the special fibre at `ld.place` the point `q` of `e` meets.
pub fn component_index(ld: &LocalData, e: &WeierstrassModel, q: &Point) -> Result<ComponentIndex> {
    let kod = ld.kodaira;
    let id = Ok(ComponentIndex::identity(kod));
    let lc = Loc::new(&ld.place);
    let model = match &ld.recipe {
        Recipe::None => return id,
        Recipe::Singular => &ld.transform,
        Recipe::Node { model, .. }
        | Recipe::YRoots { model, .. }
        | Recipe::XRoots { model, .. }
        | Recipe::Star { model, .. } => model,
    };
    let (x, y) = match e.transform_point(model, q) {
        Point::Infinity => return id,
        Point::Affine(x, y) => (x, y),
    };
    let (vx, vy) = (lc.val(&x), lc.val(&y));
    if vx <= 0 || vy <= 0 {
        return id;
    }
    let label = match &ld.recipe {
        Recipe::None => 0,
        Recipe::Singular => 1,
        Recipe::Node { slope, .. } => {
            let n = match kod {
                Kodaira::I(n) => n as i64,
                _ => unreachable!(),
            };
            let h = vx.min(n / 2);
            match slope {
                None => {
                    if n % 2 == 1 || h != n / 2 {
                        return Err(Error::Inconsistent(format!("point on a non-rational component at {}", ld.place)));
                    }
                    h as u32
                }
                Some(a) => {
                    let w = &y - &(&lc.lift(*a) * &x);
                    if 2 * h == n || lc.val(&w) > h {
                        h as u32
                    } else {
                        (n - h) as u32
                    }
                }
            }
        }
        Recipe::YRoots { k, roots, .. } => root_index(roots, lc.red(&(&y / &lc.pi_pow(*k))))?,
        Recipe::XRoots { roots, .. } => root_index(roots, lc.red(&(&x / &lc.pi)))?,
        Recipe::Star { far_y, k, roots, .. } => {
            let x1 = lc.red(&(&x / &lc.pi));
            if x1 != lc.k.zero() {
                1
            } else {
                let z = if *far_y { &y } else { &x };
                1 + root_index(roots, lc.red(&(z / &lc.pi_pow(*k))))?
            }
        }
    };
    Ok(ComponentIndex { kodaira: kod, label })
}

/// `e_v(Q) = −½ min(v(x(Q)), 0)` in the local minimal model.
pub fn e_v_of_q(ld: &LocalData, e: &WeierstrassModel, q: &Point) -> Result<i64> {
    let x = match e.transform_point(&ld.transform, q) {
        Point::Infinity => return Err(Error::Input("e_v of the origin: use e_v_of_o".into())),
        Point::Affine(x, _) => x,
    };
    if x.is_zero() {
        return Ok(0);
    }
    let vx = ld.place.valuation(&x);
    if vx >= 0 {
        return Ok(0);
    }
    if vx % 2 != 0 {
        return Err(Error::Inconsistent(format!("odd valuation of x at {}", ld.place)));
    }
    Ok(-vx / 2)
}

/// `e_v(O) = v(u_v)`.
pub fn e_v_of_o(ld: &LocalData) -> i64 {
    ld.vu
}
