//! Local `p`-th power tests and `𝔽_p`-coordinates on `O_v^× / p`.

use super::element::FieldElement;
use super::fq::{Fe, Fq};
use super::place::{Place, Splitting};

/// `x · π^(−v(x))` for the global uniformizer `π` of the place.
pub fn unit_part(x: &FieldElement, v: &Place) -> FieldElement {
    let k = v.valuation(x);
    x * &v.uniformizer().pow(-k)
}

/// Whether `μ_p ⊂ K_v` (odd `p`).
pub fn local_mu_p(v: &Place, p: u64) -> bool {
    if v.l != p {
        return (v.norm() - 1) % p == 0;
    }
    // ζ₃ ∈ ℚ₃(√m) iff −3m is a square, i.e. −m/3 ≡ 1 mod 3
    p == 3 && v.kind == Splitting::Ramified && (-(v.m / 3)).rem_euclid(3) == 1
}

/// Local degree `[K_v : ℚ_ℓ]`.
pub fn local_degree(v: &Place) -> u32 {
    (v.e() as u32) * v.f()
}

/// `dim_{𝔽_p} O_v^× / p`.
pub fn unit_dim(v: &Place, p: u64) -> usize {
    let mu = local_mu_p(v, p) as usize;
    if v.l != p {
        mu
    } else {
        local_degree(v) as usize + mu
    }
}

fn val_or_inf(x: &FieldElement, v: &Place) -> i64 {
    if x.is_zero() {
        i64::MAX
    } else {
        v.valuation(x)
    }
}

/// Whether the unit `u` is a `p`-th power in `K_v` for `v | p`.
fn unit_is_pth_power_above_p(u: &FieldElement, v: &Place, p: u64) -> bool {
    let e = v.e();
    let n = 2 * e + 1;
    let k: Fq = v.residue_field();
    // Frobenius is bijective on k_v, so the first digit is forced
    let c0 = k.pow(v.residue(u), (k.q() / p) as u128);
    let pi = v.uniformizer();
    let u = v.truncate(u, n);
    fn search(
        w: FieldElement,
        depth: i64,
        u: &FieldElement,
        v: &Place,
        p: u64,
        e: i64,
        n: i64,
        pi: &FieldElement,
        k: &Fq,
    ) -> bool {
        let need = (p as i64 * depth).min(depth + e).min(n);
        let diff = &v.truncate(&w.pow(p as i64), n) - u;
        if val_or_inf(&diff, v) < need {
            return false;
        }
        if need >= n {
            return true;
        }
        let step = pi.pow(depth);
        k.elements().into_iter().any(|c| {
            let w2 = v.truncate(&(&w + &(&v.lift(c) * &step)), n);
            search(w2, depth + 1, u, v, p, e, n, pi, k)
        })
    }
    search(v.lift(c0), 1, &u, v, p, e, n, &pi, &k)
}

/// Whether `x` is a `p`-th power in `K_v^×`.
pub fn is_local_pth_power(x: &FieldElement, v: &Place, p: u64) -> bool {
    assert!(!x.is_zero(), "p-th power test of zero");
    if v.valuation(x).rem_euclid(p as i64) != 0 {
        return false;
    }
    let u = unit_part(x, v);
    if v.l != p {
        let q = v.norm();
        if (q - 1) % p != 0 {
            return true;
        }
        let k = v.residue_field();
        return k.pow(v.residue(&u), ((q - 1) / p) as u128) == k.one();
    }
    unit_is_pth_power_above_p(&u, v, p)
}

/// Exhaustive version of the test above `p`, enumerating all `w mod 𝔪^(2e+1)`.
pub fn is_local_pth_power_brute(x: &FieldElement, v: &Place, p: u64) -> bool {
    if v.valuation(x).rem_euclid(p as i64) != 0 {
        return false;
    }
    let u = unit_part(x, v);
    let e = if v.l == p { v.e() } else { 0 };
    let n = 2 * e + 1;
    let k = v.residue_field();
    let pi = v.uniformizer();
    let mut reps = vec![FieldElement::zero(v.m)];
    for i in 0..n {
        let step = pi.pow(i);
        reps = reps
            .iter()
            .flat_map(|r| k.elements().into_iter().map(move |c| (r.clone(), c)))
            .map(|(r, c)| v.truncate(&(&r + &(&v.lift(c) * &step)), n))
            .collect();
    }
    let target = v.truncate(&u, n);
    reps.iter().any(|w| {
        let d = &v.truncate(&w.pow(p as i64), n) - &target;
        val_or_inf(&d, v) >= n
    })
}

/// A fixed basis of `O_v^× / p` together with the coordinate map.
#[derive(Clone, Debug)]
pub struct LocalUnitsModP {
    pub place: Place,
    pub p: u64,
    pub dim: usize,
    basis: Vec<FieldElement>,
    zeta: Option<Fe>,
    gen_inv_cache: Vec<Fe>,
}

impl LocalUnitsModP {
    pub fn new(v: &Place, p: u64) -> LocalUnitsModP {
        let dim = unit_dim(v, p);
        let mut out = LocalUnitsModP { place: v.clone(), p, dim, basis: vec![], zeta: None, gen_inv_cache: vec![] };
        if v.l != p {
            if dim == 1 {
                let k = v.residue_field();
                let g = k.generator();
                let z = k.pow(g, ((k.q() - 1) / p) as u128);
                out.zeta = Some(z);
                out.gen_inv_cache = (0..p).map(|i| k.pow(z, i as u128)).collect();
            }
            return out;
        }
        // greedy basis among 1 + c·π^i
        let k = v.residue_field();
        let pi = v.uniformizer();
        let n = 2 * v.e() + 1;
        'outer: for i in 0..n {
            for c in k.elements().into_iter().skip(1) {
                if out.basis.len() == dim {
                    break 'outer;
                }
                let cand = &FieldElement::one(v.m) + &(&v.lift(c) * &pi.pow(i));
                if v.valuation(&cand) != 0 {
                    continue;
                }
                if out.solve(&cand).is_none() {
                    out.basis.push(cand);
                }
            }
        }
        assert_eq!(out.basis.len(), dim, "incomplete local unit basis at {v}");
        out
    }

    /// Exponents `e` with `u · ∏ bᵢ^(−eᵢ)` a `p`-th power.
    fn solve(&self, u: &FieldElement) -> Option<Vec<u64>> {
        let r = self.basis.len();
        let total = (self.p as usize).pow(r as u32);
        for idx in 0..total {
            let mut e = Vec::with_capacity(r);
            let mut t = idx;
            for _ in 0..r {
                e.push((t % self.p as usize) as u64);
                t /= self.p as usize;
            }
            let mut y = u.clone();
            for (b, &ei) in self.basis.iter().zip(&e) {
                if ei != 0 {
                    y = self.place.truncate(&(&y * &b.pow(-(ei as i64))), 2 * self.place.e() + 1);
                }
            }
            if unit_is_pth_power_above_p(&y, &self.place, self.p) {
                return Some(e);
            }
        }
        None
    }

    /// Coordinates of `x` (with `v(x) ≡ 0 mod p`) in `𝔽_p^dim`.
    pub fn coords(&self, x: &FieldElement) -> Vec<u64> {
        let v = &self.place;
        assert_eq!(v.valuation(x).rem_euclid(self.p as i64), 0, "valuation not divisible by p at {v}");
        let u = unit_part(x, v);
        if v.l != self.p {
            if self.dim == 0 {
                return vec![];
            }
            let k = v.residue_field();
            let t = k.pow(v.residue(&u), ((k.q() - 1) / self.p) as u128);
            let j = self.gen_inv_cache.iter().position(|&z| z == t).expect("not a p-th root of unity");
            return vec![j as u64];
        }
        let u = v.truncate(&u, 2 * v.e() + 1);
        self.solve(&u).expect("coordinates not found")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_is_a_power_everywhere() {
        for (m, l) in [(1i64, 5u64), (2, 5), (-47, 5), (-47, 11), (5, 5)] {
            for v in Place::above(m, l).unwrap() {
                assert!(is_local_pth_power(&FieldElement::one(m), &v, 5));
            }
        }
    }

    #[test]
    fn matches_brute_force_at_five() {
        for m in [1i64, 2, -1, 5, -47] {
            for v in Place::above(m, 5).unwrap() {
                let size = v.norm().pow(2 * v.e() as u32 + 1);
                let top = if size > 5000 { 4 } else { 12 };
                for a in 1..top {
                    for b in 0..3i64 {
                        let x = if m == 1 {
                            FieldElement::from_int(1, a)
                        } else {
                            FieldElement::parse(m, &format!("{a}+{b}*sqrt({m})")).unwrap()
                        };
                        if x.is_zero() || v.valuation(&x) != 0 {
                            continue;
                        }
                        assert_eq!(is_local_pth_power(&x, &v, 5), is_local_pth_power_brute(&x, &v, 5), "{x} at {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn unit_coordinates_are_additive() {
        let v = &Place::above(1, 5).unwrap()[0];
        let b = LocalUnitsModP::new(v, 5);
        assert_eq!(b.dim, 1);
        let c6 = b.coords(&FieldElement::from_int(1, 6));
        let c11 = b.coords(&FieldElement::from_int(1, 11));
        let c66 = b.coords(&FieldElement::from_int(1, 66));
        assert_eq!((c6[0] + c11[0]) % 5, c66[0]);
        assert_eq!(b.coords(&FieldElement::from_int(1, 32))[0], 0);
    }
}
