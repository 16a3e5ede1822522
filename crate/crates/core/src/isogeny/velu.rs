//! Odd-degree isogenies from a kernel polynomial (Vélu's formulas in Kohel's form).

use super::poly::Poly;
use crate::ellcurve::{Point, Transform, WeierstrassModel};
use crate::error::{Error, Result};
use crate::qfield::FieldElement;

/// An isogeny given by its kernel polynomial, optionally followed by an
/// isomorphism onto a prescribed target model.
#[derive(Clone, Debug)]
pub struct KernelIsogeny {
    pub domain: WeierstrassModel,
    /// Monic, whose roots are the `x(T)` for `T` in the kernel up to sign.
    pub kernel: Poly,
    /// The normalized Vélu codomain.
    pub velu: WeierstrassModel,
    /// Vélu codomain to `codomain`.
    pub post: Transform,
    pub codomain: WeierstrassModel,
    pub degree: u64,
}

fn f_poly(e: &WeierstrassModel) -> Poly {
    Poly::new(
        e.m(),
        vec![e.b6.clone(), &e.b4 * &FieldElement::from_int(e.m(), 2), e.b2.clone(), FieldElement::from_int(e.m(), 4)],
    )
}

impl KernelIsogeny {
    /// Normalized isogeny `(φ*ω = ω)` with the given monic kernel polynomial of degree `(ℓ−1)/2`.
    pub fn new(domain: &WeierstrassModel, kernel: Poly) -> KernelIsogeny {
        let m = domain.m();
        let d = kernel.degree() as usize;
        let ps = kernel.power_sums(3);
        let fe = |n: i64| FieldElement::from_int(m, n);
        let dd = fe(d as i64);
        let t = &(&(&fe(6) * &ps[2]) + &(&domain.b2 * &ps[1])) + &(&dd * &domain.b4);
        let w = &(&(&fe(10) * &ps[3]) + &(&(&fe(2) * &domain.b2) * &ps[2])) + &(&(&fe(3) * &domain.b4) * &ps[1]);
        let w = &w + &(&dd * &domain.b6);
        let a4 = &domain.a4 - &(&fe(5) * &t);
        let a6 = &(&domain.a6 - &(&domain.b2 * &t)) - &(&fe(7) * &w);
        let velu =
            WeierstrassModel::new(&domain.field, [domain.a1.clone(), domain.a2.clone(), domain.a3.clone(), a4, a6])
                .expect("isogenous curve is nonsingular");
        KernelIsogeny {
            domain: domain.clone(),
            kernel,
            codomain: velu.clone(),
            velu,
            post: Transform::identity(m),
            degree: 2 * d as u64 + 1,
        }
    }

    /// Kernel generated by a rational point of odd order `p`.
    pub fn from_point(domain: &WeierstrassModel, pt: &Point, p: u64) -> Result<KernelIsogeny> {
        if p % 2 == 0 || domain.order(pt, p) != Some(p) {
            return Err(Error::BadTorsion(format!("{} does not have order {}", pt, p)));
        }
        let mut ker = Poly::constant(FieldElement::one(domain.m()));
        let mut q = pt.clone();
        for _ in 0..(p - 1) / 2 {
            ker = ker.mul(&Poly::linear(q.x().expect("affine kernel point")));
            q = domain.add(&q, pt);
        }
        Ok(KernelIsogeny::new(domain, ker))
    }

    /// Follow with the isomorphism onto `target` scaling differentials by `u`.
    pub fn with_target(mut self, target: &WeierstrassModel, u: &FieldElement) -> Result<KernelIsogeny> {
        let a = &self.velu;
        let half = FieldElement::from_int(a.m(), 2).inv();
        let third = FieldElement::from_int(a.m(), 3).inv();
        let s = &(&(u * &target.a1) - &a.a1) * &half;
        let u2 = u * u;
        let r = &(&(&(&(&u2 * &target.a2) - &a.a2) + &(&s * &a.a1)) + &(&s * &s)) * &third;
        let t = &(&(&(&(&u2 * u) * &target.a3) - &a.a3) - &(&r * &a.a1)) * &half;
        let tr = Transform { r, s, t, u: u.clone() };
        if a.transform(&tr).a_invariants() != target.a_invariants() {
            return Err(Error::Inconsistent("isogenous models are not isomorphic with the expected scaling".into()));
        }
        self.post = tr;
        self.codomain = target.clone();
        Ok(self)
    }

    /// Image of a point of the domain.
    pub fn apply(&self, pt: &Point) -> Point {
        let (x, y) = match pt {
            Point::Infinity => return Point::Infinity,
            Point::Affine(x, y) => (x, y),
        };
        let k0 = self.kernel.eval(x);
        if k0.is_zero() {
            return Point::Infinity;
        }
        let e = &self.domain;
        let m = e.m();
        let fe = |n: i64| FieldElement::from_int(m, n);
        let k1 = self.kernel.deriv();
        let k2 = k1.deriv();
        let k3 = k2.deriv();
        let (k1, k2, k3) = (k1.eval(x), k2.eval(x), k3.eval(x));
        let ki = k0.inv();
        let l0 = &k1 * &ki;
        let l1 = &(&(&k2 * &k0) - &(&k1 * &k1)) * &(&ki * &ki);
        let l2 = &(&(&(&k3 * &(&k0 * &k0)) - &(&fe(3) * &(&(&k0 * &k1) * &k2))) + &(&fe(2) * &(&(&k1 * &k1) * &k1)))
            * &(&(&ki * &ki) * &ki);
        let f = f_poly(e);
        let f1p = f.deriv();
        let f2p = f1p.deriv();
        let (f0, f1, f2) = (f.eval(x), f1p.eval(x), f2p.eval(x));
        let half = fe(2).inv();
        let s1 = -&self.kernel.coeff(self.kernel.degree() as usize - 1);
        let ell = fe(self.degree as i64);
        let xx = &(&(&(&ell * x) - &(&fe(2) * &s1)) - &(&f0 * &l1)) - &(&(&f1 * &half) * &l0);
        let dx = &(&(&(&ell - &(&f1 * &l1)) - &(&f0 * &l2)) - &(&(&f2 * &half) * &l0)) - &(&(&f1 * &half) * &l1);
        let w = &(&(&fe(2) * y) + &(&e.a1 * x)) + &e.a3;
        let yy = &(&(&(&dx * &w) - &(&self.velu.a1 * &xx)) - &self.velu.a3) * &half;
        self.velu.transform_point(&self.post, &Point::Affine(xx, yy))
    }

    /// Rational `x`-map `N/ψ²` of the Vélu part.
    pub fn x_map(&self) -> (Poly, Poly) {
        let m = self.domain.m();
        let k = &self.kernel;
        let k1 = k.deriv();
        let k2 = k1.deriv();
        let f = f_poly(&self.domain);
        let f1 = f.deriv().scale(&FieldElement::from_int(m, 2).inv());
        let s1 = -&k.coeff(k.degree() as usize - 1);
        let lin =
            Poly::new(m, vec![-&(&FieldElement::from_int(m, 2) * &s1), FieldElement::from_int(m, self.degree as i64)]);
        let kk = k.mul(k);
        let n = lin.mul(&kk).sub(&f.mul(&k2.mul(k).sub(&k1.mul(&k1)))).sub(&f1.mul(&k1.mul(k)));
        (n, kk)
    }
}

/// Division polynomials `f_n` with `ψ_n = f_n` for odd `n` and `ψ_n = ψ₂ f_n` for even `n`.
pub fn division_polynomials(e: &WeierstrassModel, n: usize) -> Vec<Poly> {
    let m = e.m();
    let fe = |k: i64| FieldElement::from_int(m, k);
    let (b2, b4, b6, b8) = (&e.b2, &e.b4, &e.b6, &e.b8);
    let mut out = vec![Poly::zero(m), Poly::constant(fe(1)), Poly::constant(fe(1))];
    out.push(Poly::new(m, vec![b8.clone(), &fe(3) * b6, &fe(3) * b4, b2.clone(), fe(3)]));
    out.push(Poly::new(
        m,
        vec![
            &(b4 * b8) - &(b6 * b6),
            &(b2 * b8) - &(b4 * b6),
            &fe(10) * b8,
            &fe(10) * b6,
            &fe(5) * b4,
            b2.clone(),
            fe(2),
        ],
    ));
    let ff = f_poly(e);
    let ff2 = ff.mul(&ff);
    for k in 5..=n {
        let h = k / 2;
        let g = |i: usize| &out[i];
        let next = if k % 2 == 1 {
            let a = g(h + 2).mul(&g(h).mul(g(h)).mul(g(h)));
            let b = g(h - 1).mul(&g(h + 1).mul(g(h + 1)).mul(g(h + 1)));
            if h % 2 == 0 {
                a.mul(&ff2).sub(&b)
            } else {
                a.sub(&b.mul(&ff2))
            }
        } else {
            let a = g(h + 2).mul(&g(h - 1).mul(g(h - 1)));
            let b = g(h - 2).mul(&g(h + 1).mul(g(h + 1)));
            g(h).mul(&a.sub(&b))
        };
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

/// Kernel polynomial of the dual of `iso`, from the `p`-division polynomial of its domain.
pub fn dual_kernel(iso: &KernelIsogeny) -> Result<Poly> {
    let p = iso.degree as usize;
    let m = iso.domain.m();
    let div = division_polynomials(&iso.domain, p);
    let (g, r) = div[p].divrem(&iso.kernel);
    if !r.is_zero() || g.degree() as usize != p * (p - 1) / 2 {
        return Err(Error::Inconsistent("kernel polynomial does not divide the division polynomial".into()));
    }
    let g = g.monic();
    let (n, d) = iso.x_map();
    let di = d.inv_mod(&g).ok_or_else(|| Error::Inconsistent("degenerate resultant".into()))?;
    let xm = n.mul(&di).rem(&g);
    let pinv = FieldElement::from_int(m, p as i64).inv();
    let mut pw = Poly::constant(FieldElement::one(m));
    let mut sums = vec![];
    for _ in 0..(p - 1) / 2 {
        pw = pw.mul(&xm).rem(&g);
        sums.push(&pw.trace_mod(&g) * &pinv);
    }
    Ok(Poly::from_power_sums(m, &sums))
}
