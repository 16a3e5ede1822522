//! Dense univariate polynomials over `K`, coefficients low to high.

use crate::qfield::FieldElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub m: i64,
    pub c: Vec<FieldElement>,
}

impl Poly {
    pub fn new(m: i64, mut c: Vec<FieldElement>) -> Poly {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Poly { m, c }
    }

    pub fn zero(m: i64) -> Poly {
        Poly { m, c: vec![] }
    }

    pub fn constant(x: FieldElement) -> Poly {
        let m = x.field_m();
        Poly::new(m, vec![x])
    }

    /// `x − r`.
    pub fn linear(r: &FieldElement) -> Poly {
        let m = r.field_m();
        Poly::new(m, vec![-r, FieldElement::one(m)])
    }

    pub fn from_ints(m: i64, c: &[i64]) -> Poly {
        Poly::new(m, c.iter().map(|&n| FieldElement::from_int(m, n)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.c.get(i).cloned().unwrap_or_else(|| FieldElement::zero(self.m))
    }

    pub fn lead(&self) -> FieldElement {
        self.coeff(self.c.len().saturating_sub(1))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(self.m, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(self.m, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn scale(&self, k: &FieldElement) -> Poly {
        Poly::new(self.m, self.c.iter().map(|x| x * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.m);
        }
        let mut c = vec![FieldElement::zero(self.m); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(self.m, c)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.c.clone();
        let dn = d.c.len();
        if r.len() < dn {
            return (Poly::zero(self.m), self.clone());
        }
        let li = d.lead().inv();
        let mut q = vec![FieldElement::zero(self.m); r.len() - dn + 1];
        for k in (0..q.len()).rev() {
            let t = &r[k + dn - 1] * &li;
            if !t.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&t * b);
                }
            }
            q[k] = t;
        }
        r.truncate(dn - 1);
        (Poly::new(self.m, q), Poly::new(self.m, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Poly {
        self.scale(&self.lead().inv())
    }

    pub fn deriv(&self) -> Poly {
        Poly::new(
            self.m,
            self.c.iter().enumerate().skip(1).map(|(i, x)| x * &FieldElement::from_int(self.m, i as i64)).collect(),
        )
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(self.m);
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    pub fn conj(&self) -> Poly {
        Poly::new(self.m, self.c.iter().map(|x| x.conj()).collect())
    }

    /// Inverse modulo `g`, assuming `gcd(self, g) = 1`.
    pub fn inv_mod(&self, g: &Poly) -> Option<Poly> {
        let (mut r0, mut r1) = (g.clone(), self.rem(g));
        let (mut t0, mut t1) = (Poly::zero(self.m), Poly::constant(FieldElement::one(self.m)));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.degree() != 0 {
            return None;
        }
        Some(t0.scale(&r0.lead().inv()).rem(g))
    }

    /// Power sums `Σ rᵏ` of the roots for `k = 0..=kmax`.
    pub fn power_sums(&self, kmax: usize) -> Vec<FieldElement> {
        let g = self.monic();
        let n = g.degree() as usize;
        let m = self.m;
        let mut p = vec![FieldElement::from_int(m, n as i64)];
        for k in 1..=kmax {
            let mut s =
                if k <= n { &g.coeff(n - k) * &FieldElement::from_int(m, k as i64) } else { FieldElement::zero(m) };
            for i in 1..k.min(n + 1) {
                s = &s + &(&g.coeff(n - i) * &p[k - i]);
            }
            p.push(-&s);
        }
        p
    }

    /// Trace of `self` in `K[x]/(g)`.
    pub fn trace_mod(&self, g: &Poly) -> FieldElement {
        let h = self.rem(g);
        let ps = g.power_sums(g.degree() as usize);
        h.c.iter().zip(ps.iter()).fold(FieldElement::zero(self.m), |acc, (a, s)| &acc + &(a * s))
    }

    /// Monic polynomial of degree `d` with the given power sums `p_1..p_d`.
    pub fn from_power_sums(m: i64, ps: &[FieldElement]) -> Poly {
        let d = ps.len();
        let mut e = vec![FieldElement::one(m)];
        for k in 1..=d {
            let mut s = FieldElement::zero(m);
            for i in 1..=k {
                let t = &e[k - i] * &ps[i - 1];
                s = if i % 2 == 1 { &s + &t } else { &s - &t };
            }
            e.push(&s * &FieldElement::from_int(m, k as i64).inv());
        }
        let c = (0..=d)
            .map(|i| {
                let k = d - i;
                if k % 2 == 0 {
                    e[k].clone()
                } else {
                    -&e[k]
                }
            })
            .collect();
        Poly::new(m, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(1, n)
    }

    #[test]
    fn divrem_recombines() {
        let a = Poly::from_ints(1, &[3, -1, 4, 1, 5, -9, 2]);
        let b = Poly::from_ints(1, &[2, 7, 1, 8]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn power_sums_round_trip() {
        let roots = [2, -3, 5, 7];
        let f = roots.iter().fold(Poly::constant(fe(1)), |acc, &r| acc.mul(&Poly::linear(&fe(r))));
        let ps = f.power_sums(6);
        for k in 0..=6u32 {
            let want: i64 = roots.iter().map(|r: &i64| r.pow(k)).sum();
            assert_eq!(ps[k as usize], fe(want));
        }
        assert_eq!(Poly::from_power_sums(1, &ps[1..5]), f);
    }

    #[test]
    fn inverse_mod_and_trace() {
        let g = Poly::from_ints(1, &[-2, 0, 0, 1]);
        let h = Poly::from_ints(1, &[1, 1]);
        let hi = h.inv_mod(&g).unwrap();
        assert_eq!(h.mul(&hi).rem(&g), Poly::constant(fe(1)));
        // roots are the cube roots of 2; Σ r³ = 6
        assert_eq!(Poly::from_ints(1, &[0, 0, 0, 1]).trace_mod(&g), fe(6));
    }
}
