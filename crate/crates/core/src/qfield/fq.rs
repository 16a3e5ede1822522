//! Residue fields `𝔽_ℓ` and `𝔽_{ℓ²}` with polynomial root finding.

use crate::arith::{invmod, is_prime_u64, mulmod};

/// `𝔽_q` for `q = ℓ` or `q = ℓ²`; the quadratic case is `𝔽_ℓ[θ]` with
/// `θ² = nonres` (odd `ℓ`) or `θ² = θ + 1` (`ℓ = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fq {
    pub l: u64,
    pub f: u32,
    pub nonres: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u64, pub u64);

impl Fq {
    pub fn prime(l: u64) -> Fq {
        Fq { l, f: 1, nonres: 0 }
    }

    pub fn quadratic(l: u64, nonres: u64) -> Fq {
        Fq { l, f: 2, nonres: nonres % l }
    }

    pub fn q(&self) -> u64 {
        self.l.pow(self.f)
    }

    pub fn zero(&self) -> Fe {
        Fe(0, 0)
    }

    pub fn one(&self) -> Fe {
        Fe(1, 0)
    }

    pub fn int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.l as i64) as u64, 0)
    }

    pub fn theta(&self) -> Fe {
        assert_eq!(self.f, 2);
        Fe(0, 1)
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        let l = self.l;
        Fe((x.0 + y.0) % l, (x.1 + y.1) % l)
    }

    pub fn neg(&self, x: Fe) -> Fe {
        let l = self.l;
        Fe((l - x.0 % l) % l, (l - x.1 % l) % l)
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        let l = self.l;
        if self.f == 1 {
            return Fe(mulmod(x.0, y.0, l), 0);
        }
        let uu = mulmod(x.0, y.0, l);
        let ww = mulmod(x.1, y.1, l);
        let cross = (mulmod(x.0, y.1, l) + mulmod(x.1, y.0, l)) % l;
        if l == 2 {
            Fe((uu + ww) % 2, (cross + ww) % 2)
        } else {
            Fe((uu + mulmod(self.nonres, ww, l)) % l, cross)
        }
    }

    pub fn scale(&self, c: u64, x: Fe) -> Fe {
        self.mul(Fe(c % self.l, 0), x)
    }

    pub fn is_zero(&self, x: Fe) -> bool {
        x.0 % self.l == 0 && x.1 % self.l == 0
    }

    pub fn pow(&self, x: Fe, mut e: u128) -> Fe {
        let mut acc = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Conjugate `x^ℓ` (Frobenius of `𝔽_q / 𝔽_ℓ`).
    pub fn frob(&self, x: Fe) -> Fe {
        self.pow(x, self.l as u128)
    }

    pub fn inv(&self, x: Fe) -> Fe {
        assert!(!self.is_zero(x), "inverse of zero in residue field");
        if self.f == 1 {
            return Fe(invmod(x.0, self.l), 0);
        }
        // x · x^ℓ lies in 𝔽_ℓ
        let c = self.frob(x);
        let n = self.mul(x, c);
        debug_assert_eq!(n.1, 0);
        self.scale(invmod(n.0, self.l), c)
    }

    pub fn div(&self, x: Fe, y: Fe) -> Fe {
        self.mul(x, self.inv(y))
    }

    pub fn is_square(&self, x: Fe) -> bool {
        if self.is_zero(x) || self.l == 2 {
            return true;
        }
        self.pow(x, ((self.q() - 1) / 2) as u128) == self.one()
    }

    /// A square root, if it exists.
    pub fn sqrt(&self, x: Fe) -> Option<Fe> {
        if self.is_zero(x) {
            return Some(self.zero());
        }
        if self.l == 2 {
            return Some(self.pow(x, (self.q() / 2) as u128));
        }
        if !self.is_square(x) {
            return None;
        }
        let poly = vec![self.neg(x), self.zero(), self.one()];
        self.roots(&poly).into_iter().next()
    }

    /// The cube root in characteristic 3.
    pub fn cbrt_char3(&self, x: Fe) -> Fe {
        assert_eq!(self.l, 3);
        self.pow(x, (self.q() / 3) as u128)
    }

    /// All elements, in a deterministic order.
    pub fn elements(&self) -> Vec<Fe> {
        let mut v = Vec::new();
        for w in 0..(if self.f == 2 { self.l } else { 1 }) {
            for u in 0..self.l {
                v.push(Fe(u, w));
            }
        }
        v
    }

    /// A generator of `𝔽_q^×`.
    pub fn generator(&self) -> Fe {
        let q1 = self.q() - 1;
        let primes: Vec<u64> = crate::arith::factor(&num_bigint::BigInt::from(q1))
            .into_iter()
            .map(|(p, _)| u64::try_from(p).unwrap())
            .collect();
        for g in self.elements().into_iter().skip(1) {
            if primes.iter().all(|&r| self.pow(g, (q1 / r) as u128) != self.one()) {
                return g;
            }
        }
        unreachable!("no generator found")
    }

    // --- polynomials, coefficient vectors low degree first ---

    fn trim(&self, mut a: Vec<Fe>) -> Vec<Fe> {
        while a.last().is_some_and(|c| self.is_zero(*c)) {
            a.pop();
        }
        a
    }

    pub fn poly_eval(&self, a: &[Fe], x: Fe) -> Fe {
        a.iter().rev().fold(self.zero(), |acc, &c| self.add(self.mul(acc, x), c))
    }

    fn poly_sub(&self, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let n = a.len().max(b.len());
        let z = self.zero();
        self.trim((0..n).map(|i| self.sub(*a.get(i).unwrap_or(&z), *b.get(i).unwrap_or(&z))).collect())
    }

    fn poly_mul(&self, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(out)
    }

    fn poly_divrem(&self, a: &[Fe], b: &[Fe]) -> (Vec<Fe>, Vec<Fe>) {
        let b = self.trim(b.to_vec());
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut r = self.trim(a.to_vec());
        if r.len() < b.len() {
            return (vec![], r);
        }
        let lead_inv = self.inv(*b.last().unwrap());
        let mut q = vec![self.zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(*r.last().unwrap(), lead_inv);
            q[shift] = c;
            for (i, &bc) in b.iter().enumerate() {
                r[i + shift] = self.sub(r[i + shift], self.mul(c, bc));
            }
            r = self.trim(r);
        }
        (self.trim(q), r)
    }

    fn poly_monic(&self, a: Vec<Fe>) -> Vec<Fe> {
        let a = self.trim(a);
        match a.last() {
            None => a,
            Some(&c) => {
                let inv = self.inv(c);
                a.into_iter().map(|x| self.mul(x, inv)).collect()
            }
        }
    }

    pub fn poly_gcd(&self, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let mut a = self.trim(a.to_vec());
        let mut b = self.trim(b.to_vec());
        while !b.is_empty() {
            let (_, r) = self.poly_divrem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(a)
    }

    fn poly_powmod(&self, base: &[Fe], mut e: u128, m: &[Fe]) -> Vec<Fe> {
        let mut acc = vec![self.one()];
        let mut b = self.poly_divrem(base, m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_divrem(&self.poly_mul(&acc, &b), m).1;
            }
            b = self.poly_divrem(&self.poly_mul(&b, &b), m).1;
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in `𝔽_q` of a nonzero polynomial, sorted.
    pub fn roots(&self, a: &[Fe]) -> Vec<Fe> {
        let a = self.poly_monic(a.to_vec());
        if a.len() <= 1 {
            return vec![];
        }
        // split off the product of distinct linear factors
        let xq = self.poly_powmod(&[self.zero(), self.one()], self.q() as u128, &a);
        let g = self.poly_gcd(&a, &self.poly_sub(&xq, &[self.zero(), self.one()]));
        let mut out = Vec::new();
        let mut seed = 0x9e3779b97f4a7c15u64;
        self.split_linear(g, &mut out, &mut seed);
        out.sort();
        out
    }

    fn split_linear(&self, g: Vec<Fe>, out: &mut Vec<Fe>, seed: &mut u64) {
        let deg = g.len().saturating_sub(1);
        if deg == 0 {
            return;
        }
        if deg == 1 {
            out.push(self.neg(g[0]));
            return;
        }
        if self.q() <= 64 || self.l == 2 {
            for x in self.elements() {
                if self.is_zero(self.poly_eval(&g, x)) {
                    out.push(x);
                }
            }
            return;
        }
        loop {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let c = Fe((*seed >> 11) % self.l, (*seed >> 37) % self.l * (self.f as u64 - 1));
            let t = vec![c, self.one()];
            let h = self.poly_powmod(&t, ((self.q() - 1) / 2) as u128, &g);
            let h = self.poly_sub(&h, &[self.one()]);
            let d = self.poly_gcd(&g, &h);
            let dd = d.len().saturating_sub(1);
            if dd > 0 && dd < deg {
                let (q, _) = self.poly_divrem(&g, &d);
                self.split_linear(d, out, seed);
                self.split_linear(self.poly_monic(q), out, seed);
                return;
            }
        }
    }
}

/// Whether `l` is an admissible residue characteristic.
pub fn check_prime(l: u64) -> bool {
    is_prime_u64(l)
}
