//! The Kummer map `κ: E'(K) → K^×/p` attached to `⟨P⟩`.
//!
//! `f` is the function on `E'` with divisor `p(P) − p(O)`, normalized at `O`
//! and found by linear algebra in `L(p·O)`. Then `κ(Q) = 1/f(Q)` for
//! `Q ∉ {O, P}`, and `κ(P)` is the inverse of the leading coefficient of `f`
//! at `P` in the uniformizer `x − x(P)`. Both are well defined modulo `p`-th
//! powers since every multiplicity of `div f` is divisible by `p`. The
//! inverse makes `(1/p)·div ∘ κ` agree with `Q ↦ ⟨P, Q⟩`.

use crate::ellcurve::{Point, WeierstrassModel};
use crate::error::{Error, Result};
use crate::qfield::FieldElement;

type Series = Vec<FieldElement>;

fn s_mul(a: &Series, b: &Series, n: usize) -> Series {
    let m = a[0].field_m();
    let mut c = vec![FieldElement::zero(m); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            c[i + j] = &c[i + j] + &(x * y);
        }
    }
    c
}

fn s_inv(a: &Series, n: usize) -> Series {
    let m = a[0].field_m();
    let i0 = a[0].inv();
    let mut b = vec![FieldElement::zero(m); n];
    b[0] = i0.clone();
    for k in 1..n {
        let mut s = FieldElement::zero(m);
        for j in 1..=k.min(a.len() - 1) {
            s = &s + &(&a[j] * &b[k - j]);
        }
        b[k] = -&(&s * &i0);
    }
    b
}

fn pad(mut a: Series, n: usize) -> Series {
    let m = a[0].field_m();
    a.resize(n, FieldElement::zero(m));
    a
}

/// Expansions of `x` and `y` at the affine point `(x0, y0)` in `t = x − x0`, to `n` terms.
fn local_expansion(e: &WeierstrassModel, x0: &FieldElement, y0: &FieldElement, n: usize) -> Result<(Series, Series)> {
    let m = e.m();
    let fe = |k: i64| FieldElement::from_int(m, k);
    let x = pad(vec![x0.clone(), fe(1)], n);
    let x2 = s_mul(&x, &x, n);
    let x3 = s_mul(&x2, &x, n);
    let lin: Series = (0..n).map(|i| &(&e.a1 * &x[i]) + &if i == 0 { e.a3.clone() } else { fe(0) }).collect();
    let g: Series = (0..n)
        .map(|i| &(&(&x3[i] + &(&e.a2 * &x2[i])) + &(&e.a4 * &x[i])) + &if i == 0 { e.a6.clone() } else { fe(0) })
        .collect();
    // y = y0 + w with w² + A·w + B = 0
    let a: Series = (0..n).map(|i| &lin[i] + &if i == 0 { &fe(2) * y0 } else { fe(0) }).collect();
    if a[0].is_zero() {
        return Err(Error::Input("expansion at a 2-torsion point".into()));
    }
    let b: Series = (0..n).map(|i| &(&(&lin[i] * y0) - &g[i]) + &if i == 0 { y0 * y0 } else { fe(0) }).collect();
    if !b[0].is_zero() {
        return Err(Error::NotOnCurve(format!("({}, {})", x0, y0)));
    }
    let ai = s_inv(&a, n);
    let mut w = vec![fe(0); n];
    for _ in 0..n {
        let w2 = s_mul(&w, &w, n);
        let num: Series = (0..n).map(|i| -&(&b[i] + &w2[i])).collect();
        w = s_mul(&num, &ai, n);
    }
    let y = (0..n).map(|i| &w[i] + &if i == 0 { y0.clone() } else { fe(0) }).collect();
    Ok((x, y))
}

/// Basis of the null space of a matrix over `K`.
pub(crate) fn nullspace(rows: &[Vec<FieldElement>], cols: usize, m: i64) -> Vec<Vec<FieldElement>> {
    let mut a: Vec<Vec<FieldElement>> = rows.to_vec();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, k);
        let inv = a[r][c].inv();
        a[r] = a[r].iter().map(|x| x * &inv).collect();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                a[i] = a[i].iter().zip(&a[r]).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![FieldElement::zero(m); cols];
            v[f] = FieldElement::one(m);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[i][f];
            }
            v
        })
        .collect()
}

/// `f = Σ c_{ij} x^i y^j` with `div f = p(P) − p(O)`.
#[derive(Clone, Debug)]
pub struct MillerFunction {
    pub curve: WeierstrassModel,
    pub p: u64,
    pub pt: Point,
    /// `((i, j), c_{ij})`, with the coefficient of `x^{(p−3)/2} y` equal to one.
    pub terms: Vec<((u32, u32), FieldElement)>,
    /// Leading coefficient at `P` in `t = x − x(P)`.
    pub lead_at_p: FieldElement,
}

impl MillerFunction {
    pub fn new(e: &WeierstrassModel, pt: &Point, p: u64) -> Result<MillerFunction> {
        if p < 3 || p % 2 == 0 || e.order(pt, p) != Some(p) {
            return Err(Error::BadTorsion(format!("{} does not have odd prime order {}", pt, p)));
        }
        let (x0, y0) = (pt.x().unwrap(), pt.y().unwrap());
        let m = e.m();
        let n = p as usize + 1;
        let (xs, ys) = local_expansion(e, x0, y0, n)?;
        let mut mons = vec![];
        for i in 0..=p / 2 {
            for j in 0..2 {
                if 2 * i + 3 * j <= p {
                    mons.push((i as u32, j as u32));
                }
            }
        }
        let mut xp = vec![pad(vec![FieldElement::one(m)], n)];
        for _ in 0..=p / 2 {
            let next = s_mul(xp.last().unwrap(), &xs, n);
            xp.push(next);
        }
        let series: Vec<Series> = mons
            .iter()
            .map(|&(i, j)| if j == 0 { xp[i as usize].clone() } else { s_mul(&xp[i as usize], &ys, n) })
            .collect();
        let rows: Vec<Vec<FieldElement>> =
            (0..p as usize).map(|k| series.iter().map(|s| s[k].clone()).collect()).collect();
        let ker = nullspace(&rows, mons.len(), m);
        if ker.len() != 1 {
            return Err(Error::Inconsistent(format!(
                "space of functions with divisor p(P) − p(O) has dimension {}",
                ker.len()
            )));
        }
        let top = mons.iter().position(|&(i, j)| j == 1 && 2 * i + 3 == p as u32).expect("leading monomial");
        let scale = ker[0][top].inv();
        let c: Vec<FieldElement> = ker[0].iter().map(|x| x * &scale).collect();
        let lead_at_p = series.iter().zip(&c).fold(FieldElement::zero(m), |acc, (s, ci)| &acc + &(ci * &s[p as usize]));
        let terms = mons.into_iter().zip(c).filter(|(_, c)| !c.is_zero()).collect();
        Ok(MillerFunction { curve: e.clone(), p, pt: pt.clone(), terms, lead_at_p })
    }

    pub fn eval(&self, q: &Point) -> Option<FieldElement> {
        let (x, y) = match q {
            Point::Infinity => return None,
            Point::Affine(x, y) => (x, y),
        };
        let m = self.curve.m();
        let v = self.terms.iter().fold(FieldElement::zero(m), |acc, ((i, j), c)| {
            let mut t = c * &x.pow(*i as i64);
            if *j == 1 {
                t = &t * y;
            }
            &acc + &t
        });
        if v.is_zero() {
            None
        } else {
            Some(v)
        }
    }
}

/// How a Kummer value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KummerMethod {
    Origin,
    Evaluation,
    LeadingTermAtP,
    Shifted,
}

#[derive(Clone, Debug)]
pub struct KummerClass {
    pub point: Point,
    /// A representative in `K^×`, meaningful modulo `p`-th powers.
    pub value: FieldElement,
    pub method: KummerMethod,
}

impl MillerFunction {
    /// `κ(Q)`.
    pub fn kummer(&self, q: &Point) -> KummerClass {
        let m = self.curve.m();
        let (value, method) = if q.is_infinity() {
            (FieldElement::one(m), KummerMethod::Origin)
        } else if q == &self.pt {
            (self.lead_at_p.inv(), KummerMethod::LeadingTermAtP)
        } else {
            (self.eval(q).expect("f vanishes only at P").inv(), KummerMethod::Evaluation)
        };
        KummerClass { point: q.clone(), value, method }
    }

    /// `f(T)/f(Q+T)`, defined when `T` and `Q + T` avoid `O` and `P`.
    pub fn kummer_shifted(&self, q: &Point, t: &Point) -> Option<KummerClass> {
        let qt = self.curve.add(q, t);
        let a = self.eval(&qt)?;
        let b = self.eval(t)?;
        if qt == self.pt || t == &self.pt {
            return None;
        }
        Some(KummerClass { point: q.clone(), value: &b * &a.inv(), method: KummerMethod::Shifted })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QuadField;

    #[test]
    fn miller_function_has_the_right_divisor() {
        let k = QuadField::rationals();
        let e = WeierstrassModel::from_ints(&k, [0, -1, 1, -10, -20]).unwrap();
        let pt = e.parse_point("(5, 5)").unwrap();
        let f = MillerFunction::new(&e, &pt, 5).unwrap();
        // 5-th order zero at P: f(P) = 0, and f(−P), f(2P) are nonzero
        assert!(f.eval(&pt).is_none());
        assert!(f.eval(&e.neg(&pt)).is_some());
        assert!(f.eval(&e.mul(2, &pt)).is_some());
        assert!(!f.lead_at_p.is_zero());
        assert!(f.terms.iter().any(|t| t.0 == (1, 1)));
        assert!(f.terms.iter().all(|t| 2 * t.0 .0 + 3 * t.0 .1 <= 5));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = 1;
        let fe = |n| FieldElement::from_int(m, n);
        let rows = vec![vec![fe(1), fe(2), fe(3)], vec![fe(2), fe(4), fe(6)]];
        let ker = nullspace(&rows, 3, m);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!((&(&v[0] + &(&fe(2) * &v[1])) + &(&fe(3) * &v[2])).is_zero());
        }
    }
}
