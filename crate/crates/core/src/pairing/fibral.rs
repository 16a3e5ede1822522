//! Fibral corrections `F_Q` and their extensions `G_Q` to the minimal regular model.
//!
//! Components are labelled as in the fibral tables: `Γ₀` is the identity
//! component, the multiplicity-one components meeting the Néron model come
//! first (`Γ₁..Γ_{|Φ|−1}`), and the remaining components of the regular model
//! follow.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::ellcurve::Kodaira;
use crate::error::{Error, Result};
use crate::qfield::Place;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn qs(v: &[(i64, i64)]) -> Vec<BigRational> {
    v.iter().map(|&(n, d)| q(n, d)).collect()
}

/// `F_Q = Σ a_i Γ_i` at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibralCorrection {
    #[serde(serialize_with = "place_str")]
    pub place: Place,
    #[serde(serialize_with = "kodaira_str")]
    pub kodaira: Kodaira,
    /// Component of `Q`.
    pub component: u32,
    /// `a_0..a_{|Φ|−1}`, with `a_0 = 0`.
    #[serde(serialize_with = "rats_str")]
    pub coeffs: Vec<BigRational>,
}

fn place_str<S: serde::Serializer>(v: &Place, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn kodaira_str<S: serde::Serializer>(k: &Kodaira, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&k.to_string())
}

fn rats_str<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl FibralCorrection {
    pub fn new(place: &Place, kodaira: Kodaira, component: u32) -> Result<FibralCorrection> {
        Ok(FibralCorrection { place: place.clone(), kodaira, component, coeffs: fibral_coeffs(kodaira, component)? })
    }

    /// Coefficient on `Γ_j`.
    pub fn at(&self, j: u32) -> BigRational {
        self.coeffs.get(j as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

fn unsupported(kod: Kodaira, k: u32) -> Error {
    Error::Inconsistent(format!("no fibral table for a point on Γ{} of a fibre of type {}", k, kod))
}

/// Coefficients of `F_Q` on `Γ_0..Γ_{|Φ|−1}` for `Q ∈ Γ_k`.
pub fn fibral_coeffs(kod: Kodaira, k: u32) -> Result<Vec<BigRational>> {
    let r = kod.phi_order() as usize;
    if k as usize >= r.max(1) {
        return Err(unsupported(kod, k));
    }
    if k == 0 {
        return Ok(vec![BigRational::zero(); r]);
    }
    let mut g = g_q(kod, k)?;
    g.truncate(r);
    Ok(g)
}

/// The full divisor `G_Q` on `Γ_0..Γ_{c−1}` of the minimal regular model, for `Q ∈ Γ_k`, `k ≠ 0`.
pub fn g_q(kod: Kodaira, k: u32) -> Result<Vec<BigRational>> {
    let c = kod.components() as usize;
    let mut g = vec![BigRational::zero(); c];
    match kod {
        Kodaira::I(n) if n > 1 && k < n => {
            let (n, k) = (n as i64, k as i64);
            for i in 1..n {
                g[i as usize] = if i <= k { q(i * (n - k), n) } else { q((n - i) * k, n) };
            }
        }
        Kodaira::III if k == 1 => g[1] = q(1, 2),
        Kodaira::IIIStar if k == 1 => {
            g = qs(&[(0, 1), (3, 2), (1, 1), (2, 1), (2, 1), (5, 2), (3, 1), (3, 2)]);
        }
        Kodaira::IV if k == 1 => g = qs(&[(0, 1), (2, 3), (1, 3)]),
        Kodaira::IV if k == 2 => g = qs(&[(0, 1), (1, 3), (2, 3)]),
        Kodaira::IVStar if k == 1 => g = qs(&[(0, 1), (4, 3), (2, 3), (1, 1), (5, 3), (4, 3), (2, 1)]),
        Kodaira::IVStar if k == 2 => g = qs(&[(0, 1), (2, 3), (4, 3), (1, 1), (4, 3), (5, 3), (2, 1)]),
        Kodaira::IStar(n) if k == 1 => {
            let n = n as usize;
            g[1] = q(1, 1);
            g[2] = q(1, 2);
            g[3] = q(1, 2);
            for i in 0..=n {
                g[4 + i] = q(1, 1);
            }
        }
        Kodaira::IStar(n) if k == 2 || k == 3 => {
            let n = n as usize;
            let (near, far) = if k == 2 { (2, 3) } else { (3, 2) };
            g[1] = q(1, 2);
            g[near] = q(n as i64 + 4, 4);
            g[far] = q(n as i64 + 2, 4);
            for i in 0..=n {
                g[4 + i] = q(i as i64 + 2, 2);
            }
        }
        _ => return Err(unsupported(kod, k)),
    }
    Ok(g)
}

/// Intersection matrix of the special fibre of the minimal regular model, in table labelling.
pub fn intersection_matrix(kod: Kodaira) -> Vec<Vec<i64>> {
    let c = kod.components() as usize;
    let mut a = vec![vec![0i64; c]; c];
    let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize, w: i64| {
        a[i][j] += w;
        a[j][i] += w;
    };
    match kod {
        Kodaira::I(n) if n >= 2 => {
            let n = n as usize;
            for i in 0..n {
                link(&mut a, i, (i + 1) % n, 1);
            }
        }
        Kodaira::III => link(&mut a, 0, 1, 2),
        Kodaira::IV => {
            link(&mut a, 0, 1, 1);
            link(&mut a, 1, 2, 1);
            link(&mut a, 0, 2, 1);
        }
        Kodaira::IIIStar => {
            let chain = [0, 2, 4, 6, 5, 3, 1];
            for w in chain.windows(2) {
                link(&mut a, w[0], w[1], 1);
            }
            link(&mut a, 7, 6, 1);
        }
        Kodaira::IVStar => {
            for i in 3..6 {
                link(&mut a, i, i - 3, 1);
                link(&mut a, i, 6, 1);
            }
        }
        Kodaira::IStar(n) => {
            let n = n as usize;
            link(&mut a, 4, 0, 1);
            link(&mut a, 4, 1, 1);
            for i in 4..4 + n {
                link(&mut a, i, i + 1, 1);
            }
            link(&mut a, 4 + n, 2, 1);
            link(&mut a, 4 + n, 3, 1);
        }
        _ => {}
    }
    for (i, row) in a.iter_mut().enumerate() {
        if c > 1 {
            row[i] = -2;
        }
    }
    a
}

/// Checks `Γ·([Q] − [O] + G_Q) = 0` for every component `Γ`, with `Q ∈ Γ_k`.
pub fn verify_gq(kod: Kodaira, k: u32) -> Result<()> {
    let g = g_q(kod, k)?;
    let a = intersection_matrix(kod);
    for (i, row) in a.iter().enumerate() {
        let mut s: BigRational = row.iter().zip(&g).map(|(&x, y)| y * BigRational::from_integer(x.into())).sum();
        if i == k as usize {
            s += q(1, 1);
        }
        if i == 0 {
            s -= q(1, 1);
        }
        if !s.is_zero() {
            return Err(Error::Inconsistent(format!(
                "G_Q table for {} with Q on Γ{} fails on Γ{}: intersection {}",
                kod, k, i, s
            )));
        }
    }
    Ok(())
}
