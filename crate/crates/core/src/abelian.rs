//! Finite abelian groups from relation matrices, and linear algebra over `𝔽_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Smith form of a relation matrix: `ℤ^n / rowspace(R) ≅ ⊕ ℤ/dᵢ`.
///
/// `x ↦ x·v` carries generator coordinates to Smith coordinates; row `i` of
/// `v_inv` expresses the `i`-th Smith generator in the original generators.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

impl Smith {
    /// `relations` has one row per relation and `n` columns.
    pub fn new(relations: &[Vec<BigInt>], n: usize) -> Smith {
        let mut a: IntMatrix = relations.to_vec();
        let rows = a.len();
        let mut v = identity(n);
        let mut v_inv = identity(n);
        let col_sub = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, j: usize, t: usize, q: &BigInt| {
            // column j -= q * column t
            for row in a.iter_mut() {
                let d = &row[t] * q;
                row[j] -= d;
            }
            for row in v.iter_mut() {
                let d = &row[t] * q;
                row[j] -= d;
            }
            let rj = vi[j].clone();
            for (x, y) in vi[t].iter_mut().zip(rj.iter()) {
                *x += y * q;
            }
        };
        let col_swap = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, i: usize, j: usize| {
            for row in a.iter_mut() {
                row.swap(i, j);
            }
            for row in v.iter_mut() {
                row.swap(i, j);
            }
            vi.swap(i, j);
        };
        let mut diag = Vec::new();
        let mut t = 0;
        while t < n.min(rows) {
            // pivot: smallest nonzero entry in the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..n {
                    if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            col_swap(&mut a, &mut v, &mut v_inv, t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..rows {
                    if a[i][t].is_zero() {
                        continue;
                    }
                    let q = a[i][t].div_floor(&a[t][t]);
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(rt.iter()) {
                        *x -= y * &q;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    if a[t][j].is_zero() {
                        continue;
                    }
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_sub(&mut a, &mut v, &mut v_inv, j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    // divisibility of the remaining block
                    let mut fix = None;
                    'outer: for i in t + 1..rows {
                        for j in t + 1..n {
                            if !(&a[i][j] % &a[t][t]).is_zero() {
                                fix = Some(i);
                                break 'outer;
                            }
                        }
                    }
                    match fix {
                        None => break,
                        Some(i) => {
                            let ri = a[i].clone();
                            for (x, y) in a[t].iter_mut().zip(ri.iter()) {
                                *x += y;
                            }
                            clean = false;
                        }
                    }
                }
                if !clean {
                    // move the smallest nonzero entry of row/column t to the pivot
                    let mut best = (t, t);
                    for i in t..rows {
                        if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t..n {
                        if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    if best.0 != t {
                        a.swap(t, best.0);
                    }
                    if best.1 != t {
                        col_swap(&mut a, &mut v, &mut v_inv, t, best.1);
                    }
                }
            }
            if a[t][t].is_negative() {
                for row in a.iter_mut() {
                    row[t] = -&row[t];
                }
                for row in v.iter_mut() {
                    row[t] = -&row[t];
                }
                for x in v_inv[t].iter_mut() {
                    *x = -&*x;
                }
            }
            diag.push(a[t][t].clone());
            t += 1;
        }
        while diag.len() < n {
            diag.push(BigInt::zero());
        }
        Smith { diag, v, v_inv }
    }

    /// Smith coordinates of a generator-exponent vector, reduced mod `dᵢ`.
    pub fn coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        let n = self.diag.len();
        (0..n)
            .map(|j| {
                let s: BigInt = (0..n).map(|i| &x[i] * &self.v[i][j]).sum();
                if self.diag[j].is_zero() {
                    s
                } else {
                    s.mod_floor(&self.diag[j])
                }
            })
            .collect()
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.diag.iter().any(|d| d.is_zero()) {
            return None;
        }
        Some(self.diag.iter().product())
    }

    /// Indices of the nontrivial cyclic factors.
    pub fn nontrivial(&self) -> Vec<usize> {
        (0..self.diag.len()).filter(|&i| !self.diag[i].is_one()).collect()
    }
}

/// Reduced row echelon form over `𝔽_p`; returns pivot columns.
pub fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] % p != 0) else { continue };
        m.swap(r, pr);
        let inv = crate::arith::invmod(m[r][c] % p, p);
        for x in m[r].iter_mut() {
            *x = crate::arith::mulmod(*x % p, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] % p != 0 {
                let f = m[i][c] % p;
                for j in 0..cols {
                    let sub = crate::arith::mulmod(f, m[r][j], p);
                    m[i][j] = (m[i][j] % p + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, p).len()
}

/// Basis of `{x : M·x = 0}` over `𝔽_p`, where `M` has `cols` columns.
pub fn kernel_mod_p(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; cols];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - a[r][f] % p) % p;
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn smith_of_small_matrix() {
        let s = Smith::new(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3);
        let d: Vec<i64> = s.diag.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn smith_inverse_is_inverse() {
        let s = Smith::new(&mat(&[&[5, 0, 3], &[0, 4, 1], &[2, 2, 2]]), 3);
        for i in 0..3 {
            for j in 0..3 {
                let e: BigInt = (0..3).map(|k| &s.v[i][k] * &s.v_inv[k][j]).sum();
                assert_eq!(e, BigInt::from((i == j) as i64));
            }
        }
    }

    #[test]
    fn kernel_over_fp() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let k = kernel_mod_p(&m, 3, 5);
        assert_eq!(k.len(), 2);
        for x in k {
            assert_eq!((x[0] + 2 * x[1] + 3 * x[2]) % 5, 0);
        }
    }
}
