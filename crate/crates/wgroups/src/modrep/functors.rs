//! Dual, tensor and direct sum, exterior and symmetric powers.

use super::{GModule, ModError};
use gf2core::BitMatrix;
use std::collections::HashMap;

impl GModule {
    /// M* with σ acting by (σ⁻¹)ᵀ = σᵀ.
    pub fn dual(&self) -> GModule {
        GModule::new_unchecked(
            self.n,
            self.dim,
            self.action.iter().map(|a| a.transpose()).collect(),
        )
    }

    pub fn tensor(&self, other: &GModule) -> Result<GModule, ModError> {
        if self.n != other.n {
            return Err(ModError::GroupMismatch(self.n, other.n));
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.kronecker(b))
            .collect();
        Ok(GModule::new_unchecked(self.n, self.dim * other.dim, action))
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<GModule, ModError> {
        if self.n != other.n {
            return Err(ModError::GroupMismatch(self.n, other.n));
        }
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                BitMatrix::from_fn(d, d, |r, c| match (r < self.dim, c < self.dim) {
                    (true, true) => a.get(r, c),
                    (false, false) => b.get(r - self.dim, c - self.dim),
                    _ => false,
                })
            })
            .collect();
        Ok(GModule::new_unchecked(self.n, d, action))
    }

    pub fn direct_sum_all(n: usize, parts: &[GModule]) -> Result<GModule, ModError> {
        parts
            .iter()
            .try_fold(GModule::zero(n), |acc, m| acc.direct_sum(m))
    }

    /// Λ^q M with basis the increasing q-subsets of the basis of M in lexicographic order.
    pub fn ext_power(&self, q: usize) -> Result<GModule, ModError> {
        if q > 12 {
            return Err(ModError::OutOfRange(format!("exterior power {q}")));
        }
        let subsets = subsets(self.dim, q);
        let d = subsets.len();
        let action = self
            .action
            .iter()
            .map(|a| {
                // Entry (S, T) is the S×T minor of a.
                BitMatrix::from_fn(d, d, |r, c| {
                    let (s, t) = (&subsets[r], &subsets[c]);
                    let minor = BitMatrix::from_fn(q, q, |i, j| a.get(s[i], t[j]));
                    minor.rank() == q
                })
            })
            .collect();
        Ok(GModule::new_unchecked(self.n, d, action))
    }

    /// S^q M as the degree-q part of the polynomial ring on a basis of M.
    pub fn sym_power(&self, q: usize) -> Result<GModule, ModError> {
        Ok(self
            .sym_powers(q)?
            .pop()
            .expect("degree 0 is always present"))
    }

    /// S⁰M, …, S^{qmax}M. The basis of S^q is the list of exponent vectors of
    /// degree q in lexicographic order (largest exponent of x₁ first).
    pub fn sym_powers(&self, qmax: usize) -> Result<Vec<GModule>, ModError> {
        if qmax > 12 {
            return Err(ModError::OutOfRange(format!("symmetric power {qmax}")));
        }
        let d = self.dim;
        let mut out = vec![GModule::trivial(self.n)];
        let mut prev_monos: Vec<Vec<u8>> = vec![vec![0; d]];
        // Images of degree q−1 monomials, per generator, as rows.
        let mut prev_images: Vec<BitMatrix> = vec![BitMatrix::identity(1); self.n];
        for q in 1..=qmax {
            let monos = monomials(d, q);
            let index: HashMap<&[u8], usize> = monos
                .iter()
                .enumerate()
                .map(|(k, m)| (m.as_slice(), k))
                .collect();
            // times[k][v]: index of prev monomial k multiplied by x_v.
            let times: Vec<Vec<usize>> = prev_monos
                .iter()
                .map(|m| {
                    (0..d)
                        .map(|v| {
                            let mut e = m.clone();
                            e[v] += 1;
                            index[e.as_slice()]
                        })
                        .collect()
                })
                .collect();
            let mut images = Vec::with_capacity(self.n);
            for (gi, a) in self.action.iter().enumerate() {
                let at = a.transpose(); // row v = image of x_v
                let mut img = BitMatrix::zeros(monos.len(), monos.len());
                for (k, m) in monos.iter().enumerate() {
                    let v = m.iter().rposition(|&e| e > 0).expect("degree ≥ 1");
                    let mut rest = m.clone();
                    rest[v] -= 1;
                    let rk = prev_index(&prev_monos, &rest);
                    let lin: Vec<usize> = at.row_ones(v).collect();
                    for u in prev_images[gi].row_ones(rk).collect::<Vec<_>>() {
                        for &w in &lin {
                            img.flip(k, times[u][w]);
                        }
                    }
                }
                images.push(img);
            }
            let action = images.iter().map(|m| m.transpose()).collect();
            out.push(GModule::new_unchecked(self.n, monos.len(), action));
            prev_images = images;
            prev_monos = monos;
        }
        Ok(out)
    }
}

fn prev_index(monos: &[Vec<u8>], m: &[u8]) -> usize {
    // Lexicographic order with larger exponents first is descending order.
    monos
        .binary_search_by(|x| m.cmp(x.as_slice()))
        .expect("monomial present")
}

/// Increasing q-subsets of 0..d in lexicographic order.
pub(crate) fn subsets(d: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, q, &mut Vec::new(), &mut out);
    out
}

/// Exponent vectors of total degree q in d variables, in descending lexicographic order.
pub(crate) fn monomials(d: usize, q: usize) -> Vec<Vec<u8>> {
    fn rec(i: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let d = cur.len();
        if i == d - 1 {
            cur[i] = left as u8;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if d == 0 {
        return if q == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(0, q, &mut vec![0; d], &mut out);
    out
}
