//! Mod-2 cohomology of finite 2-groups from minimal free resolutions, restriction
//! to subgroups, and the low-degree differentials of central extensions by E_n.

mod d2;
mod series;

pub use d2::{d2_01, d2_11, d2_11_matrix, einfty11, CentralExtension, EInfty11, PolyClass};
pub use series::{expand_rational, poly_mul, poly_pow, verify_rational_series};

use crate::group2::{FiniteGroup, Subgroup};
use gf2core::{BitMatrix, BitVec};
use serde::Serialize;
use thiserror::Error;

pub const MAX_ORDER: usize = 1 << 8;
pub const MAX_DEGREE: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomError {
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("extension is not central: σ_{0} acts nontrivially on the kernel")]
    NotCentral(usize),
    #[error("resolution check failed in degree {degree}: {what}")]
    Verification { degree: usize, what: String },
}

/// Minimal free resolution P_D → … → P_0 → F₂ over F₂[G].
///
/// A vector in P_i = F₂[G]^{b_i} has coordinate `k·|G| + g` for the basis element g·e_k.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    group: FiniteGroup,
    pub ranks: Vec<usize>,
    /// `boundaries[i]` for i ≥ 1 has one row per generator of P_i: its image in P_{i−1}.
    /// `boundaries[0]` is empty.
    pub boundaries: Vec<BitMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionChecks {
    pub minimal: bool,
    pub composite_zero: bool,
}

/// Left multiplication by h on a free module.
fn act_left(g: &FiniteGroup, h: usize, v: &BitVec) -> BitVec {
    let n = g.order();
    let mut out = BitVec::zeros(v.len());
    for idx in v.iter_ones() {
        out.set(idx - idx % n + g.mul(h, idx % n), true);
    }
    out
}

/// Rows `j·|G| + h` hold h·images[j].
fn expand(g: &FiniteGroup, images: &BitMatrix) -> BitMatrix {
    let n = g.order();
    let len = images.cols();
    let mut out = BitMatrix::zeros(images.rows() * n, len);
    for j in 0..images.rows() {
        let ones: Vec<usize> = images.row_ones(j).collect();
        for h in 0..n {
            let row = out.row_mut(j * n + h);
            for &idx in &ones {
                let t = idx - idx % n + g.mul(h, idx % n);
                row[t / 64] |= 1u64 << (t % 64);
            }
        }
    }
    out
}

/// A generating set with redundant members removed, scanning from the end.
pub(crate) fn minimal_generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = g.gens.clone();
    let mut i = gens.len();
    while i > 0 {
        i -= 1;
        let mut trial = gens.clone();
        trial.remove(i);
        if g.closure(&trial).order() == g.order() {
            gens = trial;
        }
    }
    gens
}

impl MinimalResolution {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn max_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    /// Matrix of ∂_i : P_i → P_{i−1} acting on column vectors, for 1 ≤ i ≤ D.
    pub fn boundary_matrix(&self, i: usize) -> BitMatrix {
        expand(&self.group, &self.boundaries[i]).transpose()
    }

    /// ∂_i(v) for v ∈ P_i.
    pub fn apply_boundary(&self, i: usize, v: &BitVec) -> BitVec {
        let n = self.group.order();
        let b = &self.boundaries[i];
        let mut out = BitVec::zeros(b.cols());
        for idx in v.iter_ones() {
            let (k, g) = (idx / n, idx % n);
            out.xor_assign(&act_left(&self.group, g, &b.row_vec(k)));
        }
        out
    }

    /// Re-verifies minimality and ∂∘∂ = 0 on every generator.
    pub fn verify(&self) -> ResolutionChecks {
        let n = self.group.order();
        let mut minimal = true;
        let mut composite_zero = true;
        for i in 1..self.boundaries.len() {
            let b = &self.boundaries[i];
            for j in 0..b.rows() {
                let v = b.row_vec(j);
                let mut parity = vec![false; self.ranks[i - 1]];
                for idx in v.iter_ones() {
                    parity[idx / n] ^= true;
                }
                minimal &= parity.iter().all(|p| !p);
                if i >= 2 {
                    composite_zero &= self.apply_boundary(i - 1, &v).is_zero();
                }
            }
        }
        ResolutionChecks {
            minimal,
            composite_zero,
        }
    }
}

/// Computes b_0, …, b_D. Each step takes the kernel of the previous boundary and
/// picks generators complementary to I·K, where I is the augmentation ideal.
pub fn minimal_resolution(
    g: &FiniteGroup,
    max_degree: usize,
) -> Result<MinimalResolution, CohomError> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(CohomError::ResourceCap(format!(
            "group order {n} exceeds {MAX_ORDER}"
        )));
    }
    if max_degree > MAX_DEGREE {
        return Err(CohomError::ResourceCap(format!(
            "degree {max_degree} exceeds {MAX_DEGREE}"
        )));
    }
    let gens = minimal_generators(g);
    let mut ranks = vec![1];
    let mut boundaries = vec![BitMatrix::zeros(0, 0)];
    // The augmentation F₂[G] → F₂ as a 1 × |G| matrix.
    let mut current = BitMatrix::from_fn(1, n, |_, _| true);
    for i in 1..=max_degree {
        let ech = current.into_rref();
        let free = ech.free_columns();
        let kernel = ech.kernel();
        drop(ech);
        // I·K restricted to the free coordinates, which identify K with F₂^{|free|}.
        let mut rad = BitMatrix::zeros(0, free.len());
        for &s in &gens {
            let mut img = BitMatrix::zeros(kernel.rows(), kernel.cols());
            for r in 0..kernel.rows() {
                let v = kernel.row_vec(r);
                let w = act_left(g, s, &v).xor(&v);
                img.row_mut(r).copy_from_slice(w.words());
            }
            rad = rad.vstack(&img.select_cols(&free)).expect("width");
        }
        let ech = rad.echelon();
        drop(rad);
        let mut is_pivot = vec![false; free.len()];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let new_gens: Vec<usize> = (0..free.len()).filter(|&c| !is_pivot[c]).collect();
        let images = kernel.select_rows(&new_gens);
        ranks.push(images.rows());
        if i < max_degree {
            current = expand(g, &images).transpose();
        } else {
            current = BitMatrix::zeros(0, 0);
        }
        boundaries.push(images);
    }
    let res = MinimalResolution {
        group: g.clone(),
        ranks,
        boundaries,
    };
    let checks = res.verify();
    if !checks.minimal {
        return Err(CohomError::Verification {
            degree: max_degree,
            what: "boundary entries outside the augmentation ideal".into(),
        });
    }
    if !checks.composite_zero {
        return Err(CohomError::Verification {
            degree: max_degree,
            what: "consecutive boundaries do not compose to zero".into(),
        });
    }
    Ok(res)
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionRank {
    pub degree: usize,
    /// dim H^i(G).
    pub source_dim: usize,
    /// Rank of H^i(G) → ⊕_j H^i(H_j).
    pub joint_rank: usize,
    /// Rank of each individual restriction.
    pub ranks: Vec<usize>,
}

impl RestrictionRank {
    pub fn injective(&self) -> bool {
        self.joint_rank == self.source_dim
    }
}

/// Matrix of res: H^i(G) → H^i(H) in degrees 0..=d (rows: G-classes, columns: H-classes),
/// from a chain map P^H → P^G over F₂[H] lifting the identity on F₂.
pub fn restriction_matrices(
    res_g: &MinimalResolution,
    h: &Subgroup,
    d: usize,
) -> Result<Vec<BitMatrix>, CohomError> {
    if d > res_g.max_degree() {
        return Err(CohomError::Shape(format!(
            "resolution has degree {} < {d}",
            res_g.max_degree()
        )));
    }
    let g = res_g.group();
    let n = g.order();
    let gh = g.restrict(h);
    let res_h = minimal_resolution(&gh, d)?;
    let nh = gh.order();
    let emb = &h.elements;
    // f[k]: image of the k-th generator of P^H_i in P^G_i.
    let mut f: Vec<BitVec> = vec![BitVec::unit(n, g.identity())];
    let mut out = vec![BitMatrix::identity(1)];
    for i in 1..=d {
        let len_prev = res_g.ranks[i - 1] * n;
        let bh = &res_h.boundaries[i];
        let mut rhs = BitMatrix::zeros(bh.rows(), len_prev);
        for m in 0..bh.rows() {
            let mut acc = BitVec::zeros(len_prev);
            for idx in bh.row_ones(m) {
                let (k, x) = (idx / nh, idx % nh);
                acc.xor_assign(&act_left(g, emb[x], &f[k]));
            }
            rhs.row_mut(m).copy_from_slice(acc.words());
        }
        let a = res_g.boundary_matrix(i);
        let sols = a
            .solve_many(&rhs.transpose())
            .map_err(|e| CohomError::Shape(e.to_string()))?;
        let mut next = Vec::with_capacity(sols.len());
        for (m, s) in sols.into_iter().enumerate() {
            next.push(s.ok_or_else(|| CohomError::Verification {
                degree: i,
                what: format!("chain map does not lift at generator {m}"),
            })?);
        }
        let bg = res_g.ranks[i];
        let mut mat = BitMatrix::zeros(bg, next.len());
        for (m, v) in next.iter().enumerate() {
            for idx in v.iter_ones() {
                mat.flip(idx / n, m);
            }
        }
        out.push(mat);
        f = next;
    }
    Ok(out)
}

/// Joint restriction ranks H^i(G) → ⊕ H^i(H_j) for i ≤ d.
pub fn restriction_ranks(
    g: &FiniteGroup,
    subgroups: &[Subgroup],
    d: usize,
) -> Result<Vec<RestrictionRank>, CohomError> {
    if d > 4 {
        return Err(CohomError::ResourceCap(format!(
            "restriction degree {d} exceeds 4"
        )));
    }
    let res_g = minimal_resolution(g, d)?;
    let per: Vec<Vec<BitMatrix>> = subgroups
        .iter()
        .map(|h| restriction_matrices(&res_g, h, d))
        .collect::<Result<_, _>>()?;
    Ok((0..=d)
        .map(|i| {
            let mut joint = BitMatrix::zeros(res_g.ranks[i], 0);
            let mut ranks = Vec::new();
            for m in &per {
                ranks.push(m[i].rank());
                joint = joint.hstack(&m[i]).expect("rows");
            }
            RestrictionRank {
                degree: i,
                source_dim: res_g.ranks[i],
                joint_rank: joint.rank(),
                ranks,
            }
        })
        .collect())
}
