//! Monomial ±1 representations of V(2) induced from characters of A.

use super::{magnus_v, FiniteGroup, GroupError};
use serde::Serialize;

/// A signed permutation representation: `g` sends basis vector `e` to `sign·e_{perm}`.
#[derive(Clone, Debug)]
pub struct MonomialRep {
    pub dim: usize,
    /// `perm[g][e]`, `negative[g][e]` for each group element index `g`.
    pub perm: Vec<Vec<usize>>,
    pub negative: Vec<Vec<bool>>,
}

impl MonomialRep {
    pub fn is_minus_identity(&self, g: usize) -> bool {
        (0..self.dim).all(|e| self.perm[g][e] == e && self.negative[g][e])
    }

    /// ρ(g)ρ(h) = ρ(gh) for all pairs.
    fn is_homomorphism(&self, grp: &FiniteGroup) -> bool {
        for g in 0..grp.order() {
            for h in 0..grp.order() {
                let gh = grp.mul(g, h);
                for e in 0..self.dim {
                    let mid = self.perm[h][e];
                    let tgt = self.perm[g][mid];
                    let neg = self.negative[h][e] ^ self.negative[g][mid];
                    if tgt != self.perm[gh][e] || neg != self.negative[gh][e] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereReport {
    pub representations: usize,
    pub dims: Vec<usize>,
    pub involutions: usize,
    pub involutions_in_kernel: usize,
    pub homomorphisms_verified: bool,
    /// Involutions (as normal-form indices) with no representation acting as −I.
    pub uncovered: Vec<usize>,
}

impl SphereReport {
    pub fn ok(&self) -> bool {
        self.homomorphisms_verified && self.uncovered.is_empty() && self.representations > 0
    }
}

/// Induces each dual-basis character χ_k of A (χ_k(a_l) = δ_kl) up to V(n),
/// coset representatives σ̂^ε, and checks every involution maps to −I somewhere.
pub fn sphere_action_check(n: usize) -> Result<SphereReport, GroupError> {
    if n != 2 {
        return Err(GroupError::OutOfRange(format!(
            "sphere actions need n = 2, got {n}"
        )));
    }
    let build = magnus_v(n)?;
    let grp = FiniteGroup::from_pc(&build.group)?;
    let low = (1usize << n) - 1;
    let r = build.kernel_rank();
    let mut reps = Vec::with_capacity(r);
    for k in 0..r {
        let chi = |a: usize| (a >> (n + k)) & 1 == 1;
        let dim = 1 << n;
        let mut perm = vec![vec![0usize; dim]; grp.order()];
        let mut negative = vec![vec![false; dim]; grp.order()];
        for g in 0..grp.order() {
            for eps in 0..dim {
                // g · r_eps = r_eps' · a
                let x = grp.mul(g, eps);
                let eps2 = x & low;
                let a = grp.mul(grp.inv(eps2), x);
                if a & low != 0 {
                    return Err(GroupError::Construction("coset decomposition".into()));
                }
                perm[g][eps] = eps2;
                negative[g][eps] = chi(a);
            }
        }
        reps.push(MonomialRep {
            dim,
            perm,
            negative,
        });
    }
    let homomorphisms_verified = reps.iter().all(|rho| rho.is_homomorphism(&grp));
    let invs = grp.involutions();
    let uncovered: Vec<usize> = invs
        .iter()
        .copied()
        .filter(|&t| !reps.iter().any(|rho| rho.is_minus_identity(t)))
        .collect();
    Ok(SphereReport {
        representations: reps.len(),
        dims: reps.iter().map(|r| r.dim).collect(),
        involutions: invs.len(),
        involutions_in_kernel: invs.iter().filter(|&&t| t & low == 0).count(),
        homomorphisms_verified,
        uncovered,
    })
}
