//! Small groups as Cayley tables: subgroup enumeration and identity checks.

use super::{GroupError, PcGroup};
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

/// A group of order at most 2^12 with an explicit multiplication table.
/// Element `i` of a group built from a presentation is the normal form with bits `i`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    order: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
    /// Indices of a generating set.
    pub gens: Vec<usize>,
}

/// Subgroup of a [`FiniteGroup`]: sorted element indices plus generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub gens: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityReport {
    pub group: String,
    pub triples_checked: u64,
    pub pairs_checked: u64,
    pub violation_count: u64,
    /// First few violations, described in words.
    pub violations: Vec<String>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }

    fn record(&mut self, what: impl FnOnce() -> String) {
        self.violation_count += 1;
        if self.violations.len() < 20 {
            self.violations.push(what());
        }
    }
}

impl FiniteGroup {
    pub fn from_pc(g: &PcGroup) -> Result<Self, GroupError> {
        let m = g.num_gens();
        if m > 12 {
            return Err(GroupError::OutOfRange(format!(
                "Cayley table for 2^{m} elements"
            )));
        }
        let order = 1usize << m;
        let mut table = vec![0u16; order * order];
        for x in 0..order {
            for y in 0..order {
                table[x * order + y] = g
                    .multiply(super::GroupElement(x as u64), super::GroupElement(y as u64))
                    .0 as u16;
            }
        }
        let mut inverse = vec![0u16; order];
        for x in 0..order {
            inverse[x] = g.inverse(super::GroupElement(x as u64)).0 as u16;
        }
        Ok(FiniteGroup {
            name: g.name().to_string(),
            order,
            table,
            inverse,
            gens: (0..m).map(|i| 1usize << i).collect(),
        })
    }

    /// The subgroup as a group in its own right, elements renumbered by position.
    pub fn restrict(&self, h: &Subgroup) -> FiniteGroup {
        let pos: std::collections::HashMap<usize, usize> = h
            .elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        let k = h.elements.len();
        let mut table = vec![0u16; k * k];
        for (i, &a) in h.elements.iter().enumerate() {
            for (j, &b) in h.elements.iter().enumerate() {
                table[i * k + j] = pos[&self.mul(a, b)] as u16;
            }
        }
        let inverse = h
            .elements
            .iter()
            .map(|&a| pos[&self.inv(a)] as u16)
            .collect();
        FiniteGroup {
            name: format!("{}-subgroup", self.name),
            order: k,
            table,
            inverse,
            gens: h.gens.iter().map(|g| pos[g]).collect(),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        // Both constructors number the identity 0.
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.inv(self.mul(b, a)), self.mul(a, b))
    }

    pub fn conj(&self, a: usize, x: usize) -> usize {
        self.mul(self.inv(x), self.mul(a, x))
    }

    pub fn involutions(&self) -> Vec<usize> {
        (1..self.order).filter(|&x| self.mul(x, x) == 0).collect()
    }

    pub fn verify_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n)
                .all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
        })
    }

    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        Subgroup {
            elements: elems,
            gens: gens.to_vec(),
        }
    }

    fn centralizes(&self, x: usize, h: &Subgroup) -> bool {
        h.gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x))
    }

    /// All abelian subgroups (optionally only those of exponent 2), by extension from the
    /// trivial group with deduplication on element sets.
    fn abelian_subgroups(&self, elementary: bool) -> Vec<Subgroup> {
        let allowed = |x: usize| !elementary || self.mul(x, x) == 0;
        let start = Subgroup {
            elements: vec![0],
            gens: vec![],
        };
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(start.elements.clone());
        let mut all = vec![start];
        let mut i = 0;
        while i < all.len() {
            let h = all[i].clone();
            let members: HashSet<usize> = h.elements.iter().copied().collect();
            for x in 1..self.order {
                if members.contains(&x) || !allowed(x) || !self.centralizes(x, &h) {
                    continue;
                }
                let mut gens = h.gens.clone();
                gens.push(x);
                let k = self.closure(&gens);
                if seen.insert(k.elements.clone()) {
                    all.push(k);
                }
            }
            i += 1;
        }
        all
    }

    fn maximal_among(&self, subs: Vec<Subgroup>) -> Vec<Subgroup> {
        let sets: Vec<BTreeSet<usize>> = subs
            .iter()
            .map(|s| s.elements.iter().copied().collect())
            .collect();
        let mut out = Vec::new();
        for (i, s) in subs.iter().enumerate() {
            let contained = sets
                .iter()
                .enumerate()
                .any(|(j, t)| j != i && t.len() > sets[i].len() && sets[i].is_subset(t));
            if !contained {
                out.push(s.clone());
            }
        }
        out
    }

    /// One representative per conjugacy class, ordered by (order descending, elements).
    pub fn conjugacy_representatives(&self, subs: Vec<Subgroup>) -> Vec<Subgroup> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out = Vec::new();
        let mut subs = subs;
        subs.sort_by(|a, b| b.order().cmp(&a.order()).then(a.elements.cmp(&b.elements)));
        for s in subs {
            if seen.contains(&s.elements) {
                continue;
            }
            for x in 0..self.order {
                let mut c: Vec<usize> = s.elements.iter().map(|&e| self.conj(e, x)).collect();
                c.sort_unstable();
                seen.insert(c);
            }
            out.push(s);
        }
        out
    }

    pub fn maximal_abelian_subgroups(&self) -> Vec<Subgroup> {
        let all = self.abelian_subgroups(false);
        self.conjugacy_representatives(self.maximal_among(all))
    }

    pub fn maximal_elementary_abelian_subgroups(&self) -> Vec<Subgroup> {
        let all = self.abelian_subgroups(true);
        self.conjugacy_representatives(self.maximal_among(all))
    }

    /// Checks, over all triples and pairs:
    /// [σ,[τ,γ]]·[τ,[γ,σ]]·[γ,[σ,τ]] = 1, [σ,τ]² = 1, [σ,τ] = [τ,σ],
    /// and [σ²,τ] = [σ,[σ,τ]] = [τ,σ²].
    pub fn verify_metabelian_identities(&self) -> Result<IdentityReport, GroupError> {
        let n = self.order;
        if n > 1 << 9 {
            return Err(GroupError::OutOfRange(format!("order {n} exceeds 2^9")));
        }
        let mut comm = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                comm[a * n + b] = self.comm(a, b) as u16;
            }
        }
        let c = |a: usize, b: usize| comm[a * n + b] as usize;
        let mut rep = IdentityReport {
            group: self.name.clone(),
            ..Default::default()
        };
        for s in 0..n {
            for t in 0..n {
                let st = c(s, t);
                for g in 0..n {
                    let lhs = self.mul(self.mul(c(s, c(t, g)), c(t, c(g, s))), c(g, st));
                    if lhs != 0 {
                        rep.record(|| format!("Jacobi fails at ({s}, {t}, {g})"));
                    }
                }
                rep.triples_checked += n as u64;
            }
        }
        for s in 0..n {
            let s2 = self.mul(s, s);
            for t in 0..n {
                let st = c(s, t);
                if self.mul(st, st) != 0 {
                    rep.record(|| format!("[{s},{t}] has order > 2"));
                }
                if st != c(t, s) {
                    rep.record(|| format!("[{s},{t}] != [{t},{s}]"));
                }
                let a = c(s2, t);
                if a != c(s, st) || a != c(t, s2) {
                    rep.record(|| format!("square-commutator identity fails at ({s}, {t})"));
                }
                rep.pairs_checked += 1;
            }
        }
        Ok(rep)
    }
}
