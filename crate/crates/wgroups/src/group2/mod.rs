//! Finite 2-groups given by power-commutator presentations.
//!
//! Elements are exponent vectors in {0,1}^m packed into a `u64`
//! (bit `i` is the exponent of generator `g_{i+1}`). Products are computed by
//! collection from the left: a generator is moved leftwards past the tail of
//! the word using precomputed conjugates `g_j^{g_k} = g_k^{-1} g_j g_k`.

mod extension;
mod finite;
mod lattice;
mod magnus;
mod sphere;

pub use extension::{ExtensionData, KernelSpec};
pub use finite::{FiniteGroup, IdentityReport, Subgroup};
pub use lattice::{build_x2, LatticeExtension};
pub use magnus::{
    build_elementary, build_family, build_v, build_w, magnus_v, magnus_w, Family, MagnusBuild,
    Recipe,
};
pub use sphere::{sphere_action_check, SphereReport};

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("element {0:#x} does not belong to a group with {1} generators")]
    ForeignElement(u64, usize),
    #[error("kernel is not normal")]
    NotNormal,
    #[error("kernel is not elementary abelian")]
    NotElementaryAbelian,
    #[error("quotient by the kernel is not elementary abelian")]
    QuotientNotElementary,
    #[error("construction failed: {0}")]
    Construction(String),
}

/// An element in collected normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub u64);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub fn exponents(self, m: usize) -> Vec<u8> {
        (0..m).map(|i| (self.0 >> i & 1) as u8).collect()
    }
}

/// Power-commutator presentation with `m ≤ 63` generators of relative order 2.
#[derive(Clone)]
pub struct PcGroup {
    m: usize,
    name: String,
    power: Vec<u64>,
    /// `comm[i][j]` for `i < j` is `[g_i, g_j] = g_i^{-1} g_j^{-1} g_i g_j`.
    comm: Vec<Vec<u64>>,
    /// `conj[k][j]` for `j > k` is `g_k^{-1} g_j g_k`.
    conj: Vec<Vec<u64>>,
    inv_gen: Vec<u64>,
}

impl fmt::Debug for PcGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PcGroup({}, {} generators)", self.name, self.m)
    }
}

#[inline]
fn above(k: usize) -> u64 {
    if k + 1 >= 64 {
        0
    } else {
        !((1u64 << (k + 1)) - 1)
    }
}

impl PcGroup {
    /// Builds a group from relation tables. `power[i]` must be supported on generators
    /// after `g_i`, and `comm[i][j]` (i < j) on generators after `g_j`.
    pub fn from_relations(
        name: impl Into<String>,
        m: usize,
        power: Vec<u64>,
        comm: Vec<Vec<u64>>,
    ) -> Result<Self, GroupError> {
        if m > 63 {
            return Err(GroupError::OutOfRange(format!("{m} generators")));
        }
        let mut g = PcGroup {
            m,
            name: name.into(),
            power,
            comm,
            conj: vec![vec![0; m]; m],
            inv_gen: vec![0; m],
        };
        g.check_shape()?;
        for k in (0..m).rev() {
            // Inverses and conjugates for generators above k are ready.
            let p = g.power[k];
            g.inv_gen[k] = g.mul(1 << k, g.inv(p));
            for j in k + 1..m {
                // g_j^{g_k} = g_j [g_j, g_k] = g_j [g_k, g_j]^{-1}
                let w = g.comm[k][j];
                g.conj[k][j] = g.mul(1 << j, g.inv(w));
            }
        }
        Ok(g)
    }

    fn check_shape(&self) -> Result<(), GroupError> {
        let m = self.m;
        if self.power.len() != m || self.comm.len() != m || self.comm.iter().any(|r| r.len() != m) {
            return Err(GroupError::Inconsistent("relation table sizes".into()));
        }
        let full = if m == 64 { !0 } else { (1u64 << m) - 1 };
        for i in 0..m {
            if self.power[i] & !(above(i) & full) != 0 {
                return Err(GroupError::Inconsistent(format!(
                    "power relation of generator {} involves earlier generators",
                    i + 1
                )));
            }
            for j in i + 1..m {
                if self.comm[i][j] & !(above(j) & full) != 0 {
                    return Err(GroupError::Inconsistent(format!(
                        "commutator [{}, {}] is not a word in later generators",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_gens(&self) -> usize {
        self.m
    }

    /// 2^m.
    pub fn order(&self) -> u128 {
        1u128 << self.m
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement(1 << i)
    }

    pub fn power_relation(&self, i: usize) -> GroupElement {
        GroupElement(self.power[i])
    }

    pub fn commutator_relation(&self, i: usize, j: usize) -> GroupElement {
        GroupElement(self.comm[i][j])
    }

    fn contains(&self, x: u64) -> bool {
        self.m == 64 || x >> self.m == 0
    }

    pub fn check(&self, x: GroupElement) -> Result<GroupElement, GroupError> {
        if self.contains(x.0) {
            Ok(x)
        } else {
            Err(GroupError::ForeignElement(x.0, self.m))
        }
    }

    /// `x · g_k`.
    fn mul_gen(&self, x: u64, k: usize) -> u64 {
        let low = x & ((1u64 << k) - 1);
        let suffix = x & above(k);
        let conj = self.conj_by_gen(suffix, k);
        if x >> k & 1 == 0 {
            low | 1 << k | conj
        } else {
            low | self.mul(self.power[k], conj)
        }
    }

    /// `g_k^{-1} s g_k` for `s` supported above `k`.
    fn conj_by_gen(&self, s: u64, k: usize) -> u64 {
        let mut acc = 0u64;
        let mut rest = s;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc = self.mul(acc, self.conj[k][j]);
        }
        acc
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        let mut acc = x;
        let mut rest = y;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc = self.mul_gen(acc, k);
        }
        acc
    }

    fn inv(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for k in (0..self.m).rev() {
            if x >> k & 1 == 1 {
                acc = self.mul(acc, self.inv_gen[k]);
            }
        }
        acc
    }

    pub fn multiply(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        debug_assert!(self.contains(a.0) && self.contains(b.0));
        GroupElement(self.mul(a.0, b.0))
    }

    pub fn inverse(&self, a: GroupElement) -> GroupElement {
        GroupElement(self.inv(a.0))
    }

    /// Collects a word of 0-based generator indices.
    pub fn collect(&self, word: &[usize]) -> Result<GroupElement, GroupError> {
        let mut acc = 0u64;
        for &k in word {
            if k >= self.m {
                return Err(GroupError::OutOfRange(format!("generator index {}", k + 1)));
            }
            acc = self.mul_gen(acc, k);
        }
        Ok(GroupElement(acc))
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement, GroupError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        let ab = self.mul(a.0, b.0);
        let ba = self.mul(b.0, a.0);
        Ok(GroupElement(self.mul(self.inv(ba), ab)))
    }

    pub fn square(&self, a: GroupElement) -> Result<GroupElement, GroupError> {
        let a = self.check(a)?;
        Ok(GroupElement(self.mul(a.0, a.0)))
    }

    /// `x^{-1} a x`.
    pub fn conjugate(&self, a: GroupElement, x: GroupElement) -> GroupElement {
        GroupElement(self.mul(self.inv(x.0), self.mul(a.0, x.0)))
    }

    pub fn element_order(&self, a: GroupElement) -> u64 {
        let mut x = a.0;
        let mut o = 1;
        while x != 0 {
            x = self.mul(x, a.0);
            o += 1;
        }
        o
    }

    /// Checks associativity on all generator triples (the standard consistency
    /// overlaps) and that the defining relations are reproduced by collection.
    pub fn verify_consistency(&self) -> Result<(), GroupError> {
        let m = self.m;
        for i in 0..m {
            if self.mul(1 << i, 1 << i) != self.power[i] {
                return Err(GroupError::Inconsistent(format!("g{}^2", i + 1)));
            }
            for j in i + 1..m {
                let c = self.commutator(GroupElement(1 << i), GroupElement(1 << j))?;
                if c.0 != self.comm[i][j] {
                    return Err(GroupError::Inconsistent(format!(
                        "[g{}, g{}]",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let (x, y, z) = (1u64 << a, 1u64 << b, 1u64 << c);
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Err(GroupError::Inconsistent(format!(
                            "overlap g{} g{} g{}",
                            a + 1,
                            b + 1,
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Presentation text: generator count, then `pow i : word` and `comm i j : word`
    /// lines with 1-based generator indices; trivial relations are omitted.
    pub fn to_text(&self) -> String {
        let word = |x: u64| -> String {
            (0..self.m)
                .filter(|&k| x >> k & 1 == 1)
                .map(|k| (k + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = format!("{}\n", self.m);
        for i in 0..self.m {
            if self.power[i] != 0 {
                s += &format!("pow {} : {}\n", i + 1, word(self.power[i]));
            }
        }
        for i in 0..self.m {
            for j in i + 1..self.m {
                if self.comm[i][j] != 0 {
                    s += &format!("comm {} {} : {}\n", i + 1, j + 1, word(self.comm[i][j]));
                }
            }
        }
        s
    }

    pub fn parse(name: &str, text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, first) = lines.next().ok_or(GroupError::Parse {
            line: 0,
            msg: "empty presentation".into(),
        })?;
        let m: usize = first.parse().map_err(|_| GroupError::Parse {
            line: ln,
            msg: format!("expected generator count, got {first:?}"),
        })?;
        if m > 63 {
            return Err(GroupError::OutOfRange(format!("{m} generators")));
        }
        let mut power = vec![0u64; m];
        let mut comm = vec![vec![0u64; m]; m];
        for (ln, line) in lines {
            let err = |msg: String| GroupError::Parse { line: ln, msg };
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| err("missing ':'".into()))?;
            let idx = |t: &str| -> Result<usize, GroupError> {
                let v: usize = t.parse().map_err(|_| err(format!("bad index {t:?}")))?;
                if v == 0 || v > m {
                    return Err(err(format!("generator index {v} out of range")));
                }
                Ok(v - 1)
            };
            let mut word = 0u64;
            let mut collected = Vec::new();
            for t in rhs.split_whitespace() {
                collected.push(idx(t)?);
            }
            // Words must already be in normal form (strictly increasing indices).
            for w in collected.windows(2) {
                if w[0] >= w[1] {
                    return Err(err("word is not in normal form".into()));
                }
            }
            for k in collected {
                word |= 1 << k;
            }
            let toks: Vec<&str> = lhs.split_whitespace().collect();
            match toks.as_slice() {
                ["pow", i] => power[idx(i)?] = word,
                ["comm", i, j] => {
                    let (i, j) = (idx(i)?, idx(j)?);
                    if i >= j {
                        return Err(err("commutator indices must satisfy i < j".into()));
                    }
                    comm[i][j] = word;
                }
                _ => return Err(err(format!("unrecognized relation {lhs:?}"))),
            }
        }
        let g = PcGroup::from_relations(name, m, power, comm)?;
        g.verify_consistency()?;
        Ok(g)
    }

    /// Quotient by the subgroup generated by `g_{keep+1}, …, g_m`; valid when that
    /// tail is normal.
    pub fn quotient_by_tail(&self, name: &str, keep: usize) -> Result<PcGroup, GroupError> {
        if keep > self.m {
            return Err(GroupError::OutOfRange(format!("keep {keep}")));
        }
        let mask = (1u64 << keep) - 1;
        let power = (0..keep).map(|i| self.power[i] & mask).collect();
        let comm = (0..keep)
            .map(|i| (0..keep).map(|j| self.comm[i][j] & mask).collect())
            .collect();
        PcGroup::from_relations(name, keep, power, comm)
    }

    /// Cayley table; only for small groups.
    pub fn to_finite(&self) -> Result<FiniteGroup, GroupError> {
        FiniteGroup::from_pc(self)
    }
}
