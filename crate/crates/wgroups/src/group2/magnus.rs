//! W(n), V(n) and E_n from the mod-2 Magnus embedding.
//!
//! V(n) = F/K²[K,K] with K = F²[F,F] embeds in E_n ⋉ F₂[E_n]^n via
//! x_i ↦ (σ_i, e_i). The kernel A consists of the pairs (1, m) with m in the
//! kernel of e_i ↦ σ_i − 1. W(n) = V(n)/I·A.

use super::{GroupError, PcGroup};
use gf2core::{BitMatrix, BitVec};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    E,
    W,
    V,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::E => "E",
            Family::W => "W",
            Family::V => "V",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, GroupError> {
        match s {
            "E" | "e" => Ok(Family::E),
            "W" | "w" => Ok(Family::W),
            "V" | "v" => Ok(Family::V),
            _ => Err(GroupError::OutOfRange(format!("family {s:?}"))),
        }
    }
}

/// Element of E_n ⋉ F₂[E_n]^n. Coordinate `c·2^n + t` is copy `c`, group element `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Magnus {
    pub g: u32,
    pub m: u64,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct MagnusCtx {
    pub n: usize,
}

impl MagnusCtx {
    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn coords(&self) -> usize {
        self.n << self.n
    }

    /// Left action of the group element `g` on the module.
    pub fn act(&self, g: u32, m: u64) -> u64 {
        if g == 0 {
            return m;
        }
        let mut out = 0u64;
        let size = self.size();
        let mut rest = m;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (c, t) = (b / size, b % size);
            out |= 1u64 << (c * size + (t ^ g as usize));
        }
        out
    }

    pub fn mul(&self, x: Magnus, y: Magnus) -> Magnus {
        Magnus {
            g: x.g ^ y.g,
            m: x.m ^ self.act(x.g, y.m),
        }
    }

    pub fn inv(&self, x: Magnus) -> Magnus {
        Magnus {
            g: x.g,
            m: self.act(x.g, x.m),
        }
    }

    pub fn gen(&self, i: usize) -> Magnus {
        Magnus {
            g: 1 << i,
            m: 1u64 << (i * self.size()),
        }
    }

    pub fn comm(&self, a: Magnus, b: Magnus) -> Magnus {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// The kernel of e_i ↦ σ_i − 1 as a basis of u64 vectors.
    pub fn kernel_a(&self) -> Vec<u64> {
        let size = self.size();
        let d = BitMatrix::from_fn(size, self.coords(), |t, col| {
            let (c, s) = (col / size, col % size);
            t == s || t == s ^ (1 << c)
        });
        let k = d.kernel_basis();
        (0..k.rows()).map(|r| k.row(r)[0]).collect()
    }
}

pub(crate) fn vec_of(len: usize, x: u64) -> BitVec {
    BitVec::from_u64(len, x)
}

/// A group built from the Magnus model together with the data used to build it.
#[derive(Clone, Debug)]
pub struct MagnusBuild {
    pub group: PcGroup,
    pub n: usize,
    /// Magnus vectors of the kernel basis, in generator order.
    pub(crate) kernel_basis: Vec<u64>,
    /// Sizes of the radical layers of the kernel basis.
    pub layer_sizes: Vec<usize>,
    /// Commutator-style names of the kernel generators.
    pub labels: Vec<String>,
    /// How each kernel generator was formed.
    pub recipes: Vec<Recipe>,
}

/// Construction of a kernel generator from the σ̂_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recipe {
    /// σ̂_i².
    Square(usize),
    /// [σ̂_i, σ̂_j].
    Comm(usize, usize),
    /// [a_k, σ̂_i] for an earlier kernel generator a_k.
    CommWith(usize, usize),
}

impl MagnusBuild {
    /// Rank of the elementary abelian kernel (generators after the first n).
    pub fn kernel_rank(&self) -> usize {
        self.kernel_basis.len()
    }

    pub(crate) fn ctx(&self) -> MagnusCtx {
        MagnusCtx { n: self.n }
    }

    /// Image in the Magnus model of a normal-form element.
    pub(crate) fn to_magnus(&self, x: u64) -> Magnus {
        let ctx = self.ctx();
        let mut acc = Magnus { g: 0, m: 0 };
        for i in 0..self.n {
            if x >> i & 1 == 1 {
                acc = ctx.mul(acc, ctx.gen(i));
            }
        }
        let mut a = 0u64;
        for (k, v) in self.kernel_basis.iter().enumerate() {
            if x >> (self.n + k) & 1 == 1 {
                a ^= v;
            }
        }
        ctx.mul(acc, Magnus { g: 0, m: a })
    }
}

/// Elementary abelian group of rank n with trivial relations.
pub fn build_elementary(n: usize) -> Result<PcGroup, GroupError> {
    if !(1..=5).contains(&n) {
        return Err(GroupError::OutOfRange(format!(
            "E_n needs 1 ≤ n ≤ 5, got {n}"
        )));
    }
    PcGroup::from_relations(format!("E{n}"), n, vec![0; n], vec![vec![0; n]; n])
}

pub fn build_v(n: usize) -> Result<PcGroup, GroupError> {
    Ok(magnus_v(n)?.group)
}

pub fn build_w(n: usize) -> Result<PcGroup, GroupError> {
    Ok(magnus_w(n)?.group)
}

/// Span test helper: rank of the given vectors.
fn rank_of(vs: &[u64], len: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let rows: Vec<BitVec> = vs.iter().map(|&v| vec_of(len, v)).collect();
    BitMatrix::from_rows(&rows, len).rank()
}

/// Builds V(n) with the kernel basis adapted to the radical filtration of A.
pub fn magnus_v(n: usize) -> Result<MagnusBuild, GroupError> {
    if !(2..=3).contains(&n) {
        return Err(GroupError::OutOfRange(format!(
            "V(n) needs n ∈ {{2, 3}}, got {n}"
        )));
    }
    magnus_v_any(n)
}

pub(crate) fn magnus_v_any(n: usize) -> Result<MagnusBuild, GroupError> {
    let ctx = MagnusCtx { n };
    let len = ctx.coords();
    let a_basis = ctx.kernel_a();
    let expected = (1usize << n) * (n - 1) + 1;
    if a_basis.len() != expected {
        return Err(GroupError::Construction(format!(
            "kernel rank {} differs from {expected}",
            a_basis.len()
        )));
    }
    let radical = |s: &[u64]| -> Vec<u64> {
        let mut out = Vec::new();
        for &v in s {
            for i in 0..n {
                out.push(v ^ ctx.act(1 << i, v));
            }
        }
        out
    };
    // rad^k A spanning sets, until zero.
    let mut rads: Vec<Vec<u64>> = vec![a_basis.clone()];
    loop {
        let next = radical(rads.last().unwrap());
        if rank_of(&next, len) == 0 {
            break;
        }
        rads.push(next);
    }
    rads.push(Vec::new());

    let gens: Vec<Magnus> = (0..n).map(|i| ctx.gen(i)).collect();
    let mut chosen: Vec<u64> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut layer_sizes = Vec::new();
    let mut recipes: Vec<Recipe> = Vec::new();
    let mut prev: Vec<(u64, String, Recipe)> = Vec::new();
    let mut prev_start = 0usize;
    for k in 0..rads.len() - 1 {
        let target = rank_of(&rads[k], len) - rank_of(&rads[k + 1], len);
        let mut cands: Vec<(u64, String, Recipe)> = Vec::new();
        if k == 0 {
            for i in 0..n {
                let sq = ctx.mul(gens[i], gens[i]);
                cands.push((sq.m, format!("s{}^2", i + 1), Recipe::Square(i)));
            }
            for i in 0..n {
                for j in i + 1..n {
                    let c = ctx.comm(gens[i], gens[j]);
                    debug_assert_eq!(c.g, 0);
                    cands.push((c.m, format!("[s{},s{}]", i + 1, j + 1), Recipe::Comm(i, j)));
                }
            }
        } else {
            for (pos, (v, name, _)) in prev.iter().enumerate() {
                for i in 0..n {
                    // [a, s_i] = (1 + σ_i) a
                    let w = v ^ ctx.act(1 << i, *v);
                    cands.push((
                        w,
                        format!("[{name},s{}]", i + 1),
                        Recipe::CommWith(prev_start + pos, i),
                    ));
                }
            }
        }
        let mut layer: Vec<(u64, String, Recipe)> = Vec::new();
        let mut span: Vec<u64> = rads[k + 1].clone();
        let mut r = rank_of(&span, len);
        for (v, name, recipe) in cands {
            if layer.len() == target {
                break;
            }
            span.push(v);
            let r2 = rank_of(&span, len);
            if r2 > r {
                r = r2;
                layer.push((v, name, recipe));
            } else {
                span.pop();
            }
        }
        if layer.len() != target {
            return Err(GroupError::Construction(format!(
                "radical layer {k} spanned only {} of {target}",
                layer.len()
            )));
        }
        layer_sizes.push(target);
        prev_start = chosen.len();
        for (v, name, recipe) in &layer {
            chosen.push(*v);
            labels.push(name.clone());
            recipes.push(*recipe);
        }
        prev = layer;
    }
    let build = MagnusBuild {
        group: PcGroup::from_relations("tmp", 0, vec![], vec![])?,
        n,
        kernel_basis: chosen,
        layer_sizes,
        labels,
        recipes,
    };
    let group = presentation_from_magnus(&build, &format!("V{n}"))?;
    Ok(MagnusBuild { group, ..build })
}

/// Coordinates of a kernel vector in the chosen kernel basis.
fn kernel_coords(basis: &[u64], len: usize, v: u64) -> Result<u64, GroupError> {
    if v == 0 {
        return Ok(0);
    }
    let rows: Vec<BitVec> = basis.iter().map(|&b| vec_of(len, b)).collect();
    let mat = BitMatrix::from_rows(&rows, len).transpose();
    let x = mat
        .solve(&vec_of(len, v))
        .map_err(|e| GroupError::Construction(e.to_string()))?
        .ok_or_else(|| GroupError::Construction("element outside the kernel".into()))?;
    Ok(x.iter_ones().fold(0u64, |acc, k| acc | 1 << k))
}

fn normal_form(build: &MagnusBuild, x: Magnus) -> Result<u64, GroupError> {
    let ctx = build.ctx();
    let n = build.n;
    let mut prefix = Magnus { g: 0, m: 0 };
    for i in 0..n {
        if x.g >> i & 1 == 1 {
            prefix = ctx.mul(prefix, ctx.gen(i));
        }
    }
    let a = ctx.mul(ctx.inv(prefix), x);
    debug_assert_eq!(a.g, 0);
    let coords = kernel_coords(&build.kernel_basis, ctx.coords(), a.m)?;
    Ok(x.g as u64 | coords << n)
}

fn presentation_from_magnus(build: &MagnusBuild, name: &str) -> Result<PcGroup, GroupError> {
    let ctx = build.ctx();
    let n = build.n;
    let m = n + build.kernel_basis.len();
    let gen_img = |i: usize| -> Magnus {
        if i < n {
            ctx.gen(i)
        } else {
            Magnus {
                g: 0,
                m: build.kernel_basis[i - n],
            }
        }
    };
    let mut power = vec![0u64; m];
    let mut comm = vec![vec![0u64; m]; m];
    for i in 0..m {
        let gi = gen_img(i);
        power[i] = normal_form(build, ctx.mul(gi, gi))?;
        for j in i + 1..m {
            comm[i][j] = normal_form(build, ctx.comm(gi, gen_img(j)))?;
        }
    }
    let g = PcGroup::from_relations(name, m, power, comm)?;
    g.verify_consistency()?;
    certify_against_model(build, &g)?;
    Ok(g)
}

/// Checks that normal-form multiplication matches the Magnus model: exhaustively
/// for up to 2^9 elements, on a deterministic sample of pairs otherwise.
fn certify_against_model(build: &MagnusBuild, g: &PcGroup) -> Result<(), GroupError> {
    let ctx = build.ctx();
    let m = g.num_gens();
    let pairs: Vec<(u64, u64)> = if m <= 9 {
        (0..1u64 << m)
            .flat_map(|x| (0..1u64 << m).map(move |y| (x, y)))
            .collect()
    } else {
        let mut s = 0x9E37_79B9_7F4A_7C15u64;
        let mut next = move || {
            s ^= s << 7;
            s ^= s >> 9;
            s & ((1u64 << m) - 1)
        };
        (0..20_000).map(|_| (next(), next())).collect()
    };
    let build = MagnusBuild {
        group: g.clone(),
        ..build.clone()
    };
    for (x, y) in pairs {
        let xy = g.multiply(super::GroupElement(x), super::GroupElement(y)).0;
        if build.to_magnus(xy) != ctx.mul(build.to_magnus(x), build.to_magnus(y)) {
            return Err(GroupError::Inconsistent(format!(
                "product of {x:#x} and {y:#x} disagrees with the Magnus model"
            )));
        }
    }
    Ok(())
}

/// W(n) as the quotient of V(n) by the radical of A (all layers below the top).
pub fn magnus_w(n: usize) -> Result<MagnusBuild, GroupError> {
    let v = magnus_v(n)?;
    let top = v.layer_sizes[0];
    let group = v.group.quotient_by_tail(&format!("W{n}"), n + top)?;
    group.verify_consistency()?;
    Ok(MagnusBuild {
        group,
        n,
        kernel_basis: v.kernel_basis[..top].to_vec(),
        layer_sizes: vec![top],
        labels: v.labels[..top].to_vec(),
        recipes: v.recipes[..top].to_vec(),
    })
}

pub fn build_family(family: Family, n: usize) -> Result<PcGroup, GroupError> {
    match family {
        Family::E => build_elementary(n),
        Family::W => build_w(n),
        Family::V => build_v(n),
    }
}
