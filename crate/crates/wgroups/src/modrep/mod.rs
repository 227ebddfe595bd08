//! Modules for elementary abelian 2-groups E_n over GF(2).
//!
//! A module is given by one matrix per generator σ_i acting on column vectors:
//! column `a` of `action[i]` is the image of basis vector `a`.

mod functors;
mod hom;
mod klein;

pub(crate) use functors::{monomials, subsets};
pub use hom::{IsoOutcome, SEARCH_CAP};
pub use klein::{KleinDecomposition, KleinLabel};

use gf2core::{BitMatrix, BitVec, Echelon};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error("matrix shape: {0}")]
    Shape(String),
    #[error("generator {0} does not act as an involution")]
    NotInvolution(usize),
    #[error("generators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("modules over different groups (ranks {0} and {1})")]
    GroupMismatch(usize, usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("unrecognized summand: {0}")]
    Unrecognized(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct GModule {
    n: usize,
    dim: usize,
    action: Vec<BitMatrix>,
}

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GModule(E{}, dim {})", self.n, self.dim)
    }
}

/// Ascending chain of submodules J₁ ⊂ J₂ ⊂ … ⊂ M, each given by a row basis.
#[derive(Clone, Debug)]
pub struct SocleSeries {
    pub layers: Vec<BitMatrix>,
}

impl SocleSeries {
    pub fn length(&self) -> usize {
        self.layers.len()
    }

    /// dim J₁, dim J₂/J₁, …
    pub fn layer_dims(&self) -> Vec<usize> {
        let mut prev = 0;
        self.layers
            .iter()
            .map(|l| {
                let d = l.rows() - prev;
                prev = l.rows();
                d
            })
            .collect()
    }
}

/// Row-reduced basis of a subspace, used for membership and coordinates.
#[derive(Clone, Debug)]
pub(crate) struct Subspace {
    pub ech: Echelon,
}

impl Subspace {
    pub fn new(rows: &BitMatrix) -> Self {
        Subspace { ech: rows.rref() }
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.ech.reduced
    }

    /// Reduces every row of `m` modulo the subspace, in place.
    pub fn reduce_rows(&self, m: &mut BitMatrix) {
        for r in 0..m.rows() {
            for (k, &p) in self.ech.pivots.iter().enumerate() {
                if m.get(r, p) {
                    let src = self.ech.reduced.row(k);
                    for (d, s) in m.row_mut(r).iter_mut().zip(src) {
                        *d ^= *s;
                    }
                }
            }
        }
    }

    /// Coordinates of rows lying in the subspace (read at the pivot columns).
    pub fn coords(&self, m: &BitMatrix) -> BitMatrix {
        m.select_cols(&self.ech.pivots)
    }
}

impl GModule {
    pub fn new(n: usize, action: Vec<BitMatrix>) -> Result<Self, ModError> {
        if action.len() != n {
            return Err(ModError::Shape(format!(
                "{} matrices for rank {n}",
                action.len()
            )));
        }
        let dim = action.first().map_or(0, |m| m.rows());
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(ModError::Shape(format!(
                    "{}x{} matrix in a module of dimension {dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let sq = |a: &BitMatrix, b: &BitMatrix| a.mul(b).expect("square matrices");
        for (i, a) in action.iter().enumerate() {
            if sq(a, a) != BitMatrix::identity(dim) {
                return Err(ModError::NotInvolution(i));
            }
            for (j, b) in action.iter().enumerate().skip(i + 1) {
                if sq(a, b) != sq(b, a) {
                    return Err(ModError::NotCommuting(i, j));
                }
            }
        }
        Ok(GModule { n, dim, action })
    }

    pub(crate) fn new_unchecked(n: usize, dim: usize, action: Vec<BitMatrix>) -> Self {
        debug_assert!(action.iter().all(|m| m.rows() == dim && m.cols() == dim));
        GModule { n, dim, action }
    }

    pub fn trivial(n: usize) -> Self {
        Self::new_unchecked(n, 1, vec![BitMatrix::identity(1); n])
    }

    pub fn zero(n: usize) -> Self {
        Self::new_unchecked(n, 0, vec![BitMatrix::zeros(0, 0); n])
    }

    /// F₂[E_n]^copies; basis vector `c·2^n + t` is the group element `t` in copy `c`.
    pub fn free(n: usize, copies: usize) -> Self {
        let size = 1usize << n;
        let dim = copies * size;
        let action = (0..n)
            .map(|i| {
                BitMatrix::from_fn(dim, dim, |r, c| {
                    r / size == c / size && r % size == (c % size) ^ (1 << i)
                })
            })
            .collect();
        Self::new_unchecked(n, dim, action)
    }

    pub fn regular(n: usize) -> Self {
        Self::free(n, 1)
    }

    /// Permutation module on the cosets of the subgroup with the given element
    /// masks as generators.
    pub fn permutation(n: usize, subgroup_gens: &[u32]) -> Self {
        let size = 1u32 << n;
        let mut sub = vec![0u32];
        for &g in subgroup_gens {
            let more: Vec<u32> = sub.iter().map(|&h| h ^ g).collect();
            for h in more {
                if !sub.contains(&h) {
                    sub.push(h);
                }
            }
        }
        // Coset representative: the smallest element of the coset.
        let rep = |t: u32| sub.iter().map(|&h| h ^ t).min().unwrap();
        let mut reps: Vec<u32> = (0..size).map(rep).collect();
        reps.sort_unstable();
        reps.dedup();
        let idx = |t: u32| reps.binary_search(&rep(t)).unwrap();
        let dim = reps.len();
        let action = (0..n)
            .map(|i| BitMatrix::from_fn(dim, dim, |r, c| idx(reps[c] ^ (1 << i)) == r))
            .collect();
        Self::new_unchecked(n, dim, action)
    }

    pub fn group_rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.action
    }

    pub fn matrix(&self, i: usize) -> &BitMatrix {
        &self.action[i]
    }

    /// Matrix of the group element with generator mask `g`.
    pub fn element(&self, g: u32) -> BitMatrix {
        let mut m = BitMatrix::identity(self.dim);
        for i in 0..self.n {
            if g >> i & 1 == 1 {
                m = m.mul(&self.action[i]).expect("square matrices");
            }
        }
        m
    }

    /// Matrices of all 2^n group elements, indexed by mask.
    pub fn all_elements(&self) -> Vec<BitMatrix> {
        let mut out = vec![BitMatrix::identity(self.dim)];
        for t in 1u32..1 << self.n {
            let i = t.trailing_zeros() as usize;
            let prev = &out[(t & (t - 1)) as usize];
            out.push(self.action[i].mul(prev).expect("square matrices"));
        }
        out
    }

    pub fn act(&self, i: usize, v: &BitVec) -> BitVec {
        self.action[i].mul_vec(v).expect("vector length")
    }

    /// Stacked σ_i − 1.
    fn augmentation_stack(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(0, self.dim);
        for a in &self.action {
            m = m.vstack(&a.add_identity()).expect("same width");
        }
        m
    }

    /// Common fixed space, as a row basis.
    pub fn fixed_space(&self) -> BitMatrix {
        if self.n == 0 {
            return BitMatrix::identity(self.dim);
        }
        self.augmentation_stack().kernel_basis()
    }

    /// rad M = Σ (σ_i − 1)M, as a reduced row basis.
    pub fn radical(&self) -> BitMatrix {
        let mut rows = BitMatrix::zeros(0, self.dim);
        for a in &self.action {
            rows = rows
                .vstack(&a.add_identity().transpose())
                .expect("same width");
        }
        rows.rref().reduced
    }

    pub fn is_trivial(&self) -> bool {
        self.action
            .iter()
            .all(|a| *a == BitMatrix::identity(self.dim))
    }

    /// Submodule spanned by the rows of `basis` (must be invariant).
    pub fn submodule(&self, basis: &BitMatrix) -> Result<GModule, ModError> {
        let sub = Subspace::new(basis);
        let k = sub.dim();
        let mut action = Vec::with_capacity(self.n);
        for a in &self.action {
            let images = sub.basis().mul(&a.transpose()).expect("width");
            let mut check = images.clone();
            sub.reduce_rows(&mut check);
            if !check.is_zero() {
                return Err(ModError::Shape("subspace is not invariant".into()));
            }
            action.push(sub.coords(&images).transpose());
        }
        Ok(Self::new_unchecked(self.n, k, action))
    }

    /// Quotient by the invariant subspace spanned by the rows of `basis`. The quotient
    /// basis is given by the unit vectors at non-pivot positions.
    pub fn quotient(&self, basis: &BitMatrix) -> Result<GModule, ModError> {
        let sub = Subspace::new(basis);
        let free = sub.ech.free_columns();
        let mut action = Vec::with_capacity(self.n);
        for a in &self.action {
            let mut images = a.transpose().select_rows(&free);
            sub.reduce_rows(&mut images);
            action.push(images.select_cols(&free).transpose());
        }
        let q = Self::new_unchecked(self.n, free.len(), action);
        // Invariance shows up as a well-defined action.
        let inv = self.submodule(basis);
        inv.map(|_| q)
    }

    /// Socle series: J₁ = fixed points, J_{k+1}/J_k = fixed points of M/J_k.
    pub fn socle_series(&self) -> SocleSeries {
        let mut layers = Vec::new();
        let mut current = BitMatrix::zeros(0, self.dim);
        let augs: Vec<BitMatrix> = self.action.iter().map(|a| a.add_identity()).collect();
        while current.rows() < self.dim {
            // Functionals vanishing on the current layer.
            let q = if current.rows() == 0 {
                BitMatrix::identity(self.dim)
            } else {
                current.kernel_basis()
            };
            let mut cond = BitMatrix::zeros(0, self.dim);
            for a in &augs {
                cond = cond.vstack(&q.mul(a).expect("width")).expect("width");
            }
            let next = if self.n == 0 {
                BitMatrix::identity(self.dim)
            } else {
                cond.kernel_basis()
            };
            if next.rows() == current.rows() {
                break;
            }
            current = next;
            layers.push(current.clone());
        }
        SocleSeries { layers }
    }

    /// Dimensions of M/rad M, rad M/rad² M, …
    pub fn radical_layers(&self) -> Vec<usize> {
        let mut dims = Vec::new();
        let mut cur = Subspace::new(&BitMatrix::identity(self.dim));
        while cur.dim() > 0 {
            let mut rows = BitMatrix::zeros(0, self.dim);
            for a in &self.action {
                let img = cur
                    .basis()
                    .mul(&a.add_identity().transpose())
                    .expect("width");
                rows = rows.vstack(&img).expect("width");
            }
            let next = Subspace::new(&rows);
            dims.push(cur.dim() - next.dim());
            cur = next;
        }
        dims
    }

    /// Projective cover F^g → M: `g` and the map as a dim × g·2^n matrix, whose
    /// column `c·2^n + t` is the image of the group element `t` in copy `c`.
    pub(crate) fn projective_cover(&self) -> (usize, BitMatrix) {
        let rad = Subspace::new(&self.radical());
        let tops = rad.ech.free_columns();
        let g = tops.len();
        let size = 1usize << self.n;
        let elems = self.all_elements();
        let mut cols = BitMatrix::zeros(g * size, self.dim);
        for (c, &b) in tops.iter().enumerate() {
            for (t, e) in elems.iter().enumerate() {
                // column b of the element matrix
                let v = e.col_vec(b);
                cols.row_mut(c * size + t).copy_from_slice(v.words());
            }
        }
        (g, cols.transpose())
    }

    /// Ω(M): kernel of the projective cover.
    pub fn omega(&self) -> GModule {
        let (g, phi) = self.projective_cover();
        let k = phi.kernel_basis();
        GModule::free(self.n, g)
            .submodule(&k)
            .expect("kernels of module maps are submodules")
    }

    /// Ω^k(M); negative k via duality, Ω^{-1}(M) = Ω(M*)*.
    pub fn heller(&self, k: i32) -> Result<GModule, ModError> {
        if k.abs() > 6 {
            return Err(ModError::OutOfRange(format!("Heller shift {k}")));
        }
        let mut m = if k < 0 { self.dual() } else { self.clone() };
        for _ in 0..k.unsigned_abs() {
            m = m.omega();
        }
        Ok(if k < 0 { m.dual() } else { m })
    }

    /// Text format: "n dim" then n matrices in BitMatrix text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.dim);
        for a in &self.action {
            s += &a.to_text();
        }
        s
    }

    pub fn parse(text: &str) -> Result<GModule, ModError> {
        let mut lines = text.lines().enumerate();
        let (ln, header) = lines
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or(ModError::Parse {
                line: 0,
                msg: "empty module file".into(),
            })?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| ModError::Parse {
                line: ln + 1,
                msg: format!("bad header {header:?}"),
            })?;
        let [n, dim] = nums[..] else {
            return Err(ModError::Parse {
                line: ln + 1,
                msg: "expected \"n dim\"".into(),
            });
        };
        let mut action = Vec::with_capacity(n);
        for _ in 0..n {
            let m = BitMatrix::parse_lines(&mut lines).map_err(|e| ModError::Parse {
                line: 0,
                msg: e.to_string(),
            })?;
            if m.rows() != dim {
                return Err(ModError::Shape(format!(
                    "matrix of size {} in dimension {dim}",
                    m.rows()
                )));
            }
            action.push(m);
        }
        if n == 0 {
            return Ok(GModule::new_unchecked(0, dim, vec![]));
        }
        GModule::new(n, action)
    }
}
