//! Lyndon–Hochschild–Serre spectral sequences of extensions 1 → M → G → E₂ → 1 with
//! abelian kernel, row by row: E₂^{p,q} = H^p(E₂, R_q) where R_q is Λ^q or S^q of
//! (M/2M)*. The d₂ differential is cup product with the extension class followed by
//! contraction, extended to all rows as a derivation.
//!
//! Cochains on E₂ use the tensor square of the periodic resolution of ℤ/2: a p-cochain
//! with values in N is a tuple (f_{(i,p−i)})_{0≤i≤p} of elements of N, and
//! (δf)_{(i,j)} = (1+σ₁) f_{(i−1,j)} + (1+σ₂) f_{(i,j−1)}.

use crate::group2::{ExtensionData, GroupError, LatticeExtension};
use crate::modrep::{monomials, subsets, GModule, KleinLabel, ModError};
use gf2core::{BitMatrix, BitVec};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LhsError {
    #[error("d₂ is not a differential at E₂^{{{p},{q}}}: {what}")]
    DerivationInconsistency { p: usize, q: usize, what: String },
    #[error("row {q}: {what}")]
    Row { q: usize, what: String },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowKind {
    Exterior,
    Symmetric,
}

/// Dimensions of the E₂ and (once computed) E₃ pages.
#[derive(Clone, Debug)]
pub struct SpectralGrid {
    pub kind: RowKind,
    pub pmax: usize,
    pub qmax: usize,
    /// (page, p, q) → dimension.
    pub pages: BTreeMap<(usize, usize, usize), usize>,
    /// Rank of d₂ : E₂^{p,q} → E₂^{p+2,q−1}, for the bidegrees where it was computed.
    pub d2_ranks: BTreeMap<(usize, usize), usize>,
    /// Decomposition of each row module into labelled indecomposables.
    pub row_decompositions: Vec<String>,
    ext: ExtensionData,
    rows: Vec<GModule>,
}

/// dim H^p(E₂, L) for the labelled indecomposables.
pub fn label_cohomology(label: KleinLabel, p: usize) -> usize {
    let tate = |j: i64| {
        if j >= 0 {
            (j + 1) as usize
        } else {
            (-j) as usize
        }
    };
    match label {
        KleinLabel::Free => usize::from(p == 0),
        KleinLabel::Trivial => p + 1,
        KleinLabel::Perm(_) => 1,
        KleinLabel::Omega(m) if p == 0 => {
            if m > 0 {
                m as usize
            } else {
                (1 - m) as usize
            }
        }
        KleinLabel::Omega(m) => tate(p as i64 - m as i64),
    }
}

/// Coboundary C^p(N) → C^{p+1}(N) acting on column vectors.
fn coboundary(n: &GModule, p: usize) -> BitMatrix {
    let d = n.dim();
    let x1 = n.matrix(0).add_identity();
    let x2 = n.matrix(1).add_identity();
    let mut out = BitMatrix::zeros((p + 2) * d, (p + 1) * d);
    for i in 0..=p {
        put_block(&mut out, (i + 1) * d, i * d, &x1);
        put_block(&mut out, i * d, i * d, &x2);
    }
    out
}

fn put_block(m: &mut BitMatrix, r0: usize, c0: usize, b: &BitMatrix) {
    for r in 0..b.rows() {
        for c in b.row_ones(r).collect::<Vec<_>>() {
            m.flip(r0 + r, c0 + c);
        }
    }
}

/// Contraction by a ∈ M/2M on the row modules, in their standard bases.
fn contraction(kind: RowKind, rank: usize, q: usize, a: &BitVec) -> BitMatrix {
    match kind {
        RowKind::Exterior => {
            let src = subsets(rank, q);
            let tgt = subsets(rank, q - 1);
            let mut out = BitMatrix::zeros(tgt.len(), src.len());
            for (c, s) in src.iter().enumerate() {
                for (t, &x) in s.iter().enumerate() {
                    if a.get(x) {
                        let mut rest = s.clone();
                        rest.remove(t);
                        let r = tgt.binary_search(&rest).expect("subset present");
                        out.flip(r, c);
                    }
                }
            }
            out
        }
        RowKind::Symmetric => {
            let src = monomials(rank, q);
            let tgt = monomials(rank, q - 1);
            let mut out = BitMatrix::zeros(tgt.len(), src.len());
            for (c, m) in src.iter().enumerate() {
                for x in 0..rank {
                    if a.get(x) && m[x] % 2 == 1 {
                        let mut rest = m.clone();
                        rest[x] -= 1;
                        let r = tgt
                            .binary_search_by(|t| rest.cmp(t))
                            .expect("monomial present");
                        out.flip(r, c);
                    }
                }
            }
            out
        }
    }
}

struct RowCochains {
    /// Coboundaries δ_p for p = 0..=pmax.
    delta: Vec<BitMatrix>,
}

impl RowCochains {
    fn new(n: &GModule, pmax: usize) -> Self {
        RowCochains {
            delta: (0..=pmax).map(|p| coboundary(n, p)).collect(),
        }
    }

    /// Cocycles of degree p, one per row.
    fn cocycles(&self, p: usize) -> BitMatrix {
        self.delta[p].kernel_basis()
    }

    /// Coboundaries in degree p as rows.
    fn coboundaries(&self, p: usize) -> BitMatrix {
        if p == 0 {
            BitMatrix::zeros(0, self.delta[0].cols())
        } else {
            self.delta[p - 1].transpose()
        }
    }

    fn cohomology_dim(&self, p: usize) -> usize {
        let z = self.delta[p].cols() - self.delta[p].rank();
        let b = if p == 0 { 0 } else { self.delta[p - 1].rank() };
        z - b
    }
}

impl SpectralGrid {
    pub fn e2(&self, p: usize, q: usize) -> usize {
        self.pages.get(&(2, p, q)).copied().unwrap_or(0)
    }

    pub fn e3(&self, p: usize, q: usize) -> Option<usize> {
        self.pages.get(&(3, p, q)).copied()
    }

    /// Largest column with a reliable E₃ entry.
    pub fn e3_pmax(&self) -> usize {
        self.pmax.saturating_sub(2)
    }

    /// Σ_{p+q=t} dim E₃^{p,q} for t ≤ min(qmax, pmax−2).
    pub fn e3_totals(&self) -> Vec<usize> {
        let top = self.qmax.min(self.e3_pmax());
        (0..=top)
            .map(|t| (0..=t).map(|p| self.e3(p, t - p).unwrap_or(0)).sum())
            .collect()
    }

    pub fn entries(&self, page: usize) -> Vec<[usize; 3]> {
        self.pages
            .iter()
            .filter(|((r, _, _), _)| *r == page)
            .map(|(&(_, p, q), &d)| [p, q, d])
            .collect()
    }

    /// Matrix of d₂ on cochains C^p(R_q) → C^{p+2}(R_{q−1}): Σ over |I| = 2 of
    /// contraction by e_I composed with σ^I.
    fn d2_cochain(&self, p: usize, q: usize) -> BitMatrix {
        let src = &self.rows[q];
        let tgt = &self.rows[q - 1];
        let (ds, dt) = (src.dim(), tgt.dim());
        let rank = self.ext.kernel_rank;
        let s1 = src.matrix(0);
        let s2 = src.matrix(1);
        // (first exponent, σ^I, e_I)
        let terms = [
            (2, BitMatrix::identity(ds), self.ext.cocycle(0, 0)),
            (1, s1.mul(s2).expect("square"), self.ext.cocycle(0, 1)),
            (0, BitMatrix::identity(ds), self.ext.cocycle(1, 1)),
        ];
        let mut out = BitMatrix::zeros((p + 3) * dt, (p + 1) * ds);
        for (a, sigma, e) in &terms {
            let block = contraction(self.kind, rank, q, e)
                .mul(sigma)
                .expect("shape");
            for i in 0..=p {
                put_block(&mut out, (i + a) * dt, i * ds, &block);
            }
        }
        out
    }
}

fn build_grid(
    kind: RowKind,
    ext: ExtensionData,
    rows: Vec<GModule>,
    pmax: usize,
) -> Result<SpectralGrid, LhsError> {
    let qmax = rows.len() - 1;
    let mut pages = BTreeMap::new();
    let mut row_decompositions = Vec::new();
    for (q, row) in rows.iter().enumerate() {
        let dec = row.decompose_klein4().map_err(|e| LhsError::Row {
            q,
            what: e.to_string(),
        })?;
        row_decompositions.push(dec.to_string());
        let cochains = RowCochains::new(row, pmax);
        for p in 0..=pmax {
            let by_labels: usize = dec
                .counts
                .iter()
                .map(|&(l, c)| c * label_cohomology(l, p))
                .sum();
            let direct = cochains.cohomology_dim(p);
            if by_labels != direct {
                return Err(LhsError::Row {
                    q,
                    what: format!(
                        "H^{p} is {direct} from cochains but {by_labels} from the decomposition"
                    ),
                });
            }
            pages.insert((2, p, q), direct);
        }
    }
    Ok(SpectralGrid {
        kind,
        pmax,
        qmax,
        pages,
        d2_ranks: BTreeMap::new(),
        row_decompositions,
        ext,
        rows,
    })
}

/// E₂ page for X(2): rows H^p(E₂, Λ^q((M/2M)*)), q ≤ 5.
#[allow(non_snake_case)]
pub fn build_E2_X2(x: &LatticeExtension, pmax: usize) -> Result<SpectralGrid, LhsError> {
    if pmax < 8 {
        return Err(LhsError::OutOfRange(format!("pmax {pmax} < 8")));
    }
    let ext = x.reduction()?;
    if ext.n != 2 {
        return Err(LhsError::OutOfRange(format!("quotient rank {}", ext.n)));
    }
    let dual = ext.action.dual();
    let rows = (0..=ext.kernel_rank)
        .map(|q| dual.ext_power(q))
        .collect::<Result<Vec<_>, _>>()?;
    build_grid(RowKind::Exterior, ext, rows, pmax)
}

/// E₂ page for an extension of E₂ by an elementary abelian A, read through the
/// symmetric algebra: rows H^p(E₂, S^q(A*)), q ≤ qmax.
#[allow(non_snake_case)]
pub fn build_E2_V2(v: &ExtensionData, pmax: usize, qmax: usize) -> Result<SpectralGrid, LhsError> {
    if qmax > 8 || pmax < qmax + 4 {
        return Err(LhsError::OutOfRange(format!("pmax {pmax}, qmax {qmax}")));
    }
    if v.n != 2 {
        return Err(LhsError::OutOfRange(format!("quotient rank {}", v.n)));
    }
    let rows = v.action.dual().sym_powers(qmax)?;
    build_grid(RowKind::Symmetric, v.clone(), rows, pmax)
}

/// Rank of d₂ on cohomology from E₂^{p,q}, without the differential checks.
pub fn d2_rank(grid: &SpectralGrid, p: usize, q: usize) -> Result<usize, LhsError> {
    if q == 0 || q > grid.qmax || p + 2 > grid.pmax {
        return Err(LhsError::OutOfRange(format!("d₂ at ({p},{q})")));
    }
    let src = RowCochains::new(&grid.rows[q], p);
    let tgt = RowCochains::new(&grid.rows[q - 1], p + 2);
    let z = src.cocycles(p);
    let img = grid
        .d2_cochain(p, q)
        .mul(&z.transpose())
        .expect("shape")
        .transpose();
    let b = tgt.coboundaries(p + 2);
    Ok(b.vstack(&img).expect("width").rank() - b.rank())
}

/// Applies d₂ and computes E₃. Fails with [`LhsError::DerivationInconsistency`] at the
/// first bidegree (by total degree, then p) where d₂ does not map cocycles to cocycles,
/// coboundaries to coboundaries, or where d₂∘d₂ ≠ 0 in cohomology.
pub fn d2_contraction(grid: &SpectralGrid) -> Result<SpectralGrid, LhsError> {
    let (pmax, qmax) = (grid.pmax, grid.qmax);
    let chains: Vec<RowCochains> = grid
        .rows
        .iter()
        .map(|r| RowCochains::new(r, pmax))
        .collect();
    let mut ranks = BTreeMap::new();
    let mut order: Vec<(usize, usize)> = (1..=qmax)
        .flat_map(|q| (0..=pmax.saturating_sub(2)).map(move |p| (p, q)))
        .collect();
    order.sort_by_key(|&(p, q)| (p + q, p));
    for (p, q) in order {
        let fail = |what: &str| LhsError::DerivationInconsistency {
            p,
            q,
            what: what.to_string(),
        };
        let d = grid.d2_cochain(p, q);
        let z = chains[q].cocycles(p);
        let img = d.mul(&z.transpose()).expect("shape");
        if !chains[q - 1].delta[p + 2]
            .mul(&img)
            .expect("shape")
            .is_zero()
        {
            return Err(fail("a cocycle maps to a non-cocycle"));
        }
        let b_src = chains[q].coboundaries(p);
        let b_tgt = chains[q - 1].coboundaries(p + 2);
        let rb = b_tgt.rank();
        if b_src.rows() > 0 {
            let bimg = d.mul(&b_src.transpose()).expect("shape").transpose();
            if b_tgt.vstack(&bimg).expect("width").rank() != rb {
                return Err(fail("a coboundary maps outside the coboundaries"));
            }
        }
        let img_rows = img.transpose();
        ranks.insert((p, q), b_tgt.vstack(&img_rows).expect("width").rank() - rb);
        if q >= 2 && p + 4 <= pmax {
            let twice = grid
                .d2_cochain(p + 2, q - 1)
                .mul(&img)
                .expect("shape")
                .transpose();
            let b2 = chains[q - 2].coboundaries(p + 4);
            if b2.vstack(&twice).expect("width").rank() != b2.rank() {
                return Err(fail("d₂∘d₂ is nonzero in cohomology"));
            }
        }
    }
    let mut out = grid.clone();
    for q in 0..=qmax {
        for p in 0..=pmax.saturating_sub(2) {
            let outgoing = if q >= 1 { ranks[&(p, q)] } else { 0 };
            let incoming = if p >= 2 && q < qmax {
                ranks[&(p - 2, q + 1)]
            } else {
                0
            };
            out.pages
                .insert((3, p, q), grid.e2(p, q) - outgoing - incoming);
        }
    }
    out.d2_ranks = ranks;
    Ok(out)
}
