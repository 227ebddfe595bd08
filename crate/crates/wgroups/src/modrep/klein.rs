//! Decomposition of Klein-four modules into the summands F, k, Ω^{±1}k, Ω^{±2}k
//! and the three non-free transitive permutation modules.
//!
//! The multiplicity of an indecomposable L with End(L)/rad ≅ F₂ in M is the rank
//! of the pairing Hom(L,M) × Hom(M,L) → F₂, (f, g) ↦ g∘f mod rad End(L). The
//! residue of an endomorphism is its trace on an invariant subspace of odd
//! dimension. Maps f with independent pairing rows assemble to a split
//! injection ⊕L → M, which is the certificate.

use super::{GModule, ModError};
use gf2core::{BitMatrix, BitVec};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum KleinLabel {
    Free,
    Trivial,
    /// Ω^k k for k ∈ {±1, ±2}.
    Omega(i32),
    /// F₂[E₂/H] for H = ⟨σ₁⟩, ⟨σ₂⟩, ⟨σ₁σ₂⟩ (1, 2, 3).
    Perm(u8),
}

impl KleinLabel {
    /// Fixed reporting order.
    pub const ALL: [KleinLabel; 9] = [
        KleinLabel::Free,
        KleinLabel::Trivial,
        KleinLabel::Omega(2),
        KleinLabel::Omega(-2),
        KleinLabel::Omega(1),
        KleinLabel::Omega(-1),
        KleinLabel::Perm(1),
        KleinLabel::Perm(2),
        KleinLabel::Perm(3),
    ];

    pub fn module(self) -> GModule {
        let k = GModule::trivial(2);
        match self {
            KleinLabel::Free => GModule::regular(2),
            KleinLabel::Trivial => k,
            KleinLabel::Omega(s) => k.heller(s).expect("small shift"),
            KleinLabel::Perm(h) => GModule::permutation(2, &[h as u32]),
        }
    }
}

impl fmt::Display for KleinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KleinLabel::Free => f.write_str("F"),
            KleinLabel::Trivial => f.write_str("k"),
            KleinLabel::Omega(s) => write!(f, "Omega^{s}k"),
            KleinLabel::Perm(h) => write!(f, "P{h}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KleinDecomposition {
    /// Multiplicity of every label, in [`KleinLabel::ALL`] order.
    pub counts: Vec<(KleinLabel, usize)>,
    /// Isomorphism from the ordered direct sum of labels onto the module.
    pub certificate: BitMatrix,
}

impl KleinDecomposition {
    pub fn count(&self, label: KleinLabel) -> usize {
        self.counts
            .iter()
            .find(|(l, _)| *l == label)
            .map_or(0, |(_, c)| *c)
    }

    /// Copies of P = P1 ⊕ P2 ⊕ P3, when the three multiplicities agree.
    pub fn p_sum_count(&self) -> Option<usize> {
        let p: Vec<usize> = (1..=3).map(|h| self.count(KleinLabel::Perm(h))).collect();
        (p[0] == p[1] && p[1] == p[2]).then_some(p[0])
    }

    /// The ordered direct sum of labels that the certificate starts from.
    pub fn model(&self) -> GModule {
        let parts: Vec<GModule> = self
            .counts
            .iter()
            .flat_map(|&(l, c)| std::iter::repeat_n(l.module(), c))
            .collect();
        GModule::direct_sum_all(2, &parts).expect("all over E2")
    }
}

impl fmt::Display for KleinDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|(l, c)| {
                if *c == 1 {
                    l.to_string()
                } else {
                    format!("{c}·{l}")
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

fn flatten(m: &BitMatrix) -> BitVec {
    let (r, c) = (m.rows(), m.cols());
    let mut v = BitVec::zeros(r * c);
    for i in 0..r {
        for j in m.row_ones(i) {
            v.set(i * c + j, true);
        }
    }
    v
}

/// Π with trace(φΠ) = residue of φ in End(L)/rad.
fn residue_projector(l: &GModule) -> Result<BitMatrix, ModError> {
    let d = l.dim();
    if d % 2 == 1 {
        return Ok(BitMatrix::identity(d));
    }
    let soc = l.fixed_space().rref();
    if soc.rank() % 2 == 1 {
        // Column p_k of Π is the k-th reduced socle vector.
        let mut pi = BitMatrix::zeros(d, d);
        for (k, &p) in soc.pivots.iter().enumerate() {
            for r in soc.reduced.row_ones(k).collect::<Vec<_>>() {
                pi.set(r, p, true);
            }
        }
        return Ok(pi);
    }
    Err(ModError::Unrecognized(
        "no odd-dimensional invariant layer".into(),
    ))
}

impl GModule {
    /// Multiplicity of `l` as a summand, with maps realising it.
    fn label_multiplicity(&self, l: &GModule) -> Result<(usize, Vec<BitMatrix>), ModError> {
        let into = l.hom_space(self)?; // dim M × dim L
        let back = self.hom_space(l)?; // dim L × dim M
        if into.is_empty() || back.is_empty() {
            return Ok((0, Vec::new()));
        }
        let pi = residue_projector(l)?;
        let width = l.dim() * self.dim();
        let f_rows: Vec<BitVec> = into
            .iter()
            .map(|f| flatten(&f.mul(&pi).expect("shape").transpose()))
            .collect();
        let g_rows: Vec<BitVec> = back.iter().map(flatten).collect();
        let fm = BitMatrix::from_rows(&f_rows, width);
        let gm = BitMatrix::from_rows(&g_rows, width);
        let pairing = fm.mul(&gm.transpose()).expect("shape");
        // Rows of the pairing that are independent, in order.
        let ech = pairing.transpose().echelon();
        let chosen = ech.pivots.iter().map(|&a| into[a].clone()).collect();
        Ok((ech.rank(), chosen))
    }

    /// Decomposes a module for E₂ into labelled summands, with a certificate.
    pub fn decompose_klein4(&self) -> Result<KleinDecomposition, ModError> {
        if self.n != 2 {
            return Err(ModError::OutOfRange(format!(
                "Klein-four decomposition over E{}",
                self.n
            )));
        }
        let mut counts = Vec::new();
        let mut cert = BitMatrix::zeros(self.dim, 0);
        let mut total = 0;
        for label in KleinLabel::ALL {
            let l = label.module();
            let (mult, maps) = self.label_multiplicity(&l)?;
            for f in maps {
                cert = cert.hstack(&f).expect("rows");
            }
            total += mult * l.dim();
            counts.push((label, mult));
        }
        if total != self.dim {
            return Err(ModError::Unrecognized(format!(
                "labelled summands cover {total} of {} dimensions",
                self.dim
            )));
        }
        if cert.rank() != self.dim {
            return Err(ModError::Unrecognized(
                "assembled map is not an isomorphism".into(),
            ));
        }
        Ok(KleinDecomposition {
            counts,
            certificate: cert,
        })
    }
}
