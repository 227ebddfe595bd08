//! Equivariant maps, isomorphism testing and free summands.

use super::{GModule, ModError, Subspace};
use gf2core::{BitMatrix, BitVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default number of Hom-space elements tried before giving up.
pub const SEARCH_CAP: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// An explicit isomorphism M₁ → M₂ (dim M₂ × dim M₁).
    Isomorphic(BitMatrix),
    NotIsomorphic(String),
    /// The search cap was reached without a decision.
    Undecided,
}

impl IsoOutcome {
    pub fn is_true(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

/// Generators-and-relations description of a module.
struct Presentation {
    gens: usize,
    /// Module generators of the relation submodule of F^gens.
    relations: Vec<BitVec>,
    /// For each basis vector of M, a preimage in F^gens (as columns).
    preimages: BitMatrix,
}

impl GModule {
    fn presentation(&self) -> Presentation {
        let (g, phi) = self.projective_cover();
        let size = 1usize << self.n;
        let free = GModule::free(self.n, g);
        let rel = phi.kernel_basis();
        // Top of the relation module: kernel vectors independent modulo its radical.
        let mut rad = BitMatrix::zeros(0, g * size);
        for a in free.matrices() {
            let img = rel.mul(&a.add_identity().transpose()).expect("width");
            rad = rad.vstack(&img).expect("width");
        }
        let rad = Subspace::new(&rad);
        let mut span = rad.basis().clone();
        let mut r = rad.dim();
        let mut relations = Vec::new();
        for k in 0..rel.rows() {
            let v = rel.row_vec(k);
            span.push_row(&v);
            let r2 = span.rank();
            if r2 > r {
                r = r2;
                relations.push(v);
            } else {
                span.truncate_rows(span.rows() - 1);
            }
        }
        let sols = phi
            .solve_many(&BitMatrix::identity(self.dim))
            .expect("shape");
        let cols: Vec<BitVec> = sols
            .into_iter()
            .map(|s| s.expect("projective cover is surjective"))
            .collect();
        let preimages = BitMatrix::from_rows(&cols, g * size).transpose();
        Presentation {
            gens: g,
            relations,
            preimages,
        }
    }

    /// Basis of Hom_{E_n}(self, other); each map is a dim(other) × dim(self) matrix.
    pub fn hom_space(&self, other: &GModule) -> Result<Vec<BitMatrix>, ModError> {
        if self.n != other.n {
            return Err(ModError::GroupMismatch(self.n, other.n));
        }
        if self.dim == 0 || other.dim == 0 {
            return Ok(Vec::new());
        }
        if self.dim > other.dim {
            // Hom(A, B) ≅ Hom(B*, A*) by transposition.
            let maps = other.dual().hom_space_direct(&self.dual());
            return Ok(maps.into_iter().map(|m| m.transpose()).collect());
        }
        Ok(self.hom_space_direct(other))
    }

    fn hom_space_direct(&self, other: &GModule) -> Vec<BitMatrix> {
        let pres = self.presentation();
        let size = 1usize << self.n;
        let db = other.dim;
        let g = pres.gens;
        let elems = other.all_elements();
        // Unknowns: images b_c ∈ B of the generators, concatenated.
        let mut system = BitMatrix::zeros(0, g * db);
        for r in &pres.relations {
            let mut block = BitMatrix::zeros(db, g * db);
            for c in 0..g {
                let mut sum = BitMatrix::zeros(db, db);
                for t in 0..size {
                    if r.get(c * size + t) {
                        sum = sum.add(&elems[t]).expect("shape");
                    }
                }
                for row in 0..db {
                    for col in sum.row_ones(row).collect::<Vec<_>>() {
                        block.set(row, c * db + col, true);
                    }
                }
            }
            system = system.vstack(&block).expect("width");
        }
        let sols = if system.rows() == 0 {
            BitMatrix::identity(g * db)
        } else {
            system.kernel_basis()
        };
        let nsol = sols.rows();
        let da = self.dim;
        // Z[c·2^n + t] has row s equal to (t·b_c)ᵀ for solution s.
        let mut z = Vec::with_capacity(g * size);
        for c in 0..g {
            let cols: Vec<usize> = (c * db..(c + 1) * db).collect();
            let xc = sols.select_cols(&cols);
            for e in &elems {
                z.push(xc.mul(&e.transpose()).expect("shape"));
            }
        }
        // Column a of every map at once: Σ over the support of the preimage of e_a.
        let pre_t = pres.preimages.transpose();
        let mut map_t = vec![BitMatrix::zeros(da, db); nsol];
        for a in 0..da {
            let mut col = BitMatrix::zeros(nsol, db);
            for k in pre_t.row_ones(a) {
                col = col.add(&z[k]).expect("shape");
            }
            for (s, m) in map_t.iter_mut().enumerate() {
                m.row_mut(a).copy_from_slice(col.row(s));
            }
        }
        map_t.into_iter().map(|m| m.transpose()).collect()
    }

    /// Numerical invariants preserved by isomorphism.
    pub fn invariants(&self) -> Vec<usize> {
        let mut inv = vec![self.n, self.dim];
        let elems = self.all_elements();
        for e in elems.iter().skip(1) {
            inv.push(e.add_identity().rank());
        }
        inv.extend(self.socle_series().layer_dims());
        inv.push(usize::MAX);
        inv.extend(self.radical_layers());
        inv
    }

    pub fn is_isomorphic(&self, other: &GModule) -> Result<IsoOutcome, ModError> {
        self.is_isomorphic_with(other, SEARCH_CAP, 0x5eed)
    }

    pub fn is_isomorphic_with(
        &self,
        other: &GModule,
        cap: u64,
        seed: u64,
    ) -> Result<IsoOutcome, ModError> {
        if self.n != other.n {
            return Err(ModError::GroupMismatch(self.n, other.n));
        }
        if self.invariants() != other.invariants() {
            return Ok(IsoOutcome::NotIsomorphic(
                "structural invariants differ".into(),
            ));
        }
        if self.dim == 0 {
            return Ok(IsoOutcome::Isomorphic(BitMatrix::zeros(0, 0)));
        }
        let hom = self.hom_space(other)?;
        let d = self.dim;
        let invertible = |m: &BitMatrix| m.rank() == d;
        if hom.is_empty() {
            return Ok(IsoOutcome::NotIsomorphic(
                "no nonzero equivariant maps".into(),
            ));
        }
        if (hom.len() as u64) <= 16 && (1u64 << hom.len()) <= cap {
            // Gray-code walk through every element of Hom.
            let mut cur = BitMatrix::zeros(d, d);
            for k in 1u64..1 << hom.len() {
                let flip = k.trailing_zeros() as usize;
                cur = cur.add(&hom[flip]).expect("shape");
                if invertible(&cur) {
                    return Ok(IsoOutcome::Isomorphic(cur));
                }
            }
            return Ok(IsoOutcome::NotIsomorphic(
                "exhaustive search over Hom".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cap {
            let mut m = BitMatrix::zeros(d, d);
            for h in &hom {
                if rng.gen::<bool>() {
                    m = m.add(h).expect("shape");
                }
            }
            if invertible(&m) {
                return Ok(IsoOutcome::Isomorphic(m));
            }
        }
        if self.n == 2 {
            // Krull-Schmidt: compare decompositions when both are on the label list.
            if let (Ok(a), Ok(b)) = (self.decompose_klein4(), other.decompose_klein4()) {
                if a.counts != b.counts {
                    return Ok(IsoOutcome::NotIsomorphic("decompositions differ".into()));
                }
                // Both certificates start from the same ordered sum of labels.
                let a_inv = a.certificate.inverse().expect("certificate is invertible");
                let iso = b.certificate.mul(&a_inv).expect("shape");
                return Ok(IsoOutcome::Isomorphic(iso));
            }
        }
        Ok(IsoOutcome::Undecided)
    }

    /// Rank of the norm element N = Π(1 + σ_i) acting on M.
    pub fn norm_rank(&self) -> usize {
        let mut m = BitMatrix::identity(self.dim);
        for a in &self.action {
            m = m.mul(&a.add_identity()).expect("shape");
        }
        m.rank()
    }

    /// Splits off a maximal free summand: returns its rank and a complement.
    pub fn split_free(&self) -> (usize, GModule) {
        let d = self.dim;
        let mut norm = BitMatrix::identity(d);
        for a in &self.action {
            norm = norm.mul(&a.add_identity()).expect("shape");
        }
        let img = norm.transpose().rref(); // rows span N·M
        let r = img.rank();
        if r == 0 {
            return (0, self.clone());
        }
        // Functionals λ_j with λ_j(y_k) = δ_jk on the basis y_k of N·M.
        let y = &img.reduced;
        let lambdas: Vec<BitVec> = (0..r)
            .map(|j| {
                let mut v = BitVec::zeros(d);
                v.set(img.pivots[j], true);
                v
            })
            .collect();
        debug_assert!((0..r).all(|j| (0..r).all(|k| lambdas[j].dot(&y.row_vec(k)) == (j == k))));
        // π(x) = (Σ_t λ_j(t·x) t)_j; its kernel is a complement of the free part.
        let elems = self.all_elements();
        let size = elems.len();
        let mut pi = BitMatrix::zeros(r * size, d);
        for (j, l) in lambdas.iter().enumerate() {
            for (t, e) in elems.iter().enumerate() {
                let row = e.vec_mul(l).expect("length"); // x ↦ λ(t·x)
                pi.row_mut(j * size + t).copy_from_slice(row.words());
            }
        }
        let core_basis = pi.kernel_basis();
        let core = self.submodule(&core_basis).expect("kernel of a module map");
        debug_assert_eq!(core.dim(), d - r * size);
        (r, core)
    }
}
