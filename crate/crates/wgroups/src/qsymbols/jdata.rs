//! The module J = H¹(A) of square classes of F^{(2)}, its fixed part J₁ and the
//! Hilbert 90 type checker for d₂-relations.

use super::SymbolError;
use crate::cohomres::{d2_11, CentralExtension};
use crate::group2::{GroupElement, KernelSpec, PcGroup};
use crate::modrep::GModule;
use gf2core::{BitMatrix, BitVec};
use serde::Serialize;

/// Where the pairing of J with the kernel comes from, when J is built from a group.
#[derive(Clone, Debug)]
pub struct GroupSource {
    pub group: PcGroup,
    /// Generators `0..n` map to σ̂_i; the rest span A.
    pub n: usize,
    /// Row k: the k-th named basis element of A in tail coordinates.
    pub named: BitMatrix,
    /// Tail coordinates → named coordinates.
    pub to_named: BitMatrix,
}

#[derive(Clone, Debug)]
pub struct JData {
    pub n: usize,
    /// J with the action of E_n, one column-vector matrix per σ_i.
    pub module: GModule,
    /// Row basis of J₁ = J^{E_n}.
    pub j1: BitMatrix,
    /// ⟨j, σ̂_i²⟩ and ⟨j, [σ̂_i, σ̂_k]⟩ as functionals on J. Meaningful on J₁, where
    /// d₂^{0,1} of that extension is read off from them.
    pub pairing: CentralExtension,
    /// Names of the coordinate functionals, e.g. `(s1^2)*`.
    pub labels: Vec<String>,
    pub source: Option<GroupSource>,
}

impl JData {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn in_j1(&self, j: &BitVec) -> bool {
        (0..self.n).all(|i| self.module.act(i, j) == *j)
    }
}

/// Named elements of A: σ̂_i², [σ̂_i, σ̂_k], [σ̂_i², σ̂_k], [σ̂_i, [σ̂_k, σ̂_l]].
fn named_candidates(g: &PcGroup, n: usize) -> Result<Vec<(String, GroupElement)>, SymbolError> {
    let ge = |e: crate::group2::GroupError| SymbolError::Precondition(e.to_string());
    let s = |i: usize| g.generator(i);
    let mut out = Vec::new();
    for i in 0..n {
        out.push((format!("s{}^2", i + 1), g.square(s(i)).map_err(ge)?));
    }
    for i in 0..n {
        for k in i + 1..n {
            out.push((
                format!("[s{},s{}]", i + 1, k + 1),
                g.commutator(s(i), s(k)).map_err(ge)?,
            ));
        }
    }
    for i in 0..n {
        for k in 0..n {
            if i != k {
                let sq = g.square(s(i)).map_err(ge)?;
                out.push((
                    format!("[s{}^2,s{}]", i + 1, k + 1),
                    g.commutator(sq, s(k)).map_err(ge)?,
                ));
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            for l in k + 1..n {
                let c = g.commutator(s(k), s(l)).map_err(ge)?;
                out.push((
                    format!("[s{},[s{},s{}]]", i + 1, k + 1, l + 1),
                    g.commutator(s(i), c).map_err(ge)?,
                ));
            }
        }
    }
    Ok(out)
}

/// J = A* for A = ker(V → E_n), with the contragredient action and a dual basis
/// to named commutator elements of A.
pub fn build_j_from_vgroup(v: &PcGroup, n: usize) -> Result<JData, SymbolError> {
    let ext = v
        .extension_data(KernelSpec::Tail(n))
        .map_err(|e| SymbolError::Precondition(e.to_string()))?;
    let r = ext.kernel_rank;
    let tail = |x: GroupElement| BitVec::from_u64(r, x.0 >> n);
    let mut named = BitMatrix::zeros(0, r);
    let mut labels = Vec::new();
    let mut basis_elems: Vec<(String, GroupElement)> = Vec::new();
    for (name, x) in named_candidates(v, n)? {
        if x.0 & ((1u64 << n) - 1) != 0 {
            return Err(SymbolError::Precondition(format!(
                "{name} lies outside the kernel"
            )));
        }
        let mut trial = named.clone();
        trial.push_row(&tail(x));
        if trial.rank() > named.rows() {
            named = trial;
            labels.push(format!("({name})*"));
            basis_elems.push((name, x));
        }
    }
    // Close under commutation with the σ̂_k until A is spanned.
    let mut next = 0;
    while named.rows() < r && next < basis_elems.len() {
        let (name, x) = basis_elems[next].clone();
        next += 1;
        for k in 0..n {
            let c = v
                .commutator(x, v.generator(k))
                .map_err(|e| SymbolError::Precondition(e.to_string()))?;
            let mut trial = named.clone();
            trial.push_row(&tail(c));
            if trial.rank() > named.rows() {
                named = trial;
                let cname = format!("[{name},s{}]", k + 1);
                labels.push(format!("({cname})*"));
                basis_elems.push((cname, c));
            }
        }
    }
    if named.rows() != r {
        return Err(SymbolError::Precondition(format!(
            "named commutators span {} of {r} kernel dimensions",
            named.rows()
        )));
    }
    // Columns of B = named elements; named coordinates = B⁻¹ · tail coordinates.
    let b = named.transpose();
    let to_named = b.inverse().expect("independent rows");
    // Action on A in named coordinates is B⁻¹ M B; on J = A* it is the transpose.
    let action: Vec<BitMatrix> = ext
        .action
        .matrices()
        .iter()
        .map(|m| {
            to_named
                .mul(m)
                .and_then(|x| x.mul(&b))
                .expect("square")
                .transpose()
        })
        .collect();
    let module = GModule::new(n, action).map_err(|e| SymbolError::Precondition(e.to_string()))?;
    let j1 = module.fixed_space();
    let conv = |t: &BitVec| to_named.mul_vec(t).expect("length");
    let pairing = CentralExtension {
        n,
        phi_rank: r,
        squares: ext.squares.iter().map(conv).collect(),
        commutators: ext
            .commutators
            .iter()
            .map(|row| row.iter().map(conv).collect())
            .collect(),
    };
    Ok(JData {
        n,
        module,
        j1,
        pairing,
        labels,
        source: Some(GroupSource {
            group: v.clone(),
            n,
            named,
            to_named,
        }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    Exhaustive,
    LinearSolve,
}

#[derive(Clone, Debug, Serialize)]
pub struct J90Outcome {
    pub lhs_zero: bool,
    /// Some j ∈ J₂ with (σ_i + 1) j = j_i on assigned indices and σ_u j = j elsewhere.
    pub witness: Option<Vec<bool>>,
    /// Number of witnesses in J₂ (exhaustive mode only).
    pub witness_count: Option<u64>,
    pub mode: SearchMode,
}

impl J90Outcome {
    /// The two sides agree.
    pub fn consistent(&self) -> bool {
        self.lhs_zero == self.witness.is_some()
    }
}

const EXHAUSTIVE_CAP: usize = 20;

fn satisfies(jd: &JData, targets: &[BitVec], j: &BitVec) -> bool {
    (0..jd.n).all(|i| jd.module.act(i, j).xor(j) == targets[i])
}

/// Checks Σ a_i d₂^{0,1}(j_i) = 0 against the existence of j ∈ J₂ with
/// σ_i(j) − j = j_i for assigned i and σ_u(j) = j for the others.
pub fn j90_check(jd: &JData, assignment: &[(usize, BitVec)]) -> Result<J90Outcome, SymbolError> {
    let (n, d) = (jd.n, jd.dim());
    let mut targets = vec![BitVec::zeros(d); n];
    let mut seen = vec![false; n];
    for (i, j) in assignment {
        if *i >= n {
            return Err(SymbolError::Precondition(format!(
                "index {} out of range",
                i + 1
            )));
        }
        if seen[*i] {
            return Err(SymbolError::Precondition(format!(
                "index {} repeated",
                i + 1
            )));
        }
        if j.len() != d || !jd.in_j1(j) {
            return Err(SymbolError::Precondition(format!(
                "element for index {} is not in J₁",
                i + 1
            )));
        }
        seen[*i] = true;
        targets[*i] = j.clone();
    }
    let mut lambda = BitVec::zeros(n * d);
    for (i, j) in assignment {
        for k in j.iter_ones() {
            lambda.set(i * d + k, true);
        }
    }
    let lhs_zero = d2_11(&jd.pairing, &lambda)?.is_zero();
    let socle = jd.module.socle_series();
    let j2 = if socle.layers.len() >= 2 {
        socle.layers[1].clone()
    } else {
        socle
            .layers
            .last()
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(0, d))
    };
    let k = j2.rows();
    if k <= EXHAUSTIVE_CAP {
        let mut witness = None;
        let mut count = 0u64;
        for x in 0u64..1 << k {
            let j = j2.vec_mul(&BitVec::from_u64(k, x)).expect("length");
            if satisfies(jd, &targets, &j) {
                count += 1;
                witness.get_or_insert(j);
            }
        }
        return Ok(J90Outcome {
            lhs_zero,
            witness: witness.map(|w| w.to_bools()),
            witness_count: Some(count),
            mode: SearchMode::Exhaustive,
        });
    }
    // Solve Σ c_r (σ_i + 1) b_r = j_i over the J₂ basis b_r.
    let mut system = BitMatrix::zeros(n * d, k);
    let mut rhs = BitVec::zeros(n * d);
    for i in 0..n {
        for r in 0..k {
            let img = jd.module.act(i, &j2.row_vec(r)).xor(&j2.row_vec(r));
            for t in img.iter_ones() {
                system.set(i * d + t, r, true);
            }
        }
        for t in targets[i].iter_ones() {
            rhs.set(i * d + t, true);
        }
    }
    let witness = system
        .solve(&rhs)
        .expect("shape")
        .map(|c| j2.vec_mul(&c).expect("length"));
    if let Some(w) = &witness {
        debug_assert!(satisfies(jd, &targets, w));
    }
    Ok(J90Outcome {
        lhs_zero,
        witness: witness.map(|w| w.to_bools()),
        witness_count: None,
        mode: SearchMode::LinearSolve,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct KummerReport {
    /// (σ, j, γ) triples compared.
    pub triples: u64,
    pub compat_violations: u64,
    pub double_commutator_checks: u64,
    pub double_commutator_violations: u64,
    pub square_commutator_checks: u64,
    pub square_commutator_violations: u64,
    pub own_square_checks: u64,
    pub own_square_violations: u64,
}

impl KummerReport {
    pub fn ok(&self) -> bool {
        self.compat_violations == 0
            && self.double_commutator_violations == 0
            && self.square_commutator_violations == 0
            && self.own_square_violations == 0
    }
}

/// Exhaustive check of ⟨σ·j, γ⟩ = ⟨j, σ̂γσ̂⁻¹⟩ over all σ ∈ E_n, j ∈ J, γ ∈ A, and of the
/// dictionary, for j_i = σ_i(j) − j:
/// ⟨j, [σ̂_i,[σ̂_k,σ̂_l]]⟩ = ⟨j_i, [σ̂_k,σ̂_l]⟩, ⟨j, [σ̂_i,σ̂_k²]⟩ = ⟨j_i, σ̂_k²⟩, ⟨j_i, σ̂_i²⟩ = 0.
/// Without a group source there is nothing to pair against and the report is empty.
pub fn kummer_compat_check(jd: &JData) -> Result<KummerReport, SymbolError> {
    let mut rep = KummerReport::default();
    let Some(src) = &jd.source else {
        return Ok(rep);
    };
    let (n, d) = (jd.n, jd.dim());
    if d > 16 {
        return Err(SymbolError::OutOfRange(format!(
            "exhaustive pairing check needs dim J ≤ 16, got {d}"
        )));
    }
    let g = &src.group;
    let r = d;
    let to_tail = |a: &BitVec| -> GroupElement {
        GroupElement(src.named.vec_mul(a).expect("length").to_u64() << n)
    };
    let to_named = |x: GroupElement| -> BitVec {
        src.to_named
            .mul_vec(&BitVec::from_u64(r, x.0 >> n))
            .expect("length")
    };
    let ge = |e: crate::group2::GroupError| SymbolError::Precondition(e.to_string());
    for mask in 0u32..1 << n {
        let sigma = GroupElement(mask as u64);
        let sigma_inv = g.inverse(sigma);
        let act = jd.module.element(mask);
        // Conjugation by σ̂ on A in named coordinates, column by column.
        let conj: Vec<BitVec> = (0..r)
            .map(|a| {
                let gamma = to_tail(&BitVec::unit(r, a));
                to_named(g.multiply(g.multiply(sigma, gamma), sigma_inv))
            })
            .collect();
        for jx in 0u64..1 << d {
            let j = BitVec::from_u64(d, jx);
            let sj = act.mul_vec(&j).expect("length");
            for gx in 0u64..1 << r {
                let gamma = BitVec::from_u64(r, gx);
                let mut cg = BitVec::zeros(r);
                for a in gamma.iter_ones() {
                    cg.xor_assign(&conj[a]);
                }
                rep.triples += 1;
                if sj.dot(&gamma) != j.dot(&cg) {
                    rep.compat_violations += 1;
                }
            }
        }
    }
    let s = |i: usize| g.generator(i);
    for jx in 0u64..1 << d {
        let j = BitVec::from_u64(d, jx);
        for i in 0..n {
            let ji = jd.module.act(i, &j).xor(&j);
            for k in 0..n {
                for l in k + 1..n {
                    let c = g.commutator(s(k), s(l)).map_err(ge)?;
                    let cc = g.commutator(s(i), c).map_err(ge)?;
                    rep.double_commutator_checks += 1;
                    if j.dot(&to_named(cc)) != ji.dot(&to_named(c)) {
                        rep.double_commutator_violations += 1;
                    }
                }
                let sq = g.square(s(k)).map_err(ge)?;
                let c = g.commutator(s(i), sq).map_err(ge)?;
                rep.square_commutator_checks += 1;
                if j.dot(&to_named(c)) != ji.dot(&to_named(sq)) {
                    rep.square_commutator_violations += 1;
                }
            }
            let sq = g.square(s(i)).map_err(ge)?;
            rep.own_square_checks += 1;
            if ji.dot(&to_named(sq)) {
                rep.own_square_violations += 1;
            }
        }
    }
    Ok(rep)
}
