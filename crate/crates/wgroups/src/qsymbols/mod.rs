//! Quadratic-symbol models of fields: the square-class space Ḟ/Ḟ² with [−1] and the
//! quaternion-symbol pairing, plus the module J of square classes of F^{(2)}.

mod jdata;

pub use jdata::{
    build_j_from_vgroup, j90_check, kummer_compat_check, J90Outcome, JData, KummerReport,
    SearchMode,
};

use crate::cohomres::{d2_01, d2_11, CentralExtension, CohomError, PolyClass};
use gf2core::{BitMatrix, BitVec};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("symbol is not symmetric")]
    NotSymmetric,
    #[error("(a,a) = (a,−1) fails for basis vector {0}")]
    QuaternionIdentity(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Cohom(#[from] CohomError),
}

/// (V, [−1], s): V = Ḟ/Ḟ² over GF(2), s(a, b) = 1 iff the quaternion symbol (a, b) is split-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolField {
    pub name: String,
    pub n: usize,
    pub minus_one: BitVec,
    /// Gram matrix of s in the chosen basis.
    pub gram: BitMatrix,
}

impl SymbolField {
    pub fn new(
        name: impl Into<String>,
        minus_one: BitVec,
        gram: BitMatrix,
    ) -> Result<Self, SymbolError> {
        let n = minus_one.len();
        if gram.rows() != n || gram.cols() != n {
            return Err(SymbolError::Shape(format!(
                "{}×{} Gram matrix for n = {n}",
                gram.rows(),
                gram.cols()
            )));
        }
        if gram != gram.transpose() {
            return Err(SymbolError::NotSymmetric);
        }
        let f = SymbolField {
            name: name.into(),
            n,
            minus_one,
            gram,
        };
        // s(a,a) is additive in a, so the basis suffices.
        for i in 0..n {
            let e = BitVec::unit(n, i);
            if f.symbol(&e, &e) != f.symbol(&e, &f.minus_one) {
                return Err(SymbolError::QuaternionIdentity(i));
            }
        }
        Ok(f)
    }

    /// A quadratically closed field: V = 0.
    pub fn quadratically_closed() -> Self {
        SymbolField {
            name: "quadratically closed".into(),
            n: 0,
            minus_one: BitVec::zeros(0),
            gram: BitMatrix::zeros(0, 0),
        }
    }

    pub fn symbol(&self, a: &BitVec, b: &BitVec) -> bool {
        self.gram.mul_vec(b).expect("length").dot(a)
    }

    /// Text form: `n`, then the [−1] vector, then n rows of the Gram matrix.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n{}\n", self.n, bits(&self.minus_one));
        for r in 0..self.n {
            s.push_str(&bits(&self.gram.row_vec(r)));
            s.push('\n');
        }
        s
    }

    pub fn parse(name: &str, text: &str) -> Result<Self, SymbolError> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let n: usize = lines
            .first()
            .ok_or_else(|| SymbolError::Parse("empty input".into()))?
            .parse()
            .map_err(|_| SymbolError::Parse("first line must be n".into()))?;
        if lines.len() != n + 2 {
            return Err(SymbolError::Parse(format!(
                "expected {} lines, found {}",
                n + 2,
                lines.len()
            )));
        }
        let read = |s: &str| -> Result<BitVec, SymbolError> {
            let v = if n == 0 && (s == "-" || s.is_empty()) {
                BitVec::zeros(0)
            } else {
                BitVec::parse(s).map_err(|e| SymbolError::Parse(e.to_string()))?
            };
            if v.len() != n {
                return Err(SymbolError::Parse(format!(
                    "vector {s:?} has length {}",
                    v.len()
                )));
            }
            Ok(v)
        };
        let minus_one = read(lines[1])?;
        let rows = lines[2..]
            .iter()
            .map(|l| read(l))
            .collect::<Result<Vec<_>, _>>()?;
        SymbolField::new(name, minus_one, BitMatrix::from_rows(&rows, n))
    }
}

fn bits(v: &BitVec) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.to_bools()
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect()
}

/// Row basis of {c : s(a, c) = 0}, the norms from F(√a).
pub fn value_group(f: &SymbolField, a: &BitVec) -> BitMatrix {
    let functional = f.gram.vec_mul(a).expect("length");
    BitMatrix::from_rows(&[functional], f.n).kernel_basis()
}

#[derive(Clone, Debug, Serialize)]
pub struct CFieldReport {
    pub is_c_field: bool,
    /// Some a ≠ 0 whose value group has dimension ≥ 2.
    pub witness: Option<Vec<bool>>,
    pub witness_value_group_dim: Option<usize>,
}

/// Not a C-field iff some anisotropic ⟨1, −a⟩ (a ≠ 0) represents at least three square classes.
pub fn is_c_field(f: &SymbolField) -> Result<CFieldReport, SymbolError> {
    if f.n > 12 {
        return Err(SymbolError::OutOfRange(format!("n = {} > 12", f.n)));
    }
    for x in 1u64..1 << f.n {
        let a = BitVec::from_u64(f.n, x);
        let d = value_group(f, &a).rows();
        if d >= 2 {
            return Ok(CFieldReport {
                is_c_field: false,
                witness: Some(a.to_bools()),
                witness_value_group_dim: Some(d),
            });
        }
    }
    Ok(CFieldReport {
        is_c_field: true,
        witness: None,
        witness_value_group_dim: None,
    })
}

/// The cup product H²(E_n) → H²(G_F), a_i a_j ↦ s(e_i, e_j), as a row vector over
/// the quadratic monomials.
fn psi(f: &SymbolField) -> BitVec {
    let basis = PolyClass::basis(f.n, 2);
    let vals: Vec<bool> = basis
        .iter()
        .map(|e| {
            let idx: Vec<usize> = (0..f.n)
                .flat_map(|i| std::iter::repeat_n(i, e[i] as usize))
                .collect();
            f.gram.get(idx[0], idx[1])
        })
        .collect();
    BitVec::from_bools(&vals)
}

/// W-group extension of a symbol field with its d₂^{0,1} image ker ψ.
#[derive(Clone, Debug)]
pub struct WExtension {
    pub ext: CentralExtension,
    /// d₂^{0,1}(z_k) for the dual basis z_k of Φ.
    pub classes: Vec<PolyClass>,
}

impl WExtension {
    /// z with d₂^{0,1}(z) = target, if the target lies in the image.
    pub fn preimage(&self, target: &PolyClass) -> Option<BitVec> {
        let rows: Vec<BitVec> = self.classes.iter().map(|c| c.coeffs.clone()).collect();
        let m = BitMatrix::from_rows(&rows, target.coeffs.len()).transpose();
        m.solve(&target.coeffs).expect("shape")
    }
}

/// Φ* ≅ ker(ψ), so d₂^{0,1} is the inclusion of ker ψ into H²(E_n).
pub fn w_extension(f: &SymbolField) -> Result<WExtension, SymbolError> {
    let dim = PolyClass::dim(f.n, 2);
    let kernel = BitMatrix::from_rows(&[psi(f)], dim).kernel_basis();
    let classes: Vec<PolyClass> = (0..kernel.rows())
        .map(|r| PolyClass {
            n: f.n,
            degree: 2,
            coeffs: kernel.row_vec(r),
        })
        .collect();
    let ext = CentralExtension::from_classes(f.n, &classes)?;
    Ok(WExtension { ext, classes })
}

/// Linear form of a ∈ V as a degree-1 class.
pub fn linear_class(a: &BitVec) -> PolyClass {
    PolyClass {
        n: a.len(),
        degree: 1,
        coeffs: a.clone(),
    }
}

/// λ = [a₂] ⊗ z₃ + [a₃] ⊗ z₂ with d₂^{0,1}(z_k) = [a][a_k]; certified to lie in ker d₂^{1,1}.
pub fn permanent_cycle(
    f: &SymbolField,
    a: &BitVec,
    a2: &BitVec,
    a3: &BitVec,
) -> Result<BitVec, SymbolError> {
    let n = f.n;
    if a.len() != n || a2.len() != n || a3.len() != n {
        return Err(SymbolError::Shape("vectors must lie in V".into()));
    }
    if a.is_zero() {
        return Err(SymbolError::Precondition("a must be nonzero".into()));
    }
    if a2.is_zero() || a3.is_zero() || a2 == a3 {
        return Err(SymbolError::Precondition(
            "a2, a3 must be linearly independent".into(),
        ));
    }
    if f.symbol(a, a2) || f.symbol(a, a3) {
        return Err(SymbolError::Precondition(
            "s(a, a2) and s(a, a3) must vanish".into(),
        ));
    }
    let w = w_extension(f)?;
    let la = linear_class(a);
    let z = |ak: &BitVec| -> Result<BitVec, SymbolError> {
        w.preimage(&la.mul(&linear_class(ak)))
            .ok_or_else(|| SymbolError::Precondition("[a][a_k] is not a d₂-image".into()))
    };
    let (z2, z3) = (z(a2)?, z(a3)?);
    let r = w.ext.phi_rank;
    let mut lambda = BitVec::zeros(n * r);
    for (ak, zk) in [(a2, &z3), (a3, &z2)] {
        for i in ak.iter_ones() {
            for k in zk.iter_ones() {
                lambda.flip(i * r + k);
            }
        }
    }
    debug_assert!(d2_01(&w.ext, &z2)? == la.mul(&linear_class(a2)));
    if !d2_11(&w.ext, &lambda)?.is_zero() || lambda.is_zero() {
        return Err(SymbolError::Precondition(
            "constructed element is not a nonzero cycle".into(),
        ));
    }
    Ok(lambda)
}
