//! H*(E_n) = F₂[a₁, …, a_n] and the differentials d₂^{0,1}, d₂^{1,1} of a central
//! extension 1 → Φ → 𝒢 → E_n → 1.

use super::CohomError;
use crate::group2::ExtensionData;
use crate::modrep::monomials;
use gf2core::{BitMatrix, BitVec};
use std::fmt;

/// Homogeneous class of degree `degree` in F₂[a₁, …, a_n]. Coefficients follow the
/// exponent vectors in descending lexicographic order (a₁^d first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyClass {
    pub n: usize,
    pub degree: usize,
    pub coeffs: BitVec,
}

impl PolyClass {
    pub fn basis(n: usize, degree: usize) -> Vec<Vec<u8>> {
        monomials(n, degree)
    }

    pub fn dim(n: usize, degree: usize) -> usize {
        Self::basis(n, degree).len()
    }

    pub fn zero(n: usize, degree: usize) -> Self {
        PolyClass {
            n,
            degree,
            coeffs: BitVec::zeros(Self::dim(n, degree)),
        }
    }

    /// The monomial with the given exponents.
    pub fn monomial(exps: &[u8]) -> Self {
        let n = exps.len();
        let degree = exps.iter().map(|&e| e as usize).sum();
        let mut p = Self::zero(n, degree);
        let k = Self::index(exps);
        p.coeffs.set(k, true);
        p
    }

    /// a_i (0-based i).
    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0u8; n];
        e[i] = 1;
        Self::monomial(&e)
    }

    /// Position of an exponent vector in the basis.
    pub fn index(exps: &[u8]) -> usize {
        let degree: usize = exps.iter().map(|&e| e as usize).sum();
        Self::basis(exps.len(), degree)
            .binary_search_by(|m| exps.cmp(m.as_slice()))
            .expect("exponent vector of the right degree")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &PolyClass) -> PolyClass {
        assert_eq!((self.n, self.degree), (other.n, other.degree));
        PolyClass {
            n: self.n,
            degree: self.degree,
            coeffs: self.coeffs.xor(&other.coeffs),
        }
    }

    pub fn mul(&self, other: &PolyClass) -> PolyClass {
        assert_eq!(self.n, other.n);
        let a = Self::basis(self.n, self.degree);
        let b = Self::basis(other.n, other.degree);
        let mut out = Self::zero(self.n, self.degree + other.degree);
        for i in self.coeffs.iter_ones() {
            for j in other.coeffs.iter_ones() {
                let e: Vec<u8> = a[i].iter().zip(&b[j]).map(|(x, y)| x + y).collect();
                out.coeffs.flip(Self::index(&e));
            }
        }
        out
    }

    pub fn terms(&self) -> Vec<Vec<u8>> {
        let basis = Self::basis(self.n, self.degree);
        self.coeffs.iter_ones().map(|k| basis[k].clone()).collect()
    }
}

impl fmt::Display for PolyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let words: Vec<String> = terms
            .iter()
            .map(|e| {
                let factors: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| match x {
                        1 => format!("a{}", i + 1),
                        _ => format!("a{}^{x}", i + 1),
                    })
                    .collect();
                if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        f.write_str(&words.join(" + "))
    }
}

/// Central extension of E_n by an elementary abelian Φ, through the kernel
/// elements σ̂_i² and [σ̂_i, σ̂_j] in a fixed basis of Φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralExtension {
    pub n: usize,
    pub phi_rank: usize,
    pub squares: Vec<BitVec>,
    /// `commutators[i][j]` for i < j; other entries are zero.
    pub commutators: Vec<Vec<BitVec>>,
}

impl CentralExtension {
    pub fn from_extension_data(ext: &ExtensionData) -> Result<Self, CohomError> {
        if let Some(i) = ext
            .action
            .matrices()
            .iter()
            .position(|a| a != &BitMatrix::identity(a.rows()))
        {
            return Err(CohomError::NotCentral(i + 1));
        }
        Ok(CentralExtension {
            n: ext.n,
            phi_rank: ext.kernel_rank,
            squares: ext.squares.clone(),
            commutators: ext.commutators.clone(),
        })
    }

    /// Builds the extension from the degree-2 classes d₂^{0,1}(z_k) of a basis z_k of Φ*.
    pub fn from_classes(n: usize, classes: &[PolyClass]) -> Result<Self, CohomError> {
        let r = classes.len();
        if classes.iter().any(|c| c.n != n || c.degree != 2) {
            return Err(CohomError::Shape(
                "classes must be quadratic in n variables".into(),
            ));
        }
        let entry = |exps: &[u8]| -> BitVec {
            let k = PolyClass::index(exps);
            BitVec::from_bools(&classes.iter().map(|c| c.coeffs.get(k)).collect::<Vec<_>>())
        };
        let mut squares = Vec::with_capacity(n);
        let mut commutators = vec![vec![BitVec::zeros(r); n]; n];
        for i in 0..n {
            let mut e = vec![0u8; n];
            e[i] = 2;
            squares.push(entry(&e));
            for j in i + 1..n {
                let mut e = vec![0u8; n];
                e[i] = 1;
                e[j] = 1;
                commutators[i][j] = entry(&e);
            }
        }
        Ok(CentralExtension {
            n,
            phi_rank: r,
            squares,
            commutators,
        })
    }

    /// σ̂_i² when i = j, [σ̂_i, σ̂_j] when i < j.
    pub fn pair(&self, i: usize, j: usize) -> &BitVec {
        if i == j {
            &self.squares[i]
        } else {
            &self.commutators[i.min(j)][i.max(j)]
        }
    }

    /// Index of a_i ⊗ z_k in H¹(E_n) ⊗ H¹(Φ).
    pub fn tensor_index(&self, i: usize, k: usize) -> usize {
        i * self.phi_rank + k
    }
}

/// d₂^{0,1}(z): the coefficient of a_i a_j (i ≤ j) is ⟨z, σ̂_i²⟩ or ⟨z, [σ̂_i, σ̂_j]⟩.
pub fn d2_01(ext: &CentralExtension, z: &BitVec) -> Result<PolyClass, CohomError> {
    if z.len() != ext.phi_rank {
        return Err(CohomError::Shape(format!(
            "class of length {} for kernel rank {}",
            z.len(),
            ext.phi_rank
        )));
    }
    let n = ext.n;
    let mut out = PolyClass::zero(n, 2);
    for i in 0..n {
        for j in i..n {
            if z.dot(ext.pair(i, j)) {
                let mut e = vec![0u8; n];
                e[i] += 1;
                e[j] += 1;
                out.coeffs.flip(PolyClass::index(&e));
            }
        }
    }
    Ok(out)
}

/// d₂^{1,1}(Σ a_i ⊗ z_i) = Σ a_i · d₂^{0,1}(z_i).
pub fn d2_11(ext: &CentralExtension, lambda: &BitVec) -> Result<PolyClass, CohomError> {
    let (n, r) = (ext.n, ext.phi_rank);
    if lambda.len() != n * r {
        return Err(CohomError::Shape(format!(
            "element of length {} for source dimension {}",
            lambda.len(),
            n * r
        )));
    }
    let mut out = PolyClass::zero(n, 3);
    for i in 0..n {
        let zi = lambda.slice(i * r, (i + 1) * r);
        if zi.is_zero() {
            continue;
        }
        out = out.add(&PolyClass::generator(n, i).mul(&d2_01(ext, &zi)?));
    }
    Ok(out)
}

/// Matrix of d₂^{1,1}: one column per basis tensor a_i ⊗ z_k, one row per cubic monomial.
pub fn d2_11_matrix(ext: &CentralExtension) -> BitMatrix {
    let (n, r) = (ext.n, ext.phi_rank);
    let cols: Vec<BitVec> = (0..n * r)
        .map(|c| {
            d2_11(ext, &BitVec::unit(n * r, c))
                .expect("length matches")
                .coeffs
        })
        .collect();
    BitMatrix::from_rows(&cols, PolyClass::dim(n, 3)).transpose()
}

#[derive(Clone, Debug)]
pub struct EInfty11 {
    pub dim: usize,
    /// n · phi_rank.
    pub source_dim: usize,
    /// n(n+1)(n+2)/6.
    pub target_dim: usize,
    pub rank: usize,
    /// Basis of ker d₂^{1,1}, one element per row.
    pub kernel: BitMatrix,
}

impl EInfty11 {
    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }
}

/// E_∞^{1,1} = ker d₂^{1,1}: no differential reaches E^{1,1}, and d_r for r ≥ 3 lands in a negative row.
pub fn einfty11(ext: &CentralExtension) -> EInfty11 {
    let m = d2_11_matrix(ext);
    let kernel = m.kernel_basis();
    EInfty11 {
        dim: kernel.rows(),
        source_dim: m.cols(),
        target_dim: m.rows(),
        rank: m.rank(),
        kernel,
    }
}
