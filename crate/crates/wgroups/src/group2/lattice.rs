//! X(2): the extension 1 → M → X(2) → E₂ → 1 with M ≅ ℤ⁵, built from the integral
//! Magnus embedding F/[K,K] ⊂ E_n ⋉ ℤ[E_n]^n.

use super::magnus::Recipe;
use super::{magnus_v, ExtensionData, GroupError, KernelSpec};
use crate::modrep::GModule;
use gf2core::{BitMatrix, BitVec};

#[derive(Clone, Debug, PartialEq, Eq)]
struct IntMagnus {
    g: u32,
    m: Vec<i64>,
}

struct IntCtx {
    n: usize,
}

impl IntCtx {
    fn size(&self) -> usize {
        1 << self.n
    }

    fn act(&self, g: u32, m: &[i64]) -> Vec<i64> {
        let size = self.size();
        let mut out = vec![0; m.len()];
        for (b, &x) in m.iter().enumerate() {
            let (c, t) = (b / size, b % size);
            out[c * size + (t ^ g as usize)] += x;
        }
        out
    }

    fn mul(&self, x: &IntMagnus, y: &IntMagnus) -> IntMagnus {
        let ym = self.act(x.g, &y.m);
        IntMagnus {
            g: x.g ^ y.g,
            m: x.m.iter().zip(&ym).map(|(a, b)| a + b).collect(),
        }
    }

    fn inv(&self, x: &IntMagnus) -> IntMagnus {
        IntMagnus {
            g: x.g,
            m: self.act(x.g, &x.m).into_iter().map(|v| -v).collect(),
        }
    }

    fn gen(&self, i: usize) -> IntMagnus {
        let mut m = vec![0; self.n * self.size()];
        m[i * self.size()] = 1;
        IntMagnus { g: 1 << i, m }
    }

    fn kernel_elem(&self, m: Vec<i64>) -> IntMagnus {
        IntMagnus { g: 0, m }
    }

    fn comm(&self, a: &IntMagnus, b: &IntMagnus) -> IntMagnus {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
fn bareiss_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Integer coordinates of `v` in the lattice spanned by the columns `basis[k]`.
fn integer_coords(basis: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>, GroupError> {
    let r = basis.len();
    let len = v.len();
    let col = |rows: &[usize], replace: Option<usize>| -> Vec<Vec<i128>> {
        rows.iter()
            .map(|&row| {
                (0..r)
                    .map(|k| {
                        if Some(k) == replace {
                            v[row] as i128
                        } else {
                            basis[k][row] as i128
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let rows = combinations(len, r)
        .into_iter()
        .find(|rows| bareiss_det(col(rows, None)) != 0)
        .ok_or_else(|| GroupError::Construction("lattice basis is rank deficient".into()))?;
    let d = bareiss_det(col(&rows, None));
    let mut x = Vec::with_capacity(r);
    for k in 0..r {
        let num = bareiss_det(col(&rows, Some(k)));
        if num % d != 0 {
            return Err(GroupError::Construction(
                "non-integral lattice coordinates".into(),
            ));
        }
        x.push((num / d) as i64);
    }
    for row in 0..len {
        let s: i64 = (0..r).map(|k| x[k] * basis[k][row]).sum();
        if s != v[row] {
            return Err(GroupError::Construction(
                "vector lies outside the lattice".into(),
            ));
        }
    }
    Ok(x)
}

fn to_bits(v: &[i64]) -> BitVec {
    BitVec::from_bools(&v.iter().map(|x| x.rem_euclid(2) == 1).collect::<Vec<_>>())
}

/// Integral form of an extension of E_n by a lattice, with its reduction modulo 2M.
#[derive(Clone, Debug)]
pub struct LatticeExtension {
    pub quotient_rank: usize,
    pub lattice_rank: usize,
    /// Integer matrices of σ_i acting on M; column k is the image of basis vector k.
    pub action: Vec<Vec<Vec<i64>>>,
    /// σ̂_i² in lattice coordinates.
    pub squares: Vec<Vec<i64>>,
    /// `mixed[i][j]` (i < j) is σ̂_j σ̂_i σ̂_j⁻¹ σ̂_i⁻¹ in lattice coordinates.
    pub mixed: Vec<Vec<Vec<i64>>>,
    /// `commutators[i][j]` (i < j) is [σ̂_i, σ̂_j] in lattice coordinates.
    pub commutators: Vec<Vec<Vec<i64>>>,
    /// gcd of the maximal minors of the basis inside ℤ[E_n]^n; 1 means the basis spans M.
    pub saturation_gcd: i128,
    pub labels: Vec<String>,
}

impl LatticeExtension {
    /// Action and cocycle data modulo 2M, i.e. the extension data of X(n)/2M.
    pub fn reduction(&self) -> Result<ExtensionData, GroupError> {
        let (n, r) = (self.quotient_rank, self.lattice_rank);
        let action = self
            .action
            .iter()
            .map(|a| BitMatrix::from_fn(r, r, |row, col| a[row][col].rem_euclid(2) == 1))
            .collect();
        let action =
            GModule::new(n, action).map_err(|e| GroupError::Construction(e.to_string()))?;
        let reduce_table = |t: &Vec<Vec<Vec<i64>>>| -> Vec<Vec<BitVec>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i < j {
                                to_bits(&t[i][j])
                            } else {
                                BitVec::zeros(r)
                            }
                        })
                        .collect()
                })
                .collect()
        };
        Ok(ExtensionData {
            n,
            kernel_rank: r,
            action,
            squares: self.squares.iter().map(|s| to_bits(s)).collect(),
            commutators: reduce_table(&self.commutators),
            mixed: reduce_table(&self.mixed),
        })
    }

    /// The action matrices square to the identity and commute over ℤ.
    pub fn action_is_integral_e_n(&self) -> bool {
        let r = self.lattice_rank;
        let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum())
                        .collect()
                })
                .collect()
        };
        let id: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| (i == j) as i64).collect())
            .collect();
        self.action.iter().all(|a| mul(a, a) == id)
            && self
                .action
                .iter()
                .enumerate()
                .all(|(i, a)| self.action[i + 1..].iter().all(|b| mul(a, b) == mul(b, a)))
    }
}

/// Builds X(2) with the lattice basis given by the integral lifts of the A-basis of V(2).
pub fn build_x2() -> Result<LatticeExtension, GroupError> {
    build_lattice(2)
}

pub(crate) fn build_lattice(n: usize) -> Result<LatticeExtension, GroupError> {
    let v = magnus_v(n)?;
    let ctx = IntCtx { n };
    let len = n * ctx.size();
    let gens: Vec<IntMagnus> = (0..n).map(|i| ctx.gen(i)).collect();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for recipe in &v.recipes {
        let x = match *recipe {
            Recipe::Square(i) => ctx.mul(&gens[i], &gens[i]),
            Recipe::Comm(i, j) => ctx.comm(&gens[i], &gens[j]),
            Recipe::CommWith(k, i) => ctx.comm(&ctx.kernel_elem(basis[k].clone()), &gens[i]),
        };
        if x.g != 0 {
            return Err(GroupError::Construction("recipe left the kernel".into()));
        }
        basis.push(x.m);
    }
    let r = basis.len();
    // The kernel of ∂ is saturated in ℤ^len, so a rank-r sublattice with coprime
    // maximal minors is all of it.
    let mut g = 0i128;
    for rows in combinations(len, r) {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|&row| (0..r).map(|k| basis[k][row] as i128).collect())
            .collect();
        g = gcd(g, bareiss_det(minor));
    }
    let coords = |x: &IntMagnus| -> Result<Vec<i64>, GroupError> {
        if x.g != 0 {
            return Err(GroupError::Construction(
                "element outside the lattice".into(),
            ));
        }
        integer_coords(&basis, &x.m)
    };
    let mut action = Vec::with_capacity(n);
    for i in 0..n {
        let mut mat = vec![vec![0i64; r]; r];
        for (k, b) in basis.iter().enumerate() {
            // σ̂_i⁻¹ (1, b) σ̂_i = (1, σ_i b)
            let img = ctx.mul(
                &ctx.mul(&ctx.inv(&gens[i]), &ctx.kernel_elem(b.clone())),
                &gens[i],
            );
            let c = coords(&img)?;
            for row in 0..r {
                mat[row][k] = c[row];
            }
        }
        action.push(mat);
    }
    let mut squares = Vec::with_capacity(n);
    let mut commutators = vec![vec![vec![0i64; r]; n]; n];
    let mut mixed = vec![vec![vec![0i64; r]; n]; n];
    for i in 0..n {
        squares.push(coords(&ctx.mul(&gens[i], &gens[i]))?);
        for j in i + 1..n {
            commutators[i][j] = coords(&ctx.comm(&gens[i], &gens[j]))?;
            let x = ctx.mul(
                &ctx.mul(&ctx.mul(&gens[j], &gens[i]), &ctx.inv(&gens[j])),
                &ctx.inv(&gens[i]),
            );
            mixed[i][j] = coords(&x)?;
        }
    }
    debug_assert_eq!(len - ((1 << n) - 1), r);
    let ext = LatticeExtension {
        quotient_rank: n,
        lattice_rank: r,
        action,
        squares,
        mixed,
        commutators,
        saturation_gcd: g,
        labels: v.labels.clone(),
    };
    if g != 1 {
        return Err(GroupError::Construction(format!(
            "lattice basis spans a sublattice of index {g}"
        )));
    }
    let reduced = ext.reduction()?;
    let target = v.group.extension_data(KernelSpec::Tail(n))?;
    if !same_extension_data(&reduced, &target) {
        return Err(GroupError::Construction(
            "reduction mod 2M differs from V(n)".into(),
        ));
    }
    Ok(ext)
}

pub(crate) fn same_extension_data(a: &ExtensionData, b: &ExtensionData) -> bool {
    a.n == b.n
        && a.kernel_rank == b.kernel_rank
        && a.action.matrices() == b.action.matrices()
        && a.squares == b.squares
        && (0..a.n).all(|i| {
            (i + 1..a.n).all(|j| {
                a.commutators[i][j] == b.commutators[i][j] && a.mixed[i][j] == b.mixed[i][j]
            })
        })
}
