//! Fixed-precision arithmetic in the ring of integers of a Galois multiquadratic
//! tower, with square classes read off modulo π^{2r+1} (r = v_π(2)).
//!
//! Realized towers:
//! - ℚ₂^{(2)} = ℚ₂(ζ₈, ω), ω² = ω + 1, integral basis ω^a ζ^b (a < 2, b < 4), π = 1 − ζ;
//! - ℚ_p^{(2)} = ℚ_p(√u, √p) for odd p, basis 1, √u, √p, √u√p, π = √p;
//! - the base field itself (degree 1, π = p).

use super::{nonresidue, Base, PadicError};
use gf2core::{BitMatrix, BitVec};
use std::collections::HashMap;

/// Element of the integer ring: coordinates mod p^N, meaningful mod p^prec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elem {
    pub c: Vec<u64>,
    pub prec: u32,
}

/// Hermite basis of an ideal π^k O: upper-triangular rows with diagonal p^{a_c}.
#[derive(Clone, Debug)]
struct Hnf {
    rows: Vec<Vec<u64>>,
    exps: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct TowerField {
    pub base: Base,
    pub p: u64,
    pub degree: usize,
    /// Coordinates are stored mod p^digits.
    pub digits: u32,
    modulus: u64,
    /// `table[i][j]`: nonzero coordinates of b_i b_j.
    table: Vec<Vec<Vec<(usize, u64)>>>,
    pub ramification: u32,
    /// v_π(2).
    pub r: u32,
    pub pi: Elem,
    /// p/π.
    pi_co: Elem,
    /// Galois element for each mask over the generators σ_1, …, σ_n (σ_i negates √a_i).
    galois: Vec<Vec<Vec<u64>>>,
    /// √a_i for the base class representatives.
    pub roots: Vec<Elem>,
    hnf_cache: Vec<Hnf>,
    /// key of a unit mod π^{2r+1} → unit class coordinates.
    unit_classes: HashMap<u64, BitVec>,
    /// key of a square unit mod π^{2r+1} → a unit whose square matches mod π^{2r+1}.
    square_roots: HashMap<u64, Elem>,
    /// Representatives: index 0 is π, then the unit basis.
    pub class_basis: Vec<Elem>,
}

impl TowerField {
    pub fn gens(&self) -> usize {
        self.galois.len().trailing_zeros() as usize
    }

    /// dim K̇/K̇².
    pub fn class_dim(&self) -> usize {
        self.class_basis.len()
    }

    fn md(&self, x: u128) -> u64 {
        (x % self.modulus as u128) as u64
    }

    pub fn from_int(&self, x: i128) -> Elem {
        let mut c = vec![0; self.degree];
        c[0] = x.rem_euclid(self.modulus as i128) as u64;
        Elem {
            c,
            prec: self.digits,
        }
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_coords(&self, coords: &[i128]) -> Elem {
        assert_eq!(coords.len(), self.degree);
        Elem {
            c: coords
                .iter()
                .map(|&x| x.rem_euclid(self.modulus as i128) as u64)
                .collect(),
            prec: self.digits,
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem {
            c: a.c
                .iter()
                .zip(&b.c)
                .map(|(&x, &y)| self.md(x as u128 + y as u128))
                .collect(),
            prec: a.prec.min(b.prec),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem {
            c: a.c
                .iter()
                .map(|&x| self.md(self.modulus as u128 - x as u128))
                .collect(),
            prec: a.prec,
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let m = self.modulus as u128;
        let mut out = vec![0u128; self.degree];
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let t = x as u128 * y as u128 % m;
                for &(k, s) in &self.table[i][j] {
                    out[k] = (out[k] + t * s as u128) % m;
                }
            }
        }
        Elem {
            c: out.into_iter().map(|x| x as u64).collect(),
            prec: a.prec.min(b.prec),
        }
    }

    pub fn pow(&self, a: &Elem, e: u32) -> Elem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Galois element with the given mask: product of the σ_i with bit i set.
    pub fn apply(&self, mask: usize, a: &Elem) -> Elem {
        let g = &self.galois[mask];
        let m = self.modulus as u128;
        let mut out = vec![0u128; self.degree];
        for (j, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = (*o + x as u128 * g[j][k] as u128) % m;
            }
        }
        Elem {
            c: out.into_iter().map(|x| x as u64).collect(),
            prec: a.prec,
        }
    }

    /// Exact division by p; every coordinate must be divisible.
    fn div_p(&self, a: &Elem) -> Result<Elem, PadicError> {
        if a.prec == 0 {
            return Err(PadicError::Precision {
                needed: 1,
                available: 0,
            });
        }
        if a.c.iter().any(|&x| x % self.p != 0) {
            return Err(PadicError::Internal(
                "division by p of a non-multiple".into(),
            ));
        }
        Ok(Elem {
            c: a.c.iter().map(|&x| x / self.p).collect(),
            prec: a.prec - 1,
        })
    }

    fn hnf(&self, k: u32) -> Result<&Hnf, PadicError> {
        self.hnf_cache.get(k as usize).ok_or(PadicError::Precision {
            needed: k.div_ceil(self.ramification) + 1,
            available: self.digits,
        })
    }

    /// Reduces a modulo π^k O into the Hermite box.
    fn reduce(&self, a: &Elem, k: u32) -> Result<Vec<u64>, PadicError> {
        let h = self.hnf(k)?;
        let needed = *h.exps.iter().max().unwrap_or(&0);
        if a.prec < needed {
            return Err(PadicError::Precision {
                needed,
                available: a.prec,
            });
        }
        let m = self.modulus as u128;
        let mut x: Vec<u128> = a.c.iter().map(|&v| v as u128).collect();
        for c in 0..self.degree {
            let d = (self.p as u128).pow(h.exps[c]);
            let q = x[c] / d;
            if q != 0 {
                for (t, xv) in x.iter_mut().enumerate() {
                    *xv = (*xv + (m - q * h.rows[c][t] as u128 % m)) % m;
                }
            }
        }
        Ok(x.into_iter().map(|v| v as u64).collect())
    }

    fn key(&self, a: &Elem, k: u32) -> Result<u64, PadicError> {
        let h = self.hnf(k)?;
        let red = self.reduce(a, k)?;
        let mut key = 0u64;
        for c in (0..self.degree).rev() {
            key = key * self.p.pow(h.exps[c]) + red[c];
        }
        Ok(key)
    }

    pub fn in_ideal(&self, a: &Elem, k: u32) -> Result<bool, PadicError> {
        Ok(self.reduce(a, k)?.iter().all(|&x| x == 0))
    }

    /// a / π for a ∈ πO.
    pub fn div_pi(&self, a: &Elem) -> Result<Elem, PadicError> {
        self.div_p(&self.mul(a, &self.pi_co))
    }

    /// π-adic valuation and the unit part a/π^v.
    pub fn split(&self, a: &Elem) -> Result<(u32, Elem), PadicError> {
        let mut v = 0;
        let mut x = a.clone();
        loop {
            if !self.in_ideal(&x, 1)? {
                return Ok((v, x));
            }
            x = self.div_pi(&x)?;
            v += 1;
        }
    }

    /// Digits of precision needed to read a unit's square class.
    pub fn class_digits(&self) -> u32 {
        (2 * self.r + 1).div_ceil(self.ramification)
    }

    fn unit_key(&self, u: &Elem) -> Result<u64, PadicError> {
        // Decisions closer than 2r+1 π-digits to the precision boundary are refused.
        let needed = 2 * self.class_digits();
        if u.prec < needed {
            return Err(PadicError::Precision {
                needed,
                available: u.prec,
            });
        }
        self.key(u, 2 * self.r + 1)
    }

    /// Coordinates of [a] ∈ K̇/K̇² over `class_basis`, and the digits of precision left.
    pub fn square_class(&self, a: &Elem) -> Result<(BitVec, u32), PadicError> {
        let (v, u) = self.split(a)?;
        let key = self.unit_key(&u)?;
        let unit = self
            .unit_classes
            .get(&key)
            .ok_or_else(|| PadicError::Internal("unit key missing from the class table".into()))?;
        let mut out = BitVec::zeros(self.class_dim());
        out.set(0, v % 2 == 1);
        for i in unit.iter_ones() {
            out.set(i + 1, true);
        }
        Ok((out, u.prec - self.class_digits()))
    }

    /// Element representing a class vector.
    pub fn class_element(&self, x: &BitVec) -> Elem {
        x.iter_ones()
            .fold(self.one(), |acc, i| self.mul(&acc, &self.class_basis[i]))
    }

    /// Whether a lies in L̇² for the fixed field L of the Galois elements `h`,
    /// with the digits of precision left.
    pub fn is_square_in_fixed_field(
        &self,
        a: &Elem,
        h: &[usize],
    ) -> Result<(bool, u32), PadicError> {
        let (cls, margin) = self.square_class(a)?;
        if !cls.is_zero() {
            return Ok((false, margin));
        }
        let (v, u) = self.split(a)?;
        let w0 = &self.square_roots[&self.unit_key(&u)?];
        // z0 ≡ ±√a mod π^{v/2 + r + 1}, and √a ≢ −√a there.
        let z0 = self.mul(&self.pow(&self.pi, v / 2), w0);
        let k = v / 2 + self.r + 1;
        for &t in h {
            let tz = self.apply(t, &z0);
            if !self.in_ideal(&self.sub(&tz, &z0), k)? {
                if !self.in_ideal(&self.add(&tz, &z0), k)? {
                    return Err(PadicError::Internal("conjugate root is not ±root".into()));
                }
                return Ok((false, margin));
            }
        }
        Ok((true, margin))
    }

    /// ∏_{τ ∈ h} τ(a).
    pub fn norm(&self, a: &Elem, h: &[usize]) -> Elem {
        h.iter()
            .fold(self.one(), |acc, &t| self.mul(&acc, &self.apply(t, a)))
    }

    /// Checks (b_i b_j) b_k = b_i (b_j b_k) on all basis triples.
    pub fn associative(&self) -> bool {
        let basis: Vec<Elem> = (0..self.degree)
            .map(|i| {
                let mut c = vec![0; self.degree];
                c[i] = 1;
                Elem {
                    c,
                    prec: self.digits,
                }
            })
            .collect();
        basis.iter().all(|x| {
            basis.iter().all(|y| {
                basis
                    .iter()
                    .all(|z| self.mul(&self.mul(x, y), z) == self.mul(x, &self.mul(y, z)))
            })
        })
    }

    /// Whether every Galois map is a ring homomorphism on basis pairs.
    pub fn galois_multiplicative(&self) -> bool {
        (0..self.galois.len()).all(|g| {
            (0..self.degree).all(|i| {
                (0..self.degree).all(|j| {
                    let (mut bi, mut bj) = (vec![0; self.degree], vec![0; self.degree]);
                    bi[i] = 1;
                    bj[j] = 1;
                    let (x, y) = (
                        Elem {
                            c: bi,
                            prec: self.digits,
                        },
                        Elem {
                            c: bj,
                            prec: self.digits,
                        },
                    );
                    self.apply(g, &self.mul(&x, &y))
                        == self.mul(&self.apply(g, &x), &self.apply(g, &y))
                })
            })
        })
    }

    /// Galois action on K̇/K̇² as one matrix per generator σ_i (column vectors).
    pub fn class_action(&self) -> Result<Vec<BitMatrix>, PadicError> {
        let d = self.class_dim();
        (0..self.gens())
            .map(|i| {
                let mut m = BitMatrix::zeros(d, d);
                for (k, b) in self.class_basis.iter().enumerate() {
                    let (img, _) = self.square_class(&self.apply(1 << i, b))?;
                    for r in img.iter_ones() {
                        m.set(r, k, true);
                    }
                }
                Ok(m)
            })
            .collect()
    }
}

fn inv_unit_mod(a: u64, p: u64, modulus: u64) -> u64 {
    // a^{-1} mod p^N by Newton iteration from the inverse mod p.
    let m = modulus as u128;
    let phi_p = p as u128 - 1;
    let mut x = super::pow_mod(a as u128, phi_p - 1, p as u128);
    for _ in 0..7 {
        // x ← x (2 − a x)
        let ax = a as u128 * x % m;
        x = x * ((2 + m - ax) % m) % m;
    }
    debug_assert_eq!(a as u128 * x % m, 1);
    x as u64
}

fn val_p(x: u64, p: u64, digits: u32) -> u32 {
    if x == 0 {
        return digits;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
        v += 1;
    }
    v
}

struct RingSpec {
    base: Base,
    degree: usize,
    table: Vec<Vec<Vec<(usize, i128)>>>,
    ramification: u32,
    pi: Vec<i128>,
    pi_co: Vec<i128>,
    /// Images of the basis under each Galois generator, as integer coordinate rows.
    gen_images: Vec<Vec<Vec<i128>>>,
    roots: Vec<Vec<i128>>,
}

fn q2_spec() -> RingSpec {
    // index a·4 + b ↔ ω^a ζ^b.
    let idx = |a: usize, b: usize| a * 4 + b;
    let mut table = vec![vec![Vec::new(); 8]; 8];
    for a1 in 0..2 {
        for b1 in 0..4 {
            for a2 in 0..2 {
                for b2 in 0..4 {
                    let omega: Vec<(usize, i128)> = match a1 + a2 {
                        0 => vec![(0, 1)],
                        1 => vec![(1, 1)],
                        _ => vec![(0, 1), (1, 1)],
                    };
                    let (zb, zs) = if b1 + b2 >= 4 {
                        (b1 + b2 - 4, -1)
                    } else {
                        (b1 + b2, 1)
                    };
                    table[idx(a1, b1)][idx(a2, b2)] =
                        omega.iter().map(|&(a, s)| (idx(a, zb), s * zs)).collect();
                }
            }
        }
    }
    let v = |pairs: &[(usize, i128)]| {
        let mut c = vec![0i128; 8];
        for &(i, s) in pairs {
            c[i] += s;
        }
        c
    };
    // ζ ↦ ζ^k on ζ^b, ω ↦ ω or 1 − ω.
    let image = |k: usize, flip_omega: bool| -> Vec<Vec<i128>> {
        let zeta_pow = |b: usize| -> (usize, i128) {
            let e = (k * b) % 8;
            if e >= 4 {
                (e - 4, -1)
            } else {
                (e, 1)
            }
        };
        let mut rows = Vec::new();
        for a in 0..2 {
            for b in 0..4 {
                let (zb, zs) = zeta_pow(b);
                let row = if a == 0 || !flip_omega {
                    v(&[(idx(a, zb), zs)])
                } else {
                    v(&[(idx(0, zb), zs), (idx(1, zb), -zs)])
                };
                rows.push(row);
            }
        }
        rows
    };
    RingSpec {
        base: Base::Q2,
        degree: 8,
        table,
        ramification: 4,
        pi: v(&[(0, 1), (1, -1)]),
        pi_co: v(&[(0, 1), (1, 1), (2, 1), (3, 1)]),
        // σ_{−1}: ζ ↦ ζ⁷; σ_2: ζ ↦ ζ⁵; σ_5: ω ↦ 1 − ω.
        gen_images: vec![image(7, false), image(5, false), image(1, true)],
        // √−1 = ζ², √2 = ζ − ζ³, √5 = 2ω − 1.
        roots: vec![v(&[(2, 1)]), v(&[(1, 1), (3, -1)]), v(&[(4, 2), (0, -1)])],
    }
}

fn qp_spec(p: u64) -> RingSpec {
    let u = nonresidue(p) as i128;
    // bit 0: √u, bit 1: √p.
    let mut table = vec![vec![Vec::new(); 4]; 4];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut s = 1i128;
            if i & j & 1 != 0 {
                s *= u;
            }
            if i & j & 2 != 0 {
                s *= p as i128;
            }
            *cell = vec![(i ^ j, s)];
        }
    }
    let unit = |i: usize| {
        let mut c = vec![0i128; 4];
        c[i] = 1;
        c
    };
    let sign_image = |bit: usize| -> Vec<Vec<i128>> {
        (0..4)
            .map(|i| {
                let mut c = unit(i);
                if i & bit != 0 {
                    c[i] = -1;
                }
                c
            })
            .collect()
    };
    RingSpec {
        base: Base::Qp(p),
        degree: 4,
        table,
        ramification: 2,
        pi: unit(2),
        pi_co: unit(2),
        gen_images: vec![sign_image(1), sign_image(2)],
        roots: vec![unit(1), unit(2)],
    }
}

fn base_spec(base: Base) -> RingSpec {
    let p = base.prime() as i128;
    RingSpec {
        base,
        degree: 1,
        table: vec![vec![vec![(0, 1)]]],
        ramification: 1,
        pi: vec![p],
        pi_co: vec![1],
        gen_images: Vec::new(),
        roots: Vec::new(),
    }
}

/// Builds F(√a : a ∈ classes). Only the base field (no classes) and the full tower
/// F^{(2)} (a basis of Ḟ/Ḟ²) are realized; intermediate fields appear as fixed fields.
pub fn build_tower(
    base: Base,
    classes: &[BitVec],
    precision: u32,
) -> Result<TowerField, PadicError> {
    base.validate()?;
    let n = base.n();
    if classes.iter().any(|c| c.len() != n) {
        return Err(PadicError::OutOfRange(format!(
            "classes must have length {n}"
        )));
    }
    let m = BitMatrix::from_rows(classes, n);
    if m.rank() < classes.len() {
        return Err(PadicError::Dependent);
    }
    let spec = if classes.is_empty() {
        base_spec(base)
    } else if classes.len() == n {
        match base {
            Base::Q2 => q2_spec(),
            Base::Qp(p) => qp_spec(p),
        }
    } else {
        return Err(PadicError::Unsupported(
            "partial towers; use the full tower and its fixed fields".into(),
        ));
    };
    let field = realize(spec, precision)?;
    if classes.is_empty() || m == BitMatrix::identity(n) {
        Ok(field)
    } else {
        // Another basis of Ḟ/Ḟ²: same field; generators renamed accordingly.
        Ok(rebase_generators(field, &m))
    }
}

/// Re-expresses the Galois generators against a new basis of the adjoined classes:
/// σ'_i negates √c_i where c_i = Σ m_ij a_j, so σ'_i = ∏ σ_j over column i of m⁻¹.
fn rebase_generators(mut field: TowerField, m: &BitMatrix) -> TowerField {
    let n = m.rows();
    let inv = m.inverse().expect("independent");
    let old = field.galois.clone();
    let mask_of = |mask: usize| -> usize {
        let mut out = 0;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                for j in 0..n {
                    if inv.get(j, i) {
                        out ^= 1 << j;
                    }
                }
            }
        }
        out
    };
    field.galois = (0..1 << n).map(|mask| old[mask_of(mask)].clone()).collect();
    field.roots = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| m.get(i, j))
                .fold(field.one(), |acc, j| field.mul(&acc, &field.roots[j]))
        })
        .collect();
    field
}

fn realize(spec: RingSpec, precision: u32) -> Result<TowerField, PadicError> {
    let p = spec.base.prime();
    let max_digits = (62.0 / (p as f64).log2()).floor() as u32;
    if precision < 4 || precision > max_digits {
        return Err(PadicError::OutOfRange(format!(
            "precision {precision} outside 4..={max_digits} for p = {p}"
        )));
    }
    let digits = precision;
    let modulus = p.pow(digits);
    let red = |x: i128| x.rem_euclid(modulus as i128) as u64;
    let d = spec.degree;
    let elem = |c: &[i128]| Elem {
        c: c.iter().map(|&x| red(x)).collect(),
        prec: digits,
    };
    let r = if p == 2 { spec.ramification } else { 0 };
    let mut t = TowerField {
        base: spec.base,
        p,
        degree: d,
        digits,
        modulus,
        table: spec
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| cell.iter().map(|&(k, s)| (k, red(s))).collect())
                    .collect()
            })
            .collect(),
        ramification: spec.ramification,
        r,
        pi: elem(&spec.pi),
        pi_co: elem(&spec.pi_co),
        galois: Vec::new(),
        roots: spec.roots.iter().map(|c| elem(c)).collect(),
        hnf_cache: Vec::new(),
        unit_classes: HashMap::new(),
        square_roots: HashMap::new(),
        class_basis: Vec::new(),
    };
    // Galois group: all products of the generators.
    let ng = spec.gen_images.len();
    let gens: Vec<Vec<Vec<u64>>> = spec
        .gen_images
        .iter()
        .map(|rows| {
            rows.iter()
                .map(|c| c.iter().map(|&x| red(x)).collect())
                .collect()
        })
        .collect();
    let identity: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| (i == j) as u64).collect())
        .collect();
    let mut galois = vec![identity; 1 << ng];
    for mask in 1usize..1 << ng {
        let low = mask.trailing_zeros() as usize;
        let rest = &galois[mask & (mask - 1)];
        // image of b_j under g·rest = g applied to rest(b_j).
        let g = &gens[low];
        let composed: Vec<Vec<u64>> = (0..d)
            .map(|j| {
                let mut out = vec![0u128; d];
                for (k, &x) in rest[j].iter().enumerate() {
                    for (l, o) in out.iter_mut().enumerate() {
                        *o = (*o + x as u128 * g[k][l] as u128) % modulus as u128;
                    }
                }
                out.into_iter().map(|x| x as u64).collect()
            })
            .collect();
        galois[mask] = composed;
    }
    t.galois = galois;
    // Hermite bases of π^k O for k ≤ 2r + 1 + slack used by the fixed-field test.
    let kmax = (2 * r + 1).max(digits * spec.ramification / 2);
    let mut pik = t.one();
    for _ in 0..=kmax {
        let rows: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                let mut c = vec![0; d];
                c[i] = 1;
                t.mul(&pik, &Elem { c, prec: digits }).c
            })
            .collect();
        match hermite(rows, p, digits) {
            Some(h) => t.hnf_cache.push(h),
            None => break,
        }
        pik = t.mul(&pik, &t.pi);
    }
    if (t.hnf_cache.len() as u32) <= 2 * r + 1 {
        return Err(PadicError::Precision {
            needed: (2 * r + 1).div_ceil(spec.ramification) + 1,
            available: digits,
        });
    }
    build_class_tables(&mut t)?;
    Ok(t)
}

/// Hermite normal form over ℤ/p^N of a full-rank lattice; `None` if the lattice is
/// not full rank modulo p^N.
fn hermite(mut rows: Vec<Vec<u64>>, p: u64, digits: u32) -> Option<Hnf> {
    let d = rows.len();
    let modulus = p.pow(digits);
    let m = modulus as u128;
    let mut exps = vec![0u32; d];
    for c in 0..d {
        let (best, v) = (c..d)
            .map(|r| (r, val_p(rows[r][c], p, digits)))
            .min_by_key(|&(_, v)| v)?;
        if v >= digits {
            return None;
        }
        rows.swap(c, best);
        let pv = p.pow(v);
        let unit = rows[c][c] / pv;
        let inv = inv_unit_mod(unit % modulus, p, modulus) as u128;
        for x in rows[c].iter_mut() {
            *x = (*x as u128 * inv % m) as u64;
        }
        // rows[c][c] is now p^v modulo p^N.
        rows[c][c] = pv;
        let pivot = rows[c].clone();
        for row in rows.iter_mut().skip(c + 1) {
            let f = (row[c] / pv) as u128;
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = ((*x as u128 + m - f * y as u128 % m) % m) as u64;
                }
            }
        }
        exps[c] = v;
    }
    for c in 0..d {
        let pv = p.pow(exps[c]) as u128;
        let pivot = rows[c].clone();
        for row in rows.iter_mut().take(c) {
            let q = row[c] as u128 / pv;
            if q != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = ((*x as u128 + m - q * y as u128 % m) % m) as u64;
                }
            }
        }
    }
    Some(Hnf { rows, exps })
}

/// Representatives of O/π^k: the Hermite box.
fn box_elements(t: &TowerField, k: u32) -> Result<Vec<Elem>, PadicError> {
    let h = t.hnf(k)?;
    let sizes: Vec<u64> = h.exps.iter().map(|&e| t.p.pow(e)).collect();
    let total: u64 = sizes.iter().product();
    Ok((0..total)
        .map(|mut x| {
            let c = sizes
                .iter()
                .map(|&s| {
                    let v = x % s;
                    x /= s;
                    v
                })
                .collect();
            Elem { c, prec: t.digits }
        })
        .collect())
}

fn build_class_tables(t: &mut TowerField) -> Result<(), PadicError> {
    let r = t.r;
    let top = 2 * r + 1;
    // Squares of units mod π^{r+1} determine squares mod π^{2r+1}.
    let mut squares: Vec<(u64, Elem)> = Vec::new();
    let mut seen = HashMap::new();
    for w in box_elements(t, r + 1)? {
        if t.in_ideal(&w, 1)? {
            continue;
        }
        let k = t.key(&t.mul(&w, &w), top)?;
        if seen.insert(k, ()).is_none() {
            squares.push((k, w));
        }
    }
    let residue_units = box_elements(t, 1)?
        .into_iter()
        .filter(|x| !x.c.iter().all(|&c| c == 0))
        .count() as u64;
    let q = residue_units + 1;
    let units_total = (q - 1) * q.pow(2 * r);
    if !units_total.is_multiple_of(squares.len() as u64)
        || !(units_total / squares.len() as u64).is_power_of_two()
    {
        return Err(PadicError::Internal(
            "square subgroup has non-2-power index".into(),
        ));
    }
    let unit_dim = (units_total / squares.len() as u64).trailing_zeros() as usize;
    // Group table: key → (element, class coordinates over the unit basis).
    let mut table: HashMap<u64, BitVec> = HashMap::new();
    let mut reps: Vec<(Elem, BitVec)> = Vec::new();
    for (k, w) in &squares {
        let sq = t.mul(w, w);
        table.insert(*k, BitVec::zeros(unit_dim));
        reps.push((sq, BitVec::zeros(unit_dim)));
    }
    // Candidates: −1, residue units, 1 + π^k·(residue unit).
    let mut candidates = vec![t.from_int(-1)];
    let residues: Vec<Elem> = box_elements(t, 1)?
        .into_iter()
        .filter(|x| !x.c.iter().all(|&c| c == 0))
        .collect();
    candidates.extend(residues.iter().cloned());
    let mut pik = t.one();
    for _ in 1..=2 * r {
        pik = t.mul(&pik, &t.pi);
        for x in &residues {
            candidates.push(t.add(&t.one(), &t.mul(&pik, x)));
        }
    }
    let mut unit_basis = Vec::new();
    for cand in candidates {
        if unit_basis.len() == unit_dim {
            break;
        }
        let k = t.key(&cand, top)?;
        if table.contains_key(&k) {
            continue;
        }
        let i = unit_basis.len();
        let mut added = Vec::with_capacity(reps.len());
        for (e, cls) in &reps {
            let prod = t.mul(e, &cand);
            let mut c2 = cls.clone();
            c2.flip(i);
            let kk = t.key(&prod, top)?;
            if table.insert(kk, c2.clone()).is_some() {
                return Err(PadicError::Internal(
                    "coset collision in class table".into(),
                ));
            }
            added.push((prod, c2));
        }
        reps.extend(added);
        unit_basis.push(cand);
    }
    if unit_basis.len() != unit_dim {
        return Err(PadicError::Internal(
            "unit classes not spanned by candidates".into(),
        ));
    }
    t.unit_classes = table;
    t.square_roots = squares.into_iter().collect();
    t.class_basis = std::iter::once(t.pi.clone()).chain(unit_basis).collect();
    Ok(())
}
