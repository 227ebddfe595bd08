//! Norm maps of the tower and the socle series of J = K̇/K̇² from norm conditions:
//! J_i = {j : N_{K/L}(j) ∈ L̇² for every L with [K : L] = 2^{i+1}}.

use super::tower::{Elem, TowerField};
use super::{square_class, PadicError, PadicNumber};
use crate::modrep::GModule;
use gf2core::{BitMatrix, BitVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Subgroups of the Galois group E_n of order 2^k, each as its list of masks.
pub fn subgroups_of_order(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    // Enumerate k-tuples of masks in increasing order and keep distinct spans.
    fn span(gens: &[usize]) -> Vec<usize> {
        let mut s = vec![0usize];
        for &g in gens {
            if !s.contains(&g) {
                let ext: Vec<usize> = s.iter().map(|x| x ^ g).collect();
                s.extend(ext);
            }
        }
        s.sort_unstable();
        s
    }
    fn rec(n: usize, k: usize, start: usize, gens: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if gens.len() == k {
            let s = span(gens);
            if s.len() == 1 << k && !out.contains(&s) {
                out.push(s);
            }
            return;
        }
        for g in start..1 << n {
            gens.push(g);
            rec(n, k, g + 1, gens, out);
            gens.pop();
        }
    }
    rec(n, k, 1, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SocleByNorms {
    pub base: String,
    pub precision: u32,
    #[serde(rename = "dimJ")]
    pub dim_j: usize,
    /// dim J_i / J_{i−1} for i = 1, …, l.
    pub layers: Vec<usize>,
    /// dim J_i for i = 1, …, n − 1.
    pub cumulative: Vec<usize>,
    pub l: Option<usize>,
    /// dim of the level cut out by norms to the index-2 subfields.
    pub index2_level_dim: usize,
    /// Layer dimensions of the socle series of the Galois module J.
    pub galois_layers: Vec<usize>,
    pub agrees_with_galois: bool,
    /// Fewest digits of precision left over in any decision.
    pub min_margin: u32,
}

fn subspace_basis(set: &[BitVec], dim: usize) -> Result<BitMatrix, PadicError> {
    if !set.len().is_power_of_two() {
        return Err(PadicError::Internal("norm level is not a subgroup".into()));
    }
    let m = BitMatrix::from_rows(set, dim);
    let basis = m.rref();
    let rank = basis.rank();
    if 1usize << rank != set.len() {
        return Err(PadicError::Internal("norm level is not a subgroup".into()));
    }
    let mut rows = basis.reduced;
    rows.truncate_rows(rank);
    Ok(rows)
}

fn same_span(a: &BitMatrix, b: &BitMatrix) -> bool {
    let ra = a.rank();
    ra == b.rank() && a.vstack(b).map(|m| m.rank() == ra).unwrap_or(false)
}

/// Exhaustive over J: every class is tested against every fixed field of each index.
pub fn socle_by_norms(t: &TowerField) -> Result<SocleByNorms, PadicError> {
    let n = t.gens();
    let d = t.class_dim();
    if d > 12 {
        return Err(PadicError::OutOfRange(format!(
            "exhaustive norm levels need dim J ≤ 12, got {d}"
        )));
    }
    let mut min_margin = u32::MAX;
    let elements: Vec<(BitVec, Elem)> = (0u64..1 << d)
        .map(|x| {
            let v = BitVec::from_u64(d, x);
            let e = t.class_element(&v);
            (v, e)
        })
        .collect();
    let mut levels = Vec::new();
    for i in 0..n {
        let fields = subgroups_of_order(n, i + 1);
        let mut members = Vec::new();
        for (v, e) in &elements {
            let mut ok = true;
            for h in &fields {
                let (sq, margin) = t.is_square_in_fixed_field(&t.norm(e, h), h)?;
                min_margin = min_margin.min(margin);
                if !sq {
                    ok = false;
                    break;
                }
            }
            if ok {
                members.push(v.clone());
            }
        }
        levels.push(subspace_basis(&members, d)?);
    }
    let module =
        GModule::new(n, t.class_action()?).map_err(|e| PadicError::Internal(e.to_string()))?;
    let socle = module.socle_series();
    let cumulative: Vec<usize> = levels[1..].iter().map(|m| m.rows()).collect();
    let l = cumulative.iter().position(|&c| c == d).map(|i| i + 1);
    let mut layers = Vec::new();
    let mut prev = 0;
    for &c in cumulative.iter().take(l.unwrap_or(cumulative.len())) {
        layers.push(c - prev);
        prev = c;
    }
    // J_i from norms against the i-th socle term, and J_0 = 0.
    let mut agrees = levels[0].rows() == 0 && l == Some(socle.length());
    for (i, lev) in levels.iter().enumerate().skip(1) {
        let target = socle.layers.get(i - 1).or(socle.layers.last());
        agrees &= target.is_some_and(|s| same_span(lev, s));
    }
    Ok(SocleByNorms {
        base: format!("{:?}", t.base),
        precision: t.digits,
        dim_j: d,
        layers,
        cumulative,
        l,
        index2_level_dim: levels[0].rows(),
        galois_layers: socle.layer_dims(),
        agrees_with_galois: agrees,
        min_margin,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormLemmaReport {
    pub samples: usize,
    /// Samples whose norm to the base lies in the base and is a square there.
    pub base_norms_square: usize,
    /// A class j and a quadratic subfield (as its Galois group) with N(j) not a square.
    pub quadratic_witness: Option<(Vec<bool>, Vec<usize>)>,
    pub transitivity_checks: usize,
    pub transitivity_failures: usize,
}

impl NormLemmaReport {
    pub fn ok(&self) -> bool {
        self.base_norms_square == self.samples
            && self.quadratic_witness.is_some()
            && self.transitivity_failures == 0
    }
}

fn base_value(t: &TowerField, x: &Elem) -> Result<PadicNumber, PadicError> {
    if x.c[1..].iter().any(|&c| c != 0) {
        return Err(PadicError::Internal(
            "norm to the base left the base field".into(),
        ));
    }
    let prec = x.prec.min(t.digits);
    let m = t.p.pow(prec) as i128;
    let v = (x.c[0] as i128).rem_euclid(m);
    if v == 0 {
        return Err(PadicError::Precision {
            needed: prec + 1,
            available: prec,
        });
    }
    let mut y = PadicNumber::from_integer(t.p, v, prec)?;
    // Digits below the valuation are not part of the unit.
    y.prec = prec - y.val as u32;
    Ok(y)
}

/// Random samples: N_{K/F}(x) ∈ Ḟ²; N_{L/F} ∘ N_{K/L} = N_{K/F}; and a class whose
/// norm to some quadratic subfield is not a square there.
pub fn norm_lemma_check(
    t: &TowerField,
    samples: usize,
    seed: u64,
) -> Result<NormLemmaReport, PadicError> {
    let n = t.gens();
    let all: Vec<usize> = (0..1 << n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modulus = t.p.pow(t.digits);
    let mut rep = NormLemmaReport {
        samples,
        base_norms_square: 0,
        quadratic_witness: None,
        transitivity_checks: 0,
        transitivity_failures: 0,
    };
    let intermediate: Vec<Vec<usize>> = (1..n).flat_map(|k| subgroups_of_order(n, k)).collect();
    let mut done = 0;
    while done < samples {
        // Units plus a random power of π keep the valuation, hence the precision, bounded.
        let coords: Vec<i128> = (0..t.degree)
            .map(|_| rng.gen_range(0..modulus) as i128)
            .collect();
        let x = t.from_coords(&coords);
        let Ok((v, _)) = t.split(&x) else { continue };
        if v > 2 {
            continue;
        }
        done += 1;
        let nx = t.norm(&x, &all);
        if square_class(&base_value(t, &nx)?)?.is_zero() {
            rep.base_norms_square += 1;
        }
        for h in &intermediate {
            // Coset representatives of G/H.
            let mut reps: Vec<usize> = Vec::new();
            for g in 0..1 << n {
                if !reps.iter().any(|&r| h.contains(&(r ^ g))) {
                    reps.push(g);
                }
            }
            let inner = t.norm(&x, h);
            let outer = t.norm(&inner, &reps);
            rep.transitivity_checks += 1;
            if outer != nx {
                rep.transitivity_failures += 1;
            }
        }
    }
    if n >= 1 {
        let quadratic = subgroups_of_order(n, n - 1);
        let d = t.class_dim();
        'search: for x in 1u64..1 << d {
            let v = BitVec::from_u64(d, x);
            let e = t.class_element(&v);
            for h in &quadratic {
                if !t.is_square_in_fixed_field(&t.norm(&e, h), h)?.0 {
                    rep.quadratic_witness = Some((v.to_bools(), h.clone()));
                    break 'search;
                }
            }
        }
    }
    Ok(rep)
}

/// l(F) + cd = n + 1 with l from the norm-defined socle series.
pub fn length_identity_check(s: &SocleByNorms, n: usize, cd: usize) -> bool {
    s.l.is_some_and(|l| l + cd == n + 1)
}

/// Layer dimensions of J for a Demuškin group of rank n, from the closed forms
/// dim J = 2ⁿ(n−2)+2, dim J₁ = C(n+1,2)−1, dim J₂/J₁ = n(n−2)(n+2)/3 and l = n−1.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FormulaLayers {
    pub n: usize,
    pub dim_j: i64,
    pub j1: i64,
    pub j2_over_j1: i64,
    pub rest: i64,
    pub l: i64,
}

pub fn demuskin_formula_layers(n: usize) -> FormulaLayers {
    let ni = n as i64;
    let dim_j = (1i64 << n) * (ni - 2) + 2;
    let j1 = ni * (ni + 1) / 2 - 1;
    let j2_over_j1 = ni * (ni - 2) * (ni + 2) / 3;
    FormulaLayers {
        n,
        dim_j,
        j1,
        j2_over_j1,
        rest: dim_j - j1 - j2_over_j1,
        l: ni - 1,
    }
}
