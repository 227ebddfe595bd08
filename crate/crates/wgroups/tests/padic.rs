use gf2core::BitVec;
use proptest::prelude::*;
use wgroups::padic::*;
use wgroups::qsymbols::is_c_field;

fn num(p: u64, x: i128) -> PadicNumber {
    PadicNumber::from_integer(p, x, 10).unwrap()
}

fn bits(v: &BitVec) -> Vec<bool> {
    v.to_bools()
}

/// ax² + by² = z² has a primitive solution modulo p^k.
fn brute_symbol_is_one(p: u64, k: u32, a: i128, b: i128) -> bool {
    let m = (p as i128).pow(k);
    let sq: Vec<i128> = (0..m).map(|x| x * x % m).collect();
    let mut z_squares = vec![false; m as usize];
    let mut z_unit_squares = vec![false; m as usize];
    for z in 0..m {
        z_squares[sq[z as usize] as usize] = true;
        if z % p as i128 != 0 {
            z_unit_squares[sq[z as usize] as usize] = true;
        }
    }
    for x in 0..m {
        for y in 0..m {
            let v = (a * sq[x as usize] + b * sq[y as usize]).rem_euclid(m) as usize;
            let primitive_xy = x % p as i128 != 0 || y % p as i128 != 0;
            if (primitive_xy && z_squares[v]) || z_unit_squares[v] {
                return true;
            }
        }
    }
    false
}

#[test]
fn square_classes() {
    assert!(square_class(&num(2, 17)).unwrap().is_zero());
    assert_eq!(
        bits(&square_class(&num(2, 5)).unwrap()),
        vec![false, false, true]
    );
    assert_eq!(
        bits(&square_class(&num(2, -1)).unwrap()),
        vec![true, false, false]
    );
    assert_eq!(
        bits(&square_class(&num(2, 3)).unwrap()),
        vec![true, false, true]
    );
    assert_eq!(
        bits(&square_class(&num(2, 8)).unwrap()),
        vec![false, true, false]
    );
    assert_eq!(bits(&square_class(&num(5, 5)).unwrap()), vec![false, true]);
    assert_eq!(bits(&square_class(&num(5, 2)).unwrap()), vec![true, false]);
    assert!(square_class(&num(7, 2)).unwrap().is_zero());
    assert_eq!(PadicNumber::from_integer(2, 0, 10), Err(PadicError::Zero));
    let short = PadicNumber::from_integer(2, 3, 2).unwrap();
    assert!(matches!(
        square_class(&short),
        Err(PadicError::Precision { .. })
    ));
}

const SAMPLES: [i128; 12] = [1, -1, 2, -2, 3, -3, 5, -5, 6, 10, 7, 14];

#[test]
fn hilbert_symbol_matches_brute_force_at_two() {
    for &a in &SAMPLES {
        for &b in &SAMPLES {
            let formula = hilbert_symbol(&num(2, a), &num(2, b)).unwrap();
            assert_eq!(formula, !brute_symbol_is_one(2, 6, a, b), "({a},{b})_2");
        }
    }
    assert!(hilbert_symbol(&num(2, 2), &num(2, 5)).unwrap());
    assert!(hilbert_symbol(&num(2, -1), &num(2, -1)).unwrap());
}

#[test]
fn hilbert_symbol_matches_brute_force_at_odd_primes() {
    for p in [3u64, 5, 7] {
        let k = if p == 7 { 2 } else { 3 };
        let reps: Vec<i128> = vec![
            1,
            nonresidue(p) as i128,
            p as i128,
            (p * nonresidue(p)) as i128,
            -1,
            -(p as i128),
        ];
        for &a in &reps {
            for &b in &reps {
                let formula = hilbert_symbol(&num(p, a), &num(p, b)).unwrap();
                assert_eq!(formula, !brute_symbol_is_one(p, k, a, b), "({a},{b})_{p}");
            }
        }
    }
}

#[test]
fn base_symbol_fields() {
    let q2 = symbol_field(Base::Q2).unwrap();
    assert_eq!(q2.to_text(), "3\n100\n100\n001\n010\n");
    assert!(!is_c_field(&q2).unwrap().is_c_field);
    for p in [5u64, 13, 3, 7] {
        let f = symbol_field(Base::Qp(p)).unwrap();
        assert!(is_c_field(&f).unwrap().is_c_field, "p = {p}");
        assert_eq!(f.minus_one.get(0), p % 4 == 3);
    }
    assert!(symbol_field(Base::Qp(9)).is_err());
    assert!(symbol_field(Base::Qp(2)).is_err());
}

fn full_tower(base: Base, prec: u32) -> TowerField {
    build_tower(base, &identity_classes(base.n()), prec).unwrap()
}

fn identity_classes(n: usize) -> Vec<BitVec> {
    (0..n).map(|i| BitVec::unit(n, i)).collect()
}

#[test]
fn tower_arithmetic() {
    for (base, prec) in [(Base::Q2, 24), (Base::Qp(5), 10), (Base::Qp(3), 10)] {
        let t = full_tower(base, prec);
        assert_eq!(t.degree, 1 << base.n());
        assert!(t.associative());
        assert!(t.galois_multiplicative());
        let reps = base.class_representatives();
        for (i, root) in t.roots.iter().enumerate() {
            let sq = t.mul(root, root);
            assert!(t.in_ideal(&t.sub(&sq, &t.from_int(reps[i])), 8).unwrap());
            for mask in 0..1 << base.n() {
                let img = t.apply(mask, root);
                let expected = if mask >> i & 1 == 1 {
                    t.neg(root)
                } else {
                    root.clone()
                };
                assert_eq!(img, expected, "mask {mask} root {i}");
            }
            // Base classes become squares upstairs.
            assert!(t.square_class(&t.from_int(reps[i])).unwrap().0.is_zero());
        }
        // N(x) = x^[K:F] for x in the base.
        let x = t.from_int(7 + 4);
        let all: Vec<usize> = (0..1 << base.n()).collect();
        assert_eq!(t.norm(&x, &all), t.pow(&x, t.degree as u32));
    }
}

#[test]
fn tower_class_dimensions() {
    assert_eq!(full_tower(Base::Q2, 20).class_dim(), 10);
    assert_eq!(full_tower(Base::Qp(5), 8).class_dim(), 2);
    let base = build_tower(Base::Q2, &[], 20).unwrap();
    assert_eq!((base.degree, base.class_dim()), (1, 3));
}

#[test]
fn tower_construction_errors() {
    let e = BitVec::unit(3, 0);
    assert!(matches!(
        build_tower(Base::Q2, &[e.clone(), e.clone()], 20),
        Err(PadicError::Dependent)
    ));
    assert!(matches!(
        build_tower(Base::Q2, &[e], 20),
        Err(PadicError::Unsupported(_))
    ));
    assert!(build_tower(Base::Q2, &identity_classes(3), 2).is_err());
    assert!(build_tower(Base::Qp(5), &identity_classes(2), 40).is_err());
}

#[test]
fn rebased_tower_renames_generators() {
    let m = vec![
        BitVec::parse("110").unwrap(),
        BitVec::parse("010").unwrap(),
        BitVec::parse("001").unwrap(),
    ];
    let t = build_tower(Base::Q2, &m, 20).unwrap();
    // Roots follow the new classes −2, 2, 5 and σ'_i negates exactly the i-th.
    let r = &t.roots;
    let sq = t.mul(&r[0], &r[0]);
    assert!(t.in_ideal(&t.sub(&sq, &t.from_int(-2)), 8).unwrap());
    for i in 0..3 {
        for (k, root) in r.iter().enumerate() {
            let expected = if i == k { t.neg(root) } else { root.clone() };
            assert_eq!(t.apply(1 << i, root), expected);
        }
    }
}

#[test]
fn socle_by_norms_q2() {
    let s = socle_by_norms(&full_tower(Base::Q2, 32)).unwrap();
    assert_eq!(s.dim_j, 10);
    assert_eq!(s.layers, vec![5, 5]);
    assert_eq!(s.l, Some(2));
    assert_eq!(s.galois_layers, vec![5, 5]);
    assert!(s.agrees_with_galois);
    assert!(s.min_margin > 0);
    assert!(length_identity_check(&s, 3, 2));
    let json = serde_json::to_value(&s).unwrap();
    assert_eq!(json["dimJ"], 10);
}

#[test]
fn socle_by_norms_odd_p() {
    for p in [5u64, 13, 3, 7] {
        let s = socle_by_norms(&full_tower(Base::Qp(p), 10)).unwrap();
        assert_eq!((s.dim_j, s.l), (2, Some(1)), "p = {p}");
        assert_eq!(s.layers, vec![2]);
        assert!(s.agrees_with_galois);
        assert!(length_identity_check(&s, 2, 2));
    }
}

#[test]
fn norm_lemma_q2() {
    let r = norm_lemma_check(&full_tower(Base::Q2, 32), 30, 7).unwrap();
    assert!(r.ok(), "{r:?}");
    assert_eq!(r.base_norms_square, 30);
    assert_eq!(r.transitivity_checks, 30 * 14);
}

#[test]
fn norm_lemma_odd_p() {
    let r = norm_lemma_check(&full_tower(Base::Qp(5), 10), 30, 7).unwrap();
    assert_eq!(r.base_norms_square, 30);
    assert_eq!(r.transitivity_failures, 0);
}

#[test]
fn subgroup_counts() {
    let counts: Vec<usize> = (0..=3).map(|k| subgroups_of_order(3, k).len()).collect();
    assert_eq!(counts, vec![1, 7, 7, 1]);
    assert_eq!(subgroups_of_order(4, 2).len(), 35);
}

#[test]
fn demuskin_formulas() {
    let f4 = demuskin_formula_layers(4);
    assert_eq!(
        (f4.dim_j, f4.j1, f4.j2_over_j1, f4.rest, f4.l),
        (34, 9, 16, 9, 3)
    );
    let f3 = demuskin_formula_layers(3);
    assert_eq!(
        (f3.dim_j, f3.j1, f3.j2_over_j1, f3.rest, f3.l),
        (10, 5, 5, 0, 2)
    );
}

proptest! {
    #[test]
    fn hilbert_symbol_is_bilinear_and_symmetric(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
        a in 1i128..5000, b in 1i128..5000, c in 1i128..5000,
        sa in any::<bool>(), sb in any::<bool>(),
    ) {
        let (a, b) = (if sa { -a } else { a }, if sb { -b } else { b });
        let (x, y, z) = (num(p, a), num(p, b), num(p, c));
        let h = |u: &PadicNumber, v: &PadicNumber| hilbert_symbol(u, v).unwrap();
        prop_assert_eq!(h(&x, &y), h(&y, &x));
        prop_assert_eq!(h(&x.mul(&y), &z), h(&x, &z) ^ h(&y, &z));
        prop_assert!(!h(&x, &x.neg()));
        prop_assert_eq!(h(&x, &x), h(&x, &num(p, -1)));
    }

    #[test]
    fn hilbert_symbol_is_nondegenerate(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), a in 1i128..5000) {
        let x = num(p, a);
        prop_assume!(!square_class(&x).unwrap().is_zero());
        let reps: Vec<PadicNumber> = Base::from_prime(p).class_representatives().into_iter().map(|r| num(p, r)).collect();
        prop_assert!(reps.iter().any(|r| hilbert_symbol(&x, r).unwrap()));
    }
}

trait FromPrime {
    fn from_prime(p: u64) -> Base;
}

impl FromPrime for Base {
    fn from_prime(p: u64) -> Base {
        if p == 2 {
            Base::Q2
        } else {
            Base::Qp(p)
        }
    }
}
