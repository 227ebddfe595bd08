use gf2core::{BitMatrix, BitVec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wgroups::cohomres::{d2_01, einfty11, PolyClass};
use wgroups::group2::{build_v, PcGroup};
use wgroups::modrep::GModule;
use wgroups::qsymbols::*;

fn v2_j() -> JData {
    build_j_from_vgroup(&build_v(2).unwrap(), 2).unwrap()
}

fn unit(d: usize, i: usize) -> BitVec {
    BitVec::unit(d, i)
}

fn q2_field() -> SymbolField {
    SymbolField::parse("Q2", "3\n100\n100\n001\n010\n").unwrap()
}

fn hyperbolic4() -> SymbolField {
    SymbolField::parse("H4", "4\n0000\n0100\n1000\n0001\n0010\n").unwrap()
}

fn second4() -> SymbolField {
    SymbolField::parse("D4", "4\n1000\n0100\n1100\n0001\n0010\n").unwrap()
}

/// ℚ_p with p ≡ 1 mod 4 in the basis ([u], [p]).
fn qp1() -> SymbolField {
    SymbolField::parse("Q5", "2\n00\n01\n10\n").unwrap()
}

#[test]
fn j_of_v2_labels_and_action() {
    let jd = v2_j();
    assert_eq!(jd.dim(), 5);
    assert_eq!(
        jd.labels,
        vec![
            "(s1^2)*",
            "(s2^2)*",
            "([s1,s2])*",
            "([s1^2,s2])*",
            "([s2^2,s1])*"
        ]
    );
    let (j1, j2, j3, l1, l2) = (unit(5, 0), unit(5, 1), unit(5, 2), unit(5, 3), unit(5, 4));
    let act = |i: usize, v: &BitVec| jd.module.act(i, v);
    assert_eq!(act(0, &l1), l1.xor(&j3));
    assert_eq!(act(1, &l1), l1.xor(&j1));
    assert_eq!(act(0, &l2), l2.xor(&j2));
    assert_eq!(act(1, &l2), l2.xor(&j3));
    assert_eq!(jd.j1.rows(), 3);
    for v in [&j1, &j2, &j3] {
        assert!(jd.in_j1(v));
    }
    assert!(!jd.in_j1(&l1));
    assert_eq!(jd.module.socle_series().layer_dims(), vec![3, 2]);
    // d₂^{0,1}(j₁) = a₁², d₂^{0,1}(j₃) = a₁a₂.
    assert_eq!(
        d2_01(&jd.pairing, &j1).unwrap(),
        PolyClass::monomial(&[2, 0])
    );
    assert_eq!(
        d2_01(&jd.pairing, &j3).unwrap(),
        PolyClass::monomial(&[1, 1])
    );
}

#[test]
fn j_of_v2_is_omega_minus_two() {
    let jd = v2_j();
    let k = GModule::trivial(2).heller(-2).unwrap();
    assert!(jd.module.is_isomorphic(&k).unwrap().is_true());
}

#[test]
fn j_of_v3_shape() {
    let jd = build_j_from_vgroup(&build_v(3).unwrap(), 3).unwrap();
    assert_eq!(jd.dim(), 17);
    assert_eq!(jd.module.socle_series().layer_dims(), vec![6, 8, 3]);
    assert_eq!(jd.j1.rows(), 6);
    let k = GModule::trivial(3).heller(-2).unwrap();
    assert_eq!(k.socle_series().length(), 3);
}

#[test]
fn j90_examples() {
    let jd = v2_j();
    let out = j90_check(&jd, &[(0, unit(5, 2)), (1, unit(5, 0))]).unwrap();
    assert!(out.lhs_zero);
    assert_eq!(out.witness, Some(unit(5, 3).to_bools()));
    assert_eq!(out.witness_count, Some(8));
    assert_eq!(out.mode, SearchMode::Exhaustive);
    let out = j90_check(&jd, &[(0, unit(5, 0))]).unwrap();
    assert!(!out.lhs_zero && out.witness.is_none() && out.consistent());
    assert!(j90_check(&jd, &[(0, unit(5, 3))]).is_err());
    assert!(j90_check(&jd, &[(0, unit(5, 0)), (0, unit(5, 1))]).is_err());
    assert!(j90_check(&jd, &[(2, unit(5, 0))]).is_err());
}

fn span(m: &BitMatrix) -> Vec<BitVec> {
    (0u64..1 << m.rows())
        .map(|x| m.vec_mul(&BitVec::from_u64(m.rows(), x)).unwrap())
        .collect()
}

#[test]
fn j90_iff_exhaustive_on_v2() {
    let jd = v2_j();
    let j1 = span(&jd.j1);
    let j2 = jd.module.socle_series().layers[1].clone();
    let mut checked = 0;
    let mut with_witness = 0;
    // Each index is unassigned or assigned one of the 8 elements of J₁.
    for c0 in 0..=j1.len() {
        for c1 in 0..=j1.len() {
            let mut asg = Vec::new();
            if c0 < j1.len() {
                asg.push((0, j1[c0].clone()));
            }
            if c1 < j1.len() {
                asg.push((1, j1[c1].clone()));
            }
            let out = j90_check(&jd, &asg).unwrap();
            assert!(out.consistent(), "{asg:?}");
            if let Some(w) = out.witness {
                with_witness += 1;
                let w = BitVec::from_bools(&w);
                let mut stacked = j2.clone();
                stacked.push_row(&w);
                assert_eq!(stacked.rank(), j2.rank(), "witness outside J₂");
                for i in 0..2 {
                    let moved = jd.module.act(i, &w).xor(&w);
                    let target = asg.iter().find(|(k, _)| *k == i).map(|(_, j)| j.clone());
                    assert_eq!(moved, target.unwrap_or_else(|| BitVec::zeros(5)));
                }
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 81);
    assert!(with_witness > 1 && with_witness < 81);
}

#[test]
fn j90_iff_sampled_on_v3() {
    let jd = build_j_from_vgroup(&build_v(3).unwrap(), 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r = jd.j1.rows();
    let mut hits = 0;
    for _ in 0..200 {
        let mut asg: Vec<(usize, BitVec)> = Vec::new();
        for i in 0..3 {
            if rng.gen_bool(0.7) {
                asg.push((i, jd.j1.vec_mul(&BitVec::from_u64(r, rng.gen())).unwrap()));
            }
        }
        let out = j90_check(&jd, &asg).unwrap();
        assert!(out.consistent(), "{asg:?}");
        hits += usize::from(out.lhs_zero);
    }
    assert!(hits > 0);
}

#[test]
fn kummer_pairing_compatibility() {
    let rep = kummer_compat_check(&v2_j()).unwrap();
    assert!(rep.ok());
    assert_eq!(rep.triples, 4096);
    assert!(rep.own_square_checks > 0 && rep.double_commutator_checks > 0);
}

#[test]
fn c_fields() {
    assert!(is_c_field(&qp1()).unwrap().is_c_field);
    let q2 = is_c_field(&q2_field()).unwrap();
    assert!(!q2.is_c_field);
    assert_eq!(q2.witness_value_group_dim, Some(2));
    assert!(
        is_c_field(&SymbolField::quadratically_closed())
            .unwrap()
            .is_c_field
    );
    for f in [q2_field(), hyperbolic4(), second4(), qp1()] {
        let e = einfty11(&w_extension(&f).unwrap().ext);
        assert_eq!(is_c_field(&f).unwrap().is_c_field, e.dim == 0, "{}", f.name);
    }
    assert_eq!(einfty11(&w_extension(&second4()).unwrap().ext).dim, 16);
}

#[test]
fn permanent_cycles() {
    let f = q2_field();
    let a = BitVec::parse("010").unwrap();
    let lam = permanent_cycle(&f, &a, &BitVec::parse("100").unwrap(), &a).unwrap();
    assert!(!lam.is_zero());
    let a2 = BitVec::parse("100").unwrap();
    assert!(matches!(
        permanent_cycle(&f, &a, &a2, &a2),
        Err(SymbolError::Precondition(_))
    ));
    // s([2],[5]) ≠ 0.
    assert!(permanent_cycle(&f, &a, &a2, &BitVec::parse("001").unwrap()).is_err());
}

#[test]
fn symbol_field_validation() {
    assert!(matches!(
        SymbolField::parse("x", "2\n00\n01\n00\n"),
        Err(SymbolError::NotSymmetric)
    ));
    assert!(matches!(
        SymbolField::parse("x", "2\n00\n10\n00\n"),
        Err(SymbolError::QuaternionIdentity(0))
    ));
    assert!(SymbolField::parse("x", "2\n00\n").is_err());
    let f = hyperbolic4();
    assert_eq!(SymbolField::parse("H4", &f.to_text()).unwrap(), f);
    let z = SymbolField::quadratically_closed();
    assert_eq!(SymbolField::parse(&z.name, &z.to_text()).unwrap(), z);
}

#[test]
fn w_extension_phi_ranks() {
    assert_eq!(w_extension(&q2_field()).unwrap().ext.phi_rank, 5);
    assert_eq!(w_extension(&hyperbolic4()).unwrap().ext.phi_rank, 9);
    assert_eq!(
        w_extension(&SymbolField::quadratically_closed())
            .unwrap()
            .ext
            .phi_rank,
        0
    );
    let w = w_extension(&q2_field()).unwrap();
    let a1sq = PolyClass::monomial(&[2, 0, 0]);
    assert!(w.preimage(&a1sq).is_none());
    assert!(w.preimage(&PolyClass::monomial(&[0, 2, 0])).is_some());
}

fn random_field(n: usize, seed: u64) -> SymbolField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gram = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let b = rng.gen_bool(0.5);
            gram.set(i, j, b);
            gram.set(j, i, b);
        }
    }
    // With [−1] = 0 the diagonal must vanish.
    SymbolField::new("random", BitVec::zeros(n), gram).unwrap()
}

proptest! {
    #[test]
    fn value_group_is_orthogonal_complement(n in 1usize..7, seed in any::<u64>(), x in any::<u64>()) {
        let f = random_field(n, seed);
        let a = BitVec::from_u64(n, x);
        let vg = value_group(&f, &a);
        for r in 0..vg.rows() {
            prop_assert!(!f.symbol(&a, &vg.row_vec(r)));
        }
        let expected = if f.gram.vec_mul(&a).unwrap().is_zero() { n } else { n - 1 };
        prop_assert_eq!(vg.rows(), expected);
    }

    #[test]
    fn text_roundtrip(n in 0usize..7, seed in any::<u64>()) {
        let f = random_field(n, seed);
        prop_assert_eq!(SymbolField::parse("random", &f.to_text()).unwrap(), f);
    }
}

#[test]
fn pc_group_source_is_recorded() {
    let jd = v2_j();
    let src = jd.source.as_ref().unwrap();
    assert_eq!(src.n, 2);
    let g: &PcGroup = &src.group;
    assert_eq!(g.order(), 128);
}
