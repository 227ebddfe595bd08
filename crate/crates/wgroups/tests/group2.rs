use proptest::prelude::*;
use std::collections::{HashSet, VecDeque};
use wgroups::group2::*;

fn g(i: usize) -> GroupElement {
    GroupElement(1 << i)
}

#[test]
fn orders_and_frattini_ranks() {
    assert_eq!(build_elementary(1).unwrap().order(), 2);
    assert_eq!(build_elementary(3).unwrap().order(), 8);
    assert!(build_elementary(0).is_err() && build_elementary(6).is_err());
    let w2 = magnus_w(2).unwrap();
    assert_eq!(w2.group.order(), 32);
    assert_eq!(w2.kernel_rank(), 3);
    let w3 = magnus_w(3).unwrap();
    assert_eq!(w3.kernel_rank(), 6);
    assert_eq!(w3.group.order(), 1 << 9);
    let v2 = magnus_v(2).unwrap();
    assert_eq!(v2.group.order(), 128);
    assert_eq!(v2.kernel_rank(), 5);
    let v3 = magnus_v(3).unwrap();
    assert_eq!(v3.kernel_rank(), 17);
    assert!(build_v(4).is_err());
}

#[test]
fn a_basis_of_v2() {
    let v2 = magnus_v(2).unwrap();
    assert_eq!(
        v2.labels,
        vec!["s1^2", "s2^2", "[s1,s2]", "[s1^2,s2]", "[s2^2,s1]"]
    );
    let grp = &v2.group;
    // commutator(σ̂₁, σ̂₂) is the third A-basis element.
    assert_eq!(grp.commutator(g(0), g(1)).unwrap(), g(4));
    assert_eq!(grp.square(g(0)).unwrap(), g(2));
    assert_eq!(grp.commutator(g(2), g(1)).unwrap(), g(5));
}

#[test]
fn collection_examples() {
    let w = build_w(2).unwrap();
    assert_eq!(w.collect(&[]).unwrap(), GroupElement::IDENTITY);
    let e = build_elementary(2).unwrap();
    for i in 0..2 {
        assert_eq!(e.collect(&[i, i]).unwrap(), GroupElement::IDENTITY);
    }
    let lhs = w.collect(&[1, 0]).unwrap();
    let c = w.commutator(g(0), g(1)).unwrap();
    let rhs = w.multiply(w.collect(&[0, 1]).unwrap(), c);
    assert_eq!(lhs, rhs);
    for i in 0..2 {
        assert_eq!(w.collect(&[i, i, i, i]).unwrap(), GroupElement::IDENTITY);
        assert_ne!(w.collect(&[i, i]).unwrap(), GroupElement::IDENTITY);
    }
    // The Frattini subgroup of W(2) is central.
    let s1sq = w.square(g(0)).unwrap();
    assert_eq!(w.commutator(s1sq, g(1)).unwrap(), GroupElement::IDENTITY);
    for x in 0..32u64 {
        assert_eq!(
            w.commutator(GroupElement(x), GroupElement(x)).unwrap(),
            GroupElement::IDENTITY
        );
    }
}

#[test]
fn metabelian_identities_hold() {
    for grp in [
        build_elementary(2).unwrap(),
        build_w(2).unwrap(),
        build_v(2).unwrap(),
    ] {
        let rep = grp
            .to_finite()
            .unwrap()
            .verify_metabelian_identities()
            .unwrap();
        assert!(rep.ok(), "{}: {:?}", grp.name(), rep.violations);
    }
    let rep = build_v(2)
        .unwrap()
        .to_finite()
        .unwrap()
        .verify_metabelian_identities()
        .unwrap();
    assert_eq!(rep.triples_checked, 128 * 128 * 128);
}

#[test]
fn quotient_v2_to_w2() {
    let v = build_v(2).unwrap();
    let w = build_w(2).unwrap();
    assert_eq!(v.num_gens() - w.num_gens(), 2);
    let mask = (1u64 << w.num_gens()) - 1;
    for x in 0..128u64 {
        for y in 0..128u64 {
            let xy = v.multiply(GroupElement(x), GroupElement(y)).0 & mask;
            let img = w.multiply(GroupElement(x & mask), GroupElement(y & mask)).0;
            assert_eq!(xy, img);
        }
    }
}

#[test]
fn frattini_of_v2_is_a() {
    let v = build_v(2).unwrap().to_finite().unwrap();
    let mut gens = Vec::new();
    for x in 0..128 {
        gens.push(v.mul(x, x));
        for y in 0..128 {
            gens.push(v.comm(x, y));
        }
    }
    gens.sort_unstable();
    gens.dedup();
    let phi = v.closure(&gens);
    let a: Vec<usize> = (0..128).filter(|x| x & 3 == 0).collect();
    assert_eq!(phi.elements, a);
}

#[test]
fn extension_data_examples() {
    let w = build_w(2).unwrap();
    let ext = w.extension_data(KernelSpec::Tail(2)).unwrap();
    assert!(ext.action.is_trivial());
    for k in 0..3 {
        let (i, j) = [(0, 0), (1, 1), (0, 1)][k];
        assert_eq!(ext.pair(i, j).iter_ones().collect::<Vec<_>>(), vec![k]);
    }
    let v = build_v(2).unwrap();
    let ext = v.extension_data(KernelSpec::Tail(2)).unwrap();
    // A ≅ Ω²k has a 2-dimensional socle; its dual J has the 3-dimensional one.
    assert_eq!(ext.action.fixed_space().rows(), 2);
    assert_eq!(ext.action.dual().fixed_space().rows(), 3);
    let e = build_elementary(3).unwrap();
    let ext = e.extension_data(KernelSpec::Trivial).unwrap();
    assert_eq!(ext.kernel_rank, 0);
    assert!(ext.squares.iter().all(|s| s.is_zero()));
    // The first generator alone is not normal in W(2).
    assert!(w.extension_data(KernelSpec::Tail(1)).is_err());
}

/// Independent model of V(2): E₂ ⋉ F₂[E₂]², elements (g, m) with m as 8 bits.
fn magnus_oracle_v2() -> Vec<(u8, u8)> {
    let act = |g: u8, m: u8| -> u8 {
        let mut out = 0;
        for b in 0..8 {
            if m >> b & 1 == 1 {
                let (c, t) = (b / 4, b % 4);
                out |= 1 << (c * 4 + (t ^ g));
            }
        }
        out
    };
    let mul = |x: (u8, u8), y: (u8, u8)| (x.0 ^ y.0, x.1 ^ act(x.0, y.1));
    let gens = [(1u8, 1u8), (2u8, 1u8 << 4)];
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(0u8, 0u8)]);
    seen.insert((0, 0));
    while let Some(x) = queue.pop_front() {
        for &s in &gens {
            let y = mul(x, s);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_unstable();
    out.into_iter().filter(|&x| mul(x, x) == (0, 0)).collect()
}

#[test]
fn involution_count_matches_oracle() {
    let invs = magnus_oracle_v2();
    let v = build_v(2).unwrap().to_finite().unwrap();
    let ours = v.involutions();
    // The identity is the one element of order 1.
    assert_eq!(ours.len() + 1, invs.len());
    assert_eq!(ours.len(), 31);
}

#[test]
fn sphere_actions_cover_all_involutions() {
    let rep = sphere_action_check(2).unwrap();
    assert_eq!(rep.representations, 5);
    assert_eq!(rep.dims, vec![4; 5]);
    assert!(rep.homomorphisms_verified);
    assert_eq!(rep.involutions, 31);
    assert!(rep.uncovered.is_empty());
    assert!(sphere_action_check(3).is_err());
}

#[test]
fn x2_lattice() {
    let x = build_x2().unwrap();
    assert_eq!(x.lattice_rank, 5);
    assert_eq!(x.saturation_gcd, 1);
    assert!(x.action_is_integral_e_n());
    let red = x.reduction().unwrap();
    let v = build_v(2)
        .unwrap()
        .extension_data(KernelSpec::Tail(2))
        .unwrap();
    assert_eq!(red.action.matrices(), v.action.matrices());
    assert_eq!(red.squares, v.squares);
    assert_eq!(red.mixed[0][1], v.mixed[0][1]);
}

#[test]
fn presentation_text_roundtrip() {
    for grp in [
        build_w(2).unwrap(),
        build_v(2).unwrap(),
        build_w(3).unwrap(),
    ] {
        let text = grp.to_text();
        let back = PcGroup::parse("copy", &text).unwrap();
        assert_eq!(back.to_text(), text);
    }
    assert!(PcGroup::parse("bad", "2\npow 1 : 1\n").is_err());
    assert!(PcGroup::parse("bad", "2\ncomm 2 1 : \n").is_err());
}

#[test]
fn subgroups_of_v2() {
    let v = build_v(2).unwrap().to_finite().unwrap();
    let ab = v.maximal_abelian_subgroups();
    let el = v.maximal_elementary_abelian_subgroups();
    assert!(!ab.is_empty() && !el.is_empty());
    for h in ab.iter().chain(&el) {
        for &x in &h.elements {
            for &y in &h.gens {
                assert_eq!(v.mul(x, y), v.mul(y, x));
            }
        }
    }
}

/// Positive word for the inverse of a normal-form element.
fn inverse_word(grp: &PcGroup, x: u64, orders: &[u64]) -> Vec<usize> {
    let mut w = Vec::new();
    for k in (0..grp.num_gens()).rev() {
        if x >> k & 1 == 1 {
            for _ in 0..orders[k] - 1 {
                w.push(k);
            }
        }
    }
    w
}

fn nf_word(x: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&k| x >> k & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn rewriting_preserves_normal_form(
        word in proptest::collection::vec(0usize..7, 0..24),
        edits in proptest::collection::vec((0usize..3, 0usize..7, 0usize..7, 0usize..32), 1..6),
    ) {
        let grp = build_v(2).unwrap();
        let m = grp.num_gens();
        let orders: Vec<u64> = (0..m).map(|i| grp.element_order(g(i))).collect();
        let mut w2 = word.clone();
        for (kind, i, j, pos) in edits {
            let pos = pos % (w2.len() + 1);
            let insert: Vec<usize> = match kind {
                // g_i g_i (pow_i)^{-1}
                0 => {
                    let mut r = vec![i, i];
                    r.extend(inverse_word(&grp, grp.power_relation(i).0, &orders));
                    r
                }
                // g_i^{-1} g_j^{-1} g_i g_j (comm_ij)^{-1}
                1 if i < j => {
                    let mut r = inverse_word(&grp, 1 << i, &orders);
                    r.extend(inverse_word(&grp, 1 << j, &orders));
                    r.extend([i, j]);
                    r.extend(inverse_word(&grp, grp.commutator_relation(i, j).0, &orders));
                    r
                }
                _ => {
                    let mut r = vec![i];
                    r.extend(inverse_word(&grp, 1 << i, &orders));
                    r
                }
            };
            w2.splice(pos..pos, insert);
        }
        let a = grp.collect(&word).unwrap();
        let b = grp.collect(&w2).unwrap();
        prop_assert_eq!(a, b);
        // collect is a homomorphism and normal forms are fixed points.
        prop_assert_eq!(grp.collect(&nf_word(a.0, m)).unwrap(), a);
    }
}
