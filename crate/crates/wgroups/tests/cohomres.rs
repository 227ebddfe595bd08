use gf2core::BitVec;
use proptest::prelude::*;
use wgroups::cohomres::*;
use wgroups::group2::*;
use wgroups::qsymbols::{w_extension, SymbolField};

fn pc(name: &str, m: usize, power: Vec<u64>, c01: u64) -> FiniteGroup {
    let mut comm = vec![vec![0u64; m]; m];
    comm[0][1] = c01;
    PcGroup::from_relations(name, m, power, comm)
        .unwrap()
        .to_finite()
        .unwrap()
}

fn q8() -> FiniteGroup {
    pc("Q8", 3, vec![4, 4, 0], 4)
}

fn d8() -> FiniteGroup {
    pc("D8", 3, vec![0, 4, 0], 4)
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn small_group_betti_numbers() {
    let z2 = build_elementary(1).unwrap().to_finite().unwrap();
    assert_eq!(minimal_resolution(&z2, 6).unwrap().ranks, vec![1; 7]);
    let e2 = build_elementary(2).unwrap().to_finite().unwrap();
    assert_eq!(
        minimal_resolution(&e2, 6).unwrap().ranks,
        (0..=6).map(|i| i + 1).collect::<Vec<_>>()
    );
    let e3 = build_elementary(3).unwrap().to_finite().unwrap();
    assert_eq!(
        minimal_resolution(&e3, 5).unwrap().ranks,
        (0..=5).map(|i| binom(i + 2, 2)).collect::<Vec<_>>()
    );
    assert_eq!(
        minimal_resolution(&q8(), 8).unwrap().ranks,
        vec![1, 2, 2, 1, 1, 2, 2, 1, 1]
    );
    assert_eq!(
        minimal_resolution(&d8(), 6).unwrap().ranks,
        (0..=6).map(|i| i + 1).collect::<Vec<_>>()
    );
    let z4z2 = pc("Z4xZ2", 3, vec![4, 0, 0], 0);
    assert_eq!(
        minimal_resolution(&z4z2, 6).unwrap().ranks,
        (0..=6).map(|i| i + 1).collect::<Vec<_>>()
    );
}

#[test]
fn resolution_checks_and_caps() {
    let res = minimal_resolution(&d8(), 4).unwrap();
    let checks = res.verify();
    assert!(checks.minimal && checks.composite_zero);
    assert_eq!(res.max_degree(), 4);
    assert!(matches!(
        minimal_resolution(&d8(), MAX_DEGREE + 1),
        Err(CohomError::ResourceCap(_))
    ));
}

const V2_SERIES: [u64; 11] = [1, 2, 6, 11, 22, 36, 60, 90, 135, 190, 266];

fn v2_numerator() -> Vec<i64> {
    vec![1, -1, 1]
}

fn v2_denominator() -> Vec<i64> {
    poly_mul(&poly_pow(&[1, -1], 3), &poly_pow(&[1, 0, -1], 2))
}

#[test]
fn v2_betti_numbers_through_degree_8() {
    let v = build_v(2).unwrap().to_finite().unwrap();
    let res = minimal_resolution(&v, 8).unwrap();
    let ranks: Vec<u64> = res.ranks.iter().map(|&r| r as u64).collect();
    assert_eq!(ranks, V2_SERIES[..9]);
    assert!(verify_rational_series(
        &ranks,
        &v2_numerator(),
        &v2_denominator()
    ));
}

#[test]
fn v2_betti_numbers_through_degree_10() {
    if std::env::var("WGROUPS_FULL").is_err() {
        eprintln!("skipped; set WGROUPS_FULL=1 to run");
        return;
    }
    let v = build_v(2).unwrap().to_finite().unwrap();
    let ranks: Vec<u64> = minimal_resolution(&v, 10)
        .unwrap()
        .ranks
        .iter()
        .map(|&r| r as u64)
        .collect();
    assert_eq!(ranks, V2_SERIES);
}

#[test]
fn rational_series_expansion() {
    let series = expand_rational(&v2_numerator(), &v2_denominator(), 11).unwrap();
    assert_eq!(
        series,
        V2_SERIES.iter().map(|&x| x as i64).collect::<Vec<_>>()
    );
    // 1/(1−x)² = Σ (k+1) x^k.
    assert_eq!(
        expand_rational(&[1], &[1, -2, 1], 5).unwrap(),
        vec![1, 2, 3, 4, 5]
    );
    assert!(expand_rational(&[1], &[2, 1], 3).is_none());
    assert!(!verify_rational_series(
        &[1, 2, 6, 12],
        &v2_numerator(),
        &v2_denominator()
    ));
}

#[test]
fn restriction_examples() {
    let e2 = build_elementary(2).unwrap().to_finite().unwrap();
    let lines: Vec<Subgroup> = (1..4).map(|x| e2.closure(&[x])).collect();
    // Kernel of restriction to the three lines is the ideal (ab(a+b)).
    let joint: Vec<usize> = restriction_ranks(&e2, &lines, 4)
        .unwrap()
        .iter()
        .map(|r| r.joint_rank)
        .collect();
    assert_eq!(joint, vec![1, 2, 3, 3, 3]);
    let whole = d8().closure(&d8().gens);
    assert!(restriction_ranks(&d8(), &[whole], 4)
        .unwrap()
        .iter()
        .all(|r| r.injective()));
    let g = d8();
    assert!(
        restriction_ranks(&g, &g.maximal_elementary_abelian_subgroups(), 4)
            .unwrap()
            .iter()
            .all(|r| r.injective())
    );
    // Q8: H² and H³ vanish on every abelian subgroup.
    let q = q8();
    let joint: Vec<usize> = restriction_ranks(&q, &q.maximal_abelian_subgroups(), 4)
        .unwrap()
        .iter()
        .map(|r| r.joint_rank)
        .collect();
    assert_eq!(joint, vec![1, 2, 0, 0, 1]);
    assert!(matches!(
        restriction_ranks(&q, &[], 5),
        Err(CohomError::ResourceCap(_))
    ));
}

/// res^G_K = res^H_K ∘ res^G_H for K ≤ H ≤ G, with independently lifted chain maps.
#[test]
fn restriction_is_transitive_on_v2() {
    let g = build_v(2).unwrap().to_finite().unwrap();
    let res_g = minimal_resolution(&g, 3).unwrap();
    let n = g.order();
    let a: Vec<usize> = (0..n).filter(|x| x & 3 == 0).collect();
    let mut gens = a.clone();
    gens.push(1);
    let h = g.closure(&gens);
    let gh = g.restrict(&h);
    let res_h = minimal_resolution(&gh, 3).unwrap();
    for k in g
        .maximal_abelian_subgroups()
        .into_iter()
        .filter(|k| k.elements.iter().all(|e| h.elements.contains(e)))
    {
        let pos = |e: usize| h.elements.binary_search(&e).unwrap();
        let k_in_h = Subgroup {
            elements: k.elements.iter().map(|&e| pos(e)).collect(),
            gens: k.gens.iter().map(|&e| pos(e)).collect(),
        };
        let direct = restriction_matrices(&res_g, &k, 3).unwrap();
        let first = restriction_matrices(&res_g, &h, 3).unwrap();
        let second = restriction_matrices(&res_h, &k_in_h, 3).unwrap();
        for d in 0..=3 {
            assert_eq!(first[d].mul(&second[d]).unwrap(), direct[d], "degree {d}");
        }
    }
}

#[test]
fn v2_detection_ranks() {
    let v = build_v(2).unwrap().to_finite().unwrap();
    let ab = restriction_ranks(&v, &v.maximal_abelian_subgroups(), 3).unwrap();
    let joint: Vec<(usize, usize)> = ab.iter().map(|r| (r.source_dim, r.joint_rank)).collect();
    assert_eq!(joint, vec![(1, 1), (2, 2), (6, 6), (11, 10)]);
    let el = restriction_ranks(&v, &v.maximal_elementary_abelian_subgroups(), 3).unwrap();
    let first_deficient = el.iter().position(|r| !r.injective());
    assert_eq!(first_deficient, Some(1));
}

#[test]
fn poly_class_arithmetic() {
    let a1 = PolyClass::generator(2, 0);
    let a2 = PolyClass::generator(2, 1);
    let p = a1.mul(&a2).add(&a1.mul(&a1));
    assert_eq!(p.to_string(), "a1^2 + a1*a2");
    assert_eq!(PolyClass::dim(3, 3), 10);
    assert_eq!(
        PolyClass::basis(2, 2),
        vec![vec![2, 0], vec![1, 1], vec![0, 2]]
    );
    assert!(p.add(&p).is_zero());
    assert_eq!(PolyClass::monomial(&[1, 2]).terms(), vec![vec![1, 2]]);
}

fn w_central(n: usize) -> CentralExtension {
    let ext = build_w(n)
        .unwrap()
        .extension_data(KernelSpec::Tail(n))
        .unwrap();
    CentralExtension::from_extension_data(&ext).unwrap()
}

#[test]
fn einfty11_of_w_groups() {
    let w2 = w_central(2);
    let e = einfty11(&w2);
    assert_eq!(e.dim, 2);
    // W(2): Φ basis σ̂₁², σ̂₂², [σ̂₁,σ̂₂] with dual basis j₁, j₂, j₃; the kernel is
    // spanned by λ₁ = a₁⊗j₃ + a₂⊗j₁ and λ₂ = a₁⊗j₂ + a₂⊗j₃.
    let idx = |i: usize, k: usize| w2.tensor_index(i, k);
    let mut l1 = BitVec::zeros(6);
    l1.set(idx(0, 2), true);
    l1.set(idx(1, 0), true);
    let mut l2 = BitVec::zeros(6);
    l2.set(idx(0, 1), true);
    l2.set(idx(1, 2), true);
    assert!(d2_11(&w2, &l1).unwrap().is_zero());
    assert!(d2_11(&w2, &l2).unwrap().is_zero());
    let span = e.kernel.clone();
    let mut with = span.clone();
    with.push_row(&l1);
    with.push_row(&l2);
    assert_eq!(with.rank(), span.rank());
    let w3 = einfty11(&w_central(3));
    assert_eq!(w3.dim, 8);
    assert_eq!(w3.dim, 3 * 4 * 2 / 3);
}

#[test]
fn non_central_extensions_are_rejected() {
    let ext = build_v(2)
        .unwrap()
        .extension_data(KernelSpec::Tail(2))
        .unwrap();
    assert!(matches!(
        CentralExtension::from_extension_data(&ext),
        Err(CohomError::NotCentral(_))
    ));
}

fn demuskin_q2() -> SymbolField {
    let gram = gf2core::BitMatrix::from_strs(&["100", "001", "010"]).unwrap();
    SymbolField::new("Q2", BitVec::parse("100").unwrap(), gram).unwrap()
}

fn demuskin_hyperbolic4() -> SymbolField {
    let gram = gf2core::BitMatrix::from_strs(&["0100", "1000", "0001", "0010"]).unwrap();
    SymbolField::new("hyperbolic", BitVec::zeros(4), gram).unwrap()
}

#[test]
fn einfty11_of_demuskin_models() {
    let q2 = w_extension(&demuskin_q2()).unwrap();
    assert_eq!(q2.ext.phi_rank, 5);
    let e = einfty11(&q2.ext);
    assert!(e.surjective());
    assert_eq!(e.dim, 5);
    let h4 = w_extension(&demuskin_hyperbolic4()).unwrap();
    assert_eq!(h4.ext.phi_rank, 9);
    let e = einfty11(&h4.ext);
    assert!(e.surjective());
    assert_eq!(e.dim, 16);
}

proptest! {
    /// d₂^{1,1}(a_i ⊗ z) = a_i · d₂^{0,1}(z), and both maps are linear.
    #[test]
    fn d2_is_linear_and_leibniz(n in 2usize..4, seed in any::<u64>()) {
        let ext = w_central(n);
        let r = ext.phi_rank;
        let z1 = BitVec::from_u64(r, seed);
        let z2 = BitVec::from_u64(r, seed.rotate_left(17));
        prop_assert_eq!(
            d2_01(&ext, &z1.xor(&z2)).unwrap(),
            d2_01(&ext, &z1).unwrap().add(&d2_01(&ext, &z2).unwrap())
        );
        let i = (seed as usize) % n;
        let mut lambda = BitVec::zeros(n * r);
        for k in z1.iter_ones() {
            lambda.set(ext.tensor_index(i, k), true);
        }
        prop_assert_eq!(
            d2_11(&ext, &lambda).unwrap(),
            PolyClass::generator(n, i).mul(&d2_01(&ext, &z1).unwrap())
        );
    }

    #[test]
    fn minimal_resolutions_verify(m in 1usize..4, bits in any::<u64>()) {
        // Abelian groups with random squares into the next generator.
        let power: Vec<u64> = (0..m).map(|i| if i + 1 < m && bits >> i & 1 == 1 { 1 << (i + 1) } else { 0 }).collect();
        let g = PcGroup::from_relations("A", m, power, vec![vec![0; m]; m]).unwrap().to_finite().unwrap();
        let res = minimal_resolution(&g, 4).unwrap();
        let checks = res.verify();
        prop_assert!(checks.minimal && checks.composite_zero);
        // dim H^1 = rank of the Frattini quotient.
        prop_assert_eq!(res.ranks[1], minimal_generators_count(&g));
    }
}

fn minimal_generators_count(g: &FiniteGroup) -> usize {
    // For abelian G, Φ(G) = G² and the rank is log₂ |G/G²|.
    let n = g.order();
    let squares: std::collections::HashSet<usize> = (0..n).map(|x| g.mul(x, x)).collect();
    (n / squares.len()).trailing_zeros() as usize
}
