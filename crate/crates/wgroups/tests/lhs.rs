use wgroups::group2::*;
use wgroups::lhs::*;
use wgroups::modrep::KleinLabel;

/// dim Ĥ^j(E₂, k): j + 1 for j ≥ 0 and −j below.
fn tate(j: i64) -> usize {
    if j >= 0 {
        (j + 1) as usize
    } else {
        (-j) as usize
    }
}

/// dim H^p(E₂, Ω^m k) for p ≥ 1 is dim Ĥ^{p−m}(k).
fn omega_h(m: i64, p: usize) -> usize {
    tate(p as i64 - m)
}

fn x2_grid() -> SpectralGrid {
    build_E2_X2(&build_x2().unwrap(), 8).unwrap()
}

fn v2_grid(qmax: usize) -> SpectralGrid {
    let v = build_v(2)
        .unwrap()
        .extension_data(KernelSpec::Tail(2))
        .unwrap();
    build_E2_V2(&v, qmax + 4, qmax).unwrap()
}

#[test]
fn label_cohomology_matches_tate_dimensions() {
    for p in 1..8 {
        for m in -3..=3 {
            assert_eq!(
                label_cohomology(KleinLabel::Omega(m), p),
                omega_h(m as i64, p),
                "m={m} p={p}"
            );
        }
        assert_eq!(label_cohomology(KleinLabel::Free, p), 0);
        assert_eq!(label_cohomology(KleinLabel::Trivial, p), p + 1);
    }
    assert_eq!(label_cohomology(KleinLabel::Free, 0), 1);
}

#[test]
fn x2_exterior_rows() {
    let g = x2_grid();
    assert_eq!(
        g.row_decompositions,
        vec![
            "k",
            "Omega^-2k",
            "F ⊕ 2·Omega^1k",
            "F ⊕ 2·Omega^-1k",
            "Omega^2k",
            "k"
        ]
    );
    // Rows from the decomposition by hand, p ≥ 1.
    let expected: [Box<dyn Fn(usize) -> usize>; 6] = [
        Box::new(|p| p + 1),
        Box::new(|p| omega_h(-2, p)),
        Box::new(|p| 2 * omega_h(1, p)),
        Box::new(|p| 2 * omega_h(-1, p)),
        Box::new(|p| omega_h(2, p)),
        Box::new(|p| p + 1),
    ];
    for (q, f) in expected.iter().enumerate() {
        for p in 1..=8 {
            assert_eq!(g.e2(p, q), f(p), "E2^({p},{q})");
        }
    }
    let h0: Vec<usize> = (0..=5).map(|q| g.e2(0, q)).collect();
    assert_eq!(h0, vec![1, 3, 3, 5, 2, 1]);
    assert!(matches!(
        build_E2_X2(&build_x2().unwrap(), 7),
        Err(LhsError::OutOfRange(_))
    ));
}

#[test]
fn x2_odd_rows_map_isomorphically() {
    let g = x2_grid();
    for p in 0..=6 {
        assert_eq!(d2_rank(&g, p, 1).unwrap(), g.e2(p, 1));
    }
    // d₂^{p,3} : E₂^{p,3} → E₂^{p+2,2} is onto for p ≥ 1.
    for p in 1..=6 {
        let r = d2_rank(&g, p, 3).unwrap();
        assert_eq!(r, g.e2(p + 2, 2));
        assert_eq!(r, g.e2(p, 3));
    }
    assert!(d2_rank(&g, 7, 1).is_err());
}

#[test]
fn x2_contraction_is_not_a_differential() {
    let err = d2_contraction(&x2_grid()).unwrap_err();
    assert!(
        matches!(err, LhsError::DerivationInconsistency { p: 0, q: 3, .. }),
        "{err}"
    );
}

#[test]
fn v2_symmetric_rows() {
    let g = v2_grid(6);
    assert_eq!(
        g.row_decompositions,
        vec![
            "k",
            "Omega^-2k",
            "F ⊕ Omega^2k ⊕ P1 ⊕ P2 ⊕ P3",
            "7·F ⊕ k ⊕ P1 ⊕ P2 ⊕ P3",
            "14·F ⊕ 2·k ⊕ 2·P1 ⊕ 2·P2 ⊕ 2·P3",
            "26·F ⊕ 2·Omega^-2k ⊕ 2·P1 ⊕ 2·P2 ⊕ 2·P3",
            "44·F ⊕ 2·Omega^2k ⊕ 4·P1 ⊕ 4·P2 ⊕ 4·P3",
        ]
    );
    // H^p(P_i) is one-dimensional for every p.
    for p in 1..=10 {
        assert_eq!(g.e2(p, 2), omega_h(2, p) + 3);
        assert_eq!(g.e2(p, 5), 2 * omega_h(-2, p) + 6);
    }
}

#[test]
fn v2_odd_rows_map_isomorphically() {
    let g = v2_grid(6);
    for q in [1, 3, 5] {
        for p in 1..=8 {
            let r = d2_rank(&g, p, q).unwrap();
            assert_eq!(r, g.e2(p, q), "({p},{q})");
            assert_eq!(r, g.e2(p + 2, q - 1), "({p},{q})");
        }
    }
    // Row 4 is killed from row 5 and sends nothing down in this range.
    assert!((0..=8).all(|p| d2_rank(&g, p, 4).unwrap() == 0));
}

#[test]
fn v2_contraction_is_not_a_differential() {
    let err = d2_contraction(&v2_grid(4)).unwrap_err();
    assert!(
        matches!(err, LhsError::DerivationInconsistency { p: 0, q: 3, .. }),
        "{err}"
    );
}

#[test]
fn v2_grid_bounds() {
    let v = build_v(2)
        .unwrap()
        .extension_data(KernelSpec::Tail(2))
        .unwrap();
    assert!(build_E2_V2(&v, 6, 3).is_err());
    assert!(build_E2_V2(&v, 14, 9).is_err());
    let w3 = build_w(3)
        .unwrap()
        .extension_data(KernelSpec::Tail(3))
        .unwrap();
    assert!(matches!(
        build_E2_V2(&w3, 8, 2),
        Err(LhsError::OutOfRange(_))
    ));
    let g = v2_grid(2);
    assert_eq!(g.entries(2).len(), 7 * 3);
    assert!(g.e3(0, 0).is_none());
}
