use gf2core::BitMatrix;
use proptest::prelude::*;
use wgroups::modrep::*;

fn k(n: usize) -> GModule {
    GModule::trivial(n)
}

#[test]
fn socle_series_examples() {
    assert_eq!(k(2).socle_series().layer_dims(), vec![1]);
    let j = k(2).heller(-2).unwrap();
    assert_eq!(j.dim(), 5);
    assert_eq!(j.socle_series().layer_dims(), vec![3, 2]);
    assert_eq!(
        GModule::regular(2).socle_series().layer_dims(),
        vec![1, 2, 1]
    );
    let j3 = k(3).heller(-2).unwrap();
    assert_eq!(j3.dim(), 17);
    assert_eq!(j3.socle_series().length(), 3);
    assert_eq!(GModule::zero(2).socle_series().length(), 0);
}

#[test]
fn heller_dimensions_and_duality() {
    for m in 0..=6 {
        let om = k(2).heller(m).unwrap();
        assert_eq!(om.dim(), 2 * m as usize + 1, "Omega^{m}");
        assert_eq!(om.split_free().0, 0);
        let neg = k(2).heller(-m).unwrap();
        assert!(
            neg.is_isomorphic(&om.dual()).unwrap().is_true(),
            "Omega^-{m}"
        );
    }
    assert!(k(2).heller(7).is_err());
    assert_eq!(k(2).heller(0).unwrap(), k(2));
}

/// Every matrix X with X σ_i = σ_i X, by enumeration.
fn brute_hom_dim(a: &GModule, b: &GModule) -> usize {
    let (da, db) = (a.dim(), b.dim());
    let cells = da * db;
    let mut count = 0usize;
    for bits in 0u64..1 << cells {
        let x = BitMatrix::from_fn(db, da, |r, c| bits >> (r * da + c) & 1 == 1);
        let ok = (0..a.group_rank())
            .all(|i| b.matrix(i).mul(&x).unwrap() == x.mul(a.matrix(i)).unwrap());
        count += ok as usize;
    }
    count.trailing_zeros() as usize
}

#[test]
fn hom_space_examples() {
    assert_eq!(k(2).hom_space(&k(2)).unwrap().len(), 1);
    assert_eq!(k(2).hom_space(&GModule::regular(2)).unwrap().len(), 1);
    let o1 = k(2).heller(1).unwrap();
    let h = o1.hom_space(&o1).unwrap();
    assert_eq!(h.len(), brute_hom_dim(&o1, &o1));
    assert_eq!(h.len(), 3);
    let om1 = k(2).heller(-1).unwrap();
    assert_eq!(o1.hom_space(&om1).unwrap().len(), brute_hom_dim(&o1, &om1));
    assert_eq!(om1.hom_space(&o1).unwrap().len(), brute_hom_dim(&om1, &o1));
    for f in h {
        for i in 0..2 {
            assert_eq!(o1.matrix(i).mul(&f).unwrap(), f.mul(o1.matrix(i)).unwrap());
        }
    }
}

#[test]
fn functor_dimensions() {
    let j = k(2).heller(-2).unwrap();
    for q in 0..=5 {
        let binom = [1, 5, 10, 10, 5, 1][q];
        assert_eq!(j.ext_power(q).unwrap().dim(), binom);
    }
    assert_eq!(j.ext_power(0).unwrap(), k(2));
    assert!(j.ext_power(5).unwrap().is_trivial());
    let sym = j.sym_powers(6).unwrap();
    let dims: Vec<usize> = sym.iter().map(|m| m.dim()).collect();
    assert_eq!(dims, vec![1, 5, 15, 35, 70, 126, 210]);
    for m in &sym {
        // Constructed matrices must be genuine commuting involutions.
        GModule::new(2, m.matrices().to_vec()).unwrap();
    }
    assert_eq!(j.tensor(&j).unwrap().dim(), 25);
}

#[test]
fn split_free_examples() {
    let (r, core) = GModule::regular(2).split_free();
    assert_eq!((r, core.dim()), (1, 0));
    let (r, core) = k(2).split_free();
    assert_eq!((r, core), (0, k(2)));
    let m = GModule::regular(2)
        .direct_sum(&k(2).heller(1).unwrap())
        .unwrap();
    let (r, core) = m.split_free();
    assert_eq!(r, 1);
    assert!(core
        .is_isomorphic(&k(2).heller(1).unwrap())
        .unwrap()
        .is_true());
}

#[test]
fn iso_examples() {
    let o1 = k(2).heller(1).unwrap();
    assert!(o1.is_isomorphic(&o1).unwrap().is_true());
    assert!(!k(2).is_isomorphic(&o1).unwrap().is_true());
    assert!(!o1.is_isomorphic(&o1.dual()).unwrap().is_true());
}

#[test]
fn klein_examples() {
    let j = k(2).heller(-2).unwrap();
    let s = j.sym_powers(2).unwrap();
    let d1 = s[1].decompose_klein4().unwrap();
    assert_eq!(d1.count(KleinLabel::Omega(-2)), 1);
    assert_eq!(d1.counts.iter().map(|c| c.1).sum::<usize>(), 1);
    let d2 = s[2].decompose_klein4().unwrap();
    assert_eq!(d2.count(KleinLabel::Omega(2)), 1);
    let z = GModule::zero(2).decompose_klein4().unwrap();
    assert!(z.counts.iter().all(|c| c.1 == 0));
    // A module not built from the labels is refused, not misreported.
    let o3 = k(2).heller(3).unwrap();
    assert!(o3.decompose_klein4().is_err());
}

#[test]
fn text_roundtrip() {
    let j = k(3).heller(-2).unwrap();
    assert_eq!(GModule::parse(&j.to_text()).unwrap(), j);
    assert!(GModule::parse("2 2\n2 2\n10\n01\n2 2\n01\n00\n").is_err());
}

fn random_basis_change(m: &GModule, seed: u64) -> GModule {
    let d = m.dim();
    let mut s = seed | 1;
    loop {
        let p = BitMatrix::from_fn(d, d, |_, _| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s & 1 == 1
        });
        if let Some(pinv) = p.inverse() {
            let mats = m
                .matrices()
                .iter()
                .map(|a| p.mul(a).unwrap().mul(&pinv).unwrap())
                .collect();
            return GModule::new(m.group_rank(), mats).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn decomposition_recovers_hidden_sums(
        counts in proptest::collection::vec(0usize..3, 9),
        seed in any::<u64>(),
    ) {
        let parts: Vec<GModule> = KleinLabel::ALL
            .iter()
            .zip(&counts)
            .flat_map(|(l, &c)| std::iter::repeat_n(l.module(), c))
            .collect();
        prop_assume!(parts.iter().map(|p| p.dim()).sum::<usize>() <= 40);
        let m = GModule::direct_sum_all(2, &parts).unwrap();
        let hidden = random_basis_change(&m, seed);
        let dec = hidden.decompose_klein4().unwrap();
        let got: Vec<usize> = dec.counts.iter().map(|c| c.1).collect();
        prop_assert_eq!(got, counts);
        let socle: usize = m.socle_series().layer_dims().iter().sum();
        prop_assert_eq!(socle, m.dim());
        let (free, core) = hidden.split_free();
        prop_assert_eq!(free, dec.count(KleinLabel::Free));
        prop_assert_eq!(core.norm_rank(), 0);
    }
}
