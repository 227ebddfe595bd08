use gf2core::{BitMatrix, BitVec};
use proptest::prelude::*;

fn m(rows: &[&str]) -> BitMatrix {
    BitMatrix::from_strs(rows).unwrap()
}

/// Rank by brute force: size of the row span.
fn span_size(mat: &BitMatrix) -> usize {
    let rows: Vec<u64> = (0..mat.rows()).map(|r| mat.row(r)[0]).collect();
    let mut seen = std::collections::HashSet::new();
    for mask in 0u32..(1 << rows.len()) {
        let mut acc = 0u64;
        for (i, r) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc ^= r;
            }
        }
        seen.insert(acc);
    }
    seen.len()
}

#[test]
fn rank_examples() {
    assert_eq!(BitMatrix::identity(3).rank(), 3);
    assert_eq!(BitMatrix::zeros(4, 7).rank(), 0);
    let t = m(&["110", "011", "101"]);
    assert_eq!(t.rank(), 2);
    assert_eq!(span_size(&t), 4);
}

#[test]
fn kernel_examples() {
    assert_eq!(BitMatrix::identity(3).kernel_basis().rows(), 0);
    assert_eq!(BitMatrix::zeros(2, 3).kernel_basis().rank(), 3);
    let k = m(&["110", "011", "101"]).kernel_basis();
    // The only nonzero vector x with all row parities zero is 111.
    let mut found = vec![];
    for x in 1u64..8 {
        let v = BitVec::from_u64(3, x);
        if m(&["110", "011", "101"]).mul_vec(&v).unwrap().is_zero() {
            found.push(v);
        }
    }
    assert_eq!(found, vec![BitVec::parse("111").unwrap()]);
    assert_eq!(k.row_vec(0), found[0]);
}

#[test]
fn solve_examples() {
    let i2 = BitMatrix::identity(2);
    let b = BitVec::parse("10").unwrap();
    assert_eq!(i2.solve(&b).unwrap(), Some(b.clone()));
    assert_eq!(
        BitMatrix::zeros(2, 2)
            .solve(&BitVec::parse("01").unwrap())
            .unwrap(),
        None
    );
    let a = m(&["110", "011"]);
    let rhs = BitVec::parse("11").unwrap();
    let x = a.solve(&rhs).unwrap().unwrap();
    assert_eq!(a.mul_vec(&x).unwrap(), rhs);
    let sols: Vec<_> = (0u64..8)
        .map(|x| BitVec::from_u64(3, x))
        .filter(|x| a.mul_vec(x).unwrap() == rhs)
        .collect();
    assert!(sols.contains(&x));
    assert!(i2.solve(&BitVec::zeros(3)).is_err());
}

#[test]
fn kronecker_examples() {
    assert_eq!(
        BitMatrix::identity(2).kronecker(&BitMatrix::identity(3)),
        BitMatrix::identity(6)
    );
    assert!(BitMatrix::zeros(1, 1)
        .kronecker(&m(&["11", "01"]))
        .is_zero());
    let a = m(&["11", "01"]);
    let b = m(&["10", "11"]);
    let k = a.kronecker(&b);
    for i in 0..2 {
        for j in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    assert_eq!(k.get(i * 2 + p, j * 2 + q), a.get(i, j) && b.get(p, q));
                }
            }
        }
    }
}

#[test]
fn text_roundtrip() {
    let a = m(&["1010", "0111"]);
    let s = a.to_string();
    assert!(s.starts_with("2 4\n"));
    assert_eq!(s.parse::<BitMatrix>().unwrap(), a);
    assert!("2 2\n10\n".parse::<BitMatrix>().is_err());
    assert!("1 2\n1x\n".parse::<BitMatrix>().is_err());
}

fn arb_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c)
            .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
    })
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(a in arb_matrix(40, 140)) {
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert!(a.rank() <= a.rows().min(a.cols()));
    }

    #[test]
    fn kernel_plus_rank(a in arb_matrix(30, 90)) {
        let k = a.kernel_basis();
        prop_assert_eq!(k.rows() + a.rank(), a.cols());
        prop_assert_eq!(k.rank(), k.rows());
        for r in 0..k.rows() {
            prop_assert!(a.mul_vec(&k.row_vec(r)).unwrap().is_zero());
        }
        prop_assert!(k.padding_clean());
    }

    #[test]
    fn solve_iff_in_column_space(a in arb_matrix(12, 20), seed in any::<u64>()) {
        let b = BitVec::from_words(a.rows(), vec![seed & ((1u64 << a.rows()) - 1)]);
        let consistent = a.hstack(&BitMatrix::from_rows(std::slice::from_ref(&b), a.rows()).transpose())
            .unwrap().rank() == a.rank();
        match a.solve(&b).unwrap() {
            Some(x) => {
                prop_assert!(consistent);
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
            }
            None => prop_assert!(!consistent),
        }
    }

    #[test]
    fn kronecker_associative(a in arb_matrix(3, 3), b in arb_matrix(3, 3), c in arb_matrix(3, 3)) {
        prop_assert_eq!(a.kronecker(&b).kronecker(&c), a.kronecker(&b.kronecker(&c)));
    }

    #[test]
    fn multiplication_matches_entries(a in arb_matrix(10, 70), seed in any::<u64>()) {
        let b = BitMatrix::from_fn(a.cols(), 5, |i, j| (seed.rotate_left((i * 5 + j) as u32 % 64)) & 1 == 1);
        let p = a.mul(&b).unwrap();
        for i in 0..a.rows() {
            for j in 0..5 {
                let e = (0..a.cols()).fold(false, |acc, k| acc ^ (a.get(i, k) && b.get(k, j)));
                prop_assert_eq!(p.get(i, j), e);
            }
        }
        prop_assert!(p.padding_clean());
    }

    #[test]
    fn rref_rows_span_same_space(a in arb_matrix(20, 80)) {
        let e = a.rref();
        prop_assert_eq!(e.reduced.rank(), a.rank());
        prop_assert_eq!(a.vstack(&e.reduced).unwrap().rank(), a.rank());
        for (r, &p) in e.pivots.iter().enumerate() {
            for r2 in 0..e.rank() {
                prop_assert_eq!(e.reduced.get(r2, p), r2 == r);
            }
        }
    }
}
