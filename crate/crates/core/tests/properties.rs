//! Property-based invariants tying the fast implementations to their
//! definitions and to the naive oracles.

// The unimodular-op loop updates one row of `u` from another in place.
#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;

use escalator_core::oracle::{box_vectors, naive_represents_binary, naive_represents_integer};
use escalator_core::{
    isometric, minimum, parse_form, represents_binary, represents_integer, tidy, vectors_up_to,
    BinaryForm, GramLattice,
};

/// A random positive-definite lattice of rank `1..=max_rank`, built as
/// `M^T M` from a random integer matrix with entries in `-span..=span`
/// (singular draws are discarded).
fn lattice_strategy(max_rank: usize, span: i64) -> impl Strategy<Value = GramLattice> {
    (1..=max_rank)
        .prop_flat_map(move |rank| {
            proptest::collection::vec(proptest::collection::vec(-span..=span, rank), rank)
        })
        .prop_filter_map("singular basis", |m| {
            let rank = m.len();
            let gram: Vec<Vec<i64>> = (0..rank)
                .map(|i| {
                    (0..rank)
                        .map(|j| (0..rank).map(|k| m[k][i] * m[k][j]).sum())
                        .collect()
                })
                .collect();
            GramLattice::from_rows(gram).ok()
        })
}

/// A random positive-definite binary form, not necessarily reduced.
fn binary_strategy(span: i64) -> impl Strategy<Value = BinaryForm> {
    (1..=span, -span..=span, 1..=span)
        .prop_filter_map("not definite", |(a, b, c)| BinaryForm::new(a, b, c).ok())
}

/// A random unimodular matrix: a product of row shears, swaps, and sign
/// flips applied to the identity.
fn unimodular_strategy(rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec((0..rank, 0..rank, -2i64..=2, any::<bool>()), 1..=6).prop_map(
        move |ops| {
            let mut u: Vec<Vec<i64>> = (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect();
            for (i, j, shear, flip) in ops {
                if i == j {
                    if flip {
                        for v in u[i].iter_mut() {
                            *v = -*v;
                        }
                    }
                } else {
                    // row_i += shear * row_j, then maybe swap the two rows
                    for k in 0..rank {
                        u[i][k] += shear * u[j][k];
                    }
                    if flip {
                        u.swap(i, j);
                    }
                }
            }
            u
        },
    )
}

fn apply_basis_change(l: &GramLattice, u: &[Vec<i64>]) -> GramLattice {
    let rank = l.rank();
    let rows: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| l.bilinear(&u[i], &u[j])).collect())
        .collect();
    GramLattice::from_rows(rows).expect("unimodular images stay definite")
}

proptest! {
    #[test]
    fn binary_reduction_invariants(f in binary_strategy(12)) {
        let r = f.reduced();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.det(), f.det());
        prop_assert_eq!(r.reduced(), r);
        // Reduction is a change of basis: the represented integers agree.
        let lf = f.lattice();
        let lr = r.lattice();
        for k in 1..=12 {
            prop_assert_eq!(
                naive_represents_integer(&lf, k).is_some(),
                naive_represents_integer(&lr, k).is_some(),
                "disagree at {}", k
            );
        }
    }

    #[test]
    fn reduced_minimum_is_the_leading_coefficient(f in binary_strategy(12)) {
        let r = f.reduced();
        prop_assert_eq!(minimum(&r.lattice()), Some(r.a()));
    }

    #[test]
    fn grammar_round_trips(l in lattice_strategy(4, 3)) {
        let text = l.to_string();
        prop_assert_eq!(parse_form(&text).unwrap(), l);
    }

    #[test]
    fn enumeration_matches_the_box_oracle(
        l in lattice_strategy(3, 3),
        bound in 1i64..=12,
    ) {
        let fast = vectors_up_to(&l, bound);
        let slow = box_vectors(&l, bound);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn integer_representation_matches_the_oracle(
        l in lattice_strategy(3, 3),
        k in 1i64..=20,
    ) {
        let fast = represents_integer(&l, k);
        let slow = naive_represents_integer(&l, k);
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let Some(e) = fast {
            prop_assert_eq!(l.qform(&e.vectors()[0]), k);
        }
    }

    #[test]
    fn binary_representation_matches_the_oracle(
        l in lattice_strategy(3, 2),
        f in binary_strategy(6),
    ) {
        let fast = represents_binary(&l, &f);
        let slow = naive_represents_binary(&l, &f);
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let Some(e) = fast {
            let r = f.reduced();
            let x = &e.vectors()[0];
            let y = &e.vectors()[1];
            prop_assert_eq!(l.qform(x), r.a());
            prop_assert_eq!(l.bilinear(x, y), r.b());
            prop_assert_eq!(l.qform(y), r.c());
        }
    }

    #[test]
    fn orthogonal_sums_multiply_determinants(
        a in lattice_strategy(3, 3),
        b in lattice_strategy(3, 3),
    ) {
        let s = a.orthogonal_sum(&b);
        prop_assert_eq!(s.rank(), a.rank() + b.rank());
        prop_assert_eq!(s.det(), a.det() * b.det());
        prop_assert_eq!(minimum(&s), minimum(&a).min(minimum(&b)));
    }

    #[test]
    fn orthogonal_sums_inherit_representations(
        a in lattice_strategy(2, 2),
        b in lattice_strategy(2, 2),
        k in 1i64..=10,
    ) {
        let s = a.orthogonal_sum(&b);
        if represents_integer(&a, k).is_some() || represents_integer(&b, k).is_some() {
            prop_assert!(represents_integer(&s, k).is_some());
        }
    }

    #[test]
    fn tidy_preserves_the_isometry_class(l in lattice_strategy(4, 2)) {
        let t = tidy(&l);
        prop_assert_eq!(t.rank(), l.rank());
        prop_assert_eq!(t.det(), l.det());
        prop_assert_eq!(tidy(&t).clone(), t.clone());
        prop_assert!(isometric(&t, &l));
    }

    #[test]
    fn tidy_on_rank_two_is_gauss_reduction(f in binary_strategy(12)) {
        let t = tidy(&f.lattice());
        prop_assert_eq!(t.binary_form().unwrap(), f.reduced());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unimodular_basis_changes_are_isometries(
        (l, u) in lattice_strategy(3, 2).prop_flat_map(|l| {
            let rank = l.rank();
            (Just(l), unimodular_strategy(rank))
        }),
    ) {
        let image = apply_basis_change(&l, &u);
        prop_assert!(isometric(&l, &image));
        prop_assert!(isometric(&image, &l));
        prop_assert_eq!(image.det(), l.det());
        prop_assert_eq!(minimum(&image), minimum(&l));
    }
}
