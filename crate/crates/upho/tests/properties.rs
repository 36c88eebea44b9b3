//! Property tests for the spec-level invariants: convolution identities,
//! isomorphism robustness, meet stability under truncation, and exact
//! basis round-trips.

mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::*;
use upho::constructions::{grid_construction, k_ary_tree, GridSpec};
use upho::poset::{are_isomorphic, canonical_digest, MeetResult};
use upho::series::{
    expand_rational, match_rational, rgf, IntPolynomial, RationalFunction,
};
use upho::symfunc::{schur_expand, schur_to_monomial, Basis, Partition, SymmetricFunctionDeg};

fn rational_function() -> impl Strategy<Value = RationalFunction> {
    let coeff = -5i64..=5;
    let num = prop::collection::vec(coeff.clone(), 0..4);
    let den_tail = prop::collection::vec(coeff, 0..4);
    (num, den_tail, prop::bool::ANY).prop_map(|(num, mut den, negate)| {
        den.insert(0, if negate { -1 } else { 1 });
        RationalFunction::new(
            IntPolynomial::new(num.into_iter().map(BigInt::from).collect()),
            IntPolynomial::new(den.into_iter().map(BigInt::from).collect()),
        )
        .expect("unit constant term by construction")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_satisfies_defining_convolution(f in rational_function(), order in 0usize..16) {
        let series = expand_rational(&f, order);
        for k in 0..=order {
            let mut lhs = BigInt::from(0);
            for j in 0..=k {
                lhs += f.denominator().coeff(j) * series.coeff(k - j);
            }
            prop_assert_eq!(lhs, f.numerator().coeff(k), "coefficient of x^{}", k);
        }
        prop_assert!(match_rational(&series, &f));
    }

    #[test]
    fn product_rank_sizes_convolve(k1 in 1u64..=3, k2 in 1u64..=3, depth in 1usize..=4) {
        let p = k_ary_tree(k1, depth);
        let q = k_ary_tree(k2, depth);
        let prod = p.product(&q, depth).unwrap();
        prop_assert_eq!(rgf(&prod), rgf(&p).convolve(&rgf(&q), depth - 1));
    }

    #[test]
    fn grid_product_rank_sizes_convolve(a in prop::collection::vec(1u64..=2, 0..=2), k in 1u64..=3, depth in 1usize..=4) {
        let p = grid_construction(&GridSpec::new(a, depth).unwrap());
        let q = k_ary_tree(k, depth);
        let prod = p.product(&q, depth).unwrap();
        prop_assert_eq!(rgf(&prod), rgf(&p).convolve(&rgf(&q), depth - 1));
    }

    #[test]
    fn isomorphism_invariant_under_relabeling(index in 0usize..16, seed in any::<u64>()) {
        let corpus = corpus();
        let (name, poset) = &corpus[index % corpus.len()];
        let relabeled = random_relabel(poset, seed);
        let report = are_isomorphic(poset, &relabeled);
        prop_assert!(report.isomorphic, "{}", name);
        prop_assert_eq!(canonical_digest(poset), canonical_digest(&relabeled));
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(i in 0usize..16, j in 0usize..16) {
        let corpus = corpus();
        let (_, p) = &corpus[i % corpus.len()];
        let (_, q) = &corpus[j % corpus.len()];
        prop_assert!(are_isomorphic(p, p).isomorphic);
        prop_assert_eq!(
            are_isomorphic(p, q).isomorphic,
            are_isomorphic(q, p).isomorphic
        );
    }

    #[test]
    fn meets_stable_under_truncation(index in 0usize..16, a in any::<u32>(), b in any::<u32>()) {
        let corpus = corpus();
        let (_, p) = &corpus[index % corpus.len()];
        let n = p.num_vertices();
        let u = a as usize % n;
        let v = b as usize % n;
        let needed = p.rank_of(u).unwrap().max(p.rank_of(v).unwrap()) + 1;
        // constructor corpora use rank-major ids, so truncation keeps them
        let t = p.truncate(needed).unwrap();
        prop_assert_eq!(p.meet(u, v).unwrap(), t.meet(u, v).unwrap());
    }

    #[test]
    fn schur_round_trip(degree in 0usize..=6, values in prop::collection::vec(-30i64..=30, 12)) {
        let mut coeffs = BTreeMap::new();
        for (i, mu) in Partition::all_of(degree).into_iter().enumerate() {
            coeffs.insert(mu, BigInt::from(values[i % values.len()]));
        }
        let f = SymmetricFunctionDeg::new(degree, Basis::Monomial, coeffs);
        prop_assert_eq!(schur_to_monomial(&schur_expand(&f)), f);
    }

    #[test]
    fn isomorphic_posets_share_digests_with_brute_agreement(i in 0usize..16, j in 0usize..16) {
        let corpus = corpus();
        let (_, p) = &corpus[i % corpus.len()];
        let (_, q) = &corpus[j % corpus.len()];
        if p.num_vertices() <= 30 && q.num_vertices() <= 30 {
            let fast = are_isomorphic(p, q);
            prop_assert_eq!(fast.isomorphic, brute_force_isomorphic(p, q));
            if fast.isomorphic {
                prop_assert_eq!(fast.certificate.0, fast.certificate.1);
            }
        }
    }
}

#[test]
fn order_filter_of_grid_is_smaller_grid() {
    // an atom filter of the truncation equals the construction one rank
    // shorter, checked through the isomorphism engine
    let g6 = grid(&[1, 2], 6);
    let g5 = grid(&[1, 2], 5);
    for &atom in &g6.ranks()[1] {
        let filter = g6.order_filter(atom).unwrap();
        assert!(are_isomorphic(&filter, &g5).isomorphic);
    }
}

#[test]
fn constructed_posets_have_unique_minimum() {
    for (name, poset) in corpus() {
        if name == "bowtie" || name == "single" {
            continue;
        }
        assert!(poset.unique_min_check(), "{name}");
        assert!(
            matches!(
                poset.meet(poset.ranks()[0][0], poset.ranks()[0][0]).unwrap(),
                MeetResult::Meet(_)
            ),
            "{name}"
        );
    }
}
