use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ncd_core::chains::{chain_to_parking, is_d_parking, parking_to_chain, DParkingFunction};
use ncd_core::parking_tree::{parking_to_tree, tree_to_parking};
use ncd_core::partition::enumerate_by_filter;
use ncd_core::plane_tree::{partition_to_tree, reconstruct_labels, tree_to_partition};
use ncd_core::series::TruncatedSeries;
use ncd_core::NoncrossingPartition;

const MAX_N: usize = 9;

fn all_of_size(n: usize) -> &'static [NoncrossingPartition] {
    static CACHE: OnceLock<Vec<Vec<NoncrossingPartition>>> = OnceLock::new();
    &CACHE.get_or_init(|| (0..=MAX_N).map(|n| if n == 0 { Vec::new() } else { enumerate_by_filter(n) }).collect())[n]
}

fn partition() -> impl Strategy<Value = NoncrossingPartition> {
    (1..=MAX_N).prop_flat_map(|n| (0..all_of_size(n).len()).prop_map(move |i| all_of_size(n)[i].clone()))
}

fn pair() -> impl Strategy<Value = (NoncrossingPartition, NoncrossingPartition)> {
    (1..=7usize).prop_flat_map(|n| {
        let len = all_of_size(n).len();
        (0..len, 0..len).prop_map(move |(i, j)| (all_of_size(n)[i].clone(), all_of_size(n)[j].clone()))
    })
}

/// Sends `i` to `i - 1`, and `1` to `n`.
fn rotate(p: &NoncrossingPartition) -> NoncrossingPartition {
    let n = p.n();
    let blocks = p.blocks().iter().map(|b| b.iter().map(|&i| if i == 1 { n } else { i - 1 }).collect()).collect();
    NoncrossingPartition::new(n, blocks).unwrap()
}

fn crosses(ids: &[usize]) -> bool {
    let n = ids.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if ids[i] == ids[k] && ids[j] == ids[l] && ids[i] != ids[j] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Entry `i` drawn below its bound `d*i + 1`, then shuffled.
fn parking_function() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (1..=3usize, 1..=5usize).prop_flat_map(|(d, k)| {
        let entries: Vec<_> = (0..k).map(|i| 1..=d * i + 1).collect();
        (Just(d), entries.prop_shuffle())
    })
}

fn series(coeffs: &[i64], order: usize) -> TruncatedSeries {
    let c: Vec<BigRational> = coeffs.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    TruncatedSeries::from_x_coefficients(&c, order)
}

proptest! {
    #[test]
    fn kreweras_squared_is_rotation(p in partition()) {
        let k = p.kreweras_dual();
        prop_assert_eq!(p.num_blocks() + k.num_blocks(), p.n() + 1);
        prop_assert_eq!(k.kreweras_dual(), rotate(&p));
    }

    #[test]
    fn simion_ullman_reverses_refinement((p, q) in pair()) {
        prop_assert_eq!(p.simion_ullman_dual().simion_ullman_dual(), p.clone());
        prop_assert_eq!(p.refines(&q), q.simion_ullman_dual().refines(&p.simion_ullman_dual()));
    }

    #[test]
    fn adjacency_graph_is_a_tree(p in partition()) {
        let adj = p.adjacencies();
        let (b, c) = (p.num_blocks(), p.kreweras_dual().num_blocks());
        prop_assert_eq!(adj.len(), b + c - 1);
        // union-find over blocks 0..b and dual blocks b..b+c
        let mut parent: Vec<usize> = (0..b + c).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for a in &adj {
            let (x, y) = (find(&mut parent, a.block_index), find(&mut parent, b + a.dual_block_index));
            prop_assert_ne!(x, y);
            parent[x] = y;
        }
    }

    #[test]
    fn indivisibility_tests_agree(p in partition(), d in 1..=4usize) {
        prop_assert_eq!(p.is_d_indivisible(d), p.is_d_indivisible_by_gaps(d));
        if p.is_d_indivisible(d) {
            prop_assert_eq!((p.n() - p.num_blocks()) % d, 0);
            prop_assert_eq!(p.rank(d), (p.n() - p.num_blocks()) / d);
        }
    }

    #[test]
    fn plane_tree_round_trip(p in partition()) {
        let t = partition_to_tree(&p);
        prop_assert!(t.validate().is_ok());
        prop_assert_eq!(t.num_edges(), p.n());
        prop_assert_eq!(tree_to_partition(&t).unwrap(), p);
        prop_assert_eq!(reconstruct_labels(&t.shape()), t);
    }

    #[test]
    fn assignment_accepts_exactly_noncrossing(ids in prop::collection::vec(0..4usize, 1..9)) {
        prop_assert_eq!(NoncrossingPartition::from_assignment(&ids).is_ok(), !crosses(&ids));
    }

    #[test]
    fn parking_test_matches_sorted_bound(d in 1..=3usize, values in prop::collection::vec(1..=10usize, 1..=4)) {
        let mut sorted = values.clone();
        sorted.sort();
        let parking = sorted.iter().enumerate().all(|(i, &a)| a <= d * i + 1);
        prop_assert_eq!(is_d_parking(&values, d), parking);
    }

    #[test]
    fn parking_round_trips((d, values) in parking_function()) {
        let pf = DParkingFunction::new(d, values).unwrap();
        let chain = parking_to_chain(&pf);
        prop_assert_eq!(chain.steps().len(), pf.k() + 1);
        prop_assert!(chain.steps().iter().all(|s| s.is_d_indivisible(d)));
        prop_assert_eq!(chain_to_parking(&chain), pf.clone());
        let tree = parking_to_tree(&pf);
        prop_assert_eq!(tree_to_parking(&tree), pf.clone());
        prop_assert_eq!(tree.to_chain().unwrap(), chain);
        prop_assert_eq!(tree.straighten().shape(), tree.shape());
    }

    #[test]
    fn series_ring_laws(
        a in prop::collection::vec(-4i64..=4, 1..6),
        b in prop::collection::vec(-4i64..=4, 1..6),
        c in prop::collection::vec(-4i64..=4, 1..6),
    ) {
        let order = 5;
        let (a, b, c) = (series(&a, order), series(&b, order), series(&c, order));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn unit_series_invert(tail in prop::collection::vec(-4i64..=4, 0..6)) {
        let order = 6;
        let mut coeffs = vec![1];
        coeffs.extend(tail);
        let a = series(&coeffs, order);
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, TruncatedSeries::one(order));
    }
}
