use std::collections::BTreeSet;

use proptest::prelude::*;

use thrackle_core::bounds::{overlap_witnesses, random_shared_family, split_until_disjoint, verify_edge_bound};
use thrackle_core::chromatic::{main_lower_bound, min_k, thrackle_cover_greedy, verify_certificate};
use thrackle_core::circle::{agreement_point, build_action};
use thrackle_core::common_edge::common_edge_combinatorial;
use thrackle_core::thrackle::{
    complete_to_maximal, decompose, from_cycle_support, is_maximal, is_thrackle, odd_supports, random_maximal,
};
use thrackle_core::{build_disjointness_graph, Chord, Thrackle, ThrackleFamily};

fn all_maximal(n: usize) -> Vec<(BTreeSet<usize>, Thrackle)> {
    odd_supports(n).map(|s| (s.iter().copied().collect(), from_cycle_support(n, &s).unwrap())).collect()
}

#[test]
fn thrackles_are_independent_sets() {
    for n in 4..=6 {
        let g = build_disjointness_graph(n).unwrap();
        let m = g.vertex_count();
        for mask in 0u32..1 << m {
            let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let chords: Vec<Chord> = idx.iter().map(|&i| g.vertices()[i]).collect();
            assert_eq!(is_thrackle(n, &chords).unwrap(), g.is_independent(&idx), "{chords:?}");
        }
    }
}

#[test]
fn exhaustive_families_respect_bound() {
    for n in 4..=8 {
        let ts: Vec<Thrackle> = all_maximal(n).into_iter().map(|(_, t)| t).collect();
        for a in 0..ts.len() {
            for b in a..ts.len() {
                let fam = ThrackleFamily::new(n, vec![ts[a].clone(), ts[b].clone()]).unwrap();
                verify_edge_bound(&fam).unwrap();
                if n <= 7 {
                    for c in b..ts.len() {
                        let fam = ThrackleFamily::new(n, vec![ts[a].clone(), ts[b].clone(), ts[c].clone()]).unwrap();
                        verify_edge_bound(&fam).unwrap();
                    }
                }
            }
        }
    }
}

#[test]
fn disjoint_families_have_distinct_witnesses() {
    for n in 6..=9 {
        let ts = all_maximal(n);
        for (s1, t1) in &ts {
            for (s2, t2) in &ts {
                if s1.is_disjoint(s2) && s1 < s2 {
                    let fam = ThrackleFamily::new(n, vec![t1.clone(), t2.clone()]).unwrap();
                    let w = overlap_witnesses(&fam).unwrap();
                    assert_eq!(w.len(), 1);
                    assert!(verify_edge_bound(&fam).unwrap().union_edges < 2 * n);
                }
            }
        }
        // Three pairwise disjoint triangles fit from n = 9.
        if n == 9 {
            let fam = ThrackleFamily::new(
                9,
                vec![
                    from_cycle_support(9, &[0, 3, 6]).unwrap(),
                    from_cycle_support(9, &[1, 4, 7]).unwrap(),
                    from_cycle_support(9, &[2, 5, 8]).unwrap(),
                ],
            )
            .unwrap();
            assert_eq!(overlap_witnesses(&fam).unwrap().len(), 3);
        }
    }
}

#[test]
fn completion_reaches_a_maximal_thrackle() {
    let n = 7;
    let g = build_disjointness_graph(n).unwrap();
    for i in 0..g.vertex_count() {
        for j in i + 1..g.vertex_count() {
            if g.adjacent(i, j) {
                continue;
            }
            let t = Thrackle::new(n, [g.vertices()[i], g.vertices()[j]]).unwrap();
            let m = complete_to_maximal(&t).unwrap();
            assert_eq!(m.len(), n);
            assert!(is_maximal(&m).unwrap());
            assert!(t.edges().is_subset(m.edges()));
        }
    }
}

#[test]
fn min_k_is_monotone() {
    let mut prev = 0;
    for n in 4..20_000u64 {
        let k = min_k(n);
        assert!(k >= prev && k <= prev.max(1) + 1);
        assert_eq!(main_lower_bound(n), k as i64);
        prev = k;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_maximal_round_trips(n in 4usize..40, seed in any::<u64>()) {
        let t = random_maximal(n, seed).unwrap();
        prop_assert_eq!(t.len(), n);
        prop_assert!(is_maximal(&t).unwrap());
        let s = decompose(&t).unwrap();
        prop_assert_eq!(s.to_thrackle(), t.clone());
        let support: Vec<usize> = s.cycle_vertex_set().into_iter().collect();
        prop_assert_eq!(from_cycle_support(n, &support).unwrap(), t);
    }

    #[test]
    fn involutions_are_free(n in 4usize..30, seed in any::<u64>()) {
        let f = build_action(&decompose(&random_maximal(n, seed).unwrap()).unwrap()).unwrap();
        f.check_invariants().unwrap();
    }

    #[test]
    fn disjoint_pairs_share_an_edge(labels in prop::collection::vec(0u8..3, 9..30)) {
        // Label 1 and 2 points form the two supports, trimmed to odd size.
        let n = labels.len();
        let support = |l: u8| {
            let mut s: Vec<usize> = (0..n).filter(|&i| labels[i] == l).collect();
            if s.len().is_multiple_of(2) {
                s.pop();
            }
            s
        };
        let (a, b) = (support(1), support(2));
        prop_assume!(a.len() >= 3 && b.len() >= 3);
        let t1 = from_cycle_support(n, &a).unwrap();
        let t2 = from_cycle_support(n, &b).unwrap();
        let (s1, s2) = (decompose(&t1).unwrap(), decompose(&t2).unwrap());
        let c = common_edge_combinatorial(&t1, &t2).unwrap();
        prop_assert!(t1.contains(c) && t2.contains(c));
        let f = build_action(&s1).unwrap();
        let g = build_action(&s2).unwrap();
        let x = agreement_point(&f, &g).unwrap();
        prop_assert_eq!(f.evaluate_point(x), g.evaluate_point(x));
    }

    #[test]
    fn splitting_chain_keeps_bound(n in 5usize..14, k in 2usize..5, seed in any::<u64>()) {
        let fam = random_shared_family(n, k, seed).unwrap();
        let chain = split_until_disjoint(&fam).unwrap();
        for (i, f) in chain.iter().enumerate() {
            prop_assert_eq!(f.n(), n + i);
            verify_edge_bound(f).unwrap();
        }
        prop_assert!(overlap_witnesses(chain.last().unwrap()).is_ok());
    }

    #[test]
    fn greedy_cover_verifies(n in 4usize..13, seed in any::<u64>()) {
        let c = thrackle_cover_greedy(n, seed).unwrap();
        prop_assert!(verify_certificate(&c).unwrap());
        prop_assert!(c.k() < n);
        prop_assert!(c.k() as i64 >= main_lower_bound(n as u64));
    }
}
