mod common;

use std::collections::BTreeSet;

use common::{build_er, random_graph, random_subset};
use csea_core::oracle::brute_force_closed_patterns;
use csea_core::pattern_enum::{enumerate_closed, for_each_closed, tighten_s, Interval, Side};
use csea_core::{all_neighborhoods, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hop_distances(g: &csea_core::AttributedGraph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let inf = usize::MAX / 2;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(a, b) in g.edges() {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn matches_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..8);
        let g = random_graph(&mut rng, n, 0.35, 2, 5);
        let (_, er) = build_er(&g, 3, rng.random_range(0..3));
        prop_assume!(er.neighborhoods.len() <= 15);
        let min_vertices = rng.random_range(1..3);
        let fast = enumerate_closed(&er, min_vertices).unwrap();
        let slow = brute_force_closed_patterns(&er, min_vertices).unwrap();
        prop_assert_eq!(fast.len(), slow.len());
        for (f, s) in fast.iter().zip(&slow) {
            prop_assert_eq!(f.vertices.to_vec(), s.vertices.clone());
            prop_assert_eq!(&f.intervals, &s.intervals);
            prop_assert_eq!(&f.covering, &s.covering);
        }
    }

    #[test]
    fn patterns_are_sound_and_closed(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..14);
        let g = random_graph(&mut rng, n, 0.25, 3, 6);
        let (_, er) = build_er(&g, 4, 2);
        let patterns = enumerate_closed(&er, 2).unwrap();
        let mut seen = BTreeSet::new();
        for p in &patterns {
            prop_assert!(p.vertices.len() >= 2);
            prop_assert!(seen.insert(p.vertices.to_vec()));
            for iv in &p.intervals {
                for v in p.vertices.iter() {
                    prop_assert!(iv.contains(er.tails.get(iv.attr, v)));
                }
            }
            prop_assert_eq!(er.intersection(&p.covering), p.vertices.clone());
            prop_assert_eq!(&er.covering(&p.vertices), &p.covering);
        }
        let sorted: Vec<_> = patterns.iter().map(|p| p.vertices.clone()).collect();
        let mut resorted = sorted.clone();
        resorted.sort();
        prop_assert_eq!(sorted, resorted);
    }

    #[test]
    fn tightest_intervals_by_scan(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..12);
        let g = random_graph(&mut rng, n, 0.3, 3, 8);
        let (_, er) = build_er(&g, rng.random_range(2..7), 1);
        let mut u = random_subset(&mut rng, n, 0.4);
        u.insert(rng.random_range(0..n));
        let mut want = Vec::new();
        for (a, chain) in er.chains.iter().enumerate() {
            let widths = chain.lower.iter().map(|&l| Interval::lower(a, l))
                .chain(chain.upper.iter().map(|&k| Interval::upper(a, k)));
            let mut best: [Option<Interval>; 2] = [None, None];
            for iv in widths {
                if !u.iter().all(|v| iv.contains(er.tails.get(a, v))) {
                    continue;
                }
                let slot = &mut best[iv.side as usize];
                let (k, l) = iv.endpoints();
                if slot.is_none_or(|b| l - k < b.endpoints().1 - b.endpoints().0) {
                    *slot = Some(iv);
                }
            }
            want.extend(best.into_iter().flatten().filter(|iv| iv.endpoints() != (0.0, 1.0)));
        }
        prop_assert_eq!(tighten_s(&er, &u), want);
    }

    #[test]
    fn neighborhoods_match_shortest_paths(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..15);
        let g = random_graph(&mut rng, n, 0.2, 1, 1);
        let d = hop_distances(&g);
        let max_radius = rng.random_range(0..4);
        let set = all_neighborhoods(&g, max_radius);
        prop_assert_eq!(set.vocabulary_size, n * (max_radius + 1));
        for nb in &set.neighborhoods {
            let want = VertexSet::from_indices(n, (0..n).filter(|&w| d[nb.center][w] <= nb.radius));
            prop_assert_eq!(&nb.members, &want);
        }
        for v in 0..n {
            for r in 0..=max_radius {
                let ball = VertexSet::from_indices(n, (0..n).filter(|&w| d[v][w] <= r));
                prop_assert!(set.neighborhoods.iter().any(|nb| nb.center == v && nb.members == ball));
            }
        }
    }
}

#[test]
fn streaming_visits_the_same_patterns() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_graph(&mut rng, 14, 0.2, 2, 5);
    let (_, er) = build_er(&g, 5, 2);
    let sorted = enumerate_closed(&er, 1).unwrap();
    let mut streamed = Vec::new();
    for_each_closed(&er, 1, |p| streamed.push(p)).unwrap();
    streamed.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    assert_eq!(sorted, streamed);
}

#[test]
fn enumeration_is_thread_count_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = random_graph(&mut rng, 30, 0.1, 3, 6);
    let (_, er) = build_er(&g, 5, 2);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| enumerate_closed(&er, 3).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn single_vertex_pattern() {
    let g = csea_core::AttributedGraph::new(
        vec!["only".into()],
        vec!["x".into()],
        vec![vec![3]],
        std::iter::empty(),
    )
    .unwrap();
    let (_, er) = build_er(&g, 5, 0);
    let patterns = enumerate_closed(&er, 1).unwrap();
    assert_eq!(patterns.len(), 1);
    assert_eq!(patterns[0].vertices.to_vec(), vec![0]);
    assert_eq!(patterns[0].covering.len(), 1);
    assert!(patterns[0]
        .intervals
        .iter()
        .all(|iv| iv.side == Side::Lower || iv.bound > 0.0));
}
