#![allow(dead_code)]

use csea_core::background::{bin_tails, BackgroundModel, TailMatrix};
use csea_core::pattern_enum::{transform_to_er, ErModel};
use csea_core::{AttributedGraph, VertexSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    edge_prob: f64,
    attributes: usize,
    max_count: u64,
) -> AttributedGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(edge_prob) {
                edges.push((a, b));
            }
        }
    }
    let values = (0..n)
        .map(|_| {
            (0..attributes)
                .map(|_| rng.random_range(0..=max_count))
                .collect()
        })
        .collect();
    AttributedGraph::new(
        (0..n).map(|i| format!("v{i}")).collect(),
        (0..attributes).map(|a| format!("a{a}")).collect(),
        values,
        edges,
    )
    .unwrap()
}

pub fn build_er(g: &AttributedGraph, bins: usize, max_radius: usize) -> (BackgroundModel, ErModel) {
    let model = BackgroundModel::fit(g, 1e-8, 10_000).unwrap();
    let tails = TailMatrix::new(g, &model).unwrap();
    let cuts = bin_tails(&tails, bins).unwrap();
    let er = transform_to_er(g, &tails, &cuts, max_radius).unwrap();
    (model, er)
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, prob: f64) -> VertexSet {
    VertexSet::from_indices(n, (0..n).filter(|_| rng.random_bool(prob)))
}

/// `u` plus a random set of covering vertex sets, each a superset of `u`.
pub fn random_cover_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    sets: usize,
) -> (VertexSet, Vec<VertexSet>) {
    let u = random_subset(rng, n, 0.3);
    let density = rng.random_range(0.2..0.9);
    let covering = (0..sets)
        .map(|_| {
            let mut s = random_subset(rng, n, density);
            s.union_with(&u);
            s
        })
        .collect();
    (u, covering)
}
