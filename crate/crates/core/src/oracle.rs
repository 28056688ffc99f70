//! Exhaustive reference implementations for testing. They trade speed for obviousness and do
//! not call into the enumeration or branch-and-bound code.

use std::collections::BTreeMap;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::pattern_enum::{ErModel, Interval, Side};

pub const DL_GUARD: usize = 20;
pub const CLOSED_GUARD: usize = 15;

fn members(set: &VertexSet) -> Vec<bool> {
    (0..set.universe()).map(|v| set.contains(v)).collect()
}

fn cost(entities: usize, exceptions: usize, vocabulary_size: usize, num_vertices: usize) -> f64 {
    (entities + 1) as f64 * (vocabulary_size as f64).log2()
        + (exceptions + 1) as f64 * (num_vertices as f64).log2()
}

fn cost_of(chosen: &[&Vec<bool>], u: &[bool], vocabulary_size: usize) -> f64 {
    let n = u.len();
    let exceptions = (0..n)
        .filter(|&v| !u[v] && chosen.iter().all(|c| c[v]))
        .count();
    cost(chosen.len(), exceptions, vocabulary_size, n)
}

/// Minimum description length by trying all `2^|covering|` subsets.
pub fn brute_force_dl(
    u: &VertexSet,
    covering: &[&VertexSet],
    vocabulary_size: usize,
) -> Result<f64> {
    if covering.len() > DL_GUARD {
        return Err(Error::GuardExceeded {
            size: covering.len(),
            limit: DL_GUARD,
        });
    }
    let target = members(u);
    let sets: Vec<Vec<bool>> = covering.iter().map(|s| members(s)).collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1u32 << sets.len()) {
        let chosen: Vec<&Vec<bool>> = (0..sets.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| &sets[i])
            .collect();
        best = best.min(cost_of(&chosen, &target, vocabulary_size));
    }
    Ok(best)
}

/// Greedy upper bound: repeatedly add the neighborhood that lowers the cost most.
pub fn greedy_dl(u: &VertexSet, covering: &[&VertexSet], vocabulary_size: usize) -> f64 {
    let target = members(u);
    let sets: Vec<Vec<bool>> = covering.iter().map(|s| members(s)).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = cost_of(&[], &target, vocabulary_size);
    loop {
        let mut step: Option<(f64, usize)> = None;
        for i in (0..sets.len()).filter(|i| !chosen.contains(i)) {
            let mut trial: Vec<&Vec<bool>> = chosen.iter().map(|&j| &sets[j]).collect();
            trial.push(&sets[i]);
            let f = cost_of(&trial, &target, vocabulary_size);
            if f < current && step.is_none_or(|(g, _)| f < g) {
                step = Some((f, i));
            }
        }
        match step {
            Some((f, i)) => {
                current = f;
                chosen.push(i);
            }
            None => return current,
        }
    }
}

/// `(U, S, 𝒩(U))` with `U` and `𝒩(U)` as ascending index lists.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePattern {
    pub vertices: Vec<usize>,
    pub intervals: Vec<Interval>,
    pub covering: Vec<usize>,
}

fn reference_intervals(er: &ErModel, u: &[usize]) -> Vec<Interval> {
    let mut out = Vec::new();
    for (a, chain) in er.chains.iter().enumerate() {
        let inside = |iv: &Interval| u.iter().all(|&v| iv.contains(er.tails.get(a, v)));
        let lower = chain
            .lower
            .iter()
            .map(|&l| Interval::lower(a, l))
            .filter(|iv| inside(iv))
            .min_by(|x, y| x.bound.total_cmp(&y.bound));
        let upper = chain
            .upper
            .iter()
            .map(|&k| Interval::upper(a, k))
            .filter(|iv| inside(iv))
            .max_by(|x, y| x.bound.total_cmp(&y.bound));
        for iv in lower.into_iter().chain(upper) {
            let trivial = iv.side == Side::Lower && iv.bound >= 1.0;
            if !trivial {
                out.push(iv);
            }
        }
    }
    out
}

/// Every closed pattern, found by intersecting each subset of the deduplicated neighborhoods
/// and keeping the intersections that equal the intersection of all their supersets.
pub fn brute_force_closed_patterns(
    er: &ErModel,
    min_vertices: usize,
) -> Result<Vec<ReferencePattern>> {
    let m = er.neighborhoods.len();
    if m > CLOSED_GUARD {
        return Err(Error::GuardExceeded {
            size: m,
            limit: CLOSED_GUARD,
        });
    }
    let n = er.num_vertices;
    let sets: Vec<Vec<bool>> = er
        .neighborhoods
        .iter()
        .map(|e| members(&e.members))
        .collect();
    let mut found: BTreeMap<Vec<usize>, ReferencePattern> = BTreeMap::new();
    for mask in 0u32..(1u32 << m) {
        let u: Vec<usize> = (0..n)
            .filter(|&v| (0..m).all(|i| mask >> i & 1 == 0 || sets[i][v]))
            .collect();
        if u.is_empty() || u.len() < min_vertices || found.contains_key(&u) {
            continue;
        }
        let covering: Vec<usize> = (0..m).filter(|&i| u.iter().all(|&v| sets[i][v])).collect();
        let closure: Vec<usize> = (0..n)
            .filter(|&v| covering.iter().all(|&i| sets[i][v]))
            .collect();
        if closure != u {
            continue;
        }
        let intervals = reference_intervals(er, &u);
        found.insert(
            u.clone(),
            ReferencePattern {
                vertices: u,
                intervals,
                covering,
            },
        );
    }
    Ok(found.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::{BinBoundaries, TailMatrix};
    use crate::graph::AttributedGraph;
    use crate::pattern_enum::transform_to_er;

    fn set(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn dl_without_candidates() {
        let u = set(6, &[0, 1]);
        let want = 12f64.log2() + 5.0 * 6f64.log2();
        assert_eq!(brute_force_dl(&u, &[], 12).unwrap(), want);
        assert_eq!(greedy_dl(&u, &[], 12), want);
    }

    #[test]
    fn dl_with_exact_cover() {
        let u = set(6, &[0, 1]);
        let empty = 12f64.log2() + 5.0 * 6f64.log2();
        let single = 2.0 * 12f64.log2() + 6f64.log2();
        assert_eq!(brute_force_dl(&u, &[&u], 12).unwrap(), empty.min(single));
        assert_eq!(greedy_dl(&u, &[&u], 12), single);
    }

    #[test]
    fn guards_fail_loudly() {
        let u = VertexSet::full(3);
        let many = vec![&u; DL_GUARD + 1];
        assert!(matches!(
            brute_force_dl(&u, &many, 4),
            Err(Error::GuardExceeded {
                size: 21,
                limit: 20
            })
        ));
    }

    fn isolated(n: usize) -> ErModel {
        let g = AttributedGraph::new(
            (0..n).map(|i| format!("v{i}")).collect(),
            vec!["a".into()],
            vec![vec![0]; n],
            std::iter::empty(),
        )
        .unwrap();
        let tails = TailMatrix {
            c: vec![vec![1.0; n]],
        };
        transform_to_er(
            &g,
            &tails,
            &BinBoundaries {
                cuts: vec![Vec::new()],
            },
            0,
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_graph() {
        let found = brute_force_closed_patterns(&isolated(1), 1).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vertices, vec![0]);
    }

    #[test]
    fn two_isolated_vertices() {
        let found = brute_force_closed_patterns(&isolated(2), 1).unwrap();
        let us: Vec<Vec<usize>> = found.iter().map(|p| p.vertices.clone()).collect();
        // the whole vertex set is the empty intersection
        assert_eq!(us, vec![vec![0], vec![0, 1], vec![1]]);
    }
}
