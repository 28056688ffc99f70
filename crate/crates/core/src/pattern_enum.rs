//! Entity-relation view of an attributed graph and enumeration of closed patterns.
//!
//! Three entity kinds take part: vertices, one-sided tail-probability intervals (two chains per
//! attribute), and deduplicated hop neighborhoods. A closed pattern is a maximal complete set of
//! entities: its vertex set `U` is exactly the intersection of every neighborhood containing it,
//! and its intervals are the tightest of each chain that still contain all of `U`. Since the
//! intervals are a function of `U`, the search runs over intersections of neighborhoods only.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::background::{BinBoundaries, TailMatrix};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{all_neighborhoods, AttributedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `[0, bound]`: small tail probabilities, i.e. counts above expectation.
    Lower,
    /// `[bound, 1]`: large tail probabilities, i.e. counts below expectation.
    Upper,
}

/// A one-sided interval on the tail probability of one attribute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub attr: usize,
    pub side: Side,
    pub bound: f64,
}

impl Interval {
    pub fn lower(attr: usize, bound: f64) -> Self {
        Interval {
            attr,
            side: Side::Lower,
            bound,
        }
    }

    pub fn upper(attr: usize, bound: f64) -> Self {
        Interval {
            attr,
            side: Side::Upper,
            bound,
        }
    }

    /// `(k, l)` endpoints.
    pub fn endpoints(&self) -> (f64, f64) {
        match self.side {
            Side::Lower => (0.0, self.bound),
            Side::Upper => (self.bound, 1.0),
        }
    }

    pub fn contains(&self, c: f64) -> bool {
        let (k, l) = self.endpoints();
        k <= c && c <= l
    }
}

/// Interval chains of one attribute, each ordered from tightest to widest.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalChains {
    /// Right endpoints of `[0, l]`, ascending; the last is always 1.
    pub lower: Vec<f64>,
    /// Left endpoints of `[k, 1]`, descending.
    pub upper: Vec<f64>,
}

impl IntervalChains {
    fn from_cuts(cuts: &[f64]) -> Self {
        let mut lower = cuts.to_vec();
        lower.push(1.0);
        let mut upper = cuts.to_vec();
        upper.reverse();
        IntervalChains { lower, upper }
    }

    pub fn len(&self) -> usize {
        self.lower.len() + self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A deduplicated neighborhood; `labels` lists every `(center, radius)` producing it, in
/// vocabulary order, and the first label names it.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodEntity {
    pub members: VertexSet,
    pub labels: Vec<(usize, usize)>,
}

impl NeighborhoodEntity {
    pub fn label(&self) -> (usize, usize) {
        self.labels[0]
    }
}

#[derive(Debug, Clone)]
pub struct ErModel {
    pub num_vertices: usize,
    pub max_radius: usize,
    /// `|V|·(D+1)`, counted before deduplication.
    pub vocabulary_size: usize,
    pub chains: Vec<IntervalChains>,
    pub tails: TailMatrix,
    pub neighborhoods: Vec<NeighborhoodEntity>,
    /// Entities containing each vertex, ascending.
    pub vertex_neighborhoods: Vec<Vec<usize>>,
    label_index: HashMap<(usize, usize), usize>,
}

/// Builds the entity-relation model: interval chains from the bin cuts and neighborhood
/// entities from all balls of radius `≤ max_radius`, deduplicated by member set.
pub fn transform_to_er(
    g: &AttributedGraph,
    tails: &TailMatrix,
    bins: &BinBoundaries,
    max_radius: usize,
) -> Result<ErModel> {
    if tails.num_attributes() != g.num_attributes() || bins.cuts.len() != g.num_attributes() {
        return Err(Error::DimensionMismatch(
            "tail matrix or bins do not match the graph's attributes".into(),
        ));
    }
    let vocab = all_neighborhoods(g, max_radius);
    let mut neighborhoods: Vec<NeighborhoodEntity> = Vec::new();
    let mut by_members: HashMap<VertexSet, usize> = HashMap::new();
    let mut label_index = HashMap::new();
    for nb in vocab.neighborhoods {
        let id = *by_members.entry(nb.members.clone()).or_insert_with(|| {
            neighborhoods.push(NeighborhoodEntity {
                members: nb.members,
                labels: Vec::new(),
            });
            neighborhoods.len() - 1
        });
        neighborhoods[id].labels.push((nb.center, nb.radius));
        label_index.insert((nb.center, nb.radius), id);
    }
    let mut vertex_neighborhoods = vec![Vec::new(); g.num_vertices()];
    for (id, e) in neighborhoods.iter().enumerate() {
        for v in e.members.iter() {
            vertex_neighborhoods[v].push(id);
        }
    }
    Ok(ErModel {
        num_vertices: g.num_vertices(),
        max_radius,
        vocabulary_size: vocab.vocabulary_size,
        chains: bins
            .cuts
            .iter()
            .map(|c| IntervalChains::from_cuts(c))
            .collect(),
        tails: tails.clone(),
        neighborhoods,
        vertex_neighborhoods,
        label_index,
    })
}

impl ErModel {
    pub fn num_attributes(&self) -> usize {
        self.chains.len()
    }

    pub fn num_interval_entities(&self) -> usize {
        self.chains.iter().map(IntervalChains::len).sum()
    }

    /// Entity holding `N_radius(center)`. Radii past the point where a ball stops growing map to
    /// the entity of the largest distinct ball.
    pub fn neighborhood_of(&self, center: usize, radius: usize) -> Option<usize> {
        if center >= self.num_vertices || radius > self.max_radius {
            return None;
        }
        (0..=radius)
            .rev()
            .find_map(|d| self.label_index.get(&(center, d)).copied())
    }

    /// Entities one hop wider along each label's chain.
    pub fn neighborhood_parents(&self, entity: usize) -> Vec<usize> {
        let mut parents: Vec<usize> = self.neighborhoods[entity]
            .labels
            .iter()
            .filter(|&&(_, d)| d < self.max_radius)
            .filter_map(|&(c, d)| self.neighborhood_of(c, d + 1))
            .filter(|&p| p != entity)
            .collect();
        parents.sort_unstable();
        parents.dedup();
        parents
    }

    /// Vertices related to an interval entity.
    pub fn interval_members(&self, interval: &Interval) -> VertexSet {
        VertexSet::from_indices(
            self.num_vertices,
            (0..self.num_vertices).filter(|&v| interval.contains(self.tails.get(interval.attr, v))),
        )
    }

    /// Every interval entity of the model, tightest first within each chain.
    pub fn intervals(&self) -> Vec<Interval> {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(a, ch)| {
                ch.lower
                    .iter()
                    .map(move |&l| Interval::lower(a, l))
                    .chain(ch.upper.iter().map(move |&k| Interval::upper(a, k)))
            })
            .collect()
    }

    /// `𝒩(U)`: entities whose members include all of `u`, ascending.
    pub fn covering(&self, u: &VertexSet) -> Vec<usize> {
        match u.iter().next() {
            None => (0..self.neighborhoods.len()).collect(),
            Some(first) => self.vertex_neighborhoods[first]
                .iter()
                .copied()
                .filter(|&e| u.is_subset(&self.neighborhoods[e].members))
                .collect(),
        }
    }

    /// Intersection of the given entities' members; the empty intersection is all of `V`.
    pub fn intersection(&self, entities: &[usize]) -> VertexSet {
        let mut out = VertexSet::full(self.num_vertices);
        for &e in entities {
            out.intersect_with(&self.neighborhoods[e].members);
        }
        out
    }
}

/// A closed pattern `(U, S)` with the neighborhoods containing `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPattern {
    pub vertices: VertexSet,
    /// Tightest non-trivial intervals, by attribute then lower before upper.
    pub intervals: Vec<Interval>,
    /// `𝒩(U)` as ascending entity indices.
    pub covering: Vec<usize>,
}

/// Tightest interval of each chain containing every tail probability of `u`. Intervals equal
/// to `[0, 1]` carry no information and are left out.
pub fn tighten_s(er: &ErModel, u: &VertexSet) -> Vec<Interval> {
    let mut out = Vec::new();
    if u.is_empty() {
        return out;
    }
    for (a, chain) in er.chains.iter().enumerate() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in u.iter() {
            let c = er.tails.get(a, v);
            lo = lo.min(c);
            hi = hi.max(c);
        }
        let l = chain.lower[chain.lower.partition_point(|&b| b < hi)];
        if l < 1.0 {
            out.push(Interval::lower(a, l));
        }
        // upper is descending: first startpoint not above the minimum is the tightest
        if let Some(&k) = chain.upper.iter().find(|&&k| k <= lo) {
            out.push(Interval::upper(a, k));
        }
    }
    out
}

struct Enumerator<'a> {
    er: &'a ErModel,
    min_size: usize,
}

impl Enumerator<'_> {
    fn closure(&self, u: &VertexSet) -> FixedBitSet {
        let mut x = FixedBitSet::with_capacity(self.er.neighborhoods.len());
        for e in self.er.covering(u) {
            x.insert(e);
        }
        x
    }

    fn pattern(&self, u: &VertexSet, x: &FixedBitSet) -> ClosedPattern {
        ClosedPattern {
            vertices: u.clone(),
            intervals: tighten_s(self.er, u),
            covering: x.ones().collect(),
        }
    }

    /// Prefix-preserving closure extension of `(u, x)` by entity `e`, if it yields a new
    /// closed set whose parent is this one.
    fn extend(&self, u: &VertexSet, x: &FixedBitSet, e: usize) -> Option<(VertexSet, FixedBitSet)> {
        if x.contains(e) {
            return None;
        }
        let members = &self.er.neighborhoods[e].members;
        if u.intersection_len(members) < self.min_size {
            return None;
        }
        let child_u = u.intersection(members);
        let child_x = self.closure(&child_u);
        // x ⊆ child_x; any entity added below e means another parent generates this set
        if child_x
            .ones()
            .take_while(|&f| f < e)
            .any(|f| !x.contains(f))
        {
            return None;
        }
        Some((child_u, child_x))
    }

    fn descend(&self, u: VertexSet, x: FixedBitSet, core: usize, out: &mut Vec<ClosedPattern>) {
        out.push(self.pattern(&u, &x));
        for e in core + 1..self.er.neighborhoods.len() {
            if let Some((cu, cx)) = self.extend(&u, &x, e) {
                self.descend(cu, cx, e, out);
            }
        }
    }
}

/// Every closed pattern with at least `min_vertices` vertices, sorted lexicographically by `U`.
///
/// Root-level branches run on the current rayon pool; the result order does not depend on it.
pub fn enumerate_closed(er: &ErModel, min_vertices: usize) -> Result<Vec<ClosedPattern>> {
    if min_vertices == 0 {
        return Err(Error::InvalidArgument(
            "min_vertices must be at least 1".into(),
        ));
    }
    let en = Enumerator {
        er,
        min_size: min_vertices,
    };
    if er.num_vertices < min_vertices {
        return Ok(Vec::new());
    }
    let root_u = VertexSet::full(er.num_vertices);
    let root_x = en.closure(&root_u);
    let mut out: Vec<ClosedPattern> = (0..er.neighborhoods.len())
        .into_par_iter()
        .filter_map(|e| en.extend(&root_u, &root_x, e).map(|(u, x)| (e, u, x)))
        .flat_map_iter(|(e, u, x)| {
            let mut local = Vec::new();
            en.descend(u, x, e, &mut local);
            local
        })
        .collect();
    out.push(en.pattern(&root_u, &root_x));
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(out)
}

/// Depth-first visit of the same patterns without buffering, in search order.
pub fn for_each_closed<F: FnMut(ClosedPattern)>(
    er: &ErModel,
    min_vertices: usize,
    mut visit: F,
) -> Result<()> {
    if min_vertices == 0 {
        return Err(Error::InvalidArgument(
            "min_vertices must be at least 1".into(),
        ));
    }
    if er.num_vertices < min_vertices {
        return Ok(());
    }
    let en = Enumerator {
        er,
        min_size: min_vertices,
    };
    let mut stack = vec![(
        VertexSet::full(er.num_vertices),
        en.closure(&VertexSet::full(er.num_vertices)),
        None::<usize>,
    )];
    while let Some((u, x, core)) = stack.pop() {
        let start = core.map_or(0, |c| c + 1);
        let children: Vec<_> = (start..er.neighborhoods.len())
            .filter_map(|e| en.extend(&u, &x, e).map(|(cu, cx)| (cu, cx, Some(e))))
            .collect();
        visit(en.pattern(&u, &x));
        stack.extend(children.into_iter().rev());
    }
    Ok(())
}
