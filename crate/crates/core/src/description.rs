//! Description length of a vertex set: the cheapest way to name `U` as an intersection of
//! neighborhoods plus a list of exception vertices.
//!
//! A description `X ⊆ 𝒩(U)` costs `(|X|+1)·log2|𝒩| + (|exc(X,U)|+1)·log2|V|` bits, where
//! `exc(X,U) = (∩X) \ U` and the empty intersection is `V`. Minimizing it is a set-cover problem,
//! solved exactly by branch and bound with a gain-based lower bound and two candidate filters.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// `(|X|+1)·log2(vocabulary) + (|exc|+1)·log2(vertices)`.
pub fn description_cost(
    num_entities: usize,
    num_exceptions: usize,
    vocabulary_size: usize,
    num_vertices: usize,
) -> f64 {
    (num_entities + 1) as f64 * (vocabulary_size as f64).log2()
        + (num_exceptions + 1) as f64 * (num_vertices as f64).log2()
}

/// `exc(X, U)`; fails if some member of `X` does not contain `U`.
pub fn exceptions(x: &[&VertexSet], u: &VertexSet) -> Result<VertexSet> {
    let mut inter = VertexSet::full(u.universe());
    for (i, set) in x.iter().enumerate() {
        if !u.is_subset(set) {
            return Err(Error::NotCovering(i));
        }
        inter.intersect_with(set);
    }
    inter.difference_with(u);
    Ok(inter)
}

/// `f(X, U)` evaluated from the sets themselves.
pub fn description_length(x: &[&VertexSet], u: &VertexSet, vocabulary_size: usize) -> Result<f64> {
    let exc = exceptions(x, u)?;
    Ok(description_cost(
        x.len(),
        exc.len(),
        vocabulary_size,
        u.universe(),
    ))
}

/// `gain_Y = |exc(X,U)| − |exc(X∪Y,U)|`, given the current exceptions of `X`.
pub fn gain(y: &[&VertexSet], current_exceptions: &VertexSet) -> usize {
    let mut remaining = current_exceptions.clone();
    for set in y {
        remaining.intersect_with(set);
    }
    current_exceptions.len() - remaining.len()
}

/// Lower bound on `f(X∪Y, U)` over all `Y ⊆ Cand`, from the singleton gains of the candidates.
pub fn lower_bound(
    num_entities: usize,
    num_exceptions: usize,
    singleton_gains: &[usize],
    vocabulary_size: usize,
    num_vertices: usize,
) -> f64 {
    let mut gains = singleton_gains.to_vec();
    gains.sort_unstable_by(|a, b| b.cmp(a));
    let mut best = description_cost(num_entities, num_exceptions, vocabulary_size, num_vertices);
    let mut removed = 0usize;
    for (i, g) in gains.iter().enumerate() {
        removed += g;
        let left = num_exceptions.saturating_sub(removed);
        let cost = description_cost(num_entities + i + 1, left, vocabulary_size, num_vertices);
        if cost < best {
            best = cost;
        }
    }
    best
}

/// Positions in `cand` whose singleton gain is positive.
pub fn prune_useless(cand: &[&VertexSet], current_exceptions: &VertexSet) -> Vec<usize> {
    (0..cand.len())
        .filter(|&i| current_exceptions.difference_len(cand[i]) > 0)
        .collect()
}

/// Positions in `cand` not dominated by another candidate. `e'` is dominated by `e` when
/// `exc(X∪{e}) ⊆ exc(X∪{e'})`; of candidates with equal exception sets the first survives.
pub fn prune_lower_bounded(cand: &[&VertexSet], current_exceptions: &VertexSet) -> Vec<usize> {
    let after: Vec<VertexSet> = cand
        .iter()
        .map(|c| current_exceptions.intersection(c))
        .collect();
    surviving(&after)
}

fn surviving(after: &[VertexSet]) -> Vec<usize> {
    (0..after.len())
        .filter(|&i| {
            (0..after.len()).all(|j| {
                j == i || !after[j].is_subset(&after[i]) || (after[j] == after[i] && i < j)
            })
        })
        .collect()
}

/// Position of the candidate leaving the fewest exceptions; ties go to the first.
pub fn branch_choice(cand: &[&VertexSet], current_exceptions: &VertexSet) -> Option<usize> {
    (0..cand.len()).min_by_key(|&i| current_exceptions.intersection_len(cand[i]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DlOptions {
    pub prune_useless: bool,
    pub prune_lower_bounded: bool,
    /// Stop early and return the incumbent; the outcome is then flagged inexact.
    pub time_budget: Option<Duration>,
    pub trace: bool,
}

impl Default for DlOptions {
    fn default() -> Self {
        DlOptions {
            prune_useless: true,
            prune_lower_bounded: true,
            time_budget: None,
            trace: false,
        }
    }
}

/// A description of `U`: the chosen neighborhoods (as caller-side ids) and the exceptions.
#[derive(Debug, Clone, PartialEq)]
pub struct Description {
    pub entities: Vec<usize>,
    pub exceptions: VertexSet,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceAction {
    Bounded,
    Branch { entity: usize },
    Leaf,
    Improved,
}

/// One visited node of the search tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEvent {
    pub node: u64,
    pub depth: usize,
    pub x: Vec<usize>,
    pub exceptions: usize,
    pub candidates: usize,
    pub lower_bound: f64,
    pub incumbent: f64,
    pub action: TraceAction,
}

#[derive(Debug, Clone)]
pub struct DlOutcome {
    pub best: Description,
    pub nodes: u64,
    /// False when the time budget cut the search short.
    pub exact: bool,
    pub trace: Vec<TraceEvent>,
}

impl DlOutcome {
    pub fn dl(&self) -> f64 {
        self.best.length
    }
}

struct Search<'a> {
    u: &'a VertexSet,
    sets: Vec<&'a VertexSet>,
    ids: Vec<usize>,
    vocabulary_size: usize,
    num_vertices: usize,
    options: DlOptions,
    started: Instant,
    timed_out: bool,
    nodes: u64,
    best_len: f64,
    best_x: Vec<usize>,
    x: Vec<usize>,
    trace: Vec<TraceEvent>,
}

impl Search<'_> {
    fn cost(&self, x_len: usize, exc: &VertexSet) -> f64 {
        description_cost(x_len, exc.len(), self.vocabulary_size, self.num_vertices)
    }

    fn record(&mut self, exc: &VertexSet, cand: usize, lb: f64, action: TraceAction) {
        if self.options.trace {
            self.trace.push(TraceEvent {
                node: self.nodes,
                depth: self.x.len(),
                x: self.x.iter().map(|&i| self.ids[i]).collect(),
                exceptions: exc.len(),
                candidates: cand,
                lower_bound: lb,
                incumbent: self.best_len,
                action,
            });
        }
    }

    fn out_of_time(&mut self) -> bool {
        if let Some(budget) = self.options.time_budget {
            if self.nodes.is_multiple_of(256) && self.started.elapsed() > budget {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    fn visit(&mut self, exc: &VertexSet, mut cand: Vec<usize>) {
        if self.out_of_time() {
            return;
        }
        self.nodes += 1;
        let gains: Vec<usize> = cand
            .iter()
            .map(|&c| exc.difference_len(self.sets[c]))
            .collect();
        let lb = lower_bound(
            self.x.len(),
            exc.len(),
            &gains,
            self.vocabulary_size,
            self.num_vertices,
        );
        if !(lb < self.best_len) {
            self.record(exc, cand.len(), lb, TraceAction::Bounded);
            return;
        }
        if !cand.is_empty() {
            if self.options.prune_useless {
                cand = cand
                    .iter()
                    .zip(&gains)
                    .filter(|(_, &g)| g > 0)
                    .map(|(&c, _)| c)
                    .collect();
            }
            if self.options.prune_lower_bounded && cand.len() > 1 {
                let after: Vec<VertexSet> = cand
                    .iter()
                    .map(|&c| exc.intersection(self.sets[c]))
                    .collect();
                cand = surviving(&after).into_iter().map(|i| cand[i]).collect();
            }
        }
        if cand.is_empty() {
            let f = self.cost(self.x.len(), exc);
            let improved = f < self.best_len;
            if improved {
                self.best_len = f;
                self.best_x = self.x.clone();
            }
            let action = if improved {
                TraceAction::Improved
            } else {
                TraceAction::Leaf
            };
            self.record(exc, 0, lb, action);
            return;
        }
        let pos = (0..cand.len())
            .min_by_key(|&i| exc.intersection_len(self.sets[cand[i]]))
            .expect("non-empty candidates");
        let e = cand.remove(pos);
        self.record(
            exc,
            cand.len() + 1,
            lb,
            TraceAction::Branch {
                entity: self.ids[e],
            },
        );
        self.x.push(e);
        let narrowed = exc.intersection(self.sets[e]);
        self.visit(&narrowed, cand.clone());
        self.x.pop();
        self.visit(exc, cand);
    }
}

/// Exact minimum of `f(X, U)` over `X ⊆ covering`.
///
/// `covering` pairs caller-side ids with member sets, each containing `u`. The incumbent starts
/// at the empty description, so the result is always finite.
pub fn dl_optimise(
    u: &VertexSet,
    covering: &[(usize, &VertexSet)],
    vocabulary_size: usize,
    options: DlOptions,
) -> Result<DlOutcome> {
    for (i, (_, set)) in covering.iter().enumerate() {
        if !u.is_subset(set) {
            return Err(Error::NotCovering(i));
        }
    }
    let n = u.universe();
    let root_exc = VertexSet::full(n).difference(u);
    let mut search = Search {
        u,
        sets: covering.iter().map(|&(_, s)| s).collect(),
        ids: covering.iter().map(|&(id, _)| id).collect(),
        vocabulary_size,
        num_vertices: n,
        options,
        started: Instant::now(),
        timed_out: false,
        nodes: 0,
        best_len: description_cost(0, root_exc.len(), vocabulary_size, n),
        best_x: Vec::new(),
        x: Vec::new(),
        trace: Vec::new(),
    };
    search.visit(&root_exc, (0..covering.len()).collect());
    let chosen: Vec<&VertexSet> = search.best_x.iter().map(|&i| search.sets[i]).collect();
    let exc = exceptions(&chosen, search.u)?;
    let mut entities: Vec<usize> = search.best_x.iter().map(|&i| search.ids[i]).collect();
    entities.sort_unstable();
    Ok(DlOutcome {
        best: Description {
            entities,
            exceptions: exc,
            length: search.best_len,
        },
        nodes: search.nodes,
        exact: !search.timed_out,
        trace: search.trace,
    })
}
