//! Information content, subjective interestingness and ranking.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::background::{interval_probability, BackgroundModel};
use crate::bitset::VertexSet;
use crate::description::{dl_optimise, Description, DlOptions, TraceEvent};
use crate::error::{Error, Result};
use crate::pattern_enum::{ClosedPattern, ErModel, Interval, Side};

/// `(k, l)` per attribute, intersecting the lower and upper interval when both are present.
fn combined_intervals(s: &[Interval]) -> Vec<(usize, f64, f64)> {
    let mut out: Vec<(usize, f64, f64)> = Vec::new();
    for iv in s {
        let pos = match out.iter().position(|&(a, _, _)| a == iv.attr) {
            Some(pos) => pos,
            None => {
                out.push((iv.attr, 0.0, 1.0));
                out.len() - 1
            }
        };
        match iv.side {
            Side::Lower => out[pos].2 = out[pos].2.min(iv.bound),
            Side::Upper => out[pos].1 = out[pos].1.max(iv.bound),
        }
    }
    out
}

/// `-log2 Pr(ĉ_a(v) ∈ I_a for all a, v ∈ U)` in bits.
///
/// When an attribute carries both a lower and an upper interval the two are evaluated as the
/// single interval `[k, l]`.
pub fn information_content(u: &VertexSet, s: &[Interval], m: &BackgroundModel) -> Result<f64> {
    let mut ic = 0.0;
    for (a, k, l) in combined_intervals(s) {
        if a >= m.num_attributes() {
            return Err(Error::DimensionMismatch(format!(
                "interval on attribute {a}, model has {}",
                m.num_attributes()
            )));
        }
        for v in u.iter() {
            let pr = interval_probability(m.p(a, v), k, l)?;
            if !(pr > 0.0) {
                return Err(Error::NonPositiveProbability(pr));
            }
            ic -= pr.log2();
        }
    }
    Ok(ic)
}

/// An interval `[k, l]` on the raw count of one attribute; `l = None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountInterval {
    pub attr: usize,
    pub k: u64,
    pub l: Option<u64>,
}

/// `-log2 ∏ ((1-p)^k − (1-p)^(l+1))` over attributes and vertices of `u`. A zero-probability
/// cell gives `+∞`.
pub fn information_content_counts(
    u: &VertexSet,
    s: &[CountInterval],
    m: &BackgroundModel,
) -> Result<f64> {
    let mut ic = 0.0;
    for iv in s {
        if iv.l.is_some_and(|l| l < iv.k) {
            return Err(Error::InvalidArgument(format!(
                "count interval [{}, {:?}] is empty",
                iv.k, iv.l
            )));
        }
        for v in u.iter() {
            let p = m.p(iv.attr, v);
            let q = (-p).ln_1p();
            let pr = match iv.l {
                None => (q * iv.k as f64).exp(),
                // (1-p)^k · (1 - (1-p)^(l-k+1))
                Some(l) => -(q * (l - iv.k + 1) as f64).exp_m1() * (q * iv.k as f64).exp(),
            };
            let pr = if p >= 1.0 {
                if iv.k == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                pr
            };
            ic -= pr.log2();
        }
    }
    Ok(ic)
}

/// `ic / dl`. A zero-length description only arises on degenerate one-word vocabularies; the
/// ratio is then 0 for uninformative patterns and `+∞` otherwise.
pub fn subjective_interestingness(ic: f64, dl: f64) -> f64 {
    if dl > 0.0 {
        ic / dl
    } else if ic > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct ScoredPattern {
    pub pattern: ClosedPattern,
    pub ic: f64,
    pub dl: f64,
    pub si: f64,
    /// Entity indices of the description refer to `ErModel::neighborhoods`.
    pub best_description: Description,
    pub nodes: u64,
    pub exact: bool,
    pub trace: Vec<TraceEvent>,
}

/// Scores one pattern: IC from the model, DL by branch and bound over `𝒩(U)`.
pub fn score(
    pattern: ClosedPattern,
    er: &ErModel,
    m: &BackgroundModel,
    options: DlOptions,
) -> Result<ScoredPattern> {
    let ic = information_content(&pattern.vertices, &pattern.intervals, m)?;
    let covering: Vec<(usize, &VertexSet)> = pattern
        .covering
        .iter()
        .map(|&e| (e, &er.neighborhoods[e].members))
        .collect();
    let outcome = dl_optimise(&pattern.vertices, &covering, er.vocabulary_size, options)?;
    let dl = outcome.dl();
    Ok(ScoredPattern {
        pattern,
        ic,
        dl,
        si: subjective_interestingness(ic, dl),
        best_description: outcome.best,
        nodes: outcome.nodes,
        exact: outcome.exact,
        trace: outcome.trace,
    })
}

/// Descending SI, then descending IC, then ascending `U` in lexicographic order.
pub fn rank_order(a: &ScoredPattern, b: &ScoredPattern) -> Ordering {
    b.si.total_cmp(&a.si)
        .then_with(|| b.ic.total_cmp(&a.ic))
        .then_with(|| a.pattern.vertices.cmp(&b.pattern.vertices))
}

/// Sorts by [`rank_order`] and keeps the first `top_k`.
pub fn rank(mut scored: Vec<ScoredPattern>, top_k: usize) -> Vec<ScoredPattern> {
    scored.par_sort_by(rank_order);
    scored.truncate(top_k);
    scored
}

/// Scores every pattern on the current rayon pool and returns the `top_k` best.
pub fn score_and_rank(
    patterns: Vec<ClosedPattern>,
    er: &ErModel,
    m: &BackgroundModel,
    top_k: usize,
    options: DlOptions,
) -> Result<Vec<ScoredPattern>> {
    let scored = patterns
        .into_par_iter()
        .map(|p| score(p, er, m, options))
        .collect::<Result<Vec<_>>>()?;
    Ok(rank(scored, top_k))
}
