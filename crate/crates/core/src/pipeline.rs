//! End-to-end mining: tail transform, binning, enumeration, scoring and ranking.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::background::{bin_tails, BackgroundModel, TailMatrix, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::description::{dl_optimise, DlOptions};
use crate::error::{Error, Result};
use crate::graph::AttributedGraph;
use crate::interestingness::{rank, score, ScoredPattern};
use crate::pattern_enum::{enumerate_closed, transform_to_er, ErModel};

#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig {
    pub max_radius: usize,
    pub bins: usize,
    pub min_vertices: usize,
    pub top_k: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    /// Only used by the synthetic generator.
    pub seed: u64,
    pub dl: DlOptions,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            max_radius: 3,
            bins: 5,
            min_vertices: 5,
            top_k: 500,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            jobs: 0,
            seed: 0,
            dl: DlOptions::default(),
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if self.bins < 2 {
            return fail("bins must be at least 2");
        }
        if self.min_vertices < 1 {
            return fail("min_vertices must be at least 1");
        }
        if self.top_k < 1 {
            return fail("top_k must be at least 1");
        }
        if !(self.tol > 0.0) {
            return fail("tol must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct MiningStats {
    pub patterns: usize,
    pub nodes: u64,
    /// Patterns whose description search hit the time budget.
    pub inexact: usize,
    pub enumerate_time: Duration,
    pub score_time: Duration,
}

#[derive(Debug, Clone)]
pub struct MiningResult {
    pub er: ErModel,
    /// Best first, at most `top_k`.
    pub patterns: Vec<ScoredPattern>,
    pub stats: MiningStats,
}

/// Runs the pipeline on a dedicated pool of `config.jobs` threads. The output does not depend
/// on the thread count.
pub fn mine(
    g: &AttributedGraph,
    m: &BackgroundModel,
    config: &MiningConfig,
) -> Result<MiningResult> {
    config.validate()?;
    m.check_dimensions(g)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| mine_in_pool(g, m, config))
}

fn mine_in_pool(
    g: &AttributedGraph,
    m: &BackgroundModel,
    config: &MiningConfig,
) -> Result<MiningResult> {
    let tails = TailMatrix::new(g, m)?;
    let bins = bin_tails(&tails, config.bins)?;
    let er = transform_to_er(g, &tails, &bins, config.max_radius)?;

    let started = Instant::now();
    let closed = enumerate_closed(&er, config.min_vertices)?;
    let enumerate_time = started.elapsed();

    let started = Instant::now();
    let search = DlOptions {
        trace: false,
        ..config.dl
    };
    let scored = closed
        .into_par_iter()
        .map(|p| score(p, &er, m, search))
        .collect::<Result<Vec<_>>>()?;
    let patterns = scored.len();
    let nodes = scored.iter().map(|s| s.nodes).sum();
    let inexact = scored.iter().filter(|s| !s.exact).count();
    let mut top = rank(scored, config.top_k);
    if config.dl.trace {
        for sp in &mut top {
            let covering: Vec<_> = sp
                .pattern
                .covering
                .iter()
                .map(|&e| (e, &er.neighborhoods[e].members))
                .collect();
            sp.trace = dl_optimise(
                &sp.pattern.vertices,
                &covering,
                er.vocabulary_size,
                config.dl,
            )?
            .trace;
        }
    }
    let score_time = started.elapsed();

    Ok(MiningResult {
        er,
        patterns: top,
        stats: MiningStats {
            patterns,
            nodes,
            inexact,
            enumerate_time,
            score_time,
        },
    })
}
