//! Maximum-entropy background distribution over attribute counts.
//!
//! Constraining the expected row sums (per attribute) and column sums (per vertex) of the count
//! matrix yields independent geometric cells, `Pr(a(v) = z) = p_av (1 - p_av)^z`, with
//! `1 - p_av = exp(λ_a + μ_v)`. The multipliers are found by block coordinate descent on the
//! convex dual: each multiplier is a scalar root-finding problem given the others.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AttributedGraph;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Lower clamp on success probabilities.
pub const P_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub iterations: usize,
    #[serde(with = "crate::numfmt")]
    pub max_residual: f64,
    pub converged: bool,
}

/// Fitted background model. `p[a][v]` is the geometric success probability of attribute `a` on
/// vertex `v`; multipliers of all-zero rows or columns are `-inf` (serialized as `null`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackgroundModel {
    #[serde(with = "crate::numfmt::vec")]
    pub lambda_row: Vec<f64>,
    #[serde(with = "crate::numfmt::vec")]
    pub lambda_col: Vec<f64>,
    #[serde(with = "crate::numfmt::matrix")]
    pub p: Vec<Vec<f64>>,
    pub fit_report: FitReport,
}

/// Mean of a geometric cell with log failure probability `theta < 0`.
fn cell_mean(theta: f64) -> f64 {
    1.0 / (-theta).exp_m1()
}

fn expected_sums(lambda: &[f64], mu: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut rows = vec![0.0; lambda.len()];
    let mut cols = vec![0.0; mu.len()];
    for (a, &la) in lambda.iter().enumerate() {
        if la == f64::NEG_INFINITY {
            continue;
        }
        for (v, &mv) in mu.iter().enumerate() {
            if mv == f64::NEG_INFINITY {
                continue;
            }
            let m = cell_mean(la + mv);
            rows[a] += m;
            cols[v] += m;
        }
    }
    (rows, cols)
}

fn relative_residual(expected: f64, empirical: f64) -> f64 {
    (expected - empirical).abs() / empirical.max(1.0)
}

/// Solves `Σ_i mean(x + offsets[i]) = target` for `x < -max(offsets)`, starting from `start`.
///
/// The left side is convex and increasing in `x`, so Newton steps are taken inside a bracket
/// that is tightened on every evaluation, with bisection when a step leaves it.
fn solve_multiplier(offsets: &[f64], target: f64, start: f64) -> f64 {
    debug_assert!(target > 0.0 && !offsets.is_empty());
    let max_off = offsets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // every term is at most mean(x + max_off); choosing that mean as target/k makes the sum <= target
    let per_term = target / offsets.len() as f64;
    let mut lo = -max_off + (per_term / (1.0 + per_term)).ln();
    let mut hi = -max_off;
    let mut x = if start.is_finite() && start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..200 {
        let (mut sum, mut slope) = (0.0, 0.0);
        for &o in offsets {
            let m = cell_mean(x + o);
            sum += m;
            slope += m * (1.0 + m);
        }
        let h = sum - target;
        if h.abs() <= 4.0 * f64::EPSILON * target {
            return x;
        }
        if h > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = x - h / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == x || hi - lo <= f64::EPSILON * x.abs().max(1.0) {
            return next;
        }
        x = next;
    }
    x
}

impl BackgroundModel {
    /// Fits the model to the graph's count matrix.
    ///
    /// Residuals are relative: `|E - s| / max(1, s)` for each row and column sum `s`. All-zero rows
    /// and columns are pinned to `p = 1` and left out of the residual check.
    pub fn fit(g: &AttributedGraph, tol: f64, max_iter: usize) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let (na, nv) = (g.num_attributes(), g.num_vertices());
        let mut row_sum = vec![0.0; na];
        let mut col_sum = vec![0.0; nv];
        for v in 0..nv {
            for a in 0..na {
                let x = g.value(v, a) as f64;
                row_sum[a] += x;
                col_sum[v] += x;
            }
        }
        let total: f64 = row_sum.iter().sum();
        let cells = (na * nv).max(1) as f64;
        let mean = total / cells;
        let theta0 = if mean > 0.0 {
            (mean / (1.0 + mean)).ln()
        } else {
            f64::NEG_INFINITY
        };
        let mut lambda: Vec<f64> = row_sum
            .iter()
            .map(|&s| {
                if s > 0.0 {
                    0.5 * theta0
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let mut mu: Vec<f64> = col_sum
            .iter()
            .map(|&s| {
                if s > 0.0 {
                    0.5 * theta0
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let active_rows: Vec<usize> = (0..na).filter(|&a| row_sum[a] > 0.0).collect();
        let active_cols: Vec<usize> = (0..nv).filter(|&v| col_sum[v] > 0.0).collect();

        let mut iterations = 0;
        let mut offsets = Vec::with_capacity(na.max(nv));
        let max_residual = loop {
            let (er, ec) = expected_sums(&lambda, &mu);
            let residual = active_rows
                .iter()
                .map(|&a| relative_residual(er[a], row_sum[a]))
                .chain(
                    active_cols
                        .iter()
                        .map(|&v| relative_residual(ec[v], col_sum[v])),
                )
                .fold(0.0, f64::max);
            if residual <= tol {
                break residual;
            }
            if iterations >= max_iter {
                return Err(Error::NotConverged {
                    iterations,
                    residual,
                });
            }
            for &a in &active_rows {
                offsets.clear();
                offsets.extend(active_cols.iter().map(|&v| mu[v]));
                lambda[a] = solve_multiplier(&offsets, row_sum[a], lambda[a]);
            }
            for &v in &active_cols {
                offsets.clear();
                offsets.extend(active_rows.iter().map(|&a| lambda[a]));
                mu[v] = solve_multiplier(&offsets, col_sum[v], mu[v]);
            }
            iterations += 1;
        };

        let p = (0..na)
            .map(|a| {
                (0..nv)
                    .map(|v| {
                        let theta = lambda[a] + mu[v];
                        if theta == f64::NEG_INFINITY {
                            1.0
                        } else {
                            (-theta.exp_m1()).clamp(P_FLOOR, 1.0)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(BackgroundModel {
            lambda_row: lambda,
            lambda_col: mu,
            p,
            fit_report: FitReport {
                iterations,
                max_residual,
                converged: true,
            },
        })
    }

    pub fn num_attributes(&self) -> usize {
        self.p.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.p.first().map_or(self.lambda_col.len(), Vec::len)
    }

    pub fn p(&self, a: usize, v: usize) -> f64 {
        self.p[a][v]
    }

    /// Expected count `(1 - p)/p` of one cell.
    pub fn expected(&self, a: usize, v: usize) -> f64 {
        let p = self.p[a][v];
        (1.0 - p) / p
    }

    /// `Pr(a(v) ≥ value) = (1 - p_av)^value`.
    pub fn tail_probability(&self, a: usize, v: usize, value: u64) -> f64 {
        tail(self.p[a][v], value)
    }

    /// Probability that the tail-probability variable of cell `(a, v)` falls in `[k, l]`,
    /// `l - k + p_av·k`, clamped to `[0, 1]`.
    pub fn interval_probability(&self, a: usize, v: usize, k: f64, l: f64) -> Result<f64> {
        interval_probability(self.p[a][v], k, l)
    }

    pub fn check_dimensions(&self, g: &AttributedGraph) -> Result<()> {
        if self.num_attributes() != g.num_attributes() || self.num_vertices() != g.num_vertices() {
            return Err(Error::DimensionMismatch(format!(
                "model is {} attributes x {} vertices, graph is {} x {}",
                self.num_attributes(),
                self.num_vertices(),
                g.num_attributes(),
                g.num_vertices()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: BackgroundModel = serde_json::from_str(text)?;
        let nv = model.lambda_col.len();
        if model.p.len() != model.lambda_row.len() || model.p.iter().any(|r| r.len() != nv) {
            return Err(Error::DimensionMismatch(
                "p matrix does not match multiplier lengths".into(),
            ));
        }
        if model.p.iter().flatten().any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::InvalidArgument(
                "success probability outside (0, 1]".into(),
            ));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// `(1 - p)^value`; a cell with `p = 1` can only take the value 0.
pub fn tail(p: f64, value: u64) -> f64 {
    if value == 0 {
        1.0
    } else if p >= 1.0 {
        0.0
    } else {
        ((-p).ln_1p() * value as f64).exp()
    }
}

pub fn interval_probability(p: f64, k: f64, l: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) || !(0.0..=1.0).contains(&l) || k > l {
        return Err(Error::InvalidInterval { k, l });
    }
    Ok((l - k + p * k).clamp(0.0, 1.0))
}

/// Observed tail probabilities `ĉ[a][v] = Pr(a(v) ≥ â(v))`, floored at the smallest normal
/// `f64` so logarithms stay finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TailMatrix {
    pub c: Vec<Vec<f64>>,
}

impl TailMatrix {
    pub fn new(g: &AttributedGraph, m: &BackgroundModel) -> Result<Self> {
        m.check_dimensions(g)?;
        let c = (0..g.num_attributes())
            .map(|a| {
                (0..g.num_vertices())
                    .map(|v| {
                        m.tail_probability(a, v, g.value(v, a))
                            .max(f64::MIN_POSITIVE)
                    })
                    .collect()
            })
            .collect();
        Ok(TailMatrix { c })
    }

    pub fn num_attributes(&self) -> usize {
        self.c.len()
    }

    pub fn get(&self, a: usize, v: usize) -> f64 {
        self.c[a][v]
    }
}

/// Per-attribute quantile cut points. Value `x` falls in bin `i` when
/// `cuts[i-1] < x <= cuts[i]` (the last bin is open above).
#[derive(Debug, Clone, PartialEq)]
pub struct BinBoundaries {
    pub cuts: Vec<Vec<f64>>,
}

impl BinBoundaries {
    pub fn bin_of(&self, a: usize, x: f64) -> usize {
        self.cuts[a].partition_point(|&c| c < x)
    }

    pub fn num_bins(&self, a: usize) -> usize {
        self.cuts[a].len() + 1
    }
}

/// Nearest-rank quantile cuts at ranks `i/bins`, `i = 1..bins-1`, per attribute.
///
/// Repeated cut points are merged, and a cut equal to the column maximum is dropped since it
/// separates nothing; heavily tied columns therefore get fewer bins.
pub fn bin_tails(t: &TailMatrix, bins: usize) -> Result<BinBoundaries> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 bins, got {bins}"
        )));
    }
    let cuts =
        t.c.iter()
            .map(|column| {
                let mut sorted = column.clone();
                sorted.sort_by(f64::total_cmp);
                let n = sorted.len();
                let Some(&max) = sorted.last() else {
                    return Vec::new();
                };
                let mut cuts: Vec<f64> = (1..bins)
                    .map(|i| sorted[((i * n).div_ceil(bins)).max(1) - 1])
                    .filter(|&c| c < max)
                    .collect();
                cuts.dedup();
                cuts
            })
            .collect();
    Ok(BinBoundaries { cuts })
}
