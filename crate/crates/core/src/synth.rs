//! Seeded grid graphs with planted exceptional rectangles, for tests and benchmarks.
//!
//! Cells of an `rows × cols` grid are vertices (4-neighbor adjacency, unit-square polygons).
//! Counts are Poisson with a per-attribute base rate; inside each planted rectangle a few
//! attributes have their rate multiplied by `boost`.

use std::fs;
use std::path::Path;

use geo_types::{LineString, Polygon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use wkt::ToWkt;

use crate::error::{Error, Result};
use crate::graph::AttributedGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub rows: usize,
    pub cols: usize,
    pub attributes: usize,
    pub regions: usize,
    pub region_height: usize,
    pub region_width: usize,
    /// Attributes boosted inside each region.
    pub boosted: usize,
    pub boost: f64,
    pub min_rate: f64,
    pub max_rate: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            rows: 17,
            cols: 17,
            attributes: 10,
            regions: 3,
            region_height: 4,
            region_width: 4,
            boosted: 3,
            boost: 4.0,
            min_rate: 2.0,
            max_rate: 8.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedRegion {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
    pub attributes: Vec<String>,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SynthData {
    pub rows: usize,
    pub cols: usize,
    pub graph: AttributedGraph,
    pub regions: Vec<PlantedRegion>,
}

pub fn cell_id(row: usize, col: usize) -> String {
    format!("r{row:02}c{col:02}")
}

fn cell_polygon(row: usize, col: usize) -> Polygon<f64> {
    let (x, y) = (col as f64, row as f64);
    Polygon::new(
        LineString::from(vec![
            (x, y),
            (x + 1.0, y),
            (x + 1.0, y + 1.0),
            (x, y + 1.0),
            (x, y),
        ]),
        Vec::new(),
    )
}

/// Rectangles at least one cell apart, placed by rejection sampling.
fn place_regions(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let (h, w) = (cfg.region_height, cfg.region_width);
    if cfg.regions > 0 && (h == 0 || w == 0 || h > cfg.rows || w > cfg.cols) {
        return Err(Error::InvalidArgument(format!(
            "{h}x{w} regions do not fit a {}x{} grid",
            cfg.rows, cfg.cols
        )));
    }
    let mut placed: Vec<(usize, usize)> = Vec::new();
    let mut attempts = 0;
    while placed.len() < cfg.regions {
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::InvalidArgument(format!(
                "cannot place {} separated {h}x{w} regions",
                cfg.regions
            )));
        }
        let r = rng.random_range(0..=cfg.rows - h);
        let c = rng.random_range(0..=cfg.cols - w);
        let apart = placed
            .iter()
            .all(|&(pr, pc)| r > pr + h || pr > r + h || c > pc + w || pc > c + w);
        if apart {
            placed.push((r, c));
        }
    }
    Ok(placed)
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthData> {
    if cfg.rows == 0 || cfg.cols == 0 || cfg.attributes == 0 {
        return Err(Error::InvalidArgument(
            "grid and attribute counts must be positive".into(),
        ));
    }
    if cfg.boosted > cfg.attributes {
        return Err(Error::InvalidArgument(format!(
            "cannot boost {} of {} attributes",
            cfg.boosted, cfg.attributes
        )));
    }
    if !(cfg.min_rate > 0.0 && cfg.min_rate <= cfg.max_rate && cfg.boost > 0.0) {
        return Err(Error::InvalidArgument(
            "rates must satisfy 0 < min <= max, boost > 0".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let attributes: Vec<String> = (0..cfg.attributes).map(|a| format!("a{a}")).collect();
    let rates: Vec<f64> = (0..cfg.attributes)
        .map(|_| rng.random_range(cfg.min_rate..=cfg.max_rate))
        .collect();
    let corners = place_regions(cfg, &mut rng)?;

    let n = cfg.rows * cfg.cols;
    let mut multiplier = vec![vec![1.0; cfg.attributes]; n];
    let mut regions = Vec::new();
    for &(r0, c0) in &corners {
        let mut chosen: Vec<usize> = Vec::new();
        while chosen.len() < cfg.boosted {
            let a = rng.random_range(0..cfg.attributes);
            if !chosen.contains(&a) {
                chosen.push(a);
            }
        }
        chosen.sort_unstable();
        let mut vertices = Vec::new();
        for r in r0..r0 + cfg.region_height {
            for c in c0..c0 + cfg.region_width {
                for &a in &chosen {
                    multiplier[r * cfg.cols + c][a] = cfg.boost;
                }
                vertices.push(cell_id(r, c));
            }
        }
        regions.push(PlantedRegion {
            row: r0,
            col: c0,
            height: cfg.region_height,
            width: cfg.region_width,
            attributes: chosen.iter().map(|&a| attributes[a].clone()).collect(),
            vertices,
        });
    }

    let values: Vec<Vec<u64>> = multiplier
        .iter()
        .map(|mult| {
            (0..cfg.attributes)
                .map(|a| {
                    let poisson = Poisson::new(rates[a] * mult[a]).expect("positive rate");
                    poisson.sample(&mut rng) as u64
                })
                .collect()
        })
        .collect();

    let mut edges = Vec::new();
    for r in 0..cfg.rows {
        for c in 0..cfg.cols {
            let v = r * cfg.cols + c;
            if c + 1 < cfg.cols {
                edges.push((v, v + 1));
            }
            if r + 1 < cfg.rows {
                edges.push((v, v + cfg.cols));
            }
        }
    }
    let ids: Vec<String> = (0..n)
        .map(|v| cell_id(v / cfg.cols, v % cfg.cols))
        .collect();
    let geometry = (0..n)
        .map(|v| {
            let poly = cell_polygon(v / cfg.cols, v % cfg.cols);
            Some(geojson::Geometry::new(geojson::Value::from(&poly)))
        })
        .collect();
    let graph = AttributedGraph::new(ids, attributes, values, edges)?.with_geometry(geometry)?;
    Ok(SynthData {
        rows: cfg.rows,
        cols: cfg.cols,
        graph,
        regions,
    })
}

impl SynthData {
    /// Writes `vertices.csv` (with a `wkt` column), `edges.csv` and `planted.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let g = &self.graph;

        let path = dir.join("vertices.csv");
        let mut w = csv::Writer::from_path(&path)?;
        let mut header = vec!["id".to_string()];
        header.extend(g.attributes().iter().cloned());
        header.push("wkt".into());
        w.write_record(&header)?;
        for v in 0..g.num_vertices() {
            let mut row = vec![g.vertex_id(v).to_string()];
            row.extend(g.values()[v].iter().map(u64::to_string));
            row.push(cell_polygon(v / self.cols, v % self.cols).wkt_string());
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;

        let path = dir.join("edges.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["src", "dst"])?;
        for &(a, b) in g.edges() {
            w.write_record([g.vertex_id(a), g.vertex_id(b)])?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;

        let path = dir.join("planted.json");
        let text = serde_json::to_string_pretty(&self.regions)?;
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    }
}
