mod config;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use csea_core::background::{BackgroundModel, DEFAULT_MAX_ITER, DEFAULT_TOL};
use csea_core::description::DlOptions;
use csea_core::export::{to_dot, to_geojson};
use csea_core::pipeline::{mine, MiningConfig};
use csea_core::record::{read_jsonl, write_jsonl, PatternRecord};
use csea_core::synth::{generate, SynthConfig};
use csea_core::{AttributedGraph, Error};

use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "csea",
    version,
    about = "Mine cohesive subgraphs with exceptional attributes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the background model and write it as JSON
    Fit(FitArgs),
    /// Enumerate, score and rank patterns; writes JSON lines
    Mine(MineArgs),
    /// Render mined patterns as GeoJSON or Graphviz
    Export(ExportArgs),
    /// Generate a grid graph with planted exceptional regions
    Synth(SynthArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Vertex table (CSV or TSV): id, one column per attribute, optional trailing wkt
    #[arg(long, requires = "edges", conflicts_with = "graph")]
    vertices: Option<PathBuf>,
    /// Edge table with src and dst columns
    #[arg(long, requires = "vertices")]
    edges: Option<PathBuf>,
    /// Graph as a single JSON document
    #[arg(long)]
    graph: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> Result<AttributedGraph> {
        let g = match (&self.vertices, &self.edges, &self.graph) {
            (Some(v), Some(e), None) => AttributedGraph::load_tables(v, e)?,
            (None, None, Some(j)) => AttributedGraph::load_json(j)?,
            _ => bail!("give either --vertices and --edges, or --graph"),
        };
        Ok(g)
    }
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    input: GraphArgs,
    /// Relative tolerance on row and column sums
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// key=value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    input: GraphArgs,
    /// Background model from `csea fit`
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    max_radius: Option<usize>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    min_vertices: Option<usize>,
    #[arg(long)]
    top_k: Option<usize>,
    /// Accepted for config symmetry; the model is read, not refitted
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Seconds per pattern for the description search; results past it are marked inexact
    #[arg(long)]
    dl_time_budget: Option<f64>,
    /// Write the description search tree of every reported pattern as JSON lines
    #[arg(long, value_name = "FILE")]
    trace_bnb: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Pattern file (default: stdout)
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Geojson,
    Dot,
}

#[derive(Args)]
struct ExportArgs {
    /// JSON lines from `csea mine`
    #[arg(long)]
    patterns: PathBuf,
    #[command(flatten)]
    input: GraphArgs,
    #[arg(long, value_enum, default_value = "geojson")]
    format: Format,
    /// Export only the first N patterns
    #[arg(long)]
    top: Option<usize>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory for vertices.csv, edges.csv and planted.json
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 17)]
    rows: usize,
    #[arg(long, default_value_t = 17)]
    cols: usize,
    #[arg(long, default_value_t = 10)]
    attributes: usize,
    #[arg(long, default_value_t = 3)]
    regions: usize,
    /// Side length of the square planted regions
    #[arg(long, default_value_t = 4)]
    region_size: usize,
    /// Attributes boosted per region
    #[arg(long, default_value_t = 3)]
    boosted: usize,
    /// Rate multiplier inside regions
    #[arg(long, default_value_t = 4.0)]
    boost: f64,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fit(args: FitArgs) -> Result<()> {
    let mut file = FileConfig::open(args.config.as_deref())?;
    let tol = file.pick("tol", args.tol, DEFAULT_TOL)?;
    let max_iter = file.pick("max_iter", args.max_iter, DEFAULT_MAX_ITER)?;
    file.finish()?;
    let g = args.input.load()?;
    let started = Instant::now();
    let model = BackgroundModel::fit(&g, tol, max_iter)?;
    let report = &model.fit_report;
    eprintln!(
        "fit: {} attributes x {} vertices, {} sweeps, max relative residual {:e}, {:.3}s",
        model.num_attributes(),
        model.num_vertices(),
        report.iterations,
        report.max_residual,
        started.elapsed().as_secs_f64()
    );
    model.save(&args.out)?;
    Ok(())
}

fn mine_cmd(args: MineArgs) -> Result<()> {
    let mut file = FileConfig::open(args.config.as_deref())?;
    let defaults = MiningConfig::default();
    let budget = file.pick("dl_time_budget", args.dl_time_budget, f64::INFINITY)?;
    let config = MiningConfig {
        max_radius: file.pick("max_radius", args.max_radius, defaults.max_radius)?,
        bins: file.pick("bins", args.bins, defaults.bins)?,
        min_vertices: file.pick("min_vertices", args.min_vertices, defaults.min_vertices)?,
        top_k: file.pick("top_k", args.top_k, defaults.top_k)?,
        tol: file.pick("tol", args.tol, defaults.tol)?,
        max_iter: file.pick("max_iter", None, defaults.max_iter)?,
        jobs: file.pick("jobs", args.jobs, defaults.jobs)?,
        seed: file.pick("seed", None, defaults.seed)?,
        dl: DlOptions {
            time_budget: budget
                .is_finite()
                .then(|| Duration::from_secs_f64(budget.max(0.0))),
            trace: args.trace_bnb.is_some(),
            ..DlOptions::default()
        },
    };
    file.finish()?;

    let g = args.input.load()?;
    let model = BackgroundModel::load(&args.model)?;
    let started = Instant::now();
    let result = mine(&g, &model, &config)?;
    let records: Vec<PatternRecord> = result
        .patterns
        .iter()
        .map(|sp| PatternRecord::new(sp, &result.er, &g))
        .collect();
    write_jsonl(output(args.out.as_deref())?, &records)?;

    if let Some(path) = &args.trace_bnb {
        let mut w = output(Some(path))?;
        for (rank, sp) in result.patterns.iter().enumerate() {
            for event in &sp.trace {
                let mut value = serde_json::to_value(event)?;
                value["pattern"] = rank.into();
                serde_json::to_writer(&mut w, &value)?;
                w.write_all(b"\n")?;
            }
        }
        w.flush()?;
    }

    let s = &result.stats;
    eprintln!(
        "mine: {} closed patterns, {} reported, {} search nodes, {} inexact; \
         enumerate {:.3}s, score {:.3}s, total {:.3}s",
        s.patterns,
        records.len(),
        s.nodes,
        s.inexact,
        s.enumerate_time.as_secs_f64(),
        s.score_time.as_secs_f64(),
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn export(args: ExportArgs) -> Result<()> {
    let g = args.input.load()?;
    let file = File::open(&args.patterns)
        .with_context(|| format!("cannot read {}", args.patterns.display()))?;
    let mut records = read_jsonl(BufReader::new(file))?;
    if let Some(n) = args.top {
        records.truncate(n);
    }
    let text = match args.format {
        Format::Geojson => to_geojson(&records, &g)?.to_string() + "\n",
        Format::Dot => to_dot(&records, &g)?,
    };
    let mut w = output(args.out.as_deref())?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let mut file = FileConfig::open(args.config.as_deref())?;
    let seed = file.pick("seed", args.seed, 0)?;
    file.finish()?;
    let cfg = SynthConfig {
        rows: args.rows,
        cols: args.cols,
        attributes: args.attributes,
        regions: args.regions,
        region_height: args.region_size,
        region_width: args.region_size,
        boosted: args.boosted,
        boost: args.boost,
        seed,
        ..SynthConfig::default()
    };
    let data = generate(&cfg)?;
    data.write(&args.out_dir)?;
    eprintln!(
        "synth: {} vertices, {} edges, {} planted regions in {}",
        data.graph.num_vertices(),
        data.graph.num_edges(),
        data.regions.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let diverged = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<Error>(), Some(Error::NotConverged { .. })));
    if diverged {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(a) => fit(a),
        Command::Mine(a) => mine_cmd(a),
        Command::Export(a) => export(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("csea: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
