//! Vertex-attributed graphs, their file formats, and hop neighborhoods.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use geo_types::Geometry as GeoGeometry;
use serde::Deserialize;
use wkt::TryFromWkt;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// An undirected graph whose vertices carry nonnegative integer counts.
///
/// Vertices keep their input order; `values[v][a]` is the count of attribute `a` on vertex `v`.
#[derive(Debug, Clone)]
pub struct AttributedGraph {
    vertex_ids: Vec<String>,
    attributes: Vec<String>,
    values: Vec<Vec<u64>>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    geometry: Vec<Option<geojson::Geometry>>,
}

impl AttributedGraph {
    /// Validates and builds a graph. Reversed duplicate edges are collapsed.
    pub fn new(
        vertex_ids: Vec<String>,
        attributes: Vec<String>,
        values: Vec<Vec<u64>>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = vertex_ids.len();
        let mut seen = HashSet::with_capacity(n);
        for id in &vertex_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        if values.len() != n {
            return Err(Error::RaggedRow {
                row: values.len().min(n),
                expected: n,
                found: values.len(),
            });
        }
        for (row, vals) in values.iter().enumerate() {
            if vals.len() != attributes.len() {
                return Err(Error::RaggedRow {
                    row,
                    expected: attributes.len(),
                    found: vals.len(),
                });
            }
        }
        let mut edge_set = HashSet::new();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::InvalidVertex(u));
            }
            if v >= n {
                return Err(Error::InvalidVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop(vertex_ids[u].clone()));
            }
            edge_set.insert((u.min(v), u.max(v)));
        }
        let mut edges: Vec<_> = edge_set.into_iter().collect();
        edges.sort_unstable();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(AttributedGraph {
            vertex_ids,
            attributes,
            values,
            edges,
            adjacency,
            geometry: vec![None; n],
        })
    }

    pub fn with_geometry(mut self, geometry: Vec<Option<geojson::Geometry>>) -> Result<Self> {
        if geometry.len() != self.num_vertices() {
            return Err(Error::InvalidArgument(format!(
                "{} geometries for {} vertices",
                geometry.len(),
                self.num_vertices()
            )));
        }
        self.geometry = geometry;
        Ok(self)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_ids.iter().position(|x| x == id)
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn value(&self, v: usize, a: usize) -> u64 {
        self.values[v][a]
    }

    pub fn values(&self) -> &[Vec<u64>] {
        &self.values
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn geometry(&self, v: usize) -> Option<&geojson::Geometry> {
        self.geometry[v].as_ref()
    }

    /// Reads a vertex table and an edge table (CSV, or TSV when the header contains a tab).
    pub fn load_tables(vertices: &Path, edges: &Path) -> Result<Self> {
        let vfile = File::open(vertices).map_err(|e| Error::io(vertices, e))?;
        let efile = File::open(edges).map_err(|e| Error::io(edges, e))?;
        Self::from_tables(BufReader::new(vfile), BufReader::new(efile))
    }

    pub fn from_tables<R1: Read, R2: Read>(vertex_source: R1, edge_source: R2) -> Result<Self> {
        let (ids, attributes, values, geometry) = read_vertex_table(vertex_source)?;
        let index: HashMap<&str, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let mut reader = table_reader(edge_source)?;
        let header = reader.headers()?.clone();
        let src = column(&header, "src")?;
        let dst = column(&header, "dst")?;
        let mut edges = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != header.len() {
                return Err(Error::RaggedRow {
                    row: row + 1,
                    expected: header.len(),
                    found: record.len(),
                });
            }
            let lookup = |name: &str| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::UnknownEndpoint(name.to_string()))
            };
            edges.push((lookup(&record[src])?, lookup(&record[dst])?));
        }
        AttributedGraph::new(ids, attributes, values, edges)?.with_geometry(geometry)
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_reader(BufReader::new(file))
    }

    /// Single-document form: `{"vertices": [{"id", "attrs": {..}, "geometry"}], "edges": [[a, b], ..]}`.
    pub fn from_json_reader<R: Read>(reader: R) -> Result<Self> {
        let doc: JsonGraph = serde_json::from_reader(reader)?;
        let mut ids = Vec::with_capacity(doc.vertices.len());
        let mut attributes: Vec<String> = Vec::new();
        let mut values = Vec::with_capacity(doc.vertices.len());
        let mut geometry = Vec::with_capacity(doc.vertices.len());
        for (row, vertex) in doc.vertices.into_iter().enumerate() {
            let id = json_id(&vertex.id)?;
            if row == 0 {
                attributes = vertex.attrs.keys().cloned().collect();
            }
            if vertex.attrs.len() != attributes.len() {
                return Err(Error::RaggedRow {
                    row,
                    expected: attributes.len(),
                    found: vertex.attrs.len(),
                });
            }
            let mut vals = Vec::with_capacity(attributes.len());
            for attr in &attributes {
                let raw = vertex
                    .attrs
                    .get(attr)
                    .ok_or_else(|| Error::MissingColumn(attr.clone()))?;
                let parsed = raw.as_u64().ok_or_else(|| Error::InvalidAttributeValue {
                    vertex: id.clone(),
                    attribute: attr.clone(),
                    value: raw.to_string(),
                })?;
                vals.push(parsed);
            }
            let geom = match vertex.geometry {
                None | Some(serde_json::Value::Null) => None,
                Some(serde_json::Value::String(text)) => Some(parse_wkt(&id, &text)?),
                Some(value) => Some(geojson::Geometry::try_from(value).map_err(|e| {
                    Error::InvalidGeometry {
                        vertex: id.clone(),
                        message: e.to_string(),
                    }
                })?),
            };
            ids.push(id);
            values.push(vals);
            geometry.push(geom);
        }
        let index: HashMap<&str, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let mut edges = Vec::with_capacity(doc.edges.len());
        for [a, b] in &doc.edges {
            let a = json_id(a)?;
            let b = json_id(b)?;
            let ia = *index
                .get(a.as_str())
                .ok_or(Error::UnknownEndpoint(a.clone()))?;
            let ib = *index
                .get(b.as_str())
                .ok_or(Error::UnknownEndpoint(b.clone()))?;
            edges.push((ia, ib));
        }
        AttributedGraph::new(ids, attributes, values, edges)?.with_geometry(geometry)
    }
}

#[derive(Deserialize)]
struct JsonGraph {
    vertices: Vec<JsonVertex>,
    #[serde(default)]
    edges: Vec<[serde_json::Value; 2]>,
}

#[derive(Deserialize)]
struct JsonVertex {
    id: serde_json::Value,
    #[serde(default)]
    attrs: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    geometry: Option<serde_json::Value>,
}

fn json_id(value: &serde_json::Value) -> Result<String> {
    match value {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::InvalidArgument(format!(
            "vertex id {other} is not a string or number"
        ))),
    }
}

type VertexTable = (
    Vec<String>,
    Vec<String>,
    Vec<Vec<u64>>,
    Vec<Option<geojson::Geometry>>,
);

fn read_vertex_table<R: Read>(source: R) -> Result<VertexTable> {
    let mut reader = table_reader(source)?;
    let header = reader.headers()?.clone();
    if header.is_empty() || header[0].trim() != "id" {
        return Err(Error::MissingColumn("id".into()));
    }
    let has_wkt = header.len() > 1 && header[header.len() - 1].trim().eq_ignore_ascii_case("wkt");
    let attr_end = if has_wkt {
        header.len() - 1
    } else {
        header.len()
    };
    let attributes: Vec<String> = (1..attr_end)
        .map(|i| header[i].trim().to_string())
        .collect();
    let mut ids = Vec::new();
    let mut values = Vec::new();
    let mut geometry = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                row: row + 1,
                expected: header.len(),
                found: record.len(),
            });
        }
        let id = record[0].trim().to_string();
        let mut vals = Vec::with_capacity(attributes.len());
        for (a, attr) in attributes.iter().enumerate() {
            let cell = record[a + 1].trim();
            let parsed = cell
                .parse::<u64>()
                .map_err(|_| Error::InvalidAttributeValue {
                    vertex: id.clone(),
                    attribute: attr.clone(),
                    value: cell.to_string(),
                })?;
            vals.push(parsed);
        }
        let geom = if has_wkt {
            let text = record[header.len() - 1].trim();
            if text.is_empty() {
                None
            } else {
                Some(parse_wkt(&id, text)?)
            }
        } else {
            None
        };
        ids.push(id);
        values.push(vals);
        geometry.push(geom);
    }
    Ok((ids, attributes, values, geometry))
}

fn parse_wkt(vertex: &str, text: &str) -> Result<geojson::Geometry> {
    let geom = GeoGeometry::<f64>::try_from_wkt_str(text).map_err(|e| Error::InvalidGeometry {
        vertex: vertex.to_string(),
        message: e.to_string(),
    })?;
    Ok(geojson::Geometry::new(geojson::Value::from(&geom)))
}

/// Sniffs the delimiter from the header line: tab if present, comma otherwise.
fn table_reader<R: Read>(mut source: R) -> Result<csv::Reader<std::io::Cursor<Vec<u8>>>> {
    let mut buf = Vec::new();
    source
        .read_to_end(&mut buf)
        .map_err(|e| Error::io("<table>", e))?;
    let first_line = buf.split(|&b| b == b'\n').next().unwrap_or(&[]);
    let delimiter = if first_line.contains(&b'\t') {
        b'\t'
    } else {
        b','
    };
    Ok(csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .from_reader(std::io::Cursor::new(buf)))
}

fn column(header: &csv::StringRecord, name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::MissingColumn(name.to_string()))
}

/// The vertices within `radius` hops of `center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub center: usize,
    pub radius: usize,
    pub members: VertexSet,
}

/// Breadth-first ball of radius `d` around `v`.
pub fn neighborhood(g: &AttributedGraph, v: usize, d: usize) -> Result<Neighborhood> {
    if v >= g.num_vertices() {
        return Err(Error::InvalidVertex(v));
    }
    let mut members = VertexSet::empty(g.num_vertices());
    members.insert(v);
    let mut frontier = VecDeque::from([(v, 0usize)]);
    while let Some((u, dist)) = frontier.pop_front() {
        if dist == d {
            continue;
        }
        for &w in g.neighbors(u) {
            if !members.contains(w) {
                members.insert(w);
                frontier.push_back((w, dist + 1));
            }
        }
    }
    Ok(Neighborhood {
        center: v,
        radius: d,
        members,
    })
}

/// The description vocabulary `{N_d(v) : v ∈ V, 0 ≤ d ≤ max_radius}`.
#[derive(Debug, Clone)]
pub struct NeighborhoodSet {
    /// Per-center balls; a ball equal to the same center's smaller ball is dropped.
    pub neighborhoods: Vec<Neighborhood>,
    /// `|V| · (max_radius + 1)`, the vocabulary size charged by description costs.
    pub vocabulary_size: usize,
    pub max_radius: usize,
}

/// All balls up to `max_radius`, center-major then by radius.
pub fn all_neighborhoods(g: &AttributedGraph, max_radius: usize) -> NeighborhoodSet {
    let n = g.num_vertices();
    let mut neighborhoods = Vec::with_capacity(n * (max_radius + 1));
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        // single BFS per center, sliced into balls by distance
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[v] = 0;
        queue.clear();
        queue.push_back(v);
        let mut layers: Vec<Vec<usize>> = vec![vec![v]];
        while let Some(u) = queue.pop_front() {
            if dist[u] == max_radius {
                continue;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    if layers.len() <= dist[w] {
                        layers.push(Vec::new());
                    }
                    layers[dist[w]].push(w);
                    queue.push_back(w);
                }
            }
        }
        let mut members = VertexSet::empty(n);
        for (d, layer) in layers.iter().enumerate() {
            layer.iter().for_each(|&u| members.insert(u));
            neighborhoods.push(Neighborhood {
                center: v,
                radius: d,
                members: members.clone(),
            });
        }
    }
    NeighborhoodSet {
        neighborhoods,
        vocabulary_size: n * (max_radius + 1),
        max_radius,
    }
}
