//! Rendering of mined patterns as GeoJSON features or Graphviz graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::AttributedGraph;
use crate::record::PatternRecord;
use geojson::{Feature, FeatureCollection, JsonObject};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Covered,
    Center,
    CenterNotInPattern,
    CenterException,
    Exception,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Covered => "covered",
            Role::Center => "center",
            Role::CenterNotInPattern => "center-not-in-pattern",
            Role::CenterException => "center-exception",
            Role::Exception => "exception",
        }
    }

    pub fn color(self) -> &'static str {
        match self {
            Role::Covered => "green",
            Role::Center => "blue",
            Role::CenterNotInPattern => "purple",
            Role::CenterException => "orange",
            Role::Exception => "red",
        }
    }
}

fn index(g: &AttributedGraph, id: &str) -> Result<usize> {
    g.vertex_index(id)
        .ok_or_else(|| Error::InvalidArgument(format!("pattern refers to unknown vertex `{id}`")))
}

/// Role of every vertex the pattern touches, by vertex index.
pub fn roles(record: &PatternRecord, g: &AttributedGraph) -> Result<BTreeMap<usize, Role>> {
    let u: BTreeSet<usize> = record
        .u
        .iter()
        .map(|id| index(g, id))
        .collect::<Result<_>>()?;
    let exc: BTreeSet<usize> = record
        .best_description
        .exceptions
        .iter()
        .map(|id| index(g, id))
        .collect::<Result<_>>()?;
    let centers: BTreeSet<usize> = record
        .best_description
        .centers
        .iter()
        .map(|n| index(g, &n.center))
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for &v in u.iter().chain(&exc).chain(&centers) {
        let role = match (centers.contains(&v), u.contains(&v), exc.contains(&v)) {
            (true, true, _) => Role::Center,
            (true, false, true) => Role::CenterException,
            (true, false, false) => Role::CenterNotInPattern,
            (false, _, true) => Role::Exception,
            (false, _, false) => Role::Covered,
        };
        out.insert(v, role);
    }
    Ok(out)
}

/// One feature per (pattern, touched vertex), with properties `pattern` (0-based rank), `id`
/// and `role`.
pub fn to_geojson(records: &[PatternRecord], g: &AttributedGraph) -> Result<FeatureCollection> {
    let mut features = Vec::new();
    for (rank, record) in records.iter().enumerate() {
        for (v, role) in roles(record, g)? {
            let geometry = g
                .geometry(v)
                .ok_or_else(|| Error::MissingGeometry(g.vertex_id(v).to_string()))?;
            let mut props = JsonObject::new();
            props.insert("pattern".into(), rank.into());
            props.insert("id".into(), g.vertex_id(v).into());
            props.insert("role".into(), role.as_str().into());
            features.push(Feature {
                bbox: None,
                geometry: Some(geometry.clone()),
                id: None,
                properties: Some(props),
                foreign_members: None,
            });
        }
    }
    Ok(FeatureCollection {
        bbox: None,
        features,
        foreign_members: None,
    })
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One undirected graph per pattern holding the whole input graph; touched vertices are
/// filled with their role color.
pub fn to_dot(records: &[PatternRecord], g: &AttributedGraph) -> Result<String> {
    let mut out = String::new();
    for (rank, record) in records.iter().enumerate() {
        let roles = roles(record, g)?;
        let _ = writeln!(out, "graph pattern_{rank} {{");
        let _ = writeln!(
            out,
            "  label={};",
            quoted(&format!("#{rank} si={:.6}", record.si))
        );
        let _ = writeln!(out, "  node [style=filled, fillcolor=white];");
        for v in 0..g.num_vertices() {
            match roles.get(&v) {
                Some(role) => {
                    let _ = writeln!(
                        out,
                        "  {} [fillcolor={}, role={}];",
                        quoted(g.vertex_id(v)),
                        role.color(),
                        quoted(role.as_str())
                    );
                }
                None => {
                    let _ = writeln!(out, "  {};", quoted(g.vertex_id(v)));
                }
            }
        }
        for &(a, b) in g.edges() {
            let _ = writeln!(
                out,
                "  {} -- {};",
                quoted(g.vertex_id(a)),
                quoted(g.vertex_id(b))
            );
        }
        out.push_str("}\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::{DescriptionRecord, NeighborhoodRecord};

    fn path() -> AttributedGraph {
        AttributedGraph::new(
            (0..5).map(|i| format!("v{i}")).collect(),
            vec!["a".into()],
            vec![vec![1]; 5],
            [(0, 1), (1, 2), (2, 3), (3, 4)],
        )
        .unwrap()
    }

    fn record(u: &[&str], centers: &[&str], exc: &[&str]) -> PatternRecord {
        let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        PatternRecord {
            u: names(u),
            s: Vec::new(),
            neighborhoods_covering: Vec::new(),
            best_description: DescriptionRecord {
                centers: centers
                    .iter()
                    .map(|c| NeighborhoodRecord {
                        center: c.to_string(),
                        d: 1,
                    })
                    .collect(),
                exceptions: names(exc),
            },
            ic: 1.0,
            dl: 2.0,
            si: 0.5,
        }
    }

    fn counts(r: &PatternRecord) -> BTreeMap<Role, usize> {
        let mut out = BTreeMap::new();
        for role in roles(r, &path()).unwrap().into_values() {
            *out.entry(role).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn role_assignment() {
        let exact = counts(&record(&["v1", "v2"], &["v1", "v2"], &[]));
        assert_eq!(exact, BTreeMap::from([(Role::Center, 2)]));
        let r = record(&["v1", "v2", "v3"], &["v1", "v3"], &["v4"]);
        assert_eq!(
            counts(&r),
            BTreeMap::from([(Role::Covered, 1), (Role::Center, 2), (Role::Exception, 1)])
        );
        let outside = roles(&record(&["v2"], &["v0", "v4"], &["v4"]), &path()).unwrap();
        assert_eq!(outside[&0], Role::CenterNotInPattern);
        assert_eq!(outside[&4], Role::CenterException);
    }

    #[test]
    fn geojson_needs_geometry() {
        assert!(matches!(
            to_geojson(&[record(&["v1"], &[], &[])], &path()),
            Err(Error::MissingGeometry(_))
        ));
        let empty = to_geojson(&[], &path()).unwrap();
        assert_eq!(
            empty.to_string(),
            r#"{"type":"FeatureCollection","features":[]}"#
        );
    }

    #[test]
    fn dot_colors() {
        let dot = to_dot(&[record(&["v1", "v2"], &["v1"], &["v3"])], &path()).unwrap();
        assert!(dot.starts_with("graph pattern_0 {"));
        assert!(dot.contains(r#""v1" [fillcolor=blue, role="center"];"#));
        assert!(dot.contains(r#""v3" [fillcolor=red, role="exception"];"#));
        assert!(dot.contains(r#""v3" -- "v4";"#));
    }
}
