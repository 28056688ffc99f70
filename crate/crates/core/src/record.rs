//! JSON-lines pattern records, keyed by vertex and attribute names.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AttributedGraph;
use crate::interestingness::ScoredPattern;
use crate::pattern_enum::{ErModel, Side};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub attr: String,
    pub side: Side,
    #[serde(with = "crate::numfmt")]
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodRecord {
    pub center: String,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptionRecord {
    pub centers: Vec<NeighborhoodRecord>,
    pub exceptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternRecord {
    #[serde(rename = "U")]
    pub u: Vec<String>,
    #[serde(rename = "S")]
    pub s: Vec<IntervalRecord>,
    pub neighborhoods_covering: Vec<NeighborhoodRecord>,
    pub best_description: DescriptionRecord,
    #[serde(with = "crate::numfmt")]
    pub ic: f64,
    #[serde(with = "crate::numfmt")]
    pub dl: f64,
    #[serde(with = "crate::numfmt")]
    pub si: f64,
}

impl PatternRecord {
    /// Neighborhoods are named by their first `(center, radius)` label.
    pub fn new(sp: &ScoredPattern, er: &ErModel, g: &AttributedGraph) -> Self {
        let name = |e: usize| {
            let (c, d) = er.neighborhoods[e].label();
            NeighborhoodRecord {
                center: g.vertex_id(c).to_string(),
                d,
            }
        };
        let ids = |vs: Vec<usize>| vs.into_iter().map(|v| g.vertex_id(v).to_string()).collect();
        PatternRecord {
            u: ids(sp.pattern.vertices.to_vec()),
            s: sp
                .pattern
                .intervals
                .iter()
                .map(|iv| IntervalRecord {
                    attr: g.attributes()[iv.attr].clone(),
                    side: iv.side,
                    bound: iv.bound,
                })
                .collect(),
            neighborhoods_covering: sp.pattern.covering.iter().map(|&e| name(e)).collect(),
            best_description: DescriptionRecord {
                centers: sp
                    .best_description
                    .entities
                    .iter()
                    .map(|&e| name(e))
                    .collect(),
                exceptions: ids(sp.best_description.exceptions.to_vec()),
            },
            ic: sp.ic,
            dl: sp.dl,
            si: sp.si,
        }
    }
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[PatternRecord]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Blank lines are skipped.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<PatternRecord>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| Error::io("<pattern stream>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PatternRecord {
        PatternRecord {
            u: vec!["a".into(), "b".into()],
            s: vec![IntervalRecord {
                attr: "x".into(),
                side: Side::Lower,
                bound: 0.1,
            }],
            neighborhoods_covering: vec![NeighborhoodRecord {
                center: "a".into(),
                d: 1,
            }],
            best_description: DescriptionRecord {
                centers: vec![NeighborhoodRecord {
                    center: "a".into(),
                    d: 1,
                }],
                exceptions: vec!["c".into()],
            },
            ic: 6.643856189774724,
            dl: 13.0,
            si: 6.643856189774724 / 13.0,
        }
    }

    #[test]
    fn schema_and_round_trip() {
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &[sample(), sample()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with(
            r#"{"U":["a","b"],"S":[{"attr":"x","side":"lower","bound":1.0000000000000001e-1}]"#
        ));
        assert!(first.contains(
            r#""best_description":{"centers":[{"center":"a","d":1}],"exceptions":["c"]}"#
        ));
        let back = read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, vec![sample(), sample()]);
        assert_eq!(back[0].si.to_bits(), (back[0].ic / back[0].dl).to_bits());
    }
}
