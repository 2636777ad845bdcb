//! Graph description files.
//!
//! Text form, one directive per line, `#` starts a comment:
//!
//! ```text
//! v 6        # vertex count
//! e 0 1      # undirected edge
//! l 0        # self-loop
//! s 4        # sink vertex
//! ```
//!
//! The JSON mirror is `{"vertices": 6, "edges": [[0, 1]], "loops": [0], "sinks": [4]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{InternalGraph, SymmetricDigraph, VertexId};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub loops: Vec<usize>,
    #[serde(default)]
    pub sinks: Vec<usize>,
}

impl GraphSpec {
    pub fn parse(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }

    pub fn parse_json(input: &str) -> Result<Self> {
        serde_json::from_str(input).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn parse_text(input: &str) -> Result<Self> {
        let mut spec = GraphSpec::default();
        let mut count: Option<usize> = None;
        for (i, raw) in input.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = content.split_whitespace().collect();
            let Some((&tag, args)) = fields.split_first() else {
                continue;
            };
            let err = |message: String| Error::Parse { line, message };
            let numbers = args
                .iter()
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| err(format!("expected a vertex index, found `{s}`")))
                })
                .collect::<Result<Vec<usize>>>()?;
            let arity = match tag {
                "v" | "l" | "s" => 1,
                "e" => 2,
                other => return Err(err(format!("unknown directive `{other}`"))),
            };
            if numbers.len() != arity {
                return Err(err(format!(
                    "`{tag}` takes {arity} argument(s), found {}",
                    numbers.len()
                )));
            }
            match tag {
                "v" => {
                    if count.is_some() {
                        return Err(err("vertex count given twice".into()));
                    }
                    count = Some(numbers[0]);
                }
                "e" => spec.edges.push((numbers[0], numbers[1])),
                "l" => spec.loops.push(numbers[0]),
                "s" => spec.sinks.push(numbers[0]),
                _ => unreachable!(),
            }
        }
        spec.vertices = count.ok_or(Error::Parse {
            line: 0,
            message: "missing `v <count>` line".into(),
        })?;
        Ok(spec)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("v {}\n", self.vertices);
        for (u, w) in &self.edges {
            out.push_str(&format!("e {u} {w}\n"));
        }
        for u in &self.loops {
            out.push_str(&format!("l {u}\n"));
        }
        for u in &self.sinks {
            out.push_str(&format!("s {u}\n"));
        }
        out
    }

    pub fn build(&self) -> Result<SymmetricDigraph> {
        SymmetricDigraph::build(self.vertices, &self.edges, &self.loops)
    }

    pub fn sink_ids(&self) -> Vec<VertexId> {
        self.sinks.iter().map(|&s| VertexId(s)).collect()
    }

    /// Builds `G` and removes the sinks.
    pub fn internal(&self) -> Result<InternalGraph> {
        InternalGraph::remove_sinks(&self.build()?, &self.sink_ids())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "\
# square with two loops, sinks hanging off vertices 1 and 3
v 6
e 0 1
e 1 2
e 2 3
e 3 0
e 1 4
e 3 5
l 0
l 2
s 4
s 5
";

    #[test]
    fn parses_text() {
        let spec = GraphSpec::parse(SQUARE).unwrap();
        assert_eq!(spec.vertices, 6);
        assert_eq!(spec.edges.len(), 6);
        assert_eq!(spec.loops, vec![0, 2]);
        assert_eq!(spec.sinks, vec![4, 5]);
        let g0 = spec.internal().unwrap();
        assert_eq!(g0.arc_count(), 10);
    }

    #[test]
    fn text_and_json_agree() {
        let spec = GraphSpec::parse(SQUARE).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(GraphSpec::parse(&json).unwrap(), spec);
        assert_eq!(GraphSpec::parse(&spec.to_text()).unwrap(), spec);
    }

    #[test]
    fn reports_line_numbers() {
        let err = GraphSpec::parse("v 3\ne 0 1\ne 1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = GraphSpec::parse("v 3\nq 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = GraphSpec::parse("e 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 0, .. }));
    }
}
