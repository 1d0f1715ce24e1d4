//! Self-contained instances (graph + squares + metadata) and their JSON form.
//!
//! The instance format is a stable contract:
//!
//! ```json
//! {
//!   "k": 2,
//!   "vertices": ["v"],
//!   "edges": [{"id": "f", "range": "v", "source": "v", "colour": 1}],
//!   "squares": [{"i": 1, "j": 2, "ci_first": ["f", "g"], "cj_first": ["g", "f"]}],
//!   "metadata": {"name": "torus", "provenance": "handmade", "seed": null}
//! }
//! ```
//!
//! Colours are one-based. A square entry means ci_first[0].ci_first[1] ~
//! cj_first[0].cj_first[1]. Loading re-validates every structural invariant:
//! duplicate ids, unknown references, colour ranges, and the square corner
//! conditions are all rejected with the offending field path.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::category::KGraph;
use crate::degree::Colour;
use crate::error::{Error, Result};
use crate::graph::ColouredGraph;
use crate::squares::{Square, SquareCollection};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    pub provenance: String,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub graph: ColouredGraph,
    pub squares: Vec<Square>,
    pub metadata: Metadata,
}

impl Instance {
    pub fn new(name: impl Into<String>, graph: ColouredGraph, squares: Vec<Square>) -> Self {
        Instance {
            name: name.into(),
            graph,
            squares,
            metadata: Metadata::default(),
        }
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>, seed: Option<u64>) -> Self {
        self.metadata.provenance = provenance.into();
        self.metadata.seed = seed;
        self
    }

    pub fn collection(&self) -> Result<SquareCollection<'_>> {
        SquareCollection::new(&self.graph, self.squares.clone())
    }

    /// Validates completeness and associativity and returns the k-graph view.
    pub fn kgraph(&self) -> Result<KGraph<'_>> {
        KGraph::new(&self.graph, self.squares.clone())
    }

    pub fn to_json(&self) -> Value {
        let g = &self.graph;
        let vertices: Vec<Value> = g
            .vertices()
            .map(|v| Value::String(g.vertex_id(v).to_string()))
            .collect();
        let edges: Vec<Value> = g
            .edges()
            .map(|e| {
                json!({
                    "id": g.edge_id(e),
                    "range": g.vertex_id(g.range(e)),
                    "source": g.vertex_id(g.source(e)),
                    "colour": g.colour(e).one_based(),
                })
            })
            .collect();
        let squares: Vec<Value> = self
            .squares
            .iter()
            .map(|sq| {
                json!({
                    "i": sq.i.one_based(),
                    "j": sq.j.one_based(),
                    "ci_first": [g.edge_id(sq.a), g.edge_id(sq.b)],
                    "cj_first": [g.edge_id(sq.b2), g.edge_id(sq.a2)],
                })
            })
            .collect();
        json!({
            "k": g.k(),
            "vertices": vertices,
            "edges": edges,
            "squares": squares,
            "metadata": {
                "name": self.name,
                "provenance": self.metadata.provenance,
                "seed": self.metadata.seed,
            },
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("instance JSON is serializable")
    }

    pub fn from_json(value: &Value) -> Result<Instance> {
        let obj = value
            .as_object()
            .ok_or_else(|| schema("$", "expected a JSON object"))?;
        let k = require(obj, "k")?
            .as_u64()
            .filter(|&k| k >= 1)
            .ok_or_else(|| schema("k", "expected a positive integer"))? as usize;

        let mut builder = ColouredGraph::builder(k);
        let vertices = require(obj, "vertices")?
            .as_array()
            .ok_or_else(|| schema("vertices", "expected an array of strings"))?;
        for (i, v) in vertices.iter().enumerate() {
            let id = v
                .as_str()
                .ok_or_else(|| schema(&format!("vertices[{i}]"), "expected a string"))?;
            builder = builder.vertex(id);
        }

        let edges = require(obj, "edges")?
            .as_array()
            .ok_or_else(|| schema("edges", "expected an array of edge objects"))?;
        for (i, e) in edges.iter().enumerate() {
            let at = |field: &str| format!("edges[{i}].{field}");
            let eo = e
                .as_object()
                .ok_or_else(|| schema(&format!("edges[{i}]"), "expected an object"))?;
            let id = str_field(eo, &at("id"), "id")?;
            let range = str_field(eo, &at("range"), "range")?;
            let source = str_field(eo, &at("source"), "source")?;
            let colour = require_at(eo, &at("colour"), "colour")?
                .as_u64()
                .ok_or_else(|| schema(&at("colour"), "expected an integer"))?
                as usize;
            builder = builder.edge(id, range, source, colour);
        }
        let graph = builder.build().map_err(|e| match e {
            Error::DuplicateId { .. }
            | Error::UnknownVertex { .. }
            | Error::ColourOutOfRange { .. } => schema("edges/vertices", &e.to_string()),
            other => other,
        })?;

        let mut squares = Vec::new();
        if let Some(sqs) = obj.get("squares") {
            let sqs = sqs
                .as_array()
                .ok_or_else(|| schema("squares", "expected an array"))?;
            for (i, sq) in sqs.iter().enumerate() {
                let at = format!("squares[{i}]");
                squares.push(parse_square(&graph, sq, &at)?);
            }
        }

        let mut name = String::new();
        let mut metadata = Metadata::default();
        if let Some(meta) = obj.get("metadata").and_then(Value::as_object) {
            if let Some(n) = meta.get("name").and_then(Value::as_str) {
                name = n.to_string();
            }
            if let Some(p) = meta.get("provenance").and_then(Value::as_str) {
                metadata.provenance = p.to_string();
            }
            metadata.seed = meta.get("seed").and_then(Value::as_u64);
        }

        Ok(Instance {
            name,
            graph,
            squares,
            metadata,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Instance> {
        let value: Value = serde_json::from_str(text)?;
        Self::from_json(&value)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Instance> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }
}

fn schema(path: &str, reason: &str) -> Error {
    Error::Schema {
        path: path.to_string(),
        reason: reason.to_string(),
    }
}

fn require<'v>(obj: &'v Map<String, Value>, field: &str) -> Result<&'v Value> {
    obj.get(field)
        .ok_or_else(|| schema(field, "missing required field"))
}

fn require_at<'v>(obj: &'v Map<String, Value>, at: &str, field: &str) -> Result<&'v Value> {
    obj.get(field).ok_or_else(|| schema(at, "missing required field"))
}

fn str_field(obj: &Map<String, Value>, at: &str, field: &str) -> Result<String> {
    Ok(require_at(obj, at, field)?
        .as_str()
        .ok_or_else(|| schema(at, "expected a string"))?
        .to_string())
}

fn parse_square(graph: &ColouredGraph, value: &Value, at: &str) -> Result<Square> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema(at, "expected an object"))?;
    let colour = |field: &str| -> Result<Colour> {
        let raw = require_at(obj, &format!("{at}.{field}"), field)?
            .as_u64()
            .ok_or_else(|| schema(&format!("{at}.{field}"), "expected an integer"))?
            as usize;
        Colour::from_one_based(raw, graph.k()).ok_or_else(|| {
            schema(
                &format!("{at}.{field}"),
                &format!("colour {raw} outside 1..={}", graph.k()),
            )
        })
    };
    let i = colour("i")?;
    let j = colour("j")?;
    let pair = |field: &str| -> Result<(String, String)> {
        let arr = require_at(obj, &format!("{at}.{field}"), field)?
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema(&format!("{at}.{field}"), "expected a 2-element array"))?;
        let get = |ix: usize| {
            arr[ix]
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| schema(&format!("{at}.{field}[{ix}]"), "expected an edge id"))
        };
        Ok((get(0)?, get(1)?))
    };
    let (a, b) = pair("ci_first")?;
    let (b2, a2) = pair("cj_first")?;
    let edge = |id: &str| {
        graph
            .edge(id)
            .map_err(|_| schema(at, &format!("unknown edge {id:?}")))
    };
    Square::new(graph, i, j, edge(&a)?, edge(&b)?, edge(&b2)?, edge(&a2)?)
        .map_err(|e| schema(at, &e.to_string()))
}
