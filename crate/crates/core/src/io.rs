//! JSON formats.
//!
//! Graph: `{"n": 4, "edges": [[0,1],...], "loops": [2], "labels": {"0": "a"}}`;
//! a loop may also be written as an edge `[v,v]`.
//!
//! Embedding: `{"rotations": {"0": [1,3], ...}, "signs": [[u,v,-1], ...]}`;
//! without `signs` the embedding is orientable.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::surface::embedding::Embedding;

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    loops: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<Vertex, String>>,
}

impl GraphJson {
    fn into_graph(self) -> Result<Graph> {
        let mut b = Graph::builder(self.n);
        for [u, v] in self.edges {
            b.add_edge(u, v)?;
        }
        for v in self.loops {
            b.add_loop(v)?;
        }
        for (v, label) in self.labels.unwrap_or_default() {
            if v >= self.n {
                return Err(Error::MalformedGraph(format!("label for vertex {v} out of range")));
            }
            b.set_label(v, label);
        }
        Ok(b.build())
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            n: self.vertex_count(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
            loops: self.looped_vertices().collect(),
            labels: self.labels().map(|l| l.iter().cloned().enumerate().collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GraphJson::deserialize(d)?.into_graph().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingJson {
    rotations: BTreeMap<Vertex, Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    signs: Vec<(Vertex, Vertex, i8)>,
}

impl Serialize for Embedding {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EmbeddingJson {
            rotations: self.rotations().iter().cloned().enumerate().collect(),
            signs: self.negative_edges().map(|(u, v)| (u, v, -1)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Embedding {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = EmbeddingJson::deserialize(d)?;
        let n = json.rotations.keys().next_back().map_or(0, |&v| v + 1);
        let mut rotations = vec![Vec::new(); n];
        for (v, rot) in json.rotations {
            rotations[v] = rot;
        }
        let mut negative = Vec::new();
        for (u, v, s) in json.signs {
            match s {
                1 => {}
                -1 => negative.push((u, v)),
                other => return Err(D::Error::custom(format!("edge sign must be +1 or -1, got {other}"))),
            }
        }
        Ok(Embedding::new(rotations, negative))
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize + ?Sized>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    read_json(path)
}

/// Reads an embedding and pads its rotation list to `g`'s vertex count.
pub fn read_embedding(path: impl AsRef<Path>, g: &Graph) -> Result<Embedding> {
    let e: Embedding = read_json(path)?;
    Ok(pad(e, g.vertex_count()))
}

/// Graphviz rendering; `highlight` vertices are drawn as boxes.
pub fn to_dot(g: &Graph, highlight: &[Vertex]) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let shape = if highlight.contains(&v) { ", shape=box" } else { "" };
        out.push_str(&format!("  {v} [label=\"{}\"{shape}];\n", g.label(v).replace('"', "\\\"")));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    for v in g.looped_vertices() {
        out.push_str(&format!("  {v} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}

pub(crate) fn pad(e: Embedding, n: usize) -> Embedding {
    if e.rotations().len() >= n {
        return e;
    }
    let mut rotations = e.rotations().to_vec();
    rotations.resize(n, Vec::new());
    Embedding::new(rotations, e.negative_edges().collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::surface::embedding::trace_faces;

    #[test]
    fn graph_round_trip() {
        let (oct, _) = generators::reflexive_octahedron();
        let text = serde_json::to_string(&oct).unwrap();
        let back: Graph = serde_json::from_str(&text).unwrap();
        assert_eq!(back.edges().collect::<Vec<_>>(), oct.edges().collect::<Vec<_>>());
        assert!(back.is_reflexive());
    }

    #[test]
    fn loops_as_edges_and_labels() {
        let g: Graph = serde_json::from_str(r#"{"n": 3, "edges": [[0,1],[2,2]], "labels": {"1": "b"}}"#).unwrap();
        assert!(g.has_loop(2));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.label(1), "b");
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        assert!(serde_json::from_str::<Graph>(r#"{"n": 2, "edges": [[0,5]]}"#).is_err());
        assert!(serde_json::from_str::<Graph>(r#"{"edges": []}"#).is_err());
    }

    #[test]
    fn embedding_round_trip_keeps_faces() {
        let (w5, e) = generators::projective_wheel(5);
        let text = serde_json::to_string(&e).unwrap();
        let back: Embedding = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
        assert_eq!(trace_faces(&w5, &back).unwrap().euler_characteristic, 1);
        assert!(serde_json::from_str::<Embedding>(r#"{"rotations": {"0": [1]}, "signs": [[0,1,2]]}"#).is_err());
    }

    #[test]
    fn dot_lists_every_edge_once() {
        let (oct, _) = generators::reflexive_octahedron();
        let dot = to_dot(&oct, &[0]);
        assert_eq!(dot.matches(" -- ").count(), oct.edge_count() + 6);
        assert!(dot.contains("0 [label=\"0\", shape=box]"));
    }
}
