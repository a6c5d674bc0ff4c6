//! JSON documents for networks and soliton data.
//!
//! Rationals are written as strings such as `"3/7"`; maps use sorted keys so
//! that serialized documents are byte-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{build_graph, GraphSpec, PlanarBipartiteGraph};
use crate::linalg::Matrix;
use crate::positroid::graph_to_permutation;
use crate::rational::{format, parse, Rational};
use crate::weights::{edge_weights_from_face_weights, face_weights_from_edge_weights, Network};

/// Version tag of [`NetworkDocument`].
pub const NETWORK_VERSION: &str = "kast-network/1";
/// Version tag of [`SolitonDocument`].
pub const SOLITON_VERSION: &str = "kast-soliton/1";

/// Optional descriptive data of a network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkMetadata {
    pub k: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// A graph with weights and an optional Kasteleyn signature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub version: String,
    pub graph: GraphSpec,
    /// Edge id to weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_weights: Option<BTreeMap<String, String>>,
    /// Finite face `F1, F2, …` to weight, faces numbered as in the face
    /// complex of the graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_weights: Option<BTreeMap<String, String>>,
    /// Edge id to `±1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<BTreeMap<String, i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<NetworkMetadata>,
}

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

impl NetworkDocument {
    /// Document with edge weights, an optional signature and metadata.
    pub fn from_network(net: &Network, signature: Option<&[i8]>, source: Option<&str>) -> Self {
        let g = &net.graph;
        let edge_weights = g
            .edges()
            .iter()
            .zip(&net.weights)
            .map(|(e, t)| (e.id.clone(), format(t)))
            .collect();
        let signature = signature.map(|s| g.edges().iter().zip(s).map(|(e, &x)| (e.id.clone(), x)).collect());
        let permutation = graph_to_permutation(g).ok().map(|p| (1..=g.n()).map(|i| p.apply(i)).collect());
        NetworkDocument {
            version: NETWORK_VERSION.into(),
            graph: g.to_spec(),
            edge_weights: Some(edge_weights),
            face_weights: None,
            signature,
            metadata: Some(NetworkMetadata {
                k: g.k(),
                n: g.n(),
                permutation,
                source: source.map(str::to_string),
            }),
        }
    }

    /// Parses and checks the version tag.
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let doc: NetworkDocument = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
        if doc.version != NETWORK_VERSION {
            return Err(doc_err(format!("unsupported version `{}`", doc.version)));
        }
        Ok(doc)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn graph(&self) -> Result<PlanarBipartiteGraph, Error> {
        Ok(build_graph(&self.graph)?)
    }

    /// Edge weights, from the edge map or else from the face map. When both
    /// are present they must induce the same face weights.
    pub fn weights(&self, g: &PlanarBipartiteGraph) -> Result<Vec<Rational>, Error> {
        let from_faces = match &self.face_weights {
            Some(map) => {
                let count = g.faces().finite_count();
                let mut f = Vec::with_capacity(count);
                for i in 1..=count {
                    let text = map.get(&format!("F{i}")).ok_or_else(|| doc_err(format!("face weight F{i} missing")))?;
                    f.push(parse(text).map_err(|e| doc_err(e.to_string()))?);
                }
                if let Some(extra) = map.keys().find(|key| !(1..=count).any(|i| **key == format!("F{i}"))) {
                    return Err(doc_err(format!("unknown face `{extra}`")));
                }
                Some(f)
            }
            None => None,
        };
        match (&self.edge_weights, from_faces) {
            (Some(map), faces) => {
                if let Some(extra) = map.keys().find(|id| g.edge_index(id).is_none()) {
                    return Err(doc_err(format!("unknown edge `{extra}`")));
                }
                let t = g
                    .edges()
                    .iter()
                    .map(|e| {
                        let text = map.get(&e.id).ok_or_else(|| doc_err(format!("weight of `{}` missing", e.id)))?;
                        parse(text).map_err(|err| doc_err(err.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(f) = faces {
                    if face_weights_from_edge_weights(g, &t) != f {
                        return Err(doc_err("edge and face weights disagree"));
                    }
                }
                Ok(t)
            }
            (None, Some(f)) => Ok(edge_weights_from_face_weights(g, &f)?),
            (None, None) => Err(doc_err("document carries no weights")),
        }
    }

    pub fn network(&self) -> Result<Network, Error> {
        let g = self.graph()?;
        let t = self.weights(&g)?;
        Ok(Network::new(g, t)?)
    }

    /// The stored signature in edge order, if any.
    pub fn signature_for(&self, g: &PlanarBipartiteGraph) -> Result<Option<Vec<i8>>, Error> {
        let Some(map) = &self.signature else { return Ok(None) };
        if let Some(extra) = map.keys().find(|id| g.edge_index(id).is_none()) {
            return Err(doc_err(format!("unknown edge `{extra}` in signature")));
        }
        g.edges()
            .iter()
            .map(|e| match map.get(&e.id) {
                Some(&s) if s == 1 || s == -1 => Ok(s),
                Some(s) => Err(doc_err(format!("signature of `{}` is {s}, expected ±1", e.id))),
                None => Err(doc_err(format!("signature of `{}` missing", e.id))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

/// Uniform grid along one time axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// The `steps` sample points, both ends included when `steps > 1`.
    pub fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.min],
            s => (0..s).map(|i| self.min + (self.max - self.min) * i as f64 / (s - 1) as f64).collect(),
        }
    }
}

/// Sampling grid of a field evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: Axis,
    pub y: Axis,
    pub t: Axis,
}

impl GridSpec {
    /// Grid points in `t`, `y`, `x` nesting order (`x` fastest).
    pub fn points(&self) -> Vec<[f64; 3]> {
        let (xs, ys, ts) = (self.x.points(), self.y.points(), self.t.points());
        let mut out = Vec::with_capacity(xs.len() * ys.len() * ts.len());
        for &t in &ts {
            for &y in &ys {
                for &x in &xs {
                    out.push([x, y, t]);
                }
            }
        }
        out
    }
}

/// Numerical tolerances carried by a soliton document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub residual: f64,
    pub degeneracy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: crate::kp::RESIDUAL_TOL,
            degeneracy: crate::kp::DEGENERACY_TOL,
        }
    }
}

/// Phases with either a network or an inline representative matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonDocument {
    pub version: String,
    pub phases: Vec<f64>,
    /// Path of a network document, relative to the soliton document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkDocument>,
    /// Inline `k × n` representative matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    /// Times at which single-time quantities are evaluated, `(x, y, t, …)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    /// Fixed values of `x_4, x_5, …` during grid evaluation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub higher_times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// Normalization time; scanned for when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization_time: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl SolitonDocument {
    /// Parses, checks the version tag, the phases and the grid bounds.
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let doc: SolitonDocument = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
        if doc.version != SOLITON_VERSION {
            return Err(doc_err(format!("unsupported version `{}`", doc.version)));
        }
        if doc.phases.iter().any(|p| !p.is_finite()) || doc.phases.windows(2).any(|w| w[0] >= w[1]) {
            return Err(crate::error::KpError::InvalidPhases.into());
        }
        if let Some(g) = &doc.grid {
            if [g.x, g.y, g.t].iter().any(|a| !a.min.is_finite() || !a.max.is_finite()) {
                return Err(doc_err("grid bounds must be finite"));
            }
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    /// The inline matrix, if any.
    pub fn inline_matrix(&self) -> Option<Matrix<f64>> {
        self.matrix.as_ref().map(|rows| Matrix::from_rows(rows.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::weights::face_weights_from_edge_weights;

    #[test]
    fn network_round_trip_is_identity() {
        for entry in corpus::default_corpus() {
            let sigma = corpus::signature_of(&entry.network);
            let doc = NetworkDocument::from_network(&entry.network, Some(&sigma), Some(&entry.name));
            let text = doc.to_json();
            let back = NetworkDocument::from_json(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_json(), text);
            let net = back.network().unwrap();
            assert_eq!(net.weights, entry.network.weights);
            assert_eq!(net.graph.to_spec(), entry.network.graph.to_spec());
            assert_eq!(back.signature_for(&net.graph).unwrap().unwrap(), sigma);
        }
    }

    #[test]
    fn face_weights_determine_face_weights() {
        let net = corpus::example_one_network(corpus::example_one_default_weights());
        let f = face_weights_from_edge_weights(&net.graph, &net.weights);
        let mut doc = NetworkDocument::from_network(&net, None, None);
        let faces: BTreeMap<String, String> = f.iter().enumerate().map(|(i, x)| (format!("F{}", i + 1), format(x))).collect();
        doc.face_weights = Some(faces.clone());
        assert_eq!(doc.network().unwrap().weights, net.weights);
        doc.edge_weights = None;
        let from_faces = doc.network().unwrap();
        assert_eq!(face_weights_from_edge_weights(&from_faces.graph, &from_faces.weights), f);
        let mut bad = faces;
        bad.insert("F1".into(), "9/2".into());
        doc.face_weights = Some(bad);
        doc.edge_weights = NetworkDocument::from_network(&net, None, None).edge_weights;
        assert!(doc.network().is_err());
    }

    #[test]
    fn rejects_unknown_ids_and_versions() {
        let net = corpus::example_one_network(corpus::example_one_default_weights());
        let mut doc = NetworkDocument::from_network(&net, None, None);
        doc.edge_weights.as_mut().unwrap().insert("nope".into(), "1".into());
        assert!(doc.network().is_err());
        let text = NetworkDocument::from_network(&net, None, None).to_json().replace(NETWORK_VERSION, "other/9");
        assert!(NetworkDocument::from_json(&text).is_err());
    }

    #[test]
    fn soliton_document_checks_phases() {
        let doc = SolitonDocument {
            version: SOLITON_VERSION.into(),
            phases: vec![-1.0, 1.0],
            network_path: None,
            network: None,
            matrix: Some(vec![vec![1.0, 1.0]]),
            times: None,
            higher_times: Vec::new(),
            grid: Some(GridSpec {
                x: Axis { min: -1.0, max: 1.0, steps: 3 },
                y: Axis { min: 0.0, max: 0.0, steps: 1 },
                t: Axis { min: 0.0, max: 0.0, steps: 1 },
            }),
            normalization_time: None,
            tolerances: Tolerances::default(),
        };
        let back = SolitonDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.grid.unwrap().points(), vec![[-1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        let bad = doc.to_json().replace("-1.0", "2.0");
        assert!(SolitonDocument::from_json(&bad).is_err());
    }
}
