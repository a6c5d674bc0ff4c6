//! Built-in networks: small reference graphs and seeded random Le-graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::graph::{build_graph, Color, EdgeSpec, GraphSpec, PlanarBipartiteGraph, VertexKind, VertexSpec};
use crate::kasteleyn::{construct_signature, transpose_dual};
use crate::positroid::{le_graph, LeDiagram};
use crate::rational::{int, Rational};
use crate::weights::{apply_move, sample_positive_weights, Move, Network};

fn vertex(id: &str, color: Color, kind: VertexKind, x: i64, y: i64) -> VertexSpec {
    VertexSpec {
        id: id.to_string(),
        color,
        kind,
        position: Some(Point::new(int(x), int(y))),
    }
}

fn edge(id: &str, a: &str, b: &str) -> EdgeSpec {
    EdgeSpec {
        id: id.to_string(),
        ends: [a.to_string(), b.to_string()],
    }
}

/// Two black boundary vertices joined through one internal white vertex.
pub fn trivial_graph() -> PlanarBipartiteGraph {
    let spec = GraphSpec {
        vertices: vec![
            vertex("b1", Color::Black, VertexKind::Boundary, 0, 0),
            vertex("b2", Color::Black, VertexKind::Boundary, 0, 2),
            vertex("w", Color::White, VertexKind::Internal, 1, 1),
        ],
        boundary_order: vec!["b1".into(), "b2".into()],
        edges: vec![edge("e1", "b1", "w"), edge("e2", "b2", "w")],
        rotation: None,
    };
    build_graph(&spec).expect("valid built-in graph")
}

/// The reduced Gr(2,6) graph with internal black `b0`, boundary blacks
/// `b1..b6` on the line `x = 0` and whites `w1, w2, w3`.
///
/// Edge `eij` joins the vertex pair read off its digits: `e01 = b0w1`,
/// `e11 = w1b1`, `e12 = w1b2`, `e20 = w2b0`, `e32 = b3w2`, `e26 = w2b6`,
/// `e34 = w3b4`, `e53 = b5w3`.
pub fn example_one_graph() -> PlanarBipartiteGraph {
    build_graph(&example_one_spec()).expect("valid built-in graph")
}

/// Description of [`example_one_graph`].
pub fn example_one_spec() -> GraphSpec {
    let mut vertices = vec![vertex("b0", Color::Black, VertexKind::Internal, 4, 3)];
    for j in 1..=6 {
        vertices.push(vertex(&format!("b{j}"), Color::Black, VertexKind::Boundary, 0, 3 * j));
    }
    vertices.push(vertex("w1", Color::White, VertexKind::Internal, 2, 6));
    vertices.push(vertex("w2", Color::White, VertexKind::Internal, 6, 9));
    vertices.push(vertex("w3", Color::White, VertexKind::Internal, 2, 12));
    GraphSpec {
        vertices,
        boundary_order: (1..=6).map(|j| format!("b{j}")).collect(),
        edges: vec![
            edge("e01", "b0", "w1"),
            edge("e11", "w1", "b1"),
            edge("e12", "w1", "b2"),
            edge("e20", "w2", "b0"),
            edge("e32", "b3", "w2"),
            edge("e26", "w2", "b6"),
            edge("e34", "w3", "b4"),
            edge("e53", "b5", "w3"),
        ],
        rotation: None,
    }
}

/// One internal white vertex joined to `d ≥ 2` black boundary vertices, the
/// uniform cell `Gr(1, d)`.
pub fn star_graph(d: usize) -> PlanarBipartiteGraph {
    assert!(d >= 2, "a star needs at least two leaves");
    let d = d as i64;
    let mut vertices = vec![VertexSpec {
        id: "w".into(),
        color: Color::White,
        kind: VertexKind::Internal,
        position: Some(Point::new(crate::rational::ratio(d + 1, 2), int(0))),
    }];
    let mut edges = Vec::new();
    for j in 1..=d {
        vertices.push(vertex(&format!("b{j}"), Color::Black, VertexKind::Boundary, j, 1 + j * (d + 1 - j)));
        edges.push(edge(&format!("e{j}"), "w", &format!("b{j}")));
    }
    let spec = GraphSpec {
        vertices,
        boundary_order: (1..=d).map(|j| format!("b{j}")).collect(),
        edges,
        rotation: None,
    };
    build_graph(&spec).expect("valid built-in graph")
}

/// Weights of [`example_one_graph`] with `t = (t_{e01}, t_{e11}, t_{e34},
/// t_{e26})` and unit weight elsewhere.
pub fn example_one_network(t: [Rational; 4]) -> Network {
    let g = example_one_graph();
    let weights = g
        .edges()
        .iter()
        .map(|e| match e.id.as_str() {
            "e01" => t[0].clone(),
            "e11" => t[1].clone(),
            "e34" => t[2].clone(),
            "e26" => t[3].clone(),
            _ => int(1),
        })
        .collect();
    Network::new(g, weights).expect("positive weights")
}

/// The Kasteleyn signature used for [`example_one_graph`] in the reference
/// computations: `−1` on `e20` and `e26`, `+1` elsewhere.
pub fn example_one_signature(g: &PlanarBipartiteGraph) -> Vec<i8> {
    g.edges()
        .iter()
        .map(|e| if e.id == "e20" || e.id == "e26" { -1 } else { 1 })
        .collect()
}

/// Default weights of the Gr(2,6) reference network.
pub fn example_one_default_weights() -> [Rational; 4] {
    [int(2), int(3), int(5), int(7)]
}

/// The Le-diagram filled with 1s whose lexicographically minimal base is
/// `{1, 2, 4}` in Gr(3,6): every 3-subset except `{1, 2, 3}` is a base.
pub fn gr36_diagram() -> LeDiagram {
    LeDiagram {
        k: 3,
        n: 6,
        rows: vec![vec![1, 1, 1], vec![1, 1, 1], vec![1, 1]],
    }
}

/// A named network of the built-in corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub network: Network,
    /// Generating diagram of Le-graph entries.
    pub le_diagram: Option<LeDiagram>,
}

/// Metadata of a corpus entry, as listed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub name: String,
    pub description: String,
    pub k: usize,
    pub n: usize,
    pub edges: usize,
    pub faces: usize,
}

impl CorpusEntry {
    pub fn summary(&self) -> CorpusSummary {
        let g = &self.network.graph;
        CorpusSummary {
            name: self.name.clone(),
            description: self.description.clone(),
            k: g.k(),
            n: g.n(),
            edges: g.edges().len(),
            faces: g.faces().faces.len(),
        }
    }
}

/// The reference networks: the trivial graph, the Gr(3,6) Le-graph missing
/// only `{1,2,3}`, the Gr(2,6) example, its Gr(4,6) transpose dual, the
/// white-boundary network obtained by adding boundary edges, and the
/// Gr(1,3) star.
pub fn reference_networks() -> Vec<CorpusEntry> {
    let ex1 = example_one_network(example_one_default_weights());
    let sigma = example_one_signature(&ex1.graph);
    let dual = transpose_dual(&ex1, &sigma).expect("Kasteleyn signature").network;
    let weak = apply_move(&ex1, &Move::BoundaryAdd).expect("boundary edges can always be added");
    let gr36 = gr36_diagram();
    let gr36_graph = le_graph(&gr36, false).expect("valid diagram");
    vec![
        CorpusEntry {
            name: "trivial".into(),
            description: "two boundary vertices through one white vertex, Gr(1,2)".into(),
            network: Network::new(trivial_graph(), vec![int(1), int(2)]).expect("positive weights"),
            le_diagram: None,
        },
        CorpusEntry {
            name: "gr36".into(),
            description: "Le-graph of the Gr(3,6) cell whose only non-base is {1,2,3}".into(),
            network: Network::new(gr36_graph.clone(), sample_positive_weights(&gr36_graph, 36)).expect("positive weights"),
            le_diagram: Some(gr36),
        },
        CorpusEntry {
            name: "gr26".into(),
            description: "reduced Gr(2,6) network with permutation (6,1,2,5,4,3)".into(),
            network: ex1,
            le_diagram: None,
        },
        CorpusEntry {
            name: "gr46-dual".into(),
            description: "color-swapped Gr(2,6) network, a Gr(4,6) point".into(),
            network: dual,
            le_diagram: None,
        },
        CorpusEntry {
            name: "gr26-weak".into(),
            description: "Gr(2,6) network with a white boundary added".into(),
            network: weak,
            le_diagram: None,
        },
        CorpusEntry {
            name: "star3".into(),
            description: "one white vertex joined to three boundary vertices, Gr(1,3)".into(),
            network: Network::new(star_graph(3), vec![int(1), int(2), int(3)]).expect("positive weights"),
            le_diagram: None,
        },
    ]
}

/// Size limits of random Le-diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomLimits {
    pub min_n: usize,
    pub max_n: usize,
    pub max_ones: usize,
}

impl Default for RandomLimits {
    fn default() -> Self {
        RandomLimits {
            min_n: 3,
            max_n: 7,
            max_ones: 10,
        }
    }
}

/// A random Le-diagram with a 1 in every row and column. Cells are filled
/// row by row; a cell with a 1 above and a 1 to its left is forced to 1,
/// any other cell is 1 with probability one half.
pub fn random_le_diagram(rng: &mut impl Rng, limits: RandomLimits) -> LeDiagram {
    loop {
        let n = rng.gen_range(limits.min_n..=limits.max_n);
        let k = rng.gen_range(1..n);
        let mut shape = vec![n - k];
        for _ in 1..k {
            let prev = *shape.last().expect("nonempty");
            shape.push(rng.gen_range(1..=prev));
        }
        let mut rows: Vec<Vec<u8>> = shape.iter().map(|&len| vec![0; len]).collect();
        for r in 0..k {
            for c in 0..shape[r] {
                let above = (0..r).any(|q| rows[q][c] == 1);
                let left = rows[r][..c].contains(&1);
                rows[r][c] = if (above && left) || rng.gen_bool(0.5) { 1 } else { 0 };
            }
        }
        let l = LeDiagram { k, n, rows };
        let (zr, zc) = l.zero_lines();
        if zr.is_empty() && zc.is_empty() && l.dimension() <= limits.max_ones && l.validate().is_ok() {
            return l;
        }
    }
}

/// `count` seeded random Le-graph networks with seeded positive weights.
pub fn random_networks(seed: u64, count: usize, limits: RandomLimits) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let l = random_le_diagram(&mut rng, limits);
            let g = le_graph(&l, false).expect("irreducible diagram");
            let weights = sample_positive_weights(&g, seed.wrapping_mul(1000).wrapping_add(i as u64));
            CorpusEntry {
                name: format!("le-{seed}-{i}"),
                description: format!("Le-graph of {:?} in Gr({},{})", l.rows, l.k, l.n),
                network: Network::new(g, weights).expect("positive weights"),
                le_diagram: Some(l),
            }
        })
        .collect()
}

/// Seed of the default random part of the corpus.
pub const DEFAULT_SEED: u64 = 2024;
/// Number of random networks in the default corpus.
pub const DEFAULT_RANDOM_COUNT: usize = 6;

/// Reference networks followed by the default random networks.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let mut c = reference_networks();
    c.extend(random_networks(DEFAULT_SEED, DEFAULT_RANDOM_COUNT, RandomLimits::default()));
    c
}

/// A black-boundary network representing the same point, for pipelines
/// that need black boundary vertices.
pub fn with_black_boundary(net: &Network) -> Network {
    if net.graph.boundary_color() == Color::Black {
        net.clone()
    } else {
        apply_move(net, &Move::BoundaryAdd).expect("boundary edges can always be added")
    }
}

/// Returns a Kasteleyn signature of a corpus network.
pub fn signature_of(net: &Network) -> Vec<i8> {
    construct_signature(&net.graph).expect("planar graphs carry Kasteleyn signatures")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enum_limit, positroid_of_graph};
    use itertools::Itertools;

    #[test]
    fn gr36_misses_only_123() {
        let g = le_graph(&gr36_diagram(), false).unwrap();
        let p = positroid_of_graph(&g, enum_limit()).unwrap();
        let all: Vec<Vec<usize>> = (1..=6).combinations(3).filter(|s| s != &vec![1, 2, 3]).collect();
        assert_eq!(p.bases, all);
    }

    #[test]
    fn random_diagrams_are_reproducible_and_bounded() {
        let a = random_networks(7, 5, RandomLimits::default());
        let b = random_networks(7, 5, RandomLimits::default());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.le_diagram, y.le_diagram);
            assert_eq!(x.network.weights, y.network.weights);
            let l = x.le_diagram.as_ref().unwrap();
            assert!(l.dimension() <= 10 && l.n <= 7);
            assert_eq!(x.network.graph.faces().faces.len(), l.dimension() + 1);
        }
    }

    #[test]
    fn default_corpus_names_are_unique() {
        let c = default_corpus();
        assert!(c.iter().map(|e| &e.name).all_unique());
        assert!(c.iter().all(|e| e.network.graph.edges().len() <= 40 && e.network.graph.n() <= 8));
    }
}
