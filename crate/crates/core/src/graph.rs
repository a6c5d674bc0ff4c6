//! Planar bipartite graphs in the disk.
//!
//! A graph is described by its vertices (color, internal or boundary), the
//! clockwise boundary order `b_1, …, b_n`, its edges and a rotation system
//! giving the counterclockwise order of edges at every vertex. Faces are
//! traced on the graph augmented by `n` boundary pseudo-arcs joining
//! consecutive boundary vertices; the arc from `b_n` to `b_1` borders the
//! infinite face `Ω_0`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::geometry::{angle_cmp, segments_meet, Point};
use crate::positroid::Positroid;
use crate::rational::{int, ratio};

/// Default cap on the number of enumerated matchings, flows or cycles.
pub const DEFAULT_ENUM_LIMIT: usize = 1_000_000;

/// Enumeration cap, overridable through the `KAST_ENUM_LIMIT` variable.
pub fn enum_limit() -> usize {
    std::env::var("KAST_ENUM_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|v| v.is_finite() && *v >= 1.0)
        .map_or(DEFAULT_ENUM_LIMIT, |v| v as usize)
}

/// Vertex color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// Whether a vertex lies on the disk boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Internal,
    Boundary,
}

/// Serialized vertex description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    pub color: Color,
    pub kind: VertexKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Point>,
}

/// Serialized edge description; the two ends may be listed in any order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub ends: [String; 2],
}

/// Serialized graph description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub boundary_order: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    /// Counterclockwise edge order per vertex id. When absent it is derived
    /// from the vertex positions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<String, Vec<String>>>,
}

/// A validated vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub color: Color,
    pub kind: VertexKind,
    pub position: Option<Point>,
}

/// A validated edge with its black and white endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub black: usize,
    pub white: usize,
}

/// A directed side of an edge: the face on its left is the face it bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Dart {
    pub edge: usize,
    pub tail: usize,
    pub head: usize,
}

/// Face classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceKind {
    Internal,
    FiniteExternal,
    Infinite,
}

/// A face of the graph in the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    /// Face id; the infinite face is 0, finite faces are 1..=g.
    pub id: usize,
    pub kind: FaceKind,
    /// Edge sides on the face, traced counterclockwise (face on the left).
    pub darts: Vec<Dart>,
    /// Boundary arcs on the face; arc `j` joins `b_{j+1}` and `b_{j+2}`
    /// (labels mod n), so arc `n-1` is the arc from `b_n` to `b_1`.
    pub arcs: Vec<usize>,
    /// Labels of boundary vertices met along the trace.
    pub boundary_labels: Vec<usize>,
    /// `|Ω|`: number of edge sides on the face.
    pub edge_count: usize,
    /// `n_w(Ω)`: internal white vertices met along the trace.
    pub internal_whites: usize,
    /// `b_Ω`: half the number of boundary-vertex occurrences.
    pub half_boundary: usize,
}

/// The face structure of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceComplex {
    /// Faces indexed by id; `faces[0]` is the infinite face.
    pub faces: Vec<Face>,
    /// Face containing each boundary arc.
    pub arc_face: Vec<usize>,
    dart_face: Vec<usize>,
}

impl FaceComplex {
    /// Number of finite faces, the dimension `g` of the cell.
    pub fn finite_count(&self) -> usize {
        self.faces.len() - 1
    }

    /// Finite faces in id order.
    pub fn finite(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().skip(1)
    }

    /// Id of the face on the left of the edge side running from `tail`.
    pub fn left_face(&self, g: &PlanarBipartiteGraph, edge: usize, tail: usize) -> usize {
        self.dart_face[g.dart_index(edge, tail)]
    }
}

/// Report on conditions (1)–(3) of reducedness; face minimality is not
/// decided, only the face count is reported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducednessReport {
    pub multi_edge_pairs: Vec<(String, String)>,
    pub bad_degree1_vertices: Vec<String>,
    pub components_without_boundary: Vec<String>,
    pub face_count: usize,
}

impl ReducednessReport {
    pub fn passes(&self) -> bool {
        self.multi_edge_pairs.is_empty()
            && self.bad_degree1_vertices.is_empty()
            && self.components_without_boundary.is_empty()
    }
}

/// An almost perfect matching.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matching {
    /// Edge indices, sorted.
    pub edges: Vec<usize>,
    /// Boundary `∂M` as sorted labels in `1..=n`.
    pub boundary: Vec<usize>,
}

/// A perfect orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectOrientation {
    /// Per edge: true when directed from its black to its white end.
    pub black_to_white: Vec<bool>,
    /// Source set `I(𝒪)` as sorted boundary labels.
    pub sources: Vec<usize>,
}

impl PerfectOrientation {
    /// Orientation induced by a matching: matched edges run black to white.
    pub fn from_matching(g: &PlanarBipartiteGraph, m: &Matching) -> Self {
        let mut black_to_white = vec![false; g.edges().len()];
        for &e in &m.edges {
            black_to_white[e] = true;
        }
        PerfectOrientation {
            black_to_white,
            sources: m.boundary.clone(),
        }
    }

    /// Tail vertex of edge `e`.
    pub fn tail(&self, g: &PlanarBipartiteGraph, e: usize) -> usize {
        let edge = g.edge(e);
        if self.black_to_white[e] {
            edge.black
        } else {
            edge.white
        }
    }

    /// Head vertex of edge `e`.
    pub fn head(&self, g: &PlanarBipartiteGraph, e: usize) -> usize {
        let edge = g.edge(e);
        if self.black_to_white[e] {
            edge.white
        } else {
            edge.black
        }
    }

    /// Edges leaving `v`, in counterclockwise order.
    pub fn out_edges(&self, g: &PlanarBipartiteGraph, v: usize) -> Vec<usize> {
        g.rotation(v)
            .iter()
            .copied()
            .filter(|&e| self.tail(g, e) == v)
            .collect()
    }

    /// Edges entering `v`, in counterclockwise order.
    pub fn in_edges(&self, g: &PlanarBipartiteGraph, v: usize) -> Vec<usize> {
        g.rotation(v)
            .iter()
            .copied()
            .filter(|&e| self.head(g, e) == v)
            .collect()
    }

    /// Checks the defining degree conditions and recomputes the source set.
    pub fn validate(&self, g: &PlanarBipartiteGraph) -> Result<(), GraphError> {
        if self.black_to_white.len() != g.edges().len() {
            return Err(GraphError::NotPerfectOrientation("wrong edge count".into()));
        }
        for (v, vert) in g.vertices().iter().enumerate() {
            if vert.kind == VertexKind::Boundary {
                continue;
            }
            let count = match vert.color {
                Color::Black => self.out_edges(g, v).len(),
                Color::White => self.in_edges(g, v).len(),
            };
            if count != 1 {
                return Err(GraphError::NotPerfectOrientation(vert.id.clone()));
            }
        }
        let sources: Vec<usize> = (1..=g.n())
            .filter(|&j| {
                let b = g.boundary_vertex(j);
                !self.out_edges(g, b).is_empty()
            })
            .collect();
        if sources != self.sources {
            return Err(GraphError::NotPerfectOrientation("source set mismatch".into()));
        }
        Ok(())
    }
}

/// A validated planar bipartite graph in the disk.
#[derive(Debug, Clone)]
pub struct PlanarBipartiteGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    boundary: Vec<usize>,
    boundary_pos: Vec<Option<usize>>,
    rotation: Vec<Vec<usize>>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    faces: FaceComplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AugEdge {
    Real(usize),
    Arc(usize),
}

impl PlanarBipartiteGraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Number of boundary vertices.
    pub fn n(&self) -> usize {
        self.boundary.len()
    }

    /// Vertex indices of `b_1, …, b_n`.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Vertex index of boundary vertex with label `j` in `1..=n`.
    pub fn boundary_vertex(&self, j: usize) -> usize {
        self.boundary[j - 1]
    }

    /// Boundary label in `1..=n` of vertex `v`, if it is a boundary vertex.
    pub fn boundary_label(&self, v: usize) -> Option<usize> {
        self.boundary_pos[v].map(|p| p + 1)
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary_pos[v].is_some()
    }

    /// Color shared by all boundary vertices.
    pub fn boundary_color(&self) -> Color {
        self.vertices[self.boundary[0]].color
    }

    /// Counterclockwise edge order at `v`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// The endpoint of `e` other than `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let edge = &self.edges[e];
        if edge.black == v {
            edge.white
        } else {
            edge.black
        }
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// The face structure computed at construction.
    pub fn faces(&self) -> &FaceComplex {
        &self.faces
    }

    /// Whether every vertex carries a position.
    pub fn has_positions(&self) -> bool {
        self.vertices.iter().all(|v| v.position.is_some())
    }

    /// Internal vertices of one color, ordered by their smallest incident
    /// edge index (a labeling that only depends on the edge order).
    pub fn internal_vertices(&self, color: Color) -> Vec<usize> {
        let mut vs: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| self.vertices[v].color == color && !self.is_boundary(v))
            .collect();
        vs.sort_by_key(|&v| (self.rotation[v].iter().min().copied(), v));
        vs
    }

    /// All vertices of one color with internal ones first (in canonical
    /// order) followed by boundary ones in clockwise order.
    pub fn vertices_of_color(&self, color: Color) -> Vec<usize> {
        let mut vs = self.internal_vertices(color);
        if self.boundary_color() == color {
            vs.extend(self.boundary.iter().copied());
        }
        vs
    }

    /// Rank `k` of the positroid: the common size of all `∂M`.
    pub fn k(&self) -> usize {
        let internal_black = self.internal_vertices(Color::Black).len();
        let internal_white = self.internal_vertices(Color::White).len();
        let n = self.n();
        match self.boundary_color() {
            Color::Black => internal_white - internal_black,
            Color::White => n + internal_white - internal_black,
        }
    }

    fn dart_index(&self, edge: usize, tail: usize) -> usize {
        2 * edge + usize::from(self.edges[edge].white == tail)
    }

    /// Serializable description with an explicit rotation system.
    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSpec {
                    id: v.id.clone(),
                    color: v.color,
                    kind: v.kind,
                    position: v.position.clone(),
                })
                .collect(),
            boundary_order: self.boundary.iter().map(|&b| self.vertices[b].id.clone()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    ends: [self.vertices[e.black].id.clone(), self.vertices[e.white].id.clone()],
                })
                .collect(),
            rotation: Some(
                (0..self.vertices.len())
                    .map(|v| {
                        (
                            self.vertices[v].id.clone(),
                            self.rotation[v].iter().map(|&e| self.edges[e].id.clone()).collect(),
                        )
                    })
                    .collect(),
            ),
        }
    }

    /// Conditions (1)–(3) of reducedness and the face count.
    pub fn reducedness(&self) -> ReducednessReport {
        let mut pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in &self.edges {
            *pairs.entry((e.black, e.white)).or_default() += 1;
        }
        let multi_edge_pairs = pairs
            .iter()
            .filter(|(_, &c)| c > 1)
            .map(|(&(b, w), _)| (self.vertices[b].id.clone(), self.vertices[w].id.clone()))
            .collect();
        let bad_degree1_vertices = (0..self.vertices.len())
            .filter(|&v| !self.is_boundary(v) && self.degree(v) == 1)
            .filter(|&v| !self.is_boundary(self.other_end(self.rotation[v][0], v)))
            .map(|v| self.vertices[v].id.clone())
            .collect();
        let reach = self.reachable_from_boundary();
        let components_without_boundary = (0..self.vertices.len())
            .filter(|&v| !reach[v])
            .map(|v| self.vertices[v].id.clone())
            .collect();
        ReducednessReport {
            multi_edge_pairs,
            bad_degree1_vertices,
            components_without_boundary,
            face_count: self.faces.faces.len(),
        }
    }

    fn reachable_from_boundary(&self) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack: Vec<usize> = self.boundary.clone();
        for &b in &self.boundary {
            seen[b] = true;
        }
        while let Some(v) = stack.pop() {
            for &e in &self.rotation[v] {
                let u = self.other_end(e, v);
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    fn aug_rotation(&self, v: usize) -> Vec<AugEdge> {
        match self.boundary_pos[v] {
            Some(p) => {
                let n = self.n();
                let mut r = vec![AugEdge::Arc(p), AugEdge::Arc((p + n - 1) % n)];
                r.extend(self.rotation[v].iter().map(|&e| AugEdge::Real(e)));
                r
            }
            None => self.rotation[v].iter().map(|&e| AugEdge::Real(e)).collect(),
        }
    }

    fn aug_head(&self, a: AugEdge, tail: usize) -> usize {
        match a {
            AugEdge::Real(e) => self.other_end(e, tail),
            AugEdge::Arc(j) => {
                let n = self.n();
                if self.boundary[j] == tail {
                    self.boundary[(j + 1) % n]
                } else {
                    self.boundary[j]
                }
            }
        }
    }

    fn aug_dart_index(&self, a: AugEdge, tail: usize) -> usize {
        match a {
            AugEdge::Real(e) => self.dart_index(e, tail),
            AugEdge::Arc(j) => 2 * self.edges.len() + 2 * j + usize::from(self.boundary[j] != tail),
        }
    }

    /// Traces the faces of the augmented graph and checks Euler's formula.
    fn trace_faces(&self) -> Result<FaceComplex, GraphError> {
        let n = self.n();
        let ne = self.edges.len();
        let total = 2 * (ne + n);
        let rot: Vec<Vec<AugEdge>> = (0..self.vertices.len()).map(|v| self.aug_rotation(v)).collect();
        let mut dart_cycle = vec![usize::MAX; total];
        let mut cycles: Vec<Vec<(AugEdge, usize)>> = Vec::new();
        let all_darts = (0..ne)
            .flat_map(|e| {
                let edge = &self.edges[e];
                [(AugEdge::Real(e), edge.black), (AugEdge::Real(e), edge.white)]
            })
            .chain((0..n).flat_map(|j| {
                [(AugEdge::Arc(j), self.boundary[j]), (AugEdge::Arc(j), self.boundary[(j + 1) % n])]
            }))
            .collect::<Vec<_>>();
        for &(a0, t0) in &all_darts {
            if dart_cycle[self.aug_dart_index(a0, t0)] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let (mut a, mut t) = (a0, t0);
            loop {
                let idx = self.aug_dart_index(a, t);
                if dart_cycle[idx] != usize::MAX {
                    return Err(GraphError::EmbeddingInconsistent(
                        "face trace revisits an edge side".into(),
                    ));
                }
                dart_cycle[idx] = id;
                cycle.push((a, t));
                let h = self.aug_head(a, t);
                let list = &rot[h];
                let i = list.iter().position(|&x| x == a).ok_or_else(|| {
                    GraphError::EmbeddingInconsistent("rotation lacks an incident edge".into())
                })?;
                a = list[(i + list.len() - 1) % list.len()];
                t = h;
                if a == a0 && t == t0 {
                    break;
                }
            }
            cycles.push(cycle);
        }
        let v = self.vertices.len() as i64;
        let e_aug = (ne + n) as i64;
        let f_aug = cycles.len() as i64;
        if v - e_aug + f_aug != 2 {
            return Err(GraphError::EmbeddingInconsistent(format!(
                "Euler characteristic {} instead of 2",
                v - e_aug + f_aug
            )));
        }
        let outside = dart_cycle[self.aug_dart_index(AugEdge::Arc(0), self.boundary[0])];
        let infinite = dart_cycle[self.aug_dart_index(AugEdge::Arc(n - 1), self.boundary[0])];
        if cycles[outside].len() != n || outside == infinite {
            return Err(GraphError::EmbeddingInconsistent(
                "boundary arcs do not bound a single outer face".into(),
            ));
        }
        // Order finite faces by their smallest edge side.
        let key = |c: &Vec<(AugEdge, usize)>| {
            c.iter()
                .filter_map(|&(a, t)| match a {
                    AugEdge::Real(e) => Some(self.dart_index(e, t)),
                    AugEdge::Arc(_) => None,
                })
                .min()
                .unwrap_or(usize::MAX)
        };
        let mut finite: Vec<usize> = (0..cycles.len()).filter(|&c| c != outside && c != infinite).collect();
        finite.sort_by_key(|&c| key(&cycles[c]));
        let order: Vec<usize> = std::iter::once(infinite).chain(finite).collect();
        let mut cycle_to_face = vec![usize::MAX; cycles.len()];
        for (fid, &c) in order.iter().enumerate() {
            cycle_to_face[c] = fid;
        }
        let faces: Vec<Face> = order
            .iter()
            .enumerate()
            .map(|(fid, &c)| self.make_face(fid, &cycles[c], fid == 0))
            .collect();
        let mut dart_face = vec![usize::MAX; 2 * ne];
        for (idx, slot) in dart_face.iter_mut().enumerate() {
            *slot = cycle_to_face[dart_cycle[idx]];
        }
        let arc_face = (0..n)
            .map(|j| {
                let tail = self.boundary[(j + 1) % n];
                cycle_to_face[dart_cycle[self.aug_dart_index(AugEdge::Arc(j), tail)]]
            })
            .collect();
        Ok(FaceComplex {
            faces,
            arc_face,
            dart_face,
        })
    }

    fn make_face(&self, id: usize, cycle: &[(AugEdge, usize)], infinite: bool) -> Face {
        let mut darts = Vec::new();
        let mut arcs = Vec::new();
        let mut boundary_labels = Vec::new();
        let mut internal_whites = 0;
        for &(a, t) in cycle {
            if let Some(p) = self.boundary_pos[t] {
                boundary_labels.push(p + 1);
            } else if self.vertices[t].color == Color::White {
                internal_whites += 1;
            }
            match a {
                AugEdge::Real(e) => darts.push(Dart {
                    edge: e,
                    tail: t,
                    head: self.other_end(e, t),
                }),
                AugEdge::Arc(j) => arcs.push(j),
            }
        }
        arcs.sort_unstable();
        let kind = if infinite {
            FaceKind::Infinite
        } else if arcs.is_empty() {
            FaceKind::Internal
        } else {
            FaceKind::FiniteExternal
        };
        Face {
            id,
            kind,
            edge_count: darts.len(),
            darts,
            half_boundary: arcs.len(),
            arcs,
            boundary_labels,
            internal_whites,
        }
    }
}

/// Validates a graph description and computes its faces.
pub fn build_graph(spec: &GraphSpec) -> Result<PlanarBipartiteGraph, GraphError> {
    let mut vertex_index = HashMap::new();
    for (i, v) in spec.vertices.iter().enumerate() {
        if vertex_index.insert(v.id.clone(), i).is_some() {
            return Err(GraphError::DuplicateId(v.id.clone()));
        }
    }
    let vertices: Vec<Vertex> = spec
        .vertices
        .iter()
        .map(|v| Vertex {
            id: v.id.clone(),
            color: v.color,
            kind: v.kind,
            position: v.position.clone(),
        })
        .collect();
    let lookup = |id: &str| {
        vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    };
    let mut edge_index = HashMap::new();
    let mut edges = Vec::with_capacity(spec.edges.len());
    for (i, e) in spec.edges.iter().enumerate() {
        if edge_index.insert(e.id.clone(), i).is_some() || vertex_index.contains_key(&e.id) {
            return Err(GraphError::DuplicateId(e.id.clone()));
        }
        let a = lookup(&e.ends[0])?;
        let b = lookup(&e.ends[1])?;
        let (black, white) = match (vertices[a].color, vertices[b].color) {
            (Color::Black, Color::White) => (a, b),
            (Color::White, Color::Black) => (b, a),
            _ => return Err(GraphError::NonBipartiteEdge(e.id.clone())),
        };
        edges.push(Edge {
            id: e.id.clone(),
            black,
            white,
        });
    }
    // Boundary order.
    let mut boundary = Vec::with_capacity(spec.boundary_order.len());
    let mut boundary_pos = vec![None; vertices.len()];
    for (p, id) in spec.boundary_order.iter().enumerate() {
        let v = lookup(id)?;
        if vertices[v].kind != VertexKind::Boundary || boundary_pos[v].is_some() {
            return Err(GraphError::BoundaryOrderMismatch(id.clone()));
        }
        boundary_pos[v] = Some(p);
        boundary.push(v);
    }
    if let Some(v) = (0..vertices.len()).find(|&v| vertices[v].kind == VertexKind::Boundary && boundary_pos[v].is_none()) {
        return Err(GraphError::BoundaryOrderMismatch(vertices[v].id.clone()));
    }
    if boundary.len() < 2 {
        return Err(GraphError::BoundaryOrderMismatch(
            "at least two boundary vertices are required".into(),
        ));
    }
    if boundary.iter().any(|&b| vertices[b].color != vertices[boundary[0]].color) {
        return Err(GraphError::BoundaryColorMismatch);
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        incident[e.black].push(i);
        incident[e.white].push(i);
    }
    if let Some(&b) = boundary.iter().find(|&&b| incident[b].len() != 1) {
        return Err(GraphError::BoundaryDegreeNotOne(vertices[b].id.clone()));
    }
    // Rotation system.
    let rotation = match &spec.rotation {
        Some(map) => {
            let mut rotation = vec![Vec::new(); vertices.len()];
            for (vid, list) in map {
                let v = lookup(vid)?;
                rotation[v] = list
                    .iter()
                    .map(|eid| edge_index.get(eid).copied().ok_or_else(|| GraphError::UnknownEdge(eid.clone())))
                    .collect::<Result<Vec<_>, _>>()?;
            }
            for v in 0..vertices.len() {
                let mut a = rotation[v].clone();
                let mut b = incident[v].clone();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    return Err(GraphError::EmbeddingInconsistent(format!(
                        "rotation at `{}` does not list its incident edges exactly once",
                        vertices[v].id
                    )));
                }
            }
            if vertices.iter().all(|v| v.position.is_some()) {
                let derived = rotation_from_positions(&vertices, &edges, &incident)?;
                for v in 0..vertices.len() {
                    if !cyclically_equal(&derived[v], &rotation[v]) {
                        return Err(GraphError::EmbeddingInconsistent(format!(
                            "rotation at `{}` disagrees with the vertex positions",
                            vertices[v].id
                        )));
                    }
                }
            }
            rotation
        }
        None => {
            if !vertices.iter().all(|v| v.position.is_some()) {
                return Err(GraphError::EmbeddingInconsistent(
                    "neither a rotation system nor positions for every vertex".into(),
                ));
            }
            rotation_from_positions(&vertices, &edges, &incident)?
        }
    };
    let mut g = PlanarBipartiteGraph {
        vertices,
        edges,
        boundary,
        boundary_pos,
        rotation,
        vertex_index,
        edge_index,
        faces: FaceComplex {
            faces: Vec::new(),
            arc_face: Vec::new(),
            dart_face: Vec::new(),
        },
    };
    if let Some(v) = g.reachable_from_boundary().iter().position(|&r| !r) {
        return Err(GraphError::EmbeddingInconsistent(format!(
            "component of `{}` contains no boundary vertex",
            g.vertices[v].id
        )));
    }
    g.faces = g.trace_faces()?;
    if g.internal_whites_minus_blacks_invalid() {
        return Err(GraphError::NotPerfectlyOrientable);
    }
    if first_matching(&g, None)?.is_none() {
        return Err(GraphError::NotPerfectlyOrientable);
    }
    Ok(g)
}

impl PlanarBipartiteGraph {
    fn internal_whites_minus_blacks_invalid(&self) -> bool {
        let ib = self.internal_vertices(Color::Black).len();
        let iw = self.internal_vertices(Color::White).len();
        match self.boundary_color() {
            Color::Black => iw < ib || iw > ib + self.n(),
            Color::White => ib < iw || ib > iw + self.n(),
        }
    }
}

fn cyclically_equal(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    match b.iter().position(|&x| x == a[0]) {
        Some(s) => (0..a.len()).all(|i| a[i] == b[(s + i) % b.len()]),
        None => false,
    }
}

/// Counterclockwise edge order at every vertex read off the positions.
fn rotation_from_positions(
    vertices: &[Vertex],
    edges: &[Edge],
    incident: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>, GraphError> {
    let pos = |v: usize| vertices[v].position.as_ref().expect("positions checked");
    let mut rotation = Vec::with_capacity(vertices.len());
    for v in 0..vertices.len() {
        let mut list: Vec<(usize, Point)> = incident[v]
            .iter()
            .map(|&e| {
                let u = if edges[e].black == v { edges[e].white } else { edges[e].black };
                (e, pos(u).sub(pos(v)))
            })
            .collect();
        if list.iter().any(|(_, d)| d.is_zero()) {
            return Err(GraphError::EmbeddingInconsistent(format!(
                "edge of zero length at `{}`",
                vertices[v].id
            )));
        }
        list.sort_by(|a, b| angle_cmp(&a.1, &b.1));
        if list.windows(2).any(|w| angle_cmp(&w[0].1, &w[1].1) == std::cmp::Ordering::Equal) {
            return Err(GraphError::EmbeddingInconsistent(format!(
                "overlapping edges at `{}`",
                vertices[v].id
            )));
        }
        rotation.push(list.into_iter().map(|(e, _)| e).collect());
    }
    Ok(rotation)
}

/// Whether the positions form a straight-line drawing without crossings
/// whose rotation agrees with the graph's rotation system.
pub fn positions_are_planar(g: &PlanarBipartiteGraph) -> bool {
    if !g.has_positions() {
        return false;
    }
    let pos = |v: usize| g.vertex(v).position.as_ref().expect("checked");
    let nv = g.vertices().len();
    for a in 0..nv {
        for b in a + 1..nv {
            if pos(a) == pos(b) {
                return false;
            }
        }
    }
    let edges = g.edges();
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            let shared = [e.black, e.white].iter().filter(|v| **v == f.black || **v == f.white).count();
            let meets = segments_meet(pos(e.black), pos(e.white), pos(f.black), pos(f.white));
            if shared == 0 && meets {
                return false;
            }
            if shared == 1 {
                // Segments sharing an endpoint may only meet at that endpoint.
                let (s, x, y) = if e.black == f.black {
                    (e.black, e.white, f.white)
                } else {
                    (e.white, e.black, f.black)
                };
                let dx = pos(x).sub(pos(s));
                let dy = pos(y).sub(pos(s));
                if crate::geometry::cross_sign(&dx, &dy) == 0
                    && crate::geometry::dot(&dx, &dy) > num_traits::Zero::zero()
                {
                    return false;
                }
            }
        }
        // No vertex in the relative interior of an edge.
        for v in 0..nv {
            if v != e.black && v != e.white && crate::geometry::on_segment(pos(v), pos(e.black), pos(e.white)) {
                return false;
            }
        }
    }
    let vertices = g.vertices();
    let incident: Vec<Vec<usize>> = (0..nv).map(|v| g.rotation(v).to_vec()).collect();
    match rotation_from_positions(vertices, edges, &incident) {
        Ok(derived) => (0..nv).all(|v| cyclically_equal(&derived[v], g.rotation(v))),
        Err(_) => false,
    }
}

/// The `∂M` labels of a set of matched edges.
fn matching_boundary(g: &PlanarBipartiteGraph, matched_vertex: &[bool]) -> Vec<usize> {
    (1..=g.n())
        .filter(|&j| {
            let used = matched_vertex[g.boundary_vertex(j)];
            match g.boundary_color() {
                Color::Black => used,
                Color::White => !used,
            }
        })
        .collect()
}

/// Depth-first search over almost perfect matchings.
///
/// `allow` restricts which boundary vertices may be matched. The callback
/// receives the matched edges and the covered-vertex mask, and returns false
/// to stop the search.
fn search_matchings(
    g: &PlanarBipartiteGraph,
    allow: Option<&[bool]>,
    visit: &mut dyn FnMut(&[usize], &[bool]) -> bool,
) {
    let order: Vec<usize> = (0..g.vertices().len()).filter(|&v| !g.is_boundary(v)).collect();
    let mut covered = vec![false; g.vertices().len()];
    let mut chosen = Vec::new();
    fn rec(
        g: &PlanarBipartiteGraph,
        order: &[usize],
        pos: usize,
        allow: Option<&[bool]>,
        covered: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &[bool]) -> bool,
    ) -> bool {
        let mut p = pos;
        while p < order.len() && covered[order[p]] {
            p += 1;
        }
        if p == order.len() {
            return visit(chosen, covered);
        }
        let v = order[p];
        for &e in g.rotation(v).iter().collect::<BTreeSet<_>>() {
            let u = g.other_end(e, v);
            if covered[u] {
                continue;
            }
            if let (Some(mask), Some(label)) = (allow, g.boundary_label(u)) {
                if !mask[label - 1] {
                    continue;
                }
            }
            covered[u] = true;
            covered[v] = true;
            chosen.push(e);
            let go_on = rec(g, order, p + 1, allow, covered, chosen, visit);
            chosen.pop();
            covered[u] = false;
            covered[v] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(g, &order, 0, allow, &mut covered, &mut chosen, visit);
}

fn first_matching(g: &PlanarBipartiteGraph, base: Option<&[usize]>) -> Result<Option<Matching>, GraphError> {
    let mask: Option<Vec<bool>> = base.map(|b| {
        (1..=g.n())
            .map(|j| match g.boundary_color() {
                Color::Black => b.contains(&j),
                Color::White => !b.contains(&j),
            })
            .collect()
    });
    let mut found = None;
    search_matchings(g, mask.as_deref(), &mut |edges, covered| {
        let boundary = matching_boundary(g, covered);
        if base.is_none_or(|b| b == boundary.as_slice()) {
            let mut edges = edges.to_vec();
            edges.sort_unstable();
            found = Some(Matching { edges, boundary });
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// All almost perfect matchings grouped by their boundary `∂M`.
pub fn enumerate_matchings(
    g: &PlanarBipartiteGraph,
    limit: usize,
) -> Result<BTreeMap<Vec<usize>, Vec<Matching>>, GraphError> {
    let mut out: BTreeMap<Vec<usize>, Vec<Matching>> = BTreeMap::new();
    let mut count = 0usize;
    let mut exceeded = false;
    search_matchings(g, None, &mut |edges, covered| {
        count += 1;
        if count > limit {
            exceeded = true;
            return false;
        }
        let boundary = matching_boundary(g, covered);
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        out.entry(boundary.clone()).or_default().push(Matching { edges, boundary });
        true
    });
    if exceeded {
        return Err(GraphError::EnumerationLimitExceeded(limit));
    }
    for list in out.values_mut() {
        list.sort();
    }
    Ok(out)
}

/// All perfect orientations, ordered by source set and then by matching.
pub fn enumerate_perfect_orientations(
    g: &PlanarBipartiteGraph,
    limit: usize,
) -> Result<Vec<PerfectOrientation>, GraphError> {
    Ok(enumerate_matchings(g, limit)?
        .values()
        .flatten()
        .map(|m| PerfectOrientation::from_matching(g, m))
        .collect())
}

/// Some perfect orientation with source set `base`, if one exists.
pub fn orientation_for_base(g: &PlanarBipartiteGraph, base: &[usize]) -> Result<Option<PerfectOrientation>, GraphError> {
    Ok(first_matching(g, Some(base))?.map(|m| PerfectOrientation::from_matching(g, &m)))
}

/// The positroid `{∂M}` of the graph.
pub fn positroid_of_graph(g: &PlanarBipartiteGraph, limit: usize) -> Result<Positroid, GraphError> {
    let bases = enumerate_matchings(g, limit)?.into_keys().collect();
    Ok(Positroid { k: g.k(), n: g.n(), bases })
}

/// The graph with every vertex color swapped, boundary included.
pub fn dual_graph(g: &PlanarBipartiteGraph) -> PlanarBipartiteGraph {
    let mut spec = g.to_spec();
    for v in &mut spec.vertices {
        v.color = v.color.other();
    }
    build_graph(&spec).expect("color swap preserves validity")
}

/// Output of [`make_at_most_trivalent`].
#[derive(Debug, Clone)]
pub struct Trivalent {
    pub graph: PlanarBipartiteGraph,
    /// New vertex id mapped to the id of the vertex it was split from.
    pub provenance: BTreeMap<String, String>,
    /// Ids of the edges created by the splits (unit weight).
    pub new_edges: Vec<String>,
}

pub(crate) fn fresh_id(taken: &mut BTreeSet<String>, base: &str) -> String {
    let mut i = 1;
    loop {
        let candidate = format!("{base}.{i}");
        if taken.insert(candidate.clone()) {
            return candidate;
        }
        i += 1;
    }
}

/// Names created by [`split_vertex`].
#[derive(Debug, Clone)]
pub(crate) struct Split {
    pub split: String,
    pub mid: String,
    pub e_near: String,
    pub e_far: String,
}

/// Expansion `v ↦ v – m – v'`: `v` keeps the first `keep` edges of its
/// counterclockwise rotation, the rest move to the new vertex `v'`, and a
/// new bivalent vertex `m` of the opposite color joins the two.
pub(crate) fn split_vertex(
    spec: &mut GraphSpec,
    rotation: &mut BTreeMap<String, Vec<String>>,
    taken: &mut BTreeSet<String>,
    vid: &str,
    keep: usize,
) -> Split {
    let list = rotation[vid].clone();
    let vpos = spec.vertices.iter().position(|v| v.id == vid).expect("known vertex");
    let color = spec.vertices[vpos].color;
    let split = fresh_id(taken, vid);
    let mid = fresh_id(taken, vid);
    let e_near = fresh_id(taken, &format!("{vid}-e"));
    let e_far = fresh_id(taken, &format!("{vid}-e"));
    let kept = list[..keep].to_vec();
    let moved = list[keep..].to_vec();
    // The split vertex moves a little towards the moved neighbors.
    let (split_pos, mid_pos) = match &spec.vertices[vpos].position {
        Some(p) => {
            let others: Vec<Point> = moved
                .iter()
                .map(|eid| {
                    let e = spec.edges.iter().find(|e| &e.id == eid).expect("edge");
                    let u = if e.ends[0] == vid { &e.ends[1] } else { &e.ends[0] };
                    spec.vertices
                        .iter()
                        .find(|x| &x.id == u)
                        .and_then(|x| x.position.clone())
                        .unwrap_or_else(|| p.clone())
                })
                .collect();
            let count = int(others.len() as i64);
            let centroid = others
                .iter()
                .fold(Point::new(int(0), int(0)), |a, b| a.add(b))
                .scale(&(int(1) / count));
            let step = centroid.sub(p).scale(&ratio(1, 8));
            (Some(p.add(&step)), Some(p.add(&step.scale(&ratio(1, 2)))))
        }
        None => (None, None),
    };
    spec.vertices.push(VertexSpec {
        id: split.clone(),
        color,
        kind: VertexKind::Internal,
        position: split_pos,
    });
    spec.vertices.push(VertexSpec {
        id: mid.clone(),
        color: color.other(),
        kind: VertexKind::Internal,
        position: mid_pos,
    });
    for eid in &moved {
        let e = spec.edges.iter_mut().find(|e| &e.id == eid).expect("edge");
        for end in &mut e.ends {
            if end == vid {
                *end = split.clone();
            }
        }
    }
    spec.edges.push(EdgeSpec {
        id: e_near.clone(),
        ends: [vid.to_string(), mid.clone()],
    });
    spec.edges.push(EdgeSpec {
        id: e_far.clone(),
        ends: [split.clone(), mid.clone()],
    });
    let mut at_v = kept;
    at_v.push(e_near.clone());
    let mut at_split = moved;
    at_split.push(e_far.clone());
    rotation.insert(vid.to_string(), at_v);
    rotation.insert(split.clone(), at_split);
    rotation.insert(mid.clone(), vec![e_far.clone(), e_near.clone()]);
    Split {
        split,
        mid,
        e_near,
        e_far,
    }
}

/// Builds a graph from a description, keeping positions only when they form
/// a planar drawing compatible with the rotation system.
pub(crate) fn build_keeping_planar_positions(mut spec: GraphSpec) -> Result<PlanarBipartiteGraph, GraphError> {
    match build_graph(&spec) {
        Ok(h) if !h.has_positions() || positions_are_planar(&h) => Ok(h),
        _ => {
            for v in &mut spec.vertices {
                v.position = None;
            }
            build_graph(&spec)
        }
    }
}

/// All vertex and edge ids of a description.
pub(crate) fn taken_ids(spec: &GraphSpec) -> BTreeSet<String> {
    spec.vertices
        .iter()
        .map(|v| v.id.clone())
        .chain(spec.edges.iter().map(|e| e.id.clone()))
        .collect()
}

/// Splits every internal vertex of degree above three by expansions
/// `v ↦ v – m – v'` through a new bivalent vertex of the opposite color.
pub fn make_at_most_trivalent(g: &PlanarBipartiteGraph) -> Trivalent {
    let mut spec = g.to_spec();
    let mut rotation = spec.rotation.take().expect("explicit rotation");
    let mut taken = taken_ids(&spec);
    let mut provenance = BTreeMap::new();
    let mut new_edges = Vec::new();
    let mut queue: Vec<String> = spec
        .vertices
        .iter()
        .filter(|v| v.kind == VertexKind::Internal)
        .map(|v| v.id.clone())
        .collect();
    while let Some(vid) = queue.pop() {
        if rotation[&vid].len() <= 3 {
            continue;
        }
        let origin = provenance.get(&vid).cloned().unwrap_or_else(|| vid.clone());
        let s = split_vertex(&mut spec, &mut rotation, &mut taken, &vid, 2);
        provenance.insert(s.split.clone(), origin.clone());
        provenance.insert(s.mid.clone(), origin);
        new_edges.push(s.e_near);
        new_edges.push(s.e_far);
        queue.push(s.split);
    }
    spec.rotation = Some(rotation);
    let graph = build_keeping_planar_positions(spec).expect("expansions preserve validity");
    Trivalent {
        graph,
        provenance,
        new_edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn trivial_graph_faces_and_matchings() {
        let g = corpus::trivial_graph();
        assert_eq!(g.k(), 1);
        let f = g.faces();
        assert_eq!(f.finite_count(), 1);
        let face = &f.faces[1];
        assert_eq!(face.kind, FaceKind::FiniteExternal);
        assert_eq!((face.edge_count, face.half_boundary), (2, 1));
        let m = enumerate_matchings(&g, 100).unwrap();
        assert_eq!(m.keys().cloned().collect::<Vec<_>>(), vec![vec![1], vec![2]]);
        assert!(m.values().all(|l| l.len() == 1));
        let o = enumerate_perfect_orientations(&g, 100).unwrap();
        assert_eq!(o.len(), 2);
        for orientation in &o {
            orientation.validate(&g).unwrap();
        }
    }

    #[test]
    fn example_one_graph_structure() {
        let g = corpus::example_one_graph();
        let blacks = g.vertices().iter().filter(|v| v.color == Color::Black).count();
        let whites = g.vertices().len() - blacks;
        assert_eq!((blacks, whites), (7, 3));
        assert_eq!((g.k(), g.n()), (2, 6));
        assert_eq!(g.faces().finite_count(), 4);
        let m = enumerate_matchings(&g, 1000).unwrap();
        for i in 1..=6 {
            for j in i + 1..=6 {
                let expected = usize::from(
                    ([1, 2, 3, 6].contains(&i) && [4, 5].contains(&j))
                        || ([4, 5].contains(&i) && [1, 2, 3, 6].contains(&j)),
                );
                let got = m.get(&vec![i, j]).map_or(0, Vec::len);
                assert_eq!(got, expected, "I = {{{i},{j}}}");
            }
        }
    }

    #[test]
    fn injected_non_bipartite_edge_is_rejected() {
        let mut spec = corpus::example_one_graph().to_spec();
        spec.edges.push(EdgeSpec {
            id: "bad".into(),
            ends: ["b1".into(), "b2".into()],
        });
        spec.rotation = None;
        assert_eq!(build_graph(&spec).unwrap_err(), GraphError::NonBipartiteEdge("bad".into()));
    }

    #[test]
    fn broken_rotation_fails_euler() {
        let mut spec = corpus::example_one_graph().to_spec();
        for v in &mut spec.vertices {
            v.position = None;
        }
        let rot = spec.rotation.as_mut().unwrap();
        rot.get_mut("w1").unwrap().swap(0, 1);
        assert!(matches!(build_graph(&spec), Err(GraphError::EmbeddingInconsistent(_))));
    }

    #[test]
    fn boundary_checks() {
        let mut spec = corpus::trivial_graph().to_spec();
        spec.vertices[0].color = Color::White;
        spec.edges.clear();
        spec.rotation = None;
        assert!(build_graph(&spec).is_err());
        let mut spec = corpus::trivial_graph().to_spec();
        spec.boundary_order.pop();
        assert!(matches!(build_graph(&spec), Err(GraphError::BoundaryOrderMismatch(_))));
    }

    #[test]
    fn dual_graph_swaps_colors() {
        let g = corpus::trivial_graph();
        let d = dual_graph(&g);
        assert_eq!(d.boundary_color(), Color::White);
        assert_eq!(d.k(), 1);
    }

    #[test]
    fn trivalent_split_of_degree_four_white() {
        let g = corpus::star_graph(4);
        let t = make_at_most_trivalent(&g);
        assert!(t
            .graph
            .vertices()
            .iter()
            .enumerate()
            .all(|(v, x)| x.kind == VertexKind::Boundary || t.graph.degree(v) <= 3));
        assert_eq!(t.new_edges.len(), 2);
        assert_eq!(
            positroid_of_graph(&t.graph, 1000).unwrap(),
            positroid_of_graph(&g, 1000).unwrap()
        );
        let mid = t.provenance.keys().find(|id| {
            let v = t.graph.vertex_index(id).unwrap();
            t.graph.vertex(v).color == Color::Black
        });
        assert!(mid.is_some());
        let already = make_at_most_trivalent(&corpus::example_one_graph());
        assert!(already.provenance.is_empty());
    }
}
