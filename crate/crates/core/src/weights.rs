//! Edge and face weights, gauges, directed weights and local moves.
//!
//! Faces are traced counterclockwise, so the face weight is the product of
//! the weights of edge sides leaving a white vertex divided by the product of
//! those leaving a black vertex. The weight of the infinite face is the
//! inverse of the product of all finite face weights.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::WeightError;
use crate::graph::{
    build_keeping_planar_positions, fresh_id, split_vertex, taken_ids, Color, EdgeSpec, GraphSpec,
    PerfectOrientation, PlanarBipartiteGraph, VertexKind, VertexSpec,
};
use crate::geometry::Point;
use crate::rational::{int, ratio, Rational};

/// A graph together with one nonzero weight per edge (indexed like the
/// graph's edges).
#[derive(Debug, Clone)]
pub struct Network {
    pub graph: PlanarBipartiteGraph,
    pub weights: Vec<Rational>,
}

impl Network {
    /// Checks that there is one nonzero weight per edge.
    pub fn new(graph: PlanarBipartiteGraph, weights: Vec<Rational>) -> Result<Self, WeightError> {
        if weights.len() != graph.edges().len() {
            return Err(WeightError::MissingWeight(format!(
                "{} weights for {} edges",
                weights.len(),
                graph.edges().len()
            )));
        }
        if let Some(e) = weights.iter().position(Zero::is_zero) {
            return Err(WeightError::ZeroWeight(graph.edge(e).id.clone()));
        }
        Ok(Network { graph, weights })
    }

    /// All weights equal to one.
    pub fn unit(graph: PlanarBipartiteGraph) -> Self {
        let weights = vec![Rational::one(); graph.edges().len()];
        Network { graph, weights }
    }

    /// Weight of the edge with the given id.
    pub fn weight(&self, id: &str) -> Option<&Rational> {
        self.graph.edge_index(id).map(|e| &self.weights[e])
    }

    /// Finite face weights `f_1, …, f_g`.
    pub fn face_weights(&self) -> Vec<Rational> {
        face_weights_from_edge_weights(&self.graph, &self.weights)
    }

    /// Whether every weight is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.weights.iter().all(crate::rational::is_positive)
    }
}

/// Exponent of every edge in the weight of face `face`.
pub(crate) fn face_exponents(g: &PlanarBipartiteGraph, face: usize) -> BTreeMap<usize, i32> {
    let mut exps: BTreeMap<usize, i32> = BTreeMap::new();
    for d in &g.faces().faces[face].darts {
        let s = if g.vertex(d.tail).color == Color::White { 1 } else { -1 };
        *exps.entry(d.edge).or_default() += s;
    }
    exps.retain(|_, x| *x != 0);
    exps
}

fn face_product(g: &PlanarBipartiteGraph, face: usize, t: &[Rational]) -> Rational {
    let mut acc = Rational::one();
    for (&e, &x) in &face_exponents(g, face) {
        if x > 0 {
            for _ in 0..x {
                acc *= &t[e];
            }
        } else {
            for _ in 0..-x {
                acc /= &t[e];
            }
        }
    }
    acc
}

/// Finite face weights `f_1, …, f_g` of an edge weighting.
pub fn face_weights_from_edge_weights(g: &PlanarBipartiteGraph, t: &[Rational]) -> Vec<Rational> {
    (1..g.faces().faces.len()).map(|f| face_product(g, f, t)).collect()
}

/// Weight of the infinite face, `(∏ f_i)⁻¹`.
pub fn infinite_face_weight(f: &[Rational]) -> Rational {
    Rational::one() / f.iter().fold(Rational::one(), |a, b| a * b)
}

/// Spanning tree of the graph with all boundary vertices identified,
/// chosen greedily in edge-index order. The complementary edges are as many
/// as the finite faces and form a spanning tree of the dual graph.
pub fn gauge_tree(g: &PlanarBipartiteGraph) -> Vec<bool> {
    let nv = g.vertices().len();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let root = g.boundary()[0];
    for &b in g.boundary() {
        parent[b] = root;
    }
    g.edges()
        .iter()
        .map(|e| {
            let a = find(&mut parent, e.black);
            let b = find(&mut parent, e.white);
            if a == b {
                false
            } else {
                parent[a] = b;
                true
            }
        })
        .collect()
}

/// Solves `∏ t_e^{exp(e, Ω)} = target(Ω)` on every finite face for the
/// edges outside the gauge tree, whose values are preset in `t`.
///
/// The free edges form a tree on the faces, so peeling faces with a single
/// undetermined edge always succeeds on valid graphs.
pub(crate) fn solve_face_system(
    g: &PlanarBipartiteGraph,
    targets: &[Rational],
    mut t: Vec<Rational>,
    free: &[bool],
) -> Result<Vec<Rational>, WeightError> {
    let nf = g.faces().faces.len();
    let exps: Vec<BTreeMap<usize, i32>> = (0..nf).map(|f| face_exponents(g, f)).collect();
    let mut known: Vec<bool> = free.iter().map(|&x| !x).collect();
    let mut pending: BTreeSet<usize> = (1..nf).collect();
    loop {
        let next = pending.iter().copied().find(|&f| {
            exps[f].keys().filter(|&&e| !known[e]).count() == 1
        });
        let Some(f) = next else { break };
        pending.remove(&f);
        let (&e, &x) = exps[f].iter().find(|(&e, _)| !known[e]).expect("one unknown");
        let mut rest = Rational::one();
        for (&e2, &x2) in &exps[f] {
            if e2 != e {
                let p = pow(&t[e2], x2);
                rest *= p;
            }
        }
        let value = &targets[f - 1] / rest;
        t[e] = if x == 1 { value } else { Rational::one() / value };
        known[e] = true;
    }
    if known.iter().any(|k| !k) {
        return Err(WeightError::InconsistentFaceSystem);
    }
    for f in 1..nf {
        if face_product(g, f, &t) != targets[f - 1] {
            return Err(WeightError::InconsistentFaceSystem);
        }
    }
    Ok(t)
}

fn pow(x: &Rational, e: i32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        Rational::one() / acc
    } else {
        acc
    }
}

/// Edge weights realizing the finite face weights `f`, equal to one on the
/// gauge tree.
pub fn edge_weights_from_face_weights(g: &PlanarBipartiteGraph, f: &[Rational]) -> Result<Vec<Rational>, WeightError> {
    if f.len() != g.faces().finite_count() {
        return Err(WeightError::MissingWeight(format!(
            "{} face weights for {} finite faces",
            f.len(),
            g.faces().finite_count()
        )));
    }
    if let Some(i) = f.iter().position(Zero::is_zero) {
        return Err(WeightError::ZeroWeight(format!("F{}", i + 1)));
    }
    let tree = gauge_tree(g);
    let free: Vec<bool> = tree.iter().map(|x| !x).collect();
    solve_face_system(g, f, vec![Rational::one(); g.edges().len()], &free)
}

/// Multiplies the weights of all edges at the internal vertex `v` by `c`.
pub fn weight_gauge(g: &PlanarBipartiteGraph, t: &[Rational], v: usize, c: &Rational) -> Result<Vec<Rational>, WeightError> {
    if g.is_boundary(v) {
        return Err(WeightError::BoundaryVertexGauge(g.vertex(v).id.clone()));
    }
    if c.is_zero() {
        return Err(WeightError::ZeroWeight(g.vertex(v).id.clone()));
    }
    let mut out = t.to_vec();
    for &e in g.rotation(v) {
        out[e] *= c;
    }
    Ok(out)
}

/// Directed weights along a perfect orientation: `t_e` on edges directed
/// from white to black, `1/t_e` on edges directed from black to white.
pub fn direct_weights(g: &PlanarBipartiteGraph, t: &[Rational], o: &PerfectOrientation) -> Vec<Rational> {
    (0..g.edges().len())
        .map(|e| {
            if o.black_to_white[e] {
                Rational::one() / &t[e]
            } else {
                t[e].clone()
            }
        })
        .collect()
}

/// Seeded positive weights `p/q` with `1 ≤ p, q ≤ 9`.
pub fn sample_positive_weights(g: &PlanarBipartiteGraph, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.edges().len())
        .map(|_| ratio(rng.gen_range(1..=9), rng.gen_range(1..=9)))
        .collect()
}

/// A local transformation of a network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Move {
    /// Removes an internal bivalent vertex whose neighbors are internal and
    /// merges the neighbors.
    Contraction { vertex: String },
    /// Splits an internal vertex: it keeps the first `keep` edges of its
    /// counterclockwise rotation and the rest move to a new vertex, joined
    /// through a new bivalent vertex of the opposite color.
    Expansion { vertex: String, keep: usize },
    /// Inserts a bivalent vertex next to every boundary vertex, which swaps
    /// the boundary color.
    BoundaryAdd,
    /// Removes every boundary vertex whose neighbor is bivalent; the
    /// neighbor becomes the new boundary vertex.
    BoundaryRemove,
    /// Urban renewal at an internal quadrilateral face.
    Square { face: usize },
}

/// Applies a move. New edges carry unit weight except in the square move,
/// whose inner square carries the renewed weights; the square move is
/// certified by comparing Plücker vectors before and after.
pub fn apply_move(net: &Network, mv: &Move) -> Result<Network, WeightError> {
    match mv {
        Move::Contraction { vertex } => contraction(net, vertex),
        Move::Expansion { vertex, keep } => expansion(net, vertex, *keep),
        Move::BoundaryAdd => boundary_add(net),
        Move::BoundaryRemove => boundary_remove(net),
        Move::Square { face } => {
            let out = square_move(net, *face)?;
            let before = crate::kasteleyn::network_plucker(net).map_err(|_| WeightError::CertificationFailed)?;
            let after = crate::kasteleyn::network_plucker(&out).map_err(|_| WeightError::CertificationFailed)?;
            if !before.projectively_equal(&after) {
                return Err(WeightError::CertificationFailed);
            }
            Ok(out)
        }
    }
}

fn site(g: &PlanarBipartiteGraph, id: &str) -> Result<usize, WeightError> {
    g.vertex_index(id)
        .ok_or_else(|| WeightError::MoveSiteMismatch(format!("unknown vertex `{id}`")))
}

/// Rebuilds a network from an edited description and an id-keyed weight map.
fn rebuild(spec: GraphSpec, weights: &BTreeMap<String, Rational>) -> Result<Network, WeightError> {
    let graph = build_keeping_planar_positions(spec)?;
    let t = graph
        .edges()
        .iter()
        .map(|e| weights.get(&e.id).cloned().unwrap_or_else(Rational::one))
        .collect();
    Network::new(graph, t)
}

fn weight_map(net: &Network) -> BTreeMap<String, Rational> {
    net.graph
        .edges()
        .iter()
        .zip(&net.weights)
        .map(|(e, w)| (e.id.clone(), w.clone()))
        .collect()
}

fn contraction(net: &Network, id: &str) -> Result<Network, WeightError> {
    let g = &net.graph;
    let m = site(g, id)?;
    if g.is_boundary(m) || g.degree(m) != 2 {
        return Err(WeightError::MoveSiteMismatch(format!("`{id}` is not an internal bivalent vertex")));
    }
    let (ea, eb) = (g.rotation(m)[0], g.rotation(m)[1]);
    let (ua, ub) = (g.other_end(ea, m), g.other_end(eb, m));
    if ua == ub || g.is_boundary(ua) || g.is_boundary(ub) {
        return Err(WeightError::MoveSiteMismatch(format!(
            "neighbors of `{id}` must be two distinct internal vertices"
        )));
    }
    // The vertex listed first survives.
    let (s, es, r, er) = if ua < ub { (ua, ea, ub, eb) } else { (ub, eb, ua, ea) };
    let mut weights = weight_map(net);
    let factor = &net.weights[es] / &net.weights[er];
    for &e in g.rotation(r) {
        if e != er {
            *weights.get_mut(&g.edge(e).id).expect("edge") *= &factor;
        }
    }
    let mut spec = g.to_spec();
    let mut rotation = spec.rotation.take().expect("explicit rotation");
    let sid = g.vertex(s).id.clone();
    let rid = g.vertex(r).id.clone();
    let es_id = g.edge(es).id.clone();
    let er_id = g.edge(er).id.clone();
    let rot_r = rotation.remove(&rid).expect("rotation");
    let i = rot_r.iter().position(|x| *x == er_id).expect("incident");
    let spliced: Vec<String> = (1..rot_r.len()).map(|k| rot_r[(i + k) % rot_r.len()].clone()).collect();
    let rot_s = rotation.get_mut(&sid).expect("rotation");
    let j = rot_s.iter().position(|x| *x == es_id).expect("incident");
    rot_s.splice(j..=j, spliced);
    rotation.remove(id);
    spec.vertices.retain(|v| v.id != id && v.id != rid);
    spec.edges.retain(|e| e.id != es_id && e.id != er_id);
    for e in &mut spec.edges {
        for end in &mut e.ends {
            if *end == rid {
                *end = sid.clone();
            }
        }
    }
    spec.rotation = Some(rotation);
    rebuild(spec, &weights)
}

fn expansion(net: &Network, id: &str, keep: usize) -> Result<Network, WeightError> {
    let g = &net.graph;
    let v = site(g, id)?;
    if g.is_boundary(v) || keep == 0 || keep >= g.degree(v) {
        return Err(WeightError::MoveSiteMismatch(format!(
            "cannot split `{id}` keeping {keep} of {} edges",
            g.degree(v)
        )));
    }
    let mut spec = g.to_spec();
    let mut rotation = spec.rotation.take().expect("explicit rotation");
    let mut taken = taken_ids(&spec);
    split_vertex(&mut spec, &mut rotation, &mut taken, id, keep);
    spec.rotation = Some(rotation);
    rebuild(spec, &weight_map(net))
}

fn boundary_add(net: &Network) -> Result<Network, WeightError> {
    let g = &net.graph;
    let mut spec = g.to_spec();
    let mut rotation = spec.rotation.take().expect("explicit rotation");
    let mut taken = taken_ids(&spec);
    let mut order = Vec::with_capacity(g.n());
    for &b in g.boundary() {
        let bid = g.vertex(b).id.clone();
        let e = g.rotation(b)[0];
        let u = g.other_end(e, b);
        let nb = fresh_id(&mut taken, &bid);
        let ne = fresh_id(&mut taken, &format!("{bid}-e"));
        let old_pos = g.vertex(b).position.clone();
        let mid = match (&old_pos, &g.vertex(u).position) {
            (Some(p), Some(q)) => Some(p.add(q).scale(&ratio(1, 2))),
            _ => None,
        };
        let entry = spec.vertices.iter_mut().find(|x| x.id == bid).expect("vertex");
        entry.kind = VertexKind::Internal;
        entry.position = mid;
        spec.vertices.push(VertexSpec {
            id: nb.clone(),
            color: g.vertex(b).color.other(),
            kind: VertexKind::Boundary,
            position: old_pos,
        });
        spec.edges.push(EdgeSpec {
            id: ne.clone(),
            ends: [bid.clone(), nb.clone()],
        });
        rotation.insert(bid.clone(), vec![g.edge(e).id.clone(), ne.clone()]);
        rotation.insert(nb.clone(), vec![ne]);
        order.push(nb);
    }
    spec.boundary_order = order;
    spec.rotation = Some(rotation);
    rebuild(spec, &weight_map(net))
}

fn boundary_remove(net: &Network) -> Result<Network, WeightError> {
    let g = &net.graph;
    let mut weights = weight_map(net);
    let mut spec = g.to_spec();
    let mut rotation = spec.rotation.take().expect("explicit rotation");
    let mut order = Vec::with_capacity(g.n());
    let mut used = BTreeSet::new();
    for &b in g.boundary() {
        let e = g.rotation(b)[0];
        let u = g.other_end(e, b);
        if g.is_boundary(u) || g.degree(u) != 2 || !used.insert(u) {
            return Err(WeightError::MoveSiteMismatch(format!(
                "neighbor of `{}` is not a bivalent internal vertex",
                g.vertex(b).id
            )));
        }
        let other = g.rotation(u).iter().copied().find(|&x| x != e).expect("bivalent");
        if g.is_boundary(g.other_end(other, u)) {
            return Err(WeightError::MoveSiteMismatch(format!(
                "`{}` joins two boundary vertices",
                g.vertex(u).id
            )));
        }
        // Gauge at u so that the removed edge has unit weight.
        let w = weights.get_mut(&g.edge(other).id).expect("edge");
        *w /= &net.weights[e];
        let bid = g.vertex(b).id.clone();
        let uid = g.vertex(u).id.clone();
        let eid = g.edge(e).id.clone();
        let pos = g.vertex(b).position.clone();
        spec.vertices.retain(|x| x.id != bid);
        spec.edges.retain(|x| x.id != eid);
        let entry = spec.vertices.iter_mut().find(|x| x.id == uid).expect("vertex");
        entry.kind = VertexKind::Boundary;
        entry.position = pos;
        rotation.remove(&bid);
        rotation.insert(uid.clone(), vec![g.edge(other).id.clone()]);
        order.push(uid);
    }
    spec.boundary_order = order;
    spec.rotation = Some(rotation);
    rebuild(spec, &weights)
}

/// Urban renewal: the square `v_1 v_2 v_3 v_4` with edge weights `a, b, c, d`
/// (counterclockwise, `a = v_1v_2`) is replaced by legs `v_i u_i` of unit
/// weight and an inner square of swapped colors with weights
/// `u_1u_2 = c/Δ`, `u_2u_3 = d/Δ`, `u_3u_4 = a/Δ`, `u_4u_1 = b/Δ`, where
/// `Δ = ac + bd`.
fn square_move(net: &Network, face: usize) -> Result<Network, WeightError> {
    let g = &net.graph;
    let f = g
        .faces()
        .faces
        .get(face)
        .ok_or_else(|| WeightError::MoveSiteMismatch(format!("no face {face}")))?;
    let vs: Vec<usize> = f.darts.iter().map(|d| d.tail).collect();
    let distinct: BTreeSet<usize> = vs.iter().copied().collect();
    if face == 0 || !f.arcs.is_empty() || f.darts.len() != 4 || distinct.len() != 4 {
        return Err(WeightError::MoveSiteMismatch(format!("face {face} is not an internal square")));
    }
    let es: Vec<usize> = f.darts.iter().map(|d| d.edge).collect();
    let t = |i: usize| net.weights[es[i]].clone();
    let delta = t(0) * t(2) + t(1) * t(3);
    if delta.is_zero() {
        return Err(WeightError::ZeroWeight(format!("square move at face {face}")));
    }
    let inner = [t(2) / &delta, t(3) / &delta, t(0) / &delta, t(1) / &delta];
    let mut weights = weight_map(net);
    let mut spec = g.to_spec();
    let mut rotation = spec.rotation.take().expect("explicit rotation");
    let mut taken = taken_ids(&spec);
    let vid: Vec<String> = vs.iter().map(|&v| g.vertex(v).id.clone()).collect();
    let eid: Vec<String> = es.iter().map(|&e| g.edge(e).id.clone()).collect();
    let uid: Vec<String> = vid.iter().map(|v| fresh_id(&mut taken, v)).collect();
    let legs: Vec<String> = vid.iter().map(|v| fresh_id(&mut taken, &format!("{v}-e"))).collect();
    let sides: Vec<String> = (0..4).map(|i| fresh_id(&mut taken, &format!("{}-e", uid[i]))).collect();
    let centroid = if g.has_positions() {
        let sum = vs
            .iter()
            .fold(Point::new(int(0), int(0)), |a, &v| a.add(g.vertex(v).position.as_ref().expect("positions")));
        Some(sum.scale(&ratio(1, 4)))
    } else {
        None
    };
    for i in 0..4 {
        let v = vs[i];
        let prev = (i + 3) % 4;
        let position = centroid.as_ref().map(|c| {
            let p = g.vertex(v).position.as_ref().expect("positions");
            p.add(&c.sub(p).scale(&ratio(1, 3)))
        });
        spec.vertices.push(VertexSpec {
            id: uid[i].clone(),
            color: g.vertex(v).color.other(),
            kind: VertexKind::Internal,
            position,
        });
        spec.edges.push(EdgeSpec {
            id: legs[i].clone(),
            ends: [vid[i].clone(), uid[i].clone()],
        });
        // At v_i the outgoing square edge immediately precedes the incoming
        // one; both are replaced by the leg.
        let rot = rotation.get_mut(&vid[i]).expect("rotation");
        let j = rot.iter().position(|x| *x == eid[i]).expect("incident");
        let d = rot.len();
        debug_assert_eq!(rot[(j + 1) % d], eid[prev]);
        let mut new_rot: Vec<String> = (2..d).map(|k| rot[(j + k) % d].clone()).collect();
        new_rot.push(legs[i].clone());
        *rot = new_rot;
        rotation.insert(uid[i].clone(), vec![sides[i].clone(), sides[prev].clone(), legs[i].clone()]);
    }
    for i in 0..4 {
        spec.edges.push(EdgeSpec {
            id: sides[i].clone(),
            ends: [uid[i].clone(), uid[(i + 1) % 4].clone()],
        });
        weights.insert(sides[i].clone(), inner[i].clone());
    }
    spec.edges.retain(|e| !eid.contains(&e.id));
    spec.rotation = Some(rotation);
    rebuild(spec, &weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::orientation_for_base;
    use proptest::prelude::*;

    fn ex1_weights(g: &PlanarBipartiteGraph, t11: i64, t21: i64, t53: i64, t72: i64) -> Vec<Rational> {
        g.edges()
            .iter()
            .map(|e| match e.id.as_str() {
                "e01" => int(t11),
                "e11" => int(t21),
                "e34" => int(t53),
                "e26" => int(t72),
                _ => int(1),
            })
            .collect()
    }

    #[test]
    fn example_one_face_weights() {
        let g = corpus::example_one_graph();
        let t = ex1_weights(&g, 2, 3, 5, 7);
        let f = face_weights_from_edge_weights(&g, &t);
        let mut got = f.clone();
        got.sort();
        let mut expected = vec![ratio(1, 5), ratio(1, 3), int(2), int(35)];
        expected.sort();
        assert_eq!(got, expected);
        let back = edge_weights_from_face_weights(&g, &f).unwrap();
        assert_eq!(face_weights_from_edge_weights(&g, &back), f);
        let tree = gauge_tree(&g);
        assert!(tree.iter().zip(&back).all(|(&inside, w)| !inside || w.is_one()));
    }

    #[test]
    fn unit_faces_give_unit_edges() {
        let g = corpus::example_one_graph();
        let t = edge_weights_from_face_weights(&g, &vec![int(1); 4]).unwrap();
        assert!(t.iter().all(One::is_one));
    }

    #[test]
    fn gauge_preserves_faces() {
        let g = corpus::example_one_graph();
        let t = ex1_weights(&g, 2, 3, 5, 7);
        let w1 = g.vertex_index("w1").unwrap();
        let t2 = weight_gauge(&g, &t, w1, &int(2)).unwrap();
        assert_eq!(face_weights_from_edge_weights(&g, &t2), face_weights_from_edge_weights(&g, &t));
        assert_eq!(weight_gauge(&g, &t, w1, &int(1)).unwrap(), t);
        let b1 = g.vertex_index("b1").unwrap();
        assert!(matches!(weight_gauge(&g, &t, b1, &int(2)), Err(WeightError::BoundaryVertexGauge(_))));
    }

    #[test]
    fn directed_weights_of_example_four() {
        let g = corpus::example_one_graph();
        let t = ex1_weights(&g, 2, 3, 5, 7);
        let o = orientation_for_base(&g, &[3, 5]).unwrap().unwrap();
        let d = direct_weights(&g, &t, &o);
        let e01 = g.edge_index("e01").unwrap();
        assert_eq!(d[e01], ratio(1, 2));
        let e11 = g.edge_index("e11").unwrap();
        assert_eq!(d[e11], int(3));
    }

    #[test]
    fn expansion_then_contraction_is_identity() {
        let g = corpus::example_one_graph();
        let net = Network::new(g.clone(), ex1_weights(&g, 2, 3, 5, 7)).unwrap();
        let expanded = apply_move(&net, &Move::Expansion { vertex: "w2".into(), keep: 1 }).unwrap();
        assert_eq!(expanded.graph.edges().len(), 10);
        let mid = expanded
            .graph
            .vertices()
            .iter()
            .position(|v| v.id == "w2.2")
            .unwrap();
        let back = apply_move(&expanded, &Move::Contraction { vertex: expanded.graph.vertex(mid).id.clone() }).unwrap();
        assert_eq!(back.graph.to_spec(), g.to_spec());
        assert_eq!(back.weights, net.weights);
    }

    #[test]
    fn boundary_add_then_remove() {
        let g = corpus::example_one_graph();
        let net = Network::new(g.clone(), ex1_weights(&g, 2, 3, 5, 7)).unwrap();
        let added = apply_move(&net, &Move::BoundaryAdd).unwrap();
        assert_eq!(added.graph.boundary_color(), Color::White);
        assert_eq!(added.graph.edges().len(), 14);
        assert_eq!(added.graph.k(), 2);
        assert_eq!(added.face_weights(), net.face_weights());
        let removed = apply_move(&added, &Move::BoundaryRemove).unwrap();
        assert_eq!(removed.graph.boundary_color(), Color::Black);
        assert_eq!(removed.face_weights(), net.face_weights());
    }

    #[test]
    fn bad_move_sites() {
        let net = Network::unit(corpus::example_one_graph());
        assert!(matches!(
            apply_move(&net, &Move::Contraction { vertex: "w1".into() }),
            Err(WeightError::MoveSiteMismatch(_))
        ));
        assert!(matches!(apply_move(&net, &Move::Square { face: 1 }), Err(WeightError::MoveSiteMismatch(_))));
        assert!(matches!(apply_move(&net, &Move::BoundaryRemove), Err(WeightError::MoveSiteMismatch(_))));
    }

    #[test]
    fn square_move_on_top_cell_keeps_the_point() {
        let l = crate::positroid::LeDiagram {
            k: 2,
            n: 4,
            rows: vec![vec![1, 1], vec![1, 1]],
        };
        let le = Network::unit(crate::positroid::le_graph(&l, false).unwrap());
        let g = apply_move(&le, &Move::Contraction { vertex: "k1.1".into() }).unwrap().graph;
        let squares: Vec<usize> = g
            .faces()
            .finite()
            .filter(|f| f.arcs.is_empty() && f.darts.len() == 4)
            .map(|f| f.id)
            .collect();
        assert!(!squares.is_empty());
        for seed in 0..4 {
            let net = Network::new(g.clone(), sample_positive_weights(&g, seed)).unwrap();
            for &face in &squares {
                let out = apply_move(&net, &Move::Square { face }).unwrap();
                assert!(out.is_positive());
                assert_eq!(out.graph.n(), 4);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn face_edge_round_trip(raw in proptest::collection::vec((1i64..20, 1i64..20), 4)) {
            let g = corpus::example_one_graph();
            let f: Vec<Rational> = raw.iter().map(|&(p, q)| ratio(p, q)).collect();
            let t = edge_weights_from_face_weights(&g, &f).unwrap();
            prop_assert_eq!(face_weights_from_edge_weights(&g, &t), f);
        }

        #[test]
        fn gauges_compose(c1 in 1i64..9, c2 in 1i64..9, seed in 0u64..1000) {
            let g = corpus::example_one_graph();
            let t = sample_positive_weights(&g, seed);
            let w2 = g.vertex_index("w2").unwrap();
            let a = weight_gauge(&g, &weight_gauge(&g, &t, w2, &int(c1)).unwrap(), w2, &int(c2)).unwrap();
            let b = weight_gauge(&g, &t, w2, &int(c1 * c2)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
