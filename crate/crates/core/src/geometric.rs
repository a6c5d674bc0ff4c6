//! Gauge rays, winding and intersection numbers, flows, edge vectors and the
//! geometric signature of a perfectly oriented graph with black boundary.
//!
//! All sign decisions use exact rational cross products. Graphs without
//! coordinates can be given a straight-line layout with
//! [`ensure_positions`].

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{GeometryError, GraphError};
use crate::geometry::{cross_sign, dot, ray_contains, ray_segment, Point, RayHit};
use crate::graph::{build_graph, positions_are_planar, Color, PerfectOrientation, PlanarBipartiteGraph};
use crate::kasteleyn::{signatures_equivalent, Signature};
use crate::linalg::{solve, Matrix};
use crate::rational::{int, Rational};
use crate::weights::direct_weights;

/// Direction `𝔩` together with the base whose sources emit the rays.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeRay {
    pub direction: Point,
    /// Boundary labels of the sources, increasing.
    pub sources: Vec<usize>,
}

fn position(g: &PlanarBipartiteGraph, v: usize) -> Result<&Point, GeometryError> {
    g.vertex(v)
        .position
        .as_ref()
        .ok_or_else(|| GeometryError::MissingCoordinates(g.vertex(v).id.clone()))
}

/// Vector from tail to head of edge `e` under the orientation.
fn edge_vector_geom(g: &PlanarBipartiteGraph, o: &PerfectOrientation, e: usize) -> Result<Point, GeometryError> {
    Ok(position(g, o.head(g, e))?.sub(position(g, o.tail(g, e))?))
}

/// Reason why `l` fails to be a gauge ray direction, if it does.
pub fn ray_violation(g: &PlanarBipartiteGraph, l: &Point) -> Result<Option<String>, GeometryError> {
    if l.is_zero() {
        return Ok(Some("zero direction".into()));
    }
    let n = g.n();
    for (idx, &b) in g.boundary().iter().enumerate() {
        let p = position(g, b)?;
        let e = g.rotation(b)[0];
        let u = g.other_end(e, b);
        let toward = position(g, u)?.sub(p);
        // Tangent of the boundary curve at b, one-sided at the two ends.
        let at = |i: usize| position(g, g.boundary()[i]);
        let tangent = match (idx, n) {
            (_, 1) => Point::new(int(0), int(0)),
            (0, _) => at(1)?.sub(p),
            (i, _) if i == n - 1 => p.sub(at(n - 2)?),
            (i, _) => at(i + 1)?.sub(at(i - 1)?),
        };
        let side = cross_sign(&tangent, &toward);
        let inward = if side == 0 {
            dot(l, &toward).is_positive()
        } else {
            cross_sign(&tangent, l) == side
        };
        if !inward {
            return Ok(Some(format!("ray from `{}` points out of the disk", g.vertex(b).id)));
        }
    }
    for e in g.edges() {
        if g.is_boundary(e.black) || g.is_boundary(e.white) {
            continue;
        }
        let d = position(g, e.white)?.sub(position(g, e.black)?);
        if cross_sign(l, &d) == 0 {
            return Ok(Some(format!("internal edge `{}` is parallel to the direction", e.id)));
        }
    }
    for &b in g.boundary() {
        let p = position(g, b)?;
        for v in 0..g.vertices().len() {
            if v != b && ray_contains(p, l, position(g, v)?) {
                return Ok(Some(format!(
                    "ray from `{}` contains vertex `{}`",
                    g.vertex(b).id,
                    g.vertex(v).id
                )));
            }
        }
    }
    Ok(None)
}

/// Primes used as candidate slopes `(1, −q)`.
fn candidate_slopes() -> impl Iterator<Item = i64> {
    (2i64..).filter(|q| (2..*q).take_while(|d| d * d <= *q).all(|d| q % d != 0)).take(200)
}

/// Checks an explicit direction against the three gauge-ray conditions.
pub fn gauge_ray(g: &PlanarBipartiteGraph, o: &PerfectOrientation, direction: Point) -> Result<GaugeRay, GeometryError> {
    if ray_violation(g, &direction)?.is_some() {
        return Err(GeometryError::NoValidRay);
    }
    Ok(GaugeRay {
        direction,
        sources: o.sources.clone(),
    })
}

/// First direction `(1, −q)`, `q = 2, 3, 5, …`, satisfying all conditions.
pub fn choose_gauge_ray(g: &PlanarBipartiteGraph, o: &PerfectOrientation) -> Result<GaugeRay, GeometryError> {
    for q in candidate_slopes() {
        let l = Point::new(int(1), int(-q));
        if ray_violation(g, &l)?.is_none() {
            return Ok(GaugeRay {
                direction: l,
                sources: o.sources.clone(),
            });
        }
    }
    Err(GeometryError::NoValidRay)
}

/// Local winding number of the consecutive oriented edges `(e1, e2)`.
pub fn winding(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    ray: &GaugeRay,
    e1: usize,
    e2: usize,
) -> Result<i8, GeometryError> {
    if o.head(g, e1) != o.tail(g, e2) {
        return Err(GeometryError::NotConsecutive);
    }
    let a = edge_vector_geom(g, o, e1)?;
    let b = edge_vector_geom(g, o, e2)?;
    Ok(winding_of_vectors(&a, &b, &ray.direction))
}

fn winding_of_vectors(a: &Point, b: &Point, l: &Point) -> i8 {
    let s = cross_sign(a, b);
    if s != 0 && cross_sign(a, l) == s && cross_sign(l, b) == s {
        s
    } else {
        0
    }
}

/// Signed count of crossings of the source rays with the oriented edge `e`;
/// a crossing counts `+1` when `(𝔩, e)` is positively oriented.
pub fn intersection_number(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    ray: &GaugeRay,
    e: usize,
) -> Result<i64, GeometryError> {
    let (u, v) = (o.tail(g, e), o.head(g, e));
    let (a, b) = (position(g, u)?, position(g, v)?);
    let d = b.sub(a);
    let mut total = 0i64;
    for &s in &ray.sources {
        let src = g.boundary_vertex(s);
        if src == u || src == v {
            continue;
        }
        match ray_segment(position(g, src)?, &ray.direction, a, b) {
            RayHit::Miss => {}
            RayHit::Cross => total += cross_sign(&ray.direction, &d) as i64,
            RayHit::Degenerate => return Err(GeometryError::SharedVertexOnRay(g.edge(e).id.clone())),
        }
    }
    Ok(total)
}

/// Removes loops from a walk, each time erasing the earliest closed
/// sub-walk between two occurrences of the same edge.
pub fn loop_erase(walk: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &e in walk {
        if let Some(pos) = out.iter().position(|&x| x == e) {
            out.truncate(pos + 1);
        } else {
            out.push(e);
        }
    }
    out
}

/// Winding plus intersection number of a path given as a list of edges.
fn path_sign_exponent(g: &PlanarBipartiteGraph, o: &PerfectOrientation, ray: &GaugeRay, path: &[usize]) -> Result<(i64, i64), GeometryError> {
    let mut wind = 0i64;
    let mut inter = 0i64;
    for (i, &e) in path.iter().enumerate() {
        inter += intersection_number(g, o, ray, e)?;
        if i + 1 < path.len() {
            wind += winding(g, o, ray, e, path[i + 1])? as i64;
        }
    }
    Ok((wind, inter))
}

/// Vertex-disjoint union of simple directed cycles with its weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservativeFlow {
    pub edges: Vec<usize>,
    #[serde(with = "crate::rational::serde_rational")]
    pub weight: Rational,
}

/// One edge flow: a loop-erased path plus a disjoint conservative flow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeFlow {
    pub path: Vec<usize>,
    pub cycles: Vec<usize>,
    #[serde(with = "crate::rational::serde_rational")]
    pub weight: Rational,
    pub wind: i64,
    pub int: i64,
}

/// Edge flows from one edge to one sink, together with all conservative
/// flows of the graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowFamily {
    pub start_edge: usize,
    pub sink: usize,
    pub flows: Vec<EdgeFlow>,
    pub conservative: Vec<ConservativeFlow>,
}

impl FlowFamily {
    /// `Σ_F (−1)^{wind+int} w(F) / Σ_C w(C)`.
    pub fn value(&self) -> Rational {
        let num: Rational = self
            .flows
            .iter()
            .map(|f| if (f.wind + f.int).rem_euclid(2) == 0 { f.weight.clone() } else { -f.weight.clone() })
            .sum();
        let den: Rational = self.conservative.iter().map(|c| c.weight.clone()).sum();
        num / den
    }
}

fn check_limit(count: usize, limit: usize) -> Result<(), GeometryError> {
    if count > limit {
        Err(GeometryError::Graph(GraphError::EnumerationLimitExceeded(limit)))
    } else {
        Ok(())
    }
}

/// Simple directed cycles avoiding boundary-incident edges, each as an edge
/// list starting at its smallest vertex.
fn simple_cycles(g: &PlanarBipartiteGraph, o: &PerfectOrientation, limit: usize) -> Result<Vec<Vec<usize>>, GeometryError> {
    let usable = |e: usize| !g.is_boundary(g.edge(e).black) && !g.is_boundary(g.edge(e).white);
    let nv = g.vertices().len();
    let mut cycles = Vec::new();
    for start in 0..nv {
        if g.is_boundary(start) {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>, BTreeSet<usize>)> = vec![(start, vec![], BTreeSet::from([start]))];
        while let Some((v, path, seen)) = stack.pop() {
            for e in o.out_edges(g, v) {
                if !usable(e) {
                    continue;
                }
                let w = o.head(g, e);
                if w == start {
                    let mut c = path.clone();
                    c.push(e);
                    cycles.push(c);
                    check_limit(cycles.len(), limit)?;
                } else if w > start && !seen.contains(&w) {
                    let mut p = path.clone();
                    p.push(e);
                    let mut s = seen.clone();
                    s.insert(w);
                    stack.push((w, p, s));
                }
            }
        }
    }
    cycles.sort();
    Ok(cycles)
}

fn cycle_vertices(g: &PlanarBipartiteGraph, o: &PerfectOrientation, c: &[usize]) -> BTreeSet<usize> {
    c.iter().map(|&e| o.tail(g, e)).collect()
}

/// All conservative flows (vertex-disjoint unions of simple cycles away from
/// the boundary), the empty flow first.
pub fn conservative_flows(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    directed: &[Rational],
    limit: usize,
) -> Result<Vec<ConservativeFlow>, GeometryError> {
    let cycles = simple_cycles(g, o, limit)?;
    let verts: Vec<BTreeSet<usize>> = cycles.iter().map(|c| cycle_vertices(g, o, c)).collect();
    let mut out = Vec::new();
    fn rec(
        i: usize,
        chosen: &mut Vec<usize>,
        used: &mut BTreeSet<usize>,
        verts: &[BTreeSet<usize>],
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<(), GeometryError> {
        if i == verts.len() {
            out.push(chosen.clone());
            return check_limit(out.len(), limit);
        }
        rec(i + 1, chosen, used, verts, out, limit)?;
        if verts[i].is_disjoint(used) {
            chosen.push(i);
            used.extend(verts[i].iter().copied());
            rec(i + 1, chosen, used, verts, out, limit)?;
            for v in &verts[i] {
                used.remove(v);
            }
            chosen.pop();
        }
        Ok(())
    }
    let mut families = Vec::new();
    rec(0, &mut Vec::new(), &mut BTreeSet::new(), &verts, &mut families, limit)?;
    families.sort_by_key(|f| f.len());
    for f in families {
        let mut edges: Vec<usize> = f.iter().flat_map(|&i| cycles[i].iter().copied()).collect();
        edges.sort_unstable();
        let weight = edges.iter().fold(Rational::one(), |acc, &e| acc * &directed[e]);
        out.push(ConservativeFlow { edges, weight });
    }
    Ok(out)
}

/// Simple directed paths starting with edge `e` and ending at a boundary
/// sink.
fn simple_paths_from(g: &PlanarBipartiteGraph, o: &PerfectOrientation, e: usize, limit: usize) -> Result<Vec<Vec<usize>>, GeometryError> {
    let mut out = Vec::new();
    let start = o.tail(g, e);
    let mut stack = vec![(vec![e], BTreeSet::from([start, o.head(g, e)]))];
    while let Some((path, seen)) = stack.pop() {
        let v = o.head(g, *path.last().expect("nonempty"));
        if g.is_boundary(v) {
            out.push(path);
            check_limit(out.len(), limit)?;
            continue;
        }
        for f in o.out_edges(g, v) {
            let w = o.head(g, f);
            if !seen.contains(&w) {
                let mut p = path.clone();
                p.push(f);
                let mut s = seen.clone();
                s.insert(w);
                stack.push((p, s));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Enumerates the edge flows from the oriented edge `e` to the sink with
/// boundary label `sink`.
pub fn enumerate_flows(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    ray: &GaugeRay,
    t: &[Rational],
    e: usize,
    sink: usize,
    limit: usize,
) -> Result<FlowFamily, GeometryError> {
    let directed = direct_weights(g, t, o);
    let conservative = conservative_flows(g, o, &directed, limit)?;
    flows_with(g, o, ray, &directed, &conservative, e, limit).map(|mut all| {
        let target = g.boundary_vertex(sink);
        all.retain(|(end, _)| *end == target);
        FlowFamily {
            start_edge: e,
            sink,
            flows: all.into_iter().map(|(_, f)| f).collect(),
            conservative,
        }
    })
}

fn flows_with(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    ray: &GaugeRay,
    directed: &[Rational],
    conservative: &[ConservativeFlow],
    e: usize,
    limit: usize,
) -> Result<Vec<(usize, EdgeFlow)>, GeometryError> {
    let mut out = Vec::new();
    for path in simple_paths_from(g, o, e, limit)? {
        let end = o.head(g, *path.last().expect("nonempty"));
        let on_path: BTreeSet<usize> = path.iter().flat_map(|&x| [o.tail(g, x), o.head(g, x)]).collect();
        let (wind, inter) = path_sign_exponent(g, o, ray, &path)?;
        let pw = path.iter().fold(Rational::one(), |acc, &x| acc * &directed[x]);
        for c in conservative {
            let touches = c.edges.iter().any(|&x| on_path.contains(&o.tail(g, x)));
            if touches {
                continue;
            }
            out.push((
                end,
                EdgeFlow {
                    path: path.clone(),
                    cycles: c.edges.clone(),
                    weight: &pw * &c.weight,
                    wind,
                    int: inter,
                },
            ));
            check_limit(out.len(), limit)?;
        }
    }
    Ok(out)
}

/// The vector `(Σ_F (−1)^{wind+int} w(F) / Σ_C w(C))_j` over boundary sinks
/// `j`, for flows starting with the oriented edge `e`.
pub fn edge_flow_vector(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    ray: &GaugeRay,
    t: &[Rational],
    e: usize,
    limit: usize,
) -> Result<Vec<Rational>, GeometryError> {
    let directed = direct_weights(g, t, o);
    let conservative = conservative_flows(g, o, &directed, limit)?;
    let den: Rational = conservative.iter().map(|c| c.weight.clone()).sum();
    let mut out = vec![Rational::zero(); g.n()];
    for (end, f) in flows_with(g, o, ray, &directed, &conservative, e, limit)? {
        let j = g.boundary_label(end).expect("paths end on the boundary");
        let term = if (f.wind + f.int).rem_euclid(2) == 0 { f.weight } else { -f.weight };
        out[j - 1] += term;
    }
    Ok(out.into_iter().map(|x| x / &den).collect())
}

/// Edge vector `E_b` of a black vertex: the flow vector of its unique
/// outgoing edge, or the canonical vector at a boundary sink. At a source
/// `b_{i_r}` this equals `A[r] − E_{i_r}`.
pub fn edge_vector(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    ray: &GaugeRay,
    t: &[Rational],
    b: usize,
    limit: usize,
) -> Result<Vec<Rational>, GeometryError> {
    let out = o.out_edges(g, b);
    match out.first() {
        Some(&e) => edge_flow_vector(g, o, ray, t, e, limit),
        None => {
            let j = g.boundary_label(b).ok_or_else(|| GeometryError::Graph(GraphError::NotPerfectOrientation(
                format!("black vertex `{}` has no outgoing edge", g.vertex(b).id),
            )))?;
            let mut v = vec![Rational::zero(); g.n()];
            v[j - 1] = Rational::one();
            Ok(v)
        }
    }
}

/// Boundary measurement matrix `A` with rows `E_{b_{i_r}} + E_{i_r}`.
pub fn boundary_measurement_matrix(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    ray: &GaugeRay,
    t: &[Rational],
    limit: usize,
) -> Result<Matrix<Rational>, GeometryError> {
    let mut rows = Vec::new();
    for &i in &ray.sources {
        let mut row = edge_vector(g, o, ray, t, g.boundary_vertex(i), limit)?;
        row[i - 1] += Rational::one();
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, g.n()));
    }
    Ok(Matrix::from_rows(rows))
}

/// Geometric signature `ε(e) ∈ {0, 1}` per edge.
///
/// For `e = u → v`: `int(e) + 1` when `u` is a boundary source, `int(e)`
/// when `v` is white, `1 + int(e) + wind(e₁, e) + wind(e, e₅)` when `v` is an
/// internal black vertex, and `1 + int(e) + wind(e₁, e)` when `v` is a
/// boundary sink, all mod 2. Here `e₁` is the unique edge entering the white
/// vertex `u` and `e₅` the unique edge leaving the black vertex `v`.
pub fn geometric_signature(g: &PlanarBipartiteGraph, o: &PerfectOrientation, ray: &GaugeRay) -> Result<Vec<u8>, GeometryError> {
    let mut eps = Vec::with_capacity(g.edges().len());
    for e in 0..g.edges().len() {
        let (u, v) = (o.tail(g, e), o.head(g, e));
        let ie = intersection_number(g, o, ray, e)?;
        let value = if g.is_boundary(u) {
            ie + 1
        } else if g.vertex(v).color == Color::White {
            ie
        } else {
            let e1 = o.in_edges(g, u)[0];
            let mut x = 1 + ie + winding(g, o, ray, e1, e)? as i64;
            if !g.is_boundary(v) {
                let e5 = o.out_edges(g, v)[0];
                x += winding(g, o, ray, e, e5)? as i64;
            }
            x
        };
        eps.push(value.rem_euclid(2) as u8);
    }
    Ok(eps)
}

/// `σ(e) = (−1)^{ε(e)}`.
pub fn signature_from_epsilon(eps: &[u8]) -> Signature {
    eps.iter().map(|&x| if x == 0 { 1 } else { -1 }).collect()
}

/// Face totals of a geometric signature mod 2, finite faces in order.
pub fn epsilon_face_totals(g: &PlanarBipartiteGraph, eps: &[u8]) -> Vec<u8> {
    g.faces()
        .finite()
        .map(|f| (f.darts.iter().map(|d| eps[d.edge] as usize).sum::<usize>() % 2) as u8)
        .collect()
}

/// Comparison of a Kasteleyn and a geometric signature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    /// Vertex gauge `α` with `σ(e) (−1)^{ε(e)} = α(b) α(w)`, when it exists.
    pub gauge: Option<Vec<i8>>,
    /// Per finite face: `σ(Ω)` and `(−1)^{ε(Ω)}`.
    pub faces: Vec<(usize, i8, i8)>,
    pub equivalent: bool,
}

/// Checks that `σ` and `(−1)^ε` differ by a boundary-trivial vertex gauge.
pub fn verify_kasteleyn_geometric(g: &PlanarBipartiteGraph, sigma: &[i8], eps: &[u8]) -> EquivalenceReport {
    let geo = signature_from_epsilon(eps);
    let gauge = signatures_equivalent(g, sigma, &geo);
    let faces: Vec<(usize, i8, i8)> = g
        .faces()
        .finite()
        .map(|f| {
            let s: i8 = f.darts.iter().map(|d| sigma[d.edge]).product();
            let x: i8 = f.darts.iter().map(|d| geo[d.edge]).product();
            (f.id, s, x)
        })
        .collect();
    let equivalent = gauge.is_some() && faces.iter().all(|(_, a, b)| a == b);
    EquivalenceReport { gauge, faces, equivalent }
}

/// Straight-line layout: boundary vertices on a flat concave arc with the
/// disk below it, internal vertices at the barycenter of their neighbors. Fails when the result is
/// not an embedding of the given rotation system.
pub fn tutte_layout(g: &PlanarBipartiteGraph) -> Result<Vec<Point>, GeometryError> {
    let n = g.n() as i64;
    let nv = g.vertices().len();
    let internal: Vec<usize> = (0..nv).filter(|&v| !g.is_boundary(v)).collect();
    let index: BTreeMap<usize, usize> = internal.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut fixed: BTreeMap<usize, Point> = BTreeMap::new();
    for j in 1..=n {
        let v = g.boundary_vertex(j as usize);
        fixed.insert(v, Point::new(int(2 * n * j), int(-(2 * j - n - 1).pow(2))));
    }
    let m = internal.len();
    let mut a = Matrix::zeros(m, m);
    let mut rhs = Matrix::zeros(m, 2);
    for (i, &v) in internal.iter().enumerate() {
        let nbrs: Vec<usize> = g.rotation(v).iter().map(|&e| g.other_end(e, v)).collect();
        a[(i, i)] = int(nbrs.len() as i64);
        for u in nbrs {
            match index.get(&u) {
                Some(&j) => a[(i, j)] = &a[(i, j)] - int(1),
                None => {
                    let p = &fixed[&u];
                    rhs[(i, 0)] = &rhs[(i, 0)] + &p.x;
                    rhs[(i, 1)] = &rhs[(i, 1)] + &p.y;
                }
            }
        }
    }
    let sol = if m > 0 {
        solve(&a, &rhs).map_err(|_| GeometryError::LayoutFailed("singular barycentric system".into()))?
    } else {
        Matrix::zeros(0, 2)
    };
    let mut pos = vec![Point::new(int(0), int(0)); nv];
    for (v, p) in fixed {
        pos[v] = p;
    }
    for (i, &v) in internal.iter().enumerate() {
        pos[v] = Point::new(sol[(i, 0)].clone(), sol[(i, 1)].clone());
    }
    Ok(pos)
}

/// The graph itself when it has coordinates, otherwise a copy carrying the
/// [`tutte_layout`] positions.
pub fn ensure_positions(g: &PlanarBipartiteGraph) -> Result<PlanarBipartiteGraph, GeometryError> {
    if g.has_positions() {
        return Ok(g.clone());
    }
    let pos = tutte_layout(g)?;
    let mut spec = g.to_spec();
    for vs in spec.vertices.iter_mut() {
        let v = g.vertex_index(&vs.id).expect("same graph");
        vs.position = Some(pos[v].clone());
    }
    let laid = build_graph(&spec)?;
    if !positions_are_planar(&laid) {
        return Err(GeometryError::LayoutFailed(
            "barycentric layout does not realize the rotation system".into(),
        ));
    }
    Ok(laid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::orientation_for_base;
    use crate::kasteleyn::{construct_signature, is_kasteleyn, kasteleyn_matrix, plucker_from_matrix};
    use crate::weights::sample_positive_weights;

    fn ex1_weights(g: &PlanarBipartiteGraph, t11: Rational, t21: Rational, t53: Rational, t72: Rational) -> Vec<Rational> {
        g.edges()
            .iter()
            .map(|e| match e.id.as_str() {
                "e01" => t11.clone(),
                "e11" => t21.clone(),
                "e34" => t53.clone(),
                "e26" => t72.clone(),
                _ => int(1),
            })
            .collect()
    }

    fn ex4() -> (PlanarBipartiteGraph, PerfectOrientation, GaugeRay) {
        let g = corpus::example_one_graph();
        let o = orientation_for_base(&g, &[3, 5]).unwrap().unwrap();
        let ray = choose_gauge_ray(&g, &o).unwrap();
        (g, o, ray)
    }

    #[test]
    fn example_four_ray_numbers() {
        let (g, o, ray) = ex4();
        assert_eq!(ray.direction, Point::new(int(1), int(-2)));
        assert_eq!(ray.sources, vec![3, 5]);
        let e = |id: &str| g.edge_index(id).unwrap();
        assert_eq!(intersection_number(&g, &o, &ray, e("e32")).unwrap(), 1);
        assert_eq!(intersection_number(&g, &o, &ray, e("e20")).unwrap(), -1);
        assert_eq!(intersection_number(&g, &o, &ray, e("e12")).unwrap(), -1);
        assert_eq!(winding(&g, &o, &ray, e("e32"), e("e20")).unwrap(), -1);
        assert_eq!(winding(&g, &o, &ray, e("e01"), e("e12")).unwrap(), 0);
        assert_eq!(winding(&g, &o, &ray, e("e01"), e("e32")), Err(GeometryError::NotConsecutive));
    }

    #[test]
    fn example_four_epsilon() {
        let (g, o, ray) = ex4();
        let eps = geometric_signature(&g, &o, &ray).unwrap();
        let expected = [
            ("e11", 0),
            ("e12", 0),
            ("e01", 0),
            ("e20", 1),
            ("e32", 0),
            ("e26", 1),
            ("e34", 1),
            ("e53", 1),
        ];
        for (id, x) in expected {
            assert_eq!(eps[g.edge_index(id).unwrap()], x, "{id}");
        }
        let sigma = signature_from_epsilon(&eps);
        assert!(is_kasteleyn(&g, &sigma));
        let report = verify_kasteleyn_geometric(&g, &construct_signature(&g).unwrap(), &eps);
        assert!(report.equivalent);
    }

    #[test]
    fn example_four_boundary_measurement() {
        let (g, o, ray) = ex4();
        let (t11, t21, t53, t72) = (int(2), int(3), int(5), int(7));
        let t = ex1_weights(&g, t11.clone(), t21.clone(), t53.clone(), t72.clone());
        let a = boundary_measurement_matrix(&g, &o, &ray, &t, 10_000).unwrap().to_rows();
        let o1 = int(1);
        let z = int(0);
        assert_eq!(a[0], vec![&t21 / &t11, &o1 / &t11, o1.clone(), z.clone(), z.clone(), -t72.clone()]);
        assert_eq!(a[1], vec![z.clone(), z.clone(), z.clone(), t53.clone(), o1.clone(), z.clone()]);
        let b0 = g.vertex_index("b0").unwrap();
        let v = edge_vector(&g, &o, &ray, &t, b0, 10_000).unwrap();
        assert_eq!(v, vec![-(&t21 / &t11), -(&o1 / &t11), z.clone(), z.clone(), z.clone(), z.clone()]);
        let sigma = construct_signature(&g).unwrap();
        let km = kasteleyn_matrix(&g, &sigma, &t).unwrap();
        assert!(plucker_from_matrix(&Matrix::from_rows(a)).projectively_equal(&km.plucker_vector()));
    }

    #[test]
    fn acyclic_orientation_has_trivial_denominator() {
        let (g, o, _) = ex4();
        let directed = direct_weights(&g, &vec![int(1); 8], &o);
        let c = conservative_flows(&g, &o, &directed, 100).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].edges.is_empty());
    }

    #[test]
    fn loop_erasure_removes_first_loop() {
        assert_eq!(loop_erase(&[1, 2, 3, 4, 2, 5]), vec![1, 2, 5]);
        assert_eq!(loop_erase(&[1, 2, 3]), vec![1, 2, 3]);
    }

    #[test]
    fn parallel_direction_is_rejected() {
        let (g, o, _) = ex4();
        assert!(ray_violation(&g, &Point::new(int(1), int(0))).unwrap().is_some());
        assert_eq!(gauge_ray(&g, &o, Point::new(int(-1), int(-2))), Err(GeometryError::NoValidRay));
    }

    #[test]
    fn le_graph_bases_agree_with_kasteleyn() {
        let l = crate::positroid::LeDiagram {
            k: 2,
            n: 4,
            rows: vec![vec![1, 1], vec![1, 1]],
        };
        let g = crate::positroid::le_graph(&l, false).unwrap();
        let t = sample_positive_weights(&g, 7);
        let sigma = construct_signature(&g).unwrap();
        let kas = kasteleyn_matrix(&g, &sigma, &t).unwrap().plucker_vector();
        for base in [vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 4]] {
            let o = orientation_for_base(&g, &base).unwrap().unwrap();
            let ray = choose_gauge_ray(&g, &o).unwrap();
            let a = boundary_measurement_matrix(&g, &o, &ray, &t, 10_000).unwrap();
            assert!(plucker_from_matrix(&a).projectively_equal(&kas), "base {base:?}");
            let eps = geometric_signature(&g, &o, &ray).unwrap();
            assert!(verify_kasteleyn_geometric(&g, &sigma, &eps).equivalent);
        }
    }

    #[test]
    fn tutte_layout_of_example_one() {
        let g = corpus::example_one_graph();
        let mut spec = g.to_spec();
        for v in spec.vertices.iter_mut() {
            v.position = None;
        }
        let bare = build_graph(&spec).unwrap();
        let laid = ensure_positions(&bare).unwrap();
        assert!(positions_are_planar(&laid));
        let o = orientation_for_base(&laid, &[3, 5]).unwrap().unwrap();
        let ray = choose_gauge_ray(&laid, &o).unwrap();
        let eps = geometric_signature(&laid, &o, &ray).unwrap();
        assert!(is_kasteleyn(&laid, &signature_from_epsilon(&eps)));
    }
}
