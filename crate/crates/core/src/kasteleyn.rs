//! Kasteleyn signatures, weighted Kasteleyn matrices and their minors.
//!
//! A signature assigns ±1 to every edge; it is Kasteleyn when the product
//! around every finite face `Ω` equals `(−1)^{|Ω|/2+1}`. The weighted matrix
//! has black rows (internal in canonical order, then boundary clockwise) and
//! white columns, with entry `σ(e) t_e` on each edge.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{GraphError, KasteleynError};
use crate::graph::{dual_graph, enumerate_matchings, Color, PlanarBipartiteGraph};
use crate::linalg::{det_bareiss, rref_at, Matrix};
use crate::positroid::complement;
use crate::rational::{int, Rational};
use crate::weights::{face_exponents, gauge_tree, solve_face_system, Network};

/// One ±1 value per edge, indexed like the graph's edges.
pub type Signature = Vec<i8>;

/// Solves for a signature whose face products equal `targets` on the finite
/// faces, with +1 on the gauge tree.
pub(crate) fn signature_with_targets(g: &PlanarBipartiteGraph, targets: &[i8]) -> Result<Signature, KasteleynError> {
    let t: Vec<Rational> = targets.iter().map(|&s| int(s as i64)).collect();
    let free: Vec<bool> = gauge_tree(g).iter().map(|x| !x).collect();
    let solved = solve_face_system(g, &t, vec![Rational::one(); g.edges().len()], &free)
        .map_err(|_| KasteleynError::NoSignature)?;
    Ok(solved.iter().map(|x| if x.is_negative() { -1 } else { 1 }).collect())
}

/// Required face product `(−1)^{|Ω|/2+1}` of a finite face.
pub fn kasteleyn_target(edge_count: usize) -> i8 {
    if (edge_count / 2 + 1) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A Kasteleyn signature: +1 on a spanning tree of the graph with the
/// boundary identified, the remaining edges fixed face by face.
pub fn construct_signature(g: &PlanarBipartiteGraph) -> Result<Signature, KasteleynError> {
    let targets: Vec<i8> = g.faces().finite().map(|f| kasteleyn_target(f.edge_count)).collect();
    let s = signature_with_targets(g, &targets)?;
    if !is_kasteleyn(g, &s) {
        return Err(KasteleynError::NoSignature);
    }
    Ok(s)
}

/// Outcome of the face condition at one finite face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceCheck {
    pub face: usize,
    pub edge_count: usize,
    pub product: i8,
    pub expected: i8,
    pub passes: bool,
}

/// Product of a signature around face `face`.
pub fn face_sign(g: &PlanarBipartiteGraph, sigma: &[i8], face: usize) -> i8 {
    g.faces().faces[face].darts.iter().map(|d| sigma[d.edge]).product()
}

/// Checks the face condition on every finite face.
pub fn validate_signature(g: &PlanarBipartiteGraph, sigma: &[i8]) -> Vec<FaceCheck> {
    g.faces()
        .finite()
        .map(|f| {
            let product = face_sign(g, sigma, f.id);
            let expected = kasteleyn_target(f.edge_count);
            FaceCheck {
                face: f.id,
                edge_count: f.edge_count,
                product,
                expected,
                passes: product == expected,
            }
        })
        .collect()
}

/// Whether every finite face passes.
pub fn is_kasteleyn(g: &PlanarBipartiteGraph, sigma: &[i8]) -> bool {
    sigma.len() == g.edges().len() && validate_signature(g, sigma).iter().all(|c| c.passes)
}

/// Applies the vertex gauge `σ'(e) = α(b) σ(e) α(w)`; `α` must be constant on
/// the boundary.
pub fn signature_gauge(g: &PlanarBipartiteGraph, sigma: &[i8], alpha: &[i8]) -> Result<Signature, KasteleynError> {
    let first = alpha[g.boundary()[0]];
    if g.boundary().iter().any(|&b| alpha[b] != first) {
        return Err(KasteleynError::GaugeNotBoundaryConstant);
    }
    Ok(g.edges()
        .iter()
        .enumerate()
        .map(|(i, e)| alpha[e.black] * sigma[i] * alpha[e.white])
        .collect())
}

/// A boundary-constant vertex gauge taking `σ1` to `σ2`, if one exists.
pub fn signatures_equivalent(g: &PlanarBipartiteGraph, s1: &[i8], s2: &[i8]) -> Option<Vec<i8>> {
    let nv = g.vertices().len();
    let mut alpha = vec![0i8; nv];
    let mut stack = Vec::new();
    for &b in g.boundary() {
        alpha[b] = 1;
        stack.push(b);
    }
    while let Some(v) = stack.pop() {
        for &e in g.rotation(v) {
            let u = g.other_end(e, v);
            let want = s1[e] * s2[e] * alpha[v];
            if alpha[u] == 0 {
                alpha[u] = want;
                stack.push(u);
            } else if alpha[u] != want {
                return None;
            }
        }
    }
    Some(alpha)
}

/// Signature obtained from a Le-graph drawing: +1 on horizontal edges, the
/// other edges fixed by peeling faces with a single undetermined edge.
pub fn le_graph_signature(g: &PlanarBipartiteGraph) -> Result<Signature, KasteleynError> {
    if !g.has_positions() {
        return Err(KasteleynError::NoSignature);
    }
    let ne = g.edges().len();
    let mut sigma: Vec<Option<i8>> = g
        .edges()
        .iter()
        .map(|e| {
            let a = g.vertex(e.black).position.as_ref().expect("positions");
            let b = g.vertex(e.white).position.as_ref().expect("positions");
            (a.y == b.y).then_some(1)
        })
        .collect();
    let faces: Vec<(usize, Vec<usize>)> = g
        .faces()
        .finite()
        .map(|f| {
            let exps = face_exponents(g, f.id);
            (f.id, exps.into_keys().collect())
        })
        .collect();
    while sigma.iter().any(Option::is_none) {
        let next = faces
            .iter()
            .find(|(_, es)| es.iter().filter(|&&e| sigma[e].is_none()).count() == 1);
        match next {
            Some((fid, es)) => {
                let e = *es.iter().find(|&&e| sigma[e].is_none()).expect("one unknown");
                let rest: i8 = es.iter().filter(|&&x| x != e).map(|&x| sigma[x].expect("known")).product();
                let want = kasteleyn_target(g.faces().faces[*fid].edge_count);
                sigma[e] = Some(want * rest);
            }
            None => {
                let e = (0..ne).find(|&e| sigma[e].is_none()).expect("undetermined edge");
                sigma[e] = Some(1);
            }
        }
    }
    let s: Signature = sigma.into_iter().map(|x| x.expect("determined")).collect();
    if is_kasteleyn(g, &s) {
        Ok(s)
    } else {
        Err(KasteleynError::NoSignature)
    }
}

/// Maximal minors indexed by sorted `k`-subsets of `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PluckerVector {
    pub k: usize,
    pub n: usize,
    pub entries: BTreeMap<Vec<usize>, Rational>,
}

impl PluckerVector {
    /// Subsets with a nonzero coordinate.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.entries
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i.clone())
            .collect()
    }

    /// Whether `self = c · other` for some nonzero rational `c`.
    pub fn projectively_equal(&self, other: &PluckerVector) -> bool {
        if self.k != other.k || self.n != other.n {
            return false;
        }
        let mut ratio: Option<Rational> = None;
        for (i, a) in &self.entries {
            let b = other.entries.get(i).cloned().unwrap_or_else(Rational::zero);
            match (a.is_zero(), b.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let r = a / &b;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(c) if *c == r => {}
                        Some(_) => return false,
                    }
                }
                _ => return false,
            }
        }
        ratio.is_some() && other.entries.keys().all(|i| self.entries.contains_key(i))
    }

    /// Scaled so that the lexicographically first nonzero coordinate is one.
    pub fn normalized(&self) -> PluckerVector {
        let first = self.entries.values().find(|v| !v.is_zero()).cloned().unwrap_or_else(Rational::one);
        PluckerVector {
            k: self.k,
            n: self.n,
            entries: self.entries.iter().map(|(i, v)| (i.clone(), v / &first)).collect(),
        }
    }

    /// Coordinates re-indexed by complements, `Δ'_{Ī} = Δ_I`.
    pub fn complement(&self) -> PluckerVector {
        PluckerVector {
            k: self.n - self.k,
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (complement(i, self.n), v.clone()))
                .collect(),
        }
    }

    /// Whether all nonzero coordinates share one sign.
    pub fn shares_one_sign(&self) -> bool {
        let nonzero: Vec<&Rational> = self.entries.values().filter(|v| !v.is_zero()).collect();
        nonzero.iter().all(|v| v.is_positive()) || nonzero.iter().all(|v| v.is_negative())
    }
}

/// All maximal minors of a `k × n` matrix.
pub fn plucker_from_matrix(a: &Matrix<Rational>) -> PluckerVector {
    let (k, n) = (a.nrows(), a.ncols());
    let rows: Vec<usize> = (0..k).collect();
    let entries = (0..n)
        .combinations(k)
        .map(|cols| {
            let d = det_bareiss(&a.select(&rows, &cols));
            (cols.iter().map(|c| c + 1).collect(), d)
        })
        .collect();
    PluckerVector { k, n, entries }
}

/// Weighted Kasteleyn matrix with its vertex labels.
///
/// Rows are black vertices and columns white vertices, internal ones first
/// in both cases; the boundary vertices come last on the side of their color.
#[derive(Debug, Clone, PartialEq)]
pub struct KasteleynMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub internal_rows: usize,
    pub internal_cols: usize,
    /// Whether the boundary vertices label rows (black boundary).
    pub boundary_on_rows: bool,
    pub n: usize,
    pub k: usize,
    pub matrix: Matrix<Rational>,
}

impl KasteleynMatrix {
    /// The same matrix read for the color-swapped graph.
    pub fn transposed(&self) -> KasteleynMatrix {
        KasteleynMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            internal_rows: self.internal_cols,
            internal_cols: self.internal_rows,
            boundary_on_rows: !self.boundary_on_rows,
            n: self.n,
            k: self.n - self.k,
            matrix: self.matrix.transpose(),
        }
    }

    /// Row and column indices of the square submatrix for the subset `I`.
    fn minor_indices(&self, subset: &[usize]) -> Result<(Vec<usize>, Vec<usize>), KasteleynError> {
        if subset.len() != self.k || subset.iter().any(|&i| i == 0 || i > self.n) {
            return Err(KasteleynError::BadSubsetSize {
                expected: self.k,
                got: subset.len(),
            });
        }
        if self.boundary_on_rows {
            let rows = (0..self.internal_rows)
                .chain(subset.iter().map(|i| self.internal_rows + i - 1))
                .collect();
            Ok((rows, (0..self.matrix.ncols()).collect()))
        } else {
            let cols = (0..self.internal_cols)
                .chain(complement(subset, self.n).iter().map(|i| self.internal_cols + i - 1))
                .collect();
            Ok(((0..self.matrix.nrows()).collect(), cols))
        }
    }

    /// `Δ_I`: determinant of the internal rows and boundary rows `I` (black
    /// boundary), or of the internal columns and boundary columns `Ī` (white
    /// boundary).
    pub fn minor(&self, subset: &[usize]) -> Result<Rational, KasteleynError> {
        let (r, c) = self.minor_indices(subset)?;
        if r.len() != c.len() {
            return Ok(Rational::zero());
        }
        Ok(det_bareiss(&self.matrix.select(&r, &c)))
    }

    /// All `Δ_I`.
    pub fn plucker_vector(&self) -> PluckerVector {
        let entries = (1..=self.n)
            .combinations(self.k)
            .map(|i| {
                let d = self.minor(&i).expect("subset of size k");
                (i, d)
            })
            .collect();
        PluckerVector {
            k: self.k,
            n: self.n,
            entries,
        }
    }

    /// The `k × n` matrix `A` obtained by reducing `Kᵀ` to the block form
    /// `(Id_N | * ; 0 | A)`, rescaled so that `det A_I = det K_I`.
    pub fn representative_matrix(&self) -> Result<Matrix<Rational>, KasteleynError> {
        if !self.boundary_on_rows {
            return Err(KasteleynError::NeedsBlackBoundary);
        }
        let big_n = self.internal_rows;
        let mut m = self.matrix.transpose();
        let nr = m.nrows();
        let nc = m.ncols();
        let mut factor = Rational::one();
        for c in 0..big_n {
            let p = (c..nr).find(|&r| !m[(r, c)].is_zero()).ok_or(KasteleynError::SingularPivot)?;
            if p != c {
                for j in 0..nc {
                    let tmp = m[(p, j)].clone();
                    m[(p, j)] = m[(c, j)].clone();
                    m[(c, j)] = tmp;
                }
                factor = -factor;
            }
            let piv = m[(c, c)].clone();
            factor *= &piv;
            for j in 0..nc {
                m[(c, j)] = &m[(c, j)] / &piv;
            }
            for r in 0..nr {
                if r != c && !m[(r, c)].is_zero() {
                    let f = m[(r, c)].clone();
                    for j in 0..nc {
                        let v = &m[(c, j)] * &f;
                        m[(r, j)] -= v;
                    }
                }
            }
        }
        let mut a = Matrix::from_fn(self.k, self.n, |i, j| m[(big_n + i, big_n + j)].clone());
        if self.k > 0 {
            for j in 0..self.n {
                a[(0, j)] = &a[(0, j)] * &factor;
            }
        }
        Ok(a)
    }

    /// Reduced row echelon form of the representative matrix with pivots on
    /// the base `I` (labels in `1..=n`).
    pub fn rref_at_base(&self, base: &[usize]) -> Result<Matrix<Rational>, KasteleynError> {
        let a = self.representative_matrix()?;
        let cols: Vec<usize> = base.iter().map(|i| i - 1).collect();
        rref_at(&a, &cols).map_err(|_| KasteleynError::SingularPivot)
    }
}

/// Weighted Kasteleyn matrix with the canonical labeling: the sign of the
/// lexicographically first nonzero minor is made positive by swapping the
/// first two internal rows (or, failing that, the first two columns).
pub fn kasteleyn_matrix(g: &PlanarBipartiteGraph, sigma: &[i8], t: &[Rational]) -> Result<KasteleynMatrix, KasteleynError> {
    if sigma.len() != g.edges().len() {
        return Err(KasteleynError::MissingSignature(format!("{} signs for {} edges", sigma.len(), g.edges().len())));
    }
    let rows = g.vertices_of_color(Color::Black);
    let cols = g.vertices_of_color(Color::White);
    let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut matrix = Matrix::zeros(rows.len(), cols.len());
    for (e, edge) in g.edges().iter().enumerate() {
        let (r, c) = (row_pos[&edge.black], col_pos[&edge.white]);
        let v = int(sigma[e] as i64) * &t[e];
        matrix[(r, c)] = &matrix[(r, c)] + v;
    }
    let boundary_on_rows = g.boundary_color() == Color::Black;
    let mut km = KasteleynMatrix {
        internal_rows: g.internal_vertices(Color::Black).len(),
        internal_cols: g.internal_vertices(Color::White).len(),
        rows,
        cols,
        boundary_on_rows,
        n: g.n(),
        k: g.k(),
        matrix,
    };
    canonicalize(&mut km);
    Ok(km)
}

fn canonicalize(km: &mut KasteleynMatrix) {
    let first = (1..=km.n)
        .combinations(km.k)
        .map(|i| km.minor(&i).expect("subset of size k"))
        .find(|d| !d.is_zero());
    let Some(d) = first else { return };
    if !d.is_negative() {
        return;
    }
    let swap_rows = if km.boundary_on_rows { km.internal_rows >= 2 } else { km.matrix.nrows() >= 2 };
    if swap_rows {
        let m = &mut km.matrix;
        for j in 0..m.ncols() {
            let tmp = m[(0, j)].clone();
            m[(0, j)] = m[(1, j)].clone();
            m[(1, j)] = tmp;
        }
        km.rows.swap(0, 1);
    } else if km.internal_cols >= 2 || (km.boundary_on_rows && km.matrix.ncols() >= 2) {
        let m = &mut km.matrix;
        for i in 0..m.nrows() {
            let tmp = m[(i, 0)].clone();
            m[(i, 0)] = m[(i, 1)].clone();
            m[(i, 1)] = tmp;
        }
        km.cols.swap(0, 1);
    }
}

/// Plücker vector of a network using a constructed Kasteleyn signature.
pub fn network_plucker(net: &Network) -> Result<PluckerVector, KasteleynError> {
    let sigma = construct_signature(&net.graph)?;
    Ok(kasteleyn_matrix(&net.graph, &sigma, &net.weights)?.plucker_vector())
}

/// Dimer partition functions `D_I = Σ_{∂M = I} ∏_{e∈M} t_e`.
pub fn dimer_partition(g: &PlanarBipartiteGraph, t: &[Rational], limit: usize) -> Result<PluckerVector, GraphError> {
    let matchings = enumerate_matchings(g, limit)?;
    let entries = (1..=g.n())
        .combinations(g.k())
        .map(|i| {
            let total = matchings.get(&i).map_or_else(Rational::zero, |ms| {
                ms.iter()
                    .map(|m| m.edges.iter().fold(Rational::one(), |acc, &e| acc * &t[e]))
                    .sum()
            });
            (i, total)
        })
        .collect();
    Ok(PluckerVector {
        k: g.k(),
        n: g.n(),
        entries,
    })
}

/// Output of [`transpose_dual`].
#[derive(Debug, Clone)]
pub struct DualNetwork {
    /// Color-swapped graph with the same edge weights (reciprocal face
    /// weights).
    pub network: Network,
    /// The transpose of the original Kasteleyn matrix.
    pub kasteleyn: KasteleynMatrix,
    /// Plücker vector of the dual point.
    pub plucker: PluckerVector,
}

/// The dual network, whose Kasteleyn matrix is the transpose of the given
/// network's matrix.
pub fn transpose_dual(net: &Network, sigma: &[i8]) -> Result<DualNetwork, KasteleynError> {
    let km = kasteleyn_matrix(&net.graph, sigma, &net.weights)?;
    let kbar = km.transposed();
    let plucker = kbar.plucker_vector();
    let network = Network {
        graph: dual_graph(&net.graph),
        weights: net.weights.clone(),
    };
    Ok(DualNetwork {
        network,
        kasteleyn: kbar,
        plucker,
    })
}
