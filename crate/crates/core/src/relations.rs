//! Linear systems of relations attached to a signed, weighted graph.
//!
//! The Kasteleyn system puts an unknown vector `v_b` on every black vertex
//! and one relation `Σ_b σ(e) t_e v_b = 0` on every white vertex. The weak
//! system swaps the roles of the colors: unknowns sit on the white vertices
//! of a white-boundary graph and relations on its black vertices. Both share
//! [`RelationSystem`], whose coefficient matrix has one row per relation and
//! one column per unknown, internal unknowns first and boundary unknowns
//! last in clockwise order.
//!
//! The Lam system lives on half-edges: every edge end carries a value, tied
//! to the value at the other end by the directed weight and the geometric
//! signature.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{KasteleynError, RelationError};
use crate::graph::{dual_graph, Color, FaceKind, PerfectOrientation, PlanarBipartiteGraph};
use crate::kasteleyn::{kasteleyn_target, signature_with_targets, Signature};
use crate::linalg::{det_bareiss, kernel, rank, rref, solve, Field, Matrix};
use crate::positroid::complement;
use crate::rational::{format, int, to_f64, Rational};

/// Scalar field of the value space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarKind {
    ExactRational,
    Float,
}

/// A homogeneous linear system with one relation per vertex of one color and
/// one unknown per vertex of the other color.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationSystem<T> {
    /// Vertex carrying each relation (row).
    pub relations: Vec<usize>,
    /// Vertex carrying each unknown (column): internal ones, then `b_1..b_n`.
    pub unknowns: Vec<usize>,
    /// Number of internal unknowns; column `internal + j − 1` is boundary
    /// vertex `j`.
    pub internal: usize,
    pub n: usize,
    /// Dimension of the kernel restricted to the boundary: `n − k` for the
    /// Kasteleyn system and `k` for the weak system.
    pub kernel_dim: usize,
    pub scalar: ScalarKind,
    pub matrix: Matrix<T>,
}

fn assemble<T: Field>(
    g: &PlanarBipartiteGraph,
    sigma: &[i8],
    t: &[T],
    unknown_color: Color,
    kernel_dim: usize,
    scalar: ScalarKind,
) -> Result<RelationSystem<T>, RelationError> {
    if sigma.len() != g.edges().len() || t.len() != g.edges().len() {
        return Err(KasteleynError::MissingSignature(format!(
            "{} signs and {} weights for {} edges",
            sigma.len(),
            t.len(),
            g.edges().len()
        ))
        .into());
    }
    let relations = g.vertices_of_color(unknown_color.other());
    let unknowns = g.vertices_of_color(unknown_color);
    let internal = g.internal_vertices(unknown_color).len();
    let mut row_of = vec![usize::MAX; g.vertices().len()];
    let mut col_of = vec![usize::MAX; g.vertices().len()];
    for (i, &v) in relations.iter().enumerate() {
        row_of[v] = i;
    }
    for (i, &v) in unknowns.iter().enumerate() {
        col_of[v] = i;
    }
    let mut matrix = Matrix::<T>::zeros(relations.len(), unknowns.len());
    for (e, edge) in g.edges().iter().enumerate() {
        let (r, c) = match unknown_color {
            Color::Black => (row_of[edge.white], col_of[edge.black]),
            Color::White => (row_of[edge.black], col_of[edge.white]),
        };
        let coeff = if sigma[e] < 0 { t[e].neg() } else { t[e].clone() };
        matrix[(r, c)] = matrix[(r, c)].add(&coeff);
    }
    Ok(RelationSystem {
        relations,
        unknowns,
        internal,
        n: g.n(),
        kernel_dim,
        scalar,
        matrix,
    })
}

/// The Kasteleyn system of a black-boundary graph.
///
/// A white-boundary graph is handled through its color swap, so the system
/// then describes the dual point of the color-swapped network.
pub fn kasteleyn_system(
    g: &PlanarBipartiteGraph,
    sigma: &[i8],
    t: &[Rational],
) -> Result<RelationSystem<Rational>, RelationError> {
    if g.boundary_color() == Color::White {
        return kasteleyn_system(&dual_graph(g), sigma, t);
    }
    assemble(g, sigma, t, Color::Black, g.n() - g.k(), ScalarKind::ExactRational)
}

/// The weak Kasteleyn system of a white-boundary graph: unknowns on white
/// vertices, relations on black vertices.
pub fn weak_system(
    g: &PlanarBipartiteGraph,
    sigma: &[i8],
    t: &[Rational],
) -> Result<RelationSystem<Rational>, RelationError> {
    if g.boundary_color() != Color::White {
        return Err(RelationError::BadBoundaryShape("the weak system needs white boundary vertices".into()));
    }
    assemble(g, sigma, t, Color::White, g.k(), ScalarKind::ExactRational)
}

impl RelationSystem<Rational> {
    /// The same system over doubles.
    pub fn to_float(&self) -> RelationSystem<f64> {
        RelationSystem {
            relations: self.relations.clone(),
            unknowns: self.unknowns.clone(),
            internal: self.internal,
            n: self.n,
            kernel_dim: self.kernel_dim,
            scalar: ScalarKind::Float,
            matrix: self.matrix.map(to_f64),
        }
    }

    /// `det` of all relation rows against the internal columns and the
    /// boundary columns not in `drop` (labels in `1..=n`).
    pub fn minor_without(&self, drop: &[usize]) -> Rational {
        let cols: Vec<usize> = (0..self.internal)
            .chain(complement(drop, self.n).iter().map(|j| self.internal + j - 1))
            .collect();
        let rows: Vec<usize> = (0..self.matrix.nrows()).collect();
        if rows.len() != cols.len() {
            return <Rational as Zero>::zero();
        }
        det_bareiss(&self.matrix.select(&rows, &cols))
    }

    /// Labeled sparse form for export.
    pub fn export(&self, g: &PlanarBipartiteGraph) -> SystemExport {
        let mut entries = Vec::new();
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                if !self.matrix[(i, j)].is_zero() {
                    entries.push(SparseEntry {
                        row: g.vertex(self.relations[i]).id.clone(),
                        col: g.vertex(self.unknowns[j]).id.clone(),
                        value: format(&self.matrix[(i, j)]),
                    });
                }
            }
        }
        SystemExport {
            rows: self.relations.iter().map(|&v| g.vertex(v).id.clone()).collect(),
            cols: self.unknowns.iter().map(|&v| g.vertex(v).id.clone()).collect(),
            entries,
        }
    }
}

impl<T: Field> RelationSystem<T> {
    fn check_base(&self, base: &[usize]) -> Result<(), RelationError> {
        let k = self.n - self.kernel_dim;
        if base.len() != k || base.iter().any(|&i| i == 0 || i > self.n) || base.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RelationError::BadBoundaryShape(format!(
                "base {base:?} is not an increasing {k}-subset of 1..={}",
                self.n
            )));
        }
        Ok(())
    }

    /// Solves with prescribed values at the boundary unknowns outside
    /// `base`. Row `r` of `values` holds the vector at the `r`-th label of
    /// the complement of `base`. Returns one row per unknown, in column
    /// order.
    pub fn solve_with_boundary(&self, base: &[usize], values: &Matrix<T>) -> Result<Matrix<T>, RelationError> {
        self.check_base(base)?;
        let fixed = complement(base, self.n);
        if values.nrows() != fixed.len() {
            return Err(RelationError::BadBoundaryShape(format!(
                "{} boundary vectors for {} fixed boundary vertices",
                values.nrows(),
                fixed.len()
            )));
        }
        let free: Vec<usize> = (0..self.internal)
            .chain(base.iter().map(|i| self.internal + i - 1))
            .collect();
        if free.len() != self.matrix.nrows() {
            return Err(RelationError::BadBoundaryShape(format!(
                "{} relations for {} unknowns",
                self.matrix.nrows(),
                free.len()
            )));
        }
        let fixed_cols: Vec<usize> = fixed.iter().map(|j| self.internal + j - 1).collect();
        let rows: Vec<usize> = (0..self.matrix.nrows()).collect();
        let a = self.matrix.select(&rows, &free);
        let rhs = self.matrix.select(&rows, &fixed_cols).mul(values)?.map(|x| x.neg());
        let x = solve(&a, &rhs)?;
        let d = values.ncols();
        let mut out = Matrix::zeros(self.unknowns.len(), d);
        for (i, &c) in free.iter().enumerate() {
            for j in 0..d {
                out[(c, j)] = x[(i, j)].clone();
            }
        }
        for (i, &c) in fixed_cols.iter().enumerate() {
            for j in 0..d {
                out[(c, j)] = values[(i, j)].clone();
            }
        }
        Ok(out)
    }

    /// Boundary data `E_j ∈ 𝔽^n` at each fixed boundary vertex `j`.
    pub fn solve_canonical(&self, base: &[usize]) -> Result<Matrix<T>, RelationError> {
        self.check_base(base)?;
        let fixed = complement(base, self.n);
        let values = Matrix::from_fn(fixed.len(), self.n, |r, c| if c + 1 == fixed[r] { <T as Field>::one() } else { <T as Field>::zero() });
        self.solve_with_boundary(base, &values)
    }

    /// Boundary values of a kernel basis, one row per basis vector, in
    /// reduced row echelon form.
    pub fn kernel_basis(&self) -> Result<Matrix<T>, RelationError> {
        let ker = kernel(&self.matrix);
        let rows: Vec<usize> = (0..ker.nrows()).collect();
        let cols: Vec<usize> = (self.internal..self.unknowns.len()).collect();
        let boundary = ker.select(&rows, &cols);
        let r = rref(&boundary);
        if ker.nrows() != self.kernel_dim || r.pivots.len() != self.kernel_dim {
            return Err(RelationError::SingularSystem);
        }
        let keep: Vec<usize> = (0..self.kernel_dim).collect();
        Ok(r.matrix.select(&keep, &cols.iter().map(|c| c - self.internal).collect::<Vec<_>>()))
    }

    /// Boundary block of the row reduction that clears the internal
    /// columns: `λ M_∂` over the left kernel `λ` of the internal block.
    pub fn boundary_block(&self) -> Result<Matrix<T>, RelationError> {
        let rows: Vec<usize> = (0..self.matrix.nrows()).collect();
        let internal: Vec<usize> = (0..self.internal).collect();
        let bnd: Vec<usize> = (self.internal..self.unknowns.len()).collect();
        let m_int = self.matrix.select(&rows, &internal);
        let lam = kernel(&m_int.transpose());
        let block = lam.mul(&self.matrix.select(&rows, &bnd))?;
        let r = rref(&block);
        let expected = self.n - self.kernel_dim;
        if r.pivots.len() != expected {
            return Err(RelationError::SingularSystem);
        }
        Ok(r.matrix.select(&(0..expected).collect::<Vec<_>>(), &(0..self.n).collect::<Vec<_>>()))
    }
}

/// One nonzero coefficient of an exported system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseEntry {
    pub row: String,
    pub col: String,
    pub value: String,
}

/// Sparse export of a relation system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemExport {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<SparseEntry>,
}

/// `δ(I) = Σ_r (i_r − r)`.
pub fn delta(base: &[usize]) -> usize {
    base.iter().enumerate().map(|(r, &i)| i - (r + 1)).sum()
}

/// Half the number of boundary vertices on a face.
pub fn half_boundary_count(g: &PlanarBipartiteGraph, face: usize) -> usize {
    g.faces().faces[face].half_boundary
}

/// Required face product of a weak Kasteleyn signature: `(−1)^{|Ω|/2+1}` on
/// internal faces and `(−1)^{|Ω|/2+b_Ω+1}` on finite external faces.
pub fn weak_target(g: &PlanarBipartiteGraph, face: usize) -> i8 {
    let f = &g.faces().faces[face];
    let base = kasteleyn_target(f.edge_count);
    if f.kind == FaceKind::FiniteExternal && half_boundary_count(g, face) % 2 == 1 {
        -base
    } else {
        base
    }
}

/// Whether every finite face satisfies the weak face rule.
pub fn is_weak_kasteleyn(g: &PlanarBipartiteGraph, sigma: &[i8]) -> bool {
    g.faces()
        .finite()
        .all(|f| crate::kasteleyn::face_sign(g, sigma, f.id) == weak_target(g, f.id))
}

/// A weak Kasteleyn signature: +1 on a spanning tree, the other edges fixed
/// face by face.
pub fn weak_signature(g: &PlanarBipartiteGraph) -> Result<Signature, KasteleynError> {
    let targets: Vec<i8> = g.faces().finite().map(|f| weak_target(g, f.id)).collect();
    let s = signature_with_targets(g, &targets)?;
    if !is_weak_kasteleyn(g, &s) {
        return Err(KasteleynError::NoSignature);
    }
    Ok(s)
}

/// Extends a Kasteleyn signature of `g` to the graph `gt` obtained by a
/// boundary addition: shared edges (matched by id) keep their sign and the
/// added edges get +1.
pub fn weak_signature_from(g: &PlanarBipartiteGraph, sigma: &[i8], gt: &PlanarBipartiteGraph) -> Signature {
    gt.edges()
        .iter()
        .map(|e| g.edge_index(&e.id).map_or(1, |i| sigma[i]))
        .collect()
}

/// Solves the weak system: the `k × n` matrix whose columns are the kernel
/// values at the boundary white vertices, in reduced row echelon form.
pub fn weak_system_solve(g: &PlanarBipartiteGraph, sigma: &[i8], t: &[Rational]) -> Result<Matrix<Rational>, RelationError> {
    weak_system(g, sigma, t)?.kernel_basis()
}

/// Face weights of the dual network representing the kernel point: `f⁻¹` on
/// internal faces and `(−1)^{b_Ω} f⁻¹` on finite external faces.
pub fn dual_face_weights(g: &PlanarBipartiteGraph, f: &[Rational]) -> Vec<Rational> {
    g.faces()
        .finite()
        .zip(f)
        .map(|(face, x)| {
            let inv = <Rational as One>::one() / x;
            if face.kind == FaceKind::FiniteExternal && half_boundary_count(g, face.id) % 2 == 1 {
                -inv
            } else {
                inv
            }
        })
        .collect()
}

/// Values on the two ends of every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfEdgeAssignment<T> {
    /// `z_{b,e}` per edge: value at the black end.
    pub black: Vec<Vec<T>>,
    /// `z_{w,e}` per edge: value at the white end.
    pub white: Vec<Vec<T>>,
    /// Signature `ε` on the directed edges.
    pub epsilon: Vec<u8>,
    /// Directed weight `t_{uv}` per edge: `t` from white to black and `1/t`
    /// from black to white.
    pub directed: Vec<T>,
}

/// Solves the Lam system with values `sinks` (row `r` at the `r`-th sink,
/// increasing labels) at the boundary sinks of `o`.
///
/// Rules: for `e = u → v`, `z_{u,e} = (−1)^{ε(e)} t_{uv} z_{v,e}`; the values
/// at a white vertex sum to zero; the values at a black vertex coincide.
pub fn lam_solve<T: Field>(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    epsilon: &[u8],
    t: &[T],
    sinks: &Matrix<T>,
) -> Result<HalfEdgeAssignment<T>, RelationError> {
    if g.boundary_color() != Color::Black {
        return Err(KasteleynError::NeedsBlackBoundary.into());
    }
    let ne = g.edges().len();
    if epsilon.len() != ne || t.len() != ne {
        return Err(RelationError::BadBoundaryShape(format!(
            "{} signs and {} weights for {ne} edges",
            epsilon.len(),
            t.len()
        )));
    }
    let sink_labels = complement(&o.sources, g.n());
    if sinks.nrows() != sink_labels.len() {
        return Err(RelationError::BadBoundaryShape(format!(
            "{} sink vectors for {} sinks",
            sinks.nrows(),
            sink_labels.len()
        )));
    }
    let d = sinks.ncols();
    let zb = |e: usize| e;
    let zw = |e: usize| ne + e;
    let directed: Vec<T> = (0..ne)
        .map(|e| if o.black_to_white[e] { <T as Field>::one().div(&t[e]) } else { t[e].clone() })
        .collect();
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut rhs: Vec<Vec<T>> = Vec::new();
    let mut push = |coeffs: Vec<(usize, T)>, value: Vec<T>| {
        let mut row = vec![<T as Field>::zero(); 2 * ne];
        for (i, c) in coeffs {
            row[i] = row[i].add(&c);
        }
        rows.push(row);
        rhs.push(value);
    };
    let zero = vec![<T as Field>::zero(); d];
    for e in 0..ne {
        let s = if epsilon[e] % 2 == 1 { directed[e].neg() } else { directed[e].clone() };
        let (tail, head) = if o.black_to_white[e] { (zb(e), zw(e)) } else { (zw(e), zb(e)) };
        push(vec![(tail, <T as Field>::one()), (head, s.neg())], zero.clone());
    }
    for w in g.vertices_of_color(Color::White) {
        push(g.rotation(w).iter().map(|&e| (zw(e), <T as Field>::one())).collect(), zero.clone());
    }
    for b in g.internal_vertices(Color::Black) {
        let rot = g.rotation(b);
        for &e in &rot[1..] {
            push(vec![(zb(e), <T as Field>::one()), (zb(rot[0]), <T as Field>::one().neg())], zero.clone());
        }
    }
    for (r, &j) in sink_labels.iter().enumerate() {
        let e = g.rotation(g.boundary_vertex(j))[0];
        push(vec![(zb(e), <T as Field>::one())], sinks.row(r).to_vec());
    }
    if rows.len() != 2 * ne {
        return Err(RelationError::BadBoundaryShape(format!(
            "{} Lam relations for {} half-edge unknowns",
            rows.len(),
            2 * ne
        )));
    }
    let x = solve(&Matrix::from_rows(rows), &Matrix::from_rows(rhs))?;
    Ok(HalfEdgeAssignment {
        black: (0..ne).map(|e| x.row(zb(e)).to_vec()).collect(),
        white: (0..ne).map(|e| x.row(zw(e)).to_vec()).collect(),
        epsilon: epsilon.to_vec(),
        directed,
    })
}

/// Lam system with canonical vectors `E_j ∈ ℚ^n` at the sinks.
pub fn lam_solve_canonical(
    g: &PlanarBipartiteGraph,
    o: &PerfectOrientation,
    epsilon: &[u8],
    t: &[Rational],
) -> Result<HalfEdgeAssignment<Rational>, RelationError> {
    let sinks = complement(&o.sources, g.n());
    let values = Matrix::from_fn(sinks.len(), g.n(), |r, c| if c + 1 == sinks[r] { int(1) } else { int(0) });
    lam_solve(g, o, epsilon, t, &values)
}

/// Rank of the coefficient matrix.
pub fn system_rank<T: Field>(sys: &RelationSystem<T>) -> usize {
    rank(&sys.matrix)
}
