//! KP-II multi-line solitons and their divisors on the reducible spectral
//! curve dual to a graph.
//!
//! Soliton data are phases `κ_1 < ⋯ < κ_n` and a `k × n` representative
//! matrix `A`. The heat-hierarchy solutions are `f_i = Σ_j A^i_j e^{θ_j}` with
//! `θ_j = Σ_m κ_j^m x_m`. All exponentials are evaluated as
//! `e^{θ_j − max θ}` and the common factor is carried as a log scale, so no
//! quantity overflows for moderate times.
//!
//! The wave function at the phases, `ψ(κ_j) = P(κ_j) e^{θ_j}` with `P` the
//! characteristic polynomial of the dressing operator, is orthogonal to the
//! rows of `A`. Fed as boundary data into the Kasteleyn system of a network
//! representing `A`, it extends to all black vertices; at each trivalent
//! white vertex the three half-edge values `K_{bw} v_b` locate one divisor
//! point.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{KasteleynError, KpError, RelationError};
use crate::geometric::{choose_gauge_ray, ensure_positions, geometric_signature};
use crate::graph::{orientation_for_base, Color, FaceKind, PlanarBipartiteGraph, VertexKind};
use crate::kasteleyn::{construct_signature, kasteleyn_matrix};
use crate::linalg::{det, Matrix};
use crate::positroid::complement;
use crate::rational::{to_f64, Rational};
use crate::relations::{kasteleyn_system, lam_solve, RelationSystem};
use crate::weights::Network;

/// Relative residual accepted for the dressing and orthogonality identities.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Threshold below which a normalized value counts as zero.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Largest accepted cancellation ratio `Σ|w_J| / |Σ w_J|` of the terms of `τ`.
pub const CONDITION_LIMIT: f64 = 1e13;

/// Phases and a representative matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonData {
    pub phases: Vec<f64>,
    /// `k × n` representative matrix.
    pub matrix: Matrix<f64>,
}

impl SolitonData {
    /// Validates phases and matrix shape.
    pub fn new(phases: Vec<f64>, matrix: Matrix<f64>) -> Result<Self, KpError> {
        if phases.iter().any(|p| !p.is_finite()) || phases.windows(2).any(|w| w[0] >= w[1]) {
            return Err(KpError::InvalidPhases);
        }
        let (k, n) = (matrix.nrows(), matrix.ncols());
        if k == 0 || k >= n || n != phases.len() || crate::linalg::rank(&matrix) != k {
            return Err(KpError::BadMatrix);
        }
        Ok(SolitonData { phases, matrix })
    }

    /// Data whose matrix is the Kasteleyn representative matrix of a
    /// black-boundary network.
    pub fn from_network(phases: Vec<f64>, net: &Network) -> Result<Self, KpError> {
        let sigma = construct_signature(&net.graph)?;
        let a = kasteleyn_matrix(&net.graph, &sigma, &net.weights)?.representative_matrix()?;
        SolitonData::new(phases, a.map(to_f64))
    }

    pub fn k(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }

    /// `θ_j(x⃗) = Σ_m κ_j^m x_m` for `x⃗ = (x_1, x_2, …)`.
    pub fn thetas(&self, times: &[f64]) -> Vec<f64> {
        self.phases
            .iter()
            .map(|&kappa| {
                let mut p = 1.0;
                let mut acc = 0.0;
                for &x in times {
                    p *= kappa;
                    acc += p * x;
                }
                acc
            })
            .collect()
    }

    /// `e^{θ_j − max θ}` and the shift `max θ`.
    fn shifted_exponentials(&self, times: &[f64]) -> Result<(Vec<f64>, f64), KpError> {
        let th = self.thetas(times);
        let max = th.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(KpError::NumericOverflow);
        }
        Ok((th.iter().map(|t| (t - max).exp()).collect(), max))
    }
}

/// The dressing operator `∂^k − 𝔴_1 ∂^{k−1} − ⋯ − 𝔴_k` at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DressingState {
    pub times: Vec<f64>,
    /// `𝔴_1, …, 𝔴_k`.
    pub coefficients: Vec<f64>,
    /// Real roots of `P(ζ) = ζ^k − 𝔴_1 ζ^{k−1} − ⋯ − 𝔴_k`, ascending.
    pub sato_roots: Vec<f64>,
    /// Largest imaginary part among the companion eigenvalues.
    pub max_imaginary: f64,
    /// Largest relative residual `|𝔇 f_i| / scale`.
    pub residual: f64,
    /// Cancellation ratio of the terms of `τ`; one for nonnegative data.
    pub condition: f64,
}

impl DressingState {
    /// `P(ζ)`.
    pub fn characteristic(&self, zeta: f64) -> f64 {
        self.coefficients.iter().fold(1.0, |acc, w| acc * zeta - w)
    }

    fn characteristic_derivative(&self, zeta: f64) -> f64 {
        let k = self.coefficients.len();
        let mut acc = k as f64;
        for (m, w) in self.coefficients.iter().enumerate().take(k.saturating_sub(1)) {
            acc = acc * zeta - (k - 1 - m) as f64 * w;
        }
        acc
    }
}

/// Terms of the Cauchy–Binet expansion of `τ` at one time, normalized to
/// sum to one, with the cancellation ratio `Σ|w_J| / |Σ w_J|`.
struct Expansion {
    subsets: Vec<Vec<usize>>,
    weights: Vec<f64>,
    condition: f64,
}

fn expansion(data: &SolitonData, times: &[f64]) -> Result<Expansion, KpError> {
    let tau = TauFunction::new(data);
    let th = data.thetas(times);
    let exps: Vec<f64> = tau.subsets.iter().map(|j| j.iter().map(|&i| th[i]).sum()).collect();
    let max = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(KpError::NumericOverflow);
    }
    let raw: Vec<f64> = tau.coefficients.iter().zip(&exps).map(|(c, e)| c * (e - max).exp()).collect();
    let total: f64 = raw.iter().sum();
    let magnitude: f64 = raw.iter().map(|w| w.abs()).sum();
    let condition = if total != 0.0 { magnitude / total.abs() } else { f64::INFINITY };
    if !(condition < CONDITION_LIMIT) {
        return Err(KpError::IllConditioned(condition));
    }
    Ok(Expansion {
        subsets: tau.subsets,
        weights: raw.iter().map(|w| w / total).collect(),
        condition,
    })
}

/// Solves for the dressing coefficients and the Sato roots at `times`.
///
/// The coefficients are weighted averages of the elementary symmetric
/// polynomials of `{κ_j : j ∈ J}` over the terms of `τ`.
pub fn dressing(data: &SolitonData, times: &[f64]) -> Result<DressingState, KpError> {
    let (k, n) = (data.k(), data.n());
    let (ex, _) = data.shifted_exponentials(times)?;
    let kappa = &data.phases;
    let exp = expansion(data, times)?;
    let mut coefficients = vec![0.0f64; k];
    for (j, w) in exp.subsets.iter().zip(&exp.weights) {
        // Coefficients of ∏_{i∈J} (ζ − κ_i), highest degree first.
        let mut poly = vec![1.0f64];
        for &i in j {
            let mut next = poly.clone();
            next.push(0.0);
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] -= kappa[i] * c;
            }
            poly = next;
        }
        for (m, c) in coefficients.iter_mut().enumerate() {
            *c -= w * poly[m + 1];
        }
    }
    let mut state = DressingState {
        times: times.to_vec(),
        coefficients,
        sato_roots: Vec::new(),
        max_imaginary: 0.0,
        residual: 0.0,
        condition: exp.condition,
    };
    let (roots, imag) = real_roots(&state);
    state.sato_roots = roots;
    state.max_imaginary = imag;
    let mut residual = 0.0f64;
    for i in 0..k {
        let mut value = 0.0;
        let mut scale = 0.0;
        for j in 0..n {
            let a = data.matrix[(i, j)];
            value += a * state.characteristic(kappa[j]) * ex[j];
            let mag: f64 = kappa[j].abs().powi(k as i32)
                + state
                    .coefficients
                    .iter()
                    .enumerate()
                    .map(|(c, w)| w.abs() * kappa[j].abs().powi((k - 1 - c) as i32))
                    .sum::<f64>();
            scale += a.abs() * mag * ex[j];
        }
        if scale > 0.0 {
            residual = residual.max(value.abs() / scale);
        }
    }
    state.residual = residual;
    Ok(state)
}

/// Companion-matrix eigenvalues, polished by Newton steps on their real
/// parts, sorted ascending.
fn real_roots(state: &DressingState) -> (Vec<f64>, f64) {
    let k = state.coefficients.len();
    let mut c = DMatrix::<f64>::zeros(k, k);
    for (m, w) in state.coefficients.iter().enumerate() {
        c[(0, m)] = *w;
    }
    for i in 1..k {
        c[(i, i - 1)] = 1.0;
    }
    let eig = c.complex_eigenvalues();
    let imag = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut roots: Vec<f64> = eig
        .iter()
        .map(|z| {
            let mut x = z.re;
            for _ in 0..4 {
                let d = state.characteristic_derivative(x);
                if d == 0.0 {
                    break;
                }
                let step = state.characteristic(x) / d;
                let next = x - step;
                if state.characteristic(next).abs() < state.characteristic(x).abs() {
                    x = next;
                } else {
                    break;
                }
            }
            x
        })
        .collect();
    roots.sort_by(|a, b| a.total_cmp(b));
    (roots, imag)
}

/// `ψ(κ_j, x⃗)` up to the positive factor `e^{log_scale}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveValues {
    pub times: Vec<f64>,
    /// Scaled values `ψ(κ_j, x⃗) e^{−log_scale}`.
    pub psi: Vec<f64>,
    pub log_scale: f64,
    /// Largest relative residual `|Σ_j A^i_j ψ_j| / Σ_j |A^i_j ψ_j|`.
    pub orthogonality: f64,
    pub dressing: DressingState,
}

impl WaveValues {
    /// `ψ̂(κ_j, x⃗) = ψ(κ_j, x⃗) / ψ(κ_j, x⃗_0)`.
    pub fn normalized(&self, at_x0: &WaveValues) -> Vec<f64> {
        let f = (self.log_scale - at_x0.log_scale).exp();
        self.psi.iter().zip(&at_x0.psi).map(|(a, b)| a / b * f).collect()
    }
}

/// Evaluates the wave function at the phases.
pub fn wave_values(data: &SolitonData, times: &[f64]) -> Result<WaveValues, KpError> {
    let d = dressing(data, times)?;
    let (ex, log_scale) = data.shifted_exponentials(times)?;
    let psi: Vec<f64> = characteristic_at_phases(data, times)?.iter().zip(&ex).map(|(p, e)| p * e).collect();
    let orthogonality = orthogonality_residual(&data.matrix, &psi);
    Ok(WaveValues {
        times: times.to_vec(),
        psi,
        log_scale,
        orthogonality,
        dressing: d,
    })
}

/// `P(κ_m)` for every phase, from `P(ζ) = Σ_J w_J ∏_{j∈J} (ζ − κ_j)`.
/// Every product is formed from exact phase differences, so `P(κ_m)` keeps
/// its relative accuracy when a Sato root is close to `κ_m`.
fn characteristic_at_phases(data: &SolitonData, times: &[f64]) -> Result<Vec<f64>, KpError> {
    let exp = expansion(data, times)?;
    Ok(data
        .phases
        .iter()
        .map(|&kappa| {
            exp.subsets
                .iter()
                .zip(&exp.weights)
                .map(|(j, w)| w * j.iter().map(|&i| kappa - data.phases[i]).product::<f64>())
                .sum()
        })
        .collect())
}

/// Largest relative residual of `A ψ = 0`.
pub fn orthogonality_residual(a: &Matrix<f64>, psi: &[f64]) -> f64 {
    (0..a.nrows())
        .map(|i| {
            let (mut v, mut s) = (0.0f64, 0.0f64);
            for (j, p) in psi.iter().enumerate() {
                v += a[(i, j)] * p;
                s += (a[(i, j)] * p).abs();
            }
            if s > 0.0 {
                v.abs() / s
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

/// Least-squares residual of writing `psi` in the row span of `basis`,
/// relative to `|psi|`.
pub fn span_residual(basis: &Matrix<f64>, psi: &[f64]) -> f64 {
    let b = DMatrix::from_fn(basis.ncols(), basis.nrows(), |i, j| basis[(j, i)]);
    let y = DVector::from_column_slice(psi);
    let norm = y.norm();
    if norm == 0.0 {
        return 0.0;
    }
    let svd = b.clone().svd(true, true);
    match svd.solve(&y, 1e-14) {
        Ok(c) => (&b * c - &y).norm() / norm,
        Err(_) => f64::INFINITY,
    }
}

/// `τ = Σ_J Δ_J(A) ∏_{i<j∈J} (κ_j − κ_i) e^{Σ_{j∈J} θ_j}` as coefficient and
/// exponent-rate lists.
#[derive(Debug, Clone, PartialEq)]
pub struct TauFunction {
    subsets: Vec<Vec<usize>>,
    coefficients: Vec<f64>,
}

impl TauFunction {
    /// Expands the Wronskian of `f_1, …, f_k` by Cauchy–Binet.
    pub fn new(data: &SolitonData) -> Self {
        let (k, n) = (data.k(), data.n());
        let rows: Vec<usize> = (0..k).collect();
        let mut subsets = Vec::new();
        let mut coefficients = Vec::new();
        for j in (0..n).combinations(k) {
            let minor = det(&data.matrix.select(&rows, &j));
            let vandermonde: f64 = j
                .iter()
                .tuple_combinations()
                .map(|(&a, &b)| data.phases[b] - data.phases[a])
                .product();
            let c = minor * vandermonde;
            if c != 0.0 {
                subsets.push(j);
                coefficients.push(c);
            }
        }
        TauFunction { subsets, coefficients }
    }

    /// `u = 2 ∂_x² log τ`, computed as twice the weighted variance of the
    /// rates `Σ_{j∈J} κ_j`.
    pub fn field(&self, data: &SolitonData, times: &[f64]) -> Result<f64, KpError> {
        let th = data.thetas(times);
        let exps: Vec<f64> = self.subsets.iter().map(|j| j.iter().map(|&i| th[i]).sum()).collect();
        let max = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(KpError::NumericOverflow);
        }
        let rates: Vec<f64> = self.subsets.iter().map(|j| j.iter().map(|&i| data.phases[i]).sum()).collect();
        let weights: Vec<f64> = self.coefficients.iter().zip(&exps).map(|(c, e)| c * (e - max).exp()).collect();
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(KpError::NumericOverflow);
        }
        let mean = weights.iter().zip(&rates).map(|(w, r)| w * r).sum::<f64>() / total;
        let var = weights.iter().zip(&rates).map(|(w, r)| w * (r - mean).powi(2)).sum::<f64>() / total;
        let u = 2.0 * var;
        if u.is_finite() {
            Ok(u)
        } else {
            Err(KpError::NumericOverflow)
        }
    }
}

/// One field sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub u: f64,
}

/// Evaluates `u(x, y, t)` at the given points; `higher` supplies fixed
/// values of `x_4, x_5, …`.
pub fn evaluate_soliton(data: &SolitonData, points: &[[f64; 3]], higher: &[f64]) -> Result<Vec<FieldSample>, KpError> {
    let tau = TauFunction::new(data);
    points
        .iter()
        .map(|p| {
            let mut times = p.to_vec();
            times.extend_from_slice(higher);
            Ok(FieldSample {
                x: p[0],
                y: p[1],
                t: p[2],
                u: tau.field(data, &times)?,
            })
        })
        .collect()
}

/// Kind of a rational component of the spectral curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    /// `Γ_0`, carrying the phases.
    Base,
    Black,
    White,
}

/// A rational component `Γ_0`, `Γ_b` or `Γ_w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub kind: ComponentKind,
    /// Edge ids whose double point lies on this component.
    pub marked: Vec<String>,
}

/// Two glued points, one per graph edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublePoint {
    pub edge: String,
    /// Component indices of the two glued points.
    pub components: [usize; 2],
    /// Phase label when one side is `κ_j ∈ Γ_0`.
    pub phase: Option<usize>,
}

/// An oval, one per face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Oval {
    pub face: usize,
    pub infinite: bool,
    /// Edge ids of the double points on the oval.
    pub double_points: Vec<String>,
}

/// Chart on a trivalent white component: edges at `ζ = 0, 1, ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhiteChart {
    pub vertex: String,
    pub marked: [String; 3],
}

/// The reducible curve whose dual graph is the given graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurveModel {
    pub components: Vec<Component>,
    pub double_points: Vec<DoublePoint>,
    pub ovals: Vec<Oval>,
    pub charts: Vec<WhiteChart>,
}

/// Chart edges `[Q_1, Q_2, Q_3]` of a trivalent white vertex: `Q_3` is its
/// edge of smallest index and `Q_1, Q_2` follow it counterclockwise.
fn chart_edges(g: &PlanarBipartiteGraph, w: usize) -> [usize; 3] {
    let rot = g.rotation(w);
    let start = (0..3).min_by_key(|&i| rot[i]).expect("three edges");
    [rot[(start + 1) % 3], rot[(start + 2) % 3], rot[start]]
}

/// Builds the curve model of a black-boundary graph with internal degrees
/// at most three.
pub fn build_spectral_curve(g: &PlanarBipartiteGraph) -> Result<SpectralCurveModel, KpError> {
    if g.boundary_color() != Color::Black {
        return Err(KasteleynError::NeedsBlackBoundary.into());
    }
    if let Some(v) = g.vertices().iter().enumerate().find(|(v, _)| !g.is_boundary(*v) && g.degree(*v) > 3) {
        return Err(KpError::DegreeTooHigh(v.1.id.clone()));
    }
    let mut components = vec![Component {
        name: "Γ0".into(),
        kind: ComponentKind::Base,
        marked: Vec::new(),
    }];
    let mut comp_of = vec![0usize; g.vertices().len()];
    for (v, vx) in g.vertices().iter().enumerate() {
        if vx.kind == VertexKind::Internal {
            comp_of[v] = components.len();
            components.push(Component {
                name: format!("Γ{}", vx.id),
                kind: if vx.color == Color::Black { ComponentKind::Black } else { ComponentKind::White },
                marked: Vec::new(),
            });
        }
    }
    let mut double_points = Vec::new();
    for edge in g.edges() {
        let (b, w) = (edge.black, edge.white);
        let (ca, cb, phase) = match (g.boundary_label(b), g.boundary_label(w)) {
            (Some(j), _) => (0, comp_of[w], Some(j)),
            (_, Some(j)) => (0, comp_of[b], Some(j)),
            _ => (comp_of[b], comp_of[w], None),
        };
        components[ca].marked.push(edge.id.clone());
        components[cb].marked.push(edge.id.clone());
        double_points.push(DoublePoint {
            edge: edge.id.clone(),
            components: [ca, cb],
            phase,
        });
    }
    let ovals = g
        .faces()
        .faces
        .iter()
        .map(|f| Oval {
            face: f.id,
            infinite: f.kind == FaceKind::Infinite,
            double_points: f.darts.iter().map(|d| g.edge(d.edge).id.clone()).unique().collect(),
        })
        .collect();
    let charts = g
        .internal_vertices(Color::White)
        .into_iter()
        .filter(|&w| g.degree(w) == 3)
        .map(|w| WhiteChart {
            vertex: g.vertex(w).id.clone(),
            marked: chart_edges(g, w).map(|e| g.edge(e).id.clone()),
        })
        .collect();
    Ok(SpectralCurveModel {
        components,
        double_points,
        ovals,
        charts,
    })
}

/// Face at the corner of `w` between edges `a` and `b`.
fn corner_face(g: &PlanarBipartiteGraph, w: usize, a: usize, b: usize) -> Option<usize> {
    g.faces().faces.iter().find_map(|f| {
        let m = f.darts.len();
        (0..m)
            .any(|i| {
                let (d, e) = (f.darts[i], f.darts[(i + 1) % m]);
                d.head == w && e.tail == w && ((d.edge == a && e.edge == b) || (d.edge == b && e.edge == a))
            })
            .then_some(f.id)
    })
}

/// A first base of the network's positroid, used to pose the boundary
/// problem.
pub fn solving_base(g: &PlanarBipartiteGraph, sigma: &[i8], t: &[Rational]) -> Result<Vec<usize>, KpError> {
    let p = kasteleyn_matrix(g, sigma, t)?.plucker_vector();
    p.support().into_iter().next().ok_or(KpError::Reducible)
}

/// Solution of the Kasteleyn system with boundary data `ψ(κ_j, x⃗)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlackValues {
    /// Value per vertex index (black vertices only).
    pub values: BTreeMap<usize, f64>,
    pub log_scale: f64,
    /// Relative mismatch at the boundary vertices not prescribed directly.
    pub residual: f64,
    pub wave: WaveValues,
}

impl BlackValues {
    /// `min |v_b| / max |v_b|`.
    pub fn min_relative(&self) -> f64 {
        let max = self.values.values().fold(0.0f64, |a, v| a.max(v.abs()));
        if max == 0.0 {
            return 0.0;
        }
        self.values.values().fold(f64::INFINITY, |a, v| a.min(v.abs())) / max
    }
}

/// The Kasteleyn system of a network over doubles, ready for repeated
/// solves with wave-function boundary data.
#[derive(Debug, Clone)]
pub struct KasteleynWave {
    pub system: RelationSystem<f64>,
    pub base: Vec<usize>,
    pub sigma: Vec<i8>,
    pub weights: Vec<f64>,
}

impl KasteleynWave {
    pub fn new(net: &Network, sigma: &[i8]) -> Result<Self, KpError> {
        if net.graph.boundary_color() != Color::Black {
            return Err(KasteleynError::NeedsBlackBoundary.into());
        }
        let system = kasteleyn_system(&net.graph, sigma, &net.weights)?.to_float();
        let base = solving_base(&net.graph, sigma, &net.weights)?;
        Ok(KasteleynWave {
            system,
            base,
            sigma: sigma.to_vec(),
            weights: net.weights.iter().map(to_f64).collect(),
        })
    }

    /// Solves at one time.
    pub fn values(&self, data: &SolitonData, times: &[f64]) -> Result<BlackValues, KpError> {
        let wave = wave_values(data, times)?;
        let n = self.system.n;
        let fixed = complement(&self.base, n);
        let rhs = Matrix::from_fn(fixed.len(), 1, |r, _| wave.psi[fixed[r] - 1]);
        let sol = self.system.solve_with_boundary(&self.base, &rhs)?;
        let scale = wave.psi.iter().fold(0.0f64, |a, p| a.max(p.abs()));
        let mut residual = 0.0f64;
        for &i in &self.base {
            let c = self.system.internal + i - 1;
            residual = residual.max((sol[(c, 0)] - wave.psi[i - 1]).abs() / scale);
        }
        let values = self
            .system
            .unknowns
            .iter()
            .enumerate()
            .map(|(c, &v)| (v, sol[(c, 0)]))
            .collect();
        Ok(BlackValues {
            values,
            log_scale: wave.log_scale,
            residual,
            wave,
        })
    }
}

/// Chosen normalization time and how it was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationTime {
    pub times: Vec<f64>,
    /// Number of candidates examined, including the accepted one.
    pub examined: usize,
    /// Grid radius in force when the time was accepted.
    pub radius: i64,
}

/// Grid spacing of the normalization-time scan.
pub const SCAN_STEP: f64 = 0.5;
/// Initial and enlarged scan radii.
pub const SCAN_RADII: [i64; 2] = [3, 6];

/// Candidate `(x, y, t)` times of the scan: integer triples `(a, b, c)` with
/// `max(|a|,|b|,|c|) ≤ radius`, ordered by max-norm, then by `|a|+|b|+|c|`,
/// then lexicographically, scaled by [`SCAN_STEP`].
pub fn candidate_times(radius: i64) -> Vec<[f64; 3]> {
    let r = radius;
    let mut pts: Vec<[i64; 3]> = (-r..=r)
        .flat_map(|a| (-r..=r).flat_map(move |b| (-r..=r).map(move |c| [a, b, c])))
        .collect();
    pts.sort_by_key(|p| {
        let inf = p.iter().map(|x| x.abs()).max().unwrap_or(0);
        let l1: i64 = p.iter().map(|x| x.abs()).sum();
        (inf, l1, *p)
    });
    pts.into_iter()
        .map(|p| p.map(|x| x as f64 * SCAN_STEP))
        .collect()
}

/// First scanned time at which every black value is nonzero relative to
/// the largest one by more than [`DEGENERACY_TOL`]. The scan is enlarged
/// once before giving up.
pub fn find_normalization_time(data: &SolitonData, net: &Network, sigma: &[i8]) -> Result<NormalizationTime, KpError> {
    let kw = KasteleynWave::new(net, sigma)?;
    let mut examined = 0;
    let mut seen = std::collections::BTreeSet::new();
    for radius in SCAN_RADII {
        for p in candidate_times(radius) {
            let key = p.map(f64::to_bits);
            if !seen.insert(key) {
                continue;
            }
            examined += 1;
            let Ok(v) = kw.values(data, &p) else { continue };
            if v.min_relative() > DEGENERACY_TOL && v.residual < RESIDUAL_TOL && v.wave.orthogonality < RESIDUAL_TOL {
                return Ok(NormalizationTime {
                    times: p.to_vec(),
                    examined,
                    radius,
                });
            }
        }
    }
    Err(KpError::NoGoodTimeInBudget)
}

/// Coordinate of a divisor point in a component chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum ChartValue {
    Finite(f64),
    Infinity,
}

/// Sato divisor point on `Γ_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatoPoint {
    pub gamma: f64,
    /// `j` such that `κ_j < γ < κ_{j+1}`.
    pub interval: usize,
    pub oval: usize,
}

/// Divisor point on a trivalent white component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitePoint {
    pub vertex: String,
    pub gamma: ChartValue,
    pub oval: usize,
}

/// Diagnostics attached to a divisor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorChecks {
    /// Divisor points per oval, the infinite oval included.
    pub per_oval_counts: BTreeMap<usize, usize>,
    pub orthogonality: f64,
    pub dressing_residual: f64,
    pub boundary_residual: f64,
    pub max_root_imaginary: f64,
}

/// The KP divisor at a normalization time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpDivisor {
    pub normalization_time: Vec<f64>,
    pub sato_points: Vec<SatoPoint>,
    pub white_points: Vec<WhitePoint>,
    pub checks: DivisorChecks,
}

impl KpDivisor {
    /// Gauge- and labeling-independent summary: ovals with the divisor
    /// coordinates rounded to ten significant digits, sorted.
    pub fn canonical(&self) -> (Vec<(usize, String)>, Vec<(usize, String)>) {
        let fmt = |x: f64| format!("{x:.9e}");
        let mut sato: Vec<(usize, String)> = self.sato_points.iter().map(|p| (p.oval, fmt(p.gamma))).collect();
        let mut white: Vec<(usize, String)> = self
            .white_points
            .iter()
            .map(|p| {
                let g = match p.gamma {
                    ChartValue::Finite(x) => fmt(x),
                    ChartValue::Infinity => "inf".into(),
                };
                (p.oval, g)
            })
            .collect();
        sato.sort();
        white.sort();
        (sato, white)
    }
}

/// Assembles the divisor from the half-edge values `z̃_e = K_{bw} v_b` (at
/// the white end of each edge).
fn assemble(
    g: &PlanarBipartiteGraph,
    data: &SolitonData,
    x0: &[f64],
    wave: &WaveValues,
    ztilde: &[f64],
    boundary_residual: f64,
) -> Result<KpDivisor, KpError> {
    let faces = g.faces();
    let kappa = &data.phases;
    let scale = ztilde.iter().fold(0.0f64, |a, z| a.max(z.abs()));
    for (e, z) in ztilde.iter().enumerate() {
        if z.abs() <= DEGENERACY_TOL * scale {
            return Err(KpError::DivisorAtDoublePoint(g.edge(e).id.clone()));
        }
    }
    let mut sato_points = Vec::new();
    let span = kappa[kappa.len() - 1] - kappa[0];
    for &gamma in &wave.dressing.sato_roots {
        if gamma < kappa[0] - DEGENERACY_TOL * span || gamma > kappa[kappa.len() - 1] + DEGENERACY_TOL * span {
            return Err(KpError::Residual {
                what: format!("Sato root {gamma} outside the phase range"),
                value: gamma,
            });
        }
        if let Some(j) = kappa.iter().position(|k| (k - gamma).abs() <= DEGENERACY_TOL) {
            return Err(KpError::DivisorAtDoublePoint(format!("κ{}", j + 1)));
        }
        let j = kappa.iter().filter(|&&k| k < gamma).count().clamp(1, kappa.len() - 1);
        sato_points.push(SatoPoint {
            gamma,
            interval: j,
            oval: faces.arc_face[j - 1],
        });
    }
    let mut white_points = Vec::new();
    for w in g.internal_vertices(Color::White).into_iter().filter(|&w| g.degree(w) == 3) {
        let q = chart_edges(g, w);
        let z = q.map(|e| ztilde[e]);
        let gamma = z[0] / (z[0] + z[1]);
        if gamma.abs() <= DEGENERACY_TOL || (gamma - 1.0).abs() <= DEGENERACY_TOL || 1.0 / gamma.abs() <= DEGENERACY_TOL {
            return Err(KpError::DivisorAtDoublePoint(g.vertex(w).id.clone()));
        }
        let (a, b) = [(0, 1), (1, 2), (2, 0)]
            .into_iter()
            .find(|&(a, b)| z[a] * z[b] > 0.0)
            .ok_or_else(|| KpError::CountMismatch(format!("no same-sign pair at `{}`", g.vertex(w).id)))?;
        let oval = corner_face(g, w, q[a], q[b])
            .ok_or_else(|| KpError::CountMismatch(format!("no face between two edges at `{}`", g.vertex(w).id)))?;
        white_points.push(WhitePoint {
            vertex: g.vertex(w).id.clone(),
            gamma: ChartValue::Finite(gamma),
            oval,
        });
    }
    let mut per_oval_counts: BTreeMap<usize, usize> = faces.faces.iter().map(|f| (f.id, 0)).collect();
    for o in sato_points.iter().map(|p| p.oval).chain(white_points.iter().map(|p| p.oval)) {
        *per_oval_counts.get_mut(&o).expect("face id") += 1;
    }
    let bad: Vec<String> = per_oval_counts
        .iter()
        .filter(|(&f, &c)| c != usize::from(f != 0))
        .map(|(f, c)| format!("oval {f} holds {c}"))
        .collect();
    if !bad.is_empty() {
        return Err(KpError::CountMismatch(bad.join(", ")));
    }
    Ok(KpDivisor {
        normalization_time: x0.to_vec(),
        sato_points,
        white_points,
        checks: DivisorChecks {
            per_oval_counts,
            orthogonality: wave.orthogonality,
            dressing_residual: wave.dressing.residual,
            boundary_residual,
            max_root_imaginary: wave.dressing.max_imaginary,
        },
    })
}

fn check_residuals(wave: &WaveValues, boundary: f64) -> Result<(), KpError> {
    for (what, value) in [
        ("orthogonality", wave.orthogonality),
        ("dressing", wave.dressing.residual),
        ("boundary consistency", boundary),
    ] {
        if !(value < RESIDUAL_TOL) {
            return Err(KpError::Residual {
                what: what.into(),
                value,
            });
        }
    }
    Ok(())
}

/// The KP divisor from the Kasteleyn system with boundary data `ψ(κ_j)`.
pub fn kp_divisor(data: &SolitonData, net: &Network, sigma: &[i8], x0: &[f64]) -> Result<KpDivisor, KpError> {
    build_spectral_curve(&net.graph)?;
    let kw = KasteleynWave::new(net, sigma)?;
    let v = kw.values(data, x0)?;
    check_residuals(&v.wave, v.residual)?;
    let g = &net.graph;
    let ztilde: Vec<f64> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| f64::from(sigma[e]) * kw.weights[e] * v.values[&edge.black])
        .collect();
    assemble(g, data, x0, &v.wave, &ztilde, v.residual)
}

/// The KP divisor from the Lam system of a geometric signature, with the
/// sinks of a perfect orientation carrying `ψ(κ_j)`.
pub fn kp_divisor_via_geometric(data: &SolitonData, net: &Network, x0: &[f64]) -> Result<KpDivisor, KpError> {
    build_spectral_curve(&net.graph)?;
    let g = ensure_positions(&net.graph)?;
    let sigma = construct_signature(&g)?;
    let base = solving_base(&g, &sigma, &net.weights)?;
    let o = orientation_for_base(&g, &base)?.ok_or(KpError::Reducible)?;
    let ray = choose_gauge_ray(&g, &o)?;
    let eps = geometric_signature(&g, &o, &ray)?;
    let wave = wave_values(data, x0)?;
    let sinks = complement(&o.sources, g.n());
    let values = Matrix::from_fn(sinks.len(), 1, |r, _| wave.psi[sinks[r] - 1]);
    let t: Vec<f64> = net.weights.iter().map(to_f64).collect();
    let lam = lam_solve(&g, &o, &eps, &t, &values).map_err(KpError::from)?;
    let scale = wave.psi.iter().fold(0.0f64, |a, p| a.max(p.abs()));
    let residual = o
        .sources
        .iter()
        .map(|&i| {
            let e = g.rotation(g.boundary_vertex(i))[0];
            (lam.black[e][0] - wave.psi[i - 1]).abs() / scale
        })
        .fold(0.0, f64::max);
    check_residuals(&wave, residual)?;
    let ztilde: Vec<f64> = lam.white.iter().map(|z| z[0]).collect();
    assemble(&g, data, x0, &wave, &ztilde, residual)
}

impl From<crate::error::WeightError> for KpError {
    fn from(e: crate::error::WeightError) -> Self {
        KpError::Kasteleyn(KasteleynError::Weight(e))
    }
}

impl From<crate::linalg::LinalgError> for KpError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        KpError::Relation(RelationError::from(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::kasteleyn::signature_gauge;
    use crate::rational::{int, ratio};
    use crate::relations::kasteleyn_system;
    use crate::weights::weight_gauge;

    fn ex1_network(w: [Rational; 4]) -> Network {
        let g = corpus::example_one_graph();
        let t = g
            .edges()
            .iter()
            .map(|e| match e.id.as_str() {
                "e01" => w[0].clone(),
                "e11" => w[1].clone(),
                "e34" => w[2].clone(),
                "e26" => w[3].clone(),
                _ => int(1),
            })
            .collect();
        Network::new(g, t).unwrap()
    }

    fn reference_signature(g: &PlanarBipartiteGraph) -> Vec<i8> {
        g.edges()
            .iter()
            .map(|e| if e.id == "e20" || e.id == "e26" { -1 } else { 1 })
            .collect()
    }

    fn gr12() -> SolitonData {
        SolitonData::new(vec![-1.0, 1.0], Matrix::from_rows(vec![vec![1.0, 1.0]])).unwrap()
    }

    #[test]
    fn one_soliton_peak() {
        let data = gr12();
        let pts: Vec<[f64; 3]> = (-400..=400).map(|i| [i as f64 * 0.01, 0.0, 0.0]).collect();
        let u = evaluate_soliton(&data, &pts, &[]).unwrap();
        let peak = u.iter().map(|s| s.u).fold(0.0, f64::max);
        assert!((peak - 2.0).abs() < 1e-6);
        for s in &u {
            let oracle = 2.0 / s.x.cosh().powi(2);
            assert!((s.u - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn row_scaling_leaves_field_unchanged() {
        let data = SolitonData::new(vec![-1.0, 0.5, 2.0], Matrix::from_rows(vec![vec![1.0, 2.0, 0.5]])).unwrap();
        let scaled = SolitonData::new(data.phases.clone(), data.matrix.map(|x| 3.5 * x)).unwrap();
        for p in [[0.0, 0.0, 0.0], [1.0, -0.5, 0.3], [-2.0, 1.0, 1.0]] {
            let a = evaluate_soliton(&data, &[p], &[]).unwrap()[0].u;
            let b = evaluate_soliton(&scaled, &[p], &[]).unwrap()[0].u;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gr12_dressing_closed_form() {
        let data = gr12();
        for p in [[0.0, 0.0, 0.0], [0.7, -0.2, 0.1], [-1.5, 0.3, 0.0]] {
            let d = dressing(&data, &p).unwrap();
            let th = data.thetas(&p);
            let (e1, e2) = (th[0].exp(), th[1].exp());
            let oracle = (-e1 + e2) / (e1 + e2);
            assert!((d.coefficients[0] - oracle).abs() < 1e-12);
            assert!(d.coefficients[0] > -1.0 && d.coefficients[0] < 1.0);
            let w = wave_values(&data, &p).unwrap();
            assert!(w.orthogonality < 1e-12);
        }
    }

    #[test]
    fn example_one_field_matches_rref_data() {
        let net = ex1_network([int(2), int(3), int(5), int(7)]);
        let phases = vec![-2.0, -1.0, -0.3, 0.4, 1.1, 2.0];
        let a = SolitonData::from_network(phases.clone(), &net).unwrap();
        let sigma = reference_signature(&net.graph);
        let km = kasteleyn_matrix(&net.graph, &sigma, &net.weights).unwrap();
        let rref = SolitonData::new(phases, km.rref_at_base(&[1, 4]).unwrap().map(to_f64)).unwrap();
        for p in [[0.0, 0.0, 0.0], [0.5, 0.2, -0.1], [-1.0, 0.7, 0.4]] {
            let u1 = evaluate_soliton(&a, &[p], &[]).unwrap()[0].u;
            let u2 = evaluate_soliton(&rref, &[p], &[]).unwrap()[0].u;
            assert!(u1.is_finite() && (u1 - u2).abs() < 1e-10);
            let w = wave_values(&rref, &p).unwrap();
            assert!(w.orthogonality < RESIDUAL_TOL);
            assert!(w.dressing.sato_roots.iter().all(|&g| (-2.0..=2.0).contains(&g)));
        }
    }

    #[test]
    fn wave_lies_in_kernel_span() {
        let net = ex1_network([int(2), int(3), int(5), int(7)]);
        let data = SolitonData::from_network(vec![-2.0, -1.0, -0.3, 0.4, 1.1, 2.0], &net).unwrap();
        let sys = kasteleyn_system(&net.graph, &reference_signature(&net.graph), &net.weights).unwrap();
        let basis = sys.kernel_basis().unwrap().map(to_f64);
        for p in [[0.0, 0.0, 0.0], [0.5, 0.2, -0.1]] {
            let w = wave_values(&data, &p).unwrap();
            assert!(span_residual(&basis, &w.psi) < RESIDUAL_TOL);
        }
    }

    #[test]
    fn white_vertex_relation_has_kasteleyn_coefficients() {
        let (t53, t72) = (int(5), int(7));
        let net = ex1_network([int(2), int(3), t53.clone(), t72]);
        let data = SolitonData::from_network(vec![-2.0, -1.0, -0.3, 0.4, 1.1, 2.0], &net).unwrap();
        for p in [[0.0, 0.0, 0.0], [0.3, -0.4, 0.2]] {
            let w = wave_values(&data, &p).unwrap();
            let r = to_f64(&t53) * w.psi[3] + w.psi[4];
            assert!(r.abs() < 1e-12 * w.psi[3].abs().max(w.psi[4].abs()));
            assert!(w.psi[3] * w.psi[4] < 0.0);
            assert_eq!(w.dressing.sato_roots.iter().filter(|&&g| g > 0.4 && g < 1.1).count(), 1);
        }
    }

    #[test]
    fn curve_of_example_one() {
        let g = corpus::example_one_graph();
        let c = build_spectral_curve(&g).unwrap();
        let names: Vec<&str> = c.components.iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names, ["Γ0", "Γb0", "Γw1", "Γw2", "Γw3"]);
        assert_eq!(c.ovals.len(), 5);
        assert_eq!(c.double_points.iter().filter(|d| d.phase.is_some()).count(), 6);
        let internal: Vec<&str> = c.double_points.iter().filter(|d| d.phase.is_none()).map(|d| d.edge.as_str()).collect();
        assert_eq!(internal, ["e01", "e20"]);
        let charts: Vec<[String; 3]> = c.charts.iter().map(|ch| ch.marked.clone()).collect();
        assert_eq!(charts, [["e12", "e11", "e01"].map(String::from), ["e26", "e32", "e20"].map(String::from)]);
        let trivial = build_spectral_curve(&corpus::trivial_graph()).unwrap();
        assert_eq!(trivial.components.len(), 2);
        assert_eq!(trivial.ovals.len(), 2);
    }

    #[test]
    fn gr12_normalization_time_is_origin() {
        let data = gr12();
        let net = Network::unit(corpus::trivial_graph());
        let x0 = find_normalization_time(&data, &net, &[1, 1]).unwrap();
        assert_eq!(x0.times, vec![0.0, 0.0, 0.0]);
        let d = kp_divisor(&data, &net, &[1, 1], &x0.times).unwrap();
        assert_eq!(d.sato_points.len(), 1);
        assert!(d.white_points.is_empty());
        let geo = kp_divisor_via_geometric(&data, &net, &x0.times).unwrap();
        assert_eq!(geo.canonical(), d.canonical());
    }

    #[test]
    fn example_one_divisor_pipelines_agree() {
        let net = ex1_network([int(2), int(3), int(5), int(7)]);
        let data = SolitonData::from_network(vec![-2.0, -1.0, -0.3, 0.4, 1.1, 2.0], &net).unwrap();
        let sigma = reference_signature(&net.graph);
        let x0 = find_normalization_time(&data, &net, &sigma).unwrap();
        let d = kp_divisor(&data, &net, &sigma, &x0.times).unwrap();
        assert_eq!(d.sato_points.len() + d.white_points.len(), 4);
        let geo = kp_divisor_via_geometric(&data, &net, &x0.times).unwrap();
        for (a, b) in d.white_points.iter().zip(&geo.white_points) {
            assert_eq!(a.oval, b.oval);
            let (ChartValue::Finite(x), ChartValue::Finite(y)) = (a.gamma, b.gamma) else { panic!() };
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn normalized_wave_identity_on_white_components() {
        let net = ex1_network([ratio(3, 2), int(2), ratio(1, 3), int(4)]);
        let g = &net.graph;
        let sigma = reference_signature(g);
        let data = SolitonData::from_network(vec![-2.5, -1.0, -0.2, 0.3, 1.4, 2.2], &net).unwrap();
        let x0 = find_normalization_time(&data, &net, &sigma).unwrap().times;
        let d = kp_divisor(&data, &net, &sigma, &x0).unwrap();
        let kw = KasteleynWave::new(&net, &sigma).unwrap();
        let v0 = kw.values(&data, &x0).unwrap();
        for p in [[0.4, -0.3, 0.1], [-0.8, 0.2, 0.5]] {
            let v = kw.values(&data, &p).unwrap();
            let hat = |b: usize| v.values[&b] / v0.values[&b] * (v.log_scale - v0.log_scale).exp();
            for wp in &d.white_points {
                let w = g.vertex_index(&wp.vertex).unwrap();
                let q = chart_edges(g, w).map(|e| hat(g.edge(e).black));
                let ChartValue::Finite(gamma) = wp.gamma else { panic!() };
                let r = gamma * q[0] + (1.0 - gamma) * q[1] - q[2];
                assert!(r.abs() < 1e-8 * q.iter().fold(1.0f64, |a, x| a.max(x.abs())));
            }
        }
    }

    #[test]
    fn divisor_invariant_under_gauges() {
        let net = ex1_network([int(2), int(3), int(5), int(7)]);
        let g = &net.graph;
        let sigma = reference_signature(g);
        let data = SolitonData::from_network(vec![-2.0, -1.0, -0.3, 0.4, 1.1, 2.0], &net).unwrap();
        let x0 = find_normalization_time(&data, &net, &sigma).unwrap().times;
        let base = kp_divisor(&data, &net, &sigma, &x0).unwrap().canonical();
        let b0 = g.vertex_index("b0").unwrap();
        let gauged = Network::new(g.clone(), weight_gauge(g, &net.weights, b0, &ratio(7, 3)).unwrap()).unwrap();
        assert_eq!(kp_divisor(&data, &gauged, &sigma, &x0).unwrap().canonical(), base);
        let mut alpha = vec![1i8; g.vertices().len()];
        alpha[g.vertex_index("w2").unwrap()] = -1;
        alpha[b0] = -1;
        let s2 = signature_gauge(g, &sigma, &alpha).unwrap();
        assert_eq!(kp_divisor(&data, &net, &s2, &x0).unwrap().canonical(), base);
        let other = construct_signature(g).unwrap();
        assert_eq!(kp_divisor(&data, &net, &other, &x0).unwrap().canonical(), base);
    }

    /// Positions of the white divisor points against the interval of the
    /// free Sato root, with ovals named by the boundary arcs they contain.
    #[test]
    fn example_one_case_table() {
        let net = ex1_network([int(2), int(3), int(5), int(7)]);
        let g = &net.graph;
        let sigma = reference_signature(g);
        let arc = &g.faces().arc_face;
        let (o2, o3, o4) = (arc[0], arc[1], arc[2]);
        let data = SolitonData::from_network(vec![-2.0, -1.0, -0.3, 0.4, 1.1, 2.0], &net).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for p in candidate_times(4) {
            let Ok(d) = kp_divisor(&data, &net, &sigma, &p) else { continue };
            assert!(d.sato_points.iter().any(|s| s.interval == 4));
            let free = d.sato_points.iter().find(|s| s.interval != 4).unwrap_or(&d.sato_points[0]);
            let ovals: Vec<usize> = d.white_points.iter().map(|w| w.oval).collect();
            let expected = match free.interval {
                1 => vec![o3, o4],
                2 => vec![o2, o4],
                3 | 5 => vec![o2, o3],
                4 => continue,
                _ => unreachable!(),
            };
            assert_eq!(ovals, expected, "interval {}", free.interval);
            seen.insert(free.interval.min(3));
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), [1, 2, 3]);
    }

    #[test]
    fn degree_four_is_rejected() {
        let g = corpus::star_graph(4);
        assert!(matches!(build_spectral_curve(&g), Err(KpError::DegreeTooHigh(_))));
    }

    #[test]
    fn candidate_order_starts_at_origin() {
        let c = candidate_times(1);
        assert_eq!(c.len(), 27);
        assert_eq!(c[0], [0.0, 0.0, 0.0]);
        assert_eq!(c[1], [-0.5, 0.0, 0.0]);
    }
}
