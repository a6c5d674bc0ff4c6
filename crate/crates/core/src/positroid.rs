//! Positroids, Le-diagrams, decorated permutations and Le-graphs.
//!
//! The SE border of a Le-diagram inside the `k × (n−k)` rectangle is labeled
//! `1..n` starting from the northeast corner; its vertical steps form the
//! lexicographically minimal base. Pipes enter at the border, turn at every 1
//! (elbow) and go straight at every 0 (cross).

use std::collections::{BTreeMap, BTreeSet, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::PositroidError;
use crate::geometry::Point;
use crate::graph::{build_graph, Color, EdgeSpec, GraphSpec, PlanarBipartiteGraph, VertexKind, VertexSpec};
use crate::rational::{int, ratio, Rational};

/// A matroid given by its list of bases (sorted labels in `1..=n`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Positroid {
    pub k: usize,
    pub n: usize,
    pub bases: Vec<Vec<usize>>,
}

impl Positroid {
    /// The uniform matroid `U(k, n)`.
    pub fn uniform(k: usize, n: usize) -> Self {
        Positroid {
            k,
            n,
            bases: (1..=n).combinations(k).collect(),
        }
    }

    pub fn contains(&self, subset: &[usize]) -> bool {
        self.bases.binary_search_by(|b| b.as_slice().cmp(subset)).is_ok()
    }

    /// Lexicographically smallest base.
    pub fn lex_min_base(&self) -> Option<&[usize]> {
        self.bases.first().map(Vec::as_slice)
    }

    /// Every label lies in some base and outside some base.
    pub fn is_irreducible(&self) -> bool {
        (1..=self.n).all(|j| {
            self.bases.iter().any(|b| b.contains(&j)) && self.bases.iter().any(|b| !b.contains(&j))
        })
    }

    /// The dual matroid: complements of bases.
    pub fn dual(&self) -> Positroid {
        let mut bases: Vec<Vec<usize>> = self.bases.iter().map(|b| complement(b, self.n)).collect();
        bases.sort();
        Positroid {
            k: self.n - self.k,
            n: self.n,
            bases,
        }
    }

    /// Checks the basis-exchange axiom exhaustively.
    pub fn satisfies_exchange(&self) -> bool {
        let set: HashSet<&Vec<usize>> = self.bases.iter().collect();
        self.bases.iter().all(|b1| {
            self.bases.iter().all(|b2| {
                b1.iter().filter(|x| !b2.contains(x)).all(|&x| {
                    b2.iter().filter(|y| !b1.contains(y)).any(|&y| {
                        let mut c: Vec<usize> = b1.iter().copied().filter(|&z| z != x).collect();
                        c.push(y);
                        c.sort_unstable();
                        set.contains(&c)
                    })
                })
            })
        })
    }
}

/// Sorted complement of `subset` in `1..=n`.
pub fn complement(subset: &[usize], n: usize) -> Vec<usize> {
    (1..=n).filter(|j| !subset.contains(j)).collect()
}

/// Orientation flag of a fixed point of a decorated permutation.
///
/// `Clockwise` marks a fixed point that belongs to every base (counted as a
/// weak excedance); `Counterclockwise` one that belongs to no base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopOrientation {
    Clockwise,
    Counterclockwise,
}

impl LoopOrientation {
    fn flip(self) -> Self {
        match self {
            LoopOrientation::Clockwise => LoopOrientation::Counterclockwise,
            LoopOrientation::Counterclockwise => LoopOrientation::Clockwise,
        }
    }
}

/// A permutation of `1..=n` with orientation flags on its fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedPermutation {
    /// `images[i-1] = π(i)`.
    pub images: Vec<usize>,
    /// Flags of fixed points, keyed by the fixed point.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub loops: BTreeMap<usize, LoopOrientation>,
}

impl DecoratedPermutation {
    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `π(i)` for `i` in `1..=n`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// Number of weak excedances (clockwise fixed points count).
    pub fn k(&self) -> usize {
        self.excedance_set().len()
    }

    /// Positions of weak excedances.
    pub fn excedance_set(&self) -> Vec<usize> {
        (1..=self.n())
            .filter(|&i| {
                let p = self.apply(i);
                p > i || (p == i && self.loops.get(&i) == Some(&LoopOrientation::Clockwise))
            })
            .collect()
    }

    /// No fixed points.
    pub fn is_derangement(&self) -> bool {
        (1..=self.n()).all(|i| self.apply(i) != i)
    }

    /// The inverse permutation with fixed-point flags swapped.
    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.n()];
        for i in 1..=self.n() {
            images[self.apply(i) - 1] = i;
        }
        DecoratedPermutation {
            images,
            loops: self.loops.iter().map(|(&i, l)| (i, l.flip())).collect(),
        }
    }
}

/// A 0/1 filling of a Young diagram in the `k × (n−k)` rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeDiagram {
    pub k: usize,
    pub n: usize,
    /// Row `r` has length `λ_r`; entries are 0 or 1.
    pub rows: Vec<Vec<u8>>,
}

/// Labels of the SE border steps.
#[derive(Debug, Clone)]
struct Border {
    /// Label of the vertical step ending row `r`.
    row_label: Vec<usize>,
    /// Label of the horizontal step under column `c` (index `c-1`).
    col_label: Vec<usize>,
    /// Column heights `μ_c`.
    col_height: Vec<usize>,
}

impl LeDiagram {
    /// Row lengths.
    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// Number of 1s, the dimension of the positroid cell.
    pub fn dimension(&self) -> usize {
        self.rows.iter().flatten().filter(|&&x| x == 1).count()
    }

    /// Checks the shape and the Le-property.
    pub fn validate(&self) -> Result<(), PositroidError> {
        if self.k > self.n {
            return Err(PositroidError::InvalidShape("k exceeds n".into()));
        }
        if self.rows.len() != self.k {
            return Err(PositroidError::InvalidShape(format!(
                "{} rows for k = {}",
                self.rows.len(),
                self.k
            )));
        }
        let m = self.n - self.k;
        let shape = self.shape();
        if shape.first().is_some_and(|&l| l > m) {
            return Err(PositroidError::InvalidShape("row longer than n - k".into()));
        }
        if shape.windows(2).any(|w| w[0] < w[1]) {
            return Err(PositroidError::InvalidShape("row lengths must weakly decrease".into()));
        }
        if self.rows.iter().flatten().any(|&x| x > 1) {
            return Err(PositroidError::InvalidShape("entries must be 0 or 1".into()));
        }
        for r in 0..self.k {
            for c in 0..shape[r] {
                if self.rows[r][c] == 0
                    && (0..r).any(|r2| self.rows[r2][c] == 1)
                    && (0..c).any(|c2| self.rows[r][c2] == 1)
                {
                    return Err(PositroidError::InvalidLeFilling { row: r + 1, col: c + 1 });
                }
            }
        }
        Ok(())
    }

    fn border(&self) -> Border {
        let m = self.n - self.k;
        let shape = self.shape();
        let mut row_label = vec![0; self.k];
        let mut col_label = vec![0; m];
        let mut label = 1;
        let mut x = m;
        for r in 0..self.k {
            while x > shape[r] {
                col_label[x - 1] = label;
                label += 1;
                x -= 1;
            }
            row_label[r] = label;
            label += 1;
        }
        while x > 0 {
            col_label[x - 1] = label;
            label += 1;
            x -= 1;
        }
        let col_height = (1..=m).map(|c| shape.iter().filter(|&&l| l >= c).count()).collect();
        Border {
            row_label,
            col_label,
            col_height,
        }
    }

    /// Rows or columns without a 1 (each yields a fixed point).
    pub fn zero_lines(&self) -> (Vec<usize>, Vec<usize>) {
        let m = self.n - self.k;
        let rows = (0..self.k)
            .filter(|&r| !self.rows[r].contains(&1))
            .map(|r| r + 1)
            .collect();
        let cols = (0..m)
            .filter(|&c| !self.rows.iter().any(|row| row.get(c) == Some(&1)))
            .map(|c| c + 1)
            .collect();
        (rows, cols)
    }
}

/// Labels of the vertical border steps.
pub fn lex_min_base(l: &LeDiagram) -> Result<Vec<usize>, PositroidError> {
    l.validate()?;
    Ok(l.border().row_label)
}

/// Decorated permutation by pipe tracing.
pub fn le_to_permutation(l: &LeDiagram) -> Result<DecoratedPermutation, PositroidError> {
    l.validate()?;
    let border = l.border();
    let shape = l.shape();
    let m = l.n - l.k;
    // Exit label at the west end of each row and the north end of each column.
    let mut west = vec![0; l.k];
    let mut north = vec![0; m];
    #[derive(Clone, Copy, PartialEq)]
    enum Dir {
        West,
        North,
    }
    let mut trace = |label: usize, mut r: usize, mut c: usize, mut dir: Dir| loop {
        // (r, c) are 1-based box coordinates about to be entered.
        if c == 0 {
            west[r - 1] = label;
            return;
        }
        if r == 0 {
            north[c - 1] = label;
            return;
        }
        if l.rows[r - 1][c - 1] == 1 {
            dir = match dir {
                Dir::West => Dir::North,
                Dir::North => Dir::West,
            };
        }
        match dir {
            Dir::West => c -= 1,
            Dir::North => r -= 1,
        }
    };
    for r in 1..=l.k {
        trace(border.row_label[r - 1], r, shape[r - 1], Dir::West);
    }
    for c in 1..=m {
        trace(border.col_label[c - 1], border.col_height[c - 1], c, Dir::North);
    }
    let mut images = vec![0; l.n];
    let mut loops = BTreeMap::new();
    for r in 1..=l.k {
        let i = border.row_label[r - 1];
        images[i - 1] = west[r - 1];
        if west[r - 1] == i {
            loops.insert(i, LoopOrientation::Clockwise);
        }
    }
    for c in 1..=m {
        let i = border.col_label[c - 1];
        images[i - 1] = north[c - 1];
        if north[c - 1] == i {
            loops.insert(i, LoopOrientation::Counterclockwise);
        }
    }
    Ok(DecoratedPermutation { images, loops })
}

/// Le-graph of a diagram, with rational positions.
///
/// Every 1-box carries a hook (white on the left, black on the right). Blacks
/// connect to the next white to their right in the row (or to a border white
/// next to the row's boundary vertex), whites connect to the next hook black
/// below in the column (or to the column's boundary vertex). The picture is
/// rotated by a half turn so that boundary labels run clockwise with the
/// interior to the southeast of the border.
pub fn le_graph(l: &LeDiagram, allow_reducible: bool) -> Result<PlanarBipartiteGraph, PositroidError> {
    l.validate()?;
    let (zero_rows, zero_cols) = l.zero_lines();
    if !allow_reducible && (!zero_rows.is_empty() || !zero_cols.is_empty()) {
        return Err(PositroidError::ReducibleDiagram(format!(
            "rows without 1: {zero_rows:?}, columns without 1: {zero_cols:?}"
        )));
    }
    let border = l.border();
    let shape = l.shape();
    let m = l.n - l.k;
    let mut vertices: Vec<VertexSpec> = Vec::new();
    let mut edges: Vec<EdgeSpec> = Vec::new();
    // Half-turn of the original frame: (x, y) -> (-x, -y).
    let place = |x: Rational, y: Rational| Some(Point::new(-x, -y));
    let half = ratio(1, 2);
    let mut boundary_ids = vec![String::new(); l.n];
    for r in 1..=l.k {
        let label = border.row_label[r - 1];
        boundary_ids[label - 1] = format!("b{label}");
        vertices.push(VertexSpec {
            id: format!("b{label}"),
            color: Color::Black,
            kind: VertexKind::Boundary,
            position: place(int(shape[r - 1] as i64), half.clone() - int(r as i64)),
        });
    }
    for c in 1..=m {
        let label = border.col_label[c - 1];
        boundary_ids[label - 1] = format!("b{label}");
        vertices.push(VertexSpec {
            id: format!("b{label}"),
            color: Color::Black,
            kind: VertexKind::Boundary,
            position: place(int(c as i64) - half.clone(), -int(border.col_height[c - 1] as i64)),
        });
    }
    let hook_white = |r: usize, c: usize| format!("w{r}.{c}");
    let hook_black = |r: usize, c: usize| format!("k{r}.{c}");
    for r in 1..=l.k {
        let y = half.clone() - int(r as i64);
        vertices.push(VertexSpec {
            id: format!("u{r}"),
            color: Color::White,
            kind: VertexKind::Internal,
            position: place(int(shape[r - 1] as i64) - ratio(1, 10), y.clone()),
        });
        for c in 1..=shape[r - 1] {
            if l.rows[r - 1][c - 1] == 1 {
                vertices.push(VertexSpec {
                    id: hook_white(r, c),
                    color: Color::White,
                    kind: VertexKind::Internal,
                    position: place(int(c as i64) - ratio(3, 4), y.clone()),
                });
                vertices.push(VertexSpec {
                    id: hook_black(r, c),
                    color: Color::Black,
                    kind: VertexKind::Internal,
                    position: place(int(c as i64) - ratio(1, 4), y.clone()),
                });
            }
        }
    }
    let mut add_edge = |a: String, b: String| {
        let id = format!("e{}", edges.len() + 1);
        edges.push(EdgeSpec { id, ends: [a, b] });
    };
    for r in 1..=l.k {
        add_edge(format!("u{r}"), format!("b{}", border.row_label[r - 1]));
        for c in 1..=shape[r - 1] {
            if l.rows[r - 1][c - 1] != 1 {
                continue;
            }
            add_edge(hook_white(r, c), hook_black(r, c));
            let right = (c + 1..=shape[r - 1])
                .find(|&c2| l.rows[r - 1][c2 - 1] == 1)
                .map_or(format!("u{r}"), |c2| hook_white(r, c2));
            add_edge(hook_black(r, c), right);
            let down = (r + 1..=l.k)
                .find(|&r2| shape[r2 - 1] >= c && l.rows[r2 - 1][c - 1] == 1)
                .map_or(format!("b{}", border.col_label[c - 1]), |r2| hook_black(r2, c));
            add_edge(hook_white(r, c), down);
        }
    }
    let spec = GraphSpec {
        vertices,
        boundary_order: boundary_ids,
        edges,
        rotation: None,
    };
    Ok(build_graph(&spec)?)
}

/// Decorated permutation read off the strands of a graph.
///
/// A strand enters each edge from its endpoint and leaves an internal white
/// vertex along the next edge counterclockwise, an internal black vertex
/// along the next edge clockwise.
pub fn graph_to_permutation(g: &PlanarBipartiteGraph) -> Result<DecoratedPermutation, PositroidError> {
    let n = g.n();
    let mut images = vec![0; n];
    let mut loops = BTreeMap::new();
    for i in 1..=n {
        let start = g.boundary_vertex(i);
        let mut e = g.rotation(start)[0];
        let mut v = g.other_end(e, start);
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        seen.insert((e, v));
        while !g.is_boundary(v) {
            let rot = g.rotation(v);
            let d = rot.len();
            let idx = rot.iter().position(|&x| x == e).expect("incident edge");
            let next = match g.vertex(v).color {
                Color::White => rot[(idx + 1) % d],
                Color::Black => rot[(idx + d - 1) % d],
            };
            let u = g.other_end(next, v);
            if !seen.insert((next, u)) {
                return Err(PositroidError::StrandTraceDiverges(i));
            }
            e = next;
            v = u;
        }
        let j = g.boundary_label(v).expect("boundary vertex");
        images[i - 1] = j;
        if j == i {
            let flag = match g.boundary_color() {
                Color::Black => LoopOrientation::Clockwise,
                Color::White => LoopOrientation::Counterclockwise,
            };
            loops.insert(i, flag);
        }
    }
    Ok(DecoratedPermutation { images, loops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::positroid_of_graph;

    fn figure_three() -> LeDiagram {
        LeDiagram {
            k: 2,
            n: 6,
            rows: vec![vec![1, 0, 1, 1], vec![0, 1]],
        }
    }

    #[test]
    fn pipes_of_figure_three() {
        let l = figure_three();
        let p = le_to_permutation(&l).unwrap();
        assert_eq!(p.images, vec![6, 1, 2, 5, 4, 3]);
        assert_eq!(p.k(), 2);
        assert_eq!(lex_min_base(&l).unwrap(), vec![1, 4]);
        assert_eq!(p.inverse().images, vec![2, 3, 6, 5, 4, 1]);
    }

    #[test]
    fn all_zero_rectangle_is_reducible() {
        let l = LeDiagram {
            k: 2,
            n: 5,
            rows: vec![vec![0, 0, 0], vec![0, 0, 0]],
        };
        let p = le_to_permutation(&l).unwrap();
        assert_eq!(p.images, vec![1, 2, 3, 4, 5]);
        assert_eq!(p.k(), 2);
        assert_eq!(p.loops.values().filter(|&&x| x == LoopOrientation::Clockwise).count(), 2);
        assert!(matches!(le_graph(&l, false), Err(PositroidError::ReducibleDiagram(_))));
    }

    #[test]
    fn le_property_violation() {
        let l = LeDiagram {
            k: 2,
            n: 4,
            rows: vec![vec![0, 1], vec![1, 0]],
        };
        assert_eq!(l.validate(), Err(PositroidError::InvalidLeFilling { row: 2, col: 2 }));
    }

    #[test]
    fn top_cell_base() {
        let l = LeDiagram {
            k: 2,
            n: 5,
            rows: vec![vec![1; 3], vec![1; 3]],
        };
        assert_eq!(lex_min_base(&l).unwrap(), vec![1, 2]);
    }

    #[test]
    fn single_box_le_graph() {
        let l = LeDiagram {
            k: 1,
            n: 2,
            rows: vec![vec![1]],
        };
        let g = le_graph(&l, false).unwrap();
        assert_eq!(positroid_of_graph(&g, 100).unwrap(), Positroid::uniform(1, 2));
        assert_eq!(graph_to_permutation(&g).unwrap().images, vec![2, 1]);
    }

    #[test]
    fn figure_three_le_graph_round_trip() {
        let l = figure_three();
        let g = le_graph(&l, false).unwrap();
        assert_eq!(graph_to_permutation(&g).unwrap(), le_to_permutation(&l).unwrap());
        assert_eq!(g.faces().finite_count(), l.dimension());
        let p = positroid_of_graph(&g, 10_000).unwrap();
        let q = positroid_of_graph(&corpus::example_one_graph(), 10_000).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn strands_of_example_one() {
        let g = corpus::example_one_graph();
        assert_eq!(graph_to_permutation(&g).unwrap().images, vec![6, 1, 2, 5, 4, 3]);
        let g = corpus::trivial_graph();
        assert_eq!(graph_to_permutation(&g).unwrap().images, vec![2, 1]);
    }

    #[test]
    fn uniform_duality_and_exchange() {
        let u = Positroid::uniform(2, 4);
        assert_eq!(u.dual(), Positroid::uniform(2, 4));
        assert_eq!(Positroid::uniform(1, 3).dual(), Positroid::uniform(2, 3));
        assert!(u.satisfies_exchange());
        assert!(u.is_irreducible());
        assert!(Positroid::uniform(1, 2).is_irreducible());
    }
}
