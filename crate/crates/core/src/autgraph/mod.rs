//! Complete edge-colored digraphs, their encodings of sign matrices and SICs,
//! and automorphism / recolor-isomorphism search by individualization and
//! refinement.
//!
//! Edge colors are bytes: `0..=3` stand for the phase `i^k` (so `+1` is `0`
//! and `-1` is `2`), [`FIBER`] joins distinct vertices of one fiber, and
//! [`NONE`] marks loops and pairs that carry no relation.

mod encode;
mod refine;
mod search;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::permgroup::Perm;

pub use encode::{encode_phased_matrix_graph, encode_sic_graph, MatrixMode};
pub use refine::color_refine;
pub use search::{graph_automorphisms, graph_isomorphism_to_recolored, AutomorphismResult, DEFAULT_BUDGET};

pub const FIBER: u8 = 4;
pub const NONE: u8 = 5;
pub(crate) const NUM_COLORS: usize = 6;

/// A complete edge-colored digraph with a fiber partition of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredDigraph {
    n: usize,
    vertex_color: Vec<u32>,
    edges: Vec<u8>,
    fibers: Vec<Vec<usize>>,
    fiber_of: Vec<usize>,
}

impl ColoredDigraph {
    /// Validates: `edges` is `n x n` row-major over colors `0..=5`, loops are
    /// [`NONE`], and [`FIBER`] appears exactly on ordered pairs of distinct
    /// vertices sharing a fiber.
    pub fn new(
        vertex_color: Vec<u32>,
        edges: Vec<u8>,
        fibers: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = vertex_color.len();
        if edges.len() != n * n {
            return Err(Error::Dimension(format!("{} edge colors for {n} vertices", edges.len())));
        }
        let mut fiber_of = vec![usize::MAX; n];
        for (b, block) in fibers.iter().enumerate() {
            for &v in block {
                if v >= n || fiber_of[v] != usize::MAX {
                    return Err(Error::Precondition(format!(
                        "fibers do not partition the vertices (vertex {v})"
                    )));
                }
                fiber_of[v] = b;
            }
        }
        if fiber_of.contains(&usize::MAX) {
            return Err(Error::Precondition("fibers do not cover every vertex".into()));
        }
        for v in 0..n {
            for w in 0..n {
                let c = edges[v * n + w];
                let ok = if v == w {
                    c == NONE
                } else if fiber_of[v] == fiber_of[w] {
                    c == FIBER
                } else {
                    (c as usize) < NUM_COLORS && c != FIBER
                };
                if !ok {
                    return Err(Error::Precondition(format!(
                        "edge ({v}, {w}) has color {c}, inconsistent with the fiber structure"
                    )));
                }
            }
        }
        Ok(ColoredDigraph {
            n,
            vertex_color,
            edges,
            fibers,
            fiber_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_color(&self, v: usize) -> u32 {
        self.vertex_color[v]
    }

    pub fn vertex_colors(&self) -> &[u32] {
        &self.vertex_color
    }

    #[inline]
    pub fn edge(&self, v: usize, w: usize) -> u8 {
        self.edges[v * self.n + w]
    }

    pub fn edges(&self) -> &[u8] {
        &self.edges
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    pub fn fiber_of(&self, v: usize) -> usize {
        self.fiber_of[v]
    }

    /// The same graph with every edge color passed through `r`.
    pub fn recolored(&self, r: &Recoloring) -> Self {
        ColoredDigraph {
            edges: self.edges.iter().map(|&c| r.apply(c)).collect(),
            ..self.clone()
        }
    }

    /// Whether `g` preserves vertex colors and every edge color.
    pub fn is_automorphism(&self, g: &Perm) -> bool {
        self.maps_onto(g, self, &Recoloring::identity())
    }

    /// Whether `color_other(f(u), f(v)) = r(color_self(u, v))` for all pairs,
    /// with vertex colors preserved.
    pub fn maps_onto(&self, f: &Perm, other: &ColoredDigraph, r: &Recoloring) -> bool {
        let n = self.n;
        if f.degree() != n || other.n != n {
            return false;
        }
        if (0..n).any(|v| other.vertex_color[f.apply(v)] != self.vertex_color[v]) {
            return false;
        }
        let img = f.images();
        (0..n).all(|u| {
            let row = &self.edges[u * n..(u + 1) * n];
            let orow = &other.edges[img[u] * n..(img[u] + 1) * n];
            row.iter()
                .zip(&img)
                .all(|(&c, &fv)| orow[fv] == r.apply(c))
        })
    }

    /// Text matrix of color symbols: `+ i - j` for `1, i, -1, -i`, `F` for
    /// fiber pairs and `.` for none; preceded by a line of vertex colors.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# n={} fibers={}", self.n, self.fibers.len());
        let colors: Vec<String> = self.vertex_color.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "# vertex colors: {}", colors.join(" "));
        for v in 0..self.n {
            for w in 0..self.n {
                out.push(match self.edge(v, w) {
                    0 => '+',
                    1 => 'i',
                    2 => '-',
                    3 => 'j',
                    FIBER => 'F',
                    _ => '.',
                });
            }
            out.push('\n');
        }
        out
    }
}

/// A permutation of the color alphabet: `omega -> eps * omega^gamma` on the
/// phases, fixing [`FIBER`] and [`NONE`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Recoloring {
    pub eps: i8,
    pub conj: bool,
}

impl Recoloring {
    pub fn new(eps: i8, conj: bool) -> Result<Self> {
        if eps != 1 && eps != -1 {
            return Err(Error::Precondition(format!("eps must be +-1, got {eps}")));
        }
        Ok(Recoloring { eps, conj })
    }

    pub fn identity() -> Self {
        Recoloring { eps: 1, conj: false }
    }

    #[inline]
    pub fn apply(&self, c: u8) -> u8 {
        if c >= FIBER {
            return c;
        }
        let c = if self.conj { (4 - c) % 4 } else { c };
        if self.eps < 0 {
            (c + 2) % 4
        } else {
            c
        }
    }

    /// Every recoloring of this form is an involution.
    pub fn inverse(&self) -> Self {
        *self
    }

    pub fn is_identity(&self) -> bool {
        self.eps == 1 && !self.conj
    }
}

/// Induced permutation of fiber indices.
pub fn project_fiber(g: &Perm, graph: &ColoredDigraph) -> Result<Perm> {
    if g.degree() != graph.n() {
        return Err(Error::Dimension("permutation degree differs from vertex count".into()));
    }
    let images: Vec<usize> = graph
        .fibers()
        .iter()
        .map(|block| {
            let target = graph.fiber_of(g.apply(block[0]));
            if block.iter().any(|&v| graph.fiber_of(g.apply(v)) != target) {
                return Err(Error::Precondition(format!(
                    "permutation splits fiber {}",
                    graph.fiber_of(block[0])
                )));
            }
            Ok(target)
        })
        .collect::<Result<_>>()?;
    Perm::from_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recoloring_tables() {
        let conj = Recoloring::new(1, true).unwrap();
        assert_eq!((0..6).map(|c| conj.apply(c)).collect::<Vec<_>>(), vec![0, 3, 2, 1, 4, 5]);
        let neg = Recoloring::new(-1, false).unwrap();
        assert_eq!((0..6).map(|c| neg.apply(c)).collect::<Vec<_>>(), vec![2, 3, 0, 1, 4, 5]);
        let both = Recoloring::new(-1, true).unwrap();
        for c in 0..6 {
            assert_eq!(both.apply(both.inverse().apply(c)), c);
        }
        assert!(Recoloring::new(0, false).is_err());
    }

    #[test]
    fn validation_rejects_bad_fibers() {
        // two vertices in one fiber must carry FIBER both ways
        let ok = ColoredDigraph::new(vec![0, 0], vec![NONE, FIBER, FIBER, NONE], vec![vec![0, 1]]);
        assert!(ok.is_ok());
        let bad = ColoredDigraph::new(vec![0, 0], vec![NONE, 0, 0, NONE], vec![vec![0, 1]]);
        assert!(bad.is_err());
        let bad = ColoredDigraph::new(vec![0, 0], vec![NONE, FIBER, FIBER, NONE], vec![vec![0], vec![1]]);
        assert!(bad.is_err());
        let uncovered = ColoredDigraph::new(vec![0, 0], vec![NONE, 0, 0, NONE], vec![vec![0]]);
        assert!(uncovered.is_err());
    }

    #[test]
    fn projection_of_identity() {
        let g = ColoredDigraph::new(
            vec![0; 4],
            vec![NONE, FIBER, 0, 0, FIBER, NONE, 0, 0, 0, 0, NONE, FIBER, 0, 0, FIBER, NONE],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap();
        assert!(project_fiber(&Perm::identity(4), &g).unwrap().is_identity());
        let swap = Perm::from_images(vec![2, 3, 1, 0]).unwrap();
        assert_eq!(project_fiber(&swap, &g).unwrap().images(), vec![1, 0]);
        let split = Perm::from_images(vec![0, 2, 1, 3]).unwrap();
        assert!(project_fiber(&split, &g).is_err());
        assert!(g.dump().contains("\n.F++\n"));
    }
}
