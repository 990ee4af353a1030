//! Individualization-refinement search.
//!
//! The first path of the search tree always individualizes the first vertex
//! of the target cell. Levels are then revisited deepest first; at level `k`
//! each vertex `w` of the target cell that is not already known to share an
//! orbit with the first-path vertex `v_k` gets one subtree search for a leaf
//! equivalent to the first leaf. Generators found this way fix
//! `v_0..v_{k-1}`, so together they form a strong generating set for the
//! base `(v_0, v_1, ...)` and the group order is the product of the basic
//! orbit lengths.

use std::collections::HashSet;

use super::refine::{PairTable, Partition, Refiner, Trace};
use super::{ColoredDigraph, Recoloring};
use crate::error::{Error, Result};
use crate::permgroup::{Perm, PermGroup};

/// Default cap on search-tree nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Automorphism group with the base the search used.
#[derive(Clone, Debug)]
pub struct AutomorphismResult {
    pub group: PermGroup,
    pub base: Vec<usize>,
    /// Search-tree nodes visited, including the first path.
    pub nodes: u64,
}

struct PathLevel {
    /// Refined partition before individualizing at this level.
    node: Partition,
    cell: u32,
    vertex: u32,
    trace: Vec<u64>,
}

struct FirstPath {
    root_trace: Vec<u64>,
    levels: Vec<PathLevel>,
    leaf: Vec<u32>,
}

struct Counter {
    nodes: u64,
    budget: u64,
}

impl Counter {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }
}

fn all_cells_refined(g: &ColoredDigraph, refiner: &mut Refiner, trace: &mut Trace) -> Option<Partition> {
    let mut p = Partition::from_colors(g.vertex_colors());
    if !Refiner::trace_initial(&p, g.vertex_colors(), trace) {
        return None;
    }
    let starts = p.cell_starts();
    if !refiner.refine(&mut p, &starts, trace) || !trace.complete() {
        return None;
    }
    Some(p)
}

fn first_path(g: &ColoredDigraph, refiner: &mut Refiner, counter: &mut Counter) -> Result<FirstPath> {
    counter.tick()?;
    let mut trace = Trace::Record(Vec::new());
    let mut p = all_cells_refined(g, refiner, &mut trace).expect("recording never mismatches");
    let root_trace = trace.into_vec();
    let mut levels = Vec::new();
    while let Some(cell) = p.target_cell() {
        counter.tick()?;
        let vertex = p.elems[cell as usize];
        let node = p.clone();
        let mut t = Trace::Record(Vec::new());
        refiner.individualize_and_refine(&mut p, vertex, &mut t);
        levels.push(PathLevel {
            node,
            cell,
            vertex,
            trace: t.into_vec(),
        });
    }
    Ok(FirstPath {
        root_trace,
        levels,
        leaf: p.elems.clone(),
    })
}

/// Union-find roots of the orbits of the generators fixing `fixed` pointwise,
/// or `None` if no generator qualifies.
fn stabilizer_orbit_roots(n: usize, gens: &[Perm], fixed: &[u32]) -> Option<Vec<u32>> {
    let usable: Vec<&Perm> = gens
        .iter()
        .filter(|g| fixed.iter().all(|&v| g.apply(v as usize) == v as usize))
        .collect();
    if usable.is_empty() {
        return None;
    }
    Some(orbit_roots(n, usable.into_iter()))
}

fn orbit_roots<'a>(n: usize, gens: impl Iterator<Item = &'a Perm>) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for g in gens {
        for x in 0..n {
            let a = find(&mut parent, x as u32);
            let b = find(&mut parent, g.apply(x) as u32);
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    (0..n as u32).map(|x| find(&mut parent, x)).collect()
}

/// Searches the tree of `searched` for leaves matching the first path of
/// `reference_graph`; a match yields `h` with
/// `color_ref(h(u), h(v)) = color_searched(u, v)`.
struct Searcher<'a> {
    searched: &'a ColoredDigraph,
    reference_graph: &'a ColoredDigraph,
    path: &'a FirstPath,
    refiner: Refiner<'a>,
    counter: Counter,
    gens: Vec<Perm>,
}

impl Searcher<'_> {
    fn descend(&mut self, node: &Partition, k: usize, w: u32, fixed: &mut Vec<u32>) -> Result<Option<Perm>> {
        self.counter.tick()?;
        let path = self.path;
        let mut p = node.clone();
        let mut trace = Trace::Compare {
            reference: &path.levels[k].trace,
            at: 0,
        };
        if !self.refiner.individualize_and_refine(&mut p, w, &mut trace) || !trace.complete() {
            return Ok(None);
        }
        if k + 1 == path.levels.len() {
            return Ok(self.leaf(&p));
        }
        let children = p.cell_members(path.levels[k + 1].cell).to_vec();
        let roots = stabilizer_orbit_roots(p.n(), &self.gens, fixed);
        let mut tried = HashSet::new();
        for x in children {
            if let Some(r) = &roots {
                if !tried.insert(r[x as usize]) {
                    continue;
                }
            }
            fixed.push(x);
            let found = self.descend(&p, k + 1, x, fixed);
            fixed.pop();
            if let Some(h) = found? {
                return Ok(Some(h));
            }
        }
        Ok(None)
    }

    fn leaf(&self, p: &Partition) -> Option<Perm> {
        if !p.is_discrete() {
            return None;
        }
        let mut img = vec![0u32; p.n()];
        for (i, &v) in p.elems.iter().enumerate() {
            img[v as usize] = self.path.leaf[i];
        }
        let h = Perm::from_u32_unchecked(img);
        self.searched
            .maps_onto(&h, self.reference_graph, &Recoloring::identity())
            .then_some(h)
    }
}

/// Full automorphism group (vertex colors and every edge color preserved).
pub fn graph_automorphisms(g: &ColoredDigraph, budget: u64) -> Result<AutomorphismResult> {
    let n = g.n();
    let table = PairTable::new(&[g]);
    let pc = table.codes(g);
    let mut refiner = Refiner::new(n, table.k(), &pc);
    let mut counter = Counter { nodes: 0, budget };
    let path = first_path(g, &mut refiner, &mut counter)?;
    let mut s = Searcher {
        searched: g,
        reference_graph: g,
        path: &path,
        refiner,
        counter,
        gens: Vec::new(),
    };
    for k in (0..path.levels.len()).rev() {
        let level = &path.levels[k];
        let v = level.vertex;
        let prefix: Vec<u32> = path.levels[..k].iter().map(|l| l.vertex).collect();
        let cell = level.node.cell_members(level.cell).to_vec();
        let mut roots = orbit_roots(n, s.gens.iter());
        let mut failed: Vec<u32> = Vec::new();
        for w in cell {
            if w == v || roots[w as usize] == roots[v as usize] {
                continue;
            }
            if failed.iter().any(|&f| roots[f as usize] == roots[w as usize]) {
                continue;
            }
            let mut fixed = prefix.clone();
            fixed.push(w);
            match s.descend(&level.node, k, w, &mut fixed)? {
                Some(h) => {
                    let g_new = h.inverse();
                    debug_assert!(g.is_automorphism(&g_new));
                    s.gens.push(g_new);
                    roots = orbit_roots(n, s.gens.iter());
                }
                None => failed.push(w),
            }
        }
    }
    let base: Vec<usize> = path.levels.iter().map(|l| l.vertex as usize).collect();
    let group = PermGroup::from_base_and_strong_gens(n, &base, &s.gens)?;
    Ok(AutomorphismResult {
        group,
        base,
        nodes: s.counter.nodes,
    })
}

/// A permutation `f` with `color(f(u), f(v)) = r(color(u, v))` for all pairs,
/// if one exists. `aut_gens` (automorphisms of `g`, possibly empty) prune
/// the search.
pub fn graph_isomorphism_to_recolored(
    g: &ColoredDigraph,
    r: &Recoloring,
    aut_gens: &[Perm],
    budget: u64,
) -> Result<Option<Perm>> {
    let n = g.n();
    if r.is_identity() {
        return Ok(Some(Perm::identity(n)));
    }
    let g1 = g.recolored(r);
    let table = PairTable::new(&[g, &g1]);
    let pc = table.codes(g);
    let pc1 = table.codes(&g1);
    let mut counter = Counter { nodes: 0, budget };
    let mut ref_refiner = Refiner::new(n, table.k(), &pc);
    let path = first_path(g, &mut ref_refiner, &mut counter)?;

    counter.tick()?;
    let mut refiner = Refiner::new(n, table.k(), &pc1);
    let mut trace = Trace::Compare {
        reference: &path.root_trace,
        at: 0,
    };
    let Some(root) = all_cells_refined(&g1, &mut refiner, &mut trace) else {
        return Ok(None);
    };
    let mut s = Searcher {
        searched: &g1,
        reference_graph: g,
        path: &path,
        refiner,
        counter,
        gens: aut_gens.to_vec(),
    };
    let h = if path.levels.is_empty() {
        s.leaf(&root)
    } else {
        let children = root.cell_members(path.levels[0].cell).to_vec();
        let roots = orbit_roots(n, s.gens.iter());
        let mut tried = HashSet::new();
        let mut found = None;
        for x in children {
            if !tried.insert(roots[x as usize]) {
                continue;
            }
            if let Some(h) = s.descend(&root, 0, x, &mut vec![x])? {
                found = Some(h);
                break;
            }
        }
        found
    };
    // h maps r(g) onto g; as a map of g it realizes color(h(u), h(v)) = r(color(u, v))
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgraph::{FIBER, NONE};
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn digraph(n: usize, colors: &[u8]) -> ColoredDigraph {
        let mut m = colors.to_vec();
        for v in 0..n {
            m[v * n + v] = NONE;
        }
        ColoredDigraph::new(vec![0; n], m, (0..n).map(|v| vec![v]).collect()).unwrap()
    }

    fn brute_force_order(g: &ColoredDigraph) -> usize {
        fn rec(g: &ColoredDigraph, img: &mut Vec<usize>, used: &mut Vec<bool>, count: &mut usize) {
            let n = g.n();
            let k = img.len();
            if k == n {
                *count += 1;
                return;
            }
            for c in 0..n {
                if used[c] || g.vertex_color(c) != g.vertex_color(k) {
                    continue;
                }
                if (0..k).any(|u| g.edge(img[u], c) != g.edge(u, k) || g.edge(c, img[u]) != g.edge(k, u)) {
                    continue;
                }
                used[c] = true;
                img.push(c);
                rec(g, img, used, count);
                img.pop();
                used[c] = false;
            }
        }
        let mut count = 0;
        rec(g, &mut Vec::new(), &mut vec![false; g.n()], &mut count);
        count
    }

    #[test]
    fn directed_four_cycle() {
        let n = 4;
        let mut m = vec![2u8; n * n];
        for v in 0..n {
            m[v * n + (v + 1) % n] = 0;
            m[((v + 1) % n) * n + v] = 1;
        }
        let g = digraph(n, &m);
        let res = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.group.order(), BigUint::from(4u32));
    }

    #[test]
    fn complete_digraph() {
        let g = digraph(4, &[0; 16]);
        let res = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.group.order(), BigUint::from(24u32));
        for gen in res.group.generators() {
            assert!(g.is_automorphism(gen));
        }
    }

    #[test]
    fn petersen_graph() {
        // vertices are 2-subsets of 0..5, adjacent when disjoint
        let subsets: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let n = subsets.len();
        let mut m = vec![2u8; n * n];
        for (x, &(a, b)) in subsets.iter().enumerate() {
            for (y, &(c, e)) in subsets.iter().enumerate() {
                if a != c && a != e && b != c && b != e {
                    m[x * n + y] = 0;
                }
            }
        }
        let g = digraph(n, &m);
        let res = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.group.order(), BigUint::from(120u32));
    }

    #[test]
    fn budget_is_a_hard_error() {
        let g = digraph(6, &[0; 36]);
        assert!(matches!(
            graph_automorphisms(&g, 3),
            Err(Error::BudgetExceeded { budget: 3 })
        ));
    }

    #[test]
    fn recolor_isomorphism_on_a_tournament() {
        // cyclic tournament on 3 vertices: i one way, -i the other
        let n = 3;
        let mut m = vec![NONE; 9];
        for v in 0..n {
            m[v * n + (v + 1) % n] = 1;
            m[((v + 1) % n) * n + v] = 3;
        }
        let g = digraph(n, &m);
        let conj = Recoloring::new(1, true).unwrap();
        let f = graph_isomorphism_to_recolored(&g, &conj, &[], DEFAULT_BUDGET).unwrap().unwrap();
        assert!(g.maps_onto(&f, &g, &conj));
        assert!(g.recolored(&conj).maps_onto(&f, &g, &Recoloring::identity()));
        // on phases {i, -i} negation acts like conjugation
        let neg = Recoloring::new(-1, false).unwrap();
        assert!(graph_isomorphism_to_recolored(&g, &neg, &[], DEFAULT_BUDGET).unwrap().is_some());
        // with a +1 edge added, negation has no partner color
        let mut m2 = m.clone();
        m2[1] = 0;
        let g2 = digraph(n, &m2);
        assert!(graph_isomorphism_to_recolored(&g2, &neg, &[], DEFAULT_BUDGET).unwrap().is_none());
        let id = graph_isomorphism_to_recolored(&g, &Recoloring::identity(), &[], DEFAULT_BUDGET).unwrap();
        assert!(id.unwrap().is_identity());
    }

    #[test]
    fn fiber_color_blocks_fiber_breaking_maps() {
        // two fibers of size 2; all cross edges equal
        let n = 4;
        let mut m = vec![0u8; 16];
        for (a, b) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            m[a * n + b] = FIBER;
        }
        for v in 0..n {
            m[v * n + v] = NONE;
        }
        let g = ColoredDigraph::new(vec![0; 4], m, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let res = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.group.order(), BigUint::from(8u32));
    }

    fn small_colored() -> impl Strategy<Value = ColoredDigraph> {
        (2usize..=7).prop_flat_map(|n| {
            (
                prop::collection::vec(0u8..3, n * n),
                prop::collection::vec(0u32..2, n),
            )
                .prop_map(move |(m, vc)| {
                    let mut m = m;
                    for v in 0..n {
                        m[v * n + v] = NONE;
                    }
                    ColoredDigraph::new(vc, m, (0..n).map(|v| vec![v]).collect()).unwrap()
                })
        })
    }

    fn symmetric_colored() -> impl Strategy<Value = ColoredDigraph> {
        (2usize..=8).prop_flat_map(|n| {
            prop::collection::vec(0u8..2, n * n).prop_map(move |bits| {
                let mut m = vec![NONE; n * n];
                for a in 0..n {
                    for b in a + 1..n {
                        m[a * n + b] = bits[a * n + b] * 2;
                        m[b * n + a] = bits[a * n + b] * 2;
                    }
                }
                ColoredDigraph::new(vec![0; n], m, (0..n).map(|v| vec![v]).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn matches_brute_force(g in small_colored()) {
            let res = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(res.group.order(), BigUint::from(brute_force_order(&g)));
            for gen in res.group.generators() {
                prop_assert!(g.is_automorphism(gen));
            }
        }

        #[test]
        fn matches_brute_force_on_undirected_graphs(g in symmetric_colored()) {
            let res = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(res.group.order(), BigUint::from(brute_force_order(&g)));
        }

        #[test]
        fn refinement_respects_automorphisms(g in symmetric_colored()) {
            let res = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
            let cells = crate::autgraph::color_refine(&g, &vec![0; g.n()]);
            let mut class = vec![0; g.n()];
            for (c, cell) in cells.iter().enumerate() {
                for &v in cell {
                    class[v] = c;
                }
            }
            for gen in res.group.generators() {
                for v in 0..g.n() {
                    prop_assert_eq!(class[v], class[gen.apply(v)]);
                }
            }
        }

        #[test]
        fn recolor_isomorphism_is_exact(g in small_colored(), eps in prop::sample::select(vec![1i8, -1]), conj in any::<bool>()) {
            let r = Recoloring::new(eps, conj).unwrap();
            let aut = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
            let found = graph_isomorphism_to_recolored(&g, &r, aut.group.generators(), DEFAULT_BUDGET).unwrap();
            // brute force over all permutations for an oracle
            let n = g.n();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut exists = false;
            loop {
                let p = Perm::from_images(perm.clone()).unwrap();
                if g.maps_onto(&p, &g, &r) {
                    exists = true;
                    break;
                }
                // next lexicographic permutation
                let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
                let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
                perm.swap(i, j);
                perm[i + 1..].reverse();
            }
            prop_assert_eq!(found.is_some(), exists);
            if let Some(f) = found {
                prop_assert!(g.maps_onto(&f, &g, &r));
            }
        }
    }
}
