//! Ordered partitions and equitable refinement against colored pair counts.

use std::collections::VecDeque;

use super::{ColoredDigraph, NUM_COLORS};

/// Dense numbering of the ordered color pairs `(c(v, w), c(w, v))` that
/// occur in a set of graphs. Graphs compared through one table produce
/// comparable refinement traces.
#[derive(Clone, Debug)]
pub(crate) struct PairTable {
    dense: [u8; NUM_COLORS * NUM_COLORS],
    k: usize,
}

impl PairTable {
    pub(crate) fn new(graphs: &[&ColoredDigraph]) -> Self {
        let mut present = [false; NUM_COLORS * NUM_COLORS];
        for g in graphs {
            let n = g.n();
            for v in 0..n {
                for w in 0..n {
                    present[raw_pair(g, v, w)] = true;
                }
            }
        }
        let mut dense = [u8::MAX; NUM_COLORS * NUM_COLORS];
        let mut k = 0;
        for (raw, &p) in present.iter().enumerate() {
            if p {
                dense[raw] = k as u8;
                k += 1;
            }
        }
        PairTable { dense, k: k.max(1) }
    }

    /// `pc[v * n + w]`: dense code of the pair at `(v, w)`.
    pub(crate) fn codes(&self, g: &ColoredDigraph) -> Vec<u8> {
        let n = g.n();
        let mut out = Vec::with_capacity(n * n);
        for v in 0..n {
            for w in 0..n {
                out.push(self.dense[raw_pair(g, v, w)]);
            }
        }
        out
    }

    pub(crate) fn k(&self) -> usize {
        self.k
    }
}

#[inline]
fn raw_pair(g: &ColoredDigraph, v: usize, w: usize) -> usize {
    g.edge(v, w) as usize * NUM_COLORS + g.edge(w, v) as usize
}

/// Ordered partition of `0..n` into contiguous cells of `elems`.
#[derive(Clone, Debug)]
pub(crate) struct Partition {
    pub(crate) elems: Vec<u32>,
    pos: Vec<u32>,
    /// Start position of the cell containing each vertex.
    cell_of: Vec<u32>,
    /// End (exclusive) of the cell starting at each position; only meaningful
    /// at cell starts.
    pub(crate) cell_end: Vec<u32>,
    cells: usize,
}

impl Partition {
    /// Cells ordered by increasing color, vertices by index within a cell.
    pub(crate) fn from_colors(colors: &[u32]) -> Self {
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0u32; n];
        let mut cell_of = vec![0u32; n];
        let mut cell_end = vec![0u32; n];
        let mut cells = 0;
        let mut start = 0;
        while start < n {
            let c = colors[elems[start] as usize];
            let mut end = start;
            while end < n && colors[elems[end] as usize] == c {
                end += 1;
            }
            for p in start..end {
                pos[elems[p] as usize] = p as u32;
                cell_of[elems[p] as usize] = start as u32;
            }
            cell_end[start] = end as u32;
            cells += 1;
            start = end;
        }
        Partition {
            elems,
            pos,
            cell_of,
            cell_end,
            cells,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.elems.len()
    }

    pub(crate) fn is_discrete(&self) -> bool {
        self.cells == self.n()
    }

    pub(crate) fn num_cells(&self) -> usize {
        self.cells
    }

    pub(crate) fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.n() {
            out.push(s as u32);
            s = self.cell_end[s] as usize;
        }
        out
    }

    /// Smallest non-singleton cell, lowest start among ties.
    pub(crate) fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut s = 0;
        while s < self.n() {
            let e = self.cell_end[s];
            let size = e - s as u32;
            if size > 1 && best.is_none_or(|(_, bs)| size < bs) {
                best = Some((s as u32, size));
            }
            s = e as usize;
        }
        best.map(|(s, _)| s)
    }

    pub(crate) fn cell_members(&self, start: u32) -> &[u32] {
        &self.elems[start as usize..self.cell_end[start as usize] as usize]
    }

    /// Moves `v` to the front of its cell and splits it off; returns the
    /// start of the new singleton cell.
    pub(crate) fn individualize(&mut self, v: u32) -> u32 {
        let s = self.cell_of[v as usize];
        let e = self.cell_end[s as usize];
        debug_assert!(e - s > 1);
        let pv = self.pos[v as usize];
        let first = self.elems[s as usize];
        self.elems.swap(s as usize, pv as usize);
        self.pos[first as usize] = pv;
        self.pos[v as usize] = s;
        self.cell_end[s as usize] = s + 1;
        self.cell_end[s as usize + 1] = e;
        for p in s + 1..e {
            self.cell_of[self.elems[p as usize] as usize] = s + 1;
        }
        self.cells += 1;
        s
    }

    pub(crate) fn cells(&self) -> Vec<Vec<usize>> {
        self.cell_starts()
            .into_iter()
            .map(|s| self.cell_members(s).iter().map(|&v| v as usize).collect())
            .collect()
    }
}

/// Sequence of refinement events, either recorded or checked against a
/// reference as it is produced.
pub(crate) enum Trace<'r> {
    Record(Vec<u64>),
    Compare { reference: &'r [u64], at: usize },
}

impl Trace<'_> {
    #[inline]
    fn push(&mut self, x: u64) -> bool {
        match self {
            Trace::Record(v) => {
                v.push(x);
                true
            }
            Trace::Compare { reference, at } => {
                let ok = reference.get(*at) == Some(&x);
                *at += 1;
                ok
            }
        }
    }

    pub(crate) fn complete(&self) -> bool {
        match self {
            Trace::Record(_) => true,
            Trace::Compare { reference, at } => *at == reference.len(),
        }
    }

    pub(crate) fn into_vec(self) -> Vec<u64> {
        match self {
            Trace::Record(v) => v,
            Trace::Compare { .. } => Vec::new(),
        }
    }
}

#[inline]
fn mix(a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over a combined word
    let mut z = a.rotate_left(29) ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const EV_INIT: u64 = 1;
const EV_SPLITTER: u64 = 2;
const EV_CELL: u64 = 3;
const EV_FRAGMENT: u64 = 4;
const EV_END: u64 = 5;
const EV_INDIVIDUALIZE: u64 = 6;

/// Refinement workspace bound to one graph's pair codes.
pub(crate) struct Refiner<'g> {
    n: usize,
    k: usize,
    pc: &'g [u8],
    counts: Vec<u32>,
    queue: VecDeque<u32>,
    in_queue: Vec<bool>,
    members: Vec<u32>,
    touched: Vec<u32>,
}

impl<'g> Refiner<'g> {
    pub(crate) fn new(n: usize, k: usize, pc: &'g [u8]) -> Self {
        Refiner {
            n,
            k,
            pc,
            counts: vec![0; n * k],
            queue: VecDeque::new(),
            in_queue: vec![false; n],
            members: Vec::new(),
            touched: Vec::new(),
        }
    }

    /// Records the shape of an initial partition.
    pub(crate) fn trace_initial(p: &Partition, colors: &[u32], trace: &mut Trace) -> bool {
        let mut ok = trace.push(mix(EV_INIT, p.n() as u64));
        for s in p.cell_starts() {
            let size = p.cell_end[s as usize] - s;
            let color = colors[p.elems[s as usize] as usize];
            ok &= trace.push(mix(mix(EV_CELL, s as u64), mix(size as u64, color as u64)));
            if !ok {
                return false;
            }
        }
        ok
    }

    /// Individualizes `v` and refines; false on a trace mismatch.
    pub(crate) fn individualize_and_refine(
        &mut self,
        p: &mut Partition,
        v: u32,
        trace: &mut Trace,
    ) -> bool {
        let s = p.individualize(v);
        let size = p.cell_end[s as usize + 1] - s;
        trace.push(mix(EV_INDIVIDUALIZE, mix(s as u64, size as u64)))
            && self.refine(p, &[s], trace)
    }

    /// Refines `p` to the coarsest equitable partition below it, starting
    /// from the given splitter cells. Returns false as soon as the trace
    /// disagrees with its reference.
    pub(crate) fn refine(&mut self, p: &mut Partition, splitters: &[u32], trace: &mut Trace) -> bool {
        self.queue.clear();
        self.in_queue.iter_mut().for_each(|q| *q = false);
        for &s in splitters {
            if !self.in_queue[s as usize] {
                self.in_queue[s as usize] = true;
                self.queue.push_back(s);
            }
        }
        let ok = self.run(p, trace);
        self.clear_counts();
        ok && trace.push(mix(EV_END, p.num_cells() as u64))
    }

    fn clear_counts(&mut self) {
        for &v in &self.touched {
            let row = v as usize * self.k;
            self.counts[row..row + self.k].iter_mut().for_each(|c| *c = 0);
        }
        self.touched.clear();
    }

    fn run(&mut self, p: &mut Partition, trace: &mut Trace) -> bool {
        let (n, k) = (self.n, self.k);
        while let Some(s) = self.queue.pop_front() {
            self.in_queue[s as usize] = false;
            if p.is_discrete() {
                continue;
            }
            let e = p.cell_end[s as usize];
            if !trace.push(mix(EV_SPLITTER, mix(s as u64, (e - s) as u64))) {
                return false;
            }
            self.members.clear();
            self.members.extend_from_slice(&p.elems[s as usize..e as usize]);

            self.clear_counts();
            let mut c = 0usize;
            while c < n {
                let ce = p.cell_end[c] as usize;
                if ce - c > 1 {
                    for &v in &p.elems[c..ce] {
                        let row = &self.pc[v as usize * n..(v as usize + 1) * n];
                        let cnt = &mut self.counts[v as usize * k..(v as usize + 1) * k];
                        for &w in &self.members {
                            cnt[row[w as usize] as usize] += 1;
                        }
                        self.touched.push(v);
                    }
                }
                c = ce;
            }

            let mut c = 0usize;
            while c < n {
                let ce = p.cell_end[c] as usize;
                if ce - c > 1 && !self.split_cell(p, c, ce, trace) {
                    return false;
                }
                c = ce;
            }
        }
        true
    }

    fn split_cell(&mut self, p: &mut Partition, c: usize, ce: usize, trace: &mut Trace) -> bool {
        let k = self.k;
        let counts = &self.counts;
        let row = |v: u32| &counts[v as usize * k..(v as usize + 1) * k];
        let first = row(p.elems[c]);
        if p.elems[c + 1..ce].iter().all(|&v| row(v) == first) {
            return true;
        }
        p.elems[c..ce].sort_unstable_by(|&a, &b| row(a).cmp(row(b)).then(a.cmp(&b)));
        let mut starts = vec![c];
        for q in c + 1..ce {
            if row(p.elems[q]) != row(p.elems[q - 1]) {
                starts.push(q);
            }
        }
        if !trace.push(mix(EV_CELL, mix(c as u64, starts.len() as u64))) {
            return false;
        }
        let mut largest = 0;
        for (f, &a) in starts.iter().enumerate() {
            let b = starts.get(f + 1).copied().unwrap_or(ce);
            let h = row(p.elems[a]).iter().fold(mix(EV_FRAGMENT, (b - a) as u64), |h, &x| mix(h, x as u64));
            if !trace.push(h) {
                return false;
            }
            p.cell_end[a] = b as u32;
            for q in a..b {
                let v = p.elems[q] as usize;
                p.pos[v] = q as u32;
                p.cell_of[v] = a as u32;
            }
            let lb = starts.get(largest + 1).copied().unwrap_or(ce) - starts[largest];
            if b - a > lb {
                largest = f;
            }
        }
        p.cells += starts.len() - 1;
        let was_queued = self.in_queue[c];
        for (f, &a) in starts.iter().enumerate() {
            if (was_queued && f == 0) || (!was_queued && f == largest) {
                continue;
            }
            self.in_queue[a] = true;
            self.queue.push_back(a as u32);
        }
        true
    }
}

/// Coarsest equitable partition refining the classes of `initial`
/// (intersected with vertex colors). Cells are returned in canonical order.
pub fn color_refine(g: &ColoredDigraph, initial: &[u32]) -> Vec<Vec<usize>> {
    assert_eq!(initial.len(), g.n(), "one initial class per vertex");
    let combined: Vec<(u32, u32)> = (0..g.n()).map(|v| (g.vertex_color(v), initial[v])).collect();
    let mut keys = combined.clone();
    keys.sort_unstable();
    keys.dedup();
    let colors: Vec<u32> = combined
        .iter()
        .map(|key| keys.binary_search(key).expect("present") as u32)
        .collect();
    let table = PairTable::new(&[g]);
    let pc = table.codes(g);
    let mut p = Partition::from_colors(&colors);
    let mut refiner = Refiner::new(g.n(), table.k(), &pc);
    let all = p.cell_starts();
    let mut trace = Trace::Record(Vec::new());
    refiner.refine(&mut p, &all, &mut trace);
    p.cells()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgraph::{FIBER, NONE};

    /// Undirected graph as a complete colored digraph: 0 on edges, 2 on non-edges.
    pub(crate) fn simple_graph(n: usize, edges: &[(usize, usize)]) -> ColoredDigraph {
        let mut m = vec![2u8; n * n];
        for v in 0..n {
            m[v * n + v] = NONE;
        }
        for &(a, b) in edges {
            m[a * n + b] = 0;
            m[b * n + a] = 0;
        }
        ColoredDigraph::new(vec![0; n], m, (0..n).map(|v| vec![v]).collect()).unwrap()
    }

    #[test]
    fn path_splits_ends_from_middle() {
        let g = simple_graph(3, &[(0, 1), (1, 2)]);
        let cells = color_refine(&g, &[0, 0, 0]);
        assert_eq!(cells.len(), 2);
        assert!(cells.contains(&vec![0, 2]));
        assert!(cells.contains(&vec![1]));
    }

    #[test]
    fn vertex_transitive_graph_stays_one_cell() {
        let cycle = simple_graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert_eq!(color_refine(&cycle, &[0; 6]).len(), 1);
    }

    #[test]
    fn refinement_is_equitable() {
        let g = simple_graph(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6)]);
        let cells = color_refine(&g, &[0; 7]);
        for cell in &cells {
            for other in &cells {
                let profile = |v: usize| {
                    let mut c = [0usize; 6];
                    for &w in other {
                        c[g.edge(v, w) as usize] += 1;
                    }
                    c
                };
                assert!(cell.iter().all(|&v| profile(v) == profile(cell[0])));
            }
        }
    }

    #[test]
    fn individualization_splits_cells() {
        let n = 4;
        let mut m = vec![FIBER; n * n];
        for v in 0..n {
            m[v * n + v] = NONE;
        }
        let g = ColoredDigraph::new(vec![0; n], m, vec![(0..n).collect()]).unwrap();
        let table = PairTable::new(&[&g]);
        let pc = table.codes(&g);
        let mut p = Partition::from_colors(&[0; 4]);
        let mut r = Refiner::new(n, table.k(), &pc);
        let mut t = Trace::Record(Vec::new());
        assert!(r.refine(&mut p, &[0], &mut t));
        assert_eq!(p.num_cells(), 1);
        assert!(r.individualize_and_refine(&mut p, 2, &mut t));
        assert_eq!(p.num_cells(), 2);
        assert_eq!(p.cell_members(0), &[2]);
        assert_eq!(p.target_cell(), Some(1));
    }
}
