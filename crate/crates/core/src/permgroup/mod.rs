//! Permutation groups through stabilizer chains.
//!
//! Chains are built by a deterministic Schreier-Sims procedure, or directly
//! from a base and strong generating set when one is already known (as is
//! the case for automorphism groups produced by the graph search). Coset
//! representatives are kept implicitly as Schreier vectors.

mod perm;

use num_bigint::BigUint;
use num_traits::One;

pub use perm::{iota_embed, Perm};

use crate::error::{Error, Result};

const NOT_IN_ORBIT: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    inv_gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// For an orbit point `x != base`, the index `k` of the generator with
    /// `x = gens[k](parent)`.
    schreier: Vec<u32>,
}

impl Level {
    fn new(n: usize, base: usize) -> Self {
        let mut schreier = vec![NOT_IN_ORBIT; n];
        schreier[base] = ROOT;
        Level {
            base,
            gens: Vec::new(),
            inv_gens: Vec::new(),
            orbit: vec![base],
            schreier,
        }
    }

    fn in_orbit(&self, x: usize) -> bool {
        self.schreier[x] != NOT_IN_ORBIT
    }

    /// Coset representative `u` with `u(base) = x`.
    fn transversal(&self, x: usize) -> Perm {
        let mut path = Vec::new();
        let mut y = x;
        while self.schreier[y] != ROOT {
            let k = self.schreier[y] as usize;
            path.push(k);
            y = self.inv_gens[k].apply(y);
        }
        let n = self.schreier.len();
        path.iter()
            .rev()
            .fold(Perm::identity(n), |acc, &k| acc.then(&self.gens[k]))
    }

    /// `g` followed by the inverse of the representative of `g(base)`.
    fn strip_step(&self, mut g: Perm) -> Perm {
        let mut x = g.apply(self.base);
        while self.schreier[x] != ROOT {
            let k = self.schreier[x] as usize;
            x = self.inv_gens[k].apply(x);
            g = g.then(&self.inv_gens[k]);
        }
        g
    }

    fn push_gen(&mut self, g: Perm) {
        self.inv_gens.push(g.inverse());
        self.gens.push(g);
    }

    /// Closes the orbit under the current generators.
    fn close_orbit(&mut self) {
        let mut head = 0;
        while head < self.orbit.len() {
            let x = self.orbit[head];
            head += 1;
            for (k, g) in self.gens.iter().enumerate() {
                let y = g.apply(x);
                if self.schreier[y] == NOT_IN_ORBIT {
                    self.schreier[y] = k as u32;
                    self.orbit.push(y);
                }
            }
        }
    }
}

/// A permutation group on `0..degree` with a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
    prefix: Vec<usize>,
}

impl PermGroup {
    /// The group generated by `gens`, chain built by Schreier-Sims.
    pub fn from_generators(degree: usize, gens: &[Perm]) -> Result<Self> {
        Self::with_base_prefix(degree, gens, &[])
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
            prefix: Vec::new(),
        }
    }

    /// Like [`from_generators`](Self::from_generators) but the base starts with
    /// `prefix` (used for transitivity tests).
    pub fn with_base_prefix(degree: usize, gens: &[Perm], prefix: &[usize]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::Dimension(format!(
                "generator on {} points in a group of degree {degree}",
                g.degree()
            )));
        }
        if let Some(&b) = prefix.iter().find(|&&b| b >= degree) {
            return Err(Error::Dimension(format!("base point {b} out of range")));
        }
        let mut group = PermGroup {
            degree,
            generators: gens.iter().filter(|g| !g.is_identity()).cloned().collect(),
            levels: Vec::new(),
            prefix: prefix.to_vec(),
        };
        for g in group.generators.clone() {
            let (residue, _) = group.sift(g, 0);
            if !residue.is_identity() {
                group.insert(0, residue);
            }
        }
        Ok(group)
    }

    /// Builds the chain directly from a base and a strong generating set
    /// relative to it. Only cheap consistency is checked: every generator
    /// must move some base point.
    pub fn from_base_and_strong_gens(degree: usize, base: &[usize], gens: &[Perm]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::Dimension(format!(
                "generator on {} points in a group of degree {degree}",
                g.degree()
            )));
        }
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.iter().any(|g| base.iter().all(|&b| g.apply(b) == b)) {
            return Err(Error::Internal(
                "a strong generator fixes the whole base".into(),
            ));
        }
        let mut levels = Vec::with_capacity(base.len());
        for (m, &b) in base.iter().enumerate() {
            let mut level = Level::new(degree, b);
            for g in gens.iter().filter(|g| base[..m].iter().all(|&c| g.apply(c) == c)) {
                level.push_gen(g.clone());
            }
            level.close_orbit();
            levels.push(level);
        }
        Ok(PermGroup {
            degree,
            generators: gens,
            levels,
            prefix: base.to_vec(),
        })
    }

    fn new_base_point(&self, level: usize, g: &Perm) -> usize {
        if let Some(&b) = self.prefix.get(level) {
            return b;
        }
        (0..self.degree)
            .find(|&x| g.apply(x) != x)
            .expect("only nontrivial elements are inserted")
    }

    /// Sifts `g` starting at `level`; returns the residue and the level where
    /// it dropped out (`levels.len()` if it passed every level).
    fn sift(&self, mut g: Perm, level: usize) -> (Perm, usize) {
        for (j, lv) in self.levels.iter().enumerate().skip(level) {
            if !lv.in_orbit(g.apply(lv.base)) {
                return (g, j);
            }
            g = lv.strip_step(g);
        }
        (g, self.levels.len())
    }

    /// Adds `g` (fixing the first `l` base points, not in the level-`l`
    /// subgroup) to level `l` and sifts every new Schreier generator.
    /// Residues always go one level down, which keeps the level subgroups
    /// nested.
    fn insert(&mut self, l: usize, g: Perm) {
        if l == self.levels.len() {
            let b = self.new_base_point(l, &g);
            self.levels.push(Level::new(self.degree, b));
        }
        let new_k = self.levels[l].gens.len();
        self.levels[l].push_gen(g);
        let old_len = self.levels[l].orbit.len();

        // pairs (old orbit point, new generator), then all generators on new points
        let mut idx = 0;
        while idx < self.levels[l].orbit.len() {
            let x = self.levels[l].orbit[idx];
            let ks: Vec<usize> = if idx < old_len {
                vec![new_k]
            } else {
                (0..self.levels[l].gens.len()).collect()
            };
            idx += 1;
            for k in ks {
                let y = self.levels[l].gens[k].apply(x);
                if !self.levels[l].in_orbit(y) {
                    let lv = &mut self.levels[l];
                    lv.schreier[y] = k as u32;
                    lv.orbit.push(y);
                    continue;
                }
                let lv = &self.levels[l];
                let sg = lv.transversal(x).then(&lv.gens[k]);
                let sg = lv.strip_step(sg);
                if sg.is_identity() {
                    continue;
                }
                let (residue, _) = self.sift(sg, l + 1);
                if !residue.is_identity() {
                    self.insert(l + 1, residue);
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Basic orbit lengths along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Generators of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_gens(&self, k: usize) -> &[Perm] {
        self.levels.get(k).map_or(&[], |l| &l.gens[..])
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    pub fn contains(&self, g: &Perm) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::Dimension(format!(
                "permutation on {} points, group of degree {}",
                g.degree(),
                self.degree
            )));
        }
        let (residue, _) = self.sift(g.clone(), 0);
        Ok(residue.is_identity())
    }

    /// Orbit partition; blocks sorted internally and by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in &self.generators {
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if block_of[r] == usize::MAX {
                block_of[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[block_of[r]].push(x);
        }
        blocks
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.orbits().iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbits().len() == 1
    }

    /// Transitivity on ordered `k`-tuples of distinct points, via the orbit
    /// lengths of a chain whose base starts `0, 1, ..., k-1`.
    pub fn is_k_transitive(&self, k: usize) -> Result<bool> {
        if k == 0 || k > self.degree {
            return Err(Error::Precondition(format!(
                "k must lie in 1..={}, got {k}",
                self.degree
            )));
        }
        Ok(self.transitivity_degree(k) >= k)
    }

    /// Largest `k <= cap` such that the group is `k`-transitive (0 if intransitive).
    pub fn transitivity_degree(&self, cap: usize) -> usize {
        let n = self.degree;
        let k = cap.min(n);
        if k == 0 {
            return 0;
        }
        let prefix: Vec<usize> = (0..k).collect();
        let chain = PermGroup::with_base_prefix(n, &self.generators, &prefix)
            .expect("generators already validated");
        let mut lengths = chain.orbit_lengths();
        lengths.resize(k, 1);
        lengths
            .iter()
            .enumerate()
            .take_while(|&(m, &len)| len == n - m)
            .count()
    }

    /// `|self| / |sub|`, after checking every generator of `sub` lies in `self`.
    pub fn subgroup_index(&self, sub: &PermGroup) -> Result<BigUint> {
        if sub.degree != self.degree {
            return Err(Error::Dimension(format!(
                "subgroup of degree {} in a group of degree {}",
                sub.degree, self.degree
            )));
        }
        for (index, g) in sub.generators.iter().enumerate() {
            if !self.contains(g)? {
                return Err(Error::NotSubgroup { index });
            }
        }
        Ok(self.order() / sub.order())
    }

    /// Containment both ways.
    pub fn same_group(&self, other: &PermGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(false);
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every element, by walking the chain. Intended for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for lv in self.levels.iter().rev() {
            let reps: Vec<Perm> = lv.orbit.iter().map(|&x| lv.transversal(x)).collect();
            out = reps
                .iter()
                .flat_map(|u| out.iter().map(move |g| g.then(u)))
                .collect();
        }
        out
    }
}
