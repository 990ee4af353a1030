//! The automorphism groups attached to a sign matrix and its SIC, the
//! inclusion chain between them, and equivalence witnesses.
//!
//! All SIC-side groups act on the flat index set `[d] x [d]` (row-major).
//! Weak matrix automorphisms act on `rows ⊔ cols`, i.e. points `0..d` for
//! rows and `d..2d` for columns.

mod report;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use report::{sandwich_report, sandwich_report_for, GroupSummary, SandwichGroups, SandwichReport, TRANSITIVITY_CAP};
pub use witness::{
    check_induced, extract_with_grams, lemma36_extract, strong_signs, weak_equiv_to_strong_sic_witness,
    weak_signs, EquivalenceWitness, InducedSicEquivalence, PhaseRelation,
};

use crate::autgraph::{
    encode_phased_matrix_graph, encode_sic_graph, graph_automorphisms, graph_isomorphism_to_recolored,
    project_fiber, MatrixMode, Recoloring,
};
use crate::error::{Error, Result};
use crate::exactalg::ConjRing;
use crate::hadamard::{SignMatrix, DEFAULT_ORDER_CAP};
use crate::permgroup::{iota_embed, Perm, PermGroup};
use crate::sic::{build_tilde, SicSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Weak,
    Strong,
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strength::Weak => "weak",
            Strength::Strong => "strong",
        })
    }
}

impl FromStr for Strength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Strength::Weak),
            "strong" => Ok(Strength::Strong),
            _ => Err(Error::Parse(format!("strength must be weak or strong, got {s:?}"))),
        }
    }
}

/// Automorphism group of a sign matrix.
#[derive(Clone, Debug)]
pub struct HadamardAut {
    pub strength: Strength,
    pub d: usize,
    /// On `[d]` (strong) or on `rows ⊔ cols` (weak).
    pub group: PermGroup,
    pub nodes: u64,
}

impl HadamardAut {
    /// Generators as `(pi, sigma)` pairs; strong generators give `(pi, pi)`.
    pub fn generator_pairs(&self) -> Vec<(Perm, Perm)> {
        self.group
            .generators()
            .iter()
            .map(|g| match self.strength {
                Strength::Strong => (g.clone(), g.clone()),
                Strength::Weak => split_pair(g, self.d),
            })
            .collect()
    }

    /// The image under `iota` on `[d] x [d]`.
    pub fn iota_group(&self) -> Result<PermGroup> {
        let gens = self
            .generator_pairs()
            .iter()
            .map(|(p, s)| iota_embed(p, s))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::from_generators(self.d * self.d, &gens)
    }
}

/// Splits a side-preserving permutation of `rows ⊔ cols` into `(pi, sigma)`.
pub fn split_pair(g: &Perm, d: usize) -> (Perm, Perm) {
    let pi = Perm::from_images((0..d).map(|i| g.apply(i)).collect()).expect("rows map to rows");
    let sigma = Perm::from_images((0..d).map(|j| g.apply(d + j) - d).collect()).expect("cols map to cols");
    (pi, sigma)
}

/// Joins `(pi, sigma)` into one permutation of `rows ⊔ cols`.
pub fn join_pair(pi: &Perm, sigma: &Perm) -> Result<Perm> {
    let d = pi.degree();
    if sigma.degree() != d {
        return Err(Error::Dimension("row and column permutations differ in degree".into()));
    }
    Perm::from_images((0..d).map(|i| pi.apply(i)).chain((0..d).map(|j| d + sigma.apply(j))).collect())
}

/// Weak or strong automorphism group of `m` (signs up to the global flip).
pub fn hadamard_aut(m: &SignMatrix, strength: Strength, budget: u64) -> Result<HadamardAut> {
    let mode = match strength {
        Strength::Weak => MatrixMode::Weak,
        Strength::Strong => MatrixMode::Strong,
    };
    let g = encode_phased_matrix_graph(m, mode)?;
    let aut = graph_automorphisms(&g, budget)?;
    let gens = project_all(aut.group.generators(), &g)?;
    let group = PermGroup::from_generators(g.fibers().len(), &gens)?;
    Ok(HadamardAut {
        strength,
        d: m.order(),
        group,
        nodes: aut.nodes,
    })
}

fn project_all(gens: &[Perm], g: &crate::autgraph::ColoredDigraph) -> Result<Vec<Perm>> {
    let mut out = Vec::new();
    for x in gens {
        let p = project_fiber(x, g)?;
        if !p.is_identity() && !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Automorphism group of a SIC from the construction.
#[derive(Clone, Debug)]
pub struct SicAut {
    pub strength: Strength,
    pub group: PermGroup,
    /// Projections of the lifts that fix every phase color.
    pub color_fixed: PermGroup,
    /// One projected witness per nontrivial recoloring that is realized.
    pub recolorings: Vec<(Recoloring, Perm)>,
    pub nodes: u64,
}

/// `Aut_s` or `Aut_w` of `s`. Recolorings with `eps = -1` are tried only in
/// characteristic 3; conjugation only for the weak group.
pub fn sic_aut<R: ConjRing>(s: &SicSystem<R>, strength: Strength, budget: u64) -> Result<SicAut> {
    let (strong, weak) = sic_aut_inner(s, strength == Strength::Weak, budget)?;
    Ok(weak.unwrap_or(strong))
}

/// `(Aut_s, Aut_w)` from one automorphism search.
pub fn sic_aut_both<R: ConjRing>(s: &SicSystem<R>, budget: u64) -> Result<(SicAut, SicAut)> {
    let (strong, weak) = sic_aut_inner(s, true, budget)?;
    Ok((strong, weak.expect("weak group requested")))
}

fn sic_aut_inner<R: ConjRing>(s: &SicSystem<R>, with_weak: bool, budget: u64) -> Result<(SicAut, Option<SicAut>)> {
    let g = encode_sic_graph(s)?;
    let aut = graph_automorphisms(&g, budget)?;
    let n = s.len();
    let fixed_gens = project_all(aut.group.generators(), &g)?;
    let color_fixed = PermGroup::from_generators(n, &fixed_gens)?;
    let char3 = s.ring().characteristic() == 3;
    let mut candidates = Vec::new();
    if char3 {
        candidates.push(Recoloring::new(-1, false)?);
    }
    if with_weak {
        candidates.push(Recoloring::new(1, true)?);
        if char3 {
            candidates.push(Recoloring::new(-1, true)?);
        }
    }
    let mut recolorings = Vec::new();
    for r in candidates {
        if let Some(f) = graph_isomorphism_to_recolored(&g, &r, aut.group.generators(), budget)? {
            if !g.maps_onto(&f, &g, &r) {
                return Err(Error::Internal(format!("recolor isomorphism for {r:?} failed re-verification")));
            }
            recolorings.push((r, project_fiber(&f, &g)?));
        }
    }
    let assemble = |strength: Strength| -> Result<SicAut> {
        let chosen: Vec<(Recoloring, Perm)> = recolorings
            .iter()
            .filter(|(r, _)| strength == Strength::Weak || !r.conj)
            .cloned()
            .collect();
        let mut gens = fixed_gens.clone();
        gens.extend(chosen.iter().map(|(_, p)| p.clone()));
        Ok(SicAut {
            strength,
            group: PermGroup::from_generators(n, &gens)?,
            color_fixed: color_fixed.clone(),
            recolorings: chosen,
            nodes: aut.nodes,
        })
    };
    let strong = assemble(Strength::Strong)?;
    let weak = if with_weak { Some(assemble(Strength::Weak)?) } else { None };
    Ok((strong, weak))
}

/// Strong automorphism group of `H~` on `[d] x [d]`.
pub fn tilde_strong_aut(h: &SignMatrix, budget: u64) -> Result<HadamardAut> {
    let t = build_tilde(h, DEFAULT_ORDER_CAP)?;
    hadamard_aut(&t, Strength::Strong, budget)
}

/// Whether `g` solves the sign equations of a weak (on `rows ⊔ cols`) or
/// strong (on `[d]`) automorphism of `m`.
pub fn matrix_generator_certifies(m: &SignMatrix, strength: Strength, g: &Perm) -> bool {
    match strength {
        Strength::Strong => strong_signs(m, m, g).is_some(),
        Strength::Weak => {
            let d = m.order();
            if g.degree() != 2 * d || (0..d).any(|i| g.apply(i) >= d) {
                return false;
            }
            let (pi, sigma) = split_pair(g, d);
            weak_signs(m, m, &pi, &sigma).is_some()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgraph::DEFAULT_BUDGET;
    use crate::exactalg::Fp2;
    use crate::hadamard::sylvester;
    use crate::sic::construct_sic;
    use num_bigint::BigUint;

    #[test]
    fn example_two_by_two_orders() {
        let h1 = sylvester(1, 256).unwrap();
        let h2 = SignMatrix::parse("++\n-+").unwrap();
        let h3 = SignMatrix::parse("--\n+-").unwrap();
        let orders: Vec<BigUint> = [&h1, &h2, &h3]
            .iter()
            .map(|m| hadamard_aut(m, Strength::Strong, DEFAULT_BUDGET).unwrap().group.order())
            .collect();
        assert_eq!(orders, vec![1u32.into(), 2u32.into(), 2u32.into()]);
        for m in [&h1, &h2, &h3] {
            let w = hadamard_aut(m, Strength::Weak, DEFAULT_BUDGET).unwrap();
            assert_eq!(w.group.order(), BigUint::from(4u32));
        }
    }

    #[test]
    fn smallest_sic_groups_are_symmetric() {
        let ring = Fp2::new(3).unwrap();
        let s = construct_sic(&sylvester(1, 256).unwrap(), ring).unwrap();
        for strength in [Strength::Strong, Strength::Weak] {
            let a = sic_aut(&s, strength, DEFAULT_BUDGET).unwrap();
            assert_eq!(a.group.order(), BigUint::from(24u32));
        }
        let a = sic_aut(&s, Strength::Strong, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.color_fixed.order(), BigUint::from(12u32));
        assert!(a.color_fixed.generators().iter().all(|g| g.sign() == 1));
        assert_eq!(a.recolorings.len(), 1);
        assert_eq!(a.recolorings[0].1.sign(), -1);
    }

    #[test]
    fn generators_certify() {
        let h = sylvester(2, 256).unwrap();
        for strength in [Strength::Strong, Strength::Weak] {
            let a = hadamard_aut(&h, strength, DEFAULT_BUDGET).unwrap();
            for g in a.group.generators() {
                assert!(matrix_generator_certifies(&h, strength, g));
            }
        }
        let bad = Perm::from_images(vec![1, 0, 2, 3, 4, 5, 6, 7]).unwrap();
        assert!(!matrix_generator_certifies(&h, Strength::Weak, &bad));
    }

    #[test]
    fn pair_round_trip() {
        let pi = Perm::from_images(vec![2, 0, 1]).unwrap();
        let sigma = Perm::from_images(vec![1, 0, 2]).unwrap();
        let joined = join_pair(&pi, &sigma).unwrap();
        assert_eq!(split_pair(&joined, 3), (pi, sigma));
    }
}
