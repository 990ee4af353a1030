use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::{hadamard_aut, sic_aut_both, tilde_strong_aut, Strength};
use crate::error::{Error, Result};
use crate::exactalg::{ConjRing, RingSpec};
use crate::hadamard::SignMatrix;
use crate::permgroup::{Perm, PermGroup};
use crate::sic::{construct_sic, SicSystem};
use crate::with_ring;

/// Transitivity is reported up to this degree.
pub const TRANSITIVITY_CAP: usize = 3;

fn big_as_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn big_as_numbers<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    let items: Vec<serde_json::Value> = v
        .iter()
        .map(|x| match x.to_u64() {
            Some(n) => serde_json::Value::from(n),
            None => serde_json::Value::from(x.to_string()),
        })
        .collect();
    items.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    #[serde(serialize_with = "big_as_decimal")]
    pub order: BigUint,
    pub generators: Vec<Perm>,
    pub orbits: Vec<Vec<usize>>,
    /// Largest `k <= TRANSITIVITY_CAP` with the group `k`-transitive.
    pub transitivity: usize,
    #[serde(skip)]
    pub group: PermGroup,
}

impl GroupSummary {
    pub fn of(group: PermGroup) -> Self {
        GroupSummary {
            order: group.order(),
            generators: group.generators().to_vec(),
            orbits: group.orbits(),
            transitivity: group.transitivity_degree(TRANSITIVITY_CAP),
            group,
        }
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.group.orbit_sizes()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichGroups {
    #[serde(rename = "iota_weak_H")]
    pub iota_weak_h: GroupSummary,
    pub strong_sic: GroupSummary,
    pub weak_sic: GroupSummary,
    pub strong_tilde: GroupSummary,
}

impl SandwichGroups {
    pub fn chain(&self) -> [&GroupSummary; 4] {
        [&self.iota_weak_h, &self.strong_sic, &self.weak_sic, &self.strong_tilde]
    }
}

/// The four groups `iota(Aut_w(H)) <= Aut_s(x) <= Aut_w(x) <= Aut_s(H~)`
/// on `[d] x [d]` and the indices between neighbours.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub dimension: usize,
    pub ring: String,
    pub groups: SandwichGroups,
    #[serde(serialize_with = "big_as_numbers")]
    pub indices: Vec<BigUint>,
    /// Each inclusion, checked by generator membership.
    pub inclusions: Vec<bool>,
    pub totally_asymmetric: bool,
}

impl SandwichReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Number of distinct groups along the chain.
    pub fn layers(&self) -> usize {
        1 + self.indices.iter().filter(|i| **i != BigUint::from(1u32)).count()
    }
}

/// Builds the SIC of `h` over `ring` and reports its sandwich.
pub fn sandwich_report(h: &SignMatrix, ring: RingSpec, budget: u64) -> Result<SandwichReport> {
    with_ring!(ring, |r| sandwich_report_for(&construct_sic(h, r)?, budget))
}

/// [`sandwich_report`] for an already constructed SIC.
pub fn sandwich_report_for<R: ConjRing>(s: &SicSystem<R>, budget: u64) -> Result<SandwichReport> {
    let h = s.source();
    let iota = hadamard_aut(h, Strength::Weak, budget)?.iota_group()?;
    let (strong, weak) = sic_aut_both(s, budget)?;
    let (strong, weak) = (strong.group, weak.group);
    let tilde = tilde_strong_aut(h, budget)?.group;
    let chain = [&iota, &strong, &weak, &tilde];
    let mut indices = Vec::new();
    for (k, pair) in chain.windows(2).enumerate() {
        match pair[1].subgroup_index(pair[0]) {
            Ok(index) => indices.push(index),
            Err(Error::NotSubgroup { index }) => {
                return Err(Error::Internal(format!(
                    "inclusion {} of the automorphism chain fails at generator {index}",
                    k + 1
                )))
            }
            Err(e) => return Err(e),
        }
    }
    let totally_asymmetric = weak.is_trivial();
    Ok(SandwichReport {
        dimension: s.d(),
        ring: s.ring().spec().to_string(),
        groups: SandwichGroups {
            iota_weak_h: GroupSummary::of(iota),
            strong_sic: GroupSummary::of(strong),
            weak_sic: GroupSummary::of(weak),
            strong_tilde: GroupSummary::of(tilde),
        },
        inclusions: vec![true; 3],
        indices,
        totally_asymmetric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgraph::DEFAULT_BUDGET;
    use crate::hadamard::sylvester;

    #[test]
    fn smallest_sandwich() {
        let r = sandwich_report(&sylvester(1, 256).unwrap(), RingSpec::Finite(3), DEFAULT_BUDGET).unwrap();
        assert!(r.inclusions.iter().all(|&b| b));
        assert!(r.groups.strong_tilde.order >= BigUint::from(24u32));
        let doc = r.to_json();
        assert_eq!(doc["dimension"], 2);
        assert_eq!(doc["ring"], "gf:3");
        assert_eq!(doc["groups"]["strong_sic"]["order"], "24");
        assert_eq!(doc["indices"][1], 1);
        assert_eq!(doc["totally_asymmetric"], false);
    }
}
