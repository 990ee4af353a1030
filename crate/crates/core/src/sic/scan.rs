use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hadamard::HadamardSpec;
use crate::numtheory::{is_prime, primes_up_to};

/// Primes `p = 3 mod 4` for which a given order admits the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApplicablePrimes {
    pub d: usize,
    pub bound: u64,
    /// Every listed prime divides `d - 8`. When `d = 8` this is every
    /// `p = 3 mod 4` up to the bound.
    pub primes: Vec<u64>,
    /// `d = 8`: every prime `p = 3 mod 4` applies, not only those listed.
    pub all: bool,
}

/// Primes `p = 3 mod 4`, `p <= bound`, dividing `d - 8`.
pub fn applicable_primes(d: usize, bound: u64) -> ApplicablePrimes {
    let diff = (d as i64 - 8).unsigned_abs();
    let primes = primes_up_to(bound)
        .into_iter()
        .filter(|&p| p % 4 == 3 && diff.is_multiple_of(p))
        .collect();
    ApplicablePrimes {
        d,
        bound,
        primes,
        all: diff == 0,
    }
}

/// A dimension found by [`scan_dimensions`] with a replayable recipe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub d: usize,
    pub recipe: HadamardSpec,
}

/// Orders `<= max` reachable from Sylvester and prime Paley matrices under
/// Kronecker products, each with the first recipe found.
///
/// Atoms are registered in the order Sylvester, Paley I, Paley II, so `4` is
/// `sylvester:2` rather than `paley1:3`; products are added smallest first.
fn constructible_orders(max: usize) -> BTreeMap<usize, HadamardSpec> {
    let mut found = BTreeMap::new();
    let mut k = 0u32;
    while (1usize << k) <= max {
        found.entry(1usize << k).or_insert(HadamardSpec::Sylvester(k));
        k += 1;
    }
    for q in primes_up_to(max as u64) {
        let q1 = q as usize + 1;
        if q % 4 == 3 && q1 <= max {
            found.entry(q1).or_insert(HadamardSpec::Paley1(q));
        }
        if q % 4 == 1 && 2 * q1 <= max {
            found.entry(2 * q1).or_insert(HadamardSpec::Paley2(q));
        }
    }
    loop {
        let current: Vec<(usize, HadamardSpec)> =
            found.iter().map(|(&d, r)| (d, r.clone())).collect();
        let mut added = false;
        for (a, ra) in current.iter().filter(|(a, _)| *a > 1) {
            for (b, rb) in current.iter().filter(|(b, _)| *b > 1) {
                let Some(prod) = a.checked_mul(*b).filter(|&p| p <= max) else {
                    continue;
                };
                if let std::collections::btree_map::Entry::Vacant(e) = found.entry(prod) {
                    e.insert(HadamardSpec::Kron(Box::new(ra.clone()), Box::new(rb.clone())));
                    added = true;
                }
            }
        }
        if !added {
            return found;
        }
    }
}

/// All constructible orders `d <= max` with `d = 8 mod p`.
pub fn scan_dimensions(p: u64, max: usize, cap: usize) -> Result<Vec<ScanEntry>> {
    if !is_prime(p) || p % 4 != 3 {
        return Err(Error::Precondition(format!(
            "scan needs a prime p = 3 mod 4, got {p}"
        )));
    }
    if max > cap {
        return Err(Error::OrderCap { order: max, cap });
    }
    Ok(constructible_orders(max)
        .into_iter()
        .filter(|&(d, _)| (d as i64 - 8).rem_euclid(p as i64) == 0)
        .map(|(d, recipe)| ScanEntry { d, recipe })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::{check_modular_hadamard, DEFAULT_ORDER_CAP};

    #[test]
    fn primes_for_common_orders() {
        assert_eq!(applicable_primes(36, 100).primes, vec![7]);
        assert_eq!(applicable_primes(20, 100).primes, vec![3]);
        assert_eq!(applicable_primes(2, 100).primes, vec![3]);
        let eight = applicable_primes(8, 20);
        assert!(eight.all);
        assert_eq!(eight.primes, vec![3, 7, 11, 19]);
        assert!(!applicable_primes(9, 100).all);
        assert!(applicable_primes(9, 100).primes.is_empty());
    }

    #[test]
    fn scan_mod_three_up_to_fifty() {
        let entries = scan_dimensions(3, 50, DEFAULT_ORDER_CAP).unwrap();
        let ds: Vec<usize> = entries.iter().map(|e| e.d).collect();
        assert_eq!(ds, vec![2, 8, 20, 32, 44]);
        let recipes: Vec<String> = entries.iter().map(|e| e.recipe.to_string()).collect();
        assert_eq!(recipes[2], "paley1:19");
        assert_eq!(recipes[4], "paley1:43");
        for e in &entries {
            let replayed: HadamardSpec = e.recipe.to_string().parse().unwrap();
            let m = replayed.build(DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(m.order(), e.d);
            assert!(check_modular_hadamard(&m, 0).unwrap().valid);
        }
    }

    #[test]
    fn scan_mod_seven_includes_paley_two() {
        let entries = scan_dimensions(7, 40, DEFAULT_ORDER_CAP).unwrap();
        let e36 = entries.iter().find(|e| e.d == 36).unwrap();
        assert_eq!(e36.recipe, HadamardSpec::Paley2(17));
        assert!(entries.iter().all(|e| (e.d as i64 - 8) % 7 == 0));
    }

    #[test]
    fn scan_edge_cases() {
        assert!(scan_dimensions(3, 1, DEFAULT_ORDER_CAP).unwrap().is_empty());
        assert!(scan_dimensions(5, 10, DEFAULT_ORDER_CAP).is_err());
        assert!(scan_dimensions(3, 300, DEFAULT_ORDER_CAP).is_err());
    }
}
