//! Sign matrices, their (modular) Hadamard certificates, and the standard
//! constructions used by the dimension scanner.
//!
//! Paley conventions (kept stable because regression fixtures depend on them):
//!
//! * Jacobsthal matrix over `Z/q`: `Q[a][b] = chi(b - a)` with `chi` the quadratic
//!   character, rows and columns indexed by `0..q`.
//! * Paley I (`q = 3 mod 4`, order `q + 1`): `[[1, 1^T], [1, Q - I]]`, i.e. first
//!   row and column all `+1`, core `Q` with `-1` on its diagonal.
//! * Paley II (`q = 1 mod 4`, order `2(q + 1)`): with the symmetric conference
//!   matrix `C = [[0, 1^T], [1, Q]]`, each zero of `C` becomes the block
//!   `[[1, -1], [-1, -1]]` and each `+-1` becomes `+-[[1, 1], [1, -1]]`.

mod recipe;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use recipe::HadamardSpec;

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, legendre};

/// Default cap on the order of generated matrices.
pub const DEFAULT_ORDER_CAP: usize = 256;

/// A square matrix with entries in `{+1, -1}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignMatrix {
    d: usize,
    entries: Vec<i8>,
}

/// Result of checking `H^T H = d I` over `Z` (modulus 0) or modulo an odd prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardCertificate {
    pub modulus: u64,
    pub valid: bool,
    /// Offending column pair (0-based) and its integer inner product.
    pub failure_witness: Option<(usize, usize, i64)>,
}

/// Which Paley construction to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PaleyKind {
    I,
    II,
}

impl SignMatrix {
    pub fn new(d: usize, entries: Vec<i8>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("sign matrix of order 0".into()));
        }
        if entries.len() != d * d {
            return Err(Error::Dimension(format!(
                "{} entries for order {d}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&e| e != 1 && e != -1) {
            return Err(Error::Construction(format!(
                "entry ({}, {}) = {} is not +-1",
                pos / d,
                pos % d,
                entries[pos]
            )));
        }
        Ok(SignMatrix { d, entries })
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> i8) -> Result<Self> {
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(f(i, j));
            }
        }
        Self::new(d, entries)
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension("rows must have length equal to the row count".into()));
        }
        Self::new(d, rows.concat())
    }

    pub fn order(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.d + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.d).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.d..(i + 1) * self.d]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.d, |i, j| self.get(j, i)).expect("same order")
    }

    pub fn trace(&self) -> i64 {
        (0..self.d).map(|i| self.get(i, i) as i64).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.d).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Applies a signed row/column permutation: the result `M'` satisfies
    /// `M'[pi(i)][sigma(j)] = row_signs[i] * col_signs[j] * M[i][j]`.
    pub fn signed_permute(
        &self,
        pi: &[usize],
        sigma: &[usize],
        row_signs: &[i8],
        col_signs: &[i8],
    ) -> Result<Self> {
        let d = self.d;
        if pi.len() != d || sigma.len() != d || row_signs.len() != d || col_signs.len() != d {
            return Err(Error::Dimension("witness size differs from matrix order".into()));
        }
        let mut entries = vec![0i8; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[pi[i] * d + sigma[j]] = row_signs[i] * col_signs[j] * self.get(i, j);
            }
        }
        Self::new(d, entries)
    }

    /// One line per row, `+` for `+1` and `-` for `-1`.
    pub fn render(&self) -> String {
        let mut s = String::with_capacity(self.d * (self.d + 1));
        for i in 0..self.d {
            for j in 0..self.d {
                s.push(if self.get(i, j) > 0 { '+' } else { '-' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the `.had` text format. Blank lines and surrounding whitespace
    /// are ignored; `1`/`0` are not accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        if lines.is_empty() {
            return Err(Error::Parse("empty sign matrix".into()));
        }
        let d = lines.len();
        let mut entries = Vec::with_capacity(d * d);
        for (r, line) in lines.iter().enumerate() {
            let before = entries.len();
            for ch in line.chars() {
                match ch {
                    '+' => entries.push(1),
                    '-' | '\u{2212}' => entries.push(-1),
                    other => {
                        return Err(Error::Parse(format!(
                            "illegal character {other:?} on line {}",
                            r + 1
                        )))
                    }
                }
            }
            if entries.len() - before != d {
                return Err(Error::Parse(format!(
                    "ragged input: line {} has {} signs, expected {d}",
                    r + 1,
                    entries.len() - before
                )));
            }
        }
        Self::new(d, entries)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignMatrix(d={})\n{}", self.d, self.render())
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for SignMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn check_cap(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        Err(Error::OrderCap { order, cap })
    } else {
        Ok(())
    }
}

/// Order-`2^k` matrix from iterated doubling `[[H, H], [H, -H]]`.
pub fn sylvester(k: u32, cap: usize) -> Result<SignMatrix> {
    let order = 1usize
        .checked_shl(k)
        .ok_or(Error::OrderCap {
            order: usize::MAX,
            cap,
        })?;
    check_cap(order, cap)?;
    // entry (i, j) is (-1)^{popcount(i & j)}
    SignMatrix::from_fn(order, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    })
}

fn jacobsthal(q: u64) -> Vec<Vec<i8>> {
    (0..q)
        .map(|a| {
            (0..q)
                .map(|b| legendre(b as i64 - a as i64, q))
                .collect()
        })
        .collect()
}

/// Paley I or II Hadamard matrix from the quadratic character of the prime `q`.
pub fn paley(q: u64, kind: PaleyKind, cap: usize) -> Result<SignMatrix> {
    if q < 3 || !is_prime(q) {
        return Err(Error::Construction(format!(
            "Paley construction needs an odd prime, got {q}"
        )));
    }
    match kind {
        PaleyKind::I => {
            if q % 4 != 3 {
                return Err(Error::Construction(format!(
                    "Paley I needs q = 3 mod 4, got {q} = {} mod 4",
                    q % 4
                )));
            }
            let d = q as usize + 1;
            check_cap(d, cap)?;
            let jac = jacobsthal(q);
            SignMatrix::from_fn(d, |i, j| match (i, j) {
                (0, _) | (_, 0) => 1,
                (a, b) if a == b => -1,
                (a, b) => jac[a - 1][b - 1],
            })
        }
        PaleyKind::II => {
            if q % 4 != 1 {
                return Err(Error::Construction(format!(
                    "Paley II needs q = 1 mod 4, got {q} = {} mod 4",
                    q % 4
                )));
            }
            let m = q as usize + 1;
            check_cap(2 * m, cap)?;
            let jac = jacobsthal(q);
            let conference = |a: usize, b: usize| -> i8 {
                match (a, b) {
                    (0, 0) => 0,
                    (0, _) | (_, 0) => 1,
                    (a, b) => jac[a - 1][b - 1],
                }
            };
            SignMatrix::from_fn(2 * m, |i, j| {
                let (a, s) = (i / 2, i % 2);
                let (b, t) = (j / 2, j % 2);
                match conference(a, b) {
                    0 => {
                        if s == 0 && t == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                    c => {
                        if s == 1 && t == 1 {
                            -c
                        } else {
                            c
                        }
                    }
                }
            })
        }
    }
}

/// Kronecker product `A (x) B`.
pub fn kron_product(a: &SignMatrix, b: &SignMatrix, cap: usize) -> Result<SignMatrix> {
    let order = a
        .order()
        .checked_mul(b.order())
        .ok_or(Error::OrderCap {
            order: usize::MAX,
            cap,
        })?;
    check_cap(order, cap)?;
    let db = b.order();
    SignMatrix::from_fn(order, |i, j| a.get(i / db, j / db) * b.get(i % db, j % db))
}

/// Checks `H^T H = d I` exactly (`modulus == 0`) or modulo an odd prime.
pub fn check_modular_hadamard(m: &SignMatrix, modulus: u64) -> Result<HadamardCertificate> {
    if modulus != 0 && (modulus == 2 || !is_prime(modulus)) {
        return Err(Error::Precondition(format!(
            "modulus must be 0 or an odd prime, got {modulus}"
        )));
    }
    let d = m.order();
    let cols: Vec<Vec<i8>> = (0..d).map(|j| m.column(j)).collect();
    for a in 0..d {
        for b in a + 1..d {
            let ip: i64 = cols[a]
                .iter()
                .zip(&cols[b])
                .map(|(&x, &y)| (x * y) as i64)
                .sum();
            let bad = if modulus == 0 {
                ip != 0
            } else {
                ip.rem_euclid(modulus as i64) != 0
            };
            if bad {
                return Ok(HadamardCertificate {
                    modulus,
                    valid: false,
                    failure_witness: Some((a, b, ip)),
                });
            }
        }
    }
    // column norms are d over Z since every entry squares to 1
    Ok(HadamardCertificate {
        modulus,
        valid: true,
        failure_witness: None,
    })
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn sign_matrix() -> impl Strategy<Value = SignMatrix> {
        (1usize..7).prop_flat_map(|d| {
            prop::collection::vec(prop::bool::ANY, d * d).prop_map(move |bits| {
                SignMatrix::new(d, bits.iter().map(|&b| if b { 1 } else { -1 }).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(m in sign_matrix()) {
            prop_assert_eq!(SignMatrix::parse(&m.render()).unwrap(), m);
        }
    }
}
