use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::ConjRing;
use crate::hadamard::SignMatrix;
use crate::permgroup::{iota_embed, Perm};
use crate::sic::{construct_sic, SicSystem};

/// Signs `(eps, eps')` with `H'[pi(i)][sigma(j)] = eps_i eps'_j H[i][j]`, if any.
/// The solution is normalized to `eps_0 = +1`; its negation is the only other one.
pub fn weak_signs(h: &SignMatrix, h2: &SignMatrix, pi: &Perm, sigma: &Perm) -> Option<(Vec<i8>, Vec<i8>)> {
    let d = h.order();
    if h2.order() != d || pi.degree() != d || sigma.degree() != d || d == 0 {
        return None;
    }
    let col: Vec<i8> = (0..d).map(|j| h2.get(pi.apply(0), sigma.apply(j)) * h.get(0, j)).collect();
    let row: Vec<i8> = (0..d)
        .map(|i| h2.get(pi.apply(i), sigma.apply(0)) * h.get(i, 0) * col[0])
        .collect();
    let ok = (0..d).all(|i| (0..d).all(|j| h2.get(pi.apply(i), sigma.apply(j)) == row[i] * col[j] * h.get(i, j)));
    ok.then_some((row, col))
}

/// Signs `eps` with `H'[pi(i)][pi(j)] = eps_i eps_j H[i][j]`, if any, normalized to `eps_0 = +1`.
pub fn strong_signs(h: &SignMatrix, h2: &SignMatrix, pi: &Perm) -> Option<Vec<i8>> {
    let d = h.order();
    if h2.order() != d || pi.degree() != d || d == 0 {
        return None;
    }
    let eps: Vec<i8> = (0..d).map(|j| h2.get(pi.apply(0), pi.apply(j)) * h.get(0, j)).collect();
    let ok = (0..d).all(|i| (0..d).all(|j| h2.get(pi.apply(i), pi.apply(j)) == eps[i] * eps[j] * h.get(i, j)));
    ok.then_some(eps)
}

/// A signed row/column permutation `H -> H'` with
/// `H'[pi(i)][sigma(j)] = row_signs[i] * col_signs[j] * H[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub pi: Perm,
    pub sigma: Perm,
    pub row_signs: Vec<i8>,
    pub col_signs: Vec<i8>,
}

impl EquivalenceWitness {
    pub fn identity(d: usize) -> Self {
        EquivalenceWitness {
            pi: Perm::identity(d),
            sigma: Perm::identity(d),
            row_signs: vec![1; d],
            col_signs: vec![1; d],
        }
    }

    pub fn order(&self) -> usize {
        self.pi.degree()
    }

    /// Completes a permutation pair with signs, if it is a weak equivalence.
    pub fn find(h: &SignMatrix, h2: &SignMatrix, pi: &Perm, sigma: &Perm) -> Option<Self> {
        let (row_signs, col_signs) = weak_signs(h, h2, pi, sigma)?;
        Some(EquivalenceWitness {
            pi: pi.clone(),
            sigma: sigma.clone(),
            row_signs,
            col_signs,
        })
    }

    /// The image of `h` under this witness.
    pub fn apply(&self, h: &SignMatrix) -> Result<SignMatrix> {
        self.check_shape(h.order())?;
        h.signed_permute(&self.pi.images(), &self.sigma.images(), &self.row_signs, &self.col_signs)
    }

    fn check_shape(&self, d: usize) -> Result<()> {
        let bad_sign = self.row_signs.iter().chain(&self.col_signs).any(|&s| s != 1 && s != -1);
        if self.pi.degree() != d || self.sigma.degree() != d || self.row_signs.len() != d || self.col_signs.len() != d {
            return Err(Error::InvalidWitness(format!("witness sizes do not match order {d}")));
        }
        if bad_sign {
            return Err(Error::InvalidWitness("signs must be +1 or -1".into()));
        }
        Ok(())
    }

    /// Checks every entry; the error names the first violated one.
    pub fn verify(&self, h: &SignMatrix, h2: &SignMatrix) -> Result<()> {
        let d = h.order();
        if h2.order() != d {
            return Err(Error::InvalidWitness(format!("orders {d} and {} differ", h2.order())));
        }
        self.check_shape(d)?;
        for i in 0..d {
            for j in 0..d {
                let want = self.row_signs[i] * self.col_signs[j] * h.get(i, j);
                let got = h2.get(self.pi.apply(i), self.sigma.apply(j));
                if got != want {
                    return Err(Error::InvalidWitness(format!(
                        "entry ({i}, {j}): H'[{}][{}] = {got}, expected {want}",
                        self.pi.apply(i),
                        self.sigma.apply(j)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The strong SIC equivalence induced by a weak matrix equivalence:
/// `x'_{pi(i), sigma(j)} = col_signs[j] * P D x_{ij}`, where
/// `(P D v)_{pi(r)} = row_signs[r] * v_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedSicEquivalence {
    /// `iota(pi, sigma)` on row-major pairs.
    pub perm: Perm,
    /// The unitary part as a signed permutation: `(perm, signs)` of `P D`.
    pub unitary_perm: Perm,
    pub unitary_signs: Vec<i8>,
    /// Scalar `c_u` for each flat index `u = i * d + j`.
    pub scalars: Vec<i8>,
}

/// `P D v` with `(P D v)_{pi(r)} = signs[r] * v_r`.
fn signed_perm_apply<R: ConjRing>(ring: &R, pi: &Perm, signs: &[i8], v: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); v.len()];
    for (r, x) in v.iter().enumerate() {
        out[pi.apply(r)] = if signs[r] > 0 { x.clone() } else { ring.neg(x) };
    }
    out
}

/// Builds the SICs of `h` and `h2` in `ring` and checks the vector identity
/// of the induced strong equivalence at every index.
pub fn weak_equiv_to_strong_sic_witness<R: ConjRing>(
    h: &SignMatrix,
    h2: &SignMatrix,
    w: &EquivalenceWitness,
    ring: &R,
) -> Result<InducedSicEquivalence> {
    w.verify(h, h2)?;
    let s = construct_sic(h, ring.clone())?;
    let s2 = construct_sic(h2, ring.clone())?;
    check_induced(&s, &s2, w)
}

/// As [`weak_equiv_to_strong_sic_witness`] on already constructed SICs.
pub fn check_induced<R: ConjRing>(
    s: &SicSystem<R>,
    s2: &SicSystem<R>,
    w: &EquivalenceWitness,
) -> Result<InducedSicEquivalence> {
    let d = s.d();
    w.verify(s.source(), s2.source())?;
    let ring = s.ring();
    let mut scalars = vec![0i8; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut img = signed_perm_apply(ring, &w.pi, &w.row_signs, s.vector(i, j));
            if w.col_signs[j] < 0 {
                img = img.iter().map(|e| ring.neg(e)).collect();
            }
            let (pi_i, sigma_j) = (w.pi.apply(i), w.sigma.apply(j));
            if img.as_slice() != s2.vector(pi_i, sigma_j) {
                return Err(Error::InvalidWitness(format!(
                    "x'[{pi_i}][{sigma_j}] differs from eps'_{j} P D x[{i}][{j}]"
                )));
            }
            scalars[s.index(i, j)] = w.col_signs[j];
        }
    }
    Ok(InducedSicEquivalence {
        perm: iota_embed(&w.pi, &w.sigma)?,
        unitary_perm: w.pi.clone(),
        unitary_signs: w.row_signs.clone(),
        scalars,
    })
}

/// Data of the phase relation
/// `(x'_{pi(u)}, x'_{pi(v)}) = eps * omega_u * conj(omega_v) * gamma((x_u, x_v))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseRelation {
    pub eps: i8,
    /// `gamma` is conjugation when set, the identity otherwise.
    pub conj: bool,
    /// `omega_u = i^k`, stored as `k`.
    pub omegas: Vec<u8>,
}

/// Recovers `(eps, gamma, omega)` for a claimed equivalence `pi` from the
/// SIC `s` to `s2` and checks the relation on every ordered pair, diagonal
/// included. `gamma_hint` restricts the search to one `gamma`.
pub fn lemma36_extract<R: ConjRing>(
    s: &SicSystem<R>,
    s2: &SicSystem<R>,
    pi: &Perm,
    gamma_hint: Option<bool>,
) -> Result<PhaseRelation> {
    let gram = s.gram();
    let gram2 = if std::ptr::eq(s, s2) { gram.clone() } else { s2.gram() };
    extract_with_grams(s.ring(), s.len(), &gram, &gram2, pi, gamma_hint)
}

/// [`lemma36_extract`] on precomputed flattened Gram matrices.
pub fn extract_with_grams<R: ConjRing>(
    ring: &R,
    n: usize,
    gram: &[R::Elem],
    gram2: &[R::Elem],
    pi: &Perm,
    gamma_hint: Option<bool>,
) -> Result<PhaseRelation> {
    if pi.degree() != n || gram.len() != n * n || gram2.len() != n * n {
        return Err(Error::Dimension(format!("permutation or Gram size does not match {n} vectors")));
    }
    let phases: Vec<R::Elem> = (0..4).map(|k| ring.i_pow(k)).collect();
    let gammas: Vec<bool> = match gamma_hint {
        Some(c) => vec![c],
        None => vec![false, true],
    };
    let k = 0;
    for &conj in &gammas {
        let g = |a: &R::Elem| if conj { ring.conj(a) } else { a.clone() };
        for eps in [1i8, -1] {
            let eps_e = ring.from_int(eps as i64);
            let mut omegas = vec![0u8; n];
            omegas[k] = if eps > 0 { 0 } else { 2 };
            let mut found_all = true;
            for u in 0..n {
                if u == k {
                    continue;
                }
                let target = &gram2[pi.apply(u) * n + pi.apply(k)];
                let base = g(&gram[u * n + k]);
                match (0..4).find(|&w| ring.mul(&phases[w], &base) == *target) {
                    Some(w) => omegas[u] = w as u8,
                    None => {
                        found_all = false;
                        break;
                    }
                }
            }
            if !found_all {
                continue;
            }
            let holds = (0..n).all(|u| {
                let left = ring.mul(&eps_e, &phases[omegas[u] as usize]);
                (0..n).all(|v| {
                    let scale = ring.mul(&left, &ring.conj(&phases[omegas[v] as usize]));
                    ring.mul(&scale, &g(&gram[u * n + v])) == gram2[pi.apply(u) * n + pi.apply(v)]
                })
            });
            if holds {
                return Ok(PhaseRelation { eps, conj, omegas });
            }
        }
    }
    Err(Error::InvalidWitness(
        "no (eps, gamma, omega) satisfies the phase relation; not a weak equivalence".into(),
    ))
}
