//! SICs built from modular Hadamard matrices.
//!
//! For a `d x d` sign matrix `H` with columns `h_j`, the vectors
//! `x_ij = h_j o (1 + z e_i)` with `z = -2(1 + i)` form a `(12, 16, 96)`-SIC in
//! `L^d` whenever `H^T H = d I` holds in `L` and `d = 8` in `L`. The index set
//! `[d] x [d]` is flattened row-major: `(i, j) -> i * d + j`.

mod scan;
mod verify;

use serde_json::{json, Value};

pub use scan::{applicable_primes, scan_dimensions, ApplicablePrimes, ScanEntry};
pub use verify::{verify_sic, AxiomFailure, SicVerdict};

use crate::error::{Error, Result};
use crate::exactalg::{inner, ConjRing, RingSpec};
use crate::hadamard::{check_modular_hadamard, SignMatrix};

/// The `d^2` vectors of the construction together with their source matrix.
#[derive(Clone, Debug)]
pub struct SicSystem<R: ConjRing> {
    ring: R,
    source: SignMatrix,
    z: R::Elem,
    vectors: Vec<Vec<R::Elem>>,
}

/// `-2(1 + i)`.
pub fn z_const<R: ConjRing>(ring: &R) -> R::Elem {
    ring.from_parts(-2, -2)
}

/// Checks the dimension and certificate preconditions of the construction.
pub fn check_admissible(h: &SignMatrix, spec: RingSpec) -> Result<()> {
    let d = h.order();
    let p = spec.characteristic();
    if p == 0 {
        if d != 8 {
            return Err(Error::Precondition(format!(
                "over {spec} the construction needs d = 8, got d = {d}"
            )));
        }
    } else if (d as i64 - 8).rem_euclid(p as i64) != 0 {
        return Err(Error::Precondition(format!(
            "d = {d} is not congruent to 8 mod {p}"
        )));
    }
    let cert = check_modular_hadamard(h, p)?;
    if let Some((a, b, ip)) = cert.failure_witness {
        return Err(Error::Precondition(format!(
            "not a modular Hadamard matrix for modulus {p}: columns {a} and {b} have inner product {ip}"
        )));
    }
    Ok(())
}

/// Builds the SIC of the construction from a modular Hadamard matrix.
pub fn construct_sic<R: ConjRing>(h: &SignMatrix, ring: R) -> Result<SicSystem<R>> {
    check_admissible(h, ring.spec())?;
    let d = h.order();
    let z = z_const(&ring);
    let one_plus_z = ring.add(&ring.one(), &z);
    let (plus, minus) = (ring.one(), ring.neg(&ring.one()));
    let neg_one_plus_z = ring.neg(&one_plus_z);
    let mut vectors = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let v = (0..d)
                .map(|r| match (r == i, h.get(r, j) > 0) {
                    (false, true) => plus.clone(),
                    (false, false) => minus.clone(),
                    (true, true) => one_plus_z.clone(),
                    (true, false) => neg_one_plus_z.clone(),
                })
                .collect();
            vectors.push(v);
        }
    }
    Ok(SicSystem {
        ring,
        source: h.clone(),
        z,
        vectors,
    })
}

impl<R: ConjRing> SicSystem<R> {
    pub fn d(&self) -> usize {
        self.source.order()
    }

    /// Number of vectors, `d^2`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn source(&self) -> &SignMatrix {
        &self.source
    }

    pub fn z(&self) -> &R::Elem {
        &self.z
    }

    pub fn vectors(&self) -> &[Vec<R::Elem>] {
        &self.vectors
    }

    /// Vector `x_ij` (0-based).
    pub fn vector(&self, i: usize, j: usize) -> &[R::Elem] {
        &self.vectors[self.index(i, j)]
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.d() + j
    }

    pub fn pair(&self, u: usize) -> (usize, usize) {
        (u / self.d(), u % self.d())
    }

    pub fn inner(&self, u: usize, v: usize) -> R::Elem {
        inner(&self.ring, &self.vectors[u], &self.vectors[v])
    }

    /// Full Gram matrix of the vectors, flattened row-major (`n x n`, `n = d^2`).
    pub fn gram(&self) -> Vec<R::Elem> {
        let n = self.len();
        let mut g = vec![self.ring.zero(); n * n];
        for u in 0..n {
            for v in u..n {
                let val = self.inner(u, v);
                if u != v {
                    g[v * n + u] = self.ring.conj(&val);
                }
                g[u * n + v] = val;
            }
        }
        g
    }

    /// JSON form: ring, dimension, source sign text, `z`, and vectors as
    /// arrays of `[re, im]` pairs in row-major index order.
    pub fn to_json(&self) -> Value {
        let vectors: Vec<Value> = self
            .vectors
            .iter()
            .map(|v| Value::Array(v.iter().map(|x| self.ring.to_json(x)).collect()))
            .collect();
        json!({
            "ring": self.ring.spec().to_string(),
            "d": self.d(),
            "source": self.source.render(),
            "z": self.ring.to_json(&self.z),
            "vectors": vectors,
        })
    }

    /// Human-readable `d x d^2` matrix whose columns are the vectors.
    pub fn render_matrix(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.d())
            .map(|r| self.vectors.iter().map(|v| self.ring.format(&v[r])).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Reads the ring and raw vectors from a JSON document in the [`SicSystem::to_json`]
/// layout. Only `ring` and `vectors` are required.
pub fn vectors_from_json<R: ConjRing>(ring: &R, doc: &Value) -> Result<Vec<Vec<R::Elem>>> {
    let vs = doc
        .get("vectors")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"vectors\" array".into()))?;
    vs.iter()
        .map(|v| {
            v.as_array()
                .ok_or_else(|| Error::Parse("each vector must be an array".into()))?
                .iter()
                .map(|x| ring.from_json(x))
                .collect()
        })
        .collect()
}

/// Ring named by the `ring` field of a SIC JSON document.
pub fn ring_from_json(doc: &Value) -> Result<RingSpec> {
    doc.get("ring")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing \"ring\" field".into()))?
        .parse()
}

/// `4 * (-1)^[i = k] * (-1)^[j = l] * phi` with `phi in {+-1, +-i}` selected by
/// the signs `(H_ij H_il, H_kj H_kl)`; the off-diagonal Gram entry
/// `(x_ij, x_kl)` of the construction.
pub fn gram_closed_form<R: ConjRing>(
    h: &SignMatrix,
    ring: &R,
    (i, j): (usize, usize),
    (k, l): (usize, usize),
) -> Result<R::Elem> {
    let d = h.order();
    if i >= d || j >= d || k >= d || l >= d {
        return Err(Error::Dimension(format!("index out of range for d = {d}")));
    }
    if (i, j) == (k, l) {
        return Err(Error::Precondition("closed form is for distinct pairs".into()));
    }
    let phase = ring.i_pow(gram_exponent(h, (i, j), (k, l)));
    Ok(ring.mul(&ring.from_int(4), &phase))
}

/// Exponent `e` with `(x_ij, x_kl) = 4 i^e`, for distinct pairs.
pub fn gram_exponent(h: &SignMatrix, (i, j): (usize, usize), (k, l): (usize, usize)) -> i64 {
    let phi = match (h.get(i, j) * h.get(i, l), h.get(k, j) * h.get(k, l)) {
        (-1, -1) => 0,
        (1, 1) => 2,
        (1, -1) => 1,
        _ => 3,
    };
    let flips = (i == k) as i64 + (j == l) as i64;
    (phi + 2 * flips) % 4
}

/// `H~_{(i,j),(k,l)} = H_kj H_il`, indexed row-major over pairs.
///
/// The cap bounds the source order `d` (the output has order `d^2`).
pub fn build_tilde(h: &SignMatrix, cap: usize) -> Result<SignMatrix> {
    let d = h.order();
    if d > cap {
        return Err(Error::OrderCap { order: d, cap });
    }
    SignMatrix::from_fn(d * d, |u, v| {
        let (i, j) = (u / d, u % d);
        let (k, l) = (v / d, v % d);
        h.get(k, j) * h.get(i, l)
    })
}

/// Checks `H_ij H_kl (x_ij, x_kl)^2 = 16 H~ + 128 [u = v]` for every pair,
/// using `(x o x, y o y) = (x, y)^2` instead of forming tensors.
pub fn tensor_gram_check<R: ConjRing>(s: &SicSystem<R>) -> bool {
    let ring = s.ring();
    let h = s.source();
    let d = s.d();
    let n = s.len();
    let (c16, c128) = (ring.from_int(16), ring.from_int(128));
    for u in 0..n {
        let (i, j) = (u / d, u % d);
        for v in u..n {
            let (k, l) = (v / d, v % d);
            let g = s.inner(u, v);
            let sign = ring.from_int((h.get(i, j) * h.get(k, l)) as i64);
            let lhs = ring.mul(&sign, &ring.mul(&g, &g));
            let tilde = (h.get(k, j) * h.get(i, l)) as i64;
            let mut rhs = ring.mul(&c16, &ring.from_int(tilde));
            if u == v {
                rhs = ring.add(&rhs, &c128);
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// `(x_u, x_v)(x_v, x_w)(x_w, x_u)` for distinct flat indices.
pub fn triple_product<R: ConjRing>(
    s: &SicSystem<R>,
    u: usize,
    v: usize,
    w: usize,
) -> Result<R::Elem> {
    if u == v || v == w || u == w {
        return Err(Error::Precondition("triple product needs distinct indices".into()));
    }
    let n = s.len();
    if u >= n || v >= n || w >= n {
        return Err(Error::Dimension(format!("index out of range for {n} vectors")));
    }
    let ring = s.ring();
    Ok(ring.mul(&ring.mul(&s.inner(u, v), &s.inner(v, w)), &s.inner(w, u)))
}
