use super::ConjRing;
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`ConjRing`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<R: ConjRing> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

/// The sesquilinear form `(x, y) = x* y`.
pub fn inner<R: ConjRing>(ring: &R, x: &[R::Elem], y: &[R::Elem]) -> R::Elem {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).fold(ring.zero(), |acc, (a, b)| {
        ring.add(&acc, &ring.mul(&ring.conj(a), b))
    })
}

impl<R: ConjRing> ExactMatrix<R> {
    pub fn new(ring: R, rows: usize, cols: usize, data: Vec<R::Elem>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrices must have positive dimensions".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ExactMatrix {
            ring,
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(
        ring: R,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> R::Elem,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::new(ring, rows, cols, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ring: R, columns: &[Vec<R::Elem>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Self::from_fn(ring, rows, cols, |r, c| columns[c][r].clone())
    }

    pub fn identity(ring: R, n: usize) -> Result<Self> {
        let (zero, one) = (ring.zero(), ring.one());
        Self::from_fn(ring, n, n, |r, c| if r == c { one.clone() } else { zero.clone() })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &R::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn conj_transpose(&self) -> Self {
        let ring = self.ring.clone();
        Self::from_fn(ring, self.cols, self.rows, |r, c| {
            self.ring.conj(self.get(c, r))
        })
        .expect("nonempty")
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring.spec() != other.ring.spec() {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring.spec(),
                other.ring.spec()
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = &self.ring;
        Self::from_fn(ring.clone(), self.rows, other.cols, |r, c| {
            (0..self.cols).fold(ring.zero(), |acc, k| {
                ring.add(&acc, &ring.mul(self.get(r, k), other.get(k, c)))
            })
        })
    }

    /// Gram matrix of the columns: `G[a][b] = (col_a, col_b)`.
    pub fn gram(&self) -> Self {
        let cols: Vec<Vec<R::Elem>> = (0..self.cols).map(|c| self.column(c)).collect();
        let conj: Vec<Vec<R::Elem>> = cols
            .iter()
            .map(|v| v.iter().map(|x| self.ring.conj(x)).collect())
            .collect();
        let ring = &self.ring;
        let n = self.cols;
        let mut data = vec![ring.zero(); n * n];
        for a in 0..n {
            for b in a..n {
                let v = conj[a]
                    .iter()
                    .zip(&cols[b])
                    .fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)));
                if a != b {
                    data[b * n + a] = ring.conj(&v);
                }
                data[a * n + b] = v;
            }
        }
        Self::new(ring.clone(), n, n, data).expect("square")
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| *self.get(r, c) == self.ring.conj(self.get(c, r)))
            })
    }

    pub fn rank(&self) -> usize {
        self.ring.rank(self)
    }
}

/// Rank by Gaussian elimination; requires invertible pivots (field rings).
#[allow(clippy::needless_range_loop)]
pub(crate) fn field_rank<R: ConjRing>(m: &ExactMatrix<R>) -> usize {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<R::Elem>> = (0..rows)
        .map(|r| (0..cols).map(|c| m.get(r, c).clone()).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !ring.is_zero(&a[r][c])) else {
            continue;
        };
        a.swap(rank, p);
        let pinv = ring.inv(&a[rank][c]).expect("nonzero pivot in a field");
        for j in c..cols {
            a[rank][j] = ring.mul(&a[rank][j], &pinv);
        }
        for r in rank + 1..rows {
            if ring.is_zero(&a[r][c]) {
                continue;
            }
            let f = a[r][c].clone();
            for j in c..cols {
                let t = ring.mul(&f, &a[rank][j]);
                a[r][j] = ring.sub(&a[r][j], &t);
            }
        }
        rank += 1;
    }
    rank
}
