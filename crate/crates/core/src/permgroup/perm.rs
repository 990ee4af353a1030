use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Validates that `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > u32::MAX as usize {
            return Err(Error::NotPermutation("degree too large".into()));
        }
        let mut seen = vec![false; n];
        for (x, &y) in images.iter().enumerate() {
            if y >= n {
                return Err(Error::NotPermutation(format!("{x} maps to {y} outside 0..{n}")));
            }
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::NotPermutation(format!("{y} is hit twice")));
            }
        }
        Ok(Perm {
            images: images.into_iter().map(|y| y as u32).collect(),
        })
    }

    /// Builds a permutation from a closure; panics on a non-bijection, so
    /// callers use it only where bijectivity holds by construction.
    pub(crate) fn from_fn_unchecked(n: usize, f: impl Fn(usize) -> usize) -> Self {
        let p = Perm {
            images: (0..n).map(|x| f(x) as u32).collect(),
        };
        debug_assert!(Perm::from_images(p.images()).is_ok());
        p
    }

    pub(crate) fn from_u32_unchecked(images: Vec<u32>) -> Self {
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&y| y as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// `self` first, then `other`: `x -> other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&y| other.images[y as usize]).collect(),
        }
    }

    /// Functional composition `self o other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        other.then(self)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// Nontrivial cycles in increasing order of their least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn support_size(&self) -> usize {
        self.images.iter().enumerate().filter(|(x, &y)| *x as u32 != y).count()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation on 0-based points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Perm::from_images(v)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Vec<usize> {
        p.images()
    }
}

/// `iota(pi, sigma)(i, j) = (pi(i), sigma(j))` on the row-major grid `[d] x [d]`.
pub fn iota_embed(pi: &Perm, sigma: &Perm) -> Result<Perm> {
    let d = pi.degree();
    if sigma.degree() != d {
        return Err(Error::Dimension(format!(
            "row permutation on {d} points, column permutation on {}",
            sigma.degree()
        )));
    }
    Ok(Perm::from_fn_unchecked(d * d, |u| {
        pi.apply(u / d) * d + sigma.apply(u % d)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_operations() {
        let p = Perm::from_images(vec![1, 2, 0, 3]).unwrap();
        assert_eq!(p.to_string(), "(0 1 2)");
        assert_eq!(p.inverse().images(), vec![2, 0, 1, 3]);
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.pow(3), Perm::identity(4));
        assert_eq!(p.sign(), 1);
        assert_eq!(Perm::from_images(vec![1, 0]).unwrap().sign(), -1);
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![2, 0]).is_err());
        let q = Perm::from_images(vec![0, 1, 3, 2]).unwrap();
        // (p then q)(0) = q(p(0)) = q(1) = 1; (p o q)(2) = p(3) = 3
        assert_eq!(p.then(&q).apply(1), 3);
        assert_eq!(p.compose(&q).apply(2), 3);
    }

    #[test]
    fn iota_small_cases() {
        let id = Perm::identity(2);
        assert!(iota_embed(&id, &id).unwrap().is_identity());
        let swap = Perm::from_images(vec![1, 0]).unwrap();
        // swaps the two rows of the 2x2 grid: (0,j) <-> (1,j)
        assert_eq!(iota_embed(&swap, &id).unwrap().images(), vec![2, 3, 0, 1]);
        assert!(iota_embed(&swap, &Perm::identity(3)).is_err());
    }

    fn perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn iota_is_a_homomorphism(p1 in perm(5), p2 in perm(5), s1 in perm(5), s2 in perm(5)) {
            let lhs = iota_embed(&p1.compose(&p2), &s1.compose(&s2)).unwrap();
            let rhs = iota_embed(&p1, &s1).unwrap().compose(&iota_embed(&p2, &s2).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn iota_is_injective(p1 in perm(4), p2 in perm(4), s1 in perm(4), s2 in perm(4)) {
            let a = iota_embed(&p1, &s1).unwrap();
            let b = iota_embed(&p2, &s2).unwrap();
            prop_assert_eq!(a == b, p1 == p2 && s1 == s2);
        }

        #[test]
        fn inverse_and_associativity(a in perm(7), b in perm(7), c in perm(7)) {
            prop_assert!(a.then(&a.inverse()).is_identity());
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
            prop_assert_eq!(a.then(&b).inverse(), b.inverse().then(&a.inverse()));
        }
    }
}
