//! Exact arithmetic in rings `L = K(i)` carrying the conjugation `a+bi -> a-bi`,
//! and dense exact linear algebra over them.
//!
//! Three rings are supported:
//!
//! * [`Fp2`]: the field `F_{p^2} = F_p[i]` for a prime `p = 3 mod 4`, where
//!   `t^2 + 1` is irreducible and conjugation is the Frobenius map;
//! * [`GaussianIntegers`]: `Z[i]` with arbitrary-size components;
//! * [`GaussianRationals`]: `Q(i)`, the fraction field of `Z[i]`.
//!
//! Algorithms are written once against the [`ConjRing`] trait. [`RingSpec`]
//! is the serializable description and [`Ring`] the runtime handle.

mod finite;
mod gaussian;
mod matrix;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use finite::{Fp2, Fp2Elem};
pub use gaussian::{GaussianInt, GaussianIntegers, GaussianRational, GaussianRationals};
pub use matrix::{inner, ExactMatrix};

use crate::error::{Error, Result};

/// A commutative ring `K[i]` with `i^2 = -1` and the involution `a+bi -> a-bi`.
#[allow(clippy::wrong_self_convention)]
pub trait ConjRing: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn spec(&self) -> RingSpec;

    /// Characteristic of the ring; `0` for characteristic zero.
    fn characteristic(&self) -> u64;

    /// Whether every nonzero element is invertible.
    fn is_field(&self) -> bool;

    fn from_parts(&self, re: i64, im: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn conj(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse. Fails on zero, and on non-units of a non-field.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Human-readable `a+bi` form.
    fn format(&self, a: &Self::Elem) -> String;

    /// `[re, im]` with integer components as JSON numbers and fractions as strings.
    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;

    fn from_json(&self, v: &serde_json::Value) -> Result<Self::Elem>;

    /// Rank over the ring's field of fractions.
    fn rank(&self, m: &ExactMatrix<Self>) -> usize
    where
        Self: Sized,
    {
        matrix::field_rank(m)
    }

    fn zero(&self) -> Self::Elem {
        self.from_parts(0, 0)
    }

    fn one(&self) -> Self::Elem {
        self.from_parts(1, 0)
    }

    fn i(&self) -> Self::Elem {
        self.from_parts(0, 1)
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_parts(n, 0)
    }

    /// `i^k` for any integer `k`.
    fn i_pow(&self, k: i64) -> Self::Elem {
        match k.rem_euclid(4) {
            0 => self.from_parts(1, 0),
            1 => self.from_parts(0, 1),
            2 => self.from_parts(-1, 0),
            _ => self.from_parts(0, -1),
        }
    }

    fn pow(&self, a: &Self::Elem, mut exp: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

/// Serializable description of a supported ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "p")]
pub enum RingSpec {
    /// `F_{p^2}` for a prime `p = 3 mod 4`.
    Finite(u32),
    /// `Z[i]`.
    Gaussian,
    /// `Q(i)`.
    GaussianFraction,
}

impl RingSpec {
    /// Validates the description and returns a ring handle.
    pub fn make(&self) -> Result<Ring> {
        Ok(match *self {
            RingSpec::Finite(p) => Ring::Finite(Fp2::new(p)?),
            RingSpec::Gaussian => Ring::Gaussian(GaussianIntegers),
            RingSpec::GaussianFraction => Ring::GaussianFraction(GaussianRationals),
        })
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            RingSpec::Finite(p) => p as u64,
            _ => 0,
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Finite(p) => write!(f, "gf:{p}"),
            RingSpec::Gaussian => write!(f, "gauss"),
            RingSpec::GaussianFraction => write!(f, "gaussq"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Accepts `gf:<p>`, `gauss` and `gaussq`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(p) = s.strip_prefix("gf:") {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in ring spec {s:?}")))?;
            let spec = RingSpec::Finite(p);
            spec.make()?;
            return Ok(spec);
        }
        match s {
            "gauss" | "gaussian" => Ok(RingSpec::Gaussian),
            "gaussq" | "gaussian_fraction" => Ok(RingSpec::GaussianFraction),
            _ => Err(Error::Parse(format!(
                "unknown ring {s:?} (expected gf:<p>, gauss or gaussq)"
            ))),
        }
    }
}

/// Runtime ring handle produced by [`RingSpec::make`].
#[derive(Clone, Debug)]
pub enum Ring {
    Finite(Fp2),
    Gaussian(GaussianIntegers),
    GaussianFraction(GaussianRationals),
}

impl Ring {
    pub fn spec(&self) -> RingSpec {
        match self {
            Ring::Finite(r) => r.spec(),
            Ring::Gaussian(r) => r.spec(),
            Ring::GaussianFraction(r) => r.spec(),
        }
    }
}

/// Runs `$body` with `$r` bound to the concrete ring behind a [`RingSpec`].
#[macro_export]
macro_rules! with_ring {
    ($spec:expr, |$r:ident| $body:expr) => {
        match $spec.make()? {
            $crate::exactalg::Ring::Finite($r) => $body,
            $crate::exactalg::Ring::Gaussian($r) => $body,
            $crate::exactalg::Ring::GaussianFraction($r) => $body,
        }
    };
}
