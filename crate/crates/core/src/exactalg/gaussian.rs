use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use super::finite::format_parts;
use super::matrix::field_rank;
use super::{ConjRing, ExactMatrix, RingSpec};
use crate::error::{Error, Result};

/// The Gaussian integers `Z[i]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianIntegers;

/// The Gaussian rationals `Q(i)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRationals;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl GaussianIntegers {
    /// Exact quotient `a / b`; errors when `b` does not divide `a` in `Z[i]`.
    pub fn div_exact(&self, a: &GaussianInt, b: &GaussianInt) -> Result<GaussianInt> {
        let n = b.norm();
        if n.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        let num = self.mul(a, &self.conj(b));
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        if !rr.is_zero() || !ri.is_zero() {
            return Err(Error::Arithmetic(format!(
                "{} is not divisible by {}",
                self.format(a),
                self.format(b)
            )));
        }
        Ok(GaussianInt { re: qr, im: qi })
    }

    pub fn to_rational(&self, a: &GaussianInt) -> GaussianRational {
        GaussianRational {
            re: BigRational::from_integer(a.re.clone()),
            im: BigRational::from_integer(a.im.clone()),
        }
    }

    /// Rank by fraction-free (Bareiss) elimination, staying inside `Z[i]`.
    pub fn rank_fraction_free(&self, m: &ExactMatrix<Self>) -> usize {
        let (rows, cols) = (m.rows(), m.cols());
        let mut a: Vec<Vec<GaussianInt>> = (0..rows)
            .map(|r| (0..cols).map(|c| m.get(r, c).clone()).collect())
            .collect();
        let mut prev = self.one();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !self.is_zero(&a[r][c])) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..rows {
                for j in c + 1..cols {
                    let t = self.sub(
                        &self.mul(&a[rank][c], &a[r][j]),
                        &self.mul(&a[r][c], &a[rank][j]),
                    );
                    a[r][j] = self
                        .div_exact(&t, &prev)
                        .expect("Bareiss quotients are exact minors");
                }
                a[r][c] = self.zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }
}

impl ConjRing for GaussianIntegers {
    type Elem = GaussianInt;

    fn spec(&self) -> RingSpec {
        RingSpec::Gaussian
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn is_field(&self) -> bool {
        false
    }

    fn from_parts(&self, re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn add(&self, a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &a.re + &b.re,
            im: &a.im + &b.im,
        }
    }

    fn sub(&self, a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }

    fn mul(&self, a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &a.re * &b.re - &a.im * &b.im,
            im: &a.re * &b.im + &a.im * &b.re,
        }
    }

    fn neg(&self, a: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: -&a.re,
            im: -&a.im,
        }
    }

    fn conj(&self, a: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: a.re.clone(),
            im: -&a.im,
        }
    }

    fn is_zero(&self, a: &GaussianInt) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }

    fn inv(&self, a: &GaussianInt) -> Result<GaussianInt> {
        if self.is_zero(a) {
            return Err(Error::Arithmetic("inverse of zero".into()));
        }
        if !a.norm().is_one() {
            return Err(Error::Arithmetic(format!(
                "{} is not a unit of Z[i]",
                self.format(a)
            )));
        }
        Ok(self.conj(a))
    }

    fn format(&self, a: &GaussianInt) -> String {
        match (a.re.to_i64(), a.im.to_i64()) {
            (Some(r), Some(i)) => format_parts(r, i),
            _ => format!("({})+({})i", a.re, a.im),
        }
    }

    fn to_json(&self, a: &GaussianInt) -> Value {
        Value::Array(vec![big_json(&a.re), big_json(&a.im)])
    }

    fn from_json(&self, v: &Value) -> Result<GaussianInt> {
        let (re, im) = json_pair(v)?;
        let int = |x: BigRational| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::Parse(format!("{x} is not an integer")))
            }
        };
        Ok(GaussianInt {
            re: int(re)?,
            im: int(im)?,
        })
    }

    fn rank(&self, m: &ExactMatrix<Self>) -> usize {
        let q = GaussianRationals;
        let data = m.data().iter().map(|x| self.to_rational(x)).collect();
        let mq = ExactMatrix::new(q, m.rows(), m.cols(), data).expect("same shape");
        field_rank(&mq)
    }
}

impl ConjRing for GaussianRationals {
    type Elem = GaussianRational;

    fn spec(&self) -> RingSpec {
        RingSpec::GaussianFraction
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn is_field(&self) -> bool {
        true
    }

    fn from_parts(&self, re: i64, im: i64) -> GaussianRational {
        GaussianRational {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    fn add(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &a.re + &b.re,
            im: &a.im + &b.im,
        }
    }

    fn sub(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }

    fn mul(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &a.re * &b.re - &a.im * &b.im,
            im: &a.re * &b.im + &a.im * &b.re,
        }
    }

    fn neg(&self, a: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: -&a.re,
            im: -&a.im,
        }
    }

    fn conj(&self, a: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: a.re.clone(),
            im: -&a.im,
        }
    }

    fn is_zero(&self, a: &GaussianRational) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }

    fn inv(&self, a: &GaussianRational) -> Result<GaussianRational> {
        if self.is_zero(a) {
            return Err(Error::Arithmetic("inverse of zero".into()));
        }
        let n = &a.re * &a.re + &a.im * &a.im;
        Ok(GaussianRational {
            re: &a.re / &n,
            im: -&a.im / &n,
        })
    }

    fn format(&self, a: &GaussianRational) -> String {
        if a.re.is_integer() && a.im.is_integer() {
            if let (Some(r), Some(i)) = (a.re.to_integer().to_i64(), a.im.to_integer().to_i64()) {
                return format_parts(r, i);
            }
        }
        format!("({})+({})i", a.re, a.im)
    }

    fn to_json(&self, a: &GaussianRational) -> Value {
        Value::Array(vec![rat_json(&a.re), rat_json(&a.im)])
    }

    fn from_json(&self, v: &Value) -> Result<GaussianRational> {
        let (re, im) = json_pair(v)?;
        Ok(GaussianRational { re, im })
    }
}

fn big_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

fn rat_json(x: &BigRational) -> Value {
    if x.is_integer() {
        big_json(&x.to_integer())
    } else {
        Value::String(x.to_string())
    }
}

fn json_pair(v: &Value) -> Result<(BigRational, BigRational)> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("expected [re, im], got {v}")))?;
    Ok((json_rat(&arr[0])?, json_rat(&arr[1])?))
}

fn json_rat(v: &Value) -> Result<BigRational> {
    if let Some(n) = v.as_i64() {
        return Ok(BigRational::from_integer(n.into()));
    }
    let s = v
        .as_str()
        .ok_or_else(|| Error::Parse(format!("bad component {v}")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad component {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse(s)?)),
    }
}
