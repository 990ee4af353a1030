use serde_json::Value;

use super::{ConjRing, RingSpec};
use crate::error::{Error, Result};
use crate::numtheory::{is_prime, pow_mod, reduce};

/// `F_{p^2} = F_p[i]/(i^2 + 1)` for a prime `p = 3 mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2 {
    p: u32,
}

/// Element `re + im*i` with both components in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2Elem {
    pub re: u32,
    pub im: u32,
}

impl Fp2 {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidRing(
                "characteristic 2 is not supported (t^2+1 = (t+1)^2)".into(),
            ));
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if p % 4 != 3 {
            return Err(Error::InvalidRing(format!("t^2+1 splits mod {p}")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidRing(format!("{p} exceeds 2^31")));
        }
        Ok(Fp2 { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    fn addm(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    fn subm(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + self.p as u64 - b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    fn mulm(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Signed representative in `(-p/2, p/2]`, used for display.
    fn signed(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl ConjRing for Fp2 {
    type Elem = Fp2Elem;

    fn spec(&self) -> RingSpec {
        RingSpec::Finite(self.p)
    }

    fn characteristic(&self) -> u64 {
        self.p as u64
    }

    fn is_field(&self) -> bool {
        true
    }

    fn from_parts(&self, re: i64, im: i64) -> Fp2Elem {
        let p = self.p as u64;
        Fp2Elem {
            re: reduce(re, p) as u32,
            im: reduce(im, p) as u32,
        }
    }

    fn add(&self, a: &Fp2Elem, b: &Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            re: self.addm(a.re, b.re),
            im: self.addm(a.im, b.im),
        }
    }

    fn sub(&self, a: &Fp2Elem, b: &Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            re: self.subm(a.re, b.re),
            im: self.subm(a.im, b.im),
        }
    }

    fn mul(&self, a: &Fp2Elem, b: &Fp2Elem) -> Fp2Elem {
        let p = self.p as u64;
        let (ar, ai, br, bi) = (a.re as u64, a.im as u64, b.re as u64, b.im as u64);
        let re = (ar * br % p + p * p - ai * bi % p) % p;
        let im = (ar * bi + ai * br) % p;
        Fp2Elem {
            re: re as u32,
            im: im as u32,
        }
    }

    fn neg(&self, a: &Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            re: self.subm(0, a.re),
            im: self.subm(0, a.im),
        }
    }

    fn conj(&self, a: &Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            re: a.re,
            im: self.subm(0, a.im),
        }
    }

    fn is_zero(&self, a: &Fp2Elem) -> bool {
        a.re == 0 && a.im == 0
    }

    fn inv(&self, a: &Fp2Elem) -> Result<Fp2Elem> {
        if self.is_zero(a) {
            return Err(Error::Arithmetic("inverse of zero".into()));
        }
        // a * conj(a) = re^2 + im^2 lies in F_p and is nonzero since t^2+1 is irreducible
        let norm = self.addm(self.mulm(a.re, a.re), self.mulm(a.im, a.im));
        let ninv = pow_mod(norm as u64, self.p as u64 - 2, self.p as u64) as u32;
        let c = self.conj(a);
        Ok(Fp2Elem {
            re: self.mulm(c.re, ninv),
            im: self.mulm(c.im, ninv),
        })
    }

    fn format(&self, a: &Fp2Elem) -> String {
        format_parts(self.signed(a.re), self.signed(a.im))
    }

    fn to_json(&self, a: &Fp2Elem) -> Value {
        Value::Array(vec![Value::from(a.re), Value::from(a.im)])
    }

    fn from_json(&self, v: &Value) -> Result<Fp2Elem> {
        let (re, im) = json_int_pair(v)?;
        Ok(self.from_parts(re, im))
    }
}

pub(super) fn json_int_pair(v: &Value) -> Result<(i64, i64)> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("expected [re, im], got {v}")))?;
    let get = |x: &Value| {
        x.as_i64()
            .ok_or_else(|| Error::Parse(format!("expected an integer component, got {x}")))
    };
    Ok((get(&arr[0])?, get(&arr[1])?))
}

pub(super) fn format_parts(re: i64, im: i64) -> String {
    match (re, im) {
        (r, 0) => r.to_string(),
        (0, 1) => "i".into(),
        (0, -1) => "-i".into(),
        (0, m) => format!("{m}i"),
        (r, 1) => format!("{r}+i"),
        (r, -1) => format!("{r}-i"),
        (r, m) if m > 0 => format!("{r}+{m}i"),
        (r, m) => format!("{r}{m}i"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_primes() {
        assert!(Fp2::new(3).is_ok());
        assert!(Fp2::new(7).is_ok());
        assert!(matches!(Fp2::new(5), Err(Error::InvalidRing(m)) if m.contains("splits mod 5")));
        assert!(Fp2::new(2).is_err());
        assert!(Fp2::new(15).is_err());
        assert!(Fp2::new(1).is_err());
    }

    #[test]
    fn gf9_basics() {
        let f = Fp2::new(3).unwrap();
        assert_eq!(f.characteristic(), 3);
        // i^2 = -1 = 2
        assert_eq!(f.mul(&f.i(), &f.i()), f.from_int(2));
        // (1+2i)(1+i) = 1 + 3i + 2i^2 = -1 + 3i = 2 mod 3
        assert_eq!(
            f.mul(&f.from_parts(1, 2), &f.from_parts(1, 1)),
            f.from_int(2)
        );
        // conj(2+i) = 2-i = 2+2i
        assert_eq!(f.conj(&f.from_parts(2, 1)), f.from_parts(2, 2));
        assert_eq!(f.format(&f.from_parts(-1, -2)), "-1+i");
        assert!(f.inv(&f.zero()).is_err());
    }

    fn elem(p: u32) -> impl Strategy<Value = Fp2Elem> {
        (0..p, 0..p).prop_map(|(re, im)| Fp2Elem { re, im })
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involutive_automorphism(
            p in prop::sample::select(vec![3u32, 7, 11, 19, 43, 2147483647]),
            seed in any::<(u64, u64, u64, u64)>(),
        ) {
            let f = Fp2::new(p).unwrap();
            let x = f.from_parts((seed.0 % p as u64) as i64, (seed.1 % p as u64) as i64);
            let y = f.from_parts((seed.2 % p as u64) as i64, (seed.3 % p as u64) as i64);
            prop_assert_eq!(f.conj(&f.conj(&x)), x);
            prop_assert_eq!(f.conj(&f.mul(&x, &y)), f.mul(&f.conj(&x), &f.conj(&y)));
            prop_assert_eq!(f.conj(&f.add(&x, &y)), f.add(&f.conj(&x), &f.conj(&y)));
            // Frobenius: conj(x) = x^p
            prop_assert_eq!(f.conj(&x), f.pow(&x, p as u64));
        }

        #[test]
        fn field_of_order_p_squared(x in elem(7), y in elem(11)) {
            let f7 = Fp2::new(7).unwrap();
            prop_assert_eq!(f7.pow(&x, 49), x);
            let f11 = Fp2::new(11).unwrap();
            prop_assert_eq!(f11.pow(&y, 121), y);
            if !f11.is_zero(&y) {
                prop_assert_eq!(f11.mul(&y, &f11.inv(&y).unwrap()), f11.one());
            }
        }
    }
}
