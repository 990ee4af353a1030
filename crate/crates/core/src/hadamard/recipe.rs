use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{kron_product, paley, sylvester, PaleyKind, SignMatrix};
use crate::error::{Error, Result};

/// A replayable construction recipe.
///
/// Text forms: `sylvester:k`, `paley1:q`, `paley2:q`, `kron:<recipe>,<recipe>`
/// (nested freely, parsed left to right), or a path to a `.had` file.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum HadamardSpec {
    Sylvester(u32),
    Paley1(u64),
    Paley2(u64),
    Kron(Box<HadamardSpec>, Box<HadamardSpec>),
    File(PathBuf),
}

impl HadamardSpec {
    pub fn build(&self, cap: usize) -> Result<SignMatrix> {
        match self {
            HadamardSpec::Sylvester(k) => sylvester(*k, cap),
            HadamardSpec::Paley1(q) => paley(*q, PaleyKind::I, cap),
            HadamardSpec::Paley2(q) => paley(*q, PaleyKind::II, cap),
            HadamardSpec::Kron(a, b) => kron_product(&a.build(cap)?, &b.build(cap)?, cap),
            HadamardSpec::File(path) => {
                let m = SignMatrix::read_file(path)?;
                if m.order() > cap {
                    return Err(Error::OrderCap {
                        order: m.order(),
                        cap,
                    });
                }
                Ok(m)
            }
        }
    }

    /// Order of the matrix the recipe produces, without building it.
    /// `None` for file recipes.
    pub fn order(&self) -> Option<u128> {
        match self {
            HadamardSpec::Sylvester(k) => 1u128.checked_shl(*k),
            HadamardSpec::Paley1(q) => Some(*q as u128 + 1),
            HadamardSpec::Paley2(q) => Some(2 * (*q as u128 + 1)),
            HadamardSpec::Kron(a, b) => a.order()?.checked_mul(b.order()?),
            HadamardSpec::File(_) => None,
        }
    }

    fn parse_generated(s: &str) -> Result<(Self, &str)> {
        fn number<T: FromStr>(s: &str, what: &str) -> Result<(T, usize)> {
            let len = s.bytes().take_while(u8::is_ascii_digit).count();
            let n = s[..len]
                .parse()
                .map_err(|_| Error::Parse(format!("expected a number after {what}")))?;
            Ok((n, len))
        }
        if let Some(rest) = s.strip_prefix("sylvester:") {
            let (k, len) = number(rest, "sylvester:")?;
            return Ok((HadamardSpec::Sylvester(k), &rest[len..]));
        }
        if let Some(rest) = s.strip_prefix("paley1:") {
            let (q, len) = number(rest, "paley1:")?;
            return Ok((HadamardSpec::Paley1(q), &rest[len..]));
        }
        if let Some(rest) = s.strip_prefix("paley2:") {
            let (q, len) = number(rest, "paley2:")?;
            return Ok((HadamardSpec::Paley2(q), &rest[len..]));
        }
        if let Some(rest) = s.strip_prefix("kron:") {
            let (a, rest) = Self::parse_generated(rest)?;
            let rest = rest
                .strip_prefix(',')
                .ok_or_else(|| Error::Parse("kron: expects two comma-separated recipes".into()))?;
            let (b, rest) = Self::parse_generated(rest)?;
            return Ok((HadamardSpec::Kron(Box::new(a), Box::new(b)), rest));
        }
        Err(Error::Parse(format!("unknown recipe {s:?}")))
    }
}

impl FromStr for HadamardSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty recipe".into()));
        }
        let generated = ["sylvester:", "paley1:", "paley2:", "kron:"];
        if generated.iter().any(|p| s.starts_with(p)) {
            let (spec, rest) = Self::parse_generated(s)?;
            if !rest.is_empty() {
                return Err(Error::Parse(format!("trailing input {rest:?} in recipe")));
            }
            return Ok(spec);
        }
        Ok(HadamardSpec::File(PathBuf::from(s)))
    }
}

impl fmt::Display for HadamardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HadamardSpec::Sylvester(k) => write!(f, "sylvester:{k}"),
            HadamardSpec::Paley1(q) => write!(f, "paley1:{q}"),
            HadamardSpec::Paley2(q) => write!(f, "paley2:{q}"),
            HadamardSpec::Kron(a, b) => write!(f, "kron:{a},{b}"),
            HadamardSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl From<HadamardSpec> for String {
    fn from(s: HadamardSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for HadamardSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::check_modular_hadamard;

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "sylvester:3",
            "paley1:19",
            "paley2:17",
            "kron:sylvester:1,paley1:3",
            "kron:kron:sylvester:1,sylvester:1,paley2:5",
            "kron:sylvester:2,kron:paley1:7,sylvester:0",
        ] {
            let spec: HadamardSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(
            "fixtures/a.had".parse::<HadamardSpec>().unwrap(),
            HadamardSpec::File("fixtures/a.had".into())
        );
    }

    #[test]
    fn malformed_recipes() {
        for s in ["sylvester:", "paley1:x", "kron:sylvester:1", "sylvester:2x", "kron:a,b", ""] {
            assert!(s.parse::<HadamardSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn build_and_order() {
        let spec: HadamardSpec = "kron:sylvester:1,paley1:3".parse().unwrap();
        assert_eq!(spec.order(), Some(8));
        let m = spec.build(256).unwrap();
        assert_eq!(m.order(), 8);
        assert!(check_modular_hadamard(&m, 0).unwrap().valid);
        let big: HadamardSpec = "kron:paley1:19,paley1:19".parse().unwrap();
        assert!(matches!(big.build(256), Err(Error::OrderCap { .. })));
    }

    #[test]
    fn serde_uses_text_form() {
        let spec: HadamardSpec = "kron:sylvester:1,paley2:5".parse().unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, "\"kron:sylvester:1,paley2:5\"");
        assert_eq!(serde_json::from_str::<HadamardSpec>(&json).unwrap(), spec);
    }
}
