//! Frequency spec files: a small tagged JSON schema, one object per generator.
//!
//! ```json
//! {"type": "bayart", "J": 10}
//! {"type": "union", "left": {"type": "log_integers", "N": 50}, "right": {"type": "qli_formal", "sizes": [1, 2, 3]}}
//! ```
//!
//! Rationals are written as integers or strings such as `"3/2"`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use freqlab_core::exactreal::Rational;
use freqlab_core::frequency::{self, Frequency};
use serde::de::{
    self, DeserializeSeed, Deserializer, Error as _, IgnoredAny, MapAccess, SeqAccess, Visitor,
};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const DEFAULT_MAX_VALUES: u64 = 5_000_000;

fn default_max_values() -> u64 {
    DEFAULT_MAX_VALUES
}

/// An exact rational written as an integer or a "p/q" string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl FromStr for RationalText {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(RationalText)
    }
}

/// Parse "a", "a/b" or a finite decimal "1.25" exactly.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("expected a rational like \"3/2\", got {s:?}");
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == 0.into() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: num_bigint::BigInt = format!("{i}{f}").parse().map_err(|_| bad())?;
        return Ok(Rational::new(
            digits,
            num_traits::pow(num_bigint::BigInt::from(10), f.len()),
        ));
    }
    s.parse::<num_bigint::BigInt>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalText;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string such as \"3/2\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RationalText, E> {
                Ok(RationalText(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RationalText, E> {
                Ok(RationalText(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<RationalText, E> {
                Err(E::custom(format!("floating-point literal {v} is ambiguous; write the rational as a string such as \"3/2\"")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<RationalText, E> {
                parse_rational(v).map(RationalText).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FrequencySpec {
    LogIntegers {
        #[serde(rename = "N")]
        n: u64,
    },
    Hurwitz {
        alphas: Vec<RationalText>,
        #[serde(rename = "M")]
        m: u64,
        #[serde(rename = "X")]
        cutoff: RationalText,
        max_values: u64,
    },
    Bayart {
        #[serde(rename = "J")]
        j: u32,
        max_values: u64,
    },
    Bourgain {
        p: RationalText,
        #[serde(rename = "J")]
        j: u32,
        /// Falls back to the run seed.
        #[serde(skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        max_values: u64,
    },
    QliFormal {
        sizes: Vec<u64>,
        max_values: u64,
    },
    Union {
        left: Box<FrequencySpec>,
        right: Box<FrequencySpec>,
        disjoint_span: bool,
    },
}

// Per-generator field sets. Deserializing these one level at a time (rather
// than through a tagged enum, which buffers its content) keeps field paths
// in error messages.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LogIntegersFields {
    #[serde(rename = "N")]
    n: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HurwitzFields {
    alphas: Vec<RationalText>,
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "X")]
    cutoff: RationalText,
    #[serde(default = "default_max_values")]
    max_values: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BayartFields {
    #[serde(rename = "J")]
    j: u32,
    #[serde(default = "default_max_values")]
    max_values: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BourgainFields {
    p: RationalText,
    #[serde(rename = "J")]
    j: u32,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default = "default_max_values")]
    max_values: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QliFormalFields {
    sizes: Vec<u64>,
    #[serde(default = "default_max_values")]
    max_values: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnionFields {
    left: Value,
    right: Value,
    #[serde(default)]
    disjoint_span: bool,
}

const TYPES: &[&str] = &[
    "log_integers",
    "hurwitz",
    "bayart",
    "bourgain",
    "qli_formal",
    "union",
];

/// A schema violation at a field path.
#[derive(Debug)]
struct FieldError {
    path: Vec<String>,
    msg: String,
}

fn fields<T: de::DeserializeOwned>(v: Value, path: &[String]) -> Result<T, FieldError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let mut p = path.to_vec();
        p.extend(e.path().iter().filter_map(|seg| match seg {
            serde_path_to_error::Segment::Seq { index } => Some(index.to_string()),
            serde_path_to_error::Segment::Map { key } => Some(key.clone()),
            serde_path_to_error::Segment::Enum { variant } => Some(variant.clone()),
            serde_path_to_error::Segment::Unknown => None,
        }));
        FieldError {
            path: p,
            msg: e.into_inner().to_string(),
        }
    })
}

fn spec_from_value(v: Value, path: &mut Vec<String>) -> Result<FrequencySpec, FieldError> {
    let err = |path: &[String], msg: String| FieldError {
        path: path.to_vec(),
        msg,
    };
    let Value::Object(mut obj) = v else {
        return Err(err(
            path,
            "expected a generator object with a \"type\" field".into(),
        ));
    };
    let tag = match obj.remove("type") {
        Some(Value::String(t)) => t,
        Some(_) => {
            path.push("type".into());
            return Err(err(path, "expected a string".into()));
        }
        None => return Err(err(path, "missing field `type`".into())),
    };
    let rest = Value::Object(obj);
    Ok(match tag.as_str() {
        "log_integers" => {
            let f: LogIntegersFields = fields(rest, path)?;
            FrequencySpec::LogIntegers { n: f.n }
        }
        "hurwitz" => {
            let f: HurwitzFields = fields(rest, path)?;
            FrequencySpec::Hurwitz {
                alphas: f.alphas,
                m: f.m,
                cutoff: f.cutoff,
                max_values: f.max_values,
            }
        }
        "bayart" => {
            let f: BayartFields = fields(rest, path)?;
            FrequencySpec::Bayart {
                j: f.j,
                max_values: f.max_values,
            }
        }
        "bourgain" => {
            let f: BourgainFields = fields(rest, path)?;
            FrequencySpec::Bourgain {
                p: f.p,
                j: f.j,
                seed: f.seed,
                max_values: f.max_values,
            }
        }
        "qli_formal" => {
            let f: QliFormalFields = fields(rest, path)?;
            FrequencySpec::QliFormal {
                sizes: f.sizes,
                max_values: f.max_values,
            }
        }
        "union" => {
            let f: UnionFields = fields(rest, path)?;
            path.push("left".into());
            let left = spec_from_value(f.left, path)?;
            path.pop();
            path.push("right".into());
            let right = spec_from_value(f.right, path)?;
            path.pop();
            FrequencySpec::Union {
                left: Box::new(left),
                right: Box::new(right),
                disjoint_span: f.disjoint_span,
            }
        }
        other => {
            path.push("type".into());
            return Err(err(
                path,
                format!(
                    "unknown generator {other:?}, expected one of {}",
                    TYPES.join(", ")
                ),
            ));
        }
    })
}

fn dotted(path: &[String]) -> String {
    let mut out = String::new();
    for seg in path {
        if seg.bytes().all(|b| b.is_ascii_digit()) {
            out.push_str(&format!("[{seg}]"));
        } else {
            if !out.is_empty() {
                out.push('.');
            }
            out.push_str(seg);
        }
    }
    out
}

impl<'de> Deserialize<'de> for FrequencySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        spec_from_value(v, &mut Vec::new()).map_err(|e| {
            if e.path.is_empty() {
                D::Error::custom(e.msg)
            } else {
                D::Error::custom(format!("at field `{}`: {}", dotted(&e.path), e.msg))
            }
        })
    }
}

/// Walks the JSON text down `path` and fails on arrival, so that serde_json
/// stamps the failure with the line and column of the target.
struct Locate<'a>(&'a [String]);

impl<'de> DeserializeSeed<'de> for Locate<'_> {
    type Value = ();

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<(), D::Error> {
        if self.0.is_empty() {
            return Err(D::Error::custom("here"));
        }
        d.deserialize_any(self)
    }
}

impl<'de> Visitor<'de> for Locate<'_> {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a container")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<(), A::Error> {
        while let Some(k) = map.next_key::<String>()? {
            if k == self.0[0] {
                map.next_value_seed(Locate(&self.0[1..]))?;
            } else {
                map.next_value::<IgnoredAny>()?;
            }
        }
        Ok(())
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<(), A::Error> {
        let mut i = 0usize;
        loop {
            let got = if self.0[0] == i.to_string() {
                seq.next_element_seed(Locate(&self.0[1..]))?
            } else {
                seq.next_element::<IgnoredAny>()?.map(|_| ())
            };
            if got.is_none() {
                return Ok(());
            }
            i += 1;
        }
    }

    fn visit_bool<E: de::Error>(self, _: bool) -> Result<(), E> {
        Ok(())
    }
    fn visit_i64<E: de::Error>(self, _: i64) -> Result<(), E> {
        Ok(())
    }
    fn visit_u64<E: de::Error>(self, _: u64) -> Result<(), E> {
        Ok(())
    }
    fn visit_f64<E: de::Error>(self, _: f64) -> Result<(), E> {
        Ok(())
    }
    fn visit_str<E: de::Error>(self, _: &str) -> Result<(), E> {
        Ok(())
    }
    fn visit_unit<E: de::Error>(self) -> Result<(), E> {
        Ok(())
    }
}

/// Line and column of the value at `path`, or of its closest existing parent.
fn locate(text: &str, path: &[String]) -> (usize, usize) {
    for n in (0..=path.len()).rev() {
        let mut de = serde_json::Deserializer::from_str(text);
        if let Err(e) = Locate(&path[..n]).deserialize(&mut de) {
            return (e.line(), e.column());
        }
    }
    (1, 1)
}

impl FrequencySpec {
    /// Fill in defaults that depend on the run (currently only the seed),
    /// so the stored spec alone reproduces the frequency.
    pub fn resolved(&self, seed: u64) -> FrequencySpec {
        match self {
            FrequencySpec::Bourgain {
                p,
                j,
                seed: None,
                max_values,
            } => FrequencySpec::Bourgain {
                p: p.clone(),
                j: *j,
                seed: Some(seed),
                max_values: *max_values,
            },
            FrequencySpec::Union {
                left,
                right,
                disjoint_span,
            } => FrequencySpec::Union {
                left: Box::new(left.resolved(seed)),
                right: Box::new(right.resolved(seed)),
                disjoint_span: *disjoint_span,
            },
            other => other.clone(),
        }
    }

    pub fn generate(&self, seed: u64) -> CliResult<Frequency> {
        Ok(match self {
            FrequencySpec::LogIntegers { n } => frequency::gen_log_integers(*n)?,
            FrequencySpec::Hurwitz {
                alphas,
                m,
                cutoff,
                max_values,
            } => {
                let a: Vec<Rational> = alphas.iter().map(|r| r.0.clone()).collect();
                frequency::gen_hurwitz(&a, *m, &cutoff.0, *max_values)?
            }
            FrequencySpec::Bayart { j, max_values } => frequency::gen_bayart(*j, *max_values)?,
            FrequencySpec::Bourgain {
                p,
                j,
                seed: s,
                max_values,
            } => frequency::gen_bourgain(&p.0, *j, s.unwrap_or(seed), *max_values)?,
            FrequencySpec::QliFormal { sizes, max_values } => {
                frequency::gen_qli_formal(sizes, *max_values)?
            }
            FrequencySpec::Union {
                left,
                right,
                disjoint_span,
            } => frequency::union(
                &left.generate(seed)?,
                &right.generate(seed)?,
                *disjoint_span,
            )?,
        })
    }
}

/// Parse a spec, reporting the offending field path and line/column.
pub fn parse_spec(text: &str, origin: &str) -> CliResult<FrequencySpec> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Schema(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
    spec_from_value(v, &mut Vec::new()).map_err(|e| {
        let (line, col) = locate(text, &e.path);
        let field = if e.path.is_empty() {
            String::new()
        } else {
            format!(" at field `{}`", dotted(&e.path))
        };
        CliError::Schema(format!(
            "{origin}:{line}:{col}: schema error{field}: {}",
            e.msg
        ))
    })
}

pub fn read_spec(path: &Path) -> CliResult<FrequencySpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spec(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_generator() {
        let s = parse_spec(r#"{"type":"bayart","J":10}"#, "x").unwrap();
        assert_eq!(
            s,
            FrequencySpec::Bayart {
                j: 10,
                max_values: DEFAULT_MAX_VALUES
            }
        );
        let s = parse_spec(
            r#"{"type":"hurwitz","alphas":["1/2",1],"M":3,"X":"5/2"}"#,
            "x",
        )
        .unwrap();
        assert!(matches!(s, FrequencySpec::Hurwitz { m: 3, .. }));
        let s = parse_spec(r#"{"type":"union","left":{"type":"log_integers","N":5},"right":{"type":"qli_formal","sizes":[1,2]}}"#, "x").unwrap();
        assert!(matches!(
            s,
            FrequencySpec::Union {
                disjoint_span: false,
                ..
            }
        ));
    }

    #[test]
    fn reports_field_and_line() {
        let e = parse_spec("{\"type\":\"union\",\n \"left\":{\"type\":\"log_integers\",\"N\":-1},\"right\":{\"type\":\"bayart\",\"J\":2}}", "spec.json").unwrap_err();
        let msg = e.to_string();
        assert!(msg.starts_with("spec.json:2:"), "{msg}");
        assert!(msg.contains("left.N"), "{msg}");
        let e = parse_spec(r#"{"type":"bayart","J":3,"K":1}"#, "s")
            .unwrap_err()
            .to_string();
        assert!(e.contains("unknown field"), "{e}");
        let e = parse_spec(r#"{"type":"bourgain","p":2.5,"J":3}"#, "s")
            .unwrap_err()
            .to_string();
        assert!(e.contains("field `p`"), "{e}");
        assert!(parse_spec(r#"{"type":"nope"}"#, "s").is_err());
        let e = parse_spec(
            "{\"type\":\"hurwitz\",\"alphas\":[1,\n\"x\"],\"M\":1,\"X\":2}",
            "h",
        )
        .unwrap_err()
        .to_string();
        assert!(e.starts_with("h:2:") && e.contains("alphas[1]"), "{e}");
        let e = parse_spec("{\"type\": ", "t").unwrap_err().to_string();
        assert!(e.starts_with("t:1:"), "{e}");
    }

    #[test]
    fn rational_text() {
        assert_eq!(
            parse_rational("3/2").unwrap(),
            Rational::new(3.into(), 2.into())
        );
        assert_eq!(
            parse_rational("1.25").unwrap(),
            Rational::new(5.into(), 4.into())
        );
        assert_eq!(
            parse_rational("-7").unwrap(),
            Rational::from_integer((-7).into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
