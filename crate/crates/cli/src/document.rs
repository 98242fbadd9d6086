//! JSON interchange: state and ensemble documents, scalar encodings.
//!
//! Exact amplitudes travel as `"p/q"` strings, float amplitudes as numbers.
//! A document never mixes the two.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use onion_core::scalar::ratio_string;
use onion_core::{Exact, Float, Radical, Scalar, StateTensor};

use crate::failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

/// A parsed state in the field its document (or `--mode`) asks for.
#[derive(Clone, Debug)]
pub enum AnyState {
    Exact(StateTensor<Exact>),
    Float(StateTensor<Float>),
}

impl AnyState {
    pub fn mode(&self) -> Mode {
        match self {
            AnyState::Exact(_) => Mode::Exact,
            AnyState::Float(_) => Mode::Float,
        }
    }

    pub fn convert(self, mode: Option<Mode>) -> AnyState {
        match (self, mode) {
            (AnyState::Exact(t), Some(Mode::Float)) => AnyState::Float(t.to_float()),
            (AnyState::Float(t), Some(Mode::Exact)) => {
                AnyState::Exact(t.map(|v| Exact::from_c64(*v)).expect("same shape"))
            }
            (s, _) => s,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    format: Vec<usize>,
    amplitudes: Vec<[Value; 2]>,
    #[serde(default)]
    mode: Option<String>,
    /// Written by `random`; ignored on input.
    #[serde(default)]
    #[allow(dead_code)]
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMember {
    weight: Value,
    state: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnsemble {
    members: Vec<RawMember>,
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure::validation("MalformedDocument", msg)
}

fn parse_ratio(s: &str) -> Result<BigRational, Failure> {
    let s = s.trim();
    BigRational::from_str(s)
        .or_else(|_| BigInt::from_str(s).map(BigRational::from_integer))
        .map_err(|_| malformed(format!("not a rational \"p/q\": {s:?}")))
}

enum Encoding {
    Exact,
    Float,
}

fn encoding_of(v: &Value) -> Result<Encoding, Failure> {
    match v {
        Value::String(_) => Ok(Encoding::Exact),
        Value::Number(_) => Ok(Encoding::Float),
        other => Err(malformed(format!("amplitude part must be a number or \"p/q\" string, got {other}"))),
    }
}

fn parse_exact(pair: &[Value; 2]) -> Result<Exact, Failure> {
    let part = |v: &Value| match v {
        Value::String(s) => parse_ratio(s),
        _ => Err(mixed()),
    };
    Ok(Exact::new(part(&pair[0])?, part(&pair[1])?))
}

fn parse_float(pair: &[Value; 2]) -> Result<Float, Failure> {
    let part = |v: &Value| match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| malformed("number out of range")),
        _ => Err(mixed()),
    };
    Ok(Float::new(part(&pair[0])?, part(&pair[1])?))
}

fn mixed() -> Failure {
    Failure::validation("MixedEncoding", "amplitudes mix number and \"p/q\" string encodings")
}

pub fn parse_state_value(v: Value) -> Result<AnyState, Failure> {
    let raw: RawState = serde_json::from_value(v).map_err(|e| malformed(e.to_string()))?;
    let encoding = match raw.amplitudes.first() {
        Some(pair) => encoding_of(&pair[0])?,
        None => Encoding::Float,
    };
    match (raw.mode.as_deref(), &encoding) {
        (None, _) | (Some("exact"), Encoding::Exact) | (Some("float"), Encoding::Float) => {}
        (Some("exact" | "float"), _) => return Err(mixed()),
        (Some(m), _) => return Err(malformed(format!("unknown mode {m:?}"))),
    }
    let state = match encoding {
        Encoding::Exact => {
            let amps = raw.amplitudes.iter().map(parse_exact).collect::<Result<Vec<_>, _>>()?;
            AnyState::Exact(StateTensor::new(raw.format, amps)?)
        }
        Encoding::Float => {
            let amps = raw.amplitudes.iter().map(parse_float).collect::<Result<Vec<_>, _>>()?;
            AnyState::Float(StateTensor::new(raw.format, amps)?)
        }
    };
    Ok(state)
}

pub fn parse_state(text: &str) -> Result<AnyState, Failure> {
    let v: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    parse_state_value(v)
}

/// Members of an ensemble document, all in one field.
pub enum AnyEnsemble {
    Exact(Vec<(Exact, StateTensor<Exact>)>),
    Float(Vec<(Float, StateTensor<Float>)>),
}

pub fn parse_ensemble(text: &str, mode: Option<Mode>) -> Result<AnyEnsemble, Failure> {
    let raw: RawEnsemble = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let mut states = Vec::new();
    for m in raw.members {
        states.push((m.weight, parse_state_value(m.state)?));
    }
    let mode = mode.or_else(|| states.first().map(|(_, s)| s.mode())).unwrap_or(Mode::Exact);
    let weight = |w: &Value| -> Result<Exact, Failure> {
        match w {
            Value::String(s) => Ok(Exact::new(parse_ratio(s)?, BigRational::zero())),
            Value::Number(n) => Ok(Exact::from_c64(Float::new(
                n.as_f64().ok_or_else(|| malformed("weight out of range"))?,
                0.0,
            ))),
            other => Err(malformed(format!("weight must be a number or \"p/q\" string, got {other}"))),
        }
    };
    match mode {
        Mode::Exact => {
            let mut out = Vec::new();
            for (w, s) in states {
                let AnyState::Exact(t) = s.convert(Some(Mode::Exact)) else { unreachable!() };
                out.push((weight(&w)?, t));
            }
            Ok(AnyEnsemble::Exact(out))
        }
        Mode::Float => {
            let mut out = Vec::new();
            for (w, s) in states {
                let AnyState::Float(t) = s.convert(Some(Mode::Float)) else { unreachable!() };
                out.push((weight(&w)?.to_c64(), t));
            }
            Ok(AnyEnsemble::Float(out))
        }
    }
}

/// JSON encoding of scalars: `"p/q"` strings for exact values, numbers for
/// floats. Real values are a single entry, complex ones a `[re, im]` pair.
pub trait Encode {
    fn pair(&self) -> [Value; 2];
    fn real_part_only(&self) -> bool;

    fn encode(&self) -> Value {
        let [re, im] = self.pair();
        if self.real_part_only() {
            re
        } else {
            json!([re, im])
        }
    }
}

impl Encode for Exact {
    fn pair(&self) -> [Value; 2] {
        [json!(ratio_string(&self.re)), json!(ratio_string(&self.im))]
    }

    fn real_part_only(&self) -> bool {
        self.im.is_zero()
    }
}

impl Encode for Float {
    fn pair(&self) -> [Value; 2] {
        [json!(self.re), json!(self.im)]
    }

    fn real_part_only(&self) -> bool {
        self.im == 0.0
    }
}

impl Encode for Radical {
    fn pair(&self) -> [Value; 2] {
        if self.is_rational() {
            self.rational.pair()
        } else {
            [json!(self.render()), json!("0/1")]
        }
    }

    fn real_part_only(&self) -> bool {
        !self.is_rational() || self.rational.real_part_only()
    }
}

pub fn state_document<S: Scalar + Encode>(t: &StateTensor<S>) -> Value {
    let mode = if S::is_exact() { "exact" } else { "float" };
    json!({
        "format": t.format(),
        "amplitudes": t.amplitudes().iter().map(|a| Value::from(a.pair().to_vec())).collect::<Vec<_>>(),
        "mode": mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let text = r#"{"format":[2,2],"amplitudes":[["1/2","0/1"],["0","0"],["0","0"],["-3/4","1"]],"mode":"exact"}"#;
        let AnyState::Exact(t) = parse_state(text).unwrap() else { panic!("exact") };
        let back = state_document(&t);
        let AnyState::Exact(u) = parse_state_value(back).unwrap() else { panic!("exact") };
        assert_eq!(t, u);
    }

    #[test]
    fn float_round_trip_is_bit_stable() {
        let text = r#"{"format":[2,2],"amplitudes":[[0.1,-0.3],[0.0,0.0],[1e-17,2.5],[1,0]]}"#;
        let AnyState::Float(t) = parse_state(text).unwrap() else { panic!("float") };
        let s1 = state_document(&t).to_string();
        let AnyState::Float(u) = parse_state(&s1).unwrap() else { panic!("float") };
        assert_eq!(s1, state_document(&u).to_string());
    }

    #[test]
    fn rejects_bad_documents() {
        let kind = |text: &str| parse_state(text).unwrap_err().kind;
        assert_eq!(kind(r#"{"format":[2,2],"amplitudes":[["1","0"],[1,0],["0","0"],["0","0"]]}"#), "MixedEncoding");
        assert_eq!(kind(r#"{"format":[2,2],"amplitudes":[["1",0],["0","0"],["0","0"],["0","0"]]}"#), "MixedEncoding");
        assert_eq!(kind(r#"{"format":[2,2],"amplitudes":[[1,0]],"mode":"exact"}"#), "MixedEncoding");
        assert_eq!(kind(r#"{"format":[2,2],"amplitudes":[[1,0]]}"#), "FormatMismatch");
        assert_eq!(kind(r#"{"format":[2,2],"amplitudes":[["x","0"]]}"#), "MalformedDocument");
        assert_eq!(kind(r#"{"format":[2,2]"#), "MalformedDocument");
        assert_eq!(kind(r#"[1,2]"#), "MalformedDocument");
        assert_eq!(kind(r#"{"format":[2,2],"amplitudes":[[0,0],[0,0],[0,0],[0,0]]}"#), "ZeroState");
    }

    #[test]
    fn scalar_encodings() {
        assert_eq!(Exact::from_i64(1).encode(), json!("1/1"));
        assert_eq!(onion_core::scalar::gauss(0, -2).encode(), json!(["0/1", "-2/1"]));
        assert_eq!(Float::new(0.5, 0.0).encode(), json!(0.5));
        assert_eq!(Float::new(0.5, 1.0).encode(), json!([0.5, 1.0]));
    }
}
