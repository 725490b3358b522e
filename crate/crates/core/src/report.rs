//! Structured results of property checks.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::opnorm::NormEnclosure;
use crate::spaces::{Field, Scalar, SpaceDesc};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::Undecided => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Coordinates serialize as plain numbers when real and `[re, im]` otherwise.
mod scalar_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::spaces::Scalar;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Complex([f64; 2]),
    }

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<Repr> =
            v.iter().map(|z| if z.im == 0.0 { Repr::Real(z.re) } else { Repr::Complex([z.re, z.im]) }).collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        let reprs = Vec::<Repr>::deserialize(d)?;
        Ok(reprs
            .into_iter()
            .map(|r| match r {
                Repr::Real(x) => Scalar::new(x, 0.0),
                Repr::Complex([x, y]) => Scalar::new(x, y),
            })
            .collect())
    }
}

/// A serialized operator `functional ⊗ vector` with the numbers it produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "scalar_list")]
    pub functional: Vec<Scalar>,
    #[serde(with = "scalar_list")]
    pub vector: Vec<Scalar>,
    pub values: BTreeMap<String, f64>,
}

impl Witness {
    pub fn new(functional: Vec<Scalar>, vector: Vec<Scalar>) -> Self {
        Self { functional, vector, values: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), finite(v));
        self
    }

    pub fn with_enclosure(self, prefix: &str, e: &NormEnclosure) -> Self {
        self.with(&format!("{prefix}_lo"), e.lo).with(&format!("{prefix}_hi"), e.hi)
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}

/// JSON has no infinities; clamp them to the largest finite value.
fn finite(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(f64::MIN, f64::MAX)
    }
}

/// Result of one property check. Field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub space: String,
    pub field: Field,
    pub params: BTreeMap<String, serde_json::Value>,
    pub verdict: Verdict,
    pub max_violation: f64,
    pub witnesses: Vec<Witness>,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: u64,
    pub version: String,
}

impl CheckReport {
    pub fn param_str(&self, key: &str) -> Option<&str> {
        self.params.get(key).and_then(|v| v.as_str())
    }

    pub fn param_f64(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(|v| v.as_f64())
    }

    /// Copy with the timing field cleared, for determinism comparisons.
    pub fn without_timing(&self) -> CheckReport {
        CheckReport { elapsed_ms: 0, ..self.clone() }
    }
}

/// Accumulates parameters while a check runs.
pub(crate) struct ReportBuilder {
    check: String,
    space: String,
    field: Field,
    params: BTreeMap<String, serde_json::Value>,
    seed: u64,
    tolerance: f64,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(check: &str, space: &SpaceDesc, seed: u64, tolerance: f64) -> Self {
        Self::raw(check, &space.dsl(), space.field(), seed, tolerance)
    }

    pub fn raw(check: &str, space: &str, field: Field, seed: u64, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            space: space.to_string(),
            field,
            params: BTreeMap::new(),
            seed,
            tolerance,
            start: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<serde_json::Value>) -> &mut Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn scalar(&mut self, key: &str, z: Scalar) -> &mut Self {
        self.param(key, crate::scalar::format_scalar(z))
    }

    pub fn finish(self, verdict: Verdict, max_violation: f64, witnesses: Vec<Witness>, samples: usize) -> CheckReport {
        CheckReport {
            check: self.check,
            space: self.space,
            field: self.field,
            params: self.params,
            verdict,
            max_violation: finite(max_violation),
            witnesses,
            samples: samples as u64,
            seed: self.seed,
            tolerance: self.tolerance,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
            version: VERSION.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CheckReport {
        let s = SpaceDesc::linf(2, Field::Complex).unwrap();
        let mut b = ReportBuilder::new("daugavet", &s, 42, 1e-9);
        b.param("scope", "probe family").scalar("omega", Scalar::new(0.0, 1.0));
        let w = Witness::new(
            vec![Scalar::new(-1.0, 0.0), Scalar::new(0.0, 0.5)],
            vec![Scalar::new(1.0, 0.0), Scalar::default()],
        )
        .with("violation", 1.0)
        .with("inf", f64::INFINITY);
        b.finish(Verdict::Fails, 1.0, vec![w], 10)
    }

    #[test]
    fn json_round_trip_and_key_order() {
        let r = sample();
        let text = serde_json::to_string(&r).unwrap();
        let keys = [
            "check",
            "space",
            "field",
            "params",
            "verdict",
            "max_violation",
            "witnesses",
            "samples",
            "seed",
            "tolerance",
            "elapsed_ms",
            "version",
        ];
        let mut last = 0;
        for k in keys {
            let pos = text.find(&format!("\"{k}\"")).unwrap();
            assert!(pos >= last, "{k}");
            last = pos;
        }
        assert!(text.contains("\"functional\":[-1.0,[0.0,0.5]]"), "{text}");
        let back: CheckReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn empty_witness_list() {
        let s = SpaceDesc::l2(2, Field::Real).unwrap();
        let r = ReportBuilder::new("omega", &s, 1, 1e-9).finish(Verdict::Holds, 0.0, vec![], 0);
        assert!(serde_json::to_string(&r).unwrap().contains("\"witnesses\":[]"));
    }
}
