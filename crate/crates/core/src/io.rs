//! Hamiltonian interchange JSON.
//!
//! ```json
//! {
//!   "n_qubits": 2,
//!   "reference": "10",
//!   "constant": -0.5,
//!   "terms": [{"pauli": "ZI", "coeff": 0.25}, {"pauli": "XX", "coeff": -0.125}],
//!   "metadata": {"anything": "free-form"}
//! }
//! ```
//!
//! Character `q` of `pauli` and `reference` refers to qubit `q`. On output,
//! terms are sorted by `(x_bits, z_bits)` and every real number is written
//! with 17 significant digits. A coefficient may be given on input as a
//! `[re, im]` pair; a nonzero imaginary part is rejected.

use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hamiltonian::{PauliHamiltonian, ReferenceState};
use crate::pauli::PauliProduct;

/// A Hamiltonian together with its reference state and metadata.
#[derive(Clone, Debug)]
pub struct HamiltonianFile {
    pub hamiltonian: PauliHamiltonian,
    pub reference: ReferenceState,
    pub metadata: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    n_qubits: usize,
    reference: String,
    terms: Vec<RawTerm>,
    #[serde(default)]
    constant: Option<f64>,
    #[serde(default)]
    metadata: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    pauli: String,
    coeff: Value,
}

fn real_coefficient(label: &str, v: &Value) -> Result<f64> {
    let bad = || Error::Format(format!("term {label}: coefficient must be a number or [re, im]"));
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(bad),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(bad)?;
            let im = pair[1].as_f64().ok_or_else(bad)?;
            if im != 0.0 {
                return Err(Error::ComplexCoefficient {
                    label: label.to_string(),
                });
            }
            Ok(re)
        }
        _ => Err(bad()),
    }
}

/// Formats with 17 significant digits.
pub fn format_real(value: f64) -> String {
    if value == 0.0 {
        return "0.0".to_string();
    }
    format!("{value:.16e}")
}

impl HamiltonianFile {
    pub fn new(hamiltonian: PauliHamiltonian, reference: ReferenceState) -> Self {
        Self {
            hamiltonian,
            reference,
            metadata: None,
        }
    }

    pub fn from_json_str(text: &str, prune_eps: f64) -> Result<Self> {
        let raw: RawFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if raw.n_qubits == 0 {
            return Err(Error::Format("n_qubits must be positive".into()));
        }
        let reference = ReferenceState::parse(&raw.reference)?;
        if reference.n_qubits() != raw.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: raw.n_qubits,
                found: reference.n_qubits(),
            });
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in &raw.terms {
            let p: PauliProduct = t.pauli.parse()?;
            if p.n_qubits() != raw.n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: raw.n_qubits,
                    found: p.n_qubits(),
                });
            }
            terms.push((p, real_coefficient(&t.pauli, &t.coeff)?));
        }
        let hamiltonian = PauliHamiltonian::from_terms(
            raw.n_qubits,
            raw.constant.unwrap_or(0.0),
            terms,
            prune_eps,
        )?;
        Ok(Self {
            hamiltonian,
            reference,
            metadata: raw.metadata,
        })
    }

    pub fn read(path: &std::path::Path, prune_eps: f64) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text, prune_eps)
    }

    pub fn to_json_string(&self) -> String {
        let h = &self.hamiltonian;
        let mut out = String::with_capacity(64 + h.len() * (h.n_qubits() + 48));
        out.push_str("{\n");
        let _ = writeln!(out, "  \"n_qubits\": {},", h.n_qubits());
        let _ = writeln!(out, "  \"reference\": \"{}\",", self.reference.bits());
        let _ = writeln!(out, "  \"constant\": {},", format_real(h.constant()));
        if let Some(meta) = &self.metadata {
            let _ = writeln!(
                out,
                "  \"metadata\": {},",
                serde_json::to_string(meta).expect("metadata is valid JSON")
            );
        }
        out.push_str("  \"terms\": [");
        for (i, (p, c)) in h.sorted_terms().into_iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            let _ = write!(out, "    {{\"pauli\": \"{p}\", \"coeff\": {}}}", format_real(c));
        }
        out.push_str(if h.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        out
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string())
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::DEFAULT_PRUNE_EPS;

    const DOC: &str = r#"{
        "n_qubits": 2, "reference": "10", "constant": -0.5,
        "terms": [{"pauli": "XX", "coeff": -0.125}, {"pauli": "ZI", "coeff": [0.25, 0.0]},
                  {"pauli": "II", "coeff": 0.5}],
        "metadata": {"name": "toy"}
    }"#;

    #[test]
    fn reads_and_writes() {
        let f = HamiltonianFile::from_json_str(DOC, DEFAULT_PRUNE_EPS).unwrap();
        assert_eq!(f.hamiltonian.len(), 2);
        assert_eq!(f.hamiltonian.constant(), 0.0);
        assert_eq!(f.reference.bits().to_string(), "10");
        let text = f.to_json_string();
        assert!(text.contains("\"coeff\": 2.5000000000000000e-1"));
        let back = HamiltonianFile::from_json_str(&text, DEFAULT_PRUNE_EPS).unwrap();
        assert_eq!(back.hamiltonian, f.hamiltonian);
        assert_eq!(back.metadata, f.metadata);
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, -1.0 / 3.0, 6.02214076e23, 1e-300, f64::MIN_POSITIVE] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn rejects_complex_and_mismatched_input() {
        let complex = r#"{"n_qubits":1,"reference":"0","terms":[{"pauli":"X","coeff":[1.0,0.5]}]}"#;
        assert!(matches!(
            HamiltonianFile::from_json_str(complex, 1e-8),
            Err(Error::ComplexCoefficient { .. })
        ));
        let short = r#"{"n_qubits":2,"reference":"0","terms":[]}"#;
        assert!(HamiltonianFile::from_json_str(short, 1e-8).is_err());
        let wrong = r#"{"n_qubits":1,"reference":"0","terms":[{"pauli":"XX","coeff":1}]}"#;
        assert!(HamiltonianFile::from_json_str(wrong, 1e-8).is_err());
        let unknown = r#"{"n_qubits":1,"reference":"0","terms":[],"extra":1}"#;
        assert!(HamiltonianFile::from_json_str(unknown, 1e-8).is_err());
    }
}
