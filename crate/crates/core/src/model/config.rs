//! Model files: a lattice, a decay profile, interaction terms and an
//! observable, as JSON or TOML.
//!
//! ```json
//! {
//!   "lattice": {"type": "chain", "length": 6, "boundary": "open"},
//!   "decay": {"b": 1.0, "p": 0.5},
//!   "terms": [{"sites": [0, 1], "pauli": "ZZ", "coeff": -1.0}],
//!   "observable": {"sites": [3], "pauli": "Z", "coeff": 1.0}
//! }
//! ```
//!
//! Entries with the same site set form one term `Phi(X)`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use super::decay::DecayFunction;
use super::interaction::{Interaction, Term};
use super::lattice::{Boundary, LatticeGraph};
use super::pauli::{PauliString, PauliTerm};
use crate::dense::DenseOperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeSpec {
    #[serde(rename = "type")]
    kind: String,
    length: usize,
    #[serde(default = "default_boundary")]
    boundary: String,
}

fn default_boundary() -> String {
    "open".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecaySpec {
    #[serde(default = "default_b")]
    b: f64,
    #[serde(default = "default_p")]
    p: f64,
}

fn default_b() -> f64 {
    DecayFunction::default().b()
}

fn default_p() -> f64 {
    DecayFunction::default().p()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct StringSpec {
    sites: Vec<usize>,
    pauli: String,
    coeff: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSpec {
    lattice: LatticeSpec,
    decay: Option<DecaySpec>,
    terms: Vec<StringSpec>,
    observable: Option<StringSpec>,
}

/// A parsed model.
#[derive(Debug, Clone)]
pub struct Model {
    pub graph: LatticeGraph,
    pub decay: DecayFunction,
    pub interaction: Interaction,
    pub observable: Option<PauliTerm>,
}

impl Model {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: ModelSpec =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_spec(spec)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: ModelSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_spec(spec)
    }

    /// Reads a `.toml` file as TOML and anything else as JSON.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Self::from_toml_str(&text),
            _ => Self::from_json_str(&text),
        }
    }

    fn from_spec(spec: ModelSpec) -> Result<Self> {
        if spec.lattice.kind != "chain" {
            return Err(Error::Config(format!(
                "unsupported lattice type {:?}, expected \"chain\"",
                spec.lattice.kind
            )));
        }
        let boundary = match spec.lattice.boundary.as_str() {
            "open" => Boundary::Open,
            "periodic" => Boundary::Periodic,
            other => return Err(Error::Config(format!("unknown boundary {other:?}"))),
        };
        let graph = LatticeGraph::chain(spec.lattice.length, boundary)?;
        let decay = match spec.decay {
            Some(d) => DecayFunction::new(d.b, d.p)?,
            None => DecayFunction::default(),
        };
        let n = graph.num_sites();
        let mut grouped: BTreeMap<BTreeSet<usize>, Vec<PauliTerm>> = BTreeMap::new();
        for entry in &spec.terms {
            let p = parse_string(entry, n)?;
            if p.string.is_identity() {
                return Err(Error::Config(format!(
                    "term on {:?} is the identity",
                    entry.sites
                )));
            }
            grouped.entry(p.string.support()).or_default().push(p);
        }
        let interaction = Interaction::new(
            grouped
                .into_values()
                .map(Term::new)
                .collect::<Result<Vec<_>>>()?,
        );
        let observable = spec
            .observable
            .as_ref()
            .map(|o| parse_string(o, n))
            .transpose()?;
        Ok(Self {
            graph,
            decay,
            interaction,
            observable,
        })
    }

    /// The observable as a dense operator on `region`.
    pub fn observable_on(&self, region: &BTreeSet<usize>) -> Result<DenseOperator> {
        let obs = self
            .observable
            .as_ref()
            .ok_or_else(|| Error::Config("model has no observable".into()))?;
        let sites: Vec<usize> = region.iter().copied().collect();
        let mut op = DenseOperator::zeros(sites.clone())?;
        obs.string.add_to(op.mat_mut(), obs.coeff, &sites)?;
        Ok(op)
    }
}

fn parse_string(spec: &StringSpec, n: usize) -> Result<PauliTerm> {
    if let Some(&s) = spec.sites.iter().find(|&&s| s >= n) {
        return Err(Error::Config(format!(
            "site {s} outside a lattice of {n} sites"
        )));
    }
    if !spec.coeff.is_finite() {
        return Err(Error::Config(format!(
            "non-finite coefficient on {:?}",
            spec.sites
        )));
    }
    let string =
        PauliString::parse(&spec.sites, &spec.pauli).map_err(|e| Error::Config(e.to_string()))?;
    Ok(PauliTerm::new(spec.coeff, string))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TFIM3: &str = r#"{
        "lattice": {"type": "chain", "length": 3, "boundary": "open"},
        "terms": [
            {"sites": [0, 1], "pauli": "ZZ", "coeff": -1.0},
            {"sites": [1, 2], "pauli": "ZZ", "coeff": -1.0},
            {"sites": [0, 1], "pauli": "XX", "coeff": 0.5},
            {"sites": [0], "pauli": "X", "coeff": -1.05}
        ],
        "observable": {"sites": [1], "pauli": "Z", "coeff": 1.0}
    }"#;

    #[test]
    fn parses_and_groups() {
        let m = Model::from_json_str(TFIM3).unwrap();
        assert_eq!(m.graph.num_sites(), 3);
        assert_eq!(m.decay, DecayFunction::default());
        assert_eq!(m.interaction.len(), 3);
        let pair = m
            .interaction
            .terms()
            .iter()
            .find(|t| t.support() == &BTreeSet::from([0, 1]))
            .unwrap();
        assert_eq!(pair.paulis().len(), 2);
        let o = m.observable_on(&m.graph.sites()).unwrap();
        assert_eq!(o.get(0, 0).re, 1.0);
        assert_eq!(o.get(2, 2).re, -1.0);
    }

    #[test]
    fn toml_matches_json() {
        let toml_text = r#"
            terms = [{ sites = [0, 1], pauli = "ZZ", coeff = -1.0 }]
            [lattice]
            type = "chain"
            length = 2
            [decay]
            b = 2.0
        "#;
        let m = Model::from_toml_str(toml_text).unwrap();
        assert_eq!(m.decay.b(), 2.0);
        assert_eq!(m.decay.p(), 0.5);
        assert!(m.observable.is_none());
        assert!(m.observable_on(&m.graph.sites()).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let unknown = r#"{"lattice": {"type": "chain", "length": 2}, "terms": [], "extra": 1}"#;
        assert!(matches!(
            Model::from_json_str(unknown),
            Err(Error::Config(_))
        ));
        let bad_type = r#"{"lattice": {"type": "square", "length": 2}, "terms": []}"#;
        assert!(Model::from_json_str(bad_type).is_err());
        let outside = r#"{"lattice": {"type": "chain", "length": 2}, "terms": [{"sites": [2], "pauli": "Z", "coeff": 1}]}"#;
        assert!(Model::from_json_str(outside).is_err());
        let length = r#"{"lattice": {"type": "chain", "length": 2}, "terms": [{"sites": [0, 1], "pauli": "Z", "coeff": 1}]}"#;
        assert!(Model::from_json_str(length).is_err());
        let bad_decay =
            r#"{"lattice": {"type": "chain", "length": 2}, "decay": {"p": 1.5}, "terms": []}"#;
        assert!(Model::from_json_str(bad_decay).is_err());
    }
}
