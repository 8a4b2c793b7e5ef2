//! Versioned JSON file formats. Every file carries a `schema` tag and complex
//! numbers are written as `[re, im]` pairs.

use std::io::{Read, Write};

use kadison_core::linalg::ComplexVector;
use kadison_core::mixedchar::{FiniteSupportVector, RandomVectorEnsemble};
use kadison_core::weaver::{Graph, WeaverInstance};
use kadison_core::{Complex64, NumericPolicy};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const INSTANCE_SCHEMA: &str = "ks-instance/1";
pub const ENSEMBLE_SCHEMA: &str = "ks-ensemble/1";
pub const REPORT_SCHEMA: &str = "ks-report/1";

/// A complex number as `[re, im]`.
pub type ComplexPair = [f64; 2];

/// An isotropic vector system `u_1, …, u_m ∈ ℂ^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFileV1 {
    pub schema: String,
    pub d: usize,
    pub vectors: Vec<Vec<ComplexPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// The graph an instance was generated from; vector `e` belongs to edge `e`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSource>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSource {
    pub vertices: usize,
    /// `[a, b, weight]` triples.
    pub edges: Vec<(usize, usize, f64)>,
}

/// Independent finitely supported random vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFileV1 {
    pub schema: String,
    pub d: usize,
    pub vectors: Vec<RandomVectorFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomVectorFile {
    pub atoms: Vec<AtomFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub p: f64,
    pub value: Vec<ComplexPair>,
}

/// A command's result together with everything needed to reproduce it.
/// Only `wall_time_s` varies between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFileV1<T> {
    pub schema: String,
    /// Which command produced the report: `partition`, `mixed`, `certify`,
    /// `chernoff` or `laguerre`.
    pub kind: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub policy: NumericPolicy,
    pub wall_time_s: f64,
    pub body: T,
}

impl<T> ReportFileV1<T> {
    pub fn new(kind: &str, seed: Option<u64>, policy: &NumericPolicy, wall_time_s: f64, body: T) -> Self {
        Self {
            schema: REPORT_SCHEMA.into(),
            kind: kind.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed,
            policy: policy.clone(),
            wall_time_s,
            body,
        }
    }
}

fn pair(z: &Complex64) -> ComplexPair {
    [z.re, z.im]
}

fn vector_from_pairs(d: usize, entries: &[ComplexPair], what: &str) -> Result<ComplexVector, CliError> {
    if entries.len() != d {
        return Err(CliError::Format(format!(
            "{what} has {} entries, expected d = {d}",
            entries.len()
        )));
    }
    Ok(ComplexVector::new(
        entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
    )?)
}

fn check_schema(found: &str, expected: &str) -> Result<(), CliError> {
    if found == expected {
        Ok(())
    } else {
        Err(CliError::Format(format!("schema is {found:?}, expected {expected:?}")))
    }
}

impl InstanceFileV1 {
    pub fn from_instance(inst: &WeaverInstance) -> Self {
        Self {
            schema: INSTANCE_SCHEMA.into(),
            d: inst.dim(),
            vectors: inst
                .vectors()
                .iter()
                .map(|u| u.as_slice().iter().map(pair).collect())
                .collect(),
            delta: Some(inst.declared_delta()),
            graph: None,
        }
    }

    pub fn with_graph(mut self, g: &Graph) -> Self {
        self.graph = Some(GraphSource {
            vertices: g.vertex_count(),
            edges: g.edges().to_vec(),
        });
        self
    }

    pub fn to_instance(&self) -> Result<WeaverInstance, CliError> {
        check_schema(&self.schema, INSTANCE_SCHEMA)?;
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| vector_from_pairs(self.d, v, &format!("vector {i}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeaverInstance::new(self.d, vectors, self.delta)?)
    }

    pub fn to_graph(&self) -> Result<Option<Graph>, CliError> {
        let Some(source) = &self.graph else {
            return Ok(None);
        };
        if source.edges.len() != self.vectors.len() {
            return Err(CliError::Format(format!(
                "graph has {} edges but the instance has {} vectors",
                source.edges.len(),
                self.vectors.len()
            )));
        }
        Ok(Some(Graph::new(source.vertices, source.edges.clone())?))
    }
}

impl EnsembleFileV1 {
    pub fn from_ensemble(e: &RandomVectorEnsemble) -> Self {
        Self {
            schema: ENSEMBLE_SCHEMA.into(),
            d: e.dim(),
            vectors: e
                .vectors()
                .iter()
                .map(|v| RandomVectorFile {
                    atoms: v
                        .atoms()
                        .iter()
                        .map(|(p, w)| AtomFile {
                            p: *p,
                            value: w.as_slice().iter().map(pair).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_ensemble(&self, policy: &NumericPolicy) -> Result<RandomVectorEnsemble, CliError> {
        check_schema(&self.schema, ENSEMBLE_SCHEMA)?;
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let atoms = v
                    .atoms
                    .iter()
                    .enumerate()
                    .map(|(j, a)| {
                        Ok((
                            a.p,
                            vector_from_pairs(self.d, &a.value, &format!("vector {i} atom {j}"))?,
                        ))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(FiniteSupportVector::new(atoms, policy)?)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(RandomVectorEnsemble::new(self.d, vectors)?)
    }
}

/// An input that may be either an instance or an ensemble, told apart by
/// its schema tag.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyInput {
    Instance(InstanceFileV1),
    Ensemble(EnsembleFileV1),
}

impl AnyInput {
    pub fn from_reader(reader: impl Read) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_reader(reader)?;
        match value.get("schema").and_then(|s| s.as_str()) {
            Some(INSTANCE_SCHEMA) => Ok(Self::Instance(serde_json::from_value(value)?)),
            Some(ENSEMBLE_SCHEMA) => Ok(Self::Ensemble(serde_json::from_value(value)?)),
            Some(other) => Err(CliError::Format(format!(
                "schema {other:?} is neither {INSTANCE_SCHEMA:?} nor {ENSEMBLE_SCHEMA:?}"
            ))),
            None => Err(CliError::Format("missing schema field".into())),
        }
    }

    /// Deterministic vectors become single-atom random vectors.
    pub fn to_ensemble(&self, policy: &NumericPolicy) -> Result<RandomVectorEnsemble, CliError> {
        match self {
            Self::Ensemble(f) => f.to_ensemble(policy),
            Self::Instance(f) => {
                let inst = f.to_instance()?;
                let vectors = inst
                    .vectors()
                    .iter()
                    .map(|u| FiniteSupportVector::deterministic(u.clone()))
                    .collect();
                Ok(RandomVectorEnsemble::new(inst.dim(), vectors)?)
            }
        }
    }
}

pub fn read_json<T: DeserializeOwned>(reader: impl Read) -> Result<T, CliError> {
    Ok(serde_json::from_reader(reader)?)
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<T: Serialize>(mut writer: impl Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n").map_err(CliError::stdio)?;
    Ok(())
}

/// Loads a numeric policy; fields that are absent keep their defaults.
pub fn read_policy(reader: impl Read) -> Result<NumericPolicy, CliError> {
    read_json(reader)
}
