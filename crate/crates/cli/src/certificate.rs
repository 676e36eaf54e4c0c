//! JSON certificate files and their independent re-verification.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use regularity::coloring::{verify_avoiding, verify_witness, AvoidanceOutcome};
use regularity::lemmas::ConstructionProof;
use regularity::search::{search_avoiding_coloring, SearchOptions};
use regularity::{
    AnalysisConfig, AvoidanceCertificate, Coloring, DorReport, ExhaustiveRegularityCertificate,
    SearchOutcome, SolutionWitness,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("unsupported schema_version {0:?} (expected {SCHEMA_VERSION:?})")]
    UnsupportedSchema(String),
    #[error("malformed certificate: {0}")]
    Malformed(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Avoidance,
    ExhaustiveRegularity,
    SolutionWitness,
    DorReport,
}

/// Limits a command ran under. Not part of the checked payload.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub node_budget: Option<u64>,
    pub interval: Option<u64>,
    pub parallel: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub command: Vec<String>,
    pub budgets: Budgets,
}

/// A monochromatic solution together with the coloring it is monochromatic under.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub witness: SolutionWitness,
    pub coloring: Coloring,
    pub interval: u64,
    pub proof: Option<ConstructionProof>,
}

/// A degree-of-regularity report and the settings needed to recompute it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DorRecord {
    pub report: DorReport,
    pub config: AnalysisConfig,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Avoidance(AvoidanceCertificate),
    ExhaustiveRegularity(ExhaustiveRegularityCertificate),
    SolutionWitness(WitnessRecord),
    DorReport(Box<DorRecord>),
}

impl Payload {
    pub fn kind(&self) -> CertificateKind {
        match self {
            Payload::Avoidance(_) => CertificateKind::Avoidance,
            Payload::ExhaustiveRegularity(_) => CertificateKind::ExhaustiveRegularity,
            Payload::SolutionWitness(_) => CertificateKind::SolutionWitness,
            Payload::DorReport(_) => CertificateKind::DorReport,
        }
    }

    fn to_value(&self) -> Value {
        let value = match self {
            Payload::Avoidance(c) => serde_json::to_value(c),
            Payload::ExhaustiveRegularity(c) => serde_json::to_value(c),
            Payload::SolutionWitness(w) => serde_json::to_value(w),
            Payload::DorReport(d) => serde_json::to_value(d),
        };
        value.expect("payload types serialize to JSON")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: String,
    pub kind: CertificateKind,
    pub payload: Value,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl CertificateFile {
    pub fn new(payload: &Payload, provenance: Provenance) -> Self {
        CertificateFile {
            schema_version: SCHEMA_VERSION.to_string(),
            kind: payload.kind(),
            payload: payload.to_value(),
            provenance,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("certificate serializes");
        text.push('\n');
        text
    }

    /// Parses a file, rejecting unknown schema versions before anything else.
    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let value: Value = serde_json::from_str(text)?;
        match value.get("schema_version") {
            Some(Value::String(v)) if v == SCHEMA_VERSION => {}
            Some(Value::String(v)) => return Err(CertificateError::UnsupportedSchema(v.clone())),
            other => {
                return Err(CertificateError::UnsupportedSchema(
                    other.map_or_else(|| "missing".to_string(), Value::to_string),
                ))
            }
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn payload(&self) -> Result<Payload, CertificateError> {
        let v = self.payload.clone();
        Ok(match self.kind {
            CertificateKind::Avoidance => Payload::Avoidance(serde_json::from_value(v)?),
            CertificateKind::ExhaustiveRegularity => {
                Payload::ExhaustiveRegularity(serde_json::from_value(v)?)
            }
            CertificateKind::SolutionWitness => {
                Payload::SolutionWitness(serde_json::from_value(v)?)
            }
            CertificateKind::DorReport => Payload::DorReport(serde_json::from_value(v)?),
        })
    }

    pub fn verify(&self) -> Result<Verdict, CertificateError> {
        Ok(verify_payload(&self.payload()?))
    }
}

/// Re-derives the claim of a payload without trusting any of its derived fields.
pub fn verify_payload(payload: &Payload) -> Verdict {
    match payload {
        Payload::Avoidance(cert) => verify_avoidance(cert),
        Payload::ExhaustiveRegularity(cert) => verify_exhaustive(cert),
        Payload::SolutionWitness(record) => verify_witness_record(record),
        Payload::DorReport(record) => verify_dor(record),
    }
}

fn invalid(msg: impl Into<String>) -> Verdict {
    Verdict::Invalid(msg.into())
}

fn verify_avoidance(cert: &AvoidanceCertificate) -> Verdict {
    match verify_avoiding(&cert.equation, &cert.coloring, cert.interval) {
        Ok(AvoidanceOutcome::Avoids(fresh)) if fresh.checked_count == cert.checked_count => {
            Verdict::Valid
        }
        Ok(AvoidanceOutcome::Avoids(fresh)) => invalid(format!(
            "checked_count is {}, recount gives {}",
            cert.checked_count, fresh.checked_count
        )),
        Ok(AvoidanceOutcome::Solution(w)) => invalid(format!(
            "monochromatic solution {:?} in color {}",
            w.values,
            w.color + 1
        )),
        Err(e) => invalid(e.to_string()),
    }
}

fn verify_exhaustive(cert: &ExhaustiveRegularityCertificate) -> Verdict {
    // The recorded node count doubles as the replay budget.
    let opts = SearchOptions {
        node_budget: cert.nodes_explored,
        parallel: false,
        symmetry_breaking: cert.symmetry_breaking,
    };
    match search_avoiding_coloring(&cert.equation, cert.colors, cert.interval, &opts) {
        Ok(SearchOutcome::NoneExists(fresh)) if fresh == *cert => Verdict::Valid,
        Ok(SearchOutcome::NoneExists(fresh)) => invalid(format!(
            "replay explored {} nodes, certificate claims {}",
            fresh.nodes_explored, cert.nodes_explored
        )),
        Ok(SearchOutcome::Found(_)) => invalid("replay found an avoiding coloring"),
        Ok(SearchOutcome::BudgetExhausted { .. }) => invalid(format!(
            "replay did not finish within the claimed {} nodes",
            cert.nodes_explored
        )),
        Err(e) => invalid(e.to_string()),
    }
}

fn verify_witness_record(record: &WitnessRecord) -> Verdict {
    let w = &record.witness;
    if let Some(&x) = w.values.iter().find(|&&x| x > record.interval) {
        return invalid(format!("value {x} lies outside [1, {}]", record.interval));
    }
    if !verify_witness(&w.equation, &record.coloring, w) {
        return invalid("values are not a monochromatic solution under the coloring");
    }
    let proof_holds = match &record.proof {
        None => true,
        Some(ConstructionProof::Geometric { witness, .. }) => {
            witness.half_length <= record.interval && witness.holds(&record.coloring)
        }
        Some(ConstructionProof::Split { witness, .. }) => {
            witness.ap.half_length <= record.interval && witness.holds(&record.coloring)
        }
    };
    if !proof_holds {
        return invalid("the recorded progression witness does not hold");
    }
    Verdict::Valid
}

fn verify_dor(record: &DorRecord) -> Verdict {
    if !record.report.is_consistent() {
        return invalid("report bounds are inconsistent with its evidence");
    }
    match DorReport::analyze(&record.report.equation, &record.config) {
        Ok(fresh) if fresh == record.report => Verdict::Valid,
        Ok(_) => invalid("recomputed report differs"),
        Err(e) => invalid(e.to_string()),
    }
}
