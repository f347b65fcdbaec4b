//! Loading of annotation files in each resource's native shape.
//!
//! Every input record ends up either as a canonical direct annotation or in
//! the excluded list with a reason; nothing is dropped silently.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::mapping::{map_emage_gxd_level, map_gensat_level, AnatomyAlignment, MappedLevel, MappingError};
use crate::model::{Annotation, AnnotationId, ExpressionRange, GeneId, ResourceId, TheilerStage};
use crate::ontology::AnatomyGraph;
use crate::ThresholdTable;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("annotation file malformed at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("annotation file malformed at record {index}: {message}")]
    Record { index: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExclusionReason {
    /// GENSAT "not done": no assay was performed.
    NoExperiment,
    UnmappedTerm,
    UnknownLabel,
    BadStage,
    /// ABA value that is negative or has no cut-offs on its tissue's path.
    UnclassifiableValue,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excluded {
    /// Position of the record in its file.
    pub index: usize,
    pub resource: ResourceId,
    pub id: String,
    pub reason: ExclusionReason,
    pub detail: String,
    pub record: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub loaded: usize,
    pub derived: usize,
    pub excluded: Vec<Excluded>,
    pub per_resource: BTreeMap<ResourceId, usize>,
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "loaded={} derived={} excluded={}",
            self.loaded,
            self.derived,
            self.excluded.len()
        )
    }
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    resource: ResourceId,
    id: String,
    gene: GeneId,
    #[serde(default)]
    stage: Option<i64>,
    tissue: String,
    level: Value,
    #[serde(default)]
    probe_info: Option<bool>,
    #[serde(default)]
    technique: Option<String>,
    #[serde(default)]
    source_url: Option<String>,
    #[serde(flatten)]
    extra: BTreeMap<String, Value>,
}

/// Reference data records are normalised against.
#[derive(Debug, Clone, Copy)]
pub struct Context<'a> {
    pub ontologies: &'a BTreeMap<TheilerStage, AnatomyGraph>,
    pub alignment: &'a AnatomyAlignment,
    pub thresholds: &'a ThresholdTable,
}

/// Result of normalising one file, before it touches a store.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Normalized {
    pub annotations: Vec<Annotation>,
    pub excluded: Vec<Excluded>,
}

impl Normalized {
    pub fn record_count(&self) -> usize {
        self.annotations.len() + self.excluded.len()
    }
}

enum Level {
    Range(ExpressionRange),
    Aba(f64),
}

type Rejection = (ExclusionReason, String);

fn parse_level(resource: ResourceId, level: &Value) -> Result<Level, Rejection> {
    let label = |v: &Value| {
        v.as_str().map(str::to_owned).ok_or_else(|| {
            (
                ExclusionReason::UnknownLabel,
                format!("{resource} level must be a label, got {v}"),
            )
        })
    };
    let unknown = |e: MappingError| (ExclusionReason::UnknownLabel, e.to_string());
    match resource {
        ResourceId::Emage | ResourceId::Gxd => map_emage_gxd_level(&label(level)?).map(Level::Range).map_err(unknown),
        ResourceId::Gensat => match map_gensat_level(&label(level)?).map_err(unknown)? {
            MappedLevel::Range(r) => Ok(Level::Range(r)),
            MappedLevel::NoExperiment => Err((ExclusionReason::NoExperiment, "GENSAT experiment not done".into())),
        },
        ResourceId::Aba => level.as_f64().map(Level::Aba).ok_or_else(|| {
            (
                ExclusionReason::UnknownLabel,
                format!("ABA level must be a number, got {level}"),
            )
        }),
    }
}

fn normalize_record(raw: RawRecord, ctx: Context<'_>) -> Result<Annotation, Rejection> {
    let resource = raw.resource;
    let stage = match raw.stage {
        Some(v) => TheilerStage::new(v).map_err(|e| (ExclusionReason::BadStage, e.to_string()))?,
        // ABA and GENSAT describe the adult brain.
        None if !resource.uses_emap() => TheilerStage::ADULT,
        None => return Err((ExclusionReason::BadStage, format!("{resource} record has no stage"))),
    };
    let level = parse_level(resource, &raw.level)?;
    let graph = ctx
        .ontologies
        .get(&stage)
        .ok_or_else(|| (ExclusionReason::BadStage, format!("no anatomy loaded for {stage}")))?;
    let (tissue, precision_loss) = ctx
        .alignment
        .map_anatomy(resource, &raw.tissue)
        .map_err(|e| (ExclusionReason::UnmappedTerm, e.to_string()))?;
    if !graph.contains(&tissue) {
        return Err((
            ExclusionReason::UnmappedTerm,
            format!("tissue {tissue} is not in the {stage} anatomy"),
        ));
    }
    let level = match level {
        Level::Range(r) => r,
        Level::Aba(v) => ctx
            .thresholds
            .classify(graph, &tissue, v)
            .map_err(|e| (ExclusionReason::UnclassifiableValue, e.to_string()))?,
    };
    Ok(Annotation {
        probe_info: raw.probe_info,
        technique: raw.technique,
        source_url: raw.source_url,
        precision_loss,
        metadata: raw.extra,
        ..Annotation::direct(AnnotationId::new(resource, raw.id), raw.gene, tissue, stage, level)
    })
}

/// Parses an annotation file and maps every record onto the canonical model.
pub fn normalize(text: &str, ctx: Context<'_>) -> Result<Normalized, IngestError> {
    let records: Vec<Value> = serde_json::from_str(text).map_err(|e| IngestError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut out = Normalized::default();
    for (index, record) in records.into_iter().enumerate() {
        let raw: RawRecord = serde_json::from_value(record.clone()).map_err(|e| IngestError::Record {
            index,
            message: e.to_string(),
        })?;
        let (resource, id) = (raw.resource, raw.id.clone());
        if id.is_empty() {
            return Err(IngestError::Record {
                index,
                message: "empty id".into(),
            });
        }
        match normalize_record(raw, ctx) {
            Ok(a) => out.annotations.push(a),
            Err((reason, detail)) => out.excluded.push(Excluded {
                index,
                resource,
                id,
                reason,
                detail,
                record,
            }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{AlignmentEntry, Cutoffs, ThresholdRecord};
    use crate::model::{PresentLevel, TissueId};
    use crate::ontology::load_ontology;

    struct Fixture {
        ontologies: BTreeMap<TheilerStage, AnatomyGraph>,
        alignment: AnatomyAlignment,
        thresholds: ThresholdTable,
    }

    impl Fixture {
        fn new() -> Self {
            let ts15 = load_ontology(
                r#"{"stage": 15, "nodes": [{"id": "telencephalon", "name": "telencephalon"},
                                           {"id": "future brain", "name": "future brain"}],
                    "edges": [{"child": "telencephalon", "parent": "future brain"}]}"#,
            )
            .unwrap();
            let ts28 = load_ontology(
                r#"{"stage": 28, "nodes": [{"id": "brain", "name": "brain"},
                                           {"id": "cortex", "name": "cortex"}],
                    "edges": [{"child": "cortex", "parent": "brain"}]}"#,
            )
            .unwrap();
            let alignment = AnatomyAlignment::new(vec![AlignmentEntry {
                resource: ResourceId::Aba,
                source_term: "Isocortex".into(),
                emap_tissue: TissueId::new("cortex").unwrap(),
                precision_loss: true,
            }])
            .unwrap();
            let thresholds = ThresholdTable::new(vec![ThresholdRecord {
                tissue: TissueId::new("brain").unwrap(),
                cutoffs: Cutoffs {
                    weak: 0.5,
                    moderate: 1.5,
                    strong: 2.5,
                },
            }])
            .unwrap();
            Self {
                ontologies: BTreeMap::from([(ts15.stage(), ts15), (ts28.stage(), ts28)]),
                alignment,
                thresholds,
            }
        }

        fn ctx(&self) -> Context<'_> {
            Context {
                ontologies: &self.ontologies,
                alignment: &self.alignment,
                thresholds: &self.thresholds,
            }
        }
    }

    #[test]
    fn three_emage_records() {
        let f = Fixture::new();
        let text = r#"[
            {"resource": "EMAGE", "id": "1", "gene": "bmp4", "stage": 15, "tissue": "telencephalon", "level": "weak"},
            {"resource": "EMAGE", "id": "2", "gene": "bmp4", "stage": 15, "tissue": "future brain", "level": "strong",
             "probe_info": true, "assay_type": "wholemount"},
            {"resource": "GXD", "id": "3", "gene": "shh", "stage": 15, "tissue": "future brain", "level": "absent"}
        ]"#;
        let n = normalize(text, f.ctx()).unwrap();
        assert_eq!(n.annotations.len(), 3);
        assert!(n.excluded.is_empty());
        assert_eq!(n.annotations[0].level, ExpressionRange::exactly(PresentLevel::Weak));
        assert_eq!(n.annotations[1].metadata["assay_type"], "wholemount");
        assert_eq!(n.annotations[2].level, ExpressionRange::NotDetected);
        assert!(n.annotations.iter().all(|a| a.direct));
    }

    #[test]
    fn exclusions_carry_reasons() {
        let f = Fixture::new();
        let text = r#"[
            {"resource": "GENSAT", "id": "g1", "gene": "bmp4", "tissue": "brain", "level": "not done"},
            {"resource": "ABA", "id": "a1", "gene": "bmp4", "tissue": "unknown-structure", "level": 1.0},
            {"resource": "EMAGE", "id": "e1", "gene": "bmp4", "stage": 42, "tissue": "brain", "level": "weak"},
            {"resource": "EMAGE", "id": "e2", "gene": "bmp4", "stage": 15, "tissue": "future brain", "level": "loud"},
            {"resource": "ABA", "id": "a2", "gene": "bmp4", "tissue": "Isocortex", "level": -1.0},
            {"resource": "ABA", "id": "a3", "gene": "bmp4", "tissue": "Isocortex", "level": 2.0}
        ]"#;
        let n = normalize(text, f.ctx()).unwrap();
        let reasons: Vec<_> = n.excluded.iter().map(|e| e.reason).collect();
        assert_eq!(
            reasons,
            [
                ExclusionReason::NoExperiment,
                ExclusionReason::UnmappedTerm,
                ExclusionReason::BadStage,
                ExclusionReason::UnknownLabel,
                ExclusionReason::UnclassifiableValue,
            ]
        );
        assert_eq!(n.record_count(), 6);
        let aba = &n.annotations[0];
        assert_eq!(aba.stage, TheilerStage::ADULT);
        assert_eq!(aba.tissue.as_str(), "cortex");
        assert!(aba.precision_loss);
        assert_eq!(aba.level, ExpressionRange::exactly(PresentLevel::Moderate));
    }

    #[test]
    fn malformed_files() {
        let f = Fixture::new();
        match normalize("[\n{\"resource\": ", f.ctx()) {
            Err(IngestError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match normalize(
            r#"[{"resource": "NCBI", "id": "1", "gene": "x", "tissue": "t", "level": "weak"}]"#,
            f.ctx(),
        ) {
            Err(IngestError::Record { index: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            normalize(r#"[{"resource": "EMAGE"}]"#, f.ctx()),
            Err(IngestError::Record { .. })
        ));
    }
}
