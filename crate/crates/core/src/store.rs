//! The in-memory store behind queries, and its snapshot file.
//!
//! Only direct annotations are persisted. Propagated annotations are
//! recomputed whenever the store is built or ingested into.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::argumentation::{self, annotation_summary, ArgueOutcome, SummaryRow};
use crate::ingest::{self, Context, Excluded, IngestError, IngestReport};
use crate::mapping::{AlignmentEntry, AnatomyAlignment, MappingError, ThresholdRecord};
use crate::model::{Annotation, AnnotationId, Query, TheilerStage, TissueId};
use crate::ontology::{propagate, AnatomyGraph, OntologyDocument, OntologyError};
use crate::schemes::{ExpertScore, Scheme, SchemeCatalog, SchemeError};
use crate::ThresholdTable;

pub const SNAPSHOT_VERSION: &str = "argudas-snapshot/1";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed snapshot: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported snapshot version {0:?}")]
    Version(String),
    #[error("two ontologies for {0}")]
    DuplicateStage(TheilerStage),
    #[error("annotation {0} is not a well-formed direct annotation for the loaded anatomy")]
    BadAnnotation(AnnotationId),
    #[error("unknown tissue {tissue} at {stage}")]
    UnknownSubject { tissue: TissueId, stage: TheilerStage },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

/// Serialised form of a [`Store`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub version: String,
    pub ontologies: Vec<OntologyDocument>,
    pub alignment: Vec<AlignmentEntry>,
    pub thresholds: Vec<ThresholdRecord<f64>>,
    pub schemes: Vec<Scheme>,
    pub annotations: Vec<Annotation>,
    #[serde(default)]
    pub excluded: Vec<Excluded>,
}

/// Running totals over every ingest into the store.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreTotals {
    pub direct: usize,
    pub derived: usize,
    pub excluded: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Store {
    ontologies: BTreeMap<TheilerStage, AnatomyGraph>,
    alignment: AnatomyAlignment,
    thresholds: ThresholdTable,
    catalog: SchemeCatalog,
    direct: BTreeMap<AnnotationId, Annotation>,
    excluded: Vec<Excluded>,
    /// Direct annotations followed by their propagated copies.
    annotations: Vec<Annotation>,
}

impl Store {
    pub fn new(
        ontologies: Vec<AnatomyGraph>,
        alignment: AnatomyAlignment,
        thresholds: ThresholdTable,
        catalog: SchemeCatalog,
    ) -> Result<Self, StoreError> {
        let mut by_stage = BTreeMap::new();
        for g in ontologies {
            let stage = g.stage();
            if by_stage.insert(stage, g).is_some() {
                return Err(StoreError::DuplicateStage(stage));
            }
        }
        Ok(Self {
            ontologies: by_stage,
            alignment,
            thresholds,
            catalog,
            ..Self::default()
        })
    }

    pub fn ontology(&self, stage: TheilerStage) -> Option<&AnatomyGraph> {
        self.ontologies.get(&stage)
    }

    pub fn ontologies(&self) -> impl Iterator<Item = &AnatomyGraph> {
        self.ontologies.values()
    }

    pub fn catalog(&self) -> &SchemeCatalog {
        &self.catalog
    }

    pub fn alignment(&self) -> &AnatomyAlignment {
        &self.alignment
    }

    pub fn thresholds(&self) -> &ThresholdTable {
        &self.thresholds
    }

    /// Direct and propagated annotations.
    pub fn annotations(&self) -> &[Annotation] {
        &self.annotations
    }

    pub fn excluded(&self) -> &[Excluded] {
        &self.excluded
    }

    pub fn totals(&self) -> StoreTotals {
        StoreTotals {
            direct: self.direct.len(),
            derived: self.annotations.len() - self.direct.len(),
            excluded: self.excluded.len(),
        }
    }

    pub fn record_score(&mut self, scheme: &str, expert: &str, score: ExpertScore) -> Result<(), SchemeError> {
        self.catalog.record_score(scheme, expert, score)
    }

    fn repropagate(&mut self) -> Result<(), OntologyError> {
        let mut by_stage: BTreeMap<TheilerStage, Vec<Annotation>> = BTreeMap::new();
        for a in self.direct.values() {
            by_stage.entry(a.stage).or_default().push(a.clone());
        }
        let mut all = Vec::with_capacity(self.direct.len());
        let mut derived = Vec::new();
        for (stage, direct) in by_stage {
            let graph = self
                .ontologies
                .get(&stage)
                .ok_or_else(|| OntologyError::BadStage(stage.value().into()))?;
            let mut out = propagate(&direct, graph)?;
            derived.extend(out.drain(direct.len()..));
            all.extend(out);
        }
        all.extend(derived);
        self.annotations = all;
        Ok(())
    }

    /// Normalises an annotation file into the store, replacing annotations
    /// with the same id, and re-runs propagation.
    pub fn ingest(&mut self, text: &str) -> Result<IngestReport, StoreError> {
        let normalized = ingest::normalize(
            text,
            Context {
                ontologies: &self.ontologies,
                alignment: &self.alignment,
                thresholds: &self.thresholds,
            },
        )?;
        let mut report = IngestReport {
            loaded: normalized.annotations.len(),
            ..IngestReport::default()
        };
        let loaded: BTreeSet<AnnotationId> = normalized.annotations.iter().map(|a| a.id.clone()).collect();
        for a in normalized.annotations {
            *report.per_resource.entry(a.id.resource).or_default() += 1;
            self.direct.insert(a.id.clone(), a);
        }
        for e in &normalized.excluded {
            let known = self
                .excluded
                .iter()
                .any(|k| k.resource == e.resource && k.id == e.id && k.record == e.record);
            if !known {
                self.excluded.push(e.clone());
            }
        }
        report.excluded = normalized.excluded;
        self.repropagate()?;
        report.derived = self
            .annotations
            .iter()
            .filter(|a| a.derived_from.as_ref().is_some_and(|o| loaded.contains(o)))
            .count();
        Ok(report)
    }

    /// Fails when the stage has no anatomy or the tissue is not part of it.
    pub fn check_subject(&self, tissue: &TissueId, stage: TheilerStage) -> Result<&AnatomyGraph, StoreError> {
        self.ontologies
            .get(&stage)
            .filter(|g| g.contains(tissue))
            .ok_or_else(|| StoreError::UnknownSubject {
                tissue: tissue.clone(),
                stage,
            })
    }

    pub fn summary(&self, query: &Query) -> Vec<SummaryRow> {
        annotation_summary(query, &self.annotations)
    }

    pub fn argue(&self, query: &Query, legacy: bool) -> ArgueOutcome {
        argumentation::argue(query, &self.annotations, &self.catalog.rules(), legacy)
    }

    pub fn to_snapshot(&self) -> Snapshot {
        Snapshot {
            version: SNAPSHOT_VERSION.to_owned(),
            ontologies: self.ontologies.values().map(AnatomyGraph::to_document).collect(),
            alignment: self.alignment.entries().to_vec(),
            thresholds: self.thresholds.records(),
            schemes: self.catalog.schemes().to_vec(),
            annotations: self.direct.values().cloned().collect(),
            excluded: self.excluded.clone(),
        }
    }

    pub fn from_snapshot(snapshot: Snapshot) -> Result<Self, StoreError> {
        if snapshot.version != SNAPSHOT_VERSION {
            return Err(StoreError::Version(snapshot.version));
        }
        let graphs = snapshot
            .ontologies
            .into_iter()
            .map(AnatomyGraph::from_document)
            .collect::<Result<Vec<_>, _>>()?;
        let mut store = Self::new(
            graphs,
            AnatomyAlignment::new(snapshot.alignment)?,
            ThresholdTable::new(snapshot.thresholds)?,
            SchemeCatalog::new(snapshot.schemes)?,
        )?;
        for a in snapshot.annotations {
            let known_tissue = store.ontologies.get(&a.stage).is_some_and(|g| g.contains(&a.tissue));
            if !a.direct || !a.is_well_formed() || !known_tissue {
                return Err(StoreError::BadAnnotation(a.id));
            }
            store.direct.insert(a.id.clone(), a);
        }
        store.excluded = snapshot.excluded;
        store.repropagate()?;
        Ok(store)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_snapshot()).expect("snapshot serialises") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, StoreError> {
        Self::from_snapshot(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|source| StoreError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| StoreError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }
}
