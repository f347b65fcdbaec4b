//! Normalisation of resource-native anatomy terms and expression values onto
//! EMAP tissues and [`ExpressionRange`].
//!
//! ABA publishes numeric expression values that are classified with per-tissue
//! cut-offs. Cut-offs are only curated for some tissues, so a tissue without
//! its own entry inherits the entry of its nearest ancestor. The cut-off
//! arithmetic is generic over [`Scalar`] so it runs unchanged on `f32`, `f64`
//! or exact rationals.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ExpressionRange, PresentLevel, ResourceId, TissueId};
use crate::ontology::{AnatomyGraph, OntologyError};

/// Numeric type usable for expression values and cut-offs.
pub trait Scalar: Copy + PartialOrd + Zero + Debug {}

impl<T: Copy + PartialOrd + Zero + Debug> Scalar for T {}

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("malformed mapping document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("no alignment for {resource} term {term:?}")]
    UnmappedTerm { resource: ResourceId, term: String },
    #[error("alignment for {resource} term {term:?} given twice")]
    DuplicateAlignment { resource: ResourceId, term: String },
    #[error("unknown expression label {0:?}")]
    UnknownLabel(String),
    #[error("cut-offs for {0} must satisfy 0 <= weak < moderate < strong")]
    BadCutoffs(TissueId),
    #[error("cut-offs for {0} given twice")]
    DuplicateThreshold(TissueId),
    #[error("no cut-offs on the path from {0} to the root")]
    NoThresholdOnPath(TissueId),
    #[error("negative expression value")]
    NegativeValue,
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentEntry {
    pub resource: ResourceId,
    pub source_term: String,
    pub emap_tissue: TissueId,
    pub precision_loss: bool,
}

/// Curated term alignments from each resource's anatomy onto EMAP.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnatomyAlignment {
    entries: Vec<AlignmentEntry>,
    index: HashMap<(ResourceId, String), usize>,
}

impl AnatomyAlignment {
    pub fn new(entries: Vec<AlignmentEntry>) -> Result<Self, MappingError> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if index.insert((e.resource, e.source_term.clone()), i).is_some() {
                return Err(MappingError::DuplicateAlignment {
                    resource: e.resource,
                    term: e.source_term.clone(),
                });
            }
        }
        Ok(Self { entries, index })
    }

    pub fn parse(text: &str) -> Result<Self, MappingError> {
        Self::new(serde_json::from_str(text)?)
    }

    pub fn entries(&self) -> &[AlignmentEntry] {
        &self.entries
    }

    /// Exact-match lookup. EMAGE and GXD already speak EMAP, so their terms
    /// map to themselves unless an explicit entry says otherwise.
    pub fn map_anatomy(&self, resource: ResourceId, term: &str) -> Result<(TissueId, bool), MappingError> {
        if let Some(&i) = self.index.get(&(resource, term.to_owned())) {
            let e = &self.entries[i];
            return Ok((e.emap_tissue.clone(), e.precision_loss));
        }
        let unmapped = || MappingError::UnmappedTerm {
            resource,
            term: term.to_owned(),
        };
        if resource.uses_emap() {
            return TissueId::new(term).map(|t| (t, false)).map_err(|_| unmapped());
        }
        Err(unmapped())
    }
}

/// A resource expression label either maps onto the canonical scale or
/// records that no experiment was performed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappedLevel {
    Range(ExpressionRange),
    NoExperiment,
}

/// EMAGE/GXD labels. `absent` is GXD's word for `not detected`.
pub fn map_emage_gxd_level(label: &str) -> Result<ExpressionRange, MappingError> {
    use PresentLevel::*;
    Ok(match label.trim().to_ascii_lowercase().as_str() {
        "not detected" | "absent" => ExpressionRange::NotDetected,
        "detected" | "present" => ExpressionRange::DETECTED,
        "weak" => ExpressionRange::exactly(Weak),
        "moderate" => ExpressionRange::exactly(Moderate),
        "strong" => ExpressionRange::exactly(Strong),
        _ => return Err(MappingError::UnknownLabel(label.to_owned())),
    })
}

pub fn map_gensat_level(label: &str) -> Result<MappedLevel, MappingError> {
    use PresentLevel::*;
    Ok(match label.trim().to_ascii_lowercase().as_str() {
        "not done" => MappedLevel::NoExperiment,
        "undetectable" => MappedLevel::Range(ExpressionRange::NotDetected),
        "weak signal" => MappedLevel::Range(ExpressionRange::exactly(Weak)),
        "moderate to strong signal" => MappedLevel::Range(ExpressionRange::Present {
            lo: Moderate,
            hi: Strong,
        }),
        _ => return Err(MappingError::UnknownLabel(label.to_owned())),
    })
}

/// Upper bounds of the not-expressed, weak and moderate bands. Values above
/// `strong` are strong.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoffs<T> {
    #[serde(rename = "t_weak")]
    pub weak: T,
    #[serde(rename = "t_moderate")]
    pub moderate: T,
    #[serde(rename = "t_strong")]
    pub strong: T,
}

impl<T: Scalar> Cutoffs<T> {
    pub fn new(weak: T, moderate: T, strong: T) -> Option<Self> {
        let ok = weak >= T::zero() && weak < moderate && moderate < strong;
        ok.then_some(Self { weak, moderate, strong })
    }

    /// Boundary values fall into the lower band.
    pub fn classify(&self, value: T) -> ExpressionRange {
        use PresentLevel::*;
        if value <= self.weak {
            ExpressionRange::NotDetected
        } else if value <= self.moderate {
            ExpressionRange::exactly(Weak)
        } else if value <= self.strong {
            ExpressionRange::exactly(Moderate)
        } else {
            ExpressionRange::exactly(Strong)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord<T> {
    pub tissue: TissueId,
    #[serde(flatten)]
    pub cutoffs: Cutoffs<T>,
}

/// Per-tissue ABA cut-offs.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds<T> {
    entries: BTreeMap<TissueId, Cutoffs<T>>,
}

impl<T> Default for Thresholds<T> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> Thresholds<T> {
    pub fn new(records: Vec<ThresholdRecord<T>>) -> Result<Self, MappingError> {
        let mut entries = BTreeMap::new();
        for r in records {
            let c = r.cutoffs;
            if Cutoffs::new(c.weak, c.moderate, c.strong).is_none() {
                return Err(MappingError::BadCutoffs(r.tissue));
            }
            if entries.insert(r.tissue.clone(), c).is_some() {
                return Err(MappingError::DuplicateThreshold(r.tissue));
            }
        }
        Ok(Self { entries })
    }

    pub fn records(&self) -> Vec<ThresholdRecord<T>> {
        self.entries
            .iter()
            .map(|(tissue, cutoffs)| ThresholdRecord {
                tissue: tissue.clone(),
                cutoffs: *cutoffs,
            })
            .collect()
    }

    pub fn get(&self, tissue: &TissueId) -> Option<&Cutoffs<T>> {
        self.entries.get(tissue)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The tissue's own cut-offs, else those of the nearest ancestor (fewest
    /// hops, ties to the lexicographically smallest tissue id).
    pub fn resolve(&self, graph: &AnatomyGraph, tissue: &TissueId) -> Result<Cutoffs<T>, MappingError> {
        let by_distance = graph.ancestors_by_distance(tissue)?;
        if let Some(own) = self.entries.get(tissue) {
            return Ok(*own);
        }
        by_distance
            .iter()
            .filter_map(|(t, d)| self.entries.get(t).map(|c| (*d, t, c)))
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)))
            .map(|(_, _, c)| *c)
            .ok_or_else(|| MappingError::NoThresholdOnPath(tissue.clone()))
    }

    /// Classifies a raw per-experiment ABA value for `tissue`.
    pub fn classify(&self, graph: &AnatomyGraph, tissue: &TissueId, value: T) -> Result<ExpressionRange, MappingError> {
        if value < T::zero() {
            return Err(MappingError::NegativeValue);
        }
        Ok(self.resolve(graph, tissue)?.classify(value))
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Thresholds<T> {
    pub fn parse(text: &'de str) -> Result<Self, MappingError> {
        Self::new(serde_json::from_str(text)?)
    }
}
