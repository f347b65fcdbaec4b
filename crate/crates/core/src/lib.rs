//! Integration of *in situ* gene-expression annotations from several mouse
//! atlases onto EMAP anatomy and a canonical expression scale, with
//! scheme-based arguments for and against expression summarised as a
//! two-layer tick/cross attribute report.

pub mod argumentation;
pub mod ingest;
pub mod mapping;
pub mod model;
pub mod ontology;
pub mod schemes;
pub mod store;

pub use model::{
    compatible, presence, Annotation, AnnotationId, ExpressionRange, GeneId, InterpretationProfile, Mode, PresentLevel,
    Query, ResourceId, Subject, TheilerStage, TissueId,
};

/// ABA cut-offs over `f64` values, as read from threshold files.
pub type ThresholdTable = mapping::Thresholds<f64>;
/// One tissue's `f64` cut-offs.
pub type Cutoffs = mapping::Cutoffs<f64>;
/// ABA cut-offs over exact rationals.
pub type ExactThresholdTable = mapping::Thresholds<num_rational::Ratio<i64>>;
