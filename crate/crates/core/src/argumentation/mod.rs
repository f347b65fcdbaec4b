//! Arguments for and against expression, the attacks between them, grounded
//! evaluation (kept as a legacy mode), and the two-layer tick/cross attribute
//! report that is presented for human judgement.

mod attacks;
mod attributes;
mod generate;
mod grounded;
mod summary;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{AnnotationId, ExpressionRange, Query, Subject};
use crate::schemes::Rule;

pub use attacks::{compute_attacks, conflicting, AttackGraph, AttackGraphError};
pub use attributes::{
    derive_attributes, level_groups, AnnotationAttribute, Attribute, AttributeReport, Indicator, LevelGroup,
    ATTR_DIRECT_SUPPORT, ATTR_MULTIPLE_AGREE, ATTR_NO_CONFLICT,
};
pub use generate::generate_arguments;
pub use grounded::{grounded_labelling, grounded_labels, Label};
pub use summary::{annotation_summary, SummaryRow};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "target", rename_all = "snake_case")]
pub enum Assertion {
    Expressed(ExpressionRange),
    NotExpressed,
    AnnotationTrustworthy(AnnotationId),
    AnnotationSuspect(AnnotationId),
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Expressed(r) => write!(f, "expressed ({r})"),
            Self::NotExpressed => f.write_str("not expressed"),
            Self::AnnotationTrustworthy(id) => write!(f, "{id} trustworthy"),
            Self::AnnotationSuspect(id) => write!(f, "{id} suspect"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Claim {
    pub subject: Subject,
    pub assertion: Assertion,
}

/// Whether the grounding annotations were annotated directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directness {
    Direct,
    Propagated,
    Mixed,
}

/// An instantiated scheme together with the annotations that ground it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Argument {
    pub id: usize,
    pub scheme: String,
    pub label: String,
    pub grounding: Vec<AnnotationId>,
    pub claim: Claim,
    pub confidence: u8,
    pub directness: Directness,
}

impl Argument {
    /// Grounded on exactly this annotation and nothing else.
    pub fn grounded_solely_on(&self, id: &AnnotationId) -> bool {
        self.grounding.len() == 1 && self.grounding[0] == *id
    }
}

/// Everything one `argue` request produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgueOutcome {
    pub report: AttributeReport,
    pub arguments: Vec<Argument>,
    pub attacks: Vec<(usize, usize)>,
    /// Present only when grounded evaluation was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<usize, Label>>,
}

/// Generates arguments, attacks and the attribute report for a query, with
/// grounded labels when `legacy` is set.
pub fn argue(query: &Query, annotations: &[crate::model::Annotation], rules: &[Rule], legacy: bool) -> ArgueOutcome {
    let arguments = generate_arguments(query, annotations, rules);
    let graph = compute_attacks(&arguments, query.profile);
    let labels = legacy.then(|| grounded_labelling(&graph));
    let report = derive_attributes(query, annotations, rules, query.profile);
    ArgueOutcome {
        report,
        attacks: graph.attacks().iter().copied().collect(),
        arguments: graph.into_arguments(),
        labels,
    }
}
