use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{
    compatible, presence, Annotation, AnnotationId, ExpressionRange, InterpretationProfile, Mode, PresentLevel, Query,
};
use crate::schemes::{Polarity, Rule};

pub const ATTR_MULTIPLE_AGREE: &str = "multiple annotations agree";
pub const ATTR_NO_CONFLICT: &str = "no conflicting annotation";
pub const ATTR_DIRECT_SUPPORT: &str = "direct annotation support";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indicator {
    Tick,
    Cross,
}

impl Indicator {
    pub fn from_bool(tick: bool) -> Self {
        if tick {
            Self::Tick
        } else {
            Self::Cross
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Self::Tick => '+',
            Self::Cross => '-',
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub indicator: Indicator,
}

/// Annotations that jointly promote one expression claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelGroup {
    /// The claim all members share.
    pub range: ExpressionRange,
    pub members: Vec<AnnotationId>,
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationAttribute {
    pub name: String,
    pub indicator: Indicator,
    pub scheme: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeReport {
    pub profile: InterpretationProfile,
    pub level_layer: Vec<LevelGroup>,
    pub annotation_layer: BTreeMap<AnnotationId, Vec<AnnotationAttribute>>,
}

/// Partitions the expression claims in scope into groups of mutually
/// compatible ranges, keyed by the claim every member supports.
///
/// In presence mode there are at most two groups: present (keyed `detected`)
/// and not detected. In level mode the present ranges form an interval
/// graph, so its maximal cliques are exactly the maximal sets of ranges
/// sharing a level; each is keyed by the intersection of its members.
pub fn level_groups(
    ranges: &BTreeSet<ExpressionRange>,
    mode: Mode,
) -> Vec<(ExpressionRange, BTreeSet<ExpressionRange>)> {
    let mut groups = Vec::new();
    if ranges.contains(&ExpressionRange::NotDetected) {
        groups.push((
            ExpressionRange::NotDetected,
            BTreeSet::from([ExpressionRange::NotDetected]),
        ));
    }
    let present: BTreeSet<ExpressionRange> = ranges.iter().copied().filter(|r| presence(*r)).collect();
    if present.is_empty() {
        return groups;
    }
    match mode {
        Mode::Presence => groups.push((ExpressionRange::DETECTED, present)),
        Mode::Level => {
            let cliques: Vec<BTreeSet<ExpressionRange>> = PresentLevel::ALL
                .into_iter()
                .map(|p| {
                    present
                        .iter()
                        .copied()
                        .filter(|r| r.contains(p))
                        .collect::<BTreeSet<_>>()
                })
                .filter(|c| !c.is_empty())
                .collect();
            let mut maximal: Vec<BTreeSet<ExpressionRange>> = Vec::new();
            for c in &cliques {
                let dominated = cliques.iter().any(|d| d != c && c.is_subset(d));
                if !dominated && !maximal.contains(c) {
                    maximal.push(c.clone());
                }
            }
            for clique in maximal {
                let (lo, hi) = clique
                    .iter()
                    .filter_map(|r| r.bounds())
                    .fold((PresentLevel::Weak, PresentLevel::Strong), |(lo, hi), (l, h)| {
                        (lo.max(l), hi.min(h))
                    });
                groups.push((ExpressionRange::Present { lo, hi }, clique));
            }
        }
    }
    groups
}

/// The two-layer tick/cross summary for the annotations in a query's scope.
///
/// Every level group carries the same three attributes: at least two member
/// annotations; no annotation in scope incompatible with the group's claim;
/// at least one direct member. The annotation layer lists, per annotation,
/// every annotation-level rule: ticked when a strengthening rule matches or
/// a weakening rule does not. Labels of weakening schemes should therefore
/// name the absence of the concern ("not propagated from a sub-tissue").
pub fn derive_attributes(
    query: &Query,
    annotations: &[Annotation],
    rules: &[Rule],
    profile: InterpretationProfile,
) -> AttributeReport {
    let mut scope: Vec<&Annotation> = annotations.iter().filter(|a| query.matches(a)).collect();
    scope.sort_by(|a, b| a.id.cmp(&b.id));
    scope.dedup_by(|a, b| a.id == b.id);

    let ranges: BTreeSet<ExpressionRange> = scope.iter().map(|a| a.level).collect();
    let level_layer = level_groups(&ranges, profile.mode)
        .into_iter()
        .map(|(key, clique)| {
            let members: Vec<&Annotation> = scope.iter().copied().filter(|a| clique.contains(&a.level)).collect();
            let conflict = scope.iter().any(|a| !compatible(a.level, key, profile.mode));
            let attr = |name: &str, tick: bool| Attribute {
                name: name.to_owned(),
                indicator: Indicator::from_bool(tick),
            };
            LevelGroup {
                range: key,
                attributes: vec![
                    attr(ATTR_MULTIPLE_AGREE, members.len() >= 2),
                    attr(ATTR_NO_CONFLICT, !conflict),
                    attr(ATTR_DIRECT_SUPPORT, members.iter().any(|a| a.direct)),
                ],
                members: members.into_iter().map(|a| a.id.clone()).collect(),
            }
        })
        .collect();

    let mut annotation_rules: Vec<&Rule> = rules
        .iter()
        .filter(|r| r.polarity.is_annotation_level() && !r.grounding.is_pair())
        .collect();
    annotation_rules.sort_by(|a, b| a.scheme_id.cmp(&b.scheme_id));
    annotation_rules.dedup_by(|a, b| a.scheme_id == b.scheme_id);
    let annotation_layer = scope
        .iter()
        .map(|a| {
            let entries = annotation_rules
                .iter()
                .map(|r| {
                    let matched = r.matches(a);
                    let tick = match r.polarity {
                        Polarity::StrengthensAnnotation => matched,
                        _ => !matched,
                    };
                    AnnotationAttribute {
                        name: r.label.clone(),
                        indicator: Indicator::from_bool(tick),
                        scheme: r.scheme_id.clone(),
                    }
                })
                .collect();
            (a.id.clone(), entries)
        })
        .collect();

    AttributeReport {
        profile,
        level_layer,
        annotation_layer,
    }
}
