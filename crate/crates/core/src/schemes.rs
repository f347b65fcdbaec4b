//! Argumentation schemes as data: expert scoring, agreement analytics and
//! compilation into executable rules over annotation fields.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::model::{compatible, presence, Annotation, ExpressionRange, Mode, ResourceId};

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("malformed scheme catalog: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("scheme id {0:?} used twice")]
    DuplicateSchemeId(String),
    #[error("scheme {scheme:?}: {reason}")]
    MalformedCondition { scheme: String, reason: String },
    #[error("invalid score {0:?}; expected one of 0 ? 1 2 3")]
    InvalidScore(String),
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("missing scores for schemes: {}", .0.join(", "))]
    MissingScore(Vec<String>),
    #[error("catalog is empty")]
    EmptyCatalog,
    #[error("scheme has no expert scores")]
    NoScores,
    #[error("scheme {0:?} is disabled by its expert scores")]
    DisabledScheme(String),
}

/// An expert's confidence in a scheme. `?` sits between rejection and a weak
/// scheme, so the ordinal embedding is 0 -> 0, ? -> 1, 1 -> 2, 2 -> 3, 3 -> 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExpertScore {
    Zero,
    Unsure,
    One,
    Two,
    Three,
}

impl ExpertScore {
    pub const ALL: [ExpertScore; 5] = [Self::Zero, Self::Unsure, Self::One, Self::Two, Self::Three];

    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn from_ordinal(ordinal: u8) -> Option<Self> {
        Self::ALL.get(usize::from(ordinal)).copied()
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Zero => "0",
            Self::Unsure => "?",
            Self::One => "1",
            Self::Two => "2",
            Self::Three => "3",
        }
    }
}

impl fmt::Display for ExpertScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for ExpertScore {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.symbol() == s.trim())
            .ok_or_else(|| SchemeError::InvalidScore(s.to_owned()))
    }
}

impl Serialize for ExpertScore {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for ExpertScore {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgreementClass {
    Exact,
    Similar,
    Disagree,
}

pub fn classify_agreement(a: ExpertScore, b: ExpertScore) -> AgreementClass {
    match a.ordinal().abs_diff(b.ordinal()) {
        0 => AgreementClass::Exact,
        1 => AgreementClass::Similar,
        _ => AgreementClass::Disagree,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    SupportsExpression,
    OpposesExpression,
    StrengthensAnnotation,
    WeakensAnnotation,
}

impl Polarity {
    /// Whether the rule speaks about an annotation rather than about expression.
    pub fn is_annotation_level(self) -> bool {
        matches!(self, Self::StrengthensAnnotation | Self::WeakensAnnotation)
    }
}

/// How many annotations ground one instance of a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grounding {
    /// One annotation satisfying every condition.
    #[default]
    Single,
    /// Two distinct annotations on the same subject, each satisfying every
    /// condition, whose presence claims agree.
    AgreeingPair,
    /// As [`Grounding::AgreeingPair`], from two different resources.
    CrossResourcePair,
}

impl Grounding {
    pub fn is_pair(self) -> bool {
        !matches!(self, Self::Single)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Level,
    Direct,
    ProbeInfo,
    Technique,
    Resource,
    SourceUrl,
    PrecisionLoss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Equals,
    NotEquals,
    IsSet,
    IsAbsent,
    PresenceIs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Bool(bool),
    Text(String),
}

/// One premise of a scheme, as written in a catalog file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub field: Field,
    pub op: Operator,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Literal>,
}

/// A condition checked for arity and type, ready to run.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Test {
    LevelIs(ExpressionRange, bool),
    PresenceIs(bool),
    FlagIs(Field, bool, bool),
    TextIs(Field, String, bool),
    ResourceIs(ResourceId, bool),
    Set(Field, bool),
}

impl Condition {
    fn check(&self) -> Result<Test, String> {
        use Field::*;
        use Operator::*;
        let eq = matches!(self.op, Equals);
        match (self.op, &self.value) {
            (IsSet | IsAbsent, Some(_)) => Err(format!("{:?} takes no value", self.op)),
            (IsSet | IsAbsent, None) => Ok(Test::Set(self.field, matches!(self.op, IsSet))),
            (_, None) => Err(format!("{:?} needs a value", self.op)),
            (PresenceIs, Some(Literal::Bool(b))) if self.field == Level => Ok(Test::PresenceIs(*b)),
            (PresenceIs, _) => Err("presence_is applies to level with a boolean".into()),
            (Equals | NotEquals, Some(value)) => match (self.field, value) {
                (Level, Literal::Text(s)) => s
                    .parse::<ExpressionRange>()
                    .map(|r| Test::LevelIs(r, eq))
                    .map_err(|e| e.to_string()),
                (Resource, Literal::Text(s)) => s
                    .parse::<ResourceId>()
                    .map(|r| Test::ResourceIs(r, eq))
                    .map_err(|e| e.to_string()),
                (Direct | ProbeInfo | PrecisionLoss, Literal::Bool(b)) => Ok(Test::FlagIs(self.field, *b, eq)),
                (Technique | SourceUrl, Literal::Text(s)) => Ok(Test::TextIs(self.field, s.clone(), eq)),
                (field, value) => Err(format!("{field:?} cannot be compared with {value:?}")),
            },
        }
    }

    /// Direct interpretation of the condition against one annotation.
    pub fn holds(&self, a: &Annotation) -> bool {
        self.check().map(|t| t.eval(a)).unwrap_or(false)
    }
}

impl Test {
    fn eval(&self, a: &Annotation) -> bool {
        match self {
            Test::LevelIs(r, eq) => (a.level == *r) == *eq,
            Test::PresenceIs(b) => presence(a.level) == *b,
            Test::ResourceIs(r, eq) => (a.id.resource == *r) == *eq,
            Test::FlagIs(field, b, eq) => {
                let actual = match field {
                    Field::Direct => Some(a.direct),
                    Field::ProbeInfo => a.probe_info,
                    Field::PrecisionLoss => Some(a.precision_loss),
                    _ => unreachable!("checked in Condition::check"),
                };
                (actual == Some(*b)) == *eq
            }
            Test::TextIs(field, s, eq) => {
                let actual = match field {
                    Field::Technique => a.technique.as_deref(),
                    Field::SourceUrl => a.source_url.as_deref(),
                    _ => unreachable!("checked in Condition::check"),
                };
                (actual == Some(s.as_str())) == *eq
            }
            Test::Set(field, want) => {
                let set = match field {
                    Field::ProbeInfo => a.probe_info.is_some(),
                    Field::Technique => a.technique.is_some(),
                    Field::SourceUrl => a.source_url.is_some(),
                    Field::Level | Field::Direct | Field::Resource | Field::PrecisionLoss => true,
                };
                set == *want
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scheme {
    pub id: String,
    pub description: String,
    /// Short display text; derived from the description when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub polarity: Polarity,
    #[serde(default, skip_serializing_if = "is_single")]
    pub grounding: Grounding,
    pub conditions: Vec<Condition>,
    #[serde(default)]
    pub critical_questions: Vec<String>,
    #[serde(default)]
    pub scores: BTreeMap<String, ExpertScore>,
}

fn is_single(g: &Grounding) -> bool {
    *g == Grounding::Single
}

impl Scheme {
    fn validate(&self) -> Result<Vec<Test>, SchemeError> {
        let malformed = |reason: String| SchemeError::MalformedCondition {
            scheme: self.id.clone(),
            reason,
        };
        if self.id.trim().is_empty() {
            return Err(malformed("empty scheme id".into()));
        }
        if self.conditions.is_empty() {
            return Err(malformed("no conditions".into()));
        }
        if self.grounding.is_pair() && self.polarity.is_annotation_level() {
            return Err(malformed("pair grounding needs an expression polarity".into()));
        }
        self.conditions.iter().map(|c| c.check().map_err(&malformed)).collect()
    }

    pub fn display_label(&self) -> String {
        if let Some(label) = &self.label {
            return label.clone();
        }
        let first = self.description.split(['.', ';']).next().unwrap_or_default().trim();
        let mut label: String = first.chars().take(60).collect();
        if first.chars().count() > 60 {
            label.push_str("...");
        }
        label
    }

    pub fn confidence(&self) -> Result<Confidence, SchemeError> {
        aggregate_confidence(&self.scores)
    }
}

/// Aggregated confidence of a scheme over all its experts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confidence {
    pub ordinal: u8,
    pub enabled: bool,
}

/// Mean of the expert ordinals, rounded half up; a scheme is enabled at
/// "weak" (ordinal 2) or better.
pub fn aggregate_confidence(scores: &BTreeMap<String, ExpertScore>) -> Result<Confidence, SchemeError> {
    if scores.is_empty() {
        return Err(SchemeError::NoScores);
    }
    let n = scores.len() as u32;
    let sum: u32 = scores.values().map(|s| u32::from(s.ordinal())).sum();
    let ordinal = ((2 * sum + n) / (2 * n)) as u8;
    Ok(Confidence {
        ordinal,
        enabled: ordinal >= 2,
    })
}

/// Executable form of an enabled scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub scheme_id: String,
    pub label: String,
    pub polarity: Polarity,
    pub grounding: Grounding,
    pub confidence: u8,
    conditions: Vec<Test>,
}

impl Rule {
    /// Every condition holds for `a`.
    pub fn matches(&self, a: &Annotation) -> bool {
        self.conditions.iter().all(|t| t.eval(a))
    }

    /// Pair grounding: both match, same subject, presence claims agree, and
    /// for cross-resource pairs the resources differ.
    pub fn matches_pair(&self, a: &Annotation, b: &Annotation) -> bool {
        if !self.grounding.is_pair() || a.id == b.id {
            return false;
        }
        let resources_ok = self.grounding != Grounding::CrossResourcePair || a.id.resource != b.id.resource;
        resources_ok
            && a.gene == b.gene
            && a.tissue == b.tissue
            && a.stage == b.stage
            && compatible(a.level, b.level, Mode::Presence)
            && self.matches(a)
            && self.matches(b)
    }
}

pub fn compile(scheme: &Scheme) -> Result<Rule, SchemeError> {
    let conditions = scheme.validate()?;
    let confidence = scheme.confidence()?;
    if !confidence.enabled {
        return Err(SchemeError::DisabledScheme(scheme.id.clone()));
    }
    Ok(Rule {
        scheme_id: scheme.id.clone(),
        label: scheme.display_label(),
        polarity: scheme.polarity,
        grounding: scheme.grounding,
        confidence: confidence.ordinal,
        conditions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub exact: usize,
    pub similar: usize,
    pub disagree: usize,
    pub total: usize,
    /// `(exact + similar) / total`.
    pub broad_agreement: Ratio<usize>,
}

impl AgreementReport {
    pub fn broad_percent(&self) -> f64 {
        100.0 * *self.broad_agreement.numer() as f64 / *self.broad_agreement.denom() as f64
    }
}

impl fmt::Display for AgreementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exact={} similar={} disagree={} broad={:.1}%",
            self.exact,
            self.similar,
            self.disagree,
            self.broad_percent()
        )
    }
}

/// Validated, ordered scheme catalog.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchemeCatalog {
    schemes: Vec<Scheme>,
    index: HashMap<String, usize>,
}

pub const DEFAULT_CATALOG_JSON: &str = include_str!("../data/schemes.json");

impl SchemeCatalog {
    pub fn new(schemes: Vec<Scheme>) -> Result<Self, SchemeError> {
        let mut index = HashMap::with_capacity(schemes.len());
        for (i, s) in schemes.iter().enumerate() {
            s.validate()?;
            if index.insert(s.id.clone(), i).is_some() {
                return Err(SchemeError::DuplicateSchemeId(s.id.clone()));
            }
        }
        Ok(Self { schemes, index })
    }

    pub fn default_catalog() -> Self {
        parse_scheme_catalog(DEFAULT_CATALOG_JSON).expect("bundled catalog is valid")
    }

    pub fn schemes(&self) -> &[Scheme] {
        &self.schemes
    }

    pub fn len(&self) -> usize {
        self.schemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemes.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Scheme> {
        self.index.get(id).map(|&i| &self.schemes[i])
    }

    pub fn record_score(&mut self, id: &str, expert: &str, score: ExpertScore) -> Result<(), SchemeError> {
        let &i = self
            .index
            .get(id)
            .ok_or_else(|| SchemeError::UnknownScheme(id.to_owned()))?;
        self.schemes[i].scores.insert(expert.to_owned(), score);
        Ok(())
    }

    pub fn experts(&self) -> BTreeSet<&str> {
        self.schemes
            .iter()
            .flat_map(|s| s.scores.keys().map(String::as_str))
            .collect()
    }

    /// Rules for every scheme enabled by its scores, in catalog order.
    /// Unscored and disabled schemes are skipped.
    pub fn rules(&self) -> Vec<Rule> {
        self.schemes.iter().filter_map(|s| compile(s).ok()).collect()
    }

    pub fn agreement_report(&self, expert_a: &str, expert_b: &str) -> Result<AgreementReport, SchemeError> {
        if self.schemes.is_empty() {
            return Err(SchemeError::EmptyCatalog);
        }
        let mut missing = Vec::new();
        let (mut exact, mut similar, mut disagree) = (0, 0, 0);
        for s in &self.schemes {
            match (s.scores.get(expert_a), s.scores.get(expert_b)) {
                (Some(&a), Some(&b)) => match classify_agreement(a, b) {
                    AgreementClass::Exact => exact += 1,
                    AgreementClass::Similar => similar += 1,
                    AgreementClass::Disagree => disagree += 1,
                },
                _ => missing.push(s.id.clone()),
            }
        }
        if !missing.is_empty() {
            return Err(SchemeError::MissingScore(missing));
        }
        let total = self.schemes.len();
        Ok(AgreementReport {
            exact,
            similar,
            disagree,
            total,
            broad_agreement: Ratio::new(exact + similar, total),
        })
    }
}

pub fn parse_scheme_catalog(text: &str) -> Result<SchemeCatalog, SchemeError> {
    SchemeCatalog::new(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AnnotationId, GeneId, PresentLevel, TheilerStage, TissueId};
    use ExpertScore::*;

    fn scores(pairs: &[(&str, ExpertScore)]) -> BTreeMap<String, ExpertScore> {
        pairs.iter().map(|(e, s)| (e.to_string(), *s)).collect()
    }

    fn scheme(id: &str, polarity: Polarity, conditions: Vec<Condition>, sc: &[(&str, ExpertScore)]) -> Scheme {
        Scheme {
            id: id.into(),
            description: format!("{id} description"),
            label: None,
            polarity,
            grounding: Grounding::Single,
            conditions,
            critical_questions: vec![],
            scores: scores(sc),
        }
    }

    fn cond(field: Field, op: Operator, value: Option<Literal>) -> Condition {
        Condition { field, op, value }
    }

    fn ann(level: ExpressionRange) -> Annotation {
        Annotation::direct(
            AnnotationId::new(ResourceId::Emage, "1"),
            GeneId::new("bmp4").unwrap(),
            TissueId::new("future brain").unwrap(),
            TheilerStage::new(15).unwrap(),
            level,
        )
    }

    #[test]
    fn score_symbols_and_ordinals() {
        let want = [("0", 0), ("?", 1), ("1", 2), ("2", 3), ("3", 4)];
        for (sym, ord) in want {
            let s: ExpertScore = sym.parse().unwrap();
            assert_eq!(s.ordinal(), ord);
            assert_eq!(s.symbol(), sym);
            assert_eq!(ExpertScore::from_ordinal(ord), Some(s));
        }
        assert!(matches!("5".parse::<ExpertScore>(), Err(SchemeError::InvalidScore(_))));
    }

    #[test]
    fn agreement_examples() {
        assert_eq!(classify_agreement(Two, Two), AgreementClass::Exact);
        assert_eq!(classify_agreement(Two, One), AgreementClass::Similar);
        assert_eq!(classify_agreement(Two, Three), AgreementClass::Similar);
        assert_eq!(classify_agreement(Three, Zero), AgreementClass::Disagree);
        assert_eq!(classify_agreement(Zero, Unsure), AgreementClass::Similar);
    }

    #[test]
    fn agreement_symmetric_exhaustive() {
        for a in ExpertScore::ALL {
            for b in ExpertScore::ALL {
                assert_eq!(classify_agreement(a, b), classify_agreement(b, a));
            }
        }
    }

    #[test]
    fn aggregate_examples() {
        let c = aggregate_confidence(&scores(&[("A", Two), ("B", One)])).unwrap();
        assert_eq!(
            c,
            Confidence {
                ordinal: 3,
                enabled: true
            }
        );
        let c = aggregate_confidence(&scores(&[("A", Zero)])).unwrap();
        assert_eq!(
            c,
            Confidence {
                ordinal: 0,
                enabled: false
            }
        );
        let c = aggregate_confidence(&scores(&[("A", Three), ("B", Three)])).unwrap();
        assert_eq!(
            c,
            Confidence {
                ordinal: 4,
                enabled: true
            }
        );
        // "?" and "1": (1 + 2) / 2 = 1.5 -> 2
        let c = aggregate_confidence(&scores(&[("A", Unsure), ("B", One)])).unwrap();
        assert_eq!(
            c,
            Confidence {
                ordinal: 2,
                enabled: true
            }
        );
        assert!(matches!(
            aggregate_confidence(&BTreeMap::new()),
            Err(SchemeError::NoScores)
        ));
    }

    #[test]
    fn report_single_and_empty() {
        let present = cond(Field::Level, Operator::PresenceIs, Some(Literal::Bool(true)));
        let cat = SchemeCatalog::new(vec![scheme(
            "s1",
            Polarity::SupportsExpression,
            vec![present],
            &[("A", One), ("B", One)],
        )])
        .unwrap();
        let r = cat.agreement_report("A", "B").unwrap();
        assert_eq!((r.exact, r.similar, r.disagree), (1, 0, 0));
        assert_eq!(r.broad_agreement, Ratio::new(1, 1));
        assert!(matches!(
            SchemeCatalog::default().agreement_report("A", "B"),
            Err(SchemeError::EmptyCatalog)
        ));
        match cat.agreement_report("A", "C") {
            Err(SchemeError::MissingScore(ids)) => assert_eq!(ids, vec!["s1".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_and_duplicates() {
        let one = r#"[{"id": "s1", "description": "d", "polarity": "supports_expression",
                        "conditions": [{"field": "level", "op": "presence_is", "value": true}],
                        "critical_questions": ["q?"], "scores": {"A": "2", "B": "?"}}]"#;
        let cat = parse_scheme_catalog(one).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat.schemes()[0].scores["B"], Unsure);

        let dup = r#"[{"id": "s1", "description": "d", "polarity": "supports_expression",
                       "conditions": [{"field": "direct", "op": "equals", "value": true}]},
                      {"id": "s1", "description": "d", "polarity": "opposes_expression",
                       "conditions": [{"field": "direct", "op": "equals", "value": true}]}]"#;
        assert!(matches!(
            parse_scheme_catalog(dup),
            Err(SchemeError::DuplicateSchemeId(_))
        ));
    }

    #[test]
    fn malformed_conditions() {
        let bad = [
            cond(Field::ProbeInfo, Operator::IsSet, Some(Literal::Bool(true))),
            cond(Field::Direct, Operator::Equals, None),
            cond(Field::Direct, Operator::PresenceIs, Some(Literal::Bool(true))),
            cond(Field::Level, Operator::Equals, Some(Literal::Text("huge".into()))),
            cond(Field::Resource, Operator::Equals, Some(Literal::Text("NCBI".into()))),
            cond(Field::Direct, Operator::Equals, Some(Literal::Text("yes".into()))),
        ];
        for c in bad {
            let s = scheme("x", Polarity::SupportsExpression, vec![c.clone()], &[("A", Three)]);
            assert!(
                matches!(SchemeCatalog::new(vec![s]), Err(SchemeError::MalformedCondition { .. })),
                "{c:?}"
            );
        }
        let empty = scheme("x", Polarity::SupportsExpression, vec![], &[("A", Three)]);
        assert!(SchemeCatalog::new(vec![empty]).is_err());
    }

    #[test]
    fn compile_examples() {
        let probe = scheme(
            "probe-info-recorded",
            Polarity::StrengthensAnnotation,
            vec![cond(Field::ProbeInfo, Operator::IsSet, None)],
            &[("A", Three)],
        );
        let rule = compile(&probe).unwrap();
        assert_eq!(rule.confidence, 4);
        let mut a = ann(ExpressionRange::exactly(PresentLevel::Strong));
        assert!(!rule.matches(&a));
        a.probe_info = Some(true);
        assert!(rule.matches(&a));

        let present = scheme(
            "present",
            Polarity::SupportsExpression,
            vec![cond(Field::Level, Operator::PresenceIs, Some(Literal::Bool(true)))],
            &[("A", Two)],
        );
        let rule = compile(&present).unwrap();
        assert!(rule.matches(&ann(ExpressionRange::DETECTED)));
        assert!(!rule.matches(&ann(ExpressionRange::NotDetected)));

        let disabled = scheme(
            "off",
            Polarity::SupportsExpression,
            present.conditions.clone(),
            &[("A", Zero)],
        );
        assert!(matches!(compile(&disabled), Err(SchemeError::DisabledScheme(_))));
    }

    #[test]
    fn record_score_updates_confidence() {
        let mut cat = SchemeCatalog::default_catalog();
        let id = cat.schemes()[0].id.clone();
        cat.record_score(&id, "expert_c", Unsure).unwrap();
        assert_eq!(cat.get(&id).unwrap().scores["expert_c"], Unsure);
        assert!(matches!(
            cat.record_score("nope", "x", One),
            Err(SchemeError::UnknownScheme(_))
        ));
    }

    #[test]
    fn default_catalog_shape() {
        let cat = SchemeCatalog::default_catalog();
        assert_eq!(cat.len(), 13);
        for id in ["probe-info-recorded", "direct-annotation", "multi-resource-agreement"] {
            assert!(cat.get(id).is_some(), "{id}");
        }
        assert_eq!(cat.rules().len(), 13);
        assert_eq!(cat.experts().into_iter().collect::<Vec<_>>(), ["expert_a", "expert_b"]);
    }
}
