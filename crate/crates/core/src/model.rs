//! Canonical vocabulary shared by every other module: expression levels,
//! Theiler stages, identifiers, annotations and interpretation profiles.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("Theiler stage {0} is outside 1..=28")]
    BadStage(i64),
    #[error("empty {0} identifier")]
    EmptyIdentifier(&'static str),
    #[error("inverted expression interval: {lo} > {hi}")]
    InvertedInterval { lo: PresentLevel, hi: PresentLevel },
    #[error("unknown resource {0:?}")]
    UnknownResource(String),
    #[error("unknown interpretation mode {0:?}")]
    UnknownMode(String),
    #[error("query needs a gene or a tissue")]
    MissingFilter,
}

/// A level at which a gene has been observed to be expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresentLevel {
    Weak = 1,
    Moderate = 2,
    Strong = 3,
}

impl PresentLevel {
    pub const ALL: [PresentLevel; 3] = [Self::Weak, Self::Moderate, Self::Strong];

    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Weak => "weak",
            Self::Moderate => "moderate",
            Self::Strong => "strong",
        }
    }
}

impl fmt::Display for PresentLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Canonical expression claim.
///
/// A present claim is a closed interval over the ordered present levels, so
/// "detected" (level unstated) is `[Weak, Strong]` and GENSAT's "moderate to
/// strong signal" is `[Moderate, Strong]`. Build intervals through
/// [`ExpressionRange::present`] so that `lo <= hi` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExpressionRange {
    NotDetected,
    Present { lo: PresentLevel, hi: PresentLevel },
}

impl ExpressionRange {
    pub const DETECTED: ExpressionRange = ExpressionRange::Present {
        lo: PresentLevel::Weak,
        hi: PresentLevel::Strong,
    };

    pub fn present(lo: PresentLevel, hi: PresentLevel) -> Result<Self, ModelError> {
        if lo > hi {
            return Err(ModelError::InvertedInterval { lo, hi });
        }
        Ok(Self::Present { lo, hi })
    }

    pub fn exactly(level: PresentLevel) -> Self {
        Self::Present { lo: level, hi: level }
    }

    /// All seven distinct values: `NotDetected` plus the six intervals.
    pub fn all() -> Vec<ExpressionRange> {
        let mut out = vec![Self::NotDetected];
        for lo in PresentLevel::ALL {
            for hi in PresentLevel::ALL.into_iter().filter(|hi| *hi >= lo) {
                out.push(Self::Present { lo, hi });
            }
        }
        out
    }

    pub fn bounds(self) -> Option<(PresentLevel, PresentLevel)> {
        match self {
            Self::NotDetected => None,
            Self::Present { lo, hi } => Some((lo, hi)),
        }
    }

    pub fn contains(self, level: PresentLevel) -> bool {
        matches!(self, Self::Present { lo, hi } if lo <= level && level <= hi)
    }

    /// Smallest interval covering both; `NotDetected` only if both are.
    pub fn hull(self, other: ExpressionRange) -> ExpressionRange {
        match (self.bounds(), other.bounds()) {
            (None, None) => Self::NotDetected,
            (Some(b), None) | (None, Some(b)) => Self::Present { lo: b.0, hi: b.1 },
            (Some((l1, h1)), Some((l2, h2))) => Self::Present {
                lo: l1.min(l2),
                hi: h1.max(h2),
            },
        }
    }

    /// Canonical label, parsed back by [`FromStr`].
    pub fn label(self) -> String {
        match self {
            Self::NotDetected => "not detected".to_owned(),
            Self::Present { lo, hi } if lo == hi => lo.name().to_owned(),
            r if r == Self::DETECTED => "detected".to_owned(),
            Self::Present { lo, hi } => format!("{lo} to {hi}"),
        }
    }
}

impl fmt::Display for ExpressionRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for ExpressionRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let level = |name: &str| {
            PresentLevel::ALL
                .into_iter()
                .find(|l| l.name() == name)
                .ok_or_else(|| format!("unknown expression label {s:?}"))
        };
        match s.as_str() {
            "not detected" => Ok(Self::NotDetected),
            "detected" => Ok(Self::DETECTED),
            other => match other.split_once(" to ") {
                Some((lo, hi)) => Self::present(level(lo)?, level(hi)?).map_err(|e| e.to_string()),
                None => Ok(Self::exactly(level(other)?)),
            },
        }
    }
}

impl Serialize for ExpressionRange {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for ExpressionRange {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff the range asserts expression.
pub fn presence(range: ExpressionRange) -> bool {
    !matches!(range, ExpressionRange::NotDetected)
}

/// Granularity at which two expression claims are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Only expressed vs. not expressed matters.
    #[default]
    Presence,
    /// Levels must overlap to agree.
    Level,
}

impl FromStr for Mode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "presence" => Ok(Self::Presence),
            "level" => Ok(Self::Level),
            _ => Err(ModelError::UnknownMode(s.to_owned())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Presence => "presence",
            Self::Level => "level",
        })
    }
}

/// Whether two claims agree under the given granularity.
pub fn compatible(a: ExpressionRange, b: ExpressionRange, mode: Mode) -> bool {
    match mode {
        Mode::Presence => presence(a) == presence(b),
        Mode::Level => match (a.bounds(), b.bounds()) {
            (None, None) => true,
            (Some((l1, h1)), Some((l2, h2))) => l1 <= h2 && l2 <= h1,
            _ => false,
        },
    }
}

/// Developmental stage of the mouse: 1..=26 embryonic, 27 newborn, 28 adult.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TheilerStage(u8);

impl TheilerStage {
    pub const NEWBORN: TheilerStage = TheilerStage(27);
    pub const ADULT: TheilerStage = TheilerStage(28);

    pub fn new(value: i64) -> Result<Self, ModelError> {
        if (1..=28).contains(&value) {
            Ok(Self(value as u8))
        } else {
            Err(ModelError::BadStage(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_developmental(self) -> bool {
        self.0 <= 26
    }
}

impl<'de> Deserialize<'de> for TheilerStage {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Self::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TheilerStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TS{}", self.0)
    }
}

macro_rules! symbol_id {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(value: impl Into<String>) -> Result<Self, ModelError> {
                let value = value.into();
                if value.trim().is_empty() {
                    return Err(ModelError::EmptyIdentifier($what));
                }
                Ok(Self(value))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                Self::new(s).map_err(serde::de::Error::custom)
            }
        }
    };
}

symbol_id!(
    /// Gene symbol, e.g. `bmp4`.
    GeneId,
    "gene"
);
symbol_id!(
    /// Tissue identifier scoped to one stage's anatomy. Case-sensitive.
    TissueId,
    "tissue"
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ResourceId {
    #[serde(rename = "EMAGE")]
    Emage,
    #[serde(rename = "GXD")]
    Gxd,
    #[serde(rename = "ABA")]
    Aba,
    #[serde(rename = "GENSAT")]
    Gensat,
}

impl ResourceId {
    pub const ALL: [ResourceId; 4] = [Self::Emage, Self::Gxd, Self::Aba, Self::Gensat];

    pub fn name(self) -> &'static str {
        match self {
            Self::Emage => "EMAGE",
            Self::Gxd => "GXD",
            Self::Aba => "ABA",
            Self::Gensat => "GENSAT",
        }
    }

    /// EMAGE and GXD annotate directly against EMAP.
    pub fn uses_emap(self) -> bool {
        matches!(self, Self::Emage | Self::Gxd)
    }
}

impl fmt::Display for ResourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ResourceId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ModelError::UnknownResource(s.to_owned()))
    }
}

/// `(resource, local id)`; rendered as `RESOURCE:local`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnnotationId {
    pub resource: ResourceId,
    pub local: String,
}

impl AnnotationId {
    pub fn new(resource: ResourceId, local: impl Into<String>) -> Self {
        Self {
            resource,
            local: local.into(),
        }
    }
}

impl fmt::Display for AnnotationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.resource, self.local)
    }
}

impl FromStr for AnnotationId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (resource, local) = s
            .split_once(':')
            .ok_or_else(|| ModelError::UnknownResource(s.to_owned()))?;
        if local.is_empty() {
            return Err(ModelError::EmptyIdentifier("annotation"));
        }
        Ok(Self::new(resource.parse()?, local))
    }
}

impl Serialize for AnnotationId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AnnotationId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One resource assertion about a gene in a tissue at a stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub id: AnnotationId,
    pub gene: GeneId,
    pub tissue: TissueId,
    pub stage: TheilerStage,
    pub level: ExpressionRange,
    /// `false` for annotations derived by propagation.
    pub direct: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_info: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub technique: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_url: Option<String>,
    /// Set when the tissue came through a lossy anatomy alignment.
    #[serde(default)]
    pub precision_loss: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<AnnotationId>,
    /// Resource-specific fields carried through untouched.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl Annotation {
    /// Minimal direct annotation; optional provenance fields left empty.
    pub fn direct(
        id: AnnotationId,
        gene: GeneId,
        tissue: TissueId,
        stage: TheilerStage,
        level: ExpressionRange,
    ) -> Self {
        Self {
            id,
            gene,
            tissue,
            stage,
            level,
            direct: true,
            probe_info: None,
            technique: None,
            source_url: None,
            precision_loss: false,
            derived_from: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn subject(&self) -> Subject {
        Subject {
            gene: self.gene.clone(),
            tissue: self.tissue.clone(),
            stage: self.stage,
        }
    }

    /// Checks the direct/derived invariant.
    pub fn is_well_formed(&self) -> bool {
        if self.direct {
            self.derived_from.is_none()
        } else {
            self.derived_from.is_some() && presence(self.level)
        }
    }
}

/// The (gene, tissue, stage) triple an expression claim is about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Subject {
    pub gene: GeneId,
    pub tissue: TissueId,
    pub stage: TheilerStage,
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {} / {}", self.gene, self.tissue, self.stage)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct InterpretationProfile {
    pub mode: Mode,
    pub prefer_direct: bool,
}

impl InterpretationProfile {
    pub fn new(mode: Mode, prefer_direct: bool) -> Self {
        Self { mode, prefer_direct }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub gene: Option<GeneId>,
    pub tissue: Option<TissueId>,
    pub stage: Option<TheilerStage>,
    pub profile: InterpretationProfile,
}

impl Query {
    pub fn new(
        gene: Option<GeneId>,
        tissue: Option<TissueId>,
        stage: Option<TheilerStage>,
        profile: InterpretationProfile,
    ) -> Result<Self, ModelError> {
        if gene.is_none() && tissue.is_none() {
            return Err(ModelError::MissingFilter);
        }
        Ok(Self {
            gene,
            tissue,
            stage,
            profile,
        })
    }

    /// Query pinned to one subject.
    pub fn for_subject(subject: &Subject, profile: InterpretationProfile) -> Self {
        Self {
            gene: Some(subject.gene.clone()),
            tissue: Some(subject.tissue.clone()),
            stage: Some(subject.stage),
            profile,
        }
    }

    pub fn matches(&self, a: &Annotation) -> bool {
        self.gene.as_ref().is_none_or(|g| *g == a.gene)
            && self.tissue.as_ref().is_none_or(|t| *t == a.tissue)
            && self.stage.is_none_or(|s| s == a.stage)
    }
}
