use serde::{Deserialize, Serialize};

use crate::model::{Annotation, GeneId, Query, ResourceId, TheilerStage, TissueId};

/// One line of the annotation summary table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub gene: GeneId,
    pub tissue: TissueId,
    pub stage: TheilerStage,
    pub resource: ResourceId,
    pub id: String,
    pub level: String,
    pub direct: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<String>,
}

/// Annotations in the query's scope, sorted by stage, then resource, then id.
pub fn annotation_summary(query: &Query, annotations: &[Annotation]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = annotations
        .iter()
        .filter(|a| query.matches(a))
        .map(|a| SummaryRow {
            gene: a.gene.clone(),
            tissue: a.tissue.clone(),
            stage: a.stage,
            resource: a.id.resource,
            id: a.id.local.clone(),
            level: a.level.label(),
            direct: a.direct,
            derived_from: a.derived_from.as_ref().map(ToString::to_string),
            link: a.source_url.clone(),
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.stage, a.resource, &a.id, &a.gene, &a.tissue).cmp(&(b.stage, b.resource, &b.id, &b.gene, &b.tissue))
    });
    rows
}
