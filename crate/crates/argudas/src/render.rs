//! Plain-text tables for terminal output.

use std::fmt::Write;

use argudas_core::argumentation::{ArgueOutcome, SummaryRow};
use argudas_core::ingest::IngestReport;
use argudas_core::schemes::AgreementReport;
use argudas_core::Subject;

/// Left-aligned columns separated by two spaces, trailing blanks trimmed.
pub fn table(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            let pad = widths[c] - cell.chars().count();
            line.extend(std::iter::repeat_n(' ', pad));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn cells<const N: usize>(values: [&str; N]) -> Vec<String> {
    values.iter().map(|s| s.to_string()).collect()
}

pub fn ingest_report(report: &IngestReport) -> String {
    let mut out = format!("{report}\n");
    for e in &report.excluded {
        let _ = writeln!(out, "excluded {}:{} {} ({})", e.resource, e.id, e.reason, e.detail);
    }
    out
}

pub fn summary(rows: &[SummaryRow]) -> String {
    if rows.is_empty() {
        return "no annotations\n".to_owned();
    }
    let mut t = vec![cells([
        "STAGE",
        "RESOURCE",
        "ID",
        "GENE",
        "TISSUE",
        "LEVEL",
        "ANNOTATION",
        "LINK",
    ])];
    for r in rows {
        let kind = match &r.derived_from {
            Some(origin) => format!("propagated from {origin}"),
            None => "direct".to_owned(),
        };
        t.push(vec![
            r.stage.to_string(),
            r.resource.to_string(),
            r.id.clone(),
            r.gene.to_string(),
            r.tissue.to_string(),
            r.level.clone(),
            kind,
            r.link.clone().unwrap_or_default(),
        ]);
    }
    table(&t)
}

pub fn argue(subject: &Subject, outcome: &ArgueOutcome, expanded: bool) -> String {
    let report = &outcome.report;
    let mut out = String::new();
    let _ = writeln!(out, "subject  {subject}");
    let _ = writeln!(
        out,
        "profile  mode={} prefer_direct={}",
        report.profile.mode,
        if report.profile.prefer_direct { "yes" } else { "no" }
    );
    let _ = writeln!(
        out,
        "arguments={} attacks={}",
        outcome.arguments.len(),
        outcome.attacks.len()
    );
    out.push('\n');

    if report.level_layer.is_empty() {
        out.push_str("no annotations in scope\n");
    } else {
        let mut t = vec![cells(["LEVEL", "", "ATTRIBUTE", "ANNOTATIONS"])];
        for group in &report.level_layer {
            for (i, attr) in group.attributes.iter().enumerate() {
                let (level, members) = if i == 0 {
                    let ids: Vec<String> = group.members.iter().map(ToString::to_string).collect();
                    (group.range.to_string(), ids.join(", "))
                } else {
                    (String::new(), String::new())
                };
                t.push(vec![level, attr.indicator.to_string(), attr.name.clone(), members]);
            }
        }
        out.push_str(&table(&t));
    }

    if expanded && !report.annotation_layer.is_empty() {
        out.push('\n');
        let mut t = vec![cells(["ANNOTATION", "", "ATTRIBUTE", "SCHEME"])];
        for (id, attrs) in &report.annotation_layer {
            for (i, a) in attrs.iter().enumerate() {
                let name = if i == 0 { id.to_string() } else { String::new() };
                t.push(vec![name, a.indicator.to_string(), a.name.clone(), a.scheme.clone()]);
            }
        }
        out.push_str(&table(&t));
    }

    if let Some(labels) = &outcome.labels {
        out.push('\n');
        let mut t = vec![cells(["ID", "VERDICT", "SCHEME", "CLAIM", "GROUNDING"])];
        for arg in &outcome.arguments {
            let grounding: Vec<String> = arg.grounding.iter().map(ToString::to_string).collect();
            t.push(vec![
                arg.id.to_string(),
                labels[&arg.id].verdict().to_owned(),
                arg.scheme.clone(),
                arg.claim.assertion.to_string(),
                grounding.join(", "),
            ]);
        }
        out.push_str(&table(&t));
    }
    out
}

pub fn agreement(expert_a: &str, expert_b: &str, report: &AgreementReport) -> String {
    format!("experts {expert_a} {expert_b}\n{report}\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align() {
        let t = table(&[cells(["a", "bb", ""]), cells(["ccc", "d", "e"])]);
        assert_eq!(t, "a    bb\nccc  d   e\n");
    }
}
