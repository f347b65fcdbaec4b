use crate::model::{presence, Annotation, AnnotationId, Query};
use crate::schemes::{Polarity, Rule};

use super::{Argument, Assertion, Claim, Directness};

fn claim_for(rule: &Rule, grounding: &[&Annotation]) -> Option<Assertion> {
    let first = grounding[0];
    match rule.polarity {
        Polarity::SupportsExpression => {
            let range = grounding.iter().skip(1).fold(first.level, |r, a| r.hull(a.level));
            presence(range).then_some(Assertion::Expressed(range))
        }
        Polarity::OpposesExpression => Some(Assertion::NotExpressed),
        Polarity::StrengthensAnnotation if grounding.len() == 1 => {
            Some(Assertion::AnnotationTrustworthy(first.id.clone()))
        }
        Polarity::WeakensAnnotation if grounding.len() == 1 => Some(Assertion::AnnotationSuspect(first.id.clone())),
        _ => None,
    }
}

fn directness(grounding: &[&Annotation]) -> Directness {
    let direct = grounding.iter().filter(|a| a.direct).count();
    match direct {
        0 => Directness::Propagated,
        n if n == grounding.len() => Directness::Direct,
        _ => Directness::Mixed,
    }
}

/// One argument per rule and matching annotation (or annotation pair, for
/// pair-grounded rules) within the query's scope.
///
/// Argument ids follow the sort order of `(scheme id, grounding ids)`, so the
/// output does not depend on the order of `annotations` or `rules`.
pub fn generate_arguments(query: &Query, annotations: &[Annotation], rules: &[Rule]) -> Vec<Argument> {
    let mut scope: Vec<&Annotation> = annotations.iter().filter(|a| query.matches(a)).collect();
    scope.sort_by(|a, b| a.id.cmp(&b.id));
    scope.dedup_by(|a, b| a.id == b.id);

    let mut out: Vec<Argument> = Vec::new();
    let mut push = |rule: &Rule, grounding: &[&Annotation]| {
        if let Some(assertion) = claim_for(rule, grounding) {
            out.push(Argument {
                id: 0,
                scheme: rule.scheme_id.clone(),
                label: rule.label.clone(),
                grounding: grounding.iter().map(|a| a.id.clone()).collect::<Vec<AnnotationId>>(),
                claim: Claim {
                    subject: grounding[0].subject(),
                    assertion,
                },
                confidence: rule.confidence,
                directness: directness(grounding),
            });
        }
    };

    for rule in rules {
        if rule.grounding.is_pair() {
            for (i, a) in scope.iter().enumerate() {
                for b in &scope[i + 1..] {
                    if rule.matches_pair(a, b) {
                        push(rule, &[a, b]);
                    }
                }
            }
        } else {
            for a in scope.iter().filter(|a| rule.matches(a)) {
                push(rule, &[a]);
            }
        }
    }

    out.sort_by(|a, b| (&a.scheme, &a.grounding).cmp(&(&b.scheme, &b.grounding)));
    out.dedup_by(|a, b| a.scheme == b.scheme && a.grounding == b.grounding);
    for (i, arg) in out.iter_mut().enumerate() {
        arg.id = i;
    }
    out
}
