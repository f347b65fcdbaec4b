use std::collections::BTreeMap;

use argudas_core::model::*;
use argudas_core::schemes::*;
use num_rational::Ratio;
use proptest::prelude::*;
use serde_json::{json, Value};

const SCORES_68: &str = include_str!("../data/expert_scores_68.json");

#[test]
fn expert_fixture_reproduces_reported_totals() {
    let cat = parse_scheme_catalog(SCORES_68).unwrap();
    assert_eq!(cat.len(), 68);
    let r = cat.agreement_report("expert_a", "expert_b").unwrap();
    assert_eq!((r.exact, r.similar, r.disagree), (16, 33, 19));
    assert_eq!(r.broad_agreement, Ratio::new(49, 68));
    assert!((r.broad_percent() - 72.06).abs() < 0.01);
    assert_eq!(r.to_string(), "exact=16 similar=33 disagree=19 broad=72.1%");
}

#[test]
fn scoring_changes_report_deterministically() {
    let mini = r#"[
        {"id": "a", "description": "a", "polarity": "supports_expression",
         "conditions": [{"field": "level", "op": "presence_is", "value": true}],
         "scores": {"x": "2", "y": "2"}},
        {"id": "b", "description": "b", "polarity": "opposes_expression",
         "conditions": [{"field": "level", "op": "presence_is", "value": false}],
         "scores": {"x": "?", "y": "1"}},
        {"id": "c", "description": "c", "polarity": "strengthens_annotation",
         "conditions": [{"field": "probe_info", "op": "is_set"}],
         "scores": {"x": "3", "y": "0"}}
    ]"#;
    let mut cat = parse_scheme_catalog(mini).unwrap();
    // by hand: a exact, b similar (ordinals 1, 2), c disagree (4, 0)
    assert_eq!(
        cat.agreement_report("x", "y").unwrap().to_string(),
        "exact=1 similar=1 disagree=1 broad=66.7%"
    );
    cat.record_score("c", "y", ExpertScore::Two).unwrap();
    // c becomes similar (4, 3)
    assert_eq!(
        cat.agreement_report("x", "y").unwrap().to_string(),
        "exact=1 similar=2 disagree=0 broad=100.0%"
    );
    cat.record_score("b", "x", ExpertScore::Three).unwrap();
    // b becomes disagree (4, 2)
    assert_eq!(
        cat.agreement_report("x", "y").unwrap().to_string(),
        "exact=1 similar=1 disagree=1 broad=66.7%"
    );
}

#[test]
fn default_catalog_covers_named_patterns() {
    let cat = SchemeCatalog::default_catalog();
    let probe = cat.get("probe-info-recorded").unwrap();
    assert_eq!(probe.polarity, Polarity::StrengthensAnnotation);
    assert!(!probe.critical_questions.is_empty());
    assert_eq!(
        cat.get("multi-resource-agreement").unwrap().grounding,
        Grounding::CrossResourcePair
    );
    assert_eq!(
        cat.get("direct-annotation").unwrap().polarity,
        Polarity::StrengthensAnnotation
    );
}

fn score() -> impl Strategy<Value = ExpertScore> {
    proptest::sample::select(ExpertScore::ALL.to_vec())
}

proptest! {
    #[test]
    fn aggregation_is_permutation_invariant_and_monotone(
        scores in proptest::collection::vec(score(), 1..6),
        bump in 0usize..6,
    ) {
        let named = |v: &[ExpertScore], offset: usize| -> BTreeMap<String, ExpertScore> {
            v.iter().enumerate().map(|(i, s)| (format!("e{}", (i + offset) % v.len()), *s)).collect()
        };
        let base = aggregate_confidence(&named(&scores, 0)).unwrap();
        let rotated = aggregate_confidence(&named(&scores, 3)).unwrap();
        prop_assert_eq!(base, rotated);

        let mut raised = scores.clone();
        let i = bump % raised.len();
        raised[i] = ExpertScore::from_ordinal((raised[i].ordinal() + 1).min(4)).unwrap();
        let after = aggregate_confidence(&named(&raised, 0)).unwrap();
        prop_assert!(after.ordinal >= base.ordinal);
        prop_assert_eq!(base.enabled, base.ordinal >= 2);
    }

    #[test]
    fn counts_partition_catalog(pairs in proptest::collection::vec((score(), score()), 1..30)) {
        let schemes: Vec<Value> = pairs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| json!({
                "id": format!("s{i}"), "description": "d", "polarity": "supports_expression",
                "conditions": [{"field": "direct", "op": "equals", "value": true}],
                "scores": {"a": a.symbol(), "b": b.symbol()}
            }))
            .collect();
        let cat = SchemeCatalog::new(serde_json::from_value(Value::Array(schemes)).unwrap()).unwrap();
        let r = cat.agreement_report("a", "b").unwrap();
        prop_assert_eq!(r.exact + r.similar + r.disagree, pairs.len());
    }
}

/// Independent interpreter working on the JSON form of a condition.
fn naive_holds(cond: &Value, a: &Annotation) -> bool {
    let field = cond["field"].as_str().unwrap();
    let op = cond["op"].as_str().unwrap();
    let value = &cond["value"];
    let actual: Option<Value> = match field {
        "level" => Some(json!(a.level.label())),
        "direct" => Some(json!(a.direct)),
        "probe_info" => a.probe_info.map(Value::Bool),
        "technique" => a.technique.clone().map(Value::String),
        "resource" => Some(json!(a.id.resource.name())),
        "source_url" => a.source_url.clone().map(Value::String),
        "precision_loss" => Some(json!(a.precision_loss)),
        other => panic!("{other}"),
    };
    match op {
        "is_set" => actual.is_some(),
        "is_absent" => actual.is_none(),
        "presence_is" => (a.level != ExpressionRange::NotDetected) == value.as_bool().unwrap(),
        "equals" => actual.as_ref() == Some(value),
        "not_equals" => actual.as_ref() != Some(value),
        other => panic!("{other}"),
    }
}

fn condition() -> impl Strategy<Value = Value> {
    let level_labels: Vec<String> = ExpressionRange::all().iter().map(|r| r.label()).collect();
    prop_oneof![
        proptest::sample::select(level_labels.clone()).prop_flat_map(|l| proptest::sample::select(vec![
            "equals",
            "not_equals"
        ])
        .prop_map(move |op| json!({"field": "level", "op": op, "value": l}))),
        any::<bool>().prop_map(|b| json!({"field": "level", "op": "presence_is", "value": b})),
        (
            proptest::sample::select(vec!["direct", "probe_info", "precision_loss"]),
            proptest::sample::select(vec!["equals", "not_equals"]),
            any::<bool>()
        )
            .prop_map(|(f, op, b)| json!({"field": f, "op": op, "value": b})),
        (
            proptest::sample::select(vec!["probe_info", "technique", "source_url", "level"]),
            proptest::sample::select(vec!["is_set", "is_absent"])
        )
            .prop_map(|(f, op)| json!({"field": f, "op": op})),
        (
            proptest::sample::select(vec!["EMAGE", "GXD", "ABA", "GENSAT"]),
            proptest::sample::select(vec!["equals", "not_equals"])
        )
            .prop_map(|(r, op)| json!({"field": "resource", "op": op, "value": r})),
        (
            proptest::sample::select(vec!["ISH", "RNA in situ"]),
            proptest::sample::select(vec!["equals", "not_equals"])
        )
            .prop_map(|(t, op)| json!({"field": "technique", "op": op, "value": t})),
    ]
}

fn annotation() -> impl Strategy<Value = Annotation> {
    (
        proptest::sample::select(ResourceId::ALL.to_vec()),
        proptest::sample::select(ExpressionRange::all()),
        any::<bool>(),
        proptest::option::of(any::<bool>()),
        proptest::option::of(proptest::sample::select(vec![
            "ISH".to_string(),
            "RNA in situ".to_string(),
        ])),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(res, level, direct, probe, tech, url, loss)| {
            let mut a = Annotation::direct(
                AnnotationId::new(res, "1"),
                GeneId::new("bmp4").unwrap(),
                TissueId::new("future brain").unwrap(),
                TheilerStage::new(15).unwrap(),
                level,
            );
            if !direct && level != ExpressionRange::NotDetected {
                a.direct = false;
                a.derived_from = Some(AnnotationId::new(res, "0"));
            }
            a.probe_info = probe;
            a.technique = tech;
            a.source_url = url.then(|| "https://example.org".to_string());
            a.precision_loss = loss;
            a
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn compiled_rule_agrees_with_naive_interpreter(
        conds in proptest::collection::vec(condition(), 1..4),
        a in annotation(),
    ) {
        let doc = json!([{
            "id": "s", "description": "generated", "polarity": "supports_expression",
            "conditions": conds, "scores": {"x": "2"}
        }]);
        let cat = parse_scheme_catalog(&doc.to_string()).unwrap();
        let rule = compile(&cat.schemes()[0]).unwrap();
        let want = conds.iter().all(|c| naive_holds(c, &a));
        prop_assert_eq!(rule.matches(&a), want);
    }
}
