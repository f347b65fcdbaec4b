use std::collections::{BTreeMap, VecDeque};

use argudas_core::mapping::{Cutoffs, MappingError, ThresholdRecord, Thresholds};
use argudas_core::model::{ExpressionRange, PresentLevel, TissueId};
use argudas_core::ontology::{AnatomyGraph, EdgeRecord, NodeRecord, OntologyDocument};
use proptest::prelude::*;

fn tissue(i: usize) -> TissueId {
    TissueId::new(format!("n{i:02}")).unwrap()
}

#[derive(Debug, Clone)]
struct Case {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// (tissue, weak, moderate, strong)
    table: Vec<(usize, f64, f64, f64)>,
    target: usize,
    value: f64,
}

fn case() -> impl Strategy<Value = Case> {
    (2usize..=12).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        let cut = (0.0f64..3.0, 0.01f64..2.0, 0.01f64..2.0);
        (
            Just(n),
            proptest::sample::subsequence(pairs, 0..=len.min(24)),
            proptest::collection::btree_map(0..n, cut, 1..=n),
            0..n,
            prop_oneof![
                0.0f64..8.0,
                proptest::sample::select(vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0])
            ],
        )
            .prop_map(|(n, edges, table, target, value)| Case {
                n,
                edges,
                table: table
                    .into_iter()
                    .map(|(t, (w, dm, ds))| (t, w, w + dm, w + dm + ds))
                    .collect(),
                target,
                value,
            })
    })
}

fn graph(c: &Case) -> AnatomyGraph {
    AnatomyGraph::from_document(OntologyDocument {
        stage: 28,
        nodes: (0..c.n)
            .map(|i| NodeRecord {
                id: tissue(i),
                name: String::new(),
            })
            .collect(),
        edges: c
            .edges
            .iter()
            .map(|&(a, b)| EdgeRecord {
                child: tissue(a),
                parent: tissue(b),
            })
            .collect(),
    })
    .unwrap()
}

fn table(c: &Case) -> Thresholds<f64> {
    Thresholds::new(
        c.table
            .iter()
            .map(|&(t, w, m, s)| ThresholdRecord {
                tissue: tissue(t),
                cutoffs: Cutoffs {
                    weak: w,
                    moderate: m,
                    strong: s,
                },
            })
            .collect(),
    )
    .unwrap()
}

/// Naive re-implementation: BFS hop counts over the raw edge list, then scan
/// every table row for the closest one, breaking ties on the tissue name.
fn oracle(c: &Case) -> Option<ExpressionRange> {
    let mut dist: BTreeMap<usize, usize> = BTreeMap::from([(c.target, 0)]);
    let mut queue = VecDeque::from([c.target]);
    while let Some(x) = queue.pop_front() {
        for &(child, parent) in &c.edges {
            if child == x && !dist.contains_key(&parent) {
                dist.insert(parent, dist[&x] + 1);
                queue.push_back(parent);
            }
        }
    }
    let mut best: Option<(usize, String, (f64, f64, f64))> = None;
    for &(t, w, m, s) in &c.table {
        if let Some(&d) = dist.get(&t) {
            let name = tissue(t).to_string();
            let better = match &best {
                None => true,
                Some((bd, bn, _)) => d < *bd || (d == *bd && name < *bn),
            };
            if better {
                best = Some((d, name, (w, m, s)));
            }
        }
    }
    let (_, _, (w, m, s)) = best?;
    let v = c.value;
    Some(if v <= w {
        ExpressionRange::NotDetected
    } else if v <= m {
        ExpressionRange::exactly(PresentLevel::Weak)
    } else if v <= s {
        ExpressionRange::exactly(PresentLevel::Moderate)
    } else {
        ExpressionRange::exactly(PresentLevel::Strong)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn classification_matches_naive_oracle(c in case()) {
        let got = table(&c).classify(&graph(&c), &tissue(c.target), c.value);
        match oracle(&c) {
            Some(want) => prop_assert_eq!(got.unwrap(), want),
            None => prop_assert!(matches!(got, Err(MappingError::NoThresholdOnPath(_))), "{:?}", got),
        }
    }

    #[test]
    fn classification_is_monotone(c in case(), other in 0.0f64..8.0) {
        let (g, tt) = (graph(&c), table(&c));
        let t = tissue(c.target);
        if let (Ok(a), Ok(b)) = (tt.classify(&g, &t, c.value), tt.classify(&g, &t, other)) {
            // NotDetected < [Weak,Weak] < [Moderate,Moderate] < [Strong,Strong] under the derived order
            if c.value <= other { prop_assert!(a <= b) } else { prop_assert!(a >= b) }
        }
    }

    #[test]
    fn own_entry_wins(c in case()) {
        let (g, tt) = (graph(&c), table(&c));
        for &(t, w, m, s) in &c.table {
            prop_assert_eq!(tt.resolve(&g, &tissue(t)).unwrap(), Cutoffs { weak: w, moderate: m, strong: s });
        }
    }
}
