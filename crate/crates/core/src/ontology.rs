//! Per-stage anatomy graphs (part-of DAGs) and upward propagation of
//! positive expression.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{presence, Annotation, AnnotationId, ExpressionRange, GeneId, TheilerStage, TissueId};

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("malformed ontology document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("Theiler stage {0} is outside 1..=28")]
    BadStage(i64),
    #[error("part-of cycle: {}", render_cycle(.0))]
    CycleDetected(Vec<TissueId>),
    #[error("edge {child} -> {parent} references undeclared tissue {missing}")]
    DanglingEdge {
        child: TissueId,
        parent: TissueId,
        missing: TissueId,
    },
    #[error("tissue {0} declared twice")]
    DuplicateTissue(TissueId),
    #[error("unknown tissue {tissue} at {stage}")]
    UnknownTissue { tissue: TissueId, stage: TheilerStage },
    #[error("annotation {id} is at {found} but the graph is for {expected}")]
    StageMismatch {
        id: AnnotationId,
        expected: TheilerStage,
        found: TheilerStage,
    },
}

fn render_cycle(cycle: &[TissueId]) -> String {
    cycle.iter().map(TissueId::as_str).collect::<Vec<_>>().join(" -> ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: TissueId,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub child: TissueId,
    pub parent: TissueId,
}

/// On-disk shape of one stage's anatomy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyDocument {
    pub stage: i64,
    #[serde(default)]
    pub nodes: Vec<NodeRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

/// Validated part-of DAG for one Theiler stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnatomyGraph {
    stage: TheilerStage,
    names: BTreeMap<TissueId, String>,
    parents: BTreeMap<TissueId, BTreeSet<TissueId>>,
    edge_count: usize,
}

impl AnatomyGraph {
    pub fn from_document(doc: OntologyDocument) -> Result<Self, OntologyError> {
        let stage = TheilerStage::new(doc.stage).map_err(|_| OntologyError::BadStage(doc.stage))?;
        let mut names = BTreeMap::new();
        for node in doc.nodes {
            if names.insert(node.id.clone(), node.name).is_some() {
                return Err(OntologyError::DuplicateTissue(node.id));
            }
        }
        let mut parents: BTreeMap<TissueId, BTreeSet<TissueId>> =
            names.keys().map(|t| (t.clone(), BTreeSet::new())).collect();
        let mut edge_count = 0;
        for EdgeRecord { child, parent } in doc.edges {
            for end in [&child, &parent] {
                if !names.contains_key(end) {
                    return Err(OntologyError::DanglingEdge {
                        missing: end.clone(),
                        child: child.clone(),
                        parent: parent.clone(),
                    });
                }
            }
            if parents.get_mut(&child).expect("declared").insert(parent) {
                edge_count += 1;
            }
        }
        let graph = Self {
            stage,
            names,
            parents,
            edge_count,
        };
        if let Some(cycle) = graph.find_cycle() {
            return Err(OntologyError::CycleDetected(cycle));
        }
        Ok(graph)
    }

    pub fn to_document(&self) -> OntologyDocument {
        OntologyDocument {
            stage: self.stage.value().into(),
            nodes: self
                .names
                .iter()
                .map(|(id, name)| NodeRecord {
                    id: id.clone(),
                    name: name.clone(),
                })
                .collect(),
            edges: self
                .parents
                .iter()
                .flat_map(|(child, ps)| {
                    ps.iter().map(|parent| EdgeRecord {
                        child: child.clone(),
                        parent: parent.clone(),
                    })
                })
                .collect(),
        }
    }

    pub fn stage(&self) -> TheilerStage {
        self.stage
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains(&self, tissue: &TissueId) -> bool {
        self.names.contains_key(tissue)
    }

    pub fn name(&self, tissue: &TissueId) -> Option<&str> {
        self.names.get(tissue).map(String::as_str)
    }

    pub fn tissues(&self) -> impl Iterator<Item = &TissueId> {
        self.names.keys()
    }

    pub fn parents(&self, tissue: &TissueId) -> Result<&BTreeSet<TissueId>, OntologyError> {
        self.parents.get(tissue).ok_or_else(|| self.unknown(tissue))
    }

    fn unknown(&self, tissue: &TissueId) -> OntologyError {
        OntologyError::UnknownTissue {
            tissue: tissue.clone(),
            stage: self.stage,
        }
    }

    /// Everything reachable from `tissue` over one or more part-of edges.
    pub fn ancestors(&self, tissue: &TissueId) -> Result<BTreeSet<TissueId>, OntologyError> {
        Ok(self.ancestors_by_distance(tissue)?.into_keys().collect())
    }

    /// Ancestors with their shortest part-of hop count (>= 1).
    pub fn ancestors_by_distance(&self, tissue: &TissueId) -> Result<BTreeMap<TissueId, usize>, OntologyError> {
        let mut dist = BTreeMap::new();
        let mut queue: VecDeque<(&TissueId, usize)> = VecDeque::new();
        queue.push_back((tissue, 0));
        self.parents(tissue)?;
        while let Some((node, d)) = queue.pop_front() {
            for parent in &self.parents[node] {
                if !dist.contains_key(parent) {
                    dist.insert(parent.clone(), d + 1);
                    queue.push_back((parent, d + 1));
                }
            }
        }
        Ok(dist)
    }

    /// Iterative three-colour DFS; returns the tissues along a cycle, closed
    /// by repeating the first one.
    fn find_cycle(&self) -> Option<Vec<TissueId>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Colour {
            White,
            Grey,
            Black,
        }
        let mut colour: BTreeMap<&TissueId, Colour> = self.names.keys().map(|t| (t, Colour::White)).collect();
        for root in self.names.keys() {
            if colour[root] != Colour::White {
                continue;
            }
            let mut stack: Vec<(&TissueId, std::collections::btree_set::Iter<'_, TissueId>)> =
                vec![(root, self.parents[root].iter())];
            colour.insert(root, Colour::Grey);
            while let Some((node, iter)) = stack.last_mut() {
                match iter.next() {
                    Some(next) => match colour[next] {
                        Colour::White => {
                            colour.insert(next, Colour::Grey);
                            stack.push((next, self.parents[next].iter()));
                        }
                        Colour::Grey => {
                            let start = stack.iter().position(|(t, _)| *t == next).expect("on stack");
                            let mut cycle: Vec<TissueId> = stack[start..].iter().map(|(t, _)| (*t).clone()).collect();
                            cycle.push(next.clone());
                            return Some(cycle);
                        }
                        Colour::Black => {}
                    },
                    None => {
                        colour.insert(node, Colour::Black);
                        stack.pop();
                    }
                }
            }
        }
        None
    }
}

/// Parses and validates one ontology document.
pub fn load_ontology(text: &str) -> Result<AnatomyGraph, OntologyError> {
    let doc: OntologyDocument = serde_json::from_str(text)?;
    AnatomyGraph::from_document(doc)
}

/// Identity of a derived annotation, used to avoid emitting it twice.
type DerivedKey = (GeneId, TissueId, TheilerStage, ExpressionRange, AnnotationId);

fn derived_key(a: &Annotation) -> Option<DerivedKey> {
    a.derived_from
        .clone()
        .map(|origin| (a.gene.clone(), a.tissue.clone(), a.stage, a.level, origin))
}

/// Id given to the copy of `origin` propagated to `tissue`.
pub fn derived_id(origin: &AnnotationId, tissue: &TissueId) -> AnnotationId {
    AnnotationId::new(origin.resource, format!("{}>{}", origin.local, tissue))
}

/// Returns `annotations` followed by one propagated copy of every present
/// annotation for each of its tissue's ancestors.
///
/// Copies keep the level and provenance of the original, are marked
/// `direct = false` and point back at the direct annotation they came from.
/// Already-derived inputs count as their origin, which makes the operation
/// idempotent.
pub fn propagate(annotations: &[Annotation], graph: &AnatomyGraph) -> Result<Vec<Annotation>, OntologyError> {
    for a in annotations {
        if a.stage != graph.stage {
            return Err(OntologyError::StageMismatch {
                id: a.id.clone(),
                expected: graph.stage,
                found: a.stage,
            });
        }
        if !graph.contains(&a.tissue) {
            return Err(graph.unknown(&a.tissue));
        }
    }

    let mut seen: HashSet<DerivedKey> = annotations.iter().filter_map(derived_key).collect();
    let mut out = annotations.to_vec();
    for a in annotations.iter().filter(|a| presence(a.level)) {
        let origin = a.derived_from.as_ref().unwrap_or(&a.id);
        for ancestor in graph.ancestors(&a.tissue)? {
            let key = (a.gene.clone(), ancestor.clone(), a.stage, a.level, origin.clone());
            if !seen.insert(key) {
                continue;
            }
            out.push(Annotation {
                id: derived_id(origin, &ancestor),
                tissue: ancestor,
                direct: false,
                derived_from: Some(origin.clone()),
                ..a.clone()
            });
        }
    }
    Ok(out)
}
