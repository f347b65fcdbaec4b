use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AttackGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    In,
    Out,
    Undec,
}

impl Label {
    /// Wording used in terminal output.
    pub fn verdict(self) -> &'static str {
        match self {
            Self::In => "UNDEFEATED",
            Self::Out => "DEFEATED",
            Self::Undec => "UNDECIDED",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::In => "IN",
            Self::Out => "OUT",
            Self::Undec => "UNDEC",
        })
    }
}

/// Grounded labelling over arguments `0..n`.
///
/// Starts from everything undecided and repeatedly labels IN every argument
/// whose attackers are all OUT, then OUT every argument with an IN attacker,
/// until nothing changes. What is left is UNDEC.
pub fn grounded_labels(n: usize, attacks: &[(usize, usize)]) -> Vec<Label> {
    let mut attackers: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut targets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(from, to) in attacks {
        attackers[to].push(from);
        targets[from].push(to);
    }
    let mut labels = vec![Label::Undec; n];
    // attackers not yet OUT, per argument
    let mut live: Vec<usize> = attackers.iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&i| live[i] == 0).collect();
    while let Some(arg) = ready.pop() {
        if labels[arg] != Label::Undec {
            continue;
        }
        labels[arg] = Label::In;
        for &victim in &targets[arg] {
            if labels[victim] != Label::Undec {
                continue;
            }
            labels[victim] = Label::Out;
            for &next in &targets[victim] {
                live[next] -= 1;
                if live[next] == 0 && labels[next] == Label::Undec {
                    ready.push(next);
                }
            }
        }
    }
    labels
}

/// Grounded labelling keyed by argument id.
pub fn grounded_labelling(graph: &AttackGraph) -> BTreeMap<usize, Label> {
    let index: HashMap<usize, usize> = graph.arguments().iter().enumerate().map(|(i, a)| (a.id, i)).collect();
    let attacks: Vec<(usize, usize)> = graph
        .attacks()
        .iter()
        .map(|(from, to)| (index[from], index[to]))
        .collect();
    grounded_labels(graph.arguments().len(), &attacks)
        .into_iter()
        .enumerate()
        .map(|(i, l)| (graph.arguments()[i].id, l))
        .collect()
}
