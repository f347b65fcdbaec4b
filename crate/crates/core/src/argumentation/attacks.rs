use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::model::{compatible, ExpressionRange, InterpretationProfile, Mode};

use super::{Argument, Assertion, Claim, Directness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackGraphError {
    #[error("argument id {0} used twice")]
    DuplicateArgument(usize),
    #[error("attack ({0}, {1}) references an unknown argument")]
    UnknownEndpoint(usize, usize),
    #[error("argument {0} attacks itself")]
    SelfAttack(usize),
}

/// Arguments and the directed attacks between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackGraph {
    arguments: Vec<Argument>,
    attacks: BTreeSet<(usize, usize)>,
}

impl AttackGraph {
    pub fn new(
        arguments: Vec<Argument>,
        attacks: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, AttackGraphError> {
        let mut ids = HashMap::with_capacity(arguments.len());
        for (i, a) in arguments.iter().enumerate() {
            if ids.insert(a.id, i).is_some() {
                return Err(AttackGraphError::DuplicateArgument(a.id));
            }
        }
        let mut set = BTreeSet::new();
        for (from, to) in attacks {
            if !ids.contains_key(&from) || !ids.contains_key(&to) {
                return Err(AttackGraphError::UnknownEndpoint(from, to));
            }
            if from == to {
                return Err(AttackGraphError::SelfAttack(from));
            }
            set.insert((from, to));
        }
        Ok(Self {
            arguments,
            attacks: set,
        })
    }

    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<(usize, usize)> {
        &self.attacks
    }

    pub fn into_arguments(self) -> Vec<Argument> {
        self.arguments
    }
}

fn expression_conflict(a: ExpressionRange, b: ExpressionRange, mode: Mode) -> bool {
    !compatible(a, b, mode)
}

/// Two claims rebut each other: same subject and incompatible assertions.
pub fn conflicting(a: &Claim, b: &Claim, mode: Mode) -> bool {
    use Assertion::*;
    if a.subject != b.subject {
        return false;
    }
    match (&a.assertion, &b.assertion) {
        (Expressed(r1), Expressed(r2)) => expression_conflict(*r1, *r2, mode),
        (Expressed(r), NotExpressed) | (NotExpressed, Expressed(r)) => {
            expression_conflict(*r, ExpressionRange::NotDetected, mode)
        }
        (AnnotationTrustworthy(x), AnnotationSuspect(y)) | (AnnotationSuspect(y), AnnotationTrustworthy(x)) => x == y,
        _ => false,
    }
}

/// Builds the attack relation.
///
/// Rebutting arguments attack each other, filtered by preference: with
/// `prefer_direct`, a directly grounded argument beats a purely propagated
/// one outright; otherwise the strictly more confident argument attacks
/// one-way and equal confidence gives a mutual attack. Independently, an
/// argument that an annotation is suspect undercuts every argument grounded
/// solely on that annotation, other than arguments making the same
/// suspicion claim.
pub fn compute_attacks(args: &[Argument], profile: InterpretationProfile) -> AttackGraph {
    let mut attacks = BTreeSet::new();
    for (i, a) in args.iter().enumerate() {
        for b in &args[i + 1..] {
            if !conflicting(&a.claim, &b.claim, profile.mode) {
                continue;
            }
            let direct_wins = |x: &Argument, y: &Argument| {
                profile.prefer_direct && x.directness == Directness::Direct && y.directness == Directness::Propagated
            };
            if direct_wins(a, b) {
                attacks.insert((a.id, b.id));
            } else if direct_wins(b, a) {
                attacks.insert((b.id, a.id));
            } else if a.confidence > b.confidence {
                attacks.insert((a.id, b.id));
            } else if b.confidence > a.confidence {
                attacks.insert((b.id, a.id));
            } else {
                attacks.insert((a.id, b.id));
                attacks.insert((b.id, a.id));
            }
        }
    }

    let mut solely_on: HashMap<_, Vec<&Argument>> = HashMap::new();
    for arg in args.iter().filter(|a| a.grounding.len() == 1) {
        solely_on.entry(&arg.grounding[0]).or_default().push(arg);
    }
    for suspect in args {
        let Assertion::AnnotationSuspect(x) = &suspect.claim.assertion else {
            continue;
        };
        for target in solely_on.get(x).into_iter().flatten() {
            let same_claim = matches!(&target.claim.assertion, Assertion::AnnotationSuspect(y) if y == x);
            if target.id != suspect.id && !same_claim {
                attacks.insert((suspect.id, target.id));
            }
        }
    }

    AttackGraph::new(args.to_vec(), attacks).expect("attacks reference generated arguments")
}
