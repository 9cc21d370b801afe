//! Independent validity check for tree interpolants.

use super::tree::{Annotation, Label, TreeInterpolant, TreeItpProblem};
use crate::domain::PredicateTemplate as T;
use crate::dsl::{exact_facts, pos_fact, ChildFacts, FactSet, Op};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("root annotation must be false")]
    RootNotFalse,
    #[error("node v{0}: children and label do not entail the annotation")]
    NotEntailed(usize),
    #[error("annotation count does not match the tree")]
    Shape,
}

fn child_facts(a: &Annotation) -> ChildFacts {
    match a {
        Annotation::Pos(i) => ChildFacts::Pos(Some(*i)),
        Annotation::Pred(p) => {
            let mut f = FactSet::default();
            match p.template() {
                T::LenEq => f.len = Some(p.args()[0]),
                T::CharAtEq => {
                    f.chars.insert(p.args()[0], p.ch());
                }
                _ => {}
            }
            ChildFacts::Str(f)
        }
        Annotation::True | Annotation::False => ChildFacts::Str(FactSet::default()),
    }
}

fn entails(facts: &FactSet, a: &Annotation) -> bool {
    match a {
        Annotation::True => true,
        Annotation::False | Annotation::Pos(_) => false,
        Annotation::Pred(p) => {
            let a = p.args();
            match p.template() {
                T::Top => true,
                T::LenEq => facts.len == Some(a[0]),
                T::LenNeq => facts.len.is_some_and(|n| n != a[0]),
                T::CharAtEq => facts.chars.get(&a[0]) == Some(&p.ch()),
                T::CharAtNeq => {
                    facts.chars.get(&a[0]).is_some_and(|&c| c != p.ch()) || facts.len.is_some_and(|n| a[0] >= n)
                }
            }
        }
    }
}

/// Checks `I(root) = false` and, for every node, `(⋀ I(children)) ∧ L(v) ⇒ I(v)`.
///
/// Entailment is decided with exact length/character facts; position leaves are
/// resolved by substituting the concrete example input.
pub fn check_interpolant(t: &TreeItpProblem, itp: &TreeInterpolant) -> Result<(), CheckError> {
    let ann = &itp.annotations;
    if ann.len() != t.nodes.len() {
        return Err(CheckError::Shape);
    }
    if ann[0] != Annotation::False {
        return Err(CheckError::RootNotFalse);
    }
    let input = FactSet::of(&t.input);
    for (id, node) in t.nodes.iter().enumerate() {
        let kids: Vec<ChildFacts> = node.children.iter().map(|&c| child_facts(&ann[c])).collect();
        let ok = match &node.label {
            Label::Expected(e) => match &ann[node.children[0]] {
                Annotation::Pred(p) => !p.holds(e),
                Annotation::False => true,
                _ => false,
            },
            Label::Input(x) => entails(&FactSet::of(x), &ann[id]),
            Label::Op(op @ (Op::AbsPos(_) | Op::CPos(..))) => match ann[id] {
                Annotation::True => true,
                Annotation::Pos(i) => pos_fact(op, &input) == Some(i),
                _ => false,
            },
            Label::Op(op) => entails(&exact_facts(op, &kids), &ann[id]),
        };
        if !ok {
            return Err(CheckError::NotEntailed(id));
        }
    }
    Ok(())
}
