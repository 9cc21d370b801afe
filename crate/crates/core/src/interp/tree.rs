use std::collections::BTreeSet;
use std::fmt;

use crate::domain::{ConcretePredicate, PredicateTemplate};
use crate::dsl::{eval_node, AstNode, EvalError, Op, Program, Value};

/// Node label in a tree interpolation problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    /// Dummy root: its child equals the expected output.
    Expected(Vec<char>),
    /// Input leaf: `v = e_in`.
    Input(Vec<char>),
    /// Any other AST node: the operator's semantics over its children.
    Op(Op),
}

#[derive(Clone, Debug)]
pub struct ItpNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub label: Label,
    /// Concrete value under the example input (`None` for the dummy root).
    pub value: Option<Value>,
}

/// A labeled tree whose labels are jointly unsatisfiable. Node 0 is the dummy root;
/// the remaining nodes are the program's AST in preorder.
#[derive(Clone, Debug)]
pub struct TreeItpProblem {
    pub nodes: Vec<ItpNode>,
    pub input: Vec<char>,
    pub expected: Vec<char>,
}

/// Per-node annotation of a tree interpolant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Annotation {
    True,
    False,
    Pred(ConcretePredicate),
    /// A position node's resolved index.
    Pos(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeInterpolant {
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ItpError {
    #[error("program already produces the expected output")]
    NotSpurious,
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("no discriminating fact for node {0}")]
    ItpFailure(usize),
}

pub fn construct_tree(p: &Program, e_in: &str, e_out: &str) -> Result<TreeItpProblem, ItpError> {
    let input: Vec<char> = e_in.chars().collect();
    let expected: Vec<char> = e_out.chars().collect();
    if p.eval_chars(&input)? == expected {
        return Err(ItpError::NotSpurious);
    }
    let mut nodes = vec![ItpNode { parent: None, children: vec![1], label: Label::Expected(expected.clone()), value: None }];
    fn add(n: &AstNode, parent: usize, x: &[char], nodes: &mut Vec<ItpNode>) -> Result<usize, EvalError> {
        let id = nodes.len();
        let label = match n.op {
            Op::Input => Label::Input(x.to_vec()),
            ref op => Label::Op(op.clone()),
        };
        nodes.push(ItpNode { parent: Some(parent), children: vec![], label, value: Some(eval_node(n, x)?) });
        for c in &n.children {
            let cid = add(c, id, x, nodes)?;
            nodes[id].children.push(cid);
        }
        Ok(id)
    }
    add(p.root(), 0, &input, &mut nodes)?;
    Ok(TreeItpProblem { nodes, input, expected })
}

impl TreeItpProblem {
    fn str_value(&self, id: usize) -> &[char] {
        self.nodes[id].value.as_ref().and_then(Value::as_str).unwrap_or(&[])
    }

    fn pos_value(&self, id: usize) -> i64 {
        self.nodes[id].value.as_ref().and_then(Value::as_pos).unwrap_or(0)
    }

    /// Goal-directed interpolation over length and character facts.
    pub fn find_itp(&self) -> Result<TreeInterpolant, ItpError> {
        let mut ann = vec![Annotation::True; self.nodes.len()];
        ann[0] = Annotation::False;
        let s = self.str_value(1);
        let e = &self.expected;
        let disc = if s.len() != e.len() {
            ConcretePredicate::len_neq(e.len() as i64)
        } else {
            let i = (0..s.len()).find(|&i| s[i] != e[i]).ok_or(ItpError::ItpFailure(1))?;
            ConcretePredicate::char_neq(i, e[i])
        };
        ann[1] = Annotation::Pred(disc);
        self.justify(1, &mut ann);
        Ok(TreeInterpolant { annotations: ann })
    }

    /// Annotate the children of `id` with equality facts entailing `id`'s annotation.
    fn justify(&self, id: usize, ann: &mut [Annotation]) {
        let node = &self.nodes[id];
        let Annotation::Pred(goal) = ann[id] else { return };
        let ch = &node.children;
        match &node.label {
            Label::Op(Op::Concat) => {
                let (l, r) = (ch[0], ch[1]);
                let (lv, rv) = (self.str_value(l), self.str_value(r));
                match goal.template() {
                    PredicateTemplate::LenEq | PredicateTemplate::LenNeq => {
                        ann[l] = Annotation::Pred(ConcretePredicate::len_eq(lv.len() as i64));
                        ann[r] = Annotation::Pred(ConcretePredicate::len_eq(rv.len() as i64));
                    }
                    PredicateTemplate::CharAtEq | PredicateTemplate::CharAtNeq => {
                        let i = goal.args()[0] as usize;
                        if i < lv.len() {
                            ann[l] = Annotation::Pred(ConcretePredicate::char_eq(i, lv[i]));
                        } else {
                            let j = i - lv.len();
                            ann[l] = Annotation::Pred(ConcretePredicate::len_eq(lv.len() as i64));
                            ann[r] = Annotation::Pred(ConcretePredicate::char_eq(j, rv[j]));
                        }
                    }
                    PredicateTemplate::Top => {}
                }
            }
            Label::Op(Op::SubStr) => {
                let (x, p1, p2) = (ch[0], ch[1], ch[2]);
                let i1 = self.pos_value(p1);
                ann[p1] = Annotation::Pos(i1);
                ann[p2] = Annotation::Pos(self.pos_value(p2));
                if matches!(goal.template(), PredicateTemplate::CharAtEq | PredicateTemplate::CharAtNeq) {
                    let k = (i1 + goal.args()[0]) as usize;
                    ann[x] = Annotation::Pred(ConcretePredicate::char_eq(k, self.str_value(x)[k]));
                }
            }
            _ => {}
        }
        for &c in ch {
            self.justify(c, ann);
        }
    }

    /// One line per node: `node-id | label | concrete-value | interpolant`.
    pub fn dump(&self, itp: &TreeInterpolant) -> String {
        let mut out = String::new();
        for (id, node) in self.nodes.iter().enumerate() {
            let label = self.label_text(id);
            let value = match &node.value {
                None => "-".to_string(),
                Some(Value::Str(s)) => quote(s),
                Some(Value::Pos(i)) => i.to_string(),
            };
            out.push_str(&format!("v{id} | {label} | {value} | {}\n", itp.annotations[id]));
        }
        out
    }

    pub fn label_text(&self, id: usize) -> String {
        let node = &self.nodes[id];
        let kids: Vec<String> = node.children.iter().map(|c| format!("v{c}")).collect();
        match &node.label {
            Label::Expected(e) => format!("v1 = {}", quote(e)),
            Label::Input(x) => format!("v{id} = {}", quote(x)),
            Label::Op(Op::ConstStr(s)) => format!("v{id} = {}", quote(&s.chars().collect::<Vec<_>>())),
            Label::Op(Op::AbsPos(k)) => format!("v{id} = abspos({k})"),
            Label::Op(Op::CPos(c, j)) => format!("v{id} = cpos({c}, {j})"),
            Label::Op(op) => format!("v{id} = {}({})", op.kind().name(), kids.join(", ")),
        }
    }
}

fn quote(s: &[char]) -> String {
    serde_json::to_string(&s.iter().collect::<String>()).expect("string")
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Annotation::True => write!(f, "true"),
            Annotation::False => write!(f, "false"),
            Annotation::Pred(p) => write!(f, "{p}"),
            Annotation::Pos(i) => write!(f, "(pos = {i})"),
        }
    }
}

impl TreeInterpolant {
    /// Templates of every non-root predicate annotation.
    pub fn templates(&self) -> BTreeSet<PredicateTemplate> {
        self.annotations
            .iter()
            .skip(1)
            .filter_map(|a| match a {
                Annotation::Pred(p) if p.template() != PredicateTemplate::Top => Some(p.make_symbolic()),
                _ => None,
            })
            .collect()
    }
}

/// Templates learned from every example the program gets wrong.
pub fn learn_abstract_domain(p: &Program, examples: &[(String, String)]) -> BTreeSet<PredicateTemplate> {
    let mut out = BTreeSet::new();
    for (i, o) in examples {
        // Examples the program satisfies, or on which it fails to evaluate, teach nothing.
        if let Ok(t) = construct_tree(p, i, o) {
            if let Ok(itp) = t.find_itp() {
                out.extend(itp.templates());
            }
        }
    }
    out
}
