//! Terms, positions and sketch manipulation.
//!
//! A [`Term`] is an operator tree whose leaves are variables, constants or
//! nonterminal holes. Positions are paths of 1-based child indices; the empty
//! path is the root.

use std::fmt;
use std::sync::Arc;

use crate::op::{Op, SortError};
use crate::value::{Sort, Value};

/// A program variable: a parameter of the function being synthesized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Arc<str>,
    /// Parameter index, used as a lookup hint by valuations.
    pub index: usize,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: &str, index: usize, sort: Sort) -> Var {
        Var {
            name: name.into(),
            index,
            sort,
        }
    }
}

/// A grammar nonterminal, carried by holes so completion can be checked locally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonTerminal {
    pub id: usize,
    pub name: Arc<str>,
    pub sort: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Const(Value),
    App(Op, Arc<[Term]>),
    Hole(NonTerminal),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("invalid position {0} for term")]
    InvalidPosition(Position),
    #[error("{op} expects {expected} arguments, got {got}")]
    Arity { op: Op, expected: usize, got: usize },
    #[error(transparent)]
    Sort(#[from] SortError),
}

/// A path from the root: a sequence of 1-based child indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<u32>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn from_path(path: &[u32]) -> Position {
        assert!(path.iter().all(|&i| i >= 1), "positions are 1-based");
        Position(path.to_vec())
    }

    pub fn path(&self) -> &[u32] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// The position of the `i`-th child (1-based).
    pub fn child(&self, i: u32) -> Position {
        let mut path = self.0.clone();
        path.push(i);
        Position(path)
    }

    pub fn parent(&self) -> Option<Position> {
        if self.0.is_empty() {
            None
        } else {
            Some(Position(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// True if `self` is `other` or lies below it.
    pub fn starts_with(&self, other: &Position) -> bool {
        self.0.starts_with(&other.0)
    }
}

/// `ε` for the root; otherwise indices joined by dots (`1.1`).
impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl Term {
    /// Applies `op`, checking arity and argument sorts.
    pub fn app(op: Op, children: Vec<Term>) -> Result<Term, TermError> {
        if children.len() != op.arity() {
            return Err(TermError::Arity {
                op,
                expected: op.arity(),
                got: children.len(),
            });
        }
        let sorts: Vec<Sort> = children.iter().map(Term::sort).collect();
        op.result_sort(&sorts)?;
        Ok(Term::App(op, children.into()))
    }

    pub fn var(name: &str, index: usize, sort: Sort) -> Term {
        Term::Var(Var::new(name, index, sort))
    }

    pub fn bv(bits: u64, width: u32) -> Term {
        Term::Const(Value::bv(bits, width))
    }

    pub fn hole(nt: &NonTerminal) -> Term {
        Term::Hole(nt.clone())
    }

    pub fn children(&self) -> &[Term] {
        match self {
            Term::App(_, children) => children,
            _ => &[],
        }
    }

    /// Sort of the term. Well-formedness is assumed; ill-sorted applications
    /// report the sort of their first branch-like argument.
    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort,
            Term::Const(c) => c.sort(),
            Term::Hole(nt) => nt.sort,
            Term::App(op, children) => {
                let sorts: Vec<Sort> = children.iter().map(Term::sort).collect();
                op.result_sort(&sorts).unwrap_or(sorts[sorts.len() - 1])
            }
        }
    }

    /// All positions in preorder (root first, children left to right).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn walk(t: &Term, path: &mut Vec<u32>, out: &mut Vec<Position>) {
            out.push(Position(path.clone()));
            for (i, c) in t.children().iter().enumerate() {
                path.push(i as u32 + 1);
                walk(c, path, out);
                path.pop();
            }
        }
        walk(self, &mut path, &mut out);
        out
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term, TermError> {
        let mut t = self;
        for &i in &p.0 {
            t = t
                .children()
                .get(i as usize - 1)
                .ok_or_else(|| TermError::InvalidPosition(p.clone()))?;
        }
        Ok(t)
    }

    /// `self[p <- u]`: rebuilds only the spine from the root to `p`.
    pub fn replace_at(&self, p: &Position, u: Term) -> Result<Term, TermError> {
        fn go(t: &Term, path: &[u32], u: Term, whole: &Position) -> Result<Term, TermError> {
            let Some((&first, rest)) = path.split_first() else {
                return Ok(u);
            };
            match t {
                Term::App(op, children) if (first as usize) <= children.len() => {
                    let idx = first as usize - 1;
                    let mut new_children: Vec<Term> = children.to_vec();
                    new_children[idx] = go(&children[idx], rest, u, whole)?;
                    Ok(Term::App(*op, new_children.into()))
                }
                _ => Err(TermError::InvalidPosition(whole.clone())),
            }
        }
        go(self, &p.0, u, p)
    }

    /// Hole positions with their nonterminals, leftmost-outermost (preorder).
    pub fn holes(&self) -> Vec<(Position, NonTerminal)> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn walk(t: &Term, path: &mut Vec<u32>, out: &mut Vec<(Position, NonTerminal)>) {
            match t {
                Term::Hole(nt) => out.push((Position(path.clone()), nt.clone())),
                Term::App(_, children) => {
                    for (i, c) in children.iter().enumerate() {
                        path.push(i as u32 + 1);
                        walk(c, path, out);
                        path.pop();
                    }
                }
                _ => {}
            }
        }
        walk(self, &mut path, &mut out);
        out
    }

    /// Number of AST nodes; holes count as one.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Term::size).sum::<usize>()
    }

    /// Edge count of the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn is_complete(&self) -> bool {
        match self {
            Term::Hole(_) => false,
            Term::App(_, children) => children.iter().all(Term::is_complete),
            _ => true,
        }
    }

    pub fn hole_count(&self) -> usize {
        match self {
            Term::Hole(_) => 1,
            Term::App(_, children) => children.iter().map(Term::hole_count).sum(),
            _ => 0,
        }
    }
}

/// SMT-LIB s-expression syntax; holes print as their nonterminal name.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::Const(c) => write!(f, "{c}"),
            Term::Hole(nt) => f.write_str(&nt.name),
            Term::App(op, children) => {
                write!(f, "({op}")?;
                for c in children.iter() {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}
