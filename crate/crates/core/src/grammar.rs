//! Regular tree grammars `(N, Σ, S, δ)` describing the program space.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::op::Op;
use crate::term::{NonTerminal, Term, Var};
use crate::value::{Sort, Value};

/// Right-hand side of a production `A -> rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rhs {
    Var(Var),
    Const(Value),
    /// `f(A1, ..., Ak)` over nonterminal ids.
    App(Op, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Rhs,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("start nonterminal {0} is not declared")]
    BadStart(usize),
    #[error("production for `{lhs}` refers to unknown nonterminal id {id}")]
    UnknownNonTerminal { lhs: String, id: usize },
    #[error("production `{lhs} -> {rhs}` is ill-sorted")]
    IllSorted { lhs: String, rhs: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: Vec<NonTerminal>,
    start: usize,
    productions: Vec<Production>,
    by_lhs: Vec<Vec<usize>>,
}

impl Grammar {
    /// Builds a grammar, checking that every production is well-sorted and only
    /// mentions declared nonterminals.
    pub fn new(
        nonterminals: Vec<(String, Sort)>,
        start: usize,
        productions: Vec<Production>,
    ) -> Result<Grammar, GrammarError> {
        let nonterminals: Vec<NonTerminal> = nonterminals
            .into_iter()
            .enumerate()
            .map(|(id, (name, sort))| NonTerminal {
                id,
                name: Arc::from(name.as_str()),
                sort,
            })
            .collect();
        if start >= nonterminals.len() {
            return Err(GrammarError::BadStart(start));
        }
        let mut by_lhs = vec![Vec::new(); nonterminals.len()];
        for (idx, p) in productions.iter().enumerate() {
            let lhs = nonterminals
                .get(p.lhs)
                .ok_or(GrammarError::UnknownNonTerminal {
                    lhs: format!("#{}", p.lhs),
                    id: p.lhs,
                })?;
            let ill = || GrammarError::IllSorted {
                lhs: lhs.name.to_string(),
                rhs: format!("{:?}", p.rhs),
            };
            let sort = match &p.rhs {
                Rhs::Var(v) => v.sort,
                Rhs::Const(c) => c.sort(),
                Rhs::App(op, args) => {
                    let mut sorts = Vec::with_capacity(args.len());
                    for &a in args {
                        let nt = nonterminals.get(a).ok_or_else(|| {
                            GrammarError::UnknownNonTerminal {
                                lhs: lhs.name.to_string(),
                                id: a,
                            }
                        })?;
                        sorts.push(nt.sort);
                    }
                    op.result_sort(&sorts).map_err(|_| ill())?
                }
            };
            if sort != lhs.sort {
                return Err(ill());
            }
            by_lhs[p.lhs].push(idx);
        }
        Ok(Grammar {
            nonterminals,
            start,
            productions,
            by_lhs,
        })
    }

    pub fn nonterminals(&self) -> &[NonTerminal] {
        &self.nonterminals
    }

    pub fn nonterminal(&self, id: usize) -> &NonTerminal {
        &self.nonterminals[id]
    }

    pub fn start(&self) -> &NonTerminal {
        &self.nonterminals[self.start]
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn productions_of(&self, nt: usize) -> impl Iterator<Item = &Production> + '_ {
        self.by_lhs[nt].iter().map(move |&i| &self.productions[i])
    }

    /// Operators appearing anywhere in the grammar.
    pub fn operators(&self) -> BTreeSet<Op> {
        self.productions
            .iter()
            .filter_map(|p| match &p.rhs {
                Rhs::App(op, _) => Some(*op),
                _ => None,
            })
            .collect()
    }

    /// Same grammar without the productions headed by `op`.
    pub fn without_op(&self, op: Op) -> Grammar {
        let productions = self
            .productions
            .iter()
            .filter(|p| !matches!(&p.rhs, Rhs::App(o, _) if *o == op))
            .cloned()
            .collect();
        self.with_productions(self.start, productions)
    }

    /// Same productions, different start symbol.
    pub fn with_start(&self, start: usize) -> Grammar {
        self.with_productions(start, self.productions.clone())
    }

    fn with_productions(&self, start: usize, productions: Vec<Production>) -> Grammar {
        let decls = self
            .nonterminals
            .iter()
            .map(|nt| (nt.name.to_string(), nt.sort))
            .collect();
        Grammar::new(decls, start, productions).expect("subset of a valid grammar is valid")
    }

    /// Whether `term` (possibly with holes) derives from nonterminal `nt`.
    pub fn derives(&self, nt: usize, term: &Term) -> bool {
        if let Term::Hole(h) = term {
            return h.id == nt;
        }
        self.productions_of(nt).any(|p| match (&p.rhs, term) {
            (Rhs::Var(v), Term::Var(u)) => v.name == u.name && v.sort == u.sort,
            (Rhs::Const(c), Term::Const(d)) => c == d,
            (Rhs::App(op, args), Term::App(top, children)) => {
                op == top
                    && args.len() == children.len()
                    && args
                        .iter()
                        .zip(children.iter())
                        .all(|(&a, c)| self.derives(a, c))
            }
            _ => false,
        })
    }

    /// Nonterminals reachable from the start symbol.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nonterminals.len()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(a) = stack.pop() {
            for p in self.productions_of(a) {
                if let Rhs::App(_, args) = &p.rhs {
                    for &b in args {
                        if !seen[b] {
                            seen[b] = true;
                            stack.push(b);
                        }
                    }
                }
            }
        }
        seen
    }

    /// Size of the largest term in the language when the language is finite
    /// (no recursion among reachable nonterminals), `None` otherwise.
    pub fn max_term_size(&self) -> Option<usize> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done(Option<usize>),
        }
        fn visit(g: &Grammar, a: usize, marks: &mut Vec<Mark>) -> Result<Option<usize>, ()> {
            match marks[a] {
                Mark::Active => return Err(()),
                Mark::Done(v) => return Ok(v),
                Mark::New => {}
            }
            marks[a] = Mark::Active;
            // None means the nonterminal derives no complete term.
            let mut best: Option<usize> = None;
            for p in g.productions_of(a) {
                let size = match &p.rhs {
                    Rhs::Var(_) | Rhs::Const(_) => Some(1),
                    Rhs::App(_, args) => {
                        let mut total = Some(1usize);
                        for &b in args {
                            let sub = visit(g, b, marks)?;
                            total = match (total, sub) {
                                (Some(t), Some(s)) => Some(t + s),
                                _ => None,
                            };
                        }
                        total
                    }
                };
                best = match (best, size) {
                    (Some(b), Some(s)) => Some(b.max(s)),
                    (b, s) => b.or(s),
                };
            }
            marks[a] = Mark::Done(best);
            Ok(best)
        }
        let mut marks = vec![Mark::New; self.nonterminals.len()];
        match visit(self, self.start, &mut marks) {
            Ok(v) => Some(v.unwrap_or(0)),
            Err(()) => None,
        }
    }

    pub fn max_arity(&self) -> usize {
        self.productions
            .iter()
            .map(|p| match &p.rhs {
                Rhs::App(_, args) => args.len(),
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for nt in &self.nonterminals {
            write!(f, "{} ->", nt.name)?;
            let alts: Vec<String> = self
                .productions_of(nt.id)
                .map(|p| match &p.rhs {
                    Rhs::Var(v) => v.name.to_string(),
                    Rhs::Const(c) => c.to_string(),
                    Rhs::App(op, args) => {
                        let names: Vec<&str> =
                            args.iter().map(|&a| &*self.nonterminals[a].name).collect();
                        format!("({op} {})", names.join(" "))
                    }
                })
                .collect();
            writeln!(f, " {}", alts.join(" | "))?;
        }
        Ok(())
    }
}
