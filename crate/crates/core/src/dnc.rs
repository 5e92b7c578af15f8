//! Divide and conquer for conditional programs: condition-free terms for
//! groups of examples, combined by a decision tree over enumerated predicates.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::enumerator::ComponentPool;
use crate::eval::{self, Example};
use crate::grammar::{Grammar, Rhs};
use crate::op::Op;
use crate::search::{self, Outcome, SearchConfig, SearchStats};
use crate::sygus::SynthProblem;
use crate::term::Term;
use crate::value::Value;

/// Condition-free terms and the examples each one satisfies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverMatrix {
    pub terms: Vec<Term>,
    /// `covers[t][e]`: term `t` satisfies example `e`.
    pub covers: Vec<Vec<bool>>,
}

impl CoverMatrix {
    pub fn new() -> CoverMatrix {
        CoverMatrix::default()
    }

    /// Adds `term`, recording which of `examples` it satisfies.
    pub fn push(&mut self, term: Term, examples: &[Example]) {
        let row = examples
            .iter()
            .map(|e| eval::eval(&term, &e.input).is_ok_and(|v| v == e.output))
            .collect();
        self.terms.push(term);
        self.covers.push(row);
    }

    pub fn covered(&self, e: usize) -> bool {
        self.covers.iter().any(|row| row[e])
    }

    /// A term satisfying every example in `subset`, lowest index first.
    pub fn covering(&self, subset: &[usize]) -> Option<usize> {
        (0..self.terms.len()).find(|&t| subset.iter().all(|&e| self.covers[t][e]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(Term),
    Node {
        predicate: Term,
        then: Box<DecisionTree>,
        otherwise: Box<DecisionTree>,
    },
}

impl DecisionTree {
    /// The tree folded into nested `ite` terms.
    pub fn to_term(&self) -> Term {
        match self {
            DecisionTree::Leaf(t) => t.clone(),
            DecisionTree::Node {
                predicate,
                then,
                otherwise,
            } => Term::app(
                Op::Ite,
                vec![predicate.clone(), then.to_term(), otherwise.to_term()],
            )
            .expect("predicates are Boolean and branches share a sort"),
        }
    }

    /// Number of internal nodes on the longest path.
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Node {
                then, otherwise, ..
            } => 1 + then.depth().max(otherwise.depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no predicate separates the examples {examples:?}")]
pub struct NoSeparatingPredicate {
    pub examples: Vec<usize>,
}

/// A predicate with its truth value on each example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub term: Term,
    pub values: Vec<bool>,
}

/// Learns a tree routing every example to a term of `matrix` that satisfies
/// it, splitting on the predicate with the largest information gain.
pub fn learn_tree(
    matrix: &CoverMatrix,
    predicates: &[Predicate],
    examples: &[usize],
) -> Result<DecisionTree, NoSeparatingPredicate> {
    if let Some(t) = matrix.covering(examples) {
        return Ok(DecisionTree::Leaf(matrix.terms[t].clone()));
    }
    let labels = label(matrix, examples);
    let base = entropy(labels.values().copied());
    let mut best: Option<(f64, usize)> = None;
    for (i, p) in predicates.iter().enumerate() {
        let (yes, no): (Vec<usize>, Vec<usize>) = examples.iter().partition(|&&e| p.values[e]);
        if yes.is_empty() || no.is_empty() {
            continue;
        }
        let n = examples.len() as f64;
        let remainder = [&yes, &no]
            .iter()
            .map(|side| side.len() as f64 / n * entropy(side.iter().map(|e| labels[e])))
            .sum::<f64>();
        let gain = base - remainder;
        if best.is_none_or(|(g, _)| gain > g + 1e-12) {
            best = Some((gain, i));
        }
    }
    let Some((_, i)) = best else {
        return Err(NoSeparatingPredicate {
            examples: examples.to_vec(),
        });
    };
    let p = &predicates[i];
    let (yes, no): (Vec<usize>, Vec<usize>) = examples.iter().partition(|&&e| p.values[e]);
    Ok(DecisionTree::Node {
        predicate: p.term.clone(),
        then: Box::new(learn_tree(matrix, predicates, &yes)?),
        otherwise: Box::new(learn_tree(matrix, predicates, &no)?),
    })
}

/// Labels each example with the covering term that covers the most examples
/// of the node, lowest index on ties.
fn label(matrix: &CoverMatrix, examples: &[usize]) -> BTreeMap<usize, usize> {
    let reach: Vec<usize> = matrix
        .covers
        .iter()
        .map(|row| examples.iter().filter(|&&e| row[e]).count())
        .collect();
    examples
        .iter()
        .map(|&e| {
            let t = (0..matrix.terms.len())
                .filter(|&t| matrix.covers[t][e])
                .max_by(|&a, &b| reach[a].cmp(&reach[b]).then(b.cmp(&a)))
                .expect("matrix covers every example");
            (e, t)
        })
        .collect()
}

fn entropy(labels: impl Iterator<Item = usize>) -> f64 {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut n = 0usize;
    for l in labels {
        *counts.entry(l).or_default() += 1;
        n += 1;
    }
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DncStats {
    pub cover_terms: usize,
    pub predicates: usize,
    pub tree_depth: usize,
}

/// [`solve_with_dnc_stats`] without the divide-and-conquer counters.
pub fn solve_with_dnc(problem: &SynthProblem, config: &SearchConfig) -> Outcome {
    solve_with_dnc_stats(problem, config).0
}

/// Solves each uncovered example separately with the ite-free grammar, then
/// joins the terms with a decision tree. Falls back to [`search::solve`] when
/// the start symbol has no `ite(C, S, S)` production or the predicate language
/// runs out before the examples are separated.
pub fn solve_with_dnc_stats(problem: &SynthProblem, config: &SearchConfig) -> (Outcome, DncStats) {
    let started = Instant::now();
    let deadline = started + config.timeout;
    let grammar = &problem.grammar;
    let examples = &problem.examples;
    let mut dnc = DncStats::default();
    let Some(cond) = ite_condition(grammar) else {
        return (search::solve(problem, config), dnc);
    };
    let plain = grammar.without_op(Op::Ite);
    let mut stats = SearchStats::default();
    let mut matrix = CoverMatrix::new();
    for (i, e) in examples.iter().enumerate() {
        if matrix.covered(i) {
            continue;
        }
        let remaining = deadline.saturating_duration_since(Instant::now());
        if remaining.is_zero() {
            return (timeout(stats, started), dnc);
        }
        let sub = SearchConfig {
            timeout: remaining,
            ..config.clone()
        };
        let out = search::solve_examples(&plain, std::slice::from_ref(e), &sub);
        absorb(&mut stats, out.stats());
        match out {
            Outcome::Solution { term, .. } => matrix.push(term, examples),
            Outcome::Unrealizable { .. } => {
                stats.elapsed = started.elapsed();
                return (Outcome::Unrealizable { stats }, dnc);
            }
            Outcome::Timeout { .. } => return (timeout(stats, started), dnc),
        }
    }
    dnc.cover_terms = matrix.terms.len();
    let all: Vec<usize> = (0..examples.len()).collect();
    if let Some(t) = matrix.covering(&all) {
        stats.elapsed = started.elapsed();
        let term = matrix.terms[t].clone();
        return (Outcome::Solution { term, stats }, dnc);
    }

    let finite = plain.with_start(cond).max_term_size();
    let mut pool = ComponentPool::new(&plain, examples);
    loop {
        if !pool.grow_until(Some(deadline)) {
            return (timeout(stats, started), dnc);
        }
        stats.pool_sizes.push(pool.total());
        let predicates: Vec<Predicate> = pool
            .components(cond)
            .iter()
            .map(|c| Predicate {
                term: c.term.clone(),
                values: c.outputs.iter().map(|v| *v == Value::Bool(true)).collect(),
            })
            .collect();
        dnc.predicates = predicates.len();
        match learn_tree(&matrix, &predicates, &all) {
            Ok(tree) => {
                dnc.tree_depth = tree.depth();
                let term = tree.to_term();
                stats.elapsed = started.elapsed();
                if eval::satisfies(&term, examples).unwrap_or(false)
                    && grammar.derives(grammar.start().id, &term)
                {
                    return (Outcome::Solution { term, stats }, dnc);
                }
                log::warn!("decision tree {term} failed the final check");
                break;
            }
            Err(e) => log::debug!("n = {}: {e}", pool.n()),
        }
        if finite.is_some_and(|m| pool.n() >= m) {
            break;
        }
    }
    let remaining = deadline.saturating_duration_since(Instant::now());
    if remaining.is_zero() {
        return (timeout(stats, started), dnc);
    }
    let sub = SearchConfig {
        timeout: remaining,
        ..config.clone()
    };
    let mut out = search::solve(problem, &sub);
    absorb(&mut stats, out.stats());
    stats.elapsed = started.elapsed();
    *out.stats_mut() = stats;
    (out, dnc)
}

/// The condition nonterminal of a production `start -> ite(C, start, start)`.
fn ite_condition(g: &Grammar) -> Option<usize> {
    let s = g.start().id;
    g.productions_of(s).find_map(|p| match &p.rhs {
        Rhs::App(Op::Ite, args) if args[1] == s && args[2] == s => Some(args[0]),
        _ => None,
    })
}

fn timeout(mut stats: SearchStats, started: Instant) -> Outcome {
    stats.elapsed = started.elapsed();
    Outcome::Timeout { stats }
}

fn absorb(total: &mut SearchStats, s: &SearchStats) {
    total.iterations += s.iterations;
    total.sketches += s.sketches;
    total.dequeued += s.dequeued;
    total.enqueued += s.enqueued;
    total.rejected += s.rejected;
    total.pruned += s.pruned;
    total.expanded += s.expanded;
    total.analysis_failures += s.analysis_failures;
    total.analysis_time += s.analysis_time;
    if s.pool_sizes.len() > total.pool_sizes.len() {
        total.pool_sizes = s.pool_sizes.clone();
    }
    total.final_n = total.final_n.max(s.final_n);
    total.final_height = total.final_height.max(s.final_height);
}
