//! Iterated forward-backward abstract interpretation of a sketch.
//!
//! For each example `i ↦ o` the analysis computes the decreasing chain
//! `X⁰ = forward from the initial map`, then alternating backward passes seeded
//! with `α(o)` at the root and forward passes, each meeting into the running
//! map, until two consecutive maps coincide. Terms are trees, so each pass is a
//! single traversal.

use std::fmt;

use crate::domain::AbsValue;
use crate::eval::{EvalError, Example, Valuation};
use crate::op::Op;
use crate::term::{Position, Term};
use crate::value::Sort;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("analysis of `{term}` did not converge within {cap} alternations")]
    NoConvergence { term: String, cap: usize },
}

/// Which passes the analysis runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Direction {
    /// The full forward-backward chain.
    #[default]
    Full,
    /// Only the forward pass, with the expected output met into the root.
    ForwardOnly,
}

struct Node<'a> {
    term: &'a Term,
    sort: Sort,
    children: Vec<usize>,
}

/// A term flattened in preorder; node 0 is the root and children come after
/// their parent.
pub struct FlatTerm<'a> {
    nodes: Vec<Node<'a>>,
    positions: Vec<Position>,
}

impl<'a> FlatTerm<'a> {
    pub fn new(term: &'a Term) -> FlatTerm<'a> {
        fn go<'a>(t: &'a Term, pos: Position, flat: &mut FlatTerm<'a>) -> usize {
            let idx = flat.nodes.len();
            flat.nodes.push(Node {
                term: t,
                sort: Sort::Bool,
                children: Vec::with_capacity(t.children().len()),
            });
            flat.positions.push(pos.clone());
            for (i, c) in t.children().iter().enumerate() {
                let child = go(c, pos.child(i as u32 + 1), flat);
                flat.nodes[idx].children.push(child);
            }
            flat.nodes[idx].sort = match t {
                Term::App(op, _) => {
                    let mut sorts = [Sort::Bool; 3];
                    let n = &flat.nodes[idx];
                    for (s, &c) in sorts.iter_mut().zip(&n.children) {
                        *s = flat.nodes[c].sort;
                    }
                    op.result_sort(&sorts[..n.children.len()])
                        .unwrap_or_else(|_| t.sort())
                }
                _ => t.sort(),
            };
            idx
        }
        let mut flat = FlatTerm {
            nodes: Vec::new(),
            positions: Vec::new(),
        };
        go(term, Position::root(), &mut flat);
        flat
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn index_of(&self, p: &Position) -> Option<usize> {
        self.positions.iter().position(|q| q == p)
    }
}

/// One abstract value per position of a term, for a single example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisMap {
    positions: Vec<Position>,
    values: Vec<AbsValue>,
}

impl AnalysisMap {
    pub fn get(&self, p: &Position) -> Option<&AbsValue> {
        self.positions
            .iter()
            .position(|q| q == p)
            .map(|i| &self.values[i])
    }

    /// Entries in preorder.
    pub fn iter(&self) -> impl Iterator<Item = (&Position, &AbsValue)> {
        self.positions.iter().zip(self.values.iter())
    }

    pub fn values(&self) -> &[AbsValue] {
        &self.values
    }

    pub fn has_bottom(&self) -> bool {
        self.values.iter().any(AbsValue::is_bottom)
    }

    /// Pointwise order.
    pub fn leq(&self, o: &AnalysisMap) -> bool {
        self.values.iter().zip(&o.values).all(|(a, b)| a.leq(b))
    }
}

impl fmt::Display for AnalysisMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, v) in self.iter() {
            writeln!(f, "{p}: {v}")?;
        }
        Ok(())
    }
}

/// The converged analysis: per position, one abstract value per example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisResult {
    positions: Vec<Position>,
    /// `values[p][j]` for position index `p` and example `j`.
    values: Vec<Vec<AbsValue>>,
}

impl AnalysisResult {
    fn from_maps(positions: Vec<Position>, maps: &[Vec<AbsValue>]) -> AnalysisResult {
        let values = (0..positions.len())
            .map(|p| maps.iter().map(|m| m[p]).collect())
            .collect();
        AnalysisResult { positions, values }
    }

    pub fn get(&self, p: &Position) -> Option<&[AbsValue]> {
        self.positions
            .iter()
            .position(|q| q == p)
            .map(|i| self.values[i].as_slice())
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn has_bottom(&self) -> bool {
        self.values.iter().flatten().any(AbsValue::is_bottom)
    }
}

/// The initial forward map: variables to `α(i)`, holes to ⊤, constants to
/// themselves and applications to ⊥.
pub fn forward_init(term: &Term, input: &Valuation) -> Result<AnalysisMap, EvalError> {
    let flat = FlatTerm::new(term);
    let values = init_values(&flat, input)?;
    Ok(AnalysisMap {
        positions: flat.positions,
        values,
    })
}

fn init_values(flat: &FlatTerm<'_>, input: &Valuation) -> Result<Vec<AbsValue>, EvalError> {
    flat.nodes
        .iter()
        .map(|n| {
            Ok(match n.term {
                Term::Var(v) => AbsValue::constant(
                    input
                        .lookup(v)
                        .ok_or_else(|| EvalError::UnboundVariable(v.name.to_string()))?,
                ),
                Term::Const(c) => AbsValue::constant(*c),
                Term::Hole(nt) => AbsValue::top(nt.sort),
                Term::App(..) => AbsValue::bottom(n.sort),
            })
        })
        .collect()
}

fn op_of(t: &Term) -> Option<Op> {
    match t {
        Term::App(op, _) => Some(*op),
        _ => None,
    }
}

/// Children-first sweep into `out`. Each value is `init ⊔ F#(children)`, met
/// with `prev` when given.
fn forward_into(
    flat: &FlatTerm<'_>,
    init: &[AbsValue],
    prev: Option<&[AbsValue]>,
    out: &mut Vec<AbsValue>,
) {
    out.clear();
    out.extend_from_slice(init);
    let mut args = [AbsValue::Bool(crate::domain::AbstractBit::Top); 3];
    for idx in (0..flat.len()).rev() {
        let node = &flat.nodes[idx];
        if let Some(op) = op_of(node.term) {
            let k = node.children.len();
            for (a, &c) in args.iter_mut().zip(&node.children) {
                *a = out[c];
            }
            out[idx] = init[idx].join(&AbsValue::forward(op, &args[..k]));
        }
        if let Some(prev) = prev {
            out[idx] = out[idx].meet(&prev[idx]);
        }
    }
}

fn forward_values(
    flat: &FlatTerm<'_>,
    init: &[AbsValue],
    prev: Option<&[AbsValue]>,
) -> Vec<AbsValue> {
    let mut out = Vec::with_capacity(init.len());
    forward_into(flat, init, prev, &mut out);
    out
}

/// Root-first sweep into `out`: the root meets `α(o)`, each child meets the
/// backward transfer of its parent given the current sibling values.
fn backward_into(
    flat: &FlatTerm<'_>,
    output: &AbsValue,
    prev: &[AbsValue],
    out: &mut Vec<AbsValue>,
) {
    out.clear();
    out.extend_from_slice(prev);
    out[0] = out[0].meet(output);
    let mut args = [AbsValue::Bool(crate::domain::AbstractBit::Top); 3];
    for idx in 0..flat.len() {
        let node = &flat.nodes[idx];
        let Some(op) = op_of(node.term) else { continue };
        let k = node.children.len();
        for (i, &c) in node.children.iter().enumerate() {
            for (a, &s) in args.iter_mut().zip(&node.children) {
                *a = out[s];
            }
            let refined = AbsValue::backward(op, i, &out[idx], &args[..k]);
            out[c] = out[c].meet(&refined);
        }
    }
}

fn backward_values(flat: &FlatTerm<'_>, output: &AbsValue, prev: &[AbsValue]) -> Vec<AbsValue> {
    let mut out = Vec::with_capacity(prev.len());
    backward_into(flat, output, prev, &mut out);
    out
}

/// One forward pass from the initial map of `input`, met with `current` when given.
pub fn forward_pass(
    term: &Term,
    input: &Valuation,
    current: Option<&AnalysisMap>,
) -> Result<AnalysisMap, EvalError> {
    let flat = FlatTerm::new(term);
    let init = init_values(&flat, input)?;
    let values = forward_values(&flat, &init, current.map(|m| m.values.as_slice()));
    Ok(AnalysisMap {
        positions: flat.positions,
        values,
    })
}

/// One backward pass seeded with `output` at the root, met into `current`.
pub fn backward_pass(term: &Term, output: &AbsValue, current: &AnalysisMap) -> AnalysisMap {
    let flat = FlatTerm::new(term);
    let values = backward_values(&flat, output, &current.values);
    AnalysisMap {
        positions: flat.positions,
        values,
    }
}

/// Alternation cap `2·w·|positions|`, guarding against non-monotone transfers.
fn alternation_cap(flat: &FlatTerm<'_>) -> usize {
    let w = flat.nodes.iter().map(|n| n.sort.width()).max().unwrap_or(1) as usize;
    2 * w * flat.len()
}

/// Runs the chain for one example. When `stop_on_bottom` is set the chain stops
/// as soon as some position is ⊥. Returns every map of the chain when `trace` is set,
/// otherwise only the limit.
fn chain(
    term: &Term,
    flat: &FlatTerm<'_>,
    example: &Example,
    direction: Direction,
    stop_on_bottom: bool,
    trace: bool,
) -> Result<Vec<Vec<AbsValue>>, AnalyzeError> {
    let init = init_values(flat, &example.input)?;
    let output = AbsValue::constant(example.output);
    let mut x = forward_values(flat, &init, None);
    let mut maps = Vec::new();
    if direction == Direction::ForwardOnly {
        x[0] = x[0].meet(&output);
        maps.push(x);
        return Ok(maps);
    }
    let cap = alternation_cap(flat);
    let bottom = |v: &[AbsValue]| v.iter().any(AbsValue::is_bottom);
    let mut next = Vec::with_capacity(x.len());
    for step in 0.. {
        if step > cap {
            return Err(AnalyzeError::NoConvergence {
                term: term.to_string(),
                cap,
            });
        }
        if stop_on_bottom && bottom(&x) {
            break;
        }
        if step % 2 == 0 {
            backward_into(flat, &output, &x, &mut next);
        } else {
            forward_into(flat, &init, Some(&x), &mut next);
        }
        debug_assert!(
            next.iter().zip(&x).all(|(a, b)| a.leq(b)),
            "chain must decrease"
        );
        let done = next == x;
        if trace {
            maps.push(x.clone());
        }
        std::mem::swap(&mut x, &mut next);
        if done {
            break;
        }
    }
    maps.push(x);
    Ok(maps)
}

/// The converged analysis of `term` against all examples.
pub fn analyze(term: &Term, examples: &[Example]) -> Result<AnalysisResult, AnalyzeError> {
    analyze_with(term, examples, Direction::Full)
}

pub fn analyze_with(
    term: &Term,
    examples: &[Example],
    direction: Direction,
) -> Result<AnalysisResult, AnalyzeError> {
    let flat = FlatTerm::new(term);
    let mut maps = Vec::with_capacity(examples.len());
    for e in examples {
        let values = chain(term, &flat, e, direction, false, false)?
            .pop()
            .expect("chain is never empty");
        maps.push(values);
    }
    Ok(AnalysisResult::from_maps(flat.positions, &maps))
}

/// Like [`analyze_with`] but returns `None` as soon as any example makes some
/// position ⊥.
pub fn analyze_or_prune(
    term: &Term,
    examples: &[Example],
    direction: Direction,
) -> Result<Option<AnalysisResult>, AnalyzeError> {
    analyze_or_prune_from(term, examples, direction, &mut 0)
}

/// Like [`analyze_or_prune`], but visits the examples starting at `*first`
/// and, on pruning, leaves the refuting example's index there so the next
/// call tries it first.
pub fn analyze_or_prune_from(
    term: &Term,
    examples: &[Example],
    direction: Direction,
    first: &mut usize,
) -> Result<Option<AnalysisResult>, AnalyzeError> {
    let flat = FlatTerm::new(term);
    let n = examples.len();
    let start = if *first < n { *first } else { 0 };
    let mut maps = vec![Vec::new(); n];
    for i in (start..n).chain(0..start) {
        let values = chain(term, &flat, &examples[i], direction, true, false)?
            .pop()
            .expect("chain is never empty");
        if values.iter().any(AbsValue::is_bottom) {
            *first = i;
            return Ok(None);
        }
        maps[i] = values;
    }
    Ok(Some(AnalysisResult::from_maps(flat.positions, &maps)))
}

/// Every map `X⁰, X¹, …` of the chain for one example. The last two maps are
/// equal: the repeat is what detects convergence.
pub fn analyze_traced(term: &Term, example: &Example) -> Result<Vec<AnalysisMap>, AnalyzeError> {
    let flat = FlatTerm::new(term);
    let chain = chain(term, &flat, example, Direction::Full, false, true)?;
    Ok(chain
        .into_iter()
        .map(|values| AnalysisMap {
            positions: flat.positions.clone(),
            values,
        })
        .collect())
}
