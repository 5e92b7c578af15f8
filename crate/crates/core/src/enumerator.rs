//! Bottom-up component generation with observational-equivalence pruning and
//! an index from output vectors to components.

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::sync::Arc;
use std::time::Instant;

use crate::domain::AbsValue;
use crate::eval::{self, Example};
use crate::grammar::{Grammar, Rhs};
use crate::op::Op;
use crate::term::Term;
use crate::value::Value;

/// A closed term with its outputs on the example inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub term: Term,
    pub outputs: Arc<[Value]>,
    pub size: usize,
}

/// Per-nonterminal pools of components up to size `n`, one representative
/// per output vector.
#[derive(Clone, Debug)]
pub struct ComponentPool {
    grammar: Grammar,
    examples: Vec<Example>,
    n: usize,
    components: Vec<Vec<Component>>,
    /// `by_size[nt][s]`: ids of components of size `s` (index 0 unused).
    by_size: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Arc<[Value]>, usize>>,
    /// Terms built and evaluated, including those dropped as equivalent.
    candidates: u64,
}

impl ComponentPool {
    pub fn new(grammar: &Grammar, examples: &[Example]) -> ComponentPool {
        let k = grammar.nonterminals().len();
        ComponentPool {
            grammar: grammar.clone(),
            examples: examples.to_vec(),
            n: 0,
            components: vec![Vec::new(); k],
            by_size: vec![vec![Vec::new()]; k],
            index: vec![HashMap::default(); k],
            candidates: 0,
        }
    }

    /// Current size bound.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn components(&self, nt: usize) -> &[Component] {
        &self.components[nt]
    }

    pub fn component(&self, nt: usize, id: usize) -> &Component {
        &self.components[nt][id]
    }

    /// Ids of components of exactly `size` under `nt`.
    pub fn of_size(&self, nt: usize, size: usize) -> &[usize] {
        self.by_size[nt].get(size).map_or(&[], |v| v.as_slice())
    }

    pub fn len(&self, nt: usize) -> usize {
        self.components[nt].len()
    }

    pub fn total(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn candidates(&self) -> u64 {
        self.candidates
    }

    /// The component of `nt` with exactly these outputs, if any.
    pub fn lookup(&self, nt: usize, outputs: &[Value]) -> Option<usize> {
        self.index[nt].get(outputs).copied()
    }

    /// Grows the pools to size `n + 1`.
    pub fn grow(&mut self) {
        self.grow_until(None);
    }

    /// Like [`ComponentPool::grow`], but gives up once `deadline` passes and
    /// returns `false`; the pool then holds only part of the new layer.
    pub fn grow_until(&mut self, deadline: Option<Instant>) -> bool {
        self.n += 1;
        let n = self.n;
        let k = self.components.len();
        let mut fresh: Vec<Batch> = (0..k).map(|_| Batch::default()).collect();
        let mut complete = true;
        'outer: for (nt, batch) in fresh.iter_mut().enumerate() {
            for p in self.grammar.productions_of(nt) {
                match &p.rhs {
                    Rhs::Var(v) if n == 1 => {
                        let outs: Vec<Value> = self
                            .examples
                            .iter()
                            .map(|e| e.input.lookup(v).expect("examples bind every parameter"))
                            .collect();
                        batch.offer(&self.index[nt], Term::Var(v.clone()), outs);
                    }
                    Rhs::Const(c) if n == 1 => {
                        let outs = vec![*c; self.examples.len()];
                        batch.offer(&self.index[nt], Term::Const(*c), outs);
                    }
                    Rhs::App(op, args) if n > args.len() => {
                        for parts in compositions(n - 1, args.len()) {
                            if !self.compose(nt, *op, args, &parts, batch, deadline) {
                                complete = false;
                                break 'outer;
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        // Insert after composing so size-n components never feed size-n terms.
        for (nt, batch) in fresh.into_iter().enumerate() {
            self.candidates += batch.offered;
            self.by_size[nt].push(Vec::new());
            for (term, outs) in batch.terms {
                let id = self.components[nt].len();
                self.index[nt].insert(outs.clone(), id);
                self.by_size[nt][n].push(id);
                self.components[nt].push(Component {
                    term,
                    outputs: outs,
                    size: n,
                });
            }
        }
        complete
    }

    fn compose(
        &self,
        nt: usize,
        op: Op,
        args: &[usize],
        parts: &[usize],
        batch: &mut Batch,
        deadline: Option<Instant>,
    ) -> bool {
        let lists: Vec<&[usize]> = args
            .iter()
            .zip(parts)
            .map(|(&a, &s)| self.of_size(a, s))
            .collect();
        if lists.iter().any(|l| l.is_empty()) {
            return true;
        }
        let m = self.examples.len();
        let mut choice = vec![0usize; args.len()];
        let mut vals = [Value::Bool(false); 3];
        let mut chosen: Vec<&Component> = Vec::with_capacity(args.len());
        let mut ticks = 0u32;
        loop {
            ticks = ticks.wrapping_add(1);
            if ticks.is_multiple_of(4096) && deadline.is_some_and(|d| Instant::now() >= d) {
                return false;
            }
            chosen.clear();
            chosen.extend(
                args.iter()
                    .zip(&choice)
                    .zip(&lists)
                    .map(|((&a, &c), l)| &self.components[a][l[c]]),
            );
            let outs: Vec<Value> = (0..m)
                .map(|j| {
                    for (slot, c) in vals.iter_mut().zip(&chosen) {
                        *slot = c.outputs[j];
                    }
                    eval::apply(op, &vals[..args.len()]).expect("pool outputs are well-sorted")
                })
                .collect();
            if batch.is_new(&self.index[nt], &outs) {
                let term = Term::App(op, chosen.iter().map(|c| c.term.clone()).collect());
                batch.offer(&self.index[nt], term, outs);
            } else {
                batch.offered += 1;
            }
            // Odometer over the argument lists in lexicographic order.
            let mut d = choice.len();
            loop {
                if d == 0 {
                    return true;
                }
                d -= 1;
                choice[d] += 1;
                if choice[d] < lists[d].len() {
                    break;
                }
                choice[d] = 0;
            }
        }
    }

    /// Ids of the components of `nt` whose outputs lie in the precondition,
    /// ascending. Uses the output index when every entry concretizes to at
    /// most `limit` values and their product stays within `limit`, and scans
    /// the pool otherwise.
    pub fn components_satisfying(
        &self,
        nt: usize,
        precondition: &[AbsValue],
        limit: usize,
    ) -> Vec<usize> {
        match self.concretize(precondition, limit) {
            Some(sets) => self.satisfying_by_index(nt, &sets),
            None => self.satisfying_by_scan(nt, precondition),
        }
    }

    fn concretize(&self, precondition: &[AbsValue], limit: usize) -> Option<Vec<Vec<Value>>> {
        let mut product: usize = 1;
        let mut sets = Vec::with_capacity(precondition.len());
        for a in precondition {
            let s = a.concretize_if_small(limit)?;
            product = product.saturating_mul(s.len());
            if product > limit {
                return None;
            }
            sets.push(s);
        }
        Some(sets)
    }

    pub fn satisfying_by_index(&self, nt: usize, sets: &[Vec<Value>]) -> Vec<usize> {
        let mut out = Vec::new();
        if sets.iter().any(Vec::is_empty) {
            return out;
        }
        let mut choice = vec![0usize; sets.len()];
        let mut key: Vec<Value> = sets.iter().map(|s| s[0]).collect();
        loop {
            if let Some(&id) = self.index[nt].get(key.as_slice()) {
                out.push(id);
            }
            let mut d = 0;
            loop {
                if d == choice.len() {
                    out.sort_unstable();
                    return out;
                }
                choice[d] += 1;
                if choice[d] < sets[d].len() {
                    key[d] = sets[d][choice[d]];
                    break;
                }
                choice[d] = 0;
                key[d] = sets[d][0];
                d += 1;
            }
        }
    }

    pub fn satisfying_by_scan(&self, nt: usize, precondition: &[AbsValue]) -> Vec<usize> {
        self.components[nt]
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.outputs
                    .iter()
                    .zip(precondition)
                    .all(|(v, a)| a.contains(*v))
            })
            .map(|(id, _)| id)
            .collect()
    }

    /// Number of components per nonterminal and size, for statistics.
    pub fn size_histogram(&self) -> Vec<Vec<usize>> {
        self.by_size
            .iter()
            .map(|v| v.iter().map(Vec::len).collect())
            .collect()
    }
}

/// New components of one nonterminal at the size being built.
#[derive(Default)]
struct Batch {
    terms: Vec<(Term, Arc<[Value]>)>,
    seen: HashSet<Arc<[Value]>>,
    offered: u64,
}

impl Batch {
    fn is_new(&self, index: &HashMap<Arc<[Value]>, usize>, outs: &[Value]) -> bool {
        !index.contains_key(outs) && !self.seen.contains(outs)
    }

    /// Keeps `term` unless an equivalent component already exists.
    fn offer(&mut self, index: &HashMap<Arc<[Value]>, usize>, term: Term, outs: Vec<Value>) {
        self.offered += 1;
        if self.is_new(index, &outs) {
            let outs: Arc<[Value]> = outs.into();
            self.seen.insert(outs.clone());
            self.terms.push((term, outs));
        }
    }
}

/// Compositions of `total` into `k` positive parts, in lexicographic order.
pub fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in 1..=rest.saturating_sub(k - 1) {
            prefix.push(first);
            go(rest - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 && total >= k {
        go(total, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of distinct terms of each size `1..=n` derivable from `nt`,
/// saturating at `u128::MAX`.
pub fn count_terms(grammar: &Grammar, nt: usize, n: usize) -> Vec<u128> {
    let k = grammar.nonterminals().len();
    // counts[a][s] for s in 0..=n.
    let mut counts = vec![vec![0u128; n + 1]; k];
    for s in 1..=n {
        for a in 0..k {
            let mut total: u128 = 0;
            for p in grammar.productions_of(a) {
                let c = match &p.rhs {
                    Rhs::Var(_) | Rhs::Const(_) => (s == 1) as u128,
                    Rhs::App(_, args) => compositions(s - 1, args.len())
                        .iter()
                        .map(|parts| {
                            args.iter()
                                .zip(parts)
                                .fold(1u128, |acc, (&b, &q)| acc.saturating_mul(counts[b][q]))
                        })
                        .fold(0u128, u128::saturating_add),
                };
                total = total.saturating_add(c);
            }
            counts[a][s] = total;
        }
    }
    counts[nt][1..].to_vec()
}
