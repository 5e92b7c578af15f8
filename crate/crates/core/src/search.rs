//! Bidirectional search: top-down sketches whose holes are filled with
//! bottom-up components, pruned by abstract analysis of each sketch.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use rustc_hash::FxHashSet;
use std::fmt;
use std::rc::Rc;
use std::time::{Duration, Instant};

use crate::analyzer::{analyze_or_prune_from, AnalysisResult, Direction};
use crate::domain::{AbsValue, DEFAULT_CONCRETIZE_LIMIT};
use crate::enumerator::{compositions, ComponentPool};
use crate::eval::{self, Example};
use crate::grammar::{Grammar, Rhs};
use crate::sygus::SynthProblem;
use crate::term::{Position, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Sketches of height at most `d`, holes filled from a growing pool.
    Bidirectional,
    /// Components of size one only; the sketch height grows instead.
    TopDown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pruning {
    /// Forward-backward analysis to a fixpoint.
    Full,
    /// One forward pass met with the expected output.
    ForwardOnly,
    /// No analysis: every hole accepts every component.
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueuePolicy {
    /// Complete candidates first, then by size, then insertion order.
    CompleteFirst,
    /// By size, then insertion order.
    SizeOrdered,
    Fifo,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum sketch height `d` (edges from the root to the deepest leaf).
    pub max_height: usize,
    /// Maximum sketch size in nodes. Raised to `1 + max arity` when smaller,
    /// so every production appears in some sketch.
    pub max_sketch_size: usize,
    pub timeout: Duration,
    pub mode: Mode,
    pub pruning: Pruning,
    /// Largest concretization used for index lookups and hole picking.
    pub concretize_limit: usize,
    pub queue: QueuePolicy,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            max_height: 3,
            max_sketch_size: 3,
            timeout: Duration::from_secs(600),
            mode: Mode::Bidirectional,
            pruning: Pruning::Full,
            concretize_limit: DEFAULT_CONCRETIZE_LIMIT,
            queue: QueuePolicy::CompleteFirst,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Outer iterations started.
    pub iterations: usize,
    /// Sketches in the initial set, summed over iterations.
    pub sketches: usize,
    pub dequeued: u64,
    pub enqueued: u64,
    /// Complete candidates that failed some example.
    pub rejected: u64,
    /// Candidates whose analysis produced ⊥.
    pub pruned: u64,
    /// Candidates whose picked hole was instantiated.
    pub expanded: u64,
    /// Analyses that hit the alternation cap; their candidates were kept.
    pub analysis_failures: u64,
    pub analysis_time: Duration,
    /// Total pool size after each growth step; index `i` is `n = i + 1`.
    pub pool_sizes: Vec<usize>,
    /// Component size bound in the last iteration.
    pub final_n: usize,
    /// Sketch height in the last iteration.
    pub final_height: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Solution { term: Term, stats: SearchStats },
    Unrealizable { stats: SearchStats },
    Timeout { stats: SearchStats },
}

impl Outcome {
    pub fn stats(&self) -> &SearchStats {
        match self {
            Outcome::Solution { stats, .. }
            | Outcome::Unrealizable { stats }
            | Outcome::Timeout { stats } => stats,
        }
    }

    pub fn stats_mut(&mut self) -> &mut SearchStats {
        match self {
            Outcome::Solution { stats, .. }
            | Outcome::Unrealizable { stats }
            | Outcome::Timeout { stats } => stats,
        }
    }

    pub fn solution(&self) -> Option<&Term> {
        match self {
            Outcome::Solution { term, .. } => Some(term),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Solution { .. } => "solution",
            Outcome::Unrealizable { .. } => "unrealizable",
            Outcome::Timeout { .. } => "timeout",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Solution { term, .. } => write!(f, "solution {term}"),
            other => f.write_str(other.kind()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("sketch has no holes")]
pub struct NoHoles;

/// Sketches of height at most `d` and size at most `max_size` derivable from
/// the start symbol, excluding the bare start hole. Internal nodes are
/// operators; leaves are variables, constants or holes of nonterminals that
/// have an operator production. Ordered by size, then
/// production order. `None` when `deadline` passes first.
pub fn sketch_gen(
    grammar: &Grammar,
    d: usize,
    max_size: usize,
    deadline: Option<Instant>,
) -> Option<Vec<Term>> {
    let mut gen = SketchGen {
        grammar,
        memo: HashMap::new(),
        deadline,
    };
    let start = grammar.start().id;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    // No sketch of height `d` is larger than a full tree of the widest arity.
    let a = grammar.max_arity().max(1);
    let mut full = 1usize;
    let mut level = 1usize;
    for _ in 0..d {
        level = level.saturating_mul(a);
        full = full.saturating_add(level);
    }
    for s in 1..=max_size.min(full) {
        for t in gen.exact(start, d, s)?.iter() {
            if !matches!(t, Term::Hole(_)) && seen.insert(t.clone()) {
                out.push(t.clone());
            }
        }
    }
    Some(out)
}

struct SketchGen<'a> {
    grammar: &'a Grammar,
    memo: HashMap<(usize, usize, usize), Rc<Vec<Term>>>,
    deadline: Option<Instant>,
}

impl SketchGen<'_> {
    /// Sketches from `nt` of height at most `h` and exactly `s` nodes,
    /// including the hole `nt` itself when `s == 1`.
    fn exact(&mut self, nt: usize, h: usize, s: usize) -> Option<Rc<Vec<Term>>> {
        if let Some(v) = self.memo.get(&(nt, h, s)) {
            return Some(v.clone());
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return None;
        }
        let g = self.grammar;
        let mut out = Vec::new();
        // A nonterminal deriving only leaves is expanded rather than left as
        // a hole: its leaves cover the same programs and analyze exactly.
        if s == 1 && g.productions_of(nt).any(|p| matches!(p.rhs, Rhs::App(..))) {
            out.push(Term::hole(g.nonterminal(nt)));
        }
        for p in g.productions_of(nt) {
            match &p.rhs {
                Rhs::Var(v) if s == 1 => out.push(Term::Var(v.clone())),
                Rhs::Const(c) if s == 1 => out.push(Term::Const(*c)),
                Rhs::App(op, args) if h >= 1 && s > args.len() => {
                    for parts in compositions(s - 1, args.len()) {
                        let mut choices = Vec::with_capacity(args.len());
                        for (&a, &q) in args.iter().zip(&parts) {
                            choices.push(self.exact(a, h - 1, q)?);
                        }
                        if choices.iter().any(|c| c.is_empty()) {
                            continue;
                        }
                        let mut idx = vec![0usize; args.len()];
                        loop {
                            let children = idx
                                .iter()
                                .zip(&choices)
                                .map(|(&i, c)| c[i].clone())
                                .collect();
                            out.push(Term::app(*op, children).expect("grammar is well-sorted"));
                            if !advance(&mut idx, &choices) {
                                break;
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        let out = Rc::new(out);
        self.memo.insert((nt, h, s), out.clone());
        Some(out)
    }
}

/// Steps a mixed-radix counter, rightmost digit fastest; `false` on wrap.
fn advance(idx: &mut [usize], choices: &[Rc<Vec<Term>>]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < choices[k].len() {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// The hole whose precondition tuple has the smallest concretization of at
/// most `limit` values, ties broken leftmost-outermost; the leftmost-outermost
/// hole when none concretizes.
pub fn pick_hole(
    sketch: &Term,
    analysis: Option<&AnalysisResult>,
    limit: usize,
) -> Result<Position, NoHoles> {
    let holes = sketch.holes();
    let first = holes.first().ok_or(NoHoles)?.0.clone();
    let Some(analysis) = analysis else {
        return Ok(first);
    };
    let mut best: Option<(usize, Position)> = None;
    for (p, _) in holes {
        let Some(pre) = analysis.get(&p) else {
            continue;
        };
        if let Some(n) = concretization_size(pre, limit) {
            if best.as_ref().is_none_or(|(m, _)| n < *m) {
                best = Some((n, p));
            }
        }
    }
    Ok(best.map_or(first, |(_, p)| p))
}

fn concretization_size(pre: &[AbsValue], limit: usize) -> Option<usize> {
    let mut product = 1usize;
    for a in pre {
        if a.gamma_size_bound() > limit as u128 {
            return None;
        }
        product = product.checked_mul(a.concretize_if_small(limit)?.len())?;
        if product > limit {
            return None;
        }
    }
    Some(product)
}

/// Solves a PBE problem.
pub fn solve(problem: &SynthProblem, config: &SearchConfig) -> Outcome {
    solve_examples(&problem.grammar, &problem.examples, config)
}

/// Solves with sketches generated from `grammar` and the configuration.
pub fn solve_examples(grammar: &Grammar, examples: &[Example], config: &SearchConfig) -> Outcome {
    let start = Instant::now();
    let deadline = start + config.timeout;
    let mut search = Search::new(grammar, examples, config, start, deadline);
    let outcome = match config.mode {
        Mode::Bidirectional => {
            let size = config.max_sketch_size.max(1 + grammar.max_arity());
            match sketch_gen(grammar, config.max_height, size, Some(deadline)) {
                Some(q) => search.bidirectional(&q),
                None => Outcome::Timeout {
                    stats: search.stats.clone(),
                },
            }
        }
        Mode::TopDown => search.top_down(),
    };
    search.finish(outcome)
}

/// Solves with an explicit initial sketch set `Q` instead of [`sketch_gen`].
pub fn solve_with_sketches(
    grammar: &Grammar,
    examples: &[Example],
    sketches: &[Term],
    config: &SearchConfig,
) -> Outcome {
    let start = Instant::now();
    let mut search = Search::new(grammar, examples, config, start, start + config.timeout);
    let outcome = match config.mode {
        Mode::Bidirectional => search.bidirectional(sketches),
        Mode::TopDown => search.top_down(),
    };
    search.finish(outcome)
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Key(bool, usize, u64);

struct Entry {
    term: Term,
    original: bool,
}

enum Step {
    Done(Outcome),
    /// The queue ran dry; whether every original sketch was pruned.
    Exhausted {
        all_pruned: bool,
    },
}

struct Search<'a> {
    grammar: &'a Grammar,
    examples: &'a [Example],
    config: &'a SearchConfig,
    pool: ComponentPool,
    started: Instant,
    deadline: Instant,
    stats: SearchStats,
    /// Example that refuted the last pruned sketch.
    refuter: usize,
}

impl<'a> Search<'a> {
    fn new(
        grammar: &'a Grammar,
        examples: &'a [Example],
        config: &'a SearchConfig,
        started: Instant,
        deadline: Instant,
    ) -> Search<'a> {
        Search {
            grammar,
            examples,
            config,
            pool: ComponentPool::new(grammar, examples),
            started,
            deadline,
            stats: SearchStats::default(),
            refuter: 0,
        }
    }

    fn finish(&mut self, mut outcome: Outcome) -> Outcome {
        self.stats.elapsed = self.started.elapsed();
        *outcome.stats_mut() = self.stats.clone();
        outcome
    }

    fn timeout(&self) -> Outcome {
        Outcome::Timeout {
            stats: self.stats.clone(),
        }
    }

    fn expired(&self) -> bool {
        Instant::now() >= self.deadline
    }

    fn grow(&mut self) -> bool {
        let ok = self.pool.grow_until(Some(self.deadline));
        self.stats.pool_sizes.push(self.pool.total());
        self.stats.final_n = self.pool.n();
        log::debug!("pool n={} components={}", self.pool.n(), self.pool.total());
        ok
    }

    fn bidirectional(&mut self, sketches: &[Term]) -> Outcome {
        let finite = self.grammar.max_term_size();
        self.stats.final_height = self.config.max_height;
        loop {
            if !self.grow() {
                return self.timeout();
            }
            match self.iterate(sketches) {
                Step::Done(o) => return o,
                Step::Exhausted { all_pruned: true } => {
                    return Outcome::Unrealizable {
                        stats: self.stats.clone(),
                    }
                }
                Step::Exhausted { all_pruned: false } => {}
            }
            if finite.is_some_and(|m| self.pool.n() >= m) {
                return Outcome::Unrealizable {
                    stats: self.stats.clone(),
                };
            }
        }
    }

    fn top_down(&mut self) -> Outcome {
        if !self.grow() {
            return self.timeout();
        }
        let mut previous = 0;
        for d in 1.. {
            self.stats.final_height = d;
            let Some(q) = sketch_gen(self.grammar, d, usize::MAX, Some(self.deadline)) else {
                return self.timeout();
            };
            match self.iterate(&q) {
                Step::Done(o) => return o,
                Step::Exhausted { all_pruned: true } => {
                    return Outcome::Unrealizable {
                        stats: self.stats.clone(),
                    }
                }
                Step::Exhausted { all_pruned: false } => {}
            }
            // No taller sketches exist: the language is finite and covered.
            if q.len() == previous {
                return Outcome::Unrealizable {
                    stats: self.stats.clone(),
                };
            }
            previous = q.len();
        }
        unreachable!()
    }

    fn key(&self, t: &Term, seq: u64) -> Key {
        match self.config.queue {
            QueuePolicy::CompleteFirst => Key(!t.is_complete(), t.size(), seq),
            QueuePolicy::SizeOrdered => Key(false, t.size(), seq),
            QueuePolicy::Fifo => Key(false, 0, seq),
        }
    }

    /// One pass over the worklist seeded with `sketches`.
    fn iterate(&mut self, sketches: &[Term]) -> Step {
        self.stats.iterations += 1;
        self.stats.sketches += sketches.len();
        let mut heap: BinaryHeap<Reverse<(Key, usize)>> = BinaryHeap::new();
        let mut entries: Vec<Entry> = Vec::new();
        let mut seen: FxHashSet<Term> = FxHashSet::default();
        let mut seq = 0u64;
        for t in sketches {
            if seen.insert(t.clone()) {
                heap.push(Reverse((self.key(t, seq), entries.len())));
                entries.push(Entry {
                    term: t.clone(),
                    original: true,
                });
                seq += 1;
            }
        }
        let mut all_pruned = true;
        let direction = match self.config.pruning {
            Pruning::Full => Some(Direction::Full),
            Pruning::ForwardOnly => Some(Direction::ForwardOnly),
            Pruning::Off => None,
        };
        while let Some(Reverse((_, id))) = heap.pop() {
            if self.expired() {
                return Step::Done(self.timeout());
            }
            self.stats.dequeued += 1;
            log::trace!("dequeue {}", entries[id].term);
            let Entry { term, original } = std::mem::replace(
                &mut entries[id],
                Entry {
                    term: Term::Const(crate::value::Value::Bool(false)),
                    original: false,
                },
            );
            if term.is_complete() {
                if eval::satisfies(&term, self.examples).unwrap_or(false) {
                    return Step::Done(Outcome::Solution {
                        term,
                        stats: self.stats.clone(),
                    });
                }
                // Forward analysis of a complete term is its concrete value,
                // so a failing complete sketch counts as pruned.
                self.stats.rejected += 1;
                continue;
            }
            let analysis = match direction {
                Some(dir) => {
                    let t0 = Instant::now();
                    let r = analyze_or_prune_from(&term, self.examples, dir, &mut self.refuter);
                    self.stats.analysis_time += t0.elapsed();
                    match r {
                        Ok(None) => {
                            log::trace!("pruned {term}");
                            self.stats.pruned += 1;
                            continue;
                        }
                        Ok(Some(a)) => Some(a),
                        Err(e) => {
                            log::warn!("analysis of {term} failed: {e}");
                            self.stats.analysis_failures += 1;
                            None
                        }
                    }
                }
                None => None,
            };
            if original {
                all_pruned = false;
            }
            let pos = pick_hole(&term, analysis.as_ref(), self.config.concretize_limit)
                .expect("incomplete terms have holes");
            let nt = match term.subterm_at(&pos) {
                Ok(Term::Hole(nt)) => nt.id,
                _ => unreachable!("picked position is a hole"),
            };
            let ids = match analysis.as_ref().and_then(|a| a.get(&pos)) {
                Some(pre) => self
                    .pool
                    .components_satisfying(nt, pre, self.config.concretize_limit),
                None => (0..self.pool.len(nt)).collect(),
            };
            log::trace!("expand {term} at {pos} ({} components)", ids.len());
            self.stats.expanded += 1;
            // Under complete-first ordering, complete children would be
            // dequeued right away in size order; checking them here keeps
            // them out of the queue and the seen set.
            let eager = self.config.queue == QueuePolicy::CompleteFirst;
            let mut complete: Vec<Term> = Vec::new();
            for cid in ids {
                let c = &self.pool.component(nt, cid).term;
                let next = term.replace_at(&pos, c.clone()).expect("position is valid");
                if eager && next.is_complete() {
                    complete.push(next);
                    continue;
                }
                if seen.insert(next.clone()) {
                    heap.push(Reverse((self.key(&next, seq), entries.len())));
                    entries.push(Entry {
                        term: next,
                        original: false,
                    });
                    seq += 1;
                    self.stats.enqueued += 1;
                }
            }
            complete.sort_by_key(Term::size);
            for next in complete {
                if self.expired() {
                    return Step::Done(self.timeout());
                }
                self.stats.enqueued += 1;
                self.stats.dequeued += 1;
                if eval::satisfies(&next, self.examples).unwrap_or(false) {
                    return Step::Done(Outcome::Solution {
                        term: next,
                        stats: self.stats.clone(),
                    });
                }
                self.stats.rejected += 1;
            }
        }
        Step::Exhausted { all_pruned }
    }
}
