//! Example-guided synthesis of bitvector and Boolean programs.
//!
//! The search combines top-down sketches with bottom-up components and prunes
//! sketches whose necessary preconditions, computed by iterated forward-backward
//! abstract interpretation, are unsatisfiable.

pub mod analyzer;
pub mod dnc;
pub mod domain;
pub mod enumerator;
pub mod eval;
pub mod grammar;
pub mod op;
pub mod search;
pub mod sygus;
pub mod term;
pub mod value;

pub use analyzer::{
    analyze, analyze_or_prune, analyze_or_prune_from, AnalysisMap, AnalysisResult, AnalyzeError,
    Direction,
};
pub use dnc::{
    learn_tree, solve_with_dnc, solve_with_dnc_stats, CoverMatrix, DecisionTree, DncStats,
    NoSeparatingPredicate, Predicate,
};
pub use domain::{AbsValue, AbstractBit, Bits, SInterval, UInterval};
pub use eval::{eval, eval_outputs, satisfies, EvalError, Example, Valuation};
pub use grammar::{Grammar, GrammarError, Production, Rhs};
pub use op::{Op, SortError};
pub use search::{
    pick_hole, sketch_gen, solve, solve_examples, solve_with_sketches, Mode, Outcome, Pruning,
    QueuePolicy, SearchConfig, SearchStats,
};
pub use sygus::{
    parse_problem, render_problem, render_solution, RenderError, SygusError, SynthProblem,
};
pub use term::{NonTerminal, Position, Term, TermError, Var};
pub use value::{Sort, Value};
