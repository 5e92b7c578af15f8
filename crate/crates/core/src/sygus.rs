//! A SyGuS front end for programming-by-example problems.
//!
//! Accepted: `set-logic`, `set-option`, `set-info`, `declare-var` (ignored),
//! one `synth-fun` with a grammar in either the v2 form (a nonterminal
//! declaration list followed by the rules) or the v1 form (rules only),
//! `constraint`s of the shape `(= (f lit ...) lit)` or its mirror, and
//! `check-synth`. Literals are `#b...`, `#x...`, `(_ bvN w)`, `true` and `false`.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use crate::eval::{Example, Valuation};
use crate::grammar::{Grammar, GrammarError, Production, Rhs};
use crate::op::Op;
use crate::term::{Term, Var};
use crate::value::{mask, Sort, Value, MAX_WIDTH};

/// An inductive synthesis problem: a grammar and input-output examples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthProblem {
    pub name: String,
    pub params: Vec<Var>,
    pub ret: Sort,
    pub grammar: Grammar,
    pub examples: Vec<Example>,
}

impl SynthProblem {
    /// Builds the input valuation of one example from positional arguments.
    pub fn valuation(&self, args: &[Value]) -> Valuation {
        Valuation::from_pairs(self.params.iter().zip(args).map(|(p, v)| (&*p.name, *v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SygusError {
    #[error("{line}:{col}: parse error: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unsupported feature: {what}")]
    UnsupportedFeature {
        line: usize,
        col: usize,
        what: String,
    },
    #[error("{line}:{col}: not a PBE constraint: {msg}")]
    NonPbeConstraint {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("invalid grammar: {0}")]
    Grammar(#[from] GrammarError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("cannot render incomplete term `{0}`")]
    IncompleteTerm(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Loc {
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
enum Sexp {
    Atom(String, Loc),
    List(Vec<Sexp>, Loc),
}

impl Sexp {
    fn loc(&self) -> Loc {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }

    fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v, _) => Some(v),
            Sexp::Atom(..) => None,
        }
    }

    fn head(&self) -> Option<&str> {
        self.list().and_then(|v| v.first()).and_then(Sexp::atom)
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(s, _) => f.write_str(s),
            Sexp::List(v, _) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn parse_err(loc: Loc, msg: impl Into<String>) -> SygusError {
    SygusError::Parse {
        line: loc.line,
        col: loc.col,
        msg: msg.into(),
    }
}

fn unsupported(loc: Loc, what: impl Into<String>) -> SygusError {
    SygusError::UnsupportedFeature {
        line: loc.line,
        col: loc.col,
        what: what.into(),
    }
}

fn non_pbe(loc: Loc, msg: impl Into<String>) -> SygusError {
    SygusError::NonPbeConstraint {
        line: loc.line,
        col: loc.col,
        msg: msg.into(),
    }
}

fn read_sexps(text: &str) -> Result<Vec<Sexp>, SygusError> {
    let mut stack: Vec<(Vec<Sexp>, Loc)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    let push = |item: Sexp, stack: &mut Vec<(Vec<Sexp>, Loc)>, top: &mut Vec<Sexp>| match stack
        .last_mut()
    {
        Some((v, _)) => v.push(item),
        None => top.push(item),
    };
    while let Some(&c) = chars.peek() {
        let loc = Loc { line, col };
        let mut bump = |c: char| {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        match c {
            '(' => {
                chars.next();
                bump(c);
                stack.push((Vec::new(), loc));
            }
            ')' => {
                chars.next();
                bump(c);
                let (items, start) = stack
                    .pop()
                    .ok_or_else(|| parse_err(loc, "unbalanced ')'"))?;
                push(Sexp::List(items, start), &mut stack, &mut top);
            }
            ';' => {
                while let Some(&d) = chars.peek() {
                    if d == '\n' {
                        break;
                    }
                    chars.next();
                    bump(d);
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                bump(c);
            }
            '"' | '|' => {
                let close = c;
                chars.next();
                bump(c);
                let mut s = String::new();
                if close == '"' {
                    s.push('"');
                }
                loop {
                    let d = chars
                        .next()
                        .ok_or_else(|| parse_err(loc, "unterminated literal"))?;
                    bump(d);
                    if d == close {
                        break;
                    }
                    s.push(d);
                }
                if close == '"' {
                    s.push('"');
                }
                push(Sexp::Atom(s, loc), &mut stack, &mut top);
            }
            _ => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                        break;
                    }
                    s.push(d);
                    chars.next();
                    bump(d);
                }
                push(Sexp::Atom(s, loc), &mut stack, &mut top);
            }
        }
    }
    if let Some((_, loc)) = stack.last() {
        return Err(parse_err(*loc, "unbalanced '('"));
    }
    Ok(top)
}

fn parse_width(s: &Sexp) -> Result<u32, SygusError> {
    let w: u32 = s
        .atom()
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| parse_err(s.loc(), format!("expected a width, found `{s}`")))?;
    if w == 0 || w > MAX_WIDTH {
        return Err(unsupported(s.loc(), format!("bitvector width {w}")));
    }
    Ok(w)
}

fn parse_sort(s: &Sexp) -> Result<Sort, SygusError> {
    match s {
        Sexp::Atom(a, _) if a == "Bool" => Ok(Sort::Bool),
        Sexp::List(v, _) => match v.iter().map(Sexp::atom).collect::<Vec<_>>().as_slice() {
            [Some("_"), Some("BitVec"), _] => Ok(Sort::BitVec(parse_width(&v[2])?)),
            [Some("BitVec"), _] => Ok(Sort::BitVec(parse_width(&v[1])?)),
            _ => Err(unsupported(s.loc(), format!("sort `{s}`"))),
        },
        _ => Err(unsupported(s.loc(), format!("sort `{s}`"))),
    }
}

/// A literal, or `None` when `s` is not literal syntax.
fn parse_literal(s: &Sexp) -> Result<Option<Value>, SygusError> {
    let loc = s.loc();
    match s {
        Sexp::Atom(a, _) => {
            if a == "true" || a == "false" {
                return Ok(Some(Value::Bool(a == "true")));
            }
            let (digits, radix, bits_per) = if let Some(d) = a.strip_prefix("#b") {
                (d, 2, 1)
            } else if let Some(d) = a.strip_prefix("#x") {
                (d, 16, 4)
            } else {
                return Ok(None);
            };
            let w = digits.len() as u32 * bits_per;
            if w == 0 || w > MAX_WIDTH {
                return Err(parse_err(loc, format!("bad literal `{a}`")));
            }
            let v = u64::from_str_radix(digits, radix)
                .map_err(|_| parse_err(loc, format!("bad literal `{a}`")))?;
            Ok(Some(Value::bv(v, w)))
        }
        Sexp::List(v, _) => {
            if let [Sexp::Atom(u, _), Sexp::Atom(bv, _), w] = v.as_slice() {
                if u == "_" && bv.starts_with("bv") {
                    let n: u128 = bv[2..]
                        .parse()
                        .map_err(|_| parse_err(loc, format!("bad literal `{s}`")))?;
                    let w = parse_width(w)?;
                    if n > mask(w) as u128 {
                        return Err(parse_err(loc, format!("literal `{s}` does not fit")));
                    }
                    return Ok(Some(Value::bv(n as u64, w)));
                }
            }
            Ok(None)
        }
    }
}

struct GrammarBuilder<'a> {
    params: &'a [Var],
    names: Vec<(String, Sort)>,
    ids: HashMap<String, usize>,
    rules: Vec<(usize, Rhs)>,
    chains: Vec<(usize, usize)>,
}

impl GrammarBuilder<'_> {
    fn declare(&mut self, name: &str, sort: Sort, loc: Loc) -> Result<usize, SygusError> {
        if self.ids.contains_key(name) {
            return Err(parse_err(
                loc,
                format!("nonterminal `{name}` declared twice"),
            ));
        }
        let id = self.names.len();
        self.names.push((name.to_string(), sort));
        self.ids.insert(name.to_string(), id);
        Ok(id)
    }

    fn fresh(&mut self, base: &str, sort: Sort) -> usize {
        let mut k = self.names.len();
        loop {
            let name = format!("{base}_{k}");
            if !self.ids.contains_key(&name) && !self.params.iter().any(|p| *p.name == *name) {
                return self.declare(&name, sort, Loc { line: 0, col: 0 }).unwrap();
            }
            k += 1;
        }
    }

    fn sort_of(&self, nt: usize) -> Sort {
        self.names[nt].1
    }

    /// Adds `lhs -> s`.
    fn production(&mut self, lhs: usize, s: &Sexp) -> Result<(), SygusError> {
        let loc = s.loc();
        if let Some(v) = parse_literal(s)? {
            self.rules.push((lhs, Rhs::Const(v)));
            return Ok(());
        }
        match s {
            Sexp::Atom(a, _) => {
                if let Some(&b) = self.ids.get(a) {
                    self.chains.push((lhs, b));
                } else if let Some(p) = self.params.iter().find(|p| *p.name == **a) {
                    self.rules.push((lhs, Rhs::Var(p.clone())));
                } else {
                    return Err(parse_err(loc, format!("unknown symbol `{a}`")));
                }
            }
            Sexp::List(items, _) => {
                let head = items
                    .first()
                    .and_then(Sexp::atom)
                    .ok_or_else(|| parse_err(loc, "expected an operator application"))?;
                if matches!(
                    head,
                    "Constant" | "Variable" | "InputVariable" | "LocalVariable"
                ) {
                    return Err(unsupported(loc, format!("`{head}` productions")));
                }
                let op = Op::from_name(head)
                    .ok_or_else(|| unsupported(loc, format!("operator `{head}`")))?;
                let args = &items[1..];
                if args.len() != op.arity() {
                    return Err(parse_err(
                        loc,
                        format!("`{head}` expects {} arguments", op.arity()),
                    ));
                }
                let mut ids = Vec::with_capacity(args.len());
                for (i, a) in args.iter().enumerate() {
                    let id = match a.atom().and_then(|n| self.ids.get(n)) {
                        Some(&b) => b,
                        None => {
                            let sort = self.infer_sort(a, op, i)?;
                            let base = self.names[lhs].0.clone();
                            let b = self.fresh(&base, sort);
                            self.production(b, a)?;
                            b
                        }
                    };
                    ids.push(id);
                }
                self.rules.push((lhs, Rhs::App(op, ids)));
            }
        }
        Ok(())
    }

    /// Sort of an inline production argument.
    fn infer_sort(&self, s: &Sexp, parent: Op, _pos: usize) -> Result<Sort, SygusError> {
        if let Some(v) = parse_literal(s)? {
            return Ok(v.sort());
        }
        match s {
            Sexp::Atom(a, loc) => self
                .params
                .iter()
                .find(|p| *p.name == **a)
                .map(|p| p.sort)
                .ok_or_else(|| parse_err(*loc, format!("unknown symbol `{a}`"))),
            Sexp::List(items, loc) => {
                let head = items.first().and_then(Sexp::atom).unwrap_or("");
                let op = Op::from_name(head)
                    .ok_or_else(|| unsupported(*loc, format!("operator `{head}` in `{parent}`")))?;
                let mut sorts = Vec::new();
                for (i, a) in items[1..].iter().enumerate() {
                    let sort = match a.atom().and_then(|n| self.ids.get(n)) {
                        Some(&b) => self.sort_of(b),
                        None => self.infer_sort(a, op, i)?,
                    };
                    sorts.push(sort);
                }
                op.result_sort(&sorts)
                    .map_err(|e| parse_err(*loc, e.to_string()))
            }
        }
    }

    fn finish(self, start: usize) -> Result<Grammar, SygusError> {
        let k = self.names.len();
        // Chain closure: A inherits every non-chain production of each B with A ->* B.
        let mut reach: Vec<Vec<usize>> = (0..k).map(|a| vec![a]).collect();
        for a in 0..k {
            let mut i = 0;
            while i < reach[a].len() {
                let b = reach[a][i];
                for &(x, y) in &self.chains {
                    if x == b && !reach[a].contains(&y) {
                        reach[a].push(y);
                    }
                }
                i += 1;
            }
        }
        let mut productions = Vec::new();
        for (a, targets) in reach.iter().enumerate() {
            let mut seen = HashSet::new();
            for &b in targets {
                for (lhs, rhs) in &self.rules {
                    if *lhs == b && seen.insert(rhs.clone()) {
                        productions.push(Production {
                            lhs: a,
                            rhs: rhs.clone(),
                        });
                    }
                }
            }
        }
        Ok(Grammar::new(self.names, start, productions)?)
    }
}

fn parse_synth_fun(
    items: &[Sexp],
    loc: Loc,
) -> Result<(String, Vec<Var>, Sort, Grammar), SygusError> {
    let name = items
        .get(1)
        .and_then(Sexp::atom)
        .ok_or_else(|| parse_err(loc, "synth-fun needs a name"))?
        .to_string();
    let params_s = items
        .get(2)
        .and_then(Sexp::list)
        .ok_or_else(|| parse_err(loc, "synth-fun needs a parameter list"))?;
    let mut params = Vec::new();
    for (i, p) in params_s.iter().enumerate() {
        match p.list() {
            Some([Sexp::Atom(n, _), sort]) => params.push(Var::new(n, i, parse_sort(sort)?)),
            _ => return Err(parse_err(p.loc(), "malformed parameter")),
        }
    }
    let ret = parse_sort(
        items
            .get(3)
            .ok_or_else(|| parse_err(loc, "synth-fun needs a return sort"))?,
    )?;
    let (decls, rules) = match &items[4..] {
        [] => return Err(unsupported(loc, "synth-fun without a grammar")),
        [rules] => (None, rules),
        [decls, rules] => (Some(decls), rules),
        _ => return Err(parse_err(loc, "unexpected synth-fun arguments")),
    };
    let mut b = GrammarBuilder {
        params: &params,
        names: Vec::new(),
        ids: HashMap::new(),
        rules: Vec::new(),
        chains: Vec::new(),
    };
    let rules = rules
        .list()
        .ok_or_else(|| parse_err(rules.loc(), "expected grammar rules"))?;
    match decls {
        Some(d) => {
            for decl in d
                .list()
                .ok_or_else(|| parse_err(d.loc(), "expected nonterminal declarations"))?
            {
                match decl.list() {
                    Some([Sexp::Atom(n, l), sort]) => {
                        b.declare(n, parse_sort(sort)?, *l)?;
                    }
                    _ => return Err(parse_err(decl.loc(), "malformed nonterminal declaration")),
                }
            }
        }
        None => {
            for rule in rules {
                match rule.list() {
                    Some([Sexp::Atom(n, l), sort, _]) => {
                        b.declare(n, parse_sort(sort)?, *l)?;
                    }
                    _ => return Err(parse_err(rule.loc(), "malformed grammar rule")),
                }
            }
        }
    }
    for rule in rules {
        let Some([Sexp::Atom(n, l), sort, Sexp::List(prods, _)]) = rule.list() else {
            return Err(parse_err(rule.loc(), "malformed grammar rule"));
        };
        let &lhs = b
            .ids
            .get(n)
            .ok_or_else(|| parse_err(*l, format!("undeclared nonterminal `{n}`")))?;
        if parse_sort(sort)? != b.sort_of(lhs) {
            return Err(parse_err(
                *l,
                format!("sort of `{n}` differs from its declaration"),
            ));
        }
        for p in prods {
            b.production(lhs, p)?;
        }
    }
    if b.names.is_empty() {
        return Err(parse_err(loc, "empty grammar"));
    }
    if b.sort_of(0) != ret {
        return Err(parse_err(
            loc,
            "start nonterminal sort differs from the return sort",
        ));
    }
    let grammar = b.finish(0)?;
    Ok((name, params, ret, grammar))
}

fn parse_constraint(
    body: &Sexp,
    name: &str,
    params: &[Var],
    ret: Sort,
) -> Result<Example, SygusError> {
    let loc = body.loc();
    let items = match body.list() {
        Some(items) if body.head() == Some("=") && items.len() == 3 => items,
        _ => return Err(non_pbe(loc, format!("`{body}`"))),
    };
    let (call, out) = if items[1].head() == Some(name) {
        (&items[1], &items[2])
    } else if items[2].head() == Some(name) {
        (&items[2], &items[1])
    } else {
        return Err(non_pbe(loc, format!("no application of `{name}`")));
    };
    let output = parse_literal(out)?
        .ok_or_else(|| non_pbe(out.loc(), format!("`{out}` is not a literal")))?;
    if output.sort() != ret {
        return Err(non_pbe(
            out.loc(),
            format!("`{out}` does not have sort {ret}"),
        ));
    }
    let args = &call.list().unwrap()[1..];
    if args.len() != params.len() {
        return Err(non_pbe(call.loc(), "wrong number of arguments"));
    }
    let mut input = Valuation::new();
    for (a, p) in args.iter().zip(params) {
        let v =
            parse_literal(a)?.ok_or_else(|| non_pbe(a.loc(), format!("`{a}` is not a literal")))?;
        if v.sort() != p.sort {
            return Err(non_pbe(
                a.loc(),
                format!("`{a}` does not have sort {}", p.sort),
            ));
        }
        input.insert(&p.name, v);
    }
    Ok(Example { input, output })
}

/// Parses a PBE problem.
pub fn parse_problem(text: &str) -> Result<SynthProblem, SygusError> {
    let top = read_sexps(text)?;
    let mut fun: Option<(String, Vec<Var>, Sort, Grammar)> = None;
    let mut pending: Vec<&Sexp> = Vec::new();
    for cmd in &top {
        let loc = cmd.loc();
        let items = cmd
            .list()
            .ok_or_else(|| parse_err(loc, format!("expected a command, found `{cmd}`")))?;
        match cmd.head() {
            Some("set-logic" | "set-option" | "set-info" | "declare-var" | "check-synth") => {}
            Some("synth-fun") => {
                if fun.is_some() {
                    return Err(unsupported(loc, "more than one synth-fun"));
                }
                fun = Some(parse_synth_fun(items, loc)?);
            }
            Some("constraint") => match items {
                [_, body] => pending.push(body),
                _ => return Err(parse_err(loc, "malformed constraint")),
            },
            Some(other) => return Err(unsupported(loc, format!("command `{other}`"))),
            None => return Err(parse_err(loc, "expected a command")),
        }
    }
    let (name, params, ret, grammar) =
        fun.ok_or_else(|| parse_err(Loc { line: 1, col: 1 }, "no synth-fun"))?;
    let examples = pending
        .into_iter()
        .map(|c| parse_constraint(c, &name, &params, ret))
        .collect::<Result<Vec<_>, _>>()?;
    if examples.is_empty() {
        return Err(non_pbe(
            Loc { line: 1, col: 1 },
            "no input-output constraints",
        ));
    }
    Ok(SynthProblem {
        name,
        params,
        ret,
        grammar,
        examples,
    })
}

fn render_params(problem: &SynthProblem) -> String {
    problem
        .params
        .iter()
        .map(|p| format!("({} {})", p.name, p.sort))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The solution as a `define-fun`.
pub fn render_solution(problem: &SynthProblem, t: &Term) -> Result<String, RenderError> {
    if !t.is_complete() {
        return Err(RenderError::IncompleteTerm(t.to_string()));
    }
    Ok(format!(
        "(define-fun {} ({}) {} {})",
        problem.name,
        render_params(problem),
        problem.ret,
        t
    ))
}

/// The problem in the accepted SyGuS subset, normalized: chain rules
/// eliminated and nested production arguments named.
pub fn render_problem(problem: &SynthProblem) -> String {
    let g = &problem.grammar;
    let mut out = String::new();
    let logic = if problem.params.iter().any(|p| !p.sort.is_bool()) || !problem.ret.is_bool() {
        "BV"
    } else {
        "SAT"
    };
    let _ = writeln!(out, "(set-logic {logic})");
    let _ = writeln!(
        out,
        "(synth-fun {} ({}) {}",
        problem.name,
        render_params(problem),
        problem.ret
    );
    let decls: Vec<String> = g
        .nonterminals()
        .iter()
        .map(|nt| format!("({} {})", nt.name, nt.sort))
        .collect();
    let _ = writeln!(out, "  ({})", decls.join(" "));
    out.push_str("  (");
    for (i, nt) in g.nonterminals().iter().enumerate() {
        if i > 0 {
            out.push_str("\n   ");
        }
        let prods: Vec<String> = g
            .productions_of(nt.id)
            .map(|p| match &p.rhs {
                Rhs::Var(v) => v.name.to_string(),
                Rhs::Const(c) => c.to_string(),
                Rhs::App(op, args) => {
                    let args: Vec<&str> = args.iter().map(|&a| &*g.nonterminal(a).name).collect();
                    format!("({} {})", op, args.join(" "))
                }
            })
            .collect();
        let _ = write!(out, "({} {} ({}))", nt.name, nt.sort, prods.join(" "));
    }
    out.push_str("))\n");
    for p in &problem.params {
        let _ = writeln!(out, "(declare-var {} {})", p.name, p.sort);
    }
    for e in &problem.examples {
        let args: Vec<String> = problem
            .params
            .iter()
            .map(|p| {
                e.input
                    .get(&p.name)
                    .expect("examples bind every parameter")
                    .to_string()
            })
            .collect();
        let _ = writeln!(
            out,
            "(constraint (= ({} {}) {}))",
            problem.name,
            args.join(" "),
            e.output
        );
    }
    out.push_str("(check-synth)\n");
    out
}
