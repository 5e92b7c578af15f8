//! Checks that back the acceptance report. Each returns a [`Check`] rather than
//! panicking so a runner can print every line before failing.

use std::time::{Duration, Instant};

use bisynth::analyzer::{analyze_traced, forward_pass};
use bisynth::domain::bitwise::solve_mul;
use bisynth::domain::{infer_mul_operand, mod_inverse};
use bisynth::enumerator::{count_terms, ComponentPool};
use bisynth::{
    analyze, eval, parse_problem, satisfies, solve, solve_with_sketches, AbsValue, Bits, Op,
    Position, SInterval, SearchConfig, Sort, Term, UInterval, Value,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;

#[derive(Debug)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Check {
        Check {
            passed,
            detail: detail.into(),
        }
    }
}

pub const OVERVIEW_SL: &str = include_str!("../../../../benchmarks/golden/overview.sl");

fn overview_example() -> bisynth::Example {
    example(0b1011, 0b0011)
}

/// The worked example's three sketches: `S * S`, `(S ^ x) >> 1`, `(S / x) >> 1`.
pub fn worked_sketches() -> [Term; 3] {
    [
        app(Op::BvMul, vec![hole(), hole()]),
        app(Op::BvAshr, vec![app(Op::BvXor, vec![hole(), x()]), one()]),
        app(Op::BvAshr, vec![app(Op::BvUdiv, vec![hole(), x()]), one()]),
    ]
}

pub fn overview_search() -> Check {
    let problem = parse_problem(OVERVIEW_SL).expect("overview parses");
    let t0 = Instant::now();
    let out = solve(&problem, &SearchConfig::default());
    let wall = t0.elapsed();
    let Some(t) = out.solution() else {
        return Check::new(false, format!("no solution: {}", out.kind()));
    };
    let ok_example = satisfies(t, &problem.examples).unwrap_or(false);
    let n = out.stats().final_n;
    // The worked-example sketches must reach a solution at the same bound.
    let injected = solve_with_sketches(
        &problem.grammar,
        &problem.examples,
        &worked_sketches(),
        &SearchConfig::default(),
    );
    let injected_n = injected.stats().final_n;
    let injected_ok = injected
        .solution()
        .is_some_and(|s| satisfies(s, &problem.examples).unwrap_or(false) && s.size() <= 7);
    let passed = ok_example
        && t.size() <= 7
        && n == 3
        && wall < Duration::from_secs(5)
        && injected_ok
        && injected_n == 3;
    Check::new(
        passed,
        format!(
            "{t} (size {}, n={n}, {:.3}s); worked-example sketches solved at n={injected_n}",
            t.size(),
            wall.as_secs_f64()
        ),
    )
}

fn bits_at(m: &bisynth::AnalysisMap, path: &[u32]) -> String {
    m.get(&Position::from_path(path))
        .and_then(|v| v.bits().map(Bits::render))
        .unwrap_or_default()
}

pub fn golden_table() -> Check {
    let ex = overview_example();
    let [_, xor, div] = worked_sketches();
    let mut problems = Vec::new();

    // (S / x) >> 1: forward gives 0000 at the root, which meets 0011 to ⊥.
    let fwd = forward_pass(&div, &ex.input, None).unwrap();
    let root = fwd
        .get(&Position::root())
        .unwrap()
        .bits()
        .unwrap()
        .to_owned();
    let met = root.meet(&Bits::constant(0b0011, W));
    if root.render() != "0000" || !met.is_bottom() {
        problems.push(format!(
            "div root {} meet 0011 = {}",
            root.render(),
            met.render()
        ));
    }
    if !analyze(&div, std::slice::from_ref(&ex)).unwrap().has_bottom() {
        problems.push("div sketch not pruned".into());
    }

    let expected = [
        ["TTTT", "TTTT", "0001", "TTTT", "1011"],
        ["0011", "011T", "0001", "110T", "1011"],
        ["0011", "011T", "0001", "110T", "1011"],
    ];
    let chain = analyze_traced(&xor, &ex).unwrap();
    let paths: [&[u32]; 5] = [&[], &[1], &[2], &[1, 1], &[1, 2]];
    for (k, row) in expected.iter().enumerate() {
        let Some(m) = chain.get(k) else {
            problems.push(format!("chain has only {} maps", chain.len()));
            break;
        };
        let got: Vec<String> = paths.iter().map(|p| bits_at(m, p)).collect();
        if got != row {
            problems.push(format!("X{k}: {got:?} != {row:?}"));
        }
    }
    let pre = analyze(&xor, &[ex])
        .unwrap()
        .get(&Position::from_path(&[1, 1]))
        .map(|v| v[0].bits().unwrap().render());
    if pre.as_deref() != Some("110T") {
        problems.push(format!("hole precondition {pre:?}"));
    }
    if problems.is_empty() {
        Check::new(
            true,
            "div sketch ⊥-pruned; xor sketch chain and hole precondition 110T match",
        )
    } else {
        Check::new(false, problems.join("; "))
    }
}

#[derive(Default)]
struct Tally {
    tuples: u64,
    violations: u64,
    first: Option<String>,
}

impl Tally {
    fn fail(&mut self, msg: impl FnOnce() -> String) {
        self.violations += 1;
        if self.first.is_none() {
            self.first = Some(msg());
        }
    }
}

fn component_forward(t: &mut Tally) {
    let bits = all_bits();
    let uns = all_unsigned();
    let sig = all_signed();
    for op in BV_OPS {
        let k = op.arity();
        // Bitwise: every argument tuple.
        let tuples: Vec<Vec<Bits>> = if k == 1 {
            bits.iter().map(|b| vec![*b]).collect()
        } else {
            bits.iter()
                .flat_map(|a| bits.iter().map(move |b| vec![*a, *b]))
                .collect()
        };
        for args in &tuples {
            t.tuples += 1;
            let r = Bits::forward(op, args);
            let sets: Vec<Vec<u64>> = args.iter().map(Bits::gamma).collect();
            for_each_tuple(&sets, |c| {
                let v = apply_bits(op, c);
                if !r.contains(v) {
                    t.fail(|| {
                        format!(
                            "bits {op} {args:?} -> {} misses {v:04b} from {c:?}",
                            r.render()
                        )
                    });
                }
            });
        }
        // Intervals: unary exhaustive, binary over every pair of a strided subset.
        let pick = |n: usize| (0..n).filter(move |i| k == 1 || i % 3 == 0);
        let u_tuples: Vec<Vec<UInterval>> = if k == 1 {
            uns.iter().map(|u| vec![*u]).collect()
        } else {
            pick(uns.len())
                .flat_map(|i| pick(uns.len()).map(move |j| (i, j)))
                .map(|(i, j)| vec![uns[i], uns[j]])
                .collect()
        };
        for args in &u_tuples {
            t.tuples += 1;
            let r = UInterval::forward(op, args);
            let sets: Vec<Vec<u64>> = args.iter().map(UInterval::gamma).collect();
            for_each_tuple(&sets, |c| {
                let v = apply_bits(op, c);
                if !r.contains(v) {
                    t.fail(|| format!("unsigned {op} {args:?} -> {r:?} misses {v} from {c:?}"));
                }
            });
        }
        let s_tuples: Vec<Vec<SInterval>> = if k == 1 {
            sig.iter().map(|s| vec![*s]).collect()
        } else {
            pick(sig.len())
                .flat_map(|i| pick(sig.len()).map(move |j| (i, j)))
                .map(|(i, j)| vec![sig[i], sig[j]])
                .collect()
        };
        for args in &s_tuples {
            t.tuples += 1;
            let r = SInterval::forward(op, args);
            let sets: Vec<Vec<u64>> = args.iter().map(SInterval::gamma).collect();
            for_each_tuple(&sets, |c| {
                let v = apply_bits(op, c);
                if !r.contains(v) {
                    t.fail(|| format!("signed {op} {args:?} -> {r:?} misses {v} from {c:?}"));
                }
            });
        }
    }
}

/// A result value that some concrete tuple maps into, or a random one.
fn result_bits(rng: &mut StdRng, outputs: &[u64]) -> Bits {
    if outputs.is_empty() || rng.gen_bool(0.25) {
        return random_bits(rng);
    }
    let k = rng.gen_range(1..=3);
    Bits::alpha(W, (0..k).map(|_| outputs[rng.gen_range(0..outputs.len())]))
}

fn component_backward(t: &mut Tally, rng: &mut StdRng, per_op: usize) {
    for op in BV_OPS {
        let k = op.arity();
        for _ in 0..per_op {
            // Bitwise.
            let args: Vec<Bits> = (0..k).map(|_| random_bits(rng)).collect();
            let sets: Vec<Vec<u64>> = args.iter().map(Bits::gamma).collect();
            let mut outs = Vec::new();
            for_each_tuple(&sets, |c| outs.push(apply_bits(op, c)));
            let result = result_bits(rng, &outs);
            let refined: Vec<Bits> = (0..k)
                .map(|i| Bits::backward(op, i, &result, &args))
                .collect();
            t.tuples += 1;
            for_each_tuple(&sets, |c| {
                if result.contains(apply_bits(op, c)) {
                    for i in 0..k {
                        if !refined[i].contains(c[i]) {
                            t.fail(|| {
                                format!(
                                    "bits backward {op} arg {i} {args:?} result {} -> {} drops {c:?}",
                                    result.render(),
                                    refined[i].render()
                                )
                            });
                        }
                    }
                }
            });

            // Unsigned intervals.
            let args: Vec<UInterval> = (0..k).map(|_| random_unsigned(rng)).collect();
            let sets: Vec<Vec<u64>> = args.iter().map(UInterval::gamma).collect();
            let mut outs = Vec::new();
            for_each_tuple(&sets, |c| outs.push(apply_bits(op, c)));
            let result = if outs.is_empty() || rng.gen_bool(0.25) {
                random_unsigned(rng)
            } else {
                let a = outs[rng.gen_range(0..outs.len())];
                let b = outs[rng.gen_range(0..outs.len())];
                UInterval::new(W, a.min(b), a.max(b))
            };
            let refined: Vec<UInterval> = (0..k)
                .map(|i| UInterval::backward(op, i, &result, &args))
                .collect();
            t.tuples += 1;
            for_each_tuple(&sets, |c| {
                if result.contains(apply_bits(op, c)) {
                    for i in 0..k {
                        if !refined[i].contains(c[i]) {
                            t.fail(|| {
                                format!("unsigned backward {op} arg {i} {args:?} result {result:?} drops {c:?}")
                            });
                        }
                    }
                }
            });

            // Signed intervals.
            let args: Vec<SInterval> = (0..k).map(|_| random_signed(rng)).collect();
            let sets: Vec<Vec<u64>> = args.iter().map(SInterval::gamma).collect();
            let mut outs = Vec::new();
            for_each_tuple(&sets, |c| {
                outs.push(bisynth::value::to_signed(apply_bits(op, c), W))
            });
            let result = if outs.is_empty() || rng.gen_bool(0.25) {
                random_signed(rng)
            } else {
                let a = outs[rng.gen_range(0..outs.len())];
                let b = outs[rng.gen_range(0..outs.len())];
                SInterval::new(W, a.min(b), a.max(b))
            };
            let refined: Vec<SInterval> = (0..k)
                .map(|i| SInterval::backward(op, i, &result, &args))
                .collect();
            t.tuples += 1;
            for_each_tuple(&sets, |c| {
                if result.contains(apply_bits(op, c)) {
                    for i in 0..k {
                        if !refined[i].contains(c[i]) {
                            t.fail(|| {
                                format!("signed backward {op} arg {i} {args:?} result {result:?} drops {c:?}")
                            });
                        }
                    }
                }
            });
        }
    }
}

/// Operators of the product domain with argument sorts for sampling.
fn product_signatures() -> Vec<(Op, Vec<Sort>)> {
    let b = Sort::BitVec(W);
    let mut out: Vec<(Op, Vec<Sort>)> =
        BV_OPS.iter().map(|&op| (op, vec![b; op.arity()])).collect();
    for op in [Op::BvUle, Op::BvUlt, Op::BvSle, Op::BvSlt, Op::Eq] {
        out.push((op, vec![b, b]));
    }
    out.push((Op::Ite, vec![Sort::Bool, b, b]));
    out.push((Op::Not, vec![Sort::Bool]));
    for op in [Op::And, Op::Or, Op::Xor] {
        out.push((op, vec![Sort::Bool, Sort::Bool]));
    }
    out
}

fn random_of(rng: &mut StdRng, sort: Sort) -> AbsValue {
    match sort {
        Sort::Bool => random_bool(rng),
        Sort::BitVec(_) => random_product(rng),
    }
}

fn product_soundness(t: &mut Tally, rng: &mut StdRng, per_op: usize) {
    for (op, sorts) in product_signatures() {
        let k = sorts.len();
        for _ in 0..per_op {
            let args: Vec<AbsValue> = sorts.iter().map(|&s| random_of(rng, s)).collect();
            let sets: Vec<Vec<Value>> = args.iter().map(gamma).collect();
            let fwd = AbsValue::forward(op, &args);
            let mut outs = Vec::new();
            t.tuples += 1;
            for_each_tuple(&sets, |c| {
                let v = eval::apply(op, c).unwrap();
                outs.push(v);
                if !in_gamma(&fwd, v) {
                    t.fail(|| {
                        format!("product forward {op} {args:?} -> {fwd} misses {v} from {c:?}")
                    });
                }
            });
            let result = if outs.is_empty() || rng.gen_bool(0.25) {
                random_of(rng, fwd.sort())
            } else {
                let n = rng.gen_range(1..=3);
                AbsValue::alpha(
                    fwd.sort(),
                    (0..n).map(|_| outs[rng.gen_range(0..outs.len())]),
                )
            };
            let refined: Vec<AbsValue> = (0..k)
                .map(|i| AbsValue::backward(op, i, &result, &args))
                .collect();
            t.tuples += 1;
            for_each_tuple(&sets, |c| {
                if in_gamma(&result, eval::apply(op, c).unwrap()) {
                    for i in 0..k {
                        if !in_gamma(&refined[i], c[i]) {
                            t.fail(|| {
                                format!(
                                    "product backward {op} arg {i} {args:?} result {result} -> {} drops {c:?}",
                                    refined[i]
                                )
                            });
                        }
                    }
                }
            });
        }
    }
}

pub fn transfer_soundness(seed: u64) -> Check {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut t = Tally::default();
    component_forward(&mut t);
    component_backward(&mut t, &mut rng, 1500);
    product_soundness(&mut t, &mut rng, 1500);
    let elapsed = t0.elapsed();
    let passed = t.violations == 0 && t.tuples >= 10_000 && elapsed < Duration::from_secs(300);
    Check::new(
        passed,
        format!(
            "{} abstract tuples, {} violations, {:.1}s{}",
            t.tuples,
            t.violations,
            elapsed.as_secs_f64(),
            t.first.map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

pub fn reduction(seed: u64, samples: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut first = None;
    for _ in 0..samples {
        let d = random_raw_product(&mut rng);
        let r = d.reduce();
        let ok = (r.is_bottom() || r.leq(&d)) && gamma(&r) == gamma(&d) && r.reduce() == r;
        if !ok {
            violations += 1;
            first.get_or_insert_with(|| format!("{d} -> {r}"));
        }
    }
    Check::new(
        violations == 0,
        format!(
            "{samples} product elements, {violations} violations{}",
            first.map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// Random sketch with 1..=3 holes, at most 7 nodes.
fn random_sketch(rng: &mut StdRng) -> Term {
    loop {
        let t = random_term(rng, 7, true);
        if (1..=3).contains(&t.hole_count()) {
            return t;
        }
    }
}

fn fill(sketch: &Term, fillers: &[&Term]) -> Term {
    let mut t = sketch.clone();
    for (i, (p, _)) in sketch.holes().into_iter().enumerate() {
        t = t.replace_at(&p, fillers[i].clone()).unwrap();
    }
    t
}

pub fn chain_properties(seed: u64, sketches: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let fillers = all_terms(3);
    let mut problems = 0u64;
    let mut checked_completions = 0u64;
    let mut first = None;
    for _ in 0..sketches {
        let sketch = random_sketch(&mut rng);
        let k = sketch.hole_count();
        // Choose an example that some completion satisfies.
        let input = rng.gen_range(0..=MASK);
        let witness: Vec<&Term> = (0..k)
            .map(|_| &fillers[rng.gen_range(0..fillers.len())])
            .collect();
        let env = example(input, 0).input;
        let output = eval(&fill(&sketch, &witness), &env).unwrap().bits();
        let ex = example(input, output);

        let chain = match analyze_traced(&sketch, &ex) {
            Ok(c) => c,
            Err(e) => {
                problems += 1;
                first.get_or_insert_with(|| format!("{sketch}: {e}"));
                continue;
            }
        };
        let decreasing = chain.windows(2).all(|w| w[1].leq(&w[0]));
        let converged = chain.len() >= 2 && chain[chain.len() - 1] == chain[chain.len() - 2];
        if !decreasing || !converged {
            problems += 1;
            first.get_or_insert_with(|| {
                format!("{sketch}: decreasing={decreasing} converged={converged}")
            });
            continue;
        }
        let fin = chain.last().unwrap();
        let positions = sketch.positions();
        // Every satisfying completion stays inside the computed map.
        let idx: Vec<usize> = vec![0; k];
        let mut idx = idx;
        'outer: loop {
            let chosen: Vec<&Term> = idx.iter().map(|&i| &fillers[i]).collect();
            let full = fill(&sketch, &chosen);
            if eval(&full, &env).unwrap().bits() == output {
                checked_completions += 1;
                for p in &positions {
                    let v = eval(full.subterm_at(p).unwrap(), &env).unwrap();
                    if !fin.get(p).unwrap().contains(v) {
                        problems += 1;
                        first.get_or_insert_with(|| {
                            format!("{sketch} on {input:04b}->{output:04b}: completion {full} has {v} at {p}")
                        });
                        break 'outer;
                    }
                }
            }
            let mut d = 0;
            loop {
                if d == k {
                    break 'outer;
                }
                idx[d] += 1;
                if idx[d] < fillers.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }
    Check::new(
        problems == 0,
        format!(
            "{sketches} sketches, {checked_completions} satisfying completions checked, {problems} violations{}",
            first.map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

pub fn infer_mul_oracle() -> Check {
    let mut problems = Vec::new();
    for n2 in 0..=MASK {
        for n in 0..=MASK {
            let got = infer_mul_operand(n2, n, W);
            let want = solve_mul(n2, n, W);
            let brute: Vec<u64> = (0..=MASK).filter(|x| (x * n2) & MASK == n).collect();
            if want != brute {
                problems.push(format!("solve_mul({n2},{n}) disagrees with brute force"));
            }
            let ok = if brute.is_empty() {
                got.is_bottom()
            } else {
                got.gamma() == brute
            };
            if !ok {
                problems.push(format!("({n2},{n}) -> {} vs {brute:?}", got.render()));
            }
        }
    }
    let mut inverses = 0;
    for k in 1..=12u32 {
        for a in (1..1u64 << k).step_by(2) {
            inverses += 1;
            let brute = (1..1u64 << k).find(|b| a * b % (1 << k) == 1);
            if mod_inverse(a, k) != brute {
                problems.push(format!("inverse of {a} mod 2^{k}"));
            }
        }
    }
    for a in [1u64, 3, 5, 0xdead_beef, u64::MAX, 0x8000_0000_0000_0001] {
        inverses += 1;
        let inv = mod_inverse(a, 64).unwrap();
        if a.wrapping_mul(inv) != 1 {
            problems.push(format!("inverse of {a} mod 2^64"));
        }
    }
    Check::new(
        problems.is_empty(),
        if problems.is_empty() {
            format!("256 pairs exact, {inverses} inverses verified")
        } else {
            problems.join("; ")
        },
    )
}

pub fn enumerator(seed: u64, preconditions: usize) -> Check {
    let problem = parse_problem(OVERVIEW_SL).unwrap();
    let mut pool = ComponentPool::new(&problem.grammar, &problem.examples);
    for _ in 0..3 {
        pool.grow();
    }
    let s = problem.grammar.start().id;
    let inc = app(Op::BvAdd, vec![x(), one()]);
    let inc_outputs = eval(&inc, &problem.examples[0].input).unwrap();
    let has_inc = pool.lookup(s, &[inc_outputs]).is_some();
    let syntactic: u128 = count_terms(&problem.grammar, s, 3).iter().sum();
    let pool_size = pool.len(s);

    let mut rng = StdRng::seed_from_u64(seed);
    let mut disagreements = 0;
    for _ in 0..preconditions {
        let pre = vec![random_product(&mut rng)];
        let scan = pool.satisfying_by_scan(s, &pre);
        let sets: Vec<Vec<Value>> = pre.iter().map(AbsValue::gamma).collect();
        let index = pool.satisfying_by_index(s, &sets);
        if scan != index {
            disagreements += 1;
        }
    }
    let passed = has_inc
        && inc_outputs == bv(0b1100)
        && (pool_size as u128) < syntactic
        && disagreements == 0;
    Check::new(
        passed,
        format!(
            "x+0001 class present: {has_inc}; pool {pool_size} < syntactic {syntactic}; \
             {disagreements}/{preconditions} scan/index disagreements"
        ),
    )
}
