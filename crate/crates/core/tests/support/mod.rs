//! Samplers and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

pub mod criteria;

use bisynth::{
    eval, AbsValue, AbstractBit, Bits, Example, NonTerminal, Op, SInterval, Sort, Term, UInterval,
    Valuation, Value,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const W: u32 = 4;
pub const MASK: u64 = (1 << W) - 1;

pub const BV_OPS: [Op; 15] = [
    Op::BvNot,
    Op::BvNeg,
    Op::BvAnd,
    Op::BvOr,
    Op::BvXor,
    Op::BvAdd,
    Op::BvSub,
    Op::BvMul,
    Op::BvUdiv,
    Op::BvSdiv,
    Op::BvUrem,
    Op::BvSrem,
    Op::BvShl,
    Op::BvLshr,
    Op::BvAshr,
];

pub fn bv(x: u64) -> Value {
    Value::bv(x, W)
}

/// Every non-bottom bitwise value at width `W` (3^W of them).
pub fn all_bits() -> Vec<Bits> {
    let mut out = Vec::new();
    for zero in 0..=MASK {
        for one in 0..=MASK {
            if zero | one == MASK {
                out.push(Bits::from_masks(W, zero, one));
            }
        }
    }
    out
}

/// Every non-empty unsigned interval at width `W`.
pub fn all_unsigned() -> Vec<UInterval> {
    let mut out = Vec::new();
    for l in 0..=MASK {
        for h in l..=MASK {
            out.push(UInterval::new(W, l, h));
        }
    }
    out
}

/// Every non-empty signed interval at width `W`.
pub fn all_signed() -> Vec<SInterval> {
    let half = 1i64 << (W - 1);
    let mut out = Vec::new();
    for l in -half..half {
        for h in l..half {
            out.push(SInterval::new(W, l, h));
        }
    }
    out
}

pub fn random_bits(rng: &mut StdRng) -> Bits {
    let zero = rng.gen_range(0..=MASK);
    let one = rng.gen_range(0..=MASK) | (!zero & MASK);
    Bits::from_masks(W, zero, one)
}

pub fn random_unsigned(rng: &mut StdRng) -> UInterval {
    let a = rng.gen_range(0..=MASK);
    let b = rng.gen_range(0..=MASK);
    UInterval::new(W, a.min(b), a.max(b))
}

pub fn random_signed(rng: &mut StdRng) -> SInterval {
    let half = 1i64 << (W - 1);
    let a = rng.gen_range(-half..half);
    let b = rng.gen_range(-half..half);
    SInterval::new(W, a.min(b), a.max(b))
}

/// A random, possibly unreduced, product element; sometimes an abstraction
/// of a small concrete set so that tight values are well represented.
pub fn random_raw_product(rng: &mut StdRng) -> AbsValue {
    if rng.gen_bool(0.3) {
        let k = rng.gen_range(1..=4);
        let vals: Vec<Value> = (0..k).map(|_| bv(rng.gen_range(0..=MASK))).collect();
        return AbsValue::alpha(Sort::BitVec(W), vals);
    }
    let bits = if rng.gen_bool(0.2) {
        Bits::top(W)
    } else {
        random_bits(rng)
    };
    let signed = if rng.gen_bool(0.4) {
        SInterval::top(W)
    } else {
        random_signed(rng)
    };
    let unsigned = if rng.gen_bool(0.4) {
        UInterval::top(W)
    } else {
        random_unsigned(rng)
    };
    AbsValue::from_parts(bits, signed, unsigned)
}

/// A random reduced, non-bottom product element.
pub fn random_product(rng: &mut StdRng) -> AbsValue {
    loop {
        let v = random_raw_product(rng).reduce();
        if !v.is_bottom() {
            return v;
        }
    }
}

pub fn random_bool(rng: &mut StdRng) -> AbsValue {
    AbsValue::Bool(
        *[AbstractBit::Zero, AbstractBit::One, AbstractBit::Top]
            .choose(rng)
            .unwrap(),
    )
}

/// γ of a product element by brute-force intersection of the components.
pub fn gamma(a: &AbsValue) -> Vec<Value> {
    match a {
        AbsValue::Bool(b) => [false, true]
            .into_iter()
            .filter(|&v| b.contains(v))
            .map(Value::Bool)
            .collect(),
        AbsValue::Bv {
            bits,
            signed,
            unsigned,
        } => (0..=MASK)
            .filter(|&x| bits.contains(x) && signed.contains(x) && unsigned.contains(x))
            .map(bv)
            .collect(),
    }
}

pub fn in_gamma(a: &AbsValue, v: Value) -> bool {
    gamma(a).contains(&v)
}

/// Calls `f` on every tuple of the cartesian product of `sets`.
pub fn for_each_tuple<T: Copy>(sets: &[Vec<T>], mut f: impl FnMut(&[T])) {
    if sets.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; sets.len()];
    let mut tuple: Vec<T> = sets.iter().map(|s| s[0]).collect();
    loop {
        f(&tuple);
        let mut d = 0;
        loop {
            if d == sets.len() {
                return;
            }
            idx[d] += 1;
            if idx[d] < sets[d].len() {
                tuple[d] = sets[d][idx[d]];
                break;
            }
            idx[d] = 0;
            tuple[d] = sets[d][0];
            d += 1;
        }
    }
}

/// Concrete application on raw bit patterns of width `W`.
pub fn apply_bits(op: Op, args: &[u64]) -> u64 {
    let vals: Vec<Value> = args.iter().map(|&a| bv(a)).collect();
    eval::apply(op, &vals).unwrap().bits()
}

// Terms over the worked-example grammar: one nonterminal S of sort BV4 with
// leaves x and 0001 and the operators below.

pub const OVERVIEW_OPS: [Op; 7] = [
    Op::BvAnd,
    Op::BvOr,
    Op::BvXor,
    Op::BvAdd,
    Op::BvMul,
    Op::BvUdiv,
    Op::BvAshr,
];

pub fn s_nt() -> NonTerminal {
    NonTerminal {
        id: 0,
        name: "S".into(),
        sort: Sort::BitVec(W),
    }
}

pub fn hole() -> Term {
    Term::hole(&s_nt())
}

pub fn x() -> Term {
    Term::var("x", 0, Sort::BitVec(W))
}

pub fn one() -> Term {
    Term::bv(1, W)
}

pub fn app(op: Op, args: Vec<Term>) -> Term {
    Term::app(op, args).unwrap()
}

/// A random term of at most `size` nodes; leaves are `x`, `0001` and, when
/// `holes` is set, `S`.
pub fn random_term(rng: &mut StdRng, size: usize, holes: bool) -> Term {
    if size < 3 || rng.gen_bool(0.3) {
        let k = if holes { 3 } else { 2 };
        return match rng.gen_range(0..k) {
            0 => x(),
            1 => one(),
            _ => hole(),
        };
    }
    let op = *OVERVIEW_OPS.choose(rng).unwrap();
    let left = rng.gen_range(1..=size - 2);
    let l = random_term(rng, left, holes);
    let r = random_term(rng, size - 1 - l.size(), holes);
    app(op, vec![l, r])
}

/// All complete terms of the worked-example grammar with at most `size` nodes.
pub fn all_terms(size: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(), vec![x(), one()]];
    for s in 2..=size {
        let mut layer = Vec::new();
        for l in 1..s.saturating_sub(1) {
            let r = s - 1 - l;
            for op in OVERVIEW_OPS {
                for a in &by_size[l] {
                    for b in &by_size[r] {
                        layer.push(app(op, vec![a.clone(), b.clone()]));
                    }
                }
            }
        }
        by_size.push(layer);
    }
    by_size.into_iter().flatten().collect()
}

pub fn example(input: u64, output: u64) -> Example {
    Example {
        input: Valuation::from_pairs([("x", bv(input))]),
        output: bv(output),
    }
}
