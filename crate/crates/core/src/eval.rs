//! Concrete SMT-LIB semantics of the supported operators.
//!
//! Arithmetic is modulo `2^w`. Division and remainder by zero follow the
//! SMT-LIB totalization (`bvudiv x 0 = 1...1`, `bvurem x 0 = x`), and the signed
//! variants are expanded through their unsigned counterparts.

use std::sync::Arc;

use crate::op::Op;
use crate::term::{Term, Var};
use crate::value::{mask, to_signed, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("sort mismatch in `{0}`")]
    SortMismatch(String),
    #[error("cannot evaluate a term containing hole `{0}`")]
    HoleInTerm(String),
}

/// Assignment of values to the function parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Valuation {
    entries: Vec<(Arc<str>, Value)>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Valuation
    where
        I: IntoIterator<Item = (S, Value)>,
        S: AsRef<str>,
    {
        Valuation {
            entries: pairs
                .into_iter()
                .map(|(n, v)| (Arc::from(n.as_ref()), v))
                .collect(),
        }
    }

    pub fn insert(&mut self, name: &str, value: Value) {
        match self.entries.iter_mut().find(|(n, _)| &**n == name) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((name.into(), value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.entries
            .iter()
            .find(|(n, _)| &**n == name)
            .map(|(_, v)| *v)
    }

    /// Lookup using the parameter index as a hint.
    #[inline]
    pub fn lookup(&self, var: &Var) -> Option<Value> {
        match self.entries.get(var.index) {
            Some((n, v)) if Arc::ptr_eq(n, &var.name) || **n == *var.name => Some(*v),
            _ => self.get(&var.name),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Value)> {
        self.entries.iter().map(|(n, v)| (&**n, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One input-output example.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Example {
    pub input: Valuation,
    pub output: Value,
}

fn bv2(args: &[Value]) -> Option<(u64, u64, u32)> {
    match (args[0], args[1]) {
        (Value::Bv { bits: a, width: w }, Value::Bv { bits: b, width: v }) if w == v => {
            Some((a, b, w))
        }
        _ => None,
    }
}

#[inline]
pub fn udiv(a: u64, b: u64, w: u32) -> u64 {
    if b == 0 {
        mask(w)
    } else {
        a / b
    }
}

#[inline]
pub fn urem(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        a % b
    }
}

#[inline]
pub fn neg(a: u64, w: u32) -> u64 {
    a.wrapping_neg() & mask(w)
}

#[inline]
fn msb(a: u64, w: u32) -> bool {
    a >> (w - 1) & 1 == 1
}

/// Signed division through the four sign cases of `bvudiv`.
pub fn sdiv(s: u64, t: u64, w: u32) -> u64 {
    match (msb(s, w), msb(t, w)) {
        (false, false) => udiv(s, t, w),
        (true, true) => udiv(neg(s, w), neg(t, w), w),
        (true, false) => neg(udiv(neg(s, w), t, w), w),
        (false, true) => neg(udiv(s, neg(t, w), w), w),
    }
}

/// Signed remainder; the sign follows the dividend.
pub fn srem(s: u64, t: u64, w: u32) -> u64 {
    match (msb(s, w), msb(t, w)) {
        (false, false) => urem(s, t),
        (true, true) => neg(urem(neg(s, w), neg(t, w)), w),
        (true, false) => neg(urem(neg(s, w), t), w),
        (false, true) => urem(s, neg(t, w)),
    }
}

pub fn shl(a: u64, s: u64, w: u32) -> u64 {
    if s >= w as u64 {
        0
    } else {
        (a << s) & mask(w)
    }
}

pub fn lshr(a: u64, s: u64, w: u32) -> u64 {
    if s >= w as u64 {
        0
    } else {
        a >> s
    }
}

pub fn ashr(a: u64, s: u64, w: u32) -> u64 {
    let s = s.min(w as u64 - 1) as u32;
    ((to_signed(a, w) >> s) as u64) & mask(w)
}

/// Applies `op` to concrete arguments.
pub fn apply(op: Op, args: &[Value]) -> Result<Value, EvalError> {
    let mismatch = || EvalError::SortMismatch(op.name().to_string());
    if args.len() != op.arity() {
        return Err(mismatch());
    }
    let out = match op {
        Op::BvNot | Op::BvNeg => match args[0] {
            Value::Bv { bits, width } => Value::bv(
                if op == Op::BvNot {
                    !bits
                } else {
                    neg(bits, width)
                },
                width,
            ),
            Value::Bool(_) => return Err(mismatch()),
        },
        Op::Not => Value::Bool(!args[0].as_bool().ok_or_else(mismatch)?),
        Op::And | Op::Or | Op::Xor => {
            let a = args[0].as_bool().ok_or_else(mismatch)?;
            let b = args[1].as_bool().ok_or_else(mismatch)?;
            Value::Bool(match op {
                Op::And => a && b,
                Op::Or => a || b,
                _ => a ^ b,
            })
        }
        Op::Eq => {
            if args[0].sort() != args[1].sort() {
                return Err(mismatch());
            }
            Value::Bool(args[0] == args[1])
        }
        Op::Ite => {
            let c = args[0].as_bool().ok_or_else(mismatch)?;
            if args[1].sort() != args[2].sort() {
                return Err(mismatch());
            }
            if c {
                args[1]
            } else {
                args[2]
            }
        }
        _ => {
            let (a, b, w) = bv2(args).ok_or_else(mismatch)?;
            match op {
                Op::BvUle => Value::Bool(a <= b),
                Op::BvUlt => Value::Bool(a < b),
                Op::BvSle => Value::Bool(to_signed(a, w) <= to_signed(b, w)),
                Op::BvSlt => Value::Bool(to_signed(a, w) < to_signed(b, w)),
                _ => Value::bv(
                    match op {
                        Op::BvAnd => a & b,
                        Op::BvOr => a | b,
                        Op::BvXor => a ^ b,
                        Op::BvAdd => a.wrapping_add(b),
                        Op::BvSub => a.wrapping_sub(b),
                        Op::BvMul => a.wrapping_mul(b),
                        Op::BvUdiv => udiv(a, b, w),
                        Op::BvSdiv => sdiv(a, b, w),
                        Op::BvUrem => urem(a, b),
                        Op::BvSrem => srem(a, b, w),
                        Op::BvShl => shl(a, b, w),
                        Op::BvLshr => lshr(a, b, w),
                        Op::BvAshr => ashr(a, b, w),
                        _ => unreachable!("handled above"),
                    },
                    w,
                ),
            }
        }
    };
    Ok(out)
}

/// Evaluates a complete term under `env`.
pub fn eval(t: &Term, env: &Valuation) -> Result<Value, EvalError> {
    match t {
        Term::Var(v) => env
            .lookup(v)
            .ok_or_else(|| EvalError::UnboundVariable(v.name.to_string())),
        Term::Const(c) => Ok(*c),
        Term::Hole(nt) => Err(EvalError::HoleInTerm(nt.name.to_string())),
        Term::App(op, children) => {
            let mut args = [Value::Bool(false); 3];
            for (slot, c) in args.iter_mut().zip(children.iter()) {
                *slot = eval(c, env)?;
            }
            apply(*op, &args[..children.len()])
        }
    }
}

/// Outputs of `t` on every example input.
pub fn eval_outputs(t: &Term, examples: &[Example]) -> Result<Vec<Value>, EvalError> {
    examples.iter().map(|e| eval(t, &e.input)).collect()
}

/// True iff `t` maps every example input to its output.
pub fn satisfies(t: &Term, examples: &[Example]) -> Result<bool, EvalError> {
    for e in examples {
        if eval(t, &e.input)? != e.output {
            return Ok(false);
        }
    }
    Ok(true)
}
