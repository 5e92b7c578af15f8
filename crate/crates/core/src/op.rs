//! The operator signature: bitvector and Boolean function symbols with their typing rules.

use std::fmt;

use crate::value::Sort;

/// A function symbol of the supported SMT-LIB fragment.
///
/// Operators are width-polymorphic; [`Op::result_sort`] instantiates the signature
/// for concrete argument sorts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    BvNot,
    BvNeg,
    BvAnd,
    BvOr,
    BvXor,
    BvAdd,
    BvSub,
    BvMul,
    BvUdiv,
    BvSdiv,
    BvUrem,
    BvSrem,
    BvShl,
    BvLshr,
    BvAshr,
    BvUle,
    BvUlt,
    BvSle,
    BvSlt,
    Eq,
    Ite,
    And,
    Or,
    Xor,
    Not,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("sort mismatch: `{op}` cannot be applied to ({args})")]
pub struct SortError {
    pub op: Op,
    pub args: String,
}

impl Op {
    pub const ALL: [Op; 25] = [
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
        Op::BvUle,
        Op::BvUlt,
        Op::BvSle,
        Op::BvSlt,
        Op::Eq,
        Op::Ite,
        Op::And,
        Op::Or,
        Op::Xor,
        Op::Not,
    ];

    /// SMT-LIB name of the operator.
    pub fn name(self) -> &'static str {
        match self {
            Op::BvNot => "bvnot",
            Op::BvNeg => "bvneg",
            Op::BvAnd => "bvand",
            Op::BvOr => "bvor",
            Op::BvXor => "bvxor",
            Op::BvAdd => "bvadd",
            Op::BvSub => "bvsub",
            Op::BvMul => "bvmul",
            Op::BvUdiv => "bvudiv",
            Op::BvSdiv => "bvsdiv",
            Op::BvUrem => "bvurem",
            Op::BvSrem => "bvsrem",
            Op::BvShl => "bvshl",
            Op::BvLshr => "bvlshr",
            Op::BvAshr => "bvashr",
            Op::BvUle => "bvule",
            Op::BvUlt => "bvult",
            Op::BvSle => "bvsle",
            Op::BvSlt => "bvslt",
            Op::Eq => "=",
            Op::Ite => "ite",
            Op::And => "and",
            Op::Or => "or",
            Op::Xor => "xor",
            Op::Not => "not",
        }
    }

    pub fn from_name(name: &str) -> Option<Op> {
        Op::ALL.iter().copied().find(|op| op.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Op::BvNot | Op::BvNeg | Op::Not => 1,
            Op::Ite => 3,
            _ => 2,
        }
    }

    /// Comparison predicates over bitvectors.
    pub fn is_comparison(self) -> bool {
        matches!(self, Op::BvUle | Op::BvUlt | Op::BvSle | Op::BvSlt)
    }

    pub fn is_shift(self) -> bool {
        matches!(self, Op::BvShl | Op::BvLshr | Op::BvAshr)
    }

    /// Result sort for the given argument sorts, or an error if they do not fit the signature.
    pub fn result_sort(self, args: &[Sort]) -> Result<Sort, SortError> {
        let err = || SortError {
            op: self,
            args: args
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        };
        if args.len() != self.arity() {
            return Err(err());
        }
        match self {
            Op::BvNot | Op::BvNeg => match args[0] {
                s @ Sort::BitVec(_) => Ok(s),
                Sort::Bool => Err(err()),
            },
            Op::BvUle | Op::BvUlt | Op::BvSle | Op::BvSlt => match (args[0], args[1]) {
                (Sort::BitVec(a), Sort::BitVec(b)) if a == b => Ok(Sort::Bool),
                _ => Err(err()),
            },
            Op::Eq => {
                if args[0] == args[1] {
                    Ok(Sort::Bool)
                } else {
                    Err(err())
                }
            }
            Op::Ite => {
                if args[0] == Sort::Bool && args[1] == args[2] {
                    Ok(args[1])
                } else {
                    Err(err())
                }
            }
            Op::And | Op::Or | Op::Xor => {
                if args[0] == Sort::Bool && args[1] == Sort::Bool {
                    Ok(Sort::Bool)
                } else {
                    Err(err())
                }
            }
            Op::Not => {
                if args[0] == Sort::Bool {
                    Ok(Sort::Bool)
                } else {
                    Err(err())
                }
            }
            _ => match (args[0], args[1]) {
                (Sort::BitVec(a), Sort::BitVec(b)) if a == b => Ok(Sort::BitVec(a)),
                _ => Err(err()),
            },
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
