//! The reduced product of the bitwise, signed-interval and unsigned-interval
//! domains, and the Boolean domain of single abstract bits.

use std::fmt;

use crate::domain::bit::AbstractBit;
use crate::domain::bitwise::Bits;
use crate::domain::interval::{SInterval, UInterval};
use crate::eval;
use crate::op::Op;
use crate::value::{from_signed, mask, smax, smin, to_signed, Sort, Value};

/// Default bound on the size of γ for concretization shortcuts.
pub const DEFAULT_CONCRETIZE_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbsValue {
    Bv {
        bits: Bits,
        signed: SInterval,
        unsigned: UInterval,
    },
    Bool(AbstractBit),
}

/// `π_{B→U}`: `[b[0/⊤], b[1/⊤]]`.
pub fn bits_to_unsigned(b: &Bits) -> UInterval {
    if b.is_bottom() {
        UInterval::bottom(b.width())
    } else {
        UInterval::new(b.width(), b.lo(), b.hi())
    }
}

/// `π_{B→S}`: a ⊤ sign bit goes to 1 in the lower bound and 0 in the upper
/// bound; the other ⊤ bits the other way round.
pub fn bits_to_signed(b: &Bits) -> SInterval {
    let w = b.width();
    if b.is_bottom() {
        return SInterval::bottom(w);
    }
    let sign = 1u64 << (w - 1);
    let lo = (b.lo() & !sign) | (b.hi() & sign);
    let hi = (b.hi() & !sign) | (b.lo() & sign);
    SInterval::new(w, to_signed(lo, w), to_signed(hi, w))
}

/// Bits shared by every pattern in `[l, h]` under the unsigned order: the
/// common leading prefix.
fn common_prefix(l: u64, h: u64, w: u32) -> Bits {
    let diff = l ^ h;
    let free = if diff == 0 {
        0
    } else {
        mask(64 - diff.leading_zeros())
    };
    Bits::from_masks(w, !l | free, l | free)
}

/// `π_{U→B}`.
pub fn unsigned_to_bits(u: &UInterval) -> Bits {
    match u.bounds() {
        None => Bits::bottom(u.width()),
        Some((l, h)) => common_prefix(l, h, u.width()),
    }
}

/// `π_{S→B}`; bounds of different signs share no prefix, giving ⊤.
pub fn signed_to_bits(s: &SInterval) -> Bits {
    let w = s.width();
    match s.bounds() {
        None => Bits::bottom(w),
        Some((l, h)) => common_prefix(from_signed(l, w), from_signed(h, w), w),
    }
}

/// `π_{U→S}`: kept when both bounds have the same sign bit.
pub fn unsigned_to_signed(u: &UInterval) -> SInterval {
    let w = u.width();
    match u.bounds() {
        None => SInterval::bottom(w),
        Some((l, h)) if (l ^ h) >> (w - 1) & 1 == 0 => {
            SInterval::new(w, to_signed(l, w), to_signed(h, w))
        }
        Some(_) => SInterval::top(w),
    }
}

/// `π_{S→U}`: kept when both bounds have the same sign.
pub fn signed_to_unsigned(s: &SInterval) -> UInterval {
    let w = s.width();
    match s.bounds() {
        None => UInterval::bottom(w),
        Some((l, h)) if (l < 0) == (h < 0) => {
            UInterval::new(w, from_signed(l, w), from_signed(h, w))
        }
        Some(_) => UInterval::top(w),
    }
}

fn bv_bottom(w: u32) -> AbsValue {
    AbsValue::Bv {
        bits: Bits::bottom(w),
        signed: SInterval::bottom(w),
        unsigned: UInterval::bottom(w),
    }
}

impl AbsValue {
    pub fn top(sort: Sort) -> AbsValue {
        match sort {
            Sort::Bool => AbsValue::Bool(AbstractBit::Top),
            Sort::BitVec(w) => AbsValue::Bv {
                bits: Bits::top(w),
                signed: SInterval::top(w),
                unsigned: UInterval::top(w),
            },
        }
    }

    pub fn bottom(sort: Sort) -> AbsValue {
        match sort {
            Sort::Bool => AbsValue::Bool(AbstractBit::Bot),
            Sort::BitVec(w) => bv_bottom(w),
        }
    }

    /// The abstraction of a single value.
    pub fn constant(v: Value) -> AbsValue {
        match v {
            Value::Bool(b) => AbsValue::Bool(AbstractBit::constant(b)),
            Value::Bv { bits, width } => AbsValue::Bv {
                bits: Bits::constant(bits, width),
                signed: SInterval::constant(bits, width),
                unsigned: UInterval::constant(bits, width),
            },
        }
    }

    /// Unreduced triple; use [`AbsValue::reduced`] to build a stored value.
    pub fn from_parts(bits: Bits, signed: SInterval, unsigned: UInterval) -> AbsValue {
        AbsValue::Bv {
            bits,
            signed,
            unsigned,
        }
    }

    pub fn reduced(bits: Bits, signed: SInterval, unsigned: UInterval) -> AbsValue {
        AbsValue::from_parts(bits, signed, unsigned).reduce()
    }

    pub fn alpha<I: IntoIterator<Item = Value>>(sort: Sort, values: I) -> AbsValue {
        values.into_iter().fold(AbsValue::bottom(sort), |acc, v| {
            acc.join(&AbsValue::constant(v))
        })
    }

    pub fn sort(&self) -> Sort {
        match self {
            AbsValue::Bool(_) => Sort::Bool,
            AbsValue::Bv { bits, .. } => Sort::BitVec(bits.width()),
        }
    }

    pub fn is_bottom(&self) -> bool {
        match self {
            AbsValue::Bool(b) => *b == AbstractBit::Bot,
            AbsValue::Bv {
                bits,
                signed,
                unsigned,
            } => bits.is_bottom() || signed.is_bottom() || unsigned.is_bottom(),
        }
    }

    pub fn is_top(&self) -> bool {
        *self == AbsValue::top(self.sort())
    }

    /// Componentwise order.
    pub fn leq(&self, o: &AbsValue) -> bool {
        if self.is_bottom() {
            return true;
        }
        match (self, o) {
            (AbsValue::Bool(a), AbsValue::Bool(b)) => a.leq(*b),
            (
                AbsValue::Bv {
                    bits: b1,
                    signed: s1,
                    unsigned: u1,
                },
                AbsValue::Bv {
                    bits: b2,
                    signed: s2,
                    unsigned: u2,
                },
            ) => b1.leq(b2) && s1.leq(s2) && u1.leq(u2),
            _ => false,
        }
    }

    pub fn join(&self, o: &AbsValue) -> AbsValue {
        if self.is_bottom() {
            return o.canonical();
        }
        if o.is_bottom() {
            return *self;
        }
        match (self, o) {
            (AbsValue::Bool(a), AbsValue::Bool(b)) => AbsValue::Bool(a.join(*b)),
            (
                AbsValue::Bv {
                    bits: b1,
                    signed: s1,
                    unsigned: u1,
                },
                AbsValue::Bv {
                    bits: b2,
                    signed: s2,
                    unsigned: u2,
                },
            ) => AbsValue::reduced(b1.join(b2), s1.join(s2), u1.join(u2)),
            _ => panic!("join of values of different sorts"),
        }
    }

    /// Componentwise meet followed by reduction.
    pub fn meet(&self, o: &AbsValue) -> AbsValue {
        match (self, o) {
            (AbsValue::Bool(a), AbsValue::Bool(b)) => AbsValue::Bool(a.meet(*b)),
            (
                AbsValue::Bv {
                    bits: b1,
                    signed: s1,
                    unsigned: u1,
                },
                AbsValue::Bv {
                    bits: b2,
                    signed: s2,
                    unsigned: u2,
                },
            ) => AbsValue::reduced(b1.meet(b2), s1.meet(s2), u1.meet(u2)),
            _ => panic!("meet of values of different sorts"),
        }
    }

    /// Componentwise meet without reduction or ⊥ canonicalization.
    pub fn raw_meet(&self, o: &AbsValue) -> AbsValue {
        match (self, o) {
            (AbsValue::Bool(a), AbsValue::Bool(b)) => AbsValue::Bool(a.meet(*b)),
            (
                AbsValue::Bv {
                    bits: b1,
                    signed: s1,
                    unsigned: u1,
                },
                AbsValue::Bv {
                    bits: b2,
                    signed: s2,
                    unsigned: u2,
                },
            ) => AbsValue::from_parts(b1.meet(b2), s1.meet(s2), u1.meet(u2)),
            _ => panic!("meet of values of different sorts"),
        }
    }

    fn canonical(&self) -> AbsValue {
        if self.is_bottom() {
            AbsValue::bottom(self.sort())
        } else {
            *self
        }
    }

    /// The reduction ρ: iterate meets with all six projections until stable.
    pub fn reduce(&self) -> AbsValue {
        let AbsValue::Bv {
            mut bits,
            mut signed,
            mut unsigned,
        } = *self
        else {
            return *self;
        };
        let w = bits.width();
        loop {
            if bits.is_bottom() || signed.is_bottom() || unsigned.is_bottom() {
                return bv_bottom(w);
            }
            let b = bits
                .meet(&unsigned_to_bits(&unsigned))
                .meet(&signed_to_bits(&signed));
            let s = signed
                .meet(&bits_to_signed(&bits))
                .meet(&unsigned_to_signed(&unsigned));
            let u = unsigned
                .meet(&bits_to_unsigned(&bits))
                .meet(&signed_to_unsigned(&signed));
            if (b, s, u) == (bits, signed, unsigned) {
                return AbsValue::Bv {
                    bits,
                    signed,
                    unsigned,
                };
            }
            (bits, signed, unsigned) = (b, s, u);
        }
    }

    pub fn bits(&self) -> Option<&Bits> {
        match self {
            AbsValue::Bv { bits, .. } => Some(bits),
            AbsValue::Bool(_) => None,
        }
    }

    pub fn signed(&self) -> Option<&SInterval> {
        match self {
            AbsValue::Bv { signed, .. } => Some(signed),
            AbsValue::Bool(_) => None,
        }
    }

    pub fn unsigned(&self) -> Option<&UInterval> {
        match self {
            AbsValue::Bv { unsigned, .. } => Some(unsigned),
            AbsValue::Bool(_) => None,
        }
    }

    pub fn as_bit(&self) -> Option<AbstractBit> {
        match self {
            AbsValue::Bool(b) => Some(*b),
            AbsValue::Bv { .. } => None,
        }
    }

    pub fn contains(&self, v: Value) -> bool {
        match (self, v) {
            (AbsValue::Bool(a), Value::Bool(b)) => a.contains(b),
            (
                AbsValue::Bv {
                    bits,
                    signed,
                    unsigned,
                },
                Value::Bv { bits: x, width },
            ) if width == bits.width() => {
                bits.contains(x) && signed.contains(x) && unsigned.contains(x)
            }
            _ => false,
        }
    }

    /// The value when γ is a singleton (on reduced values).
    pub fn as_constant(&self) -> Option<Value> {
        match self {
            AbsValue::Bool(b) => b.as_bool().map(Value::Bool),
            AbsValue::Bv { bits, unsigned, .. } => {
                if let Some(c) = bits.as_constant() {
                    return self
                        .contains(Value::bv(c, bits.width()))
                        .then(|| Value::bv(c, bits.width()));
                }
                match unsigned.bounds() {
                    Some((l, h)) if l == h && self.contains(Value::bv(l, bits.width())) => {
                        Some(Value::bv(l, bits.width()))
                    }
                    _ => None,
                }
            }
        }
    }

    /// Upper bound on |γ| read off the components without enumerating.
    pub fn gamma_size_bound(&self) -> u128 {
        match self {
            AbsValue::Bool(b) => b.may_zero() as u128 + b.may_one() as u128,
            AbsValue::Bv {
                bits,
                signed,
                unsigned,
            } => bits.gamma_size().min(signed.size()).min(unsigned.size()),
        }
    }

    /// γ as concrete values, enumerating the smallest component and
    /// filtering through the others. Exponential; intended for small widths.
    pub fn gamma(&self) -> Vec<Value> {
        self.enumerate(usize::MAX).unwrap_or_default()
    }

    /// γ when its size, bounded before enumeration, is at most `limit`.
    pub fn concretize_if_small(&self, limit: usize) -> Option<Vec<Value>> {
        self.enumerate(limit)
    }

    fn enumerate(&self, limit: usize) -> Option<Vec<Value>> {
        if self.gamma_size_bound() > limit as u128 {
            return None;
        }
        match self {
            AbsValue::Bool(b) => Some(
                [false, true]
                    .into_iter()
                    .filter(|&v| b.contains(v))
                    .map(Value::Bool)
                    .collect(),
            ),
            AbsValue::Bv {
                bits,
                signed,
                unsigned,
            } => {
                let w = bits.width();
                let candidates = if bits.gamma_size() <= unsigned.size().min(signed.size()) {
                    bits.gamma()
                } else if unsigned.size() <= signed.size() {
                    unsigned.gamma()
                } else {
                    let mut g = signed.gamma();
                    g.sort_unstable();
                    g
                };
                Some(
                    candidates
                        .into_iter()
                        .map(|x| Value::bv(x, w))
                        .filter(|&v| self.contains(v))
                        .collect(),
                )
            }
        }
    }

    /// Forward transfer `f#(args)`.
    pub fn forward(op: Op, args: &[AbsValue]) -> AbsValue {
        let sorts = parts(args, |a| a.sort(), Sort::Bool);
        let sort = op
            .result_sort(&sorts[..args.len()])
            .unwrap_or_else(|e| panic!("ill-sorted abstract application: {e}"));
        if args.iter().any(|a| a.is_bottom()) {
            return AbsValue::bottom(sort);
        }
        if args.iter().all(|a| a.as_constant().is_some()) {
            let vals = parts(args, |a| a.as_constant().unwrap(), Value::Bool(false));
            let v = eval::apply(op, &vals[..args.len()]).expect("well-sorted constants evaluate");
            return AbsValue::constant(v);
        }
        match op {
            Op::Not | Op::And | Op::Or | Op::Xor => {
                let bit = |i: usize| args[i].as_bit().unwrap();
                AbsValue::Bool(match op {
                    Op::Not => bit(0).not(),
                    Op::And => bit(0).and(bit(1)),
                    Op::Or => bit(0).or(bit(1)),
                    _ => bit(0).xor(bit(1)),
                })
            }
            Op::Eq => {
                if args[0].meet(&args[1]).is_bottom() {
                    AbsValue::Bool(AbstractBit::Zero)
                } else {
                    AbsValue::Bool(AbstractBit::Top)
                }
            }
            Op::Ite => match args[0].as_bit().unwrap() {
                AbstractBit::One => args[1],
                AbstractBit::Zero => args[2],
                AbstractBit::Top => args[1].join(&args[2]),
                AbstractBit::Bot => AbsValue::bottom(sort),
            },
            Op::BvUle | Op::BvUlt | Op::BvSle | Op::BvSlt => {
                AbsValue::Bool(compare(op, &args[0], &args[1]))
            }
            _ => {
                let n = args.len();
                let w = args[0].bits().unwrap().width();
                let bits = parts(args, |a| *a.bits().unwrap(), Bits::bottom(w));
                let signed = parts(args, |a| *a.signed().unwrap(), SInterval::bottom(w));
                let unsigned = parts(args, |a| *a.unsigned().unwrap(), UInterval::bottom(w));
                let (bits, signed, unsigned) = (&bits[..n], &signed[..n], &unsigned[..n]);
                AbsValue::reduced(
                    Bits::forward(op, bits),
                    SInterval::forward(op, signed),
                    UInterval::forward(op, unsigned),
                )
            }
        }
    }

    /// Backward transfer: a refinement of `args[i]` given `op(args) ∈ γ(result)`.
    pub fn backward(op: Op, i: usize, result: &AbsValue, args: &[AbsValue]) -> AbsValue {
        let sort = args[i].sort();
        if result.is_bottom() || args.iter().any(|a| a.is_bottom()) {
            return AbsValue::bottom(sort);
        }
        let refined = match op {
            Op::Not => AbsValue::Bool(result.as_bit().unwrap().not()),
            Op::And | Op::Or | Op::Xor => {
                let r = result.as_bit().unwrap();
                let other = args[1 - i].as_bit().unwrap();
                AbsValue::Bool(match (op, r) {
                    (Op::Xor, _) => r.xor(other),
                    (Op::And, AbstractBit::One) => AbstractBit::One,
                    (Op::And, AbstractBit::Zero) if other == AbstractBit::One => AbstractBit::Zero,
                    (Op::Or, AbstractBit::Zero) => AbstractBit::Zero,
                    (Op::Or, AbstractBit::One) if other == AbstractBit::Zero => AbstractBit::One,
                    _ => AbstractBit::Top,
                })
            }
            Op::Eq => match result.as_bit().unwrap() {
                AbstractBit::One => args[1 - i],
                AbstractBit::Zero => match (args[i].as_constant(), args[1 - i].as_constant()) {
                    (Some(a), Some(b)) if a == b => AbsValue::bottom(sort),
                    _ => args[i],
                },
                _ => args[i],
            },
            Op::Ite => backward_ite(i, result, args),
            Op::BvUle | Op::BvUlt | Op::BvSle | Op::BvSlt => {
                match result.as_bit().unwrap().as_bool() {
                    Some(holds) => backward_compare(op, i, holds, args),
                    None => args[i],
                }
            }
            _ => {
                let n = args.len();
                let w = args[0].bits().unwrap().width();
                let bits = parts(args, |a| *a.bits().unwrap(), Bits::bottom(w));
                let signed = parts(args, |a| *a.signed().unwrap(), SInterval::bottom(w));
                let unsigned = parts(args, |a| *a.unsigned().unwrap(), UInterval::bottom(w));
                let (bits, signed, unsigned) = (&bits[..n], &signed[..n], &unsigned[..n]);
                AbsValue::from_parts(
                    Bits::backward(op, i, result.bits().unwrap(), bits),
                    SInterval::backward(op, i, result.signed().unwrap(), signed),
                    UInterval::backward(op, i, result.unsigned().unwrap(), unsigned),
                )
            }
        };
        refined.meet(&args[i])
    }
}

/// Projects up to three arguments into a stack array padded with `fill`.
fn parts<T: Copy>(args: &[AbsValue], f: impl Fn(&AbsValue) -> T, fill: T) -> [T; 3] {
    let mut out = [fill; 3];
    for (o, a) in out.iter_mut().zip(args) {
        *o = f(a);
    }
    out
}

fn compare(op: Op, a: &AbsValue, b: &AbsValue) -> AbstractBit {
    let (al, ah, bl, bh) = match op {
        Op::BvUle | Op::BvUlt => {
            let (al, ah) = a.unsigned().unwrap().bounds().unwrap();
            let (bl, bh) = b.unsigned().unwrap().bounds().unwrap();
            (al as i128, ah as i128, bl as i128, bh as i128)
        }
        _ => {
            let (al, ah) = a.signed().unwrap().bounds().unwrap();
            let (bl, bh) = b.signed().unwrap().bounds().unwrap();
            (al as i128, ah as i128, bl as i128, bh as i128)
        }
    };
    let strict = matches!(op, Op::BvUlt | Op::BvSlt);
    let (always, never) = if strict {
        (ah < bl, al >= bh)
    } else {
        (ah <= bl, al > bh)
    };
    if always {
        AbstractBit::One
    } else if never {
        AbstractBit::Zero
    } else {
        AbstractBit::Top
    }
}

/// Bound refinement from a decided comparison `a op b`.
fn backward_compare(op: Op, i: usize, holds: bool, args: &[AbsValue]) -> AbsValue {
    let signed = matches!(op, Op::BvSle | Op::BvSlt);
    let strict = matches!(op, Op::BvUlt | Op::BvSlt);
    // Normalize to `x <= y - gap` between the two operands.
    let (x, y, gap) = match (holds, strict) {
        (true, false) => (0, 1, 0),
        (true, true) => (0, 1, 1),
        (false, false) => (1, 0, 1),
        (false, true) => (1, 0, 0),
    };
    let w = args[0].bits().unwrap().width();
    let bounds = |a: &AbsValue| -> (i128, i128) {
        if signed {
            let (l, h) = a.signed().unwrap().bounds().unwrap();
            (l as i128, h as i128)
        } else {
            let (l, h) = a.unsigned().unwrap().bounds().unwrap();
            (l as i128, h as i128)
        }
    };
    let (lo, hi) = if signed {
        (smin(w) as i128, smax(w) as i128)
    } else {
        (0, mask(w) as i128)
    };
    let (l, h) = if i == x {
        (lo, bounds(&args[y]).1 - gap)
    } else {
        (bounds(&args[x]).0 + gap, hi)
    };
    let sort = args[i].sort();
    if l > h {
        return AbsValue::bottom(sort);
    }
    let top = AbsValue::top(sort);
    let (bits, s, u) = (
        *top.bits().unwrap(),
        *top.signed().unwrap(),
        *top.unsigned().unwrap(),
    );
    if signed {
        AbsValue::from_parts(bits, SInterval::new(w, l as i64, h as i64), u)
    } else {
        AbsValue::from_parts(bits, s, UInterval::new(w, l as u64, h as u64))
    }
}

/// A branch is refined only when the condition is known to select it; the
/// condition is refined when the result rules out one branch.
fn backward_ite(i: usize, result: &AbsValue, args: &[AbsValue]) -> AbsValue {
    let cond = args[0].as_bit().unwrap();
    match i {
        0 => {
            let then_ok = !result.meet(&args[1]).is_bottom();
            let else_ok = !result.meet(&args[2]).is_bottom();
            AbsValue::Bool(AbstractBit::from_parts(else_ok, then_ok))
        }
        1 if cond == AbstractBit::One => *result,
        2 if cond == AbstractBit::Zero => *result,
        _ => args[i],
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsValue::Bool(b) => write!(f, "{b}"),
            AbsValue::Bv {
                bits,
                signed,
                unsigned,
            } => write!(f, "⟨{bits}, {signed}, {unsigned}⟩"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: u32 = 4;

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    fn bv(x: u64) -> AbsValue {
        AbsValue::constant(Value::bv(x, W))
    }

    fn top() -> AbsValue {
        AbsValue::top(Sort::BitVec(W))
    }

    fn of_bits(s: &str) -> AbsValue {
        AbsValue::reduced(b(s), SInterval::top(W), UInterval::top(W))
    }

    #[test]
    fn projections() {
        assert_eq!(bits_to_unsigned(&b("110T")), UInterval::new(W, 12, 13));
        assert_eq!(unsigned_to_bits(&UInterval::new(W, 12, 13)), b("110T"));
        assert!(unsigned_to_signed(&UInterval::new(W, 4, 12)).is_top());
        assert_eq!(bits_to_signed(&b("T0T1")), SInterval::new(W, -7, 3));
        assert_eq!(signed_to_bits(&SInterval::new(W, -4, -3)), b("110T"));
        assert!(signed_to_bits(&SInterval::new(W, -1, 0)).is_top());
    }

    #[test]
    fn reduction_examples() {
        let d = AbsValue::from_parts(Bits::top(W), SInterval::top(W), UInterval::new(W, 12, 13));
        let r = d.reduce();
        assert_eq!(
            r,
            AbsValue::from_parts(
                b("110T"),
                SInterval::new(W, -4, -3),
                UInterval::new(W, 12, 13)
            )
        );
        assert_eq!(r.reduce(), r);
        let e = AbsValue::from_parts(b("0000"), SInterval::top(W), UInterval::new(W, 1, 15));
        assert!(e.reduce().is_bottom());
    }

    #[test]
    fn forward_examples() {
        let x = bv(0b1011);
        let ashr = AbsValue::forward(
            Op::BvAshr,
            &[AbsValue::forward(Op::BvXor, &[top(), x]), bv(1)],
        );
        assert!(ashr.bits().unwrap().is_top());
        let div = AbsValue::forward(Op::BvUdiv, &[top(), x]);
        assert_eq!(*div.bits().unwrap(), b("000T"));
        let shifted = AbsValue::forward(Op::BvAshr, &[div, bv(1)]);
        assert_eq!(shifted, bv(0));
        assert!(shifted.meet(&bv(0b0011)).is_bottom());
        let and = AbsValue::forward(
            Op::And,
            &[
                AbsValue::Bool(AbstractBit::Top),
                AbsValue::Bool(AbstractBit::Zero),
            ],
        );
        assert_eq!(and, AbsValue::Bool(AbstractBit::Zero));
        assert_eq!(
            AbsValue::forward(Op::BvAdd, &[bv(0b1011), bv(1)]),
            bv(0b1100)
        );
    }

    #[test]
    fn backward_examples() {
        let pre = AbsValue::backward(Op::BvAshr, 0, &bv(0b0011), &[top(), bv(1)]);
        assert_eq!(*pre.bits().unwrap(), b("011T"));
        let hole = AbsValue::backward(Op::BvXor, 0, &pre, &[top(), bv(0b1011)]);
        assert_eq!(*hole.bits().unwrap(), b("110T"));
        assert_eq!(hole, of_bits("110T"));
        assert!(AbsValue::backward(
            Op::BvAdd,
            0,
            &AbsValue::bottom(Sort::BitVec(W)),
            &[top(), top()]
        )
        .is_bottom());
    }

    #[test]
    fn comparisons_and_ite() {
        let small = AbsValue::alpha(Sort::BitVec(W), [Value::bv(1, W), Value::bv(3, W)]);
        let big = AbsValue::alpha(Sort::BitVec(W), [Value::bv(4, W), Value::bv(9, W)]);
        assert_eq!(
            AbsValue::forward(Op::BvUlt, &[small, big]),
            AbsValue::Bool(AbstractBit::One)
        );
        assert_eq!(
            AbsValue::forward(Op::BvUle, &[big, small]),
            AbsValue::Bool(AbstractBit::Zero)
        );
        let c = AbsValue::Bool(AbstractBit::Top);
        let joined = AbsValue::forward(Op::Ite, &[c, bv(1), bv(3)]);
        assert!(joined.contains(Value::bv(1, W)) && joined.contains(Value::bv(3, W)));
        let cond = AbsValue::backward(Op::Ite, 0, &bv(3), &[c, bv(1), bv(3)]);
        assert_eq!(cond, AbsValue::Bool(AbstractBit::Zero));
        assert_eq!(
            AbsValue::backward(Op::Ite, 1, &bv(3), &[c, top(), bv(3)]),
            top()
        );
    }

    #[test]
    fn concretization() {
        assert_eq!(bv(9).concretize_if_small(16), Some(vec![Value::bv(9, W)]));
        assert_eq!(
            of_bits("110T").concretize_if_small(16),
            Some(vec![Value::bv(12, W), Value::bv(13, W)])
        );
        assert_eq!(
            AbsValue::top(Sort::BitVec(16)).concretize_if_small(16),
            None
        );
    }
}
