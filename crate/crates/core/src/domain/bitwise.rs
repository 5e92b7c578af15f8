//! The bitwise (known-bits) domain: one abstract bit per position.
//!
//! A value is stored as two masks over the low `width` bits: `zero` has bit `i`
//! set when bit `i` may be 0, `one` when it may be 1. A position with neither
//! set is ⊥; a value with any ⊥ position denotes the empty set.

use std::fmt;
use std::str::FromStr;

use crate::domain::bit::AbstractBit;
use crate::op::Op;
use crate::value::{from_signed, mask, to_signed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bits {
    width: u32,
    zero: u64,
    one: u64,
}

/// Mask of the low `n` bits, `n` in `0..=64`.
#[inline]
fn low(n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        mask(n)
    }
}

/// Mask of the high `n` bits of a `w`-bit word.
#[inline]
fn high(n: u32, w: u32) -> u64 {
    mask(w) & !low(w - n.min(w))
}

/// Number of trailing zeros of `v` viewed as a `w`-bit word (`w` for 0).
#[inline]
pub fn tz(v: u64, w: u32) -> u32 {
    v.trailing_zeros().min(w)
}

impl Bits {
    pub fn top(width: u32) -> Bits {
        Bits {
            width,
            zero: mask(width),
            one: mask(width),
        }
    }

    pub fn bottom(width: u32) -> Bits {
        Bits {
            width,
            zero: 0,
            one: 0,
        }
    }

    pub fn constant(bits: u64, width: u32) -> Bits {
        let m = mask(width);
        Bits {
            width,
            zero: !bits & m,
            one: bits & m,
        }
    }

    /// Raw constructor from the may-be-0 and may-be-1 masks.
    pub fn from_masks(width: u32, zero: u64, one: u64) -> Bits {
        let m = mask(width);
        Bits {
            width,
            zero: zero & m,
            one: one & m,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn zero_mask(&self) -> u64 {
        self.zero
    }

    pub fn one_mask(&self) -> u64 {
        self.one
    }

    /// Positions holding ⊤.
    pub fn tops(&self) -> u64 {
        self.zero & self.one
    }

    pub fn is_bottom(&self) -> bool {
        (self.zero | self.one) != mask(self.width)
    }

    pub fn is_top(&self) -> bool {
        self.tops() == mask(self.width)
    }

    /// Collapses any value containing a ⊥ bit to the canonical all-⊥ element.
    pub fn normalized(self) -> Bits {
        if self.is_bottom() {
            Bits::bottom(self.width)
        } else {
            self
        }
    }

    /// Bit `i`, counted from the least significant bit.
    pub fn get(&self, i: u32) -> AbstractBit {
        AbstractBit::from_parts(self.zero >> i & 1 == 1, self.one >> i & 1 == 1)
    }

    pub fn with_bit(mut self, i: u32, b: AbstractBit) -> Bits {
        let m = 1u64 << i;
        self.zero = (self.zero & !m) | if b.may_zero() { m } else { 0 };
        self.one = (self.one & !m) | if b.may_one() { m } else { 0 };
        self
    }

    pub fn msb(&self) -> AbstractBit {
        self.get(self.width - 1)
    }

    /// `b[0/⊤]`: the smallest bit pattern in γ.
    pub fn lo(&self) -> u64 {
        self.one & !self.zero
    }

    /// `b[1/⊤]`: the largest bit pattern in γ.
    pub fn hi(&self) -> u64 {
        self.one
    }

    /// Guaranteed number of trailing zeros (count of trailing literal 0 bits).
    pub fn trailing_zeros(&self) -> u32 {
        tz(self.one, self.width)
    }

    /// Largest possible number of trailing zeros, `tz(b[0/⊤])`.
    pub fn possible_trailing_zeros(&self) -> u32 {
        tz(self.lo(), self.width)
    }

    pub fn as_constant(&self) -> Option<u64> {
        if !self.is_bottom() && self.tops() == 0 {
            Some(self.one)
        } else {
            None
        }
    }

    pub fn contains(&self, bits: u64) -> bool {
        let m = mask(self.width);
        let bits = bits & m;
        !self.is_bottom() && bits & !self.one == 0 && !bits & m & !self.zero == 0
    }

    pub fn leq(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.is_bottom()
            || (self.zero & !other.zero == 0 && self.one & !other.one == 0 && !other.is_bottom())
    }

    pub fn join(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.width, other.width);
        if self.is_bottom() {
            return other.normalized();
        }
        if other.is_bottom() {
            return *self;
        }
        Bits {
            width: self.width,
            zero: self.zero | other.zero,
            one: self.one | other.one,
        }
    }

    /// Pointwise meet; ⊥ bits are kept as they are so `0000 ⊓ 0011` shows `00BB`.
    pub fn meet(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.width, other.width);
        Bits {
            width: self.width,
            zero: self.zero & other.zero,
            one: self.one & other.one,
        }
    }

    pub fn alpha<I: IntoIterator<Item = u64>>(width: u32, values: I) -> Bits {
        values.into_iter().fold(Bits::bottom(width), |acc, v| {
            acc.join(&Bits::constant(v, width))
        })
    }

    /// Bit patterns in γ, ascending. Exponential in the number of ⊤ bits.
    pub fn gamma(&self) -> Vec<u64> {
        if self.is_bottom() {
            return Vec::new();
        }
        let tops = self.tops();
        let base = self.lo();
        let mut out = Vec::with_capacity(1usize << tops.count_ones().min(20));
        let mut sub = 0u64;
        loop {
            out.push(base | sub);
            sub = sub.wrapping_sub(tops) & tops;
            if sub == 0 {
                break;
            }
        }
        out
    }

    pub fn gamma_unsigned(&self) -> Vec<u64> {
        self.gamma()
    }

    pub fn gamma_signed(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .gamma()
            .into_iter()
            .map(|b| to_signed(b, self.width))
            .collect();
        v.sort_unstable();
        v
    }

    /// Number of elements of γ.
    pub fn gamma_size(&self) -> u128 {
        if self.is_bottom() {
            0
        } else {
            1u128 << self.tops().count_ones()
        }
    }

    pub fn not(&self) -> Bits {
        Bits {
            width: self.width,
            zero: self.one,
            one: self.zero,
        }
    }

    pub fn and(&self, o: &Bits) -> Bits {
        Bits {
            width: self.width,
            zero: self.zero | o.zero,
            one: self.one & o.one,
        }
        .with_bottom_of(self, o)
    }

    pub fn or(&self, o: &Bits) -> Bits {
        Bits {
            width: self.width,
            zero: self.zero & o.zero,
            one: self.one | o.one,
        }
        .with_bottom_of(self, o)
    }

    pub fn xor(&self, o: &Bits) -> Bits {
        Bits {
            width: self.width,
            zero: (self.zero & o.zero) | (self.one & o.one),
            one: (self.zero & o.one) | (self.one & o.zero),
        }
        .with_bottom_of(self, o)
    }

    fn with_bottom_of(self, a: &Bits, b: &Bits) -> Bits {
        if a.is_bottom() || b.is_bottom() {
            Bits::bottom(self.width)
        } else {
            self
        }
    }

    /// Sum with a fixed carry-in. A result bit is known exactly when both
    /// operand bits and the incoming carry are known; the carries are read off
    /// the sums with every unknown bit set to 0 and to 1.
    pub fn add_with_carry(&self, o: &Bits, carry_in: bool) -> Bits {
        let w = self.width;
        if self.is_bottom() || o.is_bottom() {
            return Bits::bottom(w);
        }
        let m = mask(w);
        let c = carry_in as u64;
        let (az, ao) = (self.zero & !self.one, self.one & !self.zero);
        let (bz, bo) = (o.zero & !o.one, o.one & !o.zero);
        let sum_max = self.one.wrapping_add(o.one).wrapping_add(c) & m;
        let sum_min = ao.wrapping_add(bo).wrapping_add(c) & m;
        let carry_zero = !(sum_max ^ az ^ bz);
        let carry_one = sum_min ^ ao ^ bo;
        let known = (az | ao) & (bz | bo) & (carry_zero | carry_one) & m;
        let known_zero = !sum_max & known;
        let known_one = sum_min & known;
        Bits {
            width: w,
            zero: m & !known_one,
            one: m & !known_zero,
        }
    }

    pub fn add(&self, o: &Bits) -> Bits {
        self.add_with_carry(o, false)
    }

    /// `a - b = a + not(b) + 1`.
    pub fn sub(&self, o: &Bits) -> Bits {
        self.add_with_carry(&o.not(), true)
    }

    pub fn neg(&self) -> Bits {
        self.not().add(&Bits::constant(1, self.width))
    }

    /// Trailing zeros of the operands add up; exact on constants.
    pub fn mul(&self, o: &Bits) -> Bits {
        let w = self.width;
        if self.is_bottom() || o.is_bottom() {
            return Bits::bottom(w);
        }
        if let (Some(a), Some(b)) = (self.as_constant(), o.as_constant()) {
            return Bits::constant(a.wrapping_mul(b), w);
        }
        let n = (self.trailing_zeros() + o.trailing_zeros()).min(w);
        Bits {
            width: w,
            zero: mask(w),
            one: mask(w) & !low(n),
        }
    }

    fn shift_by(&self, op: Op, k: u32) -> Bits {
        let w = self.width;
        debug_assert!(k < w);
        let m = mask(w);
        match op {
            Op::BvShl => Bits {
                width: w,
                zero: ((self.zero << k) | low(k)) & m,
                one: (self.one << k) & m,
            },
            Op::BvLshr => Bits {
                width: w,
                zero: (self.zero >> k) | high(k, w),
                one: self.one >> k,
            },
            _ => Bits {
                width: w,
                zero: from_signed(to_signed(self.zero, w) >> k, w),
                one: from_signed(to_signed(self.one, w) >> k, w),
            },
        }
    }

    /// Shift amounts below `w` that are in γ of `amount`.
    fn feasible_amounts(amount: &Bits) -> impl Iterator<Item = u32> + '_ {
        (0..amount.width).filter(move |&k| amount.contains(k as u64))
    }

    /// Whether some amount in γ is at least the width.
    fn may_saturate(amount: &Bits) -> bool {
        amount.hi() >= amount.width as u64
    }

    /// Join over every feasible shift amount, with the SMT-LIB saturation case.
    pub fn shift(&self, op: Op, amount: &Bits) -> Bits {
        let w = self.width;
        if self.is_bottom() || amount.is_bottom() {
            return Bits::bottom(w);
        }
        let mut acc = Bits::bottom(w);
        for k in Bits::feasible_amounts(amount) {
            acc = acc.join(&self.shift_by(op, k));
        }
        if Bits::may_saturate(amount) {
            let sat = match op {
                Op::BvAshr => self.shift_by(op, w - 1),
                _ => Bits::constant(0, w),
            };
            acc = acc.join(&sat);
        }
        acc
    }

    /// Forward transfer for bitvector-valued operators.
    pub fn forward(op: Op, args: &[Bits]) -> Bits {
        let w = args[0].width;
        if args.iter().any(|a| a.is_bottom()) {
            return Bits::bottom(w);
        }
        match op {
            Op::BvNot => args[0].not(),
            Op::BvNeg => args[0].neg(),
            Op::BvAnd => args[0].and(&args[1]),
            Op::BvOr => args[0].or(&args[1]),
            Op::BvXor => args[0].xor(&args[1]),
            Op::BvAdd => args[0].add(&args[1]),
            Op::BvSub => args[0].sub(&args[1]),
            Op::BvMul => args[0].mul(&args[1]),
            Op::BvShl | Op::BvLshr | Op::BvAshr => args[0].shift(op, &args[1]),
            _ => Bits::top(w),
        }
    }

    /// Backward transfer: a refinement of `args[i]` given that `op(args)` lies in `result`.
    pub fn backward(op: Op, i: usize, result: &Bits, args: &[Bits]) -> Bits {
        let w = args[i].width;
        if result.is_bottom() || args.iter().any(|a| a.is_bottom()) {
            return Bits::bottom(w);
        }
        let m = mask(w);
        let r1 = result.one & !result.zero;
        let r0 = result.zero & !result.one;
        let refined = match op {
            Op::BvNot => result.not(),
            Op::BvAnd | Op::BvOr => {
                let other = &args[1 - i];
                if op == Op::BvAnd {
                    // A 1 in the result forces 1; a 0 against a known 1 forces 0.
                    let o1 = other.one & !other.zero;
                    Bits::from_masks(w, !r1, !(r0 & o1))
                } else {
                    let o0 = other.zero & !other.one;
                    Bits::from_masks(w, !(r1 & o0), !r0)
                }
            }
            Op::BvXor => result.xor(&args[1 - i]),
            Op::BvShl | Op::BvLshr | Op::BvAshr if i == 0 => {
                Bits::backward_shift(op, result, &args[1])
            }
            Op::BvMul => {
                let b2 = &args[1 - i];
                match (b2.as_constant(), result.as_constant()) {
                    (Some(n2), Some(n)) => infer_mul_operand(n2, n, w),
                    _ => {
                        let l = result
                            .trailing_zeros()
                            .saturating_sub(b2.possible_trailing_zeros());
                        Bits::from_masks(w, m, m & !low(l))
                    }
                }
            }
            _ => args[i],
        };
        refined.meet(&args[i]).normalized()
    }

    fn backward_shift(op: Op, result: &Bits, amount: &Bits) -> Bits {
        let w = result.width;
        let mut acc = Bits::bottom(w);
        for k in Bits::feasible_amounts(amount) {
            let cand = match op {
                Op::BvShl => {
                    // The low k bits of the result must be able to be 0.
                    if k > result.possible_trailing_zeros() {
                        continue;
                    }
                    Bits {
                        width: w,
                        zero: (result.zero >> k) | high(k, w),
                        one: (result.one >> k) | high(k, w),
                    }
                }
                Op::BvLshr => {
                    if result.zero & high(k, w) != high(k, w) {
                        continue;
                    }
                    Bits::from_masks(w, (result.zero << k) | low(k), (result.one << k) | low(k))
                }
                _ => {
                    let sign = (w - 1 - k..w)
                        .map(|j| result.get(j))
                        .fold(AbstractBit::Top, AbstractBit::meet);
                    if sign == AbstractBit::Bot {
                        continue;
                    }
                    Bits::from_masks(w, (result.zero << k) | low(k), (result.one << k) | low(k))
                        .with_bit(w - 1, sign)
                }
            };
            acc = acc.join(&cand);
        }
        if Bits::may_saturate(amount) {
            let cand = match op {
                Op::BvAshr => {
                    let sign = (0..w)
                        .map(|j| result.get(j))
                        .fold(AbstractBit::Top, AbstractBit::meet);
                    Bits::top(w).with_bit(w - 1, sign)
                }
                _ if result.contains(0) => Bits::top(w),
                _ => Bits::bottom(w),
            };
            acc = acc.join(&cand);
        }
        acc
    }

    /// Renders MSB first over `{0, 1, T, B}`.
    pub fn render(&self) -> String {
        (0..self.width)
            .rev()
            .map(|i| self.get(i).to_char())
            .collect()
    }
}

/// Multiplicative inverse of `a` modulo `2^k` (`a` odd, `1 ≤ k ≤ 64`), by extended Euclid.
pub fn mod_inverse(a: u64, k: u32) -> Option<u64> {
    let m: i128 = 1i128 << k;
    let a = (a as i128) & (m - 1);
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m) as u64)
}

/// Solutions `x` of `x * n2 ≡ n (mod 2^w)` as a bitwise value.
///
/// With `t2 = tz(n2)` and `t = tz(n)`, a solution exists iff `t ≥ t2`; then
/// the low `w - t2` bits of `x` are fixed and the high `t2` bits are free.
pub fn infer_mul_operand(n2: u64, n: u64, w: u32) -> Bits {
    let (n2, n) = (n2 & mask(w), n & mask(w));
    let (t2, t) = (tz(n2, w), tz(n, w));
    if t < t2 {
        return Bits::bottom(w);
    }
    if t2 == w {
        return Bits::top(w);
    }
    let k = w - t2;
    let inv = mod_inverse(n2 >> t2, k).expect("odd numbers are invertible modulo 2^k");
    let x = (n >> t2).wrapping_mul(inv) & low(k);
    Bits::from_masks(w, (!x & low(k)) | high(t2, w), x | high(t2, w))
}

/// Brute-force solution set of `x * n2 ≡ n (mod 2^w)`; only sensible for small `w`.
pub fn solve_mul(n2: u64, n: u64, w: u32) -> Vec<u64> {
    (0..=mask(w))
        .filter(|&x| x.wrapping_mul(n2) & mask(w) == n & mask(w))
        .collect()
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid abstract bitstring `{0}`")]
pub struct ParseBitsError(pub String);

impl FromStr for Bits {
    type Err = ParseBitsError;

    /// Parses an MSB-first string over `0 1 T B` (or `⊤ ⊥`).
    fn from_str(s: &str) -> Result<Bits, ParseBitsError> {
        let chars: Vec<char> = s.chars().collect();
        let w = chars.len() as u32;
        if w == 0 || w > 64 {
            return Err(ParseBitsError(s.to_string()));
        }
        let mut out = Bits::bottom(w);
        for (idx, c) in chars.iter().enumerate() {
            let b = AbstractBit::from_char(*c).ok_or_else(|| ParseBitsError(s.to_string()))?;
            out = out.with_bit(w - 1 - idx as u32, b);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Full-adder chain over abstract bits with an abstract carry.
    fn ripple_carry_add(a: &Bits, o: &Bits, carry_in: bool) -> Bits {
        let s = a;
        let w = s.width;
        if s.is_bottom() || o.is_bottom() {
            return Bits::bottom(w);
        }
        // Sets of possible carry values: bit 0 = carry may be 0, bit 1 = may be 1.
        let mut carry: u8 = if carry_in { 0b10 } else { 0b01 };
        let (mut zero, mut one) = (0u64, 0u64);
        for i in 0..w {
            let a = s.get(i);
            let b = o.get(i);
            let mut sum_set = 0u8;
            let mut carry_set = 0u8;
            for x in [false, true] {
                if !a.contains(x) {
                    continue;
                }
                for y in [false, true] {
                    if !b.contains(y) {
                        continue;
                    }
                    for c in [false, true] {
                        if carry >> (c as u8) & 1 == 0 {
                            continue;
                        }
                        let s = x ^ y ^ c;
                        let co = (x & y) | (c & (x ^ y));
                        sum_set |= 1 << (s as u8);
                        carry_set |= 1 << (co as u8);
                    }
                }
            }
            if sum_set & 1 != 0 {
                zero |= 1 << i;
            }
            if sum_set & 2 != 0 {
                one |= 1 << i;
            }
            carry = carry_set;
        }
        Bits {
            width: w,
            zero,
            one,
        }
    }

    /// Every non-⊥ element of width `w`.
    fn all_bits(w: u32) -> Vec<Bits> {
        let m = mask(w);
        let mut out = Vec::new();
        for zero in 0..=m {
            for one in 0..=m {
                if zero | one == m {
                    out.push(Bits::from_masks(w, zero, one));
                }
            }
        }
        out
    }

    #[test]
    fn word_add_matches_ripple_carry() {
        for w in 1..=4u32 {
            let all: Vec<Bits> = all_bits(w);
            for a in &all {
                for b in &all {
                    for c in [false, true] {
                        assert_eq!(
                            a.add_with_carry(b, c).normalized(),
                            ripple_carry_add(a, b, c).normalized(),
                            "{a} + {b} + {c}"
                        );
                    }
                }
            }
        }
    }

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(b("TTTT").meet(&b("0011")), b("0011"));
        assert_eq!(b("0000").meet(&b("0011")).render(), "00BB");
        assert!(b("0000").meet(&b("0011")).is_bottom());
        assert_eq!(b("0101").join(&b("0100")), b("010T"));
        assert_eq!("01⊤⊥".parse::<Bits>().unwrap().render(), "01TB");
    }

    #[test]
    fn alpha_and_gamma() {
        assert_eq!(Bits::alpha(4, [4, 5]), b("010T"));
        assert_eq!(b("010T").gamma_unsigned(), vec![4, 5]);
        assert_eq!(b("1T11").gamma_signed(), vec![-5, -1]);
        assert_eq!(Bits::alpha(4, []), Bits::bottom(4));
        assert_eq!(Bits::constant(from_signed(-8, 4), 4), b("1000"));
        assert_eq!(Bits::constant(from_signed(-1, 4), 4), b("1111"));
    }

    #[test]
    fn trailing_zero_counts() {
        assert_eq!(b("TT10").trailing_zeros(), 1);
        assert_eq!(b("T100").trailing_zeros(), 2);
        assert_eq!(b("1T0T").possible_trailing_zeros(), 3);
        assert_eq!(b("0000").trailing_zeros(), 4);
    }

    #[test]
    fn forward_examples() {
        assert_eq!(b("1T10").and(&b("00TT")), b("00T0"));
        assert_eq!(b("011T").shift(Op::BvAshr, &b("0001")), b("0011"));
        assert_eq!(b("000T").shift(Op::BvAshr, &b("0001")), b("0000"));
        assert_eq!(b("TTTT").shift(Op::BvAshr, &b("0001")), b("TTTT"));
        assert_eq!(b("TT10").mul(&b("T100")), b("T000"));
        assert_eq!(b("1011").add(&b("0001")), b("1100"));
        assert_eq!(b("0001").neg(), b("1111"));
    }

    #[test]
    fn mul_trailing_zero_rule_covers_brute_force() {
        let (x, y) = (b("TT10"), b("T100"));
        let mut join = Bits::bottom(4);
        for a in x.gamma() {
            for c in y.gamma() {
                join = join.join(&Bits::constant(a * c, 4));
            }
        }
        assert_eq!(join, b("1000"));
        assert!(join.leq(&x.mul(&y)));
    }

    #[test]
    fn backward_examples() {
        let top = Bits::top(4);
        assert_eq!(
            Bits::backward(Op::BvXor, 0, &b("011T"), &[top, b("1011")]),
            b("110T")
        );
        assert_eq!(
            Bits::backward(Op::BvAnd, 0, &b("1T00"), &[top, b("TT1T")]),
            b("1T0T")
        );
        assert_eq!(
            Bits::backward(Op::BvMul, 0, &b("0011"), &[top, b("1011")]),
            b("1001")
        );
        assert_eq!(
            Bits::backward(Op::BvAshr, 0, &b("0011"), &[top, b("0001")]),
            b("011T")
        );
    }

    #[test]
    fn infer_mul_examples() {
        assert_eq!(infer_mul_operand(0b1011, 0b0011, 4), b("1001"));
        assert_eq!(infer_mul_operand(0, 0, 4), b("TTTT"));
        assert!(infer_mul_operand(0b0100, 0b0010, 4).is_bottom());
        assert_eq!(infer_mul_operand(0b0010, 0b0100, 4), b("T010"));
        // An even multiplier with a zero product leaves the high bits free.
        assert_eq!(infer_mul_operand(0b0010, 0, 4), b("T000"));
    }

    #[test]
    fn mod_inverse_matches_brute_force() {
        for k in 1..=8u32 {
            let m = 1u64 << k;
            for a in (1..m).step_by(2) {
                let inv = mod_inverse(a, k).unwrap();
                assert_eq!(a * inv % m, 1);
            }
            if k > 1 {
                assert_eq!(mod_inverse(2, k), None);
            }
        }
        let inv = mod_inverse(3, 64).unwrap();
        assert_eq!(3u64.wrapping_mul(inv), 1);
    }

    #[test]
    fn wide_shifts_do_not_overflow() {
        let t = Bits::top(64);
        let k = Bits::constant(63, 64);
        assert_eq!(
            Bits::constant(1, 64).shift(Op::BvShl, &k),
            Bits::constant(1 << 63, 64)
        );
        assert!(!t.shift(Op::BvLshr, &t).is_bottom());
        assert!(!Bits::backward(Op::BvShl, 0, &t, &[t, t]).is_bottom());
    }
}
