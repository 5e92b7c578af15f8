//! Unsigned and signed interval domains with wrap-to-⊤ overflow handling.

use std::fmt;

use crate::eval;
use crate::op::Op;
use crate::value::{from_signed, mask, smax, smin, to_signed, Value};

/// `[l, h]` under the unsigned order, or empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UInterval {
    width: u32,
    bounds: Option<(u64, u64)>,
}

/// `[l, h]` under the signed order, or empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SInterval {
    width: u32,
    bounds: Option<(i64, i64)>,
}

fn umax(w: u32) -> i128 {
    mask(w) as i128
}

impl UInterval {
    pub fn new(width: u32, l: u64, h: u64) -> UInterval {
        UInterval {
            width,
            bounds: (l <= h).then_some((l, h)),
        }
    }

    pub fn top(width: u32) -> UInterval {
        UInterval::new(width, 0, mask(width))
    }

    pub fn bottom(width: u32) -> UInterval {
        UInterval {
            width,
            bounds: None,
        }
    }

    pub fn constant(v: u64, width: u32) -> UInterval {
        let v = v & mask(width);
        UInterval::new(width, v, v)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bounds(&self) -> Option<(u64, u64)> {
        self.bounds
    }

    pub fn is_bottom(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn is_top(&self) -> bool {
        self.bounds == Some((0, mask(self.width)))
    }

    pub fn contains(&self, v: u64) -> bool {
        matches!(self.bounds, Some((l, h)) if l <= v && v <= h)
    }

    pub fn size(&self) -> u128 {
        self.bounds.map_or(0, |(l, h)| (h - l) as u128 + 1)
    }

    pub fn leq(&self, o: &UInterval) -> bool {
        match (self.bounds, o.bounds) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((a, b)), Some((c, d))) => c <= a && b <= d,
        }
    }

    pub fn join(&self, o: &UInterval) -> UInterval {
        match (self.bounds, o.bounds) {
            (None, _) => *o,
            (_, None) => *self,
            (Some((a, b)), Some((c, d))) => UInterval::new(self.width, a.min(c), b.max(d)),
        }
    }

    pub fn meet(&self, o: &UInterval) -> UInterval {
        match (self.bounds, o.bounds) {
            (Some((a, b)), Some((c, d))) => UInterval::new(self.width, a.max(c), b.min(d)),
            _ => UInterval::bottom(self.width),
        }
    }

    pub fn alpha<I: IntoIterator<Item = u64>>(width: u32, values: I) -> UInterval {
        values.into_iter().fold(UInterval::bottom(width), |acc, v| {
            acc.join(&UInterval::constant(v, width))
        })
    }

    pub fn gamma(&self) -> Vec<u64> {
        self.bounds.map_or(Vec::new(), |(l, h)| (l..=h).collect())
    }

    /// Keeps an integer interval that fits `[0, 2^w - 1]`, otherwise ⊤.
    pub fn wrap(width: u32, l: i128, h: i128) -> UInterval {
        if l > h {
            UInterval::bottom(width)
        } else if 0 <= l && h <= umax(width) {
            UInterval::new(width, l as u64, h as u64)
        } else {
            UInterval::top(width)
        }
    }

    fn join_value(self, v: u64) -> UInterval {
        self.join(&UInterval::constant(v, self.width))
    }

    pub fn forward(op: Op, args: &[UInterval]) -> UInterval {
        let w = args[0].width;
        let mut b = [(0i128, 0i128); 2];
        for (slot, a) in b.iter_mut().zip(args) {
            match a.bounds {
                Some((l, h)) => *slot = (l as i128, h as i128),
                None => return UInterval::bottom(w),
            }
        }
        let [(l1, h1), (l2, h2)] = b;
        let m = mask(w);
        match op {
            Op::BvNot => UInterval::new(w, m - h1 as u64, m - l1 as u64),
            Op::BvNeg => {
                if l1 == 0 && h1 != 0 {
                    UInterval::top(w)
                } else {
                    let neg = |v: i128| eval::neg(v as u64, w);
                    UInterval::new(w, neg(h1), neg(l1))
                }
            }
            Op::BvAdd => UInterval::wrap(w, l1 + l2, h1 + h2),
            Op::BvSub => UInterval::wrap(w, l1 - h2, h1 - l2),
            Op::BvMul => match (l1.checked_mul(l2), h1.checked_mul(h2)) {
                (Some(l), Some(h)) => UInterval::wrap(w, l, h),
                _ => UInterval::top(w),
            },
            Op::BvUdiv => {
                let mut out = UInterval::bottom(w);
                if h2 >= 1 {
                    out = UInterval::new(w, (l1 / h2) as u64, (h1 / l2.max(1)) as u64);
                }
                if l2 == 0 {
                    out = out.join_value(m);
                }
                out
            }
            Op::BvUrem => {
                let dividend = args[0];
                let mut out = UInterval::bottom(w);
                if h1 < l2 {
                    out = dividend;
                } else if h2 >= 1 {
                    out = UInterval::new(w, 0, h1.min(h2 - 1) as u64);
                }
                if l2 == 0 {
                    out = out.join(&dividend);
                }
                out
            }
            Op::BvShl | Op::BvLshr | Op::BvAshr if l2 == h2 => {
                let k = l2 as u64;
                if k >= w as u64 {
                    let sat = |v: i128| eval::ashr(v as u64, k, w);
                    return match op {
                        Op::BvAshr if (l1 as u64 >> (w - 1)) == (h1 as u64 >> (w - 1)) => {
                            UInterval::new(w, sat(l1), sat(h1))
                        }
                        Op::BvAshr => UInterval::top(w),
                        _ => UInterval::constant(0, w),
                    };
                }
                match op {
                    Op::BvShl => UInterval::wrap(w, l1 << k, h1 << k),
                    Op::BvLshr => UInterval::new(w, (l1 >> k) as u64, (h1 >> k) as u64),
                    _ => {
                        if (l1 as u64 >> (w - 1)) == (h1 as u64 >> (w - 1)) {
                            UInterval::new(
                                w,
                                eval::ashr(l1 as u64, k, w),
                                eval::ashr(h1 as u64, k, w),
                            )
                        } else {
                            UInterval::top(w)
                        }
                    }
                }
            }
            _ => UInterval::top(w),
        }
    }

    /// Refinement of `args[i]` given `op(args) ∈ result`.
    pub fn backward(op: Op, i: usize, result: &UInterval, args: &[UInterval]) -> UInterval {
        let w = args[i].width;
        let (Some((rl, rh)), true) = (result.bounds, args.iter().all(|a| !a.is_bottom())) else {
            return UInterval::bottom(w);
        };
        let other = |j: usize| {
            let (l, h) = args[j].bounds.unwrap();
            (l as i128, h as i128)
        };
        let (rl, rh) = (rl as i128, rh as i128);
        let refined = match (op, i) {
            // A remainder with its MSB set is necessarily the dividend itself.
            (Op::BvUrem, 0) if rl >= 1i128 << (w - 1) => *result,
            (Op::BvAdd, _) => {
                let (yl, yh) = other(1 - i);
                UInterval::wrap(w, rl - yh, rh - yl)
            }
            (Op::BvSub, 0) => {
                let (yl, yh) = other(1);
                UInterval::wrap(w, rl + yl, rh + yh)
            }
            (Op::BvSub, 1) => {
                let (xl, xh) = other(0);
                UInterval::wrap(w, xl - rh, xh - rl)
            }
            _ => args[i],
        };
        refined.meet(&args[i])
    }
}

impl SInterval {
    pub fn new(width: u32, l: i64, h: i64) -> SInterval {
        SInterval {
            width,
            bounds: (l <= h).then_some((l, h)),
        }
    }

    pub fn top(width: u32) -> SInterval {
        SInterval::new(width, smin(width), smax(width))
    }

    pub fn bottom(width: u32) -> SInterval {
        SInterval {
            width,
            bounds: None,
        }
    }

    /// The singleton holding the bit pattern `v`.
    pub fn constant(v: u64, width: u32) -> SInterval {
        let s = to_signed(v, width);
        SInterval::new(width, s, s)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bounds(&self) -> Option<(i64, i64)> {
        self.bounds
    }

    pub fn is_bottom(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn is_top(&self) -> bool {
        self.bounds == Some((smin(self.width), smax(self.width)))
    }

    /// Whether the bit pattern `v` is in γ.
    pub fn contains(&self, v: u64) -> bool {
        let s = to_signed(v, self.width);
        matches!(self.bounds, Some((l, h)) if l <= s && s <= h)
    }

    pub fn size(&self) -> u128 {
        self.bounds
            .map_or(0, |(l, h)| (h as i128 - l as i128) as u128 + 1)
    }

    pub fn leq(&self, o: &SInterval) -> bool {
        match (self.bounds, o.bounds) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((a, b)), Some((c, d))) => c <= a && b <= d,
        }
    }

    pub fn join(&self, o: &SInterval) -> SInterval {
        match (self.bounds, o.bounds) {
            (None, _) => *o,
            (_, None) => *self,
            (Some((a, b)), Some((c, d))) => SInterval::new(self.width, a.min(c), b.max(d)),
        }
    }

    pub fn meet(&self, o: &SInterval) -> SInterval {
        match (self.bounds, o.bounds) {
            (Some((a, b)), Some((c, d))) => SInterval::new(self.width, a.max(c), b.min(d)),
            _ => SInterval::bottom(self.width),
        }
    }

    /// Abstraction of a set of bit patterns.
    pub fn alpha<I: IntoIterator<Item = u64>>(width: u32, values: I) -> SInterval {
        values.into_iter().fold(SInterval::bottom(width), |acc, v| {
            acc.join(&SInterval::constant(v, width))
        })
    }

    /// Bit patterns in γ, in signed order.
    pub fn gamma(&self) -> Vec<u64> {
        self.bounds.map_or(Vec::new(), |(l, h)| {
            (l..=h).map(|s| from_signed(s, self.width)).collect()
        })
    }

    /// Keeps an integer interval that fits `[SMin, SMax]`, otherwise ⊤.
    pub fn wrap(width: u32, l: i128, h: i128) -> SInterval {
        if l > h {
            SInterval::bottom(width)
        } else if smin(width) as i128 <= l && h <= smax(width) as i128 {
            SInterval::new(width, l as i64, h as i64)
        } else {
            SInterval::top(width)
        }
    }

    pub fn forward(op: Op, args: &[SInterval]) -> SInterval {
        let w = args[0].width;
        let mut b = [(0i128, 0i128); 2];
        for (slot, a) in b.iter_mut().zip(args) {
            match a.bounds {
                Some((l, h)) => *slot = (l as i128, h as i128),
                None => return SInterval::bottom(w),
            }
        }
        let [(l1, h1), (l2, h2)] = b;
        match op {
            Op::BvNot => SInterval::wrap(w, -h1 - 1, -l1 - 1),
            Op::BvNeg => {
                if l1 == smin(w) as i128 {
                    SInterval::top(w)
                } else {
                    SInterval::wrap(w, -h1, -l1)
                }
            }
            Op::BvAdd => SInterval::wrap(w, l1 + l2, h1 + h2),
            Op::BvSub => SInterval::wrap(w, l1 - h2, h1 - l2),
            Op::BvMul => {
                let products = [l1 * l2, l1 * h2, h1 * l2, h1 * h2];
                SInterval::wrap(
                    w,
                    *products.iter().min().unwrap(),
                    *products.iter().max().unwrap(),
                )
            }
            Op::BvSdiv => sdiv_interval(w, (l1, h1), (l2, h2)),
            Op::BvShl | Op::BvLshr | Op::BvAshr if l2 == h2 => {
                // The shift amount is read as an unsigned bit pattern.
                let k = from_signed(l2 as i64, w) as i128;
                match op {
                    Op::BvAshr => {
                        let k = k.min(w as i128 - 1) as u32;
                        SInterval::new(w, (l1 >> k) as i64, (h1 >> k) as i64)
                    }
                    _ if k >= w as i128 => SInterval::new(w, 0, 0),
                    Op::BvShl => SInterval::wrap(w, l1 << k, h1 << k),
                    _ if k == 0 => args[0],
                    _ if l1 >= 0 => SInterval::new(w, (l1 >> k) as i64, (h1 >> k) as i64),
                    _ => SInterval::top(w),
                }
            }
            _ => SInterval::top(w),
        }
    }

    /// Refinement of `args[i]` given `op(args) ∈ result`.
    pub fn backward(op: Op, i: usize, result: &SInterval, args: &[SInterval]) -> SInterval {
        let w = args[i].width;
        let (Some((rl, rh)), true) = (result.bounds, args.iter().all(|a| !a.is_bottom())) else {
            return SInterval::bottom(w);
        };
        let other = |j: usize| {
            let (l, h) = args[j].bounds.unwrap();
            (l as i128, h as i128)
        };
        let (rl, rh) = (rl as i128, rh as i128);
        let refined = match (op, i) {
            (Op::BvAdd, _) => {
                let (yl, yh) = other(1 - i);
                SInterval::wrap(w, rl - yh, rh - yl)
            }
            (Op::BvSub, 0) => {
                let (yl, yh) = other(1);
                SInterval::wrap(w, rl + yl, rh + yh)
            }
            (Op::BvSub, 1) => {
                let (xl, xh) = other(0);
                SInterval::wrap(w, xl - rh, xh - rl)
            }
            _ => args[i],
        };
        refined.meet(&args[i])
    }
}

/// Signed division split into negative and non-negative parts of each operand.
fn sdiv_interval(w: u32, (l1, h1): (i128, i128), (l2, h2): (i128, i128)) -> SInterval {
    let parts = |l: i128, h: i128| {
        let neg = (l <= -1).then(|| (l, h.min(-1)));
        let pos = (h >= 0).then(|| (l.max(0), h));
        [neg, pos]
    };
    let mut lo = i128::MAX;
    let mut hi = i128::MIN;
    let mut include = |a: i128, b: i128| {
        lo = lo.min(a);
        hi = hi.max(b);
    };
    for s in parts(l1, h1).into_iter().flatten() {
        for t in parts(l2, h2).into_iter().flatten() {
            let (sl, sh) = s;
            let (mut tl, th) = t;
            if tl == 0 {
                // Division by zero: all-ones for a non-negative dividend, 1 otherwise.
                if sh >= 0 {
                    include(-1, -1);
                } else {
                    include(1, 1);
                }
                if th == 0 {
                    continue;
                }
                tl = 1;
            }
            match (sl >= 0, tl >= 0) {
                (true, true) => include(sl / th, sh / tl),
                // |s| / |t| for negative t: the quotient magnitude is |s| / |t|.
                (true, false) => include(-(sh / -th), -(sl / -tl)),
                (false, true) => include(-(-sl / tl), -(-sh / th)),
                (false, false) => include(-sh / -tl, -sl / -th),
            }
        }
    }
    SInterval::wrap(w, lo, hi)
}

fn fmt_bound(v: u64, w: u32) -> String {
    Value::bv(v, w).to_string()
}

impl fmt::Display for UInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bounds {
            None => write!(f, "[]"),
            Some((l, h)) => write!(
                f,
                "[{},{}]",
                fmt_bound(l, self.width),
                fmt_bound(h, self.width)
            ),
        }
    }
}

impl fmt::Display for SInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bounds {
            None => write!(f, "[]"),
            Some((l, h)) => write!(
                f,
                "[{},{}]",
                fmt_bound(from_signed(l, self.width), self.width),
                fmt_bound(from_signed(h, self.width), self.width)
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: u32 = 4;

    fn u(l: u64, h: u64) -> UInterval {
        UInterval::new(W, l, h)
    }

    fn s(l: i64, h: i64) -> SInterval {
        SInterval::new(W, l, h)
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(u(0, 5).meet(&u(3, 15)), u(3, 5));
        assert!(u(0, 1).meet(&u(3, 4)).is_bottom());
        assert_eq!(SInterval::alpha(W, [from_signed(-2, W), 3]), s(-2, 3));
        assert_eq!(s(-2, 3).to_string(), "[#b1110,#b0011]");
    }

    #[test]
    fn wrapping() {
        assert_eq!(SInterval::wrap(W, -3, 2), s(-3, 2));
        assert!(SInterval::wrap(W, 6, 9).is_top());
        assert_eq!(UInterval::wrap(W, 0, 15), UInterval::top(W));
        // Overflow of 6 + 3 does reach the negatives.
        assert_eq!(to_signed(9, W), -7);
    }

    #[test]
    fn forward_examples() {
        assert_eq!(UInterval::forward(Op::BvAdd, &[u(2, 4), u(1, 3)]), u(3, 7));
        assert!(UInterval::forward(Op::BvNeg, &[u(0, 5)]).is_top());
        assert_eq!(UInterval::forward(Op::BvNeg, &[u(2, 3)]), u(13, 14));
        assert_eq!(
            SInterval::forward(Op::BvSdiv, &[s(-4, -2), s(2, 2)]),
            s(-2, -1)
        );
        assert_eq!(
            UInterval::forward(Op::BvUdiv, &[UInterval::top(W), u(11, 11)]),
            u(0, 1)
        );
    }

    #[test]
    fn backward_examples() {
        let top = UInterval::top(W);
        assert_eq!(
            UInterval::backward(Op::BvUrem, 0, &u(10, 12), &[top, top]),
            u(10, 12)
        );
        assert!(UInterval::backward(Op::BvUrem, 0, &u(1, 3), &[top, top]).is_top());
        assert_eq!(
            UInterval::backward(Op::BvAdd, 0, &u(5, 5), &[top, u(2, 2)]),
            u(3, 3)
        );
    }

    #[test]
    fn urem_msb_fact() {
        for a in 0..16u64 {
            for b in 0..16u64 {
                let r = eval::urem(a, b);
                if r >= 8 {
                    assert_eq!(r, a);
                }
            }
        }
    }

    #[test]
    fn neg_is_exact_outside_the_special_case() {
        for l in 0..16u64 {
            for h in l..16 {
                if l == 0 && h != 0 {
                    continue;
                }
                let out = UInterval::forward(Op::BvNeg, &[u(l, h)]);
                let expected = UInterval::alpha(W, (l..=h).map(|x| eval::neg(x, W)));
                assert_eq!(out, expected);
                assert_eq!(out.size(), h as u128 - l as u128 + 1);
            }
        }
    }
}
