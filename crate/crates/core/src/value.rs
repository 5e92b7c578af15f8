//! Concrete values, sorts and the width helpers shared by every domain.

use std::fmt;

/// Largest supported bitvector width.
pub const MAX_WIDTH: u32 = 64;

/// The sort of a term: a fixed-width bitvector or a Boolean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bool,
    BitVec(u32),
}

impl Sort {
    /// Bit width of the sort; Booleans count as one bit.
    pub fn width(self) -> u32 {
        match self {
            Sort::Bool => 1,
            Sort::BitVec(w) => w,
        }
    }

    pub fn is_bool(self) -> bool {
        matches!(self, Sort::Bool)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::BitVec(w) => write!(f, "(_ BitVec {w})"),
        }
    }
}

/// All-ones mask of the low `width` bits.
#[inline]
pub fn mask(width: u32) -> u64 {
    debug_assert!((1..=MAX_WIDTH).contains(&width));
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Smallest signed value representable in `width` bits.
#[inline]
pub fn smin(width: u32) -> i64 {
    if width >= 64 {
        i64::MIN
    } else {
        -(1i64 << (width - 1))
    }
}

/// Largest signed value representable in `width` bits.
#[inline]
pub fn smax(width: u32) -> i64 {
    if width >= 64 {
        i64::MAX
    } else {
        (1i64 << (width - 1)) - 1
    }
}

/// Interprets the low `width` bits of `bits` as a two's complement number.
#[inline]
pub fn to_signed(bits: u64, width: u32) -> i64 {
    let shift = 64 - width;
    ((bits << shift) as i64) >> shift
}

/// Two's complement bit pattern of `value`, truncated to `width` bits.
#[inline]
pub fn from_signed(value: i64, width: u32) -> u64 {
    (value as u64) & mask(width)
}

/// A concrete value of some sort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    /// Unsigned machine word holding the low `width` bits.
    Bv {
        bits: u64,
        width: u32,
    },
}

impl Value {
    /// Builds a bitvector, truncating `bits` to `width`.
    pub fn bv(bits: u64, width: u32) -> Value {
        Value::Bv {
            bits: bits & mask(width),
            width,
        }
    }

    pub fn sort(self) -> Sort {
        match self {
            Value::Bool(_) => Sort::Bool,
            Value::Bv { width, .. } => Sort::BitVec(width),
        }
    }

    /// Raw bits; `true` is 1 for Booleans.
    pub fn bits(self) -> u64 {
        match self {
            Value::Bool(b) => b as u64,
            Value::Bv { bits, .. } => bits,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Bv { .. } => None,
        }
    }

    /// Signed view of a bitvector.
    pub fn signed(self) -> i64 {
        match self {
            Value::Bool(b) => b as i64,
            Value::Bv { bits, width } => to_signed(bits, width),
        }
    }

    /// Binary rendering, most significant bit first, without a prefix.
    pub fn bit_string(self) -> String {
        match self {
            Value::Bool(b) => (if b { "1" } else { "0" }).to_string(),
            Value::Bv { bits, width } => (0..width)
                .rev()
                .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                .collect(),
        }
    }

    /// Rebuilds a value of `sort` from raw bits.
    pub fn from_bits(bits: u64, sort: Sort) -> Value {
        match sort {
            Sort::Bool => Value::Bool(bits & 1 == 1),
            Sort::BitVec(w) => Value::bv(bits, w),
        }
    }
}

/// SMT-LIB literal syntax: `#x` for widths of at least 8 that are multiples of four,
/// `#b` otherwise.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Bv { bits, width } if width % 4 == 0 && width >= 8 => {
                write!(f, "#x{:0digits$x}", bits, digits = (width / 4) as usize)
            }
            Value::Bv { .. } => write!(f, "#b{}", self.bit_string()),
        }
    }
}
