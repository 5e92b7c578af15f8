//! The four-point lattice of abstract bits, also used as the Boolean domain.

use std::fmt;

/// `Bot ⊑ Zero, One ⊑ Top`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbstractBit {
    Bot,
    Zero,
    One,
    Top,
}

use AbstractBit::*;

impl AbstractBit {
    /// Builds a bit from the pair (may be 0, may be 1).
    #[inline]
    pub fn from_parts(may_zero: bool, may_one: bool) -> AbstractBit {
        match (may_zero, may_one) {
            (false, false) => Bot,
            (true, false) => Zero,
            (false, true) => One,
            (true, true) => Top,
        }
    }

    #[inline]
    pub fn may_zero(self) -> bool {
        matches!(self, Zero | Top)
    }

    #[inline]
    pub fn may_one(self) -> bool {
        matches!(self, One | Top)
    }

    pub fn constant(b: bool) -> AbstractBit {
        if b {
            One
        } else {
            Zero
        }
    }

    pub fn contains(self, b: bool) -> bool {
        if b {
            self.may_one()
        } else {
            self.may_zero()
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Zero => Some(false),
            One => Some(true),
            _ => None,
        }
    }

    pub fn leq(self, other: AbstractBit) -> bool {
        (!self.may_zero() || other.may_zero()) && (!self.may_one() || other.may_one())
    }

    pub fn join(self, other: AbstractBit) -> AbstractBit {
        AbstractBit::from_parts(
            self.may_zero() || other.may_zero(),
            self.may_one() || other.may_one(),
        )
    }

    pub fn meet(self, other: AbstractBit) -> AbstractBit {
        AbstractBit::from_parts(
            self.may_zero() && other.may_zero(),
            self.may_one() && other.may_one(),
        )
    }

    pub fn not(self) -> AbstractBit {
        AbstractBit::from_parts(self.may_one(), self.may_zero())
    }

    pub fn and(self, other: AbstractBit) -> AbstractBit {
        if self == Bot || other == Bot {
            return Bot;
        }
        AbstractBit::from_parts(
            self.may_zero() || other.may_zero(),
            self.may_one() && other.may_one(),
        )
    }

    pub fn or(self, other: AbstractBit) -> AbstractBit {
        self.not().and(other.not()).not()
    }

    pub fn xor(self, other: AbstractBit) -> AbstractBit {
        if self == Bot || other == Bot {
            return Bot;
        }
        AbstractBit::from_parts(
            (self.may_zero() && other.may_zero()) || (self.may_one() && other.may_one()),
            (self.may_zero() && other.may_one()) || (self.may_one() && other.may_zero()),
        )
    }

    pub fn to_char(self) -> char {
        match self {
            Bot => 'B',
            Zero => '0',
            One => '1',
            Top => 'T',
        }
    }

    pub fn from_char(c: char) -> Option<AbstractBit> {
        match c {
            '0' => Some(Zero),
            '1' => Some(One),
            'T' | '⊤' => Some(Top),
            'B' | '⊥' => Some(Bot),
            _ => None,
        }
    }
}

impl fmt::Display for AbstractBit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}
