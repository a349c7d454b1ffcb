use core::fmt;
use core::ops::Neg;

use crate::{Error, Result};

/// A Kleene truth value: FALSE, UNKNOWN or TRUE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i8)]
pub enum Trit {
    False = -1,
    Unknown = 0,
    True = 1,
}

impl Trit {
    pub const ALL: [Trit; 3] = [Trit::False, Trit::Unknown, Trit::True];

    #[inline]
    pub const fn value(self) -> i8 {
        self as i8
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self as i8 as f64
    }

    /// Index of the value within `ALL` (0, 1 or 2).
    #[inline]
    pub const fn offset(self) -> usize {
        (self as i8 + 1) as usize
    }

    #[inline]
    pub const fn from_offset(offset: usize) -> Trit {
        match offset {
            0 => Trit::False,
            1 => Trit::Unknown,
            _ => Trit::True,
        }
    }

    pub fn from_i8(v: i8) -> Result<Trit> {
        match v {
            -1 => Ok(Trit::False),
            0 => Ok(Trit::Unknown),
            1 => Ok(Trit::True),
            other => Err(Error::range(alloc::format!("{other} is not a trit"))),
        }
    }

    /// Accepts only the exact reals -1.0, 0.0 and 1.0.
    pub fn from_f64(v: f64) -> Result<Trit> {
        if v == -1.0 {
            Ok(Trit::False)
        } else if v == 0.0 {
            Ok(Trit::Unknown)
        } else if v == 1.0 {
            Ok(Trit::True)
        } else {
            Err(Error::range(alloc::format!("{v} is not a trit")))
        }
    }

    #[inline]
    pub fn is_decided(self) -> bool {
        self != Trit::Unknown
    }

    /// Kleene conjunction.
    #[inline]
    pub fn and(self, other: Trit) -> Trit {
        self.min(other)
    }

    /// Kleene disjunction.
    #[inline]
    pub fn or(self, other: Trit) -> Trit {
        self.max(other)
    }
}

impl Neg for Trit {
    type Output = Trit;

    fn neg(self) -> Trit {
        match self {
            Trit::False => Trit::True,
            Trit::Unknown => Trit::Unknown,
            Trit::True => Trit::False,
        }
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Trit::False => "F",
            Trit::Unknown => "U",
            Trit::True => "T",
        };
        f.write_str(s)
    }
}
