use core::fmt;

use super::Trit;
use crate::{Error, Result};

/// Number of distinct two-input ternary gates, `3^9`.
pub const GATE_COUNT: u32 = 19_683;

/// The input grid in canonical order: `(a, b)` with `a` outer.
pub const GRID: [(Trit, Trit); 9] = {
    let mut grid = [(Trit::False, Trit::False); 9];
    let mut i = 0;
    while i < 9 {
        grid[i] = (Trit::from_offset(i / 3), Trit::from_offset(i % 3));
        i += 1;
    }
    grid
};

#[inline]
pub const fn grid_index(a: Trit, b: Trit) -> usize {
    3 * a.offset() + b.offset()
}

/// Grid point `i` as reals.
#[inline]
pub fn grid_point(i: usize) -> (f64, f64) {
    let (a, b) = GRID[i];
    (a.as_f64(), b.as_f64())
}

/// A two-input ternary gate as its nine outputs over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable9(pub [Trit; 9]);

impl TruthTable9 {
    pub const UNKNOWN: TruthTable9 = TruthTable9([Trit::Unknown; 9]);

    pub fn from_fn(mut f: impl FnMut(Trit, Trit) -> Trit) -> Self {
        let mut entries = [Trit::Unknown; 9];
        for (slot, &(a, b)) in entries.iter_mut().zip(GRID.iter()) {
            *slot = f(a, b);
        }
        TruthTable9(entries)
    }

    #[inline]
    pub fn eval(&self, a: Trit, b: Trit) -> Trit {
        self.0[grid_index(a, b)]
    }

    pub fn entries(&self) -> &[Trit; 9] {
        &self.0
    }

    pub fn to_reals(&self) -> [f64; 9] {
        self.0.map(Trit::as_f64)
    }

    pub fn to_i8(&self) -> [i8; 9] {
        self.0.map(Trit::value)
    }

    pub fn id(&self) -> GateId {
        GateId::encode(self)
    }

    /// The four outputs on decided inputs, in grid order.
    pub fn corners(&self) -> [Trit; 4] {
        [self.0[0], self.0[2], self.0[6], self.0[8]]
    }

    pub fn unknown_count(&self) -> usize {
        self.0.iter().filter(|t| **t == Trit::Unknown).count()
    }

    /// Number of grid points on which two gates disagree.
    pub fn hamming(&self, other: &TruthTable9) -> usize {
        self.0.iter().zip(other.0.iter()).filter(|(x, y)| x != y).count()
    }
}

impl fmt::Display for TruthTable9 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 && i % 3 == 0 {
                f.write_str("|")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Stable integer key of a gate: base-3 little-endian over the grid order,
/// digit `entries[i] + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateId(u16);

impl GateId {
    pub fn new(id: u32) -> Result<GateId> {
        if id < GATE_COUNT {
            Ok(GateId(id as u16))
        } else {
            Err(Error::range(alloc::format!("gate id {id} exceeds {}", GATE_COUNT - 1)))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0 as u32
    }

    pub fn encode(table: &TruthTable9) -> GateId {
        let mut id = 0u32;
        for t in table.0.iter().rev() {
            id = id * 3 + t.offset() as u32;
        }
        GateId(id as u16)
    }

    pub fn decode(self) -> TruthTable9 {
        let mut id = self.0 as usize;
        let mut entries = [Trit::Unknown; 9];
        for slot in entries.iter_mut() {
            *slot = Trit::from_offset(id % 3);
            id /= 3;
        }
        TruthTable9(entries)
    }

    pub fn all() -> impl Iterator<Item = GateId> {
        (0..GATE_COUNT).map(|i| GateId(i as u16))
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
