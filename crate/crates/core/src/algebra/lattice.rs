use crate::{Error, Result};

/// Geometry of the truth-table lattice for `q` equally spaced truth values
/// in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGeometry {
    pub q: u32,
    /// Gap between consecutive truth values.
    pub spacing: f64,
    /// Largest per-entry rounding error.
    pub entry_tolerance: f64,
    /// ℓ2 covering radius over all `q²` entries.
    pub covering_radius: f64,
}

pub fn lattice_geometry(q: u32) -> Result<LatticeGeometry> {
    if q < 2 {
        return Err(Error::config(alloc::format!("valence must be >= 2, got {q}")));
    }
    let spacing = 2.0 / (q - 1) as f64;
    Ok(LatticeGeometry {
        q,
        spacing,
        entry_tolerance: spacing / 2.0,
        covering_radius: q as f64 * spacing / 2.0,
    })
}
