//! Exact arithmetic over the Kleene truth values and two-input ternary gates.
//!
//! The 3x3 input grid is enumerated row-major with the first input outer:
//! index `i = 3 * (a + 1) + (b + 1)`. Truth tables, Vandermonde rows and
//! gate identifiers all share this order.

mod gates;
mod lattice;
mod poly;
mod table;
mod trit;

pub use gates::{kleene_extension, named_gate, KleeneGate, NAMED_GATES};
pub use lattice::{lattice_geometry, LatticeGeometry};
pub use poly::{
    coeffs_of_table, eval_poly, MONOMIAL_POWERS, harden_neuron, harden_table, monomials, monomials_da,
    monomials_db, round_to_trit, table_of, PolyCoeffs9, Vandermonde, VANDERMONDE,
};
pub use table::{grid_point, grid_index, GateId, TruthTable9, GRID, GATE_COUNT};
pub use trit::Trit;
