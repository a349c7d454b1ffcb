use super::table::{grid_point, GateId, TruthTable9, GRID};
use super::Trit;

/// Exponents `(p, q)` of `a^p b^q` for each monomial, in coefficient order
/// `[1, a, b, ab, a², b², a²b, ab², a²b²]`.
pub const MONOMIAL_POWERS: [(usize, usize); 9] =
    [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (2, 2)];

/// Nine monomial coefficients of one neuron's polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolyCoeffs9(pub [f64; 9]);

impl PolyCoeffs9 {
    pub const ZERO: PolyCoeffs9 = PolyCoeffs9([0.0; 9]);

    #[inline]
    pub fn eval(&self, a: f64, b: f64) -> f64 {
        eval_poly(self, a, b)
    }

    pub fn table(&self) -> [f64; 9] {
        table_of(self)
    }

    pub fn scaled(&self, s: f64) -> PolyCoeffs9 {
        PolyCoeffs9(self.0.map(|w| w * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|w| w.is_finite())
    }
}

impl From<[f64; 9]> for PolyCoeffs9 {
    fn from(w: [f64; 9]) -> Self {
        PolyCoeffs9(w)
    }
}

/// Monomial vector `m(a, b)`.
#[inline]
pub fn monomials(a: f64, b: f64) -> [f64; 9] {
    let a2 = a * a;
    let b2 = b * b;
    let ab = a * b;
    [1.0, a, b, ab, a2, b2, a2 * b, ab * b, a2 * b2]
}

/// `∂m/∂a`.
#[inline]
pub fn monomials_da(a: f64, b: f64) -> [f64; 9] {
    let b2 = b * b;
    [0.0, 1.0, 0.0, b, 2.0 * a, 0.0, 2.0 * a * b, b2, 2.0 * a * b2]
}

/// `∂m/∂b`.
#[inline]
pub fn monomials_db(a: f64, b: f64) -> [f64; 9] {
    let a2 = a * a;
    [0.0, 0.0, 1.0, a, 0.0, 2.0 * b, a2, 2.0 * a * b, 2.0 * a2 * b]
}

/// `wᵀ m(a, b)` in nested Horner form: 8 multiplications, 8 additions.
#[inline]
pub fn eval_poly(w: &PolyCoeffs9, a: f64, b: f64) -> f64 {
    let w = &w.0;
    let c0 = w[0] + a * (w[1] + a * w[4]);
    let c1 = w[2] + a * (w[3] + a * w[6]);
    let c2 = w[5] + a * (w[7] + a * w[8]);
    c0 + b * (c1 + b * c2)
}

/// Values at `x = -1, 0, +1` -> coefficients of `1, x, x²`.
const UNIVARIATE_INVERSE: [[f64; 3]; 3] = [[0.0, 1.0, 0.0], [-0.5, 0.0, 0.5], [0.5, -1.0, 0.5]];

/// The grid Vandermonde matrix and its exact inverse.
///
/// Every entry of the inverse is a product of two entries of
/// `UNIVARIATE_INVERSE`, hence a dyadic rational represented exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Vandermonde {
    pub v: [[f64; 9]; 9],
    pub v_inv: [[f64; 9]; 9],
}

pub const VANDERMONDE: Vandermonde = {
    let mut v = [[0.0; 9]; 9];
    let mut v_inv = [[0.0; 9]; 9];
    let mut i = 0;
    while i < 9 {
        let (a, b) = GRID[i];
        let (ao, bo) = (a.offset(), b.offset());
        let mut k = 0;
        while k < 9 {
            let (p, q) = MONOMIAL_POWERS[k];
            v[i][k] = pow_i8(a.value(), p) * pow_i8(b.value(), q);
            v_inv[k][i] = UNIVARIATE_INVERSE[p][ao] * UNIVARIATE_INVERSE[q][bo];
            k += 1;
        }
        i += 1;
    }
    Vandermonde { v, v_inv }
};

const fn pow_i8(x: i8, p: usize) -> f64 {
    match p {
        0 => 1.0,
        1 => x as f64,
        _ => (x * x) as f64,
    }
}

#[inline]
fn mat_vec(m: &[[f64; 9]; 9], x: &[f64; 9]) -> [f64; 9] {
    let mut out = [0.0; 9];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        *o = row.iter().zip(x.iter()).map(|(r, v)| r * v).sum();
    }
    out
}

/// Soft truth table `t = V w`.
pub fn table_of(w: &PolyCoeffs9) -> [f64; 9] {
    mat_vec(&VANDERMONDE.v, &w.0)
}

/// Interpolating coefficients `w = V⁻¹ t`.
pub fn coeffs_of_table(t: &[f64; 9]) -> PolyCoeffs9 {
    PolyCoeffs9(mat_vec(&VANDERMONDE.v_inv, t))
}

/// Nearest truth value; exact ties at ±0.5 go away from zero.
#[inline]
pub fn round_to_trit(x: f64) -> Trit {
    if x >= 0.5 {
        Trit::True
    } else if x <= -0.5 {
        Trit::False
    } else {
        Trit::Unknown
    }
}

pub fn harden_table(t: &[f64; 9]) -> TruthTable9 {
    TruthTable9(t.map(round_to_trit))
}

/// Round the neuron's soft truth table entrywise and return the gate.
pub fn harden_neuron(w: &PolyCoeffs9) -> GateId {
    harden_table(&table_of(w)).id()
}

#[allow(dead_code)]
pub(crate) fn table_by_eval(w: &PolyCoeffs9) -> [f64; 9] {
    core::array::from_fn(|i| {
        let (a, b) = grid_point(i);
        eval_poly(w, a, b)
    })
}
