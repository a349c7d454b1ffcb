//! Orthogonal Fourier analysis on the ternary grid.
//!
//! The univariate basis `φ0 = 1, φ1 = x, φ2 = x² - 2/3` is orthogonal under
//! `<f, g> = (1/3) Σ f(x) g(x)` with squared norms `1, 2/3, 2/9`. The
//! bivariate basis is `Φij(x, y) = φi(x) φj(y)`, kept unnormalized;
//! coefficients are `f̂ij = <t, Φij> / ‖Φij‖²`.

use crate::algebra::{grid_point, table_of, PolyCoeffs9, Trit, TruthTable9};

pub const UNIVARIATE_NORM_SQ: [f64; 3] = [1.0, 2.0 / 3.0, 2.0 / 9.0];

/// `φi(x)`.
#[inline]
pub fn phi(i: usize, x: f64) -> f64 {
    match i {
        0 => 1.0,
        1 => x,
        _ => x * x - 2.0 / 3.0,
    }
}

#[inline]
pub const fn basis_index(i: usize, j: usize) -> usize {
    3 * i + j
}

/// Squared norm of `Φij` under the 1/9-weighted grid inner product.
#[inline]
pub fn basis_norm_sq(i: usize, j: usize) -> f64 {
    UNIVARIATE_NORM_SQ[i] * UNIVARIATE_NORM_SQ[j]
}

/// Values of `Φij` over the grid.
pub fn basis_table(i: usize, j: usize) -> [f64; 9] {
    core::array::from_fn(|g| {
        let (x, y) = grid_point(g);
        phi(i, x) * phi(j, y)
    })
}

/// Uniform inner product of two grid tables.
pub fn inner_product(f: &[f64; 9], g: &[f64; 9]) -> f64 {
    f.iter().zip(g.iter()).map(|(a, b)| a * b).sum::<f64>() / 9.0
}

/// Fourier coefficients `f̂ij`, stored with `i` outer and `j` inner.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourierCoeffs9(pub [f64; 9]);

impl FourierCoeffs9 {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[basis_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[basis_index(i, j)] = v;
    }

    pub fn l1(&self) -> f64 {
        fourier_l1(self)
    }
}

pub fn fourier_transform(t: &[f64; 9]) -> FourierCoeffs9 {
    let mut out = FourierCoeffs9::default();
    for i in 0..3 {
        for j in 0..3 {
            let v = inner_product(t, &basis_table(i, j)) / basis_norm_sq(i, j);
            out.set(i, j, v);
        }
    }
    out
}

pub fn inverse_transform(fhat: &FourierCoeffs9) -> [f64; 9] {
    let mut t = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            let c = fhat.get(i, j);
            for (slot, v) in t.iter_mut().zip(basis_table(i, j)) {
                *slot += c * v;
            }
        }
    }
    t
}

/// Monomial power `x^p` expanded in `{φ0, φ1, φ2}`: `x² = φ2 + (2/3) φ0`.
const POWER_IN_BASIS: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [2.0 / 3.0, 0.0, 1.0]];

/// Change of basis from monomial coefficients to Fourier coefficients.
pub const MONOMIAL_TO_FOURIER: [[f64; 9]; 9] = {
    let powers = crate::algebra::MONOMIAL_POWERS;
    let mut m = [[0.0; 9]; 9];
    let mut i = 0;
    while i < 3 {
        let mut j = 0;
        while j < 3 {
            let mut k = 0;
            while k < 9 {
                let (p, q) = powers[k];
                m[basis_index(i, j)][k] = POWER_IN_BASIS[p][i] * POWER_IN_BASIS[q][j];
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    m
};

pub fn monomial_to_fourier(w: &PolyCoeffs9) -> FourierCoeffs9 {
    let mut out = [0.0; 9];
    for (o, row) in out.iter_mut().zip(MONOMIAL_TO_FOURIER.iter()) {
        *o = row.iter().zip(w.0.iter()).map(|(m, x)| m * x).sum();
    }
    FourierCoeffs9(out)
}

/// Same coefficients through the grid table; used as a cross-check.
pub fn monomial_to_fourier_via_table(w: &PolyCoeffs9) -> FourierCoeffs9 {
    fourier_transform(&table_of(w))
}

pub fn fourier_l1(fhat: &FourierCoeffs9) -> f64 {
    fhat.0.iter().map(|c| c.abs()).sum()
}

/// Default support tolerance for exact (hardened) tables.
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpectralClass {
    Linear,
    Bilinear,
    Quadratic,
    Full,
}

impl SpectralClass {
    pub fn name(self) -> &'static str {
        match self {
            SpectralClass::Linear => "linear",
            SpectralClass::Bilinear => "bilinear",
            SpectralClass::Quadratic => "quadratic",
            SpectralClass::Full => "full",
        }
    }
}

/// Classify by support; coefficients with `|f̂| <= tol` count as zero.
pub fn spectral_class(fhat: &FourierCoeffs9, tol: f64) -> SpectralClass {
    let on = |i, j| fhat.get(i, j).abs() > tol;
    if on(2, 1) || on(1, 2) || on(2, 2) {
        SpectralClass::Full
    } else if on(2, 0) || on(0, 2) {
        SpectralClass::Quadratic
    } else if on(1, 1) {
        SpectralClass::Bilinear
    } else {
        SpectralClass::Linear
    }
}

/// Squared-coefficient energy grouped by total degree `i + j`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BandEnergies {
    pub constant: f64,
    pub linear: f64,
    pub quadratic: f64,
    pub cubic: f64,
    pub quartic: f64,
    /// Set when the input carried no energy; all bands are then zero.
    pub zero_energy: bool,
}

impl BandEnergies {
    pub fn as_array(&self) -> [f64; 5] {
        [self.constant, self.linear, self.quadratic, self.cubic, self.quartic]
    }

    pub(crate) fn from_raw(raw: [f64; 5]) -> BandEnergies {
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return BandEnergies { zero_energy: true, ..Default::default() };
        }
        let [constant, linear, quadratic, cubic, quartic] = raw.map(|e| e / total);
        BandEnergies { constant, linear, quadratic, cubic, quartic, zero_energy: false }
    }
}

pub(crate) fn raw_band_energies(fhat: &FourierCoeffs9) -> [f64; 5] {
    let mut raw = [0.0; 5];
    for i in 0..3 {
        for j in 0..3 {
            let c = fhat.get(i, j);
            raw[i + j] += c * c;
        }
    }
    raw
}

pub fn spectral_energy_bands(fhat: &FourierCoeffs9) -> BandEnergies {
    BandEnergies::from_raw(raw_band_energies(fhat))
}

/// A gate counts as binary-equivalent when it never emits UNKNOWN: on
/// Boolean inputs it is then an ordinary Boolean gate, and nothing about its
/// three-valued behaviour is observable as an abstention.
pub fn is_binary_equivalent(table: &TruthTable9) -> bool {
    table.entries().iter().all(|t| *t != Trit::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{coeffs_of_table, KleeneGate, GATE_COUNT, GRID};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn univariate_basis_values() {
        assert!(close(phi(2, 1.0), 1.0 / 3.0, 1e-15));
        assert!(close(phi(2, -1.0), 1.0 / 3.0, 1e-15));
        assert!(close(phi(2, 0.0), -2.0 / 3.0, 1e-15));
        for i in 0..3 {
            for j in 0..3 {
                let ip: f64 = [-1.0, 0.0, 1.0].iter().map(|&x| phi(i, x) * phi(j, x)).sum::<f64>() / 3.0;
                let expect = if i == j { UNIVARIATE_NORM_SQ[i] } else { 0.0 };
                assert!(close(ip, expect, 1e-15));
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&[1.0; 9], &[1.0; 9]), 1.0);
        let ones = [1.0; 9];
        let x2: [f64; 9] = core::array::from_fn(|g| grid_point(g).0.powi(2));
        assert!(close(inner_product(&ones, &x2), 2.0 / 3.0, 1e-15));
        let xs: [f64; 9] = core::array::from_fn(|g| grid_point(g).0);
        let ys: [f64; 9] = core::array::from_fn(|g| grid_point(g).1);
        assert_eq!(inner_product(&xs, &ys), 0.0);
    }

    #[test]
    fn transform_examples() {
        let f = fourier_transform(&[1.0; 9]);
        assert!(close(f.get(0, 0), 1.0, 1e-15));
        assert!(f.0.iter().skip(1).all(|c| c.abs() < 1e-15));

        let xy: [f64; 9] = core::array::from_fn(|g| {
            let (x, y) = grid_point(g);
            x * y
        });
        let f = fourier_transform(&xy);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if (i, j) == (1, 1) { 1.0 } else { 0.0 };
                assert!(close(f.get(i, j), expect, 1e-14));
            }
        }
    }

    /// Brute-force oracle: solve the 9x9 system `Σ f̂ij Φij(g) = t(g)` by
    /// Gaussian elimination and compare to the projection formula.
    fn solve_basis_system(t: &[f64; 9]) -> [f64; 9] {
        let mut a = [[0.0; 10]; 9];
        for g in 0..9 {
            for i in 0..3 {
                for j in 0..3 {
                    a[g][basis_index(i, j)] = basis_table(i, j)[g];
                }
            }
            a[g][9] = t[g];
        }
        for col in 0..9 {
            let piv = (col..9).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
            a.swap(col, piv);
            for r in 0..9 {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    for c in col..10 {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
        core::array::from_fn(|k| a[k][9] / a[k][k])
    }

    #[test]
    fn kleene_min_spectrum_matches_linear_solve() {
        let t = KleeneGate::Min.table().to_reals();
        let f = fourier_transform(&t);
        let oracle = solve_basis_system(&t);
        for k in 0..9 {
            assert!(close(f.0[k], oracle[k], 1e-12), "coeff {k}");
        }
    }

    #[test]
    fn round_trip_and_parseval_on_all_gates() {
        for raw in (0..GATE_COUNT).step_by(7) {
            let t = crate::algebra::GateId::new(raw).unwrap().decode().to_reals();
            let f = fourier_transform(&t);
            let back = inverse_transform(&f);
            for g in 0..9 {
                assert!(close(back[g], t[g], 1e-10));
            }
            let energy: f64 = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| f.get(i, j).powi(2) * basis_norm_sq(i, j))
                .sum();
            assert!(close(inner_product(&t, &t), energy, 1e-10));
        }
    }

    #[test]
    fn monomial_change_of_basis_examples() {
        let mut w = [0.0; 9];
        w[0] = 1.0;
        let f = monomial_to_fourier(&PolyCoeffs9(w));
        assert_eq!(f.get(0, 0), 1.0);
        assert_eq!(f.0.iter().filter(|c| **c != 0.0).count(), 1);

        let mut w = [0.0; 9];
        w[4] = 1.0; // a²
        let f = monomial_to_fourier(&PolyCoeffs9(w));
        assert!(close(f.get(2, 0), 1.0, 1e-15));
        assert!(close(f.get(0, 0), 2.0 / 3.0, 1e-15));
        // both sides of x² = φ2(x) + 2/3 agree on the grid
        for (a, _) in GRID {
            let x = a.as_f64();
            assert!(close(x * x, phi(2, x) + 2.0 / 3.0, 1e-15));
        }
    }

    #[test]
    fn classes() {
        let cls = |g: KleeneGate| spectral_class(&fourier_transform(&g.table().to_reals()), EXACT_TOL);
        assert_eq!(cls(KleeneGate::PassA), SpectralClass::Linear);
        assert_eq!(cls(KleeneGate::Xnor), SpectralClass::Bilinear);
        assert_eq!(cls(KleeneGate::Const(Trit::True)), SpectralClass::Linear);
        let mut f = FourierCoeffs9::default();
        f.set(2, 0, 1.0);
        let quad_table = inverse_transform(&f);
        assert_eq!(spectral_class(&fourier_transform(&quad_table), EXACT_TOL), SpectralClass::Quadratic);
        f.set(2, 2, 0.5);
        assert_eq!(spectral_class(&f, EXACT_TOL), SpectralClass::Full);
        assert_eq!(spectral_class(&f, 0.6), SpectralClass::Quadratic);
    }

    #[test]
    fn l1_examples() {
        let mut f = FourierCoeffs9::default();
        assert_eq!(fourier_l1(&f), 0.0);
        f.set(0, 0, 1.0);
        assert_eq!(fourier_l1(&f), 1.0);
        let mut f = FourierCoeffs9::default();
        f.set(1, 0, 0.5);
        f.set(0, 1, -0.5);
        assert_eq!(fourier_l1(&f), 1.0);
    }

    #[test]
    fn band_examples() {
        let single = |i, j| {
            let mut f = FourierCoeffs9::default();
            f.set(i, j, 1.0);
            spectral_energy_bands(&f)
        };
        assert_eq!(single(0, 0).constant, 1.0);
        assert_eq!(single(1, 1).quadratic, 1.0);
        assert_eq!(single(2, 2).quartic, 1.0);
        assert_eq!(single(2, 1).cubic, 1.0);
        let zero = spectral_energy_bands(&FourierCoeffs9::default());
        assert!(zero.zero_energy);
        assert_eq!(zero.as_array(), [0.0; 5]);
    }

    #[test]
    fn binary_equivalence() {
        assert!(!is_binary_equivalent(&KleeneGate::Min.table()));
        assert!(is_binary_equivalent(&KleeneGate::Const(Trit::True).table()));
        assert!(!is_binary_equivalent(&KleeneGate::PassA.table()));
        let t = TruthTable9([Trit::True, Trit::False, Trit::True, Trit::True, Trit::True, Trit::False, Trit::False, Trit::False, Trit::True]);
        assert!(is_binary_equivalent(&t));
        let _ = coeffs_of_table(&t.to_reals());
    }
}
