use nalgebra::{DMatrix, Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use super::{check_two_mode, ladder_expectation, thermal_entropy};
use crate::error::{Error, Result};
use crate::fock::{hermitian_eigenvalues, DensityOperator};

const SYMMETRY_TOLERANCE: f64 = 1e-10;
const UNCERTAINTY_TOLERANCE: f64 = 1e-8;

/// First and second moments of a two-mode state in `(x_A, p_A, x_B, p_B)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

impl CovarianceMatrix {
    /// Validates symmetry and the uncertainty relation `V + iΩ ⪰ 0`.
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>) -> Result<Self> {
        let asym = (cov - cov.transpose()).abs().max();
        if asym > SYMMETRY_TOLERANCE {
            return Err(Error::UnphysicalCovariance(format!("asymmetry {asym:.2e}")));
        }
        let out = Self { mean, cov };
        symplectic_eigenvalues(&out)?;
        Ok(out)
    }

    pub fn vacuum() -> Self {
        Self {
            mean: Vector4::zeros(),
            cov: Matrix4::identity(),
        }
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Cross-correlation block `C` between the modes.
    pub fn block_c(&self) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(0, 2).into_owned()
    }
}

/// Moments of a normalized two-mode density operator.
///
/// The ladder operators act on the untruncated Fock space, so the moments
/// are exact for the represented state and no cutoff check applies.
pub fn covariance_matrix(rho: &DensityOperator) -> Result<CovarianceMatrix> {
    check_two_mode(rho)?;
    super::check_normalized(rho)?;
    // Ladder basis (a_A, a_A†, a_B, a_B†) and quadrature coefficients on it.
    let ladder = [(0, false), (0, true), (1, false), (1, true)];
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let quad: [[Complex64; 4]; 4] = [
        [one, one, zero, zero],
        [-i, i, zero, zero],
        [zero, zero, one, one],
        [zero, zero, -i, i],
    ];
    let mut first = [zero; 4];
    for (m, op) in ladder.iter().enumerate() {
        first[m] = ladder_expectation(rho, &[*op]);
    }
    let mut second = [[zero; 4]; 4];
    for (m, op_m) in ladder.iter().enumerate() {
        for (n, op_n) in ladder.iter().enumerate() {
            second[m][n] = ladder_expectation(rho, &[*op_m, *op_n]);
        }
    }
    let mut mean = Vector4::zeros();
    let mut raw = [[zero; 4]; 4];
    for r in 0..4 {
        mean[r] = (0..4).map(|m| quad[r][m] * first[m]).sum::<Complex64>().re;
        for s in 0..4 {
            raw[r][s] = (0..4)
                .flat_map(|m| (0..4).map(move |n| (m, n)))
                .map(|(m, n)| quad[r][m] * quad[s][n] * second[m][n])
                .sum();
        }
    }
    let cov = Matrix4::from_fn(|r, s| 0.5 * (raw[r][s] + raw[s][r]).re - mean[r] * mean[s]);
    CovarianceMatrix::new(mean, cov)
}

/// `ν±² = (Δ ± √(Δ² − 4 det V)) / 2`, `Δ = det A + det B + 2 det C`.
/// Flipping the sign of `det C` gives the partially transposed spectrum.
pub(crate) fn symplectic_pair(cov: &CovarianceMatrix, transpose: bool) -> (f64, f64) {
    let det_c = cov.block_c().determinant();
    let delta = cov.block_a().determinant() + cov.block_b().determinant()
        + if transpose { -2.0 } else { 2.0 } * det_c;
    let det = cov.cov.determinant();
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let minus = ((delta - disc) / 2.0).max(0.0).sqrt();
    let plus = ((delta + disc) / 2.0).max(0.0).sqrt();
    (minus, plus)
}

/// Symplectic eigenvalues `(ν₋, ν₊)` in ascending order.
///
/// Physicality is judged on the spectrum of `V + iΩ`, which stays well
/// conditioned when `ν₋ ≈ ν₊ ≈ 1` where the closed form loses half its digits.
pub fn symplectic_eigenvalues(cov: &CovarianceMatrix) -> Result<[f64; 2]> {
    let omega = Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    );
    let herm = DMatrix::from_fn(4, 4, |r, c| Complex64::new(cov.cov[(r, c)], omega[(r, c)]));
    let lowest = hermitian_eigenvalues(&herm)[0];
    let scale = cov.cov.abs().max().max(1.0);
    if !(lowest >= -UNCERTAINTY_TOLERANCE * scale) {
        return Err(Error::UnphysicalCovariance(format!(
            "V + iΩ has eigenvalue {lowest:.3e}"
        )));
    }
    let (minus, plus) = symplectic_pair(cov, false);
    Ok([minus.max(1.0), plus.max(1.0)])
}

/// `g(ν_A) − g(ν₋) − g(ν₊)`: the RCI of the Gaussian state with this covariance.
pub fn gaussian_rci(cov: &CovarianceMatrix) -> Result<f64> {
    let [minus, plus] = symplectic_eigenvalues(cov)?;
    let nu_a = cov.block_a().determinant().max(1.0).sqrt();
    Ok(thermal_entropy(nu_a) - thermal_entropy(minus) - thermal_entropy(plus))
}
