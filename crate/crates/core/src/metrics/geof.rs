//! Gaussian entanglement of formation.
//!
//! The GEOF of a covariance `V` is the least entanglement of a pure Gaussian
//! state `γ ≤ V`. In standard form the candidates split into quadrature
//! blocks with `γ_p = γ_x⁻¹`, so the search runs over positive 2×2 matrices
//! `G` in the interval `V_p⁻¹ ≤ G ≤ V_x`. A pure state with x-block `G` has
//! `cosh² 2r = G₁₁G₂₂ / det G`, so the target is the smallest correlation
//! `ρ² = G₁₂² / (G₁₁G₂₂)`. For fixed diagonal the admissible `G₁₂` form an
//! interval known in closed form, leaving a two-parameter Nelder–Mead search
//! over the diagonal.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};

use super::covariance::{symplectic_pair, CovarianceMatrix};
use super::thermal_entropy;
use crate::error::{check_unit_interval, Error, Result};

const SIMPLEX_TOLERANCE: f64 = 1e-12;
const MAX_ITERS: u64 = 2000;
const PURITY_TOLERANCE: f64 = 1e-9;

/// Standard-form parameters `(a, b, c₁, c₂)` with `c₁ ≥ |c₂|`.
fn standard_form(cov: &CovarianceMatrix) -> (f64, f64, f64, f64) {
    let inv_sqrt = |m: Matrix2<f64>| -> (f64, Matrix2<f64>) {
        let d = m.determinant().sqrt();
        let eig = SymmetricEigen::new(m / d);
        let w = eig.eigenvectors
            * Matrix2::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()))
            * eig.eigenvectors.transpose();
        (d, w)
    };
    let (a, wa) = inv_sqrt(cov.block_a());
    let (b, wb) = inv_sqrt(cov.block_b());
    let c = wa * cov.block_c() * wb;
    let svd = c.svd(true, true);
    let mut s = svd.singular_values;
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    // Proper rotations only: a reflection moves into the sign of c₂.
    if u.determinant() * vt.determinant() < 0.0 {
        s[1] = -s[1];
    }
    (a, b, s[0], s[1])
}

/// One face of the matrix interval `P ≤ G ≤ X`: `G = base ± L w wᵀ Lᵀ`
/// with `L = (X − P)^{1/2}` and `|w| ≤ 1`, which keeps `G` inside.
struct Face {
    base: Matrix2<f64>,
    root: Matrix2<f64>,
    sign: f64,
}

impl CostFunction for Face {
    type Param = Vec<f64>;
    type Output = f64;

    /// `ρ² = G₁₂² / (G₁₁G₂₂)` at `w = sin p₀ (cos p₁, sin p₁)`.
    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let w = self.root * nalgebra::Vector2::new(p[1].cos(), p[1].sin()) * p[0].sin();
        let g = self.base + w * w.transpose() * self.sign;
        Ok(g[(0, 1)].powi(2) / (g[(0, 0)] * g[(1, 1)]))
    }
}

/// Gaussian entanglement of formation in ebits.
pub fn gaussian_eof(cov: &CovarianceMatrix) -> Result<f64> {
    super::symplectic_eigenvalues(cov)?;
    let (pt_minus, _) = symplectic_pair(cov, true);
    if pt_minus >= 1.0 {
        return Ok(0.0);
    }
    // Both ν are at least 1, so det V = (ν₋ν₊)² = 1 marks a pure state.
    if cov.cov.determinant() - 1.0 < PURITY_TOLERANCE {
        return Ok(thermal_entropy(cov.block_a().determinant().sqrt()));
    }
    let (a, b, c1, c2) = standard_form(cov);
    let upper = Matrix2::new(a, c1, c1, b);
    let lower = Matrix2::new(a, c2, c2, b)
        .try_inverse()
        .ok_or_else(|| Error::UnphysicalCovariance("singular p-block".into()))?;
    let gap = SymmetricEigen::new(upper - lower);
    let root = gap.eigenvectors
        * Matrix2::from_diagonal(&gap.eigenvalues.map(|l| l.max(0.0).sqrt()))
        * gap.eigenvectors.transpose();
    let faces = [(lower, 1.0), (upper, -1.0)];
    let q = std::f64::consts::FRAC_PI_4;
    let starts = [(q, 0.0), (q, q), (q, 2.0 * q), (q, 3.0 * q), (2.0 * q, q)];
    let mut best: Option<(f64, bool)> = None;
    for (base, sign) in faces {
        for (s1, s2) in starts {
            let simplex = vec![vec![s1, s2], vec![s1 + 0.3, s2], vec![s1, s2 + 0.3]];
            let solver = NelderMead::new(simplex)
                .with_sd_tolerance(SIMPLEX_TOLERANCE)
                .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
            let res = Executor::new(Face { base, root, sign }, solver)
                .configure(|s| s.max_iters(MAX_ITERS))
                .run()
                .map_err(|e| Error::ConvergenceFailure(e.to_string()))?;
            let state = res.state();
            let value = state.get_best_cost();
            let converged = matches!(
                state.get_termination_status(),
                TerminationStatus::Terminated(TerminationReason::SolverConverged)
            );
            if best.is_none_or(|(b, _)| value < b) {
                best = Some((value, converged));
            }
        }
    }
    let (rho_sq, converged) = best.expect("at least one start");
    if !converged {
        return Err(Error::ConvergenceFailure(format!(
            "Nelder–Mead stopped after {MAX_ITERS} iterations"
        )));
    }
    Ok(thermal_entropy((1.0 - rho_sq).sqrt().recip()))
}

/// Covariance of the EPR state `χ` with its second mode sent through loss `T`.
pub fn lossy_epr_covariance(chi: f64, transmissivity: f64) -> Result<CovarianceMatrix> {
    if !(0.0..1.0).contains(&chi) {
        return Err(Error::ParameterOutOfRange { name: "chi", value: chi });
    }
    check_unit_interval("transmissivity", transmissivity)?;
    let nu = (1.0 + chi * chi) / (1.0 - chi * chi);
    let c = transmissivity.sqrt() * 2.0 * chi / (1.0 - chi * chi);
    let nb = transmissivity * nu + 1.0 - transmissivity;
    let cov = Matrix4::new(
        nu, 0.0, c, 0.0, //
        0.0, nu, 0.0, -c, //
        c, 0.0, nb, 0.0, //
        0.0, -c, 0.0, nb,
    );
    CovarianceMatrix::new(Vector4::zeros(), cov)
}

/// Steps `ε` at which the `χ = 1 − ε` limit is sampled.
pub const BOUND_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// GEOF reachable through loss `T` with an infinitely squeezed EPR input.
///
/// Samples `χ = 1 − ε` on [`BOUND_STEPS`] and extrapolates linearly in `ε`
/// (Richardson). Fails when the last two extrapolants differ by `1e-4` or more.
pub fn deterministic_bound(transmissivity: f64) -> Result<f64> {
    if !(transmissivity > 0.0 && transmissivity < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "transmissivity",
            value: transmissivity,
        });
    }
    let values = BOUND_STEPS
        .iter()
        .map(|eps| gaussian_eof(&lossy_epr_covariance(1.0 - eps, transmissivity)?))
        .collect::<Result<Vec<_>>>()?;
    let extrapolated: Vec<f64> = values
        .windows(2)
        .zip(BOUND_STEPS.windows(2))
        .map(|(v, e)| {
            let ratio = e[0] / e[1];
            (ratio * v[1] - v[0]) / (ratio - 1.0)
        })
        .collect();
    let (prev, last) = (extrapolated[0], extrapolated[1]);
    if (last - prev).abs() >= 1e-4 {
        return Err(Error::ConvergenceFailure(format!(
            "extrapolated bound moved from {prev:.6} to {last:.6}"
        )));
    }
    Ok(last)
}
