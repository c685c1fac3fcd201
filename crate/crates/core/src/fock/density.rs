use std::borrow::Cow;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FockSpace, PureState};
use crate::error::{Error, Result};

/// A (possibly sub-normalized) density operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    space: FockSpace,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validates shape and hermiticity (within 1e-12 relative to the largest entry).
    pub fn new(space: FockSpace, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a space of dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..d {
            for j in 0..=i {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > 1e-12 * scale {
                    return Err(Error::DimensionMismatch(
                        "density matrix is not Hermitian".into(),
                    ));
                }
            }
        }
        Ok(Self { space, matrix })
    }

    pub(crate) fn from_parts(space: FockSpace, matrix: DMatrix<Complex64>) -> Self {
        Self { space, matrix }
    }

    pub fn zeros(space: FockSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            matrix: DMatrix::zeros(d, d),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let mut rho = Self::zeros(psi.space().clone());
        rho.add_pure(1.0, psi);
        rho
    }

    /// `Σ_i |ψ_i><ψ_i|` for unnormalized branch vectors.
    pub fn from_ensemble(branches: &[PureState]) -> Result<Self> {
        let first = branches
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty ensemble".into()))?;
        let mut rho = Self::zeros(first.space().clone());
        for b in branches {
            first.check_same_space(b)?;
            rho.add_pure(1.0, b);
        }
        Ok(rho)
    }

    /// `ρ += weight |ψ><ψ|`.
    pub(crate) fn add_pure(&mut self, weight: f64, psi: &PureState) {
        let a = psi.amplitudes();
        let nz: Vec<usize> = (0..a.len()).filter(|&i| a[i].norm_sqr() > 0.0).collect();
        for &i in &nz {
            let ai = a[i] * weight;
            for &j in &nz {
                self.matrix[(i, j)] += ai * a[j].conj();
            }
        }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let t = self.trace();
        if t < 1e-300 {
            return Err(Error::ZeroProbability(t));
        }
        Ok(self.scaled(1.0 / t))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * Complex64::new(factor, 0.0),
        }
    }

    pub fn add_assign(&mut self, other: &DensityOperator) -> Result<()> {
        self.check_same_space(other)?;
        self.matrix += &other.matrix;
        Ok(())
    }

    pub(crate) fn check_same_space(&self, other: &DensityOperator) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(format!(
                "spaces {:?} and {:?} differ",
                self.space.cutoffs(),
                other.space.cutoffs()
            )));
        }
        Ok(())
    }

    /// `<ψ|ρ|ψ>`.
    pub fn expectation_pure(&self, psi: &PureState) -> Result<f64> {
        if psi.space() != &self.space {
            return Err(Error::DimensionMismatch(
                "state and operator live on different spaces".into(),
            ));
        }
        let a = psi.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..a.len() {
            if a[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..a.len() {
                acc += a[i].conj() * self.matrix[(i, j)] * a[j];
            }
        }
        Ok(acc.re)
    }

    /// Reduced operator on `keep_modes` (in the order given).
    pub fn partial_trace(&self, keep_modes: &[usize]) -> Result<DensityOperator> {
        for &m in keep_modes {
            self.space.check_mode(m)?;
        }
        for (i, m) in keep_modes.iter().enumerate() {
            if keep_modes[..i].contains(m) {
                return Err(Error::ModeCollision(*m));
            }
        }
        if keep_modes.is_empty() {
            return Err(Error::DimensionMismatch("must keep at least one mode".into()));
        }
        let kept = self.space.subspace(keep_modes);
        let rest = self.space.without_modes(keep_modes);
        let d = self.space.dim();
        let split: Vec<(usize, usize)> = (0..d)
            .map(|i| self.space.split_index(i, &kept, keep_modes, &rest))
            .collect();
        // Group full indices by their traced-out part.
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); rest.dim()];
        for (i, &(a, b)) in split.iter().enumerate() {
            groups[b].push((i, a));
        }
        let mut out = DMatrix::zeros(kept.dim(), kept.dim());
        for g in &groups {
            for &(i, a) in g {
                for &(j, b) in g {
                    out[(a, b)] += self.matrix[(i, j)];
                }
            }
        }
        Ok(DensityOperator {
            space: kept,
            matrix: out,
        })
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let space = self.space.concat(&other.space);
        let matrix = self.matrix.kronecker(&other.matrix);
        DensityOperator { space, matrix }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.hermitian_part())
    }

    pub(crate) fn hermitian_part(&self) -> DMatrix<Complex64> {
        (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0)
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        self.check_same_space(other)?;
        let diff = DensityOperator::from_parts(self.space.clone(), &self.matrix - &other.matrix);
        Ok(0.5 * diff.eigenvalues().iter().map(|l| l.abs()).sum::<f64>())
    }

    /// Population in the top Fock level of each mode, summed over modes.
    pub fn truncation_leakage(&self) -> f64 {
        let space = &self.space;
        (0..space.num_modes())
            .map(|m| {
                let top = space.cutoff(m);
                (0..space.dim())
                    .filter(|&i| space.mode_occupation(i, m) == top)
                    .map(|i| self.matrix[(i, i)].re)
                    .sum::<f64>()
            })
            .sum()
    }

    /// Largest top-level population over the modes.
    pub fn max_top_population(&self) -> f64 {
        let space = &self.space;
        (0..space.num_modes())
            .map(|m| {
                let top = space.cutoff(m);
                (0..space.dim())
                    .filter(|&i| space.mode_occupation(i, m) == top)
                    .map(|i| self.matrix[(i, i)].re)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Photon-number distribution of one mode.
    pub fn photon_distribution(&self, mode: usize) -> Result<Vec<f64>> {
        self.space.check_mode(mode)?;
        let mut p = vec![0.0; self.space.cutoff(mode) + 1];
        for i in 0..self.space.dim() {
            p[self.space.mode_occupation(i, mode)] += self.matrix[(i, i)].re;
        }
        Ok(p)
    }

    pub fn mean_photons(&self, mode: usize) -> Result<f64> {
        Ok(self
            .photon_distribution(mode)?
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum())
    }

    /// `e^{iθ n̂} ρ e^{-iθ n̂}` on one mode.
    pub fn phase_rotated(&self, mode: usize, theta: f64) -> Result<DensityOperator> {
        self.space.check_mode(mode)?;
        let mut out = self.clone();
        let d = self.space.dim();
        for i in 0..d {
            let ni = self.space.mode_occupation(i, mode) as f64;
            for j in 0..d {
                let nj = self.space.mode_occupation(j, mode) as f64;
                out.matrix[(i, j)] *= Complex64::from_polar(1.0, theta * (ni - nj));
            }
        }
        Ok(out)
    }

    /// Re-expresses the operator on a space with other cutoffs; fails if any
    /// nonzero entry would be dropped.
    pub fn embed(&self, space: &FockSpace) -> Result<DensityOperator> {
        if space.num_modes() != self.space.num_modes() {
            return Err(Error::DimensionMismatch(
                "embedding requires equal mode counts".into(),
            ));
        }
        let d = self.space.dim();
        let map: Vec<Option<usize>> = (0..d)
            .map(|i| space.index_of(&self.space.occupation(i)).ok())
            .collect();
        let mut out = DensityOperator::zeros(space.clone());
        for i in 0..d {
            for j in 0..d {
                let z = self.matrix[(i, j)];
                if z.norm_sqr() == 0.0 {
                    continue;
                }
                match (map[i], map[j]) {
                    (Some(a), Some(b)) => out.matrix[(a, b)] = z,
                    _ => {
                        return Err(Error::OccupationOutOfRange {
                            mode: 0,
                            occupation: self.space.total_photons(i.max(j)),
                            cutoff: *space.cutoffs().iter().max().unwrap_or(&0),
                        })
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Anything that can be viewed as a density operator.
/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Uses faer: nalgebra's symmetric QR iteration can return NaN on density
/// matrices whose entries span tens of orders of magnitude.
pub(crate) fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let m = faer::Mat::<Complex64>::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)]);
    match m.self_adjoint_eigenvalues(faer::Side::Lower) {
        Ok(v) => v,
        Err(_) => vec![f64::NAN; h.nrows()],
    }
}

/// Eigenpairs `(λ, v)` of a Hermitian matrix, eigenvalues ascending.
pub(crate) fn hermitian_eigen(h: &DMatrix<Complex64>) -> Option<(Vec<f64>, DMatrix<Complex64>)> {
    let m = faer::Mat::<Complex64>::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)]);
    let eig = m.self_adjoint_eigen(faer::Side::Lower).ok()?;
    let n = h.nrows();
    let values = (0..n).map(|i| eig.S().column_vector()[i].re).collect();
    let u = eig.U();
    Some((values, DMatrix::from_fn(n, n, |i, j| u[(i, j)])))
}

pub trait QuantumState {
    fn density(&self) -> Cow<'_, DensityOperator>;
    fn fock_space(&self) -> &FockSpace;
}

impl QuantumState for DensityOperator {
    fn density(&self) -> Cow<'_, DensityOperator> {
        Cow::Borrowed(self)
    }
    fn fock_space(&self) -> &FockSpace {
        &self.space
    }
}

impl QuantumState for PureState {
    fn density(&self) -> Cow<'_, DensityOperator> {
        Cow::Owned(DensityOperator::from_pure(self))
    }
    fn fock_space(&self) -> &FockSpace {
        self.space()
    }
}
