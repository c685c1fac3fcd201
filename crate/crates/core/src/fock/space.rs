use crate::error::{Error, Result};

/// A multimode truncated Fock basis.
///
/// Basis states are ordered row-major over the per-mode occupations with
/// mode 0 the most significant digit, so `|n_0, n_1, ...>` sits at
/// `sum_m n_m * stride_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockSpace {
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl FockSpace {
    /// Builds a space with one inclusive photon-number cutoff per mode.
    pub fn new(cutoffs: Vec<usize>) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::DimensionMismatch(
                "a Fock space needs at least one mode".into(),
            ));
        }
        if let Some(m) = cutoffs.iter().position(|&c| c == 0) {
            return Err(Error::ParameterOutOfRange {
                name: "cutoff",
                value: m as f64,
            });
        }
        Ok(Self::from_cutoffs(cutoffs))
    }

    /// `num_modes` modes sharing the same cutoff.
    pub fn uniform(num_modes: usize, cutoff: usize) -> Result<Self> {
        Self::new(vec![cutoff; num_modes])
    }

    /// Zero-mode space holding a single amplitude. Produced when every mode
    /// of a state has been measured.
    pub(crate) fn scalar() -> Self {
        Self::from_cutoffs(Vec::new())
    }

    fn from_cutoffs(cutoffs: Vec<usize>) -> Self {
        let mut strides = vec![1; cutoffs.len()];
        let mut dim = 1usize;
        for m in (0..cutoffs.len()).rev() {
            strides[m] = dim;
            dim *= cutoffs[m] + 1;
        }
        Self {
            cutoffs,
            strides,
            dim,
        }
    }

    pub fn num_modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn cutoff(&self, mode: usize) -> usize {
        self.cutoffs[mode]
    }

    /// Product of `cutoff + 1` over all modes.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn stride(&self, mode: usize) -> usize {
        self.strides[mode]
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.num_modes() {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                mode,
                num_modes: self.num_modes(),
            })
        }
    }

    /// Basis index of an occupation tuple.
    pub fn index_of(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.num_modes() {
            return Err(Error::DimensionMismatch(format!(
                "occupation has {} entries for a {}-mode space",
                occupation.len(),
                self.num_modes()
            )));
        }
        let mut idx = 0;
        for (m, (&n, &c)) in occupation.iter().zip(&self.cutoffs).enumerate() {
            if n > c {
                return Err(Error::OccupationOutOfRange {
                    mode: m,
                    occupation: n,
                    cutoff: c,
                });
            }
            idx += n * self.strides[m];
        }
        Ok(idx)
    }

    /// Occupation tuple of a basis index.
    pub fn occupation(&self, index: usize) -> Vec<usize> {
        (0..self.num_modes())
            .map(|m| self.mode_occupation(index, m))
            .collect()
    }

    /// Photon number of one mode at a basis index.
    #[inline]
    pub fn mode_occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.strides[mode]) % (self.cutoffs[mode] + 1)
    }

    /// Total photon number at a basis index.
    pub fn total_photons(&self, index: usize) -> usize {
        (0..self.num_modes())
            .map(|m| self.mode_occupation(index, m))
            .sum()
    }

    /// The space left after deleting `modes`, in the original order.
    pub fn without_modes(&self, modes: &[usize]) -> FockSpace {
        let cutoffs = self
            .cutoffs
            .iter()
            .enumerate()
            .filter(|(m, _)| !modes.contains(m))
            .map(|(_, &c)| c)
            .collect();
        Self::from_cutoffs(cutoffs)
    }

    /// The space spanned by `modes`, in the order given.
    pub fn subspace(&self, modes: &[usize]) -> FockSpace {
        Self::from_cutoffs(modes.iter().map(|&m| self.cutoffs[m]).collect())
    }

    /// Tensor product space `self ⊗ other`.
    pub fn concat(&self, other: &FockSpace) -> FockSpace {
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.extend_from_slice(&other.cutoffs);
        Self::from_cutoffs(cutoffs)
    }

    /// Splits a basis index into `(index in subspace(modes), index in without_modes(modes))`.
    pub(crate) fn split_index(
        &self,
        index: usize,
        kept: &FockSpace,
        modes: &[usize],
        rest: &FockSpace,
    ) -> (usize, usize) {
        let mut a = 0;
        let mut b = 0;
        let mut ri = 0;
        for m in 0..self.num_modes() {
            let n = self.mode_occupation(index, m);
            if let Some(pos) = modes.iter().position(|&x| x == m) {
                a += n * kept.strides[pos];
            } else {
                b += n * rest.strides[ri];
                ri += 1;
            }
        }
        (a, b)
    }
}
