//! Fock transition amplitudes of lossless interferometers via permanents.
//!
//! For a transfer matrix `U` and occupations `s` (input) and `t` (output),
//! `<t|U|s> = perm(U[t, s]) / √(Π s_j! Π t_k!)`, where `U[t, s]` repeats
//! row `k` `t_k` times and column `j` `s_j` times. This route scales with the
//! photon number rather than the Fock-space dimension, so it covers
//! interferometers with many modes.
//!
//! [`SparseFockState`] evolves a whole input Fock state at once by expanding
//! `Π_j (Σ_k U[k,j] a_k†)^{s_j}` as a polynomial in the creation operators.
//! Its size is bounded by the number of occupations with the input photon
//! number, never by a per-mode cutoff, so the result is exact.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ops::factorial;
use crate::error::{Error, Result};

/// Permanent via Glynn's formula with Gray-code ordering.
pub fn permanent(m: &DMatrix<Complex64>) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "permanent needs a square matrix");
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Row sums with all deltas = +1.
    let mut sums: Vec<Complex64> = (0..n)
        .map(|j| (0..n).map(|i| m[(i, j)]).sum())
        .collect();
    let mut total = sums.iter().product::<Complex64>();
    let mut sign = 1.0f64;
    let mut delta = vec![1.0f64; n];
    let count = 1u64 << (n - 1);
    let mut gray_prev = 0u64;
    for k in 1..count {
        let gray = k ^ (k >> 1);
        let flipped = (gray ^ gray_prev).trailing_zeros() as usize;
        gray_prev = gray;
        // Row 0 is never flipped; flip row `flipped + 1`.
        let row = flipped + 1;
        delta[row] = -delta[row];
        for (j, s) in sums.iter_mut().enumerate() {
            *s += m[(row, j)] * (2.0 * delta[row]);
        }
        sign = -sign;
        total += sums.iter().product::<Complex64>() * sign;
    }
    total / count as f64
}

/// `<output| U |input>` for a lossless interferometer with transfer matrix `U`.
pub fn transition_amplitude(
    u: &DMatrix<Complex64>,
    input: &[usize],
    output: &[usize],
) -> Result<Complex64> {
    let modes = u.nrows();
    if input.len() != modes || output.len() != modes || u.ncols() != modes {
        return Err(Error::DimensionMismatch(
            "occupations must list every interferometer mode".into(),
        ));
    }
    let n_in: usize = input.iter().sum();
    let n_out: usize = output.iter().sum();
    if n_in != n_out {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let cols: Vec<usize> = input
        .iter()
        .enumerate()
        .flat_map(|(j, &s)| std::iter::repeat_n(j, s))
        .collect();
    let rows: Vec<usize> = output
        .iter()
        .enumerate()
        .flat_map(|(k, &t)| std::iter::repeat_n(k, t))
        .collect();
    let sub = DMatrix::from_fn(n_in, n_in, |a, b| u[(rows[a], cols[b])]);
    let norm: f64 = input
        .iter()
        .chain(output)
        .map(|&k| factorial(k))
        .product::<f64>()
        .sqrt();
    Ok(permanent(&sub) / norm)
}

const BITS: u32 = 6;
const FIELD: u64 = (1 << BITS) - 1;

/// Largest mode count a [`SparseFockState`] can pack into its keys.
pub const MAX_SPARSE_MODES: usize = (64 / BITS) as usize;
/// Largest per-mode occupation a [`SparseFockState`] can represent.
pub const MAX_SPARSE_OCCUPATION: usize = FIELD as usize;

/// A state with a fixed total photon number, stored as the coefficients of
/// normally ordered creation-operator monomials acting on vacuum.
///
/// Entries are kept sorted by occupation so arithmetic is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseFockState {
    modes: usize,
    /// `(packed occupation, monomial coefficient)`.
    terms: Vec<(u64, Complex64)>,
}

impl SparseFockState {
    /// The vacuum on `modes` modes.
    pub fn vacuum(modes: usize) -> Result<Self> {
        if modes == 0 || modes > MAX_SPARSE_MODES {
            return Err(Error::DimensionMismatch(format!(
                "sparse states support 1..={MAX_SPARSE_MODES} modes, got {modes}"
            )));
        }
        Ok(Self {
            modes,
            terms: vec![(0, Complex64::new(1.0, 0.0))],
        })
    }

    pub fn num_modes(&self) -> usize {
        self.modes
    }

    fn unpack(&self, key: u64) -> Vec<usize> {
        (0..self.modes)
            .map(|m| ((key >> (BITS * m as u32)) & FIELD) as usize)
            .collect()
    }

    /// Applies `scale · Σ_k column[k] a_k†`.
    pub fn create(&self, column: &[Complex64], scale: f64) -> Result<Self> {
        if column.len() != self.modes {
            return Err(Error::DimensionMismatch(format!(
                "column of length {} for {} modes",
                column.len(),
                self.modes
            )));
        }
        let mut next = Vec::with_capacity(self.terms.len() * self.modes);
        for &(key, c) in &self.terms {
            for (k, &u) in column.iter().enumerate() {
                if u == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let shift = BITS * k as u32;
                if (key >> shift) & FIELD == FIELD {
                    return Err(Error::Unsupported(format!(
                        "occupation above {MAX_SPARSE_OCCUPATION} in a sparse state"
                    )));
                }
                next.push((key + (1 << shift), c * u * scale));
            }
        }
        next.sort_by_key(|&(k, _)| k);
        let mut terms: Vec<(u64, Complex64)> = Vec::with_capacity(next.len());
        for (k, c) in next {
            match terms.last_mut() {
                Some((lk, lc)) if *lk == k => *lc += c,
                _ => terms.push((k, c)),
            }
        }
        Ok(Self {
            modes: self.modes,
            terms,
        })
    }

    /// Fock amplitudes `(occupation, <occupation|ψ>)`, in increasing key order.
    pub fn amplitudes(&self) -> Vec<(Vec<usize>, Complex64)> {
        self.terms
            .iter()
            .map(|&(key, c)| {
                let occ = self.unpack(key);
                let norm: f64 = occ.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
                (occ, c * norm)
            })
            .collect()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes().iter().map(|(_, a)| a.norm_sqr()).sum()
    }
}

/// `U |input>` for a lossless interferometer, exact for any photon number.
pub fn evolve_fock(u: &DMatrix<Complex64>, input: &[usize]) -> Result<SparseFockState> {
    let modes = u.nrows();
    if input.len() != modes || u.ncols() != modes {
        return Err(Error::DimensionMismatch(
            "occupations must list every interferometer mode".into(),
        ));
    }
    let mut state = SparseFockState::vacuum(modes)?;
    for (j, &s) in input.iter().enumerate() {
        let column: Vec<Complex64> = u.column(j).iter().copied().collect();
        for k in 1..=s {
            state = state.create(&column, 1.0 / (k as f64).sqrt())?;
        }
    }
    Ok(state)
}

/// `<out|U|n_a, n_b>` for an input with photons in two modes only.
///
/// Expands `(Σ_k U[k,a] a_k†)^{n_a} (Σ_k U[k,b] a_k†)^{n_b}` term by term,
/// splitting each output occupation `o_k` into `j_k` photons from `a` and
/// `o_k − j_k` from `b`. Cheap when the output occupations are small.
pub fn two_mode_input_amplitude(
    u: &DMatrix<Complex64>,
    (mode_a, n_a): (usize, usize),
    (mode_b, n_b): (usize, usize),
    out: &[usize],
) -> Result<Complex64> {
    let modes = u.nrows();
    if out.len() != modes || u.ncols() != modes || mode_a >= modes || mode_b >= modes || mode_a == mode_b {
        return Err(Error::DimensionMismatch(
            "occupations must list every interferometer mode".into(),
        ));
    }
    if out.iter().sum::<usize>() != n_a + n_b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    fn rec(
        u: &DMatrix<Complex64>,
        a: usize,
        b: usize,
        out: &[usize],
        k: usize,
        left: usize,
        acc: Complex64,
    ) -> Complex64 {
        if k == out.len() {
            return if left == 0 { acc } else { Complex64::new(0.0, 0.0) };
        }
        let rest: usize = out[k + 1..].iter().sum();
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..=out[k].min(left) {
            if left - j > rest {
                continue;
            }
            let from_b = out[k] - j;
            let term = u[(k, a)].powu(j as u32) * u[(k, b)].powu(from_b as u32)
                / (factorial(j) * factorial(from_b));
            if term == Complex64::new(0.0, 0.0) {
                continue;
            }
            sum += rec(u, a, b, out, k + 1, left - j, acc * term);
        }
        sum
    }
    let coeff = rec(u, mode_a, mode_b, out, 0, n_a, Complex64::new(1.0, 0.0));
    let norm: f64 = out.iter().map(|&o| factorial(o)).product::<f64>().sqrt();
    Ok(coeff * norm * (factorial(n_a) * factorial(n_b)).sqrt())
}
