use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ops::{apply_phase, mix_modes};
use super::{DensityOperator, FockSpace, PureState};
use crate::channels::loss_on_kraus_branches;
use crate::error::{check_unit_interval, Error, Result};

/// One linear-optical element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Power transmissivity `transmissivity` between `m1` and `m2`.
    Beamsplitter {
        m1: usize,
        m2: usize,
        transmissivity: f64,
    },
    PhaseShift {
        mode: usize,
        theta: f64,
    },
    /// Pure loss of power transmissivity `transmissivity`.
    Loss {
        mode: usize,
        transmissivity: f64,
    },
}

/// An ordered list of elements acting on a fixed Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    space: FockSpace,
    elements: Vec<Element>,
}

impl Circuit {
    pub fn new(space: FockSpace) -> Self {
        Self {
            space,
            elements: Vec::new(),
        }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn push(&mut self, element: Element) -> Result<&mut Self> {
        match element {
            Element::Beamsplitter {
                m1,
                m2,
                transmissivity,
            } => {
                self.space.check_mode(m1)?;
                self.space.check_mode(m2)?;
                if m1 == m2 {
                    return Err(Error::ModeCollision(m1));
                }
                check_unit_interval("transmissivity", transmissivity)?;
            }
            Element::PhaseShift { mode, theta } => {
                self.space.check_mode(mode)?;
                if !theta.is_finite() {
                    return Err(Error::ParameterOutOfRange {
                        name: "theta",
                        value: theta,
                    });
                }
            }
            Element::Loss {
                mode,
                transmissivity,
            } => {
                self.space.check_mode(mode)?;
                check_unit_interval("transmissivity", transmissivity)?;
            }
        }
        self.elements.push(element);
        Ok(self)
    }

    pub fn beamsplitter(&mut self, m1: usize, m2: usize, transmissivity: f64) -> Result<&mut Self> {
        self.push(Element::Beamsplitter {
            m1,
            m2,
            transmissivity,
        })
    }

    pub fn phase(&mut self, mode: usize, theta: f64) -> Result<&mut Self> {
        self.push(Element::PhaseShift { mode, theta })
    }

    pub fn loss(&mut self, mode: usize, transmissivity: f64) -> Result<&mut Self> {
        self.push(Element::Loss {
            mode,
            transmissivity,
        })
    }

    /// True when no element is lossy (a loss of transmissivity 1 counts as lossless).
    pub fn is_lossless(&self) -> bool {
        self.elements.iter().all(|e| match e {
            Element::Loss { transmissivity, .. } => *transmissivity >= 1.0,
            _ => true,
        })
    }

    fn check_input(&self, psi: &PureState) -> Result<()> {
        if psi.space() != &self.space {
            return Err(Error::DimensionMismatch(format!(
                "circuit space {:?} vs state space {:?}",
                self.space.cutoffs(),
                psi.space().cutoffs()
            )));
        }
        Ok(())
    }

    /// Evolves a pure state through a lossless circuit.
    pub fn run(&self, psi: &PureState) -> Result<PureState> {
        if !self.is_lossless() {
            return Err(Error::Unsupported(
                "lossy circuit cannot map a pure state to a pure state; use run_ensemble".into(),
            ));
        }
        let mut branches = self.run_ensemble(vec![psi.clone()])?;
        Ok(branches.pop().expect("lossless run keeps one branch"))
    }

    /// Evolves an ensemble of unnormalized branches `ρ = Σ |ψ_i><ψ_i|`.
    /// Loss elements split every branch into its Kraus branches.
    pub fn run_ensemble(&self, branches: Vec<PureState>) -> Result<Vec<PureState>> {
        for b in &branches {
            self.check_input(b)?;
        }
        let mut current = branches;
        for el in &self.elements {
            current = match *el {
                Element::Beamsplitter {
                    m1,
                    m2,
                    transmissivity,
                } => {
                    let theta = transmissivity.sqrt().acos();
                    current
                        .iter()
                        .map(|b| mix_modes(b, m1, m2, theta).map(|(s, _)| s))
                        .collect::<Result<_>>()?
                }
                Element::PhaseShift { mode, theta } => current
                    .iter()
                    .map(|b| apply_phase(b, mode, theta))
                    .collect::<Result<_>>()?,
                Element::Loss {
                    mode,
                    transmissivity,
                } => {
                    if transmissivity >= 1.0 {
                        current
                    } else {
                        let mut next = Vec::new();
                        for b in &current {
                            let k_max = self.space.cutoff(mode);
                            let split = loss_on_kraus_branches(b, mode, transmissivity, k_max)?;
                            next.extend(
                                split
                                    .branches
                                    .into_iter()
                                    .filter(|s| s.norm_sq() > 0.0),
                            );
                        }
                        next
                    }
                }
            };
        }
        Ok(current)
    }

    /// Output density operator for a pure input.
    pub fn run_density(&self, psi: &PureState) -> Result<DensityOperator> {
        let branches = self.run_ensemble(vec![psi.clone()])?;
        if branches.is_empty() {
            return Ok(DensityOperator::zeros(self.space.clone()));
        }
        DensityOperator::from_ensemble(&branches)
    }

    /// Single-photon transfer matrix `U` with `a_j† → Σ_k U[k, j] a_k†`.
    /// Coherent amplitudes map as `α_out = U α_in`.
    pub fn transfer_matrix(&self) -> Result<DMatrix<Complex64>> {
        if !self.is_lossless() {
            return Err(Error::Unsupported(
                "transfer matrix is only defined for lossless circuits".into(),
            ));
        }
        let n = self.space.num_modes();
        let mut u = DMatrix::<Complex64>::identity(n, n);
        for el in &self.elements {
            let mut e = DMatrix::<Complex64>::identity(n, n);
            match *el {
                Element::Beamsplitter {
                    m1,
                    m2,
                    transmissivity,
                } => {
                    let t = transmissivity.sqrt();
                    let r = (1.0 - transmissivity).sqrt();
                    e[(m1, m1)] = Complex64::new(t, 0.0);
                    e[(m2, m1)] = Complex64::new(-r, 0.0);
                    e[(m1, m2)] = Complex64::new(r, 0.0);
                    e[(m2, m2)] = Complex64::new(t, 0.0);
                }
                Element::PhaseShift { mode, theta } => {
                    e[(mode, mode)] = Complex64::from_polar(1.0, theta);
                }
                Element::Loss { .. } => {}
            }
            u = e * u;
        }
        Ok(u)
    }
}
