use crate::error::{Error, Result};
use crate::measurement::DetectorModel;

/// Gain `g = √(η/(1−η))` of a scissor whose gain beamsplitter has transmissivity `η`.
pub fn gain_from_transmissivity(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "eta",
            value: eta,
        });
    }
    Ok((eta / (1.0 - eta)).sqrt())
}

/// Inverse of [`gain_from_transmissivity`]: `η = g²/(1+g²)`.
pub fn transmissivity_from_gain(gain: f64) -> Result<f64> {
    check_gain(gain)?;
    let g2 = gain * gain;
    Ok(g2 / (1.0 + g2))
}

fn check_gain(gain: f64) -> Result<()> {
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "gain",
            value: gain,
        });
    }
    Ok(())
}

/// Photon capacity of the interferometer used for a scissor order.
pub(crate) fn network_order(order: usize) -> Result<usize> {
    match order {
        1 => Ok(1),
        2 | 3 => Ok(3),
        7 => Ok(7),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

/// A generalized scissor: order, gain, resource and detectors.
///
/// Order 2 is the order-3 interferometer fed with two photons. It amplifies
/// coherent inputs only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScissorSpec {
    order: usize,
    gain: f64,
    resource_photons: usize,
    resource_efficiency: f64,
    detector: DetectorModel,
}

impl ScissorSpec {
    /// Ideal device: `order` resource photons, lossless resource, ideal PNR detectors.
    pub fn new(order: usize, gain: f64) -> Result<Self> {
        network_order(order)?;
        check_gain(gain)?;
        Ok(Self {
            order,
            gain,
            resource_photons: order,
            resource_efficiency: 1.0,
            detector: DetectorModel::ideal_pnr(),
        })
    }

    pub fn from_transmissivity(order: usize, eta: f64) -> Result<Self> {
        Self::new(order, gain_from_transmissivity(eta)?)
    }

    pub fn with_resource_photons(mut self, photons: usize) -> Result<Self> {
        let cap = network_order(self.order)?;
        if photons == 0 || photons > cap {
            return Err(Error::ParameterOutOfRange {
                name: "resource_photons",
                value: photons as f64,
            });
        }
        self.resource_photons = photons;
        Ok(self)
    }

    pub fn with_resource_efficiency(mut self, tau_s: f64) -> Result<Self> {
        crate::error::check_unit_interval("resource_efficiency", tau_s)?;
        self.resource_efficiency = tau_s;
        Ok(self)
    }

    pub fn with_detector(mut self, detector: DetectorModel) -> Result<Self> {
        crate::error::check_unit_interval("efficiency", detector.efficiency)?;
        self.detector = detector;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Gain beamsplitter transmissivity `η`.
    pub fn transmissivity(&self) -> f64 {
        let g2 = self.gain * self.gain;
        g2 / (1.0 + g2)
    }

    pub fn resource_photons(&self) -> usize {
        self.resource_photons
    }

    pub fn resource_efficiency(&self) -> f64 {
        self.resource_efficiency
    }

    pub fn detector(&self) -> DetectorModel {
        self.detector
    }

    /// Number of single-photon clicks in an accepted pattern.
    pub fn network_order(&self) -> usize {
        network_order(self.order).expect("order validated at construction")
    }

    /// True when the device only amplifies coherent inputs faithfully.
    pub fn coherent_input_only(&self) -> bool {
        self.resource_photons < self.network_order()
    }
}

/// `N` single-photon scissors in parallel, each of gain `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlaSpec {
    scissors: usize,
    gain: f64,
}

impl NlaSpec {
    pub fn new(scissors: usize, gain: f64) -> Result<Self> {
        if scissors == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "scissors",
                value: 0.0,
            });
        }
        check_gain(gain)?;
        Ok(Self { scissors, gain })
    }

    pub fn scissors(&self) -> usize {
        self.scissors
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }
}
