use crate::channel::{PassGeometry, PhysConstants, Vec3};
use crate::detection::{sample_region, CovertnessSpec, NoiseUncertainty, WillieUncertainty};
use crate::error::{invalid, Result};
use crate::num::Real;

/// Everything a solver needs to know about one transmitter/receiver/warden
/// configuration. All powers are in watts.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub constants: PhysConstants<T>,
    pub geometry: PassGeometry<T>,
    /// Legitimate receiver position (ground plane).
    pub bob: Vec3<T>,
    /// Receiver noise power.
    pub bob_noise: T,
    pub willie: WillieUncertainty<T>,
    pub noise: NoiseUncertainty<T>,
    pub covertness: CovertnessSpec<T>,
    /// Total transmit power budget.
    pub p_max: T,
    /// Grid points per direction used to sample the warden's disk.
    pub samples_per_axis: usize,
}

impl<T: Real> Scenario<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        constants: PhysConstants<T>,
        geometry: PassGeometry<T>,
        bob: Vec3<T>,
        bob_noise: T,
        willie: WillieUncertainty<T>,
        noise: NoiseUncertainty<T>,
        covertness: CovertnessSpec<T>,
        p_max: T,
        samples_per_axis: usize,
    ) -> Result<Self> {
        if !(bob_noise > T::zero()) {
            return Err(invalid(format!(
                "receiver noise power must be positive, got {bob_noise}"
            )));
        }
        if !(p_max >= T::zero()) || !p_max.is_finite() {
            return Err(invalid(format!("power budget must be finite and >= 0, got {p_max}")));
        }
        if samples_per_axis == 0 {
            return Err(invalid("sample count per direction must be >= 1"));
        }
        if !bob.is_finite() || !willie.center.is_finite() {
            return Err(invalid("receiver positions must be finite"));
        }
        Ok(Self {
            constants,
            geometry,
            bob,
            bob_noise,
            willie,
            noise,
            covertness,
            p_max,
            samples_per_axis,
        })
    }

    /// Warden sample set used for sampled covertness checks.
    pub fn samples(&self) -> Vec<Vec3<T>> {
        sample_region(&self.willie, self.samples_per_axis).expect("validated sample count")
    }

    /// Beam-gain budget at the warden.
    pub fn budget(&self) -> T {
        self.covertness.budget()
    }
}
