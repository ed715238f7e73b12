//! Experiment configuration: a flat TOML table whose every key is optional.
//!
//! Powers are given in dBm and ratios in dB, as in the usual link-budget
//! tables; conversion to watts happens when scenarios are built.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{derive_constants, PassGeometry, PhysConstants, Vec3};
use crate::detection::{CovertnessSpec, NoiseUncertainty, WillieUncertainty};
use crate::error::{Error, Result};
use crate::mwmp::PsoParams;
use crate::num::{db_to_linear, dbm_to_watts};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub carrier_freq_hz: f64,
    pub n_eff: f64,
    pub height_m: f64,
    pub length_m: f64,
    pub waveguides: usize,
    pub pas_per_waveguide: usize,
    pub waveguide_spacing_m: f64,
    /// PA spacing; half a free-space wavelength when unset.
    pub pa_spacing_m: Option<f64>,
    /// Coupling limit on PA spacing; half a free-space wavelength when unset.
    pub min_spacing_m: Option<f64>,

    pub p_max_dbm: f64,
    pub bob_noise_dbm: f64,
    pub willie_noise_dbm: f64,
    pub noise_uncertainty_db: f64,
    /// Covertness slack: the target total error rate is `1 - rho`.
    pub rho: f64,
    pub uncertainty_radius_m: f64,
    pub samples_per_axis: usize,

    /// Absolute step of the single-PA power search, in watts.
    pub power_step_w: f64,

    pub pso_bs_population: usize,
    pub pso_ps_population: usize,
    pub pso_inertia: f64,
    pub pso_cognitive: f64,
    pub pso_social: f64,
    pub pso_iterations: usize,
    pub pso_v_max: f64,

    pub monte_carlo: usize,
    /// Independent swarm starts averaged by the convergence run.
    pub convergence_runs: usize,
    pub seed: u64,

    /// Receiver and nominal warden for the single-layout subcommands.
    pub bob_x: f64,
    pub bob_y: f64,
    pub willie_x: f64,
    pub willie_y: f64,

    /// Rectangle over which Monte Carlo positions are drawn.
    pub region_x_min: f64,
    pub region_x_max: f64,
    pub region_y_min: f64,
    pub region_y_max: f64,
    /// Nominal warden positions closer than this to the receiver are redrawn.
    pub min_separation_m: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 28e9,
            n_eff: 1.4,
            height_m: 3.0,
            length_m: 25.0,
            waveguides: 4,
            pas_per_waveguide: 3,
            waveguide_spacing_m: 3.0,
            pa_spacing_m: None,
            min_spacing_m: None,
            p_max_dbm: 30.0,
            bob_noise_dbm: -100.0,
            willie_noise_dbm: -70.0,
            noise_uncertainty_db: 2.0,
            rho: 0.1,
            uncertainty_radius_m: 0.5,
            samples_per_axis: 1,
            power_step_w: 1e-5,
            pso_bs_population: 30,
            pso_ps_population: 30,
            pso_inertia: 0.8,
            pso_cognitive: 2.0,
            pso_social: 2.0,
            pso_iterations: 100,
            pso_v_max: 0.3,
            monte_carlo: 200,
            convergence_runs: 200,
            seed: 0,
            bob_x: 20.0,
            bob_y: 6.0,
            willie_x: 7.0,
            willie_y: -9.0,
            region_x_min: 0.0,
            region_x_max: 25.0,
            region_y_min: -7.5,
            region_y_max: 7.5,
            min_separation_m: 1.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Checks everything that can be checked without drawing positions.
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: &str| Err(Error::Config(m.to_string()));
        if self.monte_carlo == 0 || self.convergence_runs == 0 {
            return cfg("monte_carlo and convergence_runs must be >= 1");
        }
        if !(self.region_x_max > self.region_x_min && self.region_y_max > self.region_y_min) {
            return cfg("sampling region is empty");
        }
        if !(self.min_separation_m >= 0.0) {
            return cfg("min_separation_m must be >= 0");
        }
        if !(self.power_step_w > 0.0) {
            return cfg("power_step_w must be positive");
        }
        self.constants()?;
        self.pass_geometry()?;
        self.pso(0).validate()?;
        self.scenario(
            self.reference_bob(),
            self.reference_willie(),
            PassGeometry::single(self.height_m, self.length_m)?,
        )?;
        Ok(())
    }

    pub fn constants(&self) -> Result<PhysConstants<f64>> {
        derive_constants(self.carrier_freq_hz, self.n_eff)
    }

    pub fn p_max_w(&self) -> f64 {
        dbm_to_watts(self.p_max_dbm)
    }

    pub fn bob_noise_w(&self) -> f64 {
        dbm_to_watts(self.bob_noise_dbm)
    }

    pub fn noise_model(&self) -> Result<NoiseUncertainty<f64>> {
        NoiseUncertainty::new(
            dbm_to_watts(self.willie_noise_dbm),
            db_to_linear(self.noise_uncertainty_db),
        )
    }

    /// Multi-waveguide geometry.
    pub fn pass_geometry(&self) -> Result<PassGeometry<f64>> {
        let half = self.constants()?.wavelength / 2.0;
        PassGeometry::uniform(
            self.height_m,
            self.length_m,
            self.waveguides,
            self.pas_per_waveguide,
            self.waveguide_spacing_m,
            self.pa_spacing_m.unwrap_or(half),
            self.min_spacing_m.unwrap_or(half),
        )
    }

    pub fn reference_bob(&self) -> Vec3<f64> {
        Vec3::ground(self.bob_x, self.bob_y)
    }

    pub fn reference_willie(&self) -> Vec3<f64> {
        Vec3::ground(self.willie_x, self.willie_y)
    }

    pub fn scenario(&self, bob: Vec3<f64>, willie: Vec3<f64>, geometry: PassGeometry<f64>) -> Result<Scenario<f64>> {
        let noise = self.noise_model()?;
        Scenario::new(
            self.constants()?,
            geometry,
            bob,
            self.bob_noise_w(),
            WillieUncertainty::new(willie, self.uncertainty_radius_m)?,
            noise,
            CovertnessSpec::new(self.rho, &noise)?,
            self.p_max_w(),
            self.samples_per_axis,
        )
    }

    /// Single waveguide carrying a single PA.
    pub fn swsp_scenario(&self, bob: Vec3<f64>, willie: Vec3<f64>) -> Result<Scenario<f64>> {
        self.scenario(bob, willie, PassGeometry::single(self.height_m, self.length_m)?)
    }

    pub fn mwmp_scenario(&self, bob: Vec3<f64>, willie: Vec3<f64>) -> Result<Scenario<f64>> {
        self.scenario(bob, willie, self.pass_geometry()?)
    }

    pub fn pso(&self, seed: u64) -> PsoParams {
        PsoParams {
            bs_population: self.pso_bs_population,
            ps_population: self.pso_ps_population,
            bs_inertia: self.pso_inertia,
            ps_inertia: self.pso_inertia,
            bs_cognitive: self.pso_cognitive,
            bs_social: self.pso_social,
            ps_cognitive: self.pso_cognitive,
            ps_social: self.pso_social,
            iterations: self.pso_iterations,
            v_max: self.pso_v_max,
            seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_convert() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert!((c.p_max_w() - 1.0).abs() < 1e-15);
        assert!((c.bob_noise_w() - 1e-13).abs() < 1e-27);
        let nu = c.noise_model().unwrap();
        assert!((nu.nominal() - 1e-10).abs() < 1e-24);
        let g = c.pass_geometry().unwrap();
        assert_eq!(g.num_waveguides(), 4);
        assert!((g.pa_spacing - 2.998e8 / 28e9 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn partial_toml_keeps_defaults() {
        let c = ExperimentConfig::from_toml_str("rho = 0.2\nmonte_carlo = 5\n").unwrap();
        assert_eq!(c.rho, 0.2);
        assert_eq!(c.monte_carlo, 5);
        assert_eq!(c.waveguides, 4);
    }

    #[test]
    fn bad_toml_is_a_config_error() {
        let e = ExperimentConfig::from_toml_str("no_such_key = 1").unwrap_err();
        assert_eq!(e.kind(), "config");
        let e = ExperimentConfig::from_toml_str("monte_carlo = 0").unwrap_err();
        assert_eq!(e.kind(), "config");
        assert!(ExperimentConfig::from_toml_str("rho = 2.0").is_err());
    }
}
