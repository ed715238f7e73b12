//! Monte Carlo experiments: seeded scenario draws, parameter sweeps over all
//! schemes, convergence traces and beam-pattern grids.
//!
//! Each trial owns a generator derived from `(master seed, stream, index)`, so
//! results do not depend on scheduling and the same trial sees the same
//! positions and swarm seed at every sweep value.

pub mod config;
pub mod emit;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::benchmarks::{self, ula_channel, BenchmarkKind};
use crate::channel::{
    beam_pattern_grid, effective_channel, los_coeff, BeamVector, GridSpec, PatternGrid, PinchLayout, Vec3,
};
use crate::error::{Error, Result};
use crate::mwmp;
use crate::num::{dot, Cx};
use crate::scenario::Scenario;
use crate::swsp;

pub use config::ExperimentConfig;
pub use emit::{emit, Field, Format, Row, SweepRecord};

const PLACEMENT_STREAM: u64 = 0x706c_6163;
const SWARM_STREAM: u64 = 0x7377_726d;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent seed for item `index` of `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ stream).wrapping_add(index))
}

fn names<T: Copy>(all: &[T], name: impl Fn(T) -> &'static str) -> String {
    all.iter().map(|&v| name(v)).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Swsp,
    Mwmp,
    Bench(BenchmarkKind),
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Mwmp,
        Scheme::Swsp,
        Scheme::Bench(BenchmarkKind::PassZf),
        Scheme::Bench(BenchmarkKind::PassMrt),
        Scheme::Bench(BenchmarkKind::MimoZf),
        Scheme::Bench(BenchmarkKind::MimoMrt),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Swsp => "swsp",
            Scheme::Mwmp => "mwmp",
            Scheme::Bench(k) => k.name(),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown scheme '{s}'; expected one of {}",
                names(&Self::ALL, Scheme::name)
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    /// `1 - rho`.
    TargetErrorRate,
    /// Power budget in dBm.
    PowerBudget,
    /// Warden position-error radius in metres.
    UncertaintyRadius,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 3] = [Self::TargetErrorRate, Self::PowerBudget, Self::UncertaintyRadius];

    pub fn name(self) -> &'static str {
        match self {
            Self::TargetErrorRate => "target_error_rate",
            Self::PowerBudget => "power_budget",
            Self::UncertaintyRadius => "uncertainty_radius",
        }
    }

    /// `cfg` with this variable set to `value`.
    pub fn apply(self, cfg: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut out = cfg.clone();
        match self {
            Self::TargetErrorRate => {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::Config(format!(
                        "target error rate must lie in [0, 1], got {value}"
                    )));
                }
                out.rho = 1.0 - value;
            }
            Self::PowerBudget => out.p_max_dbm = value,
            Self::UncertaintyRadius => out.uncertainty_radius_m = value,
        }
        out.validate()?;
        Ok(out)
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown sweep variable '{s}'; expected one of {}",
                names(&Self::ALL, SweepVariable::name)
            ))
        })
    }
}

/// The two proposed designs, for convergence traces and beam patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Swsp,
    Mwmp,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Swsp => "swsp",
            Case::Mwmp => "mwmp",
        }
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swsp" => Ok(Case::Swsp),
            "mwmp" => Ok(Case::Mwmp),
            _ => Err(Error::Config(format!("unknown case '{s}'; expected one of swsp, mwmp"))),
        }
    }
}

/// Receiver and nominal warden positions of one Monte Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub trial: usize,
    pub bob: Vec3<f64>,
    pub willie: Vec3<f64>,
    /// Seed handed to any randomized solver in this trial.
    pub seed: u64,
}

fn draw_point(rng: &mut ChaCha8Rng, cfg: &ExperimentConfig) -> Vec3<f64> {
    let x = rng.random_range(cfg.region_x_min..=cfg.region_x_max);
    let y = rng.random_range(cfg.region_y_min..=cfg.region_y_max);
    Vec3::ground(x, y)
}

/// `n` independent uniform placements over the configured region.
pub fn sample_placements(cfg: &ExperimentConfig, n: usize, seed: u64) -> Vec<Placement> {
    (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, PLACEMENT_STREAM, i as u64));
            let bob = draw_point(&mut rng, cfg);
            let mut willie = draw_point(&mut rng, cfg);
            while willie.distance(&bob) < cfg.min_separation_m {
                willie = draw_point(&mut rng, cfg);
            }
            Placement {
                trial: i,
                bob,
                willie,
                seed: derive_seed(seed, SWARM_STREAM, i as u64),
            }
        })
        .collect()
}

/// Multi-waveguide scenarios at `n` random placements.
pub fn sample_scenarios(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<Vec<Scenario<f64>>> {
    if n == 0 {
        return Err(Error::Config("scenario count must be >= 1".into()));
    }
    sample_placements(cfg, n, seed)
        .iter()
        .map(|p| cfg.mwmp_scenario(p.bob, p.willie))
        .collect()
}

/// Configuration a scheme settles on for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub scheme: Scheme,
    pub rate: f64,
    pub power: f64,
    /// First-PA coordinates; empty for the fixed array.
    pub x_init: Vec<f64>,
    /// Unit transmit weights.
    pub weights: Vec<Cx<f64>>,
    /// Largest sampled received power at the warden.
    pub leakage: f64,
}

fn sampled_leakage(
    sc: &Scenario<f64>,
    power: f64,
    unit: &[Cx<f64>],
    channel: impl Fn(&Vec3<f64>) -> Result<Vec<Cx<f64>>>,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for r in &sc.samples() {
        worst = worst.max(power * dot(&channel(r)?, unit).norm_sqr());
    }
    Ok(worst)
}

/// Solves one placement with one scheme and re-checks sampled covertness.
pub fn solve_scheme(
    cfg: &ExperimentConfig,
    scheme: Scheme,
    bob: Vec3<f64>,
    willie: Vec3<f64>,
    seed: u64,
) -> Result<Solution> {
    let sol = match scheme {
        Scheme::Swsp => {
            let sc = cfg.swsp_scenario(bob, willie)?;
            let s = swsp::solve(&sc, cfg.power_step_w)?;
            let unit = [Cx::new(1.0, 0.0)];
            let pc = sc.constants;
            let pa = Vec3::new(s.position, 0.0, sc.geometry.height);
            let leakage = sampled_leakage(&sc, s.power, &unit, |r| Ok(vec![los_coeff(&pa, r, &pc)?]))?;
            Solution {
                scheme,
                rate: s.rate,
                power: s.power,
                x_init: vec![s.position],
                weights: unit.to_vec(),
                leakage,
            }
        }
        Scheme::Mwmp => {
            let sc = cfg.mwmp_scenario(bob, willie)?;
            let s = mwmp::solve(&sc, &cfg.pso(seed))?;
            let layout = s.layout(&sc.geometry)?;
            let leakage = sampled_leakage(&sc, s.power, s.beam.unit(), |r| {
                Ok(effective_channel(&layout, r, &sc.geometry, &sc.constants))
            })?;
            Solution {
                scheme,
                rate: s.rate,
                power: s.power,
                x_init: s.x_init,
                weights: s.beam.unit().to_vec(),
                leakage,
            }
        }
        Scheme::Bench(kind) => {
            let sc = cfg.mwmp_scenario(bob, willie)?;
            match benchmarks::evaluate(kind, &sc) {
                Ok(o) => {
                    let unit = o.beam.unit().to_vec();
                    let leakage = match &o.layout {
                        Some(l) => sampled_leakage(&sc, o.power, &unit, |r| {
                            Ok(effective_channel(l, r, &sc.geometry, &sc.constants))
                        })?,
                        None => sampled_leakage(&sc, o.power, &unit, |r| {
                            ula_channel(r, sc.geometry.num_waveguides(), sc.geometry.height, &sc.constants)
                        })?,
                    };
                    let x_init = o.layout.map(|l| l.x_init().to_vec()).unwrap_or_default();
                    Solution {
                        scheme,
                        rate: o.rate,
                        power: o.power,
                        x_init,
                        weights: unit,
                        leakage,
                    }
                }
                // no direction avoids the warden: nothing can be sent
                Err(Error::NullSpaceEmpty(_)) => Solution {
                    scheme,
                    rate: 0.0,
                    power: 0.0,
                    x_init: Vec::new(),
                    weights: Vec::new(),
                    leakage: 0.0,
                },
                Err(e) => return Err(e),
            }
        }
    };
    let budget = cfg.swsp_scenario(bob, willie)?.budget();
    if sol.leakage > budget * (1.0 + 1e-9) {
        return Err(Error::InfeasibleCovertness(format!(
            "{scheme} leaks {:e} W at the warden against a budget of {budget:e} W",
            sol.leakage
        )));
    }
    Ok(sol)
}

/// Runs every scheme on `cfg.monte_carlo` placements for each sweep value.
///
/// Output order: for each value, for each scheme, the trial rows then one mean
/// row. Placements and swarm seeds are shared across values.
pub fn run_sweep(
    cfg: &ExperimentConfig,
    variable: SweepVariable,
    values: &[f64],
    schemes: &[Scheme],
) -> Result<Vec<SweepRecord>> {
    if values.is_empty() || schemes.is_empty() {
        return Err(Error::Config("a sweep needs at least one value and one scheme".into()));
    }
    let placements = sample_placements(cfg, cfg.monte_carlo, cfg.seed);
    let mut out = Vec::new();
    for &value in values {
        let cv = variable.apply(cfg, value)?;
        for &scheme in schemes {
            let trials = placements
                .par_iter()
                .map(|p| solve_scheme(&cv, scheme, p.bob, p.willie, p.seed))
                .collect::<Result<Vec<_>>>()?;
            let record = |trial, rate, p_opt, seed| SweepRecord {
                scheme: scheme.name().into(),
                sweep_variable: variable.name().into(),
                sweep_value: value,
                trial,
                covert_rate: rate,
                p_opt,
                seed,
            };
            let n = trials.len() as f64;
            let mean_rate = trials.iter().map(|s| s.rate).sum::<f64>() / n;
            let mean_power = trials.iter().map(|s| s.power).sum::<f64>() / n;
            out.extend(
                placements
                    .iter()
                    .zip(&trials)
                    .map(|(p, s)| record(Some(p.trial), s.rate, s.power, p.seed)),
            );
            out.push(record(None, mean_rate, mean_power, cfg.seed));
        }
    }
    Ok(out)
}

/// Mean rate rows of a sweep, as `(scheme, value, mean)`.
pub fn means(records: &[SweepRecord]) -> Vec<(&str, f64, f64)> {
    records
        .iter()
        .filter(|r| r.trial.is_none())
        .map(|r| (r.scheme.as_str(), r.sweep_value, r.covert_rate))
        .collect()
}

/// Best rate so far after each step of a solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub case: Case,
    /// 1-based power step or swarm iteration.
    pub step: usize,
    pub best_rate: f64,
}

impl Row for ConvergenceRecord {
    fn header() -> &'static [&'static str] {
        &["case", "step", "best_rate_bps_hz"]
    }

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Str(self.case.name().into()),
            Field::Int(self.step as u64),
            Field::Num(self.best_rate),
        ]
    }
}

/// Convergence trace on the reference placement. The swarm trace is averaged
/// over `cfg.convergence_runs` independently seeded runs.
pub fn run_convergence(cfg: &ExperimentConfig, case: Case) -> Result<Vec<ConvergenceRecord>> {
    let (bob, willie) = (cfg.reference_bob(), cfg.reference_willie());
    let trace: Vec<f64> = match case {
        Case::Swsp => {
            let sc = cfg.swsp_scenario(bob, willie)?;
            swsp::solve_traced(&sc, cfg.power_step_w)?
                .1
                .iter()
                .map(|s| s.best_rate)
                .collect()
        }
        Case::Mwmp => {
            let sc = cfg.mwmp_scenario(bob, willie)?;
            let runs = (0..cfg.convergence_runs)
                .into_par_iter()
                .map(|r| mwmp::solve(&sc, &cfg.pso(derive_seed(cfg.seed, SWARM_STREAM, r as u64))).map(|s| s.trace))
                .collect::<Result<Vec<_>>>()?;
            let n = runs.len() as f64;
            (0..cfg.pso_iterations)
                .map(|t| runs.iter().map(|tr| tr[t]).sum::<f64>() / n)
                .collect()
        }
    };
    Ok(trace
        .into_iter()
        .enumerate()
        .map(|(i, best_rate)| ConvergenceRecord {
            case,
            step: i + 1,
            best_rate,
        })
        .collect())
}

/// One solved reference placement, flattened for output.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    pub solution: Solution,
    pub seed: u64,
}

fn joined(vals: impl Iterator<Item = f64>) -> Field {
    Field::Str(vals.map(emit::format_float).collect::<Vec<_>>().join(";"))
}

impl Row for SolutionRecord {
    fn header() -> &'static [&'static str] {
        &[
            "scheme",
            "covert_rate_bps_hz",
            "p_opt_watts",
            "x_init_m",
            "weights_re",
            "weights_im",
            "seed",
        ]
    }

    fn fields(&self) -> Vec<Field> {
        let s = &self.solution;
        vec![
            Field::Str(s.scheme.name().into()),
            Field::Num(s.rate),
            Field::Num(s.power),
            joined(s.x_init.iter().copied()),
            joined(s.weights.iter().map(|z| z.re)),
            joined(s.weights.iter().map(|z| z.im)),
            Field::Int(self.seed),
        ]
    }
}

/// Solves the reference placement with each of `schemes`.
pub fn solve_reference(cfg: &ExperimentConfig, schemes: &[Scheme]) -> Result<Vec<SolutionRecord>> {
    schemes
        .iter()
        .map(|&s| {
            let solution = solve_scheme(cfg, s, cfg.reference_bob(), cfg.reference_willie(), cfg.seed)?;
            Ok(SolutionRecord {
                solution,
                seed: cfg.seed,
            })
        })
        .collect()
}

/// One grid cell of a beam pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternCell {
    pub x: f64,
    pub y: f64,
    pub gain: f64,
}

impl Row for PatternCell {
    fn header() -> &'static [&'static str] {
        &["x", "y", "gain_normalized"]
    }

    fn fields(&self) -> Vec<Field> {
        vec![Field::Num(self.x), Field::Num(self.y), Field::Num(self.gain)]
    }
}

/// Normalized beam pattern of a proposed design on the reference placement,
/// sampled every `step` metres over the configured region.
pub fn beam_pattern(cfg: &ExperimentConfig, case: Case, step: f64) -> Result<PatternGrid<f64>> {
    let (bob, willie) = (cfg.reference_bob(), cfg.reference_willie());
    let scheme = match case {
        Case::Swsp => Scheme::Swsp,
        Case::Mwmp => Scheme::Mwmp,
    };
    let sol = solve_scheme(cfg, scheme, bob, willie, cfg.seed)?;
    let sc = match case {
        Case::Swsp => cfg.swsp_scenario(bob, willie)?,
        Case::Mwmp => cfg.mwmp_scenario(bob, willie)?,
    };
    let layout = PinchLayout::new(sol.x_init, &sc.geometry)?;
    // the pattern shape does not depend on power; zero-power solutions still have one
    let beam = BeamVector::new(sol.weights, 1.0)?;
    let grid = GridSpec {
        x_min: cfg.region_x_min,
        x_max: cfg.region_x_max,
        y_min: cfg.region_y_min,
        y_max: cfg.region_y_max,
        step,
    };
    beam_pattern_grid(&layout, &beam, &grid, &sc.geometry, &sc.constants, true)
}

/// Grid cells in row-major order (y outer).
pub fn pattern_cells(grid: &PatternGrid<f64>) -> Vec<PatternCell> {
    grid.ys
        .iter()
        .zip(&grid.values)
        .flat_map(|(&y, row)| {
            grid.xs
                .iter()
                .zip(row)
                .map(move |(&x, &gain)| PatternCell { x, y, gain })
        })
        .collect()
}
