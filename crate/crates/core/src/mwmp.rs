//! Multiple waveguides, multiple PAs: joint transmit and pinching
//! beamforming with two coupled particle swarms.
//!
//! Position-seeking (PS) particles search the normalized first-PA
//! coordinates `[0, 1]^N`; beamforming-seeking (BS) particles search unit-norm
//! complex weights. Each swarm is evaluated against the other's current global
//! best, and the transmit power follows in closed form from the worst sampled
//! warden gain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{effective_channel, BeamVector, PassGeometry, PhysConstants, PinchLayout, Vec3};
use crate::detection::{max_gain_over, worst_case_gain};
use crate::error::{invalid, Result};
use crate::num::{dot, norm, rate, Cx, Real};
use crate::scenario::Scenario;

/// TwinPSO hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PsoParams {
    /// BS population `I`.
    pub bs_population: usize,
    /// PS population `J`.
    pub ps_population: usize,
    pub bs_inertia: f64,
    pub ps_inertia: f64,
    pub bs_cognitive: f64,
    pub bs_social: f64,
    pub ps_cognitive: f64,
    pub ps_social: f64,
    /// Iteration count `T`.
    pub iterations: usize,
    /// Componentwise velocity cap.
    pub v_max: f64,
    pub seed: u64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            bs_population: 30,
            ps_population: 30,
            bs_inertia: 0.8,
            ps_inertia: 0.8,
            bs_cognitive: 2.0,
            bs_social: 2.0,
            ps_cognitive: 2.0,
            ps_social: 2.0,
            iterations: 100,
            v_max: 0.3,
            seed: 0,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        if self.bs_population == 0 || self.ps_population == 0 || self.iterations == 0 {
            return Err(invalid("swarm populations and iteration count must be >= 1"));
        }
        if !(self.v_max > 0.0) || !self.v_max.is_finite() {
            return Err(invalid(format!("velocity cap must be positive, got {}", self.v_max)));
        }
        let weights = [
            self.bs_inertia,
            self.ps_inertia,
            self.bs_cognitive,
            self.bs_social,
            self.ps_cognitive,
            self.ps_social,
        ];
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(invalid("swarm weights must be finite"));
        }
        Ok(())
    }
}

/// A particle with coordinates of type `E` (real for PS, complex for BS).
#[derive(Debug, Clone, PartialEq)]
pub struct Particle<E, T> {
    pub position: Vec<E>,
    pub velocity: Vec<E>,
    pub best_position: Vec<E>,
    pub best_score: T,
}

impl<E: Clone, T: Real> Particle<E, T> {
    fn at(position: Vec<E>, zero: E) -> Self {
        let n = position.len();
        Self {
            best_position: position.clone(),
            velocity: vec![zero; n],
            position,
            best_score: T::neg_infinity(),
        }
    }
}

/// `min{budget / g_max, p_max}`; an exact null at every sample leaves the
/// budget as the only limit.
pub fn power_for_gain<T: Real>(g_max: T, budget: T, p_max: T) -> T {
    if g_max > T::zero() {
        (budget / g_max).min(p_max)
    } else {
        p_max
    }
}

/// Largest power keeping the worst sampled warden gain within `budget`.
pub fn optimal_power<T: Real>(
    layout: &PinchLayout<T>,
    w: &BeamVector<T>,
    samples: &[Vec3<T>],
    budget: T,
    p_max: T,
    geom: &PassGeometry<T>,
    pc: &PhysConstants<T>,
) -> Result<T> {
    if !(budget >= T::zero()) {
        return Err(invalid(format!("beam-gain budget must be >= 0, got {budget}")));
    }
    let g = worst_case_gain(layout, w, samples, geom, pc)?;
    Ok(power_for_gain(g, budget, p_max))
}

/// Projects a PS coordinate vector onto `[0, 1]^N`.
pub fn clamp_ps<T: Real>(position: &[T]) -> Vec<T> {
    position.iter().map(|&p| p.max(T::zero()).min(T::one())).collect()
}

/// Scales a BS position to unit norm; `None` for a zero or non-finite vector.
pub fn normalize_bs<T: Real>(position: &[Cx<T>]) -> Option<Vec<Cx<T>>> {
    let n = norm(position);
    if n > T::zero() && n.is_finite() {
        Some(position.iter().map(|z| z / n).collect())
    } else {
        None
    }
}

/// Start coordinates in metres for a normalized PS position.
pub fn start_positions<T: Real>(ps: &[T], geom: &PassGeometry<T>) -> Vec<T> {
    let upper = geom.max_start();
    ps.iter().map(|&p| upper * p).collect()
}

/// Transmit power and rate of a candidate `(layout, unit weights)`.
fn evaluate<T: Real>(sc: &Scenario<T>, samples: &[Vec3<T>], layout: &PinchLayout<T>, unit: &[Cx<T>]) -> (T, T) {
    let geom = &sc.geometry;
    let pc = &sc.constants;
    let snr_unit = dot(&effective_channel(layout, &sc.bob, geom, pc), unit).norm_sqr() / sc.bob_noise;
    let g_max =
        max_gain_over(unit, samples, |r| effective_channel(layout, r, geom, pc)).expect("sample set is non-empty");
    let power = power_for_gain(g_max, sc.budget(), sc.p_max);
    (power, rate(power * snr_unit))
}

/// Fitness of a PS/BS pair: the covert rate with the power set by the worst
/// sampled warden gain. Inputs must already be clamped and normalized.
pub fn fitness<T: Real>(ps: &[T], bs: &[Cx<T>], sc: &Scenario<T>, samples: &[Vec3<T>]) -> T {
    let layout = PinchLayout::new(start_positions(ps, &sc.geometry), &sc.geometry)
        .expect("clamped PS position maps into the admissible range");
    evaluate(sc, samples, &layout, bs).1
}

/// Both swarms plus their global bests and the best pair evaluated so far.
#[derive(Debug, Clone)]
pub struct TwinSwarm<T: Real> {
    pub ps: Vec<Particle<T, T>>,
    pub bs: Vec<Particle<Cx<T>, T>>,
    pub ps_global: Vec<T>,
    pub ps_global_score: T,
    pub bs_global: Vec<Cx<T>>,
    pub bs_global_score: T,
    /// Best `(score, ps, bs)` pair ever evaluated.
    pub elite: (T, Vec<T>, Vec<Cx<T>>),
    rng: ChaCha8Rng,
}

fn uniform_unit<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    (0..n).map(|_| T::lit(rng.random::<f64>())).collect()
}

fn random_direction<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> Vec<Cx<T>> {
    loop {
        let raw: Vec<Cx<T>> = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Cx::new(T::lit(re), T::lit(im))
            })
            .collect();
        if let Some(v) = normalize_bs(&raw) {
            return v;
        }
    }
}

impl<T: Real> TwinSwarm<T> {
    /// Seeded random initialization: PS positions uniform on `[0, 1]^N`, BS
    /// positions Gaussian then normalized, zero velocities, all scores `-inf`.
    pub fn new(n: usize, params: &PsoParams) -> Result<Self> {
        params.validate()?;
        if n == 0 {
            return Err(invalid("at least one waveguide is required"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let ps = (0..params.ps_population)
            .map(|_| Particle::at(uniform_unit(&mut rng, n), T::zero()))
            .collect();
        let bs = (0..params.bs_population)
            .map(|_| Particle::at(random_direction(&mut rng, n), Cx::new(T::zero(), T::zero())))
            .collect();
        let ps_global = uniform_unit(&mut rng, n);
        let bs_global = random_direction(&mut rng, n);
        Ok(Self {
            ps,
            bs,
            elite: (T::neg_infinity(), ps_global.clone(), bs_global.clone()),
            ps_global,
            ps_global_score: T::neg_infinity(),
            bs_global,
            bs_global_score: T::neg_infinity(),
            rng,
        })
    }

    /// Best score over any pair evaluated so far.
    pub fn best_score(&self) -> T {
        self.elite.0
    }

    fn offer(&mut self, score: T, ps: &[T], bs: &[Cx<T>]) {
        if score > self.elite.0 {
            self.elite = (score, ps.to_vec(), bs.to_vec());
        }
    }

    /// One iteration: position half-step against the fixed BS global best,
    /// then beamforming half-step against the fixed PS global best.
    pub fn step(&mut self, sc: &Scenario<T>, samples: &[Vec3<T>], params: &PsoParams) {
        let v_max = T::lit(params.v_max);

        let w = normalize_bs(&self.bs_global).unwrap_or_else(|| self.bs_global.clone());
        for j in 0..self.ps.len() {
            let pos = clamp_ps(&self.ps[j].position);
            let score = fitness(&pos, &w, sc, samples);
            let p = &mut self.ps[j];
            p.position = pos;
            if score > p.best_score {
                p.best_score = score;
                p.best_position = p.position.clone();
            }
            let pos = self.ps[j].position.clone();
            self.offer(score, &pos, &w);
        }
        if let Some(best) = argmax(self.ps.iter().map(|p| p.best_score)) {
            self.ps_global = self.ps[best].best_position.clone();
            self.ps_global_score = self.ps[best].best_score;
        }
        let (w_in, c1, c2) = (
            T::lit(params.ps_inertia),
            T::lit(params.ps_cognitive),
            T::lit(params.ps_social),
        );
        for p in &mut self.ps {
            for d in 0..p.position.len() {
                let t1 = T::lit(self.rng.random::<f64>());
                let t2 = T::lit(self.rng.random::<f64>());
                let x = p.position[d];
                let v = w_in * p.velocity[d] + c1 * t1 * (p.best_position[d] - x) + c2 * t2 * (self.ps_global[d] - x);
                p.velocity[d] = v.max(-v_max).min(v_max);
                p.position[d] = x + p.velocity[d];
            }
            p.position = clamp_ps(&p.position);
        }

        let x_init = self.ps_global.clone();
        for i in 0..self.bs.len() {
            let pos = match normalize_bs(&self.bs[i].position) {
                Some(v) => v,
                None => random_direction(&mut self.rng, x_init.len()),
            };
            let score = fitness(&x_init, &pos, sc, samples);
            let p = &mut self.bs[i];
            p.position = pos;
            if score > p.best_score {
                p.best_score = score;
                p.best_position = p.position.clone();
            }
            let pos = self.bs[i].position.clone();
            self.offer(score, &x_init, &pos);
        }
        if let Some(best) = argmax(self.bs.iter().map(|p| p.best_score)) {
            self.bs_global = self.bs[best].best_position.clone();
            self.bs_global_score = self.bs[best].best_score;
        }
        let (w_in, c1, c2) = (
            T::lit(params.bs_inertia),
            T::lit(params.bs_cognitive),
            T::lit(params.bs_social),
        );
        let clamp = |v: T| v.max(-v_max).min(v_max);
        for i in 0..self.bs.len() {
            let n = self.bs[i].position.len();
            for d in 0..n {
                let t1 = T::lit(self.rng.random::<f64>());
                let t2 = T::lit(self.rng.random::<f64>());
                let p = &mut self.bs[i];
                let x = p.position[d];
                let v =
                    p.velocity[d] * w_in + (p.best_position[d] - x) * (c1 * t1) + (self.bs_global[d] - x) * (c2 * t2);
                p.velocity[d] = Cx::new(clamp(v.re), clamp(v.im));
                p.position[d] = x + p.velocity[d];
            }
            let next = match normalize_bs(&self.bs[i].position) {
                Some(v) => v,
                None => random_direction(&mut self.rng, n),
            };
            self.bs[i].position = next;
        }
    }
}

fn argmax<T: Real>(scores: impl Iterator<Item = T>) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (i, s) in scores.enumerate() {
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwmpSolution<T> {
    /// Unit-norm weights carrying the chosen transmit power.
    pub beam: BeamVector<T>,
    /// First-PA coordinate on each waveguide, in metres.
    pub x_init: Vec<T>,
    pub power: T,
    /// bits/s/Hz
    pub rate: T,
    /// Best fitness after each iteration.
    pub trace: Vec<T>,
}

impl<T: Real> MwmpSolution<T> {
    pub fn layout(&self, geom: &PassGeometry<T>) -> Result<PinchLayout<T>> {
        PinchLayout::new(self.x_init.clone(), geom)
    }
}

/// Runs TwinPSO for `params.iterations` iterations from a seeded start.
///
/// The returned configuration is the best PS/BS pair evaluated during the run,
/// so its rate equals the last trace entry.
pub fn solve<T: Real>(sc: &Scenario<T>, params: &PsoParams) -> Result<MwmpSolution<T>> {
    let samples = sc.samples();
    let mut swarm = TwinSwarm::new(sc.geometry.num_waveguides(), params)?;
    let mut trace = Vec::with_capacity(params.iterations);
    for _ in 0..params.iterations {
        swarm.step(sc, &samples, params);
        trace.push(swarm.best_score());
    }
    let (_, ps, bs) = swarm.elite;
    let layout = PinchLayout::new(start_positions(&ps, &sc.geometry), &sc.geometry)?;
    let (power, rate) = evaluate(sc, &samples, &layout, &bs);
    Ok(MwmpSolution {
        beam: BeamVector::new(bs, power)?,
        x_init: layout.x_init().to_vec(),
        power,
        rate,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamp_examples() {
        assert_eq!(clamp_ps(&[1.7, -0.2, 0.4]), vec![1.0, 0.0, 0.4]);
    }

    #[test]
    fn normalize_examples() {
        let v: Vec<Cx<f64>> = vec![Cx::new(3.0, 0.0), Cx::new(0.0, 4.0)];
        let u = normalize_bs(&v).unwrap();
        assert!((norm(&u) - 1.0).abs() < 1e-12);
        let twice: Vec<_> = v.iter().map(|z| z * 2.0).collect();
        assert_eq!(normalize_bs(&twice).unwrap(), u);
        assert_eq!(normalize_bs(&u).unwrap(), u);
        assert!(normalize_bs(&[Cx::new(0.0f64, 0.0)]).is_none());
    }

    #[test]
    fn power_branches() {
        assert_eq!(power_for_gain(2.0, 0.0, 1.0), 0.0);
        assert_eq!(power_for_gain(1e-12, 1.0, 1.0), 1.0);
        assert_eq!(power_for_gain(0.0, 1e-12, 1.0), 1.0);
        assert_eq!(power_for_gain(4.0, 2.0, 1.0), 0.5);
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = PsoParams {
            iterations: 0,
            ..PsoParams::default()
        };
        assert!(p.validate().is_err());
        let p = PsoParams {
            v_max: 0.0,
            ..PsoParams::default()
        };
        assert!(TwinSwarm::<f64>::new(2, &p).is_err());
    }

    #[test]
    fn argmax_takes_first_of_ties() {
        assert_eq!(argmax([1.0, 3.0, 3.0, 2.0].into_iter()), Some(1));
        assert_eq!(argmax(std::iter::empty::<f64>()), None);
    }
}
