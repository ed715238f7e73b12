//! Independent reference computations used by the integration tests. Nothing
//! here calls into the crate's physics; inputs are plain numbers.

#![allow(dead_code)]

use num_complex::Complex64;
use pass_covert::channel::{derive_constants, PassGeometry, Vec3};
use pass_covert::detection::{CovertnessSpec, NoiseUncertainty, WillieUncertainty};
use pass_covert::Scenario;

pub const C: f64 = 2.998e8;

/// Carrier constants from first principles: (lambda, k_free, k_guided, eta).
pub fn raw_constants(f: f64, n_eff: f64) -> (f64, f64, f64, f64) {
    let lambda = C / f;
    let k = 2.0 * std::f64::consts::PI / lambda;
    (
        lambda,
        k,
        k * n_eff,
        lambda * lambda / (16.0 * std::f64::consts::PI * std::f64::consts::PI),
    )
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Piecewise total error rate with explicit case analysis on the threshold.
pub fn five_branch_error(gamma: f64, s: f64, nominal: f64, bound: f64) -> f64 {
    let two_ln = 2.0 * bound.ln();
    let lo = nominal / bound;
    let hi = bound * nominal;
    if gamma < lo {
        1.0
    } else if gamma < lo + s {
        (bound * nominal / gamma).ln() / two_ln
    } else if gamma < hi {
        (bound * bound * (1.0 - s / gamma)).ln() / two_ln
    } else if gamma < hi + s {
        (bound * (gamma - s) / nominal).ln() / two_ln
    } else {
        1.0
    }
}

/// Dense-matrix effective channel: the NM-vector of free-space coefficients
/// conjugated, times the NM x N block-diagonal in-waveguide matrix.
pub fn dense_effective_channel(xs: &[Vec<f64>], ys: &[f64], h: f64, r: [f64; 3], f: f64, n_eff: f64) -> Vec<Complex64> {
    let (_, k, kg, eta) = raw_constants(f, n_eff);
    let n = xs.len();
    let m = xs[0].len();
    let mut hvec = Vec::with_capacity(n * m);
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n * m];
    for (wi, col) in xs.iter().enumerate() {
        for (mi, &x) in col.iter().enumerate() {
            let d = dist([x, ys[wi], h], r);
            hvec.push(eta.sqrt() / d * Complex64::from_polar(1.0, -k * d));
            g[wi * m + mi][wi] = Complex64::from_polar(1.0, -kg * x) / (m as f64).sqrt();
        }
    }
    (0..n)
        .map(|col| (0..n * m).map(|row| hvec[row].conj() * g[row][col]).sum())
        .collect()
}

pub fn bilinear(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Points of a disk: the centre plus `rings` concentric rings of `spokes`
/// points each, outermost ring on the boundary.
pub fn dense_disk(cx: f64, cy: f64, radius: f64, rings: usize, spokes: usize) -> Vec<[f64; 3]> {
    let mut pts = vec![[cx, cy, 0.0]];
    for i in 1..=rings {
        let rr = radius * i as f64 / rings as f64;
        for j in 0..spokes {
            let a = 2.0 * std::f64::consts::PI * j as f64 / spokes as f64;
            pts.push([cx + rr * a.cos(), cy + rr * a.sin(), 0.0]);
        }
    }
    pts
}

/// Defaults of the reference setup, in SI units.
pub struct Setup {
    pub f: f64,
    pub n_eff: f64,
    pub h: f64,
    pub l: f64,
    pub p_max: f64,
    pub bob_noise: f64,
    pub nominal: f64,
    pub bound: f64,
    pub rho: f64,
    pub radius: f64,
}

impl Default for Setup {
    fn default() -> Self {
        Self {
            f: 28e9,
            n_eff: 1.4,
            h: 3.0,
            l: 25.0,
            p_max: 1.0,
            bob_noise: 1e-13,
            nominal: 1e-10,
            bound: 10f64.powf(0.2),
            rho: 0.1,
            radius: 0.5,
        }
    }
}

impl Setup {
    /// Warden budget `(s/D)(D^(2 rho) - 1)` evaluated directly.
    pub fn budget(&self) -> f64 {
        self.nominal / self.bound * (self.bound.powf(2.0 * self.rho) - 1.0)
    }

    pub fn scenario(&self, geom: PassGeometry<f64>, bob: (f64, f64), willie: (f64, f64)) -> Scenario<f64> {
        let nu = NoiseUncertainty::new(self.nominal, self.bound).unwrap();
        Scenario::new(
            derive_constants(self.f, self.n_eff).unwrap(),
            geom,
            Vec3::ground(bob.0, bob.1),
            self.bob_noise,
            WillieUncertainty::new(Vec3::ground(willie.0, willie.1), self.radius).unwrap(),
            nu,
            CovertnessSpec::new(self.rho, &nu).unwrap(),
            self.p_max,
            1,
        )
        .unwrap()
    }

    pub fn single(&self, bob: (f64, f64), willie: (f64, f64)) -> Scenario<f64> {
        self.scenario(PassGeometry::single(self.h, self.l).unwrap(), bob, willie)
    }

    /// Largest single-PA power at `x` keeping every disk point within budget,
    /// capped at `p_max`.
    pub fn single_pa_power_cap(&self, x: f64, willie: (f64, f64)) -> f64 {
        let (_, _, _, eta) = raw_constants(self.f, self.n_eff);
        let ground = ((x - willie.0).powi(2) + willie.1.powi(2)).sqrt();
        let nearest = (ground - self.radius).max(0.0);
        let d2 = nearest * nearest + self.h * self.h;
        (self.budget() * d2 / eta).min(self.p_max)
    }

    /// Single-PA rate at `x` with power `p`.
    pub fn single_pa_rate(&self, x: f64, p: f64, bob: (f64, f64)) -> f64 {
        let (_, _, _, eta) = raw_constants(self.f, self.n_eff);
        let d2 = (x - bob.0).powi(2) + bob.1.powi(2) + self.h * self.h;
        (1.0 + p * eta / d2 / self.bob_noise).log2()
    }
}

/// Minimum of a function sampled on `n` evenly spaced points of `[lo, hi]`.
pub fn grid_min(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    (0..n)
        .map(|i| f(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .fold(f64::INFINITY, f64::min)
}

/// Fraction of the sorted sample at or above `level`.
pub fn frac_at_least(sorted: &[f64], level: f64) -> f64 {
    let idx = sorted.partition_point(|&v| v < level);
    (sorted.len() - idx) as f64 / sorted.len() as f64
}

/// Fraction of the sorted sample at or below `level`.
pub fn frac_at_most(sorted: &[f64], level: f64) -> f64 {
    sorted.partition_point(|&v| v <= level) as f64 / sorted.len() as f64
}

/// Exhaustive search for two single-PA waveguides: `pos` start positions per
/// waveguide and a `mags x phases` grid of unit weights `(cos a, sin a e^{j phi})`.
/// Returns the best covert rate.
#[allow(clippy::too_many_arguments)]
pub fn two_waveguide_grid_best(
    setup: &Setup,
    ys: [f64; 2],
    bob: (f64, f64),
    samples: &[[f64; 3]],
    upper: f64,
    pos: usize,
    mags: usize,
    phases: usize,
) -> f64 {
    let xs: Vec<f64> = (0..pos).map(|i| upper * i as f64 / (pos - 1) as f64).collect();
    let weights: Vec<[Complex64; 2]> = (0..mags)
        .flat_map(|i| {
            let a = std::f64::consts::FRAC_PI_2 * i as f64 / (mags - 1) as f64;
            (0..phases).map(move |j| {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / phases as f64;
                [Complex64::new(a.cos(), 0.0), Complex64::from_polar(a.sin(), phi)]
            })
        })
        .collect();
    let budget = setup.budget();
    let mut best = 0.0f64;
    for &x1 in &xs {
        for &x2 in &xs {
            let layout = vec![vec![x1], vec![x2]];
            let row = |r: [f64; 3]| dense_effective_channel(&layout, &ys, setup.h, r, setup.f, setup.n_eff);
            let hb = row([bob.0, bob.1, 0.0]);
            let hw: Vec<Vec<Complex64>> = samples.iter().map(|&s| row(s)).collect();
            for w in &weights {
                let gb = bilinear(&hb, w).norm_sqr();
                let gw = hw.iter().map(|h| bilinear(h, w).norm_sqr()).fold(0.0, f64::max);
                let p = if gw > 0.0 {
                    (budget / gw).min(setup.p_max)
                } else {
                    setup.p_max
                };
                best = best.max((1.0 + p * gb / setup.bob_noise).log2());
            }
        }
    }
    best
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Standard error of the mean.
pub fn std_err(v: &[f64]) -> f64 {
    let m = mean(v);
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0);
    (var / v.len() as f64).sqrt()
}
