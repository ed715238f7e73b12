//! Warden-side detection statistics.
//!
//! The warden compares its average received power against a threshold. Its
//! own noise power is only known to lie in `[s/D, D s]` with a log-uniform
//! law (uniform in dB), where `s` is the nominal power and `D > 1` the
//! uncertainty bound. False alarm and missed detection are tail probabilities
//! of that law, and their sum is the total error rate.

use crate::channel::{effective_channel, received_power, BeamVector, PassGeometry, PhysConstants, PinchLayout, Vec3};
use crate::error::{invalid, Result};
use crate::num::{dot, Cx, Real};

/// Bounded log-uniform noise-power uncertainty at the warden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseUncertainty<T> {
    nominal: T,
    bound: T,
}

impl<T: Real> NoiseUncertainty<T> {
    pub fn new(nominal: T, bound: T) -> Result<Self> {
        if !(nominal > T::zero()) || !nominal.is_finite() {
            return Err(invalid(format!("nominal noise power must be positive, got {nominal}")));
        }
        if !(bound > T::one()) || !bound.is_finite() {
            return Err(invalid(format!("noise uncertainty bound must exceed 1, got {bound}")));
        }
        Ok(Self { nominal, bound })
    }

    pub fn nominal(&self) -> T {
        self.nominal
    }

    pub fn bound(&self) -> T {
        self.bound
    }

    /// Support `[s/D, D s]` of the noise power.
    pub fn support(&self) -> (T, T) {
        (self.nominal / self.bound, self.nominal * self.bound)
    }

    fn two_ln_bound(&self) -> T {
        (self.bound.ln()) * T::lit(2.0)
    }

    /// `P{noise >= level}`.
    pub fn upper_tail(&self, level: T) -> T {
        let (lo, hi) = self.support();
        if level <= lo {
            T::one()
        } else if level >= hi {
            T::zero()
        } else {
            (hi / level).ln() / self.two_ln_bound()
        }
    }

    /// `P{noise <= level}`.
    pub fn lower_tail(&self, level: T) -> T {
        let (lo, hi) = self.support();
        if level <= lo {
            T::zero()
        } else if level >= hi {
            T::one()
        } else {
            (level / lo).ln() / self.two_ln_bound()
        }
    }
}

/// Density of the warden's noise power at `v`.
pub fn noise_pdf<T: Real>(v: T, nu: &NoiseUncertainty<T>) -> Result<T> {
    if !(v > T::zero()) {
        return Err(invalid(format!("noise power must be positive, got {v}")));
    }
    let (lo, hi) = nu.support();
    if v < lo || v > hi {
        return Ok(T::zero());
    }
    Ok((nu.two_ln_bound() * v).recip())
}

/// False-alarm probability: the noise alone crosses the threshold.
pub fn false_alarm<T: Real>(threshold: T, nu: &NoiseUncertainty<T>) -> T {
    nu.upper_tail(threshold)
}

/// Missed-detection probability: signal power `signal` plus noise stays below
/// the threshold.
pub fn miss_detection<T: Real>(threshold: T, signal: T, nu: &NoiseUncertainty<T>) -> T {
    nu.lower_tail(threshold - signal)
}

/// Total error rate `P_F + P_M` for threshold `threshold` and covert signal
/// power `signal` received at the warden.
pub fn total_error_rate<T: Real>(threshold: T, signal: T, nu: &NoiseUncertainty<T>) -> T {
    false_alarm(threshold, nu) + miss_detection(threshold, signal, nu)
}

/// Warden's best threshold and the error rate it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalDetection<T> {
    pub threshold: T,
    pub min_error: T,
}

/// Minimizes [`total_error_rate`] over the threshold in closed form.
///
/// The closed form goes negative once `signal >= s (D - 1/D)`; a threshold
/// with zero error exists there, so the result is clamped at zero.
pub fn optimal_detection<T: Real>(signal: T, nu: &NoiseUncertainty<T>) -> OptimalDetection<T> {
    let s = nu.nominal;
    let d = nu.bound;
    let threshold = s / d + signal;
    let raw = (d * d * s / (s + signal * d)).ln() / nu.two_ln_bound();
    OptimalDetection {
        threshold,
        min_error: raw.max(T::zero()).min(T::one()),
    }
}

/// Covertness target `xi >= 1 - rho` and the beam-gain budget it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovertnessSpec<T> {
    rho: T,
    budget: T,
}

impl<T: Real> CovertnessSpec<T> {
    pub fn new(rho: T, nu: &NoiseUncertainty<T>) -> Result<Self> {
        if !(rho >= T::zero() && rho <= T::one()) {
            return Err(invalid(format!("covertness parameter must lie in [0, 1], got {rho}")));
        }
        Ok(Self {
            rho,
            budget: covert_gain_budget(rho, nu),
        })
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    /// Target total error rate `1 - rho`.
    pub fn target_error(&self) -> T {
        T::one() - self.rho
    }

    /// Maximum received power at the warden, `Gamma_w`.
    pub fn budget(&self) -> T {
        self.budget
    }
}

/// `Gamma_w = (s / D) (D^(2 rho) - 1)`: the largest warden-side signal power
/// for which the minimal total error rate still reaches `1 - rho`.
pub fn covert_gain_budget<T: Real>(rho: T, nu: &NoiseUncertainty<T>) -> T {
    // exp_m1 keeps precision for small rho
    nu.nominal / nu.bound * (T::lit(2.0) * rho * nu.bound.ln()).exp_m1()
}

/// Nominal warden position and the radius of its position error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WillieUncertainty<T> {
    pub center: Vec3<T>,
    pub radius: T,
}

impl<T: Real> WillieUncertainty<T> {
    pub fn new(center: Vec3<T>, radius: T) -> Result<Self> {
        if !(radius >= T::zero()) {
            return Err(invalid(format!(
                "position uncertainty radius must be >= 0, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }
}

/// Axis-cross sampling of the warden's uncertainty disk: the centre plus
/// `center ± (k r / K) e_x` and `center ± (k r / K) e_y` for `k = 1..=K`,
/// `4K + 1` points in all.
pub fn sample_region<T: Real>(wu: &WillieUncertainty<T>, k: usize) -> Result<Vec<Vec3<T>>> {
    if k == 0 {
        return Err(invalid("sample count per direction must be >= 1"));
    }
    let c = Vec3::ground(wu.center.x, wu.center.y);
    let mut out = Vec::with_capacity(4 * k + 1);
    out.push(c);
    for i in 1..=k {
        let off = wu.radius * T::count(i) / T::count(k);
        out.push(Vec3::ground(c.x + off, c.y));
        out.push(Vec3::ground(c.x - off, c.y));
        out.push(Vec3::ground(c.x, c.y + off));
        out.push(Vec3::ground(c.x, c.y - off));
    }
    Ok(out)
}

/// Beam gain `|a · w|^2` received at the warden position `r_w`.
pub fn willie_gain<T: Real>(
    layout: &PinchLayout<T>,
    w: &BeamVector<T>,
    r_w: &Vec3<T>,
    geom: &PassGeometry<T>,
    pc: &PhysConstants<T>,
) -> T {
    received_power(&effective_channel(layout, r_w, geom, pc), w)
}

/// Largest unit-power gain of the direction `unit` over `samples`, for any
/// transmitter whose row channel at a point is given by `channel`.
pub fn max_gain_over<T, F>(unit: &[Cx<T>], samples: &[Vec3<T>], channel: F) -> Result<T>
where
    T: Real,
    F: Fn(&Vec3<T>) -> Vec<Cx<T>>,
{
    if samples.is_empty() {
        return Err(invalid("warden sample set is empty"));
    }
    Ok(samples
        .iter()
        .map(|r| dot(&channel(r), unit).norm_sqr())
        .fold(T::zero(), |a, b| a.max(b)))
}

/// Worst-case unit-power beam gain over the warden sample set; the power
/// carried by `w` is ignored.
pub fn worst_case_gain<T: Real>(
    layout: &PinchLayout<T>,
    w: &BeamVector<T>,
    samples: &[Vec3<T>],
    geom: &PassGeometry<T>,
    pc: &PhysConstants<T>,
) -> Result<T> {
    max_gain_over(w.unit(), samples, |r| effective_channel(layout, r, geom, pc))
}
