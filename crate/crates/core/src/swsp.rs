//! Single waveguide, single PA.
//!
//! For a fixed transmit power the covertness constraint over the warden's
//! uncertainty disk excludes one interval of PA positions (the forbidden
//! zone). The best position is then the admissible point closest to the
//! receiver, and a linear scan over power finishes the job.

use crate::channel::{inwg_phase, los_coeff, Vec3};
use crate::error::{invalid, Error, Result};
use crate::num::{rate, Real};
use crate::scenario::Scenario;

/// PA positions from which some warden position in the disk would detect the
/// transmission too reliably.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForbiddenZone<T> {
    /// `[x-, x+]`, or `None` when every position is admissible.
    pub interval: Option<(T, T)>,
    /// Minimum PA-to-warden distance that keeps the target error rate.
    pub d_bou: T,
    /// Ground-projected exclusion radius inflated by the position error.
    pub d_tot: T,
    /// Half-angle subtended by the zone, `acos(|y_w| / d_tot)`.
    pub theta: T,
}

impl<T: Real> ForbiddenZone<T> {
    pub fn is_empty(&self) -> bool {
        self.interval.is_none()
    }

    /// True when `x` lies strictly inside the zone. Boundary points meet the
    /// target with equality and are admissible.
    pub fn excludes(&self, x: T) -> bool {
        matches!(self.interval, Some((lo, hi)) if x > lo && x < hi)
    }
}

/// Forbidden zone at transmit power `power`, centred on the nominal warden
/// abscissa.
pub fn forbidden_zone<T: Real>(power: T, sc: &Scenario<T>) -> Result<ForbiddenZone<T>> {
    if !(power >= T::zero()) {
        return Err(invalid(format!("transmit power must be >= 0, got {power}")));
    }
    let budget = sc.budget();
    let none = ForbiddenZone {
        interval: None,
        d_bou: T::zero(),
        d_tot: sc.willie.radius,
        theta: T::zero(),
    };
    if budget <= T::zero() {
        if power > T::zero() {
            return Err(Error::InfeasibleCovertness(
                "zero covertness slack admits no positive transmit power".into(),
            ));
        }
        return Ok(none);
    }
    let h = sc.geometry.height;
    let d_bou = (power * sc.constants.eta / budget).sqrt();
    let projected = (d_bou * d_bou - h * h).max(T::zero()).sqrt();
    let d_tot = projected + sc.willie.radius;
    let y_w = sc.willie.center.y.abs();
    if d_bou <= h || y_w >= d_tot {
        return Ok(ForbiddenZone { d_bou, d_tot, ..none });
    }
    let theta = (y_w / d_tot).acos();
    let half = d_tot * theta.sin();
    let x_w = sc.willie.center.x;
    Ok(ForbiddenZone {
        interval: Some((x_w - half, x_w + half)),
        d_bou,
        d_tot,
        theta,
    })
}

/// Admissible PA position closest to the receiver at power `power`, or
/// `None` if the zone swallows the whole waveguide.
pub fn optimal_position<T: Real>(power: T, sc: &Scenario<T>) -> Result<Option<T>> {
    let zone = forbidden_zone(power, sc)?;
    let len = sc.geometry.length;
    let segments: Vec<(T, T)> = match zone.interval {
        None => vec![(T::zero(), len)],
        Some((lo, hi)) => {
            if lo <= T::zero() && hi >= len {
                return Ok(None);
            }
            let mut s = Vec::with_capacity(2);
            if lo > T::zero() {
                s.push((T::zero(), lo.min(len)));
            }
            if hi < len {
                s.push((hi.max(T::zero()), len));
            }
            s
        }
    };
    let x_b = sc.bob.x;
    let mut best: Option<T> = None;
    for &(lo, hi) in &segments {
        let c = x_b.max(lo).min(hi);
        best = match best {
            Some(b) => {
                let (db, dc) = ((b - x_b).abs(), (c - x_b).abs());
                // equidistant boundary points resolve toward smaller x
                if dc < db || (dc == db && c < b) {
                    Some(c)
                } else {
                    Some(b)
                }
            }
            None => Some(c),
        };
    }
    Ok(best)
}

/// Receiver SNR with the PA at `x` and transmit power `power`.
pub fn snr_at<T: Real>(x: T, power: T, sc: &Scenario<T>) -> T {
    let p = Vec3::new(x, T::zero(), sc.geometry.height);
    let h_b = los_coeff(&p, &sc.bob, &sc.constants).expect("PA sits above the ground plane");
    power * (h_b * inwg_phase(x, &sc.constants)).norm_sqr() / sc.bob_noise
}

/// Covert rate with the PA at `x` and transmit power `power`.
pub fn rate_at<T: Real>(x: T, power: T, sc: &Scenario<T>) -> T {
    rate(snr_at(x, power, sc))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwspSolution<T> {
    pub power: T,
    pub position: T,
    /// bits/s/Hz
    pub rate: T,
    pub feasible: bool,
}

/// One visited power level of the linear search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStep<T> {
    pub power: T,
    /// Rate at this power, or `None` if no position was admissible.
    pub rate: Option<T>,
    /// Best rate found so far.
    pub best_rate: T,
}

/// Linear power search with closed-form positioning.
pub fn solve<T: Real>(sc: &Scenario<T>, power_step: T) -> Result<SwspSolution<T>> {
    solve_traced(sc, power_step).map(|(s, _)| s)
}

/// As [`solve`], also returning every visited power level.
///
/// Powers `dP, 2 dP, ...` up to the budget are visited. Zones grow with power,
/// so the scan stops at the first power with no admissible position.
pub fn solve_traced<T: Real>(sc: &Scenario<T>, power_step: T) -> Result<(SwspSolution<T>, Vec<SearchStep<T>>)> {
    if !(power_step > T::zero()) {
        return Err(invalid(format!("power step must be positive, got {power_step}")));
    }
    let mut best = SwspSolution {
        power: T::zero(),
        position: T::zero(),
        rate: T::zero(),
        feasible: false,
    };
    let mut trace = Vec::new();
    if sc.budget() <= T::zero() {
        return Ok((best, trace));
    }
    let steps = (sc.p_max / power_step * (T::one() + T::lit(1e-12)))
        .floor()
        .to_usize()
        .unwrap_or(0);
    for t in 1..=steps {
        let power = power_step * T::count(t);
        let Some(x) = optimal_position(power, sc)? else {
            trace.push(SearchStep {
                power,
                rate: None,
                best_rate: best.rate,
            });
            break;
        };
        let r = rate_at(x, power, sc);
        if r >= best.rate {
            best = SwspSolution {
                power,
                position: x,
                rate: r,
                feasible: true,
            };
        }
        trace.push(SearchStep {
            power,
            rate: Some(r),
            best_rate: best.rate,
        });
    }
    Ok((best, trace))
}
