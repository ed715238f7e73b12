//! Reference schemes: a fixed half-wavelength ULA and PASS with PAs parked
//! next to the receiver, each driven by zero-forcing or maximum-ratio weights.
//!
//! The ULA lies along the x-axis at the waveguide height, centred on the
//! origin. Transmit power is always the largest value that keeps the worst
//! sampled warden gain within budget.

use std::fmt;
use std::str::FromStr;

use crate::channel::{effective_channel, los_coeff, BeamVector, PassGeometry, PhysConstants, PinchLayout, Vec3};
use crate::error::{Error, Result};
use crate::mwmp::power_for_gain;
use crate::num::{dot, norm, rate, Cx, Real};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    MimoZf,
    MimoMrt,
    PassZf,
    PassMrt,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 4] = [Self::MimoZf, Self::MimoMrt, Self::PassZf, Self::PassMrt];

    pub fn name(self) -> &'static str {
        match self {
            Self::MimoZf => "mimo_zf",
            Self::MimoMrt => "mimo_mrt",
            Self::PassZf => "pass_zf",
            Self::PassMrt => "pass_mrt",
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
            Error::Config(format!("unknown benchmark '{s}'; expected one of {}", names.join(", ")))
        })
    }
}

/// Element positions of an `n`-antenna half-wavelength ULA at height `h`.
pub fn ula_elements<T: Real>(n: usize, height: T, pc: &PhysConstants<T>) -> Vec<Vec3<T>> {
    let mid = T::count(n + 1) / T::lit(2.0);
    let half = pc.wavelength / T::lit(2.0);
    (1..=n)
        .map(|i| Vec3::new((T::count(i) - mid) * half, T::zero(), height))
        .collect()
}

/// Row channel from the ULA to a ground receiver at `r`.
pub fn ula_channel<T: Real>(r: &Vec3<T>, n: usize, height: T, pc: &PhysConstants<T>) -> Result<Vec<Cx<T>>> {
    ula_elements(n, height, pc)
        .iter()
        .map(|p| los_coeff(p, r, pc))
        .collect()
}

/// Conjugate-matched unit weights for the row channel `h`.
pub fn mrt_weights<T: Real>(h: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    let n = norm(h);
    if !(n > T::zero()) || !n.is_finite() {
        return Err(Error::DegenerateChannel("receiver channel is zero".into()));
    }
    Ok(h.iter().map(|z| z.conj() / n).collect())
}

/// Conjugate match to `h_b` projected onto the null space of `h_w`, so that
/// `h_w · w = 0`.
pub fn zf_weights<T: Real>(h_b: &[Cx<T>], h_w: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    if h_b.len() != h_w.len() {
        return Err(Error::InvalidArgument("channel lengths differ".into()));
    }
    let nb = norm(h_b);
    if !(nb > T::zero()) {
        return Err(Error::DegenerateChannel("receiver channel is zero".into()));
    }
    let nw = norm(h_w);
    if !(nw > T::zero()) {
        return mrt_weights(h_b);
    }
    // the null space of the row h_w is the orthogonal complement of conj(h_w)
    let v: Vec<Cx<T>> = h_w.iter().map(|z| z.conj() / nw).collect();
    let u: Vec<Cx<T>> = h_b.iter().map(|z| z.conj()).collect();
    let coef: Cx<T> = v
        .iter()
        .zip(&u)
        .map(|(a, b)| a.conj() * b)
        .fold(Cx::new(T::zero(), T::zero()), |s, z| s + z);
    let p: Vec<Cx<T>> = u.iter().zip(&v).map(|(a, b)| a - b * coef).collect();
    let np = norm(&p);
    if !(np > T::lit(1e-12) * nb) {
        return Err(Error::NullSpaceEmpty(
            "receiver and warden channels are parallel".into(),
        ));
    }
    Ok(p.iter().map(|z| z / np).collect())
}

/// Every waveguide's PA array centred on the receiver's x-coordinate.
pub fn heuristic_pass_layout<T: Real>(r_b: &Vec3<T>, geom: &PassGeometry<T>) -> PinchLayout<T> {
    let span = geom.pa_spacing * T::count(geom.pas_per_waveguide - 1);
    let x = (r_b.x - span / T::lit(2.0)).max(T::zero()).min(geom.max_start());
    PinchLayout::new(vec![x; geom.num_waveguides()], geom).expect("clamped start is admissible")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutcome<T> {
    pub kind: BenchmarkKind,
    /// bits/s/Hz
    pub rate: T,
    pub power: T,
    /// Unit weights carrying `power`.
    pub beam: BeamVector<T>,
    /// PA layout for the PASS schemes.
    pub layout: Option<PinchLayout<T>>,
}

type RowChannel<'a, T> = Box<dyn Fn(&Vec3<T>) -> Result<Vec<Cx<T>>> + 'a>;

/// Rate of a reference scheme on `sc`.
pub fn evaluate<T: Real>(kind: BenchmarkKind, sc: &Scenario<T>) -> Result<BenchmarkOutcome<T>> {
    let geom = &sc.geometry;
    let pc = &sc.constants;
    let n = geom.num_waveguides();
    let samples = sc.samples();
    let nominal = sc.willie.center;
    let (layout, channel): (Option<PinchLayout<T>>, RowChannel<'_, T>) = match kind {
        BenchmarkKind::MimoZf | BenchmarkKind::MimoMrt => {
            (None, Box::new(move |r: &Vec3<T>| ula_channel(r, n, geom.height, pc)))
        }
        BenchmarkKind::PassZf | BenchmarkKind::PassMrt => {
            let layout = heuristic_pass_layout(&sc.bob, geom);
            let l = layout.clone();
            (
                Some(layout),
                Box::new(move |r: &Vec3<T>| Ok(effective_channel(&l, r, geom, pc))),
            )
        }
    };
    let h_b = channel(&sc.bob)?;
    let unit = match kind {
        BenchmarkKind::MimoZf | BenchmarkKind::PassZf => zf_weights(&h_b, &channel(&nominal)?)?,
        BenchmarkKind::MimoMrt | BenchmarkKind::PassMrt => mrt_weights(&h_b)?,
    };
    let mut g_max = T::zero();
    for r in &samples {
        g_max = g_max.max(dot(&channel(r)?, &unit).norm_sqr());
    }
    let power = power_for_gain(g_max, sc.budget(), sc.p_max);
    let snr = power * dot(&h_b, &unit).norm_sqr() / sc.bob_noise;
    Ok(BenchmarkOutcome {
        kind,
        rate: rate(snr),
        power,
        beam: BeamVector::new(unit, power)?,
        layout,
    })
}
