//! Line-of-sight geometry and propagation for pinching-antenna transmitters.
//!
//! Each waveguide runs parallel to the x-axis at height `h` and is fed at
//! `x = 0`. A signal reaching a pinching antenna (PA) at `x` has picked up the
//! guided phase `exp(-j k_g x)` and then radiates to a ground receiver through
//! the spherical free-space coefficient `sqrt(eta) exp(-j k_c d) / d`.
//!
//! Received amplitudes are written as a row vector times the beamformer:
//! `y = a · w`, where `a` is [`effective_channel`].

use crate::error::{invalid, Error, Result};
use crate::num::{dot, norm, Cx, Real};

/// Speed of light used to derive the carrier wavelength, in m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    /// Point on the ground plane.
    pub fn ground(x: T, y: T) -> Self {
        Self::new(x, y, T::zero())
    }

    pub fn distance(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Carrier-dependent constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants<T> {
    /// Carrier frequency in Hz.
    pub carrier_freq: T,
    /// Free-space wavelength `c / f`.
    pub wavelength: T,
    /// In-waveguide wavelength `lambda / n_eff`.
    pub guided_wavelength: T,
    /// Free-space wavenumber `2 pi / lambda`.
    pub k_free: T,
    /// Guided wavenumber `2 pi / lambda_g`.
    pub k_guided: T,
    /// Propagation constant `lambda^2 / (16 pi^2)`, in m².
    pub eta: T,
    /// Effective refractive index of the dielectric waveguide.
    pub n_eff: T,
}

/// Derives wavelengths, wavenumbers and the propagation constant from the
/// carrier frequency and effective refractive index.
pub fn derive_constants<T: Real>(carrier_freq: T, n_eff: T) -> Result<PhysConstants<T>> {
    if !(carrier_freq > T::zero()) || !carrier_freq.is_finite() {
        return Err(invalid(format!(
            "carrier frequency must be positive, got {carrier_freq}"
        )));
    }
    if !(n_eff >= T::one()) || !n_eff.is_finite() {
        return Err(invalid(format!("effective refractive index must be >= 1, got {n_eff}")));
    }
    let two_pi = T::PI() + T::PI();
    let wavelength = T::lit(SPEED_OF_LIGHT) / carrier_freq;
    let guided_wavelength = wavelength / n_eff;
    let eta = wavelength * wavelength / (T::lit(16.0) * T::PI() * T::PI());
    Ok(PhysConstants {
        carrier_freq,
        wavelength,
        guided_wavelength,
        k_free: two_pi / wavelength,
        k_guided: two_pi / guided_wavelength,
        eta,
        n_eff,
    })
}

/// Physical layout of a pinching-antenna system.
#[derive(Debug, Clone, PartialEq)]
pub struct PassGeometry<T> {
    /// Waveguide height above the ground plane.
    pub height: T,
    /// Waveguide length `L`.
    pub length: T,
    /// y-coordinate of each waveguide; its length is the waveguide count `N`.
    pub waveguide_y: Vec<T>,
    /// PAs per waveguide, `M`.
    pub pas_per_waveguide: usize,
    /// Fixed spacing between consecutive PAs on a waveguide.
    pub pa_spacing: T,
    /// Minimum spacing that avoids mutual coupling.
    pub min_spacing: T,
}

impl<T: Real> PassGeometry<T> {
    pub fn new(
        height: T,
        length: T,
        waveguide_y: Vec<T>,
        pas_per_waveguide: usize,
        pa_spacing: T,
        min_spacing: T,
    ) -> Result<Self> {
        if !(height > T::zero()) {
            return Err(invalid("waveguide height must be positive"));
        }
        if !(length > T::zero()) {
            return Err(invalid("waveguide length must be positive"));
        }
        if waveguide_y.is_empty() {
            return Err(invalid("at least one waveguide is required"));
        }
        if pas_per_waveguide == 0 {
            return Err(invalid("at least one PA per waveguide is required"));
        }
        if !(min_spacing > T::zero()) || pa_spacing < min_spacing {
            return Err(invalid(format!(
                "PA spacing {pa_spacing} must be >= minimum spacing {min_spacing} > 0"
            )));
        }
        let geom = Self {
            height,
            length,
            waveguide_y,
            pas_per_waveguide,
            pa_spacing,
            min_spacing,
        };
        if geom.max_start() < T::zero() {
            return Err(invalid(format!(
                "{} PAs spaced {} m do not fit on a {} m waveguide",
                pas_per_waveguide, pa_spacing, length
            )));
        }
        Ok(geom)
    }

    /// Single waveguide on the x-axis carrying a single PA.
    pub fn single(height: T, length: T) -> Result<Self> {
        // spacing is unused with one PA
        Self::new(height, length, vec![T::zero()], 1, length, length)
    }

    /// `n` parallel waveguides spaced `waveguide_spacing` apart, centred on y = 0.
    pub fn uniform(
        height: T,
        length: T,
        n: usize,
        m: usize,
        waveguide_spacing: T,
        pa_spacing: T,
        min_spacing: T,
    ) -> Result<Self> {
        let mid = T::count(n.saturating_sub(1)) / T::lit(2.0);
        let ys = (0..n).map(|i| (T::count(i) - mid) * waveguide_spacing).collect();
        Self::new(height, length, ys, m, pa_spacing, min_spacing)
    }

    pub fn num_waveguides(&self) -> usize {
        self.waveguide_y.len()
    }

    /// Largest admissible first-PA coordinate, `L' = L - dx (M - 1)`.
    pub fn max_start(&self) -> T {
        self.length - self.pa_spacing * T::count(self.pas_per_waveguide - 1)
    }
}

/// First-PA coordinates on every waveguide; the remaining PAs follow at the
/// fixed geometry spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct PinchLayout<T> {
    x_init: Vec<T>,
    spacing: T,
    per_waveguide: usize,
}

impl<T: Real> PinchLayout<T> {
    pub fn new(x_init: Vec<T>, geom: &PassGeometry<T>) -> Result<Self> {
        if x_init.len() != geom.num_waveguides() {
            return Err(invalid(format!(
                "layout has {} start positions for {} waveguides",
                x_init.len(),
                geom.num_waveguides()
            )));
        }
        let upper = geom.max_start();
        if let Some(bad) = x_init.iter().find(|x| !(**x >= T::zero() && **x <= upper)) {
            return Err(invalid(format!("start position {bad} outside [0, {upper}]")));
        }
        Ok(Self {
            x_init,
            spacing: geom.pa_spacing,
            per_waveguide: geom.pas_per_waveguide,
        })
    }

    pub fn x_init(&self) -> &[T] {
        &self.x_init
    }

    /// Coordinate of PA `m` (0-based) on waveguide `n`.
    pub fn position(&self, n: usize, m: usize) -> T {
        self.x_init[n] + T::count(m) * self.spacing
    }

    /// All coordinates on waveguide `n`, in order.
    pub fn waveguide(&self, n: usize) -> Vec<T> {
        (0..self.per_waveguide).map(|m| self.position(n, m)).collect()
    }

    /// The full `M x N` coordinate matrix, column-major (one column per waveguide).
    pub fn matrix(&self) -> Vec<Vec<T>> {
        (0..self.x_init.len()).map(|n| self.waveguide(n)).collect()
    }
}

/// Per-waveguide complex weights with unit norm and a transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamVector<T> {
    entries: Vec<Cx<T>>,
    power: T,
}

impl<T: Real> BeamVector<T> {
    /// Normalizes `raw` to unit norm.
    pub fn new(raw: Vec<Cx<T>>, power: T) -> Result<Self> {
        let n = norm(&raw);
        if !(n > T::zero()) || !n.is_finite() {
            return Err(invalid("beamforming direction must be a finite nonzero vector"));
        }
        if !(power >= T::zero()) {
            return Err(invalid(format!("transmit power must be >= 0, got {power}")));
        }
        Ok(Self {
            entries: raw.into_iter().map(|z| z / n).collect(),
            power,
        })
    }

    pub fn unit(&self) -> &[Cx<T>] {
        &self.entries
    }

    pub fn power(&self) -> T {
        self.power
    }

    pub fn with_power(&self, power: T) -> Self {
        Self {
            entries: self.entries.clone(),
            power,
        }
    }

    /// The full beamformer `sqrt(P) w~`.
    pub fn weights(&self) -> Vec<Cx<T>> {
        let s = self.power.sqrt();
        self.entries.iter().map(|z| z * s).collect()
    }
}

/// Free-space coefficient from a radiating point `p` to a receiver `r`.
pub fn los_coeff<T: Real>(p: &Vec3<T>, r: &Vec3<T>, pc: &PhysConstants<T>) -> Result<Cx<T>> {
    let d = p.distance(r);
    if !(d > T::zero()) {
        return Err(Error::DegenerateGeometry("transmitter and receiver coincide".into()));
    }
    Ok(Cx::from_polar(pc.eta.sqrt() / d, -pc.k_free * d))
}

/// Phase accumulated travelling `x` metres from the feed point.
pub fn inwg_phase<T: Real>(x: T, pc: &PhysConstants<T>) -> Cx<T> {
    Cx::from_polar(T::one(), -pc.k_guided * x)
}

/// In-waveguide vector of one waveguide under the equal-power model.
pub fn inwg_vector<T: Real>(xs: &[T], pc: &PhysConstants<T>) -> Result<Vec<Cx<T>>> {
    if xs.is_empty() {
        return Err(invalid("a waveguide needs at least one PA"));
    }
    let alpha = T::count(xs.len()).sqrt().recip();
    Ok(xs.iter().map(|&x| inwg_phase(x, pc) * alpha).collect())
}

/// Free-space vector from the PAs of one waveguide (at `y = y_n`, height `h`)
/// to a receiver.
pub fn freespace_vector<T: Real>(
    xs: &[T],
    y_n: T,
    r: &Vec3<T>,
    geom: &PassGeometry<T>,
    pc: &PhysConstants<T>,
) -> Vec<Cx<T>> {
    let sqrt_eta = pc.eta.sqrt();
    xs.iter()
        .map(|&x| {
            let d = Vec3::new(x, y_n, geom.height).distance(r);
            Cx::from_polar(sqrt_eta / d, -pc.k_free * d)
        })
        .collect()
}

/// Row vector `h^H(X) G(X)`: entry `n` is `sum_m conj(h_{n,m}) g_{n,m}`.
pub fn effective_channel<T: Real>(
    layout: &PinchLayout<T>,
    r: &Vec3<T>,
    geom: &PassGeometry<T>,
    pc: &PhysConstants<T>,
) -> Vec<Cx<T>> {
    let m = layout.per_waveguide;
    let scale = pc.eta.sqrt() / T::count(m).sqrt();
    geom.waveguide_y
        .iter()
        .enumerate()
        .map(|(n, &y_n)| {
            (0..m).fold(Cx::new(T::zero(), T::zero()), |acc, k| {
                let x = layout.position(n, k);
                let d = Vec3::new(x, y_n, geom.height).distance(r);
                acc + Cx::from_polar(scale / d, pc.k_free * d - pc.k_guided * x)
            })
        })
        .collect()
}

/// Received signal power `|a · w|^2` for a row channel `a`.
pub fn received_power<T: Real>(channel: &[Cx<T>], w: &BeamVector<T>) -> T {
    dot(channel, w.unit()).norm_sqr() * w.power()
}

/// SNR at a receiver with noise power `noise`.
pub fn snr_bob<T: Real>(
    layout: &PinchLayout<T>,
    w: &BeamVector<T>,
    r_b: &Vec3<T>,
    noise: T,
    geom: &PassGeometry<T>,
    pc: &PhysConstants<T>,
) -> Result<T> {
    if !(noise > T::zero()) {
        return Err(invalid(format!("noise power must be positive, got {noise}")));
    }
    Ok(received_power(&effective_channel(layout, r_b, geom, pc), w) / noise)
}

/// Rectangle of ground-plane points sampled every `step` metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub y_min: T,
    pub y_max: T,
    pub step: T,
}

impl<T: Real> GridSpec<T> {
    fn axis(lo: T, hi: T, step: T) -> Vec<T> {
        if !(hi >= lo) {
            return Vec::new();
        }
        // small slack so an exact multiple of `step` keeps its end point
        let count = ((hi - lo) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0) + 1;
        (0..count).map(|i| lo + T::count(i) * step).collect()
    }

    pub fn xs(&self) -> Vec<T> {
        Self::axis(self.x_min, self.x_max, self.step)
    }

    pub fn ys(&self) -> Vec<T> {
        Self::axis(self.y_min, self.y_max, self.step)
    }
}

/// Received power over a ground-plane grid, row-major in y.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternGrid<T> {
    pub xs: Vec<T>,
    pub ys: Vec<T>,
    /// `values[iy][ix]`
    pub values: Vec<Vec<T>>,
    pub normalized: bool,
}

impl<T: Real> PatternGrid<T> {
    pub fn max(&self) -> T {
        self.values.iter().flatten().fold(T::neg_infinity(), |a, &b| a.max(b))
    }

    /// Ground coordinates of the strongest cell (first in row-major order on ties).
    pub fn argmax(&self) -> (T, T) {
        let mut best = (T::neg_infinity(), 0, 0);
        for (iy, row) in self.values.iter().enumerate() {
            for (ix, &v) in row.iter().enumerate() {
                if v > best.0 {
                    best = (v, ix, iy);
                }
            }
        }
        (self.xs[best.1], self.ys[best.2])
    }
}

/// Beam pattern of `(layout, w)` over a ground grid, optionally divided by
/// the grid maximum.
pub fn beam_pattern_grid<T: Real>(
    layout: &PinchLayout<T>,
    w: &BeamVector<T>,
    grid: &GridSpec<T>,
    geom: &PassGeometry<T>,
    pc: &PhysConstants<T>,
    normalize: bool,
) -> Result<PatternGrid<T>> {
    if !(grid.step > T::zero()) {
        return Err(invalid("grid step must be positive"));
    }
    let xs = grid.xs();
    let ys = grid.ys();
    if xs.is_empty() || ys.is_empty() {
        return Err(invalid("grid rectangle is empty"));
    }
    let mut values: Vec<Vec<T>> = ys
        .iter()
        .map(|&y| {
            xs.iter()
                .map(|&x| received_power(&effective_channel(layout, &Vec3::ground(x, y), geom, pc), w))
                .collect()
        })
        .collect();
    let mut grid = PatternGrid {
        xs,
        ys,
        values: Vec::new(),
        normalized: false,
    };
    if normalize {
        let peak = values.iter().flatten().fold(T::zero(), |a, &b| a.max(b));
        if peak > T::zero() {
            values.iter_mut().flatten().for_each(|v| *v /= peak);
            grid.normalized = true;
        }
    }
    grid.values = values;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc() -> PhysConstants<f64> {
        derive_constants(28e9, 1.4).unwrap()
    }

    #[test]
    fn constants_at_28ghz() {
        let c = pc();
        assert!((c.wavelength - 1.0707142857142858e-2).abs() < 1e-15);
        assert!((c.eta - 7.26e-7).abs() < 1e-9);
        assert!((c.k_guided - 1.4 * c.k_free).abs() < 1e-9);
        let unit = derive_constants(28e9, 1.0).unwrap();
        assert_eq!(unit.k_guided, unit.k_free);
        let doubled = derive_constants(56e9, 1.4).unwrap();
        assert!((doubled.eta * 4.0 / c.eta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constants_reject_bad_input() {
        assert!(matches!(derive_constants(0.0, 1.4), Err(Error::InvalidArgument(_))));
        assert!(matches!(derive_constants(-1.0, 1.4), Err(Error::InvalidArgument(_))));
        assert!(derive_constants(28e9, 0.5).is_err());
    }

    #[test]
    fn los_directly_below() {
        let c = pc();
        let h = los_coeff(&Vec3::new(20.0, 0.0, 3.0), &Vec3::ground(20.0, 0.0), &c).unwrap();
        assert!((h.norm() - c.eta.sqrt() / 3.0).abs() < 1e-18);
        let h = los_coeff(&Vec3::new(22.0, 0.0, 3.0), &Vec3::ground(20.0, 6.0), &c).unwrap();
        assert!((h.norm() - c.eta.sqrt() / 7.0).abs() < 1e-18);
        let p = Vec3::new(1.0, 2.0, 3.0);
        assert!(matches!(los_coeff(&p, &p, &c), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn guided_phase_landmarks() {
        let c = pc();
        let z = inwg_phase(0.0, &c);
        assert_eq!(z, Cx::new(1.0, 0.0));
        let z = inwg_phase(c.guided_wavelength, &c);
        assert!((z - Cx::new(1.0, 0.0)).norm() < 1e-12);
        let z = inwg_phase(c.guided_wavelength / 2.0, &c);
        assert!((z - Cx::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn inwg_vector_half_wavelength_steps() {
        let c = pc();
        let g = inwg_vector(&[0.0, c.guided_wavelength / 2.0, c.guided_wavelength], &c).unwrap();
        let s = 3f64.sqrt().recip();
        for (z, want) in g.iter().zip([s, -s, s]) {
            assert!((z - Cx::new(want, 0.0)).norm() < 1e-12);
        }
        assert!((norm(&g) - 1.0).abs() < 1e-12);
        assert!(inwg_vector::<f64>(&[], &c).is_err());
    }

    #[test]
    fn geometry_invariants() {
        assert!(PassGeometry::<f64>::single(3.0, 25.0).is_ok());
        assert!(PassGeometry::<f64>::single(0.0, 25.0).is_err());
        let g: PassGeometry<f64> = PassGeometry::uniform(3.0, 25.0, 4, 3, 3.0, 0.005, 0.005).unwrap();
        assert_eq!(g.waveguide_y, vec![-4.5, -1.5, 1.5, 4.5]);
        assert!((g.max_start() - (25.0 - 0.01)).abs() < 1e-12);
        assert!(PassGeometry::uniform(3.0, 1.0, 1, 3, 3.0, 1.0, 0.5).is_err());
        assert!(PassGeometry::uniform(3.0, 25.0, 1, 3, 3.0, 0.1, 0.5).is_err());
    }

    #[test]
    fn layout_bounds() {
        let g = PassGeometry::uniform(3.0, 25.0, 2, 3, 3.0, 1.0, 1.0).unwrap();
        assert!(PinchLayout::new(vec![0.0, 23.0], &g).is_ok());
        assert!(PinchLayout::new(vec![0.0, 23.5], &g).is_err());
        assert!(PinchLayout::new(vec![-0.1, 1.0], &g).is_err());
        assert!(PinchLayout::new(vec![1.0], &g).is_err());
        let l = PinchLayout::new(vec![2.0, 5.0], &g).unwrap();
        assert_eq!(l.waveguide(1), vec![5.0, 6.0, 7.0]);
    }

    #[test]
    fn zero_power_gives_zero_snr() {
        let c = pc();
        let g = PassGeometry::single(3.0, 25.0).unwrap();
        let l = PinchLayout::new(vec![20.0], &g).unwrap();
        let w = BeamVector::new(vec![Cx::new(1.0, 0.0)], 0.0).unwrap();
        assert_eq!(snr_bob(&l, &w, &Vec3::ground(20.0, 6.0), 1e-13, &g, &c).unwrap(), 0.0);
        assert!(snr_bob(&l, &w, &Vec3::ground(20.0, 6.0), 0.0, &g, &c).is_err());
    }

    #[test]
    fn grid_axes_keep_end_points() {
        let spec = GridSpec {
            x_min: 0.0,
            x_max: 1.0,
            y_min: -0.5,
            y_max: 0.5,
            step: 0.1,
        };
        assert_eq!(spec.xs().len(), 11);
        assert_eq!(spec.ys().len(), 11);
        let empty = GridSpec {
            x_min: 1.0,
            x_max: 0.0,
            ..spec
        };
        assert!(empty.xs().is_empty());
    }
}
