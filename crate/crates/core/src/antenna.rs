//! Square planar arrays: 3GPP element pattern, uniform array factor,
//! equal-radiated-power normalization and the staircase gain model used by
//! the closed-form outage sums.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::{integrate, uniform_breakpoints};
use crate::units::db_to_linear;

/// Absolute tolerance on the radiated-power integral.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

const QUADRATURE_MAX_INTERVALS: usize = 4000;

/// Instantaneous tilt of a mounted antenna, split into its x–z and y–z components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Orientation {
    pub theta_x: f64,
    pub theta_y: f64,
}

impl Orientation {
    pub const BORESIGHT: Self = Self {
        theta_x: 0.0,
        theta_y: 0.0,
    };

    pub fn new(theta_x: f64, theta_y: f64) -> Result<Self> {
        for (name, v) in [("theta_x", theta_x), ("theta_y", theta_y)] {
            if !(v.abs() < FRAC_PI_2) {
                return Err(domain(name, v, "|tilt| < π/2 rad"));
            }
        }
        Ok(Self { theta_x, theta_y })
    }

    /// Off-boresight angle θ and azimuth φ of the pointing error.
    pub fn angles(&self) -> (f64, f64) {
        angles_from_tilt(*self)
    }

    fn direction(&self) -> Direction {
        let (tx, ty) = (self.theta_x.tan(), self.theta_y.tan());
        let norm = (tx * tx + ty * ty + 1.0).sqrt();
        Direction {
            x: tx / norm,
            y: ty / norm,
            z: 1.0 / norm,
        }
    }
}

/// θ = atan(√(tan²θx + tan²θy)), φ = atan2(tan θy, tan θx); φ = 0 at boresight.
pub fn angles_from_tilt(o: Orientation) -> (f64, f64) {
    let (tx, ty) = (o.theta_x.tan(), o.theta_y.tan());
    let theta = (tx * tx + ty * ty).sqrt().atan();
    let phi = if tx == 0.0 && ty == 0.0 { 0.0 } else { ty.atan2(tx) };
    (theta, phi)
}

/// Unit vector in the antenna frame; z is boresight.
#[derive(Debug, Clone, Copy)]
struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    fn from_angles(theta: f64, phi: f64) -> Self {
        let s = theta.sin();
        Self {
            x: s * phi.cos(),
            y: s * phi.sin(),
            z: theta.cos(),
        }
    }
}

/// 3GPP single-element power pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ElementPattern {
    pub max_gain_db: f64,
    pub vertical_beamwidth_deg: f64,
    pub horizontal_beamwidth_deg: f64,
    pub vertical_sidelobe_limit_db: f64,
    pub front_to_back_db: f64,
}

impl Default for ElementPattern {
    fn default() -> Self {
        Self {
            max_gain_db: 8.0,
            vertical_beamwidth_deg: 65.0,
            horizontal_beamwidth_deg: 65.0,
            vertical_sidelobe_limit_db: 30.0,
            front_to_back_db: 30.0,
        }
    }
}

impl ElementPattern {
    /// Attenuation relative to peak, dB, toward (θ, φ) measured from boresight.
    pub fn attenuation_db(&self, theta: f64, phi: f64) -> f64 {
        self.attenuation_toward(Direction::from_angles(theta, phi))
    }

    // The vertical cut lies in the y–z plane, the horizontal cut in x–z.
    fn attenuation_toward(&self, d: Direction) -> f64 {
        let zenith_offset = 90.0 - d.y.clamp(-1.0, 1.0).acos().to_degrees();
        let azimuth = d.x.atan2(d.z).to_degrees();
        let vertical = (12.0 * (zenith_offset / self.vertical_beamwidth_deg).powi(2))
            .min(self.vertical_sidelobe_limit_db);
        let horizontal =
            (12.0 * (azimuth / self.horizontal_beamwidth_deg).powi(2)).min(self.front_to_back_db);
        (vertical + horizontal).min(self.front_to_back_db)
    }

    fn gain_toward(&self, d: Direction) -> f64 {
        db_to_linear(self.max_gain_db - self.attenuation_toward(d))
    }

    fn validate(&self) -> Result<()> {
        if !self.max_gain_db.is_finite() {
            return Err(domain("element max gain", self.max_gain_db, "finite dB"));
        }
        for (name, v) in [
            ("vertical beamwidth", self.vertical_beamwidth_deg),
            ("horizontal beamwidth", self.horizontal_beamwidth_deg),
        ] {
            if !(v > 0.0) {
                return Err(domain(name, v, "> 0 deg"));
            }
        }
        for (name, v) in [
            ("vertical sidelobe limit", self.vertical_sidelobe_limit_db),
            ("front-to-back ratio", self.front_to_back_db),
        ] {
            if !(v >= 0.0) {
                return Err(domain(name, v, ">= 0 dB"));
            }
        }
        Ok(())
    }
}

/// Linear gain of a single element toward the tilted boresight of `o`.
pub fn element_gain(o: Orientation, element: &ElementPattern) -> f64 {
    element.gain_toward(o.direction())
}

/// An N×N uniformly excited planar array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub elements_per_side: u32,
    /// Element spacing along x, in wavelengths.
    pub spacing_x: f64,
    /// Element spacing along y, in wavelengths.
    pub spacing_y: f64,
    /// Progressive phase shift along x, radians.
    pub steering_phase_x: f64,
    /// Progressive phase shift along y, radians.
    pub steering_phase_y: f64,
    pub element: ElementPattern,
}

impl ArrayConfig {
    /// Half-wavelength spacing, boresight steering and the default element.
    pub fn square(elements_per_side: u32) -> Self {
        Self {
            elements_per_side,
            spacing_x: 0.5,
            spacing_y: 0.5,
            steering_phase_x: 0.0,
            steering_phase_y: 0.0,
            element: ElementPattern::default(),
        }
    }

    pub fn with_element(mut self, element: ElementPattern) -> Self {
        self.element = element;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements_per_side == 0 {
            return Err(domain("elements per side", 0.0, ">= 1"));
        }
        for (name, v) in [("spacing_x", self.spacing_x), ("spacing_y", self.spacing_y)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(name, v, "> 0 wavelengths"));
            }
        }
        self.element.validate()
    }

    fn n(&self) -> f64 {
        f64::from(self.elements_per_side)
    }

    fn array_factor_toward(&self, d: Direction) -> f64 {
        let two_pi = 2.0 * PI;
        let psi_x = two_pi * self.spacing_x * d.x + self.steering_phase_x;
        let psi_y = two_pi * self.spacing_y * d.y + self.steering_phase_y;
        let n = self.n();
        sine_ratio_squared(n, psi_x) * sine_ratio_squared(n, psi_y)
    }

    fn pattern_toward(&self, d: Direction) -> f64 {
        self.element.gain_toward(d) * self.array_factor_toward(d)
    }

    /// Element pattern times array factor toward (θ, φ), before normalization.
    pub fn unnormalized_gain(&self, theta: f64, phi: f64) -> f64 {
        self.pattern_toward(Direction::from_angles(theta, phi))
    }
}

/// `sin²(Nψ/2) / (N² sin²(ψ/2))`, with removable singularities set to their limit of 1.
pub fn sine_ratio_squared(n: f64, psi: f64) -> f64 {
    let half = 0.5 * psi;
    let den = half.sin();
    if den.abs() < 1e-12 {
        return 1.0;
    }
    let ratio = (n * half).sin() / (n * den);
    ratio * ratio
}

/// Normalized array factor toward the tilted boresight of `o`; lies in [0, 1].
pub fn array_factor(o: Orientation, cfg: &ArrayConfig) -> f64 {
    cfg.array_factor_toward(o.direction())
}

/// Array factor toward explicit angles (θ, φ).
pub fn array_factor_at(theta: f64, phi: f64, cfg: &ArrayConfig) -> f64 {
    cfg.array_factor_toward(Direction::from_angles(theta, phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct CacheKey([u64; 10]);

impl CacheKey {
    fn of(cfg: &ArrayConfig) -> Self {
        let e = &cfg.element;
        Self([
            u64::from(cfg.elements_per_side),
            cfg.spacing_x.to_bits(),
            cfg.spacing_y.to_bits(),
            cfg.steering_phase_x.to_bits(),
            cfg.steering_phase_y.to_bits(),
            e.max_gain_db.to_bits(),
            e.vertical_beamwidth_deg.to_bits(),
            e.horizontal_beamwidth_deg.to_bits(),
            e.vertical_sidelobe_limit_db.to_bits(),
            e.front_to_back_db.to_bits(),
        ])
    }
}

fn normalization_cache() -> &'static RwLock<HashMap<CacheKey, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// ∫₀^π ∫₀^{2π} G'(θ, φ) sin θ dφ dθ by nested adaptive quadrature.
pub fn radiated_power_integral(cfg: &ArrayConfig) -> Result<f64> {
    cfg.validate()?;
    let lobes = cfg.elements_per_side as usize;
    let inner_tol = NORMALIZATION_TOLERANCE / (4.0 * PI);
    let outer_tol = NORMALIZATION_TOLERANCE / 2.0;
    let phi_breaks = uniform_breakpoints(0.0, 2.0 * PI, (4 * lobes).max(8));
    let theta_breaks = uniform_breakpoints(0.0, PI, (4 * lobes).max(16));

    let mut inner_failure = None;
    let outer = integrate(
        |theta| {
            let s = theta.sin();
            if s == 0.0 {
                return 0.0;
            }
            match integrate(
                |phi| cfg.unnormalized_gain(theta, phi),
                &phi_breaks,
                inner_tol,
                QUADRATURE_MAX_INTERVALS,
            ) {
                Ok(est) => est.value * s,
                Err(e) => {
                    inner_failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &theta_breaks,
        outer_tol,
        QUADRATURE_MAX_INTERVALS,
    );
    if let Some(e) = inner_failure {
        return Err(e);
    }
    Ok(outer?.value)
}

/// G₀ = 1 / ∫∫ G' sin θ, memoized per array configuration.
pub fn normalization_constant(cfg: &ArrayConfig) -> Result<f64> {
    let key = CacheKey::of(cfg);
    if let Some(&g0) = normalization_cache()
        .read()
        .unwrap_or_else(|p| p.into_inner())
        .get(&key)
    {
        return Ok(g0);
    }
    // Concurrent first calls may both integrate; the results are identical.
    let g0 = 1.0 / radiated_power_integral(cfg)?;
    normalization_cache()
        .write()
        .unwrap_or_else(|p| p.into_inner())
        .insert(key, g0);
    Ok(g0)
}

/// Full gain G₀ · G_e · G_a toward the tilted boresight of `o`.
pub fn total_gain(o: Orientation, cfg: &ArrayConfig) -> Result<f64> {
    Ok(GainPattern::new(cfg)?.gain(o))
}

/// An array configuration with its normalization constant resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPattern {
    pub config: ArrayConfig,
    pub g0: f64,
}

impl GainPattern {
    pub fn new(cfg: &ArrayConfig) -> Result<Self> {
        Ok(Self {
            config: *cfg,
            g0: normalization_constant(cfg)?,
        })
    }

    pub fn gain(&self, o: Orientation) -> f64 {
        self.g0 * self.config.pattern_toward(o.direction())
    }

    pub fn gain_at(&self, theta: f64, phi: f64) -> f64 {
        self.g0 * self.config.unnormalized_gain(theta, phi)
    }

    /// Peak gain G₀ · 10^(G_max/10).
    pub fn boresight_gain(&self) -> f64 {
        self.g0 * db_to_linear(self.config.element.max_gain_db)
    }

    /// Radially symmetric approximation: the x-axis cut applied at every azimuth,
    /// with the element held at its peak.
    pub fn radial_gain(&self, theta: f64) -> f64 {
        let psi = 2.0 * PI * self.config.spacing_x * theta.sin();
        self.boresight_gain() * sine_ratio_squared(self.config.n(), psi)
    }
}

/// Resolution of the staircase gain model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseParams {
    /// Steps per null-to-null lobe width (J).
    pub steps_per_lobe: u32,
    /// Number of lobes covered, main lobe included (K).
    pub lobe_count: u32,
}

impl Default for StaircaseParams {
    fn default() -> Self {
        Self {
            steps_per_lobe: 100,
            lobe_count: 4,
        }
    }
}

impl StaircaseParams {
    pub fn new(steps_per_lobe: u32, lobe_count: u32) -> Result<Self> {
        let sp = Self {
            steps_per_lobe,
            lobe_count,
        };
        sp.validate()?;
        Ok(sp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_lobe == 0 {
            return Err(domain("steps per lobe", 0.0, ">= 1"));
        }
        if self.lobe_count == 0 {
            return Err(domain("lobe count", 0.0, ">= 1"));
        }
        Ok(())
    }

    pub fn total_steps(&self) -> u32 {
        self.steps_per_lobe * self.lobe_count
    }

    /// Right edge 2j/(J·N) of step `j`, radians.
    pub fn breakpoint(&self, j: u32, elements_per_side: u32) -> f64 {
        2.0 * f64::from(j) / (f64::from(self.steps_per_lobe) * f64::from(elements_per_side))
    }
}

/// Normalized gain level 𝔾(j, N) of step `j`: the sine ratio at angle 2j/(J·N).
pub fn gain_breakpoint(j: u32, cfg: &ArrayConfig, sp: &StaircaseParams) -> Result<f64> {
    sp.validate()?;
    if j == 0 || j > sp.total_steps() {
        return Err(domain("staircase step", f64::from(j), "1 <= j <= J·K"));
    }
    let angle = sp.breakpoint(j, cfg.elements_per_side);
    let psi = 2.0 * PI * cfg.spacing_x * angle.sin();
    Ok(sine_ratio_squared(cfg.n(), psi))
}

/// Index of the step whose interval [2(j−1)/(J·N), 2j/(J·N)) holds `theta`,
/// or `None` once `theta` is past the last modeled lobe.
pub fn step_index(theta: f64, elements_per_side: u32, sp: &StaircaseParams) -> Option<u32> {
    let scaled = theta * f64::from(sp.steps_per_lobe) * f64::from(elements_per_side) / 2.0;
    let j = scaled.floor() + 1.0;
    (j <= f64::from(sp.total_steps())).then_some(j as u32)
}

/// Piecewise-constant approximation of the radially symmetric gain.
pub fn staircase_gain(theta: f64, cfg: &ArrayConfig, sp: &StaircaseParams) -> Result<f64> {
    if !(theta >= 0.0) {
        return Err(domain("theta", theta, ">= 0 rad"));
    }
    sp.validate()?;
    let pattern = GainPattern::new(cfg)?;
    Ok(match step_index(theta, cfg.elements_per_side, sp) {
        Some(j) => pattern.boresight_gain() * gain_breakpoint(j, cfg, sp)?,
        None => 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn tilt_to_angles() {
        assert_eq!(angles_from_tilt(Orientation::BORESIGHT), (0.0, 0.0));
        let (theta, phi) = angles_from_tilt(Orientation::new(0.2, 0.0).unwrap());
        assert_relative_eq!(theta, 0.2, max_relative = 1e-15);
        assert_eq!(phi, 0.0);
        let t = 0.3f64;
        let (theta, phi) = angles_from_tilt(Orientation::new(t, t).unwrap());
        assert_relative_eq!(theta, (2f64.sqrt() * t.tan()).atan(), max_relative = 1e-15);
        assert_relative_eq!(phi, FRAC_PI_4, max_relative = 1e-15);
        let (_, phi) = angles_from_tilt(Orientation::new(-0.1, -0.1).unwrap());
        assert_relative_eq!(phi, -3.0 * FRAC_PI_4, max_relative = 1e-15);
    }

    #[test]
    fn orientation_rejects_right_angles() {
        assert!(Orientation::new(FRAC_PI_2, 0.0).is_err());
        assert!(Orientation::new(0.0, -2.0).is_err());
    }

    #[test]
    fn element_pattern_cuts() {
        let e = ElementPattern::default();
        assert_relative_eq!(element_gain(Orientation::BORESIGHT, &e), db_to_linear(8.0), max_relative = 1e-15);
        let half = (65.0f64 / 2.0).to_radians();
        for o in [Orientation::new(half, 0.0).unwrap(), Orientation::new(0.0, half).unwrap()] {
            assert_relative_eq!(element_gain(o, &e), db_to_linear(8.0 - 3.0), max_relative = 1e-12);
        }
        // Backward hemisphere sits on the front-to-back floor.
        assert_relative_eq!(e.attenuation_db(PI * 0.9, 0.3), 30.0);
        assert_relative_eq!(e.attenuation_db(2.2, 1.0), 30.0);
        // Oblique forward direction: both cuts contribute without saturating.
        assert_relative_eq!(e.attenuation_db(1.5, 1.0), 28.593_534_220_309_614, max_relative = 1e-12);
    }

    #[test]
    fn array_factor_peaks_and_nulls() {
        let cfg = ArrayConfig::square(8);
        assert_eq!(array_factor(Orientation::BORESIGHT, &cfg), 1.0);
        let single = ArrayConfig::square(1);
        for o in [Orientation::new(0.4, -0.7).unwrap(), Orientation::new(1.2, 0.1).unwrap()] {
            assert_relative_eq!(array_factor(o, &single), 1.0, max_relative = 1e-15);
        }
        // sinθ cosφ = λ/(N d) is the first null.
        let theta = (1.0f64 / (8.0 * 0.5)).asin();
        assert!(array_factor_at(theta, 0.0, &cfg) < 1e-28);
    }

    #[test]
    fn removable_singularity_matches_neighbours() {
        // d = λ puts a grating lobe at θ = π/2, where sin(ψ/2) vanishes exactly.
        let mut cfg = ArrayConfig::square(6);
        cfg.spacing_x = 1.0;
        let at = array_factor_at(FRAC_PI_2, 0.0, &cfg);
        let below = array_factor_at(FRAC_PI_2 - 1e-9, 0.0, &cfg);
        assert_eq!(at, 1.0);
        assert!((at - below).abs() < 1e-9);
        assert_eq!(sine_ratio_squared(5.0, 2.0 * PI), 1.0);
        assert!((sine_ratio_squared(5.0, 2.0 * PI + 1e-9) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn normalization_orders_by_array_size() {
        let g4 = normalization_constant(&ArrayConfig::square(4)).unwrap();
        let g8 = normalization_constant(&ArrayConfig::square(8)).unwrap();
        assert!(g8 > g4);
    }

    #[test]
    fn normalization_scales_inversely_with_element_gain() {
        let base = ArrayConfig::square(3);
        let mut boosted = base;
        boosted.element.max_gain_db += 3.0;
        let ratio = normalization_constant(&base).unwrap() / normalization_constant(&boosted).unwrap();
        assert_relative_eq!(ratio, 10f64.powf(0.3), max_relative = 1e-5);
    }

    #[test]
    fn single_element_integral_matches_midpoint_sum() {
        let cfg = ArrayConfig::square(1);
        let integral = radiated_power_integral(&cfg).unwrap();
        let (nt, np) = (800, 800);
        let mut sum = 0.0;
        for i in 0..nt {
            let theta = (i as f64 + 0.5) * PI / nt as f64;
            for k in 0..np {
                let phi = (k as f64 + 0.5) * 2.0 * PI / np as f64;
                sum += cfg.unnormalized_gain(theta, phi) * theta.sin();
            }
        }
        sum *= PI / nt as f64 * 2.0 * PI / np as f64;
        assert_relative_eq!(integral, sum, max_relative = 1e-4);
    }

    #[test]
    fn total_gain_at_boresight() {
        let cfg = ArrayConfig::square(6);
        let g0 = normalization_constant(&cfg).unwrap();
        assert_relative_eq!(total_gain(Orientation::BORESIGHT, &cfg).unwrap(), g0 * db_to_linear(8.0), max_relative = 1e-15);
    }

    #[test]
    fn radial_approximation_on_the_x_axis() {
        // On φ = 0 the radial form differs from the full gain only through the element roll-off.
        let pattern = GainPattern::new(&ArrayConfig::square(8)).unwrap();
        for theta in [0.01, 0.05, 0.1, 0.2] {
            let full = pattern.gain_at(theta, 0.0);
            let element = db_to_linear(-pattern.config.element.attenuation_db(theta, 0.0));
            assert_relative_eq!(full, pattern.radial_gain(theta) * element, max_relative = 1e-12);
        }
    }

    #[test]
    fn breakpoint_levels() {
        let cfg = ArrayConfig::square(8);
        let sp = StaircaseParams::new(10, 4).unwrap();
        assert!(gain_breakpoint(0, &cfg, &sp).is_err());
        assert!(gain_breakpoint(41, &cfg, &sp).is_err());
        let levels: Vec<f64> = (1..=10).map(|j| gain_breakpoint(j, &cfg, &sp).unwrap()).collect();
        assert!(levels.windows(2).all(|w| w[1] <= w[0]));
        // j = J lands at 2/N rad, just past the first null at asin(2/N).
        assert!(levels[9] < 1e-3);
    }

    #[test]
    fn breakpoint_hits_exact_null() {
        // Spacing chosen so sin(2/N) · N · d = 1, an exact null of the sine ratio.
        let n = 8u32;
        let mut cfg = ArrayConfig::square(n);
        cfg.spacing_x = 1.0 / (f64::from(n) * (2.0 / f64::from(n)).sin());
        let sp = StaircaseParams::new(5, 2).unwrap();
        assert!(gain_breakpoint(5, &cfg, &sp).unwrap() < 1e-28);
    }

    #[test]
    fn staircase_edges() {
        let cfg = ArrayConfig::square(8);
        let sp = StaircaseParams::new(10, 4).unwrap();
        let peak = GainPattern::new(&cfg).unwrap().boresight_gain();
        assert_relative_eq!(staircase_gain(0.0, &cfg, &sp).unwrap(), peak * gain_breakpoint(1, &cfg, &sp).unwrap());
        assert_eq!(staircase_gain(2.0 * 4.0 / 8.0, &cfg, &sp).unwrap(), 0.0);
        assert_eq!(staircase_gain(3.0, &cfg, &sp).unwrap(), 0.0);
        assert!(staircase_gain(-0.1, &cfg, &sp).is_err());
        // Right-continuous: the breakpoint itself belongs to the next step.
        let b = sp.breakpoint(3, 8);
        assert_relative_eq!(staircase_gain(b, &cfg, &sp).unwrap(), peak * gain_breakpoint(4, &cfg, &sp).unwrap());
    }

    #[test]
    fn staircase_converges_to_radial_gain() {
        let cfg = ArrayConfig::square(8);
        let pattern = GainPattern::new(&cfg).unwrap();
        let lobe = 2.0 / 8.0;
        let max_dev = |j: u32| {
            let sp = StaircaseParams::new(j, 1).unwrap();
            (0..1000)
                .map(|i| {
                    let theta = lobe * i as f64 / 1000.0;
                    (staircase_gain(theta, &cfg, &sp).unwrap() - pattern.radial_gain(theta)).abs()
                })
                .fold(0.0, f64::max)
        };
        let devs: Vec<f64> = [5, 10, 20, 40].into_iter().map(max_dev).collect();
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
        assert!(max_dev(2000) < 5e-3 * pattern.boresight_gain());
    }

    proptest! {
        #[test]
        fn array_factor_bounded_and_symmetric(tx in -1.5f64..1.5, ty in -1.5f64..1.5, n in 1u32..20) {
            let cfg = ArrayConfig::square(n);
            let a = array_factor(Orientation::new(tx, ty).unwrap(), &cfg);
            let b = array_factor(Orientation::new(-tx, -ty).unwrap(), &cfg);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn staircase_is_eventually_zero(theta in 0.0f64..3.0, n in 1u32..16, j in 1u32..30, k in 1u32..6) {
            let sp = StaircaseParams::new(j, k).unwrap();
            let cfg = ArrayConfig::square(n);
            let g = staircase_gain(theta, &cfg, &sp).unwrap();
            prop_assert!(g >= 0.0);
            if theta >= 2.0 * f64::from(k) / f64::from(n) {
                prop_assert_eq!(g, 0.0);
            }
        }
    }
}
