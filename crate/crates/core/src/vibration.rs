//! Platform instability: independent zero-mean Gaussian tilt on each axis,
//! whose radial magnitude is Rayleigh distributed.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::antenna::{Orientation, StaircaseParams};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VibrationModel {
    /// Standard deviation of each tilt axis, radians.
    pub sigma_theta: f64,
}

impl VibrationModel {
    pub fn new(sigma_theta: f64) -> Result<Self> {
        if !(sigma_theta >= 0.0 && sigma_theta.is_finite()) {
            return Err(domain("sigma_theta", sigma_theta, ">= 0 rad"));
        }
        Ok(Self { sigma_theta })
    }

    pub fn from_degrees(sigma_deg: f64) -> Result<Self> {
        Self::new(sigma_deg.to_radians())
    }
}

/// Draws one tilt; both axes are independent N(0, σ²).
///
/// Draws whose magnitude reaches π/2 are clamped just inside the valid range;
/// at any realistic σ this never happens.
pub fn sample_tilt<R: Rng + ?Sized>(model: &VibrationModel, rng: &mut R) -> Orientation {
    const LIMIT: f64 = std::f64::consts::FRAC_PI_2 - 1e-9;
    let s = model.sigma_theta;
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    Orientation {
        theta_x: (s * x).clamp(-LIMIT, LIMIT),
        theta_y: (s * y).clamp(-LIMIT, LIMIT),
    }
}

/// Rayleigh CDF 1 − exp(−θ²/2σ²) of the radial misalignment.
pub fn radial_misalignment_cdf(theta: f64, model: &VibrationModel) -> f64 {
    if theta < 0.0 {
        return 0.0;
    }
    let s = model.sigma_theta;
    if s == 0.0 {
        return 1.0;
    }
    -(-(theta * theta) / (2.0 * s * s)).exp_m1()
}

/// Rayleigh survival exp(−θ²/2σ²).
pub fn radial_misalignment_survival(theta: f64, model: &VibrationModel) -> f64 {
    if theta < 0.0 {
        return 1.0;
    }
    let s = model.sigma_theta;
    if s == 0.0 {
        return if theta > 0.0 { 0.0 } else { 1.0 };
    }
    (-(theta * theta) / (2.0 * s * s)).exp()
}

/// Probability that the radial tilt lands in staircase step `j` of an N-element side.
pub fn step_probability(
    j: u32,
    elements_per_side: u32,
    sp: &StaircaseParams,
    model: &VibrationModel,
) -> Result<f64> {
    if j == 0 || j > sp.total_steps() {
        return Err(domain("staircase step", f64::from(j), "1 <= j <= J·K"));
    }
    Ok(step_mass(
        sp.breakpoint(j - 1, elements_per_side),
        sp.breakpoint(j, elements_per_side),
        model,
    ))
}

/// Mass between radii `lo` and `hi`, computed without cancellation.
pub(crate) fn step_mass(lo: f64, hi: f64, model: &VibrationModel) -> f64 {
    let s = model.sigma_theta;
    if s == 0.0 {
        return if lo <= 0.0 && hi > 0.0 { 1.0 } else { 0.0 };
    }
    let two_var = 2.0 * s * s;
    let outer = (-(lo * lo) / two_var).exp();
    outer * -(-(hi * hi - lo * lo) / two_var).exp_m1()
}

/// Rayleigh mass beyond the last modeled step, exp(−2K²/(N²σ²)).
pub fn truncation_mass(elements_per_side: u32, sp: &StaircaseParams, model: &VibrationModel) -> f64 {
    radial_misalignment_survival(sp.breakpoint(sp.total_steps(), elements_per_side), model)
}
