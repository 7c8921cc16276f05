//! Clear-air propagation loss for mmWave links.
//!
//! Free-space path loss plus the ITU sea-level approximations for oxygen and
//! water-vapour absorption, scaled exponentially with altitude and integrated
//! along slant paths.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::units::{db_to_linear, wavelength_m};

/// Sea-level water vapour density used when none is configured, g/m³.
pub const DEFAULT_WATER_VAPOR_DENSITY: f64 = 7.5;

/// Upper frequency limit of the absorption fits, GHz.
pub const MAX_FREQUENCY_GHZ: f64 = 350.0;

/// Absorber profile of the atmosphere along the corridor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atmosphere {
    /// ρ₀ in g/m³.
    pub water_vapor_density_sea_level: f64,
    /// e-folding height of absorber density, km.
    pub scale_height_km: f64,
    /// Informational only; the absorption fits are fixed at 20 °C.
    pub temperature_c: f64,
}

impl Atmosphere {
    pub fn new(water_vapor_density_sea_level: f64, scale_height_km: f64) -> Result<Self> {
        if !(water_vapor_density_sea_level >= 0.0) {
            return Err(domain(
                "water vapour density",
                water_vapor_density_sea_level,
                ">= 0 g/m³",
            ));
        }
        if !(scale_height_km > 0.0) {
            return Err(domain("scale height", scale_height_km, "> 0 km"));
        }
        Ok(Self {
            water_vapor_density_sea_level,
            scale_height_km,
            temperature_c: 20.0,
        })
    }

    /// Sea-level density 7.5 g/m³ with the given scale height.
    pub fn standard(scale_height_km: f64) -> Result<Self> {
        Self::new(DEFAULT_WATER_VAPOR_DENSITY, scale_height_km)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    Slant,
    Horizontal,
}

/// A propagation path: its length and the heights it spans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathGeometry {
    pub length_km: f64,
    pub start_height_km: f64,
    pub end_height_km: f64,
    /// Elevation angle in radians; only meaningful for slant paths.
    pub elevation_rad: f64,
    pub kind: PathKind,
}

impl PathGeometry {
    pub fn slant(
        length_km: f64,
        start_height_km: f64,
        end_height_km: f64,
        elevation_rad: f64,
    ) -> Result<Self> {
        check_length(length_km)?;
        check_height(start_height_km)?;
        check_height(end_height_km)?;
        if !(elevation_rad > 0.0 && elevation_rad <= std::f64::consts::FRAC_PI_2) {
            return Err(domain("elevation angle", elevation_rad, "0 < ψ <= π/2 rad"));
        }
        Ok(Self {
            length_km,
            start_height_km,
            end_height_km,
            elevation_rad,
            kind: PathKind::Slant,
        })
    }

    pub fn horizontal(length_km: f64, height_km: f64) -> Result<Self> {
        check_length(length_km)?;
        check_height(height_km)?;
        Ok(Self {
            length_km,
            start_height_km: height_km,
            end_height_km: height_km,
            elevation_rad: 0.0,
            kind: PathKind::Horizontal,
        })
    }
}

fn check_length(length_km: f64) -> Result<()> {
    if length_km > 0.0 && length_km.is_finite() {
        Ok(())
    } else {
        Err(domain("path length", length_km, "> 0 km"))
    }
}

fn check_height(height_km: f64) -> Result<()> {
    if height_km >= 0.0 && height_km.is_finite() {
        Ok(())
    } else {
        Err(domain("height", height_km, ">= 0 km"))
    }
}

fn check_frequency(fc_ghz: f64) -> Result<()> {
    if fc_ghz > 0.0 && fc_ghz < MAX_FREQUENCY_GHZ {
        Ok(())
    } else {
        Err(domain("carrier frequency", fc_ghz, "0 < fc < 350 GHz"))
    }
}

fn oxygen_below_57(fc: f64) -> f64 {
    0.001 * fc * fc * (6.09 / (fc * fc + 0.227) + 4.81 / ((fc - 57.0).powi(2) + 1.5))
}

/// Sea-level oxygen specific attenuation, dB/km.
///
/// The 57–63 GHz segment is `h(57) + 1.5 (fc − 57)` in total dB/km, where
/// `h(57)` is the full value of the lower branch at 57 GHz.
pub fn oxygen_specific_attenuation(fc_ghz: f64) -> Result<f64> {
    check_frequency(fc_ghz)?;
    let fc = fc_ghz;
    let value = if fc < 57.0 {
        oxygen_below_57(fc)
    } else if fc < 63.0 {
        oxygen_below_57(57.0) + 1.5 * (fc - 57.0)
    } else {
        0.001 * fc * fc * (4.13 / ((fc - 63.0).powi(2) + 1.1) + 0.19 / ((fc - 118.7).powi(2) + 2.0))
    };
    Ok(value)
}

/// Sea-level water-vapour specific attenuation, dB/km, for density `rho0` g/m³.
pub fn water_specific_attenuation(fc_ghz: f64, rho0: f64) -> Result<f64> {
    check_frequency(fc_ghz)?;
    if !(rho0 >= 0.0) {
        return Err(domain("water vapour density", rho0, ">= 0 g/m³"));
    }
    let fc = fc_ghz;
    let lines = 0.05
        + 3.6 / ((fc - 22.2).powi(2) + 8.5)
        + 10.6 / ((fc - 183.3).powi(2) + 9.0)
        + 8.9 / ((fc - 325.4).powi(2) + 26.3);
    Ok(0.0001 * fc * fc * rho0 * lines)
}

/// Combined sea-level oxygen and water attenuation, dB/km.
pub fn sea_level_specific_attenuation(fc_ghz: f64, rho0: f64) -> Result<f64> {
    Ok(oxygen_specific_attenuation(fc_ghz)? + water_specific_attenuation(fc_ghz, rho0)?)
}

/// Specific attenuation at altitude `height_km`, dB/km.
pub fn specific_attenuation_at_height(
    fc_ghz: f64,
    rho0: f64,
    height_km: f64,
    scale_height_km: f64,
) -> Result<f64> {
    check_height(height_km)?;
    if !(scale_height_km > 0.0) {
        return Err(domain("scale height", scale_height_km, "> 0 km"));
    }
    Ok(sea_level_specific_attenuation(fc_ghz, rho0)? * (-height_km / scale_height_km).exp())
}

/// Oxygen plus water absorption along `path`, dB.
pub fn gaseous_attenuation_db(fc_ghz: f64, atmosphere: &Atmosphere, path: &PathGeometry) -> Result<f64> {
    let rho0 = atmosphere.water_vapor_density_sea_level;
    let hs = atmosphere.scale_height_km;
    match path.kind {
        PathKind::Horizontal => {
            Ok(specific_attenuation_at_height(fc_ghz, rho0, path.start_height_km, hs)? * path.length_km)
        }
        PathKind::Slant => {
            if !(path.elevation_rad > 0.0) {
                return Err(domain("elevation angle", path.elevation_rad, "> 0 rad"));
            }
            let gamma0 = sea_level_specific_attenuation(fc_ghz, rho0)?;
            let (lo, hi) = if path.start_height_km <= path.end_height_km {
                (path.start_height_km, path.end_height_km)
            } else {
                (path.end_height_km, path.start_height_km)
            };
            let column = (-lo / hs).exp() - (-hi / hs).exp();
            Ok(gamma0 * column * hs / path.elevation_rad.sin())
        }
    }
}

/// Free-space path loss 20·log10(4πL/λ), dB.
pub fn free_space_path_loss_db(fc_ghz: f64, length_km: f64) -> Result<f64> {
    check_length(length_km)?;
    if !(fc_ghz > 0.0) {
        return Err(domain("carrier frequency", fc_ghz, "> 0 GHz"));
    }
    let ratio = 4.0 * std::f64::consts::PI * length_km * 1000.0 / wavelength_m(fc_ghz);
    Ok(20.0 * ratio.log10())
}

/// Free-space plus gaseous loss along `path`, dB.
pub fn total_loss_db(fc_ghz: f64, atmosphere: &Atmosphere, path: &PathGeometry) -> Result<f64> {
    Ok(free_space_path_loss_db(fc_ghz, path.length_km)? + gaseous_attenuation_db(fc_ghz, atmosphere, path)?)
}

/// Linear channel gain `10^(−loss/10)` of `path`.
pub fn channel_gain(fc_ghz: f64, atmosphere: &Atmosphere, path: &PathGeometry) -> Result<f64> {
    Ok(db_to_linear(-total_loss_db(fc_ghz, atmosphere, path)?))
}
