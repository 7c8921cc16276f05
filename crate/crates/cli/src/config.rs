//! Run configuration file. Every physical key carries its unit in the name;
//! angles are degrees here and radians everywhere past this module.

use std::path::Path;

use mmw_backhaul::antenna::{ElementPattern, StaircaseParams};
use mmw_backhaul::atmosphere::Atmosphere;
use mmw_backhaul::chain::{RadioConfig, Scenario};
use mmw_backhaul::geometry::{operating_elevation, ChainArrays, ChainPlan, RegionProfile};
use mmw_backhaul::montecarlo::SimulationConfig;
use mmw_backhaul::optimizer::SearchSpace;
use mmw_backhaul::units::dbm_to_watts;
use mmw_backhaul::vibration::VibrationModel;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub corridor_length_km: f64,
    pub source_min_elevation_deg: f64,
    pub dest_min_elevation_deg: f64,
    pub source_height_km: f64,
    pub dest_height_km: f64,
    pub source_obstacle_height_km: f64,
    pub dest_obstacle_height_km: f64,
    pub max_obstacle_height_km: f64,
    pub endpoint_height_difference_km: f64,
    pub scale_height_km: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtmosphereSection {
    pub water_vapor_density_g_m3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub carrier_frequency_ghz: f64,
    pub source_power_w: f64,
    pub relay_power_w: f64,
    pub source_elements_per_side: u32,
    pub dest_elements_per_side: u32,
    pub element_spacing_wavelengths: f64,
    pub element_max_gain_dbi: f64,
    pub element_vertical_beamwidth_deg: f64,
    pub element_horizontal_beamwidth_deg: f64,
    pub element_sidelobe_limit_db: f64,
    pub element_front_to_back_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VibrationSection {
    pub sigma_theta_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaircaseSection {
    pub steps_per_lobe: u32,
    pub lobe_count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub threshold_dbm: f64,
    pub target_outage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_link_min_km: Option<f64>,
    pub source_link_max_km: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dest_link_min_km: Option<f64>,
    pub dest_link_max_km: f64,
    pub length_step_km: f64,
    pub relay_elements_min: u32,
    pub relay_elements_max: u32,
    pub endpoint_elements_min: u32,
    pub endpoint_elements_max: u32,
    pub max_relays: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub trials: u64,
    pub seed: u64,
    pub worker_count_hint: usize,
}

/// A fixed chain to evaluate. Elevations default to the optimizer's choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSection {
    pub relay_count: u32,
    pub source_link_km: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_elevation_deg: Option<f64>,
    pub dest_link_km: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dest_elevation_deg: Option<f64>,
    pub first_relay_rx_elements: u32,
    pub last_relay_tx_elements: u32,
    pub relay_elements: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub region: RegionSection,
    pub atmosphere: AtmosphereSection,
    pub radio: RadioSection,
    pub vibration: VibrationSection,
    pub staircase: StaircaseSection,
    pub link: LinkSection,
    pub search: SearchSection,
    pub simulation: SimulationSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanSection>,
}

impl Default for RunConfig {
    /// The 40 km corridor with a 70 GHz chain of 200 mW relays.
    fn default() -> Self {
        Self {
            region: RegionSection {
                corridor_length_km: 40.0,
                source_min_elevation_deg: 40.0,
                dest_min_elevation_deg: 20.0,
                source_height_km: 0.0,
                dest_height_km: 0.0,
                source_obstacle_height_km: 2.0,
                dest_obstacle_height_km: 1.0,
                max_obstacle_height_km: 2.0,
                endpoint_height_difference_km: 0.0,
                scale_height_km: 1.5,
            },
            atmosphere: AtmosphereSection {
                water_vapor_density_g_m3: 7.5,
            },
            radio: RadioSection {
                carrier_frequency_ghz: 70.0,
                source_power_w: 0.2,
                relay_power_w: 0.2,
                source_elements_per_side: 16,
                dest_elements_per_side: 16,
                element_spacing_wavelengths: 0.5,
                element_max_gain_dbi: 8.0,
                element_vertical_beamwidth_deg: 65.0,
                element_horizontal_beamwidth_deg: 65.0,
                element_sidelobe_limit_db: 30.0,
                element_front_to_back_db: 30.0,
            },
            vibration: VibrationSection {
                sigma_theta_deg: 2.0,
            },
            staircase: StaircaseSection {
                steps_per_lobe: 100,
                lobe_count: 4,
            },
            link: LinkSection {
                threshold_dbm: -99.0,
                target_outage: 2e-3,
            },
            search: SearchSection {
                source_link_min_km: None,
                source_link_max_km: 20.0,
                dest_link_min_km: None,
                dest_link_max_km: 20.0,
                length_step_km: 0.2,
                relay_elements_min: 2,
                relay_elements_max: 16,
                endpoint_elements_min: 2,
                endpoint_elements_max: 16,
                max_relays: 30,
            },
            simulation: SimulationSection {
                trials: 1_000_000,
                seed: 1,
                worker_count_hint: 0,
            },
            plan: Some(PlanSection {
                relay_count: 10,
                source_link_km: 6.7,
                source_elevation_deg: None,
                dest_link_km: 6.3,
                dest_elevation_deg: None,
                first_relay_rx_elements: 6,
                last_relay_tx_elements: 6,
                relay_elements: 8,
            }),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Invalid values are a configuration problem, whatever the model calls them.
    pub fn check(&self) -> Result<(), CliError> {
        let bad = |e: CliError| CliError::Usage(format!("config: {e}"));
        self.scenario().map_err(bad)?;
        self.search_space().validate().map_err(|e| bad(e.into()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn region(&self) -> RegionProfile {
        let r = &self.region;
        RegionProfile {
            corridor_length_km: r.corridor_length_km,
            source_min_elevation: r.source_min_elevation_deg.to_radians(),
            dest_min_elevation: r.dest_min_elevation_deg.to_radians(),
            source_height_km: r.source_height_km,
            dest_height_km: r.dest_height_km,
            source_obstacle_height_km: r.source_obstacle_height_km,
            dest_obstacle_height_km: r.dest_obstacle_height_km,
            max_obstacle_height_km: r.max_obstacle_height_km,
            endpoint_height_difference_km: r.endpoint_height_difference_km,
            scale_height_km: r.scale_height_km,
        }
    }

    pub fn element(&self) -> ElementPattern {
        let r = &self.radio;
        ElementPattern {
            max_gain_db: r.element_max_gain_dbi,
            vertical_beamwidth_deg: r.element_vertical_beamwidth_deg,
            horizontal_beamwidth_deg: r.element_horizontal_beamwidth_deg,
            vertical_sidelobe_limit_db: r.element_sidelobe_limit_db,
            front_to_back_db: r.element_front_to_back_db,
        }
    }

    pub fn radios(&self) -> RadioConfig {
        let r = &self.radio;
        RadioConfig {
            carrier_frequency_ghz: r.carrier_frequency_ghz,
            source_power_w: r.source_power_w,
            relay_power_w: r.relay_power_w,
            source_elements_per_side: r.source_elements_per_side,
            dest_elements_per_side: r.dest_elements_per_side,
            spacing_wavelengths: r.element_spacing_wavelengths,
            element: self.element(),
        }
    }

    pub fn atmosphere(&self) -> Result<Atmosphere, CliError> {
        Ok(Atmosphere::new(
            self.atmosphere.water_vapor_density_g_m3,
            self.region.scale_height_km,
        )?)
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let s = Scenario {
            region: self.region(),
            radios: self.radios(),
            atmosphere: self.atmosphere()?,
            vibration: VibrationModel::from_degrees(self.vibration.sigma_theta_deg)?,
            staircase: StaircaseParams::new(self.staircase.steps_per_lobe, self.staircase.lobe_count)?,
            threshold_w: dbm_to_watts(self.link.threshold_dbm),
            target_outage: self.link.target_outage,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn search_space(&self) -> SearchSpace {
        let s = &self.search;
        SearchSpace {
            source_link_min_km: s.source_link_min_km,
            source_link_max_km: s.source_link_max_km,
            dest_link_min_km: s.dest_link_min_km,
            dest_link_max_km: s.dest_link_max_km,
            length_step_km: s.length_step_km,
            relay_array_min: s.relay_elements_min,
            relay_array_max: s.relay_elements_max,
            endpoint_array_min: s.endpoint_elements_min,
            endpoint_array_max: s.endpoint_elements_max,
            max_relays: s.max_relays,
        }
    }

    pub fn simulation(&self) -> SimulationConfig {
        SimulationConfig {
            trials: self.simulation.trials,
            seed: self.simulation.seed,
            worker_count_hint: self.simulation.worker_count_hint,
        }
    }

    pub fn plan(&self) -> Result<ChainPlan, CliError> {
        let p = self
            .plan
            .as_ref()
            .ok_or_else(|| CliError::Usage("config has no [plan] section".into()))?;
        let region = self.region();
        let elevation = |deg: Option<f64>, mask: f64, length: f64| {
            deg.map_or_else(|| operating_elevation(mask, length, &region), f64::to_radians)
        };
        Ok(ChainPlan {
            relay_count: p.relay_count,
            source_link_length_km: p.source_link_km,
            source_elevation: elevation(p.source_elevation_deg, region.source_min_elevation, p.source_link_km),
            dest_link_length_km: p.dest_link_km,
            dest_elevation: elevation(p.dest_elevation_deg, region.dest_min_elevation, p.dest_link_km),
            arrays: ChainArrays {
                source: self.radio.source_elements_per_side,
                first_relay_rx: p.first_relay_rx_elements,
                relay: p.relay_elements,
                last_relay_tx: p.last_relay_tx_elements,
                dest: self.radio.dest_elements_per_side,
            },
        })
    }
}
