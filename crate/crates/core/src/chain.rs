//! Assembles a relay chain into hops and evaluates it end to end.

use serde::{Deserialize, Serialize};

use crate::antenna::{ArrayConfig, ElementPattern, StaircaseParams};
use crate::atmosphere::{channel_gain, Atmosphere, PathGeometry};
use crate::error::{domain, Error, Result};
use crate::geometry::{feasibility_check, hop_paths, ChainPlan, RegionProfile};
use crate::outage::{hop_outage, AntennaEnd, HopSpec, OutageReport};
use crate::vibration::VibrationModel;

/// Transmit powers and antenna hardware shared by every node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    pub carrier_frequency_ghz: f64,
    /// Ground source transmit power (P_t,s), W.
    pub source_power_w: f64,
    /// Relay transmit power (P_t,i), W.
    pub relay_power_w: f64,
    /// Ground source array side (N_s).
    pub source_elements_per_side: u32,
    /// Ground destination array side (N_d).
    pub dest_elements_per_side: u32,
    /// Element spacing in wavelengths, both axes.
    pub spacing_wavelengths: f64,
    pub element: ElementPattern,
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_frequency_ghz > 0.0) {
            return Err(domain("carrier frequency", self.carrier_frequency_ghz, "> 0 GHz"));
        }
        for (name, p) in [("source power", self.source_power_w), ("relay power", self.relay_power_w)] {
            if !(p > 0.0 && p.is_finite()) {
                return Err(domain(name, p, "> 0 W"));
            }
        }
        self.array(self.source_elements_per_side).validate()?;
        self.array(self.dest_elements_per_side).validate()
    }

    /// An N×N array built from this hardware.
    pub fn array(&self, elements_per_side: u32) -> ArrayConfig {
        ArrayConfig {
            elements_per_side,
            spacing_x: self.spacing_wavelengths,
            spacing_y: self.spacing_wavelengths,
            steering_phase_x: 0.0,
            steering_phase_y: 0.0,
            element: self.element,
        }
    }
}

/// Everything needed to evaluate a plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub region: RegionProfile,
    pub radios: RadioConfig,
    pub atmosphere: Atmosphere,
    pub vibration: VibrationModel,
    pub staircase: StaircaseParams,
    pub threshold_w: f64,
    pub target_outage: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.region.validate()?;
        self.radios.validate()?;
        self.staircase.validate()?;
        if !(self.threshold_w >= 0.0 && self.threshold_w.is_finite()) {
            return Err(domain("threshold", self.threshold_w, ">= 0 W"));
        }
        if !(self.target_outage > 0.0 && self.target_outage <= 1.0) {
            return Err(domain("target outage", self.target_outage, "0 < target <= 1"));
        }
        Ok(())
    }

    pub fn channel_gain(&self, path: &PathGeometry) -> Result<f64> {
        channel_gain(self.radios.carrier_frequency_ghz, &self.atmosphere, path)
    }
}

/// Hops in chain order: source uplink, relay-to-relay hops, destination downlink.
pub fn chain_hops(plan: &ChainPlan, scenario: &Scenario) -> Result<Vec<HopSpec>> {
    let violations = feasibility_check(plan, &scenario.region);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::InfeasiblePlan(text.join("; ")));
    }
    let r = &scenario.radios;
    let a = plan.arrays;
    let paths = hop_paths(plan, &scenario.region)?;
    let last = paths.len() - 1;
    paths
        .iter()
        .enumerate()
        .map(|(k, path)| {
            let (power, tx, rx) = if k == 0 {
                (
                    r.source_power_w,
                    AntennaEnd::GroundAligned(r.array(a.source)),
                    AntennaEnd::Vibrating(r.array(a.first_relay_rx)),
                )
            } else if k == last {
                (
                    r.relay_power_w,
                    AntennaEnd::Vibrating(r.array(a.last_relay_tx)),
                    AntennaEnd::GroundAligned(r.array(a.dest)),
                )
            } else {
                (
                    r.relay_power_w,
                    AntennaEnd::Vibrating(r.array(a.relay)),
                    AntennaEnd::Vibrating(r.array(a.relay)),
                )
            };
            Ok(HopSpec {
                transmit_power_w: power,
                channel_gain: scenario.channel_gain(path)?,
                tx,
                rx,
            })
        })
        .collect()
}

/// Closed-form per-hop and end-to-end outage of a plan.
pub fn chain_outage(plan: &ChainPlan, scenario: &Scenario) -> Result<OutageReport> {
    scenario.validate()?;
    let per_hop = chain_hops(plan, scenario)?
        .iter()
        .map(|h| hop_outage(h, &scenario.vibration, &scenario.staircase, scenario.threshold_w))
        .collect::<Result<Vec<_>>>()?;
    Ok(OutageReport::from_hops(per_hop))
}
