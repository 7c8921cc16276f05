//! Corridor description, relay placement and line-of-sight feasibility.
//!
//! Heights are measured from a common ground datum; the source and
//! destination sit at the datum and relays lie on the straight segment from
//! the first relay to the last one with equal spacing.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atmosphere::PathGeometry;
use crate::error::{domain, Error, Result};

/// Elevation masks above which the operating elevation sits on the mask itself.
pub const MASK_ELEVATION_CUTOFF: f64 = 20.0 * std::f64::consts::PI / 180.0;

/// Physical description of the deployment corridor. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionProfile {
    /// Horizontal distance from core network to the remote area (L_sd), km.
    pub corridor_length_km: f64,
    pub source_min_elevation: f64,
    pub dest_min_elevation: f64,
    pub source_height_km: f64,
    pub dest_height_km: f64,
    /// Nearest obstacle to the source (H_bs), km.
    pub source_obstacle_height_km: f64,
    /// Nearest obstacle to the destination (H_bd), km.
    pub dest_obstacle_height_km: f64,
    /// Highest obstacle along the corridor (H_b,max), km.
    pub max_obstacle_height_km: f64,
    pub endpoint_height_difference_km: f64,
    pub scale_height_km: f64,
}

impl RegionProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.corridor_length_km > 0.0) {
            return Err(domain("corridor length", self.corridor_length_km, "> 0 km"));
        }
        for (name, v) in [
            ("source minimum elevation", self.source_min_elevation),
            ("destination minimum elevation", self.dest_min_elevation),
        ] {
            if !(v > 0.0 && v < FRAC_PI_2) {
                return Err(domain(name, v, "0 < ψ_min < π/2 rad"));
            }
        }
        for (name, v) in [
            ("source height", self.source_height_km),
            ("destination height", self.dest_height_km),
            ("source obstacle height", self.source_obstacle_height_km),
            ("destination obstacle height", self.dest_obstacle_height_km),
            ("highest obstacle", self.max_obstacle_height_km),
        ] {
            if !(v >= 0.0) {
                return Err(domain(name, v, ">= 0 km"));
            }
        }
        if !(self.scale_height_km > 0.0) {
            return Err(domain("scale height", self.scale_height_km, "> 0 km"));
        }
        Ok(())
    }

    /// Shortest source link that clears the highest obstacle at the mask angle.
    pub fn min_source_link_km(&self) -> f64 {
        self.max_obstacle_height_km / self.source_min_elevation.sin()
    }

    /// Shortest destination link that clears its nearest obstacle at the mask angle.
    pub fn min_dest_link_km(&self) -> f64 {
        self.dest_obstacle_height_km / self.dest_min_elevation.sin()
    }
}

/// Array sizes (elements per side) across the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainArrays {
    /// Ground source (N_s).
    pub source: u32,
    /// Receive array of the first relay (N_r,1).
    pub first_relay_rx: u32,
    /// Every inter-relay array (N_u).
    pub relay: u32,
    /// Transmit array of the last relay (N_t,M).
    pub last_relay_tx: u32,
    /// Ground destination (N_d).
    pub dest: u32,
}

/// A candidate design. Angles in radians, lengths in km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainPlan {
    /// Number of relays M.
    pub relay_count: u32,
    pub source_link_length_km: f64,
    pub source_elevation: f64,
    pub dest_link_length_km: f64,
    pub dest_elevation: f64,
    pub arrays: ChainArrays,
}

/// Positions derived from a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLayout {
    pub first_relay_height_km: f64,
    pub last_relay_height_km: f64,
    pub inter_hop_length_km: f64,
    /// Midpoint altitude of each of the M − 1 relay-to-relay hops.
    pub hop_midpoint_heights_km: Vec<f64>,
}

/// (H_u1, H_uM) = (L_s sin ψ_s, L_d sin ψ_d).
pub fn endpoint_heights(plan: &ChainPlan, _region: &RegionProfile) -> (f64, f64) {
    (
        plan.source_link_length_km * plan.source_elevation.sin(),
        plan.dest_link_length_km * plan.dest_elevation.sin(),
    )
}

/// Ground-projected length L cos ψ.
pub fn effective_horizontal_length(length_km: f64, elevation: f64) -> f64 {
    length_km * elevation.cos()
}

/// Equal relay spacing along the straight segment from U₁ to U_M.
pub fn inter_hop_length(plan: &ChainPlan, region: &RegionProfile) -> Result<f64> {
    if plan.relay_count < 2 {
        return Err(Error::InfeasiblePlan(format!(
            "relay count {} is below 2",
            plan.relay_count
        )));
    }
    let covered = effective_horizontal_length(plan.source_link_length_km, plan.source_elevation)
        + effective_horizontal_length(plan.dest_link_length_km, plan.dest_elevation);
    let remaining = region.corridor_length_km - covered;
    if remaining < 0.0 {
        return Err(Error::InfeasibleGeometry {
            covered_km: covered,
            corridor_km: region.corridor_length_km,
        });
    }
    let (h1, hm) = endpoint_heights(plan, region);
    Ok(remaining.hypot(h1 - hm) / f64::from(plan.relay_count - 1))
}

pub fn layout(plan: &ChainPlan, region: &RegionProfile) -> Result<ChainLayout> {
    let inter = inter_hop_length(plan, region)?;
    let (h1, hm) = endpoint_heights(plan, region);
    let hops = plan.relay_count - 1;
    let mids = (0..hops)
        .map(|k| h1 + (hm - h1) * (f64::from(k) + 0.5) / f64::from(hops))
        .collect();
    Ok(ChainLayout {
        first_relay_height_km: h1,
        last_relay_height_km: hm,
        inter_hop_length_km: inter,
        hop_midpoint_heights_km: mids,
    })
}

/// Propagation paths in chain order: source slant, relay hops, destination slant.
pub fn hop_paths(plan: &ChainPlan, region: &RegionProfile) -> Result<Vec<PathGeometry>> {
    let lay = layout(plan, region)?;
    let mut paths = Vec::with_capacity(plan.relay_count as usize + 1);
    paths.push(PathGeometry::slant(
        plan.source_link_length_km,
        0.0,
        lay.first_relay_height_km,
        plan.source_elevation,
    )?);
    for &h in &lay.hop_midpoint_heights_km {
        paths.push(PathGeometry::horizontal(lay.inter_hop_length_km, h)?);
    }
    paths.push(PathGeometry::slant(
        plan.dest_link_length_km,
        0.0,
        lay.last_relay_height_km,
        plan.dest_elevation,
    )?);
    Ok(paths)
}

/// Elevation band in which an endpoint relay at slant range `length_km`
/// sits between one and two scale heights; `None` when the band is empty.
pub fn remark1_elevation_window(length_km: f64, region: &RegionProfile) -> Option<(f64, f64)> {
    let hs = region.scale_height_km;
    if !(length_km > hs) {
        return None;
    }
    let lo = (hs / length_km).asin();
    let hi = (2.0 * hs / length_km).min(1.0).asin();
    Some((lo, hi))
}

/// Operating elevation for an endpoint link.
///
/// Masks above 20° are used as-is. Lower masks take the midpoint of the
/// scale-height window, clipped to [mask, π/2); with no window the mask is used.
pub fn operating_elevation(mask: f64, length_km: f64, region: &RegionProfile) -> f64 {
    if mask > MASK_ELEVATION_CUTOFF {
        return mask;
    }
    match remark1_elevation_window(length_km, region) {
        Some((lo, hi)) => (0.5 * (lo + hi)).max(mask).min(FRAC_PI_2 - 1e-9),
        None => mask,
    }
}

/// One broken placement constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    TooFewRelays { count: u32 },
    NonPositiveLength { link: &'static str, length_km: f64 },
    SourceElevationBelowMask { elevation: f64, mask: f64 },
    DestElevationBelowMask { elevation: f64, mask: f64 },
    ElevationNotBelowZenith { link: &'static str, elevation: f64 },
    FirstRelayBelowObstacle { height_km: f64, obstacle_km: f64 },
    EndpointLinksExceedCorridor { covered_km: f64, corridor_km: f64 },
    ZeroInterHopLength,
    EmptyArray { node: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewRelays { count } => write!(f, "relay count {count} is below 2"),
            Violation::NonPositiveLength { link, length_km } => {
                write!(f, "{link} link length {length_km} km is not positive")
            }
            Violation::SourceElevationBelowMask { elevation, mask } => write!(
                f,
                "source elevation below mask ({:.3}° < {:.3}°)",
                elevation.to_degrees(),
                mask.to_degrees()
            ),
            Violation::DestElevationBelowMask { elevation, mask } => write!(
                f,
                "destination elevation below mask ({:.3}° < {:.3}°)",
                elevation.to_degrees(),
                mask.to_degrees()
            ),
            Violation::ElevationNotBelowZenith { link, elevation } => write!(
                f,
                "{link} elevation {:.3}° is not below 90°",
                elevation.to_degrees()
            ),
            Violation::FirstRelayBelowObstacle {
                height_km,
                obstacle_km,
            } => write!(
                f,
                "first relay below highest obstacle ({height_km:.3} km <= {obstacle_km:.3} km)"
            ),
            Violation::EndpointLinksExceedCorridor {
                covered_km,
                corridor_km,
            } => write!(
                f,
                "endpoint links cover {covered_km:.3} km of a {corridor_km:.3} km corridor"
            ),
            Violation::ZeroInterHopLength => write!(f, "relays coincide (zero inter-hop length)"),
            Violation::EmptyArray { node } => write!(f, "{node} array has no elements"),
        }
    }
}

/// Every constraint the plan breaks; empty when the plan is feasible.
pub fn feasibility_check(plan: &ChainPlan, region: &RegionProfile) -> Vec<Violation> {
    let mut out = Vec::new();
    if plan.relay_count < 2 {
        out.push(Violation::TooFewRelays {
            count: plan.relay_count,
        });
    }
    for (link, length_km) in [
        ("source", plan.source_link_length_km),
        ("destination", plan.dest_link_length_km),
    ] {
        if !(length_km > 0.0) {
            out.push(Violation::NonPositiveLength { link, length_km });
        }
    }
    if !(plan.source_elevation >= region.source_min_elevation) {
        out.push(Violation::SourceElevationBelowMask {
            elevation: plan.source_elevation,
            mask: region.source_min_elevation,
        });
    }
    if !(plan.dest_elevation >= region.dest_min_elevation) {
        out.push(Violation::DestElevationBelowMask {
            elevation: plan.dest_elevation,
            mask: region.dest_min_elevation,
        });
    }
    for (link, elevation) in [
        ("source", plan.source_elevation),
        ("destination", plan.dest_elevation),
    ] {
        if !(elevation < FRAC_PI_2) {
            out.push(Violation::ElevationNotBelowZenith { link, elevation });
        }
    }
    let (h1, _) = endpoint_heights(plan, region);
    if !(h1 > region.max_obstacle_height_km) {
        out.push(Violation::FirstRelayBelowObstacle {
            height_km: h1,
            obstacle_km: region.max_obstacle_height_km,
        });
    }
    let covered = effective_horizontal_length(plan.source_link_length_km, plan.source_elevation)
        + effective_horizontal_length(plan.dest_link_length_km, plan.dest_elevation);
    if covered > region.corridor_length_km {
        out.push(Violation::EndpointLinksExceedCorridor {
            covered_km: covered,
            corridor_km: region.corridor_length_km,
        });
    } else if plan.relay_count >= 2 {
        if let Ok(l) = inter_hop_length(plan, region) {
            if !(l > 0.0) {
                out.push(Violation::ZeroInterHopLength);
            }
        }
    }
    let a = plan.arrays;
    for (node, n) in [
        ("source", a.source),
        ("first relay receive", a.first_relay_rx),
        ("relay", a.relay),
        ("last relay transmit", a.last_relay_tx),
        ("destination", a.dest),
    ] {
        if n == 0 {
            out.push(Violation::EmptyArray { node });
        }
    }
    out
}
