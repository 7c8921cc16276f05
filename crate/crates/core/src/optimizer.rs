//! Minimum-relay chain design.
//!
//! For each relay count M = 2, 3, … the search scans endpoint link lengths and
//! the relay array size. Endpoint arrays are not searched: the end-to-end sum
//! separates, so each endpoint array is the one minimizing its own hop outage
//! at that length, looked up from tables built once. The first M whose best
//! configuration meets the target wins.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atmosphere::PathGeometry;
use crate::chain::Scenario;
use crate::error::{Error, Result};
use crate::geometry::{
    feasibility_check, hop_paths, inter_hop_length, operating_elevation, ChainArrays, ChainPlan,
};
use crate::outage::{end_to_end_exact, AntennaEnd, EndpointChoice, EndpointSizer, OutageCurve};

/// Largest grid the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    /// Lower end of the source link grid; the obstacle bound applies when
    /// absent or smaller.
    pub source_link_min_km: Option<f64>,
    pub source_link_max_km: f64,
    pub dest_link_min_km: Option<f64>,
    pub dest_link_max_km: f64,
    pub length_step_km: f64,
    pub relay_array_min: u32,
    pub relay_array_max: u32,
    pub endpoint_array_min: u32,
    pub endpoint_array_max: u32,
    pub max_relays: u32,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            source_link_min_km: None,
            source_link_max_km: 20.0,
            dest_link_min_km: None,
            dest_link_max_km: 20.0,
            length_step_km: 0.2,
            relay_array_min: 2,
            relay_array_max: 16,
            endpoint_array_min: 2,
            endpoint_array_max: 16,
            max_relays: 30,
        }
    }
}

impl SearchSpace {
    pub fn validate(&self) -> Result<()> {
        if !(self.length_step_km > 0.0) {
            return Err(Error::Config(format!(
                "length step {} km must be positive",
                self.length_step_km
            )));
        }
        for (name, lo, hi) in [
            ("relay array", self.relay_array_min, self.relay_array_max),
            ("endpoint array", self.endpoint_array_min, self.endpoint_array_max),
        ] {
            if lo == 0 || lo > hi {
                return Err(Error::Config(format!("{name} range {lo}..={hi} is empty or starts at 0")));
            }
        }
        if self.max_relays < 2 {
            return Err(Error::Config(format!(
                "max relays {} leaves no relay count to try (need >= 2)",
                self.max_relays
            )));
        }
        Ok(())
    }
}

fn length_grid(bound: f64, min: Option<f64>, max: f64, step: f64, name: &str) -> Result<Vec<f64>> {
    let start = min.map_or(bound, |m| m.max(bound));
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let l = start + f64::from(k) * step;
        if l > max + 1e-9 * step {
            break;
        }
        out.push(l);
        k += 1;
    }
    if out.is_empty() {
        return Err(Error::Config(format!(
            "{name} grid is empty: starts at {start:.3} km, ends at {max:.3} km"
        )));
    }
    Ok(out)
}

/// Endpoint array choice at each grid length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointTable {
    pub lengths_km: Vec<f64>,
    pub elevations: Vec<f64>,
    /// P_t · h_L of the endpoint hop.
    pub power_scales: Vec<f64>,
    pub choices: Vec<EndpointChoice>,
}

struct Prepared {
    source: EndpointTable,
    dest: EndpointTable,
    source_sizer: EndpointSizer,
    dest_sizer: EndpointSizer,
    relay_curves: Vec<(u32, OutageCurve)>,
}

fn endpoint_table(
    lengths: Vec<f64>,
    mask: f64,
    power_w: f64,
    sizer: &EndpointSizer,
    scenario: &Scenario,
) -> Result<EndpointTable> {
    let mut elevations = Vec::with_capacity(lengths.len());
    let mut power_scales = Vec::with_capacity(lengths.len());
    let mut choices = Vec::with_capacity(lengths.len());
    for &l in &lengths {
        let psi = operating_elevation(mask, l, &scenario.region);
        let path = PathGeometry::slant(l, 0.0, l * psi.sin(), psi)?;
        let scale = power_w * scenario.channel_gain(&path)?;
        elevations.push(psi);
        power_scales.push(scale);
        choices.push(sizer.choose(scale, scenario.threshold_w, scenario.target_outage));
    }
    Ok(EndpointTable {
        lengths_km: lengths,
        elevations,
        power_scales,
        choices,
    })
}

fn prepare(space: &SearchSpace, scenario: &Scenario) -> Result<Prepared> {
    scenario.validate()?;
    space.validate()?;
    let region = &scenario.region;
    let radios = &scenario.radios;
    let model = &scenario.vibration;
    let sp = &scenario.staircase;
    let step = space.length_step_km;
    let ls = length_grid(region.min_source_link_km(), space.source_link_min_km, space.source_link_max_km, step, "source link")?;
    let ld = length_grid(region.min_dest_link_km(), space.dest_link_min_km, space.dest_link_max_km, step, "destination link")?;
    let endpoints = space.endpoint_array_min..=space.endpoint_array_max;
    let platform = radios.array(1);
    let source_sizer = EndpointSizer::new(&radios.array(radios.source_elements_per_side), &platform, model, sp, endpoints.clone())?;
    let dest_sizer = EndpointSizer::new(&radios.array(radios.dest_elements_per_side), &platform, model, sp, endpoints)?;
    let source = endpoint_table(ls, region.source_min_elevation, radios.source_power_w, &source_sizer, scenario)?;
    let dest = endpoint_table(ld, region.dest_min_elevation, radios.relay_power_w, &dest_sizer, scenario)?;
    let relay_curves = (space.relay_array_min..=space.relay_array_max)
        .into_par_iter()
        .map(|n| {
            let end = AntennaEnd::Vibrating(radios.array(n));
            Ok((n, OutageCurve::for_ends(&end, &end, model, sp)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared {
        source,
        dest,
        source_sizer,
        dest_sizer,
        relay_curves,
    })
}

/// Endpoint array tables for the source and destination links.
pub fn precompute_endpoint_tables(space: &SearchSpace, scenario: &Scenario) -> Result<(EndpointTable, EndpointTable)> {
    let p = prepare(space, scenario)?;
    Ok((p.source, p.dest))
}

/// One evaluated configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub relay_count: u32,
    pub source_link_km: f64,
    pub dest_link_km: f64,
    pub inter_hop_km: f64,
    pub first_relay_rx_n: u32,
    pub last_relay_tx_n: u32,
    pub relay_n: u32,
    /// Union-bound end-to-end outage.
    pub outage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub plan: ChainPlan,
    pub inter_hop_length_km: f64,
    pub per_hop_outage: Vec<f64>,
    /// Union-bound end-to-end outage, the quantity the search minimizes.
    pub achieved_outage: f64,
    pub exact_outage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSolution {
    /// A design met the target within the relay cap.
    pub feasible: bool,
    /// The winning design, or the lowest-outage one found when infeasible.
    pub design: Option<Design>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    outage: f64,
    relay_count: u32,
    relay_n: u32,
    n_r1: u32,
    n_tm: u32,
    is: usize,
    id: usize,
}

impl Candidate {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.outage
            .total_cmp(&other.outage)
            .then(self.relay_count.cmp(&other.relay_count))
            .then(self.relay_n.cmp(&other.relay_n))
            .then((self.n_r1 + self.n_tm).cmp(&(other.n_r1 + other.n_tm)))
            .then(self.is.cmp(&other.is))
            .then(self.id.cmp(&other.id))
            .then(self.n_r1.cmp(&other.n_r1))
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.cmp_key(&x) == Ordering::Less { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn plan_for(p: &Prepared, m: u32, is: usize, id: usize, arrays: ChainArrays) -> ChainPlan {
    ChainPlan {
        relay_count: m,
        source_link_length_km: p.source.lengths_km[is],
        source_elevation: p.source.elevations[is],
        dest_link_length_km: p.dest.lengths_km[id],
        dest_elevation: p.dest.elevations[id],
        arrays,
    }
}

fn placeholder_arrays(scenario: &Scenario) -> ChainArrays {
    ChainArrays {
        source: scenario.radios.source_elements_per_side,
        first_relay_rx: 1,
        relay: 1,
        last_relay_tx: 1,
        dest: scenario.radios.dest_elements_per_side,
    }
}

/// P_t,i · h_L of every relay-to-relay hop, or `None` when the geometry is infeasible.
fn relay_power_scales(p: &Prepared, scenario: &Scenario, m: u32, is: usize, id: usize) -> Result<Option<Vec<f64>>> {
    let plan = plan_for(p, m, is, id, placeholder_arrays(scenario));
    if !feasibility_check(&plan, &scenario.region).is_empty() {
        return Ok(None);
    }
    let paths = hop_paths(&plan, &scenario.region)?;
    let inner = &paths[1..paths.len() - 1];
    inner
        .iter()
        .map(|path| Ok(scenario.radios.relay_power_w * scenario.channel_gain(path)?))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn relay_sum(curve: &OutageCurve, scales: &[f64], threshold_w: f64, start: f64) -> f64 {
    scales
        .iter()
        .fold(start, |acc, &s| acc + curve.outage(s, threshold_w))
}

fn scan_m(p: &Prepared, scenario: &Scenario, m: u32, trace: bool) -> Result<(Option<Candidate>, Vec<TraceRow>)> {
    let th = scenario.threshold_w;
    let pairs: Vec<(usize, usize)> = (0..p.source.lengths_km.len())
        .flat_map(|is| (0..p.dest.lengths_km.len()).map(move |id| (is, id)))
        .collect();
    let per_pair = pairs
        .par_iter()
        .map(|&(is, id)| -> Result<(Option<Candidate>, Vec<TraceRow>)> {
            let Some(scales) = relay_power_scales(p, scenario, m, is, id)? else {
                return Ok((None, Vec::new()));
            };
            let cs = p.source.choices[is];
            let cd = p.dest.choices[id];
            let mut best = None;
            let mut rows = Vec::new();
            for (n_u, curve) in &p.relay_curves {
                let outage = relay_sum(curve, &scales, th, cs.outage + cd.outage).min(1.0);
                let c = Candidate {
                    outage,
                    relay_count: m,
                    relay_n: *n_u,
                    n_r1: cs.elements_per_side,
                    n_tm: cd.elements_per_side,
                    is,
                    id,
                };
                if trace {
                    rows.push(trace_row(p, scenario, &c)?);
                }
                best = better(best, Some(c));
            }
            Ok((best, rows))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = None;
    let mut rows = Vec::new();
    for (b, r) in per_pair {
        best = better(best, b);
        rows.extend(r);
    }
    Ok((best, rows))
}

fn arrays_of(scenario: &Scenario, c: &Candidate) -> ChainArrays {
    ChainArrays {
        source: scenario.radios.source_elements_per_side,
        first_relay_rx: c.n_r1,
        relay: c.relay_n,
        last_relay_tx: c.n_tm,
        dest: scenario.radios.dest_elements_per_side,
    }
}

fn trace_row(p: &Prepared, scenario: &Scenario, c: &Candidate) -> Result<TraceRow> {
    let plan = plan_for(p, c.relay_count, c.is, c.id, arrays_of(scenario, c));
    Ok(TraceRow {
        relay_count: c.relay_count,
        source_link_km: plan.source_link_length_km,
        dest_link_km: plan.dest_link_length_km,
        inter_hop_km: inter_hop_length(&plan, &scenario.region)?,
        first_relay_rx_n: c.n_r1,
        last_relay_tx_n: c.n_tm,
        relay_n: c.relay_n,
        outage: c.outage,
    })
}

fn design_of(p: &Prepared, scenario: &Scenario, c: &Candidate) -> Result<Design> {
    let plan = plan_for(p, c.relay_count, c.is, c.id, arrays_of(scenario, c));
    let th = scenario.threshold_w;
    let scales = relay_power_scales(p, scenario, c.relay_count, c.is, c.id)?
        .expect("winning candidate is geometrically feasible");
    let curve = &p
        .relay_curves
        .iter()
        .find(|(n, _)| *n == c.relay_n)
        .expect("relay size comes from the curve list")
        .1;
    let mut per_hop = Vec::with_capacity(scales.len() + 2);
    per_hop.push(
        p.source_sizer
            .outage(c.n_r1, p.source.power_scales[c.is], th)
            .expect("size from table"),
    );
    per_hop.extend(scales.iter().map(|&s| curve.outage(s, th)));
    per_hop.push(
        p.dest_sizer
            .outage(c.n_tm, p.dest.power_scales[c.id], th)
            .expect("size from table"),
    );
    Ok(Design {
        inter_hop_length_km: inter_hop_length(&plan, &scenario.region)?,
        exact_outage: end_to_end_exact(&per_hop),
        per_hop_outage: per_hop,
        achieved_outage: c.outage,
        plan,
    })
}

fn finish(p: &Prepared, scenario: &Scenario, winner: Option<Candidate>, fallback: Option<Candidate>) -> Result<DesignSolution> {
    match winner {
        Some(c) => Ok(DesignSolution {
            feasible: true,
            design: Some(design_of(p, scenario, &c)?),
        }),
        None => Ok(DesignSolution {
            feasible: false,
            design: fallback.map(|c| design_of(p, scenario, &c)).transpose()?,
        }),
    }
}

/// Fewest relays meeting the target, with the best configuration at that count.
pub fn optimize(space: &SearchSpace, scenario: &Scenario) -> Result<DesignSolution> {
    optimize_traced(space, scenario, None)
}

/// [`optimize`], also appending every evaluated configuration to `trace`.
pub fn optimize_traced(space: &SearchSpace, scenario: &Scenario, mut trace: Option<&mut Vec<TraceRow>>) -> Result<DesignSolution> {
    let p = prepare(space, scenario)?;
    let mut overall = None;
    for m in 2..=space.max_relays {
        let (best, rows) = scan_m(&p, scenario, m, trace.is_some())?;
        if let Some(t) = trace.as_deref_mut() {
            t.extend(rows);
        }
        if let Some(c) = best {
            if c.outage < scenario.target_outage {
                return finish(&p, scenario, Some(c), None);
            }
        }
        overall = better(overall, best);
    }
    finish(&p, scenario, None, overall)
}

/// Exhaustive search over every grid combination, endpoint arrays included.
/// Refuses grids larger than [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_optimize(space: &SearchSpace, scenario: &Scenario) -> Result<DesignSolution> {
    let p = prepare(space, scenario)?;
    let ns: Vec<u32> = p.source_sizer.sizes().collect();
    let points = u64::from(space.max_relays - 1)
        * p.source.lengths_km.len() as u64
        * p.dest.lengths_km.len() as u64
        * p.relay_curves.len() as u64
        * (ns.len() as u64).pow(2);
    if points > BRUTE_FORCE_LIMIT {
        return Err(Error::GridTooLarge {
            points,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let th = scenario.threshold_w;
    let mut overall = None;
    for m in 2..=space.max_relays {
        let mut best = None;
        for is in 0..p.source.lengths_km.len() {
            for id in 0..p.dest.lengths_km.len() {
                let Some(scales) = relay_power_scales(&p, scenario, m, is, id)? else {
                    continue;
                };
                for (n_u, curve) in &p.relay_curves {
                    for &n_r1 in &ns {
                        let ps = p.source_sizer.outage(n_r1, p.source.power_scales[is], th).expect("size in range");
                        for &n_tm in &ns {
                            let pd = p.dest_sizer.outage(n_tm, p.dest.power_scales[id], th).expect("size in range");
                            let c = Candidate {
                                outage: relay_sum(curve, &scales, th, ps + pd).min(1.0),
                                relay_count: m,
                                relay_n: *n_u,
                                n_r1,
                                n_tm,
                                is,
                                id,
                            };
                            best = better(best, Some(c));
                        }
                    }
                }
            }
        }
        if let Some(c) = best {
            if c.outage < scenario.target_outage {
                return finish(&p, scenario, Some(c), None);
            }
        }
        overall = better(overall, best);
    }
    finish(&p, scenario, None, overall)
}
