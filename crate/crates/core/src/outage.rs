//! Received power and outage probability of single hops and relay chains.
//!
//! The closed forms weight each staircase step by its Rayleigh mass and add
//! the mass of every (tx step, rx step) pair whose received power falls below
//! the threshold. Tilt mass past the last modeled lobe counts as outage.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::antenna::{sine_ratio_squared, ArrayConfig, GainPattern, Orientation, StaircaseParams};
use crate::error::{domain, Error, Result};
use crate::vibration::{step_mass, truncation_mass, VibrationModel};

/// One end of a hop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AntennaEnd {
    /// Mounted on a hovering platform and subject to random tilt.
    Vibrating(ArrayConfig),
    /// Stabilized ground terminal, always at boresight.
    GroundAligned(ArrayConfig),
}

impl AntennaEnd {
    pub fn array(&self) -> &ArrayConfig {
        match self {
            AntennaEnd::Vibrating(a) | AntennaEnd::GroundAligned(a) => a,
        }
    }

    pub fn is_vibrating(&self) -> bool {
        matches!(self, AntennaEnd::Vibrating(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VibratingEnds {
    Neither,
    TxOnly,
    RxOnly,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopSpec {
    pub transmit_power_w: f64,
    /// Linear propagation gain h_L in (0, 1].
    pub channel_gain: f64,
    pub tx: AntennaEnd,
    pub rx: AntennaEnd,
}

impl HopSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.transmit_power_w > 0.0 && self.transmit_power_w.is_finite()) {
            return Err(domain("transmit power", self.transmit_power_w, "> 0 W"));
        }
        if !(self.channel_gain > 0.0 && self.channel_gain <= 1.0) {
            return Err(domain("channel gain", self.channel_gain, "0 < h <= 1"));
        }
        self.tx.array().validate()?;
        self.rx.array().validate()
    }

    pub fn vibrating_ends(&self) -> VibratingEnds {
        match (self.tx.is_vibrating(), self.rx.is_vibrating()) {
            (false, false) => VibratingEnds::Neither,
            (true, false) => VibratingEnds::TxOnly,
            (false, true) => VibratingEnds::RxOnly,
            (true, true) => VibratingEnds::Both,
        }
    }

    /// P_t · h_L, the power before antenna gains.
    pub fn power_scale(&self) -> f64 {
        self.transmit_power_w * self.channel_gain
    }
}

/// Received power with the radially symmetric gain model; `tx_tilt` and
/// `rx_tilt` are radial misalignments in radians, ignored at ground ends.
pub fn received_power(hop: &HopSpec, tx_tilt: f64, rx_tilt: f64) -> Result<f64> {
    hop.validate()?;
    for (name, t) in [("tx tilt", tx_tilt), ("rx tilt", rx_tilt)] {
        if !(t >= 0.0) {
            return Err(domain(name, t, ">= 0 rad"));
        }
    }
    let end_gain = |end: &AntennaEnd, tilt: f64| -> Result<f64> {
        let pattern = GainPattern::new(end.array())?;
        Ok(match end {
            AntennaEnd::Vibrating(_) => pattern.radial_gain(tilt),
            AntennaEnd::GroundAligned(_) => pattern.boresight_gain(),
        })
    };
    Ok(hop.power_scale() * end_gain(&hop.tx, tx_tilt)? * end_gain(&hop.rx, rx_tilt)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ResolvedEnd {
    Fixed(f64),
    Vibrating(GainPattern),
}

impl ResolvedEnd {
    fn new(end: &AntennaEnd) -> Result<Self> {
        let pattern = GainPattern::new(end.array())?;
        Ok(match end {
            AntennaEnd::Vibrating(_) => ResolvedEnd::Vibrating(pattern),
            AntennaEnd::GroundAligned(_) => ResolvedEnd::Fixed(pattern.boresight_gain()),
        })
    }

    fn gain(&self, o: Orientation) -> f64 {
        match self {
            ResolvedEnd::Fixed(g) => *g,
            ResolvedEnd::Vibrating(p) => p.gain(o),
        }
    }
}

/// A hop with normalization constants resolved, for repeated exact evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopGains {
    scale: f64,
    tx: ResolvedEnd,
    rx: ResolvedEnd,
}

impl HopGains {
    pub fn new(hop: &HopSpec) -> Result<Self> {
        hop.validate()?;
        Ok(Self {
            scale: hop.power_scale(),
            tx: ResolvedEnd::new(&hop.tx)?,
            rx: ResolvedEnd::new(&hop.rx)?,
        })
    }

    pub fn tx_vibrates(&self) -> bool {
        matches!(self.tx, ResolvedEnd::Vibrating(_))
    }

    pub fn rx_vibrates(&self) -> bool {
        matches!(self.rx, ResolvedEnd::Vibrating(_))
    }

    /// Received power with the full pattern at both ends; ground ends ignore their tilt.
    pub fn power(&self, tx: Orientation, rx: Orientation) -> f64 {
        self.scale * self.tx.gain(tx) * self.rx.gain(rx)
    }
}

/// Staircase gain levels of one end with their Rayleigh weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EndLevels {
    pub gains: Vec<f64>,
    pub weights: Vec<f64>,
    /// Mass beyond the last step.
    pub tail: f64,
}

impl EndLevels {
    pub fn new(end: &AntennaEnd, model: &VibrationModel, sp: &StaircaseParams) -> Result<Self> {
        sp.validate()?;
        let cfg = end.array();
        let peak = GainPattern::new(cfg)?.boresight_gain();
        match end {
            AntennaEnd::GroundAligned(_) => Ok(Self {
                gains: vec![peak],
                weights: vec![1.0],
                tail: 0.0,
            }),
            AntennaEnd::Vibrating(_) => {
                let n = cfg.elements_per_side;
                let steps = sp.total_steps();
                let mut gains = Vec::with_capacity(steps as usize);
                let mut weights = Vec::with_capacity(steps as usize);
                for j in 1..=steps {
                    let edge = sp.breakpoint(j, n);
                    let psi = 2.0 * std::f64::consts::PI * cfg.spacing_x * edge.sin();
                    gains.push(peak * sine_ratio_squared(f64::from(n), psi));
                    weights.push(step_mass(sp.breakpoint(j - 1, n), edge, model));
                }
                Ok(Self {
                    gains,
                    weights,
                    tail: truncation_mass(n, sp, model),
                })
            }
        }
    }
}

fn combined_tail(a: &EndLevels, b: &EndLevels) -> f64 {
    a.tail + b.tail - a.tail * b.tail
}

/// Direct double sum over step pairs.
fn staircase_outage(scale: f64, a: &EndLevels, b: &EndLevels, threshold_w: f64) -> f64 {
    let mut fail = 0.0;
    for (&ga, &wa) in a.gains.iter().zip(&a.weights) {
        let mut row = 0.0;
        for (&gb, &wb) in b.gains.iter().zip(&b.weights) {
            if scale * ga * gb < threshold_w {
                row += wb;
            }
        }
        fail += wa * row;
    }
    (fail + combined_tail(a, b)).min(1.0)
}

fn check_threshold(threshold_w: f64) -> Result<()> {
    if threshold_w >= 0.0 && threshold_w.is_finite() {
        Ok(())
    } else {
        Err(domain("threshold", threshold_w, ">= 0 W"))
    }
}

/// Closed-form outage of any hop; ground ends contribute a single boresight level.
pub fn hop_outage(
    hop: &HopSpec,
    model: &VibrationModel,
    sp: &StaircaseParams,
    threshold_w: f64,
) -> Result<f64> {
    hop.validate()?;
    check_threshold(threshold_w)?;
    let a = EndLevels::new(&hop.tx, model, sp)?;
    let b = EndLevels::new(&hop.rx, model, sp)?;
    Ok(staircase_outage(hop.power_scale(), &a, &b, threshold_w))
}

/// Outage of a ground-to-platform or platform-to-ground hop.
pub fn hop_outage_single_vibrating(
    hop: &HopSpec,
    model: &VibrationModel,
    sp: &StaircaseParams,
    threshold_w: f64,
) -> Result<f64> {
    match hop.vibrating_ends() {
        VibratingEnds::TxOnly | VibratingEnds::RxOnly => hop_outage(hop, model, sp, threshold_w),
        other => Err(Error::Config(format!(
            "expected exactly one vibrating end, found {other:?}"
        ))),
    }
}

/// Outage of a platform-to-platform hop.
pub fn hop_outage_double_vibrating(
    hop: &HopSpec,
    model: &VibrationModel,
    sp: &StaircaseParams,
    threshold_w: f64,
) -> Result<f64> {
    match hop.vibrating_ends() {
        VibratingEnds::Both => hop_outage(hop, model, sp, threshold_w),
        other => Err(Error::Config(format!(
            "expected two vibrating ends, found {other:?}"
        ))),
    }
}

/// Outage of a fixed pair of ends as a function of P_t · h_L.
///
/// Step pairs are sorted by combined gain so each evaluation is a binary
/// search; used where the same arrays are evaluated over many lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageCurve {
    gains: Vec<f64>,
    cumulative: Vec<f64>,
    tail: f64,
}

impl OutageCurve {
    pub fn new(a: &EndLevels, b: &EndLevels) -> Self {
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(a.gains.len() * b.gains.len());
        for (&ga, &wa) in a.gains.iter().zip(&a.weights) {
            for (&gb, &wb) in b.gains.iter().zip(&b.weights) {
                pairs.push((ga * gb, wa * wb));
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut cumulative = Vec::with_capacity(pairs.len() + 1);
        let mut acc = 0.0;
        cumulative.push(acc);
        for &(_, w) in &pairs {
            acc += w;
            cumulative.push(acc);
        }
        Self {
            gains: pairs.into_iter().map(|p| p.0).collect(),
            cumulative,
            tail: combined_tail(a, b),
        }
    }

    pub fn for_ends(
        tx: &AntennaEnd,
        rx: &AntennaEnd,
        model: &VibrationModel,
        sp: &StaircaseParams,
    ) -> Result<Self> {
        Ok(Self::new(
            &EndLevels::new(tx, model, sp)?,
            &EndLevels::new(rx, model, sp)?,
        ))
    }

    /// Outage at received-power scale P_t · h_L.
    pub fn outage(&self, power_scale: f64, threshold_w: f64) -> f64 {
        let failing = self.gains.partition_point(|&g| power_scale * g < threshold_w);
        (self.cumulative[failing] + self.tail).min(1.0)
    }
}

/// 1 − ∏(1 − p_k): decode-and-forward fails when any hop fails.
pub fn end_to_end_exact(per_hop: &[f64]) -> f64 {
    let survive: f64 = per_hop.iter().map(|p| 1.0 - p).product();
    (1.0 - survive).clamp(0.0, 1.0)
}

/// Union bound min(Σ p_k, 1).
pub fn end_to_end_approx(per_hop: &[f64]) -> f64 {
    per_hop.iter().sum::<f64>().min(1.0)
}

/// Second-order term Σ_{k<l} p_k p_l bounding `approx − exact`.
pub fn pairwise_bound(per_hop: &[f64]) -> f64 {
    let sum: f64 = per_hop.iter().sum();
    let squares: f64 = per_hop.iter().map(|p| p * p).sum();
    0.5 * (sum * sum - squares)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageReport {
    pub per_hop: Vec<f64>,
    pub end_to_end_exact: f64,
    pub end_to_end_approx: f64,
}

impl OutageReport {
    pub fn from_hops(per_hop: Vec<f64>) -> Self {
        Self {
            end_to_end_exact: end_to_end_exact(&per_hop),
            end_to_end_approx: end_to_end_approx(&per_hop),
            per_hop,
        }
    }
}

/// A ground-to-platform (or platform-to-ground) link whose platform array is being sized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointLink {
    pub transmit_power_w: f64,
    pub channel_gain: f64,
    pub ground: ArrayConfig,
    /// Spacing, steering and element of the platform array; its size is ignored.
    pub platform: ArrayConfig,
}

impl EndpointLink {
    pub fn hop(&self, elements_per_side: u32) -> HopSpec {
        HopSpec {
            transmit_power_w: self.transmit_power_w,
            channel_gain: self.channel_gain,
            tx: AntennaEnd::GroundAligned(self.ground),
            rx: AntennaEnd::Vibrating(ArrayConfig {
                elements_per_side,
                ..self.platform
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointChoice {
    pub elements_per_side: u32,
    /// Closed-form outage of the endpoint hop with this array.
    pub outage: f64,
    /// Whether the outage meets the target.
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
struct SizingCandidate {
    n: u32,
    curve: OutageCurve,
}

/// Outage curves for every candidate platform array of one endpoint link,
/// reusable across link lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointSizer {
    candidates: Vec<SizingCandidate>,
}

impl EndpointSizer {
    pub fn new(
        ground: &ArrayConfig,
        platform: &ArrayConfig,
        model: &VibrationModel,
        sp: &StaircaseParams,
        n_range: RangeInclusive<u32>,
    ) -> Result<Self> {
        if n_range.is_empty() || *n_range.start() == 0 {
            return Err(Error::Config(format!(
                "endpoint array range {}..={} must be nonempty and start at 1 or more",
                n_range.start(),
                n_range.end()
            )));
        }
        let ground_levels = EndLevels::new(&AntennaEnd::GroundAligned(*ground), model, sp)?;
        let candidates = n_range
            .map(|n| {
                let end = AntennaEnd::Vibrating(ArrayConfig {
                    elements_per_side: n,
                    ..*platform
                });
                end.array().validate()?;
                let levels = EndLevels::new(&end, model, sp)?;
                Ok(SizingCandidate {
                    n,
                    curve: OutageCurve::new(&ground_levels, &levels),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { candidates })
    }

    pub fn sizes(&self) -> impl Iterator<Item = u32> + '_ {
        self.candidates.iter().map(|c| c.n)
    }

    /// Endpoint hop outage for array side `n` at received-power scale P_t · h_L.
    pub fn outage(&self, n: u32, power_scale: f64, threshold_w: f64) -> Option<f64> {
        self.candidates
            .iter()
            .find(|c| c.n == n)
            .map(|c| c.curve.outage(power_scale, threshold_w))
    }

    /// Size minimizing the hop outage; the smaller array wins ties.
    pub fn choose(&self, power_scale: f64, threshold_w: f64, target: f64) -> EndpointChoice {
        let mut best: Option<(f64, u32)> = None;
        for c in &self.candidates {
            let outage = c.curve.outage(power_scale, threshold_w);
            if best.is_none_or(|(o, _)| outage < o) {
                best = Some((outage, c.n));
            }
        }
        let (outage, n) = best.expect("sizer has at least one candidate");
        EndpointChoice {
            elements_per_side: n,
            outage,
            feasible: outage < target,
        }
    }
}

/// Platform array size for an endpoint link; see [`EndpointSizer::choose`].
/// `feasible` records whether the chosen outage is below `target`.
pub fn lemma2_optimal_endpoint_n(
    link: &EndpointLink,
    model: &VibrationModel,
    sp: &StaircaseParams,
    threshold_w: f64,
    target: f64,
    n_range: RangeInclusive<u32>,
) -> Result<EndpointChoice> {
    check_threshold(threshold_w)?;
    link.hop(1).validate()?;
    let sizer = EndpointSizer::new(&link.ground, &link.platform, model, sp, n_range)?;
    Ok(sizer.choose(link.transmit_power_w * link.channel_gain, threshold_w, target))
}
