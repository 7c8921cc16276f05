//! Monte Carlo outage estimator.
//!
//! Every vibrating antenna gets an independent per-axis Gaussian tilt, and the
//! received power uses the full element-times-array pattern, so the estimate
//! checks both the staircase and the Rayleigh simplifications of the closed form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::antenna::Orientation;
use crate::chain::{chain_hops, Scenario};
use crate::error::{domain, Error, Result};
use crate::geometry::ChainPlan;
use crate::outage::{HopGains, HopSpec};
use crate::vibration::{sample_tilt, VibrationModel};

/// Trials per random stream. Fixed so results do not depend on scheduling.
const BLOCK_TRIALS: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub worker_count_hint: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 1,
            worker_count_hint: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalEstimate {
    pub outage_estimate: f64,
    pub standard_error: f64,
    pub trials: u64,
}

impl EmpiricalEstimate {
    pub fn from_counts(failures: u64, trials: u64) -> Self {
        let p = failures as f64 / trials as f64;
        Self {
            outage_estimate: p,
            standard_error: (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
        }
    }

    /// (value − estimate) in units of the standard error; 0 when both agree
    /// exactly and the standard error vanishes.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = value - self.outage_estimate;
        if d == 0.0 {
            0.0
        } else {
            d / self.standard_error
        }
    }
}

fn count_block(gains: &[HopGains], model: &VibrationModel, threshold_w: f64, seed: u64, block: u64, trials: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut failures = 0;
    for _ in 0..trials {
        let mut failed = false;
        for g in gains {
            let tx = if g.tx_vibrates() {
                sample_tilt(model, &mut rng)
            } else {
                Orientation::BORESIGHT
            };
            let rx = if g.rx_vibrates() {
                sample_tilt(model, &mut rng)
            } else {
                Orientation::BORESIGHT
            };
            failed |= g.power(tx, rx) < threshold_w;
        }
        failures += u64::from(failed);
    }
    failures
}

/// Fraction of trials in which at least one of `hops` falls below the threshold.
pub fn simulate_links(
    hops: &[HopSpec],
    model: &VibrationModel,
    threshold_w: f64,
    cfg: &SimulationConfig,
) -> Result<EmpiricalEstimate> {
    if cfg.trials == 0 {
        return Err(domain("trials", 0.0, ">= 1"));
    }
    if hops.is_empty() {
        return Err(Error::Config("no hops to simulate".into()));
    }
    let gains = hops.iter().map(HopGains::new).collect::<Result<Vec<_>>>()?;
    let blocks = cfg.trials.div_ceil(BLOCK_TRIALS);
    let run = || -> u64 {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let n = BLOCK_TRIALS.min(cfg.trials - b * BLOCK_TRIALS);
                count_block(&gains, model, threshold_w, cfg.seed, b, n)
            })
            .sum()
    };
    let failures = if cfg.worker_count_hint > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.worker_count_hint)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run)
    } else {
        run()
    };
    Ok(EmpiricalEstimate::from_counts(failures, cfg.trials))
}

pub fn simulate_hop(
    hop: &HopSpec,
    model: &VibrationModel,
    threshold_w: f64,
    cfg: &SimulationConfig,
) -> Result<EmpiricalEstimate> {
    simulate_links(std::slice::from_ref(hop), model, threshold_w, cfg)
}

/// End-to-end estimate; the plan must be feasible.
pub fn simulate_chain(plan: &ChainPlan, scenario: &Scenario, cfg: &SimulationConfig) -> Result<EmpiricalEstimate> {
    scenario.validate()?;
    let hops = chain_hops(plan, scenario)?;
    simulate_links(&hops, &scenario.vibration, scenario.threshold_w, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::ArrayConfig;
    use crate::outage::{received_power, AntennaEnd};

    fn hop(n: u32) -> HopSpec {
        HopSpec {
            transmit_power_w: 0.2,
            channel_gain: 1e-13,
            tx: AntennaEnd::Vibrating(ArrayConfig::square(n)),
            rx: AntennaEnd::Vibrating(ArrayConfig::square(n)),
        }
    }

    fn cfg(trials: u64, seed: u64, workers: usize) -> SimulationConfig {
        SimulationConfig {
            trials,
            seed,
            worker_count_hint: workers,
        }
    }

    #[test]
    fn still_platforms_are_deterministic() {
        let h = hop(8);
        let peak = received_power(&h, 0.0, 0.0).unwrap();
        let still = VibrationModel::new(0.0).unwrap();
        let below = simulate_hop(&h, &still, peak * 0.999, &cfg(5000, 1, 0)).unwrap();
        assert_eq!(below.outage_estimate, 0.0);
        assert_eq!(below.standard_error, 0.0);
        let above = simulate_hop(&h, &still, peak * 1.001, &cfg(5000, 1, 0)).unwrap();
        assert_eq!(above.outage_estimate, 1.0);
    }

    #[test]
    fn threshold_above_peak_always_fails() {
        let h = hop(6);
        let peak = received_power(&h, 0.0, 0.0).unwrap();
        let m = VibrationModel::from_degrees(2.0).unwrap();
        assert_eq!(simulate_hop(&h, &m, peak * 1.01, &cfg(20_000, 3, 0)).unwrap().outage_estimate, 1.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let h = hop(8);
        let peak = received_power(&h, 0.0, 0.0).unwrap();
        let m = VibrationModel::from_degrees(2.0).unwrap();
        let runs: Vec<_> = [1, 2, 5, 0]
            .iter()
            .map(|&w| simulate_hop(&h, &m, peak * 0.1, &cfg(50_000, 9, w)).unwrap())
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]));
        let other = simulate_hop(&h, &m, peak * 0.1, &cfg(50_000, 10, 0)).unwrap();
        assert_ne!(runs[0], other);
    }

    #[test]
    fn zero_trials_rejected() {
        let m = VibrationModel::from_degrees(2.0).unwrap();
        assert!(simulate_hop(&hop(4), &m, 1e-12, &cfg(0, 1, 0)).is_err());
        assert!(simulate_links(&[], &m, 1e-12, &cfg(10, 1, 0)).is_err());
    }

    #[test]
    fn standard_error_formula() {
        let e = EmpiricalEstimate::from_counts(250, 1000);
        assert_eq!(e.outage_estimate, 0.25);
        assert!((e.standard_error - (0.25f64 * 0.75 / 1000.0).sqrt()).abs() < 1e-15);
    }
}
