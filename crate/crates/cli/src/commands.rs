use std::path::PathBuf;

use clap::{Args, ValueEnum};
use mmw_backhaul::antenna::{staircase_gain, GainPattern};
use mmw_backhaul::atmosphere::{
    channel_gain, oxygen_specific_attenuation, water_specific_attenuation, Atmosphere, PathGeometry,
};
use mmw_backhaul::chain::{chain_hops, chain_outage};
use mmw_backhaul::geometry::{hop_paths, inter_hop_length, ChainPlan};
use mmw_backhaul::montecarlo::{simulate_chain, simulate_hop, EmpiricalEstimate};
use mmw_backhaul::optimizer::{brute_force_optimize, optimize_traced, DesignSolution, TraceRow};
use mmw_backhaul::outage::{hop_outage, pairwise_bound, AntennaEnd, HopSpec};
use mmw_backhaul::units::linear_to_db;
use mmw_backhaul::vibration::VibrationModel;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

pub struct Context {
    pub cfg: RunConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Context {
    fn table(&self, command: &str, header: Vec<&'static str>) -> Table {
        let mut t = Table::new(header);
        t.comment(format!("backhaul {command}"))
            .comment(format!("config_sha256={}", self.cfg.hash()))
            .comment(format!("seed={}", self.cfg.simulation.seed));
        t
    }

    /// Report commands print text unless CSV was asked for or a file given.
    fn wants_csv(&self) -> bool {
        self.format == Format::Csv || self.out.is_some()
    }
}

/// `start:stop:step`, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err("expected start:stop:step".into());
        };
        if !(step > 0.0 && step.is_finite() && start.is_finite() && stop >= start) {
            return Err("need finite start <= stop and step > 0".into());
        }
        Ok(Self { start, stop, step })
    }
}

#[derive(Debug, Args)]
pub struct AttenuationArgs {
    /// Frequencies in GHz as start:stop:step.
    #[arg(long, default_value = "50:80:0.5")]
    pub frequencies_ghz: Range,
}

pub fn attenuation(ctx: &Context, args: &AttenuationArgs) -> Result<(), CliError> {
    let rho = ctx.cfg.atmosphere.water_vapor_density_g_m3;
    let mut t = ctx.table(
        "attenuation",
        vec!["frequency_ghz", "oxygen_db_per_km", "water_db_per_km", "total_db_per_km"],
    );
    t.comment(format!("water_vapor_density_g_m3={rho}"));
    for f in args.frequencies_ghz.values() {
        let o = oxygen_specific_attenuation(f)?;
        let w = water_specific_attenuation(f, rho)?;
        t.push(vec![num(f), num(o), num(w), num(o + w)]);
    }
    t.emit(ctx.out.as_deref())
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Elements per side of the square array.
    #[arg(long, default_value_t = 8)]
    pub elements: u32,
    /// Azimuth of the cut, degrees.
    #[arg(long, default_value_t = 0.0)]
    pub phi_deg: f64,
    /// Off-boresight angles in degrees as start:stop:step.
    #[arg(long, default_value = "0:20:0.05")]
    pub theta_deg: Range,
}

pub fn pattern(ctx: &Context, args: &PatternArgs) -> Result<(), CliError> {
    let cfg = ctx.cfg.radios().array(args.elements);
    let gp = GainPattern::new(&cfg)?;
    let sp = ctx.cfg.scenario()?.staircase;
    let mut t = ctx.table("pattern", vec!["theta_deg", "gain_dbi", "radial_dbi", "staircase_dbi"]);
    t.comment(format!("elements_per_side={} phi_deg={}", args.elements, args.phi_deg))
        .comment(format!("normalization_constant={}", gp.g0))
        .comment(format!("boresight_dbi={}", linear_to_db(gp.boresight_gain())));
    let phi = args.phi_deg.to_radians();
    for deg in args.theta_deg.values() {
        let theta = deg.to_radians();
        t.push(vec![
            num(deg),
            num(linear_to_db(gp.gain_at(theta, phi))),
            num(linear_to_db(gp.radial_gain(theta))),
            num(linear_to_db(staircase_gain(theta, &cfg, &sp)?)),
        ]);
    }
    t.emit(ctx.out.as_deref())
}

#[derive(Debug, Args)]
pub struct OutageArgs {
    /// Sweep single relay-to-relay hops instead of evaluating the configured plan.
    #[arg(long)]
    pub sweep: bool,
    /// Hop lengths in km as start:stop:step.
    #[arg(long, default_value = "1:6:0.25", requires = "sweep")]
    pub lengths_km: Range,
    /// Elements per side; one curve per value.
    #[arg(long, value_delimiter = ',', default_value = "5,10", requires = "sweep")]
    pub elements: Vec<u32>,
    /// Vibration levels in degrees; defaults to the configured value.
    #[arg(long, value_delimiter = ',', requires = "sweep")]
    pub sigmas_deg: Vec<f64>,
    /// Carrier frequencies; defaults to the configured value.
    #[arg(long, value_delimiter = ',', requires = "sweep")]
    pub frequencies_ghz: Vec<f64>,
    /// Hop altitudes.
    #[arg(long, value_delimiter = ',', default_value = "2.5", requires = "sweep")]
    pub heights_km: Vec<f64>,
}

pub fn outage(ctx: &Context, args: &OutageArgs) -> Result<(), CliError> {
    if args.sweep {
        sweep(ctx, args)
    } else {
        plan_report(ctx)
    }
}

fn or_default(v: &[f64], d: f64) -> Vec<f64> {
    if v.is_empty() {
        vec![d]
    } else {
        v.to_vec()
    }
}

fn relay_hop(ctx: &Context, atm: &Atmosphere, fc: f64, n: u32, length_km: f64, height_km: f64) -> Result<HopSpec, CliError> {
    let path = PathGeometry::horizontal(length_km, height_km)?;
    let array = ctx.cfg.radios().array(n);
    Ok(HopSpec {
        transmit_power_w: ctx.cfg.radio.relay_power_w,
        channel_gain: channel_gain(fc, atm, &path)?,
        tx: AntennaEnd::Vibrating(array),
        rx: AntennaEnd::Vibrating(array),
    })
}

fn sweep(ctx: &Context, args: &OutageArgs) -> Result<(), CliError> {
    let scenario = ctx.cfg.scenario()?;
    let atm = ctx.cfg.atmosphere()?;
    let mut t = ctx.table(
        "outage --sweep",
        vec!["frequency_ghz", "height_km", "sigma_deg", "elements_per_side", "length_km", "outage"],
    );
    t.comment(format!("threshold_dbm={}", ctx.cfg.link.threshold_dbm));
    for fc in or_default(&args.frequencies_ghz, ctx.cfg.radio.carrier_frequency_ghz) {
        for &h in &args.heights_km {
            for sigma in or_default(&args.sigmas_deg, ctx.cfg.vibration.sigma_theta_deg) {
                let model = VibrationModel::from_degrees(sigma)?;
                for &n in &args.elements {
                    for l in args.lengths_km.values() {
                        let hop = relay_hop(ctx, &atm, fc, n, l, h)?;
                        let p = hop_outage(&hop, &model, &scenario.staircase, scenario.threshold_w)?;
                        t.push(vec![num(fc), num(h), num(sigma), n.to_string(), num(l), num(p)]);
                    }
                }
            }
        }
    }
    t.emit(ctx.out.as_deref())
}

fn hop_kind(k: usize, last: usize) -> &'static str {
    match k {
        0 => "source",
        _ if k == last => "destination",
        _ => "relay",
    }
}

fn describe_plan(plan: &ChainPlan, inter_km: f64) -> String {
    let a = plan.arrays;
    format!(
        "M={} L_s={:.3} km @ {:.2}°  L_d={:.3} km @ {:.2}°  L_i={:.3} km  N=(s {}, u1 {}, u {}, uM {}, d {})",
        plan.relay_count,
        plan.source_link_length_km,
        plan.source_elevation.to_degrees(),
        plan.dest_link_length_km,
        plan.dest_elevation.to_degrees(),
        inter_km,
        a.source,
        a.first_relay_rx,
        a.relay,
        a.last_relay_tx,
        a.dest,
    )
}

fn plan_report(ctx: &Context) -> Result<(), CliError> {
    let scenario = ctx.cfg.scenario()?;
    let plan = ctx.cfg.plan()?;
    let report = chain_outage(&plan, &scenario)?;
    let hops = chain_hops(&plan, &scenario)?;
    let paths = hop_paths(&plan, &scenario.region)?;
    let inter = inter_hop_length(&plan, &scenario.region)?;
    let last = hops.len() - 1;
    let bound = pairwise_bound(&report.per_hop);

    if ctx.wants_csv() {
        let mut t = ctx.table("outage", vec!["hop", "kind", "length_km", "channel_gain_db", "outage"]);
        t.comment(describe_plan(&plan, inter))
            .comment(format!("end_to_end_exact={}", report.end_to_end_exact))
            .comment(format!("end_to_end_approx={}", report.end_to_end_approx))
            .comment(format!("pairwise_bound={bound}"));
        for (k, ((hop, path), p)) in hops.iter().zip(&paths).zip(&report.per_hop).enumerate() {
            t.push(vec![
                (k + 1).to_string(),
                hop_kind(k, last).into(),
                num(path.length_km),
                num(linear_to_db(hop.channel_gain)),
                num(*p),
            ]);
        }
        return t.emit(ctx.out.as_deref());
    }
    println!("{}", describe_plan(&plan, inter));
    println!("{:>4}  {:<11} {:>9} {:>9} {:>11}", "hop", "kind", "km", "h_L dB", "outage");
    for (k, ((hop, path), p)) in hops.iter().zip(&paths).zip(&report.per_hop).enumerate() {
        println!(
            "{:>4}  {:<11} {:>9.3} {:>9.2} {:>11.3e}",
            k + 1,
            hop_kind(k, last),
            path.length_km,
            linear_to_db(hop.channel_gain),
            p
        );
    }
    println!("end-to-end exact  {:.4e}", report.end_to_end_exact);
    println!("end-to-end approx {:.4e}", report.end_to_end_approx);
    println!("pairwise bound    {bound:.4e}");
    Ok(())
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Also compute the closed form and report the difference in standard errors.
    #[arg(long)]
    pub compare: bool,
    /// Simulate one relay-to-relay hop of this length instead of the configured plan.
    #[arg(long)]
    pub hop_length_km: Option<f64>,
    /// Elements per side for the single hop.
    #[arg(long, default_value_t = 8, requires = "hop_length_km")]
    pub elements: u32,
    /// Altitude of the single hop.
    #[arg(long, default_value_t = 2.5, requires = "hop_length_km")]
    pub height_km: f64,
}

pub fn simulate(ctx: &Context, args: &SimulateArgs) -> Result<(), CliError> {
    let scenario = ctx.cfg.scenario()?;
    let sim = ctx.cfg.simulation();
    let (label, est, closed): (String, EmpiricalEstimate, Option<f64>) = match args.hop_length_km {
        Some(l) => {
            let atm = ctx.cfg.atmosphere()?;
            let fc = ctx.cfg.radio.carrier_frequency_ghz;
            let hop = relay_hop(ctx, &atm, fc, args.elements, l, args.height_km)?;
            let est = simulate_hop(&hop, &scenario.vibration, scenario.threshold_w, &sim)?;
            let closed = args
                .compare
                .then(|| hop_outage(&hop, &scenario.vibration, &scenario.staircase, scenario.threshold_w))
                .transpose()?;
            (format!("hop N={} L={l} km H={} km", args.elements, args.height_km), est, closed)
        }
        None => {
            let plan = ctx.cfg.plan()?;
            let est = simulate_chain(&plan, &scenario, &sim)?;
            let closed = args
                .compare
                .then(|| chain_outage(&plan, &scenario).map(|r| r.end_to_end_exact))
                .transpose()?;
            let inter = inter_hop_length(&plan, &scenario.region)?;
            (describe_plan(&plan, inter), est, closed)
        }
    };

    if ctx.wants_csv() {
        let mut header = vec!["outage_estimate", "standard_error", "trials", "seed"];
        let mut row = vec![
            num(est.outage_estimate),
            num(est.standard_error),
            est.trials.to_string(),
            sim.seed.to_string(),
        ];
        if let Some(c) = closed {
            header.extend(["closed_form", "z_score"]);
            row.extend([num(c), num(est.z_score(c))]);
        }
        let mut t = ctx.table("simulate", header);
        t.comment(label);
        t.push(row);
        return t.emit(ctx.out.as_deref());
    }
    println!("{label}");
    println!(
        "monte carlo  {:.4e} ± {:.2e}  ({} trials, seed {})",
        est.outage_estimate, est.standard_error, est.trials, sim.seed
    );
    if let Some(c) = closed {
        println!("closed form  {c:.4e}  (z = {:.2})", est.z_score(c));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Write every evaluated configuration to this CSV file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Enumerate the whole grid instead of the decomposed search.
    #[arg(long, conflicts_with = "trace")]
    pub brute_force: bool,
}

pub fn optimize(ctx: &Context, args: &OptimizeArgs) -> Result<(), CliError> {
    let scenario = ctx.cfg.scenario()?;
    let space = ctx.cfg.search_space();
    let mut rows = Vec::new();
    let sol = if args.brute_force {
        brute_force_optimize(&space, &scenario)?
    } else {
        optimize_traced(&space, &scenario, args.trace.is_some().then_some(&mut rows))?
    };
    if let Some(path) = &args.trace {
        trace_table(ctx, &rows).emit(Some(path))?;
    }
    report_design(ctx, &sol)?;
    if !sol.feasible {
        return Err(CliError::Infeasible(format!(
            "no design reaches outage {} with at most {} relays",
            ctx.cfg.link.target_outage, space.max_relays
        )));
    }
    Ok(())
}

fn trace_table(ctx: &Context, rows: &[TraceRow]) -> Table {
    let mut t = ctx.table(
        "optimize --trace",
        vec![
            "relay_count",
            "source_link_km",
            "dest_link_km",
            "inter_hop_km",
            "first_relay_rx_n",
            "last_relay_tx_n",
            "relay_n",
            "outage",
        ],
    );
    for r in rows {
        t.push(vec![
            r.relay_count.to_string(),
            num(r.source_link_km),
            num(r.dest_link_km),
            num(r.inter_hop_km),
            r.first_relay_rx_n.to_string(),
            r.last_relay_tx_n.to_string(),
            r.relay_n.to_string(),
            num(r.outage),
        ]);
    }
    t
}

fn report_design(ctx: &Context, sol: &DesignSolution) -> Result<(), CliError> {
    let Some(d) = &sol.design else {
        eprintln!("no candidate design in the search space");
        return Ok(());
    };
    let p = &d.plan;
    if ctx.wants_csv() {
        let mut t = ctx.table(
            "optimize",
            vec![
                "feasible",
                "relay_count",
                "source_link_km",
                "source_elevation_deg",
                "dest_link_km",
                "dest_elevation_deg",
                "inter_hop_km",
                "source_n",
                "first_relay_rx_n",
                "relay_n",
                "last_relay_tx_n",
                "dest_n",
                "outage_union",
                "outage_exact",
            ],
        );
        t.push(vec![
            sol.feasible.to_string(),
            p.relay_count.to_string(),
            num(p.source_link_length_km),
            num(p.source_elevation.to_degrees()),
            num(p.dest_link_length_km),
            num(p.dest_elevation.to_degrees()),
            num(d.inter_hop_length_km),
            p.arrays.source.to_string(),
            p.arrays.first_relay_rx.to_string(),
            p.arrays.relay.to_string(),
            p.arrays.last_relay_tx.to_string(),
            p.arrays.dest.to_string(),
            num(d.achieved_outage),
            num(d.exact_outage),
        ]);
        return t.emit(ctx.out.as_deref());
    }
    println!("{}", if sol.feasible { "feasible" } else { "INFEASIBLE (best found)" });
    println!("{}", describe_plan(p, d.inter_hop_length_km));
    println!("outage (union bound) {:.4e}", d.achieved_outage);
    println!("outage (exact)       {:.4e}", d.exact_outage);
    Ok(())
}
