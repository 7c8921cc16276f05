//! SVG plots of the CSV files the other subcommands write. The kind is
//! inferred from the header.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use plotters::prelude::*;

use crate::error::CliError;
use crate::table::Loaded;

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// CSV produced by attenuation, pattern, outage --sweep or optimize --trace.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub title: Option<String>,
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

struct Figure {
    title: String,
    x_label: &'static str,
    y_label: &'static str,
    log_y: bool,
    series: Vec<Series>,
}

pub fn plot(args: &PlotArgs, out: Option<&Path>) -> Result<(), CliError> {
    let out = out.ok_or_else(|| CliError::Usage("plot needs --out <file.svg>".into()))?;
    let data = Loaded::read(&args.input)?;
    let mut fig = figure(&data)?;
    if let Some(t) = &args.title {
        fig.title.clone_from(t);
    }
    draw(&fig, out)
}

fn figure(d: &Loaded) -> Result<Figure, CliError> {
    if d.rows.is_empty() {
        return Err(CliError::Usage("input has no data rows".into()));
    }
    if d.has(&["length_km", "outage", "elements_per_side"]) {
        let key = ["frequency_ghz", "height_km", "sigma_deg", "elements_per_side"];
        let series = grouped(d, &key, "length_km", "outage", |v| {
            format!("{} GHz, H={} km, σ={}°, N={}", v[0], v[1], v[2], v[3])
        })?;
        return Ok(Figure {
            title: "Hop outage".into(),
            x_label: "hop length (km)",
            y_label: "outage probability",
            log_y: true,
            series,
        });
    }
    if d.has(&["frequency_ghz", "total_db_per_km"]) {
        let x = col(d, "frequency_ghz")?;
        let series = ["oxygen_db_per_km", "water_db_per_km", "total_db_per_km"]
            .iter()
            .map(|name| {
                Ok(Series {
                    label: name.trim_end_matches("_db_per_km").into(),
                    points: pairs(d, x, col(d, name)?)?,
                })
            })
            .collect::<Result<_, CliError>>()?;
        return Ok(Figure {
            title: "Specific attenuation at sea level".into(),
            x_label: "frequency (GHz)",
            y_label: "dB/km",
            log_y: true,
            series,
        });
    }
    if d.has(&["theta_deg", "gain_dbi"]) {
        let x = col(d, "theta_deg")?;
        let series = ["gain_dbi", "radial_dbi", "staircase_dbi"]
            .iter()
            .filter_map(|name| d.column(name).map(|c| (name, c)))
            .map(|(name, c)| {
                let points = pairs(d, x, c)?.into_iter().filter(|p| p.1.is_finite()).collect();
                Ok(Series {
                    label: name.trim_end_matches("_dbi").into(),
                    points,
                })
            })
            .collect::<Result<_, CliError>>()?;
        return Ok(Figure {
            title: "Array gain".into(),
            x_label: "off-boresight angle (deg)",
            y_label: "gain (dBi)",
            log_y: false,
            series,
        });
    }
    if d.has(&["relay_count", "outage"]) {
        // Best configuration per relay count.
        let (m, o) = (col(d, "relay_count")?, col(d, "outage")?);
        let mut best: BTreeMap<u64, f64> = BTreeMap::new();
        for r in 0..d.rows.len() {
            let key = d.float(r, m)? as u64;
            let v = d.float(r, o)?;
            best.entry(key).and_modify(|b| *b = b.min(v)).or_insert(v);
        }
        return Ok(Figure {
            title: "Lowest outage per relay count".into(),
            x_label: "relays",
            y_label: "outage probability",
            log_y: true,
            series: vec![Series {
                label: "best".into(),
                points: best.into_iter().map(|(k, v)| (k as f64, v)).collect(),
            }],
        });
    }
    Err(CliError::Usage(format!("unrecognized columns: {}", d.header.join(","))))
}

fn col(d: &Loaded, name: &str) -> Result<usize, CliError> {
    d.column(name)
        .ok_or_else(|| CliError::Usage(format!("missing column {name}")))
}

fn pairs(d: &Loaded, x: usize, y: usize) -> Result<Vec<(f64, f64)>, CliError> {
    (0..d.rows.len()).map(|r| Ok((d.float(r, x)?, d.float(r, y)?))).collect()
}

fn grouped(
    d: &Loaded,
    key: &[&str],
    x: &str,
    y: &str,
    label: impl Fn(&[String]) -> String,
) -> Result<Vec<Series>, CliError> {
    let kc: Vec<usize> = key.iter().map(|k| col(d, k)).collect::<Result<_, _>>()?;
    let (x, y) = (col(d, x)?, col(d, y)?);
    let mut order: Vec<Vec<String>> = Vec::new();
    let mut groups: BTreeMap<Vec<String>, Vec<(f64, f64)>> = BTreeMap::new();
    for r in 0..d.rows.len() {
        let k: Vec<String> = kc.iter().map(|&c| d.rows[r][c].clone()).collect();
        if !groups.contains_key(&k) {
            order.push(k.clone());
        }
        groups.entry(k).or_default().push((d.float(r, x)?, d.float(r, y)?));
    }
    Ok(order
        .into_iter()
        .map(|k| Series {
            label: label(&k),
            points: groups.remove(&k).unwrap_or_default(),
        })
        .collect())
}

type Span = (f64, f64);

fn bounds(fig: &Figure) -> Result<(Span, Span), CliError> {
    let pts = fig
        .series
        .iter()
        .flat_map(|s| &s.points)
        .filter(|p| p.0.is_finite() && p.1.is_finite() && (!fig.log_y || p.1 > 0.0));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0.is_finite() && y0.is_finite()) {
        return Err(CliError::Usage("nothing plottable in input".into()));
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if fig.log_y {
        (y0, y1) = (y0 / 2.0, (y1 * 2.0).min(1.0).max(y0 * 10.0));
    } else {
        let pad = ((y1 - y0) * 0.05).max(1.0);
        (y0, y1) = (y0 - pad, y1 + pad);
    }
    Ok(((x0, x1), (y0, y1)))
}

fn draw(fig: &Figure, out: &Path) -> Result<(), CliError> {
    let ((x0, x1), (y0, y1)) = bounds(fig)?;
    let root = SVGBackend::new(out, (900, 600)).into_drawing_area();
    let err = |e: &dyn std::fmt::Display| CliError::Plot(e.to_string());
    root.fill(&WHITE).map_err(|e| err(&e))?;
    let mut builder = ChartBuilder::on(&root);
    builder
        .caption(&fig.title, ("sans-serif", 22))
        .margin(15)
        .x_label_area_size(45)
        .y_label_area_size(70);
    let palette = |i: usize| Palette99::pick(i).to_rgba();

    macro_rules! render {
        ($chart:expr) => {{
            let mut chart = $chart;
            chart
                .configure_mesh()
                .x_desc(fig.x_label)
                .y_desc(fig.y_label)
                .draw()
                .map_err(|e| err(&e))?;
            for (i, s) in fig.series.iter().enumerate() {
                let color = palette(i);
                let pts = s
                    .points
                    .iter()
                    .copied()
                    .filter(|p| p.1.is_finite() && (!fig.log_y || p.1 > 0.0));
                chart
                    .draw_series(LineSeries::new(pts, color.stroke_width(2)))
                    .map_err(|e| err(&e))?
                    .label(s.label.clone())
                    .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .map_err(|e| err(&e))?;
        }};
    }

    if fig.log_y {
        render!(builder
            .build_cartesian_2d(x0..x1, (y0..y1).log_scale())
            .map_err(|e| err(&e))?);
    } else {
        render!(builder.build_cartesian_2d(x0..x1, y0..y1).map_err(|e| err(&e))?);
    }
    root.present().map_err(|e| err(&e))?;
    Ok(())
}
