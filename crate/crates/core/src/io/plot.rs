//! Deterministic SVG line plots of concurrence against γt.

use std::fmt::Write;

use serde::Serialize;

use super::CODE_VERSION;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::OracleConfig;
use crate::scenarios::{CurveSet, Engine, Param, TimeWindow};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const COLORS: [&str; 6] = [
    "#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
];
const DASHES: [&str; 4] = ["", "7,4", "2,3", "9,3,2,3"];

#[derive(Serialize)]
struct PlotMetadata<'a> {
    version: &'a str,
    name: &'a str,
    description: &'a str,
    engine: Engine,
    varied: Option<Param>,
    t_window: TimeWindow,
    solver: OracleConfig,
    curves: Vec<(&'a str, &'a ModelParams)>,
    failures: Vec<(&'a str, &'a str)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick spacing of 1, 2 or 5 times a power of ten giving about `target`
/// intervals over `span`.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let mult = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    mult * mag
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Renders every curve of `set` as a polyline on fixed axes, concurrence in
/// [0, 1]. Complete run metadata is embedded as JSON in `<metadata>`.
pub fn emit_plot(set: &CurveSet) -> Result<String> {
    let (t0, t1) = (set.t_window.start, set.t_window.end);
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::TimeWindow(format!(
            "cannot plot the empty window [{t0}, {t1}]"
        )));
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |t: f64| LEFT + (t - t0) / (t1 - t0) * pw;
    let sy = |c: f64| TOP + (1.0 - c.clamp(0.0, 1.0)) * ph;

    let meta = PlotMetadata {
        version: CODE_VERSION,
        name: &set.name,
        description: &set.description,
        engine: set.engine,
        varied: set.varied,
        t_window: set.t_window,
        solver: set.solver,
        curves: set
            .curves
            .iter()
            .map(|c| (c.label.as_str(), &c.params))
            .collect(),
        failures: set
            .failures
            .iter()
            .map(|f| (f.label.as_str(), f.reason.as_str()))
            .collect(),
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&set.name));
    let _ = writeln!(s, "<desc>{}</desc>", escape(&set.description));
    let _ = writeln!(
        s,
        "<metadata>{}</metadata>",
        escape(&serde_json::to_string(&meta)?)
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // Grid and ticks.
    let _ = writeln!(s, r##"<g stroke="#dddddd" stroke-width="1">"##);
    let xstep = nice_step(t1 - t0, 5.0);
    let mut xticks = Vec::new();
    let mut k = (t0 / xstep).ceil();
    while k * xstep <= t1 + 1e-9 * xstep {
        xticks.push(k * xstep);
        k += 1.0;
    }
    let yticks: Vec<f64> = (0..=5).map(|i| i as f64 * 0.2).collect();
    for &t in &xticks {
        let x = sx(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            TOP + ph
        );
    }
    for &c in &yticks {
        let y = sy(c);
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
            LEFT + pw
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );
    for &t in &xticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(t),
            TOP + ph + 18.0,
            tick_label(t)
        );
    }
    for &c in &yticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            sy(c) + 4.0,
            tick_label(c)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">γt</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">Concurrence</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-weight="bold">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&set.name)
    );

    // Curves and legend.
    for (i, curve) in set.curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = DASHES[(i / COLORS.len() + i) % DASHES.len()];
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let mut points = String::new();
        for (&t, &c) in curve.trajectory.times.iter().zip(&curve.concurrence) {
            if !points.is_empty() {
                points.push(' ');
            }
            let _ = write!(points, "{:.2},{:.2}", sx(t), sy(c));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{points}"/>"#
        );
        let ly = TOP + 12.0 + 22.0 * i as f64;
        let lx = LEFT + pw + 14.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"{dash_attr}/>"#,
            lx + 28.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 34.0,
            ly + 4.0,
            escape(&curve.label)
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
