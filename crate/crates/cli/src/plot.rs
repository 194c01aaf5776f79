//! Minimal SVG line charts with an optional second y-axis.

use std::fmt::Write;

use physgrowth::growth_model::{
    capital, evolution, evolution_capital, life_expectancy, national_gdp, working_time_curve,
};
use physgrowth::types::HOURS_PER_WEEK_AT_MAX;
use physgrowth::{AnnualSeries, ModelConstants, NationParams};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 80.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub axis: Axis,
    pub style: Style,
}

impl Series {
    pub fn curve(label: &str, axis: Axis, from: i32, to: i32, f: impl Fn(f64) -> f64) -> Self {
        Self {
            label: label.to_string(),
            points: (from..=to)
                .map(|y| (f64::from(y), f(f64::from(y))))
                .collect(),
            axis,
            style: Style::Line,
        }
    }

    pub fn data(label: &str, axis: Axis, series: &AnnualSeries) -> Self {
        Self {
            label: label.to_string(),
            points: series
                .points()
                .iter()
                .map(|&(y, v)| (f64::from(y), v))
                .collect(),
            axis,
            style: Style::Markers,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub left_label: String,
    pub right_label: Option<String>,
    pub series: Vec<Series>,
}

/// Rounded tick positions covering `[lo, hi]`, about five of them.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0 && span.is_finite()) {
        return Vec::new();
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Data range padded to include zero when close, never empty.
fn value_range<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> Option<(f64, f64)> {
    let (lo, hi) = points
        .map(|p| p.1)
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if lo > hi {
        return None;
    }
    let lo = if lo >= 0.0 && lo < 0.5 * hi { 0.0 } else { lo };
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        return Some((lo - 1.0, hi + 1.0));
    }
    let pad = 0.05 * (hi - lo);
    Some((if lo == 0.0 { 0.0 } else { lo - pad }, hi + pad))
}

impl Chart {
    pub fn render(&self) -> String {
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let all = || self.series.iter().flat_map(|s| s.points.iter());
        let (x_lo, x_hi) = all()
            .map(|p| p.0)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        let (x_lo, x_hi) = if x_lo < x_hi {
            (x_lo, x_hi)
        } else if x_lo.is_finite() {
            (x_lo - 1.0, x_lo + 1.0)
        } else {
            (0.0, 1.0)
        };
        let axis_range = |axis: Axis| {
            value_range(
                self.series
                    .iter()
                    .filter(|s| s.axis == axis)
                    .flat_map(|s| s.points.iter()),
            )
        };
        let left = axis_range(Axis::Left).unwrap_or((0.0, 1.0));
        let right = axis_range(Axis::Right);

        let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
        let sy = |v: f64, (lo, hi): (f64, f64)| MARGIN_TOP + plot_h - (v - lo) / (hi - lo) * plot_h;
        let x_axis_y = MARGIN_TOP + plot_h;
        let right_x = MARGIN_LEFT + plot_w;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(
            out,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="25" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );

        let _ = writeln!(out, r#"<g stroke="black" stroke-width="1">"#);
        let _ = writeln!(
            out,
            r#"<line x1="{MARGIN_LEFT}" y1="{x_axis_y}" x2="{right_x}" y2="{x_axis_y}"/>"#
        );
        let _ = writeln!(
            out,
            r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{x_axis_y}"/>"#
        );
        if right.is_some() {
            let _ = writeln!(
                out,
                r#"<line x1="{right_x}" y1="{MARGIN_TOP}" x2="{right_x}" y2="{x_axis_y}"/>"#
            );
        }
        let _ = writeln!(out, "</g>");

        let mut labels = String::new();
        for t in ticks(x_lo, x_hi) {
            let x = sx(t);
            let _ = writeln!(
                labels,
                r#"<line x1="{x:.2}" y1="{x_axis_y}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                x_axis_y + 5.0,
                x_axis_y + 20.0,
                tick_label(t)
            );
        }
        for t in ticks(left.0, left.1) {
            let y = sy(t, left);
            let _ = writeln!(
                labels,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 5.0,
                MARGIN_LEFT - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
        if let Some(range) = right {
            for t in ticks(range.0, range.1) {
                let y = sy(t, range);
                let _ = writeln!(
                    labels,
                    r#"<line x1="{right_x}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="start">{}</text>"#,
                    right_x + 5.0,
                    right_x + 8.0,
                    y + 4.0,
                    tick_label(t)
                );
            }
        }
        out.push_str(&labels);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let mid_y = MARGIN_TOP + plot_h / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="20" y="{mid_y:.1}" text-anchor="middle" transform="rotate(-90 20 {mid_y:.1})">{}</text>"#,
            escape(&self.left_label)
        );
        if let (Some(label), Some(_)) = (&self.right_label, right) {
            let x = WIDTH - 20.0;
            let _ = writeln!(
                out,
                r#"<text x="{x:.1}" y="{mid_y:.1}" text-anchor="middle" transform="rotate(90 {x:.1} {mid_y:.1})">{}</text>"#,
                escape(label)
            );
        }

        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let range = match s.axis {
                Axis::Left => left,
                Axis::Right => right.unwrap_or(left),
            };
            let pts = s.points.iter().filter(|p| p.1.is_finite());
            match s.style {
                Style::Line => {
                    let coords: Vec<String> = pts
                        .map(|&(x, v)| format!("{:.2},{:.2}", sx(x), sy(v, range)))
                        .collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
                        coords.join(" "),
                        escape(&s.label)
                    );
                }
                Style::Markers => {
                    let _ = writeln!(
                        out,
                        r#"<g fill="{color}"><title>{}</title>"#,
                        escape(&s.label)
                    );
                    for &(x, v) in pts {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#,
                            sx(x),
                            sy(v, range)
                        );
                    }
                    let _ = writeln!(out, "</g>");
                }
            }
            let ly = MARGIN_TOP + 10.0 + 16.0 * i as f64;
            let lx = MARGIN_LEFT + 10.0;
            let _ = writeln!(
                out,
                r#"<rect x="{lx}" y="{:.1}" width="12" height="3" fill="{color}"/><text x="{:.1}" y="{:.1}">{}{}</text>"#,
                ly - 4.0,
                lx + 18.0,
                ly,
                escape(&s.label),
                if s.axis == Axis::Right && right.is_some() {
                    " (right)"
                } else {
                    ""
                }
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Working time and spare time of a nation in hours per week, with GDP on
/// the right axis. `data` is overlaid on the left axis.
pub fn fig1(n: &NationParams, c: &ModelConstants, data: &[(String, AnnualSeries)]) -> Chart {
    let hours = HOURS_PER_WEEK_AT_MAX / c.max_working_time;
    let r = n.recovery_curve(c);
    let mut series = vec![
        Series::curve("working time w", Axis::Left, 1800, 2100, |t| {
            hours * working_time_curve(t, n, c)
        }),
        Series::curve("spare time s", Axis::Left, 1800, 2100, |t| {
            hours * (c.max_working_time - working_time_curve(t, n, c))
        }),
        Series::curve(
            &format!("GDP per capita {}", n.name),
            Axis::Right,
            1800,
            2100,
            |t| national_gdp(t, &r),
        ),
    ];
    series.extend(
        data.iter()
            .map(|(label, s)| Series::data(label, Axis::Left, s)),
    );
    Chart {
        title: format!("Working time and GDP, {}", n.name),
        x_label: "year".into(),
        left_label: "hours per week".into(),
        right_label: Some("US$ (1991) per capita".into()),
        series,
    }
}

/// GDP and physical capital, each normalized to unit amplitude, for the
/// evolution and a nation; the capital curves trail GDP.
pub fn fig3(n: &NationParams, c: &ModelConstants, data: &[(String, AnnualSeries)]) -> Chart {
    let r = n.recovery_curve(c);
    let a_bar = c.max_gdp;
    let k_bar = n.mu_bar * c.capital_lifetime * a_bar;
    let mut series = vec![
        Series::curve("evolution GDP", Axis::Left, 1900, 2200, |t| {
            evolution(t, c) / a_bar
        }),
        Series::curve("evolution capital", Axis::Left, 1900, 2200, |t| {
            evolution_capital(t, n.mu_bar, c) / k_bar
        }),
        Series::curve(&format!("{} GDP", n.name), Axis::Left, 1900, 2200, |t| {
            national_gdp(t, &r) / a_bar
        }),
        Series::curve(
            &format!("{} capital", n.name),
            Axis::Left,
            1900,
            2200,
            |t| capital(t, n, c) / k_bar,
        ),
    ];
    series.extend(
        data.iter()
            .map(|(label, s)| Series::data(label, Axis::Left, s)),
    );
    Chart {
        title: "GDP and physical capital normalized to the same amplitude".into(),
        x_label: "year".into(),
        left_label: "fraction of amplitude".into(),
        right_label: None,
        series,
    }
}

/// National recoveries and the evolution on the right axis, life expectancy
/// on the left. `data` is overlaid on the right axis.
pub fn fig4(c: &ModelConstants, data: &[(String, AnnualSeries)]) -> Chart {
    let mut series: Vec<Series> = ["usa", "germany", "japan", "korea"]
        .iter()
        .filter_map(|name| NationParams::preset(name))
        .map(|n| {
            let r = n.recovery_curve(c);
            Series::curve(&n.name, Axis::Right, 1900, 2100, |t| national_gdp(t, &r))
        })
        .collect();
    series.push(Series::curve("evolution", Axis::Right, 1900, 2100, |t| {
        evolution(t, c)
    }));
    series.push(Series::curve(
        "life expectancy",
        Axis::Left,
        1900,
        2100,
        |t| life_expectancy(t, c),
    ));
    series.extend(
        data.iter()
            .map(|(label, s)| Series::data(label, Axis::Right, s)),
    );
    Chart {
        title: "National recoveries and life expectancy".into(),
        x_label: "year".into(),
        left_label: "life expectancy [years]".into(),
        right_label: Some("GDP per capita, US$ (1991)".into()),
        series,
    }
}

/// Arbitrary series as markers, split over the two axes.
pub fn custom(left: &[(String, AnnualSeries)], right: &[(String, AnnualSeries)]) -> Chart {
    let series = left
        .iter()
        .map(|(l, s)| Series::data(l, Axis::Left, s))
        .chain(right.iter().map(|(l, s)| Series::data(l, Axis::Right, s)))
        .collect();
    Chart {
        title: String::new(),
        x_label: "year".into(),
        left_label: left
            .first()
            .map(|(_, s)| s.unit().to_string())
            .unwrap_or_default(),
        right_label: right.first().map(|(_, s)| s.unit().to_string()),
        series,
    }
}
