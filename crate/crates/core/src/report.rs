//! CSV/JSON serialization of sweeps and fit inputs, and a minimal SVG
//! scatter plot.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{SandwichResult, SweepKey, SweepResult, SweepRow};
use crate::fitting::QuadraticFit;

pub const SWEEP_HEADER: [&str; 6] = ["key", "mean_value", "std_dev", "zipf", "metcalfe", "ratio"];

/// Writes `key,mean_value,std_dev,zipf,metcalfe,ratio` rows.
pub fn write_sweep_csv<W: Write>(out: W, result: &SweepResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in &result.rows {
        w.serialize(row)?;
    }
    if result.rows.is_empty() {
        w.write_record(SWEEP_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SandwichRow {
    key: f64,
    mean_value: f64,
    std_dev: f64,
    zipf: f64,
    metcalfe: f64,
    ratio: f64,
    within: bool,
}

/// The sweep columns plus a trailing `within` flag per row.
pub fn write_sandwich_csv<W: Write>(out: W, result: &SandwichResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (r, &within) in result.sweep.rows.iter().zip(&result.within) {
        let SweepRow {
            key,
            mean_value,
            std_dev,
            zipf,
            metcalfe,
            ratio,
        } = *r;
        w.serialize(SandwichRow {
            key,
            mean_value,
            std_dev,
            zipf,
            metcalfe,
            ratio,
            within,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Reads two numeric columns. A first line that does not parse as numbers
/// is taken to be a header.
pub fn read_xy_csv<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut points = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::input(format!(
                "line {}: expected 2 columns, found {}",
                i + 1,
                record.len()
            )));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(y)) => points.push((x, y)),
            _ if i == 0 => continue,
            _ => {
                return Err(Error::input(format!(
                    "line {}: non-numeric value in {:?}",
                    i + 1,
                    record.iter().collect::<Vec<_>>()
                )))
            }
        }
    }
    Ok(points)
}

pub fn sweep_json(result: &SweepResult) -> String {
    serde_json::to_string_pretty(result).expect("sweep serialization cannot fail")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Points,
    Line,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub color: &'static str,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

fn bounds(series: &[Series]) -> (f64, f64, f64, f64) {
    let pts = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, 0.0f64, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    (x0, x1, y0, y1 * 1.05)
}

/// Renders a scatter/line plot on linear axes.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (x0, x1, y0, y1) = bounds(series);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" stroke="black" fill="none"/>"#
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            sx(fx),
            bottom + 16.0,
            tick(fx)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            left - 6.0,
            sy(fy) + 4.0,
            tick(fy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        HEIGHT / 2.0,
        escape(y_label)
    );

    for (i, ser) in series.iter().enumerate() {
        let pts = ser
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        match ser.style {
            Style::Points => {
                for &(x, y) in pts {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                        sx(x),
                        sy(y),
                        ser.color
                    );
                }
            }
            Style::Line => {
                let d: Vec<String> = pts
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" stroke="{}" fill="none" stroke-width="1.5"/>"#,
                    d.join(" "),
                    ser.color
                );
            }
        }
        let ly = top + 14.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/>"#,
            left + 10.0,
            ly,
            ser.color
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            left + 24.0,
            ly + 9.0,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v.abs() >= 100.0 || v == v.trunc() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Size sweeps plot mean value against the Zipf and Metcalfe curves;
/// probability sweeps plot the ratio column and, if given, its fitted
/// quadratic.
pub fn sweep_svg(title: &str, result: &SweepResult, fit: Option<&QuadraticFit>) -> String {
    match result.key {
        SweepKey::Size => {
            let col = |f: fn(&SweepRow) -> f64| result.rows.iter().map(|r| (r.key, f(r))).collect();
            let series = [
                Series {
                    name: format!("mean {}", result.metric),
                    color: "#1f77b4",
                    style: Style::Points,
                    points: col(|r| r.mean_value),
                },
                Series {
                    name: "n log10 n".into(),
                    color: "#2ca02c",
                    style: Style::Line,
                    points: col(|r| r.zipf),
                },
                Series {
                    name: "n^2".into(),
                    color: "#d62728",
                    style: Style::Line,
                    points: col(|r| r.metcalfe),
                },
            ];
            svg_plot(title, "nodes", "value", &series)
        }
        SweepKey::Probability => {
            let mut series = vec![Series {
                name: "value / (n log10 n)".into(),
                color: "#1f77b4",
                style: Style::Points,
                points: result.rows.iter().map(|r| (r.key, r.ratio)).collect(),
            }];
            if let (Some(fit), Some(first), Some(last)) =
                (fit, result.rows.first(), result.rows.last())
            {
                let (lo, hi) = (first.key, last.key);
                series.push(Series {
                    name: format!("{:.3}p^2 + {:.3}p + {:.3}", fit.a, fit.b, fit.c),
                    color: "#ff7f0e",
                    style: Style::Line,
                    points: (0..=50)
                        .map(|i| {
                            let x = lo + (hi - lo) * i as f64 / 50.0;
                            (x, fit.eval(x))
                        })
                        .collect(),
                });
            }
            svg_plot(title, "rewiring probability p", "ratio", &series)
        }
    }
}
