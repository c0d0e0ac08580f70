//! Deterministic SVG charts. Coordinates are printed with two decimals so
//! identical input gives byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use bellgraph::scenario::JointVertex;

use crate::error::CliError;

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// One line of a chart: `(x, y)` points in increasing `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{:.2}" y="24.00" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
}

fn axes(out: &mut String) {
    let (x0, y0, x1, y1) = (LEFT, HEIGHT - BOTTOM, WIDTH - RIGHT, TOP);
    writeln!(
        out,
        r#"<path d="M {x0:.2} {y1:.2} L {x0:.2} {y0:.2} L {x1:.2} {y0:.2}" fill="none" stroke="black"/>"#
    )
    .unwrap();
}

fn nice_max(v: f64) -> f64 {
    if !(v.is_finite() && v > 0.0) {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    for step in [1.0, 2.0, 2.5, 5.0, 10.0] {
        if step * mag >= v {
            return step * mag;
        }
    }
    10.0 * mag
}

/// Bar chart of the sixteen vertex weights. `metadata` is embedded verbatim
/// in a CDATA block so the file can be re-checked.
pub fn render_distribution(title: &str, weights: &[f64; 16], metadata: &str) -> String {
    let mut out = String::new();
    open(&mut out, title);
    writeln!(out, "<metadata><![CDATA[{}]]></metadata>", metadata.trim_end()).unwrap();
    axes(&mut out);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let top = nice_max(weights.iter().copied().fold(0.0, f64::max));
    for k in 0..=4 {
        let v = top * k as f64 / 4.0;
        let y = HEIGHT - BOTTOM - plot_h * k as f64 / 4.0;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#,
            LEFT - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    let slot = plot_w / 16.0;
    for v in JointVertex::all() {
        let i = v.index();
        let h = (weights[i].max(0.0) / top) * plot_h;
        let x = LEFT + slot * i as f64 + slot * 0.15;
        writeln!(
            out,
            r##"<rect x="{x:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="#1f77b4"><title>{v}: {}</title></rect>"##,
            HEIGHT - BOTTOM - h,
            slot * 0.7,
            weights[i]
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{v}</text>"#,
            x + slot * 0.35,
            HEIGHT - BOTTOM + 16.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">outcome ab|xy</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

/// Line chart with a base-10 log x-axis and a linear y-axis from zero.
pub fn render_series(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out);

    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .filter(|x| *x > 0.0)
        .collect();
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lx0, lx1) = if xs.is_empty() {
        (0.0, 1.0)
    } else {
        let (a, b) = (lo.log10().floor(), hi.log10().ceil());
        (a, if b > a { b } else { a + 1.0 })
    };
    let ymax = nice_max(
        series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1))
            .filter(|y| y.is_finite())
            .fold(0.0, f64::max),
    );

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x.log10() - lx0) / (lx1 - lx0) * plot_w;
    let py = |y: f64| HEIGHT - BOTTOM - y / ymax * plot_h;

    for d in (lx0 as i32)..=(lx1 as i32) {
        let x = px(10f64.powi(d));
        writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#,
            HEIGHT - BOTTOM + 16.0
        )
        .unwrap();
    }
    for k in 0..=4 {
        let v = ymax * k as f64 / 4.0;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3e}</text>"#,
            LEFT - 6.0,
            py(v) + 4.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="16.00" y="{:.2}" text-anchor="middle" transform="rotate(-90 16.00 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    )
    .unwrap();

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
            LEFT + 10.0,
            TOP + 14.0 * (i as f64 + 1.0),
            escape(&s.label)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Median of the non-NaN values; `None` if there are none.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

/// Groups `(method, n, value)` triples into one median series per method.
pub fn median_series(rows: impl IntoIterator<Item = (String, u64, f64)>) -> Vec<Series> {
    let mut groups: BTreeMap<String, BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    for (method, n, v) in rows {
        groups.entry(method).or_default().entry(n).or_default().push(v);
    }
    groups
        .into_iter()
        .map(|(label, by_n)| Series {
            label,
            points: by_n
                .into_iter()
                .filter_map(|(n, vs)| median(&vs).map(|m| (n as f64, m)))
                .collect(),
        })
        .collect()
}

/// Which kind of CSV a header row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Sweep,
    Bench,
}

pub fn detect(headers: &csv::StringRecord) -> Option<CsvKind> {
    let has = |name: &str| headers.iter().any(|h| h == name);
    if has("n") && has("method") && has("error") {
        Some(CsvKind::Sweep)
    } else if has("n") && has("method") && has("elapsed_ns") && has("repeat") {
        Some(CsvKind::Bench)
    } else {
        None
    }
}

/// Renders a sweep CSV (median error against N) or a bench CSV (median
/// runtime against N).
pub fn render_csv(text: &str) -> Result<String, CliError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Input(e.to_string()))?
        .clone();
    let kind = detect(&headers).ok_or_else(|| {
        CliError::Input("unrecognized CSV header (expected sweep or bench output)".into())
    })?;
    let col = |name: &str| headers.iter().position(|h| h == name).expect("checked by detect");
    let (value_col, scale) = match kind {
        CsvKind::Sweep => (col("error"), 1.0),
        CsvKind::Bench => (col("elapsed_ns"), 1e-9),
    };
    let (n_col, m_col) = (col("n"), col("method"));

    let mut rows = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Input(e.to_string()))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let n: u64 = field(n_col)
            .parse()
            .map_err(|_| CliError::Input(format!("row {}: bad n {:?}", line + 1, field(n_col))))?;
        let v: f64 = field(value_col).parse().map_err(|_| {
            CliError::Input(format!("row {}: bad value {:?}", line + 1, field(value_col)))
        })?;
        rows.push((field(m_col).to_string(), n, v * scale));
    }
    if rows.is_empty() {
        return Err(CliError::Input("CSV has no data rows".into()));
    }
    let series = median_series(rows);
    Ok(match kind {
        CsvKind::Sweep => render_series("max_s error against N", "N (accepted samples)", "median |max_s - analytic|", &series),
        CsvKind::Bench => render_series("runtime against N", "N (accepted samples)", "median seconds", &series),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_handles_even_and_nan() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[f64::NAN, 5.0]), Some(5.0));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn distribution_chart_is_deterministic() {
        let w = [0.25; 16];
        let a = render_distribution("t", &w, "{}");
        assert_eq!(a, render_distribution("t", &w, "{}"));
        assert_eq!(a.matches("<rect x=").count(), 16);
        assert!(a.contains("<![CDATA[{}]]>"));
    }

    #[test]
    fn csv_detection() {
        let sweep = "n,seed,method,max_s,error,delta,residual_max,elapsed_ns,accepted,proposed,status\n\
                     1000,0,rejection,3.9,0.1,0,0,5,1000,2000,ok\n";
        let svg = render_csv(sweep).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        let bench = "n,method,repeat,seed,elapsed_ns,accepted,proposed\n1000,rejection,0,1,100,1000,2000\n";
        assert!(render_csv(bench).is_ok());
        assert!(render_csv("a,b\n1,2\n").is_err());
        assert!(render_csv("n,method,repeat,seed,elapsed_ns,accepted,proposed\n").is_err());
        assert!(render_csv("n,method,repeat,seed,elapsed_ns,accepted,proposed\nx,r,0,1,1,1,1\n").is_err());
    }
}
