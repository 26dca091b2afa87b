//! Output formats: the per-iteration statistics CSV and the two SVG chart
//! types (mean-vs-m line plot, per-m box plot).

use lanczos_core::experiments::AggregateStats;
use std::fmt::Write;

/// One row per m: `m,mean,median,q1,q3,whisker_low,whisker_high,outliers`,
/// floats with 17 significant digits so re-runs are byte-comparable.
pub fn stats_csv(stats: &AggregateStats) -> String {
    let mut out = String::from("m,mean,median,q1,q3,whisker_low,whisker_high,outliers\n");
    for r in &stats.rows {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.m, r.mean, r.median, r.q1, r.q3, r.whisker_low, r.whisker_high, r.outlier_count
        )
        .expect("string write");
    }
    out
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 50.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_min) / (self.x_max - self.x_min).max(1e-300) * (WIDTH - 2.0 * MARGIN)
    }
    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN
            - (v - self.y_min) / (self.y_max - self.y_min).max(1e-300) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"15\">{title}</text>\n",
        WIDTH / 2.0
    )
}

fn svg_axes(f: &Frame, out: &mut String) {
    writeln!(
        out,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{m}\" y=\"{lb}\" font-family=\"sans-serif\" font-size=\"11\">{xmin:.3}</text>\n\
         <text x=\"{r}\" y=\"{lb}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{xmax:.3}</text>\n\
         <text x=\"6\" y=\"{b}\" font-family=\"sans-serif\" font-size=\"11\">{ymin:.3}</text>\n\
         <text x=\"6\" y=\"{t}\" font-family=\"sans-serif\" font-size=\"11\">{ymax:.3}</text>",
        m = MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        lb = HEIGHT - MARGIN + 16.0,
        xmin = f.x_min,
        xmax = f.x_max,
        ymin = f.y_min,
        ymax = f.y_max,
    )
    .expect("string write");
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line plot of (x, y) series; one polyline per series with a legend.
pub fn line_plot_svg(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let points = series.iter().flat_map(|(_, pts)| pts.iter());
    let mut frame = Frame {
        x_min: f64::INFINITY,
        x_max: f64::NEG_INFINITY,
        y_min: f64::INFINITY,
        y_max: f64::NEG_INFINITY,
    };
    for &(x, y) in points {
        frame.x_min = frame.x_min.min(x);
        frame.x_max = frame.x_max.max(x);
        frame.y_min = frame.y_min.min(y);
        frame.y_max = frame.y_max.max(y);
    }
    if !frame.x_min.is_finite() {
        frame = Frame {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
        };
    }
    let mut out = svg_open(title);
    svg_axes(&frame, &mut out);
    for (idx, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
            .collect();
        writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n\
             <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
             fill=\"{color}\">{label}</text>",
            path.join(" "),
            WIDTH - MARGIN - 120.0,
            MARGIN + 16.0 * (idx as f64 + 1.0),
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}

/// Box plot of the scaled-error statistics: one box (q1..q3, median bar)
/// and whisker pair per m.
pub fn box_plot_svg(title: &str, stats: &AggregateStats) -> String {
    let mut frame = Frame {
        x_min: f64::INFINITY,
        x_max: f64::NEG_INFINITY,
        y_min: f64::INFINITY,
        y_max: f64::NEG_INFINITY,
    };
    for r in &stats.rows {
        frame.x_min = frame.x_min.min(r.m as f64);
        frame.x_max = frame.x_max.max(r.m as f64);
        frame.y_min = frame.y_min.min(r.whisker_low);
        frame.y_max = frame.y_max.max(r.whisker_high);
    }
    if !frame.x_min.is_finite() {
        frame = Frame {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
        };
    }
    let mut out = svg_open(title);
    svg_axes(&frame, &mut out);
    let slot = (WIDTH - 2.0 * MARGIN) / stats.rows.len().max(1) as f64;
    let half = (slot * 0.35).min(8.0);
    for r in &stats.rows {
        let cx = frame.x(r.m as f64);
        let (yl, yh) = (frame.y(r.whisker_low), frame.y(r.whisker_high));
        let (yq1, yq3, ymed) = (frame.y(r.q1), frame.y(r.q3), frame.y(r.median));
        writeln!(
            out,
            "<line x1=\"{cx:.2}\" y1=\"{yl:.2}\" x2=\"{cx:.2}\" y2=\"{yh:.2}\" stroke=\"#555\"/>\n\
             <rect x=\"{:.2}\" y=\"{yq3:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
             fill=\"#9ecae1\" stroke=\"#1f77b4\"/>\n\
             <line x1=\"{:.2}\" y1=\"{ymed:.2}\" x2=\"{:.2}\" y2=\"{ymed:.2}\" stroke=\"#08306b\"/>",
            cx - half,
            2.0 * half,
            (yq1 - yq3).max(0.5),
            cx - half,
            cx + half,
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}
