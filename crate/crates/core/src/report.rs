//! Per-agent yearly series emitted as CSV tables and SVG line charts.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Finance,
    Commodity,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Finance => "finance",
            Metric::Commodity => "commodity",
        }
    }

    pub fn unit(&self) -> &'static str {
        match self {
            Metric::Finance => "Rp",
            Metric::Commodity => "kg",
        }
    }
}

/// One agent's per-year metric, plus an optional predicted next value.
#[derive(Debug, Clone, PartialEq)]
pub struct YearlySeries {
    pub agent: String,
    pub metric: Metric,
    /// Ordered (year, value) pairs; years are consecutive.
    pub points: Vec<(i32, f64)>,
    /// When present, `predicted.0 == last year + 1`.
    pub predicted: Option<(i32, f64)>,
}

impl YearlySeries {
    pub fn new(agent: impl Into<String>, metric: Metric) -> Self {
        YearlySeries { agent: agent.into(), metric, points: Vec::new(), predicted: None }
    }

    pub fn push(&mut self, year: i32, value: f64) -> Result<(), String> {
        if let Some(&(last, _)) = self.points.last() {
            if year <= last {
                return Err(format!(
                    "year {year} already recorded for `{}` ({})",
                    self.agent,
                    self.metric.as_str()
                ));
            }
        }
        self.points.push((year, value));
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|&(_, v)| v).collect()
    }

    pub fn file_stem(&self) -> String {
        format!("{}_{}", self.agent, self.metric.as_str())
    }
}

/// Writes `year,value,predicted` rows; history rows carry predicted=0 and
/// the optional trailing prediction row carries predicted=1. Values use two
/// decimal places.
pub fn write_series_table(series: &YearlySeries, path: &Path) -> io::Result<()> {
    fs::write(path, render_table(series))
}

pub fn render_table(series: &YearlySeries) -> String {
    let mut out = String::from("year,value,predicted\n");
    for &(year, value) in &series.points {
        writeln!(out, "{year},{value:.2},0").unwrap();
    }
    if let Some((year, value)) = series.predicted {
        writeln!(out, "{year},{value:.2},1").unwrap();
    }
    out
}

/// Reads a table written by [`write_series_table`] back into (year, value,
/// predicted) rows.
pub fn read_table(text: &str) -> Result<Vec<(i32, f64, bool)>, String> {
    let mut rows = Vec::new();
    let mut lines = text.lines();
    match lines.next() {
        Some("year,value,predicted") => {}
        other => return Err(format!("bad header: {other:?}")),
    }
    for line in lines {
        let mut parts = line.split(',');
        let year = parts.next().ok_or("missing year")?.parse().map_err(|e| format!("{e}"))?;
        let value = parts.next().ok_or("missing value")?.parse().map_err(|e| format!("{e}"))?;
        let predicted = match parts.next() {
            Some("0") => false,
            Some("1") => true,
            other => return Err(format!("bad predicted flag: {other:?}")),
        };
        rows.push((year, value, predicted));
    }
    Ok(rows)
}

const CHART_WIDTH: f64 = 800.0;
const CHART_HEIGHT: f64 = 500.0;
const MARGIN: f64 = 40.0;

/// Renders a standalone SVG line chart: solid polyline for the history and
/// a dashed segment to the predicted point. Output is a pure function of
/// the series, byte-identical across runs.
pub fn render_chart(series: &YearlySeries) -> String {
    let mut years: Vec<i32> = series.points.iter().map(|&(y, _)| y).collect();
    let mut values: Vec<f64> = series.values();
    if let Some((py, pv)) = series.predicted {
        years.push(py);
        values.push(pv);
    }
    let (x0, x1) = (*years.first().unwrap(), *years.last().unwrap());
    let vmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let vmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = if vmax > vmin { (vmax - vmin) * 0.05 } else { 1.0 };
    let (lo, hi) = (vmin - pad, vmax + pad);

    let plot_w = CHART_WIDTH - 2.0 * MARGIN;
    let plot_h = CHART_HEIGHT - 2.0 * MARGIN;
    let x_of = |year: i32| {
        let t = if x1 > x0 { (year - x0) as f64 / (x1 - x0) as f64 } else { 0.5 };
        MARGIN + t * plot_w
    };
    let y_of = |v: f64| MARGIN + (1.0 - (v - lo) / (hi - lo)) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CHART_WIDTH}" height="{CHART_HEIGHT}" viewBox="0 0 {CHART_WIDTH} {CHART_HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{CHART_WIDTH}" height="{CHART_HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{} — {}</text>"#,
        CHART_WIDTH / 2.0,
        series.agent,
        series.metric.as_str()
    )
    .unwrap();

    // axes
    let bottom = CHART_HEIGHT - MARGIN;
    let right = CHART_WIDTH - MARGIN;
    writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{bottom}" stroke="black"/>"#
    )
    .unwrap();

    // x ticks: one per year, thinned when crowded
    let year_count = (x1 - x0 + 1).max(1) as usize;
    let stride = year_count.div_ceil(16);
    let mut year = x0;
    while year <= x1 {
        let x = x_of(year);
        writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            bottom + 4.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{year}</text>"#,
            bottom + 16.0
        )
        .unwrap();
        year += stride as i32;
    }

    // y ticks
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let y = y_of(v);
        writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN - 4.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{:.2}</text>"#,
            MARGIN - 6.0,
            y + 4.0,
            v
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="14" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11" transform="rotate(-90 14 {:.2})">{}</text>"#,
        CHART_HEIGHT / 2.0,
        CHART_HEIGHT / 2.0,
        series.metric.unit()
    )
    .unwrap();

    // history polyline (the chart's single polyline)
    let points: Vec<String> = series
        .points
        .iter()
        .map(|&(year, v)| format!("{:.2},{:.2}", x_of(year), y_of(v)))
        .collect();
    writeln!(
        svg,
        r#"<polyline fill="none" stroke="#1f6fb4" stroke-width="2" points="{}"/>"#,
        points.join(" ")
    )
    .unwrap();

    if let Some((py, pv)) = series.predicted {
        let &(ly, lv) = series.points.last().unwrap();
        writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#1f6fb4" stroke-width="2" stroke-dasharray="6 4"/>"#,
            x_of(ly),
            y_of(lv),
            x_of(py),
            y_of(pv)
        )
        .unwrap();
        writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f6fb4"/>"#,
            x_of(py),
            y_of(pv)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn write_chart(series: &YearlySeries, path: &Path) -> io::Result<()> {
    fs::write(path, render_chart(series))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(points: usize, predicted: bool) -> YearlySeries {
        let mut series = YearlySeries::new("P1", Metric::Finance);
        for i in 0..points {
            series.push(2002 + i as i32, 34000.0 + 10.0 * i as f64).unwrap();
        }
        if predicted {
            series.predicted = Some((2002 + points as i32, 34100.0));
        }
        series
    }

    #[test]
    fn table_has_one_row_per_point_plus_prediction() {
        let text = render_table(&sample(8, true));
        assert_eq!(text.lines().count(), 10);
        let without = render_table(&sample(8, false));
        assert_eq!(without.lines().count(), 9);
    }

    #[test]
    fn values_render_with_two_decimals() {
        let mut series = YearlySeries::new("P1", Metric::Finance);
        series.push(2002, 34000.0).unwrap();
        assert!(render_table(&series).contains("2002,34000.00,0"));
    }

    #[test]
    fn table_round_trips_to_two_decimals() {
        let series = sample(8, true);
        let rows = read_table(&render_table(&series)).unwrap();
        assert_eq!(rows.len(), 9);
        for (row, &(year, value)) in rows.iter().zip(&series.points) {
            assert_eq!(row.0, year);
            assert!((row.1 - value).abs() < 0.005);
            assert!(!row.2);
        }
        assert!(rows.last().unwrap().2);
    }

    #[test]
    fn duplicate_year_rejected() {
        let mut series = sample(3, false);
        assert!(series.push(2004, 1.0).is_err());
    }

    #[test]
    fn chart_has_one_polyline_with_all_points() {
        let svg = render_chart(&sample(8, true));
        assert_eq!(svg.matches("<polyline").count(), 1);
        let points_attr = svg
            .split_once("points=\"")
            .map(|(_, rest)| rest.split_once('"').unwrap().0)
            .unwrap();
        assert_eq!(points_attr.split(' ').count(), 8);
        assert!(svg.contains("stroke-dasharray"));
    }

    #[test]
    fn constant_series_renders_horizontal_polyline() {
        let mut series = YearlySeries::new("K5", Metric::Commodity);
        for year in 2002..2006 {
            series.push(year, 500.0).unwrap();
        }
        let svg = render_chart(&series);
        let points_attr = svg
            .split_once("points=\"")
            .map(|(_, rest)| rest.split_once('"').unwrap().0)
            .unwrap();
        let ys: Vec<&str> =
            points_attr.split(' ').map(|p| p.split_once(',').unwrap().1).collect();
        assert!(ys.windows(2).all(|w| w[0] == w[1]), "not horizontal: {ys:?}");
    }

    #[test]
    fn chart_is_byte_stable() {
        let series = sample(8, true);
        assert_eq!(render_chart(&series), render_chart(&series));
    }
}
