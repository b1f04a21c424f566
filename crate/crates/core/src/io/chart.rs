//! Self-contained SVG line charts: days on x, one line per scenario.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::economy::KpiRecord;

use super::IoError;

/// The six plotted outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    PoolBalance,
    CumSubsidyXns,
    CumSubsidyUsd,
    Price,
    TreasuryXns,
    TreasuryUsd,
}

impl Variable {
    pub const ALL: [Variable; 6] = [
        Variable::PoolBalance,
        Variable::CumSubsidyXns,
        Variable::CumSubsidyUsd,
        Variable::Price,
        Variable::TreasuryXns,
        Variable::TreasuryUsd,
    ];

    /// Column name in the CSV files.
    pub fn name(self) -> &'static str {
        match self {
            Variable::PoolBalance => "pool_balance_xns",
            Variable::CumSubsidyXns => "cum_subsidy_xns",
            Variable::CumSubsidyUsd => "cum_subsidy_usd",
            Variable::Price => "price_usd",
            Variable::TreasuryXns => "treasury_xns",
            Variable::TreasuryUsd => "treasury_usd",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|v| v.name()).collect()
    }

    pub fn title(self) -> &'static str {
        match self {
            Variable::PoolBalance => "Developer subsidy pool",
            Variable::CumSubsidyXns => "Cumulative subsidy paid to developers",
            Variable::CumSubsidyUsd => "Cumulative subsidy paid to developers, in dollars",
            Variable::Price => "XNS price",
            Variable::TreasuryXns => "Treasury holdings",
            Variable::TreasuryUsd => "Treasury holdings, in dollars",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Variable::PoolBalance | Variable::CumSubsidyXns | Variable::TreasuryXns => "XNS",
            Variable::CumSubsidyUsd | Variable::TreasuryUsd => "USD",
            Variable::Price => "USD per XNS",
        }
    }

    pub fn value(self, r: &KpiRecord) -> f64 {
        match self {
            Variable::PoolBalance => r.pool_balance_xns,
            Variable::CumSubsidyXns => r.cum_subsidy_xns,
            Variable::CumSubsidyUsd => r.cum_subsidy_usd,
            Variable::Price => r.price_usd,
            Variable::TreasuryXns => r.treasury_xns,
            Variable::TreasuryUsd => r.treasury_usd,
        }
    }
}

impl FromStr for Variable {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| IoError::UnknownVariable(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSeries {
    /// Legend entry, e.g. the scenario's initial pool.
    pub label: String,
    pub records: Vec<KpiRecord>,
}

impl ChartSeries {
    pub fn new(label: impl Into<String>, records: Vec<KpiRecord>) -> Self {
        Self { label: label.into(), records }
    }
}

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 540.0;
const LEFT: f64 = 100.0;
const RIGHT: f64 = 220.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

/// Axis from `lo` to `hi` with round tick spacing.
struct Axis {
    lo: f64,
    hi: f64,
    step: f64,
}

impl Axis {
    fn new(min: f64, max: f64) -> Self {
        let (min, max) =
            if max > min { (min, max) } else { (min - 0.5 * min.abs().max(1.0), max + 0.5 * max.abs().max(1.0)) };
        let raw = (max - min) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        Axis { lo: (min / step).floor() * step, hi: (max / step).ceil() * step, step }
    }

    fn ticks(&self) -> impl Iterator<Item = f64> + '_ {
        let n = ((self.hi - self.lo) / self.step).round() as i64;
        (0..=n).map(move |i| self.lo + i as f64 * self.step)
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }
}

fn tick_label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e5).contains(&a) {
        let exp = a.log10().floor() as i32;
        let digits = (exp - step.log10().floor() as i32).clamp(0, 6) as usize;
        format!("{v:.digits$e}")
    } else {
        let decimals = (-step.log10().floor()).max(0.0) as usize;
        format!("{v:.decimals$}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders `variable` for every series as an SVG document.
pub fn line_chart_svg(series: &[ChartSeries], variable: &str) -> Result<String, IoError> {
    let var: Variable = variable.parse()?;
    let points = || series.iter().flat_map(|s| s.records.iter()).filter(|r| var.value(r).is_finite());
    if points().next().is_none() {
        return Err(IoError::EmptyChart);
    }
    let (t0, t1) = points().fold((u64::MAX, 0), |(a, b), r| (a.min(r.t), b.max(r.t)));
    let (y0, y1) = points().map(|r| var.value(r)).fold((0.0f64, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    let x = Axis::new(t0 as f64, t1 as f64);
    let y = Axis::new(y0, y1);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |t: f64| LEFT + x.frac(t) * pw;
    let py = |v: f64| TOP + (1.0 - y.frac(v)) * ph;

    let mut svg = String::new();
    let w = &mut svg;
    // writing to a String cannot fail
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="28" font-size="16" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        escape(var.title())
    );

    for t in x.ticks() {
        let sx = px(t);
        let _ = writeln!(w, r##"<line x1="{sx:.2}" y1="{TOP}" x2="{sx:.2}" y2="{:.2}" stroke="#e5e5e5"/>"##, TOP + ph);
        let _ = writeln!(
            w,
            r#"<text x="{sx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            tick_label(t, x.step)
        );
    }
    for v in y.ticks() {
        let sy = py(v);
        let _ =
            writeln!(w, r##"<line x1="{LEFT}" y1="{sy:.2}" x2="{:.2}" y2="{sy:.2}" stroke="#e5e5e5"/>"##, LEFT + pw);
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            sy + 4.0,
            tick_label(v, y.step)
        );
    }
    let _ = writeln!(w, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Time (days)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 20.0
    );
    let (cx, cy) = (24.0, TOP + ph / 2.0);
    let _ = writeln!(
        w,
        r#"<text x="{cx}" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 {cx} {cy:.2})">{} ({})</text>"#,
        escape(var.name()),
        escape(var.unit())
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .records
            .iter()
            .filter(|r| var.value(r).is_finite())
            .map(|r| format!("{:.2},{:.2}", px(r.t as f64), py(var.value(r))))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline class="series" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 16.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/>"#,
            lx + 24.0
        );
        let _ = writeln!(w, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes the chart for `variable` to `path`.
pub fn render_line_chart(series: &[ChartSeries], variable: &str, path: &Path) -> Result<(), IoError> {
    let svg = line_chart_svg(series, variable)?;
    std::fs::write(path, svg).map_err(|e| IoError::file(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decaying(a0: f64, days: u64) -> Vec<KpiRecord> {
        (0..=days)
            .map(|t| KpiRecord { t, pool_balance_xns: a0 * (-0.0005 * t as f64).exp(), ..Default::default() })
            .collect()
    }

    /// Series polylines as lists of (x, y) screen points.
    fn polylines(svg: &str) -> Vec<Vec<(f64, f64)>> {
        svg.lines()
            .filter(|l| l.contains(r#"class="series""#))
            .map(|l| {
                let pts = l.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
                pts.split(' ')
                    .map(|p| {
                        let (a, b) = p.split_once(',').unwrap();
                        (a.parse().unwrap(), b.parse().unwrap())
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn one_series_one_line() {
        let svg = line_chart_svg(&[ChartSeries::new("A0 = 1", decaying(1.0, 10))], "pool_balance_xns").unwrap();
        assert_eq!(polylines(&svg).len(), 1);
        assert!(svg.contains("Time (days)") && svg.contains("(XNS)"));
    }

    #[test]
    fn four_decaying_pools() {
        let series: Vec<ChartSeries> = [250e6, 500e6, 750e6, 1000e6]
            .iter()
            .map(|&a| ChartSeries::new(format!("{a}"), decaying(a, 3652)))
            .collect();
        let svg = line_chart_svg(&series, "pool_balance_xns").unwrap();
        let lines = polylines(&svg);
        assert_eq!(lines.len(), 4);
        for l in &lines {
            // screen y grows downwards
            assert!(l.windows(2).all(|w| w[1].1 >= w[0].1));
        }
        let starts: Vec<f64> = lines.iter().map(|l| l[0].1).collect();
        assert!(starts.windows(2).all(|w| w[1] < w[0]));
        for s in &series {
            assert!(svg.contains(&format!(">{}<", s.label)));
        }
    }

    #[test]
    fn empty_or_unknown_is_an_error() {
        assert!(matches!(line_chart_svg(&[], "price_usd"), Err(IoError::EmptyChart)));
        assert!(matches!(line_chart_svg(&[ChartSeries::new("x", vec![])], "price_usd"), Err(IoError::EmptyChart)));
        let s = [ChartSeries::new("x", decaying(1.0, 2))];
        assert!(matches!(line_chart_svg(&s, "pool"), Err(IoError::UnknownVariable(_))));
    }

    #[test]
    fn every_variable_renders() {
        let s = [ChartSeries::new("a & b", decaying(5.0, 20))];
        for v in Variable::names() {
            let svg = line_chart_svg(&s, v).unwrap();
            assert!(svg.contains("a &amp; b"));
        }
    }

    #[test]
    fn tick_steps_are_round() {
        let a = Axis::new(0.0, 3652.0);
        assert_eq!((a.lo, a.hi, a.step), (0.0, 4000.0, 1000.0));
        let b = Axis::new(0.0, 0.0437);
        assert_eq!(b.step, 0.01);
        let flat = Axis::new(2.0, 2.0);
        assert!(flat.hi > flat.lo);
    }
}
