//! SVG figures drawn from the same data as the CSV outputs. No numeric
//! contract: these are for looking at.

use std::path::Path;

use anyhow::{anyhow, Result};
use plotters::prelude::*;

const SIZE: (u32, u32) = (800, 600);

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(255, 127, 14),
    RGBColor(148, 103, 189),
    RGBColor(90, 90, 90),
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw markers instead of a line.
    pub markers: bool,
}

fn bounds<'a>(pts: impl Iterator<Item = &'a (f64, f64)>) -> Option<((f64, f64), (f64, f64))> {
    let mut b = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
    for &(x, y) in pts.filter(|(x, y)| x.is_finite() && y.is_finite()) {
        b.0 .0 = b.0 .0.min(x);
        b.0 .1 = b.0 .1.max(x);
        b.1 .0 = b.1 .0.min(y);
        b.1 .1 = b.1 .1.max(y);
    }
    if !b.0 .0.is_finite() {
        return None;
    }
    let pad = |(lo, hi): (f64, f64)| {
        let d = if hi > lo { 0.03 * (hi - lo) } else { 0.5 * lo.abs().max(1.0) };
        (lo - d, hi + d)
    };
    Some((pad(b.0), pad(b.1)))
}

pub fn lines(path: &Path, title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> Result<()> {
    let Some(((x0, x1), (y0, y1))) = bounds(series.iter().flat_map(|s| s.points.iter())) else {
        return Err(anyhow!("nothing to plot for {title}"));
    };
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .configure_mesh()
        .x_desc(xlabel)
        .y_desc(ylabel)
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    let mut labelled = false;
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts = s.points.iter().cloned().filter(|(x, y)| x.is_finite() && y.is_finite());
        let anno = if s.markers {
            chart
                .draw_series(pts.map(|p| Circle::new(p, 2, color.filled())))
                .map_err(|e| anyhow!("{e}"))?
        } else {
            chart
                .draw_series(LineSeries::new(pts, color.stroke_width(2)))
                .map_err(|e| anyhow!("{e}"))?
        };
        if !s.label.is_empty() {
            labelled = true;
            anno.label(s.label.clone())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color.stroke_width(2)));
        }
    }
    if labelled {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(|e| anyhow!("{e}"))?;
    }
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}

/// Color map of `values[i][j]` over `x[i]` (rows) and `y[j]` (columns),
/// with optional overlay curves.
pub fn heatmap(
    path: &Path,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    x: &[f64],
    y: &[f64],
    values: &[Vec<f64>],
    overlay: &[Series],
) -> Result<()> {
    if x.is_empty() || y.len() < 2 {
        return Err(anyhow!("map {title} is too small to draw"));
    }
    let dx = if x.len() > 1 { x[1] - x[0] } else { 1.0 };
    let dy = y[1] - y[0];
    let (x0, x1) = (x[0] - 0.5 * dx, x[x.len() - 1] + 0.5 * dx);
    let (y0, y1) = (y[0] - 0.5 * dy, y[y.len() - 1] + 0.5 * dy);
    let vmax = values
        .iter()
        .flat_map(|r| r.iter())
        .cloned()
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .configure_mesh()
        .disable_mesh()
        .x_desc(xlabel)
        .y_desc(ylabel)
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    let cells = x.iter().zip(values).flat_map(|(&xi, row)| {
        y.iter().zip(row).map(move |(&yj, &v)| {
            // square-root scale keeps weak ridges visible
            let c = ViridisRGB::get_color((v / vmax).clamp(0.0, 1.0).sqrt());
            Rectangle::new(
                [(xi - 0.5 * dx, yj - 0.5 * dy), (xi + 0.5 * dx, yj + 0.5 * dy)],
                c.filled(),
            )
        })
    });
    chart.draw_series(cells).map_err(|e| anyhow!("{e}"))?;
    for s in overlay {
        chart
            .draw_series(
                s.points
                    .iter()
                    .filter(|&&(a, b)| (x0..=x1).contains(&a) && (y0..=y1).contains(&b))
                    .map(|&p| Circle::new(p, 2, WHITE.filled())),
            )
            .map_err(|e| anyhow!("{e}"))?;
    }
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}
