use plotters::prelude::*;

use crate::error::{Error, Result};

/// One curve of a panel.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Reference levels are drawn dashed.
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, xs: &[f64], ys: &[f64]) -> Self {
        Self {
            label: label.into(),
            points: xs.iter().copied().zip(ys.iter().copied()).collect(),
            dashed: false,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

/// A single figure panel, rendered as a standalone SVG.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    /// Suffix appended to the report name to form the file stem.
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn draw_err<E: std::fmt::Debug>(e: E) -> Error {
    Error::Io(format!("plotting failed: {e:?}"))
}

macro_rules! draw_panel {
    ($root:expr, $panel:expr, $x:expr, $y:expr) => {{
        let mut chart = ChartBuilder::on($root)
            .caption(&$panel.title, ("sans-serif", 20))
            .margin(15)
            .x_label_area_size(45)
            .y_label_area_size(80)
            .build_cartesian_2d($x, $y)
            .map_err(draw_err)?;
        chart
            .configure_mesh()
            .x_desc($panel.x_label.as_str())
            .y_desc($panel.y_label.as_str())
            .draw()
            .map_err(draw_err)?;
        for (i, s) in $panel.series.iter().enumerate() {
            let color = Palette99::pick(i).to_rgba();
            let style = color.stroke_width(2);
            let points = s.points.iter().copied().filter(|p| p.1.is_finite());
            let anno = if s.dashed {
                chart.draw_series(DashedLineSeries::new(points, 6, 4, style))
            } else {
                chart.draw_series(LineSeries::new(points, style))
            }
            .map_err(draw_err)?;
            anno.label(s.label.as_str())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], style));
        }
        chart
            .configure_series_labels()
            .position(SeriesLabelPosition::UpperRight)
            .border_style(BLACK)
            .background_style(WHITE.mix(0.85))
            .draw()
            .map_err(draw_err)?;
    }};
}

impl Panel {
    /// Bounding box of the finite points, padded so flat curves stay visible.
    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let pts = || {
            self.series
                .iter()
                .flat_map(|s| s.points.iter())
                .filter(|p| p.0.is_finite() && p.1.is_finite() && (!self.log_y || p.1 > 0.0))
        };
        let fold = |f: fn(&(f64, f64)) -> f64| {
            pts().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
        };
        let (mut x, mut y) = (fold(|p| p.0), fold(|p| p.1));
        if !x.0.is_finite() {
            x = (0.0, 1.0);
        }
        if !y.0.is_finite() {
            y = if self.log_y { (1e-3, 1.0) } else { (0.0, 1.0) };
        }
        if x.1 <= x.0 {
            x = (x.0 - 0.5, x.1 + 0.5);
        }
        if self.log_y {
            y = (y.0 / 2.0, y.1 * 2.0);
        } else {
            let pad = ((y.1 - y.0) * 0.05).max(1e-3);
            y = (y.0 - pad, y.1 + pad);
        }
        (x, y)
    }

    pub fn to_svg(&self) -> Result<String> {
        let mut out = String::new();
        {
            let root = SVGBackend::with_string(&mut out, (800, 560)).into_drawing_area();
            root.fill(&WHITE).map_err(draw_err)?;
            let ((x0, x1), (y0, y1)) = self.bounds();
            if self.log_y {
                draw_panel!(&root, self, x0..x1, (y0..y1).log_scale());
            } else {
                draw_panel!(&root, self, x0..x1, y0..y1);
            }
            root.present().map_err(draw_err)?;
        }
        Ok(out)
    }
}
