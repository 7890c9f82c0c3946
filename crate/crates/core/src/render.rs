//! Evidence scales, SVG heatmaps and band-by-band comparison.
//!
//! Two scales are supported. The Jeffreys-style e-value scale cuts at
//! `1, √10, 10, 10^{3/2}, 100` into six bands, with every bucket closed on
//! the left: exactly `10` is "strong". The Fisher-style p-value scale cuts
//! at `0.1%, 0.5%, 1%, 5%` into five bands, with buckets closed on the
//! right: exactly `0.05` is "significant".
//!
//! Band indices run from weakest (0) to strongest evidence on both scales.
//!
//! Heatmaps put column `j` on the x axis and row `r` on the y axis with `r`
//! increasing downward, one `<rect>` per defined cell.

use std::fmt::{self, Write as _};

use crate::discovery::{DiscoveryMatrix, PMatrix, TriMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScaleKind {
    JeffreysE,
    FisherP,
}

impl ScaleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScaleKind::JeffreysE => "jeffreys-e",
            ScaleKind::FisherP => "fisher-p",
        }
    }

    pub fn matrix_kind(self) -> MatrixKind {
        match self {
            ScaleKind::JeffreysE => MatrixKind::EValues,
            ScaleKind::FisherP => MatrixKind::PValues,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    EValues,
    PValues,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::EValues => "e-value",
            MatrixKind::PValues => "p-value",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Band {
    pub name: &'static str,
    /// Fill colour as `#RRGGBB`.
    pub color: &'static str,
}

const DARK_GREEN: &str = "#006400";
const GREEN: &str = "#2E8B57";
const YELLOW: &str = "#FFD700";
const RED: &str = "#FF4500";
const DARK_RED: &str = "#8B0000";
const BLACK: &str = "#000000";

#[derive(Debug, Clone, PartialEq)]
pub struct ColorScale {
    kind: ScaleKind,
    thresholds: Vec<f64>,
    bands: Vec<Band>,
}

impl ColorScale {
    pub fn jeffreys() -> Self {
        ColorScale {
            kind: ScaleKind::JeffreysE,
            thresholds: vec![1.0, 10f64.sqrt(), 10.0, 10f64.powf(1.5), 100.0],
            bands: vec![
                Band { name: "no evidence", color: DARK_GREEN },
                Band { name: "poor", color: GREEN },
                Band { name: "substantial", color: YELLOW },
                Band { name: "strong", color: RED },
                Band { name: "very strong", color: DARK_RED },
                Band { name: "decisive", color: BLACK },
            ],
        }
    }

    pub fn fisher() -> Self {
        ColorScale {
            kind: ScaleKind::FisherP,
            thresholds: vec![0.001, 0.005, 0.01, 0.05],
            bands: vec![
                Band { name: "not significant", color: GREEN },
                Band { name: "significant", color: YELLOW },
                Band { name: "highly significant", color: RED },
                Band { name: "stringent", color: DARK_RED },
                Band { name: "decisive", color: BLACK },
            ],
        }
    }

    pub fn for_kind(kind: ScaleKind) -> Self {
        match kind {
            ScaleKind::JeffreysE => ColorScale::jeffreys(),
            ScaleKind::FisherP => ColorScale::fisher(),
        }
    }

    pub fn kind(&self) -> ScaleKind {
        self.kind
    }

    /// Cut points in increasing numeric order.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Bands from weakest to strongest evidence.
    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn band(&self, index: usize) -> &Band {
        &self.bands[index]
    }

    /// Index of the band containing `value`, 0 being the weakest.
    pub fn classify(&self, value: f64) -> Result<usize> {
        let scale = self.kind.name();
        match self.kind {
            ScaleKind::JeffreysE => {
                if value.is_nan() || value < 0.0 {
                    return Err(Error::OutOfScale { value, scale });
                }
                Ok(self.thresholds.iter().filter(|&&t| value >= t).count())
            }
            ScaleKind::FisherP => {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::OutOfScale { value, scale });
                }
                Ok(self.thresholds.iter().filter(|&&t| value <= t).count())
            }
        }
    }
}

/// A lower-triangular matrix that knows what its entries measure.
pub trait Heatmap {
    fn kind(&self) -> MatrixKind;
    fn entries(&self) -> &TriMatrix;
}

impl Heatmap for DiscoveryMatrix {
    fn kind(&self) -> MatrixKind {
        MatrixKind::EValues
    }

    fn entries(&self) -> &TriMatrix {
        DiscoveryMatrix::entries(self)
    }
}

impl Heatmap for PMatrix {
    fn kind(&self) -> MatrixKind {
        MatrixKind::PValues
    }

    fn entries(&self) -> &TriMatrix {
        PMatrix::entries(self)
    }
}

/// A bare matrix with a declared kind, e.g. one read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Tagged {
    pub kind: MatrixKind,
    pub entries: TriMatrix,
}

impl Heatmap for Tagged {
    fn kind(&self) -> MatrixKind {
        self.kind
    }

    fn entries(&self) -> &TriMatrix {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub cell_size: u32,
    pub margin: u32,
    pub axis_labels: bool,
    /// Draw one swatch per band to the right of the matrix.
    pub legend: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell_size: 4,
            margin: 10,
            axis_labels: false,
            legend: false,
        }
    }
}

impl RenderSpec {
    fn validate(&self) -> Result<()> {
        if self.cell_size == 0 {
            return Err(Error::Config("cell size must be positive".into()));
        }
        Ok(())
    }
}

const SWATCH: u32 = 12;
const LEGEND_TEXT: u32 = 110;

fn check_kind(m: &impl Heatmap, scale: &ColorScale) -> Result<()> {
    if m.kind() != scale.kind().matrix_kind() {
        return Err(Error::KindMismatch {
            scale: scale.kind().name(),
            kind: m.kind().name(),
        });
    }
    Ok(())
}

/// Lower-triangular heatmap as a standalone SVG 1.1 document.
pub fn matrix_to_svg(m: &impl Heatmap, scale: &ColorScale, spec: &RenderSpec) -> Result<String> {
    check_kind(m, scale)?;
    spec.validate()?;

    let entries = m.entries();
    let bands = entries
        .values()
        .iter()
        .map(|&v| scale.classify(v))
        .collect::<Result<Vec<_>>>()?;

    let k = entries.k() as u32;
    let side = k * spec.cell_size;
    let legend_width = if spec.legend {
        spec.margin + SWATCH + if spec.axis_labels { LEGEND_TEXT } else { 0 }
    } else {
        0
    };
    let legend_height = if spec.legend {
        scale.bands().len() as u32 * (SWATCH + 4)
    } else {
        0
    };
    let width = 2 * spec.margin + side + legend_width;
    let height = 2 * spec.margin + side.max(legend_height);

    let mut svg = String::new();
    // Writing into a String cannot fail.
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for ((r, j, _), band) in entries.iter().zip(bands) {
        let x = spec.margin + (j as u32 - 1) * spec.cell_size;
        let y = spec.margin + (r as u32 - 1) * spec.cell_size;
        let _ = writeln!(
            svg,
            r#"<rect class="cell" x="{x}" y="{y}" width="{c}" height="{c}" fill="{fill}"/>"#,
            c = spec.cell_size,
            fill = scale.band(band).color,
        );
    }

    if spec.axis_labels {
        let m = spec.margin;
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" font-size="{f}" text-anchor="middle">j</text>"#,
            x = m + side / 2,
            y = m - 2,
            f = m.max(6),
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" font-size="{f}" text-anchor="middle">r</text>"#,
            x = m / 2,
            y = m + side / 2,
            f = m.max(6),
        );
    }

    if spec.legend {
        let x = 2 * spec.margin + side;
        // Strongest band on top.
        for (slot, band) in scale.bands().iter().rev().enumerate() {
            let y = spec.margin + slot as u32 * (SWATCH + 4);
            let _ = writeln!(
                svg,
                r#"<rect class="legend" x="{x}" y="{y}" width="{SWATCH}" height="{SWATCH}" fill="{}"/>"#,
                band.color
            );
            if spec.axis_labels {
                let _ = writeln!(
                    svg,
                    r#"<text x="{tx}" y="{ty}" font-size="10">{}</text>"#,
                    band.name,
                    tx = x + SWATCH + 4,
                    ty = y + SWATCH - 2,
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Per-band census of two matrices and their cell-by-cell disagreement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub scale: ScaleKind,
    pub band_names: Vec<&'static str>,
    pub k: usize,
    pub cells: usize,
    pub a_counts: Vec<usize>,
    pub b_counts: Vec<usize>,
    /// Cells where `b` falls in a strictly stronger band than `a`.
    pub b_stronger: usize,
    pub b_weaker: usize,
}

impl ComparisonReport {
    pub fn a_count(&self, band: &str) -> Option<usize> {
        self.band_index(band).map(|i| self.a_counts[i])
    }

    pub fn b_count(&self, band: &str) -> Option<usize> {
        self.band_index(band).map(|i| self.b_counts[i])
    }

    fn band_index(&self, band: &str) -> Option<usize> {
        self.band_names.iter().position(|&n| n == band)
    }
}

fn band_key(name: &str) -> String {
    name.replace(' ', "_")
}

impl fmt::Display for ComparisonReport {
    /// Line-oriented `key=value` text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scale={}", self.scale.name())?;
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "cells={}", self.cells)?;
        for (name, count) in self.band_names.iter().zip(&self.a_counts) {
            writeln!(f, "a.{}={count}", band_key(name))?;
        }
        for (name, count) in self.band_names.iter().zip(&self.b_counts) {
            writeln!(f, "b.{}={count}", band_key(name))?;
        }
        writeln!(f, "b_stronger={}", self.b_stronger)?;
        writeln!(f, "b_weaker={}", self.b_weaker)
    }
}

pub fn compare_report(
    a: &impl Heatmap,
    b: &impl Heatmap,
    scale: &ColorScale,
) -> Result<ComparisonReport> {
    check_kind(a, scale)?;
    check_kind(b, scale)?;
    let (ea, eb) = (a.entries(), b.entries());
    if ea.k() != eb.k() {
        return Err(Error::ShapeMismatch { a: ea.k(), b: eb.k() });
    }

    let nbands = scale.bands().len();
    let mut report = ComparisonReport {
        scale: scale.kind(),
        band_names: scale.bands().iter().map(|b| b.name).collect(),
        k: ea.k(),
        cells: ea.values().len(),
        a_counts: vec![0; nbands],
        b_counts: vec![0; nbands],
        b_stronger: 0,
        b_weaker: 0,
    };
    for (&va, &vb) in ea.values().iter().zip(eb.values()) {
        let (ba, bb) = (scale.classify(va)?, scale.classify(vb)?);
        report.a_counts[ba] += 1;
        report.b_counts[bb] += 1;
        if bb > ba {
            report.b_stronger += 1;
        } else if bb < ba {
            report.b_weaker += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tagged(kind: MatrixKind, k: usize, f: impl FnMut(usize, usize) -> f64) -> Tagged {
        Tagged {
            kind,
            entries: TriMatrix::from_fn(k, f),
        }
    }

    #[test]
    fn jeffreys_bands() {
        let s = ColorScale::jeffreys();
        let name = |v: f64| s.band(s.classify(v).unwrap()).name;
        assert_eq!(name(0.5), "no evidence");
        assert_eq!(name(1.0), "poor");
        assert_eq!(name(2.0), "poor");
        assert_eq!(name(5.0), "substantial");
        assert_eq!(name(10.0), "strong");
        assert_eq!(name(50.0), "very strong");
        assert_eq!(name(100.0), "decisive");
        assert_eq!(name(150.0), "decisive");
        assert_eq!(name(f64::INFINITY), "decisive");
        assert!(s.classify(-1.0).is_err());
        assert!(s.classify(f64::NAN).is_err());
    }

    #[test]
    fn fisher_bands() {
        let s = ColorScale::fisher();
        let name = |v: f64| s.band(s.classify(v).unwrap()).name;
        assert_eq!(name(0.2), "not significant");
        assert_eq!(name(0.05), "significant");
        assert_eq!(name(0.02), "significant");
        assert_eq!(name(0.01), "highly significant");
        assert_eq!(name(0.007), "highly significant");
        assert_eq!(name(0.003), "stringent");
        assert_eq!(name(0.0005), "decisive");
        assert_eq!(name(0.0), "decisive");
        assert!(s.classify(1.5).is_err());
    }

    #[test]
    fn colors_table() {
        let j: Vec<_> = ColorScale::jeffreys().bands().iter().map(|b| b.color).collect();
        assert_eq!(j, [DARK_GREEN, GREEN, YELLOW, RED, DARK_RED, BLACK]);
        let f: Vec<_> = ColorScale::fisher().bands().iter().map(|b| b.color).collect();
        assert_eq!(f, [GREEN, YELLOW, RED, DARK_RED, BLACK]);
    }

    #[test]
    fn svg_one_band() {
        let m = tagged(MatrixKind::EValues, 2, |_, _| 5.0);
        let svg = matrix_to_svg(&m, &ColorScale::jeffreys(), &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches(r#"class="cell""#).count(), 3);
        assert_eq!(svg.matches(YELLOW).count(), 3);
        assert_eq!(svg.matches("<rect").count(), 3);
        assert_eq!(
            svg,
            matrix_to_svg(&m, &ColorScale::jeffreys(), &RenderSpec::default()).unwrap()
        );
    }

    #[test]
    fn svg_golden() {
        let m = tagged(MatrixKind::PValues, 2, |r, j| if r == j { 0.2 } else { 0.004 });
        let spec = RenderSpec {
            cell_size: 5,
            margin: 2,
            axis_labels: false,
            legend: false,
        };
        let svg = matrix_to_svg(&m, &ColorScale::fisher(), &spec).unwrap();
        let expected = r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="14" height="14" viewBox="0 0 14 14">
<rect class="cell" x="2" y="2" width="5" height="5" fill="#2E8B57"/>
<rect class="cell" x="2" y="7" width="5" height="5" fill="#8B0000"/>
<rect class="cell" x="7" y="7" width="5" height="5" fill="#2E8B57"/>
</svg>
"##;
        assert_eq!(svg, expected);
    }

    #[test]
    fn svg_legend() {
        let m = tagged(MatrixKind::EValues, 3, |r, _| r as f64);
        let spec = RenderSpec {
            legend: true,
            axis_labels: true,
            ..RenderSpec::default()
        };
        let svg = matrix_to_svg(&m, &ColorScale::jeffreys(), &spec).unwrap();
        assert_eq!(svg.matches(r#"class="legend""#).count(), 6);
        assert!(svg.contains(">decisive</text>"));
    }

    #[test]
    fn svg_kind_mismatch() {
        let m = tagged(MatrixKind::EValues, 2, |_, _| 5.0);
        let err = matrix_to_svg(&m, &ColorScale::fisher(), &RenderSpec::default()).unwrap_err();
        assert!(matches!(err, Error::KindMismatch { .. }));
    }

    #[test]
    fn compare_identical() {
        let a = tagged(MatrixKind::EValues, 4, |r, j| (r * j) as f64 * 3.0);
        let rep = compare_report(&a, &a, &ColorScale::jeffreys()).unwrap();
        assert_eq!((rep.b_stronger, rep.b_weaker), (0, 0));
        assert_eq!(rep.cells, 10);
        assert_eq!(rep.a_counts, rep.b_counts);
    }

    #[test]
    fn compare_single_cell() {
        let a = tagged(MatrixKind::EValues, 1, |_, _| 2.0);
        let b = tagged(MatrixKind::EValues, 1, |_, _| 200.0);
        let rep = compare_report(&a, &b, &ColorScale::jeffreys()).unwrap();
        assert_eq!(rep.cells, 1);
        assert_eq!(rep.a_counts.iter().sum::<usize>(), 1);
        assert_eq!(rep.b_count("decisive"), Some(1));
        assert_eq!((rep.b_stronger, rep.b_weaker), (1, 0));
        let text = rep.to_string();
        assert!(text.contains("b.decisive=1\n"));
        assert!(text.contains("a.poor=1\n"));
        assert!(text.ends_with("b_weaker=0\n"));
    }

    #[test]
    fn compare_shape_mismatch() {
        let a = tagged(MatrixKind::EValues, 2, |_, _| 1.0);
        let b = tagged(MatrixKind::EValues, 3, |_, _| 1.0);
        assert_eq!(
            compare_report(&a, &b, &ColorScale::jeffreys()),
            Err(Error::ShapeMismatch { a: 2, b: 3 })
        );
    }
}
