use std::fmt::Write as _;

use crate::error::{Error, Result};

const CELL: usize = 56;
const LABEL_W: usize = 170;
const TOP: usize = 190;
const LEGEND_W: usize = 90;

/// Endpoints of the diverging scale at -1, 0 and +1.
const NEG: [f64; 3] = [59.0, 76.0, 192.0];
const MID: [f64; 3] = [247.0, 247.0, 247.0];
const POS: [f64; 3] = [180.0, 4.0, 38.0];

/// Fill color for a value on the fixed [-1, 1] scale.
pub(crate) fn color(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (from, to, t) = if v < 0.0 { (MID, NEG, -v) } else { (MID, POS, v) };
    let c: Vec<u8> = (0..3)
        .map(|i| (from[i] + (to[i] - from[i]) * t).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders a square matrix as an SVG heatmap. `None` cells are hatched and
/// labelled "n/a"; values are annotated to two decimals.
pub fn render_heatmap(cells: &[Vec<Option<f64>>], labels: &[String], title: &str) -> Result<String> {
    let n = cells.len();
    if cells.iter().any(|row| row.len() != n) {
        return Err(Error::Usage("heatmap matrix must be square".into()));
    }
    if labels.len() != n {
        return Err(Error::Usage(format!(
            "heatmap has {n} rows but {} labels",
            labels.len()
        )));
    }
    if cells.iter().flatten().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Usage("heatmap cells must be finite or undefined".into()));
    }

    let width = LABEL_W + n * CELL + LEGEND_W;
    let height = (TOP + n * CELL + 20).max(TOP + 220);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    s.push_str(concat!(
        r#"<defs><pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)">"#,
        r##"<rect width="6" height="6" fill="#ffffff"/><line x1="0" y1="0" x2="0" y2="6" stroke="#999999" stroke-width="2"/></pattern>"##,
        "<linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">",
    ));
    for (offset, v) in [(0, -1.0), (50, 0.0), (100, 1.0)] {
        let _ = write!(s, r#"<stop offset="{offset}%" stop-color="{}"/>"#, color(v));
    }
    s.push_str("</linearGradient></defs>\n");
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
        width / 2,
        escape(title)
    );

    for (i, label) in labels.iter().enumerate() {
        let y = TOP + i * CELL + CELL / 2 + 4;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#,
            LABEL_W - 8,
            escape(label)
        );
        let x = LABEL_W + i * CELL + CELL / 2 + 4;
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" transform="rotate(-60 {x} {})">{}</text>"#,
            TOP - 8,
            TOP - 8,
            escape(label)
        );
    }

    for (i, row) in cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let x = LABEL_W + j * CELL;
            let y = TOP + i * CELL;
            let (fill, text, ink) = match cell {
                Some(v) => (
                    color(*v),
                    format!("{v:.2}"),
                    if v.abs() > 0.6 { "#ffffff" } else { "#000000" },
                ),
                None => ("url(#hatch)".to_string(), "n/a".to_string(), "#000000"),
            };
            let _ = writeln!(
                s,
                r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#ffffff"/><text x="{}" y="{}" text-anchor="middle" fill="{ink}">{text}</text>"##,
                x + CELL / 2,
                y + CELL / 2 + 4
            );
        }
    }

    let lx = LABEL_W + n * CELL + 24;
    let _ = writeln!(
        s,
        r##"<rect x="{lx}" y="{TOP}" width="16" height="200" fill="url(#scale)" stroke="#666666"/>"##
    );
    for (v, dy) in [(1.0, 0), (0.0, 100), (-1.0, 200)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{v:.1}</text>"#,
            lx + 22,
            TOP + dy + 4
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
