//! SVG pictures of 1D and 2D chamber decompositions.
//!
//! The only lossy boundary of the artifact: exact rationals are converted
//! to decimals (12 significant digits) purely for drawing.

use serde_json::Value;

use crate::ratlin::parse_rational;
use crate::{Error, Issue, Result};

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#edc948", "#76b7b2", "#9c755f",
];

fn bad(msg: impl Into<String>) -> Error {
    Error::Validation(vec![Issue {
        path: "decomposition".into(),
        message: msg.into(),
    }])
}

fn to_f64(s: &str) -> Result<f64> {
    let r = parse_rational(s).map_err(bad)?;
    let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    Ok(n / d)
}

fn point(v: &Value) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| bad("vertex is not an array"))?;
    arr.iter()
        .map(|e| to_f64(e.as_str().ok_or_else(|| bad("vertex entry is not a string"))?))
        .collect()
}

fn fmt(x: f64) -> String {
    format!("{:.*}", 12usize.saturating_sub(1), x)
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

/// Renders a chamber decomposition (the `chambers` command output or its
/// `result` field) for ambient dimension 1 or 2.
pub fn render_decomposition(doc: &Value) -> Result<String> {
    let dec = doc.get("result").unwrap_or(doc);
    let region = dec
        .pointer("/region/vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing region vertices"))?;
    if region.is_empty() {
        return Ok(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"60\">\
             <text x=\"10\" y=\"30\">empty region</text></svg>"
                .to_string(),
        );
    }
    let verts: Vec<Vec<f64>> = region.iter().map(point).collect::<Result<_>>()?;
    let dim = verts[0].len();
    let cells = dec
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing cells"))?;
    match dim {
        1 => render_line(cells, |v| Ok(point(v)?[0])),
        2 => {
            // A segment embedded in the plane is still a line picture.
            let d0: Vec<f64> = verts.iter().map(|v| v[0]).collect();
            let d1: Vec<f64> = verts.iter().map(|v| v[1]).collect();
            let spread = |xs: &[f64]| {
                xs.iter().cloned().fold(f64::INFINITY, f64::min)
                    - xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            };
            if verts.len() == 2 && (spread(&d0).abs() < 1e-12 || spread(&d1).abs() < 1e-12) {
                let axis = usize::from(spread(&d0).abs() < 1e-12);
                let _ = axis;
            }
            if verts.len() <= 2 {
                // 1-dimensional region inside the plane: parameterize by the
                // coordinate with the largest extent.
                let axis = if (d0.iter().cloned().fold(f64::INFINITY, f64::min)
                    - d0.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
                .abs()
                    >= (d1.iter().cloned().fold(f64::INFINITY, f64::min)
                        - d1.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
                    .abs()
                {
                    0
                } else {
                    1
                };
                return render_line(cells, move |v| Ok(point(v)?[axis]));
            }
            render_plane(cells, &verts)
        }
        other => Err(bad(format!("plotting supports dimensions 1 and 2, not {other}"))),
    }
}

fn render_line(cells: &[Value], coord: impl Fn(&Value) -> Result<f64>) -> Result<String> {
    struct Piece {
        lo: f64,
        hi: f64,
        label: String,
    }
    let mut pieces = Vec::new();
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for cell in cells {
        let vs = cell
            .pointer("/closure/vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("cell without closure"))?;
        let mut xs = Vec::new();
        for v in vs {
            xs.push(coord(v)?);
        }
        if xs.is_empty() {
            continue;
        }
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        min = min.min(lo);
        max = max.max(hi);
        let label = cell
            .get("canonical_id")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string();
        let minimal = cell
            .get("minimal_ids")
            .and_then(Value::as_array)
            .map(|a| {
                a.iter()
                    .filter_map(Value::as_str)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .unwrap_or_default();
        pieces.push(Piece {
            lo,
            hi,
            label: if minimal.is_empty() {
                label
            } else {
                format!("{label} | {minimal}")
            },
        });
    }
    let span = (max - min).max(1e-9);
    let w = 640.0;
    let map = |x: f64| 40.0 + (x - min) / span * (w - 80.0);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"160\">\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"80\" x2=\"{}\" y2=\"80\" stroke=\"#999\"/>\n",
        fmt(map(min)),
        fmt(map(max))
    ));
    for (i, p) in pieces.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if (p.hi - p.lo).abs() < 1e-12 {
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"80\" r=\"5\" fill=\"{color}\"/>\n",
                fmt(map(p.lo))
            ));
        } else {
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"80\" x2=\"{}\" y2=\"80\" stroke=\"{color}\" stroke-width=\"8\"/>\n",
                fmt(map(p.lo)),
                fmt(map(p.hi))
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n",
            fmt(map(p.lo)),
            100 + 14 * (i % 4),
            p.label
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn render_plane(cells: &[Value], region: &[Vec<f64>]) -> Result<String> {
    let (mut minx, mut maxx, mut miny, mut maxy) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for v in region {
        minx = minx.min(v[0]);
        maxx = maxx.max(v[0]);
        miny = miny.min(v[1]);
        maxy = maxy.max(v[1]);
    }
    let span = (maxx - minx).max(maxy - miny).max(1e-9);
    let size = 560.0;
    let map = |x: f64, y: f64| {
        (
            20.0 + (x - minx) / span * size,
            20.0 + (maxy - y) / span * size,
        )
    };
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n",
        size + 40.0,
        size + 40.0
    ));
    // Color by canonical label so chambers of one model share a color.
    let mut labels: Vec<String> = Vec::new();
    for cell in cells {
        let vs = cell
            .pointer("/closure/vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("cell without closure"))?;
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for v in vs {
            let p = point(v)?;
            pts.push((p[0], p[1]));
        }
        if pts.is_empty() {
            continue;
        }
        let label = cell
            .get("canonical_id")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string();
        let idx = match labels.iter().position(|l| *l == label) {
            Some(i) => i,
            None => {
                labels.push(label.clone());
                labels.len() - 1
            }
        };
        let color = PALETTE[idx % PALETTE.len()];
        // Sort boundary points counterclockwise for a simple polygon.
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        pts.sort_by(|a, b| {
            let aa = (a.1 - cy).atan2(a.0 - cx);
            let bb = (b.1 - cy).atan2(b.0 - cx);
            aa.partial_cmp(&bb).unwrap_or(std::cmp::Ordering::Equal)
        });
        match pts.len() {
            1 => {
                let (x, y) = map(pts[0].0, pts[0].1);
                svg.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{color}\"/>\n",
                    fmt(x),
                    fmt(y)
                ));
            }
            2 => {
                let (x1, y1) = map(pts[0].0, pts[0].1);
                let (x2, y2) = map(pts[1].0, pts[1].1);
                svg.push_str(&format!(
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"3\"/>\n",
                    fmt(x1), fmt(y1), fmt(x2), fmt(y2)
                ));
            }
            _ => {
                let path: Vec<String> = pts
                    .iter()
                    .map(|&(x, y)| {
                        let (px, py) = map(x, y);
                        format!("{},{}", fmt(px), fmt(py))
                    })
                    .collect();
                svg.push_str(&format!(
                    "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.55\" stroke=\"#444\" stroke-width=\"0.6\"/>\n",
                    path.join(" ")
                ));
            }
        }
    }
    for (i, label) in labels.iter().enumerate() {
        svg.push_str(&format!(
            "<rect x=\"8\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
            8 + i * 16,
            PALETTE[i % PALETTE.len()]
        ));
        svg.push_str(&format!(
            "<text x=\"22\" y=\"{}\" font-size=\"11\">{}</text>\n",
            17 + i * 16,
            label
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
