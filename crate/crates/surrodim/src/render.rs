//! Deterministic SVG rendering of three-outcome simplex diagrams.
//!
//! The probability simplex over three outcomes is drawn as a triangle in
//! a fixed 600x520 viewBox: the third outcome at the apex, the first at
//! the bottom left, the second at the bottom right. Cells are filled
//! polygons, flats are red segments (or markers when they degenerate to
//! points), and annotations are labelled dots. All geometry is computed
//! in exact rationals and only formatted as decimals at the last moment,
//! so identical inputs produce byte-identical output.

use crate::cells::PropertyCells;
use crate::error::{Error, Result};
use crate::flats::{flat_polyhedron, Flat};
use crate::linalg::RationalVector;
use crate::rational::{format_decimal, rat, Rational};
use num::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt::Write as _;

/// Fill colours, assigned to reports in lexicographic order and cycled
/// when there are more cells than colours.
const PALETTE: [&str; 10] = [
    "#cfe3f5", "#f5d6cf", "#d8f0d3", "#f3ecc8", "#e4d5f0", "#c9ecec", "#f0d9ea", "#dce3c8",
    "#f4e0c8", "#d5d9f0",
];

const CELL_STROKE: &str = "#46505a";
const FLAT_STROKE: &str = "#b3261e";
const TEXT_FILL: &str = "#1a1a1a";
const FONT: &str = "Helvetica, Arial, sans-serif";

/// Triangle corners in viewBox coordinates: first outcome bottom left,
/// second bottom right, third at the apex.
fn corners() -> [(Rational, Rational); 3] {
    [
        (rat(60), rat(460)),
        (rat(540), rat(460)),
        (rat(300), rat(40)),
    ]
}

/// Exact barycentric projection of a distribution into the viewBox.
fn project(p: &[Rational]) -> (Rational, Rational) {
    let corners = corners();
    let mut x = Rational::zero();
    let mut y = Rational::zero();
    for (weight, (cx, cy)) in p.iter().zip(corners.iter()) {
        x = x + weight * cx;
        y = y + weight * cy;
    }
    (x, y)
}

fn coord(x: &Rational) -> String {
    format_decimal(x, 3)
}

fn point_attr(xy: &(Rational, Rational)) -> String {
    format!("{},{}", coord(&xy.0), coord(&xy.1))
}

/// Order projected vertices around their centroid so the polygon is
/// simple; comparisons are exact (quadrant, then cross product).
fn sort_around_centroid(points: &mut [(Rational, Rational)]) {
    if points.len() < 3 {
        return;
    }
    let m = rat(points.len() as i64);
    let cx = points.iter().map(|p| p.0.clone()).sum::<Rational>() / &m;
    let cy = points.iter().map(|p| p.1.clone()).sum::<Rational>() / &m;
    let quadrant = |dx: &Rational, dy: &Rational| -> u8 {
        if dx.is_positive() && !dy.is_negative() {
            0
        } else if !dx.is_positive() && dy.is_positive() {
            1
        } else if dx.is_negative() && !dy.is_positive() {
            2
        } else {
            3
        }
    };
    points.sort_by(|a, b| {
        let (ax, ay) = (&a.0 - &cx, &a.1 - &cy);
        let (bx, by) = (&b.0 - &cx, &b.1 - &cy);
        let qa = quadrant(&ax, &ay);
        let qb = quadrant(&bx, &by);
        qa.cmp(&qb).then_with(|| {
            // Clockwise-on-screen equals counterclockwise in math axes.
            let cross = &ax * &by - &ay * &bx;
            if cross.is_positive() {
                Ordering::Greater
            } else if cross.is_negative() {
                Ordering::Less
            } else {
                // Same ray from the centroid: nearer point first.
                let da = &ax * &ax + &ay * &ay;
                let db = &bx * &bx + &by * &by;
                da.cmp(&db)
            }
        })
    });
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Draw a point set as polygon, segment or marker depending on its
/// dimension.
fn shape_markup(
    out: &mut String,
    mut points: Vec<(Rational, Rational)>,
    fill: Option<&str>,
    stroke: &str,
    dashed: bool,
) {
    points.sort();
    points.dedup();
    let dash = if dashed { " stroke-dasharray=\"6,4\"" } else { "" };
    match points.len() {
        0 => {}
        1 => {
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{stroke}\"/>",
                coord(&points[0].0),
                coord(&points[0].1)
            );
        }
        2 => {
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"2\"{dash}/>",
                coord(&points[0].0),
                coord(&points[0].1),
                coord(&points[1].0),
                coord(&points[1].1)
            );
        }
        _ => {
            sort_around_centroid(&mut points);
            let attr: Vec<String> = points.iter().map(point_attr).collect();
            let fill = fill.unwrap_or("none");
            let _ = writeln!(
                out,
                "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"1\"{dash}/>",
                attr.join(" ")
            );
        }
    }
}

/// Render a three-outcome property to an SVG document.
///
/// Cells are drawn in lexicographic report order with a fixed palette;
/// `flats` are clipped to the simplex and drawn in red; `annotations`
/// are labelled markers. Identical inputs yield byte-identical output.
pub fn render_simplex(
    cells: &PropertyCells,
    annotations: &[(RationalVector, String)],
    flats: &[Flat],
) -> Result<String> {
    if cells.n() != 3 {
        return Err(Error::Precondition(format!(
            "rendering needs exactly three outcomes, found {}",
            cells.n()
        )));
    }
    for (point, _) in annotations {
        if point.len() != 3 {
            return Err(Error::Precondition(
                "annotated points need three coordinates".into(),
            ));
        }
    }
    for flat in flats {
        if flat.n != 3 {
            return Err(Error::Precondition(
                "flats must live over the three outcomes".into(),
            ));
        }
    }

    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 600 520\" \
         width=\"600\" height=\"520\">\n",
    );
    out.push_str("<rect width=\"600\" height=\"520\" fill=\"#ffffff\"/>\n");

    // Cells in lexicographic report order, so colours are reproducible
    // regardless of declaration order.
    let mut order: Vec<usize> = (0..cells.reports.len()).collect();
    order.sort_by(|&a, &b| cells.reports[a].cmp(&cells.reports[b]));
    for (slot, &idx) in order.iter().enumerate() {
        let verts = cells.cells[idx].vertices().map_err(|_| {
            Error::Invariant("a simplex cell came out unbounded".into())
        })?;
        let projected: Vec<(Rational, Rational)> = verts.iter().map(|v| project(v)).collect();
        shape_markup(
            &mut out,
            projected.clone(),
            Some(PALETTE[slot % PALETTE.len()]),
            CELL_STROKE,
            false,
        );
        // Label at the centroid of the cell's vertices.
        if !projected.is_empty() {
            let m = rat(projected.len() as i64);
            let cx = projected.iter().map(|p| p.0.clone()).sum::<Rational>() / &m;
            let cy = projected.iter().map(|p| p.1.clone()).sum::<Rational>() / &m;
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-family=\"{FONT}\" font-size=\"13\" \
                 fill=\"{TEXT_FILL}\" text-anchor=\"middle\">{}</text>",
                coord(&cx),
                coord(&cy),
                escape(&cells.reports[idx])
            );
        }
    }

    // Simplex frame above the fills.
    let frame: Vec<String> = corners().iter().map(point_attr).collect();
    let _ = writeln!(
        out,
        "<polygon points=\"{}\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1.5\"/>",
        frame.join(" ")
    );

    // Outcome labels at the corners.
    let corner_labels = [
        (rat(60), rat(478), "middle"),
        (rat(540), rat(478), "middle"),
        (rat(300), rat(28), "middle"),
    ];
    for (i, (x, y, anchor)) in corner_labels.iter().enumerate() {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"{FONT}\" font-size=\"14\" \
             fill=\"{TEXT_FILL}\" text-anchor=\"{anchor}\">{}</text>",
            coord(x),
            coord(y),
            escape(&cells.outcomes[i])
        );
    }

    // Flats, clipped to the simplex.
    for flat in flats {
        let region = flat_polyhedron(flat);
        let verts = region
            .vertices()
            .map_err(|_| Error::Invariant("a flat clipped to the simplex is bounded".into()))?;
        let projected: Vec<(Rational, Rational)> = verts.iter().map(|v| project(v)).collect();
        shape_markup(&mut out, projected, None, FLAT_STROKE, true);
    }

    // Annotated points.
    for (point, label) in annotations {
        let (x, y) = project(point);
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"{TEXT_FILL}\"/>",
            coord(&x),
            coord(&y)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"{FONT}\" font-size=\"13\" \
             fill=\"{TEXT_FILL}\" text-anchor=\"start\">{}</text>",
            coord(&(&x + &rat(8))),
            coord(&(&y - &rat(6))),
            escape(label)
        );
    }

    out.push_str("</svg>\n");
    Ok(out)
}
