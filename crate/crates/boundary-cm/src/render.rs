//! Lattice diagrams of a pair of rims, as plain text or SVG.
//!
//! Each subset I draws as a mountain path over the edge labels: step i
//! goes down for i in I and up otherwise, so the path is the height
//! profile of [`crate::combinat::Rim::height_profile`]. Drawing a pair
//! stacks the two paths: I stays put as the upper rim, J is shifted down
//! by the least number of rows that keeps its path below I's, and the
//! columns where the two paths touch ("meets") cut the area between them
//! into boxes. For a tight pair the number of boxes is exactly the
//! interlacing number.
//!
//! Both renderers are deterministic character for character: the same
//! pair always produces the same bytes.

use crate::combinat::{CombinatError, Rim};
use std::fmt::Write as _;

/// Geometry shared by the two renderers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramLayout {
    pub n: usize,
    /// How many rows the J path is shifted down.
    pub offset_rows: usize,
    /// Columns (lattice points 0..n-1, cyclically) where the shifted J
    /// path touches the I path.
    pub meets: Vec<usize>,
    /// Regions enclosed between the two paths: maximal runs of touching
    /// columns count once.
    pub boxes: usize,
    /// Upper path heights, one per lattice point 0..=n.
    pub i_profile: Vec<i64>,
    /// Lower path heights after the shift.
    pub j_profile_shifted: Vec<i64>,
}

fn check_pair(i: &Rim, j: &Rim) -> Result<(), CombinatError> {
    if i.n() != j.n() {
        return Err(CombinatError::CycleMismatch(i.n(), j.n()));
    }
    if i.k() != j.k() {
        return Err(CombinatError::SizeMismatch(i.k(), j.k()));
    }
    Ok(())
}

/// Compute the stacked-path geometry of a pair of equal-size rims.
pub fn layout(i: &Rim, j: &Rim) -> Result<DiagramLayout, CombinatError> {
    check_pair(i, j)?;
    let n = i.n();
    let hi = i.height_profile();
    let hj = j.height_profile();
    let d: Vec<i64> = hi.iter().zip(hj.iter()).map(|(a, b)| b - a).collect();
    // d is even everywhere and zero at both ends, so the maximum over one
    // cyclic period is a nonnegative even number.
    let maxd = *d[..n].iter().max().expect("n is positive");
    let offset_rows = (maxd / 2) as usize;
    let meets: Vec<usize> = (0..n).filter(|&c| d[c] == maxd).collect();
    let boxes = meets
        .iter()
        .enumerate()
        .filter(|&(idx, &m)| {
            let next = meets[(idx + 1) % meets.len()];
            (next + n - m) % n != 1
        })
        .count();
    let j_profile_shifted = hj.iter().map(|h| h - maxd).collect();
    Ok(DiagramLayout {
        n,
        offset_rows,
        meets,
        boxes,
        i_profile: hi,
        j_profile_shifted,
    })
}

/// The grid cell and glyph of one path step: an ascending step draws '/'
/// in the band above its lower endpoint, a descending one draws '\'.
fn step_cell(profile: &[i64], col: usize) -> (i64, char) {
    let (a, b) = (profile[col], profile[col + 1]);
    if b > a {
        (a, '/')
    } else {
        (b, '\\')
    }
}

/// Render the pair as a plain-text diagram (7-bit characters only).
///
/// Rows of the diagram are lattice bands from top to bottom; below them
/// come the edge labels, a row of lattice dots, and a legend. Segments
/// where the two paths coincide are drawn once.
pub fn render_ascii(i: &Rim, j: &Rim) -> Result<String, CombinatError> {
    let lay = layout(i, j)?;
    let n = lay.n;
    let slot = n.to_string().len();
    let hi = &lay.i_profile;
    let hj = &lay.j_profile_shifted;
    let top = *hi.iter().chain(hj.iter()).max().unwrap();
    let bottom = *hi.iter().chain(hj.iter()).min().unwrap();

    let mut out = String::new();
    for band in (bottom..top).rev() {
        let mut line = String::new();
        for c in 0..n {
            let (ri, gi) = step_cell(hi, c);
            let (rj, gj) = step_cell(hj, c);
            let glyph = if ri == band {
                gi
            } else if rj == band {
                gj
            } else {
                ' '
            };
            line.push(glyph);
            for _ in 1..slot {
                line.push(' ');
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    for c in 1..=n {
        let _ = write!(out, "{c:<slot$}");
    }
    out.push('\n');
    for c in 0..=n {
        out.push('.');
        if c < n {
            for _ in 1..slot {
                out.push(' ');
            }
        }
    }
    out.push('\n');
    out.push('\n');
    let _ = writeln!(out, "I = {i}  (upper rim)");
    let _ = writeln!(out, "J = {j}  (lower rim, shifted down {})", lay.offset_rows);
    let _ = writeln!(out, "vertex 0 = vertex {n}: columns wrap");
    Ok(out)
}

const UNIT: i64 = 40;

/// Render the pair as a standalone SVG 1.1 document.
///
/// One lattice unit is 40 pixels on both axes; all coordinates are
/// integers, and the output is assembled in a fixed element order so the
/// same pair produces byte-identical documents. The upper rim is dashed,
/// the shifted lower rim solid.
pub fn render_svg(i: &Rim, j: &Rim) -> Result<String, CombinatError> {
    let lay = layout(i, j)?;
    let n = lay.n as i64;
    let hi = &lay.i_profile;
    let hj = &lay.j_profile_shifted;
    let top = *hi.iter().chain(hj.iter()).max().unwrap();
    let bottom = *hi.iter().chain(hj.iter()).min().unwrap();
    let content_w = n * UNIT;
    let content_h = (top - bottom) * UNIT;
    let total_w = content_w + 80;
    let total_h = content_h + 100;
    let x = |col: i64| col * UNIT;
    let y = |h: i64| (top - h) * UNIT;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}">"#
    );
    let _ = writeln!(out, r#"<g transform="translate(40,40)">"#);
    for h in (bottom..=top).rev() {
        for col in 0..=n {
            let _ = writeln!(
                out,
                r##"<circle cx="{}" cy="{}" r="3" fill="#b0b0b0"/>"##,
                x(col),
                y(h)
            );
        }
    }
    let path_points = |profile: &[i64]| -> String {
        let mut pts = String::new();
        for (col, &h) in profile.iter().enumerate() {
            if col > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{},{}", x(col as i64), y(h));
        }
        pts
    };
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#33557f" stroke-width="3" stroke-dasharray="8 6"/>"##,
        path_points(hi)
    );
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#7f3322" stroke-width="3"/>"##,
        path_points(hj)
    );
    for c in 1..=n {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="14" text-anchor="middle">{c}</text>"#,
            x(c) - UNIT / 2,
            content_h + 24
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="0" y="{}" font-family="monospace" font-size="12">vertex 0 = vertex {n}: columns wrap</text>"#,
        content_h + 48
    );
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
