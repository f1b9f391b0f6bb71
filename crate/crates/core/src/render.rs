//! JSON dumps, ASCII art and SVG pictures of regions.

use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use crate::matchgraph::dual_graph;
use crate::region::{Cell, CellKind, Color, Corners, Region, RegionSpec, RegionStats};

#[derive(Clone, Debug, Serialize)]
pub struct RegionDump {
    pub spec: RegionSpec,
    pub cells: Vec<Cell>,
    pub corners: Corners,
    pub drawn_levels: Vec<i64>,
    pub stats: RegionStats,
}

pub fn region_dump(region: &Region) -> RegionDump {
    RegionDump {
        spec: region.spec.clone(),
        cells: region.cells.clone(),
        corners: region.corners,
        drawn_levels: region.drawn_levels.clone(),
        stats: region.stats(),
    }
}

/// One perfect matching of the dual as a tile label per cell.
fn tile_labels(region: &Region) -> Option<Vec<usize>> {
    let g = dual_graph(region);
    let matching = g.find_perfect_matching()?;
    let mut label = vec![0; region.cells.len()];
    for (tile, &e) in matching.iter().enumerate() {
        label[g.edges[e].u] = tile;
        label[g.edges[e].v] = tile;
    }
    Some(label)
}

fn bounds(region: &Region) -> (i64, i64, i64, i64) {
    let xs = region.boundary.iter().map(|p| p.x);
    let ys = region.boundary.iter().map(|p| p.y);
    (
        xs.clone().min().unwrap_or(0),
        xs.max().unwrap_or(0),
        ys.clone().min().unwrap_or(0),
        ys.max().unwrap_or(0),
    )
}

const TILE_CHARS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Two characters per unit square, top row first. `#` is black and `.` is
/// white; a split square shows its upper-left triangle then its lower-right
/// one. With `with_tiling`, cells carry the letter of the domino covering
/// them instead.
///
/// Returns `None` only when a tiling is requested and none exists.
pub fn render_ascii(region: &Region, with_tiling: bool) -> Option<String> {
    let labels = if with_tiling {
        Some(tile_labels(region)?)
    } else {
        None
    };
    let (x0, x1, y0, y1) = bounds(region);
    let mut at: HashMap<(i64, i64, CellKind), usize> = HashMap::new();
    for (i, c) in region.cells.iter().enumerate() {
        at.insert((c.anchor.x, c.anchor.y, c.kind), i);
    }
    let glyph = |idx: Option<&usize>| -> char {
        match idx {
            None => ' ',
            Some(&i) => match &labels {
                Some(l) => TILE_CHARS[l[i] % TILE_CHARS.len()] as char,
                None if region.cells[i].color == Color::Black => '#',
                None => '.',
            },
        }
    };
    let mut out = String::new();
    for j in (y0..y1).rev() {
        let mut line = String::new();
        for i in x0..x1 {
            if let Some(sq) = at.get(&(i, j, CellKind::Square)) {
                let g = glyph(Some(sq));
                line.push(g);
                line.push(g);
            } else {
                line.push(glyph(at.get(&(i, j, CellKind::TriangleUp))));
                line.push(glyph(at.get(&(i, j, CellKind::TriangleDown))));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    Some(out)
}

const SCALE: i64 = 24;

/// SVG 1.1 picture with black and white cells, optionally overlaid with one
/// tiling drawn as segments joining matched cells.
///
/// Returns `None` only when a tiling is requested and none exists.
pub fn render_svg(region: &Region, with_tiling: bool) -> Option<String> {
    let (x0, x1, y0, y1) = bounds(region);
    let pad = 1;
    let width = (x1 - x0 + 2 * pad) * SCALE;
    let height = (y1 - y0 + 2 * pad) * SCALE;
    // lattice (x, y) to picture coordinates, y pointing down
    let px = |x: i64| (x - x0 + pad) * SCALE;
    let py = |y: i64| (y1 - y + pad) * SCALE;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(s, "<title>{}</title>", region.spec).unwrap();
    writeln!(s, r##"<g stroke="#808080" stroke-width="1">"##).unwrap();
    for c in &region.cells {
        let pts: Vec<String> = c
            .polygon()
            .iter()
            .map(|p| format!("{},{}", px(p.x), py(p.y)))
            .collect();
        let fill = match c.color {
            Color::Black => "#000000",
            Color::White => "#ffffff",
        };
        writeln!(s, r#"<polygon points="{}" fill="{fill}"/>"#, pts.join(" ")).unwrap();
    }
    writeln!(s, "</g>").unwrap();

    let outline: Vec<String> = region
        .boundary
        .iter()
        .map(|p| format!("{},{}", px(p.x), py(p.y)))
        .collect();
    writeln!(
        s,
        r##"<polygon points="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        outline.join(" ")
    )
    .unwrap();

    if with_tiling {
        let g = dual_graph(region);
        let matching = g.find_perfect_matching()?;
        writeln!(
            s,
            r##"<g stroke="#d62728" stroke-width="4" stroke-linecap="round">"##
        )
        .unwrap();
        // centroids are stored scaled by 6
        let cx = |x: i64| px(0) + x * SCALE / 6;
        let cy = |y: i64| py(0) - y * SCALE / 6;
        for e in matching {
            let (a, b) = (&g.vertices[g.edges[e].u], &g.vertices[g.edges[e].v]);
            writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                cx(a.x),
                cy(a.y),
                cx(b.x),
                cy(b.y)
            )
            .unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::build_region;

    #[test]
    fn aztec_ascii() {
        let r = build_region(&RegionSpec::new(2, vec![4])).unwrap();
        let art = render_ascii(&r, false).unwrap();
        assert_eq!(art.lines().count(), 4);
        let cells: usize = art.chars().filter(|c| *c == '#' || *c == '.').count();
        assert_eq!(cells, 2 * 12);
    }

    #[test]
    fn tiling_labels_pair_cells() {
        let r = build_region(&RegionSpec::new(2, vec![1, 2, 1])).unwrap();
        let art = render_ascii(&r, true).unwrap();
        assert!(!art.contains('#'));
        let svg = render_svg(&r, true).unwrap();
        assert_eq!(svg.matches("<line").count(), 10);
    }

    #[test]
    fn svg_is_deterministic() {
        let r = build_region(&RegionSpec::new(7, vec![4, 2, 5, 4])).unwrap();
        let a = render_svg(&r, false).unwrap();
        assert_eq!(a, render_svg(&r, false).unwrap());
        assert_eq!(a.matches("<polygon").count(), r.cells.len() + 1);
    }
}
