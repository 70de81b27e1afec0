//! Static per-UAV path diagrams.
//!
//! ASCII diagrams draw each grid cell three characters wide: obstacles are
//! `#`, unvisited free cells `.`, each departed cell shows the direction the
//! UAV left it in, and the final cell is `*`. The start cell is bracketed.

use std::fmt::Write as _;

use crate::gridmap::{Coord, Direction, GridMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Glyphs {
    #[default]
    Unicode,
    Ascii,
}

impl Glyphs {
    fn arrow(self, d: Direction) -> char {
        match self {
            Glyphs::Unicode => d.arrow(),
            Glyphs::Ascii => d.ascii(),
        }
    }
}

/// Drops the repeated positions of epochs in which a UAV stayed put.
pub fn distinct_steps(path: &[Coord]) -> Vec<Coord> {
    let mut out: Vec<Coord> = Vec::with_capacity(path.len());
    for &c in path {
        if out.last() != Some(&c) {
            out.push(c);
        }
    }
    out
}

/// ASCII diagram of one UAV's path.
pub fn ascii_diagram(map: &GridMap, path: &[Coord], glyphs: Glyphs) -> String {
    let steps = distinct_steps(path);
    let mut cells = vec![vec![None::<char>; map.cols()]; map.rows()];
    for w in steps.windows(2) {
        if let Some(d) = Direction::between(w[0], w[1]) {
            cells[w[0].row][w[0].col] = Some(glyphs.arrow(d));
        }
    }
    if let Some(last) = steps.last() {
        cells[last.row][last.col] = Some('*');
    }
    let start = steps.first().copied();
    let mut out = String::new();
    for (r, row) in cells.iter().enumerate() {
        for (c, mark) in row.iter().enumerate() {
            let here = Coord::new(r, c);
            let ch = if map.is_blocked(here) {
                '#'
            } else {
                mark.unwrap_or('.')
            };
            if Some(here) == start {
                let _ = write!(out, "[{ch}]");
            } else {
                let _ = write!(out, " {ch} ");
            }
        }
        let trimmed = out.trim_end_matches(' ').len();
        out.truncate(trimmed);
        out.push('\n');
    }
    out
}

/// ASCII diagram of UAV `uav` (0-based) under a one-line title.
pub fn ascii_titled(map: &GridMap, path: &[Coord], uav: usize, glyphs: Glyphs) -> String {
    let moves = distinct_steps(path).len().saturating_sub(1);
    let start = path.first().map_or("-".to_string(), |c| c.to_string());
    format!(
        "UAV {} (start {start}, {moves} moves)\n{}",
        uav + 1,
        ascii_diagram(map, path, glyphs)
    )
}

/// One titled ASCII diagram per UAV, separated by blank lines.
pub fn ascii_report(map: &GridMap, paths: &[Vec<Coord>], glyphs: Glyphs) -> String {
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| ascii_titled(map, p, i, glyphs))
        .collect::<Vec<_>>()
        .join("\n")
}

const CELL: usize = 24;
const COLOURS: [&str; 4] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd"];

/// SVG of one UAV's path drawn as a polyline over the grid.
pub fn svg_diagram(map: &GridMap, path: &[Coord], uav: usize) -> String {
    let (w, h) = (map.cols() * CELL, map.rows() * CELL);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    let _ = writeln!(s, "<title>UAV {}</title>", uav + 1);
    for r in 0..map.rows() {
        for c in 0..map.cols() {
            let fill = if map.is_blocked(Coord::new(r, c)) {
                "#444444"
            } else {
                "#ffffff"
            };
            let _ = writeln!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"#bbbbbb\"/>",
                c * CELL,
                r * CELL
            );
        }
    }
    let centre = |c: Coord| (c.col * CELL + CELL / 2, c.row * CELL + CELL / 2);
    let steps = distinct_steps(path);
    let colour = COLOURS[uav % COLOURS.len()];
    let points: Vec<String> = steps
        .iter()
        .map(|&c| {
            let (x, y) = centre(c);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"3\" stroke-linejoin=\"round\"/>",
        points.join(" ")
    );
    if let Some(&first) = steps.first() {
        let (x, y) = centre(first);
        let _ = writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{colour}\"/>",
            x - 5,
            y - 5
        );
    }
    if let Some(&last) = steps.last() {
        let (x, y) = centre(last);
        let _ = writeln!(
            s,
            "<circle cx=\"{x}\" cy=\"{y}\" r=\"5\" fill=\"{colour}\"/>"
        );
    }
    s.push_str("</svg>\n");
    s
}
