//! Exhaustive search for rectangular gate seeds.
//!
//! A candidate is a `w`×`h` block of tile sites framed by seed cells. Inputs arrive on the
//! east side at fixed rows; every other frame edge facing the block carries a free glue.
//! The output is read on the west side of the block at any row.
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::kit::Fabric;
use super::{validate_gadget, Gadget, Port, TruthTable};
use crate::geom::{Coord, Side};
use crate::glue::GlueLabel;
use crate::tile::TileSet;

/// Where the inputs enter a seed rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedConvention {
    /// Rows (counted down from the top row of the block) fed from the east, first in-port first.
    pub input_rows: Vec<usize>,
}

impl SeedConvention {
    /// Two inputs from the east, one block apart.
    pub fn two_apart() -> Self {
        SeedConvention { input_rows: vec![0, 2] }
    }

    /// Two inputs from the east in adjacent rows.
    pub fn adjacent() -> Self {
        SeedConvention { input_rows: vec![0, 1] }
    }

    /// No inputs: growth is triggered by frame glues alone.
    pub fn triggered() -> Self {
        SeedConvention { input_rows: Vec::new() }
    }
}

/// Inclusive size bounds of the searched blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_width: usize,
    pub max_height: usize,
}

/// A framed rectangle of tile sites with its frame glues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedRect {
    pub width: usize,
    pub height: usize,
    /// Row whose west edge is the output.
    pub out_row: usize,
    pub input_rows: Vec<usize>,
    /// Glue facing each column from above, east column first.
    pub north: Vec<GlueLabel>,
    /// Glue facing each row from the east, top row first; ignored on input rows.
    pub east: Vec<GlueLabel>,
    /// Glue facing each column from below, east column first.
    pub south: Vec<GlueLabel>,
}

impl SeedRect {
    /// Local cell of block position (`col` west of the east column, `row` below the top).
    pub fn cell(col: usize, row: usize) -> Coord {
        Coord::new(-(col as i32), -(row as i32))
    }

    /// Frame walls and tile sites. Block east column is x = 0, top row y = 0.
    pub fn fabric(&self) -> Fabric {
        let (w, h) = (self.width as i32, self.height as i32);
        let mut fab = Fabric::new();
        for row in 0..self.height {
            for col in 0..self.width {
                fab.site(Self::cell(col, row)).expect("fresh");
            }
        }
        for col in 0..self.width {
            let x = -(col as i32);
            fab.wall_glue(Coord::new(x, 1), Side::S, self.north[col]).expect("fresh");
            fab.wall_glue(Coord::new(x, -h), Side::N, self.south[col]).expect("fresh");
        }
        for row in 0..self.height {
            if !self.input_rows.contains(&row) {
                fab.wall_glue(Coord::new(1, -(row as i32)), Side::W, self.east[row]).expect("fresh");
            }
            if row != self.out_row {
                fab.wall(Coord::new(-w, -(row as i32))).expect("fresh");
            }
        }
        fab
    }

    pub fn in_ports(&self) -> Vec<Port> {
        self.input_rows.iter().map(|&r| Port::input(Self::cell(0, r), Side::E)).collect()
    }

    pub fn out_port(&self) -> Port {
        Port::output(Self::cell(self.width - 1, self.out_row), Side::W)
    }

    /// Number of frame glues that differ from `other`, or `None` if the shapes differ.
    pub fn glue_distance(&self, other: &SeedRect) -> Option<usize> {
        if (self.width, self.height, &self.input_rows) != (other.width, other.height, &other.input_rows) {
            return None;
        }
        let mut d = 0;
        for (a, b) in self.north.iter().zip(&other.north).chain(self.south.iter().zip(&other.south)) {
            d += (a != b) as usize;
        }
        for row in 0..self.height {
            if !self.input_rows.contains(&row) {
                d += (self.east[row] != other.east[row]) as usize;
            }
        }
        Some(d)
    }
}

/// Search result.
#[derive(Clone, Debug)]
pub struct SeedHit {
    pub rect: SeedRect,
    pub gadget: Gadget,
    /// Most tiles placed over all inputs.
    pub tiles: usize,
    /// Candidate frame assignments examined.
    pub examined: u64,
}

/// Growth of one input inside the block, or `None` on a conflict.
fn grow(ts: &TileSet, rect: &SeedRect, east: &[GlueLabel], grid: &mut Vec<Option<usize>>) -> Option<usize> {
    let (w, h) = (rect.width, rect.height);
    grid.clear();
    grid.resize(w * h, None);
    let at = |g: &Vec<Option<usize>>, col: usize, row: usize| g[row * w + col];
    let tiles = ts.tiles();
    let mut placed = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for row in 0..h {
            for col in 0..w {
                if at(grid, col, row).is_some() {
                    continue;
                }
                let n = if row == 0 { rect.north[col] } else { at(grid, col, row - 1).map_or(GlueLabel::NULL, |t| tiles[t].glue(Side::S)) };
                let s = if row + 1 == h { rect.south[col] } else { at(grid, col, row + 1).map_or(GlueLabel::NULL, |t| tiles[t].glue(Side::N)) };
                let e = if col == 0 { east[row] } else { at(grid, col - 1, row).map_or(GlueLabel::NULL, |t| tiles[t].glue(Side::W)) };
                let wv = if col + 1 == w { GlueLabel::NULL } else { at(grid, col + 1, row).map_or(GlueLabel::NULL, |t| tiles[t].glue(Side::E)) };
                let mut found = None;
                for (i, t) in tiles.iter().enumerate() {
                    let k = t.glue(Side::N).matches(&n) as u8
                        + t.glue(Side::S).matches(&s) as u8
                        + t.glue(Side::E).matches(&e) as u8
                        + t.glue(Side::W).matches(&wv) as u8;
                    if k >= 2 {
                        if found.is_some() {
                            return None;
                        }
                        found = Some(i);
                    }
                }
                if let Some(i) = found {
                    grid[row * w + col] = Some(i);
                    placed += 1;
                    changed = true;
                }
            }
        }
    }
    Some(placed)
}

fn options(ts: &TileSet, side: Side) -> Vec<GlueLabel> {
    let mut v = vec![GlueLabel::NULL];
    v.extend(ts.side_alphabet(side));
    v
}

/// Calls `f` on every assignment of `slots` values drawn from `alphabets[i]`.
fn for_each_assignment(alphabets: &[Vec<GlueLabel>], f: &mut impl FnMut(&[GlueLabel])) {
    let mut idx = vec![0usize; alphabets.len()];
    let mut cur: Vec<GlueLabel> = alphabets.iter().map(|a| a[0]).collect();
    loop {
        f(&cur);
        let mut i = 0;
        loop {
            if i == idx.len() {
                return;
            }
            idx[i] += 1;
            if idx[i] < alphabets[i].len() {
                cur[i] = alphabets[i][idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = alphabets[i][0];
            i += 1;
        }
    }
}

/// Smallest rectangular seed (by tile count, then area) realising `table` on its single
/// out-port, or `None` if no block within `bounds` works.
///
/// Each frame assignment is rejected at the first input that grows ambiguously or reads
/// the wrong output; survivors are confirmed with [`validate_gadget`].
pub fn search_gate_seed(ts: &TileSet, table: TruthTable, bounds: SearchBounds, conv: &SeedConvention) -> Option<SeedHit> {
    let k = conv.input_rows.len();
    if table.inputs as usize != k || table.outputs != 1 {
        return None;
    }
    let (na, ea, sa) = (options(ts, Side::N), options(ts, Side::E), options(ts, Side::S));
    let min_h = conv.input_rows.iter().map(|r| r + 1).max().unwrap_or(1);
    let mut dims: Vec<(usize, usize)> = Vec::new();
    for w in 1..=bounds.max_width {
        for h in min_h..=bounds.max_height {
            dims.push((w, h));
        }
    }
    dims.sort_by_key(|&(w, h)| (w * h, w));
    let tiles = ts.tiles();
    let mut best: Option<(usize, usize, SeedRect)> = None;
    let mut examined = 0u64;
    let mut grid = Vec::new();
    for (w, h) in dims {
        if let Some((t, _, _)) = &best {
            if *t == 1 {
                break;
            }
        }
        let free_rows: Vec<usize> = (0..h).filter(|r| !conv.input_rows.contains(r)).collect();
        let mut alphabets = Vec::new();
        alphabets.extend((0..w).map(|_| na.clone()));
        alphabets.extend(free_rows.iter().map(|_| ea.clone()));
        alphabets.extend((0..w).map(|_| sa.clone()));
        let mut rect = SeedRect {
            width: w,
            height: h,
            out_row: 0,
            input_rows: conv.input_rows.clone(),
            north: vec![GlueLabel::NULL; w],
            east: vec![GlueLabel::NULL; h],
            south: vec![GlueLabel::NULL; w],
        };
        for_each_assignment(&alphabets, &mut |a| {
            examined += 1;
            rect.north.copy_from_slice(&a[..w]);
            for (i, &r) in free_rows.iter().enumerate() {
                rect.east[r] = a[w + i];
            }
            rect.south.copy_from_slice(&a[w + free_rows.len()..]);
            // Rows still able to carry the output, and the largest growth seen.
            let mut rows: Vec<bool> = vec![true; h];
            let mut most = 0;
            let mut east = rect.east.clone();
            for v in 0..1usize << k {
                for (i, &r) in conv.input_rows.iter().enumerate() {
                    east[r] = GlueLabel::bit(v >> (k - 1 - i) & 1 == 1);
                }
                let Some(n) = grow(ts, &rect, &east, &mut grid) else { return };
                most = most.max(n);
                if let Some((t, _, _)) = &best {
                    if most > *t {
                        return;
                    }
                }
                let want = table.eval(0, v);
                for (r, ok) in rows.iter_mut().enumerate() {
                    let got = grid[r * w + w - 1].and_then(|t| tiles[t].glue(Side::W).as_bit());
                    *ok &= got == Some(want);
                }
                if !rows.iter().any(|&b| b) {
                    return;
                }
            }
            let area = w * h;
            for r in (0..h).filter(|&r| rows[r]) {
                if let Some((t, a, _)) = &best {
                    if (most, area) >= (*t, *a) {
                        return;
                    }
                }
                let cand = SeedRect { out_row: r, ..rect.clone() };
                let g = seed_gadget(ts.name(), &cand, table, most);
                if validate_gadget(&g, ts).is_ok() {
                    best = Some((most, area, cand));
                }
            }
        });
    }
    best.map(|(t, _, rect)| SeedHit { gadget: seed_gadget(ts.name(), &rect, table, t), rect, tiles: t, examined })
}

/// Gadget for a seed rectangle with its ports.
pub fn seed_gadget(tileset_id: &str, rect: &SeedRect, table: TruthTable, tiles: usize) -> Gadget {
    let fab = rect.fabric();
    let mut ports = rect.in_ports();
    ports.push(rect.out_port());
    Gadget {
        name: format!("seed-{table}"),
        tileset_id: tileset_id.into(),
        tiles,
        maze: fab.maze,
        ports,
        truth: Some(table),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tilesets;

    fn bounds(w: usize, h: usize) -> SearchBounds {
        SearchBounds { max_width: w, max_height: h }
    }

    #[test]
    fn finds_small_and_seed() {
        let ts = tilesets::collatz(false);
        let hit = search_gate_seed(&ts, TruthTable::gate(0b0001), bounds(2, 3), &SeedConvention::two_apart()).unwrap();
        assert!(hit.tiles <= 14);
        validate_gadget(&hit.gadget, &ts).unwrap();
    }

    #[test]
    fn single_cell_cannot_xor() {
        let ts = tilesets::collatz(false);
        let conv = SeedConvention::adjacent();
        assert!(search_gate_seed(&ts, TruthTable::gate(0b0110), bounds(1, 1), &conv).is_none());
    }

    #[test]
    fn triggered_constant() {
        let ts = tilesets::collatz(false);
        let one = TruthTable::from_fn(0, 1, |_, _| true);
        let hit = search_gate_seed(&ts, one, bounds(1, 1), &SeedConvention::triggered()).unwrap();
        assert_eq!(hit.tiles, 1);
    }
}
