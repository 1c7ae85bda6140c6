//! Collatz gate cells: a small searched seed rectangle followed by an output wire.
use alloc::format;
use alloc::vec::Vec;

use super::kit::{CellKind, Kit};
use super::search::SeedRect;
use super::library::finish;
use super::{Port, TruthTable};
use crate::geom::{Coord, Side};
use crate::glue::GlueLabel;

/// Every gate cell spans this many columns, so outputs leave at a common x.
pub const CELL_WIDTH: i32 = 10;

/// Seed rectangle: `w` columns, `h` rows, output on the west of row `r`.
/// Rows count down from the top input; columns count west from the input side.
/// Frame glues use -1 for null.
#[derive(Clone, Copy, Debug)]
pub struct RectSeed {
    pub w: i32,
    pub h: i32,
    pub r: i32,
    pub north: &'static [i8],
    /// East glues of the non-input rows, top to bottom.
    pub east: &'static [i8],
    pub south: &'static [i8],
}

const fn s(w: i32, h: i32, r: i32, north: &'static [i8], east: &'static [i8], south: &'static [i8]) -> RectSeed {
    RectSeed { w, h, r, north, east, south }
}

/// Rectangle used by each gate cell, indexed by gate code.
const SEEDS: [RectSeed; 16] = [
    s(1, 5, 4, &[-1], &[-1, -1, 0], &[1]),
    s(2, 3, 0, &[0, -1], &[0], &[-1, 0]),
    s(2, 3, 0, &[-1, 0], &[0], &[0, -1]),
    s(2, 3, 0, &[1, 0], &[-1], &[-1, -1]),
    s(2, 3, 2, &[-1, 0], &[1], &[1, -1]),
    s(1, 3, 2, &[-1], &[-1], &[1]),
    s(1, 4, 3, &[0], &[1, 0], &[-1]),
    s(2, 3, 0, &[0, -1], &[1], &[-1, 1]),
    s(2, 3, 0, &[0, -1], &[1], &[-1, 0]),
    s(1, 4, 3, &[0], &[0, 0], &[-1]),
    s(1, 3, 1, &[-1], &[0], &[0]),
    s(2, 3, 1, &[0, -1], &[1], &[-1, 0]),
    s(1, 3, 1, &[0], &[0], &[-1]),
    s(2, 3, 2, &[-1, 0], &[1], &[0, -1]),
    s(2, 3, 0, &[0, -1], &[0], &[-1, 1]),
    s(1, 3, 0, &[0], &[-1], &[-1]),
];

pub fn seed_for(code: u8) -> RectSeed {
    SEEDS[code as usize & 15]
}

fn glue(v: i8) -> GlueLabel {
    if v < 0 {
        GlueLabel::NULL
    } else {
        GlueLabel::digit(v as u8)
    }
}

impl RectSeed {
    pub fn to_rect(&self) -> SeedRect {
        let input_rows = alloc::vec![0, 2];
        let mut free = self.east.iter();
        let east = (0..self.h as usize)
            .map(|r| if input_rows.contains(&r) { GlueLabel::NULL } else { glue(*free.next().expect("east glue per row")) })
            .collect();
        SeedRect {
            width: self.w as usize,
            height: self.h as usize,
            out_row: self.r as usize,
            input_rows,
            north: self.north.iter().map(|&v| glue(v)).collect(),
            east,
            south: self.south.iter().map(|&v| glue(v)).collect(),
        }
    }
}

/// Gate cell for `code`; the output wire negates once per tile, so odd-length wires
/// use the rectangle of the complementary table.
pub(crate) fn gate(code: u8) -> crate::gadget::Gadget {
    let kit = Kit::Collatz;
    let seed = seed_for(code);
    let mut fab = seed.to_rect().fabric();
    let y = -seed.r;
    for x in (1 - CELL_WIDTH)..=-seed.w {
        kit.place(&mut fab, CellKind::H, Coord::new(x, y), true).expect("wire cell");
        fab.wall(Coord::new(x, y + 1)).expect("fresh");
    }
    let ports: Vec<Port> = alloc::vec![
        Port::input(Coord::new(0, 0), Side::E),
        Port::input(Coord::new(0, -2), Side::E),
        Port::output(Coord::new(1 - CELL_WIDTH, y), Side::W),
    ];
    finish(kit, format!("gate-{code:04b}"), fab, ports, TruthTable::gate(code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn distance(a: &RectSeed, b: &RectSeed) -> usize {
        let d = |x: &[i8], y: &[i8]| x.iter().zip(y).filter(|(p, q)| p != q).count();
        d(a.north, b.north) + d(a.east, b.east) + d(a.south, b.south)
    }

    #[test]
    fn and_or_nand_nor_share_a_shape() {
        let codes = [0b0001u8, 0b0111, 0b1110, 0b1000];
        for &a in &codes {
            for &b in &codes {
                let (x, y) = (seed_for(a), seed_for(b));
                assert_eq!((x.w, x.h, x.r), (y.w, y.h, y.r));
                assert!(distance(&x, &y) <= 2, "{a:04b} vs {b:04b}");
            }
        }
    }
}
