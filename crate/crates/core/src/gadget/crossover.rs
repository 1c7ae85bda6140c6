//! Crossover cells: two inputs from the east, swapped on the west side.
use alloc::vec;

use super::kit::{CellKind, Fabric, Kit};
use super::library::finish;
use super::{Gadget, Port, TruthTable};
use crate::geom::{Coord, Side};
use crate::glue::GlueLabel;

const fn c(x: i32, y: i32) -> Coord {
    Coord::new(x, y)
}

fn d(v: u8) -> GlueLabel {
    GlueLabel::digit(v)
}

/// West edge of every crossover cell.
pub const CROSSOVER_WEST: i32 = -12;

fn swap_table() -> TruthTable {
    // Out-port 0 (top) carries input b, out-port 1 carries input a.
    TruthTable::from_fn(2, 2, |o, v| if o == 0 { v & 1 == 1 } else { v >> 1 & 1 == 1 })
}

fn lead(kit: Kit, fab: &mut Fabric, y: i32, from: i32, to: i32, neg: bool) {
    for x in (to..=from).rev() {
        kit.place(fab, CellKind::H, c(x, y), neg).expect("lead cell");
    }
}

/// Fanouts of a, b and c = a xor b, and three xor tiles. Outputs leave at rows -2 and -4.
fn nand_nxor() -> Gadget {
    let kit = Kit::NandNxor;
    let mut fab = Fabric::new();
    for p in [c(0, 0), c(-1, 0), c(-2, 0), c(-3, 0), c(-1, -1), c(-3, -1), c(0, -2), c(-1, -2), c(-2, -2), c(-3, -2)] {
        fab.site(p).unwrap();
    }
    for p in [c(0, -3), c(-2, -3), c(0, -4), c(-1, -4), c(-2, -4)] {
        fab.site(p).unwrap();
    }
    for x in [0, -1, -2, -3] {
        fab.wall_glue(c(x, 1), Side::S, d(1)).unwrap();
    }
    fab.wall(c(-4, 0)).unwrap();
    fab.wall(c(-4, -1)).unwrap();
    fab.wall_glue(c(0, -1), Side::S, d(1)).unwrap();
    fab.wall_glue(c(0, -1), Side::W, d(1)).unwrap();
    fab.wall_glue(c(-2, -1), Side::S, d(1)).unwrap();
    fab.wall_glue(c(-2, -1), Side::W, d(1)).unwrap();
    fab.wall_glue(c(-1, -3), Side::S, d(1)).unwrap();
    fab.wall_glue(c(-1, -3), Side::W, d(1)).unwrap();
    fab.wall(c(-3, -3)).unwrap();
    fab.wall_glue(c(1, -3), Side::W, d(1)).unwrap();
    fab.wall_glue(c(1, -4), Side::W, d(1)).unwrap();
    for x in [0, -1, -2] {
        fab.wall(c(x, -5)).unwrap();
    }
    lead(kit, &mut fab, -2, -4, CROSSOVER_WEST, false);
    lead(kit, &mut fab, -4, -3, CROSSOVER_WEST, false);
    let ports = vec![
        Port::input(c(0, 0), Side::E),
        Port::input(c(0, -2), Side::E),
        Port::output(c(CROSSOVER_WEST, -2), Side::W),
        Port::output(c(CROSSOVER_WEST, -4), Side::W),
    ];
    finish(kit, "crossover", fab, ports, swap_table())
}

/// A 4x3 seed rectangle emitting both signals negated on its west side, followed by
/// leads that restore polarity.
fn collatz() -> Gadget {
    let kit = Kit::Collatz;
    let mut fab = Fabric::new();
    for row in 0..3 {
        for col in 0..4 {
            fab.site(c(-col, -row)).unwrap();
        }
    }
    let north = [None, Some(0), Some(0), None];
    let south = [Some(0), None, None, Some(1)];
    for col in 0..4 {
        let g = |v: Option<u8>| v.map_or(GlueLabel::NULL, d);
        fab.wall_glue(c(-col, 1), Side::S, g(north[col as usize])).unwrap();
        fab.wall_glue(c(-col, -3), Side::N, g(south[col as usize])).unwrap();
    }
    fab.wall_glue(c(1, -1), Side::W, d(0)).unwrap();
    fab.wall(c(-4, -1)).unwrap();
    // Top output: nine negating cells.
    lead(kit, &mut fab, 0, -4, CROSSOVER_WEST, true);
    // Bottom output: four cells, a drop of two, four cells.
    lead(kit, &mut fab, -2, -4, -7, true);
    kit.place(&mut fab, CellKind::WS, c(-8, -2), true).unwrap();
    kit.place(&mut fab, CellKind::V, c(-8, -3), false).unwrap();
    kit.place(&mut fab, CellKind::V, c(-8, -4), false).unwrap();
    kit.place(&mut fab, CellKind::SW, c(-8, -5), false).unwrap();
    lead(kit, &mut fab, -5, -9, CROSSOVER_WEST, true);
    for x in CROSSOVER_WEST..=-4 {
        fab.wall(c(x, 1)).unwrap();
    }
    for x in CROSSOVER_WEST..=-9 {
        for y in -4..=-2 {
            fab.wall(c(x, y)).unwrap();
        }
    }
    let ports = vec![
        Port::input(c(0, 0), Side::E),
        Port::input(c(0, -2), Side::E),
        Port::output(c(CROSSOVER_WEST, 0), Side::W),
        Port::output(c(CROSSOVER_WEST, -5), Side::W),
    ];
    finish(kit, "crossover", fab, ports, swap_table())
}

pub fn crossover(kit: Kit) -> Gadget {
    match kit {
        Kit::NandNxor => nand_nxor(),
        Kit::Collatz => collatz(),
    }
}
