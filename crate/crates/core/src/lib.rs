//! Maze-walking tile assembly: glues, tiles, seeds and the cooperative assembly engine,
//! plus the circuit compiler and Collatz constructions built on top of it.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod assembly;
pub mod circuit;
pub mod confluence;
pub mod gadget;
pub mod geom;
pub mod glue;
pub mod layout;
pub mod maze;
pub mod tile;
pub mod tilesets;

pub use assembly::{run_to_terminal, Assembly, BindingMode, OrderPolicy, RunConfig, RunReport};
pub use geom::{Coord, EdgeSite, Rect, Side};
pub use glue::GlueLabel;
pub use maze::Maze;
pub use tile::{TileId, TileSet, TileType};
