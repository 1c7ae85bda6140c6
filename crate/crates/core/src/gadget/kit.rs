//! Wire cell recipes: which seed glues make a tile site carry a signal.
use alloc::collections::BTreeSet;

use crate::geom::{Coord, Side};
use crate::glue::GlueLabel;
use crate::maze::Maze;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FabricError {
    #[error("cell {0} is needed both as a tile site and as a seed cell")]
    SiteWallClash(Coord),
    #[error("seed glue conflict on side {1} of {0}")]
    GlueClash(Coord, Side),
}

/// A maze under construction together with the cells reserved for tiles.
#[derive(Clone, Debug, Default)]
pub struct Fabric {
    pub maze: Maze,
    pub sites: BTreeSet<Coord>,
}

impl Fabric {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn site(&mut self, c: Coord) -> Result<(), FabricError> {
        if self.maze.is_seed(c) {
            return Err(FabricError::SiteWallClash(c));
        }
        self.sites.insert(c);
        Ok(())
    }

    pub fn wall(&mut self, c: Coord) -> Result<(), FabricError> {
        if self.sites.contains(&c) {
            return Err(FabricError::SiteWallClash(c));
        }
        if !self.maze.is_seed(c) {
            self.maze.add_cell(c).expect("fresh cell");
        }
        Ok(())
    }

    /// Puts glue `g` on side `side` of seed cell `wall`, creating the cell if needed.
    pub fn wall_glue(&mut self, wall: Coord, side: Side, g: GlueLabel) -> Result<(), FabricError> {
        self.wall(wall)?;
        let old = self.maze.glue_of(wall, side);
        if !old.is_null() && old != g {
            return Err(FabricError::GlueClash(wall, side));
        }
        self.maze.set_glue(wall, side, g);
        Ok(())
    }
}

/// Signal-carrying cell shapes. Horizontal signals travel west, vertical ones south.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    /// East in, west out.
    H,
    /// East in, south out.
    WS,
    /// North in, south out.
    V,
    /// North in, west out.
    SW,
}

impl CellKind {
    pub fn input_side(self) -> Side {
        match self {
            CellKind::H | CellKind::WS => Side::E,
            CellKind::V | CellKind::SW => Side::N,
        }
    }

    pub fn output_side(self) -> Side {
        match self {
            CellKind::H | CellKind::SW => Side::W,
            CellKind::WS | CellKind::V => Side::S,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kit {
    NandNxor,
    Collatz,
}

impl Kit {
    pub fn for_tileset(id: &str) -> Option<Kit> {
        match id {
            crate::tilesets::NAND_NXOR => Some(Kit::NandNxor),
            crate::tilesets::COLLATZ => Some(Kit::Collatz),
            _ => None,
        }
    }

    pub fn tileset_id(self) -> &'static str {
        match self {
            Kit::NandNxor => crate::tilesets::NAND_NXOR,
            Kit::Collatz => crate::tilesets::COLLATZ,
        }
    }

    /// Achievable negations for a cell kind, preferred first.
    pub fn options(self, kind: CellKind) -> &'static [bool] {
        match (self, kind) {
            (Kit::NandNxor, CellKind::H) | (Kit::NandNxor, CellKind::SW) => &[false, true],
            (Kit::NandNxor, CellKind::WS) | (Kit::NandNxor, CellKind::V) => &[true],
            (Kit::Collatz, CellKind::H) => &[true],
            (Kit::Collatz, CellKind::WS) | (Kit::Collatz, CellKind::V) => &[false, true],
            (Kit::Collatz, CellKind::SW) => &[false],
        }
    }

    pub fn can(self, kind: CellKind, neg: bool) -> bool {
        self.options(kind).contains(&neg)
    }

    /// Reserves `c` as a tile site of the given kind and seeds the glue it needs.
    pub fn place(self, fab: &mut Fabric, kind: CellKind, c: Coord, neg: bool) -> Result<(), FabricError> {
        assert!(self.can(kind, neg), "{kind:?} cannot realise negation={neg} for {self:?}");
        fab.site(c)?;
        let d = GlueLabel::digit;
        match (self, kind) {
            (Kit::NandNxor, CellKind::H) => fab.wall_glue(c.step(Side::N), Side::S, d(if neg { 0 } else { 1 })),
            (Kit::NandNxor, CellKind::WS) => fab.wall_glue(c.step(Side::N), Side::S, d(1)),
            (Kit::NandNxor, CellKind::V) => fab.wall_glue(c.step(Side::E), Side::W, d(1)),
            (Kit::NandNxor, CellKind::SW) => fab.wall_glue(c.step(Side::E), Side::W, d(if neg { 0 } else { 1 })),
            (Kit::Collatz, CellKind::H) => fab.wall_glue(c.step(Side::S), Side::N, d(1)),
            (Kit::Collatz, CellKind::WS) => fab.wall_glue(c.step(Side::N), Side::S, d(neg as u8)),
            (Kit::Collatz, CellKind::V) => fab.wall_glue(c.step(Side::E), Side::W, d(neg as u8)),
            (Kit::Collatz, CellKind::SW) => fab.wall_glue(c.step(Side::E), Side::W, d(0)),
        }
    }
}

/// One cell of a signal path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathCell {
    pub at: Coord,
    pub kind: CellKind,
}

/// Chooses per-cell negations so the whole path has total negation `want`.
///
/// Every cell starts at its preferred option; if the parity is wrong the last cell
/// (scanning from `prefer` first) that can flip is flipped. Returns `None` when no
/// cell can change parity.
pub fn assign_polarity(kit: Kit, path: &[PathCell], want: bool, prefer: Option<usize>) -> Option<alloc::vec::Vec<bool>> {
    let mut negs: alloc::vec::Vec<bool> = path.iter().map(|p| kit.options(p.kind)[0]).collect();
    let total = negs.iter().fold(false, |a, &b| a ^ b);
    if total == want {
        return Some(negs);
    }
    let flexible = |i: usize| kit.options(path[i].kind).len() > 1;
    let idx = prefer.filter(|&i| i < path.len() && flexible(i)).or_else(|| (0..path.len()).rev().find(|&i| flexible(i)))?;
    negs[idx] = !negs[idx];
    Some(negs)
}

/// Places a whole path with the given negations.
pub fn place_path(kit: Kit, fab: &mut Fabric, path: &[PathCell], negs: &[bool]) -> Result<(), FabricError> {
    for (p, &n) in path.iter().zip(negs) {
        kit.place(fab, p.kind, p.at, n)?;
    }
    Ok(())
}
