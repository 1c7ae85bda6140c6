use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::Side;
use crate::glue::GlueLabel;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TileType {
    pub name: String,
    /// Indexed by `Side::index()`.
    pub glues: [GlueLabel; 4],
}

impl TileType {
    pub fn new(name: impl Into<String>, n: GlueLabel, e: GlueLabel, s: GlueLabel, w: GlueLabel) -> Self {
        TileType { name: name.into(), glues: [n, e, s, w] }
    }

    pub fn glue(&self, side: Side) -> GlueLabel {
        self.glues[side.index()]
    }
}

impl fmt::Display for TileType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} N={} E={} S={} W={}",
            self.name, self.glues[0], self.glues[1], self.glues[2], self.glues[3]
        )
    }
}

/// Index of a tile within its tile set.
pub type TileId = u16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TileSetError {
    #[error("duplicate tile name `{0}`")]
    DuplicateName(String),
    #[error("tiles `{0}` and `{1}` have identical glues")]
    DuplicateGlues(String, String),
    #[error("tile set is empty")]
    Empty,
    #[error("too many tiles")]
    TooMany,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSet {
    name: String,
    tiles: Vec<TileType>,
}

impl TileSet {
    pub fn new(name: impl Into<String>, tiles: Vec<TileType>) -> Result<Self, TileSetError> {
        if tiles.is_empty() {
            return Err(TileSetError::Empty);
        }
        if tiles.len() >= TileId::MAX as usize - 2 {
            return Err(TileSetError::TooMany);
        }
        for (i, a) in tiles.iter().enumerate() {
            for b in &tiles[..i] {
                if a.name == b.name {
                    return Err(TileSetError::DuplicateName(a.name.clone()));
                }
                if a.glues == b.glues {
                    return Err(TileSetError::DuplicateGlues(b.name.clone(), a.name.clone()));
                }
            }
        }
        Ok(TileSet { name: name.into(), tiles })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tile(&self, id: TileId) -> &TileType {
        &self.tiles[id as usize]
    }

    pub fn id_of(&self, name: &str) -> Option<TileId> {
        self.tiles.iter().position(|t| t.name == name).map(|i| i as TileId)
    }

    pub fn by_name(&self, name: &str) -> Option<&TileType> {
        self.tiles.iter().find(|t| t.name == name)
    }

    /// All distinct non-null glue labels in the set.
    pub fn alphabet(&self) -> Vec<GlueLabel> {
        let mut v: Vec<GlueLabel> =
            self.tiles.iter().flat_map(|t| t.glues).filter(|g| !g.is_null()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Labels appearing on the given side of some tile.
    pub fn side_alphabet(&self, side: Side) -> Vec<GlueLabel> {
        let mut v: Vec<GlueLabel> =
            self.tiles.iter().map(|t| t.glue(side)).filter(|g| !g.is_null()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn unique_tile_for(&self, probe: &SidePairProbe) -> ProbeOutcome<'_> {
        let (a, b) = probe.pair.sides();
        let hits: Vec<&TileType> = self
            .tiles
            .iter()
            .filter(|t| t.glue(a) == probe.values.0 && t.glue(b) == probe.values.1)
            .collect();
        match hits.len() {
            0 => ProbeOutcome::None,
            1 => ProbeOutcome::Unique(hits[0]),
            _ => ProbeOutcome::Ambiguous(hits),
        }
    }

    /// True when every probe over the given corner built from the set's own side alphabets
    /// resolves to at most one tile.
    pub fn is_deterministic_on(&self, pair: CornerPair) -> bool {
        let (a, b) = pair.sides();
        for ga in self.side_alphabet(a) {
            for gb in self.side_alphabet(b) {
                let probe = SidePairProbe { pair, values: (ga, gb) };
                if let ProbeOutcome::Ambiguous(_) = self.unique_tile_for(&probe) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CornerPair {
    NE,
    SE,
    SW,
    NW,
}

impl CornerPair {
    pub fn sides(self) -> (Side, Side) {
        match self {
            CornerPair::NE => (Side::N, Side::E),
            CornerPair::SE => (Side::S, Side::E),
            CornerPair::SW => (Side::S, Side::W),
            CornerPair::NW => (Side::N, Side::W),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SidePairProbe {
    pub pair: CornerPair,
    pub values: (GlueLabel, GlueLabel),
}

impl SidePairProbe {
    pub fn new(pair: CornerPair, a: GlueLabel, b: GlueLabel) -> Self {
        SidePairProbe { pair, values: (a, b) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome<'a> {
    Unique(&'a TileType),
    None,
    /// Two or more tiles match: the set is not deterministic on this corner.
    Ambiguous(Vec<&'a TileType>),
}

impl<'a> ProbeOutcome<'a> {
    pub fn unique(&self) -> Option<&'a TileType> {
        match self {
            ProbeOutcome::Unique(t) => Some(t),
            _ => None,
        }
    }
}
