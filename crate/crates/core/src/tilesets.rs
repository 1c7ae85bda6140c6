//! Builtin tile sets.
use alloc::format;
use alloc::vec::Vec;

use crate::glue::GlueLabel;
use crate::tile::{TileSet, TileType};

pub const NAND_NXOR: &str = "nand-nxor";
pub const COLLATZ: &str = "collatz";
pub const COLLATZ_EXT: &str = "collatz-ext";

/// Glue used by the two trajectory tiles.
pub fn s_glue() -> GlueLabel {
    GlueLabel::new("S").expect("valid label")
}

/// Four tiles: inputs on N and E, `S = NAND(N,E)`, `W = NXOR(N,E)`.
pub fn nand_nxor() -> TileSet {
    let mut tiles = Vec::new();
    for n in [false, true] {
        for e in [false, true] {
            let s = !(n && e);
            let w = n == e;
            tiles.push(TileType::new(
                format!("{}{}", n as u8, e as u8),
                GlueLabel::bit(n),
                GlueLabel::bit(e),
                GlueLabel::bit(s),
                GlueLabel::bit(w),
            ));
        }
    }
    TileSet::new(NAND_NXOR, tiles).expect("builtin tile set is valid")
}

/// The six tiles `0..=5` with `3N + E = 2W + S = x`, plus two trajectory tiles when `extended`.
pub fn collatz(extended: bool) -> TileSet {
    let mut tiles: Vec<TileType> = (0u8..6)
        .map(|x| {
            TileType::new(
                format!("{x}"),
                GlueLabel::digit(x / 3),
                GlueLabel::digit(x % 3),
                GlueLabel::digit(x % 2),
                GlueLabel::digit(x / 2),
            )
        })
        .collect();
    let name = if extended {
        let s = s_glue();
        tiles.push(TileType::new("S0", GlueLabel::digit(0), s, GlueLabel::digit(0), s));
        tiles.push(TileType::new("S1", GlueLabel::digit(1), s, GlueLabel::digit(0), GlueLabel::digit(2)));
        COLLATZ_EXT
    } else {
        COLLATZ
    };
    TileSet::new(name, tiles).expect("builtin tile set is valid")
}

pub fn builtin(id: &str) -> Option<TileSet> {
    match id {
        NAND_NXOR => Some(nand_nxor()),
        COLLATZ => Some(collatz(false)),
        COLLATZ_EXT => Some(collatz(true)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Side;
    use crate::tile::{CornerPair, ProbeOutcome, SidePairProbe};

    fn g(s: &str) -> GlueLabel {
        GlueLabel::new(s).unwrap()
    }

    fn find<'a>(ts: &'a TileSet, n: &str, e: &str) -> &'a TileType {
        ts.unique_tile_for(&SidePairProbe::new(CornerPair::NE, g(n), g(e))).unique().unwrap()
    }

    #[test]
    fn nand_nxor_table() {
        let ts = nand_nxor();
        assert_eq!(ts.len(), 4);
        for (n, e, s, w) in [("0", "0", "1", "1"), ("1", "1", "0", "1"), ("0", "1", "1", "0"), ("1", "0", "1", "0")] {
            let t = find(&ts, n, e);
            assert_eq!(t.glue(Side::S), g(s));
            assert_eq!(t.glue(Side::W), g(w));
        }
    }

    #[test]
    fn nand_nxor_sw_probe_is_ambiguous() {
        let ts = nand_nxor();
        let p = SidePairProbe::new(CornerPair::SW, g("1"), g("0"));
        assert!(matches!(ts.unique_tile_for(&p), ProbeOutcome::Ambiguous(v) if v.len() == 2));
        assert!(ts.is_deterministic_on(CornerPair::NE));
    }

    #[test]
    fn collatz_tiles() {
        let ts = collatz(false);
        assert_eq!(ts.len(), 6);
        let five = ts.by_name("5").unwrap();
        assert_eq!(five.glues, [g("1"), g("2"), g("1"), g("2")]);
        assert!(ts.by_name("0").unwrap().glues.iter().all(|x| *x == g("0")));
        for t in ts.tiles() {
            let v = |s| t.glue(s).digit_value().unwrap() as u32;
            let x: u32 = t.name.parse().unwrap();
            assert_eq!(3 * v(Side::N) + v(Side::E), x);
            assert_eq!(2 * v(Side::W) + v(Side::S), x);
        }
        let p = SidePairProbe::new(CornerPair::SE, g("1"), g("2"));
        assert_eq!(ts.unique_tile_for(&p).unique().unwrap().name, "5");
        for c in [CornerPair::NE, CornerPair::SE, CornerPair::SW] {
            assert!(ts.is_deterministic_on(c));
        }
        assert!(!ts.is_deterministic_on(CornerPair::NW));
    }

    #[test]
    fn extended_collatz() {
        let ts = collatz(true);
        assert_eq!(ts.len(), 8);
        assert!(ts.is_deterministic_on(CornerPair::NE));
    }
}
