//! Collatz tile arithmetic: trajectories, powers of two in ternary, the rectangle identity.
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::assembly::{run_to_terminal, Assembly, RunConfig, RunError};
use crate::geom::{Coord, EdgeSite, Rect, Side};
use crate::glue::GlueLabel;
use crate::maze::Maze;
use crate::tile::TileSet;
use crate::tilesets::{self, s_glue};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("input must be at least 1")]
    Zero,
    #[error("two tile types fit at {0}")]
    Nondeterministic(Coord),
    #[error("edge {edge} carries `{glue}`, not a base-{base} digit")]
    NonDigit { edge: EdgeSite, glue: GlueLabel, base: u32 },
    #[error("rectangle is not fully tiled at {0}")]
    NotFullyTiled(Coord),
    #[error("column {0} disagrees with direct base conversion")]
    Disagreement(usize),
    #[error(transparent)]
    Run(#[from] RunError),
}

/// `T(x) = x/2` for even `x`, `(3x+1)/2` for odd `x`, iterated `n` times.
pub fn collatz_oracle(x: &BigUint, n: usize) -> BigUint {
    let mut x = x.clone();
    for _ in 0..n {
        if x.bit(0) {
            x = (x * 3u32 + 1u32) >> 1;
        } else {
            x >>= 1;
        }
    }
    x
}

/// Digits of `x` in base `base`, most significant first; `"0"` for zero.
pub fn to_base(x: &BigUint, base: u32) -> String {
    x.to_str_radix(base)
}

/// Ordered edges read as a number, most significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitReading {
    pub edges: Vec<EdgeSite>,
    pub base: u32,
    /// Labels passed over without contributing a digit.
    pub skip: Vec<GlueLabel>,
}

/// Decodes a reading on a terminal assembly; returns the value and the digits used.
pub fn read_digits(asm: &Assembly, reading: &DigitReading) -> Result<(BigUint, String), ArithError> {
    let mut v = BigUint::zero();
    let mut digits = String::new();
    for &e in &reading.edges {
        let g = asm.glue_at(e);
        if reading.skip.contains(&g) {
            continue;
        }
        let d = g.digit_value().filter(|&d| (d as u32) < reading.base).ok_or(ArithError::NonDigit {
            edge: e,
            glue: g,
            base: reading.base,
        })?;
        v = v * reading.base + d as u32;
        digits.push((b'0' + d) as char);
    }
    Ok((v, digits))
}

fn grow(maze: Maze, ts: TileSet) -> Result<Assembly, ArithError> {
    let (asm, rep) = run_to_terminal(Assembly::new(maze, Arc::new(ts)), &RunConfig::default())?;
    if let Some(nd) = rep.nondeterminism {
        return Err(ArithError::Nondeterministic(nd.pos));
    }
    Ok(asm)
}

fn trajectory_width(x: &BigUint, n: usize) -> usize {
    (x.bits() as usize).max(n)
}

/// North-east L: the bits of `x` face south along the top arm, least significant bit at
/// x = 0, padded with leading zeros to `max(n, bits)`; `n` "S" glues face west down the
/// east arm at x = 1.
pub fn collatz_seed(x: &BigUint, n: usize) -> Maze {
    let w = trajectory_width(x, n);
    let mut m = Maze::new();
    for i in 0..w {
        let c = Coord::new(-(i as i32), 0);
        m.add_cell(c).expect("fresh");
        m.set_glue(c, Side::S, GlueLabel::bit(x.bit(i as u64)));
    }
    m.add_cell(Coord::new(1, 0)).expect("fresh");
    for j in 1..=n as i32 {
        let c = Coord::new(1, -j);
        m.add_cell(c).expect("fresh");
        m.set_glue(c, Side::W, s_glue());
    }
    m
}

#[derive(Clone, Debug)]
pub struct CollatzRun {
    pub value: BigUint,
    /// Ternary digits west of column `n - 1`, most significant first, "S" skipped.
    pub digits: String,
    pub assembly: Assembly,
}

/// Grows [`collatz_seed`] with the trajectory tiles and decodes `T^n(x)`.
///
/// The `n` columns east of the cut hold the low `n` bits `b` of `x`, whose iterate
/// `T^n(b)` leaves the cut in ternary with `k` digits, one per odd step. The bits above the
/// cut contribute `3^k (x >> n)`.
pub fn run_collatz(x: &BigUint, n: usize) -> Result<CollatzRun, ArithError> {
    if x.is_zero() {
        return Err(ArithError::Zero);
    }
    let asm = grow(collatz_seed(x, n), tilesets::collatz(true))?;
    let col = 1 - n as i32;
    let mut edges = Vec::new();
    for j in 1..=n as i32 {
        let c = Coord::new(col, -j);
        if asm.tile_at(c).is_none() {
            return Err(ArithError::NotFullyTiled(c));
        }
        edges.push(EdgeSite::new(c, Side::W));
    }
    let reading = DigitReading { edges, base: 3, skip: alloc::vec![s_glue()] };
    let (low, digits) = read_digits(&asm, &reading)?;
    let value = BigUint::from(3u32).pow(digits.len() as u32) * (x >> n) + low;
    Ok(CollatzRun { value, digits, assembly: asm })
}

/// South-west L: `m` "0" glues facing east up the west arm, and "1" then `m - 1` "0"
/// glues facing north along the bottom arm.
pub fn powers2_seed(m: usize) -> Maze {
    let mut z = Maze::new();
    z.add_cell(Coord::new(-1, 0)).expect("fresh");
    for j in 1..=m as i32 {
        let c = Coord::new(-1, j);
        z.add_cell(c).expect("fresh");
        z.set_glue(c, Side::E, GlueLabel::digit(0));
    }
    for i in 0..m as i32 {
        let c = Coord::new(i, 0);
        z.add_cell(c).expect("fresh");
        z.set_glue(c, Side::N, GlueLabel::digit((i == 0) as u8));
    }
    z
}

/// Terminal assembly of [`powers2_seed`].
pub fn powers2_assembly(m: usize) -> Result<Assembly, ArithError> {
    grow(powers2_seed(m), tilesets::collatz(false))
}

/// East glues of column `n`, top first: `2^n` in ternary.
pub fn powers2_column(height: usize, n: usize) -> DigitReading {
    let edges = (1..=height as i32).rev().map(|y| EdgeSite::new(Coord::new(n as i32, y), Side::E)).collect();
    DigitReading { edges, base: 3, skip: Vec::new() }
}

/// Ternary digits of every column of the powers-of-two assembly, grown column by column.
///
/// The system is directed, so this attachment order reaches the same terminal assembly as
/// any other; it avoids holding the whole grid for large `m`.
pub fn powers2_columns(m: usize, height: usize) -> Vec<Vec<u8>> {
    let ts = tilesets::collatz(false);
    let lookup = |s: u8, w: u8| -> (u8, u8) {
        let t = ts
            .tiles()
            .iter()
            .find(|t| t.glue(Side::S).digit_value() == Some(s) && t.glue(Side::W).digit_value() == Some(w))
            .expect("tile set covers every south-west pair");
        (t.glue(Side::N).digit_value().expect("digit"), t.glue(Side::E).digit_value().expect("digit"))
    };
    let mut west = alloc::vec![0u8; height];
    let mut cols = Vec::with_capacity(m);
    for i in 0..m {
        let mut s = (i == 0) as u8;
        let mut east = alloc::vec![0u8; height];
        for j in 0..height {
            let (n, e) = lookup(s, west[j]);
            east[j] = e;
            s = n;
        }
        // Top first.
        let mut digits: Vec<u8> = east.iter().rev().copied().collect();
        let lead = digits.iter().take_while(|&&d| d == 0).count().min(digits.len().saturating_sub(1));
        digits.drain(..lead);
        cols.push(digits);
        west = east;
    }
    cols
}

/// Exponents `n <= n_max` for which `2^n` has no ternary digit 2, by assembly and by
/// direct conversion; the two must agree.
pub fn erdos_scan(n_max: usize) -> Result<BTreeSet<usize>, ArithError> {
    // log_3(2) < 0.631
    let height = n_max * 631 / 1000 + 2;
    let cols = powers2_columns(n_max + 1, height);
    let mut out = BTreeSet::new();
    let mut p = BigUint::one();
    for (n, col) in cols.iter().enumerate() {
        let direct: Vec<u8> = p.to_radix_be(3);
        if &direct != col {
            return Err(ArithError::Disagreement(n));
        }
        if !col.contains(&2) {
            out.insert(n);
        }
        p <<= 1;
    }
    Ok(out)
}

/// Both sides of `3^h N + E = 2^w W + S` for one rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleCheck {
    pub north: BigUint,
    pub east: BigUint,
    pub south: BigUint,
    pub west: BigUint,
    pub lhs: BigUint,
    pub rhs: BigUint,
}

impl RectangleCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Reads the four sides of a fully tiled rectangle: north and south in binary (most
/// significant bit west), east and west in ternary (most significant digit north).
pub fn rectangle_identity(asm: &Assembly, rect: Rect) -> Result<RectangleCheck, ArithError> {
    for y in rect.min.y..=rect.max.y {
        for x in rect.min.x..=rect.max.x {
            let c = Coord::new(x, y);
            if asm.tile_at(c).is_none() {
                return Err(ArithError::NotFullyTiled(c));
            }
        }
    }
    let row = |y: i32, side: Side| DigitReading {
        edges: (rect.min.x..=rect.max.x).map(|x| EdgeSite::new(Coord::new(x, y), side)).collect(),
        base: 2,
        skip: Vec::new(),
    };
    let col = |x: i32, side: Side| DigitReading {
        edges: (rect.min.y..=rect.max.y).rev().map(|y| EdgeSite::new(Coord::new(x, y), side)).collect(),
        base: 3,
        skip: Vec::new(),
    };
    let (north, _) = read_digits(asm, &row(rect.max.y, Side::N))?;
    let (south, _) = read_digits(asm, &row(rect.min.y, Side::S))?;
    let (east, _) = read_digits(asm, &col(rect.max.x, Side::E))?;
    let (west, _) = read_digits(asm, &col(rect.min.x, Side::W))?;
    let (w, h) = (rect.width() as u32, rect.height() as u32);
    let lhs = BigUint::from(3u32).pow(h) * &north + &east;
    let rhs = (&west << w as usize) + &south;
    Ok(RectangleCheck { north, east, south, west, lhs, rhs })
}

/// North-east L seed whose `w`-bit top arm and `h`-digit east arm fill a `w`×`h` block with
/// its north-east tile at the origin. Digits are given most significant first.
pub fn rectangle_seed(north_bits: &[bool], east_digits: &[u8]) -> Maze {
    let w = north_bits.len() as i32;
    let mut m = Maze::new();
    for (i, &b) in north_bits.iter().enumerate() {
        let c = Coord::new(i as i32 - (w - 1), 1);
        m.add_cell(c).expect("fresh");
        m.set_glue(c, Side::S, GlueLabel::bit(b));
    }
    m.add_cell(Coord::new(1, 1)).expect("fresh");
    for (j, &d) in east_digits.iter().enumerate() {
        let c = Coord::new(1, -(j as i32));
        m.add_cell(c).expect("fresh");
        m.set_glue(c, Side::W, GlueLabel::digit(d));
    }
    m
}

/// Grows [`rectangle_seed`] and checks the identity on the block.
pub fn rectangle_run(north_bits: &[bool], east_digits: &[u8]) -> Result<RectangleCheck, ArithError> {
    let asm = grow(rectangle_seed(north_bits, east_digits), tilesets::collatz(false))?;
    let (w, h) = (north_bits.len() as i32, east_digits.len() as i32);
    rectangle_identity(&asm, Rect { min: Coord::new(1 - w, 1 - h), max: Coord::new(0, 0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(collatz_oracle(&big(75), 7), big(16));
        assert_eq!(collatz_oracle(&big(9), 0), big(9));
        assert_eq!(collatz_oracle(&big(1), 2), big(1));
    }

    #[test]
    fn seventy_five() {
        let r = run_collatz(&big(75), 7).unwrap();
        assert_eq!(r.value, big(16));
        assert_eq!(r.digits, "121");
    }

    #[test]
    fn seed_shapes() {
        let m = collatz_seed(&big(75), 7);
        let north: String = (0..7).rev().map(|i| m.glue_of(Coord::new(-i, 0), Side::S).as_str().chars().next().unwrap()).collect();
        assert_eq!(north, "1001011");
        let m = collatz_seed(&big(1), 0);
        assert_eq!(m.glues().len(), 1);
        let m = collatz_seed(&big(6), 3);
        assert_eq!(m.glues().values().filter(|g| **g == s_glue()).count(), 3);
    }

    #[test]
    fn zero_iterations() {
        for x in 1..256u64 {
            assert_eq!(run_collatz(&big(x), 0).unwrap().value, big(x));
        }
    }

    #[test]
    fn trajectories_match_oracle() {
        for x in 1..200u64 {
            for n in 0..12 {
                assert_eq!(run_collatz(&big(x), n).unwrap().value, collatz_oracle(&big(x), n), "x={x} n={n}");
            }
        }
    }

    #[test]
    fn powers_of_two_columns() {
        let asm = powers2_assembly(4).unwrap();
        let want = ["1", "2", "11", "22"];
        for (n, w) in want.iter().enumerate() {
            let (v, _) = read_digits(&asm, &powers2_column(4, n)).unwrap();
            assert_eq!(v, big(1 << n));
            assert_eq!(to_base(&v, 3), *w);
        }
    }

    #[test]
    fn powers2_seed_shape() {
        let m = powers2_seed(4);
        let bottom: Vec<GlueLabel> = (0..4).map(|i| m.glue_of(Coord::new(i, 0), Side::N)).collect();
        assert_eq!(bottom, [1, 0, 0, 0].map(GlueLabel::digit));
        assert_eq!((1..=4).filter(|&j| m.glue_of(Coord::new(-1, j), Side::E).as_str() == "0").count(), 4);
    }

    #[test]
    fn sweep_matches_engine() {
        let m = 20;
        let asm = powers2_assembly(m).unwrap();
        let cols = powers2_columns(m, m);
        for (n, col) in cols.iter().enumerate() {
            let (v, _) = read_digits(&asm, &powers2_column(m, n)).unwrap();
            assert_eq!(&v.to_radix_be(3), col);
        }
    }

    #[test]
    fn erdos_small() {
        assert_eq!(erdos_scan(3).unwrap(), [0, 2].into_iter().collect());
        assert_eq!(erdos_scan(8).unwrap(), [0, 2, 8].into_iter().collect());
    }

    #[test]
    fn single_tile_rectangles() {
        let r = rectangle_run(&[true], &[2]).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (big(5), big(5)));
        assert_eq!(r.west, big(2));
        assert_eq!(r.south, big(1));
        let r = rectangle_run(&[false], &[0]).unwrap();
        assert!(r.holds());
        assert_eq!(r.lhs, big(0));
    }
}
