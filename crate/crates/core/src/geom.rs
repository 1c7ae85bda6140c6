use core::fmt;
use core::ops::Add;
use core::str::FromStr;

/// Integer grid coordinate; `x` grows eastward, `y` northward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }

    pub fn step(self, side: Side) -> Coord {
        let (dx, dy) = side.delta();
        Coord::new(self.x + dx, self.y + dy)
    }

    pub fn neighbors(self) -> [(Side, Coord); 4] {
        Side::ALL.map(|s| (s, self.step(s)))
    }
}

impl Add for Coord {
    type Output = Coord;
    fn add(self, o: Coord) -> Coord {
        Coord::new(self.x + o.x, self.y + o.y)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    N = 0,
    E = 1,
    S = 2,
    W = 3,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::N, Side::E, Side::S, Side::W];

    pub const fn opposite(self) -> Side {
        match self {
            Side::N => Side::S,
            Side::E => Side::W,
            Side::S => Side::N,
            Side::W => Side::E,
        }
    }

    pub const fn delta(self) -> (i32, i32) {
        match self {
            Side::N => (0, 1),
            Side::E => (1, 0),
            Side::S => (0, -1),
            Side::W => (-1, 0),
        }
    }

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn letter(self) -> char {
        match self {
            Side::N => 'N',
            Side::E => 'E',
            Side::S => 'S',
            Side::W => 'W',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown side `{0}`")]
pub struct ParseSideError(pub alloc::string::String);

impl FromStr for Side {
    type Err = ParseSideError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "N" | "n" => Ok(Side::N),
            "E" | "e" => Ok(Side::E),
            "S" | "s" => Ok(Side::S),
            "W" | "w" => Ok(Side::W),
            _ => Err(ParseSideError(s.into())),
        }
    }
}

/// A unit edge of the grid, stored canonically as the north or east side of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSite {
    cell: Coord,
    side: Side,
}

impl EdgeSite {
    pub fn new(cell: Coord, side: Side) -> Self {
        match side {
            Side::N | Side::E => EdgeSite { cell, side },
            Side::S => EdgeSite { cell: cell.step(Side::S), side: Side::N },
            Side::W => EdgeSite { cell: cell.step(Side::W), side: Side::E },
        }
    }

    pub fn cell(&self) -> Coord {
        self.cell
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// The two cells sharing this edge, as (cell, side of that cell facing the edge).
    pub fn cells(&self) -> [(Coord, Side); 2] {
        [(self.cell, self.side), (self.cell.step(self.side), self.side.opposite())]
    }

    /// The side through which `c` touches this edge, if it does.
    pub fn side_of(&self, c: Coord) -> Option<Side> {
        self.cells().into_iter().find(|(p, _)| *p == c).map(|(_, s)| s)
    }

    pub fn translate(&self, by: Coord) -> EdgeSite {
        EdgeSite { cell: self.cell + by, side: self.side }
    }
}

impl fmt::Display for EdgeSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.cell.x, self.cell.y, self.side)
    }
}

/// Inclusive axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub min: Coord,
    pub max: Coord,
}

impl Rect {
    pub fn point(c: Coord) -> Self {
        Rect { min: c, max: c }
    }

    pub fn include(&mut self, c: Coord) {
        self.min.x = self.min.x.min(c.x);
        self.min.y = self.min.y.min(c.y);
        self.max.x = self.max.x.max(c.x);
        self.max.y = self.max.y.max(c.y);
    }

    pub fn union(mut self, o: Rect) -> Rect {
        self.include(o.min);
        self.include(o.max);
        self
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x >= self.min.x && c.x <= self.max.x && c.y >= self.min.y && c.y <= self.max.y
    }

    pub fn width(&self) -> usize {
        (self.max.x - self.min.x + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.max.y - self.min.y + 1) as usize
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn translate(&self, by: Coord) -> Rect {
        Rect { min: self.min + by, max: self.max + by }
    }

    pub fn from_points<I: IntoIterator<Item = Coord>>(it: I) -> Option<Rect> {
        let mut it = it.into_iter();
        let mut r = Rect::point(it.next()?);
        for c in it {
            r.include(c);
        }
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_edges() {
        let c = Coord::new(2, 3);
        assert_eq!(EdgeSite::new(c, Side::N), EdgeSite::new(Coord::new(2, 4), Side::S));
        assert_eq!(EdgeSite::new(c, Side::E), EdgeSite::new(Coord::new(3, 3), Side::W));
        assert_ne!(EdgeSite::new(c, Side::N), EdgeSite::new(c, Side::S));
    }

    #[test]
    fn side_of_edge() {
        let e = EdgeSite::new(Coord::new(0, 0), Side::W);
        assert_eq!(e.side_of(Coord::new(0, 0)), Some(Side::W));
        assert_eq!(e.side_of(Coord::new(-1, 0)), Some(Side::E));
        assert_eq!(e.side_of(Coord::new(1, 0)), None);
    }
}
