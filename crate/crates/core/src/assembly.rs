use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Coord, EdgeSite, Rect, Side};
use crate::glue::GlueLabel;
use crate::maze::Maze;
use crate::tile::{TileId, TileSet};

const EMPTY: u16 = u16::MAX;
const SEED: u16 = u16::MAX - 1;

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BindingMode {
    /// Two matching glues suffice; unequal neighbours are logged.
    #[default]
    Permissive,
    /// Candidates with any unequal non-null neighbour are refused.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AttachError {
    #[error("position {0} is already occupied")]
    Occupied(Coord),
    #[error("tile does not have two matching glues at {pos} ({bonds} bond(s))")]
    InsufficientBonds { pos: Coord, bonds: usize },
    #[error("strict mode: glue mismatch at {pos} on side {side}")]
    Mismatch { pos: Coord, side: Side },
    #[error("unknown tile id {0}")]
    UnknownTile(TileId),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("step budget of {0} attachments exceeded")]
    StepBudgetExceeded(usize),
}

/// Unequal non-null glues that ended up adjacent after a placement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub pos: Coord,
    pub side: Side,
    pub step: usize,
}

/// Immutable dense view of a maze over its bounding box.
#[derive(Debug)]
struct Frame {
    rect: Option<Rect>,
    width: usize,
    seed: Vec<bool>,
    /// Seed glues on the N and E edges of every cell in the box.
    edge: Vec<[GlueLabel; 2]>,
}

impl Frame {
    fn new(maze: &Maze) -> Frame {
        let Some(rect) = maze.bbox() else {
            return Frame { rect: None, width: 0, seed: Vec::new(), edge: Vec::new() };
        };
        let n = rect.area();
        let mut f = Frame { rect: Some(rect), width: rect.width(), seed: alloc::vec![false; n], edge: alloc::vec![[GlueLabel::NULL; 2]; n] };
        for c in maze.cells() {
            let i = f.index(*c).expect("cell in bbox");
            f.seed[i] = true;
        }
        for (e, g) in maze.glues() {
            if let Some(i) = f.index(e.cell()) {
                f.edge[i][if e.side() == Side::N { 0 } else { 1 }] = *g;
            }
        }
        f
    }

    #[inline]
    fn index(&self, c: Coord) -> Option<usize> {
        let r = self.rect.as_ref()?;
        if r.contains(c) {
            Some((c.y - r.min.y) as usize * self.width + (c.x - r.min.x) as usize)
        } else {
            None
        }
    }

    #[inline]
    fn coord(&self, i: usize) -> Coord {
        let r = self.rect.as_ref().expect("non-empty frame");
        Coord::new(r.min.x + (i % self.width) as i32, r.min.y + (i / self.width) as i32)
    }

    #[inline]
    fn seed_glue(&self, e: EdgeSite) -> GlueLabel {
        match self.index(e.cell()) {
            Some(i) => self.edge[i][if e.side() == Side::N { 0 } else { 1 }],
            None => GlueLabel::NULL,
        }
    }
}

/// Result of evaluating one empty position.
#[derive(Clone, Copy, Debug, Default)]
struct Eval {
    first: Option<TileId>,
    count: usize,
}

/// A maze with tiles attached.
#[derive(Clone, Debug)]
pub struct Assembly {
    maze: Arc<Maze>,
    tileset: Arc<TileSet>,
    mode: BindingMode,
    frame: Arc<Frame>,
    grid: Vec<u16>,
    trace: Vec<(Coord, TileId)>,
    mismatches: Vec<Mismatch>,
}

impl PartialEq for Assembly {
    fn eq(&self, other: &Self) -> bool {
        self.maze == other.maze && self.tileset == other.tileset && self.grid == other.grid
    }
}

impl Assembly {
    pub fn new(maze: impl Into<Arc<Maze>>, tileset: impl Into<Arc<TileSet>>) -> Assembly {
        let maze = maze.into();
        let frame = Frame::new(&maze);
        let mut grid = alloc::vec![EMPTY; frame.seed.len()];
        for (g, s) in grid.iter_mut().zip(&frame.seed) {
            if *s {
                *g = SEED;
            }
        }
        Assembly {
            maze,
            tileset: tileset.into(),
            mode: BindingMode::Permissive,
            frame: Arc::new(frame),
            grid,
            trace: Vec::new(),
            mismatches: Vec::new(),
        }
    }

    pub fn with_mode(mut self, mode: BindingMode) -> Assembly {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> BindingMode {
        self.mode
    }

    pub fn maze(&self) -> &Arc<Maze> {
        &self.maze
    }

    pub fn tileset(&self) -> &Arc<TileSet> {
        &self.tileset
    }

    pub fn bounds(&self) -> Option<Rect> {
        self.frame.rect
    }

    pub fn trace(&self) -> &[(Coord, TileId)] {
        &self.trace
    }

    pub fn mismatches(&self) -> &[Mismatch] {
        &self.mismatches
    }

    pub fn placed_count(&self) -> usize {
        self.trace.len()
    }

    pub fn tile_at(&self, c: Coord) -> Option<TileId> {
        let i = self.frame.index(c)?;
        match self.grid[i] {
            EMPTY | SEED => None,
            t => Some(t),
        }
    }

    pub fn is_occupied(&self, c: Coord) -> bool {
        match self.frame.index(c) {
            Some(i) => self.grid[i] != EMPTY,
            None => self.maze.is_seed(c),
        }
    }

    /// Placed tiles keyed by position.
    pub fn placed(&self) -> BTreeMap<Coord, TileId> {
        self.trace.iter().copied().collect()
    }

    /// Glue exposed towards `pos` across its `side`.
    #[inline]
    fn exposed(&self, pos: Coord, side: Side) -> GlueLabel {
        let q = pos.step(side);
        let Some(i) = self.frame.index(q) else {
            return GlueLabel::NULL;
        };
        match self.grid[i] {
            EMPTY => GlueLabel::NULL,
            SEED => self.frame.seed_glue(EdgeSite::new(pos, side)),
            t => self.tileset.tile(t).glue(side.opposite()),
        }
    }

    /// Glue on an edge: a placed tile's glue if one abuts it, else the seed glue.
    pub fn glue_at(&self, edge: EdgeSite) -> GlueLabel {
        for (c, s) in edge.cells() {
            if let Some(t) = self.tile_at(c) {
                let g = self.tileset.tile(t).glue(s);
                if !g.is_null() {
                    return g;
                }
            }
        }
        self.maze.glue(edge)
    }

    fn bonds(&self, pos: Coord, tile: TileId) -> (usize, Option<Side>) {
        let t = self.tileset.tile(tile);
        let mut bonds = 0;
        let mut mismatch = None;
        for s in Side::ALL {
            let ex = self.exposed(pos, s);
            let g = t.glue(s);
            if ex.matches(&g) {
                bonds += 1;
            } else if !ex.is_null() && !g.is_null() && mismatch.is_none() {
                mismatch = Some(s);
            }
        }
        (bonds, mismatch)
    }

    fn admits(&self, pos: Coord, tile: TileId) -> bool {
        let (b, m) = self.bonds(pos, tile);
        b >= 2 && (self.mode == BindingMode::Permissive || m.is_none())
    }

    fn eval(&self, pos: Coord) -> Eval {
        let mut ev = Eval::default();
        let mut live = 0;
        for s in Side::ALL {
            if !self.exposed(pos, s).is_null() {
                live += 1;
            }
        }
        if live < 2 {
            return ev;
        }
        for id in 0..self.tileset.len() as TileId {
            if self.admits(pos, id) {
                ev.count += 1;
                ev.first.get_or_insert(id);
            }
        }
        ev
    }

    fn is_empty_at(&self, pos: Coord) -> bool {
        matches!(self.frame.index(pos), Some(i) if self.grid[i] == EMPTY)
    }

    /// Tile types that may attach at `pos`, in tile set order.
    pub fn attachable_tiles(&self, pos: Coord) -> Vec<TileId> {
        if !self.is_empty_at(pos) {
            return Vec::new();
        }
        (0..self.tileset.len() as TileId).filter(|&id| self.admits(pos, id)).collect()
    }

    /// Unoccupied positions admitting at least one tile.
    pub fn frontier(&self) -> Vec<Coord> {
        let mut v = Vec::new();
        for i in 0..self.grid.len() {
            if self.grid[i] == EMPTY {
                let c = self.frame.coord(i);
                if self.eval(c).count > 0 {
                    v.push(c);
                }
            }
        }
        v
    }

    pub fn is_terminal(&self) -> bool {
        self.frontier().is_empty()
    }

    /// Places `tile` at `pos` in place.
    pub fn place(&mut self, pos: Coord, tile: TileId) -> Result<(), AttachError> {
        if tile as usize >= self.tileset.len() {
            return Err(AttachError::UnknownTile(tile));
        }
        if self.is_occupied(pos) {
            return Err(AttachError::Occupied(pos));
        }
        let (bonds, mismatch) = self.bonds(pos, tile);
        if bonds < 2 {
            return Err(AttachError::InsufficientBonds { pos, bonds });
        }
        if let Some(side) = mismatch {
            if self.mode == BindingMode::Strict {
                return Err(AttachError::Mismatch { pos, side });
            }
            let step = self.trace.len();
            let t = self.tileset.tile(tile);
            for s in Side::ALL {
                let ex = self.exposed(pos, s);
                if !ex.is_null() && !t.glue(s).is_null() && ex != t.glue(s) {
                    self.mismatches.push(Mismatch { pos, side: s, step });
                }
            }
        }
        let i = self.frame.index(pos).expect("two bonds imply a position inside the bounding box");
        self.grid[i] = tile;
        self.trace.push((pos, tile));
        Ok(())
    }

    /// Value-semantics attachment: returns a new assembly.
    pub fn attach(&self, pos: Coord, tile: TileId) -> Result<Assembly, AttachError> {
        let mut next = self.clone();
        next.place(pos, tile)?;
        Ok(next)
    }

    /// Replays the trace from the bare maze, checking every attachment.
    pub fn verify_trace(&self) -> Result<(), AttachError> {
        let mut a = Assembly::new(self.maze.clone(), self.tileset.clone()).with_mode(self.mode);
        for &(c, t) in &self.trace {
            a.place(c, t)?;
        }
        Ok(())
    }

    /// Same maze, tile set and placements.
    pub fn same_placement(&self, other: &Assembly) -> bool {
        self == other
    }

    /// All seed glues together with every non-null glue of placed tiles.
    pub fn glue_view(&self) -> BTreeMap<EdgeSite, GlueLabel> {
        let mut m: BTreeMap<EdgeSite, GlueLabel> = self.maze.glues().clone();
        for &(c, t) in &self.trace {
            for s in Side::ALL {
                let g = self.tileset.tile(t).glue(s);
                if !g.is_null() {
                    m.entry(EdgeSite::new(c, s)).or_insert(g);
                }
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderPolicy {
    /// North to south, east to west; first admissible tile in tile set order.
    Raster,
    Random(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub policy: OrderPolicy,
    pub max_steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { policy: OrderPolicy::Raster, max_steps: DEFAULT_MAX_STEPS }
    }
}

impl RunConfig {
    pub fn random(seed: u64) -> Self {
        RunConfig { policy: OrderPolicy::Random(seed), ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nondeterminism {
    pub pos: Coord,
    pub candidates: Vec<TileId>,
    pub step: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub steps: usize,
    pub nondeterminism: Option<Nondeterminism>,
}

struct Frontier {
    members: Vec<u32>,
    slot: Vec<u32>,
    heap: BinaryHeap<(i32, i32)>,
    raster: bool,
}

impl Frontier {
    fn insert(&mut self, i: usize, c: Coord) {
        if self.slot[i] != u32::MAX {
            return;
        }
        self.slot[i] = self.members.len() as u32;
        self.members.push(i as u32);
        if self.raster {
            self.heap.push((c.y, c.x));
        }
    }

    fn remove(&mut self, i: usize) {
        let s = self.slot[i];
        if s == u32::MAX {
            return;
        }
        let last = *self.members.last().expect("non-empty");
        self.members.swap_remove(s as usize);
        if last as usize != i {
            self.slot[last as usize] = s;
        }
        self.slot[i] = u32::MAX;
    }
}

/// Grows `asm` until no tile can attach.
pub fn run_to_terminal(mut asm: Assembly, cfg: &RunConfig) -> Result<(Assembly, RunReport), RunError> {
    let mut report = RunReport::default();
    let n = asm.grid.len();
    let raster = cfg.policy == OrderPolicy::Raster;
    let mut fr = Frontier { members: Vec::new(), slot: alloc::vec![u32::MAX; n], heap: BinaryHeap::new(), raster };
    let mut rng = match cfg.policy {
        OrderPolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        OrderPolicy::Raster => None,
    };
    let frame = asm.frame.clone();

    let note = |asm: &Assembly, report: &mut RunReport, c: Coord, ev: &Eval| {
        if ev.count > 1 && report.nondeterminism.is_none() {
            report.nondeterminism =
                Some(Nondeterminism { pos: c, candidates: asm.attachable_tiles(c), step: asm.trace.len() });
        }
    };

    for i in 0..n {
        if asm.grid[i] == EMPTY {
            let c = frame.coord(i);
            let ev = asm.eval(c);
            if ev.count > 0 {
                note(&asm, &mut report, c, &ev);
                fr.insert(i, c);
            }
        }
    }

    loop {
        let (i, c) = if raster {
            let Some((y, x)) = fr.heap.pop() else { break };
            let c = Coord::new(x, y);
            let i = frame.index(c).expect("in frame");
            if fr.slot[i] == u32::MAX {
                continue;
            }
            (i, c)
        } else {
            if fr.members.is_empty() {
                break;
            }
            let rng = rng.as_mut().expect("random policy");
            let k = rng.gen_range(0..fr.members.len());
            let i = fr.members[k] as usize;
            (i, frame.coord(i))
        };
        fr.remove(i);
        if asm.grid[i] != EMPTY {
            continue;
        }
        let ev = asm.eval(c);
        let Some(first) = ev.first else { continue };
        note(&asm, &mut report, c, &ev);
        let tile = match rng.as_mut() {
            Some(r) if ev.count > 1 => {
                let cands = asm.attachable_tiles(c);
                cands[r.gen_range(0..cands.len())]
            }
            _ => first,
        };
        if report.steps >= cfg.max_steps {
            return Err(RunError::StepBudgetExceeded(cfg.max_steps));
        }
        asm.place(c, tile).expect("evaluated candidate attaches");
        report.steps += 1;
        for (_, q) in c.neighbors() {
            if let Some(j) = frame.index(q) {
                if asm.grid[j] == EMPTY {
                    let ev = asm.eval(q);
                    if ev.count > 0 {
                        note(&asm, &mut report, q, &ev);
                        if fr.slot[j] == u32::MAX {
                            fr.insert(j, q);
                        }
                    } else {
                        fr.remove(j);
                    }
                }
            }
        }
    }
    Ok((asm, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tilesets::{collatz, nand_nxor};

    fn g(s: &str) -> GlueLabel {
        GlueLabel::new(s).unwrap()
    }

    /// One horizontal wire: a seed row above cells 0..len, input cell to the east.
    fn wire(len: i32, input: bool) -> Maze {
        let mut m = Maze::new();
        for x in -len..=0 {
            m.add_cell(Coord::new(x, 1)).unwrap();
            m.set_glue(Coord::new(x, 1), Side::S, g("1"));
        }
        m.add_cell(Coord::new(1, 0)).unwrap();
        m.set_glue(Coord::new(1, 0), Side::W, GlueLabel::bit(input));
        m
    }

    #[test]
    fn attachable_nand_nxor() {
        let mut m = Maze::new();
        m.add_cell(Coord::new(0, 1)).unwrap();
        m.add_cell(Coord::new(1, 0)).unwrap();
        m.set_glue(Coord::new(0, 1), Side::S, g("1"));
        m.set_glue(Coord::new(1, 0), Side::W, g("1"));
        let ts = nand_nxor();
        let a = Assembly::new(m, ts.clone());
        let c = a.attachable_tiles(Coord::new(0, 0));
        assert_eq!(c.len(), 1);
        let t = ts.tile(c[0]);
        assert_eq!((t.glue(Side::S), t.glue(Side::W)), (g("0"), g("1")));
    }

    #[test]
    fn attachable_collatz() {
        let mut m = Maze::new();
        m.add_cell(Coord::new(0, 1)).unwrap();
        m.add_cell(Coord::new(1, 0)).unwrap();
        m.set_glue(Coord::new(0, 1), Side::S, g("1"));
        m.set_glue(Coord::new(1, 0), Side::W, g("2"));
        let ts = collatz(false);
        let a = Assembly::new(m, ts.clone());
        let c = a.attachable_tiles(Coord::new(0, 0));
        assert_eq!(c.iter().map(|&i| ts.tile(i).name.as_str()).collect::<Vec<_>>(), ["5"]);
    }

    #[test]
    fn single_bond_is_not_enough() {
        let mut m = Maze::new();
        m.add_cell(Coord::new(0, 1)).unwrap();
        m.set_glue(Coord::new(0, 1), Side::S, g("1"));
        let a = Assembly::new(m, nand_nxor());
        assert!(a.attachable_tiles(Coord::new(0, 0)).is_empty());
        assert!(a.frontier().is_empty());
        assert!(matches!(a.attach(Coord::new(0, 0), 0), Err(AttachError::InsufficientBonds { .. })));
    }

    #[test]
    fn attach_errors_and_value_semantics() {
        let a = Assembly::new(wire(3, false), nand_nxor());
        assert_eq!(a.attach(Coord::new(1, 0), 0), Err(AttachError::Occupied(Coord::new(1, 0))));
        assert_eq!(a.frontier(), [Coord::new(0, 0)]);
        let t = a.attachable_tiles(Coord::new(0, 0))[0];
        let b = a.attach(Coord::new(0, 0), t).unwrap();
        assert_eq!(a.placed_count(), 0);
        assert_eq!(b.placed_count(), 1);
        assert_eq!(b.frontier(), [Coord::new(-1, 0)]);
    }

    #[test]
    fn wire_carries_bit() {
        for bit in [false, true] {
            let (t, r) = run_to_terminal(Assembly::new(wire(5, bit), nand_nxor()), &RunConfig::default()).unwrap();
            assert_eq!(r.steps, 6);
            assert!(r.nondeterminism.is_none());
            assert!(t.frontier().is_empty());
            assert_eq!(t.glue_at(EdgeSite::new(Coord::new(-5, 0), Side::W)), GlueLabel::bit(bit));
            t.verify_trace().unwrap();
        }
    }

    #[test]
    fn empty_and_glueless_mazes() {
        let (t, r) = run_to_terminal(Assembly::new(Maze::new(), nand_nxor()), &RunConfig::default()).unwrap();
        assert_eq!((r.steps, t.placed_count()), (0, 0));
        let mut m = Maze::new();
        m.add_cell(Coord::new(0, 0)).unwrap();
        m.add_cell(Coord::new(2, 2)).unwrap();
        let (_, r) = run_to_terminal(Assembly::new(m, nand_nxor()), &RunConfig::default()).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(Assembly::new(Maze::new(), nand_nxor()).glue_at(EdgeSite::new(Coord::new(5, 5), Side::N)), GlueLabel::NULL);
    }

    #[test]
    fn step_budget() {
        let cfg = RunConfig { max_steps: 3, ..RunConfig::default() };
        assert_eq!(run_to_terminal(Assembly::new(wire(5, true), nand_nxor()), &cfg).unwrap_err(), RunError::StepBudgetExceeded(3));
    }

    #[test]
    fn nondeterminism_flagged() {
        // N+W corner is ambiguous for the Collatz set.
        let mut m = Maze::new();
        m.add_cell(Coord::new(0, 1)).unwrap();
        m.add_cell(Coord::new(-1, 0)).unwrap();
        m.set_glue(Coord::new(0, 1), Side::S, g("0"));
        m.set_glue(Coord::new(-1, 0), Side::E, g("0"));
        let (_, r) = run_to_terminal(Assembly::new(m, collatz(false)), &RunConfig::default()).unwrap();
        let nd = r.nondeterminism.unwrap();
        assert_eq!(nd.pos, Coord::new(0, 0));
        assert_eq!(nd.candidates.len(), 2);
    }

    #[test]
    fn strict_mode_refuses_mismatch() {
        let mut m = Maze::new();
        for c in [Coord::new(0, 1), Coord::new(1, 0), Coord::new(0, -1)] {
            m.add_cell(c).unwrap();
        }
        m.set_glue(Coord::new(0, 1), Side::S, g("1"));
        m.set_glue(Coord::new(1, 0), Side::W, g("1"));
        m.set_glue(Coord::new(0, -1), Side::N, g("x"));
        let ts = nand_nxor();
        let perm = Assembly::new(m.clone(), ts.clone());
        let t = perm.attachable_tiles(Coord::new(0, 0));
        assert_eq!(t.len(), 1);
        let placed = perm.attach(Coord::new(0, 0), t[0]).unwrap();
        assert_eq!(placed.mismatches().len(), 1);
        let strict = Assembly::new(m, ts).with_mode(BindingMode::Strict);
        assert!(strict.attachable_tiles(Coord::new(0, 0)).is_empty());
        assert!(matches!(strict.attach(Coord::new(0, 0), t[0]), Err(AttachError::Mismatch { .. })));
    }
}
