//! Gadgets: seed fragments with typed ports, and their exhaustive validation.
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::assembly::{run_to_terminal, Assembly, RunConfig, RunError};
use crate::geom::{Coord, EdgeSite, Rect, Side};
use crate::glue::GlueLabel;
use crate::maze::{Maze, MazeError};
use crate::tile::TileSet;

mod collatz_gates;
pub mod crossover;
pub mod kit;
pub mod library;
pub mod search;

pub use collatz_gates::CELL_WIDTH as COLLATZ_GATE_WIDTH;
pub use library::{builtin_library, GadgetLibrary, Role};
pub use search::{search_gate_seed, SearchBounds, SeedConvention, SeedHit, SeedRect};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PortDir {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    H,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Polarity {
    #[default]
    Plain,
    Negated,
}

impl Polarity {
    pub fn apply(self, b: bool) -> bool {
        b ^ (self == Polarity::Negated)
    }

    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Plain => Polarity::Negated,
            Polarity::Negated => Polarity::Plain,
        }
    }

    pub fn from_neg(neg: bool) -> Polarity {
        if neg {
            Polarity::Negated
        } else {
            Polarity::Plain
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Parity {
    Even,
    Odd,
    #[default]
    None,
}

/// A signal crossing the gadget boundary through side `side` of the inside cell `cell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Port {
    pub cell: Coord,
    pub side: Side,
    pub dir: PortDir,
    pub axis: Axis,
    pub polarity: Polarity,
    pub parity: Parity,
}

impl Port {
    pub fn input(cell: Coord, side: Side) -> Port {
        let axis = if matches!(side, Side::E | Side::W) { Axis::H } else { Axis::V };
        Port { cell, side, dir: PortDir::In, axis, polarity: Polarity::Plain, parity: Parity::None }
    }

    pub fn output(cell: Coord, side: Side) -> Port {
        Port { dir: PortDir::Out, ..Port::input(cell, side) }
    }

    pub fn negated(mut self) -> Port {
        self.polarity = Polarity::Negated;
        self
    }

    pub fn with_parity(mut self, p: Parity) -> Port {
        self.parity = p;
        self
    }

    pub fn edge(&self) -> EdgeSite {
        EdgeSite::new(self.cell, self.side)
    }

    /// Cell just outside the gadget across the port edge.
    pub fn outside(&self) -> Coord {
        self.cell.step(self.side)
    }

    pub fn translate(&self, by: Coord) -> Port {
        Port { cell: self.cell + by, ..*self }
    }
}

/// Output table over `inputs` in-ports for each of `outputs` out-ports.
///
/// Bit `o * 2^k + v` is out-port `o` on assignment `v`, where the first in-port is the most
/// significant bit of `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    pub inputs: u8,
    pub outputs: u8,
    pub bits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TruthTableError {
    #[error("truth table must contain only 0 and 1")]
    BadDigit,
    #[error("truth table length {len} does not fit {inputs} inputs and {outputs} outputs")]
    BadLength { len: usize, inputs: u8, outputs: u8 },
}

impl TruthTable {
    /// Two-input gate table written `f(00) f(01) f(10) f(11)`.
    pub fn gate(code: u8) -> TruthTable {
        let mut bits = 0;
        for v in 0..4 {
            if code >> (3 - v) & 1 == 1 {
                bits |= 1 << v;
            }
        }
        TruthTable { inputs: 2, outputs: 1, bits }
    }

    pub fn parse(s: &str, inputs: u8, outputs: u8) -> Result<TruthTable, TruthTableError> {
        let len = s.len();
        if len != (outputs as usize) << inputs || len > 64 {
            return Err(TruthTableError::BadLength { len, inputs, outputs });
        }
        let mut bits = 0;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(TruthTableError::BadDigit),
            }
        }
        Ok(TruthTable { inputs, outputs, bits })
    }

    pub fn from_fn(inputs: u8, outputs: u8, f: impl Fn(usize, usize) -> bool) -> TruthTable {
        let mut bits = 0;
        for o in 0..outputs as usize {
            for v in 0..1usize << inputs {
                if f(o, v) {
                    bits |= 1 << ((o << inputs) + v);
                }
            }
        }
        TruthTable { inputs, outputs, bits }
    }

    pub fn eval(&self, out: usize, assignment: usize) -> bool {
        self.bits >> ((out << self.inputs) + assignment) & 1 == 1
    }

    pub fn rows(&self) -> usize {
        1 << self.inputs
    }

    /// Four-bit gate code `f(00) f(01) f(10) f(11)`, MSB first.
    pub fn gate_code(&self) -> Option<u8> {
        if self.inputs != 2 || self.outputs != 1 {
            return None;
        }
        Some((0..4).fold(0, |acc, v| acc << 1 | self.eval(0, v) as u8))
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..(self.outputs as usize) << self.inputs {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Conventional name of a two-input gate code.
pub fn gate_name(code: u8) -> String {
    match code {
        0b0001 => "AND".into(),
        0b0111 => "OR".into(),
        0b0110 => "XOR".into(),
        0b1110 => "NAND".into(),
        0b1000 => "NOR".into(),
        0b1001 => "NXOR".into(),
        c => format!("TT{c:04b}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub name: String,
    pub tileset_id: String,
    /// Seed cells and glues, in gadget-local coordinates.
    pub maze: Maze,
    pub ports: Vec<Port>,
    pub truth: Option<TruthTable>,
    pub tiles: usize,
}

impl Gadget {
    pub fn in_ports(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.dir == PortDir::In)
    }

    pub fn out_ports(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.dir == PortDir::Out)
    }

    pub fn in_count(&self) -> usize {
        self.in_ports().count()
    }

    /// Bounding box of seed cells and port cells.
    pub fn footprint(&self) -> Rect {
        Rect::from_points(self.maze.cells().iter().copied().chain(self.ports.iter().map(|p| p.cell)))
            .unwrap_or(Rect::point(Coord::new(0, 0)))
    }

    /// Footprint cells that are not seed cells.
    pub fn sites(&self) -> Vec<Coord> {
        let r = self.footprint();
        let mut v = Vec::new();
        for y in r.min.y..=r.max.y {
            for x in r.min.x..=r.max.x {
                let c = Coord::new(x, y);
                if !self.maze.is_seed(c) {
                    v.push(c);
                }
            }
        }
        v
    }

    /// Translated copy of seed, glues and ports.
    pub fn instantiate(&self, offset: Coord) -> Instance {
        Instance {
            maze: self.maze.translated(offset),
            ports: self.ports.iter().map(|p| p.translate(offset)).collect(),
            footprint: self.footprint().translate(offset),
        }
    }

    /// The isolated test maze with input bits presented at every in-port.
    pub fn input_maze(&self, assignment: usize) -> Result<Maze, MazeError> {
        let mut m = self.maze.clone();
        let k = self.in_count();
        for (i, p) in self.in_ports().enumerate() {
            let bit = assignment >> (k - 1 - i) & 1 == 1;
            let q = p.outside();
            m.add_cell(q)?;
            if !m.is_seed(p.cell) {
                m.set_glue(q, p.side.opposite(), GlueLabel::bit(bit));
            }
        }
        m.validate()?;
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub maze: Maze,
    pub ports: Vec<Port>,
    pub footprint: Rect,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("gadget is for tile set `{gadget}` but `{tileset}` was given")]
    WrongTileSet { gadget: String, tileset: String },
    #[error("gadget has no truth table")]
    NoTruthTable,
    #[error("truth table shape does not match the ports")]
    TableShape,
    #[error("input {assignment:0w$b}: invalid test maze: {err}", w = *width)]
    Maze { assignment: usize, width: usize, err: MazeError },
    #[error("input {assignment:0w$b}: {err}", w = *width)]
    Run { assignment: usize, width: usize, err: RunError },
    #[error("input {assignment:0w$b}: two tile types fit at {pos}", w = *width)]
    Nondeterministic { assignment: usize, width: usize, pos: Coord },
    #[error("input {assignment:0w$b}: random order {seed} differs from raster", w = *width)]
    OrderDependent { assignment: usize, width: usize, seed: u64 },
    #[error("input {assignment:0w$b}: tile at {pos} outside the footprint", w = *width)]
    Escaped { assignment: usize, width: usize, pos: Coord },
    #[error("input {assignment:0w$b}: out-port {port} reads {got}, expected {expected}", w = *width)]
    WrongOutput { assignment: usize, width: usize, port: usize, got: GlueLabel, expected: bool },
    #[error("input {assignment:0w$b}: {count} tiles placed, {declared} declared", w = *width)]
    TooManyTiles { assignment: usize, width: usize, count: usize, declared: usize },
}

#[derive(Clone, Debug)]
pub struct InputRun {
    pub assignment: usize,
    pub terminal: Assembly,
    pub outputs: Vec<GlueLabel>,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub runs: Vec<InputRun>,
    /// Tiles placed per input assignment.
    pub counts: Vec<usize>,
}

impl ValidationReport {
    pub fn max_tiles(&self) -> usize {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Every assignment placed exactly `n` tiles.
    pub fn uniform(&self, n: usize) -> bool {
        self.counts.iter().all(|&c| c == n)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ValidateOptions {
    /// Random orders compared against the raster run per assignment.
    pub random_orders: u64,
    pub max_steps: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { random_orders: 4, max_steps: 100_000 }
    }
}

pub fn validate_gadget(g: &Gadget, ts: &TileSet) -> Result<ValidationReport, ValidationError> {
    validate_with(g, ts, &ValidateOptions::default())
}

pub fn validate_with(g: &Gadget, ts: &TileSet, opts: &ValidateOptions) -> Result<ValidationReport, ValidationError> {
    if g.tileset_id != ts.name() {
        return Err(ValidationError::WrongTileSet { gadget: g.tileset_id.clone(), tileset: ts.name().into() });
    }
    let truth = g.truth.ok_or(ValidationError::NoTruthTable)?;
    let k = g.in_count();
    let outs: Vec<Port> = g.out_ports().copied().collect();
    if truth.inputs as usize != k || truth.outputs as usize != outs.len() {
        return Err(ValidationError::TableShape);
    }
    let width = k.max(1);
    let fp = g.footprint();
    let ts = alloc::sync::Arc::new(ts.clone());
    let mut report = ValidationReport { runs: Vec::new(), counts: Vec::new() };
    for assignment in 0..1usize << k {
        let maze = g.input_maze(assignment).map_err(|err| ValidationError::Maze { assignment, width, err })?;
        let start = Assembly::new(maze, ts.clone());
        let cfg = RunConfig { max_steps: opts.max_steps, ..RunConfig::default() };
        let (term, rep) =
            run_to_terminal(start.clone(), &cfg).map_err(|err| ValidationError::Run { assignment, width, err })?;
        if let Some(nd) = rep.nondeterminism {
            return Err(ValidationError::Nondeterministic { assignment, width, pos: nd.pos });
        }
        for seed in 0..opts.random_orders {
            let cfg = RunConfig { max_steps: opts.max_steps, ..RunConfig::random(seed) };
            let (t, r) =
                run_to_terminal(start.clone(), &cfg).map_err(|err| ValidationError::Run { assignment, width, err })?;
            if let Some(nd) = r.nondeterminism {
                return Err(ValidationError::Nondeterministic { assignment, width, pos: nd.pos });
            }
            if !t.same_placement(&term) {
                return Err(ValidationError::OrderDependent { assignment, width, seed });
            }
        }
        if let Some(&(pos, _)) = term.trace().iter().find(|(c, _)| !fp.contains(*c)) {
            return Err(ValidationError::Escaped { assignment, width, pos });
        }
        let mut outputs = Vec::new();
        for (o, p) in outs.iter().enumerate() {
            let got = term.glue_at(p.edge());
            let expected = p.polarity.apply(truth.eval(o, assignment));
            if got.as_bit() != Some(expected) {
                return Err(ValidationError::WrongOutput { assignment, width, port: o, got, expected });
            }
            outputs.push(got);
        }
        let count = term.placed_count();
        if count > g.tiles {
            return Err(ValidationError::TooManyTiles { assignment, width, count, declared: g.tiles });
        }
        report.counts.push(count);
        report.runs.push(InputRun { assignment, terminal: term, outputs });
    }
    Ok(report)
}
