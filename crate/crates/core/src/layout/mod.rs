//! Place and route: a layered circuit becomes a maze of gadgets joined by wires.
//!
//! Layers run from east to west. Gadgets of one layer share the column of their in-ports
//! and are stacked top to bottom with an empty row between footprints. Between two layers a
//! channel of one column per wire carries every signal down from its source row to its
//! target row with one west-to-south and one south-to-west turn.
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::assembly::{run_to_terminal, Assembly, RunConfig, RunError, RunReport};
use crate::circuit::{layer, planarize, Circuit, GateId, GateKind, LayeredPlan, Pin};
use crate::gadget::kit::{assign_polarity, CellKind, Fabric, FabricError, Kit, PathCell};
use crate::gadget::{validate_with, Axis, Gadget, GadgetLibrary, Polarity, Port, ValidateOptions, ValidationError};
use crate::geom::{Coord, EdgeSite, Rect, Side};
use crate::glue::GlueLabel;
use crate::maze::{Maze, MazeError};
use crate::tile::TileSet;
use crate::tilesets;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LayoutError {
    #[error("unknown tile set `{0}`")]
    UnknownTileSet(String),
    #[error("library is for `{library}`, not `{tileset}`")]
    LibraryMismatch { library: String, tileset: String },
    #[error("gadget `{name}` is invalid: {err}")]
    Gadget { name: String, err: ValidationError },
    #[error("layout collision at {0}")]
    Collision(Coord),
    #[error("seed glue conflict on side {1} of {0}")]
    GlueConflict(Coord, Side),
    #[error("cannot route wire into gate `{0}`")]
    Unroutable(String),
    #[error("expected {expected} input bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no bit reached the output edge {0}")]
    OutputNotReached(EdgeSite),
    #[error(transparent)]
    Maze(#[from] MazeError),
    #[error(transparent)]
    Run(#[from] RunError),
}

impl From<FabricError> for LayoutError {
    fn from(e: FabricError) -> Self {
        match e {
            FabricError::SiteWallClash(c) => LayoutError::Collision(c),
            FabricError::GlueClash(c, s) => LayoutError::GlueConflict(c, s),
        }
    }
}

/// A local polarity fix on a wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correction {
    /// Horizontal negation right after the south-to-west turn.
    Not(Coord),
    /// One-row jog that keeps a straight wire's parity.
    Buffer(Coord),
    /// Negating west-to-south turn.
    NegatingTurn(Coord),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub axis: Axis,
    pub len: usize,
    /// Net negation along the segment.
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub from: Pin,
    pub to: Pin,
    pub cells: Vec<PathCell>,
    pub negs: Vec<bool>,
    pub corrections: Vec<Correction>,
}

impl Route {
    /// Maximal runs of cells leaving on the same axis.
    pub fn segments(&self) -> Vec<Segment> {
        let mut out: Vec<Segment> = Vec::new();
        for (p, &n) in self.cells.iter().zip(&self.negs) {
            let axis = if p.kind.output_side() == Side::W { Axis::H } else { Axis::V };
            match out.last_mut() {
                Some(s) if s.axis == axis => {
                    s.len += 1;
                    s.negated ^= n;
                }
                _ => out.push(Segment { axis, len: 1, negated: n }),
            }
        }
        out
    }

    pub fn negated(&self) -> bool {
        self.negs.iter().fold(false, |a, &b| a ^ b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub gate: GateId,
    pub kind: GateKind,
    pub gadget: String,
    pub offset: Coord,
    pub footprint: Rect,
    /// Tile sites the gadget may fill.
    pub tiles: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutedLayout {
    pub tileset_id: String,
    pub placements: Vec<Placement>,
    pub routes: Vec<Route>,
    pub input_sites: Vec<Coord>,
    pub output_edge: EdgeSite,
    pub maze: Maze,
}

impl RoutedLayout {
    pub fn corrections(&self) -> impl Iterator<Item = &Correction> {
        self.routes.iter().flat_map(|r| r.corrections.iter())
    }
}

/// Tile counts attributed to gadgets and wires.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Accounting {
    /// `(gate, gadget name, tiles)` for every compute gate.
    pub gates: Vec<(GateId, String, usize)>,
    pub crossovers: Vec<usize>,
    pub wire_tiles: usize,
    pub other_tiles: usize,
}

impl Accounting {
    pub fn max_gate_tiles(&self) -> usize {
        self.gates.iter().map(|g| g.2).max().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.gates.iter().map(|g| g.2).sum::<usize>() + self.crossovers.iter().sum::<usize>() + self.wire_tiles + self.other_tiles
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledMaze {
    pub tileset_id: String,
    pub maze: Maze,
    pub input_sites: Vec<Coord>,
    pub output_edge: EdgeSite,
    pub accounting: Accounting,
}

struct Template {
    name: String,
    maze: Maze,
    sites: Vec<Coord>,
    ins: Vec<Port>,
    outs: Vec<Port>,
    footprint: Rect,
    /// Cell kept free: the input site or the cell west of the output edge.
    reserved: Option<Coord>,
    tiles: usize,
}

fn pseudo(name: &str, port: Port) -> Template {
    let (ins, outs) = match port.dir {
        crate::gadget::PortDir::In => (alloc::vec![port], Vec::new()),
        crate::gadget::PortDir::Out => (Vec::new(), alloc::vec![port]),
    };
    Template {
        name: name.into(),
        maze: Maze::new(),
        sites: Vec::new(),
        ins,
        outs,
        footprint: Rect::point(port.cell),
        reserved: Some(port.cell),
        tiles: 0,
    }
}

fn from_gadget(g: &Gadget, ts: &TileSet) -> Result<Template, LayoutError> {
    let opts = ValidateOptions { random_orders: 0, ..ValidateOptions::default() };
    let rep = validate_with(g, ts, &opts).map_err(|err| LayoutError::Gadget { name: g.name.clone(), err })?;
    let mut sites = BTreeSet::new();
    for run in &rep.runs {
        sites.extend(run.terminal.trace().iter().map(|(c, _)| *c));
    }
    let mut footprint = g.footprint();
    for &c in &sites {
        footprint.include(c);
    }
    Ok(Template {
        name: g.name.clone(),
        maze: g.maze.clone(),
        sites: sites.into_iter().collect(),
        ins: g.in_ports().copied().collect(),
        outs: g.out_ports().copied().collect(),
        footprint,
        reserved: None,
        tiles: g.tiles,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Owner {
    Gate(GateId),
    Wire(usize),
}

struct Router<'a> {
    lib: &'a GadgetLibrary,
    ts: TileSet,
    kit: Kit,
    cache: BTreeMap<String, Arc<Template>>,
    fab: Fabric,
    owner: BTreeMap<Coord, Owner>,
    links: BTreeSet<(Coord, Coord)>,
    reserved: BTreeSet<Coord>,
}

impl Router<'_> {
    fn template(&mut self, kind: GateKind) -> Result<Arc<Template>, LayoutError> {
        let key = alloc::format!("{kind:?}");
        if let Some(t) = self.cache.get(&key) {
            return Ok(t.clone());
        }
        let t = match kind {
            GateKind::Input => pseudo("input", Port::output(Coord::new(0, 0), Side::W)),
            GateKind::Output => pseudo("output", Port::input(Coord::new(0, 0), Side::E)),
            GateKind::Const(b) => from_gadget(self.lib.constant(b), &self.ts)?,
            GateKind::Not => from_gadget(self.lib.not(), &self.ts)?,
            GateKind::Id => from_gadget(&self.lib.hwire(1), &self.ts)?,
            GateKind::Fanout => from_gadget(self.lib.fanout(), &self.ts)?,
            GateKind::Crossover => from_gadget(self.lib.crossover(), &self.ts)?,
            GateKind::Table(code) => from_gadget(self.lib.gate(code), &self.ts)?,
        };
        let t = Arc::new(t);
        self.cache.insert(key, t.clone());
        Ok(t)
    }

    fn claim(&mut self, c: Coord, o: Owner) -> Result<(), LayoutError> {
        if self.owner.insert(c, o).is_some() || self.reserved.contains(&c) {
            return Err(LayoutError::Collision(c));
        }
        Ok(())
    }

    fn link(&mut self, a: Coord, b: Coord) {
        self.links.insert((a, b));
        self.links.insert((b, a));
    }

    fn put_gadget(&mut self, g: GateId, t: &Template, offset: Coord) -> Result<(), LayoutError> {
        for &c in t.maze.cells() {
            self.fab.wall(c + offset)?;
        }
        for (e, &label) in t.maze.glues() {
            let (cell, side) = e.cells().into_iter().find(|(c, _)| t.maze.is_seed(*c)).expect("glue on a seed cell");
            self.fab.wall_glue(cell + offset, side, label)?;
        }
        for &c in &t.sites {
            self.fab.site(c + offset)?;
            self.claim(c + offset, Owner::Gate(g))?;
        }
        if let Some(r) = t.reserved {
            let r = r + offset;
            if self.fab.maze.is_seed(r) || self.owner.contains_key(&r) || !self.reserved.insert(r) {
                return Err(LayoutError::Collision(r));
            }
        }
        Ok(())
    }

    /// Every pair of adjacent sites with different owners must be a port connection.
    fn check_adjacency(&self) -> Result<(), LayoutError> {
        for (&c, &o) in &self.owner {
            for (_, n) in c.neighbors() {
                if let Some(&p) = self.owner.get(&n) {
                    if p != o && !self.links.contains(&(c, n)) {
                        return Err(LayoutError::Collision(c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Seeds every free cell next to a tile site so nothing grows outside the layout.
    fn close(&mut self) -> Result<(), LayoutError> {
        let sites: Vec<Coord> = self.fab.sites.iter().copied().collect();
        for c in sites {
            for (_, n) in c.neighbors() {
                if !self.fab.sites.contains(&n) && !self.reserved.contains(&n) {
                    self.fab.wall(n)?;
                }
            }
        }
        Ok(())
    }
}

struct Wire {
    from: Pin,
    to: Pin,
    src: Port,
    /// In-port index on the target gadget.
    port: usize,
}

/// Places gadgets for every gate of `plan` and routes every wire.
pub fn route(plan: &LayeredPlan, lib: &GadgetLibrary) -> Result<RoutedLayout, LayoutError> {
    let id = lib.tileset_id();
    let ts = tilesets::builtin(id).ok_or_else(|| LayoutError::UnknownTileSet(id.into()))?;
    let kit = lib.kit();
    let c = &plan.circuit;
    let mut r = Router {
        lib,
        ts,
        kit,
        cache: BTreeMap::new(),
        fab: Fabric::new(),
        owner: BTreeMap::new(),
        links: BTreeSet::new(),
        reserved: BTreeSet::new(),
    };
    let mut placements: Vec<Placement> = Vec::new();
    let mut routes: Vec<Route> = Vec::new();
    let mut outs: BTreeMap<Pin, Port> = BTreeMap::new();
    let mut ports_in: BTreeMap<GateId, Vec<Port>> = BTreeMap::new();
    let mut west = 0;

    for (li, gates) in plan.layers.iter().enumerate() {
        let templates: Vec<Arc<Template>> = gates.iter().map(|&g| r.template(c.gate(g).kind)).collect::<Result<_, _>>()?;
        let mut wires: Vec<Wire> = Vec::new();
        for &g in gates {
            for p in 0..c.gate(g).kind.in_arity() {
                let from = c.driver(g, p as u8).expect("validated circuit");
                let src = *outs.get(&from).ok_or_else(|| LayoutError::Unroutable(c.gate(g).name.clone()))?;
                wires.push(Wire { from, to: Pin::new(g, p as u8), src, port: p });
            }
        }
        for w in wires.windows(2) {
            if w[0].src.cell.y <= w[1].src.cell.y {
                return Err(LayoutError::Unroutable(c.gate(w[1].to.gate).name.clone()));
            }
        }
        let n = wires.len() as i32;
        // Turn column of wire k (0-based), eastmost for the last wire.
        let turn = |k: usize| west - 2 - 2 * (n - 1 - k as i32);
        let mismatches = |x_in: i32| {
            wires.iter().filter(|w| ((w.src.cell.x - x_in - 1) % 2 == 1) != (w.src.polarity == Polarity::Negated)).count()
        };
        let x_in = match (li, kit) {
            (0, _) => 0,
            (_, Kit::Collatz) if mismatches(turn(0) - 3) < mismatches(turn(0) - 2) => turn(0) - 3,
            _ => turn(0) - 2,
        };

        let mut prev_bottom: Option<i32> = None;
        let mut layer_west = i32::MAX;
        let mut wi = 0;
        for (&g, t) in gates.iter().zip(&templates) {
            let fp = t.footprint;
            let mut y = match prev_bottom {
                Some(b) => b - 2 - fp.max.y,
                None if t.ins.is_empty() => -fp.max.y,
                None => i32::MAX,
            };
            for (p, port) in t.ins.iter().enumerate() {
                let w = &wires[wi + p];
                let straight = w.src.cell.x - x_in - 1;
                let want = w.src.polarity == Polarity::Negated;
                let drop = (kit == Kit::Collatz && (straight % 2 == 1) != want) as i32;
                y = y.min(w.src.cell.y - drop - port.cell.y);
            }
            let offset = Coord::new(x_in, y);
            r.put_gadget(g, t, offset)?;
            prev_bottom = Some(fp.min.y + y);
            layer_west = layer_west.min(fp.min.x + x_in);
            for (p, port) in t.outs.iter().enumerate() {
                outs.insert(Pin::new(g, p as u8), port.translate(offset));
            }
            ports_in.insert(g, t.ins.iter().map(|p| p.translate(offset)).collect());
            placements.push(Placement {
                gate: g,
                kind: c.gate(g).kind,
                gadget: t.name.clone(),
                offset,
                footprint: fp.translate(offset),
                tiles: t.tiles,
            });
            wi += t.ins.len();
        }

        for (k, w) in wires.iter().enumerate() {
            let dst = ports_in[&w.to.gate][w.port];
            let rt = route_wire(&mut r, routes.len(), w, dst, turn(k))
                .map_err(|e| match e {
                    LayoutError::Unroutable(_) => LayoutError::Unroutable(c.gate(w.to.gate).name.clone()),
                    e => e,
                })?;
            routes.push(rt);
        }
        west = layer_west;
    }

    r.check_adjacency()?;
    r.close()?;
    let input_sites: Vec<Coord> =
        c.inputs().iter().map(|&g| outs[&Pin::new(g, 0)].cell).collect();
    let out_port = ports_in[&c.output()][0];
    let output_edge = out_port.edge();
    let mut maze = r.fab.maze;
    maze.set_input_sites(input_sites.clone());
    maze.set_output_edge(Some(output_edge));
    maze.validate()?;
    Ok(RoutedLayout { tileset_id: id.to_string(), placements, routes, input_sites, output_edge, maze })
}

fn route_wire(r: &mut Router<'_>, index: usize, w: &Wire, dst: Port, col: i32) -> Result<Route, LayoutError> {
    let kit = r.kit;
    let (sx, s) = (w.src.cell.x, w.src.cell.y);
    let (tx, t) = (dst.cell.x, dst.cell.y);
    if t > s || col <= tx || col >= sx {
        return Err(LayoutError::Unroutable(String::new()));
    }
    let h = |x: i32, y: i32| PathCell { at: Coord::new(x, y), kind: CellKind::H };
    let mut cells = Vec::new();
    let mut prefer = None;
    let mut corner = None;
    if s == t {
        cells.extend((tx + 1..sx).rev().map(|x| h(x, s)));
    } else {
        cells.extend((col + 1..sx).rev().map(|x| h(x, s)));
        corner = Some(cells.len());
        cells.push(PathCell { at: Coord::new(col, s), kind: CellKind::WS });
        cells.extend((t + 1..s).rev().map(|y| PathCell { at: Coord::new(col, y), kind: CellKind::V }));
        cells.push(PathCell { at: Coord::new(col, t), kind: CellKind::SW });
        prefer = Some(match kit {
            Kit::NandNxor => cells.len(),
            Kit::Collatz => corner.expect("set above"),
        });
        cells.extend((tx + 1..col).rev().map(|x| h(x, t)));
    }
    if cells.is_empty() {
        return Err(LayoutError::Unroutable(String::new()));
    }
    let want = w.src.polarity == Polarity::Negated;
    let negs = assign_polarity(kit, &cells, want, prefer).ok_or(LayoutError::Unroutable(String::new()))?;
    let mut corrections = Vec::new();
    for (i, (p, &n)) in cells.iter().zip(&negs).enumerate() {
        if n == kit.options(p.kind)[0] {
            continue;
        }
        corrections.push(match (kit, p.kind) {
            (Kit::NandNxor, _) => Correction::Not(p.at),
            (Kit::Collatz, _) if s - t == 1 && corner == Some(i) => Correction::Buffer(p.at),
            _ => Correction::NegatingTurn(p.at),
        });
    }
    for (p, &n) in cells.iter().zip(&negs) {
        kit.place(&mut r.fab, p.kind, p.at, n)?;
        r.claim(p.at, Owner::Wire(index))?;
    }
    r.link(w.src.cell, cells[0].at);
    r.link(cells[cells.len() - 1].at, dst.cell);
    Ok(Route { from: w.from, to: w.to, cells, negs, corrections })
}

/// Planarises, layers, places and routes `circuit` for the given tile set.
pub fn compile(circuit: &Circuit, tileset_id: &str, lib: &GadgetLibrary) -> Result<CompiledMaze, LayoutError> {
    if lib.tileset_id() != tileset_id {
        return Err(LayoutError::LibraryMismatch { library: lib.tileset_id().into(), tileset: tileset_id.into() });
    }
    let plan = layer(&planarize(circuit));
    let routed = route(&plan, lib)?;
    Ok(emit(&routed))
}

/// Packages a routed layout with its tile accounting.
pub fn emit(routed: &RoutedLayout) -> CompiledMaze {
    let mut acc = Accounting::default();
    for p in &routed.placements {
        match p.kind {
            GateKind::Table(_) | GateKind::Not => acc.gates.push((p.gate, p.gadget.clone(), p.tiles)),
            GateKind::Crossover => acc.crossovers.push(p.tiles),
            _ => acc.other_tiles += p.tiles,
        }
    }
    acc.wire_tiles = routed.routes.iter().map(|r| r.cells.len()).sum();
    CompiledMaze {
        tileset_id: routed.tileset_id.clone(),
        maze: routed.maze.clone(),
        input_sites: routed.input_sites.clone(),
        output_edge: routed.output_edge,
        accounting: acc,
    }
}

/// The maze with one bit-carrying seed cell at every input site.
pub fn encode_input(compiled: &CompiledMaze, bits: &[bool]) -> Result<Maze, LayoutError> {
    if bits.len() != compiled.input_sites.len() {
        return Err(LayoutError::LengthMismatch { expected: compiled.input_sites.len(), got: bits.len() });
    }
    let mut m = compiled.maze.clone();
    m.set_input_sites(Vec::new());
    for (&p, &b) in compiled.input_sites.iter().zip(bits) {
        m.add_cell(p)?;
        m.set_glue(p, Side::W, GlueLabel::bit(b));
    }
    Ok(m)
}

/// The bit on the output edge of a terminal assembly.
pub fn read_output(terminal: &Assembly, compiled: &CompiledMaze) -> Result<bool, LayoutError> {
    terminal.glue_at(compiled.output_edge).as_bit().ok_or(LayoutError::OutputNotReached(compiled.output_edge))
}

impl CompiledMaze {
    /// Encodes `bits`, grows to the terminal assembly and reads the output.
    pub fn run(&self, ts: &Arc<TileSet>, bits: &[bool], cfg: &RunConfig) -> Result<(bool, Assembly, RunReport), LayoutError> {
        let m = encode_input(self, bits)?;
        let (term, rep) = run_to_terminal(Assembly::new(m, ts.clone()), cfg)?;
        let out = read_output(&term, self)?;
        Ok((out, term, rep))
    }

    pub fn evaluate(&self, ts: &Arc<TileSet>, bits: &[bool]) -> Result<bool, LayoutError> {
        self.run(ts, bits, &RunConfig::default()).map(|r| r.0)
    }
}
