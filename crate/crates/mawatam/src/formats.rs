//! Line-oriented text formats for tile sets, mazes, assemblies and gadgets.
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use mawatam_core::assembly::AttachError;
use mawatam_core::gadget::{Axis, Gadget, Parity, Polarity, Port, PortDir, TruthTable};
use mawatam_core::glue::GlueError;
use mawatam_core::maze::MazeError;
use mawatam_core::tile::TileSetError;
use mawatam_core::{Assembly, Coord, EdgeSite, GlueLabel, Maze, Side, TileSet, TileType};

pub const TILESET_HEADER: &str = "mawatam-tileset v1";
pub const MAZE_HEADER: &str = "mawatam-maze v1";
pub const ASSEMBLY_HEADER: &str = "mawatam-assembly v1";
pub const GADGET_HEADER: &str = "mawatam-gadget v1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("expected header `{expected}`")]
    Header { expected: &'static str },
    #[error("line {line}: {source}")]
    Glue { line: usize, source: GlueError },
    #[error(transparent)]
    TileSet(#[from] TileSetError),
    #[error(transparent)]
    Maze(#[from] MazeError),
    #[error("line {line}: unknown tile `{name}`")]
    UnknownTile { line: usize, name: String },
    #[error("line {line}: {source}")]
    Attach { line: usize, source: AttachError },
    #[error("gadget file has no `{0}` line")]
    Missing(&'static str),
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

/// Non-blank lines with comments stripped, numbered from 1, after checking the header.
fn lines<'a>(text: &'a str, header: &'static str) -> Result<Lines<'a>, FormatError> {
    let mut l = Lines { inner: text.lines().enumerate() };
    match l.next() {
        Some((_, h)) if h.join(" ") == header => Ok(l),
        _ => Err(FormatError::Header { expected: header }),
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, Vec<&'a str>);
    fn next(&mut self) -> Option<Self::Item> {
        for (i, raw) in self.inner.by_ref() {
            let body = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = body.split_whitespace().collect();
            if !words.is_empty() {
                return Some((i + 1, words));
            }
        }
        None
    }
}

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

fn num<T: FromStr>(line: usize, s: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| perr(line, format!("bad number `{s}`")))
}

fn coord(line: usize, x: &str, y: &str) -> Result<Coord, FormatError> {
    Ok(Coord::new(num(line, x)?, num(line, y)?))
}

fn side(line: usize, s: &str) -> Result<Side, FormatError> {
    s.parse().map_err(|_| perr(line, format!("bad side `{s}`")))
}

fn glue(line: usize, s: &str) -> Result<GlueLabel, FormatError> {
    GlueLabel::new(s).map_err(|source| FormatError::Glue { line, source })
}

fn arity(line: usize, words: &[&str], n: usize) -> Result<(), FormatError> {
    if words.len() != n {
        return Err(perr(line, format!("`{}` takes {} field(s)", words[0], n - 1)));
    }
    Ok(())
}

pub fn write_tileset(ts: &TileSet) -> String {
    let mut s = format!("{TILESET_HEADER}\nname {}\n", ts.name());
    for t in ts.tiles() {
        let g = |side| t.glue(side);
        writeln!(s, "tile {} N={} E={} S={} W={}", t.name, g(Side::N), g(Side::E), g(Side::S), g(Side::W)).unwrap();
    }
    s
}

/// Parses a tile set. The optional `name` line sets its id, otherwise `default_name` is used.
pub fn read_tileset(text: &str, default_name: &str) -> Result<TileSet, FormatError> {
    let mut name = default_name.to_string();
    let mut tiles = Vec::new();
    for (line, w) in lines(text, TILESET_HEADER)? {
        match w[0] {
            "name" => {
                arity(line, &w, 2)?;
                name = w[1].to_string();
            }
            "tile" => {
                arity(line, &w, 6)?;
                let mut g = [GlueLabel::NULL; 4];
                for (k, field) in w[2..].iter().enumerate() {
                    let (key, val) = field.split_once('=').ok_or_else(|| perr(line, format!("expected `SIDE=label`, got `{field}`")))?;
                    let side = side(line, key)?;
                    if side.index() != k {
                        return Err(perr(line, "glues must be listed in order N E S W"));
                    }
                    g[k] = glue(line, val)?;
                }
                tiles.push(TileType::new(w[1], g[0], g[1], g[2], g[3]));
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(TileSet::new(name, tiles)?)
}

fn write_seed(s: &mut String, m: &Maze) {
    for c in m.cells() {
        writeln!(s, "cell {} {}", c.x, c.y).unwrap();
    }
    for (e, g) in m.glues() {
        writeln!(s, "glue {e} {g}").unwrap();
    }
}

pub fn write_maze(m: &Maze) -> String {
    let mut s = format!("{MAZE_HEADER}\n");
    write_seed(&mut s, m);
    for c in m.input_sites() {
        writeln!(s, "input {} {}", c.x, c.y).unwrap();
    }
    if let Some(e) = m.output_edge() {
        writeln!(s, "output {e}").unwrap();
    }
    s
}

/// Seed glues are collected first so that cell order in the file does not matter.
struct SeedReader {
    maze: Maze,
    glues: Vec<(usize, Coord, Side, GlueLabel)>,
}

impl SeedReader {
    fn new() -> Self {
        SeedReader { maze: Maze::new(), glues: Vec::new() }
    }

    fn line(&mut self, line: usize, w: &[&str]) -> Result<bool, FormatError> {
        match w[0] {
            "cell" => {
                arity(line, w, 3)?;
                self.maze.add_cell(coord(line, w[1], w[2])?)?;
            }
            "glue" => {
                arity(line, w, 5)?;
                self.glues.push((line, coord(line, w[1], w[2])?, side(line, w[3])?, glue(line, w[4])?));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn finish(mut self) -> Result<Maze, FormatError> {
        for (line, c, side, g) in self.glues {
            let e = EdgeSite::new(c, side);
            if !e.cells().iter().any(|&(c, _)| self.maze.is_seed(c)) {
                return Err(perr(line, format!("glue on edge {e} touches no seed cell")));
            }
            self.maze.set_glue(c, side, g);
        }
        self.maze.validate()?;
        Ok(self.maze)
    }
}

pub fn read_maze(text: &str) -> Result<Maze, FormatError> {
    let mut r = SeedReader::new();
    let mut inputs = Vec::new();
    let mut output = None;
    for (line, w) in lines(text, MAZE_HEADER)? {
        if r.line(line, &w)? {
            continue;
        }
        match w[0] {
            "input" => {
                arity(line, &w, 3)?;
                inputs.push(coord(line, w[1], w[2])?);
            }
            "output" => {
                arity(line, &w, 4)?;
                if output.is_some() {
                    return Err(perr(line, "only one output edge is supported"));
                }
                output = Some(EdgeSite::new(coord(line, w[1], w[2])?, side(line, w[3])?));
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    r.maze.set_input_sites(inputs);
    r.maze.set_output_edge(output);
    r.finish()
}

/// Placed tiles in trace order, then the seed.
pub fn write_assembly(a: &Assembly) -> String {
    let mut s = format!("{ASSEMBLY_HEADER}\n");
    let ts = a.tileset();
    for &(c, t) in a.trace() {
        writeln!(s, "tile {} {} {}", c.x, c.y, ts.tile(t).name).unwrap();
    }
    write_seed(&mut s, a.maze());
    s
}

/// Rebuilds an assembly by replaying its trace over the seed; every attachment is rechecked.
pub fn read_assembly(text: &str, ts: Arc<TileSet>) -> Result<Assembly, FormatError> {
    let mut r = SeedReader::new();
    let mut trace = Vec::new();
    for (line, w) in lines(text, ASSEMBLY_HEADER)? {
        if r.line(line, &w)? {
            continue;
        }
        match w[0] {
            "tile" => {
                arity(line, &w, 4)?;
                let id = ts.id_of(w[3]).ok_or_else(|| FormatError::UnknownTile { line, name: w[3].into() })?;
                trace.push((line, coord(line, w[1], w[2])?, id));
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    let mut a = Assembly::new(r.finish()?, ts);
    for (line, c, id) in trace {
        a.place(c, id).map_err(|source| FormatError::Attach { line, source })?;
    }
    Ok(a)
}

fn port_line(p: &Port) -> String {
    let dir = if p.dir == PortDir::In { "in" } else { "out" };
    let axis = if p.axis == Axis::H { "h" } else { "v" };
    let pol = if p.polarity == Polarity::Negated { "neg" } else { "plain" };
    let par = match p.parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
        Parity::None => "none",
    };
    format!("port {} {} {} {dir} {axis} {pol} {par}", p.cell.x, p.cell.y, p.side)
}

pub fn write_gadget(g: &Gadget) -> String {
    let mut s = format!("{GADGET_HEADER}\nname {}\ntileset {}\n", g.name, g.tileset_id);
    write_seed(&mut s, &g.maze);
    for p in &g.ports {
        writeln!(s, "{}", port_line(p)).unwrap();
    }
    if let Some(t) = &g.truth {
        writeln!(s, "truth {t}").unwrap();
    }
    writeln!(s, "tiles {}", g.tiles).unwrap();
    s
}

fn pick<T: Copy>(line: usize, s: &str, opts: &[(&str, T)]) -> Result<T, FormatError> {
    opts.iter().find(|(k, _)| *k == s).map(|&(_, v)| v).ok_or_else(|| perr(line, format!("unexpected `{s}`")))
}

pub fn read_gadget(text: &str) -> Result<Gadget, FormatError> {
    let mut r = SeedReader::new();
    let (mut name, mut tileset, mut truth, mut tiles) = (None, None, None, None);
    let mut ports = Vec::new();
    for (line, w) in lines(text, GADGET_HEADER)? {
        if r.line(line, &w)? {
            continue;
        }
        match w[0] {
            "name" => {
                arity(line, &w, 2)?;
                name = Some(w[1].to_string());
            }
            "tileset" => {
                arity(line, &w, 2)?;
                tileset = Some(w[1].to_string());
            }
            "port" => {
                arity(line, &w, 8)?;
                ports.push(Port {
                    cell: coord(line, w[1], w[2])?,
                    side: side(line, w[3])?,
                    dir: pick(line, w[4], &[("in", PortDir::In), ("out", PortDir::Out)])?,
                    axis: pick(line, w[5], &[("h", Axis::H), ("v", Axis::V)])?,
                    polarity: pick(line, w[6], &[("plain", Polarity::Plain), ("neg", Polarity::Negated)])?,
                    parity: pick(line, w[7], &[("even", Parity::Even), ("odd", Parity::Odd), ("none", Parity::None)])?,
                });
            }
            "truth" => {
                arity(line, &w, 2)?;
                truth = Some((line, w[1].to_string()));
            }
            "tiles" => {
                arity(line, &w, 2)?;
                tiles = Some(num(line, w[1])?);
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    let ins = ports.iter().filter(|p| p.dir == PortDir::In).count() as u8;
    let outs = ports.len() as u8 - ins;
    let truth = match truth {
        Some((line, bits)) => Some(TruthTable::parse(&bits, ins, outs).map_err(|e| perr(line, e.to_string()))?),
        None => None,
    };
    Ok(Gadget {
        name: name.unwrap_or_else(|| "gadget".into()),
        tileset_id: tileset.ok_or(FormatError::Missing("tileset"))?,
        maze: r.finish()?,
        ports,
        truth,
        tiles: tiles.ok_or(FormatError::Missing("tiles"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mawatam_core::gadget::builtin_library;
    use mawatam_core::tilesets;
    use mawatam_core::{run_to_terminal, RunConfig};

    #[test]
    fn tileset_round_trip() {
        for ts in [tilesets::nand_nxor(), tilesets::collatz(false), tilesets::collatz(true)] {
            assert_eq!(read_tileset(&write_tileset(&ts), "x").unwrap(), ts);
        }
    }

    #[test]
    fn duplicate_tile_name() {
        let text = "mawatam-tileset v1\ntile a N=0 E=0 S=0 W=0\ntile a N=1 E=0 S=0 W=0\n";
        assert!(matches!(read_tileset(text, "t"), Err(FormatError::TileSet(TileSetError::DuplicateName(n))) if n == "a"));
    }

    #[test]
    fn hand_written_collatz_matches_builtin() {
        let mut text = String::from("mawatam-tileset v1\nname collatz\n");
        for x in 0..6 {
            text += &format!("tile {x} N={} E={} S={} W={}\n", x / 3, x % 3, x % 2, x / 2);
        }
        assert_eq!(read_tileset(&text, "collatz").unwrap(), tilesets::collatz(false));
    }

    #[test]
    fn parse_error_has_line() {
        let text = "mawatam-tileset v1\n\ntile a N=0 E=0 S=0\n";
        match read_tileset(text, "t") {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(read_maze("cell 0 0\n"), Err(FormatError::Header { .. })));
    }

    #[test]
    fn maze_round_trip() {
        let mut m = Maze::new();
        m.add_cell(Coord::new(0, 0)).unwrap();
        m.add_cell(Coord::new(1, 1)).unwrap();
        m.set_glue(Coord::new(0, 0), Side::W, GlueLabel::bit(true));
        m.set_glue(Coord::new(1, 1), Side::S, GlueLabel::new("ab").unwrap());
        m.set_input_sites(vec![Coord::new(-3, 0), Coord::new(-3, 2)]);
        m.set_output_edge(Some(EdgeSite::new(Coord::new(-5, -5), Side::E)));
        assert_eq!(read_maze(&write_maze(&m)).unwrap(), m);
    }

    #[test]
    fn assembly_round_trip() {
        let ts = Arc::new(tilesets::nand_nxor());
        let g = builtin_library("nand-nxor").unwrap().gate(0b1110).clone();
        let a = Assembly::new(g.input_maze(2).unwrap(), ts.clone());
        let (t, _) = run_to_terminal(a, &RunConfig::default()).unwrap();
        let back = read_assembly(&write_assembly(&t), ts).unwrap();
        assert_eq!(back.trace(), t.trace());
        assert_eq!(back.maze(), t.maze());
    }

    #[test]
    fn assembly_replay_rejects_unbonded_tile() {
        let ts = Arc::new(tilesets::nand_nxor());
        let text = "mawatam-assembly v1\ntile 5 5 11\n";
        assert!(matches!(read_assembly(text, ts), Err(FormatError::Attach { line: 2, .. })));
    }

    #[test]
    fn every_builtin_gadget_round_trips() {
        for id in ["nand-nxor", "collatz"] {
            for (_, g) in builtin_library(id).unwrap().iter() {
                assert_eq!(&read_gadget(&write_gadget(g)).unwrap(), g, "{}", g.name);
            }
        }
    }
}
