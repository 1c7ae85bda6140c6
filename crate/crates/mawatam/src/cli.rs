//! Command-line interface.
use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use mawatam_core::arith::{self, ArithError};
use mawatam_core::assembly::RunError;
use mawatam_core::circuit::{parse_netlist, NetlistError};
use mawatam_core::gadget::{
    builtin_library, search_gate_seed, validate_with, Gadget, SearchBounds, SeedConvention, TruthTable, ValidateOptions,
    ValidationError,
};
use mawatam_core::layout::{self, Accounting, CompiledMaze, LayoutError};
use mawatam_core::tilesets;
use mawatam_core::{run_to_terminal, Assembly, BindingMode, Coord, Maze, OrderPolicy, RunConfig, RunReport, TileSet};

use crate::formats::{self, FormatError};
use crate::render::{render_ascii, render_svg, RenderFormat, RenderOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: {source}")]
    Netlist { path: PathBuf, source: NetlistError },
    #[error("unknown tile set `{0}`")]
    UnknownTileSet(String),
    #[error("no gadget library for tile set `{0}`")]
    NoLibrary(String),
    #[error("no builtin gadget named `{0}`")]
    UnknownGadget(String),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("{name}: {source}")]
    Validation { name: String, source: ValidationError },
    #[error("nondeterministic choice at {0}")]
    Nondeterministic(Coord),
    #[error("no seed found within {w}x{h}")]
    NotFound { w: usize, h: usize },
    #[error("maze has no output edge")]
    NoOutputEdge,
    #[error("output edge carries no bit")]
    NoOutputBit,
    #[error(transparent)]
    Stdout(#[from] std::io::Error),
}

#[derive(Parser, Debug)]
#[command(name = "mawatam", version, color = clap::ColorChoice::Never, about = "Maze-walking tile assembly: simulate, compile circuits, grow Collatz and powers-of-two tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Grow a maze file to its terminal assembly.
    Simulate {
        #[arg(long)]
        maze: PathBuf,
        #[arg(long, default_value = "nand-nxor")]
        tileset: String,
        #[command(flatten)]
        run: RunArgs,
        /// Print the terminal assembly as ASCII.
        #[arg(long)]
        ascii: bool,
        /// Write the terminal assembly dump here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Compile a netlist into a maze file.
    Compile {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value = "nand-nxor")]
        tileset: String,
        /// Maze output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile (or load) a circuit maze, present input bits and read the output.
    Run {
        #[arg(long, required_unless_present = "maze", conflicts_with = "maze")]
        circuit: Option<PathBuf>,
        /// Previously compiled maze file.
        #[arg(long)]
        maze: Option<PathBuf>,
        #[arg(long, default_value = "nand-nxor")]
        tileset: String,
        /// Input bits, first input first, e.g. `110`.
        #[arg(long, value_parser = parse_bits)]
        input: Bits,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Grow the Collatz trajectory assembly for x and read T^n(x) in ternary.
    Collatz {
        #[arg(long, value_parser = parse_natural)]
        x: BigUint,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Grow the powers-of-two table and print each column in ternary.
    Powers2 {
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exponents n up to n-max whose 2^n has no ternary digit 2.
    Erdos {
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Gadget validation and seed search.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Draw a maze or an assembly dump.
    Render {
        #[arg(long, required_unless_present = "assembly", conflicts_with = "assembly")]
        maze: Option<PathBuf>,
        #[arg(long)]
        assembly: Option<PathBuf>,
        #[arg(long, default_value = "nand-nxor")]
        tileset: String,
        /// Write SVG here instead of printing ASCII.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(4..))]
        cell_size: u32,
        #[arg(long)]
        glues: bool,
        /// Cell to outline, `x,y`; repeatable.
        #[arg(long, value_parser = parse_coord)]
        highlight: Vec<Coord>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GadgetCommand {
    /// Exhaustively validate a gadget file, one builtin gadget, or the whole builtin library.
    Validate {
        #[arg(long, conflicts_with = "name")]
        file: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
        /// Defaults to the gadget's own tile set.
        #[arg(long)]
        tileset: Option<String>,
        #[arg(long, default_value_t = 4)]
        random_orders: u64,
    },
    /// Search framed rectangular seeds for a two-input gate.
    Search {
        /// Gate table `f(00) f(01) f(10) f(11)`, e.g. `0001` for AND.
        #[arg(long, value_parser = parse_table)]
        table: u8,
        #[arg(long, default_value = "collatz")]
        tileset: String,
        #[arg(long, default_value_t = 3)]
        max_width: usize,
        #[arg(long, default_value_t = 3)]
        max_height: usize,
        #[arg(long, value_enum, default_value_t = Convention::TwoApart)]
        convention: Convention,
        /// Write the found gadget here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    TwoApart,
    Adjacent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Raster,
    Random,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = Order::Raster)]
    pub order: Order,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Refuse attachments next to an unequal glue.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value_t = mawatam_core::assembly::DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    /// Write the terminal assembly as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        let policy = match self.order {
            Order::Raster => OrderPolicy::Raster,
            Order::Random => OrderPolicy::Random(self.rng_seed),
        };
        RunConfig { policy, max_steps: self.max_steps }
    }

    fn mode(&self) -> BindingMode {
        if self.strict {
            BindingMode::Strict
        } else {
            BindingMode::Permissive
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits(pub Vec<bool>);

fn parse_bits(s: &str) -> Result<Bits, String> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(format!("`{s}` is not a bit string")),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Bits)
}

fn parse_natural(s: &str) -> Result<BigUint, String> {
    s.parse().map_err(|_| format!("`{s}` is not a natural number"))
}

fn parse_table(s: &str) -> Result<u8, String> {
    if s.len() == 4 && s.chars().all(|c| c == '0' || c == '1') {
        Ok(u8::from_str_radix(s, 2).expect("checked"))
    } else {
        Err(format!("`{s}` is not a four-bit gate table"))
    }
}

fn parse_coord(s: &str) -> Result<Coord, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let n = |v: &str| v.trim().parse::<i32>().map_err(|_| format!("bad coordinate `{s}`"));
    Ok(Coord::new(n(x)?, n(y)?))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

fn fmt_err(path: &Path) -> impl FnOnce(FormatError) -> CliError + '_ {
    move |source| CliError::Format { path: path.into(), source }
}

/// `nand-nxor`, `collatz`, `collatz-ext` or `file:PATH`.
pub fn load_tileset(id: &str) -> Result<Arc<TileSet>, CliError> {
    if let Some(p) = id.strip_prefix("file:") {
        let path = Path::new(p);
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("custom");
        let ts = formats::read_tileset(&read(path)?, stem).map_err(fmt_err(path))?;
        return Ok(Arc::new(ts));
    }
    tilesets::builtin(id).map(Arc::new).ok_or_else(|| CliError::UnknownTileSet(id.into()))
}

fn load_maze(path: &Path) -> Result<Maze, CliError> {
    formats::read_maze(&read(path)?).map_err(fmt_err(path))
}

fn compile_file(path: &Path, ts: &TileSet) -> Result<CompiledMaze, CliError> {
    let circuit = parse_netlist(&read(path)?).map_err(|source| CliError::Netlist { path: path.into(), source })?;
    let lib = builtin_library(ts.name()).ok_or_else(|| CliError::NoLibrary(ts.name().into()))?;
    Ok(layout::compile(&circuit, ts.name(), &lib)?)
}

fn svg_of(a: &Assembly) -> String {
    render_svg(a, &RenderOptions { format: RenderFormat::Svg, ..RenderOptions::default() })
}

fn grow(maze: Maze, ts: Arc<TileSet>, run: &RunArgs) -> Result<(Assembly, RunReport), CliError> {
    let a = Assembly::new(maze, ts).with_mode(run.mode());
    let (t, rep) = run_to_terminal(a, &run.config())?;
    if let Some(p) = &run.svg {
        write(p, &svg_of(&t))?;
    }
    Ok((t, rep))
}

fn print_accounting(out: &mut dyn Write, c: &CompiledMaze) -> std::io::Result<()> {
    let a: &Accounting = &c.accounting;
    writeln!(out, "inputs {}", c.input_sites.len())?;
    writeln!(out, "seed cells {}", c.maze.cells().len())?;
    writeln!(out, "gates {} (max {} tiles)", a.gates.len(), a.max_gate_tiles())?;
    writeln!(out, "crossovers {}", a.crossovers.len())?;
    writeln!(out, "tiles {}", a.total())
}

/// Runs one parsed command, writing results to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { maze, tileset, run, ascii, dump } => {
            let ts = load_tileset(&tileset)?;
            let m = load_maze(&maze)?;
            let output = m.output_edge();
            let (t, rep) = grow(m, ts, &run)?;
            writeln!(out, "placed {}", t.placed_count())?;
            writeln!(out, "steps {}", rep.steps)?;
            match &rep.nondeterminism {
                None => writeln!(out, "nondeterminism none")?,
                Some(n) => writeln!(out, "nondeterminism at {}", n.pos)?,
            }
            writeln!(out, "mismatches {}", t.mismatches().len())?;
            if let Some(e) = output {
                writeln!(out, "output {}", t.glue_at(e))?;
            }
            if ascii {
                write!(out, "{}", render_ascii(&t))?;
            }
            if let Some(p) = dump {
                write(&p, &formats::write_assembly(&t))?;
            }
        }
        Command::Compile { circuit, tileset, out: path } => {
            let ts = load_tileset(&tileset)?;
            let c = compile_file(&circuit, &ts)?;
            let text = formats::write_maze(&c.maze);
            match path {
                Some(p) => {
                    write(&p, &text)?;
                    print_accounting(out, &c)?;
                }
                None => {
                    write!(out, "{text}")?;
                    print_accounting(&mut std::io::stderr(), &c)?;
                }
            }
        }
        Command::Run { circuit, maze, tileset, input, run } => {
            let ts = load_tileset(&tileset)?;
            let compiled = match (circuit, maze) {
                (Some(c), _) => compile_file(&c, &ts)?,
                (None, Some(m)) => {
                    let m = load_maze(&m)?;
                    CompiledMaze {
                        tileset_id: ts.name().into(),
                        input_sites: m.input_sites().to_vec(),
                        output_edge: m.output_edge().ok_or(CliError::NoOutputEdge)?,
                        maze: m,
                        accounting: Accounting::default(),
                    }
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let seeded = layout::encode_input(&compiled, &input.0)?;
            let (t, rep) = grow(seeded, ts, &run)?;
            if let Some(n) = rep.nondeterminism {
                return Err(CliError::Nondeterministic(n.pos));
            }
            let bit = t.glue_at(compiled.output_edge).as_bit().ok_or(CliError::NoOutputBit)?;
            writeln!(out, "output {}", bit as u8)?;
        }
        Command::Collatz { x, steps, svg, dump } => {
            let r = arith::run_collatz(&x, steps)?;
            writeln!(out, "{} (ternary {})", r.value, if r.digits.is_empty() { "0" } else { &r.digits })?;
            if let Some(p) = svg {
                write(&p, &svg_of(&r.assembly))?;
            }
            if let Some(p) = dump {
                write(&p, &formats::write_assembly(&r.assembly))?;
            }
        }
        Command::Powers2 { m, svg } => {
            let a = arith::powers2_assembly(m)?;
            let height = a.bounds().map_or(0, |r| r.max.y.max(0) as usize);
            for n in 0..m {
                let (v, digits) = arith::read_digits(&a, &arith::powers2_column(height, n))?;
                let digits = digits.trim_start_matches('0');
                writeln!(out, "{n} {v} {}", if digits.is_empty() { "0" } else { digits })?;
            }
            if let Some(p) = svg {
                write(&p, &svg_of(&a))?;
            }
        }
        Command::Erdos { n_max } => {
            let set = arith::erdos_scan(n_max)?;
            let list: Vec<String> = set.iter().map(|n| n.to_string()).collect();
            writeln!(out, "{}", list.join(" "))?;
        }
        Command::Gadget(GadgetCommand::Validate { file, name, tileset, random_orders }) => {
            let gadgets: Vec<Gadget> = match (file, name) {
                (Some(p), _) => vec![formats::read_gadget(&read(&p)?).map_err(fmt_err(&p))?],
                (None, name) => {
                    let id = tileset.clone().unwrap_or_else(|| tilesets::NAND_NXOR.into());
                    let lib = builtin_library(&id).ok_or_else(|| CliError::NoLibrary(id.clone()))?;
                    match name {
                        Some(n) => vec![lib.get(&n).cloned().ok_or(CliError::UnknownGadget(n))?],
                        None => lib.iter().map(|(_, g)| g.clone()).collect(),
                    }
                }
            };
            let opts = ValidateOptions { random_orders, ..ValidateOptions::default() };
            for g in gadgets {
                let ts = load_tileset(tileset.as_deref().unwrap_or(&g.tileset_id))?;
                let rep = validate_with(&g, &ts, &opts).map_err(|source| CliError::Validation { name: g.name.clone(), source })?;
                writeln!(out, "{} ok tiles {}", g.name, rep.max_tiles())?;
            }
        }
        Command::Gadget(GadgetCommand::Search { table, tileset, max_width, max_height, convention, out: path }) => {
            let ts = load_tileset(&tileset)?;
            let conv = match convention {
                Convention::TwoApart => SeedConvention::two_apart(),
                Convention::Adjacent => SeedConvention::adjacent(),
            };
            let bounds = SearchBounds { max_width, max_height };
            let hit = search_gate_seed(&ts, TruthTable::gate(table), bounds, &conv)
                .ok_or(CliError::NotFound { w: max_width, h: max_height })?;
            writeln!(
                out,
                "found {}x{} tiles {} examined {}",
                hit.rect.width, hit.rect.height, hit.tiles, hit.examined
            )?;
            if let Some(p) = path {
                write(&p, &formats::write_gadget(&hit.gadget))?;
            }
        }
        Command::Render { maze, assembly, tileset, svg, cell_size, glues, highlight } => {
            let ts = load_tileset(&tileset)?;
            let a = match (maze, assembly) {
                (Some(m), _) => Assembly::new(load_maze(&m)?, ts),
                (None, Some(p)) => formats::read_assembly(&read(&p)?, ts).map_err(fmt_err(&p))?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            match svg {
                Some(p) => {
                    let highlight: BTreeSet<Coord> = highlight.into_iter().collect();
                    let opts = RenderOptions { format: RenderFormat::Svg, cell_size, show_glues: glues, highlight };
                    write(&p, &render_svg(&a, &opts))?;
                }
                None => write!(out, "{}", render_ascii(&a))?,
            }
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
