//! Builtin gadgets for both tile sets.
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::kit::{CellKind, Fabric, Kit};
use super::{Gadget, Parity, Polarity, Port, TruthTable};
use crate::geom::{Coord, Side};
use crate::glue::GlueLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    HWire,
    VWire,
    TurnWS,
    TurnSW,
    Fanout,
    Gate,
    Not,
    Const,
    Crossover,
    Buffer,
}

#[derive(Clone, Debug)]
pub struct GadgetLibrary {
    kit: Kit,
    gadgets: BTreeMap<String, (Role, Gadget)>,
}

const fn c(x: i32, y: i32) -> Coord {
    Coord::new(x, y)
}

fn d(v: u8) -> GlueLabel {
    GlueLabel::digit(v)
}

fn identity(inputs: u8, outputs: u8) -> TruthTable {
    TruthTable::from_fn(inputs, outputs, |_, v| v & 1 == 1)
}

pub(crate) fn finish(kit: Kit, name: impl Into<String>, fab: Fabric, ports: Vec<Port>, truth: TruthTable) -> Gadget {
    Gadget {
        name: name.into(),
        tileset_id: kit.tileset_id().to_string(),
        tiles: fab.sites.len(),
        maze: fab.maze,
        ports,
        truth: Some(truth),
    }
}

fn neg_parity(neg: bool) -> Parity {
    if neg {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// Straight westward wire of `len` cells.
pub fn hwire(kit: Kit, len: usize) -> Gadget {
    assert!(len >= 1);
    let mut fab = Fabric::new();
    let mut neg = false;
    for i in 0..len as i32 {
        let n = kit.options(CellKind::H)[0];
        kit.place(&mut fab, CellKind::H, c(-i, 0), n).expect("fresh wire");
        neg ^= n;
    }
    let out = Port::output(c(1 - len as i32, 0), Side::W);
    let out = Port { polarity: Polarity::from_neg(neg), parity: neg_parity(len % 2 == 1), ..out };
    let ports = alloc::vec![Port::input(c(0, 0), Side::E).with_parity(neg_parity(len % 2 == 1)), out];
    finish(kit, format!("hwire-{len}"), fab, ports, identity(1, 1))
}

/// Straight southward wire of `len` cells.
pub fn vwire(kit: Kit, len: usize) -> Gadget {
    assert!(len >= 1);
    let mut fab = Fabric::new();
    let mut neg = false;
    for i in 0..len as i32 {
        let n = kit.options(CellKind::V)[0];
        kit.place(&mut fab, CellKind::V, c(0, -i), n).expect("fresh wire");
        neg ^= n;
    }
    let out = Port::output(c(0, 1 - len as i32), Side::S);
    let out = Port { polarity: Polarity::from_neg(neg), parity: neg_parity(len % 2 == 1), ..out };
    let ports = alloc::vec![Port::input(c(0, 0), Side::N), out];
    finish(kit, format!("vwire-{len}"), fab, ports, identity(1, 1))
}

fn single(kit: Kit, name: &str, kind: CellKind, neg: bool) -> Gadget {
    let mut fab = Fabric::new();
    kit.place(&mut fab, kind, c(0, 0), neg).expect("fresh cell");
    let ports = alloc::vec![
        Port::input(c(0, 0), kind.input_side()),
        Port { polarity: Polarity::from_neg(neg), ..Port::output(c(0, 0), kind.output_side()) },
    ];
    finish(kit, name, fab, ports, identity(1, 1))
}

fn not_gate(kit: Kit) -> Gadget {
    let mut fab = Fabric::new();
    kit.place(&mut fab, CellKind::H, c(0, 0), true).expect("fresh cell");
    let ports = alloc::vec![Port::input(c(0, 0), Side::E), Port::output(c(0, 0), Side::W)];
    finish(kit, "not", fab, ports, TruthTable::from_fn(1, 1, |_, v| v == 0))
}

fn constant(kit: Kit, bit: bool) -> Gadget {
    let mut fab = Fabric::new();
    fab.site(c(0, 0)).expect("fresh");
    let (n, e) = match (kit, bit) {
        (Kit::NandNxor, true) => (0, 0),
        (Kit::NandNxor, false) => (0, 1),
        (Kit::Collatz, true) => (1, 0),
        (Kit::Collatz, false) => (0, 0),
    };
    fab.wall_glue(c(0, 1), Side::S, d(n)).expect("fresh");
    fab.wall_glue(c(1, 0), Side::W, d(e)).expect("fresh");
    let ports = alloc::vec![Port::output(c(0, 0), Side::W)];
    finish(kit, format!("const-{}", bit as u8), fab, ports, TruthTable::from_fn(0, 1, |_, _| bit))
}

/// One input from the east, two outputs on the west side, two rows apart.
fn fanout(kit: Kit, odd: bool) -> Gadget {
    let mut fab = Fabric::new();
    let (top, bottom, top_neg) = match kit {
        Kit::NandNxor => {
            kit.place(&mut fab, CellKind::H, c(0, 0), false).unwrap();
            // Also emits the complement southwards.
            kit.place(&mut fab, CellKind::H, c(-1, 0), odd).unwrap();
            fab.site(c(-1, -1)).unwrap();
            fab.wall_glue(c(0, -1), Side::W, d(1)).unwrap();
            kit.place(&mut fab, CellKind::SW, c(-1, -2), odd).unwrap();
            (c(-1, 0), c(-1, -2), odd)
        }
        Kit::Collatz => {
            kit.place(&mut fab, CellKind::H, c(0, 0), true).unwrap();
            kit.place(&mut fab, CellKind::WS, c(-1, 0), odd).unwrap();
            // Splits: copies its input both west and south.
            kit.place(&mut fab, CellKind::V, c(-1, -1), false).unwrap();
            kit.place(&mut fab, CellKind::H, c(-2, -1), true).unwrap();
            kit.place(&mut fab, CellKind::V, c(-1, -2), odd).unwrap();
            kit.place(&mut fab, CellKind::SW, c(-1, -3), false).unwrap();
            kit.place(&mut fab, CellKind::H, c(-2, -3), true).unwrap();
            fab.wall(c(-2, 0)).unwrap();
            (c(-2, -1), c(-2, -3), odd)
        }
    };
    let name = if odd { "fanout-odd" } else { "fanout" };
    let ports = alloc::vec![
        Port::input(c(0, 0), Side::E).with_parity(neg_parity(odd)),
        Port { polarity: Polarity::from_neg(top_neg), ..Port::output(top, Side::W) },
        Port::output(bottom, Side::W),
    ];
    finish(kit, name, fab, ports, identity(1, 2))
}

/// Collatz buffer: shifts a horizontal signal one row down, keeping its value.
fn buffer(kit: Kit) -> Gadget {
    let mut fab = Fabric::new();
    kit.place(&mut fab, CellKind::H, c(0, 0), true).unwrap();
    kit.place(&mut fab, CellKind::WS, c(-1, 0), true).unwrap();
    kit.place(&mut fab, CellKind::SW, c(-1, -1), false).unwrap();
    let ports = alloc::vec![Port::input(c(0, 0), Side::E), Port::output(c(-1, -1), Side::W)];
    finish(kit, "buffer", fab, ports, identity(1, 1))
}

/// NAND-NXOR gate cell: inputs at (0,0) and (0,-2) from the east.
fn nand_nxor_gate(code: u8) -> Gadget {
    let kit = Kit::NandNxor;
    let tt = TruthTable::gate(code);
    let f = |a: bool, b: bool| tt.eval(0, (a as usize) << 1 | b as usize);
    let mut fab = Fabric::new();
    let a_port = Port::input(c(0, 0), Side::E);
    let b_port = Port::input(c(0, -2), Side::E);
    let depends_a = (0..2).any(|b| f(false, b == 1) != f(true, b == 1));
    let depends_b = (0..2).any(|a| f(a == 1, false) != f(a == 1, true));
    let out;
    if !depends_a && !depends_b {
        // Triggered by input a; the corner sees a constant 1.
        kit.place(&mut fab, CellKind::H, c(0, 0), false).unwrap();
        fab.site(c(-1, 0)).unwrap();
        fab.wall_glue(c(-1, 1), Side::S, d(0)).unwrap();
        kit.place(&mut fab, CellKind::SW, c(-1, -1), !f(false, false)).unwrap();
        fab.wall(c(0, -2)).unwrap();
        out = c(-1, -1);
    } else if !depends_b {
        // a through H, WS, SW.
        let neg_a = f(false, false);
        kit.place(&mut fab, CellKind::H, c(0, 0), false).unwrap();
        kit.place(&mut fab, CellKind::WS, c(-1, 0), true).unwrap();
        kit.place(&mut fab, CellKind::SW, c(-1, -1), !neg_a).unwrap();
        fab.wall(c(0, -2)).unwrap();
        out = c(-1, -1);
    } else if !depends_a {
        let neg_b = f(false, false);
        kit.place(&mut fab, CellKind::H, c(0, -2), neg_b).unwrap();
        kit.place(&mut fab, CellKind::H, c(-1, -2), false).unwrap();
        fab.wall(c(0, 0)).unwrap();
        out = c(-1, -2);
    } else {
        // a comes down the second column and meets b at (-1,-2).
        let xor_like = f(false, false) == f(true, true) && f(false, true) == f(true, false);
        let (neg_a, neg_b, neg_o);
        if xor_like {
            // West output: NXOR(a ^ na, b ^ nb).
            neg_a = f(false, false) ^ true;
            neg_b = false;
            neg_o = false;
        } else {
            // South output: NAND(a ^ na, b ^ nb), then the corner.
            let odd = (0..4).find(|&v| (0..4).filter(|&u| tt.eval(0, u) == tt.eval(0, v)).count() == 1).unwrap();
            let (va, vb) = (odd >> 1 & 1 == 1, odd & 1 == 1);
            // NAND(p, q) is 0 only at p = q = 1.
            neg_a = !va;
            neg_b = !vb;
            neg_o = tt.eval(0, odd);
        }
        kit.place(&mut fab, CellKind::H, c(0, 0), neg_a).unwrap();
        kit.place(&mut fab, CellKind::WS, c(-1, 0), true).unwrap();
        kit.place(&mut fab, CellKind::V, c(-1, -1), true).unwrap();
        kit.place(&mut fab, CellKind::H, c(0, -2), neg_b).unwrap();
        fab.site(c(-1, -2)).unwrap();
        if xor_like {
            out = c(-1, -2);
        } else {
            kit.place(&mut fab, CellKind::SW, c(-1, -3), neg_o).unwrap();
            out = c(-1, -3);
        }
    }
    let ports = alloc::vec![a_port, b_port, Port::output(out, Side::W)];
    finish(kit, format!("gate-{code:04b}"), fab, ports, tt)
}

impl GadgetLibrary {
    pub fn kit(&self) -> Kit {
        self.kit
    }

    pub fn tileset_id(&self) -> &'static str {
        self.kit.tileset_id()
    }

    pub fn get(&self, name: &str) -> Option<&Gadget> {
        self.gadgets.get(name).map(|(_, g)| g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Role, &Gadget)> {
        self.gadgets.values().map(|(r, g)| (*r, g))
    }

    pub fn with_role(&self, role: Role) -> impl Iterator<Item = &Gadget> {
        self.iter().filter(move |(r, _)| *r == role).map(|(_, g)| g)
    }

    pub fn gate(&self, code: u8) -> &Gadget {
        self.get(&format!("gate-{code:04b}")).expect("all 16 gates present")
    }

    pub fn fanout(&self) -> &Gadget {
        self.get("fanout").expect("present")
    }

    pub fn not(&self) -> &Gadget {
        self.get("not").expect("present")
    }

    pub fn constant(&self, bit: bool) -> &Gadget {
        self.get(if bit { "const-1" } else { "const-0" }).expect("present")
    }

    pub fn crossover(&self) -> &Gadget {
        self.get("crossover").expect("present")
    }

    /// Horizontal wire of any length.
    pub fn hwire(&self, len: usize) -> Gadget {
        hwire(self.kit, len)
    }

    pub fn vwire(&self, len: usize) -> Gadget {
        vwire(self.kit, len)
    }

    fn insert(&mut self, role: Role, g: Gadget) {
        self.gadgets.insert(g.name.clone(), (role, g));
    }

    pub(crate) fn base(kit: Kit) -> GadgetLibrary {
        let mut lib = GadgetLibrary { kit, gadgets: BTreeMap::new() };
        for len in [1, 2, 3, 4] {
            lib.insert(Role::HWire, hwire(kit, len));
            lib.insert(Role::VWire, vwire(kit, len));
        }
        for &neg in kit.options(CellKind::WS) {
            let name = if neg { "turn-ws-neg" } else { "turn-ws" };
            lib.insert(Role::TurnWS, single(kit, name, CellKind::WS, neg));
        }
        for &neg in kit.options(CellKind::SW) {
            let name = if neg { "turn-sw-neg" } else { "turn-sw" };
            lib.insert(Role::TurnSW, single(kit, name, CellKind::SW, neg));
        }
        lib.insert(Role::Fanout, fanout(kit, false));
        if kit == Kit::Collatz {
            lib.insert(Role::Fanout, fanout(kit, true));
        }
        lib.insert(Role::Not, not_gate(kit));
        lib.insert(Role::Const, constant(kit, false));
        lib.insert(Role::Const, constant(kit, true));
        if kit == Kit::Collatz {
            lib.insert(Role::Buffer, buffer(kit));
        }
        for code in 0..16u8 {
            let g = match kit {
                Kit::NandNxor => nand_nxor_gate(code),
                Kit::Collatz => super::collatz_gates::gate(code),
            };
            lib.insert(Role::Gate, g);
        }
        lib
    }

    pub(crate) fn add_crossover(&mut self, g: Gadget) {
        self.insert(Role::Crossover, g);
    }
}

/// Complete library for `nand-nxor` or `collatz`.
pub fn builtin_library(tileset_id: &str) -> Option<GadgetLibrary> {
    let kit = Kit::for_tileset(tileset_id)?;
    let mut lib = GadgetLibrary::base(kit);
    lib.add_crossover(super::crossover::crossover(kit));
    Some(lib)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::validate_gadget;
    use crate::tilesets;
    use std::println;

    fn check_base(kit: Kit) -> BTreeMap<String, usize> {
        let ts = tilesets::builtin(kit.tileset_id()).unwrap();
        let lib = builtin_library(kit.tileset_id()).unwrap();
        let mut counts = BTreeMap::new();
        for (_, g) in lib.iter() {
            let rep = validate_gadget(g, &ts).unwrap_or_else(|e| panic!("{}: {e}", g.name));
            println!("{} {} {:?}", kit.tileset_id(), g.name, rep.counts);
            counts.insert(g.name.clone(), rep.max_tiles());
        }
        counts
    }

    #[test]
    fn nand_nxor_base_validates() {
        let counts = check_base(Kit::NandNxor);
        let max = (0..16).map(|c| counts[&format!("gate-{c:04b}")]).max().unwrap();
        assert_eq!(max, 6);
        assert_eq!(counts["gate-1000"], 6);
        assert_eq!(counts["crossover"], 34);
    }

    #[test]
    fn collatz_base_validates() {
        let counts = check_base(Kit::Collatz);
        let max = (0..16).map(|c| counts[&format!("gate-{c:04b}")]).max().unwrap();
        assert_eq!(max, 14);
        assert_eq!(counts["gate-1000"], 14);
        assert_eq!(counts["crossover"], 33);
    }
}
