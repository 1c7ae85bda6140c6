//! Boolean circuits: IR, netlist parsing, evaluation, planarisation and layering.
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

mod netlist;
mod planar;

pub use netlist::{parse_netlist, to_netlist, NetlistError};
pub use planar::{layer, planarize, LayeredPlan, PlanarCircuit};

pub type GateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Input,
    Output,
    Const(bool),
    Not,
    Id,
    Fanout,
    /// Two inputs, two outputs; out-pin 0 carries in-pin 1 and vice versa.
    Crossover,
    /// Two-input gate with code `f(00) f(01) f(10) f(11)`.
    Table(u8),
}

impl GateKind {
    pub fn in_arity(self) -> usize {
        match self {
            GateKind::Input | GateKind::Const(_) => 0,
            GateKind::Output | GateKind::Not | GateKind::Id | GateKind::Fanout => 1,
            GateKind::Crossover | GateKind::Table(_) => 2,
        }
    }

    pub fn out_arity(self) -> usize {
        match self {
            GateKind::Output => 0,
            GateKind::Fanout | GateKind::Crossover => 2,
            _ => 1,
        }
    }

    /// Output values for the given input values.
    pub fn apply(self, ins: &[bool]) -> [bool; 2] {
        match self {
            GateKind::Input | GateKind::Output => [false; 2],
            GateKind::Const(b) => [b, false],
            GateKind::Not => [!ins[0], false],
            GateKind::Id => [ins[0], false],
            GateKind::Fanout => [ins[0], ins[0]],
            GateKind::Crossover => [ins[1], ins[0]],
            GateKind::Table(code) => {
                let v = (ins[0] as u8) << 1 | ins[1] as u8;
                [code >> (3 - v) & 1 == 1, false]
            }
        }
    }

    pub fn table(name: &str) -> Option<GateKind> {
        let code = match name {
            "AND" => 0b0001,
            "OR" => 0b0111,
            "XOR" => 0b0110,
            "NAND" => 0b1110,
            "NOR" => 0b1000,
            "NXOR" | "XNOR" => 0b1001,
            _ => {
                let bits = name.strip_prefix("TT")?;
                if bits.len() != 4 || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                    return None;
                }
                u8::from_str_radix(bits, 2).ok()?
            }
        };
        Some(GateKind::Table(code))
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Input => f.write_str("INPUT"),
            GateKind::Output => f.write_str("OUTPUT"),
            GateKind::Const(b) => write!(f, "CONST{}", *b as u8),
            GateKind::Not => f.write_str("NOT"),
            GateKind::Id => f.write_str("ID"),
            GateKind::Fanout => f.write_str("FANOUT"),
            GateKind::Crossover => f.write_str("CROSSOVER"),
            GateKind::Table(c) => f.write_str(&crate::gadget::gate_name(*c)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pin {
    pub gate: GateId,
    pub pin: u8,
}

impl Pin {
    pub const fn new(gate: GateId, pin: u8) -> Pin {
        Pin { gate, pin }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Wire {
    pub from: Pin,
    pub to: Pin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub name: String,
    pub kind: GateKind,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("gate {0} does not exist")]
    UnknownGate(GateId),
    #[error("pin {pin} of gate `{gate}` is out of range")]
    PinRange { gate: String, pin: u8 },
    #[error("input pin {pin} of gate `{gate}` is driven {count} times")]
    InPinDrivers { gate: String, pin: u8, count: usize },
    #[error("output pin {pin} of gate `{gate}` feeds {count} wires")]
    OutPinFanout { gate: String, pin: u8, count: usize },
    #[error("cycle through gate `{0}`")]
    Cycle(String),
    #[error("the circuit must have exactly one OUTPUT gate")]
    OutputCount,
    #[error("input list does not match the INPUT gates")]
    InputList,
    #[error("expected {expected} input bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A validated combinational circuit with a single output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    wires: Vec<Wire>,
    inputs: Vec<GateId>,
    output: GateId,
    /// Driver of every input pin, indexed by gate then pin.
    drivers: Vec<[Option<Pin>; 2]>,
    /// Consumer of every output pin.
    sinks: Vec<[Option<Pin>; 2]>,
}

impl Circuit {
    /// Checks arities, single drivers, single consumers and acyclicity.
    pub fn new(gates: Vec<Gate>, wires: Vec<Wire>, inputs: Vec<GateId>) -> Result<Circuit, CircuitError> {
        Self::build(gates, wires, inputs, true)
    }

    /// Like [`Circuit::new`], then drops gates that cannot reach the output.
    pub fn new_pruned(gates: Vec<Gate>, wires: Vec<Wire>, inputs: Vec<GateId>) -> Result<Circuit, CircuitError> {
        Ok(Self::build(gates, wires, inputs, false)?.pruned())
    }

    fn build(gates: Vec<Gate>, wires: Vec<Wire>, inputs: Vec<GateId>, strict: bool) -> Result<Circuit, CircuitError> {
        let n = gates.len();
        let mut drivers = vec![[None; 2]; n];
        let mut sinks = vec![[None; 2]; n];
        let mut din = vec![[0usize; 2]; n];
        let mut dout = vec![[0usize; 2]; n];
        for w in &wires {
            for p in [w.from, w.to] {
                if p.gate >= n {
                    return Err(CircuitError::UnknownGate(p.gate));
                }
            }
            let (f, t) = (&gates[w.from.gate], &gates[w.to.gate]);
            if w.from.pin as usize >= f.kind.out_arity() {
                return Err(CircuitError::PinRange { gate: f.name.clone(), pin: w.from.pin });
            }
            if w.to.pin as usize >= t.kind.in_arity() {
                return Err(CircuitError::PinRange { gate: t.name.clone(), pin: w.to.pin });
            }
            din[w.to.gate][w.to.pin as usize] += 1;
            dout[w.from.gate][w.from.pin as usize] += 1;
            drivers[w.to.gate][w.to.pin as usize] = Some(w.from);
            sinks[w.from.gate][w.from.pin as usize] = Some(w.to);
        }
        let outputs: Vec<GateId> = (0..n).filter(|&g| gates[g].kind == GateKind::Output).collect();
        if outputs.len() != 1 {
            return Err(CircuitError::OutputCount);
        }
        let mut declared: Vec<GateId> = (0..n).filter(|&g| gates[g].kind == GateKind::Input).collect();
        let mut listed = inputs.clone();
        declared.sort_unstable();
        listed.sort_unstable();
        listed.dedup();
        if declared != listed || listed.len() != inputs.len() {
            return Err(CircuitError::InputList);
        }
        for g in 0..n {
            let k = gates[g].kind;
            for p in 0..k.in_arity() {
                if din[g][p] != 1 {
                    return Err(CircuitError::InPinDrivers { gate: gates[g].name.clone(), pin: p as u8, count: din[g][p] });
                }
            }
            for p in 0..k.out_arity() {
                // Unused inputs are allowed; every other output pin feeds exactly one wire.
                let ok = dout[g][p] == 1 || (dout[g][p] == 0 && (k == GateKind::Input || !strict));
                if !ok {
                    return Err(CircuitError::OutPinFanout { gate: gates[g].name.clone(), pin: p as u8, count: dout[g][p] });
                }
            }
        }
        let c = Circuit { gates, wires, inputs, output: outputs[0], drivers, sinks };
        c.topo_order()?;
        Ok(c)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id]
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn inputs(&self) -> &[GateId] {
        &self.inputs
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn driver(&self, gate: GateId, pin: u8) -> Option<Pin> {
        self.drivers[gate].get(pin as usize).copied().flatten()
    }

    pub fn sink(&self, gate: GateId, pin: u8) -> Option<Pin> {
        self.sinks[gate].get(pin as usize).copied().flatten()
    }

    pub fn count(&self, pred: impl Fn(GateKind) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g.kind)).count()
    }

    /// Number of compute gates (everything except inputs, outputs, constants and identities).
    pub fn size(&self) -> usize {
        self.count(|k| !matches!(k, GateKind::Input | GateKind::Output | GateKind::Const(_) | GateKind::Id))
    }

    /// Gates in an order where every driver precedes its consumers.
    pub fn topo_order(&self) -> Result<Vec<GateId>, CircuitError> {
        let n = self.gates.len();
        let mut indeg: Vec<usize> = self.gates.iter().map(|g| g.kind.in_arity()).collect();
        let mut ready: Vec<GateId> = (0..n).rev().filter(|&g| indeg[g] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(g) = ready.pop() {
            order.push(g);
            for p in 0..self.gates[g].kind.out_arity() {
                if let Some(s) = self.sinks[g][p] {
                    indeg[s.gate] -= 1;
                    if indeg[s.gate] == 0 {
                        ready.push(s.gate);
                    }
                }
            }
        }
        if order.len() != n {
            let stuck = (0..n).find(|&g| indeg[g] > 0).expect("some gate is stuck");
            return Err(CircuitError::Cycle(self.gates[stuck].name.clone()));
        }
        Ok(order)
    }

    /// Value on every output pin for the given input bits.
    pub fn simulate(&self, bits: &[bool]) -> Result<Vec<[bool; 2]>, CircuitError> {
        if bits.len() != self.inputs.len() {
            return Err(CircuitError::LengthMismatch { expected: self.inputs.len(), got: bits.len() });
        }
        let mut val = vec![[false; 2]; self.gates.len()];
        for (i, &g) in self.inputs.iter().enumerate() {
            val[g][0] = bits[i];
        }
        for g in self.topo_order()? {
            let k = self.gates[g].kind;
            if k == GateKind::Input {
                continue;
            }
            let ins: Vec<bool> = (0..k.in_arity())
                .map(|p| {
                    let d = self.drivers[g][p].expect("validated");
                    val[d.gate][d.pin as usize]
                })
                .collect();
            val[g] = if k == GateKind::Output { [ins[0], false] } else { k.apply(&ins) };
        }
        Ok(val)
    }

    /// The output bit. Input bits are given in declaration order.
    pub fn evaluate(&self, bits: &[bool]) -> Result<bool, CircuitError> {
        Ok(self.simulate(bits)?[self.output][0])
    }

    /// `evaluate` on the bits of `x`, first input as the most significant bit.
    pub fn evaluate_index(&self, x: usize) -> bool {
        let n = self.inputs.len();
        let bits: Vec<bool> = (0..n).map(|i| x >> (n - 1 - i) & 1 == 1).collect();
        self.evaluate(&bits).expect("length matches")
    }

    /// Output over all inputs, row `x` being the bits of `x` MSB first.
    pub fn truth_table(&self) -> Vec<bool> {
        (0..1usize << self.inputs.len()).map(|x| self.evaluate_index(x)).collect()
    }

    /// Longest path length from a source to every gate.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.gates.len()];
        for g in self.topo_order().expect("validated") {
            let k = self.gates[g].kind;
            d[g] = (0..k.in_arity()).map(|p| d[self.drivers[g][p].expect("validated").gate] + 1).max().unwrap_or(0);
        }
        d
    }

    /// Copy without gates that cannot reach the output; inputs are always kept.
    pub fn pruned(&self) -> Circuit {
        let n = self.gates.len();
        let mut live = vec![false; n];
        let mut stack = vec![self.output];
        while let Some(g) = stack.pop() {
            if live[g] {
                continue;
            }
            live[g] = true;
            for p in 0..self.gates[g].kind.in_arity() {
                stack.push(self.drivers[g][p].expect("validated").gate);
            }
        }
        for &g in &self.inputs {
            live[g] = true;
        }
        // A live fanout with one dead branch becomes an identity.
        let mut b = Builder::default();
        let mut map: BTreeMap<GateId, GateId> = BTreeMap::new();
        for g in 0..n {
            if !live[g] {
                continue;
            }
            let mut kind = self.gates[g].kind;
            if kind == GateKind::Fanout {
                let used = (0..2).filter(|&p| self.sinks[g][p].is_some_and(|s| live[s.gate])).count();
                if used == 1 {
                    kind = GateKind::Id;
                }
            }
            map.insert(g, b.gate(self.gates[g].name.clone(), kind));
        }
        for w in &self.wires {
            if live[w.from.gate] && live[w.to.gate] {
                let mut from = Pin::new(map[&w.from.gate], w.from.pin);
                if self.gates[w.from.gate].kind == GateKind::Fanout && b.gates[from.gate].kind == GateKind::Id {
                    from.pin = 0;
                }
                b.wire(from, Pin::new(map[&w.to.gate], w.to.pin));
            }
        }
        let inputs = self.inputs.iter().map(|g| map[g]).collect();
        b.finish(inputs).expect("pruning preserves validity")
    }
}

/// Incremental construction of a [`Circuit`].
#[derive(Clone, Debug, Default)]
pub struct Builder {
    pub gates: Vec<Gate>,
    pub wires: Vec<Wire>,
}

impl Builder {
    pub fn gate(&mut self, name: impl Into<String>, kind: GateKind) -> GateId {
        self.gates.push(Gate { name: name.into(), kind });
        self.gates.len() - 1
    }

    pub fn wire(&mut self, from: Pin, to: Pin) {
        self.wires.push(Wire { from, to });
    }

    pub fn finish(self, inputs: Vec<GateId>) -> Result<Circuit, CircuitError> {
        Circuit::new(self.gates, self.wires, inputs)
    }
}

/// Signals in a circuit under construction by [`Expr`]-style helpers.
#[derive(Clone, Debug, Default)]
pub struct NetBuilder {
    b: Builder,
    inputs: Vec<GateId>,
    /// Output pins referenced so far and how many times.
    uses: BTreeMap<Pin, Vec<Pin>>,
}

impl NetBuilder {
    pub fn input(&mut self, name: &str) -> Pin {
        let g = self.b.gate(name, GateKind::Input);
        self.inputs.push(g);
        Pin::new(g, 0)
    }

    pub fn constant(&mut self, name: &str, v: bool) -> Pin {
        Pin::new(self.b.gate(name, GateKind::Const(v)), 0)
    }

    pub fn op(&mut self, name: &str, kind: GateKind, args: &[Pin]) -> Pin {
        let g = self.b.gate(name, kind);
        for (i, &a) in args.iter().enumerate() {
            self.uses.entry(a).or_default().push(Pin::new(g, i as u8));
        }
        Pin::new(g, 0)
    }

    /// Adds the OUTPUT gate and inserts fanout chains for signals used more than once.
    pub fn finish(mut self, out: Pin) -> Result<Circuit, CircuitError> {
        let o = self.b.gate("out", GateKind::Output);
        self.uses.entry(out).or_default().push(Pin::new(o, 0));
        let uses = core::mem::take(&mut self.uses);
        for (src, sinks) in uses {
            let name = self.b.gates[src.gate].name.clone();
            let mut cur = src;
            for (i, &t) in sinks.iter().enumerate() {
                if i + 1 == sinks.len() {
                    self.b.wire(cur, t);
                } else {
                    let f = self.b.gate(format!("{name}.fan{i}"), GateKind::Fanout);
                    self.b.wire(cur, Pin::new(f, 0));
                    self.b.wire(Pin::new(f, 0), t);
                    cur = Pin::new(f, 1);
                }
            }
        }
        Circuit::new_pruned(self.b.gates, self.b.wires, self.inputs)
    }
}

/// The three-input example whose output is 1 exactly on 010, 011, 101 and 111.
pub fn prime_circuit() -> Circuit {
    parse_netlist(PRIME_NETLIST).expect("builtin netlist parses")
}

pub const PRIME_NETLIST: &str = "\
in x
in y
in z
nx = NOT(x)
a = AND(nx, y)
b = AND(x, z)
o = OR(a, b)
out o
";

/// Random circuit with `inputs` inputs and `gates` two-input or NOT gates.
///
/// Every gate reads earlier signals; the last gate is the output.
pub fn random_circuit<R: rand::Rng>(rng: &mut R, inputs: usize, gates: usize) -> Circuit {
    let mut nb = NetBuilder::default();
    let mut sigs: Vec<Pin> = (0..inputs).map(|i| nb.input(&format!("x{i}"))).collect();
    if sigs.is_empty() {
        sigs.push(nb.constant("k", rng.gen()));
    }
    for i in 0..gates {
        let pick = |rng: &mut R, sigs: &Vec<Pin>| sigs[rng.gen_range(0..sigs.len())];
        let p = if rng.gen_ratio(1, 8) {
            let a = pick(rng, &sigs);
            nb.op(&format!("g{i}"), GateKind::Not, &[a])
        } else {
            let a = pick(rng, &sigs);
            let b = pick(rng, &sigs);
            let code = rng.gen_range(0..16u8);
            nb.op(&format!("g{i}"), GateKind::Table(code), &[a, b])
        };
        sigs.push(p);
    }
    let out = *sigs.last().expect("non-empty");
    nb.finish(out).expect("random circuit is valid")
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_netlist(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_truth_table() {
        let c = prime_circuit();
        let tt: Vec<bool> = (0..8).map(|x| c.evaluate_index(x)).collect();
        assert_eq!(tt, [false, false, true, true, false, true, false, true]);
        assert_eq!(c.count(|k| k == GateKind::Fanout), 1);
    }

    #[test]
    fn shared_operand_gets_fanout() {
        let c = parse_netlist("in x\no = NAND(x, x)\nout o\n").unwrap();
        assert_eq!(c.count(|k| k == GateKind::Fanout), 1);
        assert!(c.evaluate(&[false]).unwrap());
        assert!(!c.evaluate(&[true]).unwrap());
    }

    #[test]
    fn cycle_is_rejected() {
        let e = parse_netlist("in x\na = AND(x, b)\nb = NOT(a)\nout b\n").unwrap_err();
        assert!(matches!(e, NetlistError::Cycle(_)), "{e}");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_netlist("in x\n"), Err(NetlistError::NoOutput)));
        assert!(matches!(parse_netlist("in x\no = FOO(x)\nout o\n"), Err(NetlistError::UnknownOp { line: 2, .. })));
        assert!(matches!(parse_netlist("in x\no = AND(x)\nout o\n"), Err(NetlistError::Arity { .. })));
        assert!(matches!(parse_netlist("in x\nout y\n"), Err(NetlistError::Undefined { .. })));
        assert!(matches!(parse_netlist("in x\nin x\nout x\n"), Err(NetlistError::Duplicate { .. })));
    }

    #[test]
    fn wrong_input_length() {
        let c = prime_circuit();
        assert_eq!(c.evaluate(&[true]), Err(CircuitError::LengthMismatch { expected: 3, got: 1 }));
    }

    #[test]
    fn strict_validation_rejects_double_driver() {
        let mut b = Builder::default();
        let x = b.gate("x", GateKind::Input);
        let y = b.gate("y", GateKind::Input);
        let o = b.gate("o", GateKind::Output);
        b.wire(Pin::new(x, 0), Pin::new(o, 0));
        b.wire(Pin::new(y, 0), Pin::new(o, 0));
        assert!(matches!(b.finish(vec![x, y]), Err(CircuitError::InPinDrivers { .. })));
    }

    #[test]
    fn double_crossover_is_identity() {
        let mut b = Builder::default();
        let x = b.gate("x", GateKind::Input);
        let y = b.gate("y", GateKind::Input);
        let c1 = b.gate("c1", GateKind::Crossover);
        let c2 = b.gate("c2", GateKind::Crossover);
        let g = b.gate("g", GateKind::Table(0b0010));
        let o = b.gate("o", GateKind::Output);
        b.wire(Pin::new(x, 0), Pin::new(c1, 0));
        b.wire(Pin::new(y, 0), Pin::new(c1, 1));
        b.wire(Pin::new(c1, 0), Pin::new(c2, 0));
        b.wire(Pin::new(c1, 1), Pin::new(c2, 1));
        b.wire(Pin::new(c2, 0), Pin::new(g, 0));
        b.wire(Pin::new(c2, 1), Pin::new(g, 1));
        b.wire(Pin::new(g, 0), Pin::new(o, 0));
        let c = b.finish(vec![x, y]).unwrap();
        for v in 0..4usize {
            let bits = [v >> 1 & 1 == 1, v & 1 == 1];
            let vals = c.simulate(&bits).unwrap();
            assert_eq!(vals[c2][0], bits[0]);
            assert_eq!(vals[c2][1], bits[1]);
        }
    }

    #[test]
    fn netlist_round_trip() {
        let c = prime_circuit();
        let again = parse_netlist(&to_netlist(&c)).unwrap();
        assert_eq!(c.truth_table(), again.truth_table());
        let p = planarize(&c);
        let again = parse_netlist(&to_netlist(&p.circuit)).unwrap();
        assert_eq!(c.truth_table(), again.truth_table());
    }
}
