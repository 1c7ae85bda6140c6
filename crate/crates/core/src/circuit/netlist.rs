//! Line-oriented netlist text format.
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Circuit, CircuitError, GateKind, NetBuilder, Pin};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NetlistError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: undefined signal `{name}`")]
    Undefined { line: usize, name: String },
    #[error("line {line}: `{name}` is defined twice")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: unknown operation `{op}`")]
    UnknownOp { line: usize, op: String },
    #[error("line {line}: {op} takes {expected} argument(s), got {got}")]
    Arity { line: usize, op: String, expected: usize, got: usize },
    #[error("cycle detected through `{0}`")]
    Cycle(String),
    #[error("netlist has no `out` line")]
    NoOutput,
    #[error("line {line}: only one `out` line is supported")]
    MultipleOutputs { line: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Debug)]
enum Def {
    Input,
    Const(bool),
    Op { kind: GateKind, args: Vec<String> },
}

fn valid_name(s: &str) -> bool {
    let mut it = s.chars();
    matches!(it.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && it.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

fn parse_op(line: usize, rhs: &str) -> Result<(String, Vec<String>), NetlistError> {
    let err = |msg: &str| NetlistError::Parse { line, msg: msg.into() };
    let open = rhs.find('(').ok_or_else(|| err("expected `OP(args)`"))?;
    let inner = rhs[open + 1..].strip_suffix(')').ok_or_else(|| err("missing `)`"))?;
    let op = rhs[..open].trim().to_string();
    let args: Vec<String> = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|a| a.trim().to_string()).collect()
    };
    for a in &args {
        if !valid_name(a) {
            return Err(err(&format!("bad signal name `{a}`")));
        }
    }
    Ok((op, args))
}

/// Parses the netlist format: `in <name>`, `const <name> <0|1>`, `<name> = <OP>(<args>)`,
/// `out <name>`. `#` starts a comment. Signals used more than once get fanout gates.
pub fn parse_netlist(text: &str) -> Result<Circuit, NetlistError> {
    let mut defs: BTreeMap<String, (usize, Def)> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut inputs: Vec<String> = Vec::new();
    let mut out: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: &str| NetlistError::Parse { line, msg: msg.into() };
        let words: Vec<&str> = body.split_whitespace().collect();
        let (name, def) = match words[0] {
            "in" if words.len() == 2 => {
                inputs.push(words[1].to_string());
                (words[1].to_string(), Def::Input)
            }
            "const" if words.len() == 3 => {
                let v = match words[2] {
                    "0" => false,
                    "1" => true,
                    _ => return Err(err("constant must be 0 or 1")),
                };
                (words[1].to_string(), Def::Const(v))
            }
            "out" if words.len() == 2 => {
                if out.is_some() {
                    return Err(NetlistError::MultipleOutputs { line });
                }
                out = Some((line, words[1].to_string()));
                continue;
            }
            "in" | "const" | "out" => return Err(err(&format!("malformed `{}` line", words[0]))),
            _ => {
                let (lhs, rhs) = body.split_once('=').ok_or_else(|| err("expected `name = OP(args)`"))?;
                let lhs = lhs.trim();
                let (op, args) = parse_op(line, rhs.trim())?;
                let kind = match op.as_str() {
                    "NOT" => GateKind::Not,
                    "ID" => GateKind::Id,
                    o => GateKind::table(o).ok_or_else(|| NetlistError::UnknownOp { line, op: op.clone() })?,
                };
                if args.len() != kind.in_arity() {
                    return Err(NetlistError::Arity { line, op, expected: kind.in_arity(), got: args.len() });
                }
                (lhs.to_string(), Def::Op { kind, args })
            }
        };
        if !valid_name(&name) {
            return Err(err(&format!("bad signal name `{name}`")));
        }
        if defs.contains_key(&name) {
            return Err(NetlistError::Duplicate { line, name });
        }
        order.push(name.clone());
        defs.insert(name, (line, def));
    }
    let (out_line, out_name) = out.ok_or(NetlistError::NoOutput)?;
    for (line, def) in defs.values() {
        if let Def::Op { args, .. } = def {
            for a in args {
                if !defs.contains_key(a) {
                    return Err(NetlistError::Undefined { line: *line, name: a.clone() });
                }
            }
        }
    }
    if !defs.contains_key(&out_name) {
        return Err(NetlistError::Undefined { line: out_line, name: out_name });
    }

    // Depth-first over every definition: 1 = on the stack, 2 = done.
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    let mut post: Vec<&str> = Vec::new();
    for root in &order {
        let mut stack: Vec<(&str, usize)> = alloc::vec![(root.as_str(), 0)];
        while let Some(&mut (name, ref mut next)) = stack.last_mut() {
            if *next == 0 {
                match state.get(name) {
                    Some(2) => {
                        stack.pop();
                        continue;
                    }
                    Some(1) => return Err(NetlistError::Cycle(name.to_string())),
                    _ => {}
                }
                state.insert(name, 1);
            }
            let args: &[String] = match &defs[name].1 {
                Def::Op { args, .. } => args,
                _ => &[],
            };
            if *next < args.len() {
                let a = args[*next].as_str();
                *next += 1;
                match state.get(a) {
                    Some(1) => return Err(NetlistError::Cycle(a.to_string())),
                    Some(2) => {}
                    _ => stack.push((a, 0)),
                }
            } else {
                state.insert(name, 2);
                post.push(name);
                stack.pop();
            }
        }
    }

    // Only definitions feeding the output become gates; inputs always do.
    let mut live: BTreeMap<&str, bool> = BTreeMap::new();
    let mut todo = alloc::vec![out_name.as_str()];
    while let Some(n) = todo.pop() {
        if live.insert(n, true).is_some() {
            continue;
        }
        if let Def::Op { args, .. } = &defs[n].1 {
            todo.extend(args.iter().map(|a| a.as_str()));
        }
    }
    let mut nb = NetBuilder::default();
    let mut pins: BTreeMap<&str, Pin> = BTreeMap::new();
    for name in &inputs {
        pins.insert(name, nb.input(name));
    }
    for name in post {
        if !live.contains_key(name) || pins.contains_key(name) {
            continue;
        }
        let p = match &defs[name].1 {
            Def::Input => unreachable!("inputs are created first"),
            Def::Const(v) => nb.constant(name, *v),
            Def::Op { kind, args } => {
                let a: Vec<Pin> = args.iter().map(|a| pins[a.as_str()]).collect();
                nb.op(name, *kind, &a)
            }
        };
        pins.insert(name, p);
    }
    Ok(nb.finish(pins[out_name.as_str()])?)
}

fn op_name(kind: GateKind) -> String {
    match kind {
        GateKind::Not => "NOT".into(),
        GateKind::Id => "ID".into(),
        GateKind::Table(c) => match c {
            0b0001 => "AND".into(),
            0b0111 => "OR".into(),
            0b0110 => "XOR".into(),
            0b1110 => "NAND".into(),
            0b1000 => "NOR".into(),
            0b1001 => "NXOR".into(),
            c => format!("TT{c:04b}"),
        },
        k => unreachable!("{k} has no netlist operation"),
    }
}

/// Writes a circuit back as a netlist. Fanouts and crossovers become signal aliases.
pub fn to_netlist(c: &Circuit) -> String {
    let mut names: BTreeMap<Pin, String> = BTreeMap::new();
    let mut out = String::new();
    let mut taken: BTreeMap<String, usize> = BTreeMap::new();
    let mut fresh = |base: &str| -> String {
        let base = if valid_name(base) { base.to_string() } else { "s".to_string() };
        let k = taken.entry(base.clone()).or_insert(0);
        *k += 1;
        if *k == 1 {
            base
        } else {
            format!("{base}_{k}")
        }
    };
    for &g in c.inputs() {
        let n = fresh(&c.gate(g).name);
        out += &format!("in {n}\n");
        names.insert(Pin::new(g, 0), n);
    }
    for g in c.topo_order().expect("valid circuit") {
        let gate = c.gate(g);
        let arg = |p: u8| names[&c.driver(g, p).expect("driven")].clone();
        match gate.kind {
            GateKind::Input => {}
            GateKind::Output => out += &format!("out {}\n", arg(0)),
            GateKind::Const(v) => {
                let n = fresh(&gate.name);
                out += &format!("const {n} {}\n", v as u8);
                names.insert(Pin::new(g, 0), n);
            }
            GateKind::Fanout => {
                let a = arg(0);
                names.insert(Pin::new(g, 0), a.clone());
                names.insert(Pin::new(g, 1), a);
            }
            GateKind::Crossover => {
                let (a, b) = (arg(0), arg(1));
                names.insert(Pin::new(g, 0), b);
                names.insert(Pin::new(g, 1), a);
            }
            k => {
                let args: Vec<String> = (0..k.in_arity() as u8).map(arg).collect();
                let n = fresh(&gate.name);
                out += &format!("{n} = {}({})\n", op_name(k), args.join(", "));
                names.insert(Pin::new(g, 0), n);
            }
        }
    }
    out
}
