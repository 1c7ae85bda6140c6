//! Layered drawing with crossover insertion.
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{Builder, Circuit, GateId, GateKind, Pin};

/// A circuit whose gates are arranged in layers so that every wire joins adjacent layers
/// and no two wires between the same layers cross.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarCircuit {
    pub circuit: Circuit,
    /// Gates of each layer, top to bottom.
    pub layers: Vec<Vec<GateId>>,
    pub crossovers: usize,
}

/// Layer `i` sits at x-coordinate `-i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredPlan {
    pub circuit: Circuit,
    pub layers: Vec<Vec<GateId>>,
    /// `(layer, index within layer)` of every gate.
    pub position: Vec<(usize, usize)>,
}

impl LayeredPlan {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn x_of(&self, layer: usize) -> i32 {
        -(layer as i32)
    }
}

/// Extracts the layered plan of a planarised circuit.
pub fn layer(p: &PlanarCircuit) -> LayeredPlan {
    let mut position = vec![(usize::MAX, 0); p.circuit.gates().len()];
    for (i, l) in p.layers.iter().enumerate() {
        for (j, &g) in l.iter().enumerate() {
            position[g] = (i, j);
        }
    }
    LayeredPlan { circuit: p.circuit.clone(), layers: p.layers.clone(), position }
}

/// Mean of integer keys, compared exactly.
#[derive(Clone, Copy, Debug)]
struct Mean {
    sum: i64,
    count: i64,
}

impl Mean {
    fn cmp(&self, o: &Mean) -> Ordering {
        (self.sum * o.count.max(1)).cmp(&(o.sum * self.count.max(1)))
    }
}

struct Track {
    src: Pin,
    key: (usize, u8),
    sink: Pin,
}

/// Layers by longest path, identity gates on long wires, barycentric ordering, and odd-even
/// transposition sorting with crossover gates wherever wires between two layers cross.
pub fn planarize(circuit: &Circuit) -> PlanarCircuit {
    let c = circuit.pruned();
    let depth = c.depths();

    // Copy gates, then split every wire spanning more than one layer with identities.
    let mut b = Builder::default();
    for g in c.gates() {
        b.gate(g.name.clone(), g.kind);
    }
    let mut lay: Vec<usize> = depth.clone();
    for w in c.wires() {
        let (d0, d1) = (depth[w.from.gate], depth[w.to.gate]);
        let mut cur = w.from;
        for d in d0 + 1..d1 {
            let id = b.gate(alloc::format!("{}.id{d}", c.gate(w.from.gate).name), GateKind::Id);
            lay.push(d);
            b.wire(cur, Pin::new(id, 0));
            cur = Pin::new(id, 0);
        }
        b.wire(cur, w.to);
    }
    let inputs = c.inputs().to_vec();
    let expanded = b.clone().finish(inputs.clone()).expect("identity insertion keeps validity");
    let m = expanded.gates().len();
    let nlayers = lay.iter().copied().max().unwrap_or(0) + 1;

    // Depth-first post-order from the output, in-pins in order.
    let mut rank = vec![usize::MAX; m];
    let mut next = 0;
    let mut stack = vec![(expanded.output(), 0usize)];
    while let Some(&mut (g, ref mut p)) = stack.last_mut() {
        if *p < expanded.gate(g).kind.in_arity() {
            let d = expanded.driver(g, *p as u8).expect("validated").gate;
            *p += 1;
            if rank[d] == usize::MAX {
                stack.push((d, 0));
            }
        } else {
            stack.pop();
            if rank[g] == usize::MAX {
                rank[g] = next;
                next += 1;
            }
        }
    }
    for g in 0..m {
        if rank[g] == usize::MAX {
            rank[g] = next;
            next += 1;
        }
    }

    let mut layers: Vec<Vec<GateId>> = vec![Vec::new(); nlayers];
    for g in 0..m {
        layers[lay[g]].push(g);
    }
    let mut pos = vec![0usize; m];
    let in_index = |g: GateId| inputs.iter().position(|&i| i == g).unwrap_or(usize::MAX);
    layers[0].sort_by_key(|&g| (in_index(g), rank[g]));
    for (j, &g) in layers[0].iter().enumerate() {
        pos[g] = j;
    }
    for i in 1..nlayers {
        let key = |g: GateId| {
            let k = expanded.gate(g).kind.in_arity();
            let mut mean = Mean { sum: 0, count: k as i64 };
            for p in 0..k {
                let d = expanded.driver(g, p as u8).expect("validated");
                mean.sum += (pos[d.gate] * 4 + d.pin as usize) as i64;
            }
            mean
        };
        let mut l = core::mem::take(&mut layers[i]);
        l.sort_by(|&a, &b| key(a).cmp(&key(b)).then(rank[a].cmp(&rank[b])));
        for (j, &g) in l.iter().enumerate() {
            pos[g] = j;
        }
        layers[i] = l;
    }

    // Rebuild with crossover sublayers between every pair of adjacent layers.
    let mut out = Builder::default();
    for g in expanded.gates() {
        out.gate(g.name.clone(), g.kind);
    }
    let mut final_layers: Vec<Vec<GateId>> = vec![layers[0].clone()];
    let mut crossovers = 0;
    for i in 0..nlayers - 1 {
        let mut tracks: Vec<Track> = Vec::new();
        for &g in &layers[i] {
            for p in 0..expanded.gate(g).kind.out_arity() as u8 {
                if let Some(s) = expanded.sink(g, p) {
                    tracks.push(Track { src: Pin::new(g, p), key: (pos[s.gate], s.pin), sink: s });
                }
            }
        }
        let mut parity = 0;
        let mut idle = 0;
        while idle < 2 {
            let swaps: Vec<usize> =
                (parity..tracks.len().saturating_sub(1)).step_by(2).filter(|&j| tracks[j].key > tracks[j + 1].key).collect();
            parity ^= 1;
            if swaps.is_empty() {
                idle += 1;
                continue;
            }
            idle = 0;
            let mut sub = Vec::new();
            let mut j = 0;
            while j < tracks.len() {
                if swaps.contains(&j) {
                    let x = out.gate(alloc::format!("x{crossovers}"), GateKind::Crossover);
                    crossovers += 1;
                    out.wire(tracks[j].src, Pin::new(x, 0));
                    out.wire(tracks[j + 1].src, Pin::new(x, 1));
                    tracks.swap(j, j + 1);
                    tracks[j].src = Pin::new(x, 0);
                    tracks[j + 1].src = Pin::new(x, 1);
                    sub.push(x);
                    j += 2;
                } else {
                    let id = out.gate(alloc::format!("pass{}", out.gates.len()), GateKind::Id);
                    out.wire(tracks[j].src, Pin::new(id, 0));
                    tracks[j].src = Pin::new(id, 0);
                    sub.push(id);
                    j += 1;
                }
            }
            final_layers.push(sub);
        }
        for t in &tracks {
            out.wire(t.src, t.sink);
        }
        final_layers.push(layers[i + 1].clone());
    }
    let circuit = out.finish(inputs).expect("crossover insertion keeps validity");
    PlanarCircuit { circuit, layers: final_layers, crossovers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_netlist, prime_circuit};

    fn check_planar(p: &PlanarCircuit) {
        let plan = layer(p);
        for w in p.circuit.wires() {
            let (a, b) = (plan.position[w.from.gate], plan.position[w.to.gate]);
            assert_eq!(a.0 + 1, b.0, "wire must join adjacent layers");
        }
        for w in p.circuit.wires() {
            for v in p.circuit.wires() {
                let (a0, b0) = (plan.position[w.from.gate], plan.position[v.from.gate]);
                if a0.0 != b0.0 {
                    continue;
                }
                let s = (a0.1, w.from.pin).cmp(&(b0.1, v.from.pin));
                let (a1, b1) = (plan.position[w.to.gate], plan.position[v.to.gate]);
                let t = (a1.1, w.to.pin).cmp(&(b1.1, v.to.pin));
                assert_eq!(s, t, "wires cross");
            }
        }
    }

    #[test]
    fn prime_has_one_crossover() {
        let c = prime_circuit();
        let p = planarize(&c);
        assert_eq!(p.crossovers, 1);
        check_planar(&p);
        assert_eq!(c.truth_table(), p.circuit.truth_table());
    }

    #[test]
    fn swap_pattern_needs_one_crossover() {
        let c = parse_netlist("in x\nin y\no = TT0010(y, x)\nout o\n").unwrap();
        let p = planarize(&c);
        assert_eq!(p.crossovers, 1);
        check_planar(&p);
    }

    #[test]
    fn planar_input_unchanged() {
        let c = parse_netlist("in x\nin y\no = AND(x, y)\nout o\n").unwrap();
        let p = planarize(&c);
        assert_eq!(p.crossovers, 0);
        assert_eq!(p.circuit.gates().len(), c.gates().len());
        assert_eq!(layer(&p).depth(), 3);
    }

    #[test]
    fn single_wire_two_layers() {
        let c = parse_netlist("in x\nout x\n").unwrap();
        assert_eq!(layer(&planarize(&c)).depth(), 2);
    }

    #[test]
    fn constants_only_output_in_layer_one() {
        let c = parse_netlist("const k 1\nout k\n").unwrap();
        let plan = layer(&planarize(&c));
        assert_eq!(plan.position[plan.circuit.output()].0, 1);
    }
}
