use std::sync::Arc;

use mawatam_core::circuit::{parse_netlist, prime_circuit, random_circuit, Circuit};
use mawatam_core::gadget::builtin_library;
use mawatam_core::layout::{compile, encode_input, read_output, CompiledMaze, LayoutError};
use mawatam_core::tilesets::{self, COLLATZ, NAND_NXOR};
use mawatam_core::{run_to_terminal, Assembly, RunConfig, TileSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits(x: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> (n - 1 - i) & 1 == 1).collect()
}

fn build(c: &Circuit, id: &str) -> (CompiledMaze, Arc<TileSet>) {
    let lib = builtin_library(id).unwrap();
    let m = compile(c, id, &lib).unwrap_or_else(|e| panic!("{id}: {e}"));
    (m, Arc::new(tilesets::builtin(id).unwrap()))
}

fn check_all(c: &Circuit, id: &str) {
    let (m, ts) = build(c, id);
    let n = c.inputs().len();
    for x in 0..1usize << n {
        let (out, _, rep) = m.run(&ts, &bits(x, n), &RunConfig::default()).unwrap_or_else(|e| panic!("{id} {x}: {e}"));
        assert!(rep.nondeterminism.is_none(), "{id} {x}: {:?}", rep.nondeterminism);
        assert_eq!(out, c.evaluate_index(x), "{id} input {x:0n$b}\n{c}");
    }
}

#[test]
fn prime_nand_nxor() {
    check_all(&prime_circuit(), NAND_NXOR);
}

#[test]
fn prime_collatz() {
    check_all(&prime_circuit(), COLLATZ);
}

#[test]
fn constant_circuit_has_no_inputs() {
    let c = parse_netlist("const k 1\nout k\n").unwrap();
    for id in [NAND_NXOR, COLLATZ] {
        let (m, ts) = build(&c, id);
        assert!(m.input_sites.is_empty());
        assert_eq!(encode_input(&m, &[]).unwrap().cells(), m.maze.cells());
        assert!(m.evaluate(&ts, &[]).unwrap());
    }
}

#[test]
fn encode_input_checks_length() {
    let (m, _) = build(&prime_circuit(), NAND_NXOR);
    assert_eq!(encode_input(&m, &[true]), Err(LayoutError::LengthMismatch { expected: 3, got: 1 }));
    let e = encode_input(&m, &[true, true, false]).unwrap();
    assert_eq!(e.cells().len(), m.maze.cells().len() + 3);
}

#[test]
fn sabotaged_seed_never_reaches_output() {
    let (mut m, ts) = build(&prime_circuit(), NAND_NXOR);
    // Block the first wire cell west of every input.
    for s in m.input_sites.clone() {
        let w = mawatam_core::Coord::new(s.x - 1, s.y);
        m.maze.remove_cell(w.step(mawatam_core::Side::N));
        m.maze.add_cell(w).ok();
    }
    let enc = encode_input(&m, &[true, true, true]).unwrap();
    let (term, _) = run_to_terminal(Assembly::new(enc, ts), &RunConfig::default()).unwrap();
    assert!(matches!(read_output(&term, &m), Err(LayoutError::OutputNotReached(_))));
}

#[test]
fn random_circuits_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let c = random_circuit(&mut rng, 3, 6);
        check_all(&c, NAND_NXOR);
        check_all(&c, COLLATZ);
    }
}

fn routed(c: &Circuit, id: &str) -> mawatam_core::layout::RoutedLayout {
    let plan = mawatam_core::circuit::layer(&mawatam_core::circuit::planarize(c));
    mawatam_core::layout::route(&plan, &builtin_library(id).unwrap()).unwrap()
}

#[test]
fn single_wire_is_one_straight_run() {
    let c = parse_netlist("in x\nout x\n").unwrap();
    for id in [NAND_NXOR, COLLATZ] {
        let r = routed(&c, id);
        assert_eq!(r.routes.len(), 1);
        let segs = r.routes[0].segments();
        assert_eq!(segs.len(), 1, "{id}");
        assert_eq!(segs[0].axis, mawatam_core::gadget::Axis::H);
        assert!(r.routes[0].corrections.is_empty());
        check_all(&c, id);
    }
}

#[test]
fn nand_odd_vertical_gets_one_not_after_the_turn() {
    use mawatam_core::gadget::kit::CellKind;
    use mawatam_core::layout::Correction;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = 0;
    for _ in 0..20 {
        let r = routed(&random_circuit(&mut rng, 4, 8), NAND_NXOR);
        for rt in &r.routes {
            let segs = rt.segments();
            if segs.len() != 3 || segs[1].len % 2 == 0 || rt.negated() {
                continue;
            }
            let sw = rt.cells.iter().position(|p| p.kind == CellKind::SW).unwrap();
            assert_eq!(rt.corrections, vec![Correction::Not(rt.cells[sw + 1].at)]);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn collatz_parity_jog_is_a_buffer() {
    use mawatam_core::layout::Correction;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = 0;
    for _ in 0..40 {
        let r = routed(&random_circuit(&mut rng, 4, 8), COLLATZ);
        for rt in &r.routes {
            if let [Correction::Buffer(at)] = rt.corrections[..] {
                let segs = rt.segments();
                assert_eq!(segs.len(), 3);
                assert_eq!(segs[1].len, 1);
                assert!(rt.cells.iter().any(|p| p.at == at));
                seen += 1;
            }
            assert!(rt.corrections.len() <= 1);
        }
    }
    assert!(seen > 0);
}

#[test]
fn accounting_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let c = random_circuit(&mut rng, 5, 12);
        for (id, gate_max, cross) in [(NAND_NXOR, 6, 34), (COLLATZ, 14, 33)] {
            let (m, _) = build(&c, id);
            assert!(m.accounting.max_gate_tiles() <= gate_max);
            assert!(m.accounting.crossovers.iter().all(|&t| t == cross));
        }
    }
}
