use std::path::Path;
use std::process::{Command, Output};

use mawatam_core::circuit::{prime_circuit, PRIME_NETLIST};
use mawatam_core::tilesets;

fn mawatam(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mawatam")).args(args).current_dir(dir).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn workdir() -> tempfile::TempDir {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("prime.ckt"), PRIME_NETLIST).unwrap();
    d
}

#[test]
fn run_prime_pictured_inputs() {
    let d = workdir();
    for ts in ["nand-nxor", "collatz"] {
        let o = mawatam(&["run", "--circuit", "prime.ckt", "--tileset", ts, "--input", "110"], d.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o), "output 0\n");
        let o = mawatam(&["run", "--circuit", "prime.ckt", "--tileset", ts, "--input", "111"], d.path());
        assert_eq!(stdout(&o), "output 1\n");
    }
}

#[test]
fn collatz_seventy_five() {
    let d = workdir();
    let o = mawatam(&["collatz", "--x", "75", "--steps", "7"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "16 (ternary 121)\n");
}

#[test]
fn missing_file_is_domain_error() {
    let d = workdir();
    let o = mawatam(&["simulate", "--maze", "missing.maze"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.maze"));
    assert!(stderr(&o).contains("No such file"));
}

#[test]
fn usage_errors_exit_two() {
    let d = workdir();
    assert_eq!(mawatam(&[], d.path()).status.code(), Some(2));
    assert_eq!(mawatam(&["run", "--circuit", "prime.ckt", "--input", "1x0"], d.path()).status.code(), Some(2));
    assert_eq!(mawatam(&["simulate", "--maze", "a", "--order", "sideways"], d.path()).status.code(), Some(2));
    assert_eq!(mawatam(&["render", "--maze", "a", "--cell-size", "3"], d.path()).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let d = workdir();
    let o = mawatam(&["run", "--circuit", "prime.ckt", "--input", "11"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("3"), "{}", stderr(&o));
    assert_eq!(mawatam(&["collatz", "--x", "0", "--steps", "1"], d.path()).status.code(), Some(1));
    assert_eq!(mawatam(&["simulate", "--maze", "prime.ckt"], d.path()).status.code(), Some(1));
    assert_eq!(mawatam(&["run", "--circuit", "prime.ckt", "--tileset", "nope", "--input", "1"], d.path()).status.code(), Some(1));
}

#[test]
fn compiled_maze_file_runs_every_input() {
    let d = workdir();
    let c = prime_circuit();
    for ts in ["nand-nxor", "collatz"] {
        let o = mawatam(&["compile", "--circuit", "prime.ckt", "--tileset", ts, "--out", "p.maze"], d.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains("crossovers 1"));
        for v in 0..8usize {
            let bits = format!("{v:03b}");
            let o = mawatam(&["run", "--maze", "p.maze", "--tileset", ts, "--input", &bits], d.path());
            assert_eq!(stdout(&o), format!("output {}\n", c.evaluate_index(v) as u8), "{ts} {bits}");
        }
    }
}

#[test]
fn output_is_reproducible_under_random_order() {
    let d = workdir();
    let args = ["run", "--circuit", "prime.ckt", "--tileset", "collatz", "--input", "101", "--order", "random", "--rng-seed", "9"];
    let a = mawatam(&args, d.path());
    let b = mawatam(&args, d.path());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a), "output 1\n");
}

#[test]
fn simulate_dump_and_render() {
    let d = workdir();
    let collatz = mawatam(&["collatz", "--x", "75", "--steps", "7", "--dump", "c.asm", "--svg", "c.svg"], d.path());
    assert_eq!(collatz.status.code(), Some(0));
    let o = mawatam(&["render", "--assembly", "c.asm", "--tileset", "collatz-ext"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains('#'));
    let svg = std::fs::read_to_string(d.path().join("c.svg")).unwrap();
    roxmltree::Document::parse(&svg).unwrap();
}

#[test]
fn simulate_with_file_tileset() {
    let d = workdir();
    std::fs::write(d.path().join("t.tiles"), mawatam::formats::write_tileset(&tilesets::collatz(false))).unwrap();
    let maze = "mawatam-maze v1\ncell 1 0\ncell 0 1\nglue 1 0 W 1\nglue 0 1 S 1\noutput 0 0 W\n";
    std::fs::write(d.path().join("one.maze"), maze).unwrap();
    let o = mawatam(&["simulate", "--maze", "one.maze", "--tileset", "file:t.tiles", "--ascii"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // N=1, E=1 is tile 4: S=0, W=2.
    assert_eq!(stdout(&o), "placed 1\nsteps 1\nnondeterminism none\nmismatches 0\noutput 2\n#.\n4#\n");
}

#[test]
fn arithmetic_commands() {
    let d = workdir();
    assert_eq!(stdout(&mawatam(&["erdos", "--n-max", "8"], d.path())), "0 2 8\n");
    assert_eq!(stdout(&mawatam(&["powers2", "--m", "4"], d.path())), "0 1 1\n1 2 2\n2 4 11\n3 8 22\n");
}

#[test]
fn gadget_commands() {
    let d = workdir();
    let o = mawatam(&["gadget", "validate", "--tileset", "nand-nxor", "--name", "gate-1110"], d.path());
    assert_eq!(stdout(&o), "gate-1110 ok tiles 6\n");
    let o = mawatam(&["gadget", "search", "--table", "0001", "--max-width", "2", "--max-height", "3", "--out", "and.gadget"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("found 2x3 tiles 6"));
    let o = mawatam(&["gadget", "validate", "--file", "and.gadget"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("ok tiles 6\n"));
}
