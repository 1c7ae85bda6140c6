//! Order-independence checks.
use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::assembly::{run_to_terminal, Assembly, Nondeterminism, RunConfig, RunError};
use crate::geom::Coord;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfluenceError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("nondeterministic choice at {} under policy {policy}", .at.pos)]
    Nondeterministic { policy: usize, at: Nondeterminism },
    #[error("random order {0} reached a different terminal assembly")]
    Diverged(u64),
    #[error("state space exceeds {0} assemblies")]
    TooManyStates(usize),
}

/// Runs raster plus one random order per seed; all must agree and stay directed.
pub fn check_orders(asm: &Assembly, seeds: impl IntoIterator<Item = u64>, max_steps: usize) -> Result<Assembly, ConfluenceError> {
    let cfg = RunConfig { max_steps, ..RunConfig::default() };
    let (base, r) = run_to_terminal(asm.clone(), &cfg)?;
    if let Some(at) = r.nondeterminism {
        return Err(ConfluenceError::Nondeterministic { policy: 0, at });
    }
    for (k, seed) in seeds.into_iter().enumerate() {
        let cfg = RunConfig { max_steps, ..RunConfig::random(seed) };
        let (t, r) = run_to_terminal(asm.clone(), &cfg)?;
        if let Some(at) = r.nondeterminism {
            return Err(ConfluenceError::Nondeterministic { policy: k + 1, at });
        }
        if !t.same_placement(&base) {
            return Err(ConfluenceError::Diverged(seed));
        }
    }
    Ok(base)
}

#[derive(Clone, Debug)]
pub struct Exploration {
    /// Distinct terminal assemblies reachable under some order.
    pub terminals: Vec<Assembly>,
    pub states: usize,
    /// Some reachable position admitted two tile types.
    pub branching: bool,
}

/// Breadth-first search over every attachment order.
pub fn explore_all_orders(asm: &Assembly, max_states: usize) -> Result<Exploration, ConfluenceError> {
    let mut seen: BTreeSet<Vec<(Coord, u16)>> = BTreeSet::new();
    let key = |a: &Assembly| {
        let mut v: Vec<(Coord, u16)> = a.trace().to_vec();
        v.sort();
        v
    };
    let mut queue = VecDeque::new();
    seen.insert(key(asm));
    queue.push_back(asm.clone());
    let mut out = Exploration { terminals: Vec::new(), states: 0, branching: false };
    while let Some(a) = queue.pop_front() {
        out.states += 1;
        let frontier = a.frontier();
        if frontier.is_empty() {
            if !out.terminals.iter().any(|t| t.same_placement(&a)) {
                out.terminals.push(a);
            }
            continue;
        }
        for c in frontier {
            let cands = a.attachable_tiles(c);
            if cands.len() > 1 {
                out.branching = true;
            }
            for t in cands {
                let next = a.attach(c, t).expect("frontier candidate attaches");
                if seen.insert(key(&next)) {
                    if seen.len() > max_states {
                        return Err(ConfluenceError::TooManyStates(max_states));
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Side;
    use crate::glue::GlueLabel;
    use crate::maze::Maze;
    use crate::tilesets::{collatz, nand_nxor};

    #[test]
    fn small_square_unique_terminal() {
        // 3x3 north/east L seed for the Collatz set.
        let mut m = Maze::new();
        for x in 0..3 {
            m.add_cell(Coord::new(x, 3)).unwrap();
            m.set_glue(Coord::new(x, 3), Side::S, GlueLabel::digit((x % 2) as u8));
        }
        for y in 0..3 {
            m.add_cell(Coord::new(3, y)).unwrap();
            m.set_glue(Coord::new(3, y), Side::W, GlueLabel::digit(y as u8));
        }
        let a = Assembly::new(m, collatz(false));
        let ex = explore_all_orders(&a, 100_000).unwrap();
        assert_eq!(ex.terminals.len(), 1);
        assert!(!ex.branching);
        let raster = check_orders(&a, 0..20, 1000).unwrap();
        assert!(ex.terminals[0].same_placement(&raster));
        assert_eq!(raster.placed_count(), 9);
    }

    #[test]
    fn branching_detected() {
        let mut m = Maze::new();
        m.add_cell(Coord::new(0, 1)).unwrap();
        m.add_cell(Coord::new(-1, 0)).unwrap();
        m.set_glue(Coord::new(0, 1), Side::S, GlueLabel::digit(0));
        m.set_glue(Coord::new(-1, 0), Side::E, GlueLabel::digit(0));
        let ex = explore_all_orders(&Assembly::new(m.clone(), collatz(false)), 100).unwrap();
        assert!(ex.branching);
        assert_eq!(ex.terminals.len(), 2);
        assert!(check_orders(&Assembly::new(m, nand_nxor()), 0..3, 10).is_ok());
    }
}
