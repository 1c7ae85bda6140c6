use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::geom::{Coord, EdgeSite, Rect, Side};
use crate::glue::GlueLabel;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MazeError {
    #[error("cell {0} is occupied twice")]
    Overlap(Coord),
    #[error("glue on edge {0} is not on the exterior of a seed cell")]
    NotExterior(EdgeSite),
    #[error("input site {0} is occupied")]
    InputOccupied(Coord),
    #[error("input site {0} listed twice")]
    DuplicateInput(Coord),
    #[error("output edge {0} carries a seed glue")]
    OutputHasGlue(EdgeSite),
}

/// Seed structure: occupied cells with glues on their exterior edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Maze {
    cells: BTreeSet<Coord>,
    glues: BTreeMap<EdgeSite, GlueLabel>,
    input_sites: Vec<Coord>,
    output_edge: Option<EdgeSite>,
}

impl Maze {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cells(&self) -> &BTreeSet<Coord> {
        &self.cells
    }

    pub fn glues(&self) -> &BTreeMap<EdgeSite, GlueLabel> {
        &self.glues
    }

    pub fn input_sites(&self) -> &[Coord] {
        &self.input_sites
    }

    pub fn output_edge(&self) -> Option<EdgeSite> {
        self.output_edge
    }

    pub fn is_seed(&self, c: Coord) -> bool {
        self.cells.contains(&c)
    }

    pub fn add_cell(&mut self, c: Coord) -> Result<(), MazeError> {
        if self.cells.insert(c) {
            Ok(())
        } else {
            Err(MazeError::Overlap(c))
        }
    }

    pub fn remove_cell(&mut self, c: Coord) -> bool {
        let removed = self.cells.remove(&c);
        if removed {
            for s in Side::ALL {
                let e = EdgeSite::new(c, s);
                if !self.is_seed(c.step(s)) {
                    self.glues.remove(&e);
                }
            }
        }
        removed
    }

    /// Sets the glue on side `side` of seed cell `cell`; a null label clears it.
    pub fn set_glue(&mut self, cell: Coord, side: Side, label: GlueLabel) {
        let e = EdgeSite::new(cell, side);
        if label.is_null() {
            self.glues.remove(&e);
        } else {
            self.glues.insert(e, label);
        }
    }

    pub fn glue(&self, edge: EdgeSite) -> GlueLabel {
        self.glues.get(&edge).copied().unwrap_or(GlueLabel::NULL)
    }

    pub fn glue_of(&self, cell: Coord, side: Side) -> GlueLabel {
        self.glue(EdgeSite::new(cell, side))
    }

    pub fn push_input_site(&mut self, c: Coord) {
        self.input_sites.push(c);
    }

    pub fn set_input_sites(&mut self, sites: Vec<Coord>) {
        self.input_sites = sites;
    }

    pub fn set_output_edge(&mut self, e: Option<EdgeSite>) {
        self.output_edge = e;
    }

    pub fn bbox(&self) -> Option<Rect> {
        Rect::from_points(self.cells.iter().copied().chain(self.input_sites.iter().copied()))
    }

    pub fn validate(&self) -> Result<(), MazeError> {
        for e in self.glues.keys() {
            let [(a, _), (b, _)] = e.cells();
            if self.is_seed(a) == self.is_seed(b) {
                return Err(MazeError::NotExterior(*e));
            }
        }
        let mut seen = BTreeSet::new();
        for &c in &self.input_sites {
            if self.is_seed(c) {
                return Err(MazeError::InputOccupied(c));
            }
            if !seen.insert(c) {
                return Err(MazeError::DuplicateInput(c));
            }
        }
        if let Some(o) = self.output_edge {
            if !self.glue(o).is_null() {
                return Err(MazeError::OutputHasGlue(o));
            }
        }
        Ok(())
    }

    pub fn translated(&self, by: Coord) -> Maze {
        Maze {
            cells: self.cells.iter().map(|c| *c + by).collect(),
            glues: self.glues.iter().map(|(e, g)| (e.translate(by), *g)).collect(),
            input_sites: self.input_sites.iter().map(|c| *c + by).collect(),
            output_edge: self.output_edge.map(|e| e.translate(by)),
        }
    }

    /// Adds the cells and glues of `other`; colliding cells are an error.
    pub fn merge(&mut self, other: &Maze) -> Result<(), MazeError> {
        if let Some(c) = other.cells.iter().find(|c| self.cells.contains(c)) {
            return Err(MazeError::Overlap(*c));
        }
        self.cells.extend(other.cells.iter().copied());
        self.glues.extend(other.glues.iter().map(|(e, g)| (*e, *g)));
        self.input_sites.extend(other.input_sites.iter().copied());
        if self.output_edge.is_none() {
            self.output_edge = other.output_edge;
        }
        Ok(())
    }
}
