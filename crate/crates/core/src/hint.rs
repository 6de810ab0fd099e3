//! Next-move suggestions for a partially filled board.

use crate::counting::complete_assignment;
use crate::error::{Error, Result};
use crate::graph::build_graph_sorting;
use crate::model::{Cell, SortingPuzzle};
use crate::repair::{nearest_solvable, RepairResult};
use crate::solvability::is_solvable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hint {
    /// Put `value`, the smallest value not yet on the board, at `cell`.
    /// `forced` is set when no other empty cell can take it.
    Place {
        cell: Cell,
        value: u32,
        forced: bool,
    },
    /// Every cell is filled.
    Complete,
    /// The placements cannot be extended to a solution.
    NoCompletion,
    /// The labelling itself has no solution; the nearest solvable one.
    Unsolvable(RepairResult),
}

/// Suggests the next placement. The smallest missing value goes to the
/// first empty cell in row-major order that still admits a completion, so
/// on an empty board the hints replay the minimum topological order.
pub fn next_hint(p: &SortingPuzzle, board: &[Vec<Option<u32>>]) -> Result<Hint> {
    let n = p.n();
    if board.len() != n {
        return Err(Error::DimensionMismatch {
            puzzle: n,
            grid: board.len(),
        });
    }
    if let Some(row) = board.iter().find(|r| r.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: row.len(),
        });
    }
    if !is_solvable(p) {
        return Ok(Hint::Unsolvable(nearest_solvable(p)));
    }
    let mut fixed: Vec<Option<u32>> = board.iter().flatten().copied().collect();
    let total = (n * n) as u32;
    let mut present = vec![false; total as usize + 1];
    for &v in fixed.iter().flatten() {
        if v == 0 || v > total || std::mem::replace(&mut present[v as usize], true) {
            return Ok(Hint::NoCompletion);
        }
    }
    let Some(value) = (1..=total).find(|&v| !present[v as usize]) else {
        return Ok(Hint::Complete);
    };
    let g = build_graph_sorting(p);
    if complete_assignment(&g, &fixed).is_none() {
        return Ok(Hint::NoCompletion);
    }
    let mut feasible = Vec::new();
    for idx in 0..fixed.len() {
        if fixed[idx].is_some() {
            continue;
        }
        fixed[idx] = Some(value);
        if complete_assignment(&g, &fixed).is_some() {
            feasible.push(idx);
        }
        fixed[idx] = None;
    }
    let first = *feasible
        .first()
        .expect("a feasible board places its smallest missing value somewhere");
    Ok(Hint::Place {
        cell: Cell::from_index(first, n),
        value,
        forced: feasible.len() == 1,
    })
}
