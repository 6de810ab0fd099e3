//! Minimum-cost relabelling of an unsolvable puzzle.
//!
//! Costs are Hamming distances on the concatenated label words. The
//! solvable targets are exactly the four families of the characterization,
//! and each family's optimum decomposes into independent per-word problems
//! solved in linear time from a prefix count of `A` labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Label, LabelWord, SortingPuzzle};
use crate::solvability::is_solvable;

/// `x[k]` is the number of `A` labels among the first `k` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixProfile {
    pub x: Vec<usize>,
    pub total_a: usize,
}

pub fn prefix_profile(w: &LabelWord) -> PrefixProfile {
    let mut x = Vec::with_capacity(w.len() + 1);
    x.push(0);
    let mut running = 0;
    for &l in w.labels() {
        if l == Label::A {
            running += 1;
        }
        x.push(running);
    }
    PrefixProfile {
        x,
        total_a: running,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `A^k D^(n-k)`.
    AthenD,
    /// `D^k A^(n-k)`.
    DthenA,
}

impl Direction {
    fn first(self) -> Label {
        match self {
            Direction::AthenD => Label::A,
            Direction::DthenA => Label::D,
        }
    }
}

/// Best switch point `k` in `0..=n` for the given direction and its cost.
/// Ties go to the smallest `k`.
pub fn min_cost_monotone(w: &LabelWord, dir: Direction) -> (usize, usize) {
    let first = dir.first();
    // cost(k) = mismatches in the first k plus mismatches after k
    let mut cost = w.labels().iter().filter(|&&l| l == first).count();
    let mut best = (0, cost);
    for (i, &l) in w.labels().iter().enumerate() {
        if l == first {
            cost -= 1;
        } else {
            cost += 1;
        }
        if cost < best.1 {
            best = (i + 1, cost);
        }
    }
    best
}

/// Nearest uniform word; `A^n` on ties.
fn nearest_uniform(w: &LabelWord) -> (LabelWord, usize) {
    let a = w.count(Label::A);
    let d = w.len() - a;
    if a >= d {
        (LabelWord::uniform(Label::A, w.len()), d)
    } else {
        (LabelWord::uniform(Label::D, w.len()), a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepairStrategy {
    RowUniform,
    ColUniform,
    BothAthenD,
    BothDthenA,
}

impl std::fmt::Display for RepairStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RepairStrategy::RowUniform => "row-uniform",
            RepairStrategy::ColUniform => "col-uniform",
            RepairStrategy::BothAthenD => "both-a-then-d",
            RepairStrategy::BothDthenA => "both-d-then-a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairResult {
    pub cost: usize,
    pub target: SortingPuzzle,
    pub strategy: RepairStrategy,
}

/// Closest solvable puzzle in Hamming distance, in `O(n)`.
///
/// When several strategies reach the optimum the earliest in
/// [`RepairStrategy`] declaration order wins. A solvable input is returned
/// unchanged at cost zero.
pub fn nearest_solvable(p: &SortingPuzzle) -> RepairResult {
    let n = p.n();
    let (r, c) = (p.rows(), p.cols());
    let (uniform_r, cost_r) = nearest_uniform(r);
    let (uniform_c, cost_c) = nearest_uniform(c);

    let mut candidates = vec![
        (cost_r, RepairStrategy::RowUniform, uniform_r, c.clone()),
        (cost_c, RepairStrategy::ColUniform, r.clone(), uniform_c),
    ];
    for (dir, strategy) in [
        (Direction::AthenD, RepairStrategy::BothAthenD),
        (Direction::DthenA, RepairStrategy::BothDthenA),
    ] {
        let (k, cr) = min_cost_monotone(r, dir);
        let (l, cc) = min_cost_monotone(c, dir);
        candidates.push((
            cr + cc,
            strategy,
            LabelWord::single_switch(dir.first(), k, n),
            LabelWord::single_switch(dir.first(), l, n),
        ));
    }
    if is_solvable(p) {
        return RepairResult {
            cost: 0,
            target: p.clone(),
            strategy: candidates
                .iter()
                .find(|c| c.0 == 0)
                .map(|c| c.1)
                .unwrap_or(RepairStrategy::RowUniform),
        };
    }
    let (cost, strategy, rows, cols) = candidates
        .into_iter()
        .min_by_key(|c| (c.0, c.1 as u8))
        .expect("four candidates");
    RepairResult {
        cost,
        target: SortingPuzzle::new(rows, cols).expect("same length as input"),
        strategy,
    }
}

/// Largest order accepted by [`repair_oracle`].
pub const MAX_ORACLE_ORDER: usize = 12;

/// Exhaustive minimum over every solvable puzzle of the same order, with the
/// first optimal target in mask order. Exponential; reference only.
pub fn repair_oracle(p: &SortingPuzzle) -> Result<(usize, SortingPuzzle)> {
    let n = p.n();
    if n > MAX_ORACLE_ORDER {
        return Err(Error::TooLarge(format!(
            "oracle is limited to order {MAX_ORACLE_ORDER}, got {n}"
        )));
    }
    let mut best: Option<(usize, SortingPuzzle)> = None;
    for q in SortingPuzzle::all(n) {
        if !is_solvable(&q) {
            continue;
        }
        let d = p.distance(&q);
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, q));
        }
    }
    Ok(best.expect("uniform puzzles are always solvable"))
}
