//! Solution counting and enumeration.
//!
//! Single-switch puzzles with matching directions are counted in closed form
//! from rectangular standard Young tableaux counts. Everything else falls
//! back to an exact count of linear extensions of the constraint graph,
//! memoized over placed-cell sets and bounded by a [`Budget`].

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::graph::{build_graph_sorting, ConstraintGraph};
use crate::model::{classify_shape, Grid, ShapeClass, SortingPuzzle};
use crate::solvability::{is_solvable, is_unique};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    /// Rejected by the solvability characterization; the count is zero.
    Unsolvable,
    UniqueShortcut,
    Formula,
    Enumeration,
}

impl std::fmt::Display for CountMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CountMethod::Unsolvable => "unsolvable",
            CountMethod::UniqueShortcut => "unique-shortcut",
            CountMethod::Formula => "formula",
            CountMethod::Enumeration => "enumeration",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub value: BigUint,
    pub method: CountMethod,
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    // running product stays integral: C(n-k+i, i) at step i
    (1..=k).fold(BigUint::one(), |acc, i| acc * (n - k + i) / i)
}

/// Number of standard Young tableaux of the `a x b` rectangle:
/// `(ab)! * prod_{i<a} i! / prod_{i<a} (b+i)!`.
pub fn hook_syt_count(a: u64, b: u64) -> BigUint {
    let numerator = (0..a).fold(factorial(a * b), |acc, i| acc * factorial(i));
    let denominator = (0..a).fold(BigUint::one(), |acc, i| acc * factorial(b + i));
    numerator / denominator
}

/// Closed form for `r = A^k D^(n-k)`, `c = A^l D^(n-l)`.
fn quadrant_formula(n: u64, k: u64, l: u64) -> BigUint {
    let diagonal = k * l + (n - k) * (n - l);
    binomial(diagonal, k * l)
        * binomial(n * n - diagonal, (n - k) * l)
        * hook_syt_count(k, l)
        * hook_syt_count(n - k, n - l)
        * hook_syt_count(k, n - l)
        * hook_syt_count(n - k, l)
}

pub fn count_solutions(p: &SortingPuzzle) -> Result<CountResult> {
    count_solutions_with(p, &Budget::default())
}

pub fn count_solutions_with(p: &SortingPuzzle, budget: &Budget) -> Result<CountResult> {
    if !is_solvable(p) {
        return Ok(CountResult {
            value: BigUint::zero(),
            method: CountMethod::Unsolvable,
        });
    }
    if is_unique(p) {
        return Ok(CountResult {
            value: BigUint::one(),
            method: CountMethod::UniqueShortcut,
        });
    }
    let n = p.n() as u64;
    let switch = match (classify_shape(p.rows()), classify_shape(p.cols())) {
        (ShapeClass::AthenD(k), ShapeClass::AthenD(l))
        | (ShapeClass::DthenA(k), ShapeClass::DthenA(l)) => Some((k as u64, l as u64)),
        _ => None,
    };
    if let Some((k, l)) = switch {
        // DthenA is the value-complement of the AthenD puzzle with the same k, l
        return Ok(CountResult {
            value: quadrant_formula(n, k, l),
            method: CountMethod::Formula,
        });
    }
    let value = count_linear_extensions(&build_graph_sorting(p), budget)?;
    Ok(CountResult {
        value,
        method: CountMethod::Enumeration,
    })
}

/// Largest order whose cells fit the 128-bit placed-set keys.
pub const MAX_ENUMERATION_ORDER: usize = 11;

/// Exact number of topological orders of the graph (equivalently, of grids
/// respecting it). Each memoized placed-cell set costs one budget node.
pub fn count_linear_extensions(g: &ConstraintGraph, budget: &Budget) -> Result<BigUint> {
    let n = g.n();
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge(format!(
            "order {n} exceeds the enumeration limit of {MAX_ENUMERATION_ORDER}"
        )));
    }
    let cells = n * n;
    let adj = g.adjacency();
    let mut pred_mask = vec![0u128; cells];
    for v in 0..cells {
        for &w in adj.successors(v) {
            pred_mask[w] |= 1 << v;
        }
    }
    let full: u128 = if cells == 128 {
        u128::MAX
    } else {
        (1u128 << cells) - 1
    };
    let mut memo: HashMap<u128, BigUint> = HashMap::new();
    let mut meter = budget.meter();
    extensions_from(0, full, &pred_mask, &mut memo, &mut meter)
}

fn extensions_from(
    placed: u128,
    full: u128,
    pred_mask: &[u128],
    memo: &mut HashMap<u128, BigUint>,
    meter: &mut Meter<'_>,
) -> Result<BigUint> {
    if placed == full {
        return Ok(BigUint::one());
    }
    if let Some(v) = memo.get(&placed) {
        return Ok(v.clone());
    }
    meter.tick()?;
    let mut total = BigUint::zero();
    let mut remaining = full & !placed;
    while remaining != 0 {
        let v = remaining.trailing_zeros() as usize;
        remaining &= remaining - 1;
        if pred_mask[v] & !placed == 0 {
            total += extensions_from(placed | 1 << v, full, pred_mask, memo, meter)?;
        }
    }
    memo.insert(placed, total.clone());
    Ok(total)
}

/// Whether the partial assignment `fixed` (row-major, `None` = free) extends
/// to a full numbering respecting `g`, and if so one such numbering.
///
/// Treats cells as unit jobs on a single machine: fixed cells must run
/// exactly at their value, release times are pushed forward and deadlines
/// pulled back along the edges, and earliest-deadline-first then finds a
/// schedule whenever one exists.
pub fn complete_assignment(g: &ConstraintGraph, fixed: &[Option<u32>]) -> Option<Vec<u32>> {
    let cells = g.n() * g.n();
    assert_eq!(fixed.len(), cells);
    let total = cells as u32;
    let adj = g.adjacency();
    let (order, acyclic) = adj.min_topological_order();
    if !acyclic {
        return None;
    }
    let mut release = vec![1u32; cells];
    let mut deadline = vec![total; cells];
    let mut used = vec![false; cells + 1];
    for (v, f) in fixed.iter().enumerate() {
        if let Some(x) = *f {
            if x == 0 || x > total || std::mem::replace(&mut used[x as usize], true) {
                return None;
            }
            release[v] = x;
            deadline[v] = x;
        }
    }
    for &v in &order {
        for &w in adj.successors(v) {
            release[w] = release[w].max(release[v] + 1);
        }
    }
    for &v in order.iter().rev() {
        for &w in adj.successors(v) {
            deadline[v] = deadline[v].min(deadline[w].saturating_sub(1));
        }
    }
    if (0..cells).any(|v| release[v] > deadline[v]) {
        return None;
    }

    let mut waiting_preds = vec![0usize; cells];
    for v in 0..cells {
        for &w in adj.successors(v) {
            waiting_preds[w] += 1;
        }
    }
    // jobs whose predecessors are done, keyed by release time
    let mut unreleased: BinaryHeap<Reverse<(u32, usize)>> = BinaryHeap::new();
    let mut ready: BinaryHeap<Reverse<(u32, usize)>> = BinaryHeap::new();
    for v in 0..cells {
        if waiting_preds[v] == 0 {
            unreleased.push(Reverse((release[v], v)));
        }
    }
    let mut assignment = vec![0u32; cells];
    for t in 1..=total {
        while let Some(&Reverse((r, v))) = unreleased.peek() {
            if r > t {
                break;
            }
            unreleased.pop();
            ready.push(Reverse((deadline[v], v)));
        }
        let Reverse((d, v)) = ready.pop()?;
        if d < t {
            return None;
        }
        assignment[v] = t;
        for &w in adj.successors(v) {
            waiting_preds[w] -= 1;
            if waiting_preds[w] == 0 {
                unreleased.push(Reverse((release[w], w)));
            }
        }
    }
    Some(assignment)
}

pub fn enumerate_solutions(p: &SortingPuzzle, limit: usize) -> Vec<Grid> {
    enumerate_solutions_with(p, limit, &Budget::unlimited()).expect("unlimited budget")
}

/// Up to `limit` solutions in lexicographic order of their row-major values.
/// Every budget node is one feasibility check.
pub fn enumerate_solutions_with(
    p: &SortingPuzzle,
    limit: usize,
    budget: &Budget,
) -> Result<Vec<Grid>> {
    enumerate_graph(&build_graph_sorting(p), limit, budget)
}

/// As [`enumerate_solutions_with`] for an arbitrary constraint graph.
pub fn enumerate_graph(g: &ConstraintGraph, limit: usize, budget: &Budget) -> Result<Vec<Grid>> {
    let n = g.n();
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    let mut fixed = vec![None; n * n];
    if complete_assignment(g, &fixed).is_none() {
        return Ok(out);
    }
    let mut used = vec![false; n * n + 1];
    let mut meter = budget.meter();
    enumerate_from(g, 0, &mut fixed, &mut used, limit, &mut out, &mut meter)?;
    Ok(out)
}

fn enumerate_from(
    g: &ConstraintGraph,
    cell: usize,
    fixed: &mut Vec<Option<u32>>,
    used: &mut Vec<bool>,
    limit: usize,
    out: &mut Vec<Grid>,
    meter: &mut Meter<'_>,
) -> Result<()> {
    let total = fixed.len();
    if cell == total {
        let cells = fixed.iter().map(|v| v.expect("all cells fixed")).collect();
        out.push(Grid::from_row_major_unchecked(g.n(), cells));
        return Ok(());
    }
    for value in 1..=total as u32 {
        if used[value as usize] {
            continue;
        }
        meter.tick()?;
        fixed[cell] = Some(value);
        if complete_assignment(g, fixed).is_some() {
            used[value as usize] = true;
            enumerate_from(g, cell + 1, fixed, used, limit, out, meter)?;
            used[value as usize] = false;
            if out.len() >= limit {
                fixed[cell] = None;
                return Ok(());
            }
        }
        fixed[cell] = None;
    }
    Ok(())
}

/// `4(2^n - 1) + 2(n-1)^2`, the number of solvable puzzles of order `n`.
pub fn count_solvable_puzzles(n: u64) -> BigUint {
    assert!(n >= 1);
    let uniform = (BigUint::one() << n) - 1u32;
    uniform * 4u32 + BigUint::from(2 * (n - 1) * (n - 1))
}
