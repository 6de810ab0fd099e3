//! Constraint graphs for sorting and permutation puzzles.
//!
//! Vertices are grid cells and an edge `u -> v` means `value(u) < value(v)`,
//! so a topological order lists cells by increasing value. Only
//! consecutive-rank edges are stored, giving `2n(n-1)` edges per puzzle.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Cell, Grid, Label, SortingPuzzle};

/// Plain adjacency-list digraph on `0..len`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Adjacency {
    succ: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn new(len: usize) -> Self {
        Adjacency {
            succ: vec![Vec::new(); len],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.succ[from].push(to);
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Some directed cycle, as its vertices in traversal order (the last
    /// vertex has an edge back to the first), or `None` when acyclic.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        self.find_cycle_avoiding(&vec![false; self.len()])
    }

    /// As [`Adjacency::find_cycle`], ignoring vertices flagged in `removed`.
    pub fn find_cycle_avoiding(&self, removed: &[bool]) -> Option<Vec<usize>> {
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let n = self.len();
        let mut colour = vec![WHITE; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if removed[root] || colour[root] != WHITE {
                continue;
            }
            // (vertex, next successor position)
            let mut stack = vec![(root, 0usize)];
            colour[root] = GREY;
            while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
                if let Some(&w) = self.succ[v].get(*pos) {
                    *pos += 1;
                    if removed[w] {
                        continue;
                    }
                    match colour[w] {
                        WHITE => {
                            colour[w] = GREY;
                            parent[w] = v;
                            stack.push((w, 0));
                        }
                        GREY => {
                            let mut cycle = vec![v];
                            let mut u = v;
                            while u != w {
                                u = parent[u];
                                cycle.push(u);
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    colour[v] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Kahn's algorithm, always taking the smallest available vertex.
    /// Returns the cycle-free prefix and whether every vertex was ordered.
    pub fn min_topological_order(&self) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut indegree = vec![0usize; n];
        for targets in &self.succ {
            for &w in targets {
                indegree[w] += 1;
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &w in &self.succ[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        let complete = order.len() == n;
        (order, complete)
    }

    /// Strongly connected components (Tarjan), each listed in discovery order.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut components = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call = vec![(root, 0usize)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&w) = self.succ[v].get(*pos) {
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut component = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            component.push(w);
                            if w == v {
                                break;
                            }
                        }
                        component.reverse();
                        components.push(component);
                    }
                }
            }
        }
        components
    }
}

/// Cell digraph of a puzzle; `u -> v` means `value(u) < value(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    n: usize,
    edges: Vec<(Cell, Cell)>,
    adjacency: Adjacency,
}

impl ConstraintGraph {
    fn from_edges(n: usize, mut edges: Vec<(Cell, Cell)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = Adjacency::new(n * n);
        for &(u, v) in &edges {
            debug_assert!(u != v && (u.row == v.row || u.col == v.col));
            adjacency.add_edge(u.index(n), v.index(n));
        }
        ConstraintGraph {
            n,
            edges,
            adjacency,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted by (source, target) in row-major cell order.
    pub fn edges(&self) -> &[(Cell, Cell)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    /// Whether `grid` respects every edge.
    pub fn is_satisfied_by(&self, grid: &Grid) -> bool {
        grid.n() == self.n && self.edges.iter().all(|&(u, v)| grid.at(u) < grid.at(v))
    }
}

fn line_chain(cells: &[Cell]) -> impl Iterator<Item = (Cell, Cell)> + '_ {
    cells.windows(2).map(|w| (w[0], w[1]))
}

pub fn build_graph_sorting(p: &SortingPuzzle) -> ConstraintGraph {
    let n = p.n();
    let mut edges = Vec::with_capacity(2 * n * n.saturating_sub(1));
    for i in 1..=n {
        for j in 1..n {
            let (left, right) = (Cell::new(i, j), Cell::new(i, j + 1));
            edges.push(match p.rows().at(i) {
                Label::A => (left, right),
                Label::D => (right, left),
            });
            let (top, below) = (Cell::new(j, i), Cell::new(j + 1, i));
            edges.push(match p.cols().at(i) {
                Label::A => (top, below),
                Label::D => (below, top),
            });
        }
    }
    ConstraintGraph::from_edges(n, edges)
}

/// Generalized puzzle: `rho[i][j]` is the rank (1 = smallest) of the entry
/// in column `j+1` of row `i+1`; `gamma[j][i]` the rank of the entry in row
/// `i+1` of column `j+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PermutationJson", into = "PermutationJson")]
pub struct PermutationPuzzle {
    n: usize,
    rho: Vec<Vec<usize>>,
    gamma: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PermutationJson {
    n: usize,
    rho: Vec<Vec<usize>>,
    gamma: Vec<Vec<usize>>,
}

impl TryFrom<PermutationJson> for PermutationPuzzle {
    type Error = Error;

    fn try_from(j: PermutationJson) -> Result<Self> {
        PermutationPuzzle::new(j.n, j.rho, j.gamma)
    }
}

impl From<PermutationPuzzle> for PermutationJson {
    fn from(p: PermutationPuzzle) -> Self {
        PermutationJson {
            n: p.n,
            rho: p.rho,
            gamma: p.gamma,
        }
    }
}

fn check_permutation(perm: &[usize], n: usize, line: String) -> Result<()> {
    let mut seen = vec![false; n];
    for &r in perm {
        match r.checked_sub(1) {
            Some(k) if k < n && !seen[k] => seen[k] = true,
            _ => return Err(Error::InvalidPermutation { line, n }),
        }
    }
    if perm.len() != n {
        return Err(Error::InvalidPermutation { line, n });
    }
    Ok(())
}

impl PermutationPuzzle {
    pub fn new(n: usize, rho: Vec<Vec<usize>>, gamma: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPuzzle);
        }
        for (what, perms) in [("row", &rho), ("column", &gamma)] {
            if perms.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: perms.len(),
                });
            }
            for (k, perm) in perms.iter().enumerate() {
                check_permutation(perm, n, format!("{what} {}", k + 1))?;
            }
        }
        Ok(PermutationPuzzle { n, rho, gamma })
    }

    /// Embeds a sorting puzzle: `A` becomes the identity, `D` the reversal.
    pub fn from_sorting(p: &SortingPuzzle) -> Self {
        let n = p.n();
        let perm = |l: &Label| -> Vec<usize> {
            match l {
                Label::A => (1..=n).collect(),
                Label::D => (1..=n).rev().collect(),
            }
        };
        PermutationPuzzle {
            n,
            rho: p.rows().labels().iter().map(perm).collect(),
            gamma: p.cols().labels().iter().map(perm).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> &[Vec<usize>] {
        &self.rho
    }

    pub fn gamma(&self) -> &[Vec<usize>] {
        &self.gamma
    }
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (pos, &rank) in perm.iter().enumerate() {
        inv[rank - 1] = pos + 1;
    }
    inv
}

pub fn build_graph_permutation(pp: &PermutationPuzzle) -> ConstraintGraph {
    let n = pp.n;
    let mut edges = Vec::with_capacity(2 * n * (n - 1));
    for (i, rho) in pp.rho.iter().enumerate() {
        let cells: Vec<Cell> = inverse(rho).iter().map(|&j| Cell::new(i + 1, j)).collect();
        edges.extend(line_chain(&cells));
    }
    for (j, gamma) in pp.gamma.iter().enumerate() {
        let cells: Vec<Cell> = inverse(gamma)
            .iter()
            .map(|&i| Cell::new(i, j + 1))
            .collect();
        edges.extend(line_chain(&cells));
    }
    ConstraintGraph::from_edges(n, edges)
}

/// A directed cycle of cells (the last cell precedes the first), if any.
pub fn find_cycle(g: &ConstraintGraph) -> Option<Vec<Cell>> {
    g.adjacency.find_cycle().map(|cycle| {
        cycle
            .into_iter()
            .map(|v| Cell::from_index(v, g.n))
            .collect()
    })
}

/// Numbers the cells `1..=n²` along the topological order that always
/// takes the row-major-first available cell.
pub fn solve_by_toposort(g: &ConstraintGraph) -> Result<Grid> {
    let (order, complete) = g.adjacency.min_topological_order();
    if !complete {
        let cycle = find_cycle(g).expect("incomplete topological order implies a cycle");
        return Err(Error::Cyclic(cycle));
    }
    let mut cells = vec![0u32; g.n * g.n];
    for (rank, v) in order.into_iter().enumerate() {
        cells[v] = rank as u32 + 1;
    }
    Ok(Grid::from_row_major_unchecked(g.n, cells))
}

pub fn is_solvable_permutation(pp: &PermutationPuzzle) -> bool {
    find_cycle(&build_graph_permutation(pp)).is_none()
}
