//! Grid acyclification instances built from feedback vertex set instances.
//!
//! Every cell of an `N x N` grid is a vertex, and each row and each column
//! carries an acyclic tournament on its cells. Deleting cells so that the
//! union of the tournaments becomes acyclic is at least as hard as finding
//! a minimum feedback vertex set of a digraph `H`, via the staircase
//! construction below.
//!
//! Layout. Each vertex `v` of `H` owns a block of private rows and columns;
//! blocks sit on the anti-diagonal from the bottom-left corner, `v1` first.
//! A block is a monotone staircase path: the red segment (`d-(v) + 1`
//! cells), the key cell, then the green segment (`d+(v) + 1` cells). The red
//! part climbs with the move pattern `U R R` into the key, so red cells sit
//! at most three to a row and at most two to a column; the green part leaves
//! the key with `U U R`, so green cells sit at most three to a column and at
//! most two to a row. An edge `(u, w)` becomes a cell in a green row of `u`
//! and a red column of `w`. Lines holding a single staircase cell take two
//! edge cells, lines holding two take one, so no line has more than three
//! active cells.
//!
//! Orientation. Inactive cells are sinks. Staircase cells on a common line
//! point along the path, green cells point at edge cells in their row, and
//! edge cells point at red cells in their column. Two edge cells sharing a
//! line are ordered by a 2-colouring of the edge cells, so no path passes
//! through three edge cells; without it a row step followed by a column
//! step could connect `u` to a vertex it has no edge to. Inactive pairs run
//! left to right in rows and top to bottom in columns.
//!
//! Coordinates inside this module use `x` to the right and `y` upwards from
//! the bottom-left corner, both from 0; a point maps to row `N - y`, column
//! `x + 1`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::Adjacency;
use crate::model::Cell;

/// Simple digraph on vertices `0..n`. JSON uses 1-based vertex numbers:
/// `{"n": 3, "edges": [[1, 2], [2, 3]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DigraphJson", into = "DigraphJson")]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<DigraphJson> for Digraph {
    type Error = Error;

    fn try_from(j: DigraphJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for [a, b] in j.edges {
            if a == 0 || b == 0 || a > j.n || b > j.n {
                return Err(Error::InvalidDigraph(format!(
                    "edge ({a}, {b}) leaves the vertex range 1..={}",
                    j.n
                )));
            }
            edges.push((a - 1, b - 1));
        }
        Digraph::new(j.n, edges)
    }
}

impl From<Digraph> for DigraphJson {
    fn from(h: Digraph) -> Self {
        DigraphJson {
            n: h.n,
            edges: h.edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
        }
    }
}

impl Digraph {
    /// Validates a 0-based edge list: no self-loops, no repeated edges.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDigraph("no vertices".into()));
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::InvalidDigraph(format!(
                    "edge ({}, {}) leaves the vertex range",
                    a + 1,
                    b + 1
                )));
            }
            if a == b {
                return Err(Error::InvalidDigraph(format!(
                    "self-loop at vertex {}",
                    a + 1
                )));
            }
            if !seen.insert((a, b)) {
                return Err(Error::InvalidDigraph(format!(
                    "parallel edge ({}, {})",
                    a + 1,
                    b + 1
                )));
            }
        }
        Ok(Digraph { n, edges })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: DigraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Digraph::try_from(j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("digraph serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    fn adjacency(&self) -> Adjacency {
        let mut adj = Adjacency::new(self.n);
        for &(a, b) in &self.edges {
            adj.add_edge(a, b);
        }
        adj
    }

    /// Whether deleting `removed` (0-based vertices) leaves an acyclic graph.
    pub fn is_feedback_set(&self, removed: &[usize]) -> bool {
        let mut mask = vec![false; self.n];
        for &v in removed {
            if v < self.n {
                mask[v] = true;
            }
        }
        self.adjacency().find_cycle_avoiding(&mask).is_none()
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_feedback_set(&[])
    }
}

/// What a grid cell stands for. Vertex and edge numbers are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Red(usize),
    Key(usize),
    Green(usize),
    /// Index into the edge list of `H`.
    Edge(usize),
    Inactive,
}

impl Role {
    pub fn is_active(self) -> bool {
        self != Role::Inactive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Axis {
    Row,
    Col,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridReduction {
    h: Digraph,
    size: usize,
    roles: Vec<Role>,
    key_of: Vec<Cell>,
    edge_cell_of: Vec<Cell>,
    red: Vec<Vec<Cell>>,
    green: Vec<Vec<Cell>>,
    /// Orientation of every active pair sharing a line, by row-major index.
    active_arcs: BTreeSet<(usize, usize)>,
    /// Orientations that replace the default rule for pairs involving an
    /// inactive cell. Empty for built reductions.
    overrides: BTreeSet<(usize, usize)>,
}

/// One block laid out in local coordinates.
struct BlockShape {
    red: Vec<(usize, usize)>,
    key: (usize, usize),
    green: Vec<(usize, usize)>,
    width: usize,
    height: usize,
}

fn block_shape(in_deg: usize, out_deg: usize) -> BlockShape {
    // red path built backwards from the key at the origin: R, R, U, R, R, U, ...
    let mut red = Vec::with_capacity(in_deg + 1);
    let (mut x, mut y) = (0i64, 0i64);
    for j in 0..=in_deg {
        if j % 3 == 2 {
            y -= 1;
        } else {
            x -= 1;
        }
        red.push((x, y));
    }
    red.reverse();
    let mut green = Vec::with_capacity(out_deg + 1);
    let (mut x, mut y) = (0i64, 0i64);
    for j in 0..=out_deg {
        if j % 3 == 2 {
            x += 1;
        } else {
            y += 1;
        }
        green.push((x, y));
    }
    let (x0, y0) = red[0];
    let shift = |(x, y): (i64, i64)| ((x - x0) as usize, (y - y0) as usize);
    let red: Vec<_> = red.into_iter().map(shift).collect();
    let green: Vec<_> = green.into_iter().map(shift).collect();
    let key = shift((0, 0));
    let last = *green.last().expect("green segment is non-empty");
    BlockShape {
        red,
        key,
        width: last.0 + 1,
        height: last.1 + 1,
        green,
    }
}

/// Edge-cell slots for a set of staircase cells grouped by one coordinate:
/// one slot per line first, then the second slot of single-cell lines.
fn slots(coords: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut per_line: BTreeMap<usize, usize> = BTreeMap::new();
    for c in coords {
        *per_line.entry(c).or_default() += 1;
    }
    let mut out: Vec<usize> = per_line.keys().copied().collect();
    out.extend(per_line.iter().filter(|(_, &k)| k == 1).map(|(&c, _)| c));
    out
}

pub fn build_reduction(h: &Digraph) -> Result<GridReduction> {
    let n = h.n();
    let m = h.edges().len();
    let size = 4 * n + m;
    let shapes: Vec<BlockShape> = (0..n)
        .map(|v| block_shape(h.in_degree(v), h.out_degree(v)))
        .collect();
    let used_w: usize = shapes.iter().map(|s| s.width).sum();
    let used_h: usize = shapes.iter().map(|s| s.height).sum();
    if used_w > size || used_h > size {
        return Err(Error::Layout(format!(
            "staircase needs {used_w} x {used_h} but the grid side is {size}"
        )));
    }
    let cell_at = |x: usize, y: usize| Cell {
        row: size - y,
        col: x + 1,
    };

    let mut roles = vec![Role::Inactive; size * size];
    let mut position = vec![0usize; size * size];
    let mut key_of = Vec::with_capacity(n);
    let mut red = Vec::with_capacity(n);
    let mut green = Vec::with_capacity(n);
    // per vertex: green slot rows and red slot columns, in grid coordinates
    let mut green_slots = Vec::with_capacity(n);
    let mut red_slots = Vec::with_capacity(n);
    let (mut ox, mut oy) = (0, 0);
    for (v, s) in shapes.iter().enumerate() {
        let place = |(x, y): (usize, usize)| cell_at(ox + x, oy + y);
        let mut step = 0;
        let mut put = |cell: Cell, role: Role, roles: &mut Vec<Role>| {
            roles[cell.index(size)] = role;
            position[cell.index(size)] = step;
            step += 1;
        };
        let red_cells: Vec<Cell> = s.red.iter().map(|&p| place(p)).collect();
        let key = place(s.key);
        let green_cells: Vec<Cell> = s.green.iter().map(|&p| place(p)).collect();
        for &c in &red_cells {
            put(c, Role::Red(v), &mut roles);
        }
        put(key, Role::Key(v), &mut roles);
        for &c in &green_cells {
            put(c, Role::Green(v), &mut roles);
        }
        red_slots.push(slots(s.red.iter().map(|&(x, _)| ox + x + 1)));
        // bottom-up means decreasing row number
        let mut g_rows = slots(s.green.iter().map(|&(_, y)| oy + y));
        for r in &mut g_rows {
            *r = size - *r;
        }
        green_slots.push(g_rows);
        key_of.push(key);
        red.push(red_cells);
        green.push(green_cells);
        ox += s.width;
        oy += s.height;
    }

    let mut edge_cell_of = vec![Cell { row: 0, col: 0 }; m];
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(a, b)) in h.edges().iter().enumerate() {
        by_source[a].push(e);
        by_target[b].push(e);
    }
    let mut slot_row = vec![0; m];
    let mut slot_col = vec![0; m];
    for v in 0..n {
        by_source[v].sort_by_key(|&e| h.edges()[e].1);
        by_target[v].sort_by_key(|&e| h.edges()[e].0);
        if by_source[v].len() > green_slots[v].len() || by_target[v].len() > red_slots[v].len() {
            return Err(Error::Layout(format!(
                "not enough edge slots for vertex {}",
                v + 1
            )));
        }
        for (i, &e) in by_source[v].iter().enumerate() {
            slot_row[e] = green_slots[v][i];
        }
        for (i, &e) in by_target[v].iter().enumerate() {
            slot_col[e] = red_slots[v][i];
        }
    }
    for e in 0..m {
        let cell = Cell {
            row: slot_row[e],
            col: slot_col[e],
        };
        if roles[cell.index(size)] != Role::Inactive {
            return Err(Error::Layout(format!("edge cell {cell:?} collides")));
        }
        roles[cell.index(size)] = Role::Edge(e);
        edge_cell_of[e] = cell;
    }

    // two-colour edge cells that share a line; colour 0 points at colour 1
    let mut partners: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut lines: BTreeMap<(Axis, usize), Vec<usize>> = BTreeMap::new();
    for (e, c) in edge_cell_of.iter().enumerate() {
        lines.entry((Axis::Row, c.row)).or_default().push(e);
        lines.entry((Axis::Col, c.col)).or_default().push(e);
    }
    for members in lines.values() {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                partners[a].push(b);
                partners[b].push(a);
            }
        }
    }
    let mut colour: Vec<Option<bool>> = vec![None; m];
    for start in 0..m {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            let ca = colour[a].expect("queued cells are coloured");
            for &b in &partners[a] {
                match colour[b] {
                    None => {
                        colour[b] = Some(!ca);
                        queue.push_back(b);
                    }
                    Some(cb) if cb == ca => {
                        return Err(Error::Layout("edge cells are not two-colourable".into()));
                    }
                    Some(_) => {}
                }
            }
        }
    }

    let mut g = GridReduction {
        h: h.clone(),
        size,
        roles,
        key_of,
        edge_cell_of,
        red,
        green,
        active_arcs: BTreeSet::new(),
        overrides: BTreeSet::new(),
    };
    for (axis, line) in g.all_lines() {
        let active: Vec<usize> = g
            .line_cells(axis, line)
            .into_iter()
            .filter(|&i| g.roles[i].is_active())
            .collect();
        for (i, &a) in active.iter().enumerate() {
            for &b in &active[i + 1..] {
                let forward = match (g.roles[a], g.roles[b]) {
                    (Role::Edge(ea), Role::Edge(eb)) => {
                        colour[ea] == Some(false) && colour[eb] == Some(true)
                    }
                    (Role::Edge(_), _) => axis == Axis::Col,
                    (_, Role::Edge(_)) => axis == Axis::Row,
                    _ => position[a] < position[b],
                };
                g.active_arcs.insert(if forward { (a, b) } else { (b, a) });
            }
        }
    }
    Ok(g)
}

/// Outcome of [`verify_reduction`]; `violations` holds readable details.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub lines_acyclic: bool,
    pub inactive_sinks: bool,
    pub max_active_per_line: usize,
    pub active_limit_respected: bool,
    pub segment_sizes_match: bool,
    pub inactive_off_cycles: bool,
    pub violations: Vec<String>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.lines_acyclic
            && self.inactive_sinks
            && self.active_limit_respected
            && self.segment_sizes_match
            && self.inactive_off_cycles
    }
}

const MAX_REPORTED: usize = 20;

pub fn verify_reduction(g: &GridReduction) -> ReductionReport {
    let mut violations = Vec::new();
    let mut note = |msg: String| {
        if violations.len() < MAX_REPORTED {
            violations.push(msg);
        }
    };
    let mut lines_acyclic = true;
    let mut inactive_sinks = true;
    let mut max_active = 0;
    for (axis, line) in g.all_lines() {
        let cells = g.line_cells(axis, line);
        let name = match axis {
            Axis::Row => format!("row {line}"),
            Axis::Col => format!("column {line}"),
        };
        // a tournament is acyclic iff its out-degrees are pairwise distinct
        let mut scores = vec![0usize; cells.len()];
        for (i, &a) in cells.iter().enumerate() {
            for (j, &b) in cells.iter().enumerate().skip(i + 1) {
                let ab = g.points_to(a, b);
                let ba = g.points_to(b, a);
                if ab == ba {
                    lines_acyclic = false;
                    note(format!(
                        "{name}: pair {:?} {:?} is not a tournament edge",
                        g.cell(a),
                        g.cell(b)
                    ));
                }
                if ab {
                    scores[i] += 1;
                }
                if ba {
                    scores[j] += 1;
                }
                for (u, w, uw) in [(a, b, ab), (b, a, ba)] {
                    if g.roles[u] == Role::Inactive && uw && g.roles[w].is_active() {
                        inactive_sinks = false;
                        note(format!(
                            "{name}: inactive {:?} points at {:?}",
                            g.cell(u),
                            g.cell(w)
                        ));
                    }
                }
            }
        }
        let mut sorted = scores.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &s)| s != i) {
            lines_acyclic = false;
            note(format!("{name}: tournament has a cycle"));
        }
        let active = cells.iter().filter(|&&i| g.roles[i].is_active()).count();
        max_active = max_active.max(active);
        if active > 3 {
            note(format!("{name}: {active} active cells"));
        }
    }

    let mut segment_sizes_match = true;
    for v in 0..g.h.n() {
        let (din, dout) = (g.h.in_degree(v), g.h.out_degree(v));
        if g.red[v].len() != din + 1 || g.green[v].len() != dout + 1 {
            segment_sizes_match = false;
            note(format!(
                "vertex {}: segments {}/{} for degrees {din}/{dout}",
                v + 1,
                g.red[v].len(),
                g.green[v].len()
            ));
        }
    }

    let mut inactive_off_cycles = true;
    let full = g.full_adjacency();
    for component in full.strongly_connected_components() {
        if component.len() > 1 {
            for &v in &component {
                if g.roles[v] == Role::Inactive {
                    inactive_off_cycles = false;
                    note(format!("inactive {:?} lies on a cycle", g.cell(v)));
                }
            }
        }
    }

    ReductionReport {
        lines_acyclic,
        inactive_sinks,
        max_active_per_line: max_active,
        active_limit_respected: max_active <= 3,
        segment_sizes_match,
        inactive_off_cycles,
        violations,
    }
}

/// Digraph over the active cells only, with the cell for each vertex.
struct ActiveGraph {
    cells: Vec<usize>,
    adj: Adjacency,
}

impl GridReduction {
    /// Grid side `N`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn digraph(&self) -> &Digraph {
        &self.h
    }

    pub fn role(&self, cell: Cell) -> Role {
        self.roles[cell.index(self.size)]
    }

    pub fn key_of(&self, v: usize) -> Cell {
        self.key_of[v]
    }

    pub fn edge_cell_of(&self, e: usize) -> Cell {
        self.edge_cell_of[e]
    }

    pub fn red_segment(&self, v: usize) -> &[Cell] {
        &self.red[v]
    }

    pub fn green_segment(&self, v: usize) -> &[Cell] {
        &self.green[v]
    }

    pub fn active_cells(&self) -> Vec<Cell> {
        (0..self.roles.len())
            .filter(|&i| self.roles[i].is_active())
            .map(|i| self.cell(i))
            .collect()
    }

    /// Arcs between active cells, in row-major index order.
    pub fn active_arcs(&self) -> Vec<(Cell, Cell)> {
        self.active_arcs
            .iter()
            .map(|&(a, b)| (self.cell(a), self.cell(b)))
            .collect()
    }

    /// Forces `from -> to` on the shared line of two cells, replacing the
    /// built orientation. For tests that need a damaged instance.
    pub fn set_orientation(&mut self, from: Cell, to: Cell) -> Result<()> {
        let (a, b) = (self.checked_index(from)?, self.checked_index(to)?);
        if a == b || (from.row != to.row && from.col != to.col) {
            return Err(Error::Layout(format!("{from:?} and {to:?} share no line")));
        }
        if self.roles[a].is_active() && self.roles[b].is_active() {
            self.active_arcs.remove(&(b, a));
            self.active_arcs.insert((a, b));
        } else {
            self.overrides.remove(&(b, a));
            self.overrides.insert((a, b));
        }
        Ok(())
    }

    fn checked_index(&self, c: Cell) -> Result<usize> {
        if c.row == 0 || c.col == 0 || c.row > self.size || c.col > self.size {
            return Err(Error::Layout(format!("{c:?} is outside the grid")));
        }
        Ok(c.index(self.size))
    }

    fn cell(&self, i: usize) -> Cell {
        Cell::from_index(i, self.size)
    }

    fn all_lines(&self) -> impl Iterator<Item = (Axis, usize)> {
        let n = self.size;
        (1..=n)
            .map(|i| (Axis::Row, i))
            .chain((1..=n).map(|i| (Axis::Col, i)))
    }

    fn line_cells(&self, axis: Axis, line: usize) -> Vec<usize> {
        let n = self.size;
        match axis {
            Axis::Row => (1..=n)
                .map(|c| Cell { row: line, col: c }.index(n))
                .collect(),
            Axis::Col => (1..=n)
                .map(|r| Cell { row: r, col: line }.index(n))
                .collect(),
        }
    }

    /// Orientation of the tournament edge between two cells on a line.
    fn points_to(&self, a: usize, b: usize) -> bool {
        if self.overrides.contains(&(a, b)) {
            return true;
        }
        if self.overrides.contains(&(b, a)) {
            return false;
        }
        match (self.roles[a].is_active(), self.roles[b].is_active()) {
            (true, true) => self.active_arcs.contains(&(a, b)),
            (true, false) => true,
            (false, true) => false,
            (false, false) => {
                let (ca, cb) = (self.cell(a), self.cell(b));
                if ca.row == cb.row {
                    ca.col < cb.col
                } else {
                    ca.row < cb.row
                }
            }
        }
    }

    fn full_adjacency(&self) -> Adjacency {
        let mut adj = Adjacency::new(self.size * self.size);
        for (axis, line) in self.all_lines() {
            let cells = self.line_cells(axis, line);
            for (i, &a) in cells.iter().enumerate() {
                for &b in &cells[i + 1..] {
                    if self.points_to(a, b) {
                        adj.add_edge(a, b);
                    }
                    if self.points_to(b, a) {
                        adj.add_edge(b, a);
                    }
                }
            }
        }
        adj
    }

    /// The graph a cycle search needs: active cells when the built rules
    /// hold (inactive cells are then sinks), every cell otherwise.
    fn search_graph(&self) -> ActiveGraph {
        if !self.overrides.is_empty() {
            return ActiveGraph {
                cells: (0..self.roles.len()).collect(),
                adj: self.full_adjacency(),
            };
        }
        let cells: Vec<usize> = (0..self.roles.len())
            .filter(|&i| self.roles[i].is_active())
            .collect();
        let local: BTreeMap<usize, usize> =
            cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut adj = Adjacency::new(cells.len());
        for &(a, b) in &self.active_arcs {
            adj.add_edge(local[&a], local[&b]);
        }
        ActiveGraph { cells, adj }
    }

    fn removal_mask(&self, graph: &ActiveGraph, deleted: &[Cell]) -> Vec<bool> {
        let wanted: BTreeSet<usize> = deleted
            .iter()
            .filter(|c| c.row >= 1 && c.col >= 1 && c.row <= self.size && c.col <= self.size)
            .map(|c| c.index(self.size))
            .collect();
        graph.cells.iter().map(|c| wanted.contains(c)).collect()
    }
}

/// Some cycle of `G - deleted`, or `None` when that graph is acyclic.
pub fn grid_cycle_after_deletion(g: &GridReduction, deleted: &[Cell]) -> Option<Vec<Cell>> {
    let graph = g.search_graph();
    let mask = g.removal_mask(&graph, deleted);
    graph
        .adj
        .find_cycle_avoiding(&mask)
        .map(|cycle| cycle.into_iter().map(|v| g.cell(graph.cells[v])).collect())
}

/// Maps a grid deletion set to vertices of `H`: key, red and green cells to
/// their vertex, an edge cell to its source, inactive cells to nothing.
/// Sorted and deduplicated.
pub fn push_solution(g: &GridReduction, deleted: &[Cell]) -> Result<Vec<usize>> {
    if grid_cycle_after_deletion(g, deleted).is_some() {
        return Err(Error::NotAcyclifying);
    }
    let mut out = BTreeSet::new();
    for &c in deleted {
        match g.role(c) {
            Role::Key(v) | Role::Red(v) | Role::Green(v) => {
                out.insert(v);
            }
            Role::Edge(e) => {
                out.insert(g.h.edges()[e].0);
            }
            Role::Inactive => {}
        }
    }
    Ok(out.into_iter().collect())
}

/// Key cells of a feedback vertex set of `H`.
pub fn lift_solution(g: &GridReduction, fvs: &[usize]) -> Result<Vec<Cell>> {
    if fvs.iter().any(|&v| v >= g.h.n()) || !g.h.is_feedback_set(fvs) {
        return Err(Error::NotAcyclifying);
    }
    let mut cells: Vec<Cell> = fvs.iter().map(|&v| g.key_of[v]).collect();
    cells.sort();
    cells.dedup();
    Ok(cells)
}

/// Largest `H` accepted by [`fvs_bruteforce`].
pub const MAX_FVS_VERTICES: usize = 12;

/// Lexicographically smallest minimum feedback vertex set of size at most
/// `k_max`, or `None` if every feedback vertex set is larger.
pub fn fvs_bruteforce(h: &Digraph, k_max: usize) -> Result<Option<Vec<usize>>> {
    if h.n() > MAX_FVS_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices exceeds {MAX_FVS_VERTICES}",
            h.n()
        )));
    }
    let adj = h.adjacency();
    let mut mask = vec![false; h.n()];
    for k in 0..=k_max.min(h.n()) {
        let mut found = None;
        for_each_subset(h.n(), k, &mut |subset| {
            mask.iter_mut().for_each(|x| *x = false);
            for &v in subset {
                mask[v] = true;
            }
            if adj.find_cycle_avoiding(&mask).is_none() {
                found = Some(subset.to_vec());
                return Ok(true);
            }
            Ok(false)
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Subsets examined by [`grid_deletion_bruteforce`] before giving up.
pub const MAX_GRID_SUBSETS: u64 = 20_000_000;

pub fn grid_deletion_bruteforce(g: &GridReduction, k_max: usize) -> Result<Option<Vec<Cell>>> {
    grid_deletion_bruteforce_with(g, k_max, &Budget::unlimited())
}

/// Smallest set of at most `k_max` active cells whose deletion makes `G`
/// acyclic, first in row-major lexicographic order; `None` if none exists.
/// Each subset tried costs one budget node.
pub fn grid_deletion_bruteforce_with(
    g: &GridReduction,
    k_max: usize,
    budget: &Budget,
) -> Result<Option<Vec<Cell>>> {
    let graph = g.search_graph();
    let candidates: Vec<usize> = (0..graph.cells.len())
        .filter(|&i| g.roles[graph.cells[i]].is_active())
        .collect();
    let a = candidates.len() as u64;
    let mut total = 0u64;
    let mut term = 1u64;
    for k in 0..=k_max.min(candidates.len()) as u64 {
        total = total.saturating_add(term);
        term = term.saturating_mul(a - k) / (k + 1);
    }
    if total > MAX_GRID_SUBSETS {
        return Err(Error::TooLarge(format!(
            "{a} active cells with k up to {k_max} gives {total} subsets"
        )));
    }
    let mut meter = budget.meter();
    let mut mask = vec![false; graph.cells.len()];
    for k in 0..=k_max.min(candidates.len()) {
        let mut found = None;
        for_each_subset(candidates.len(), k, &mut |subset| {
            meter.tick()?;
            mask.iter_mut().for_each(|x| *x = false);
            for &i in subset {
                mask[candidates[i]] = true;
            }
            if graph.adj.find_cycle_avoiding(&mask).is_none() {
                found = Some(
                    subset
                        .iter()
                        .map(|&i| g.cell(graph.cells[candidates[i]]))
                        .collect(),
                );
                return Ok(true);
            }
            Ok(false)
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Visits the `k`-subsets of `0..n` in lexicographic order until `visit`
/// returns `true`.
fn for_each_subset(
    n: usize,
    k: usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
) -> Result<()> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx)? {
            return Ok(());
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return Ok(());
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Serialize)]
struct RoleJson {
    cell: Cell,
    role: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge: Option<[usize; 2]>,
}

impl GridReduction {
    /// `{"N", "h", "cells": [active roles], "arcs": [active arcs]}` with
    /// 1-based vertices. Arcs touching inactive cells follow the fixed rule
    /// and are omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<RoleJson> = (0..self.roles.len())
            .filter(|&i| self.roles[i].is_active())
            .map(|i| {
                let cell = self.cell(i);
                match self.roles[i] {
                    Role::Red(v) => RoleJson {
                        cell,
                        role: "red",
                        vertex: Some(v + 1),
                        edge: None,
                    },
                    Role::Key(v) => RoleJson {
                        cell,
                        role: "key",
                        vertex: Some(v + 1),
                        edge: None,
                    },
                    Role::Green(v) => RoleJson {
                        cell,
                        role: "green",
                        vertex: Some(v + 1),
                        edge: None,
                    },
                    Role::Edge(e) => {
                        let (a, b) = self.h.edges()[e];
                        RoleJson {
                            cell,
                            role: "edge",
                            vertex: None,
                            edge: Some([a + 1, b + 1]),
                        }
                    }
                    Role::Inactive => unreachable!("filtered to active cells"),
                }
            })
            .collect();
        serde_json::json!({
            "N": self.size,
            "h": self.h.to_json(),
            "cells": cells,
            "arcs": self.active_arcs(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_vertex() -> Digraph {
        Digraph::from_json(
            r#"{"n":5,"edges":[[2,1],[2,4],[5,2],[5,4],[4,3],[1,3],[5,1],[4,1],[3,5]]}"#,
        )
        .unwrap()
    }

    fn digraph(n: usize, edges: &[(usize, usize)]) -> Digraph {
        Digraph::new(n, edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect()).unwrap()
    }

    #[test]
    fn digraph_validation() {
        assert!(Digraph::from_json(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
        assert!(Digraph::from_json(r#"{"n":2,"edges":[[1,2],[1,2]]}"#).is_err());
        assert!(Digraph::from_json(r#"{"n":2,"edges":[[1,3]]}"#).is_err());
        assert!(Digraph::from_json(r#"{"n":0,"edges":[]}"#).is_err());
        let h = five_vertex();
        let back = Digraph::from_json(&h.to_json().to_string()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn five_vertex_layout() {
        let g = build_reduction(&five_vertex()).unwrap();
        assert_eq!(g.size(), 29);
        let report = verify_reduction(&g);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.max_active_per_line, 3);
        assert_eq!(g.active_cells().len(), 3 * 5 + 3 * 9);
        for v in 0..5 {
            assert_eq!(g.role(g.key_of(v)), Role::Key(v));
        }
    }

    #[test]
    fn five_vertex_keys_break_all_cycles() {
        let g = build_reduction(&five_vertex()).unwrap();
        assert!(grid_cycle_after_deletion(&g, &[g.key_of(2)]).is_none());
        assert!(grid_cycle_after_deletion(&g, &[g.key_of(4)]).is_none());
        assert!(grid_cycle_after_deletion(&g, &[g.key_of(0)]).is_some());
    }

    #[test]
    fn cycle_keys_trace_a_cycle_of_h() {
        let h = five_vertex();
        let g = build_reduction(&h).unwrap();
        let cycle = grid_cycle_after_deletion(&g, &[]).unwrap();
        let keys: Vec<usize> = cycle
            .iter()
            .filter_map(|&c| match g.role(c) {
                Role::Key(v) => Some(v),
                _ => None,
            })
            .collect();
        assert!(!keys.is_empty());
        for i in 0..keys.len() {
            let edge = (keys[i], keys[(i + 1) % keys.len()]);
            assert!(h.edges().contains(&edge), "{edge:?} is not an edge of H");
        }
    }

    #[test]
    fn pushing_rules() {
        let h = five_vertex();
        let g = build_reduction(&h).unwrap();
        assert_eq!(push_solution(&g, &[g.key_of(2)]).unwrap(), vec![2]);
        // a red cell of v2 does not break every cycle, so pair it with the key of v3
        let red = g.red_segment(1)[0];
        assert_eq!(push_solution(&g, &[red, g.key_of(2)]).unwrap(), vec![1, 2]);
        let e35 = h.edges().iter().position(|&e| e == (2, 4)).unwrap();
        assert_eq!(push_solution(&g, &[g.edge_cell_of(e35)]).unwrap(), vec![2]);
        assert_eq!(push_solution(&g, &[]), Err(Error::NotAcyclifying));
    }

    #[test]
    fn lifting() {
        let g = build_reduction(&five_vertex()).unwrap();
        assert_eq!(lift_solution(&g, &[2]).unwrap(), vec![g.key_of(2)]);
        assert_eq!(lift_solution(&g, &[4]).unwrap(), vec![g.key_of(4)]);
        assert_eq!(lift_solution(&g, &[0]), Err(Error::NotAcyclifying));
        let dag = build_reduction(&digraph(2, &[(1, 2)])).unwrap();
        assert_eq!(lift_solution(&dag, &[]).unwrap(), vec![]);
    }

    #[test]
    fn brute_force_solvers() {
        let h = five_vertex();
        assert_eq!(fvs_bruteforce(&h, 1).unwrap(), Some(vec![2]));
        assert_eq!(fvs_bruteforce(&h, 0).unwrap(), None);
        let triangle = digraph(3, &[(1, 2), (2, 3), (3, 1)]);
        assert_eq!(fvs_bruteforce(&triangle, 3).unwrap(), Some(vec![0]));
        let dag = digraph(3, &[(1, 2), (2, 3), (1, 3)]);
        assert_eq!(fvs_bruteforce(&dag, 2).unwrap(), Some(vec![]));

        let g = build_reduction(&h).unwrap();
        assert_eq!(grid_deletion_bruteforce(&g, 0).unwrap(), None);
        let one = grid_deletion_bruteforce(&g, 1).unwrap().unwrap();
        assert_eq!(one.len(), 1);
        let pushed = push_solution(&g, &one).unwrap();
        assert!(h.is_feedback_set(&pushed));

        let two_cycle = build_reduction(&digraph(2, &[(1, 2), (2, 1)])).unwrap();
        assert!(grid_cycle_after_deletion(&two_cycle, &[]).is_some());
        assert_eq!(
            grid_deletion_bruteforce(&two_cycle, 1)
                .unwrap()
                .unwrap()
                .len(),
            1
        );
        let dag_g = build_reduction(&dag).unwrap();
        assert_eq!(grid_deletion_bruteforce(&dag_g, 0).unwrap(), Some(vec![]));
    }

    #[test]
    fn single_vertex_and_single_edge() {
        let g = build_reduction(&digraph(1, &[])).unwrap();
        assert_eq!(g.size(), 4);
        assert!(verify_reduction(&g).passed());
        let g = build_reduction(&digraph(2, &[(1, 2)])).unwrap();
        assert!(verify_reduction(&g).passed());
        assert!(grid_cycle_after_deletion(&g, &[]).is_none());
    }

    #[test]
    fn tampered_inactive_cell_is_reported() {
        let mut g = build_reduction(&digraph(2, &[(1, 2), (2, 1)])).unwrap();
        let key = g.key_of(0);
        let inactive = (1..=g.size())
            .map(|c| Cell {
                row: key.row,
                col: c,
            })
            .find(|&c| g.role(c) == Role::Inactive)
            .unwrap();
        g.set_orientation(inactive, key).unwrap();
        let report = verify_reduction(&g);
        assert!(!report.inactive_sinks);
        assert!(!report.passed());
    }

    #[test]
    fn edge_cells_sharing_lines_stay_faithful() {
        // high in- and out-degrees force two edge cells onto single lines
        let mut edges = Vec::new();
        for a in 1..=5 {
            for b in 1..=5 {
                if a != b && (a + b) % 3 != 0 {
                    edges.push((a, b));
                }
            }
        }
        let h = digraph(5, &edges);
        let g = build_reduction(&h).unwrap();
        assert!(verify_reduction(&g).passed());
        for v in 0..5 {
            let rest: Vec<usize> = (0..5).filter(|&w| w != v).collect();
            let keys: Vec<Cell> = rest.iter().map(|&w| g.key_of(w)).collect();
            // deleting every other key leaves only v's block, which is acyclic
            assert!(grid_cycle_after_deletion(&g, &keys).is_none());
        }
        // key-to-key reachability must equal H's edges
        let graph = g.search_graph();
        for (a, &ka) in g.key_of.iter().enumerate() {
            for (b, &kb) in g.key_of.iter().enumerate() {
                if a == b {
                    continue;
                }
                let mut blocked = g.removal_mask(&graph, &g.key_of.clone());
                let la = graph
                    .cells
                    .iter()
                    .position(|&c| c == ka.index(g.size))
                    .unwrap();
                let lb = graph
                    .cells
                    .iter()
                    .position(|&c| c == kb.index(g.size))
                    .unwrap();
                blocked[la] = false;
                blocked[lb] = false;
                let reach = reachable(&graph.adj, la, &blocked);
                assert_eq!(reach[lb], h.edges().contains(&(a, b)), "{a} -> {b}");
            }
        }
    }

    fn reachable(adj: &Adjacency, from: usize, blocked: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; adj.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &w in adj.successors(v) {
                if !seen[w] && !blocked[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}
