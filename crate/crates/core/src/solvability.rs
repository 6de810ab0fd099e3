//! Deciding solvability, building witness solutions and the unique-solution family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{classify_shape, Cell, Grid, Label, LabelWord, ShapeClass, SortingPuzzle};

/// Rows `i < j` and columns `p < q` whose four cells form a cyclic
/// constraint: `r_i != r_j`, `c_p != c_q` and `r_i != c_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForbiddenWitness {
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub q: usize,
}

impl ForbiddenWitness {
    /// The four corner cells in cycle order.
    pub fn cells(&self) -> [Cell; 4] {
        [
            Cell::new(self.i, self.p),
            Cell::new(self.i, self.q),
            Cell::new(self.j, self.q),
            Cell::new(self.j, self.p),
        ]
    }

    pub fn holds_in(&self, p: &SortingPuzzle) -> bool {
        let (r, c) = (p.rows(), p.cols());
        self.i < self.j
            && self.p < self.q
            && r.at(self.i) != r.at(self.j)
            && c.at(self.p) != c.at(self.q)
            && r.at(self.i) != c.at(self.p)
    }
}

/// Whether the row or column word is uniform, or both switch once in the
/// same direction.
pub fn is_solvable(p: &SortingPuzzle) -> bool {
    let (r, c) = (classify_shape(p.rows()), classify_shape(p.cols()));
    r.is_uniform()
        || c.is_uniform()
        || matches!(
            (r, c),
            (ShapeClass::AthenD(_), ShapeClass::AthenD(_))
                | (ShapeClass::DthenA(_), ShapeClass::DthenA(_))
        )
}

/// First position holding `first` that is followed by its flip, and the
/// first flip after it.
fn first_change(w: &LabelWord, first: Label) -> Option<(usize, usize)> {
    let labels = w.labels();
    let start = labels.iter().position(|&l| l == first)?;
    let end = labels[start..].iter().position(|&l| l != first)? + start;
    Some((start + 1, end + 1))
}

/// The lexicographically smallest `(i, j, p, q)` witness, present exactly
/// when the puzzle is unsolvable. Runs in `O(n)`.
pub fn forbidden_witness(p: &SortingPuzzle) -> Option<ForbiddenWitness> {
    [Label::A, Label::D]
        .into_iter()
        .filter_map(|x| {
            let (i, j) = first_change(p.rows(), x)?;
            let (pp, q) = first_change(p.cols(), x.flip())?;
            Some(ForbiddenWitness { i, j, p: pp, q })
        })
        .min_by_key(|w| (w.i, w.j, w.p, w.q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    NorthWest,
    NorthEast,
    SouthWest,
    SouthEast,
}

/// The four blocks cut out by a row switch after row `k` and a column
/// switch after column `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadrantFill {
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

impl QuadrantFill {
    pub fn quadrant_of(&self, cell: Cell) -> Quadrant {
        match (cell.row <= self.k, cell.col <= self.l) {
            (true, true) => Quadrant::NorthWest,
            (true, false) => Quadrant::NorthEast,
            (false, true) => Quadrant::SouthWest,
            (false, false) => Quadrant::SouthEast,
        }
    }

    /// `L = kl + (n-k)(n-l)`, the size of the NW and SE blocks together.
    pub fn diagonal_size(&self) -> usize {
        self.k * self.l + (self.n - self.k) * (self.n - self.l)
    }

    /// Fills NW ascending with `1..=kl`, SE descending with the next
    /// `(n-k)(n-l)` values, then NE and SW. Each block is written row by row;
    /// NE hands out its range from the bottom row up and SW from the top row
    /// down, with rows ascending in NE and descending in SW.
    pub fn fill(&self) -> Grid {
        let QuadrantFill { n, k, l } = *self;
        let mut cells = vec![0u32; n * n];
        let mut put = |row: usize, col: usize, v: usize| cells[(row - 1) * n + col - 1] = v as u32;

        for i in 0..k {
            for j in 0..l {
                put(i + 1, j + 1, i * l + j + 1);
            }
        }
        let se_count = (n - k) * (n - l);
        let mut t = 0;
        for i in k..n {
            for j in l..n {
                put(i + 1, j + 1, k * l + se_count - t);
                t += 1;
            }
        }
        let base = self.diagonal_size();
        let width = n - l;
        for i in 0..k {
            for j in 0..width {
                put(i + 1, l + j + 1, base + (k - 1 - i) * width + j + 1);
            }
        }
        let base = base + k * width;
        for i in 0..n - k {
            for j in 0..l {
                put(k + i + 1, j + 1, base + i * l + (l - 1 - j) + 1);
            }
        }
        Grid::from_row_major_unchecked(n, cells)
    }
}

/// Row `i` receives the `i`-th block of `n` consecutive values, counted from
/// the top when `cols` is `A` and from the bottom when it is `D`; each block
/// is laid out in the row's own direction.
fn row_block_fill(rows: &LabelWord, cols: Label) -> Grid {
    let n = rows.len();
    let mut cells = vec![0u32; n * n];
    for i in 1..=n {
        let block = match cols {
            Label::A => i - 1,
            Label::D => n - i,
        };
        for j in 1..=n {
            let offset = match rows.at(i) {
                Label::A => j,
                Label::D => n + 1 - j,
            };
            cells[(i - 1) * n + j - 1] = (block * n + offset) as u32;
        }
    }
    Grid::from_row_major_unchecked(n, cells)
}

pub fn construct_solution(p: &SortingPuzzle) -> Result<Grid> {
    let n = p.n();
    let (r, c) = (classify_shape(p.rows()), classify_shape(p.cols()));
    match (r, c) {
        (_, ShapeClass::UniformA) => Ok(row_block_fill(p.rows(), Label::A)),
        (_, ShapeClass::UniformD) => Ok(row_block_fill(p.rows(), Label::D)),
        (ShapeClass::UniformA | ShapeClass::UniformD, _) => {
            construct_solution(&p.transposed()).map(|g| g.transposed())
        }
        (ShapeClass::AthenD(k), ShapeClass::AthenD(l)) => Ok(QuadrantFill { n, k, l }.fill()),
        (ShapeClass::DthenA(_), ShapeClass::DthenA(_)) => {
            construct_solution(&p.flipped()).map(|g| g.complemented())
        }
        _ => Err(Error::Unsolvable),
    }
}

/// One side uniform and the other alternating; order 1 always qualifies.
pub fn is_unique(p: &SortingPuzzle) -> bool {
    let (r, c) = (p.rows(), p.cols());
    p.n() == 1 || (r.is_uniform() && c.is_alternating()) || (c.is_uniform() && r.is_alternating())
}

/// The snake-shaped unique solution of a puzzle accepted by [`is_unique`].
pub fn boustrophedon(p: &SortingPuzzle) -> Result<Grid> {
    if !is_unique(p) {
        return Err(Error::NotUnique);
    }
    construct_solution(p)
}
