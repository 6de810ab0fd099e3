//! Puzzle, label and grid types plus the text and JSON formats.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Ascending: increasing left to right in a row, top to bottom in a column.
    A,
    /// Descending.
    D,
}

impl Label {
    pub fn flip(self) -> Label {
        match self {
            Label::A => Label::D,
            Label::D => Label::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Label::A => 'A',
            Label::D => 'D',
        }
    }
}

impl TryFrom<char> for Label {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'A' => Ok(Label::A),
            'D' => Ok(Label::D),
            other => Err(Error::InvalidLabel(other)),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A row or column labelling, one [`Label`] per line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelWord(Vec<Label>);

impl LabelWord {
    pub fn new(labels: Vec<Label>) -> Self {
        LabelWord(labels)
    }

    pub fn uniform(label: Label, n: usize) -> Self {
        LabelWord(vec![label; n])
    }

    /// `first^k` followed by `first.flip()^(n-k)`.
    pub fn single_switch(first: Label, k: usize, n: usize) -> Self {
        assert!(k <= n);
        LabelWord(
            (0..n)
                .map(|i| if i < k { first } else { first.flip() })
                .collect(),
        )
    }

    /// Decodes the low `n` bits of `mask`, bit `i` set meaning position `i` is `D`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        LabelWord(
            (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Label::D
                    } else {
                        Label::A
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    /// Label of line `i`, 1-based.
    pub fn at(&self, i: usize) -> Label {
        self.0[i - 1]
    }

    pub fn flipped(&self) -> LabelWord {
        LabelWord(self.0.iter().map(|l| l.flip()).collect())
    }

    pub fn reversed(&self) -> LabelWord {
        LabelWord(self.0.iter().rev().copied().collect())
    }

    pub fn count(&self, label: Label) -> usize {
        self.0.iter().filter(|&&l| l == label).count()
    }

    pub fn is_uniform(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Every pair of neighbours differs. Words of length 1 qualify.
    pub fn is_alternating(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    pub fn hamming(&self, other: &LabelWord) -> usize {
        assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl FromStr for LabelWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(Label::try_from)
            .collect::<Result<Vec<_>>>()
            .map(LabelWord)
    }
}

impl fmt::Display for LabelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for LabelWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LabelWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A grid position, 1-based; row 1 is the top row, column 1 the leftmost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// Row-major index in an order-`n` grid.
    pub fn index(self, n: usize) -> usize {
        (self.row - 1) * n + (self.col - 1)
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Cell::new(index / n + 1, index % n + 1)
    }
}

impl From<[usize; 2]> for Cell {
    fn from([row, col]: [usize; 2]) -> Self {
        Cell { row, col }
    }
}

impl From<Cell> for [usize; 2] {
    fn from(c: Cell) -> Self {
        [c.row, c.col]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortingPuzzle {
    rows: LabelWord,
    cols: LabelWord,
}

impl SortingPuzzle {
    pub fn new(rows: LabelWord, cols: LabelWord) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyPuzzle);
        }
        if rows.len() != cols.len() {
            return Err(Error::LengthMismatch {
                expected: rows.len(),
                found: cols.len(),
            });
        }
        Ok(SortingPuzzle { rows, cols })
    }

    /// Shorthand for tests and examples: `SortingPuzzle::parse_words("ADD", "ADD")`.
    pub fn parse_words(rows: &str, cols: &str) -> Result<Self> {
        Self::new(rows.parse()?, cols.parse()?)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &LabelWord {
        &self.rows
    }

    pub fn cols(&self) -> &LabelWord {
        &self.cols
    }

    pub fn transposed(&self) -> SortingPuzzle {
        SortingPuzzle {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    pub fn flipped(&self) -> SortingPuzzle {
        SortingPuzzle {
            rows: self.rows.flipped(),
            cols: self.cols.flipped(),
        }
    }

    /// Hamming distance over both words.
    pub fn distance(&self, other: &SortingPuzzle) -> usize {
        self.rows.hamming(&other.rows) + self.cols.hamming(&other.cols)
    }

    /// All `4^n` puzzles of order `n`, in mask order.
    pub fn all(n: usize) -> impl Iterator<Item = SortingPuzzle> {
        assert!((1..32).contains(&n));
        let words = 1u64 << n;
        (0..words * words).map(move |m| SortingPuzzle {
            rows: LabelWord::from_mask(m / words, n),
            cols: LabelWord::from_mask(m % words, n),
        })
    }
}

impl fmt::Display for SortingPuzzle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rows, self.cols)
    }
}

/// An `n x n` arrangement of `1..=n²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grid {
    n: usize,
    cells: Vec<u32>,
}

impl Grid {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyPuzzle);
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Self::from_row_major(n, rows.into_iter().flatten().collect())
    }

    pub fn from_row_major(n: usize, cells: Vec<u32>) -> Result<Self> {
        let total = n * n;
        if cells.len() != total {
            return Err(Error::LengthMismatch {
                expected: total,
                found: cells.len(),
            });
        }
        let mut seen = vec![false; total];
        for &v in &cells {
            let slot = (v as usize).checked_sub(1).filter(|&s| s < total);
            match slot {
                Some(s) if !seen[s] => seen[s] = true,
                _ => return Err(Error::NotAPermutation(total as u64)),
            }
        }
        Ok(Grid { n, cells })
    }

    pub(crate) fn from_row_major_unchecked(n: usize, cells: Vec<u32>) -> Self {
        debug_assert!(Self::from_row_major(n, cells.clone()).is_ok());
        Grid { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[(row - 1) * self.n + (col - 1)]
    }

    pub fn at(&self, cell: Cell) -> u32 {
        self.get(cell.row, cell.col)
    }

    pub fn row_major(&self) -> &[u32] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.cells.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    pub fn transposed(&self) -> Grid {
        let n = self.n;
        let cells = (0..n * n)
            .map(|k| self.cells[(k % n) * n + k / n])
            .collect();
        Grid { n, cells }
    }

    /// Replaces every value `v` with `n² + 1 - v`.
    pub fn complemented(&self) -> Grid {
        let top = (self.n * self.n) as u32 + 1;
        Grid {
            n: self.n,
            cells: self.cells.iter().map(|&v| top - v).collect(),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u32>>::deserialize(d)?;
        Grid::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Structural class of a label word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeClass {
    UniformA,
    UniformD,
    /// `A^k D^(n-k)` with `1 <= k <= n-1`.
    AthenD(usize),
    /// `D^k A^(n-k)` with `1 <= k <= n-1`.
    DthenA(usize),
    /// Two or more label changes.
    Other,
}

impl ShapeClass {
    pub fn is_uniform(self) -> bool {
        matches!(self, ShapeClass::UniformA | ShapeClass::UniformD)
    }
}

pub fn classify_shape(w: &LabelWord) -> ShapeClass {
    let labels = w.labels();
    let switches: Vec<usize> = (1..labels.len())
        .filter(|&i| labels[i] != labels[i - 1])
        .collect();
    match (switches.as_slice(), labels.first()) {
        ([], Some(Label::D)) => ShapeClass::UniformD,
        ([], _) => ShapeClass::UniformA,
        ([k], Some(Label::A)) => ShapeClass::AthenD(*k),
        ([k], _) => ShapeClass::DthenA(*k),
        _ => ShapeClass::Other,
    }
}

/// Whether `a` may precede `b` (in reading order) on a line with this label.
fn ordered(label: Label, a: u32, b: u32) -> bool {
    match label {
        Label::A => a < b,
        Label::D => a > b,
    }
}

/// Checks every row and column of `g` against the labels of `p`.
pub fn validate_grid(p: &SortingPuzzle, g: &Grid) -> Result<bool> {
    let n = p.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch {
            puzzle: n,
            grid: g.n(),
        });
    }
    for i in 1..=n {
        for j in 1..n {
            if !ordered(p.rows().at(i), g.get(i, j), g.get(i, j + 1)) {
                return Ok(false);
            }
            if !ordered(p.cols().at(i), g.get(j, i), g.get(j + 1, i)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Row,
    Col,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRef {
    pub axis: Axis,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    /// An ascending line has a larger value before a smaller one.
    Ascending,
    /// A descending line has a smaller value before a larger one.
    Descending,
    /// The same value appears in two cells.
    Duplicate,
    /// A value outside `1..=n²`.
    Range,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// `None` for violations not tied to a line (duplicates, range).
    pub line: Option<LineRef>,
    pub kind: ViolationKind,
    pub positions: Vec<Cell>,
}

/// Violations in a partially filled board, `None` meaning an empty cell.
///
/// A line reports a filled cell whose value leaves too few smaller or larger
/// values for the cells before and after it, and a pair of consecutive
/// filled cells that is out of order or too close in value to fit the empty
/// cells between them. A complete valid grid yields an empty list.
pub fn board_violations(p: &SortingPuzzle, board: &[Vec<Option<u32>>]) -> Result<Vec<Violation>> {
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
    let mut out = Vec::new();
    let total = (n * n) as u32;
    let mut first_seen: std::collections::HashMap<u32, Cell> = Default::default();
    for (i, row) in board.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let cell = Cell::new(i + 1, j + 1);
            let Some(v) = *v else { continue };
            if v == 0 || v > total {
                out.push(Violation {
                    line: None,
                    kind: ViolationKind::Range,
                    positions: vec![cell],
                });
            } else if let Some(prev) = first_seen.insert(v, cell) {
                out.push(Violation {
                    line: None,
                    kind: ViolationKind::Duplicate,
                    positions: vec![prev, cell],
                });
            }
        }
    }
    for axis in [Axis::Row, Axis::Col] {
        for line in 1..=n {
            let (label, cells): (Label, Vec<Cell>) = match axis {
                Axis::Row => (
                    p.rows().at(line),
                    (1..=n).map(|j| Cell::new(line, j)).collect(),
                ),
                Axis::Col => (
                    p.cols().at(line),
                    (1..=n).map(|i| Cell::new(i, line)).collect(),
                ),
            };
            // (position in reading order from 0, cell, value)
            let filled: Vec<(usize, Cell, u32)> = cells
                .into_iter()
                .enumerate()
                .filter_map(|(k, c)| board[c.row - 1][c.col - 1].map(|v| (k, c, v)))
                .filter(|&(_, _, v)| v >= 1 && v <= total)
                .collect();
            let kind = match label {
                Label::A => ViolationKind::Ascending,
                Label::D => ViolationKind::Descending,
            };
            let mut flag = |positions: Vec<Cell>| {
                out.push(Violation {
                    line: Some(LineRef { axis, index: line }),
                    kind,
                    positions,
                })
            };
            for &(k, c, v) in &filled {
                // values needed below and above v on this line
                let (below, above) = match label {
                    Label::A => (k as u32, (n - 1 - k) as u32),
                    Label::D => ((n - 1 - k) as u32, k as u32),
                };
                if v <= below || v + above > total {
                    flag(vec![c]);
                }
            }
            for pair in filled.windows(2) {
                let ((k1, c1, v1), (k2, c2, v2)) = (pair[0], pair[1]);
                if v1 == v2 {
                    continue;
                }
                let gap = (k2 - k1) as u32;
                if !ordered(label, v1, v2) || v1.abs_diff(v2) < gap {
                    flag(vec![c1, c2]);
                }
            }
        }
    }
    Ok(out)
}

/// A puzzle plus an optional grid, as read from either file format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuzzleDocument {
    pub puzzle: SortingPuzzle,
    pub grid: Option<Grid>,
}

#[derive(Serialize, Deserialize)]
struct PuzzleJson {
    n: usize,
    rows: LabelWord,
    cols: LabelWord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<Vec<u32>>>,
}

impl PuzzleDocument {
    /// Accepts the line-oriented text format or, when the input starts with
    /// `{`, the JSON form.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let order = lines
            .next()
            .ok_or_else(|| Error::Parse("missing order line".into()))?;
        let n: usize = order
            .parse()
            .map_err(|_| Error::Parse(format!("order {order:?} is not a decimal integer")))?;
        if n == 0 {
            return Err(Error::EmptyPuzzle);
        }
        let mut word = |what: &str| -> Result<LabelWord> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what} label line")))?;
            let w: LabelWord = line.parse()?;
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
            Ok(w)
        };
        let rows = word("row")?;
        let cols = word("column")?;
        let puzzle = SortingPuzzle::new(rows, cols)?;
        let grid_lines: Vec<&str> = lines.collect();
        let grid = if grid_lines.is_empty() {
            None
        } else {
            let rows = grid_lines
                .iter()
                .map(|l| {
                    l.split_whitespace()
                        .map(|t| {
                            t.parse::<u32>()
                                .map_err(|_| Error::Parse(format!("bad grid value {t:?}")))
                        })
                        .collect::<Result<Vec<u32>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Self::checked_grid(n, rows)?)
        };
        Ok(PuzzleDocument { puzzle, grid })
    }

    fn from_json(text: &str) -> Result<Self> {
        let doc: PuzzleJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_parts(doc)
    }

    fn from_parts(doc: PuzzleJson) -> Result<Self> {
        if doc.rows.len() != doc.n {
            return Err(Error::LengthMismatch {
                expected: doc.n,
                found: doc.rows.len(),
            });
        }
        let puzzle = SortingPuzzle::new(doc.rows, doc.cols)?;
        let grid = doc
            .grid
            .map(|rows| Self::checked_grid(doc.n, rows))
            .transpose()?;
        Ok(PuzzleDocument { puzzle, grid })
    }

    fn checked_grid(n: usize, rows: Vec<Vec<u32>>) -> Result<Grid> {
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                puzzle: n,
                grid: rows.len(),
            });
        }
        Grid::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut s = format_puzzle(&self.puzzle);
        if let Some(g) = &self.grid {
            s.push_str(&g.to_string());
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PuzzleJson {
            n: self.puzzle.n(),
            rows: self.puzzle.rows().clone(),
            cols: self.puzzle.cols().clone(),
            grid: self.grid.as_ref().map(Grid::rows),
        })
        .expect("puzzle serializes")
    }
}

impl Serialize for PuzzleDocument {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PuzzleDocument {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PuzzleJson::deserialize(d)?;
        Self::from_parts(doc).map_err(serde::de::Error::custom)
    }
}

impl Serialize for SortingPuzzle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PuzzleJson {
            n: self.n(),
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            grid: None,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SortingPuzzle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PuzzleDocument::deserialize(d).map(|doc| doc.puzzle)
    }
}

/// Parses the puzzle part of either format; any grid lines are validated
/// and discarded.
pub fn parse_puzzle(text: &str) -> Result<SortingPuzzle> {
    PuzzleDocument::parse(text).map(|d| d.puzzle)
}

pub fn format_puzzle(p: &SortingPuzzle) -> String {
    format!("{}\n{}\n{}\n", p.n(), p.rows(), p.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_grid() -> Grid {
        Grid::from_rows(vec![vec![1, 6, 8], vec![7, 5, 4], vec![9, 3, 2]]).unwrap()
    }

    #[test]
    fn parses_order_and_words() {
        let p = parse_puzzle("3\nADD\nADD").unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.rows().to_string(), "ADD");
        assert_eq!(p.cols().to_string(), "ADD");

        let p = parse_puzzle("2\nAD\nAD").unwrap();
        assert_eq!((p.n(), p.rows().to_string()), (2, "AD".to_string()));
    }

    #[test]
    fn rejects_malformed_text() {
        assert_eq!(parse_puzzle("3\nADX\nADD"), Err(Error::InvalidLabel('X')));
        assert!(matches!(
            parse_puzzle("3\nAD\nADD"),
            Err(Error::LengthMismatch {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            parse_puzzle("three\nADD\nADD"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_puzzle("3\nADD"), Err(Error::Parse(_))));
        assert_eq!(parse_puzzle("0\n\n"), Err(Error::EmptyPuzzle));
    }

    #[test]
    fn parses_grid_lines_and_json() {
        let doc = PuzzleDocument::parse("3\nADD\nADD\n1 6 8\n7 5 4\n9 3 2\n").unwrap();
        assert_eq!(doc.grid, Some(sample_grid()));

        let json = r#"{"n":3,"rows":"ADD","cols":"ADD","grid":[[1,6,8],[7,5,4],[9,3,2]]}"#;
        let from_json = PuzzleDocument::parse(json).unwrap();
        assert_eq!(from_json, doc);
        let value: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(from_json.to_json(), value);

        let bad = PuzzleDocument::parse("2\nAA\nAA\n1 2\n2 3\n");
        assert!(matches!(bad, Err(Error::NotAPermutation(4))));
    }

    #[test]
    fn validates_known_grid() {
        let p = SortingPuzzle::parse_words("ADD", "ADD").unwrap();
        assert!(validate_grid(&p, &sample_grid()).unwrap());

        // 6 and 8 swapped breaks the ascending first row
        let swapped = Grid::from_rows(vec![vec![1, 8, 6], vec![7, 5, 4], vec![9, 3, 2]]).unwrap();
        assert!(!validate_grid(&p, &swapped).unwrap());

        let one = SortingPuzzle::parse_words("A", "A").unwrap();
        assert!(validate_grid(&one, &Grid::from_rows(vec![vec![1]]).unwrap()).unwrap());

        let small = Grid::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert!(matches!(
            validate_grid(&p, &small),
            Err(Error::DimensionMismatch { puzzle: 3, grid: 2 })
        ));
    }

    #[test]
    fn a_columns_increase_downwards() {
        // column 1 of the first example grid reads 1, 7, 9 under an A label
        let g = sample_grid();
        assert_eq!((g.get(1, 1), g.get(2, 1), g.get(3, 1)), (1, 7, 9));
    }

    #[test]
    fn classifies_shapes() {
        let shape = |s: &str| classify_shape(&s.parse().unwrap());
        assert_eq!(shape("AAADD"), ShapeClass::AthenD(3));
        assert_eq!(shape("DDDD"), ShapeClass::UniformD);
        assert_eq!(shape("AAAA"), ShapeClass::UniformA);
        assert_eq!(shape("DAD"), ShapeClass::Other);
        assert_eq!(shape("DDA"), ShapeClass::DthenA(2));
        assert_eq!(shape("A"), ShapeClass::UniformA);
    }

    #[test]
    fn board_violations_on_partial_board() {
        let p = SortingPuzzle::parse_words("AA", "AA").unwrap();
        let board = vec![vec![Some(1), None], vec![None, Some(4)]];
        assert!(board_violations(&p, &board).unwrap().is_empty());

        let board = vec![vec![Some(4), Some(2)], vec![None, Some(4)]];
        let v = board_violations(&p, &board).unwrap();
        let kinds: Vec<_> = v.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::Duplicate));
        assert!(kinds.contains(&ViolationKind::Ascending));
    }

    #[test]
    fn board_violations_check_room_on_the_line() {
        let p = SortingPuzzle::parse_words("AAA", "AAA").unwrap();
        let mut board = vec![vec![None; 3]; 3];
        board[0][0] = Some(9);
        let v = board_violations(&p, &board).unwrap();
        let lines: Vec<_> = v.iter().map(|v| v.line.clone().unwrap()).collect();
        assert_eq!(
            lines,
            vec![
                LineRef {
                    axis: Axis::Row,
                    index: 1
                },
                LineRef {
                    axis: Axis::Col,
                    index: 1
                }
            ]
        );

        let board = vec![
            vec![Some(2), None, Some(3)],
            vec![None, None, None],
            vec![None, None, None],
        ];
        let v = board_violations(&p, &board).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].positions, vec![Cell::new(1, 1), Cell::new(1, 3)]);

        let d = SortingPuzzle::parse_words("DDD", "DDD").unwrap();
        let mut board = vec![vec![None; 3]; 3];
        board[0][0] = Some(9);
        board[2][2] = Some(1);
        assert!(board_violations(&d, &board).unwrap().is_empty());
    }

    fn puzzle_strategy() -> impl Strategy<Value = SortingPuzzle> {
        (1usize..8).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(|(r, c)| {
                    let word = |bits: Vec<bool>| {
                        LabelWord::new(
                            bits.into_iter()
                                .map(|b| if b { Label::D } else { Label::A })
                                .collect(),
                        )
                    };
                    SortingPuzzle::new(word(r), word(c)).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(p in puzzle_strategy()) {
            prop_assert_eq!(parse_puzzle(&format_puzzle(&p)).unwrap(), p);
        }

        #[test]
        fn validation_commutes_with_transpose(
            p in (1usize..5).prop_flat_map(|n| {
                let cells = n * n;
                (Just(n), proptest::collection::vec(any::<bool>(), 2 * n),
                 Just((1..=cells as u32).collect::<Vec<_>>()).prop_shuffle())
            })
        ) {
            let (n, bits, cells) = p;
            let w = |b: &[bool]| LabelWord::new(b.iter().map(|&x| if x { Label::D } else { Label::A }).collect());
            let puzzle = SortingPuzzle::new(w(&bits[..n]), w(&bits[n..])).unwrap();
            let grid = Grid::from_row_major(n, cells).unwrap();
            prop_assert_eq!(
                validate_grid(&puzzle, &grid).unwrap(),
                validate_grid(&puzzle.transposed(), &grid.transposed()).unwrap()
            );
        }
    }
}
