//! Engine for sorting match puzzles.
//!
//! A sorting match puzzle of order `n` labels every row and column of an
//! `n x n` grid with `A` (ascending) or `D` (descending); a solution places
//! `1..=n²` so that every line respects its label. This crate decides
//! solvability, constructs and counts solutions, computes the nearest
//! solvable labelling, solves the generalized permutation puzzles through
//! their constraint graph, and builds the grid-acyclification instance used
//! to show that repairing permutation puzzles is hard.
//!
//! Conventions: row 1 is the top row and column 1 the leftmost. Rows are
//! read left to right, columns top to bottom, so an `A` column increases
//! downwards.

pub mod budget;
pub mod counting;
pub mod error;
pub mod graph;
pub mod hint;
pub mod model;
pub mod reduction;
pub mod repair;
pub mod solvability;

pub use budget::Budget;
pub use counting::{
    complete_assignment, count_linear_extensions, count_solutions, count_solutions_with,
    count_solvable_puzzles, enumerate_solutions, enumerate_solutions_with, hook_syt_count,
    CountMethod, CountResult,
};
pub use error::{Error, Result};
pub use graph::{
    build_graph_permutation, build_graph_sorting, find_cycle, is_solvable_permutation,
    solve_by_toposort, ConstraintGraph, PermutationPuzzle,
};
pub use hint::{next_hint, Hint};
pub use model::{
    board_violations, classify_shape, format_puzzle, parse_puzzle, validate_grid, Cell, Grid,
    Label, LabelWord, PuzzleDocument, ShapeClass, SortingPuzzle, Violation, ViolationKind,
};
pub use reduction::{
    build_reduction, fvs_bruteforce, grid_cycle_after_deletion, grid_deletion_bruteforce,
    lift_solution, push_solution, verify_reduction, Digraph, GridReduction, ReductionReport, Role,
};
pub use repair::{
    min_cost_monotone, nearest_solvable, prefix_profile, repair_oracle, Direction, PrefixProfile,
    RepairResult, RepairStrategy,
};
pub use solvability::{
    boustrophedon, construct_solution, forbidden_witness, is_solvable, is_unique, ForbiddenWitness,
    Quadrant, QuadrantFill,
};
