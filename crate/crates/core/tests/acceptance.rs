//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sortmatch_core::{
    boustrophedon, build_graph_permutation, build_graph_sorting, build_reduction, count_solutions,
    count_solvable_puzzles, find_cycle, fvs_bruteforce, grid_cycle_after_deletion,
    grid_deletion_bruteforce, hook_syt_count, is_solvable, is_unique, nearest_solvable,
    push_solution, repair_oracle, solve_by_toposort, validate_grid, verify_reduction, Digraph,
    Grid, Label, LabelWord, PermutationPuzzle, Role, SortingPuzzle,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn puzzle(r: &str, c: &str) -> SortingPuzzle {
    SortingPuzzle::parse_words(r, c).unwrap()
}

/// Label of a line of values, if it is monotone.
fn line_label(values: &[u32]) -> Option<Label> {
    if values.windows(2).all(|w| w[0] < w[1]) {
        Some(Label::A)
    } else if values.windows(2).all(|w| w[0] > w[1]) {
        Some(Label::D)
    } else {
        None
    }
}

/// The only puzzle a filled grid can solve, if any.
fn puzzle_of(n: usize, cells: &[u32]) -> Option<SortingPuzzle> {
    let mut rows = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(n);
    let mut line = vec![0; n];
    for i in 0..n {
        rows.push(line_label(&cells[i * n..(i + 1) * n])?);
    }
    for j in 0..n {
        for (i, slot) in line.iter_mut().enumerate() {
            *slot = cells[i * n + j];
        }
        cols.push(line_label(&line)?);
    }
    SortingPuzzle::new(LabelWord::new(rows), LabelWord::new(cols)).ok()
}

/// Solution counts of every puzzle of order `n` from a scan of all `(n²)!`
/// fillings (Heap's algorithm).
fn exhaustive_counts(n: usize) -> HashMap<SortingPuzzle, u64> {
    if n == 1 {
        // a single cell satisfies either label
        return SortingPuzzle::all(1).map(|p| (p, 1)).collect();
    }
    let len = n * n;
    let mut cells: Vec<u32> = (1..=len as u32).collect();
    let mut counts = HashMap::new();
    let mut record = |cells: &[u32]| {
        if let Some(p) = puzzle_of(n, cells) {
            *counts.entry(p).or_insert(0) += 1;
        }
    };
    record(&cells);
    let mut c = vec![0; len];
    let mut i = 1;
    while i < len {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            cells.swap(j, i);
            record(&cells);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    counts
}

fn census() -> Outcome {
    let expected = [4u64, 14, 36, 78, 156];
    for (n, &want) in (1..=5).zip(&expected) {
        let scanned = SortingPuzzle::all(n).filter(is_solvable).count() as u64;
        ensure(scanned == want, || {
            format!("n={n}: scan {scanned}, want {want}")
        })?;
        let formula = count_solvable_puzzles(n as u64);
        ensure(formula == BigUint::from(want), || {
            format!("n={n}: formula {formula}, want {want}")
        })?;
    }
    Ok("4, 14, 36, 78, 156 for n=1..5, scan = formula".into())
}

fn three_way_oracle() -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        let fillable = exhaustive_counts(n);
        for p in SortingPuzzle::all(n) {
            let by_rule = is_solvable(&p);
            let by_graph = find_cycle(&build_graph_sorting(&p)).is_none();
            let by_fill = fillable.contains_key(&p);
            ensure(by_rule == by_graph && by_graph == by_fill, || {
                format!("{p}: rule {by_rule}, graph {by_graph}, fill {by_fill}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} puzzles with n <= 3, 0 mismatches"))
}

fn counting() -> Outcome {
    let mut checked = 0;
    for n in 2..=3 {
        let truth = exhaustive_counts(n);
        for p in SortingPuzzle::all(n) {
            let got = count_solutions(&p).map_err(|e| format!("{p}: {e}"))?.value;
            let want = BigUint::from(truth.get(&p).copied().unwrap_or(0));
            ensure(got == want, || format!("{p}: counted {got}, scan {want}"))?;
            checked += 1;
        }
    }
    for (r, c, want) in [("AD", "AD", 4u32), ("ADD", "ADD", 60), ("DAD", "DDA", 0)] {
        let got = count_solutions(&puzzle(r, c)).unwrap().value;
        ensure(got == BigUint::from(want), || {
            format!("({r}, {c}): {got}, want {want}")
        })?;
    }
    Ok(format!(
        "{checked} puzzles exact; (AD,AD)=4, (ADD,ADD)=60, (DAD,DDA)=0"
    ))
}

/// Fillings of an `a x b` rectangle increasing along rows and columns.
fn syt_by_search(a: usize, b: usize) -> u64 {
    fn go(lengths: &mut [usize], b: usize, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for i in 0..lengths.len() {
            let room = lengths[i] < b && (i == 0 || lengths[i - 1] > lengths[i]);
            if room {
                lengths[i] += 1;
                total += go(lengths, b, left - 1);
                lengths[i] -= 1;
            }
        }
        total
    }
    go(&mut vec![0; a], b, a * b)
}

fn hook_formula() -> Outcome {
    for a in 0..=3 {
        for b in 0..=3 {
            let formula = hook_syt_count(a as u64, b as u64);
            let search = syt_by_search(a, b);
            ensure(formula == BigUint::from(search), || {
                format!("H({a},{b}) = {formula}, search {search}")
            })?;
        }
    }
    ensure(hook_syt_count(2, 3) == BigUint::from(5u32), || {
        "H(2,3) != 5".into()
    })?;
    Ok("H(a,b) = tableau search for a,b <= 3; H(2,3) = 5".into())
}

fn uniqueness() -> Outcome {
    let mut unique = 0;
    for n in 3..=4 {
        for p in SortingPuzzle::all(n) {
            let one = count_solutions(&p).unwrap().value == BigUint::from(1u32);
            ensure(one == is_unique(&p), || {
                format!("{p}: count==1 {one}, rule {}", is_unique(&p))
            })?;
            unique += usize::from(one);
        }
    }
    let snake = boustrophedon(&puzzle("AAAAA", "ADADA")).map_err(|e| e.to_string())?;
    let expected = vec![
        vec![1, 10, 11, 20, 21],
        vec![2, 9, 12, 19, 22],
        vec![3, 8, 13, 18, 23],
        vec![4, 7, 14, 17, 24],
        vec![5, 6, 15, 16, 25],
    ];
    ensure(snake.rows() == expected, || {
        format!("snake grid {:?}", snake.rows())
    })?;
    Ok(format!(
        "{unique} unique puzzles for n=3,4 match the rule; 5x5 snake matches"
    ))
}

fn repair() -> Outcome {
    let mut checked = 0;
    for n in 1..=5 {
        for p in SortingPuzzle::all(n) {
            let fast = nearest_solvable(&p);
            let (slow, _) = repair_oracle(&p).map_err(|e| e.to_string())?;
            ensure(fast.cost == slow, || {
                format!("{p}: {} vs oracle {slow}", fast.cost)
            })?;
            ensure(is_solvable(&fast.target), || {
                format!("{p}: target unsolvable")
            })?;
            ensure(p.distance(&fast.target) == fast.cost, || {
                format!("{p}: target at distance {}", p.distance(&fast.target))
            })?;
            checked += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 1_000_000;
    let mut word = || {
        LabelWord::new(
            (0..n)
                .map(|_| {
                    if rng.gen::<bool>() {
                        Label::A
                    } else {
                        Label::D
                    }
                })
                .collect(),
        )
    };
    let p = SortingPuzzle::new(word(), word()).unwrap();
    let started = Instant::now();
    let big = nearest_solvable(&p);
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("n=10^6 took {elapsed:?}")
    })?;
    ensure(
        is_solvable(&big.target) && p.distance(&big.target) == big.cost,
        || "n=10^6 target inconsistent".into(),
    )?;
    Ok(format!(
        "{checked} puzzles with n <= 5 match the oracle; n=10^6 in {:.3} s",
        elapsed.as_secs_f64()
    ))
}

fn five_vertex() -> Digraph {
    Digraph::from_json(r#"{"n":5,"edges":[[2,1],[2,4],[5,2],[5,4],[4,3],[1,3],[5,1],[4,1],[3,5]]}"#)
        .unwrap()
}

fn reduction_fidelity() -> Outcome {
    let h = five_vertex();
    let g = build_reduction(&h).map_err(|e| e.to_string())?;
    ensure(g.size() == 29, || format!("N = {}", g.size()))?;
    let report = verify_reduction(&g);
    ensure(report.passed(), || format!("{report:?}"))?;
    ensure(report.max_active_per_line <= 3, || {
        "line with more than 3 active".into()
    })?;
    ensure(grid_cycle_after_deletion(&g, &[]).is_some(), || {
        "G is acyclic".into()
    })?;
    for v in [2, 4] {
        ensure(
            grid_cycle_after_deletion(&g, &[g.key_of(v)]).is_none(),
            || format!("G - key {} still cyclic", v + 1),
        )?;
    }
    let fvs = fvs_bruteforce(&h, 3).map_err(|e| e.to_string())?;
    let del = grid_deletion_bruteforce(&g, 3).map_err(|e| e.to_string())?;
    let (fvs_len, del_len) = (fvs.map(|s| s.len()), del.map(|s| s.len()));
    ensure(fvs_len == Some(1) && del_len == Some(1), || {
        format!("min FVS {fvs_len:?}, min deletion {del_len:?}")
    })?;
    Ok(
        "N = 29, checks pass, G cyclic, G - k3 and G - k5 acyclic, min deletion = min FVS = 1"
            .into(),
    )
}

fn random_digraph(rng: &mut ChaCha8Rng) -> Digraph {
    let n = rng.gen_range(1..=5);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(0..=pairs.len().min(10));
    pairs.truncate(m);
    Digraph::new(n, pairs).unwrap()
}

fn reduction_equivalence() -> Outcome {
    const GRAPHS: usize = 60;
    const K_MAX: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cyclic = 0;
    for trial in 0..GRAPHS {
        let h = random_digraph(&mut rng);
        let tag = || format!("graph {trial} {}", h.to_json());
        let g = build_reduction(&h).map_err(|e| format!("{}: {e}", tag()))?;
        ensure(verify_reduction(&g).passed(), || {
            format!("{}: verification failed", tag())
        })?;

        let grid_cycle = grid_cycle_after_deletion(&g, &[]);
        ensure(h.is_acyclic() == grid_cycle.is_none(), || {
            format!("{}: acyclicity differs", tag())
        })?;
        if let Some(cycle) = &grid_cycle {
            cyclic += 1;
            ensure(
                cycle.iter().any(|&c| matches!(g.role(c), Role::Key(_))),
                || format!("{}: cycle avoids every key cell", tag()),
            )?;
        }

        let fvs = fvs_bruteforce(&h, K_MAX).map_err(|e| e.to_string())?;
        let del = grid_deletion_bruteforce(&g, K_MAX).map_err(|e| e.to_string())?;
        let (fvs_len, del_len) = (fvs.map(|s| s.len()), del.as_ref().map(|s| s.len()));
        ensure(fvs_len == del_len, || {
            format!("{}: min FVS {fvs_len:?}, min deletion {del_len:?}", tag())
        })?;
        if let Some(cells) = del {
            let pushed = push_solution(&g, &cells).map_err(|e| format!("{}: {e}", tag()))?;
            ensure(
                h.is_feedback_set(&pushed) && pushed.len() <= cells.len(),
                || format!("{}: pushed set {pushed:?} from {cells:?}", tag()),
            )?;
        }
    }
    Ok(format!(
        "{GRAPHS} random digraphs ({cyclic} cyclic), kMax = {K_MAX}, 0 mismatches"
    ))
}

fn permutation() -> Outcome {
    let id = vec![1, 2, 3];
    let pp = PermutationPuzzle::new(
        3,
        vec![id.clone(), id.clone(), id.clone()],
        vec![id.clone(), vec![2, 1, 3], id],
    )
    .map_err(|e| e.to_string())?;
    let g = build_graph_permutation(&pp);
    ensure(find_cycle(&g).is_none(), || {
        "3x3 instance has a cycle".into()
    })?;
    let expected = Grid::from_rows(vec![vec![1, 5, 6], vec![2, 3, 8], vec![4, 7, 9]]).unwrap();
    ensure(g.is_satisfied_by(&expected), || {
        "reference grid rejected".into()
    })?;
    let solved = solve_by_toposort(&g).map_err(|e| e.to_string())?;
    ensure(g.is_satisfied_by(&solved), || {
        "toposort grid rejected".into()
    })?;

    let mut embedded = 0;
    for n in 1..=4 {
        for p in SortingPuzzle::all(n) {
            let via_perm = build_graph_permutation(&PermutationPuzzle::from_sorting(&p));
            ensure(via_perm == build_graph_sorting(&p), || {
                format!("{p}: graphs differ")
            })?;
            if let Ok(grid) = solve_by_toposort(&via_perm) {
                ensure(matches!(validate_grid(&p, &grid), Ok(true)), || {
                    format!("{p}: toposort grid invalid")
                })?;
            }
            embedded += 1;
        }
    }
    Ok(format!(
        "3x3 instance solvable and grids validate; embedding equal on {embedded} puzzles"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("census", census, Duration::from_secs(5)),
        (
            "three-way solvability oracle",
            three_way_oracle,
            Duration::from_secs(120),
        ),
        ("counting", counting, Duration::from_secs(120)),
        ("hook formula", hook_formula, Duration::from_secs(5)),
        ("uniqueness", uniqueness, Duration::from_secs(60)),
        ("repair", repair, Duration::from_secs(60)),
        (
            "reduction fidelity",
            reduction_fidelity,
            Duration::from_secs(60),
        ),
        (
            "reduction equivalence corpus",
            reduction_equivalence,
            Duration::from_secs(300),
        ),
        ("permutation puzzles", permutation, Duration::from_secs(60)),
    ];
    let total = criteria.len();
    let mut failures = 0;
    for (name, check, limit) in criteria {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.2} s]", elapsed.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!("FAIL  {name}: {why} [{:.2} s]", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", total - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
