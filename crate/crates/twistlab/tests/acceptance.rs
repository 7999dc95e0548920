//! Acceptance gates, one test per criterion. Each prints a single pass/fail
//! line (run with `cargo test --test acceptance -- --nocapture` to see them
//! for passing tests too). All numeric checks are exact integer equality;
//! the wall-clock ceilings are pinned as constants right here.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use twistlab::alexander::{alexander_from_braid, alexander_from_hfk, torus_knot_delta};
use twistlab::braids::{catalog_find, insert_twists, BraidWord, CATALOG};
use twistlab::complex::{
    enumerate_all_states, enumerate_extremal_states, hfk_table, max_alexander, tilde_boundary,
    Budgets, HfkOptions, TableMode,
};
use twistlab::gf2::squares_to_zero;
use twistlab::grid::{alexander_weights, braid_to_grid, rectangles_between, GridDiagram, GridState};
use twistlab::stabilize::{
    detect_delta_stabilization, detect_hfk_stabilization, slopes, sweep_family, End, SweepOptions,
};

const TIME_ORACLE_EQUIVALENCE: Duration = Duration::from_secs(60);
const TIME_GRADING_LAWS: Duration = Duration::from_secs(60);
const TIME_TWO_STRAND_DELTA: Duration = Duration::from_secs(10);
const TIME_THREE_STRAND_DELTA: Duration = Duration::from_secs(30);
const TIME_HOMOLOGY_PROFILES: Duration = Duration::from_secs(600);
const TIME_SLOPES: Duration = Duration::from_secs(60);
const TIME_SYMMETRY: Duration = Duration::from_secs(120);
const TIME_EXTREMAL: Duration = Duration::from_secs(60);

fn finish(criterion: u32, problems: Vec<String>, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed <= limit;
    println!(
        "criterion {criterion}: {} ({elapsed:.2?})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(
        problems.is_empty(),
        "criterion {criterion}: {}",
        problems.join("; ")
    );
    assert!(
        elapsed <= limit,
        "criterion {criterion}: took {elapsed:.2?}, limit {limit:.2?}"
    );
}

fn full_table(word: &BraidWord) -> twistlab::complex::HFKTable {
    let options = HfkOptions {
        mode: TableMode::Full,
        budgets: Budgets::default(),
    };
    hfk_table(word, &options).expect("full table within budget")
}

fn twisted(name: &str, m: u32) -> BraidWord {
    let knot = catalog_find(name).expect("catalog name");
    insert_twists(&knot.word(), &knot.region, m).expect("twist insertion")
}

fn no_hfk_options() -> SweepOptions {
    SweepOptions {
        compute_hfk: false,
        ..SweepOptions::default()
    }
}

/// Polynomial from the homology table equals the determinant-based one, for
/// every catalog knot and twist extension fitting in a 7x7 grid.
#[test]
fn criterion_1_polynomial_oracle_equivalence() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut cases = 0;
    for knot in CATALOG {
        for m in 0.. {
            let word = insert_twists(&knot.word(), &knot.region, m).unwrap();
            if word.grid_size() > 7 {
                break;
            }
            let from_homology = alexander_from_hfk(&full_table(&word)).unwrap();
            let from_burau = alexander_from_braid(&word).unwrap();
            if from_homology != from_burau {
                problems.push(format!(
                    "{} m={m}: {from_homology} vs {from_burau}",
                    knot.name
                ));
            }
            cases += 1;
        }
    }
    if cases != 7 {
        problems.push(format!("expected 7 cases under the size limit, got {cases}"));
    }
    finish(1, problems, start, TIME_ORACLE_EQUIVALENCE);
}

/// The differential squares to zero and the grading steps across any
/// connecting rectangle follow the marker counts, exhaustively on small grids.
#[test]
fn criterion_2_boundary_and_grading_laws() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let grids = vec![
        ("unknot", braid_to_grid(&twisted("unknot", 0)).unwrap()),
        ("unknot+1", braid_to_grid(&twisted("unknot", 1)).unwrap()),
        ("trefoil2", braid_to_grid(&twisted("trefoil2", 0)).unwrap()),
        // no braid closure gives a knot on a 6x6 grid, so cover that size
        // with a hand-built diagram; the laws do not care about knottedness
        (
            "diagonal6",
            GridDiagram::from_markings(vec![1, 2, 3, 4, 5, 0], vec![0, 1, 2, 3, 4, 5]).unwrap(),
        ),
    ];
    let budgets = Budgets::default();
    for (name, grid) in &grids {
        let n = grid.size();
        let states = enumerate_all_states(grid, &budgets).unwrap();
        let boundary = tilde_boundary(&states, grid, &budgets).unwrap();
        if !squares_to_zero(&boundary) {
            problems.push(format!("{name}: boundary does not square to zero"));
        }
        for x in &states {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    let mut swapped = x.rows().to_vec();
                    swapped.swap(c1, c2);
                    let y = GridState::new(grid, swapped);
                    for rect in rectangles_between(grid, x.rows(), c1, c2) {
                        let da = x.alexander - y.alexander;
                        if da != rect.x_count as i64 - rect.o_count as i64 {
                            problems.push(format!("{name}: Alexander step law broken"));
                        }
                        if rect.empty {
                            let dm = x.maslov - y.maslov;
                            if dm != 1 - 2 * rect.o_count as i64 {
                                problems.push(format!("{name}: Maslov step law broken"));
                            }
                        }
                    }
                }
            }
            if problems.len() > 4 {
                break; // enough evidence
            }
        }
    }
    problems.dedup();
    finish(2, problems, start, TIME_GRADING_LAWS);
}

/// Width-2 family over the unknot: both polynomial ends lock into the same
/// three-coefficient window, degrees drifting one per twist, and every
/// polynomial equals the closed-form torus value.
#[test]
fn criterion_3_two_strand_delta_stabilization() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let unknot = catalog_find("unknot").unwrap();
    let sweep = sweep_family(&unknot.word(), &unknot.region, 0, 25, &no_hfk_options()).unwrap();
    let top = detect_delta_stabilization(&sweep, End::Top, 3).unwrap();
    let bottom = detect_delta_stabilization(&sweep, End::Bottom, 3).unwrap();
    if !top.stable || top.shift_per_step != Some(1) {
        problems.push(format!(
            "top end: stable={} shift={:?}",
            top.stable, top.shift_per_step
        ));
    }
    if !bottom.stable || bottom.shift_per_step != Some(-1) {
        problems.push(format!(
            "bottom end: stable={} shift={:?}",
            bottom.stable, bottom.shift_per_step
        ));
    }
    if top.window != bottom.window {
        problems.push("ends disagree; the windows should be mirror images".into());
    }
    let expected: Vec<BigInt> = [1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
    if top.window != expected {
        problems.push(format!("window {:?}", top.window));
    }
    for record in &sweep.records {
        let oracle = torus_knot_delta(2, 2 * u64::from(record.m) + 1).unwrap();
        if record.delta != oracle {
            problems.push(format!("m={}: polynomial differs from oracle", record.m));
        }
    }
    finish(3, problems, start, TIME_TWO_STRAND_DELTA);
}

/// Width-3 family over the trefoil: the bottom four coefficients stabilize
/// and the renormalized drift rate is an integer in [1, 2].
#[test]
fn criterion_4_three_strand_bottom_stabilization() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let trefoil = catalog_find("trefoil3").unwrap();
    let sweep = sweep_family(&trefoil.word(), &trefoil.region, 0, 40, &no_hfk_options()).unwrap();
    let bottom = detect_delta_stabilization(&sweep, End::Bottom, 4).unwrap();
    if !bottom.stable {
        problems.push("bottom coefficients never locked".into());
    }
    match bottom.r {
        Some(r) => {
            let low = Ratio::from_integer(1);
            let high = Ratio::from_integer(2);
            if r < low || r > high {
                problems.push(format!("rate {r} outside [1, 2]"));
            }
            if bottom.r_is_integer != Some(true) {
                problems.push(format!("rate {r} is not an integer"));
            }
        }
        None => problems.push("no drift rate reported".into()),
    }
    finish(4, problems, start, TIME_THREE_STRAND_DELTA);
}

/// Top homology profiles along the families. Part (a), width 2: the top two
/// levels repeat exactly with Alexander shift 1 per twist. Part (b), width 3:
/// the top level should be one-dimensional shifting by 3, but only the first
/// two records are computable; the third needs the retained-state set to
/// reach six levels down from the chain top, which exceeds any desk-scale
/// budget (measured: 2048 states at the top chain level, 52224 one level
/// down, 714240 two, cumulative past 5*10^7 at the fourth of the six levels
/// needed, with matrix rank work growing as the square of that). The reduced
/// cap below surfaces the same failure in under a second instead of after
/// minutes of burn.
#[test]
fn criterion_5_extremal_homology_profiles() {
    let start = Instant::now();
    let mut problems = Vec::new();

    let unknot = catalog_find("unknot").unwrap();
    let options_a = SweepOptions {
        k_levels: 2,
        ..SweepOptions::default()
    };
    let sweep_a = sweep_family(&unknot.word(), &unknot.region, 0, 5, &options_a).unwrap();
    let top = detect_hfk_stabilization(&sweep_a, 2).unwrap();
    if !top.stable || top.shift_per_step != Some(1) {
        problems.push(format!(
            "width 2: stable={} shift={:?}",
            top.stable, top.shift_per_step
        ));
    }
    let expected_profile = vec![vec![(0, 1)], vec![(-1, 1)]];
    if top.stable_profile.as_deref() != Some(&expected_profile[..]) {
        problems.push(format!("width 2 profile {:?}", top.stable_profile));
    }
    let last = sweep_a.records.last().unwrap();
    let truncated = last.hfk.as_ref().map(|t| t.truncated);
    if last.grid_size != 13 || truncated != Some(true) {
        problems.push(format!(
            "width 2 endpoint should be a truncated 13-grid, got size {} truncated {truncated:?}",
            last.grid_size
        ));
    }

    let trefoil = catalog_find("trefoil3").unwrap();
    let options_b = SweepOptions {
        k_levels: 1,
        budgets: Budgets {
            max_states: 200_000,
            ..Budgets::default()
        },
        ..SweepOptions::default()
    };
    let sweep_b = sweep_family(&trefoil.word(), &trefoil.region, 0, 2, &options_b).unwrap();
    let genera: Vec<Option<i64>> = sweep_b
        .records
        .iter()
        .map(|r| r.hfk.as_ref().and_then(|t| t.genus()))
        .collect();
    if genera[0] != Some(1) || genera[1] != Some(4) {
        problems.push(format!("width 3 feasible records: genera {genera:?}"));
    }
    for (i, expected_top) in [(0usize, 1i64), (1, 4)] {
        let table = sweep_b.records[i].hfk.as_ref().unwrap();
        let dims = table.level_entries(expected_top);
        if dims.iter().map(|&(_, d)| d).sum::<u64>() != 1 {
            problems.push(format!("width 3 m={i}: top level not one-dimensional"));
        }
    }
    match &sweep_b.records[2].hfk_error {
        Some(err) => problems.push(format!(
            "width 3 m=2 is out of reach, as measured: {err}; \
             the first two records do show a one-dimensional top level stepping 1 -> 4"
        )),
        None => {
            // If this ever computes, the criterion is met in full: check it.
            let table = sweep_b.records[2].hfk.as_ref().unwrap();
            if table.genus() != Some(7) {
                problems.push(format!("width 3 m=2 genus {:?}", table.genus()));
            }
        }
    }
    finish(5, problems, start, TIME_HOMOLOGY_PROFILES);
}

/// Genus and top-level growth rates equal w(w-1)/2 for a twist region of
/// width w, matching the closed-form torus-knot genus.
#[test]
fn criterion_6_slopes_match_torus_genus() {
    let start = Instant::now();
    let mut problems = Vec::new();

    // width 2: T(2, 2m+1), genus m
    let unknot = catalog_find("unknot").unwrap();
    let options = SweepOptions {
        k_levels: 2,
        ..SweepOptions::default()
    };
    let sweep2 = sweep_family(&unknot.word(), &unknot.region, 0, 25, &options).unwrap();
    let (genus_slope, top_slope) = slopes(&sweep2).unwrap();
    if genus_slope != Ratio::from_integer(1) || top_slope != Ratio::from_integer(1) {
        problems.push(format!("width 2 slopes {genus_slope}, {top_slope}"));
    }
    for record in &sweep2.records {
        let oracle = i64::from(record.m); // (2-1)(q-1)/2 with q = 2m+1
        if record.hfk.as_ref().and_then(|t| t.genus()) != Some(oracle) {
            problems.push(format!("width 2 m={}: genus off oracle", record.m));
        }
    }

    // width 3: T(3, 3m+2), genus 3m+1; only two records are affordable and
    // two points pin a line exactly
    let trefoil = catalog_find("trefoil3").unwrap();
    let options3 = SweepOptions {
        k_levels: 1,
        ..SweepOptions::default()
    };
    let sweep3 = sweep_family(&trefoil.word(), &trefoil.region, 0, 1, &options3).unwrap();
    let (genus_slope3, top_slope3) = slopes(&sweep3).unwrap();
    if genus_slope3 != Ratio::from_integer(3) || top_slope3 != Ratio::from_integer(3) {
        problems.push(format!("width 3 slopes {genus_slope3}, {top_slope3}"));
    }
    for record in &sweep3.records {
        let oracle = 3 * i64::from(record.m) + 1; // (3-1)(q-1)/2 with q = 3m+2
        if record.hfk.as_ref().and_then(|t| t.genus()) != Some(oracle) {
            problems.push(format!("width 3 m={}: genus off oracle", record.m));
        }
    }
    finish(6, problems, start, TIME_SLOPES);
}

/// Every full table is symmetric in the Alexander grading, and its graded
/// Euler characteristic is the symmetric normalized polynomial with value 1
/// at t = 1.
#[test]
fn criterion_7_symmetry_and_euler_characteristic() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut cases = 0;
    for knot in CATALOG {
        for m in 0.. {
            let word = insert_twists(&knot.word(), &knot.region, m).unwrap();
            if word.grid_size() > 9 {
                break;
            }
            let table = full_table(&word);
            if !table.is_symmetric() {
                problems.push(format!("{} m={m}: table asymmetric", knot.name));
            }
            let delta = alexander_from_hfk(&table).unwrap();
            if !delta.is_symmetric() {
                problems.push(format!("{} m={m}: polynomial asymmetric", knot.name));
            }
            if delta.eval_one() != BigInt::from(1) {
                problems.push(format!("{} m={m}: value at 1 is {}", knot.name, delta.eval_one()));
            }
            cases += 1;
        }
    }
    if cases != 9 {
        problems.push(format!("expected 9 full tables, got {cases}"));
    }
    finish(7, problems, start, TIME_SYMMETRY);
}

/// The budgeted enumeration returns exactly the states the brute-force
/// filter does, and on an 11-grid it retains under 1% of the 11! states.
#[test]
fn criterion_8_extremal_enumeration() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let budgets = Budgets::default();
    for knot in CATALOG {
        let word = knot.word();
        if word.grid_size() > 6 {
            continue;
        }
        let grid = braid_to_grid(&word).unwrap();
        let weights = alexander_weights(&grid);
        let all = enumerate_all_states(&grid, &budgets).unwrap();
        let a_star = max_alexander(&grid).0;
        for k in 1..=4u32 {
            let floor = a_star - i64::from(k) + 1;
            let mut brute: Vec<&[u8]> = all
                .iter()
                .filter(|s| s.alexander >= floor)
                .map(|s| s.rows())
                .collect();
            brute.sort_unstable();
            let fast = enumerate_extremal_states(&grid, &weights, k, &budgets).unwrap();
            let fast_rows: Vec<&[u8]> = fast.iter().map(|s| s.rows()).collect();
            if brute != fast_rows {
                problems.push(format!("{} k={k}: enumerations differ", knot.name));
            }
        }
    }
    // T(2,9) on an 11-grid; the retained share is a budget, not an oracle
    let word = twisted("trefoil2", 3);
    let grid = braid_to_grid(&word).unwrap();
    let weights = alexander_weights(&grid);
    let retained = enumerate_extremal_states(&grid, &weights, 2, &budgets)
        .unwrap()
        .len() as u64;
    let fact11: u64 = (1..=11).product();
    if retained * 100 >= fact11 {
        problems.push(format!("retained {retained} of {fact11} states"));
    }
    finish(8, problems, start, TIME_EXTREMAL);
}
