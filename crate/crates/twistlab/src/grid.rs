//! Toroidal grid diagrams of knots: construction from braid closures,
//! bigradings of grid states, and the rectangle combinatorics feeding the
//! boundary map.
//!
//! An `N x N` grid carries one `O` and one `X` marking per row and per
//! column. A grid state is a permutation placing one point on each vertical
//! and horizontal grid line; points sit at line intersections `(c, r)` while
//! markings sit at cell centers `(c + 1/2, r + 1/2)`.

use crate::assignment;
use crate::braids::BraidWord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDiagram {
    size: usize,
    /// Row of the `O` marking in each column.
    o_rows: Vec<usize>,
    /// Row of the `X` marking in each column.
    x_rows: Vec<usize>,
}

impl GridDiagram {
    /// Validates a marking layout: both assignments are permutations of the
    /// rows and no cell carries both markings. Grids smaller than 2x2 cannot
    /// satisfy that and are rejected.
    pub fn from_markings(o_rows: Vec<usize>, x_rows: Vec<usize>) -> Result<Self> {
        let n = o_rows.len();
        if n < 2 {
            return Err(Error::Internal("grid size must be at least 2".into()));
        }
        if x_rows.len() != n {
            return Err(Error::Internal("marking vectors disagree on grid size".into()));
        }
        for rows in [&o_rows, &x_rows] {
            let mut seen = vec![false; n];
            for &r in rows.iter() {
                if r >= n || seen[r] {
                    return Err(Error::Internal("markings are not one per row".into()));
                }
                seen[r] = true;
            }
        }
        if o_rows.iter().zip(&x_rows).any(|(o, x)| o == x) {
            return Err(Error::Internal("a cell carries both markings".into()));
        }
        Ok(GridDiagram { size: n, o_rows, x_rows })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn o_rows(&self) -> &[usize] {
        &self.o_rows
    }

    pub fn x_rows(&self) -> &[usize] {
        &self.x_rows
    }

    /// Number of link components traced by alternating vertical and
    /// horizontal arcs between the markings.
    pub fn component_count(&self) -> usize {
        let mut o_col_of_row = vec![0usize; self.size];
        for (c, &r) in self.o_rows.iter().enumerate() {
            o_col_of_row[r] = c;
        }
        let mut seen = vec![false; self.size];
        let mut components = 0;
        for start in 0..self.size {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut col = start;
            while !seen[col] {
                seen[col] = true;
                // vertical arc to the X in this column, horizontal arc to
                // the O in that row, which names the next column
                col = o_col_of_row[self.x_rows[col]];
            }
        }
        components
    }

    /// Debug rendering: one line per row, top row first, cells drawn as
    /// `.`, `O`, or `X`.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity((self.size + 1) * self.size);
        for r in (0..self.size).rev() {
            for c in 0..self.size {
                out.push(if self.o_rows[c] == r {
                    'O'
                } else if self.x_rows[c] == r {
                    'X'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Braid closure to grid
// ---------------------------------------------------------------------------

/// Builds a grid diagram of the knot closure of `word` with
/// `N = strands + letters` (minimum 2).
///
/// The braid runs left to right with one column per letter; at each letter
/// the over strand takes a vertical jog to a fresh row just past the under
/// strand, so vertical always crosses over horizontal with the letter's
/// sign. The first `strands` columns close the braid around the torus, one
/// vertical jog per strand. Horizontal segments carry `O` at their start and
/// `X` at their end.
pub fn braid_to_grid(word: &BraidWord) -> Result<GridDiagram> {
    let components = word.closure_component_count();
    if components != 1 {
        return Err(Error::NotAKnot { components });
    }
    let n = word.strands();
    if n == 1 {
        // 1x1 degenerate unknot, padded to the smallest legal grid
        return GridDiagram::from_markings(vec![0, 1], vec![1, 0]);
    }
    let big_n = n + word.letters().len();

    // Height tokens ordered bottom to top. Token `s` for `s < n` is the
    // initial height of the strand entering at position `s`; each letter
    // adds one fresh token.
    let mut order: Vec<usize> = (0..n).collect();
    let mut next_token = n;
    let mut cur_token: Vec<usize> = (0..n).collect();
    // Column where the currently open horizontal segment of each strand
    // begins; strand `s` starts at closure column `s`.
    let mut seg_start: Vec<usize> = (0..n).collect();
    let mut pos_to_strand: Vec<usize> = (0..n).collect();
    // Completed horizontal segments as (height token, start col, end col).
    let mut segments: Vec<(usize, usize, usize)> = Vec::with_capacity(big_n);

    for (j, &letter) in word.letters().iter().enumerate() {
        let col = n + j;
        let slot = letter.unsigned_abs() as usize - 1;
        let (lower, upper) = (pos_to_strand[slot], pos_to_strand[slot + 1]);
        // positive: the lower strand jogs up just above the upper one;
        // negative: the upper strand jogs down just below the lower one
        let (jogger, anchor, above) = if letter > 0 {
            (lower, cur_token[upper], true)
        } else {
            (upper, cur_token[lower], false)
        };
        let anchor_idx = order
            .iter()
            .position(|&t| t == anchor)
            .expect("live tokens stay in the order");
        let token = next_token;
        next_token += 1;
        order.insert(if above { anchor_idx + 1 } else { anchor_idx }, token);
        segments.push((cur_token[jogger], seg_start[jogger], col));
        cur_token[jogger] = token;
        seg_start[jogger] = col;
        pos_to_strand.swap(slot, slot + 1);
    }

    // Close up: the strand finishing at position t jogs in column t onto the
    // initial height of the strand that entered at position t.
    for (t, &s) in pos_to_strand.iter().enumerate() {
        segments.push((cur_token[s], seg_start[s], t));
    }

    let mut row_of = vec![0usize; next_token];
    for (row, &tok) in order.iter().enumerate() {
        row_of[tok] = row;
    }
    let mut o_rows = vec![usize::MAX; big_n];
    let mut x_rows = vec![usize::MAX; big_n];
    for (token, start, end) in segments {
        o_rows[start] = row_of[token];
        x_rows[end] = row_of[token];
    }
    // In the raw coordinates the grading conventions read each positive
    // letter as a negative crossing. Reflecting the rows flips the plane
    // orientation and with it every crossing sign, so positive braid words
    // close to positive knots.
    for r in o_rows.iter_mut().chain(x_rows.iter_mut()) {
        *r = big_n - 1 - *r;
    }
    GridDiagram::from_markings(o_rows, x_rows)
}

// ---------------------------------------------------------------------------
// Gradings
// ---------------------------------------------------------------------------

/// A grid state with its bigrading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridState {
    rows: Vec<u8>,
    pub alexander: i64,
    pub maslov: i64,
}

impl GridState {
    pub fn new(grid: &GridDiagram, rows: Vec<u8>) -> Self {
        let (alexander, maslov) = grading_of(grid, &rows);
        GridState { rows, alexander, maslov }
    }

    pub fn rows(&self) -> &[u8] {
        &self.rows
    }
}

/// Count of pairs `(a, b)` with `a` strictly southwest of `b`, over point
/// sets in doubled coordinates (so markings at half-integers stay integral).
fn sw_pairs(a: &[(i64, i64)], b: &[(i64, i64)]) -> i64 {
    let mut count = 0;
    for &(ax, ay) in a {
        for &(bx, by) in b {
            if ax < bx && ay < by {
                count += 1;
            }
        }
    }
    count
}

fn state_points(rows: &[u8]) -> Vec<(i64, i64)> {
    rows.iter().enumerate().map(|(c, &r)| (2 * c as i64, 2 * r as i64)).collect()
}

fn marking_points(marking_rows: &[usize]) -> Vec<(i64, i64)> {
    marking_rows
        .iter()
        .enumerate()
        .map(|(c, &r)| (2 * c as i64 + 1, 2 * r as i64 + 1))
        .collect()
}

/// Bigrading `(alexander, maslov)` of a state. With `J(A, B)` the symmetric
/// average of southwest pair counts,
/// `M_O(x) = J(x,x) - 2J(x,O) + J(O,O) + 1`, `M_X` likewise with `X`,
/// the Maslov grading is `M_O` and the Alexander grading is
/// `(M_O - M_X - (N - 1)) / 2`. Panics if the latter is not an integer,
/// which cannot happen on a knot grid.
pub fn grading_of(grid: &GridDiagram, rows: &[u8]) -> (i64, i64) {
    assert_eq!(rows.len(), grid.size());
    let x_pts = state_points(rows);
    let o_marks = marking_points(grid.o_rows());
    let x_marks = marking_points(grid.x_rows());
    let jxx = sw_pairs(&x_pts, &x_pts);
    // 2J(x, P) for each marking set
    let two_j_o = sw_pairs(&x_pts, &o_marks) + sw_pairs(&o_marks, &x_pts);
    let two_j_x = sw_pairs(&x_pts, &x_marks) + sw_pairs(&x_marks, &x_pts);
    let m_o = jxx - two_j_o + sw_pairs(&o_marks, &o_marks) + 1;
    let m_x = jxx - two_j_x + sw_pairs(&x_marks, &x_marks) + 1;
    let a2 = m_o - m_x - (grid.size() as i64 - 1);
    assert!(a2 % 2 == 0, "half-integral Alexander grading; grid is not a knot");
    (a2 / 2, m_o)
}

// ---------------------------------------------------------------------------
// Alexander grading as an assignment objective
// ---------------------------------------------------------------------------

/// Column weights realizing the Alexander grading of every state as
/// `sum_c weights[c][rows[c]] + constant`. The quadratic terms of the
/// Maslov formula cancel in `M_O - M_X`, leaving a per-column sum; weights
/// are gauged so each column's minimum is 0.
#[derive(Debug, Clone)]
pub struct AlexanderWeights {
    pub weights: Vec<Vec<i64>>,
    pub constant: i64,
}

impl AlexanderWeights {
    pub fn evaluate(&self, rows: &[u8]) -> i64 {
        let mut acc = self.constant;
        for (c, &r) in rows.iter().enumerate() {
            acc += self.weights[c][r as usize];
        }
        acc
    }

    /// Maximum Alexander grading over all states, with one witness state and
    /// the dual potentials certifying optimality.
    pub fn maximize(&self) -> assignment::MaxAssignment {
        let mut sol = assignment::solve_max(&self.weights);
        sol.value += self.constant;
        sol
    }

    /// Minimum Alexander grading over all states.
    pub fn minimize(&self) -> i64 {
        let negated: Vec<Vec<i64>> = self
            .weights
            .iter()
            .map(|row| row.iter().map(|&w| -w).collect())
            .collect();
        self.constant - assignment::solve_max(&negated).value
    }
}

pub fn alexander_weights(grid: &GridDiagram) -> AlexanderWeights {
    let n = grid.size();
    let o_marks = marking_points(grid.o_rows());
    let x_marks = marking_points(grid.x_rows());
    // doubled weight of placing the state point (c, r):
    // (# X comparable with it) - (# O comparable with it)
    let comparable = |marks: &[(i64, i64)], px: i64, py: i64| -> i64 {
        marks
            .iter()
            .filter(|&&(mx, my)| (px < mx && py < my) || (mx < px && my < py))
            .count() as i64
    };
    let mut doubled = vec![vec![0i64; n]; n];
    for c in 0..n {
        for r in 0..n {
            let (px, py) = (2 * c as i64, 2 * r as i64);
            doubled[c][r] = comparable(&x_marks, px, py) - comparable(&o_marks, px, py);
        }
    }
    let mut doubled_constant =
        sw_pairs(&o_marks, &o_marks) - sw_pairs(&x_marks, &x_marks) - (n as i64 - 1);
    // gauge: shift each column so its minimum weight is 0
    let mut weights = vec![vec![0i64; n]; n];
    for c in 0..n {
        let min = *doubled[c].iter().min().expect("nonempty column");
        doubled_constant += min;
        for r in 0..n {
            let shifted = doubled[c][r] - min;
            debug_assert!(shifted % 2 == 0, "column weights must share parity");
            weights[c][r] = shifted / 2;
        }
    }
    assert!(
        doubled_constant % 2 == 0,
        "half-integral Alexander constant; grid is not a knot"
    );
    AlexanderWeights { weights, constant: doubled_constant / 2 }
}

// ---------------------------------------------------------------------------
// Rectangles
// ---------------------------------------------------------------------------

/// A toroidal rectangle with half-open column span `[col_start, col_end)`
/// and row span `[row_start, row_end)`, both wrapping mod N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rectangle {
    pub col_start: usize,
    pub col_end: usize,
    pub row_start: usize,
    pub row_end: usize,
    pub x_count: usize,
    pub o_count: usize,
    /// No state point in the interior.
    pub empty: bool,
}

/// Membership in the half-open cyclic interval `[start, end)`, `start != end`.
#[inline]
fn in_span(start: usize, end: usize, v: usize) -> bool {
    if start < end {
        start <= v && v < end
    } else {
        v >= start || v < end
    }
}

/// Membership in the open cyclic interval `(start, end)`.
#[inline]
fn in_open(start: usize, end: usize, v: usize, n: usize) -> bool {
    let s = (start + 1) % n;
    if s == end {
        return false;
    }
    in_span(s, end, v)
}

fn make_rectangle(
    grid: &GridDiagram,
    rows: &[u8],
    col_start: usize,
    col_end: usize,
    row_start: usize,
    row_end: usize,
) -> Rectangle {
    let n = grid.size();
    let mut x_count = 0;
    let mut o_count = 0;
    let mut empty = true;
    let mut c = col_start;
    loop {
        if in_span(row_start, row_end, grid.x_rows()[c]) {
            x_count += 1;
        }
        if in_span(row_start, row_end, grid.o_rows()[c]) {
            o_count += 1;
        }
        // interior state points: strictly inside both spans
        if c != col_start && in_open(row_start, row_end, rows[c] as usize, n) {
            empty = false;
        }
        c = (c + 1) % n;
        if c == col_end {
            break;
        }
    }
    Rectangle { col_start, col_end, row_start, row_end, x_count, o_count, empty }
}

/// Both toroidal rectangles from state `x` to the state that swaps the rows
/// of columns `c1 < c2`. Their corners lie on `x` at southwest and
/// northeast.
pub fn rectangles_between(grid: &GridDiagram, rows: &[u8], c1: usize, c2: usize) -> [Rectangle; 2] {
    let (r1, r2) = (rows[c1] as usize, rows[c2] as usize);
    [
        make_rectangle(grid, rows, c1, c2, r1, r2),
        make_rectangle(grid, rows, c2, c1, r2, r1),
    ]
}

/// All empty rectangles leaving `x`, with their target states.
pub fn empty_rectangles_from(grid: &GridDiagram, x: &GridState) -> Vec<(GridState, Rectangle)> {
    let n = grid.size();
    let mut out = Vec::new();
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            for rect in rectangles_between(grid, x.rows(), c1, c2) {
                if rect.empty {
                    let mut rows = x.rows().to_vec();
                    rows.swap(c1, c2);
                    out.push((GridState::new(grid, rows), rect));
                }
            }
        }
    }
    out
}
