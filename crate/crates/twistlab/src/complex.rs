//! Grid chain complexes over GF(2) and the homology tables built from them.
//!
//! The pipeline is: enumerate states (all of them, or only the top few
//! Alexander levels via reduced costs), build the boundary matrix that counts
//! empty rectangles avoiding all markings, take homology blockwise per
//! bigrading, and then peel off the `(grid size - 1)` tensor factors that the
//! planar theory carries relative to the minimal invariant.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::braids::BraidWord;
use crate::error::{Error, Result};
use crate::gf2::SparseGf2;
use crate::grid::{
    alexander_weights, braid_to_grid, rectangles_between, AlexanderWeights, GridDiagram,
    GridState,
};

/// Resource caps for enumeration and boundary assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum number of states retained across all levels.
    pub max_states: u64,
    /// Maximum number of nonzero boundary entries.
    pub max_entries: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_states: 50_000_000,
            max_entries: 2_000_000_000,
        }
    }
}

/// Which complex a table of dimensions came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Full grid complex; carries extra tensor factors.
    Tilde,
    /// The minimal invariant, after deconvolution.
    Hat,
}

/// Bigraded dimensions keyed by (alexander, maslov).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDims {
    pub grid_size: usize,
    pub flavor: Flavor,
    pub dims: BTreeMap<(i64, i64), u64>,
}

impl GradedDims {
    pub fn total_dim(&self) -> u64 {
        self.dims.values().sum()
    }

    pub fn level_dim(&self, a: i64) -> u64 {
        self.dims
            .iter()
            .filter(|&(&(al, _), _)| al == a)
            .map(|(_, &d)| d)
            .sum()
    }

    pub fn max_level(&self) -> Option<i64> {
        self.dims.keys().map(|&(a, _)| a).max()
    }

    pub fn min_level(&self) -> Option<i64> {
        self.dims.keys().map(|&(a, _)| a).min()
    }

    /// Alexander levels carrying nonzero dimension, ascending.
    pub fn levels(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.dims.keys().map(|&(a, _)| a).collect();
        set.into_iter().collect()
    }

    /// Entries at one Alexander level as (maslov, dim), ascending in maslov.
    pub fn level_entries(&self, a: i64) -> Vec<(i64, u64)> {
        self.dims
            .iter()
            .filter(|&(&(al, _), _)| al == a)
            .map(|(&(_, m), &d)| (m, d))
            .collect()
    }
}

/// Maximum Alexander grading over all states, with one witness state.
pub fn max_alexander(grid: &GridDiagram) -> (i64, Vec<u8>) {
    let weights = alexander_weights(grid);
    let sol = weights.maximize();
    let rows = sol.assignment.iter().map(|&r| r as u8).collect();
    (sol.value, rows)
}

fn factorial_saturating(n: usize) -> u64 {
    let mut total = 1u64;
    for i in 1..=n as u64 {
        total = total.saturating_mul(i);
    }
    total
}

/// Every grid state, in lexicographic row order.
pub fn enumerate_all_states(grid: &GridDiagram, budgets: &Budgets) -> Result<Vec<GridState>> {
    let n = grid.size();
    let total = factorial_saturating(n);
    if total > budgets.max_states {
        return Err(Error::StateBudget {
            limit: budgets.max_states,
            detail: format!("full enumeration needs {n}! states"),
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut rows = vec![0u8; n];
    let mut used = vec![false; n];
    fn fill(
        depth: usize,
        grid: &GridDiagram,
        rows: &mut [u8],
        used: &mut [bool],
        out: &mut Vec<GridState>,
    ) {
        let n = grid.size();
        if depth == n {
            out.push(GridState::new(grid, rows.to_vec()));
            return;
        }
        for r in 0..n {
            if used[r] {
                continue;
            }
            used[r] = true;
            rows[depth] = r as u8;
            fill(depth + 1, grid, rows, used, out);
            used[r] = false;
        }
    }
    fill(0, grid, &mut rows, &mut used, &mut out);
    Ok(out)
}

struct ExtremalDfs<'a> {
    grid: &'a GridDiagram,
    /// Per column: (reduced cost, row), ascending in cost, filtered to <= budget.
    candidates: Vec<Vec<(i64, u8)>>,
    /// Visit order over columns, most constrained first.
    order: Vec<usize>,
    budget: i64,
    a_star: i64,
    max_states: u64,
    rows: Vec<u8>,
    used: Vec<bool>,
    out: Vec<GridState>,
}

impl ExtremalDfs<'_> {
    fn run(&mut self, depth: usize, spent: i64) -> Result<()> {
        let n = self.grid.size();
        if depth == n {
            if self.out.len() as u64 >= self.max_states {
                return Err(Error::StateBudget {
                    limit: self.max_states,
                    detail: format!("at Alexander level {}", self.a_star - spent),
                });
            }
            let state = GridState::new(self.grid, self.rows.clone());
            debug_assert_eq!(state.alexander, self.a_star - spent);
            self.out.push(state);
            return Ok(());
        }
        let col = self.order[depth];
        // candidates are sorted, so the first over-budget cost ends the loop
        for i in 0..self.candidates[col].len() {
            let (cost, row) = self.candidates[col][i];
            if cost > self.budget - spent {
                break;
            }
            if self.used[row as usize] {
                continue;
            }
            self.used[row as usize] = true;
            self.rows[col] = row;
            self.run(depth + 1, spent + cost)?;
            self.used[row as usize] = false;
        }
        Ok(())
    }
}

/// Key of the column-by-column fill DP: which rows are taken, and how much
/// of the cost budget has gone.
type FillKey = (u128, u32);

/// Emits every completable fill, walking only choices the liveness table
/// promises will finish. No dead ends, so the work is linear in the output.
struct FillWalk<'a> {
    grid: &'a GridDiagram,
    candidates: &'a [Vec<(i64, u8)>],
    order: &'a [usize],
    alive: &'a [HashSet<FillKey>],
    budget: i64,
    a_star: i64,
    rows: Vec<u8>,
    out: Vec<GridState>,
}

impl FillWalk<'_> {
    fn walk(&mut self, pos: usize, mask: u128, spent: i64) {
        if pos == self.grid.size() {
            let state = GridState::new(self.grid, self.rows.clone());
            debug_assert_eq!(state.alexander, self.a_star - spent);
            self.out.push(state);
            return;
        }
        let col = self.order[pos];
        for i in 0..self.candidates[col].len() {
            let (cost, row) = self.candidates[col][i];
            if spent + cost > self.budget {
                break;
            }
            let bit = 1u128 << row;
            if mask & bit != 0 {
                continue;
            }
            if self.alive[pos + 1].contains(&(mask | bit, (spent + cost) as u32)) {
                self.rows[col] = row;
                self.walk(pos + 1, mask | bit, spent + cost);
            }
        }
    }
}

/// States in the top `k` Alexander levels: alexander >= a_star - k + 1.
///
/// Uses the optimal assignment's potentials: a state's deficit below the
/// maximum equals its total reduced cost, so a depth-first fill with cost
/// budget `k - 1` visits exactly the wanted states and nothing else.
pub fn enumerate_extremal_states(
    grid: &GridDiagram,
    weights: &AlexanderWeights,
    k: u32,
    budgets: &Budgets,
) -> Result<Vec<GridState>> {
    assert!(k >= 1, "need at least one Alexander level");
    let n = grid.size();
    let sol = weights.maximize();
    // maximize() folds the additive constant into value
    let a_star = sol.value;
    let budget = i64::from(k) - 1;
    let mut candidates: Vec<Vec<(i64, u8)>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut cand: Vec<(i64, u8)> = (0..n)
            .map(|r| (sol.reduced_cost(&weights.weights, c, r), r as u8))
            .filter(|&(cost, _)| cost <= budget)
            .collect();
        cand.sort_unstable();
        candidates.push(cand);
    }
    // Most constrained column first. The fill is a set, so any order gives
    // the same states, but tight columns early keep the partial summaries
    // nearly forced instead of letting a loose first column fan out.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| (candidates[c].len(), c));
    if n > 128 {
        // no mask word wide enough; plain depth-first fill
        let mut dfs = ExtremalDfs {
            grid,
            candidates,
            order,
            budget,
            a_star,
            max_states: budgets.max_states,
            rows: vec![0; n],
            used: vec![false; n],
            out: Vec::new(),
        };
        dfs.run(0, 0)?;
        dfs.out.sort_unstable_by(|a, b| a.rows().cmp(b.rows()));
        return Ok(dfs.out);
    }
    // Filling columns left to right, a partial state is summarized by its
    // used-row set and spent budget, and astronomically many fills share a
    // summary. The forward table counts fills per summary, which prices the
    // whole job before any state materializes; the backward pass keeps the
    // summaries that can still finish, so the emission walk never dead-ends.
    // Naive search is hopeless here: ties in the level weights let the tree
    // wander exponentially among fills that can never complete.
    let mut levels: Vec<HashMap<FillKey, u64>> = Vec::with_capacity(n + 1);
    levels.push(HashMap::from([((0u128, 0u32), 1u64)]));
    let mut keys_total = 0u64;
    for pos in 0..n {
        let c = order[pos];
        let mut next: HashMap<FillKey, u64> =
            HashMap::with_capacity(levels[pos].len().saturating_mul(2));
        for (&(mask, spent), &count) in &levels[pos] {
            for &(cost, row) in &candidates[c] {
                let total = i64::from(spent) + cost;
                if total > budget {
                    break;
                }
                let bit = 1u128 << row;
                if mask & bit != 0 {
                    continue;
                }
                let slot = next.entry((mask | bit, total as u32)).or_insert(0);
                *slot = slot.saturating_add(count);
            }
        }
        keys_total = keys_total.saturating_add(next.len() as u64);
        if keys_total > budgets.max_states {
            return Err(Error::StateBudget {
                limit: budgets.max_states,
                detail: "as partial fills during pricing".into(),
            });
        }
        levels.push(next);
    }
    let mut per_slack = vec![0u64; budget as usize + 1];
    for (&(_, spent), &count) in &levels[n] {
        per_slack[spent as usize] = per_slack[spent as usize].saturating_add(count);
    }
    let mut total = 0u64;
    for (slack, &count) in per_slack.iter().enumerate() {
        total = total.saturating_add(count);
        if total > budgets.max_states {
            return Err(Error::StateBudget {
                limit: budgets.max_states,
                detail: format!("at Alexander level {}", a_star - slack as i64),
            });
        }
    }
    let mut alive: Vec<HashSet<FillKey>> = vec![HashSet::new(); n + 1];
    alive[n] = levels[n].keys().copied().collect();
    for pos in (0..n).rev() {
        let c = order[pos];
        let mut live = HashSet::with_capacity(levels[pos].len());
        for &(mask, spent) in levels[pos].keys() {
            for &(cost, row) in &candidates[c] {
                let total = i64::from(spent) + cost;
                if total > budget {
                    break;
                }
                let bit = 1u128 << row;
                if mask & bit != 0 {
                    continue;
                }
                if alive[pos + 1].contains(&(mask | bit, total as u32)) {
                    live.insert((mask, spent));
                    break;
                }
            }
        }
        alive[pos] = live;
    }
    drop(levels);
    let mut walk = FillWalk {
        grid,
        candidates: &candidates,
        order: &order,
        alive: &alive,
        budget,
        a_star,
        rows: vec![0; n],
        out: Vec::with_capacity(total as usize),
    };
    walk.walk(0, 0, 0);
    debug_assert_eq!(walk.out.len() as u64, total);
    let mut out = walk.out;
    out.sort_unstable_by(|a, b| a.rows().cmp(b.rows()));
    Ok(out)
}

fn dedup_mod2(entries: &mut Vec<u32>) {
    entries.sort_unstable();
    let mut keep = Vec::with_capacity(entries.len());
    let mut i = 0;
    while i < entries.len() {
        let mut j = i;
        while j < entries.len() && entries[j] == entries[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            keep.push(entries[i]);
        }
        i = j;
    }
    *entries = keep;
}

/// Boundary matrix counting empty rectangles that avoid every marking.
///
/// Column `i` lists the states reached from `states[i]`, mod 2. Every target
/// must itself be in `states`; a missing target means the state list is not
/// closed under the differential, which the level cutoff guarantees against.
pub fn tilde_boundary(
    states: &[GridState],
    grid: &GridDiagram,
    budgets: &Budgets,
) -> Result<SparseGf2> {
    let n = grid.size();
    let index: HashMap<&[u8], u32> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.rows(), i as u32))
        .collect();
    let mut matrix = SparseGf2::new(states.len(), states.len());
    let mut nnz = 0u64;
    let mut swapped = vec![0u8; n];
    let mut entries: Vec<u32> = Vec::new();
    // Row-set bitmasks make each span test O(1), so a state costs O(n^2)
    // instead of the O(n^4) of rescanning every rectangle interior. Grids
    // wider than 128 fall back to the plain scan.
    let masks = (n <= 128).then(|| {
        let bit = |r: usize| 1u128 << r;
        (
            grid.o_rows().iter().map(|&r| bit(r)).collect::<Vec<u128>>(),
            grid.x_rows().iter().map(|&r| bit(r)).collect::<Vec<u128>>(),
        )
    });
    // cyclic half-open row interval [a, b) as a bitmask, a != b
    let half = |a: usize, b: usize| -> u128 {
        if a < b {
            (1u128 << b) - (1u128 << a)
        } else {
            let ones = if n == 128 {
                u128::MAX
            } else {
                (1u128 << n) - 1
            };
            ones ^ ((1u128 << a) - (1u128 << b))
        }
    };
    for (ix, x) in states.iter().enumerate() {
        entries.clear();
        let rows = x.rows();
        if let Some((o_bits, x_bits)) = &masks {
            for c1 in 0..n {
                let r1 = rows[c1] as usize;
                let mut seen_state = 0u128;
                let mut seen_marker = o_bits[c1] | x_bits[c1];
                for step in 1..n {
                    let c2 = (c1 + step) % n;
                    let r2 = rows[c2] as usize;
                    let band = half(r1, r2);
                    if seen_state & (band & !(1u128 << r1)) == 0 && seen_marker & band == 0 {
                        swapped.copy_from_slice(rows);
                        swapped.swap(c1, c2);
                        match index.get(&swapped[..]) {
                            Some(&iy) => entries.push(iy),
                            None => {
                                return Err(Error::Internal(format!(
                                    "boundary target missing from state list (from state {ix})"
                                )))
                            }
                        }
                    }
                    seen_state |= 1u128 << rows[c2];
                    seen_marker |= o_bits[c2] | x_bits[c2];
                }
            }
        } else {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    for rect in rectangles_between(grid, rows, c1, c2) {
                        if !(rect.empty && rect.x_count == 0 && rect.o_count == 0) {
                            continue;
                        }
                        swapped.copy_from_slice(rows);
                        swapped.swap(c1, c2);
                        match index.get(&swapped[..]) {
                            Some(&iy) => entries.push(iy),
                            None => {
                                return Err(Error::Internal(format!(
                                    "boundary target missing from state list (from state {ix})"
                                )))
                            }
                        }
                    }
                }
            }
        }
        for &iy in &entries {
            debug_assert_eq!(states[iy as usize].alexander, x.alexander);
            debug_assert_eq!(states[iy as usize].maslov, x.maslov - 1);
        }
        // two rectangles to the same target cancel over GF(2)
        dedup_mod2(&mut entries);
        nnz += entries.len() as u64;
        if nnz > budgets.max_entries {
            return Err(Error::EntryBudget {
                limit: budgets.max_entries,
            });
        }
        matrix.cols[ix] = std::mem::take(&mut entries);
    }
    Ok(matrix)
}

/// Blockwise homology dimensions of a grading-respecting GF(2) complex.
///
/// The boundary preserves alexander and drops maslov by one, so each
/// bigrading is an independent block: dim H = dim C - rank(out) - rank(in).
pub fn homology_gf2(
    boundary: &SparseGf2,
    states: &[GridState],
    grid_size: usize,
) -> GradedDims {
    let mut blocks: BTreeMap<(i64, i64), Vec<u32>> = BTreeMap::new();
    for (i, s) in states.iter().enumerate() {
        blocks
            .entry((s.alexander, s.maslov))
            .or_default()
            .push(i as u32);
    }
    let mut rank_at: HashMap<(i64, i64), u64> = HashMap::new();
    for (&key, cols) in &blocks {
        rank_at.insert(key, crate::gf2::rank_of_columns(boundary, cols) as u64);
    }
    let mut dims = BTreeMap::new();
    for (&(a, m), cols) in &blocks {
        let out_rank = rank_at[&(a, m)];
        let in_rank = *rank_at.get(&(a, m + 1)).unwrap_or(&0);
        let dim = cols.len() as i64 - out_rank as i64 - in_rank as i64;
        assert!(dim >= 0, "rank bookkeeping underflow; boundary not a complex");
        if dim > 0 {
            dims.insert((a, m), dim as u64);
        }
    }
    GradedDims {
        grid_size,
        flavor: Flavor::Tilde,
        dims,
    }
}

fn binomial(n: usize, k: usize) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::ModelViolation("binomial overflow".into()))?;
        acc /= (i + 1) as u128;
    }
    u64::try_from(acc).map_err(|_| Error::ModelViolation("binomial overflow".into()))
}

/// Strip `grid_size - 1` two-dimensional tensor factors off a full-complex
/// table, recovering the minimal invariant.
///
/// Each factor has one generator at bigrading (0, 0) and one at (-1, -1), so
/// tilde(a, m) = sum over i of C(grid_size - 1, i) * hat(a + i, m + i).
/// Solving top-down from `top` (the maximum chain Alexander grading) is
/// exact; a negative or non-representable intermediate means the input was
/// not of this shape. For a truncated table, `floor` is the lowest level
/// whose tilde entry is complete; hat is only reported down to that level.
pub fn deconvolve_tilde_to_hat(
    tilde: &GradedDims,
    top: i64,
    floor: Option<i64>,
) -> Result<GradedDims> {
    assert!(matches!(tilde.flavor, Flavor::Tilde));
    let extra = tilde.grid_size - 1;
    let bottom = match floor {
        Some(f) => f,
        None => tilde.min_level().unwrap_or(top),
    };
    let mut hat: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    let mut a = top;
    while a >= bottom {
        // contributions at level a from hat generators strictly above it
        let mut correction: BTreeMap<i64, u64> = BTreeMap::new();
        for (&(ha, hm), &hd) in hat.iter() {
            let i = ha - a;
            debug_assert!(i > 0);
            if i as usize > extra {
                continue;
            }
            let c = binomial(extra, i as usize)?;
            let term = c
                .checked_mul(hd)
                .ok_or_else(|| Error::ModelViolation("deconvolution overflow".into()))?;
            let slot = correction.entry(hm - i).or_insert(0);
            *slot = slot
                .checked_add(term)
                .ok_or_else(|| Error::ModelViolation("deconvolution overflow".into()))?;
        }
        let mut maslovs: BTreeSet<i64> = correction.keys().copied().collect();
        for (&(ta, tm), _) in tilde.dims.iter() {
            if ta == a {
                maslovs.insert(tm);
            }
        }
        for m in maslovs {
            let have = tilde.dims.get(&(a, m)).copied().unwrap_or(0);
            let need = correction.get(&m).copied().unwrap_or(0);
            if have < need {
                return Err(Error::ModelViolation(format!(
                    "negative dimension at alexander {a}, maslov {m}: \
                     full complex smaller than its forced tensor factors"
                )));
            }
            if have > need {
                hat.insert((a, m), have - need);
            }
        }
        a -= 1;
    }
    Ok(GradedDims {
        grid_size: tilde.grid_size,
        flavor: Flavor::Hat,
        dims: hat,
    })
}

/// How much of the table to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableMode {
    /// All states; the table is complete.
    Full,
    /// Only the top `k_levels` Alexander levels.
    Extremal { k_levels: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HfkOptions {
    pub mode: TableMode,
    pub budgets: Budgets,
}

impl Default for HfkOptions {
    fn default() -> Self {
        HfkOptions {
            mode: TableMode::Full,
            budgets: Budgets::default(),
        }
    }
}

/// Bigraded homology table for the closure of a braid word.
///
/// The chain_* fields are generator-level statistics: the extremes of the
/// gradings over grid states rather than over homology. They are what grows
/// linearly in twist families regardless of what survives the differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HFKTable {
    /// Grid size the computation ran at.
    pub grid_size: usize,
    /// Hat dimensions keyed by (alexander, maslov).
    pub dims: BTreeMap<(i64, i64), u64>,
    /// True when only the top levels were computed.
    pub truncated: bool,
    /// Number of levels requested, when truncated.
    pub k_levels: Option<u32>,
    /// Lowest Alexander level whose dimension is trustworthy.
    pub reported_floor: Option<i64>,
    /// Maximum Alexander grading over all chain generators (exact even when
    /// truncated; computed by optimal assignment).
    pub chain_top: i64,
    /// Minimum Alexander grading over all chain generators (exact).
    pub chain_bottom: i64,
    /// Maximum Maslov grading over the retained generators; equals the
    /// global chain maximum for full tables.
    pub chain_max_maslov: i64,
    /// Number of states fed to the boundary.
    pub state_count: u64,
}

impl HFKTable {
    /// Top Alexander level with nonzero homology.
    pub fn top_level(&self) -> Option<i64> {
        self.dims.keys().map(|&(a, _)| a).max()
    }

    /// Bottom Alexander level with nonzero homology. Truncated tables do not
    /// see the real bottom, so this is None for them.
    pub fn bottom_level(&self) -> Option<i64> {
        if self.truncated {
            return None;
        }
        self.dims.keys().map(|&(a, _)| a).min()
    }

    /// Breadth: number of Alexander levels from bottom to top, inclusive.
    pub fn breadth(&self) -> Option<i64> {
        Some(self.top_level()? - self.bottom_level()? + 1)
    }

    /// Largest Maslov grading with nonzero homology among reported levels.
    pub fn max_maslov(&self) -> Option<i64> {
        self.dims.keys().map(|&(_, m)| m).max()
    }

    /// Seifert genus, read off as the top nonzero Alexander level.
    pub fn genus(&self) -> Option<i64> {
        self.top_level()
    }

    pub fn total_dim(&self) -> u64 {
        self.dims.values().sum()
    }

    pub fn level_dim(&self, a: i64) -> u64 {
        self.dims
            .iter()
            .filter(|&(&(al, _), _)| al == a)
            .map(|(_, &d)| d)
            .sum()
    }

    /// Entries at one level as (maslov, dim), ascending in maslov.
    pub fn level_entries(&self, a: i64) -> Vec<(i64, u64)> {
        self.dims
            .iter()
            .filter(|&(&(al, _), _)| al == a)
            .map(|(&(_, m), &d)| (m, d))
            .collect()
    }

    /// Nonzero levels from the top down, limited to the reported range.
    pub fn levels_descending(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.dims.keys().map(|&(a, _)| a).collect();
        set.into_iter().rev().collect()
    }

    /// dims(a, m) == dims(-a, m - 2a), the defining symmetry of the hat
    /// flavor. Only meaningful for full tables.
    pub fn is_symmetric(&self) -> bool {
        self.dims
            .iter()
            .all(|(&(a, m), &d)| self.dims.get(&(-a, m - 2 * a)).copied().unwrap_or(0) == d)
    }

    pub fn as_graded(&self) -> GradedDims {
        GradedDims {
            grid_size: self.grid_size,
            flavor: Flavor::Hat,
            dims: self.dims.clone(),
        }
    }
}

/// Compute the homology table for the closure of `word`.
pub fn hfk_table(word: &BraidWord, options: &HfkOptions) -> Result<HFKTable> {
    let grid = braid_to_grid(word)?;
    hfk_table_of_grid(&grid, options)
}

/// Same as `hfk_table` but starting from an explicit grid diagram.
pub fn hfk_table_of_grid(grid: &GridDiagram, options: &HfkOptions) -> Result<HFKTable> {
    if grid.component_count() != 1 {
        return Err(Error::NotAKnot {
            components: grid.component_count(),
        });
    }
    let weights = alexander_weights(grid);
    let a_star = weights.maximize().value;
    let chain_bottom = weights.minimize();
    let span = (a_star - chain_bottom + 1).max(1) as u32;
    let TableMode::Extremal { k_levels } = options.mode else {
        let states = enumerate_all_states(grid, &options.budgets)?;
        return table_from_states(grid, states, a_star, chain_bottom, None, None, &options.budgets);
    };
    // The chain-level maximum can sit several Alexander levels above the top
    // nonzero homology, and everything in between cancels. Deepen until the
    // requested number of levels below the top survivor is inside the window;
    // each extra level costs more than all shallower ones combined, so the
    // retries are cheap relative to the final pass.
    let mut depth = k_levels.min(span);
    loop {
        if depth >= span {
            let states = enumerate_all_states(grid, &options.budgets)?;
            return table_from_states(
                grid,
                states,
                a_star,
                chain_bottom,
                None,
                None,
                &options.budgets,
            );
        }
        let states = enumerate_extremal_states(grid, &weights, depth, &options.budgets)?;
        let floor = a_star - i64::from(depth) + 1;
        let table = table_from_states(
            grid,
            states,
            a_star,
            chain_bottom,
            Some(floor),
            Some(k_levels),
            &options.budgets,
        )?;
        if let Some(top) = table.top_level() {
            if top - i64::from(k_levels) + 1 >= floor {
                return Ok(table);
            }
        }
        depth += 1;
    }
}

fn table_from_states(
    grid: &GridDiagram,
    states: Vec<GridState>,
    a_star: i64,
    chain_bottom: i64,
    floor: Option<i64>,
    requested_k: Option<u32>,
    budgets: &Budgets,
) -> Result<HFKTable> {
    let chain_max_maslov = states
        .iter()
        .map(|s| s.maslov)
        .max()
        .expect("every grid has at least one state");
    let boundary = tilde_boundary(&states, grid, budgets)?;
    let tilde = homology_gf2(&boundary, &states, grid.size());
    let hat = deconvolve_tilde_to_hat(&tilde, a_star, floor)?;
    Ok(HFKTable {
        grid_size: grid.size(),
        dims: hat.dims,
        truncated: floor.is_some(),
        k_levels: requested_k,
        reported_floor: floor,
        chain_top: a_star,
        chain_bottom,
        chain_max_maslov,
        state_count: states.len() as u64,
    })
}
