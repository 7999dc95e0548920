//! Exact maximum-weight assignment with dual certificates.
//!
//! Solves `max over permutations p of sum_c w[c][p(c)]` for square integer
//! weight matrices by shortest augmenting paths in O(n^3). Beyond the
//! optimal value we keep the dual potentials: they satisfy
//! `w[c][r] <= col_potential[c] + row_potential[r]` everywhere with equality
//! on matched pairs, so `col_potential[c] + row_potential[r] - w[c][r]` is a
//! nonnegative reduced cost whose sum along any permutation measures its gap
//! below the optimum. That gap drives the pruned enumeration of
//! near-extremal states.

#[derive(Debug, Clone)]
pub struct MaxAssignment {
    /// Optimal total weight.
    pub value: i64,
    /// `assignment[c]` is the row matched to column `c`.
    pub assignment: Vec<usize>,
    pub col_potential: Vec<i64>,
    pub row_potential: Vec<i64>,
}

impl MaxAssignment {
    /// Nonnegative slack of the pair `(c, r)` against the dual bound; zero
    /// exactly on pairs some optimal solution could use at full value.
    pub fn reduced_cost(&self, w: &[Vec<i64>], c: usize, r: usize) -> i64 {
        self.col_potential[c] + self.row_potential[r] - w[c][r]
    }
}

/// Runs the minimization form on negated weights; potentials come out
/// negated back into maximization form.
pub fn solve_max(w: &[Vec<i64>]) -> MaxAssignment {
    let n = w.len();
    assert!(n > 0, "empty assignment problem");
    for row in w {
        assert_eq!(row.len(), n, "weight matrix must be square");
    }
    const INF: i64 = i64::MAX / 4;

    // cost[i][j] = -w[i][j]; virtual column n seeds each augmentation
    let mut u = vec![0i64; n];
    let mut v = vec![0i64; n + 1];
    // matched[j]: column (of w) assigned to row j; n is the virtual slot
    let mut matched = vec![usize::MAX; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 0..n {
        matched[n] = i;
        let mut j0 = n;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let cur = -w[i0][j] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == usize::MAX {
                break;
            }
        }
        // augment along the alternating path
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == n {
                break;
            }
        }
    }

    let mut assignment = vec![usize::MAX; n];
    for j in 0..n {
        assignment[matched[j]] = j;
    }
    let value = (0..n).map(|c| w[c][assignment[c]]).sum();
    let col_potential: Vec<i64> = u.iter().map(|&x| -x).collect();
    let row_potential: Vec<i64> = v[..n].iter().map(|&x| -x).collect();

    if cfg!(debug_assertions) {
        for c in 0..n {
            for r in 0..n {
                debug_assert!(
                    w[c][r] <= col_potential[c] + row_potential[r],
                    "dual feasibility violated at ({c}, {r})"
                );
            }
            debug_assert_eq!(
                w[c][assignment[c]],
                col_potential[c] + row_potential[assignment[c]],
                "matched pair not tight at column {c}"
            );
        }
    }

    MaxAssignment { value, assignment, col_potential, row_potential }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn brute_max(w: &[Vec<i64>]) -> i64 {
        let n = w.len();
        (0..n)
            .permutations(n)
            .map(|p| (0..n).map(|c| w[c][p[c]]).sum())
            .max()
            .unwrap()
    }

    #[test]
    fn all_zero_matrix() {
        let w = vec![vec![0i64; 4]; 4];
        let sol = solve_max(&w);
        assert_eq!(sol.value, 0);
        let mut seen = vec![false; 4];
        for &r in &sol.assignment {
            assert!(!seen[r]);
            seen[r] = true;
        }
    }

    #[test]
    fn known_small_case() {
        let w = vec![vec![3, 1], vec![2, 4]];
        let sol = solve_max(&w);
        assert_eq!(sol.value, 7);
        assert_eq!(sol.assignment, vec![0, 1]);
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        let mut rng = StdRng::seed_from_u64(42);
        for n in 1..=7usize {
            for _ in 0..30 {
                let w: Vec<Vec<i64>> =
                    (0..n).map(|_| (0..n).map(|_| rng.gen_range(-20..=20)).collect()).collect();
                let sol = solve_max(&w);
                assert_eq!(sol.value, brute_max(&w), "n = {n}, w = {w:?}");
                let perm_value: i64 = (0..n).map(|c| w[c][sol.assignment[c]]).sum();
                assert_eq!(perm_value, sol.value);
            }
        }
    }

    #[test]
    fn duality_gives_nonnegative_reduced_costs() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..20 {
            let n = rng.gen_range(2..=8);
            let w: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.gen_range(-50..=50)).collect()).collect();
            let sol = solve_max(&w);
            let dual_total: i64 =
                sol.col_potential.iter().sum::<i64>() + sol.row_potential.iter().sum::<i64>();
            assert_eq!(dual_total, sol.value, "strong duality");
            for c in 0..n {
                for r in 0..n {
                    assert!(sol.reduced_cost(&w, c, r) >= 0);
                }
                assert_eq!(sol.reduced_cost(&w, c, sol.assignment[c]), 0);
            }
        }
    }
}
