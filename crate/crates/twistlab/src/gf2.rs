//! Sparse linear algebra over GF(2).
//!
//! Matrices are stored column-major, each column a sorted list of the rows
//! holding a 1. Ranks come from left-to-right column reduction with pivots
//! chosen at the lowest (largest-index) row of each column: a column is
//! repeatedly reduced by the registered owner of its lowest row until it
//! either empties out or claims a fresh pivot. Only column clones are
//! mutated; the input matrix is never destroyed.

use std::collections::HashMap;

/// Column-major 0/1 matrix. `cols[c]` lists the rows of the 1-entries of
/// column `c` in strictly increasing order.
#[derive(Debug, Clone, Default)]
pub struct SparseGf2 {
    pub rows: usize,
    pub cols: Vec<Vec<u32>>,
}

impl SparseGf2 {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseGf2 { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn nnz(&self) -> u64 {
        self.cols.iter().map(|c| c.len() as u64).sum()
    }
}

/// Symmetric difference of two sorted row lists.
pub fn xor_rows(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Rank of the submatrix formed by the listed columns.
pub fn rank_of_columns(matrix: &SparseGf2, col_ids: &[u32]) -> usize {
    // pivot row -> reduced column owning it
    let mut owner: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut rank = 0;
    for &c in col_ids {
        let mut col = matrix.cols[c as usize].clone();
        while let Some(&low) = col.last() {
            match owner.get(&low) {
                Some(other) => col = xor_rows(&col, other),
                None => {
                    owner.insert(low, col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

pub fn rank(matrix: &SparseGf2) -> usize {
    let ids: Vec<u32> = (0..matrix.cols.len() as u32).collect();
    rank_of_columns(matrix, &ids)
}

/// Checks that the square matrix composes with itself to zero.
pub fn squares_to_zero(matrix: &SparseGf2) -> bool {
    assert_eq!(matrix.rows, matrix.cols.len());
    for col in &matrix.cols {
        let mut acc: Vec<u32> = Vec::new();
        for &mid in col {
            acc = xor_rows(&acc, &matrix.cols[mid as usize]);
        }
        if !acc.is_empty() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn from_dense(rows: &[&[u8]]) -> SparseGf2 {
        let n_rows = rows.len();
        let n_cols = rows[0].len();
        let mut m = SparseGf2::new(n_rows, n_cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v == 1 {
                    m.cols[c].push(r as u32);
                }
            }
        }
        m
    }

    fn dense_rank(rows: &[Vec<u8>]) -> usize {
        let mut m: Vec<Vec<u8>> = rows.to_vec();
        let n_cols = m[0].len();
        let mut rank = 0;
        for c in 0..n_cols {
            if let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) {
                m.swap(rank, p);
                for r in 0..m.len() {
                    if r != rank && m[r][c] == 1 {
                        for j in 0..n_cols {
                            m[r][j] ^= m[rank][j];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn xor_merges_sorted_lists() {
        assert_eq!(xor_rows(&[1, 3, 5], &[3, 4]), vec![1, 4, 5]);
        assert_eq!(xor_rows(&[], &[2]), vec![2]);
        assert_eq!(xor_rows(&[2], &[2]), Vec::<u32>::new());
    }

    #[test]
    fn small_known_ranks() {
        let m = from_dense(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]);
        assert_eq!(rank(&m), 2);
        let id = from_dense(&[&[1, 0], &[0, 1]]);
        assert_eq!(rank(&id), 2);
        let zero = SparseGf2::new(4, 4);
        assert_eq!(rank(&zero), 0);
    }

    #[test]
    fn rank_matches_dense_elimination_on_random_matrices() {
        let mut rng = StdRng::seed_from_u64(123);
        for _ in 0..50 {
            let rows = rng.gen_range(1..=12);
            let cols = rng.gen_range(1..=12);
            let dense: Vec<Vec<u8>> =
                (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..=1)).collect()).collect();
            let refs: Vec<&[u8]> = dense.iter().map(|r| r.as_slice()).collect();
            let sparse = from_dense(&refs);
            assert_eq!(rank(&sparse), dense_rank(&dense));
        }
    }

    #[test]
    fn square_detection() {
        // boundary of an interval: two vertices, one edge
        let m = from_dense(&[&[0, 0, 1], &[0, 0, 1], &[0, 0, 0]]);
        assert!(squares_to_zero(&m));
        let not_nilpotent = from_dense(&[&[1, 0], &[0, 0]]);
        assert!(!squares_to_zero(&not_nilpotent));
    }
}
