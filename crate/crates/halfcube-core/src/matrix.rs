//! Sparse integer matrices and exact sign-of-determinant helpers.
//!
//! Boundary and group-action matrices are stored column-major with entries
//! in {-1, 0, +1}; products of such matrices stay well inside `i64`.
//! Orientation computations reduce to signs of small integer determinants,
//! evaluated exactly with fraction-free (Bareiss) elimination over `i128`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Column-major sparse matrix over the integers. Columns are kept sorted
/// by row index and never store explicit zeros, so derived equality is
/// structural equality of matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseIntMatrix {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zero(k, k);
        for j in 0..k {
            m.cols[j].push((j, 1));
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn col(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        match self.cols[j].binary_search_by_key(&i, |e| e.0) {
            Ok(pos) => self.cols[j][pos].1,
            Err(_) => 0,
        }
    }

    /// Adds `v` to entry (i, j), dropping the entry if it cancels to zero.
    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.nrows && j < self.ncols, "index out of bounds");
        if v == 0 {
            return;
        }
        let col = &mut self.cols[j];
        match col.binary_search_by_key(&i, |e| e.0) {
            Ok(pos) => {
                col[pos].1 += v;
                if col[pos].1 == 0 {
                    col.remove(pos);
                }
            }
            Err(pos) => col.insert(pos, (i, v)),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        let old = self.entry(i, j);
        self.add_to(i, j, v - old);
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn trace(&self) -> i64 {
        (0..self.ncols.min(self.nrows))
            .map(|j| self.entry(j, j))
            .sum()
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.ncols, rhs.nrows, "inner dimensions must agree");
        let mut out = SparseIntMatrix::zero(self.nrows, rhs.ncols);
        for j in 0..rhs.ncols {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, v) in &rhs.cols[j] {
                for &(i, w) in &self.cols[k] {
                    *acc.entry(i).or_insert(0) += v * w;
                }
            }
            out.cols[j] = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        }
        out
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut out = SparseIntMatrix::zero(self.ncols, self.nrows);
        for j in 0..self.ncols {
            for &(i, v) in &self.cols[j] {
                out.cols[i].push((j, v));
            }
        }
        // Entries are produced in increasing column order per row already.
        out
    }

    /// Restriction to the first `nrows` rows and `ncols` columns of the
    /// original matrix. Dropped columns must not be referenced again but
    /// dropped rows may carry entries; callers are expected to restrict to
    /// invariant blocks only (checked in debug builds by the chain setup).
    pub fn prefix_submatrix(&self, nrows: usize, ncols: usize) -> SparseIntMatrix {
        assert!(nrows <= self.nrows && ncols <= self.ncols);
        let cols = self.cols[..ncols]
            .iter()
            .map(|col| col.iter().copied().filter(|&(i, _)| i < nrows).collect())
            .collect();
        SparseIntMatrix {
            nrows,
            ncols,
            cols,
        }
    }

    pub fn to_dense_i128(&self) -> Vec<Vec<i128>> {
        let mut dense = vec![vec![0i128; self.ncols]; self.nrows];
        for j in 0..self.ncols {
            for &(i, v) in &self.cols[j] {
                dense[i][j] = v as i128;
            }
        }
        dense
    }

    /// Coordinate-list serialization: `{"rows": r, "cols": c, "entries": [[i, j, v], ...]}`
    /// with entries sorted by (column, row).
    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for j in 0..self.ncols {
            for &(i, v) in &self.cols[j] {
                entries.push(json!([i, j, v]));
            }
        }
        json!({"rows": self.nrows, "cols": self.ncols, "entries": entries})
    }

    pub fn from_json(v: &Value) -> Result<SparseIntMatrix> {
        let bad = || Error::Invalid("malformed sparse matrix JSON".into());
        let nrows = v["rows"].as_u64().ok_or_else(bad)? as usize;
        let ncols = v["cols"].as_u64().ok_or_else(bad)? as usize;
        let mut m = SparseIntMatrix::zero(nrows, ncols);
        for e in v["entries"].as_array().ok_or_else(bad)? {
            let t = e.as_array().ok_or_else(bad)?;
            if t.len() != 3 {
                return Err(bad());
            }
            let i = t[0].as_u64().ok_or_else(bad)? as usize;
            let j = t[1].as_u64().ok_or_else(bad)? as usize;
            let val = t[2].as_i64().ok_or_else(bad)?;
            if i >= nrows || j >= ncols {
                return Err(bad());
            }
            m.add_to(i, j, val);
        }
        Ok(m)
    }
}

/// Sign of the determinant of a square integer matrix, computed exactly by
/// fraction-free elimination. Returns 0 for singular input.
pub fn det_sign(mut m: Vec<Vec<i128>>) -> i64 {
    let d = m.len();
    if d == 0 {
        return 1;
    }
    debug_assert!(m.iter().all(|r| r.len() == d));
    let mut sign = 1i64;
    let mut prev = 1i128;
    for k in 0..d {
        let pivot_row = match (k..d).find(|&r| m[r][k] != 0) {
            Some(r) => r,
            None => return 0,
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            sign = -sign;
        }
        for r in k + 1..d {
            for c in k + 1..d {
                m[r][c] = (m[r][c] * m[k][k] - m[r][k] * m[k][c]) / prev;
            }
            m[r][k] = 0;
        }
        prev = m[k][k];
    }
    match m[d - 1][d - 1].signum() {
        1 => sign,
        -1 => -sign,
        _ => 0,
    }
}

/// Rank of a list of integer row vectors (fraction-free elimination).
pub fn rank_of_vectors(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in rank + 1..rows.len() {
            if rows[r][c] != 0 {
                let (a, b) = (rows[rank][c], rows[r][c]);
                for cc in c..ncols {
                    rows[r][cc] = rows[r][cc] * a - rows[rank][cc] * b;
                }
                reduce_row(&mut rows[r]);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn reduce_row(row: &mut [i128]) {
    let mut g: i128 = 0;
    for &x in row.iter() {
        g = gcd_i128(g, x.abs());
    }
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

pub(crate) fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Row indices selecting an invertible maximal square submatrix from a tall
/// matrix given by its columns. Returns `None` when the columns are linearly
/// dependent.
pub fn pivot_rows(nrows: usize, columns: &[Vec<i64>]) -> Option<Vec<usize>> {
    let d = columns.len();
    let mut rows: Vec<Vec<i128>> = (0..nrows)
        .map(|i| columns.iter().map(|c| c[i] as i128).collect())
        .collect();
    let mut used = vec![false; nrows];
    let mut chosen = Vec::with_capacity(d);
    for c in 0..d {
        let r = (0..nrows).find(|&r| !used[r] && rows[r][c] != 0)?;
        used[r] = true;
        chosen.push(r);
        for r2 in 0..nrows {
            if !used[r2] && rows[r2][c] != 0 {
                let (a, b) = (rows[r][c], rows[r2][c]);
                for cc in 0..d {
                    rows[r2][cc] = rows[r2][cc] * a - rows[r][cc] * b;
                }
                reduce_row(&mut rows[r2]);
            }
        }
    }
    chosen.sort_unstable();
    Some(chosen)
}
