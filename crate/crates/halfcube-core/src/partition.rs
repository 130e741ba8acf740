//! Integer partition combinatorics: hook-length dimensions, removable
//! boxes, border strips, Littlewood-Richardson coefficients, the Pieri
//! rule, and Murnaghan-Nakayama character values of symmetric groups.
//!
//! Littlewood-Richardson coefficients are computed by explicit enumeration
//! of LR skew tableaux; every size in scope here is small enough that
//! enumeration is both fast and directly auditable.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Partition of a nonnegative integer, stored as weakly decreasing positive
/// parts. The empty partition (of 0) serializes as `"0"`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts; trailing zeros are
    /// dropped. Panics on increasing input.
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing: {parts:?}"
        );
        let parts = parts.into_iter().take_while(|&p| p > 0).collect();
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `[m]` (empty for m = 0).
    pub fn row(m: usize) -> Self {
        if m == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![m] }
        }
    }

    /// The one-column partition `[1^m]`.
    pub fn column(m: usize) -> Self {
        Partition { parts: vec![1; m] }
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part at row `i` (0-indexed), zero beyond the last row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| self.part(i) >= other.part(i))
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Removable boxes `I(lambda)` as 0-indexed (row, col) corners.
    pub fn removable_boxes(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter(|&i| self.part(i) > self.part(i + 1))
            .map(|i| (i, self.part(i) - 1))
            .collect()
    }

    /// Partition obtained by removing one removable box.
    pub fn remove_box(&self, b: (usize, usize)) -> Partition {
        assert!(
            self.removable_boxes().contains(&b),
            "box {b:?} is not removable from {self}"
        );
        let mut parts = self.parts.clone();
        parts[b.0] -= 1;
        Partition::new(parts)
    }

    /// All border strips of `len` boxes whose removal leaves a partition,
    /// paired with the leftover shape.
    pub fn border_strips(&self, len: usize) -> Vec<(BorderStrip, Partition)> {
        let mut out = Vec::new();
        if len == 0 {
            return out;
        }
        let rows = self.len();
        for top in 0..rows {
            for bottom in top..rows {
                // A strip spanning rows top..=bottom occupies, in each row r
                // with top <= r < bottom, the columns part(r+1)..=part(r),
                // and in the bottom row the columns q..=part(bottom).
                let span: usize = self.part(top) + (bottom - top) + 1;
                if span < len + 1 {
                    continue;
                }
                let q = span - len; // 1-indexed start column in the bottom row
                if q < 1 || q > self.part(bottom) || q < self.part(bottom + 1) + 1 {
                    continue;
                }
                let mut cells = Vec::with_capacity(len);
                for r in top..bottom {
                    for c in self.part(r + 1)..=self.part(r) {
                        cells.push((r, c - 1));
                    }
                }
                for c in q..=self.part(bottom) {
                    cells.push((bottom, c - 1));
                }
                debug_assert_eq!(cells.len(), len);
                let mut parts = self.parts.clone();
                for r in top..bottom {
                    parts[r] = self.part(r + 1) - 1;
                }
                parts[bottom] = q - 1;
                let rest = Partition::new(
                    parts
                        .iter()
                        .copied()
                        .filter(|&p| p > 0)
                        .collect::<Vec<_>>(),
                );
                out.push((
                    BorderStrip {
                        cells,
                        height: bottom - top,
                    },
                    rest,
                ));
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for piece in s.split(',') {
            let p: usize = piece
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad partition part {piece:?}")))?;
            if p == 0 {
                return Err(Error::Invalid(format!("zero part in partition {s:?}")));
            }
            parts.push(p);
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!("parts not weakly decreasing: {s:?}")));
        }
        Ok(Partition::new(parts))
    }
}

/// Connected rim strip with no 2x2 block; `height` is the number of rows
/// spanned minus one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderStrip {
    pub cells: Vec<(usize, usize)>,
    pub height: usize,
}

/// Cycle type of a permutation: the partition of n listing cycle lengths.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CycleType(pub Partition);

impl CycleType {
    pub fn identity(n: usize) -> Self {
        CycleType(Partition::column(n))
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn parts(&self) -> &[usize] {
        self.0.parts()
    }

    /// Size of the conjugacy class in the symmetric group: n!/z where z is
    /// the centralizer order prod_i i^{m_i} m_i!.
    pub fn class_size(&self) -> u128 {
        let n = self.size();
        let mut z: u128 = 1;
        let mut mult: std::collections::BTreeMap<usize, u32> = Default::default();
        for &p in self.parts() {
            *mult.entry(p).or_insert(0) += 1;
        }
        for (&p, &m) in &mult {
            z *= (p as u128).pow(m) * factorial(m as usize);
        }
        factorial(n) / z
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Binomial with the conventions needed by the closed Betti formula:
/// C(-1, -1) = 1 and C(m, -1) = 0 for m >= 0.
pub fn binomial_ext(n: i64, k: i64) -> u128 {
    if n == -1 && k == -1 {
        return 1;
    }
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    binomial(n as usize, k as usize)
}

/// All partitions of `n`, in decreasing lexicographic order starting at [n].
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(current.clone()));
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Degree of the irreducible symmetric group character labeled by `lambda`,
/// via the hook-length formula.
pub fn dim_sn(lambda: &Partition) -> u128 {
    let n = lambda.size();
    let conj = lambda.conjugate();
    let mut hooks: u128 = 1;
    for i in 0..lambda.len() {
        for j in 0..lambda.part(i) {
            let arm = lambda.part(i) - j - 1;
            let leg = conj.part(j) - i - 1;
            hooks *= (arm + leg + 1) as u128;
        }
    }
    factorial(n) / hooks
}

/// The hook partition `[e+1, 1^(k-1)]` of `k + e`.
pub fn hook_partition(k: usize, e: usize) -> Result<Partition> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("hook partition needs k >= 2, got {k}")));
    }
    let mut parts = vec![e + 1];
    parts.extend(std::iter::repeat(1).take(k - 1));
    Ok(Partition::new(parts))
}

/// Littlewood-Richardson coefficient c^lambda_{mu nu}, by enumerating
/// semistandard skew tableaux of shape lambda/mu and content nu whose
/// reverse reading word is a lattice word.
pub fn lr_coefficient(mu: &Partition, nu: &Partition, lambda: &Partition) -> u64 {
    if mu.size() + nu.size() != lambda.size() || !lambda.contains(mu) {
        return 0;
    }
    // Cells in reverse reading order: rows top to bottom, right to left.
    let mut cells = Vec::new();
    for r in 0..lambda.len() {
        for c in (mu.part(r)..lambda.part(r)).rev() {
            cells.push((r, c));
        }
    }
    if cells.is_empty() {
        return 1; // nu must be empty here since the sizes match
    }
    let k = nu.len();
    if k == 0 {
        return 0;
    }
    let width = lambda.part(0);
    let mut grid = vec![vec![usize::MAX; width]; lambda.len()];
    let mut counts = vec![0usize; k];
    let mut total = 0u64;

    fn rec(
        pos: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        counts: &mut Vec<usize>,
        mu: &Partition,
        nu: &Partition,
        lambda: &Partition,
        total: &mut u64,
    ) {
        if pos == cells.len() {
            *total += 1;
            return;
        }
        let (r, c) = cells[pos];
        for v in 0..nu.len() {
            if counts[v] >= nu.part(v) {
                continue;
            }
            // Lattice word condition on the reverse reading word.
            if v > 0 && counts[v] >= counts[v - 1] {
                continue;
            }
            // Weakly increasing along rows (right neighbor already filled).
            if c + 1 < lambda.part(r) && grid[r][c + 1] < v {
                continue;
            }
            // Strictly increasing down columns (cell above, if in the skew shape).
            if r > 0 && c < lambda.part(r - 1) && c >= mu.part(r - 1) && grid[r - 1][c] >= v {
                continue;
            }
            grid[r][c] = v;
            counts[v] += 1;
            rec(pos + 1, cells, grid, counts, mu, nu, lambda, total);
            counts[v] -= 1;
            grid[r][c] = usize::MAX;
        }
    }

    rec(0, &cells, &mut grid, &mut counts, mu, nu, lambda, &mut total);
    total
}

/// All lambda containing mu with lambda/mu a horizontal strip of `m` boxes.
/// Each such lambda satisfies c^lambda_{mu, [m]} = 1 (Pieri rule).
pub fn pieri_expand(mu: &Partition, m: usize) -> Vec<Partition> {
    fn rec(
        mu: &Partition,
        row: usize,
        remaining: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if row > mu.len() {
            if remaining == 0 {
                out.push(Partition::new(current.clone()));
            }
            return;
        }
        // Horizontal strip: mu_{row-1} >= lambda_{row+1} interlacing, i.e.
        // lambda_row ranges over mu_row ..= mu_{row-1} (unbounded for row 0).
        let lo = mu.part(row);
        let hi = if row == 0 {
            mu.part(0) + remaining
        } else {
            mu.part(row - 1)
        };
        for v in lo..=hi {
            let add = v - lo;
            if add > remaining {
                break;
            }
            if v == 0 {
                // Trailing zero row: only valid if nothing remains below.
                if remaining == add {
                    out.push(Partition::new(current.clone()));
                }
                continue;
            }
            current.push(v);
            rec(mu, row + 1, remaining - add, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(mu, 0, m, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Murnaghan-Nakayama evaluation of the symmetric group character
/// chi^lambda at cycle type alpha, by recursive border-strip removal.
pub fn mn_character_sn(lambda: &Partition, alpha: &CycleType) -> Result<i64> {
    if lambda.size() != alpha.size() {
        return Err(Error::SizeMismatch(format!(
            "character label {lambda} has size {}, class {alpha} has size {}",
            lambda.size(),
            alpha.size()
        )));
    }
    // Strip lengths are consumed largest-part-first; the value is
    // independent of the order (see the property test below).
    Ok(mn_sn_rec(lambda, alpha.parts()))
}

pub(crate) fn mn_sn_rec(shape: &Partition, cycles: &[usize]) -> i64 {
    if cycles.is_empty() {
        return 1;
    }
    let len = cycles[0];
    let mut total = 0;
    for (strip, rest) in shape.border_strips(len) {
        let sign = if strip.height % 2 == 0 { 1 } else { -1 };
        total += sign * mn_sn_rec(&rest, &cycles[1..]);
    }
    total
}
