//! The half-cube CW complex: cells, facet relations, exact orientation
//! frames, integer boundary matrices, subcomplexes, and the signed
//! permutation action on chain groups.
//!
//! Vertices of the ambient hypercube are bitmasks (bit i set means
//! coordinate i equals -1); the half cube is spanned by the masks of even
//! parity. Cells come in two shapes:
//!
//! * simplex cells `K(v', S)`: the |S| even vertices obtained from an odd
//!   mask v' by flipping one coordinate of S (dimension |S| - 1);
//! * demicube cells `L(v, S)` with |S| >= 3: the 2^(|S|-1) even vertices
//!   agreeing with v outside S (dimension |S|), stored by the sign pattern
//!   `anchor` on the complement of S.
//!
//! Edges admit two `(v', S)` presentations and are canonicalized by the
//! smaller odd mask; for |S| >= 3 the simplex presentation is unique.
//!
//! Orientations are fixed by this artifact, not by the geometry: each cell
//! gets a frame (lexicographically smallest vertex, then a greedy basis of
//! difference vectors over the sorted vertex list), and every incidence or
//! action sign is the sign of an exact integer determinant. The boundary
//! convention is outward-vector-first: a facet's induced orientation is
//! compared against (barycenter offset, facet frame) in the cell's frame.
//! All arithmetic is exact; coordinates are +-1 integers and barycenter
//! differences are cleared of denominators before taking determinants.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{det_sign, pivot_rows, rank_of_vectors, SparseIntMatrix};
use crate::partition::binomial;
use crate::signed::SignedPermutation;
use crate::FORMAT_VERSION;

/// Default budget for pure face enumeration.
pub const DEFAULT_ENUM_MAX_N: usize = 8;
/// Default budget for building chain complexes and computing homology.
pub const DEFAULT_HOMOLOGY_MAX_N: usize = 6;

/// A face of the half cube, keyed canonically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Cell {
    /// The empty face, in degree -1 (reduced chain complex).
    Empty,
    /// A vertex: an even-parity mask.
    Vertex(u32),
    /// Simplex cell K(v', S) with odd mask `odd` and |coords| >= 2.
    Simplex { odd: u32, coords: u32 },
    /// Demicube cell L(v, S): `coords` = S with |S| >= 3, `anchor` = the
    /// sign pattern outside S (bits inside S cleared).
    Demicube { coords: u32, anchor: u32 },
}

impl Cell {
    pub fn vertex(mask: u32) -> Cell {
        debug_assert_eq!(mask.count_ones() % 2, 0, "vertices have even parity");
        Cell::Vertex(mask)
    }

    /// Canonical simplex cell; for |S| = 2 the two odd presentations are
    /// identified by taking the smaller mask.
    pub fn simplex(odd: u32, coords: u32) -> Cell {
        debug_assert!(coords.count_ones() >= 2);
        debug_assert_eq!(odd.count_ones() % 2, 1, "simplex apex has odd parity");
        let odd = if coords.count_ones() == 2 {
            odd.min(odd ^ coords)
        } else {
            odd
        };
        Cell::Simplex { odd, coords }
    }

    pub fn demicube(coords: u32, anchor: u32) -> Cell {
        debug_assert!(coords.count_ones() >= 3);
        Cell::Demicube {
            coords,
            anchor: anchor & !coords,
        }
    }

    pub fn dim(&self) -> i64 {
        match self {
            Cell::Empty => -1,
            Cell::Vertex(_) => 0,
            Cell::Simplex { coords, .. } => coords.count_ones() as i64 - 1,
            Cell::Demicube { coords, .. } => coords.count_ones() as i64,
        }
    }

    pub fn is_demicube(&self) -> bool {
        matches!(self, Cell::Demicube { .. })
    }

    /// Sorted vertex masks of the cell.
    pub fn vertices(&self) -> Vec<u32> {
        match *self {
            Cell::Empty => Vec::new(),
            Cell::Vertex(m) => vec![m],
            Cell::Simplex { odd, coords } => {
                let mut out: Vec<u32> = bits(coords).map(|i| odd ^ (1 << i)).collect();
                out.sort_unstable();
                out
            }
            Cell::Demicube { coords, anchor } => {
                let mut out = Vec::with_capacity(1 << (coords.count_ones() - 1));
                for t in submasks(coords) {
                    let v = anchor | t;
                    if v.count_ones() % 2 == 0 {
                        out.push(v);
                    }
                }
                out.sort_unstable();
                out
            }
        }
    }

    /// Image of the cell under a signed permutation; same dimension and kind.
    pub fn apply(&self, w: &SignedPermutation) -> Cell {
        match *self {
            Cell::Empty => Cell::Empty,
            Cell::Vertex(m) => Cell::Vertex(w.apply_vertex(m)),
            Cell::Simplex { odd, coords } => {
                Cell::simplex(w.apply_vertex(odd), w.permute_bits(coords))
            }
            Cell::Demicube { coords, anchor } => {
                let new_coords = w.permute_bits(coords);
                Cell::demicube(new_coords, w.apply_vertex(anchor) & !new_coords)
            }
        }
    }

    /// Compact string key, used by the on-disk cache.
    pub fn key(&self) -> String {
        match *self {
            Cell::Empty => "e".to_string(),
            Cell::Vertex(m) => format!("v:{m}"),
            Cell::Simplex { odd, coords } => format!("s:{odd}:{coords}"),
            Cell::Demicube { coords, anchor } => format!("d:{coords}:{anchor}"),
        }
    }

    pub fn parse_key(s: &str) -> Result<Cell> {
        let bad = || Error::Invalid(format!("bad cell key {s:?}"));
        let fields: Vec<&str> = s.split(':').collect();
        match fields.as_slice() {
            ["e"] => Ok(Cell::Empty),
            ["v", m] => Ok(Cell::Vertex(m.parse().map_err(|_| bad())?)),
            ["s", a, b] => Ok(Cell::Simplex {
                odd: a.parse().map_err(|_| bad())?,
                coords: b.parse().map_err(|_| bad())?,
            }),
            ["d", a, b] => Ok(Cell::Demicube {
                coords: a.parse().map_err(|_| bad())?,
                anchor: b.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// All submasks of `mask`, including 0 and `mask` itself.
fn submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut t = mask;
    loop {
        out.push(t);
        if t == 0 {
            break;
        }
        t = (t - 1) & mask;
    }
    out.reverse();
    out
}

/// Facet list of a cell.
///
/// A demicube cell of dimension 3 is geometrically a tetrahedron: its four
/// facets are all simplex cells and it has no demicube facets.
pub fn facets(cell: &Cell, n: usize) -> Vec<Cell> {
    match *cell {
        Cell::Empty => Vec::new(),
        Cell::Vertex(_) => vec![Cell::Empty],
        Cell::Simplex { odd, coords } => bits(coords)
            .map(|i| {
                let rest = coords & !(1 << i);
                if rest.count_ones() == 1 {
                    Cell::vertex(odd ^ rest)
                } else {
                    Cell::simplex(odd, rest)
                }
            })
            .collect(),
        Cell::Demicube { coords, anchor } => {
            let l = coords.count_ones();
            let mut out = Vec::new();
            for t in submasks(coords) {
                let w = anchor | t;
                if w.count_ones() % 2 == 1 {
                    out.push(Cell::simplex(w, coords));
                }
            }
            if l >= 4 {
                for i in bits(coords) {
                    if i >= n {
                        break;
                    }
                    let rest = coords & !(1 << i);
                    out.push(Cell::demicube(rest, anchor));
                    out.push(Cell::demicube(rest, anchor | (1 << i)));
                }
            }
            out
        }
    }
}

/// Closed-form face counts: (simplex-shaped, demicube-shaped)
/// cells in the given dimension.
pub fn expected_face_counts(n: usize, dim: i64) -> (u128, u128) {
    if dim < -1 || dim > n as i64 {
        return (0, 0);
    }
    match dim {
        -1 => (1, 0),
        0 => (1 << (n - 1), 0),
        1 => ((1 << (n - 2)) * binomial(n, 2), 0),
        d => {
            let d = d as usize;
            let simplex = if d < n {
                (1u128 << (n - 1)) * binomial(n, d + 1)
            } else {
                0
            };
            let demicube = if d >= 3 {
                (1u128 << (n - d)) * binomial(n, d)
            } else {
                0
            };
            (simplex, demicube)
        }
    }
}

/// All cells of the given dimension, sorted by canonical key. Simplex-shaped
/// cells precede demicube-shaped cells, matching the X/Y chain group split.
pub fn enumerate_cells(n: usize, dim: i64, max_n: usize) -> Result<Vec<Cell>> {
    if n < 4 {
        return Err(Error::OutOfRange(format!("the half cube needs n >= 4, got {n}")));
    }
    if n > max_n || n > 16 {
        return Err(Error::BudgetExceeded(format!(
            "cell enumeration at n={n} exceeds the budget n <= {max_n}"
        )));
    }
    if dim < -1 || dim > n as i64 {
        return Err(Error::OutOfRange(format!("dimension {dim} out of range for n={n}")));
    }
    let mut cells = Vec::new();
    match dim {
        -1 => cells.push(Cell::Empty),
        0 => {
            for m in 0..1u32 << n {
                if m.count_ones() % 2 == 0 {
                    cells.push(Cell::vertex(m));
                }
            }
        }
        1 => {
            for m in 0..1u32 << n {
                if m.count_ones() % 2 == 1 {
                    for i in 0..n {
                        for j in i + 1..n {
                            let coords = (1 << i) | (1 << j);
                            // Each edge has two odd presentations; keep the
                            // canonical one.
                            if m < m ^ coords {
                                cells.push(Cell::simplex(m, coords));
                            }
                        }
                    }
                }
            }
        }
        d => {
            let d = d as usize;
            if d < n {
                for coords in 0..1u32 << n {
                    if coords.count_ones() as usize == d + 1 {
                        for m in 0..1u32 << n {
                            if m.count_ones() % 2 == 1 {
                                cells.push(Cell::simplex(m, coords));
                            }
                        }
                    }
                }
            }
            if d >= 3 {
                for coords in 0..1u32 << n {
                    if coords.count_ones() as usize == d {
                        let complement = !coords & ((1 << n) - 1);
                        for anchor in submasks(complement) {
                            cells.push(Cell::demicube(coords, anchor));
                        }
                    }
                }
            }
        }
    }
    cells.sort_unstable();
    cells.dedup();
    Ok(cells)
}

/// Measured-versus-formula face census.
#[derive(Clone, Debug)]
pub struct FaceCensusRow {
    pub dim: i64,
    pub simplex: u128,
    pub demicube: u128,
    pub expected_simplex: u128,
    pub expected_demicube: u128,
}

#[derive(Clone, Debug)]
pub struct FaceCensus {
    pub n: usize,
    pub rows: Vec<FaceCensusRow>,
}

impl FaceCensus {
    pub fn matches_formulas(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.simplex == r.expected_simplex && r.demicube == r.expected_demicube)
    }

    /// Reduced Euler characteristic including the empty face.
    pub fn reduced_euler(&self) -> i128 {
        let mut total: i128 = -1;
        for r in &self.rows {
            let cells = (r.simplex + r.demicube) as i128;
            total += if r.dim % 2 == 0 { cells } else { -cells };
        }
        total
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "dim": r.dim,
                    "simplex": r.simplex as u64,
                    "demicube": r.demicube as u64,
                    "expected_simplex": r.expected_simplex as u64,
                    "expected_demicube": r.expected_demicube as u64,
                })
            })
            .collect();
        json!({"n": self.n, "rows": rows, "matches_formulas": self.matches_formulas()})
    }
}

/// Counts cells dimension by dimension by actually enumerating them.
pub fn face_census(n: usize, max_n: usize) -> Result<FaceCensus> {
    let mut rows = Vec::new();
    for dim in 0..=n as i64 {
        let cells = enumerate_cells(n, dim, max_n)?;
        let demicube = cells.iter().filter(|c| c.is_demicube()).count() as u128;
        let simplex = cells.len() as u128 - demicube;
        let (es, ed) = expected_face_counts(n, dim);
        rows.push(FaceCensusRow {
            dim,
            simplex,
            demicube,
            expected_simplex: es,
            expected_demicube: ed,
        });
    }
    Ok(FaceCensus { n, rows })
}

/// Orientation frame: base vertex plus an ordered independent set of
/// integer direction vectors spanning the cell's direction space.
#[derive(Clone, Debug)]
pub struct Frame {
    pub base: u32,
    pub dirs: Vec<Vec<i64>>,
}

fn direction(n: usize, base: u32, v: u32) -> Vec<i64> {
    // Half the coordinate difference: entries in {-1, 0, 1}.
    (0..n)
        .map(|i| (base >> i & 1) as i64 - (v >> i & 1) as i64)
        .collect()
}

fn frame_for(cell: &Cell, n: usize) -> Frame {
    let verts = cell.vertices();
    let dim = cell.dim().max(0) as usize;
    let base = verts.first().copied().unwrap_or(0);
    let mut dirs: Vec<Vec<i64>> = Vec::with_capacity(dim);
    for &v in verts.iter().skip(1) {
        if dirs.len() == dim {
            break;
        }
        let cand = direction(n, base, v);
        dirs.push(cand);
        if rank_of_vectors(&dirs) < dirs.len() {
            dirs.pop();
        }
    }
    assert_eq!(dirs.len(), dim, "degenerate frame for {cell}");
    Frame { base, dirs }
}

/// Coordinate sums over the vertex set, plus the vertex count: the exact
/// barycenter scaled by the count.
fn coord_sums(cell: &Cell, n: usize) -> (Vec<i64>, i64) {
    let verts = cell.vertices();
    let mut sums = vec![0i64; n];
    for &v in &verts {
        for (i, s) in sums.iter_mut().enumerate() {
            *s += 1 - 2 * ((v >> i & 1) as i64);
        }
    }
    (sums, verts.len() as i64)
}

fn select_rows(cols: &[Vec<i64>], rows: &[usize]) -> Vec<Vec<i128>> {
    rows.iter()
        .map(|&r| cols.iter().map(|c| c[r] as i128).collect())
        .collect()
}

/// Incidence sign of `facet` in the boundary of `cell`: the sign of the
/// determinant expressing (outward barycenter offset, facet frame) in the
/// cell frame.
fn incidence_sign(
    n: usize,
    cell_frame: &Frame,
    cell_sums: &(Vec<i64>, i64),
    facet_frame: &Frame,
    facet_sums: &(Vec<i64>, i64),
) -> i64 {
    let (sc, vc) = cell_sums;
    let (sf, vf) = facet_sums;
    // Positive multiple of barycenter(facet) - barycenter(cell).
    let u: Vec<i64> = (0..n).map(|i| vc * sf[i] - vf * sc[i]).collect();
    let mut b_cols = Vec::with_capacity(cell_frame.dirs.len());
    b_cols.push(u);
    b_cols.extend(facet_frame.dirs.iter().cloned());
    let rows = pivot_rows(n, &cell_frame.dirs).expect("cell frame has full rank");
    let sm = det_sign(select_rows(&cell_frame.dirs, &rows));
    let sb = det_sign(select_rows(&b_cols, &rows));
    debug_assert!(sm != 0 && sb != 0, "incidence determinant vanished");
    sm * sb
}

/// Orientation comparison of a mapped frame against the target cell's frame.
fn orientation_sign(n: usize, target: &Frame, mapped_dirs: &[Vec<i64>]) -> i64 {
    if target.dirs.is_empty() {
        return 1;
    }
    let rows = pivot_rows(n, &target.dirs).expect("frame has full rank");
    let sm = det_sign(select_rows(&target.dirs, &rows));
    let sb = det_sign(select_rows(mapped_dirs, &rows));
    debug_assert!(sm != 0 && sb != 0, "orientation determinant vanished");
    sm * sb
}

struct DegreeData {
    cells: Vec<Cell>,
    x_count: usize,
    index: HashMap<Cell, usize>,
    frames: Vec<Frame>,
    sums: Vec<(Vec<i64>, i64)>,
    boundary: SparseIntMatrix,
}

/// The full chain complex of the half cube in rank n, with the empty cell
/// in degree -1 and per-degree bases ordered simplex part first.
pub struct ChainComplex {
    n: usize,
    degrees: Vec<DegreeData>,
}

impl ChainComplex {
    pub fn build(n: usize, max_n: usize) -> Result<ChainComplex> {
        let mut degrees: Vec<DegreeData> = Vec::with_capacity(n + 2);
        for dim in -1..=n as i64 {
            let cells = enumerate_cells(n, dim, max_n)?;
            let x_count = cells.iter().filter(|c| !c.is_demicube()).count();
            let index: HashMap<Cell, usize> =
                cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
            let frames: Vec<Frame> = cells.iter().map(|c| frame_for(c, n)).collect();
            let sums: Vec<(Vec<i64>, i64)> = cells.iter().map(|c| coord_sums(c, n)).collect();
            let boundary = if dim == -1 {
                SparseIntMatrix::zero(0, 1)
            } else {
                let prev = &degrees[dim as usize];
                let mut m = SparseIntMatrix::zero(prev.cells.len(), cells.len());
                for (j, cell) in cells.iter().enumerate() {
                    for f in facets(cell, n) {
                        let i = prev.index[&f];
                        let sign = if dim == 0 {
                            1
                        } else {
                            incidence_sign(n, &frames[j], &sums[j], &prev.frames[i], &prev.sums[i])
                        };
                        m.add_to(i, j, sign);
                    }
                }
                m
            };
            degrees.push(DegreeData {
                cells,
                x_count,
                index,
                frames,
                sums,
                boundary,
            });
        }
        let cc = ChainComplex { n, degrees };
        debug_assert!(cc.verify_d_squared().is_ok());
        Ok(cc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn deg(&self, dim: i64) -> &DegreeData {
        assert!((-1..=self.n as i64).contains(&dim), "degree {dim} out of range");
        &self.degrees[(dim + 1) as usize]
    }

    pub fn cells(&self, dim: i64) -> &[Cell] {
        &self.deg(dim).cells
    }

    pub fn rank(&self, dim: i64) -> usize {
        self.deg(dim).cells.len()
    }

    /// Number of simplex-shaped basis cells (the X part); the demicube
    /// cells occupy the remaining indices (the Y part).
    pub fn x_count(&self, dim: i64) -> usize {
        self.deg(dim).x_count
    }

    pub fn y_count(&self, dim: i64) -> usize {
        self.rank(dim) - self.x_count(dim)
    }

    pub fn index_of(&self, dim: i64, cell: &Cell) -> Option<usize> {
        self.deg(dim).index.get(cell).copied()
    }

    /// Boundary map from degree `dim` to degree `dim - 1`.
    pub fn boundary(&self, dim: i64) -> &SparseIntMatrix {
        assert!(dim >= 0, "boundary starts at degree 0");
        &self.deg(dim).boundary
    }

    pub fn verify_d_squared(&self) -> std::result::Result<(), Error> {
        for dim in 1..=self.n as i64 {
            if !self.boundary(dim - 1).mul(self.boundary(dim)).is_zero() {
                return Err(Error::NotAComplex(format!(
                    "d o d != 0 from degree {dim} at n={}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Image index and orientation sign of basis cell `j` in degree `dim`
    /// under the signed permutation `w`.
    pub fn cell_image(&self, dim: i64, j: usize, w: &SignedPermutation) -> (usize, i64) {
        let deg = self.deg(dim);
        let cell = &deg.cells[j];
        let image = cell.apply(w);
        let i = deg.index[&image];
        if deg.frames[j].dirs.is_empty() {
            return (i, 1);
        }
        let mapped: Vec<Vec<i64>> = deg.frames[j]
            .dirs
            .iter()
            .map(|d| w.apply_vector(d))
            .collect();
        (i, orientation_sign(self.n, &deg.frames[i], &mapped))
    }

    /// Signed permutation matrix of `w` on the degree-`dim` chain group.
    pub fn action_matrix(&self, w: &SignedPermutation, dim: i64) -> Result<SparseIntMatrix> {
        if w.n() != self.n {
            return Err(Error::SizeMismatch(format!(
                "element of rank {} acting on a rank-{} complex",
                w.n(),
                self.n
            )));
        }
        if !w.is_in_d() {
            return Err(Error::NotInD);
        }
        let size = self.rank(dim);
        let mut m = SparseIntMatrix::zero(size, size);
        for j in 0..size {
            let (i, sign) = self.cell_image(dim, j, w);
            m.add_to(i, j, sign);
        }
        Ok(m)
    }

    /// Rank and boundary data for the full complex.
    pub fn chain_data(&self) -> ChainData {
        ChainData {
            n: self.n,
            k: None,
            ranks: self.degrees.iter().map(|d| d.cells.len()).collect(),
            boundaries: (0..=self.n as i64).map(|l| self.boundary(l).clone()).collect(),
        }
    }

    /// The subcomplex obtained by removing the interiors of all demicube
    /// cells of dimension at least `k`: chain groups are full below degree
    /// k and simplex-only from degree k upward.
    pub fn subcomplex(&self, k: usize) -> Result<ChainData> {
        if k < 3 || k > self.n {
            return Err(Error::OutOfRange(format!(
                "subcomplex needs 3 <= k <= n = {}, got k={k}",
                self.n
            )));
        }
        let limit = |dim: i64| -> usize {
            if dim >= k as i64 {
                self.x_count(dim)
            } else {
                self.rank(dim)
            }
        };
        let ranks = (-1..=self.n as i64).map(limit).collect();
        let mut boundaries = Vec::with_capacity(self.n + 1);
        for l in 0..=self.n as i64 {
            let full = self.boundary(l);
            let (rl, cl) = (limit(l - 1), limit(l));
            // Simplex cells have simplex facets only, so no entries are lost.
            debug_assert!((0..cl).all(|j| full.col(j).iter().all(|&(i, _)| i < rl)));
            boundaries.push(full.prefix_submatrix(rl, cl));
        }
        Ok(ChainData {
            n: self.n,
            k: Some(k),
            ranks,
            boundaries,
        })
    }

    /// JSON container for the on-disk cache: cell keys sorted within each
    /// degree, boundary matrices in coordinate-list form.
    pub fn to_json(&self) -> Value {
        let degrees: Vec<Value> = (-1..=self.n as i64)
            .map(|dim| {
                let d = self.deg(dim);
                json!({
                    "dim": dim,
                    "cells": d.cells.iter().map(Cell::key).collect::<Vec<_>>(),
                    "x_count": d.x_count,
                    "boundary": if dim >= 0 { self.boundary(dim).to_json() } else { Value::Null },
                })
            })
            .collect();
        json!({
            "format_version": FORMAT_VERSION,
            "n": self.n,
            "degrees": degrees,
        })
    }

    /// Rebuilds a complex from the cache container, recomputing frames and
    /// verifying the boundary matrices against a fresh incidence pass.
    pub fn from_json(v: &Value) -> Result<ChainComplex> {
        let bad = |m: &str| Error::Invalid(format!("cache: {m}"));
        if v["format_version"].as_u64() != Some(FORMAT_VERSION as u64) {
            return Err(bad("format version mismatch"));
        }
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let degree_values = v["degrees"].as_array().ok_or_else(|| bad("missing degrees"))?;
        if degree_values.len() != n + 2 {
            return Err(bad("wrong degree count"));
        }
        let mut degrees = Vec::with_capacity(n + 2);
        for (idx, dv) in degree_values.iter().enumerate() {
            let dim = idx as i64 - 1;
            if dv["dim"].as_i64() != Some(dim) {
                return Err(bad("degree out of order"));
            }
            let cell_keys = dv["cells"].as_array().ok_or_else(|| bad("missing cells"))?;
            let mut cells = Vec::with_capacity(cell_keys.len());
            for ck in cell_keys {
                cells.push(Cell::parse_key(
                    ck.as_str().ok_or_else(|| bad("cell key not a string"))?,
                )?);
            }
            if !cells.windows(2).all(|w| w[0] < w[1]) {
                return Err(bad("cells not sorted"));
            }
            let x_count = dv["x_count"].as_u64().ok_or_else(|| bad("missing x_count"))? as usize;
            if x_count != cells.iter().filter(|c| !c.is_demicube()).count() {
                return Err(bad("x_count mismatch"));
            }
            let index: HashMap<Cell, usize> =
                cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
            let frames: Vec<Frame> = cells.iter().map(|c| frame_for(c, n)).collect();
            let sums: Vec<(Vec<i64>, i64)> = cells.iter().map(|c| coord_sums(c, n)).collect();
            let boundary = if dim == -1 {
                SparseIntMatrix::zero(0, 1)
            } else {
                SparseIntMatrix::from_json(&dv["boundary"])?
            };
            degrees.push(DegreeData {
                cells,
                x_count,
                index,
                frames,
                sums,
                boundary,
            });
        }
        let cc = ChainComplex { n, degrees };
        cc.verify_d_squared()?;
        Ok(cc)
    }

    /// Loads the complex from `cache_dir` when a valid container for
    /// (n, format version) is present; otherwise builds it and, when a cache
    /// directory is given, writes the container back.
    pub fn load_or_build(n: usize, max_n: usize, cache_dir: Option<&Path>) -> Result<ChainComplex> {
        let file = cache_dir.map(|d| d.join(format!("halfcube_complex_n{n}_v{FORMAT_VERSION}.json")));
        if let Some(path) = &file {
            if let Ok(text) = std::fs::read_to_string(path) {
                if let Ok(value) = serde_json::from_str::<Value>(&text) {
                    if let Ok(cc) = ChainComplex::from_json(&value) {
                        if cc.n == n {
                            return Ok(cc);
                        }
                    }
                }
                // Fall through and rebuild on any cache problem.
            }
        }
        let cc = ChainComplex::build(n, max_n)?;
        if let Some(path) = &file {
            if let Some(dir) = path.parent() {
                let _ = std::fs::create_dir_all(dir);
            }
            if let Err(e) = std::fs::write(path, serde_json::to_string(&cc.to_json())?.as_bytes()) {
                eprintln!("warning: could not write cache {}: {e}", path.display());
            }
        }
        Ok(cc)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(format!("json: {e}"))
    }
}

/// Chain ranks and boundary maps of the full complex or a subcomplex;
/// degrees run from -1 to n, with `ranks[d + 1]` the rank in degree d and
/// `boundaries[l]` the map from degree l to degree l - 1.
#[derive(Clone, Debug)]
pub struct ChainData {
    pub n: usize,
    pub k: Option<usize>,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<SparseIntMatrix>,
}

impl ChainData {
    pub fn rank(&self, dim: i64) -> usize {
        self.ranks[(dim + 1) as usize]
    }

    pub fn boundary(&self, dim: i64) -> &SparseIntMatrix {
        &self.boundaries[dim as usize]
    }

    pub fn verify_d_squared(&self) -> std::result::Result<(), Error> {
        for l in 1..=self.n as i64 {
            if !self.boundary(l - 1).mul(self.boundary(l)).is_zero() {
                return Err(Error::NotAComplex(format!(
                    "d o d != 0 from degree {l} (n={}, k={:?})",
                    self.n, self.k
                )));
            }
        }
        Ok(())
    }

    /// Alternating sum of chain ranks over all degrees including -1.
    pub fn reduced_euler(&self) -> i128 {
        let mut total = 0i128;
        for dim in -1..=self.n as i64 {
            let r = self.rank(dim) as i128;
            total += if dim % 2 == 0 { r } else { -r };
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::{enumerate_group, generators_d, GroupKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn census_n4_exact() {
        let census = face_census(4, DEFAULT_ENUM_MAX_N).unwrap();
        let totals: Vec<(u128, u128)> = census
            .rows
            .iter()
            .map(|r| (r.simplex, r.demicube))
            .collect();
        assert_eq!(
            totals,
            vec![(8, 0), (24, 0), (32, 0), (8, 8), (0, 1)]
        );
        assert!(census.matches_formulas());
        assert_eq!(census.reduced_euler(), 0);
    }

    #[test]
    fn census_matches_formulas_up_to_6() {
        for n in 4..=6 {
            let census = face_census(n, DEFAULT_ENUM_MAX_N).unwrap();
            assert!(census.matches_formulas(), "n={n}");
            assert_eq!(census.reduced_euler(), 0, "n={n}");
        }
    }

    #[test]
    fn census_budget() {
        assert!(matches!(face_census(9, 8), Err(Error::BudgetExceeded(_))));
        assert!(matches!(face_census(3, 8), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn demicube_five_has_ten_four_faces() {
        let cells = enumerate_cells(5, 4, 8).unwrap();
        assert_eq!(cells.iter().filter(|c| c.is_demicube()).count(), 10);
    }

    #[test]
    fn unique_top_cell() {
        let cells = enumerate_cells(4, 4, 8).unwrap();
        assert_eq!(cells, vec![Cell::demicube(0b1111, 0)]);
    }

    #[test]
    fn edge_canonicalization() {
        let e1 = Cell::simplex(0b0001, 0b0011);
        let e2 = Cell::simplex(0b0010, 0b0011);
        assert_eq!(e1, e2);
        assert_eq!(e1.vertices(), e2.vertices());
    }

    #[test]
    fn facet_shapes() {
        let n = 4;
        // A demicube 3-cell is a tetrahedron: four simplex facets.
        let d3 = Cell::demicube(0b0111, 0b1000);
        let fs = facets(&d3, n);
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|f| !f.is_demicube() && f.dim() == 2));
        // The top cell of the 4-half-cube has 8 + 8 = 16 facets.
        let top = Cell::demicube(0b1111, 0);
        let fs = facets(&top, n);
        assert_eq!(fs.len(), 16);
        assert_eq!(fs.iter().filter(|f| f.is_demicube()).count(), 8);
        // Every facet's vertex set is contained in the cell's vertex set.
        for cell in enumerate_cells(n, 3, 8).unwrap() {
            let verts = cell.vertices();
            for f in facets(&cell, n) {
                assert!(f.vertices().iter().all(|v| verts.contains(v)));
                assert_eq!(f.dim(), cell.dim() - 1);
            }
        }
    }

    #[test]
    fn vertex_counts_per_cell() {
        // In dimension 3 both shapes are tetrahedra: 4 vertices each.
        for cell in enumerate_cells(5, 3, 8).unwrap() {
            assert_eq!(cell.vertices().len(), 4);
        }
        for cell in enumerate_cells(5, 4, 8).unwrap() {
            let expected = if cell.is_demicube() { 8 } else { 5 };
            assert_eq!(cell.vertices().len(), expected);
        }
    }

    #[test]
    fn boundary_gates_n4_n5() {
        for n in [4, 5] {
            let cc = ChainComplex::build(n, 8).unwrap();
            cc.verify_d_squared().unwrap();
            // Augmentation: each edge hits two vertices with opposite signs.
            let d1 = cc.boundary(1);
            for j in 0..d1.ncols() {
                let col = d1.col(j);
                assert_eq!(col.len(), 2);
                assert_eq!(col[0].1 + col[1].1, 0);
            }
        }
    }

    #[test]
    fn simplex_boundary_alternates() {
        let cc = ChainComplex::build(4, 8).unwrap();
        for dim in 2..=3i64 {
            for (j, cell) in cc.cells(dim).iter().enumerate() {
                if cell.is_demicube() {
                    continue;
                }
                let col = cc.boundary(dim).col(j);
                assert_eq!(col.len() as i64, dim + 1);
                // Facets sorted by deleted vertex (ascending) carry
                // alternating signs.
                let verts = cell.vertices();
                let mut signs = Vec::new();
                for &v in &verts {
                    let fverts: Vec<u32> =
                        verts.iter().copied().filter(|&u| u != v).collect();
                    let f = cc
                        .cells(dim - 1)
                        .iter()
                        .position(|c| c.vertices() == fverts)
                        .unwrap();
                    signs.push(cc.boundary(dim).entry(f, j));
                }
                for w in signs.windows(2) {
                    assert_eq!(w[0], -w[1], "cell {cell}");
                }
            }
        }
    }

    #[test]
    fn top_boundary_has_16_entries_at_n4() {
        let cc = ChainComplex::build(4, 8).unwrap();
        assert_eq!(cc.rank(4), 1);
        assert_eq!(cc.boundary(4).col(0).len(), 16);
    }

    #[test]
    fn y_ranks_match_formula() {
        let cc = ChainComplex::build(5, 8).unwrap();
        for dim in -1..=5i64 {
            let expected = if (3..=5).contains(&dim) {
                ((1u128 << (5 - dim as usize)) * binomial(5, dim as usize)) as usize
            } else {
                0
            };
            assert_eq!(cc.y_count(dim), expected, "dim {dim}");
        }
    }

    #[test]
    fn action_identity_and_generators() {
        let n = 4;
        let cc = ChainComplex::build(n, 8).unwrap();
        let id = SignedPermutation::identity(n);
        for dim in -1..=n as i64 {
            let m = cc.action_matrix(&id, dim).unwrap();
            assert_eq!(m, SparseIntMatrix::identity(cc.rank(dim)));
        }
        // Every generator negates the top chain group.
        for g in generators_d(n).unwrap() {
            let m = cc.action_matrix(&g, n as i64).unwrap();
            assert_eq!(m.entry(0, 0), -1);
        }
    }

    #[test]
    fn action_matrices_are_chain_maps_n4() {
        let n = 4;
        let cc = ChainComplex::build(n, 8).unwrap();
        for g in generators_d(n).unwrap() {
            for dim in 0..=n as i64 {
                let a_here = cc.action_matrix(&g, dim).unwrap();
                let a_prev = cc.action_matrix(&g, dim - 1).unwrap();
                assert_eq!(
                    a_prev.mul(cc.boundary(dim)),
                    cc.boundary(dim).mul(&a_here),
                    "degree {dim}"
                );
            }
        }
    }

    #[test]
    fn action_orthogonal_and_kind_preserving() {
        let n = 4;
        let cc = ChainComplex::build(n, 8).unwrap();
        let gens = generators_d(n).unwrap();
        let w = gens[0].compose(&gens[2]).compose(&gens[1]);
        for dim in 0..=n as i64 {
            let a = cc.action_matrix(&w, dim).unwrap();
            assert_eq!(a.transpose().mul(&a), SparseIntMatrix::identity(cc.rank(dim)));
            let x = cc.x_count(dim);
            for j in 0..cc.rank(dim) {
                let (i, _) = cc.cell_image(dim, j, &w);
                assert_eq!(i < x, j < x, "kind preserved at degree {dim}");
            }
        }
    }

    #[test]
    fn action_functoriality_random_pairs() {
        let n = 4;
        let cc = ChainComplex::build(n, 8).unwrap();
        let group = enumerate_group(n, GroupKind::D, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        use rand::Rng;
        for _ in 0..50 {
            let u = &group[rng.random_range(0..group.len())];
            let v = &group[rng.random_range(0..group.len())];
            let uv = u.compose(v);
            for dim in [1i64, 3] {
                let a = cc.action_matrix(u, dim).unwrap();
                let b = cc.action_matrix(v, dim).unwrap();
                let c = cc.action_matrix(&uv, dim).unwrap();
                assert_eq!(a.mul(&b), c);
            }
        }
    }

    #[test]
    fn orbit_transitivity_n4() {
        let n = 4;
        let gens = generators_d(n).unwrap();
        for dim in 0..=n as i64 {
            let cells = enumerate_cells(n, dim, 8).unwrap();
            for kind in [false, true] {
                let of_kind: Vec<Cell> = cells
                    .iter()
                    .copied()
                    .filter(|c| c.is_demicube() == kind)
                    .collect();
                if of_kind.is_empty() {
                    continue;
                }
                let mut seen = std::collections::BTreeSet::new();
                let mut stack = vec![of_kind[0]];
                seen.insert(of_kind[0]);
                while let Some(c) = stack.pop() {
                    for g in &gens {
                        let img = c.apply(g);
                        if seen.insert(img) {
                            stack.push(img);
                        }
                    }
                }
                assert_eq!(seen.len(), of_kind.len(), "dim {dim} kind {kind}");
            }
        }
    }

    #[test]
    fn subcomplex_shapes() {
        let n = 4;
        let cc = ChainComplex::build(n, 8).unwrap();
        let c44 = cc.subcomplex(4).unwrap();
        c44.verify_d_squared().unwrap();
        // Full complex minus the single top cell.
        let full = cc.chain_data();
        let total_full: usize = full.ranks.iter().sum();
        let total_sub: usize = c44.ranks.iter().sum();
        assert_eq!(total_full, total_sub + 1);
        let c43 = cc.subcomplex(3).unwrap();
        c43.verify_d_squared().unwrap();
        assert_eq!(c43.rank(3), 8);
        assert_eq!(c43.rank(4), 0);
        assert!(cc.subcomplex(2).is_err());
    }

    #[test]
    fn cache_round_trip() {
        let cc = ChainComplex::build(4, 8).unwrap();
        let v = cc.to_json();
        let cc2 = ChainComplex::from_json(&v).unwrap();
        assert_eq!(cc2.n(), 4);
        for dim in -1..=4i64 {
            assert_eq!(cc.cells(dim), cc2.cells(dim));
            if dim >= 0 {
                assert_eq!(cc.boundary(dim), cc2.boundary(dim));
            }
        }
        // Determinism of the container itself.
        assert_eq!(
            serde_json::to_string(&cc.to_json()).unwrap(),
            serde_json::to_string(&cc2.to_json()).unwrap()
        );
    }
}
