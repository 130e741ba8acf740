//! Signed permutations: the concrete realization of W(B_n) and of its
//! index-two subgroup W(D_n) as permutations of n signed coordinates.
//!
//! An element carries a permutation `perm` (0-indexed one-line form) and a
//! sign mask `neg`; coordinate `j` of the image of a point x is
//! `eps_j * x_{perm^{-1}(j)}` where `eps_j = -1` iff bit j of `neg` is set.
//! Membership in W(D_n) is an even number of set sign bits.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::characters::SignedCycleType;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Default guard for full group enumeration (order 2^{n-1} n! in type D).
pub const DEFAULT_GROUP_MAX_N: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GroupKind {
    B,
    D,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::B => write!(f, "B"),
            GroupKind::D => write!(f, "D"),
        }
    }
}

pub fn group_order(n: usize, kind: GroupKind) -> u128 {
    let half = match kind {
        GroupKind::B => 0,
        GroupKind::D => 1,
    };
    (1u128 << (n - half)) * crate::partition::factorial(n)
}

/// Element of W(B_n) as a signed permutation. The derived ordering
/// (one-line form, then sign mask) fixes representatives and makes all
/// enumeration output deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    neg: u32,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, neg: u32) -> Result<Self> {
        let n = perm.len();
        if n == 0 || n > 32 {
            return Err(Error::Invalid(format!("unsupported rank {n}")));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::Invalid(format!("not a permutation: {perm:?}")));
            }
            seen[p] = true;
        }
        if n < 32 && neg >= 1 << n {
            return Err(Error::Invalid("sign mask out of range".into()));
        }
        Ok(SignedPermutation { perm, neg })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            neg: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.neg == 0 && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn neg_mask(&self) -> u32 {
        self.neg
    }

    /// Image position of coordinate `i` under the underlying permutation.
    pub fn image(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// Sign applied at target coordinate `j`.
    pub fn sign_at(&self, j: usize) -> i64 {
        if self.neg >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Pushes a coordinate-subset bitmask through the permutation only.
    pub fn permute_bits(&self, mask: u32) -> u32 {
        let mut out = 0;
        for i in 0..self.n() {
            if mask >> i & 1 == 1 {
                out |= 1 << self.perm[i];
            }
        }
        out
    }

    /// Action on a hypercube vertex encoded as a bitmask (bit set means the
    /// coordinate equals -1).
    pub fn apply_vertex(&self, mask: u32) -> u32 {
        self.permute_bits(mask) ^ self.neg
    }

    /// Action on an integer vector (used for orientation frames).
    pub fn apply_vector(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.n()];
        for (i, &x) in v.iter().enumerate() {
            let j = self.perm[i];
            out[j] = self.sign_at(j) * x;
        }
        out
    }

    /// Group law: `self.compose(&other)` applies `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.n(), other.n());
        let perm = other.perm.iter().map(|&i| self.perm[i]).collect();
        let neg = self.neg ^ self.permute_bits(other.neg);
        SignedPermutation { perm, neg }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.n();
        let mut perm = vec![0; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
        }
        let mut neg = 0;
        for j in 0..n {
            if self.neg >> self.perm[j] & 1 == 1 {
                neg |= 1 << j;
            }
        }
        SignedPermutation { perm, neg }
    }

    /// True when the element effects an even number of sign changes.
    pub fn is_in_d(&self) -> bool {
        self.neg.count_ones() % 2 == 0
    }

    /// Signed cycle type: a cycle of the underlying permutation is negative
    /// iff the product of signs over its support is -1.
    pub fn cycle_type(&self) -> SignedCycleType {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut sign_bits = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                sign_bits += self.neg >> cur & 1;
                cur = self.perm[cur];
                len += 1;
            }
            if sign_bits % 2 == 0 {
                positive.push(len);
            } else {
                negative.push(len);
            }
        }
        positive.sort_unstable_by(|a, b| b.cmp(a));
        negative.sort_unstable_by(|a, b| b.cmp(a));
        SignedCycleType::new(Partition::new(positive), Partition::new(negative))
    }

    /// Value of the sign representation: in type B, the product of the
    /// permutation sign and (-1)^(number of flipped coordinates). Restricted
    /// to W(D_n) this sends every Coxeter generator to -1.
    pub fn sign_rep(&self) -> i64 {
        let mut sign = if self.neg.count_ones() % 2 == 0 { 1 } else { -1 };
        let mut seen = vec![false; self.n()];
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.perm[cur];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn order(&self) -> usize {
        let mut w = self.clone();
        let mut k = 1;
        while !w.is_identity() {
            w = w.compose(self);
            k += 1;
            assert!(k <= 4 * self.n() * self.n(), "order runaway");
        }
        k
    }
}

impl fmt::Display for SignedPermutation {
    /// One-line serialization `p1 p2 ... pn / ++-...` with 1-indexed images.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.perm.iter().map(|&p| (p + 1).to_string()).collect();
        let signs: String = (0..self.n())
            .map(|j| if self.neg >> j & 1 == 1 { '-' } else { '+' })
            .collect();
        write!(f, "{} / {}", images.join(" "), signs)
    }
}

fn transposition(n: usize, i: usize, j: usize) -> SignedPermutation {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(i, j);
    SignedPermutation { perm, neg: 0 }
}

/// Single sign flip at coordinate `i` (a type-B generator for i = 0).
pub fn sign_flip(n: usize, i: usize) -> SignedPermutation {
    SignedPermutation {
        perm: (0..n).collect(),
        neg: 1 << i,
    }
}

/// Coxeter generators of W(D_n): `[s_1', s_1, ..., s_{n-1}]` where s_i is
/// the transposition (i, i+1) and s_1' is (1, 2) composed with sign flips
/// at coordinates 1 and 2.
pub fn generators_d(n: usize) -> Result<Vec<SignedPermutation>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("W(D_n) needs n >= 2, got {n}")));
    }
    let mut gens = Vec::with_capacity(n);
    let mut s1p = transposition(n, 0, 1);
    s1p.neg = 0b11;
    gens.push(s1p);
    for i in 0..n - 1 {
        gens.push(transposition(n, i, i + 1));
    }
    Ok(gens)
}

/// Coxeter generators of W(B_n): `[s_0, s_1, ..., s_{n-1}]`.
pub fn generators_b(n: usize) -> Result<Vec<SignedPermutation>> {
    if n < 1 {
        return Err(Error::OutOfRange("W(B_n) needs n >= 1".into()));
    }
    let mut gens = vec![sign_flip(n, 0)];
    for i in 0..n - 1 {
        gens.push(transposition(n, i, i + 1));
    }
    Ok(gens)
}

/// Checks the defining relations of the D_n Coxeter graph on the concrete
/// generators: m(s_1', s_2) = 3, m(s_1', s_1) = 2, m(s_i, s_{i+1}) = 3, and
/// all remaining pairs commute.
pub fn coxeter_relation_check(n: usize) -> Result<bool> {
    if n < 4 {
        return Err(Error::OutOfRange(format!("relation check needs n >= 4, got {n}")));
    }
    let gens = generators_d(n)?;
    // Index 0 is s_1'; index i >= 1 is s_i.
    let m = |a: usize, b: usize| -> usize {
        if a == b {
            return 1;
        }
        let (a, b) = (a.min(b), a.max(b));
        if a == 0 {
            if b == 2 {
                3
            } else {
                2
            }
        } else if b == a + 1 {
            3
        } else {
            2
        }
    };
    for (a, ga) in gens.iter().enumerate() {
        if ga.order() != 2 {
            return Ok(false);
        }
        for (b, gb) in gens.iter().enumerate().skip(a + 1) {
            if ga.compose(gb).order() != m(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Enumerates W(B_n) or W(D_n), in increasing element order.
pub fn enumerate_group(n: usize, kind: GroupKind, max_n: usize) -> Result<Vec<SignedPermutation>> {
    if n > max_n || n > 16 {
        return Err(Error::BudgetExceeded(format!(
            "group enumeration at n={n} exceeds the budget n <= {max_n}"
        )));
    }
    if n == 0 {
        return Err(Error::OutOfRange("need n >= 1".into()));
    }
    let mut out = Vec::with_capacity(group_order(n, kind) as usize);
    for perm in (0..n).permutations(n) {
        for neg in 0u32..1 << n {
            if kind == GroupKind::D && neg.count_ones() % 2 == 1 {
                continue;
            }
            out.push(SignedPermutation {
                perm: perm.clone(),
                neg,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: SignedPermutation,
    pub size: usize,
    pub cycle_type: SignedCycleType,
}

/// Brute-force conjugacy classes with deterministic minimal representatives.
#[derive(Clone, Debug)]
pub struct ConjugacyTable {
    pub n: usize,
    pub kind: GroupKind,
    pub classes: Vec<ConjugacyClass>,
}

impl ConjugacyTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &SignedPermutation> {
        self.classes.iter().map(|c| &c.representative)
    }
}

pub fn conjugacy_classes(n: usize, kind: GroupKind, max_n: usize) -> Result<ConjugacyTable> {
    let elements = enumerate_group(n, kind, max_n)?;
    let gens = match kind {
        GroupKind::B => generators_b(n)?,
        GroupKind::D => generators_d(n)?,
    };
    let gen_pairs: Vec<(SignedPermutation, SignedPermutation)> =
        gens.iter().map(|g| (g.clone(), g.inverse())).collect();
    let index: HashMap<&SignedPermutation, usize> =
        elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut assigned = vec![false; elements.len()];
    let mut classes = Vec::new();
    for seed in 0..elements.len() {
        if assigned[seed] {
            continue;
        }
        // Orbit of the seed under conjugation by the generators.
        let mut stack = vec![seed];
        assigned[seed] = true;
        let mut size = 0;
        while let Some(i) = stack.pop() {
            size += 1;
            for (g, ginv) in &gen_pairs {
                let conj = g.compose(&elements[i]).compose(ginv);
                let j = index[&conj];
                if !assigned[j] {
                    assigned[j] = true;
                    stack.push(j);
                }
            }
        }
        classes.push(ConjugacyClass {
            representative: elements[seed].clone(),
            size,
            cycle_type: elements[seed].cycle_type(),
        });
    }
    Ok(ConjugacyTable { n, kind, classes })
}

/// Extends an element of a smaller group by the identity, acting on the
/// coordinate window starting at `offset`. Used for the parabolic factors
/// D_k (offset 0) and the symmetric factor on the last coordinates, as well
/// as the corank-one subgroup embedding.
pub fn embed_at(w: &SignedPermutation, n: usize, offset: usize) -> Result<SignedPermutation> {
    let m = w.n();
    if offset + m > n {
        return Err(Error::OutOfRange(format!(
            "cannot place a rank-{m} element at offset {offset} in rank {n}"
        )));
    }
    let perm = (0..n)
        .map(|i| {
            if i >= offset && i < offset + m {
                offset + w.perm[i - offset]
            } else {
                i
            }
        })
        .collect();
    SignedPermutation::new(perm, w.neg << offset)
}
