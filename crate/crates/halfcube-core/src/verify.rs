//! Verification sweeps with machine-readable reports.
//!
//! Each driver runs one family of exact checks and returns a `SuiteReport`
//! whose JSON form lists every check with its pass/fail status and all
//! counterexample payloads (element, k, and both values). Reports are
//! assembled in a fixed order, so identical runs serialize identically.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::characters::{
    bipartitions, d_labels, degree_b, parabolic_inner_product, mn_character_b, value_d, DLabel,
};
use crate::complex::{face_census, ChainComplex, DEFAULT_ENUM_MAX_N, DEFAULT_HOMOLOGY_MAX_N};
use crate::error::Result;
use crate::homology::{betti, homology, verify_concentration, BettiMethod};
use crate::partition::Partition;
use crate::reps::{
    alternating_chain_trace, branch_chi_d, chi_d, chi_d_degree_matches_betti,
    hopf_homology_trace, induced_y_character_value, restrict_chi_d_to_sn, exterior_power_constituent_present,
    y_character_decomposition, y_trace,
};
use crate::signed::{
    conjugacy_classes, embed_at, enumerate_group, generators_b, generators_d, group_order,
    GroupKind, SignedPermutation,
};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub checks: u64,
    pub counterexamples: Vec<Value>,
}

impl CheckResult {
    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.pass,
            "checks": self.checks,
            "counterexamples": self.counterexamples,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checks: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn total_checks(&self) -> u64 {
        self.checks.iter().map(|c| c.checks).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "pass": self.pass(),
            "total_checks": self.total_checks(),
            "checks": self.checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
        })
    }

    fn push_counted(&mut self, name: &str, checks: u64, counterexamples: Vec<Value>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass: counterexamples.is_empty(),
            checks,
            counterexamples,
        });
    }

    fn push_flag(&mut self, name: &str, ok: bool, detail: Value) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass: ok,
            checks: 1,
            counterexamples: if ok { Vec::new() } else { vec![detail] },
        });
    }
}

/// Shared builder for chain complexes, with an optional on-disk cache.
pub struct ComplexStore {
    max_n: usize,
    cache_dir: Option<PathBuf>,
    built: BTreeMap<usize, Arc<ChainComplex>>,
}

impl ComplexStore {
    pub fn new(max_n: usize, cache_dir: Option<PathBuf>) -> Self {
        ComplexStore {
            max_n,
            cache_dir,
            built: BTreeMap::new(),
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn get(&mut self, n: usize) -> Result<Arc<ChainComplex>> {
        if let Some(cc) = self.built.get(&n) {
            return Ok(cc.clone());
        }
        let cc = Arc::new(ChainComplex::load_or_build(
            n,
            self.max_n,
            self.cache_dir.as_deref(),
        )?);
        self.built.insert(n, cc.clone());
        Ok(cc)
    }
}

/// Face census against the five closed-form counts, plus the reduced Euler
/// characteristic.
pub fn faces_suite(n_hi: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("faces");
    let budget = n_hi.max(DEFAULT_ENUM_MAX_N);
    for n in 4..=n_hi {
        let census = face_census(n, budget)?;
        let mut bad = Vec::new();
        for row in &census.rows {
            if row.simplex != row.expected_simplex || row.demicube != row.expected_demicube {
                bad.push(json!({
                    "n": n,
                    "dim": row.dim,
                    "measured": [row.simplex as u64, row.demicube as u64],
                    "expected": [row.expected_simplex as u64, row.expected_demicube as u64],
                }));
            }
        }
        report.push_counted(&format!("face counts n={n}"), census.rows.len() as u64, bad);
        let euler = census.reduced_euler();
        report.push_flag(
            &format!("reduced Euler characteristic n={n}"),
            euler == 0,
            json!({"n": n, "euler": euler as i64}),
        );
    }
    Ok(report)
}

/// Boundary and action gates: d o d = 0, generator chain maps, orthogonality
/// and kind preservation, functoriality on seeded random pairs, and the
/// vanishing alternating chain trace.
pub fn chain_suite(store: &mut ComplexStore, n_hi: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("chain");
    for n in 4..=n_hi {
        let cc = store.get(n)?;
        report.push_flag(
            &format!("d o d = 0 at n={n}"),
            cc.verify_d_squared().is_ok(),
            json!({"n": n}),
        );
        let gens = generators_d(n)?;
        let mut bad = Vec::new();
        let mut checks = 0;
        for (gi, g) in gens.iter().enumerate() {
            for dim in 0..=n as i64 {
                checks += 1;
                let a_here = cc.action_matrix(g, dim)?;
                let a_prev = cc.action_matrix(g, dim - 1)?;
                if a_prev.mul(cc.boundary(dim)) != cc.boundary(dim).mul(&a_here) {
                    bad.push(json!({"n": n, "generator": gi, "degree": dim}));
                }
            }
        }
        report.push_counted(&format!("generator chain maps n={n}"), checks, bad);

        let mut bad = Vec::new();
        let mut checks = 0;
        for g in &gens {
            for dim in 0..=n as i64 {
                checks += 1;
                let a = cc.action_matrix(g, dim)?;
                if a.transpose().mul(&a) != crate::matrix::SparseIntMatrix::identity(cc.rank(dim)) {
                    bad.push(json!({"n": n, "degree": dim, "reason": "not orthogonal"}));
                }
                let x = cc.x_count(dim);
                for j in 0..cc.rank(dim) {
                    let (i, _) = cc.cell_image(dim, j, g);
                    if (i < x) != (j < x) {
                        bad.push(json!({"n": n, "degree": dim, "cell": j, "reason": "kind not preserved"}));
                    }
                }
            }
        }
        report.push_counted(&format!("orthogonality and kind preservation n={n}"), checks, bad);

        let mut bad = Vec::new();
        let mut checks = 0;
        for g in &gens {
            checks += 1;
            let t = alternating_chain_trace(&cc, g)?;
            if t != 0 {
                bad.push(json!({"n": n, "element": g.to_string(), "trace": t}));
            }
        }
        report.push_counted(&format!("alternating chain trace vanishes n={n}"), checks, bad);

        // Chain-map property on random elements, beyond the generators.
        let group = enumerate_group(n, GroupKind::D, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + n as u64);
        let sample: Vec<&SignedPermutation> = (0..100)
            .map(|_| &group[rng.random_range(0..group.len())])
            .collect();
        let mut bad = Vec::new();
        let mut checks = 0;
        for w in &sample {
            for dim in 0..=n as i64 {
                checks += 1;
                let a_here = cc.action_matrix(w, dim)?;
                let a_prev = cc.action_matrix(w, dim - 1)?;
                if a_prev.mul(cc.boundary(dim)) != cc.boundary(dim).mul(&a_here) {
                    bad.push(json!({"n": n, "element": w.to_string(), "degree": dim}));
                }
            }
        }
        report.push_counted(&format!("chain maps on 100 random elements n={n}"), checks, bad);

        if n <= 5 {
            let mut bad = Vec::new();
            let mut checks = 0;
            for _ in 0..100 {
                let u = &group[rng.random_range(0..group.len())];
                let v = &group[rng.random_range(0..group.len())];
                let uv = u.compose(v);
                for dim in 0..=n as i64 {
                    checks += 1;
                    let lhs = cc.action_matrix(u, dim)?.mul(&cc.action_matrix(v, dim)?);
                    if lhs != cc.action_matrix(&uv, dim)? {
                        bad.push(json!({
                            "n": n,
                            "degree": dim,
                            "u": u.to_string(),
                            "v": v.to_string(),
                        }));
                    }
                }
            }
            report.push_counted(&format!("action functoriality n={n} (seeded pairs)"), checks, bad);

            // One orbit per (dimension, shape): the group acts transitively.
            let mut bad = Vec::new();
            let mut checks = 0;
            for dim in 0..=n as i64 {
                for kind in [false, true] {
                    let of_kind: Vec<_> = cc
                        .cells(dim)
                        .iter()
                        .copied()
                        .filter(|c| c.is_demicube() == kind)
                        .collect();
                    if of_kind.is_empty() {
                        continue;
                    }
                    checks += 1;
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
                    if seen.len() != of_kind.len() {
                        bad.push(json!({"n": n, "dim": dim, "demicube": kind, "orbit": seen.len(), "cells": of_kind.len()}));
                    }
                }
            }
            report.push_counted(&format!("orbit transitivity n={n}"), checks, bad);
        }
    }
    Ok(report)
}

/// Betti agreement over a wide range plus homology concentration for every
/// truncation, the acyclic full complex, and the boundary sphere.
pub fn homology_suite(store: &mut ComplexStore, n_hi: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("homology");
    let mut bad = Vec::new();
    let mut checks = 0;
    for n in 0..=30usize {
        for k in 0..=n {
            checks += 1;
            let a = betti(n, k, BettiMethod::Recurrence)?;
            let b = betti(n, k, BettiMethod::Closed)?;
            let c = if k >= 3 {
                betti(n, k, BettiMethod::Alternating)?
            } else {
                a
            };
            if a != b || a != c {
                bad.push(json!({"n": n, "k": k, "recurrence": a as u64, "closed": b as u64, "alternating": c as u64}));
            }
        }
    }
    report.push_counted("Betti numbers agree across all three routes (n <= 30)", checks, bad);
    report.push_flag(
        "Betti spot values B(4,3)=7, B(5,3)=31, B(5,4)=9",
        betti(4, 3, BettiMethod::Closed)? == 7
            && betti(5, 3, BettiMethod::Closed)? == 31
            && betti(5, 4, BettiMethod::Closed)? == 9,
        json!({}),
    );

    for n in 4..=n_hi {
        let cc = store.get(n)?;
        let full = homology(&cc.chain_data())?;
        let trivial = full.groups.values().all(|g| g.is_trivial());
        report.push_flag(
            &format!("full complex acyclic n={n}"),
            trivial,
            full.to_json(),
        );
        let results: Vec<_> = (3..=n)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&k| verify_concentration(&cc, k))
            .collect();
        for r in results {
            let r = r?;
            report.push_flag(
                &format!("homology concentrated and free n={n} k={}", r.k),
                r.pass,
                r.to_json(),
            );
        }
    }
    Ok(report)
}

fn probes_for(n: usize) -> Result<Vec<SignedPermutation>> {
    if n == 4 {
        enumerate_group(n, GroupKind::D, n)
    } else {
        Ok(conjugacy_classes(n, GroupKind::D, n)?
            .classes
            .into_iter()
            .map(|c| c.representative)
            .collect())
    }
}

/// The homology character identity: the Hopf trace computed from explicit
/// cells equals the closed-form decomposition evaluated through type-B
/// Murnaghan-Nakayama, for every probe element. Includes the demicube
/// module character identity, its induced-character oracle at n = 4, and
/// the top-degree negation facts.
pub fn theorem44_suite(store: &mut ComplexStore, n_hi: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("theorem44");
    for n in 4..=n_hi {
        let cc = store.get(n)?;
        let probes = probes_for(n)?;
        let label = if n == 4 { "all 192 elements" } else { "class representatives" };

        // Main identity, for every k and probe.
        let mut bad = Vec::new();
        let mut checks = 0;
        for k in 3..=n {
            let character = chi_d(n, k)?;
            let rows: Vec<(i64, i64, String)> = probes
                .par_iter()
                .map(|w| {
                    let lhs = hopf_homology_trace(&cc, k, w).expect("trace");
                    let rhs = character.value(&w.cycle_type()).expect("value");
                    (lhs, rhs, w.to_string())
                })
                .collect();
            for (lhs, rhs, w) in rows {
                checks += 1;
                if lhs != rhs {
                    bad.push(json!({"n": n, "k": k, "element": w, "hopf_trace": lhs, "character_value": rhs}));
                }
            }
        }
        report.push_counted(
            &format!("homology character identity n={n} ({label})"),
            checks,
            bad,
        );

        // Demicube module character identity.
        if n <= 6 {
            let mut bad = Vec::new();
            let mut checks = 0;
            for k in 3..=n {
                let dec = y_character_decomposition(n, k)?;
                let rows: Vec<(i64, i64, String)> = probes
                    .par_iter()
                    .map(|w| {
                        let geometric = y_trace(&cc, k as i64, w).expect("trace");
                        let t = w.cycle_type();
                        let algebraic: i64 = dec
                            .terms()
                            .map(|(l, m)| m * value_d(l, &t).expect("value"))
                            .sum();
                        (geometric, algebraic, w.to_string())
                    })
                    .collect();
                for (lhs, rhs, w) in rows {
                    checks += 1;
                    if lhs != rhs {
                        bad.push(json!({"n": n, "k": k, "element": w, "cell_trace": lhs, "decomposition_value": rhs}));
                    }
                }
            }
            report.push_counted(
                &format!("demicube module character identity n={n} ({label})"),
                checks,
                bad,
            );
        }

        // Induced-character oracle, exhaustive at n = 4 only.
        if n == 4 {
            let group = enumerate_group(n, GroupKind::D, n)?;
            let mut bad = Vec::new();
            let mut checks = 0;
            for k in 3..=n {
                let rows: Vec<(i64, i64, String)> = group
                    .par_iter()
                    .map(|w| {
                        let oracle = induced_y_character_value(n, k, w, &group).expect("oracle");
                        let trace = y_trace(&cc, k as i64, w).expect("trace");
                        (oracle, trace, w.to_string())
                    })
                    .collect();
                for (lhs, rhs, w) in rows {
                    checks += 1;
                    if lhs != rhs {
                        bad.push(json!({"n": n, "k": k, "element": w, "induced": lhs, "cell_trace": rhs}));
                    }
                }
            }
            report.push_counted("induced-character oracle n=4", checks, bad);
        }

        // Top chain group and top homology: every generator negates.
        let mut bad = Vec::new();
        let mut checks = 0;
        for g in generators_d(n)? {
            checks += 2;
            let top = cc.action_matrix(&g, n as i64)?;
            if top.entry(0, 0) != -1 {
                bad.push(json!({"n": n, "element": g.to_string(), "top_entry": top.entry(0, 0)}));
            }
            let h = hopf_homology_trace(&cc, n, &g)?;
            if h != -1 {
                bad.push(json!({"n": n, "element": g.to_string(), "top_homology_trace": h}));
            }
        }
        report.push_counted(&format!("top-degree negation n={n}"), checks, bad);

        // Identity column of the character table reproduces the Betti number.
        let mut bad = Vec::new();
        let mut checks = 0;
        let id = SignedPermutation::identity(n);
        for k in 3..=n {
            checks += 1;
            let lhs = hopf_homology_trace(&cc, k, &id)? as u128;
            let rhs = betti(n, k, BettiMethod::Closed)?;
            if lhs != rhs {
                bad.push(json!({"n": n, "k": k, "trace": lhs as u64, "betti": rhs as u64}));
            }
        }
        report.push_counted(&format!("identity column is the Betti table n={n}"), checks, bad);
    }
    Ok(report)
}

/// The branching identity between ranks n and n-1, as a multiset identity
/// of labels, plus a numeric confirmation through embedded class
/// representatives at n = 5.
pub fn branching_suite(n_hi: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("branching");
    let mut bad = Vec::new();
    let mut checks = 0;
    for n in 4..=n_hi {
        for k in 3..n {
            checks += 1;
            let (left, right, equal) = branch_chi_d(n, k)?;
            if !equal {
                bad.push(json!({
                    "n": n,
                    "k": k,
                    "restricted": left.to_json(),
                    "recurrence_side": right.to_json(),
                }));
            }
        }
    }
    report.push_counted("branching multiset identity (3 <= k < n)", checks, bad);

    // Numeric confirmation at n = 5: evaluate both sides at the cycle types
    // of embedded W(D_4) class representatives.
    let n = 5;
    let table = conjugacy_classes(4, GroupKind::D, 4)?;
    let mut bad = Vec::new();
    let mut checks = 0;
    for k in 3..n {
        let upstairs = chi_d(n, k)?;
        let two_k = chi_d(n - 1, k)?;
        let k_minus = chi_d(n - 1, k - 1)?;
        for class in &table.classes {
            checks += 1;
            let w = embed_at(&class.representative, n, 0)?;
            let lhs = upstairs.value(&w.cycle_type())?;
            let t = class.representative.cycle_type();
            let rhs = 2 * two_k.value(&t)? + k_minus.value(&t)?;
            if lhs != rhs {
                bad.push(json!({
                    "n": n,
                    "k": k,
                    "element": class.representative.to_string(),
                    "restricted_value": lhs,
                    "recurrence_value": rhs,
                }));
            }
        }
    }
    report.push_counted("branching numeric confirmation at n=5", checks, bad);
    Ok(report)
}

/// Restriction to the symmetric group: decomposition identities, termwise
/// induced-module dimensions against the closed Betti sum, the exact
/// n=4, k=3 output, and a two-route numeric check on sign-free elements.
pub fn restriction_suite(store: &mut ComplexStore, n_hi: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("restriction");
    let mut bad = Vec::new();
    let mut checks = 0;
    for n in 4..=n_hi {
        for k in 3..=n {
            checks += 1;
            let direct = restrict_chi_d_to_sn(n, k)?;
            let mut via_labels = crate::characters::VirtualCharacter::zero(n);
            for (label, mult) in chi_d(n, k)?.decomposition.terms() {
                via_labels.add(&crate::characters::restrict_d_to_sn(label)?.scaled(mult));
            }
            if direct.decomposition != via_labels {
                bad.push(json!({"n": n, "k": k, "reason": "termwise restriction disagrees"}));
            }
            let expected_terms: Vec<u128> = (k..=n)
                .map(|i| {
                    crate::partition::binomial(n, i)
                        * crate::partition::binomial(i - 1, k - 1)
                })
                .collect();
            let got_terms: Vec<u128> = direct.term_dims.iter().map(|&(_, d)| d).collect();
            if got_terms != expected_terms {
                bad.push(json!({"n": n, "k": k, "reason": "termwise dimensions disagree"}));
            }
            if direct.total_dim() != betti(n, k, BettiMethod::Closed)? {
                bad.push(json!({"n": n, "k": k, "reason": "total dimension is not B(n,k)"}));
            }
            if direct.decomposition.degree() != direct.total_dim() as i128 {
                bad.push(json!({"n": n, "k": k, "reason": "decomposition degree mismatch"}));
            }
        }
    }
    report.push_counted("restriction decomposition and dimensions", checks, bad);

    let r = restrict_chi_d_to_sn(4, 3)?;
    let mut expected = crate::characters::VirtualCharacter::zero(4);
    expected.add_term("2,1,1".parse::<Partition>().unwrap(), 2);
    expected.add_term("1,1,1,1".parse::<Partition>().unwrap(), 1);
    report.push_flag(
        "exact output at n=4, k=3",
        r.decomposition == expected,
        json!({"got": r.decomposition.to_json()}),
    );

    // Numeric two-route check on permutation (sign-free) elements.
    let mut bad = Vec::new();
    let mut checks = 0;
    for n in 4..=n_hi.min(5) {
        let cc = store.get(n)?;
        let group = enumerate_group(n, GroupKind::D, n)?;
        for k in 3..=n {
            let r = restrict_chi_d_to_sn(n, k)?;
            for w in group.iter().filter(|w| w.neg_mask() == 0) {
                checks += 1;
                let ct = crate::partition::CycleType(w.cycle_type().positive.clone());
                let lhs = hopf_homology_trace(&cc, k, w)?;
                let rhs: i64 = r
                    .decomposition
                    .terms()
                    .map(|(lam, m)| m * crate::partition::mn_character_sn(lam, &ct).unwrap())
                    .sum();
                if lhs != rhs {
                    bad.push(json!({"n": n, "k": k, "element": w.to_string(), "trace": lhs, "restricted_value": rhs}));
                }
            }
        }
    }
    report.push_counted("trace versus restriction on sign-free elements", checks, bad);
    Ok(report)
}

/// Character-theory self-tests: type-B orthogonality over the fully
/// enumerated group, degree consistency, the class-function property,
/// the parabolic inner-product oracle, and the structural facts about the
/// homology character labels.
pub fn characters_suite(mult_free_n_hi: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("characters");

    // First orthogonality of the type-B characters over the enumerated group.
    for n in 2..=4usize {
        let group = enumerate_group(n, GroupKind::B, n)?;
        let labels = bipartitions(n);
        // Character values per element factor through the cycle type.
        let mut by_type: BTreeMap<crate::characters::SignedCycleType, usize> = BTreeMap::new();
        for w in &group {
            *by_type.entry(w.cycle_type()).or_insert(0) += 1;
        }
        let types: Vec<_> = by_type.keys().cloned().collect();
        let value_rows: Vec<Vec<i64>> = labels
            .par_iter()
            .map(|b| types.iter().map(|t| mn_character_b(b, t).unwrap()).collect())
            .collect();
        let mut bad = Vec::new();
        let mut checks = 0;
        for (a, ra) in value_rows.iter().enumerate() {
            for (b, rb) in value_rows.iter().enumerate().skip(a) {
                checks += 1;
                let total: i128 = types
                    .iter()
                    .enumerate()
                    .map(|(ti, t)| by_type[t] as i128 * (ra[ti] as i128) * (rb[ti] as i128))
                    .sum();
                let expected = if a == b { group.len() as i128 } else { 0 };
                if total != expected {
                    bad.push(json!({
                        "n": n,
                        "labels": [labels[a].to_string(), labels[b].to_string()],
                        "inner_product_times_order": total as i64,
                    }));
                }
            }
        }
        report.push_counted(&format!("type-B first orthogonality n={n}"), checks, bad);
    }

    // Degree consistency at the identity class.
    let mut bad = Vec::new();
    let mut checks = 0;
    for n in 1..=6usize {
        let id = crate::characters::SignedCycleType::identity(n);
        for b in bipartitions(n) {
            checks += 1;
            let v = mn_character_b(&b, &id)?;
            if v != degree_b(&b) as i64 {
                bad.push(json!({"n": n, "label": b.to_string(), "value": v, "degree": degree_b(&b) as u64}));
            }
        }
    }
    report.push_counted("degree consistency at the identity (n <= 6)", checks, bad);

    // Class-function property: the signed cycle type is constant under
    // conjugation, so Murnaghan-Nakayama values are class functions.
    let mut bad = Vec::new();
    let mut checks = 0;
    for n in 2..=4usize {
        let group = enumerate_group(n, GroupKind::B, n)?;
        let gens = generators_b(n)?;
        for w in &group {
            let t = w.cycle_type();
            for g in &gens {
                checks += 1;
                let conj = g.compose(w).compose(&g.inverse());
                if conj.cycle_type() != t {
                    bad.push(json!({"n": n, "element": w.to_string(), "conjugator": g.to_string()}));
                }
            }
        }
    }
    report.push_counted("cycle type is a class invariant (n <= 4)", checks, bad);

    // Parabolic inner products against an exhaustive summation oracle at
    // n = 4, k = 3: average over the embedded D_3 x D_1 subgroup.
    let n = 4;
    let k = 3;
    let d3 = enumerate_group(3, GroupKind::D, 3)?;
    let right = DLabel::unsplit(Partition::row(1), Partition::empty())?;
    let mut bad = Vec::new();
    let mut checks = 0;
    for l in d_labels(n).iter().filter(|l| !l.is_split()) {
        for left in d_labels(k).iter().filter(|l| !l.is_split()) {
            checks += 1;
            let formula = parabolic_inner_product(l, k, left, &right)?;
            let mut total: i128 = 0;
            for d in &d3 {
                let embedded = embed_at(d, n, 0)?;
                total += value_d(l, &embedded.cycle_type())? as i128
                    * value_d(left, &d.cycle_type())? as i128;
            }
            let order = d3.len() as i128;
            if total % order != 0 || total / order != formula as i128 {
                bad.push(json!({
                    "label": l.to_string(),
                    "left": left.to_string(),
                    "formula": formula,
                    "oracle_sum": total as i64,
                }));
            }
        }
    }
    report.push_counted("parabolic inner products vs exhaustive oracle (n=4, k=3)", checks, bad);

    // Label census: class count equals label count for n <= 5, and the
    // squared degrees sum to the group order for n <= 7.
    let mut bad = Vec::new();
    let mut checks = 0;
    for n in 2..=5usize {
        checks += 1;
        let classes = conjugacy_classes(n, GroupKind::D, n)?.len();
        let labels = d_labels(n).len();
        if classes != labels {
            bad.push(json!({"n": n, "classes": classes, "labels": labels}));
        }
    }
    for n in 2..=7usize {
        checks += 1;
        let total: u128 = d_labels(n).iter().map(|l| crate::characters::degree_d(l).pow(2)).sum();
        if total != group_order(n, GroupKind::D) {
            bad.push(json!({"n": n, "degree_square_sum": total as u64}));
        }
    }
    report.push_counted("label counts and degree sums", checks, bad);

    // Structure of the homology character: multiplicity free with the
    // exterior-power constituent present, degrees matching the Betti table.
    let mut bad = Vec::new();
    let mut checks = 0;
    for n in 4..=mult_free_n_hi {
        for k in 3..=n {
            checks += 1;
            let c = chi_d(n, k)?;
            if !c.decomposition.is_multiplicity_free() {
                bad.push(json!({"n": n, "k": k, "reason": "not multiplicity free"}));
            }
            if !exterior_power_constituent_present(n, k)? {
                bad.push(json!({"n": n, "k": k, "reason": "exterior power constituent missing"}));
            }
            if !chi_d_degree_matches_betti(n, k)? {
                bad.push(json!({"n": n, "k": k, "reason": "degree does not match Betti number"}));
            }
        }
    }
    report.push_counted(
        &format!("homology character structure (n <= {mult_free_n_hi})"),
        checks,
        bad,
    );
    Ok(report)
}

/// Named suite selector used by the command-line driver.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Faces,
    Chain,
    Homology,
    Theorem44,
    Branching,
    Restriction,
    Characters,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "faces" => Suite::Faces,
            "chain" => Suite::Chain,
            "homology" => Suite::Homology,
            "theorem44" => Suite::Theorem44,
            "branching" => Suite::Branching,
            "restriction" => Suite::Restriction,
            "characters" => Suite::Characters,
            "all" => Suite::All,
            _ => return None,
        })
    }
}

/// Per-suite rank caps. Defaults follow the documented budgets: 8 where
/// only enumeration is involved, 6 for anything that builds matrices or
/// whole groups, 12 for pure label arithmetic.
#[derive(Clone, Copy, Debug)]
pub struct SweepLimits {
    pub faces: usize,
    pub heavy: usize,
    pub wide: usize,
    pub labels: usize,
}

impl Default for SweepLimits {
    fn default() -> Self {
        SweepLimits {
            faces: DEFAULT_ENUM_MAX_N,
            heavy: DEFAULT_HOMOLOGY_MAX_N,
            wide: DEFAULT_ENUM_MAX_N,
            labels: 12,
        }
    }
}

impl SweepLimits {
    /// Uniform cap (or raise) of every sweep to `n_max`.
    pub fn uniform(n_max: usize) -> Self {
        let n = n_max.max(4);
        SweepLimits {
            faces: n,
            heavy: n,
            wide: n,
            labels: n,
        }
    }
}

/// Runs the selected suites up to the given caps. The chain gates run
/// before any homology-dependent suite and a failure there aborts the
/// downstream suites.
pub fn run_suites(
    suite: Suite,
    limits: SweepLimits,
    store: &mut ComplexStore,
) -> Result<Vec<SuiteReport>> {
    let single = |r: SuiteReport| Ok(vec![r]);
    match suite {
        Suite::Faces => single(faces_suite(limits.faces)?),
        Suite::Chain => single(chain_suite(store, limits.heavy)?),
        Suite::Homology => single(homology_suite(store, limits.heavy)?),
        Suite::Theorem44 => single(theorem44_suite(store, limits.heavy)?),
        Suite::Branching => single(branching_suite(limits.wide)?),
        Suite::Restriction => single(restriction_suite(store, limits.wide)?),
        Suite::Characters => single(characters_suite(limits.labels)?),
        Suite::All => {
            let mut out = vec![faces_suite(limits.faces)?, chain_suite(store, limits.heavy)?];
            if !out[1].pass() {
                // The chain gates are load bearing: downstream homology and
                // trace computations are meaningless if they fail.
                return Ok(out);
            }
            out.push(homology_suite(store, limits.heavy)?);
            out.push(theorem44_suite(store, limits.heavy)?);
            out.push(branching_suite(limits.wide)?);
            out.push(restriction_suite(store, limits.wide)?);
            out.push(characters_suite(limits.labels)?);
            Ok(out)
        }
    }
}
