//! Characters of the demicube chain modules and of the homology of the
//! truncated subcomplexes, together with their closed-form decompositions.
//!
//! The geometric route evaluates traces cell by cell: an element's trace on
//! the degree-l demicube span is the sum of orientation signs over fixed
//! cells, and the trace on the concentrated homology group is the
//! alternating sum of those traces from degree k upward (a Hopf-trace
//! argument; the subcomplex homology is free and concentrated, so chain
//! traces descend to homology). The algebraic route decomposes the same
//! modules into unsplit two-partition labels built from hooks, evaluated
//! through the type-B Murnaghan-Nakayama rule. Verification drivers compare
//! the two routes exactly, element by element or class by class.

use serde_json::{json, Value};

use crate::characters::{
    value_d, CharLabel, DLabel, SignedCycleType, VirtualCharacter,
};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::homology::{betti, BettiMethod};
use crate::partition::{binomial, hook_partition, lr_coefficient, partitions_of, Partition};
use crate::signed::{group_order, SignedPermutation};

/// Trace of `w` on the demicube part of the degree-`l` chain group: the sum
/// of orientation signs over demicube cells fixed setwise by `w`.
pub fn y_trace(cc: &ChainComplex, l: i64, w: &SignedPermutation) -> Result<i64> {
    let n = cc.n() as i64;
    if !(3..=n).contains(&l) {
        return Err(Error::OutOfRange(format!("need 3 <= l <= n, got l={l}, n={n}")));
    }
    if !w.is_in_d() {
        return Err(Error::NotInD);
    }
    let x = cc.x_count(l);
    let mut trace = 0;
    for j in x..cc.rank(l) {
        let (i, sign) = cc.cell_image(l, j, w);
        if i == j {
            trace += sign;
        }
    }
    Ok(trace)
}

/// Full alternating chain trace of `w` over every degree including -1
/// (where the trace is +1). Vanishes for any cellular automorphism of the
/// full complex, since the half cube is contractible.
pub fn alternating_chain_trace(cc: &ChainComplex, w: &SignedPermutation) -> Result<i64> {
    if !w.is_in_d() {
        return Err(Error::NotInD);
    }
    let mut total = 0;
    for dim in -1..=cc.n() as i64 {
        let mut trace = 0;
        for j in 0..cc.rank(dim) {
            let (i, sign) = cc.cell_image(dim, j, w);
            if i == j {
                trace += sign;
            }
        }
        total += if dim % 2 == 0 { trace } else { -trace };
    }
    Ok(total)
}

/// Closed-form character of the degree-k demicube module: a sum of unsplit
/// hook-versus-row labels in widths k and k+1 (the second sum is empty when
/// k = n).
pub fn y_character_decomposition(n: usize, k: usize) -> Result<VirtualCharacter<DLabel>> {
    if !(3..=n).contains(&k) {
        return Err(Error::OutOfRange(format!("need 3 <= k <= n, got k={k}, n={n}")));
    }
    let mut out = VirtualCharacter::zero(n);
    for e in 0..=n - k {
        out.add_term(
            DLabel::unsplit(hook_partition(k, e)?, Partition::row(n - k - e))?,
            1,
        );
    }
    if k + 1 <= n {
        for e in 0..=n - k - 1 {
            out.add_term(
                DLabel::unsplit(hook_partition(k + 1, e)?, Partition::row(n - k - 1 - e))?,
                1,
            );
        }
    }
    Ok(out)
}

/// Trace of `w` on the (k-1)-st homology of the k-truncated subcomplex,
/// computed as the alternating sum of demicube chain traces from degree k
/// upward.
pub fn hopf_homology_trace(cc: &ChainComplex, k: usize, w: &SignedPermutation) -> Result<i64> {
    let n = cc.n();
    if !(3..=n).contains(&k) {
        return Err(Error::OutOfRange(format!("need 3 <= k <= n, got k={k}, n={n}")));
    }
    let mut total = 0;
    for l in k..=n {
        let t = y_trace(cc, l as i64, w)?;
        total += if (l - k) % 2 == 0 { t } else { -t };
    }
    Ok(total)
}

/// Character of the W(D_n) action on the concentrated homology group of the
/// k-truncated subcomplex, carried by its closed-form decomposition into
/// unsplit labels {hook(k, e), [n-k-e]}.
///
/// k = 2 is admitted formally: the same label sum is well defined and is
/// what the rank-(n-1) branching identity consumes, but it carries no
/// homological meaning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyCharacter {
    pub n: usize,
    pub k: usize,
    pub decomposition: VirtualCharacter<DLabel>,
}

impl HomologyCharacter {
    /// Character value at an even signed cycle type.
    pub fn value(&self, t: &SignedCycleType) -> Result<i64> {
        let mut total = 0;
        for (label, mult) in self.decomposition.terms() {
            total += mult * value_d(label, t)?;
        }
        Ok(total)
    }

    pub fn degree(&self) -> u128 {
        self.decomposition.degree() as u128
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .decomposition
            .terms()
            .map(|(l, m)| {
                json!({
                    "label": l.to_string(),
                    "multiplicity": m,
                    "degree": l.degree() as u64,
                })
            })
            .collect();
        json!({
            "n": self.n,
            "k": self.k,
            "degree": self.degree() as u64,
            "terms": terms,
        })
    }
}

pub fn chi_d(n: usize, k: usize) -> Result<HomologyCharacter> {
    if !(2..=n).contains(&k) {
        return Err(Error::OutOfRange(format!("need 2 <= k <= n, got k={k}, n={n}")));
    }
    let mut decomposition = VirtualCharacter::zero(n);
    for e in 0..=n - k {
        decomposition.add_term(
            DLabel::unsplit(hook_partition(k, e)?, Partition::row(n - k - e))?,
            1,
        );
    }
    Ok(HomologyCharacter {
        n,
        k,
        decomposition,
    })
}

/// Both sides of the rank-lowering branching identity: restricting the
/// homology character to the corank-one subgroup versus the weighted sum of
/// lower-rank homology characters with the same recurrence shape as the
/// Betti numbers.
pub fn branch_chi_d(
    n: usize,
    k: usize,
) -> Result<(VirtualCharacter<DLabel>, VirtualCharacter<DLabel>, bool)> {
    if !(3..=n).contains(&k) || k == n {
        return Err(Error::OutOfRange(format!("need 3 <= k < n, got k={k}, n={n}")));
    }
    let mut left = VirtualCharacter::zero(n - 1);
    for (label, mult) in chi_d(n, k)?.decomposition.terms() {
        left.add(&crate::characters::branch_d(label)?.scaled(mult));
    }
    let mut right = chi_d(n - 1, k)?.decomposition.scaled(2);
    right.add(&chi_d(n - 1, k - 1)?.decomposition);
    let equal = left == right;
    Ok((left, right, equal))
}

/// Restriction of the homology character to the parabolic symmetric group:
/// one induced-module summand per e, with dimensions reproducing the
/// closed-form Betti sum term by term.
#[derive(Clone, Debug)]
pub struct SnRestriction {
    pub n: usize,
    pub k: usize,
    pub decomposition: VirtualCharacter<Partition>,
    /// (e, C(n, k+e) * C(k+e-1, k-1)) for each summand.
    pub term_dims: Vec<(usize, u128)>,
}

impl SnRestriction {
    pub fn total_dim(&self) -> u128 {
        self.term_dims.iter().map(|&(_, d)| d).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "decomposition": self.decomposition.to_json(),
            "term_dims": self.term_dims.iter().map(|&(e, d)| json!([e, d as u64])).collect::<Vec<_>>(),
            "total_dim": self.total_dim() as u64,
        })
    }
}

pub fn restrict_chi_d_to_sn(n: usize, k: usize) -> Result<SnRestriction> {
    if !(3..=n).contains(&k) {
        return Err(Error::OutOfRange(format!("need 3 <= k <= n, got k={k}, n={n}")));
    }
    let mut decomposition = VirtualCharacter::zero(n);
    let mut term_dims = Vec::new();
    for e in 0..=n - k {
        let hook = hook_partition(k, e)?;
        let row = Partition::row(n - k - e);
        for lam in partitions_of(n) {
            let c = lr_coefficient(&hook, &row, &lam);
            decomposition.add_term(lam, c as i64);
        }
        term_dims.push((e, binomial(n, k + e) * binomial(k + e - 1, k - 1)));
    }
    Ok(SnRestriction {
        n,
        k,
        decomposition,
        term_dims,
    })
}

/// Presence of the exterior-power constituent {[1^k], [n-k]} with
/// multiplicity exactly one.
pub fn exterior_power_constituent_present(n: usize, k: usize) -> Result<bool> {
    if !(3..=n).contains(&k) {
        return Err(Error::OutOfRange(format!("need 3 <= k <= n, got k={k}, n={n}")));
    }
    let label = if Partition::column(k) == Partition::row(n - k) {
        // [1^k] = [n-k] would force k = 1; unreachable for k >= 3.
        return Ok(false);
    } else {
        DLabel::unsplit(Partition::column(k), Partition::row(n - k))?
    };
    Ok(chi_d(n, k)?.decomposition.multiplicity(&label) == 1)
}

/// Membership in the parabolic product of the rank-k type-D subgroup on the
/// first k coordinates and the plain symmetric group on the rest.
pub fn in_parabolic_dk_snk(w: &SignedPermutation, k: usize) -> bool {
    let stable = (0..k).all(|i| w.image(i) < k);
    let outside_flips = w.neg_mask() >> k;
    stable && outside_flips == 0
}

/// Sign-times-trivial character of the parabolic product, evaluated on one
/// of its members: the type-D sign of the first factor.
fn parabolic_sign_character(w: &SignedPermutation, k: usize) -> i64 {
    debug_assert!(in_parabolic_dk_snk(w, k));
    // Permutation sign on the first k coordinates.
    let mut seen = vec![false; k];
    let mut cycles = 0;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = w.image(cur);
        }
    }
    let perm_sign = if (k - cycles) % 2 == 0 { 1 } else { -1 };
    let flips = (w.neg_mask() & ((1 << k) - 1)).count_ones();
    if flips % 2 == 0 {
        perm_sign
    } else {
        -perm_sign
    }
}

/// Induced-character oracle for the demicube module: averages the
/// sign-times-trivial character of the stabilizing parabolic over the whole
/// group. Exhaustive, so only run at small rank.
pub fn induced_y_character_value(
    n: usize,
    k: usize,
    w: &SignedPermutation,
    group: &[SignedPermutation],
) -> Result<i64> {
    if !(3..=n).contains(&k) {
        return Err(Error::OutOfRange(format!("need 3 <= k <= n, got k={k}, n={n}")));
    }
    let subgroup_order = (1i128 << (k - 1))
        * crate::partition::factorial(k) as i128
        * crate::partition::factorial(n - k) as i128;
    let mut total: i128 = 0;
    for g in group {
        let h = g.inverse().compose(w).compose(g);
        if in_parabolic_dk_snk(&h, k) {
            total += parabolic_sign_character(&h, k) as i128;
        }
    }
    debug_assert_eq!(group.len() as u128, group_order(n, crate::signed::GroupKind::D));
    assert_eq!(total % subgroup_order, 0, "induced trace must be integral");
    Ok((total / subgroup_order) as i64)
}

/// Degree bookkeeping: the decomposition degree must reproduce the Betti
/// number through pure character arithmetic.
pub fn chi_d_degree_matches_betti(n: usize, k: usize) -> Result<bool> {
    Ok(chi_d(n, k)?.degree() == betti(n, k, BettiMethod::Closed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::d_labels;
    use crate::complex::DEFAULT_HOMOLOGY_MAX_N;
    use crate::signed::{conjugacy_classes, enumerate_group, generators_d, GroupKind};

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn dl(a: &str, b: &str) -> DLabel {
        DLabel::unsplit(part(a), part(b)).unwrap()
    }

    #[test]
    fn y_trace_identity_gives_rank() {
        let cc = ChainComplex::build(5, DEFAULT_HOMOLOGY_MAX_N).unwrap();
        let id = SignedPermutation::identity(5);
        for l in 3..=5i64 {
            assert_eq!(
                y_trace(&cc, l, &id).unwrap(),
                cc.y_count(l) as i64
            );
        }
        assert!(y_trace(&cc, 2, &id).is_err());
    }

    #[test]
    fn top_degree_trace_is_negation_for_generators() {
        for n in 4..=5 {
            let cc = ChainComplex::build(n, DEFAULT_HOMOLOGY_MAX_N).unwrap();
            for g in generators_d(n).unwrap() {
                assert_eq!(y_trace(&cc, n as i64, &g).unwrap(), -1);
                assert_eq!(hopf_homology_trace(&cc, n, &g).unwrap(), -1);
            }
        }
    }

    #[test]
    fn y_decomposition_examples() {
        let y3 = y_character_decomposition(4, 3).unwrap();
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(dl("1,1,1", "1"), 1);
        expected.add_term(dl("2,1,1", "0"), 1);
        expected.add_term(dl("1,1,1,1", "0"), 1);
        assert_eq!(y3, expected);
        assert_eq!(y3.degree(), 8);

        let y4 = y_character_decomposition(4, 4).unwrap();
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(dl("1,1,1,1", "0"), 1);
        assert_eq!(y4, expected);
    }

    #[test]
    fn y_decomposition_degree_matches_chain_rank() {
        for n in 4..=8 {
            for k in 3..=n {
                let dec = y_character_decomposition(n, k).unwrap();
                let rank = (1u128 << (n - k)) * binomial(n, k);
                assert_eq!(dec.degree() as u128, rank, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn y_trace_matches_decomposition_exhaustive_n4() {
        let n = 4;
        let cc = ChainComplex::build(n, DEFAULT_HOMOLOGY_MAX_N).unwrap();
        let group = enumerate_group(n, GroupKind::D, 6).unwrap();
        for k in 3..=n {
            let dec = y_character_decomposition(n, k).unwrap();
            for w in &group {
                let geometric = y_trace(&cc, k as i64, w).unwrap();
                let t = w.cycle_type();
                let algebraic: i64 = dec
                    .terms()
                    .map(|(l, m)| m * value_d(l, &t).unwrap())
                    .sum();
                assert_eq!(geometric, algebraic, "k={k} w={w}");
            }
        }
    }

    #[test]
    fn induced_oracle_matches_y_trace_n4() {
        let n = 4;
        let cc = ChainComplex::build(n, DEFAULT_HOMOLOGY_MAX_N).unwrap();
        let group = enumerate_group(n, GroupKind::D, 6).unwrap();
        for k in 3..=n {
            for w in &group {
                assert_eq!(
                    induced_y_character_value(n, k, w, &group).unwrap(),
                    y_trace(&cc, k as i64, w).unwrap(),
                    "k={k} w={w}"
                );
            }
        }
    }

    #[test]
    fn chi_d_examples() {
        let c = chi_d(4, 3).unwrap();
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(dl("1,1,1", "1"), 1);
        expected.add_term(dl("2,1,1", "0"), 1);
        assert_eq!(c.decomposition, expected);
        assert_eq!(c.degree(), 7);

        let c = chi_d(5, 3).unwrap();
        assert_eq!(c.degree(), 31);

        // k = n: the sign character.
        for n in 4..=8 {
            let c = chi_d(n, n).unwrap();
            assert_eq!(c.decomposition.num_terms(), 1);
            assert_eq!(
                c.decomposition.multiplicity(&DLabel::unsplit(Partition::column(n), Partition::empty()).unwrap()),
                1
            );
            assert_eq!(c.degree(), 1);
        }
    }

    #[test]
    fn chi_d_multiplicity_free_and_degree_bookkeeping() {
        for n in 4..=12 {
            for k in 3..=n {
                let c = chi_d(n, k).unwrap();
                assert!(c.decomposition.is_multiplicity_free(), "n={n} k={k}");
                assert!(chi_d_degree_matches_betti(n, k).unwrap(), "n={n} k={k}");
                assert!(exterior_power_constituent_present(n, k).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn hopf_trace_identity_is_betti() {
        for n in 4..=5 {
            let cc = ChainComplex::build(n, DEFAULT_HOMOLOGY_MAX_N).unwrap();
            let id = SignedPermutation::identity(n);
            for k in 3..=n {
                assert_eq!(
                    hopf_homology_trace(&cc, k, &id).unwrap() as u128,
                    betti(n, k, BettiMethod::Alternating).unwrap()
                );
            }
        }
    }

    #[test]
    fn homology_character_identity_exhaustive_n4() {
        let n = 4;
        let cc = ChainComplex::build(n, DEFAULT_HOMOLOGY_MAX_N).unwrap();
        let group = enumerate_group(n, GroupKind::D, 6).unwrap();
        for k in 3..=n {
            let character = chi_d(n, k).unwrap();
            for w in &group {
                let lhs = hopf_homology_trace(&cc, k, w).unwrap();
                let rhs = character.value(&w.cycle_type()).unwrap();
                assert_eq!(lhs, rhs, "k={k}, w={w}");
            }
        }
    }

    #[test]
    fn alternating_trace_vanishes_for_generators() {
        for n in 4..=5 {
            let cc = ChainComplex::build(n, DEFAULT_HOMOLOGY_MAX_N).unwrap();
            for g in generators_d(n).unwrap() {
                assert_eq!(alternating_chain_trace(&cc, &g).unwrap(), 0);
            }
            let id = SignedPermutation::identity(n);
            assert_eq!(alternating_chain_trace(&cc, &id).unwrap(), 0);
        }
    }

    #[test]
    fn branching_identity_example_n5_k3() {
        let (left, right, equal) = branch_chi_d(5, 3).unwrap();
        assert!(equal);
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(dl("2", "1,1"), 1);
        expected.add_term(dl("1,1,1", "1"), 2);
        expected.add_term(dl("2,1", "1"), 1);
        expected.add_term(dl("2,1,1", "0"), 2);
        expected.add_term(dl("3,1", "0"), 1);
        assert_eq!(left, expected);
        assert_eq!(right, expected);
        // Degree check against the Betti recurrence.
        assert_eq!(
            left.degree() as u128,
            2 * betti(4, 3, BettiMethod::Closed).unwrap()
                + betti(4, 2, BettiMethod::Closed).unwrap()
        );
    }

    #[test]
    fn branching_identity_sweep() {
        for n in 4..=8 {
            for k in 3..n {
                let (_, _, equal) = branch_chi_d(n, k).unwrap();
                assert!(equal, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn restriction_example_n4_k3() {
        let r = restrict_chi_d_to_sn(4, 3).unwrap();
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(part("2,1,1"), 2);
        expected.add_term(part("1,1,1,1"), 1);
        assert_eq!(r.decomposition, expected);
        assert_eq!(r.total_dim(), 7);
        assert_eq!(r.term_dims, vec![(0, 4), (1, 3)]);
    }

    #[test]
    fn restriction_termwise_dims_n5_k3() {
        let r = restrict_chi_d_to_sn(5, 3).unwrap();
        assert_eq!(r.term_dims, vec![(0, 10), (1, 15), (2, 6)]);
        assert_eq!(r.total_dim(), 31);
    }

    #[test]
    fn restriction_agrees_with_termwise_label_restriction() {
        for n in 4..=8 {
            for k in 3..=n {
                let direct = restrict_chi_d_to_sn(n, k).unwrap();
                let mut via_labels = VirtualCharacter::zero(n);
                for (label, mult) in chi_d(n, k).unwrap().decomposition.terms() {
                    via_labels.add(&crate::characters::restrict_d_to_sn(label).unwrap().scaled(mult));
                }
                assert_eq!(direct.decomposition, via_labels, "n={n} k={k}");
                assert_eq!(
                    direct.total_dim(),
                    betti(n, k, BettiMethod::Closed).unwrap(),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn restriction_matches_traces_on_permutation_elements() {
        // Two independent evaluation routes on sign-free elements: the cell
        // trace versus the type-A Murnaghan-Nakayama value of the
        // restriction.
        let n = 4;
        let cc = ChainComplex::build(n, DEFAULT_HOMOLOGY_MAX_N).unwrap();
        let group = enumerate_group(n, GroupKind::D, 6).unwrap();
        for k in 3..=n {
            let r = restrict_chi_d_to_sn(n, k).unwrap();
            for w in group.iter().filter(|w| w.neg_mask() == 0) {
                let t = w.cycle_type();
                let ct = crate::partition::CycleType(t.positive.clone());
                let lhs = hopf_homology_trace(&cc, k, w).unwrap();
                let rhs: i64 = r
                    .decomposition
                    .terms()
                    .map(|(lam, m)| m * crate::partition::mn_character_sn(lam, &ct).unwrap())
                    .sum();
                assert_eq!(lhs, rhs, "k={k} w={w}");
            }
        }
    }

    #[test]
    fn values_are_class_functions_n5() {
        // y_trace is constant on conjugacy classes: check a full class of
        // W(D_5) against its representative.
        let n = 5;
        let cc = ChainComplex::build(n, DEFAULT_HOMOLOGY_MAX_N).unwrap();
        let table = conjugacy_classes(n, GroupKind::D, 6).unwrap();
        let gens = generators_d(n).unwrap();
        for class in &table.classes {
            let base = y_trace(&cc, 3, &class.representative).unwrap();
            let mut probe = class.representative.clone();
            for g in &gens {
                probe = g.compose(&probe).compose(&g.inverse());
                assert_eq!(y_trace(&cc, 3, &probe).unwrap(), base);
            }
        }
    }

    #[test]
    fn label_counts_small() {
        assert_eq!(d_labels(4).len(), 13);
        assert_eq!(chi_d(4, 3).unwrap().decomposition.num_terms(), 2);
        assert_eq!(chi_d(5, 3).unwrap().decomposition.num_terms(), 3);
    }
}
