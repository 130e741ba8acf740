//! Irreducible character labels and exact character evaluation for the
//! hyperoctahedral group W(B_n) and its index-two subgroup W(D_n).
//!
//! Type-B irreducibles are labeled by ordered bipartitions (mu, nu) with
//! |mu| + |nu| = n. Restricted to W(D_n), the labels (mu, nu) and (nu, mu)
//! with mu != nu collapse to one unsplit label {mu, nu}, while (mu, mu)
//! splits into a plus and a minus character of equal degree. Split-label
//! character *values* are out of scope: the labels carry degrees only and
//! any value query on them is a typed error.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::partition::{
    binomial, dim_sn, lr_coefficient, partitions_of, BorderStrip, Partition,
};

/// Ordered pair of partitions labeling a W(B_n) irreducible character.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Bipartition {
    pub first: Partition,
    pub second: Partition,
}

impl Bipartition {
    pub fn new(first: Partition, second: Partition) -> Self {
        Bipartition { first, second }
    }

    pub fn n(&self) -> usize {
        self.first.size() + self.second.size()
    }

    pub fn swapped(&self) -> Bipartition {
        Bipartition::new(self.second.clone(), self.first.clone())
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.first, self.second)
    }
}

/// Degree of the W(B_n) irreducible labeled by `b`.
pub fn degree_b(b: &Bipartition) -> u128 {
    binomial(b.n(), b.first.size()) * dim_sn(&b.first) * dim_sn(&b.second)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SplitSign {
    Unsplit,
    Plus,
    Minus,
}

/// Label of a W(D_n) irreducible character: an unordered pair of partitions,
/// plus a split sign exactly when the two components coincide.
///
/// The pair is stored canonically with the lexicographically larger
/// component first, so `{2,1,1|0}` keeps the nontrivial component in front.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DLabel {
    first: Partition,
    second: Partition,
    split: SplitSign,
}

impl DLabel {
    /// Unsplit label for two distinct partitions.
    pub fn unsplit(a: Partition, b: Partition) -> Result<DLabel> {
        if a == b {
            return Err(Error::Invalid(format!(
                "equal components {{{a}|{b}}} require a split sign"
            )));
        }
        let (first, second) = if a > b { (a, b) } else { (b, a) };
        Ok(DLabel {
            first,
            second,
            split: SplitSign::Unsplit,
        })
    }

    /// Split label {mu, mu} with the given sign.
    pub fn split(mu: Partition, sign: SplitSign) -> Result<DLabel> {
        if sign == SplitSign::Unsplit {
            return Err(Error::Invalid("split label needs a plus or minus sign".into()));
        }
        Ok(DLabel {
            first: mu.clone(),
            second: mu,
            split: sign,
        })
    }

    pub fn n(&self) -> usize {
        self.first.size() + self.second.size()
    }

    pub fn is_split(&self) -> bool {
        self.split != SplitSign::Unsplit
    }

    pub fn split_sign(&self) -> SplitSign {
        self.split
    }

    pub fn components(&self) -> (&Partition, &Partition) {
        (&self.first, &self.second)
    }
}

impl fmt::Display for DLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}|{}}}", self.first, self.second)?;
        match self.split {
            SplitSign::Unsplit => Ok(()),
            SplitSign::Plus => write!(f, "+"),
            SplitSign::Minus => write!(f, "-"),
        }
    }
}

/// Degree of the W(D_n) irreducible labeled by `l`.
pub fn degree_d(l: &DLabel) -> u128 {
    let base = binomial(l.n(), l.first.size()) * dim_sn(&l.first) * dim_sn(&l.second);
    if l.is_split() {
        base / 2
    } else {
        base
    }
}

/// All W(D_n) irreducible labels, sorted.
pub fn d_labels(n: usize) -> Vec<DLabel> {
    let mut out = std::collections::BTreeSet::new();
    for s in 0..=n {
        for mu in partitions_of(s) {
            for nu in partitions_of(n - s) {
                if mu == nu {
                    out.insert(DLabel::split(mu.clone(), SplitSign::Plus).unwrap());
                    out.insert(DLabel::split(mu.clone(), SplitSign::Minus).unwrap());
                } else {
                    out.insert(DLabel::unsplit(mu.clone(), nu).unwrap());
                }
            }
        }
    }
    out.into_iter().collect()
}

/// All W(B_n) irreducible labels, sorted.
pub fn bipartitions(n: usize) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for s in 0..=n {
        for mu in partitions_of(s) {
            for nu in partitions_of(n - s) {
                out.push(Bipartition::new(mu.clone(), nu));
            }
        }
    }
    out.sort();
    out
}

/// Conjugacy class datum of a signed permutation: positive cycle lengths
/// and negative cycle lengths. An element lies in W(D_n) exactly when the
/// number of negative cycles is even.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SignedCycleType {
    pub positive: Partition,
    pub negative: Partition,
}

impl SignedCycleType {
    pub fn new(positive: Partition, negative: Partition) -> Self {
        SignedCycleType { positive, negative }
    }

    pub fn identity(n: usize) -> Self {
        SignedCycleType::new(Partition::column(n), Partition::empty())
    }

    pub fn n(&self) -> usize {
        self.positive.size() + self.negative.size()
    }

    pub fn is_even(&self) -> bool {
        self.negative.len() % 2 == 0
    }
}

impl fmt::Display for SignedCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.positive, self.negative)
    }
}

fn strip_sign(s: &BorderStrip) -> i64 {
    if s.height % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Murnaghan-Nakayama evaluation of the W(B_n) irreducible chi^(mu,nu) at
/// the class (alpha, beta) of signed cycle type `t`.
///
/// A positive cycle of length l removes an l-strip from either component
/// with sign (-1)^height; a negative cycle removes an l-strip with sign
/// (-1)^height from the first component and -(-1)^height from the second.
pub fn mn_character_b(b: &Bipartition, t: &SignedCycleType) -> Result<i64> {
    if b.n() != t.n() {
        return Err(Error::SizeMismatch(format!(
            "label {b} has size {}, class {t} has size {}",
            b.n(),
            t.n()
        )));
    }
    let mut cycles: Vec<(usize, bool)> = Vec::new();
    for &p in t.positive.parts() {
        cycles.push((p, false));
    }
    for &p in t.negative.parts() {
        cycles.push((p, true));
    }
    // Largest-first within each component; the value is order independent.
    Ok(mn_b_rec(&b.first, &b.second, &cycles))
}

pub(crate) fn mn_b_rec(mu: &Partition, nu: &Partition, cycles: &[(usize, bool)]) -> i64 {
    if cycles.is_empty() {
        return 1;
    }
    let (len, negative) = cycles[0];
    let mut total = 0;
    for (strip, rest) in mu.border_strips(len) {
        total += strip_sign(&strip) * mn_b_rec(&rest, nu, &cycles[1..]);
    }
    let comp = if negative { -1 } else { 1 };
    for (strip, rest) in nu.border_strips(len) {
        total += comp * strip_sign(&strip) * mn_b_rec(mu, &rest, &cycles[1..]);
    }
    total
}

/// Value of an unsplit W(D_n) irreducible at an even class: the restriction
/// of the corresponding type-B irreducible.
pub fn value_d(l: &DLabel, t: &SignedCycleType) -> Result<i64> {
    if l.is_split() {
        return Err(Error::SplitLabelUnsupported(format!(
            "no values are computed for split label {l}"
        )));
    }
    if !t.is_even() {
        return Err(Error::NotInD);
    }
    mn_character_b(
        &Bipartition::new(l.first.clone(), l.second.clone()),
        t,
    )
}

/// Formal integer combination of irreducible labels.
pub trait CharLabel: Clone + Ord + fmt::Display {
    fn n(&self) -> usize;
    fn degree(&self) -> u128;
}

impl CharLabel for Partition {
    fn n(&self) -> usize {
        self.size()
    }
    fn degree(&self) -> u128 {
        dim_sn(self)
    }
}

impl CharLabel for Bipartition {
    fn n(&self) -> usize {
        self.n()
    }
    fn degree(&self) -> u128 {
        degree_b(self)
    }
}

impl CharLabel for DLabel {
    fn n(&self) -> usize {
        self.n()
    }
    fn degree(&self) -> u128 {
        degree_d(self)
    }
}

/// Virtual character: a multiset (with integer multiplicities) of
/// irreducible labels, all for the same group rank n. Decomposition
/// identities are tested as equality of these multisets, never through
/// floating arithmetic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VirtualCharacter<L: CharLabel> {
    n: usize,
    terms: BTreeMap<L, i64>,
}

impl<L: CharLabel> VirtualCharacter<L> {
    pub fn zero(n: usize) -> Self {
        VirtualCharacter {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, label: L, mult: i64) {
        assert_eq!(label.n(), self.n, "label {label} has wrong rank");
        if mult == 0 {
            return;
        }
        let e = self.terms.entry(label).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.terms.retain(|_, &mut m| m != 0);
        }
    }

    pub fn add(&mut self, other: &Self) {
        assert_eq!(self.n, other.n);
        for (l, &m) in &other.terms {
            self.add_term(l.clone(), m);
        }
    }

    pub fn scaled(&self, c: i64) -> Self {
        let mut out = Self::zero(self.n);
        for (l, &m) in &self.terms {
            out.add_term(l.clone(), c * m);
        }
        out
    }

    pub fn multiplicity(&self, l: &L) -> i64 {
        self.terms.get(l).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&L, i64)> {
        self.terms.iter().map(|(l, &m)| (l, m))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.terms.values().all(|&m| m == 1)
    }

    /// Virtual degree: sum of multiplicity times irreducible degree.
    pub fn degree(&self) -> i128 {
        self.terms
            .iter()
            .map(|(l, &m)| m as i128 * l.degree() as i128)
            .sum()
    }

    /// JSON object mapping label strings to multiplicities, keys sorted.
    pub fn to_json(&self) -> Value {
        let map: BTreeMap<String, i64> = self
            .terms
            .iter()
            .map(|(l, &m)| (l.to_string(), m))
            .collect();
        serde_json::to_value(map).expect("serializable map")
    }
}

impl<L: CharLabel> fmt::Display for VirtualCharacter<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self
            .terms
            .iter()
            .map(|(l, &m)| {
                if m == 1 {
                    l.to_string()
                } else {
                    format!("{m}*{l}")
                }
            })
            .collect();
        write!(f, "{}", strs.join(" + "))
    }
}

/// Restriction of an unsplit W(D_n) irreducible to the parabolic symmetric
/// group: sum over lambda of c^lambda_{mu nu} chi^lambda.
pub fn restrict_d_to_sn(l: &DLabel) -> Result<VirtualCharacter<Partition>> {
    if l.is_split() {
        return Err(Error::SplitLabelUnsupported(format!(
            "restriction of split label {l} is out of scope"
        )));
    }
    let n = l.n();
    let (mu, nu) = l.components();
    let mut out = VirtualCharacter::zero(n);
    for lam in partitions_of(n) {
        let c = lr_coefficient(mu, nu, &lam);
        out.add_term(lam, c as i64);
    }
    Ok(out)
}

/// Induction of the trivial character from the parabolic symmetric group up
/// to W(D_n): a multiplicity-free sum of two-row labels, with a single plus
/// split label when n is even.
pub fn induce_trivial_sn_to_d(n: usize) -> Result<VirtualCharacter<DLabel>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need n >= 2, got {n}")));
    }
    let m = n / 2;
    let mut out = VirtualCharacter::zero(n);
    for l in 0..m {
        out.add_term(
            DLabel::unsplit(Partition::row(l), Partition::row(n - l))?,
            1,
        );
    }
    if n % 2 == 1 {
        out.add_term(
            DLabel::unsplit(Partition::row(m), Partition::row(n - m))?,
            1,
        );
    } else {
        out.add_term(DLabel::split(Partition::row(m), SplitSign::Plus)?, 1);
    }
    Ok(out)
}

/// Branching of an unsplit W(D_n) irreducible to W(D_{n-1}): one term for
/// each removable box of each component. Errors if any resulting pair has
/// equal components, since the unsplit branching rule does not apply there.
pub fn branch_d(l: &DLabel) -> Result<VirtualCharacter<DLabel>> {
    if l.is_split() {
        return Err(Error::SplitLabelUnsupported(format!(
            "branching of split label {l} is out of scope"
        )));
    }
    let n = l.n();
    let (lam, mu) = l.components();
    let mut out = VirtualCharacter::zero(n - 1);
    let mut push = |a: Partition, b: Partition| -> Result<()> {
        if a == b {
            return Err(Error::SplitLabelWouldArise(format!(
                "branch of {l} hits the equal pair {{{a}|{b}}}"
            )));
        }
        out.add_term(DLabel::unsplit(a, b)?, 1);
        Ok(())
    };
    for d in lam.removable_boxes() {
        push(lam.remove_box(d), mu.clone())?;
    }
    for d in mu.removable_boxes() {
        push(lam.clone(), mu.remove_box(d))?;
    }
    Ok(out)
}

/// Inner product of a restricted W(D_n) irreducible with an outer product of
/// W(D_k) x W(D_{n-k}) irreducibles, expressed through Littlewood-Richardson
/// coefficients. The excluded case (alpha, psi) = (beta, theta) has no
/// closed form here and is reported as an error.
pub fn parabolic_inner_product(
    l: &DLabel,
    k: usize,
    left: &DLabel,
    right: &DLabel,
) -> Result<u64> {
    let n = l.n();
    if k < 3 || k + 1 > n {
        return Err(Error::OutOfRange(format!("need 3 <= k <= n-1, got k={k}, n={n}")));
    }
    if left.n() != k || right.n() != n - k {
        return Err(Error::SizeMismatch(format!(
            "factors {left} x {right} do not match D_{k} x D_{}",
            n - k
        )));
    }
    let (alpha, beta) = left.components();
    let (psi, theta) = right.components();
    if alpha == beta && psi == theta {
        return Err(Error::HypothesisViolated(format!(
            "ordered pairs ({alpha},{psi}) and ({beta},{theta}) coincide"
        )));
    }
    let (mu, nu) = l.components();
    let c = |a: &Partition, b: &Partition, t: &Partition| lr_coefficient(a, b, t);
    if l.is_split() {
        Ok(c(alpha, psi, mu) * c(beta, theta, mu) + c(alpha, theta, mu) * c(beta, psi, mu))
    } else {
        Ok(c(alpha, psi, mu) * c(beta, theta, nu)
            + c(alpha, theta, mu) * c(beta, psi, nu)
            + c(beta, psi, mu) * c(alpha, theta, nu)
            + c(beta, theta, mu) * c(alpha, psi, nu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::factorial;
    use proptest::prelude::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn dl(a: &str, b: &str) -> DLabel {
        DLabel::unsplit(part(a), part(b)).unwrap()
    }

    #[test]
    fn degree_b_examples() {
        for n in 1..=6 {
            assert_eq!(degree_b(&Bipartition::new(Partition::row(n), Partition::empty())), 1);
            assert_eq!(degree_b(&Bipartition::new(Partition::empty(), Partition::column(n))), 1);
        }
        assert_eq!(degree_b(&Bipartition::new(part("1,1,1"), part("1"))), 4);
    }

    #[test]
    fn degree_d_examples() {
        assert_eq!(degree_d(&dl("1,1,1,1", "0")), 1);
        assert_eq!(degree_d(&dl("2,1,1", "0")), 3);
        let split = DLabel::split(part("1"), SplitSign::Plus).unwrap();
        assert_eq!(degree_d(&split), 1);
        let split = DLabel::split(part("2,1"), SplitSign::Minus).unwrap();
        assert_eq!(degree_d(&split), binomial(6, 3) * 4 / 2);
    }

    #[test]
    fn canonical_pair_order() {
        let l = DLabel::unsplit(part("0"), part("2,1,1")).unwrap();
        assert_eq!(l.to_string(), "{2,1,1|0}");
        let l2 = DLabel::unsplit(part("2,1,1"), part("0")).unwrap();
        assert_eq!(l, l2);
        assert!(DLabel::unsplit(part("2"), part("2")).is_err());
        assert_eq!(
            DLabel::split(part("1,1"), SplitSign::Plus).unwrap().to_string(),
            "{1,1|1,1}+"
        );
    }

    #[test]
    fn label_counts_and_degree_sum() {
        assert_eq!(d_labels(4).len(), 13);
        for n in 2..=7 {
            let order: u128 = (1u128 << (n - 1)) * factorial(n);
            let total: u128 = d_labels(n).iter().map(|l| degree_d(l).pow(2)).sum();
            assert_eq!(total, order, "degree sum at n={n}");
            let total_b: u128 = bipartitions(n).iter().map(|b| degree_b(b).pow(2)).sum();
            assert_eq!(total_b, (1u128 << n) * factorial(n));
        }
    }

    #[test]
    fn mn_b_trivial_and_degree() {
        for n in 1..=6 {
            let trivial = Bipartition::new(Partition::row(n), Partition::empty());
            // All classes of B_n: pairs of partitions.
            for s in 0..=n {
                for alpha in partitions_of(s) {
                    for beta in partitions_of(n - s) {
                        let t = SignedCycleType::new(alpha.clone(), beta);
                        assert_eq!(mn_character_b(&trivial, &t).unwrap(), 1);
                    }
                }
            }
            let id = SignedCycleType::identity(n);
            for b in bipartitions(n) {
                assert_eq!(
                    mn_character_b(&b, &id).unwrap(),
                    degree_b(&b) as i64,
                    "degree of {b}"
                );
            }
        }
    }

    #[test]
    fn mn_b_sign_character() {
        // chi^([0],[1^n]) at class (alpha, beta) is sgn of the underlying
        // permutation times (-1)^(number of negative coordinates); per
        // cycle that is (-1)^(len-1) for positive and (-1)^len for negative.
        for n in 1..=5 {
            let sign_label = Bipartition::new(Partition::empty(), Partition::column(n));
            for s in 0..=n {
                for alpha in partitions_of(s) {
                    for beta in partitions_of(n - s) {
                        let expected: i64 = alpha
                            .parts()
                            .iter()
                            .map(|&p| if (p - 1) % 2 == 0 { 1 } else { -1 })
                            .chain(beta.parts().iter().map(|&p| if p % 2 == 0 { 1 } else { -1 }))
                            .product();
                        let t = SignedCycleType::new(alpha.clone(), beta);
                        assert_eq!(mn_character_b(&sign_label, &t).unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn mn_b_restriction_to_positive_classes() {
        // On classes with no negative cycles the type-B value agrees with
        // the LR-expanded induction product evaluated in type A.
        for n in 1..=6 {
            for b in bipartitions(n) {
                for alpha in partitions_of(n) {
                    let t = SignedCycleType::new(alpha.clone(), Partition::empty());
                    let lhs = mn_character_b(&b, &t).unwrap();
                    let ct = crate::partition::CycleType(alpha.clone());
                    let rhs: i64 = partitions_of(n)
                        .iter()
                        .map(|lam| {
                            lr_coefficient(&b.first, &b.second, lam) as i64
                                * crate::partition::mn_character_sn(lam, &ct).unwrap()
                        })
                        .sum();
                    assert_eq!(lhs, rhs, "label {b} at {alpha}");
                }
            }
        }
    }

    #[test]
    fn value_d_examples_and_errors() {
        let n = 4;
        let id = SignedCycleType::identity(n);
        assert_eq!(value_d(&dl("4", "0"), &id).unwrap(), 1);
        assert_eq!(value_d(&dl("1,1,1", "1"), &id).unwrap(), 4);
        // A Coxeter generator of W(D_n) has type ([2,1^(n-2)], [0]).
        let gen = SignedCycleType::new(part("2,1,1"), Partition::empty());
        assert_eq!(value_d(&dl("1,1,1,1", "0"), &gen).unwrap(), -1);
        let split = DLabel::split(part("2"), SplitSign::Plus).unwrap();
        assert!(matches!(
            value_d(&split, &id),
            Err(Error::SplitLabelUnsupported(_))
        ));
        let odd = SignedCycleType::new(part("2,1"), part("1"));
        assert!(matches!(value_d(&dl("4", "0"), &odd), Err(Error::NotInD)));
    }

    #[test]
    fn swap_symmetry_on_even_classes() {
        // chi^(mu,nu) and chi^(nu,mu) agree on classes with an even number
        // of negative cycles; they differ by the parity character otherwise.
        for n in 2..=5 {
            for b in bipartitions(n) {
                for s in 0..=n {
                    for alpha in partitions_of(s) {
                        for beta in partitions_of(n - s) {
                            let t = SignedCycleType::new(alpha.clone(), beta.clone());
                            let v1 = mn_character_b(&b, &t).unwrap();
                            let v2 = mn_character_b(&b.swapped(), &t).unwrap();
                            if t.is_even() {
                                assert_eq!(v1, v2);
                            } else {
                                assert_eq!(v1, -v2);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn restrict_examples() {
        let r = restrict_d_to_sn(&dl("1,1,1", "1")).unwrap();
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(part("2,1,1"), 1);
        expected.add_term(part("1,1,1,1"), 1);
        assert_eq!(r, expected);
        assert_eq!(r.degree(), degree_d(&dl("1,1,1", "1")) as i128);

        let r = restrict_d_to_sn(&dl("2,1,1", "0")).unwrap();
        assert_eq!(r.num_terms(), 1);
        assert_eq!(r.multiplicity(&part("2,1,1")), 1);

        let r = restrict_d_to_sn(&dl("5", "0")).unwrap();
        assert_eq!(r.multiplicity(&part("5")), 1);
        assert_eq!(r.num_terms(), 1);
    }

    #[test]
    fn induce_examples() {
        let v3 = induce_trivial_sn_to_d(3).unwrap();
        let mut expected = VirtualCharacter::zero(3);
        expected.add_term(dl("3", "0"), 1);
        expected.add_term(dl("2", "1"), 1);
        assert_eq!(v3, expected);

        let v4 = induce_trivial_sn_to_d(4).unwrap();
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(DLabel::split(part("2"), SplitSign::Plus).unwrap(), 1);
        expected.add_term(dl("4", "0"), 1);
        expected.add_term(dl("3", "1"), 1);
        assert_eq!(v4, expected);

        for n in 2..=8 {
            let v = induce_trivial_sn_to_d(n).unwrap();
            assert_eq!(v.degree(), 1i128 << (n - 1), "index at n={n}");
        }
    }

    #[test]
    fn branch_examples() {
        let b = branch_d(&dl("2,1,1", "1")).unwrap();
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(dl("1,1,1", "1"), 1);
        expected.add_term(dl("2,1", "1"), 1);
        expected.add_term(dl("2,1,1", "0"), 1);
        assert_eq!(b, expected);

        let b = branch_d(&dl("5", "0")).unwrap();
        assert_eq!(b.multiplicity(&dl("4", "0")), 1);
        assert_eq!(b.num_terms(), 1);

        let b = branch_d(&dl("3,1,1", "0")).unwrap();
        let mut expected = VirtualCharacter::zero(4);
        expected.add_term(dl("2,1,1", "0"), 1);
        expected.add_term(dl("3,1", "0"), 1);
        assert_eq!(b, expected);

        // Removing a box from [2,1] can hit [2] = the other component.
        assert!(matches!(
            branch_d(&dl("2,1", "2")),
            Err(Error::SplitLabelWouldArise(_))
        ));
    }

    #[test]
    fn branch_preserves_degree() {
        for n in 3..=8 {
            for l in d_labels(n) {
                if l.is_split() {
                    continue;
                }
                match branch_d(&l) {
                    Ok(b) => assert_eq!(b.degree(), degree_d(&l) as i128, "label {l}"),
                    Err(Error::SplitLabelWouldArise(_)) => {}
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
    }

    #[test]
    fn parabolic_inner_product_example() {
        // <chi^{{1^3,1}} restricted, chi^{{1^3|0}} x chi^{{1|0}}> = 1.
        let l = dl("1,1,1", "1");
        let left = dl("1,1,1", "0");
        let right = DLabel::unsplit(part("1"), part("0")).unwrap();
        assert_eq!(parabolic_inner_product(&l, 3, &left, &right).unwrap(), 1);
    }

    #[test]
    fn parabolic_inner_product_errors() {
        let l = dl("1,1,1", "1");
        let left = dl("1,1,1", "0");
        let right = DLabel::unsplit(part("1"), part("0")).unwrap();
        assert!(matches!(
            parabolic_inner_product(&l, 2, &left, &right),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            parabolic_inner_product(&l, 3, &right, &right),
            Err(Error::SizeMismatch(_))
        ));
        // Both factors split: the excluded equal-pair case.
        let l6 = dl("2,2,1", "1");
        let split_left = DLabel::split(part("1,1"), SplitSign::Plus).unwrap();
        let split_right = DLabel::split(part("1"), SplitSign::Minus).unwrap();
        assert!(matches!(
            parabolic_inner_product(&l6, 4, &split_left, &split_right),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn virtual_character_json_sorted() {
        let mut v = VirtualCharacter::zero(4);
        v.add_term(dl("2,1,1", "0"), 2);
        v.add_term(dl("1,1,1", "1"), 1);
        let json = v.to_json();
        let s = serde_json::to_string(&json).unwrap();
        assert_eq!(s, r#"{"{1,1,1|1}":1,"{2,1,1|0}":2}"#);
    }

    proptest! {
        #[test]
        fn mn_b_order_independent(seed in 0usize..150) {
            let n = 2 + seed % 4;
            let bs = bipartitions(n);
            let b = &bs[seed % bs.len()];
            let mut classes = Vec::new();
            for s in 0..=n {
                for alpha in partitions_of(s) {
                    for beta in partitions_of(n - s) {
                        classes.push(SignedCycleType::new(alpha.clone(), beta));
                    }
                }
            }
            let t = &classes[(seed / 3) % classes.len()];
            let mut cycles: Vec<(usize, bool)> = t.positive.parts().iter().map(|&p| (p, false))
                .chain(t.negative.parts().iter().map(|&p| (p, true))).collect();
            let forward = mn_b_rec(&b.first, &b.second, &cycles);
            cycles.reverse();
            let backward = mn_b_rec(&b.first, &b.second, &cycles);
            prop_assert_eq!(forward, backward);
        }
    }
}
