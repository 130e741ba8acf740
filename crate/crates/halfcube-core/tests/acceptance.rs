//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them). Every
//! comparison is exact integer equality; runtime budgets are asserted
//! where the criterion states one.

use std::time::{Duration, Instant};

use halfcube_core::characters::{DLabel, VirtualCharacter};
use halfcube_core::complex::{face_census, ChainComplex};
use halfcube_core::homology::{betti, BettiMethod};
use halfcube_core::partition::Partition;
use halfcube_core::reps::{chi_d, restrict_chi_d_to_sn, exterior_power_constituent_present};
use halfcube_core::verify::{
    branching_suite, chain_suite, characters_suite, faces_suite, homology_suite,
    restriction_suite, theorem44_suite, ComplexStore, SuiteReport,
};

fn conclude(id: u32, name: &str, started: Instant, budget: Option<Duration>, pass: bool) {
    let elapsed = started.elapsed();
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:02} ({name}): {verdict} [{elapsed:.2?}]");
    assert!(pass, "criterion {id} ({name}) failed");
    if let Some(b) = budget {
        assert!(
            elapsed < b,
            "criterion {id} ({name}) exceeded its runtime budget: {elapsed:?} >= {b:?}"
        );
    }
}

fn suite_pass(report: &SuiteReport) -> bool {
    if !report.pass() {
        eprintln!(
            "{}",
            serde_json::to_string_pretty(&report.to_json()).unwrap()
        );
    }
    report.pass()
}

#[test]
fn criterion_01_face_census() {
    let t = Instant::now();
    let mut pass = suite_pass(&faces_suite(8).unwrap());
    // n = 4 totals, exactly.
    let census = face_census(4, 8).unwrap();
    let totals: Vec<(u128, u128)> = census.rows.iter().map(|r| (r.simplex, r.demicube)).collect();
    pass &= totals == vec![(8, 0), (24, 0), (32, 0), (8, 8), (0, 1)];
    conclude(1, "face census 4 <= n <= 8", t, Some(Duration::from_secs(10)), pass);
}

#[test]
fn criterion_02_chain_gates() {
    let t = Instant::now();
    let mut store = ComplexStore::new(6, None);
    let report = chain_suite(&mut store, 6).unwrap();
    conclude(2, "boundary and chain-map gates n in {4,5,6}", t, None, suite_pass(&report));
}

#[test]
fn criterion_03_homology_concentration() {
    let t = Instant::now();
    let mut store = ComplexStore::new(6, None);
    let mut pass = suite_pass(&homology_suite(&mut store, 6).unwrap());
    for (n, k, expected) in [(4, 3, 7u128), (5, 3, 31), (5, 4, 9)] {
        pass &= betti(n, k, BettiMethod::Recurrence).unwrap() == expected;
        pass &= betti(n, k, BettiMethod::Closed).unwrap() == expected;
    }
    conclude(3, "homology concentration n in {4,5,6}", t, Some(Duration::from_secs(300)), pass);
}

#[test]
fn criterion_04_betti_triple_agreement() {
    let t = Instant::now();
    let mut pass = true;
    for n in 0..=30usize {
        for k in 0..=n {
            let a = betti(n, k, BettiMethod::Recurrence).unwrap();
            let b = betti(n, k, BettiMethod::Closed).unwrap();
            pass &= a == b;
            if k >= 3 {
                pass &= a == betti(n, k, BettiMethod::Alternating).unwrap();
            }
        }
    }
    conclude(4, "Betti routes agree up to n = 30", t, Some(Duration::from_secs(1)), pass);
}

#[test]
fn criterion_05_homology_character_identity() {
    let t = Instant::now();
    let mut store = ComplexStore::new(6, None);
    let report = theorem44_suite(&mut store, 6).unwrap();
    let pass = suite_pass(&report);
    // The n=4 sweep must be exhaustive: 192 elements for each of k = 3, 4.
    let main_n4 = report
        .checks
        .iter()
        .find(|c| c.name.starts_with("homology character identity n=4"))
        .expect("n=4 identity check present");
    conclude(
        5,
        "homology character equals Hopf trace (n=4 exhaustive, n=5,6 class reps)",
        t,
        Some(Duration::from_secs(900)),
        pass && main_n4.checks == 2 * 192,
    );
}

#[test]
fn criterion_06_demicube_module_character() {
    let t = Instant::now();
    let mut store = ComplexStore::new(5, None);
    let report = theorem44_suite(&mut store, 5).unwrap();
    let mut pass = suite_pass(&report);
    let y_n4 = report
        .checks
        .iter()
        .find(|c| c.name.starts_with("demicube module character identity n=4"))
        .expect("n=4 demicube check present");
    pass &= y_n4.checks == 2 * 192;
    pass &= report
        .checks
        .iter()
        .any(|c| c.name.starts_with("demicube module character identity n=5") && c.pass);
    let oracle = report
        .checks
        .iter()
        .find(|c| c.name.starts_with("induced-character oracle n=4"))
        .expect("oracle check present");
    pass &= oracle.pass && oracle.checks == 2 * 192;
    conclude(6, "demicube module character and induced oracle", t, None, pass);
}

#[test]
fn criterion_07_top_degree_negation() {
    let t = Instant::now();
    let mut pass = true;
    for n in 4..=6usize {
        let cc = ChainComplex::build(n, 6).unwrap();
        for g in halfcube_core::signed::generators_d(n).unwrap() {
            let top = cc.action_matrix(&g, n as i64).unwrap();
            pass &= top.nrows() == 1 && top.entry(0, 0) == -1;
            pass &= halfcube_core::reps::hopf_homology_trace(&cc, n, &g).unwrap() == -1;
        }
    }
    conclude(7, "generators negate the top chain group and top homology", t, None, pass);
}

#[test]
fn criterion_08_branching_identity() {
    let t = Instant::now();
    let report = branching_suite(8).unwrap();
    conclude(8, "branching matches the Betti recurrence (4 <= n <= 8)", t, None, suite_pass(&report));
}

#[test]
fn criterion_09_symmetric_group_restriction() {
    let t = Instant::now();
    let mut store = ComplexStore::new(5, None);
    let mut pass = suite_pass(&restriction_suite(&mut store, 8).unwrap());
    // The stated exact output at n=4, k=3.
    let r = restrict_chi_d_to_sn(4, 3).unwrap();
    let mut expected = VirtualCharacter::zero(4);
    expected.add_term("2,1,1".parse::<Partition>().unwrap(), 2);
    expected.add_term("1,1,1,1".parse::<Partition>().unwrap(), 1);
    pass &= r.decomposition == expected;
    conclude(9, "restriction to the symmetric group (n <= 8)", t, None, pass);
}

#[test]
fn criterion_10_character_theory_self_tests() {
    let t = Instant::now();
    let report = characters_suite(8).unwrap();
    conclude(10, "character-theory self-tests", t, None, suite_pass(&report));
}

#[test]
fn criterion_11_multiplicity_free_up_to_12() {
    let t = Instant::now();
    let mut pass = true;
    for n in 4..=12usize {
        for k in 3..=n {
            let c = chi_d(n, k).unwrap();
            pass &= c.decomposition.is_multiplicity_free();
            pass &= exterior_power_constituent_present(n, k).unwrap();
            let exterior = DLabel::unsplit(Partition::column(k), Partition::row(n - k)).unwrap();
            pass &= c.decomposition.multiplicity(&exterior) == 1;
        }
    }
    conclude(11, "multiplicity freeness and exterior-power constituent (n <= 12)", t, None, pass);
}
